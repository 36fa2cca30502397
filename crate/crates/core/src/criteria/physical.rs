//! Radial criteria for weakly symmetric graphs with the physical
//! Laplacian.

use crate::asymptotic::Sign;
use crate::error::{Error, Result};
use crate::radial::RadialProfile;
use crate::sequence::{RadialExpr, TailedSequence};
use crate::verdict::{Caveat, Certificate, Region, Status, TheoremTag, Verdict};

use super::oy::OyViolationCertificate;
use super::series::{judge_sequence, SeriesJudgment, SeriesMethod, SeriesStatus};
use super::{eventual_sign, first_good_radius, le, sign_text, RadialFunction};

fn positive_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// Outcome of checking `e(r) <= 0` (or the strict `e(r) > 0` variant) on a
/// closed-form tail.
fn tail_outcome(sign: Option<Sign>, want_nonpositive: bool) -> std::result::Result<(), String> {
    match (sign, want_nonpositive) {
        (Some(Sign::Negative | Sign::Zero), true) | (Some(Sign::Positive), false) => Ok(()),
        (Some(s), _) => Err(format!("the inequality fails along the tail (eventual sign {})", sign_text(Some(s)))),
        (None, _) => Err("the eventual sign along the tail is undecided".into()),
    }
}

/// Completeness from a divergent series `a` with
/// `m_+ a_{r+1} - m_- a_r <= lambda sum_{n <= r} a_n` for large `r`.
pub fn series_completeness_test(
    p: &RadialProfile,
    a: &TailedSequence,
    lambda: f64,
) -> Result<Verdict> {
    positive_lambda(lambda)?;
    let judgment = judge_sequence(a)?;
    if !judgment.is_divergent() {
        return Err(Error::DivergenceNotEstablished(judgment.to_string()));
    }
    let h = p.horizon();
    let mut acc = Vec::with_capacity(h + 1);
    let mut s = 0.0;
    for r in 0..=h {
        s += a.get(r).unwrap_or(0.0);
        acc.push(s);
    }
    let lhs = |r: usize| -> f64 {
        let up = p.gplus()[r] as f64 * a.get(r + 1).unwrap_or(0.0);
        let down = p.gminus()[r] as f64 * a.get(r).unwrap_or(0.0);
        up - down
    };
    let r0 = first_good_radius(h, |r| le(lhs(r), lambda * acc[r]));
    let cert = Certificate::new(TheoremTag::Series)
        .param("lambda", lambda)
        .param("r0", r0)
        .param("a", a.head.clone());
    let (Some(gp), Some(gm), Some(ae)) = (p.gplus_expr(), p.gminus_expr(), a.as_expr()) else {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(h)),
            "profile has no closed-form tail",
        ));
    };
    let e = gp
        .times(ae.clone().shifted(1))
        .minus(gm.times(ae.clone()))
        .minus(ae.partial_sum().times(RadialExpr::Const(lambda)));
    if let Err(why) = tail_outcome(eventual_sign(&e)?, true) {
        return Ok(Verdict::unknown(cert.region(Region::Radius(h)), why));
    }
    Ok(Verdict::complete(cert.region(Region::RadiusWithTail(h))).note(judgment.to_string()))
}

fn reciprocals(f: &TailedSequence) -> Result<TailedSequence> {
    if let Some(i) = f.head.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NegativeFunction(format!("f({i}) = {} is not positive", f.head[i])));
    }
    Ok(TailedSequence::new(
        f.head.iter().map(|v| 1.0 / v).collect(),
        f.tail.clone().map(RadialExpr::recip),
    ))
}

/// Completeness when `m_+ - m_- <= f(r)` for an increasing `f` with
/// `sum 1/f = infinity`.
pub fn curvature_completeness_test(p: &RadialProfile, f: &TailedSequence) -> Result<Verdict> {
    if let Some(r) = (1..f.head.len()).find(|&r| f.head[r] < f.head[r - 1]) {
        return Err(Error::NonMonotone {
            radius: r,
            value: f.head[r],
            previous: f.head[r - 1],
        });
    }
    let judgment = judge_sequence(&reciprocals(f)?)?;
    if !judgment.is_divergent() {
        return Err(Error::DivergenceNotEstablished(judgment.to_string()));
    }
    if let Some(t) = &f.tail {
        if eventual_sign(&t.clone().shifted(1).minus(t.clone()))? == Some(Sign::Negative) {
            return Err(Error::param("f must be nondecreasing"));
        }
    }
    let h = p.horizon();
    let fv = |r: usize| f.get(r).unwrap_or(f64::INFINITY);
    let r0 = first_good_radius(h, |r| le(p.gplus()[r] as f64 - p.gminus()[r] as f64, fv(r)));
    let cert = Certificate::new(TheoremTag::Curvature)
        .param("r0", r0)
        .param("f", f.head.clone());
    let (Some(gp), Some(gm), Some(fe)) = (p.gplus_expr(), p.gminus_expr(), f.as_expr()) else {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(h)),
            "profile has no closed-form tail",
        ));
    };
    let e = gp.minus(gm).minus(fe);
    if let Err(why) = tail_outcome(eventual_sign(&e)?, true) {
        return Ok(Verdict::unknown(cert.region(Region::Radius(h)), why));
    }
    Ok(Verdict::complete(cert.region(Region::RadiusWithTail(h))).note(judgment.to_string()))
}

/// Completeness when `sum_r 1/K_+(r)` diverges, `K_+(r) = g_+(r)`.
pub fn kplus_series_test(p: &RadialProfile) -> Result<Verdict> {
    let h = p.horizon();
    if let Some(r) = p.gplus().iter().position(|&g| g == 0) {
        return Err(Error::InconsistentProfile {
            radius: r,
            reason: "K+ vanishes, the graph is finite".into(),
        });
    }
    let terms = TailedSequence::new(
        p.gplus().iter().map(|&g| 1.0 / g as f64).collect(),
        p.gplus_expr().map(RadialExpr::recip),
    );
    let judgment = judge_sequence(&terms)?;
    let cert = Certificate::new(TheoremTag::KPlus).param("partial_sum", judgment.partial_sum);
    Ok(series_verdict(cert, &judgment, h, SeriesStatus::Divergent, Status::Complete))
}

/// Maps a series judgment to a verdict: the `decisive` outcome yields
/// `status`, the opposite one decides nothing.
fn series_verdict(
    cert: Certificate,
    j: &SeriesJudgment,
    h: usize,
    decisive: SeriesStatus,
    status: Status,
) -> Verdict {
    let region = if j.method == SeriesMethod::ExactTail {
        Region::RadiusWithTail(h)
    } else {
        Region::Radius(h)
    };
    let cert = cert.region(region);
    let v = if j.status == decisive {
        match status {
            Status::Complete => Verdict::complete(cert),
            Status::Incomplete => Verdict::incomplete(cert),
            Status::Unknown => Verdict::unknown(cert, "undecided"),
        }
    } else if j.status == SeriesStatus::Inconclusive {
        Verdict::unknown(cert, "series undecided").caveat(Caveat::HeuristicSeries)
    } else {
        Verdict::unknown(cert, "the series decides nothing in this direction")
    };
    v.note(j.to_string())
}

/// Incompleteness from a summable `a` with `m_+ a_{r+1} - m_- a_r > c`
/// for every `r > n0`.
pub fn incompleteness_series_test(
    p: &RadialProfile,
    a: &TailedSequence,
    c: f64,
    n0: usize,
) -> Result<Verdict> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::param(format!("c must be positive, got {c}")));
    }
    let judgment = judge_sequence(a)?;
    if !judgment.is_convergent() {
        return Err(Error::ConvergenceNotEstablished(judgment.to_string()));
    }
    let h = p.horizon();
    let gap = |r: usize| {
        p.gplus()[r] as f64 * a.get(r + 1).unwrap_or(0.0) - p.gminus()[r] as f64 * a.get(r).unwrap_or(0.0)
    };
    let total = a.convergent_sum()?;
    let head: f64 = (0..=n0).map(|n| a.get(n).unwrap_or(0.0)).sum();
    let cert = Certificate::new(TheoremTag::IncompletenessSeries)
        .param("c", c)
        .param("n0", n0)
        .param("alpha", total - head)
        .param("a", a.head.clone());
    if let Some(r) = (n0 + 1..=h).find(|&r| !(gap(r) > c)) {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(r.saturating_sub(1))),
            format!("gap {} at radius {r} does not exceed c", gap(r)),
        ));
    }
    let (Some(gp), Some(gm), Some(ae)) = (p.gplus_expr(), p.gminus_expr(), a.as_expr()) else {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(h)),
            "profile has no closed-form tail",
        ));
    };
    let e = gp
        .times(ae.clone().shifted(1))
        .minus(gm.times(ae))
        .minus(RadialExpr::Const(c));
    if let Err(why) = tail_outcome(eventual_sign(&e)?, false) {
        return Ok(Verdict::unknown(cert.region(Region::Radius(h)), why));
    }
    Ok(Verdict::incomplete(cert.region(Region::RadiusWithTail(h))).note(judgment.to_string()))
}

/// `eta(r) = g_-(r) / g_+(r)` for `r >= 1`, with `eta(0) = 0`.
fn eta(p: &RadialProfile) -> Result<TailedSequence> {
    let mut head = vec![0.0];
    for r in 1..=p.horizon() {
        if p.gplus()[r] == 0 {
            return Err(Error::InconsistentProfile {
                radius: r,
                reason: "g+ vanishes".into(),
            });
        }
        head.push(p.gminus()[r] as f64 / p.gplus()[r] as f64);
    }
    let tail = match (p.gminus_expr(), p.gplus_expr()) {
        (Some(gm), Some(gp)) => Some(gm.over(gp)),
        _ => None,
    };
    Ok(TailedSequence::new(head, tail))
}

/// Incompleteness when `sum_{r >= 1} g_-(r)/g_+(r) < infinity`.
pub fn ratio_curvature_test(p: &RadialProfile) -> Result<Verdict> {
    let judgment = judge_sequence(&eta(p)?)?;
    let cert =
        Certificate::new(TheoremTag::RatioCurvature).param("partial_sum", judgment.partial_sum);
    Ok(series_verdict(
        cert,
        &judgment,
        p.horizon(),
        SeriesStatus::Convergent,
        Status::Incomplete,
    ))
}

/// Explicit violating function for a profile where the ratio series
/// converges: `f(r) = sum_{l=1}^{r-1} eta(l)` with `c = 1/2` and `alpha`
/// cut between two tail sums below `1/2`.
pub fn ratio_curvature_witness(p: &RadialProfile) -> Result<OyViolationCertificate> {
    let d = eta(p)?;
    let judgment = judge_sequence(&d)?;
    if !judgment.is_convergent() {
        return Err(Error::ConvergenceNotEstablished(judgment.to_string()));
    }
    let total = d.convergent_sum()?;
    // T(r) = sum_{l >= r} eta(l); pick the first r >= 2 with T(r) < 1/2.
    let mut t = total;
    let mut r = 0;
    loop {
        let next = t - d.get(r).unwrap_or(0.0);
        if r >= 2 && t < 0.5 {
            let alpha = 0.5 * (t + next.max(0.0));
            // Omega_alpha is the complement of the ball of radius r
            let alpha = if next > 0.0 { alpha } else { t };
            return Ok(OyViolationCertificate {
                function: RadialFunction::new(0.0, d),
                alpha,
                c: 0.5,
            });
        }
        t = next;
        r += 1;
        if r > 10_000_000 {
            return Err(Error::Internal("ratio tail never drops below 1/2".into()));
        }
    }
}

/// Completeness exactly when `sum_r V(r) / (g_+(r) S(r))` diverges.
pub fn weakly_symmetric_test(p: &RadialProfile) -> Result<Verdict> {
    if let Some(r) = p.gplus().iter().position(|&g| g == 0) {
        return Err(Error::InconsistentProfile {
            radius: r,
            reason: "g+ vanishes, the graph is finite".into(),
        });
    }
    let vol = p.volumes();
    let head = (0..=p.horizon())
        .map(|r| vol[r] as f64 / (p.gplus()[r] as f64 * p.sizes()[r] as f64))
        .collect();
    let tail = match (p.volume_expr(), p.gplus_expr(), p.size_expr()) {
        (Some(v), Some(gp), Some(s)) => Some(v.over(gp.times(s))),
        _ => None,
    };
    let judgment = judge_sequence(&TailedSequence::new(head, tail))?;
    let mut cert =
        Certificate::new(TheoremTag::WeaklySymmetric).param("partial_sum", judgment.partial_sum);
    if let Some(g) = judgment.leading {
        cert = cert.param("term_growth", g.to_string());
    }
    let h = p.horizon();
    let region = if judgment.method == SeriesMethod::ExactTail {
        Region::RadiusWithTail(h)
    } else {
        Region::Radius(h)
    };
    let cert = cert.region(region);
    let v = match judgment.status {
        SeriesStatus::Divergent => Verdict::complete(cert),
        SeriesStatus::Convergent => Verdict::incomplete(cert),
        SeriesStatus::Inconclusive => {
            Verdict::unknown(cert, "series undecided").caveat(Caveat::HeuristicSeries)
        }
    };
    Ok(v.note(judgment.to_string()))
}
