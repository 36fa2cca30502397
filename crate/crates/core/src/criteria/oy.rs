//! Checker for functions that violate the weak Omori-Yau maximum
//! principle, which certify stochastic incompleteness.

use crate::asymptotic::Sign;
use crate::error::{Error, Result};
use crate::graph::{apply_laplacian, VertexId};
use crate::radial::RadialProfile;
use crate::sequence::RadialExpr;
use crate::verdict::{Caveat, Certificate, Region, TheoremTag, Verdict};
use crate::Graph;

use super::series::judge_sequence;
use super::{eventual_sign, le, sign_text, RadialFunction};

/// Radii past the horizon that are evaluated explicitly before the tail
/// argument takes over.
const TAIL_SCAN: usize = 1000;

/// Largest `n` in the degree sanity check.
const MAX_SANITY_N: usize = 64;

/// A bounded function `f >= 0` with `Delta f <= -c` on
/// `Omega_alpha = {f > f* - alpha}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OyViolationCertificate {
    pub function: RadialFunction,
    pub alpha: f64,
    pub c: f64,
}

pub enum OyInput<'a> {
    Profile {
        profile: &'a RadialProfile,
        f: &'a RadialFunction,
    },
    /// `f` is a per-vertex table; `f_sup` is the claimed supremum over the
    /// whole graph.
    Window {
        graph: &'a Graph,
        f: &'a [f64],
        f_sup: f64,
    },
}

pub fn oy_violation_check(input: OyInput<'_>, alpha: f64, c: f64) -> Result<Verdict> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::param(format!("c must be positive, got {c}")));
    }
    let cert = Certificate::new(TheoremTag::OyViolation)
        .param("alpha", alpha)
        .param("c", c);
    match input {
        OyInput::Profile { profile, f } => check_profile(profile, f, alpha, c, cert),
        OyInput::Window { graph, f, f_sup } => check_window(graph, f, f_sup, alpha, c, cert),
    }
}

fn check_profile(
    p: &RadialProfile,
    f: &RadialFunction,
    alpha: f64,
    c: f64,
    cert: Certificate,
) -> Result<Verdict> {
    let h = p.horizon();
    if !(f.start >= 0.0) {
        return Err(Error::NegativeFunction(format!("f(0) = {}", f.start)));
    }
    let d = &f.increments;
    let values = f
        .values(h + 1)
        .ok_or_else(|| Error::param("f has no value past its table"))?;
    if let Some(r) = values.iter().position(|v| *v < 0.0) {
        return Err(Error::NegativeFunction(format!("f({r}) = {}", values[r])));
    }
    if let Some(r) = (0..=h).find(|&r| d.get(r).is_some_and(|v| v < 0.0)) {
        return Ok(Verdict::unknown(
            cert,
            format!("f decreases after radius {r}; only monotone radial functions are checked"),
        ));
    }
    let Some(tail) = &d.tail else {
        return Ok(
            Verdict::unknown(cert, "f has no closed-form tail, so f* is unknown")
                .caveat(Caveat::HeuristicSeries),
        );
    };
    let judgment = judge_sequence(d)?;
    if judgment.is_divergent() {
        return Err(Error::UnboundedFunction(judgment.to_string()));
    }
    if !judgment.is_convergent() {
        return Ok(Verdict::unknown(cert, format!("f* undecided: {judgment}")));
    }
    match eventual_sign(tail)? {
        Some(Sign::Negative) => {
            return Ok(Verdict::unknown(cert, "f eventually decreases"));
        }
        Some(Sign::Zero) => {
            return Ok(Verdict::unknown(cert, "f is eventually constant and attains f*"));
        }
        _ => {}
    }
    // T(r) = f* - f(r), accumulated backwards to avoid cancellation
    let lap_expr = f.laplacian_expr(p);
    let finite = |r: usize| {
        d.get(r).is_some_and(f64::is_finite)
            && lap_expr.as_ref().is_none_or(|e| e.eval(r as i64).is_finite())
    };
    let scan_end = (h + 1..=h + TAIL_SCAN)
        .find(|&r| !finite(r))
        .map_or(h + TAIL_SCAN, |r| r - 1);
    let beyond = d.tail_sum_from(scan_end + 1)?;
    let mut gap = vec![0.0; scan_end + 2];
    gap[scan_end + 1] = beyond;
    for r in (0..=scan_end).rev() {
        gap[r] = gap[r + 1] + d.get(r).unwrap_or(0.0);
    }
    let f_sup = f.start + gap[0];
    let cert = cert.param("f_sup", f_sup);
    if let Some(r) = (0..=h + 1).find(|&r| !(gap[r] > 0.0)) {
        return Ok(Verdict::unknown(
            cert,
            format!("f attains its supremum at radius {r}"),
        ));
    }

    let lap = |r: usize| f.laplacian(p, r);
    for r in (0..=h).filter(|&r| gap[r] < alpha) {
        let v = lap(r).ok_or_else(|| Error::Internal("missing increment".into()))?;
        if !le(v, -c) {
            return Ok(Verdict::unknown(
                cert.region(Region::Radius(r.saturating_sub(1))),
                format!("Delta f({r}) = {v} exceeds -c on Omega_alpha"),
            ));
        }
    }
    if let Some(why) = degree_sanity(p, &gap, h, alpha, c) {
        return Ok(Verdict::unknown(cert.region(Region::Radius(h)), why));
    }

    let Some(lap_expr) = lap_expr else {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(h)),
            "profile has no closed-form tail",
        ));
    };
    match eventual_sign(&lap_expr.clone().plus(RadialExpr::Const(c)))? {
        Some(Sign::Negative | Sign::Zero) => {}
        s => {
            return Ok(Verdict::unknown(
                cert.region(Region::Radius(h)),
                format!("Delta f + c has eventual sign {} along the tail", sign_text(s)),
            ))
        }
    }
    // radii past the horizon where the bound still fails shrink alpha
    let last_bad = (h + 1..=scan_end)
        .filter(|&r| gap[r] < alpha)
        .filter(|&r| !le(lap_expr.eval(r as i64), -c))
        .last();
    let mut v = Verdict::incomplete(cert.region(Region::RadiusWithTail(h)));
    match last_bad {
        Some(r) if r == scan_end && scan_end == h + TAIL_SCAN => {
            v = Verdict::unknown(
                v.certificate,
                "Delta f + c is eventually nonpositive but not yet at the end of the scan",
            )
            .caveat(Caveat::HorizonLimited);
        }
        Some(r) => {
            v.certificate = v.certificate.param("effective_alpha", gap[r + 1]);
            v = v.note(format!(
                "the bound fails at radius {r} past the horizon; it holds on Omega_alpha' with alpha' = {}",
                gap[r + 1]
            ));
        }
        None => {}
    }
    Ok(v.note(judgment.to_string()))
}

/// Degree necessarily exceeds `n` on `Omega_{alpha'/n}`; a violation means
/// the certificate is inconsistent. `c/2` keeps the bound strict.
fn degree_sanity(p: &RadialProfile, gap: &[f64], h: usize, alpha: f64, c: f64) -> Option<String> {
    let a = alpha.min(0.5 * c);
    for n in 1..=MAX_SANITY_N {
        for r in (0..=h).filter(|&r| gap[r] < a / n as f64) {
            let deg = p.degree(r)?;
            if !(deg > n as f64) {
                return Some(format!(
                    "Deg({r}) = {deg} but radius {r} lies in Omega_(alpha'/{n})"
                ));
            }
        }
    }
    None
}

fn check_window(
    g: &Graph,
    f: &[f64],
    f_sup: f64,
    alpha: f64,
    c: f64,
    cert: Certificate,
) -> Result<Verdict> {
    if f.len() != g.len() {
        return Err(Error::Mismatch(format!(
            "{} values for {} vertices",
            f.len(),
            g.len()
        )));
    }
    if let Some(i) = f.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::NegativeFunction(format!("f({i}) = {}", f[i])));
    }
    if !f_sup.is_finite() {
        return Err(Error::UnboundedFunction("f_sup is not finite".into()));
    }
    let max = f.iter().copied().fold(0.0, f64::max);
    if max > f_sup {
        return Err(Error::param(format!("f reaches {max} above f_sup = {f_sup}")));
    }
    let cert = cert.param("f_sup", f_sup);
    if let Some(i) = f.iter().position(|v| *v == f_sup) {
        return Ok(Verdict::unknown(
            cert,
            format!("f attains its supremum at vertex {i}"),
        ));
    }
    let omega: Vec<VertexId> = g.interior().filter(|x| f[x.index()] > f_sup - alpha).collect();
    for &x in &omega {
        let v = apply_laplacian(g, f, x)?;
        if !le(v, -c) {
            return Ok(Verdict::unknown(
                cert,
                format!("Delta f({x}) = {v} exceeds -c on Omega_alpha"),
            ));
        }
    }
    let a = alpha.min(0.5 * c);
    for n in 1..=MAX_SANITY_N {
        if let Some(x) = omega
            .iter()
            .find(|x| f_sup - f[x.index()] < a / n as f64 && !(g.degree(**x) > n as f64))
        {
            return Ok(Verdict::unknown(
                cert,
                format!("Deg({x}) = {} but it lies in Omega_(alpha'/{n})", g.degree(*x)),
            ));
        }
    }
    let unchecked = g.frontier().filter(|x| f[x.index()] > f_sup - alpha).count();
    Ok(Verdict::unknown(
        cert.region(Region::Vertices(omega)),
        format!(
            "the bound holds on the window; {unchecked} frontier vertices and everything beyond are unverified"
        ),
    )
    .caveat(Caveat::HorizonLimited))
}
