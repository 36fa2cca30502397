//! Checker for Khas'minskii-type completeness certificates
//! `Delta gamma + lambda gamma >= 0` outside a set of bounded degree.

use crate::asymptotic::Sign;
use crate::error::{Error, Result};
use crate::graph::{apply_laplacian, VertexId};
use crate::radial::RadialProfile;
use crate::sequence::RadialExpr;
use crate::verdict::{Caveat, Certificate, Region, TheoremTag, Verdict};
use crate::Graph;

use super::series::{judge_sequence, SeriesStatus};
use super::{eventual_sign, le, sign_text, RadialFunction};

const TAIL_SCAN: usize = 1000;

pub enum GammaInput<'a> {
    /// Radial `gamma` with exceptional set the ball of radius `a_radius`.
    Profile {
        profile: &'a RadialProfile,
        gamma: &'a RadialFunction,
        a_radius: usize,
    },
    /// Per-vertex `gamma` with an explicit exceptional vertex set.
    Window {
        graph: &'a Graph,
        gamma: &'a [f64],
        a: &'a [VertexId],
    },
}

pub fn khasminskii_check(input: GammaInput<'_>, lambda: f64) -> Result<Verdict> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param(format!("lambda must be positive, got {lambda}")));
    }
    match input {
        GammaInput::Profile {
            profile,
            gamma,
            a_radius,
        } => check_profile(profile, gamma, lambda, a_radius),
        GammaInput::Window { graph, gamma, a } => check_window(graph, gamma, lambda, a),
    }
}

/// Checks `Delta gamma + lambda gamma >= 0` at radii `a_radius < r <= upto`
/// and returns the smallest ball outside of which it holds.
pub(crate) fn radial_head_check(
    p: &RadialProfile,
    gamma: &RadialFunction,
    lambda: f64,
    a_radius: usize,
    upto: usize,
) -> Result<usize> {
    let mut value = gamma.start;
    let mut effective = a_radius;
    for r in 0..=upto {
        let lap = gamma
            .laplacian(p, r)
            .ok_or_else(|| Error::param(format!("gamma has no increment at radius {r}")))?;
        if r > a_radius && !le(0.0, lap + lambda * value) {
            effective = r;
        }
        value += gamma.increment(r).unwrap_or(0.0);
    }
    Ok(effective)
}

fn max_degree_on_ball(p: &RadialProfile, radius: usize) -> Option<f64> {
    (0..=radius).map(|r| p.degree(r)).try_fold(0.0f64, |m, d| Some(m.max(d?)))
}

fn check_profile(
    p: &RadialProfile,
    gamma: &RadialFunction,
    lambda: f64,
    a_radius: usize,
) -> Result<Verdict> {
    let h = p.horizon();
    if !(gamma.start >= 0.0) {
        return Err(Error::NegativeFunction(format!("gamma(0) = {}", gamma.start)));
    }
    let inc = &gamma.increments;
    let cert = Certificate::new(TheoremTag::Khasminskii).param("lambda", lambda);
    if let Some(r) = (0..=h).find(|&r| inc.get(r).is_some_and(|v| v < 0.0)) {
        return Ok(Verdict::unknown(
            cert,
            format!("gamma decreases after radius {r}, growth condition not established"),
        ));
    }
    let judgment = judge_sequence(inc)?;
    match judgment.status {
        SeriesStatus::Convergent => return Err(Error::BoundedFunction(judgment.to_string())),
        SeriesStatus::Inconclusive if inc.has_tail() => {
            return Ok(Verdict::unknown(cert, format!("growth of gamma undecided: {judgment}")));
        }
        SeriesStatus::Inconclusive if inc.head.iter().all(|v| *v == 0.0) => {
            return Err(Error::BoundedFunction("gamma is constant".into()));
        }
        _ => {}
    }
    if let Some(gp) = p.gplus_expr() {
        let deg = gp.plus(p.gminus_expr().expect("tail present"));
        match deg.asymptotic()?.is_bounded() {
            Some(true) => {
                return Err(Error::BoundedDegree(
                    "checked on the closed-form tail".into(),
                ))
            }
            Some(false) => {}
            None => return Ok(Verdict::unknown(cert, "degree growth along the tail undecided")),
        }
    }

    let mut effective = radial_head_check(p, gamma, lambda, a_radius, h)?;
    let tail_expr = match (gamma.value_expr(), gamma.laplacian_expr(p)) {
        (Some(v), Some(l)) => Some(l.plus(v.times(RadialExpr::Const(lambda)))),
        _ => None,
    };
    let mut horizon_limited = tail_expr.is_none();
    if let Some(e) = &tail_expr {
        match eventual_sign(e)? {
            Some(Sign::Positive | Sign::Zero) => {}
            s => {
                return Ok(Verdict::unknown(
                    cert.param("A_radius", effective).region(Region::Radius(h)),
                    format!("Delta gamma + lambda gamma has eventual sign {} along the tail", sign_text(s)),
                ))
            }
        }
        // finitely many failures past the horizon only enlarge the ball A
        for r in h + 1..=h + TAIL_SCAN {
            let v = e.eval(r as i64);
            if !v.is_finite() {
                break;
            }
            if !le(0.0, v) {
                effective = r;
                if r == h + TAIL_SCAN {
                    horizon_limited = true;
                }
            }
        }
    }
    let bound = max_degree_on_ball(p, effective)
        .ok_or_else(|| Error::Internal("degree past the table".into()))?;
    let region = if horizon_limited {
        Region::Radius(h)
    } else {
        Region::RadiusWithTail(h)
    };
    let cert = cert
        .param("A_radius", effective)
        .param("A_degree_bound", bound)
        .region(region);
    let mut v = Verdict::complete(cert);
    if effective > a_radius {
        v = v.note(format!("exceptional ball enlarged from radius {a_radius} to {effective}"));
    }
    if horizon_limited {
        v = v
            .caveat(Caveat::HorizonLimited)
            .note("no tail argument; checked up to the horizon only");
    }
    Ok(v)
}

fn check_window(g: &Graph, gamma: &[f64], lambda: f64, a: &[VertexId]) -> Result<Verdict> {
    if gamma.len() != g.len() {
        return Err(Error::Mismatch(format!(
            "{} values for {} vertices",
            gamma.len(),
            g.len()
        )));
    }
    if let Some(i) = gamma.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::NegativeFunction(format!("gamma({i}) = {}", gamma[i])));
    }
    let (lo, hi) = gamma
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if g.len() > 1 && lo == hi {
        return Err(Error::BoundedFunction("gamma is constant".into()));
    }
    for &x in a {
        if !g.contains(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    let mut in_a = vec![false; g.len()];
    for &x in a {
        in_a[x.index()] = true;
    }
    let cert = Certificate::new(TheoremTag::Khasminskii)
        .param("lambda", lambda)
        .param("A_size", a.len());
    let checked: Vec<VertexId> = g.interior().filter(|x| !in_a[x.index()]).collect();
    let bad: Vec<VertexId> = checked
        .iter()
        .copied()
        .filter(|&x| {
            apply_laplacian(g, gamma, x).map_or(true, |l| !le(0.0, l + lambda * gamma[x.index()]))
        })
        .collect();
    if let Some(x) = bad.first() {
        return Ok(Verdict::unknown(
            cert,
            format!(
                "Delta gamma + lambda gamma < 0 at {} vertices, first {x}",
                bad.len()
            ),
        ));
    }
    let bound = a.iter().map(|&x| g.degree(x)).fold(0.0, f64::max);
    let mut v = Verdict::complete(
        cert.param("A_degree_bound", bound)
            .region(Region::Vertices(checked)),
    )
    .caveat(Caveat::HorizonLimited)
    .note("checked on the window interior only");
    if a.iter().any(|&x| g.is_frontier(x)) {
        v = v.note("A meets the frontier; its degree bound is a lower bound");
    }
    Ok(v)
}
