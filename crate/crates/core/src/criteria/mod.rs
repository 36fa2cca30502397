//! Analytic completeness and incompleteness criteria and certificate
//! checkers.

mod khasminskii;
mod oy;
mod phi;
mod physical;
mod series;

pub use khasminskii::{khasminskii_check, GammaInput};
pub use oy::{oy_violation_check, OyInput, OyViolationCertificate};
pub use phi::{phi_khasminskii_check, phi_on_grid, phi_transform, PhiTable, SampledFunction};
pub use physical::{
    curvature_completeness_test, incompleteness_series_test, kplus_series_test,
    ratio_curvature_test, ratio_curvature_witness, series_completeness_test,
    weakly_symmetric_test,
};
pub use series::{
    judge_sequence, series_divergence_judge, SeriesJudgment, SeriesMethod, SeriesStatus,
};

use crate::asymptotic::Sign;
use crate::error::Result;
use crate::radial::RadialProfile;
use crate::sequence::{RadialExpr, TailedSequence};

/// Relative slack for non-strict inequalities checked in floating point.
pub(crate) const INEQ_TOL: f64 = 1e-12;

/// Radial function `f(r) = start + sum_{l < r} d(l)` given by its
/// increments.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub start: f64,
    pub increments: TailedSequence,
}

impl RadialFunction {
    pub fn new(start: f64, increments: TailedSequence) -> Self {
        RadialFunction { start, increments }
    }

    /// `f(r) = r`.
    pub fn radius(horizon: usize) -> Self {
        RadialFunction::new(0.0, TailedSequence::from_expr(RadialExpr::Const(1.0), horizon))
    }

    /// `f(r) = sum_{n <= r} a_n`.
    pub fn partial_sums(a: &TailedSequence) -> Self {
        let head = a.head.iter().skip(1).copied().collect();
        let tail = a.tail.clone().map(|t| t.shifted(1));
        RadialFunction::new(a.head.first().copied().unwrap_or(0.0), TailedSequence::new(head, tail))
    }

    pub fn increment(&self, l: usize) -> Option<f64> {
        self.increments.get(l)
    }

    pub fn value(&self, r: usize) -> Option<f64> {
        let mut v = self.start;
        for l in 0..r {
            v += self.increment(l)?;
        }
        Some(v)
    }

    /// Values `f(0..=horizon)`.
    pub fn values(&self, horizon: usize) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(horizon + 1);
        let mut v = self.start;
        out.push(v);
        for l in 0..horizon {
            v += self.increment(l)?;
            out.push(v);
        }
        Some(out)
    }

    /// Radial Laplacian `g_-(r) d(r-1) - g_+(r) d(r)` on a weakly symmetric
    /// graph.
    pub fn laplacian(&self, p: &RadialProfile, r: usize) -> Option<f64> {
        let down = if r == 0 {
            0.0
        } else {
            p.gminus_at(r)? * self.increment(r - 1)?
        };
        Some(down - p.gplus_at(r)? * self.increment(r)?)
    }

    pub fn value_expr(&self) -> Option<RadialExpr> {
        let d = self.increments.as_expr()?;
        Some(RadialExpr::Const(self.start).plus(d.partial_sum().shifted(-1)))
    }

    pub fn laplacian_expr(&self, p: &RadialProfile) -> Option<RadialExpr> {
        let d = self.increments.as_expr()?;
        let gm = p.gminus_expr()?;
        let gp = p.gplus_expr()?;
        Some(gm.times(d.clone().shifted(-1)).minus(gp.times(d)))
    }
}

/// Eventual sign of a closed-form expression, `None` when undecided.
pub(crate) fn sign_text(s: Option<Sign>) -> &'static str {
    match s {
        Some(Sign::Negative) => "negative",
        Some(Sign::Zero) => "zero",
        Some(Sign::Positive) => "positive",
        None => "undetermined",
    }
}

pub(crate) fn eventual_sign(e: &RadialExpr) -> Result<Option<Sign>> {
    Ok(e.asymptotic()?.sign())
}

/// Smallest `r0` such that `holds(r)` for every `r0 <= r <= horizon`
/// (`horizon + 1` when it fails at the horizon itself).
pub(crate) fn first_good_radius(horizon: usize, holds: impl Fn(usize) -> bool) -> usize {
    let mut r0 = horizon + 1;
    while r0 > 0 && holds(r0 - 1) {
        r0 -= 1;
    }
    r0
}

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b + INEQ_TOL * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_spherically_symmetric, SphereRule};

    #[test]
    fn radial_function_values() {
        let f = RadialFunction::radius(10);
        assert_eq!(f.value(7), Some(7.0));
        assert_eq!(f.value_expr().unwrap().eval(30), 30.0);
        let a = TailedSequence::from_expr(RadialExpr::exp(0.5), 4);
        let s = RadialFunction::partial_sums(&a);
        assert_eq!(s.value(0), Some(1.0));
        assert_eq!(s.value(2), Some(1.75));
    }

    #[test]
    fn radial_laplacian_of_radius() {
        // Delta r = m_- - m_+
        let p = build_spherically_symmetric(&SphereRule::Polynomial(3.0), 6).unwrap();
        let f = RadialFunction::radius(6);
        for r in 0..=6 {
            let want = p.gminus()[r] as f64 - p.gplus()[r] as f64;
            assert_eq!(f.laplacian(&p, r), Some(want));
        }
        let e = f.laplacian_expr(&p).unwrap();
        assert_eq!(e.eval(10), 1000.0 - 1728.0);
    }

    #[test]
    fn first_good() {
        assert_eq!(first_good_radius(5, |r| r >= 2), 2);
        assert_eq!(first_good_radius(5, |_| true), 0);
        assert_eq!(first_good_radius(5, |r| r < 5), 6);
    }
}
