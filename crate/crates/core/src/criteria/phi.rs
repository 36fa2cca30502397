//! The transform `phi(r) = exp(int_0^r ds / (f(s) + s))` that turns a
//! solution of `Delta sigma + f(sigma) >= 0` into a Khas'minskii function.

use crate::error::{Error, Result};
use crate::radial::RadialProfile;
use crate::sequence::{RadialExpr, TailedSequence};
use crate::verdict::{Caveat, Certificate, Region, TheoremTag, Verdict};

use super::khasminskii::radial_head_check;
use super::series::{judge_sequence, SeriesJudgment};
use super::{le, RadialFunction};

/// Largest quadrature step.
const MAX_STEP: f64 = 0.125;
const QUAD_TOL: f64 = 1e-12;
const MAX_LEVELS: usize = 20;

/// Function on `[0, step * (len - 1)]` given by samples and linear
/// interpolation, with an optional closed form at integers beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub step: f64,
    pub values: Vec<f64>,
    pub tail: Option<RadialExpr>,
}

impl SampledFunction {
    pub fn new(step: f64, values: Vec<f64>, tail: Option<RadialExpr>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::param("sample step must be positive"));
        }
        if values.len() < 2 {
            return Err(Error::param("need at least two samples"));
        }
        if let Some(i) = values.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::NegativeFunction(format!(
                "f is not positive at sample {i} ({})",
                values[i]
            )));
        }
        if let Some(i) = (1..values.len()).find(|&i| values[i] < values[i - 1]) {
            return Err(Error::NonMonotone {
                radius: i,
                value: values[i],
                previous: values[i - 1],
            });
        }
        Ok(SampledFunction { step, values, tail })
    }

    /// Samples a closed form at spacing `step` on `[0, end]`, keeping it as
    /// the tail.
    pub fn from_expr_at(expr: &RadialExpr, end: usize) -> Result<Self> {
        let values = (0..=end as i64).map(|n| expr.eval(n)).collect();
        SampledFunction::new(1.0, values, Some(expr.clone()))
    }

    pub fn end(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = (s / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let t = x - i as f64;
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// `1/f` at integer radii, for the divergence hypothesis.
    fn reciprocal_sequence(&self) -> TailedSequence {
        let n = self.end().floor() as usize;
        TailedSequence::new(
            (0..=n).map(|r| 1.0 / self.eval(r as f64)).collect(),
            self.tail.clone().map(RadialExpr::recip),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    /// `phi(sigma_i)` for each requested point.
    pub values: Vec<f64>,
    pub judgment: SeriesJudgment,
}

fn trapezoid_levels<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut n = ((b - a) / MAX_STEP).ceil().max(1.0) as usize;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.5 * (g(a) + g(b)) + (1..n).map(|i| g(a + i as f64 * h)).sum::<f64>();
    let mut rows: Vec<f64> = vec![sum * h];
    for _ in 0..MAX_LEVELS {
        // halve the step, reusing the old nodes
        sum += (0..n).map(|i| g(a + (i as f64 + 0.5) * h)).sum::<f64>();
        n *= 2;
        h *= 0.5;
        let mut next = vec![sum * h];
        let mut pow = 1.0;
        for prev in &rows {
            pow *= 4.0;
            let last = *next.last().unwrap();
            next.push(last + (last - prev) / (pow - 1.0));
        }
        let done = (next.last().unwrap() - rows.last().unwrap()).abs()
            <= QUAD_TOL * next.last().unwrap().abs().max(1e-300);
        rows = next;
        if done {
            break;
        }
    }
    *rows.last().unwrap()
}

/// `log phi` at the sample nodes.
fn log_phi_nodes(f: &SampledFunction) -> Vec<f64> {
    let g = |s: f64| 1.0 / (f.eval(s) + s);
    let mut out = Vec::with_capacity(f.values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..f.values.len() {
        acc += trapezoid_levels(&g, (i - 1) as f64 * f.step, i as f64 * f.step);
        out.push(acc);
    }
    out
}

fn check_hypothesis(f: &SampledFunction) -> Result<SeriesJudgment> {
    let judgment = judge_sequence(&f.reciprocal_sequence())?;
    if judgment.is_convergent() {
        return Err(Error::DivergenceNotEstablished(judgment.to_string()));
    }
    Ok(judgment)
}

/// `phi` on the sample grid of `f`.
pub fn phi_on_grid(f: &SampledFunction) -> Result<Vec<f64>> {
    check_hypothesis(f)?;
    Ok(log_phi_nodes(f).into_iter().map(f64::exp).collect())
}

/// `gamma_i = phi(sigma_i)`; every `sigma_i` must lie in the sampled range.
pub fn phi_transform(f: &SampledFunction, sigma: &[f64]) -> Result<PhiTable> {
    let judgment = check_hypothesis(f)?;
    let nodes = log_phi_nodes(f);
    let g = |s: f64| 1.0 / (f.eval(s) + s);
    let values = sigma
        .iter()
        .map(|&s| {
            if !(s >= 0.0) || s > f.end() {
                return Err(Error::param(format!(
                    "sigma value {s} outside the sampled range [0, {}]",
                    f.end()
                )));
            }
            let k = ((s / f.step).floor() as usize).min(nodes.len() - 1);
            let base = k as f64 * f.step;
            Ok((nodes[k] + trapezoid_levels(&g, base, s)).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiTable { values, judgment })
}

/// Completeness from a radial `sigma` with `Delta sigma + f(sigma) >= 0`
/// outside the ball of radius `a_radius`: `gamma = phi(sigma)` is checked
/// as a Khas'minskii function with `lambda = 1`.
pub fn phi_khasminskii_check(
    p: &RadialProfile,
    f: &SampledFunction,
    sigma: &RadialFunction,
    a_radius: usize,
) -> Result<Verdict> {
    let h = p.horizon();
    let sig = sigma
        .values(h + 1)
        .ok_or_else(|| Error::param("sigma has no value past its table"))?;
    if let Some(r) = sig.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::NegativeFunction(format!("sigma({r}) = {}", sig[r])));
    }
    // radii whose sigma and sigma(r + 1) fall inside the sampled range
    let upto = match (0..=h).take_while(|&r| sig[r + 1] <= f.end()).last() {
        Some(r) => r,
        None => return Err(Error::param("sigma leaves the sampled range of f at once")),
    };
    let mut effective = a_radius;
    for r in a_radius + 1..=upto {
        let lap = sigma.laplacian(p, r).unwrap_or(f64::NAN);
        if !le(0.0, lap + f.eval(sig[r])) {
            effective = r;
        }
    }
    let table = phi_transform(f, &sig[..=upto + 1])?;
    let gamma_values = &table.values;
    let increments = gamma_values.windows(2).map(|w| w[1] - w[0]).collect();
    let gamma = RadialFunction::new(gamma_values[0], TailedSequence::head_only(increments));
    let khas_a = radial_head_check(p, &gamma, 1.0, effective, upto)?;

    let sub = Certificate::new(TheoremTag::Khasminskii)
        .param("lambda", 1.0)
        .param("A_radius", khas_a)
        .param("gamma", gamma_values.clone())
        .region(Region::Radius(upto));
    let cert = Certificate::new(TheoremTag::PhiKhasminskii)
        .param("A_radius", effective)
        .param("f", f.values.clone())
        .region(Region::Radius(upto))
        .chained(sub);
    if khas_a > effective {
        return Ok(Verdict::unknown(
            cert,
            format!("phi(sigma) fails the Khas'minskii inequality at radius {khas_a}"),
        ));
    }
    let mut v = Verdict::complete(cert)
        .caveat(Caveat::HorizonLimited)
        .note(format!("checked up to radius {upto}"))
        .note(table.judgment.to_string());
    if table.judgment.method == super::SeriesMethod::PartialSumHeuristic {
        v = v.caveat(Caveat::HeuristicSeries);
    }
    if effective > a_radius {
        v = v.note(format!("exceptional ball enlarged from radius {a_radius} to {effective}"));
    }
    Ok(v)
}
