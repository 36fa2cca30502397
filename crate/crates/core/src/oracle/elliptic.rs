//! `Delta u + lambda u = 0` on the interior with `u = 1` on the frontier.

use crate::builders::WindowChain;
use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexId};
use crate::scalar::Scalar;
use crate::verdict::{Caveat, Certificate, OracleMethod, Region, TheoremTag, Verdict};

use super::linalg::{Interior, SpdSolver};

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticSolution {
    pub lambda: f64,
    /// Largest distance from the root, when the window has one.
    pub radius: Option<usize>,
    pub values: Vec<f64>,
    /// `max |Delta u + lambda u|` over interior vertices.
    pub residual: f64,
    pub iterations: usize,
}

impl EllipticSolution {
    pub fn at(&self, x: VertexId) -> f64 {
        self.values[x.index()]
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::param(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

pub fn elliptic_window_solve<T: Scalar>(
    g: &GraphWindow<T>,
    lambda: f64,
    tol: f64,
) -> Result<EllipticSolution> {
    positive("lambda", lambda)?;
    positive("tol", tol)?;
    if g.frontier_len() == 0 {
        return Err(Error::param("the window has no frontier"));
    }
    let radius = g
        .root()
        .and_then(|r| g.distances_from([r]).into_iter().flatten().max());
    let sys = Interior::new(g);
    let n = sys.len();
    // mu-scaled: (sum b + lambda mu) u(x) - sum_{y interior} b u(y) = sum_{y frontier} b
    let d: Vec<f64> = (0..n).map(|i| sys.weight_sum[i] + lambda * sys.mu[i]).collect();
    let mut u: Vec<f64> = (0..n).map(|i| sys.to_frontier[i] / d[i]).collect();
    let solver = SpdSolver::new(&sys, d.clone(), 1.0)?;
    // the scaled residual bounds |Delta u + lambda u| up to the factor Deg + lambda
    let scale = (0..n)
        .map(|i| d[i] / sys.mu[i])
        .fold(1.0f64, f64::max);
    let iterations = solver.solve(&sys.to_frontier, &mut u, tol / scale, 20 * n + 1000)?;

    let mut values = vec![1.0; g.len()];
    for (i, x) in sys.verts.iter().enumerate() {
        values[x.index()] = u[i];
    }
    let mut residual = 0.0f64;
    for (i, x) in sys.verts.iter().enumerate() {
        let lap: f64 = g
            .neighbors(*x)
            .map(|(y, w)| w.f64() * (u[i] - values[y.index()]))
            .sum::<f64>()
            / sys.mu[i];
        residual = residual.max((lap + lambda * u[i]).abs());
    }
    // a direct solve cannot beat roundoff in the operator itself
    if residual > tol.max(16.0 * f64::EPSILON * scale) {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(EllipticSolution {
        lambda,
        radius,
        values,
        residual,
        iterations,
    })
}

/// Thresholds for turning a root-value sequence into a verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub lambda: f64,
    pub tol: f64,
    /// Positivity threshold.
    pub theta: f64,
    /// Relative change between the last two radii counted as stable.
    pub rel_tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            lambda: 1.0,
            tol: 1e-10,
            theta: 1e-2,
            rel_tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub verdict: Verdict,
    pub radii: Vec<usize>,
    /// Value at the root for each radius.
    pub values: Vec<f64>,
    pub solutions: Vec<EllipticSolution>,
}

/// Turns a non-increasing sequence into a verdict; shared with the heat
/// deficit scan.
pub(crate) fn classify(
    method: OracleMethod,
    radii: &[usize],
    values: &[f64],
    theta: f64,
    rel_tol: f64,
    slack: f64,
) -> Result<Verdict> {
    for i in 1..values.len() {
        if values[i] > values[i - 1] + slack {
            return Err(Error::NonMonotone {
                radius: radii[i],
                value: values[i],
                previous: values[i - 1],
            });
        }
    }
    let last = *values
        .last()
        .ok_or_else(|| Error::param("the scan needs at least one window"))?;
    let cert = Certificate::new(TheoremTag::Oracle(method))
        .param("theta", theta)
        .param("rel_tol", rel_tol)
        .param("values", values.to_vec())
        .region(Region::Radius(*radii.last().unwrap()));
    if last < theta {
        return Ok(Verdict::complete(cert)
            .caveat(Caveat::HorizonLimited)
            .note(format!("value {last:.3e} fell below theta")));
    }
    if values.len() >= 2 {
        let prev = values[values.len() - 2];
        let change = (prev - last) / last;
        if change < rel_tol {
            return Ok(Verdict::incomplete(cert.param("relative_change", change))
                .caveat(Caveat::HorizonLimited)
                .note(format!("value stabilizes at {last:.6} (relative change {change:.2e})")));
        }
        return Ok(Verdict::unknown(
            cert.param("relative_change", change),
            "value still moving and above theta",
        ));
    }
    Ok(Verdict::unknown(cert, "a single window cannot show stabilization"))
}

pub fn elliptic_limit_scan<T: Scalar>(chain: &WindowChain<T>, cfg: &ScanConfig) -> Result<ScanResult> {
    positive("theta", cfg.theta)?;
    positive("rel_tol", cfg.rel_tol)?;
    let root = chain.root().ok_or(Error::NoRoot)?;
    let solutions = chain
        .windows()
        .iter()
        .map(|w| elliptic_window_solve(w, cfg.lambda, cfg.tol))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = solutions.iter().map(|s| s.at(root)).collect();
    let verdict = classify(
        OracleMethod::EllipticLimit,
        chain.radii(),
        &values,
        cfg.theta,
        cfg.rel_tol,
        10.0 * cfg.tol,
    )?;
    let verdict = Verdict {
        certificate: verdict.certificate.param("lambda", cfg.lambda),
        ..verdict
    };
    Ok(ScanResult {
        verdict,
        radii: chain.radii().to_vec(),
        values,
        solutions,
    })
}
