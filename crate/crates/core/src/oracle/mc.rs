//! Sampling the continuous-time walk generated by `-Delta` until it leaves
//! the window.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Fraction of paths that hit the frontier before time `T`.
    pub estimate: f64,
    /// `sqrt(p (1 - p) / N)` for the estimate `p`.
    pub std_error: f64,
    pub paths: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Standard error of a proportion with true value `p0`, for testing
    /// `p = p0` when the sample estimate sits at 0 or 1.
    pub fn null_std_error(&self, p0: f64) -> f64 {
        (p0 * (1.0 - p0) / self.paths as f64).sqrt()
    }
}

/// Jump tables: cumulative weights per vertex over in-window neighbors.
struct Chain {
    rate: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    cumulative: Vec<f64>,
    frontier: Vec<bool>,
}

impl Chain {
    fn new<T: Scalar>(g: &GraphWindow<T>) -> Self {
        let mut offsets = vec![0];
        let (mut targets, mut cumulative) = (Vec::new(), Vec::new());
        let mut rate = Vec::with_capacity(g.len());
        for x in g.vertices() {
            let mut acc = 0.0;
            for (y, w) in g.neighbors(x) {
                acc += w.f64();
                targets.push(y.0);
                cumulative.push(acc);
            }
            rate.push(acc / g.mu(x).f64());
            offsets.push(targets.len());
        }
        Chain {
            rate,
            offsets,
            targets,
            cumulative,
            frontier: g.vertices().map(|x| g.is_frontier(x)).collect(),
        }
    }

    fn exits(&self, start: usize, horizon: f64, rng: &mut ChaCha8Rng) -> bool {
        let mut x = start;
        let mut t = 0.0;
        loop {
            if self.frontier[x] {
                return true;
            }
            let rate = self.rate[x];
            if rate <= 0.0 {
                return false;
            }
            let u: f64 = rng.random();
            t += -(1.0 - u).ln() / rate;
            if t > horizon {
                return false;
            }
            let row = self.offsets[x]..self.offsets[x + 1];
            let cum = &self.cumulative[row.clone()];
            let v: f64 = rng.random::<f64>() * cum[cum.len() - 1];
            let k = cum.partition_point(|&c| c <= v).min(cum.len() - 1);
            x = self.targets[row.start + k] as usize;
        }
    }
}

/// Each path `i` draws from its own stream `(seed, i)`, so the estimate does
/// not depend on scheduling.
pub fn mc_explosion_estimate<T: Scalar>(
    g: &GraphWindow<T>,
    horizon: f64,
    paths: u64,
    seed: u64,
) -> Result<McEstimate> {
    if paths == 0 {
        return Err(Error::param("need at least one path"));
    }
    if !(horizon >= 0.0) {
        return Err(Error::param(format!("time horizon must be nonnegative, got {horizon}")));
    }
    let root = g.root().ok_or(Error::NoRoot)?;
    if g.is_frontier(root) {
        return Err(Error::FrontierVertex(root));
    }
    let chain = Chain::new(g);
    let hits: u64 = (0..paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            u64::from(chain.exits(root.index(), horizon, &mut rng))
        })
        .sum();
    let p = hits as f64 / paths as f64;
    Ok(McEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / paths as f64).sqrt(),
        paths,
        seed,
    })
}
