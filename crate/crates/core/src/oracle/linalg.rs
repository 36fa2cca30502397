//! The symmetric systems `diag(d) - s B` on interior vertices, where `B`
//! holds interior-interior weights.

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexId};
use crate::scalar::Scalar;

/// Bandwidths up to this use a banded Cholesky factorization.
const MAX_BAND: usize = 16;

pub(crate) struct Interior {
    pub verts: Vec<VertexId>,
    pub mu: Vec<f64>,
    /// `sum_y b(x, y)` over all neighbors.
    pub weight_sum: Vec<f64>,
    /// `sum_y b(x, y)` over frontier neighbors.
    pub to_frontier: Vec<f64>,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Interior {
    pub fn new<T: Scalar>(g: &GraphWindow<T>) -> Self {
        let mut index = vec![None; g.len()];
        let verts: Vec<VertexId> = g.interior().collect();
        for (i, x) in verts.iter().enumerate() {
            index[x.index()] = Some(i);
        }
        let mut offsets = vec![0];
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        let mut to_frontier = Vec::with_capacity(verts.len());
        let mut weight_sum = Vec::with_capacity(verts.len());
        for &x in &verts {
            let mut f = 0.0;
            for (y, w) in g.neighbors(x) {
                match index[y.index()] {
                    Some(j) => {
                        cols.push(j);
                        vals.push(w.f64());
                    }
                    None => f += w.f64(),
                }
            }
            to_frontier.push(f);
            weight_sum.push(g.weight_sum(x).f64());
            offsets.push(cols.len());
        }
        let mu = verts.iter().map(|&x| g.mu(x).f64()).collect();
        Interior {
            verts,
            mu,
            weight_sum,
            to_frontier,
            offsets,
            cols,
            vals,
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    /// `y = diag(d) x - s B x`.
    pub fn apply(&self, d: &[f64], s: f64, x: &[f64], y: &mut [f64]) {
        for i in 0..self.len() {
            let off: f64 = self.row(i).map(|(j, w)| w * x[j]).sum();
            y[i] = d[i] * x[i] - s * off;
        }
    }

    fn bandwidth(&self) -> usize {
        (0..self.len())
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }
}

/// Solver for `diag(d) - s B`, factored once when banded.
pub(crate) enum SpdSolver<'a> {
    Banded(BandedCholesky),
    Cg {
        sys: &'a Interior,
        d: Vec<f64>,
        s: f64,
    },
}

impl<'a> SpdSolver<'a> {
    pub fn new(sys: &'a Interior, d: Vec<f64>, s: f64) -> Result<Self> {
        let w = sys.bandwidth();
        if w <= MAX_BAND {
            Ok(SpdSolver::Banded(BandedCholesky::factor(sys, &d, s, w)?))
        } else {
            Ok(SpdSolver::Cg { sys, d, s })
        }
    }

    /// Solves into `x`, using its content as the starting guess for the
    /// iterative path. Returns the iteration count.
    pub fn solve(&self, rhs: &[f64], x: &mut [f64], tol: f64, cap: usize) -> Result<usize> {
        match self {
            SpdSolver::Banded(c) => {
                c.solve(rhs, x);
                Ok(1)
            }
            SpdSolver::Cg { sys, d, s } => pcg(sys, d, *s, rhs, x, tol, cap),
        }
    }
}

/// Jacobi-preconditioned conjugate gradients, stopping when every
/// component of the residual, divided by the matching `d`, is below `tol`.
pub(crate) fn pcg(
    sys: &Interior,
    d: &[f64],
    s: f64,
    rhs: &[f64],
    x: &mut [f64],
    tol: f64,
    cap: usize,
) -> Result<usize> {
    let n = sys.len();
    let mut r = vec![0.0; n];
    sys.apply(d, s, x, &mut r);
    for i in 0..n {
        r[i] = rhs[i] - r[i];
    }
    let scaled = |r: &[f64]| (0..n).map(|i| (r[i] / d[i]).abs()).fold(0.0, f64::max);
    let mut z: Vec<f64> = (0..n).map(|i| r[i] / d[i]).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for it in 0..cap {
        let res = scaled(&r);
        if res <= tol {
            return Ok(it);
        }
        sys.apply(d, s, &p, &mut q);
        let pq: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
        if !(pq > 0.0) {
            return Err(Error::Internal("system is not positive definite".into()));
        }
        let a = rz / pq;
        for i in 0..n {
            x[i] += a * p[i];
            r[i] -= a * q[i];
            z[i] = r[i] / d[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = scaled(&r);
    if res <= tol {
        return Ok(cap);
    }
    Err(Error::NonConvergence {
        iterations: cap,
        residual: res,
    })
}

/// `L L^T` with `L` stored by rows as `band[i][k] = L[i][i - w + k]`.
pub(crate) struct BandedCholesky {
    w: usize,
    band: Vec<f64>,
    /// `1 / L[i][i]`, so the substitutions multiply instead of divide.
    inv_diag: Vec<f64>,
    n: usize,
}

impl BandedCholesky {
    fn factor(sys: &Interior, d: &[f64], s: f64, w: usize) -> Result<Self> {
        let n = sys.len();
        let at = |i: usize, k: usize| i * (w + 1) + k;
        let mut band = vec![0.0; n * (w + 1)];
        for i in 0..n {
            band[at(i, w)] = d[i];
            for (j, v) in sys.row(i) {
                if j < i {
                    band[at(i, w - (i - j))] -= s * v;
                }
            }
        }
        for i in 0..n {
            for k in 0..=w {
                let j = match (i + k).checked_sub(w) {
                    Some(j) => j,
                    None => continue,
                };
                // L[i][j] = (A[i][j] - sum_l L[i][l] L[j][l]) / L[j][j]
                let lo = i.saturating_sub(w).max(j.saturating_sub(w));
                let mut sum = band[at(i, k)];
                for l in lo..j {
                    sum -= band[at(i, w - (i - l))] * band[at(j, w - (j - l))];
                }
                if j == i {
                    if !(sum > 0.0) {
                        return Err(Error::Internal("system is not positive definite".into()));
                    }
                    band[at(i, w)] = sum.sqrt();
                } else {
                    band[at(i, k)] = sum / band[at(j, w)];
                }
            }
        }
        let inv_diag = (0..n).map(|i| 1.0 / band[at(i, w)]).collect();
        Ok(BandedCholesky { w, band, inv_diag, n })
    }

    fn solve(&self, rhs: &[f64], x: &mut [f64]) {
        let (w, n) = (self.w, self.n);
        let at = |i: usize, k: usize| i * (w + 1) + k;
        for i in 0..n {
            let mut v = rhs[i];
            for l in i.saturating_sub(w)..i {
                v -= self.band[at(i, w - (i - l))] * x[l];
            }
            x[i] = v * self.inv_diag[i];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            for l in i + 1..(i + w + 1).min(n) {
                v -= self.band[at(l, w - (l - i))] * x[l];
            }
            x[i] = v * self.inv_diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn grid(n: usize) -> GraphWindow<f64> {
        // n x n grid with the outer ring on the frontier
        let id = |i: usize, j: usize| VertexId::from(i * n + j);
        let mut b = GraphBuilder::new(n * n);
        for i in 0..n {
            for j in 0..n {
                if i + 1 < n {
                    b.edge(id(i, j), id(i + 1, j), 1.0 + (i + j) as f64 * 0.1);
                }
                if j + 1 < n {
                    b.edge(id(i, j), id(i, j + 1), 1.0);
                }
                if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                    b.set_frontier(id(i, j), true);
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn banded_matches_cg() {
        let g = grid(8);
        let sys = Interior::new(&g);
        let d: Vec<f64> = (0..sys.len()).map(|i| sys.weight_sum[i] + 0.7 * sys.mu[i]).collect();
        let rhs: Vec<f64> = (0..sys.len()).map(|i| (i as f64).sin() + 2.0).collect();
        let banded = BandedCholesky::factor(&sys, &d, 1.0, sys.bandwidth()).unwrap();
        let mut a = vec![0.0; sys.len()];
        banded.solve(&rhs, &mut a);
        let mut b = vec![0.0; sys.len()];
        pcg(&sys, &d, 1.0, &rhs, &mut b, 1e-14, 1000).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        let mut check = vec![0.0; sys.len()];
        sys.apply(&d, 1.0, &a, &mut check);
        for (x, y) in check.iter().zip(&rhs) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
