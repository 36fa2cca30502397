//! Rooted radial statistics of windows and radial profiles of weakly
//! symmetric graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexId};
use crate::scalar::Scalar;
use crate::sequence::RadialExpr;

/// Breadth-first radial data of a rooted window.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialStats {
    pub radius: Vec<usize>,
    pub m_plus: Vec<u64>,
    pub m_minus: Vec<u64>,
    /// `K_+(r)`, `k_+(r)`, `K_-(r)`, `k_-(r)` indexed by radius.
    pub k_plus_max: Vec<u64>,
    pub k_plus_min: Vec<u64>,
    pub k_minus_max: Vec<u64>,
    pub k_minus_min: Vec<u64>,
    /// `#S_r`, `#B_r` and `#dB_r` (vertices outside `B_r` adjacent to it).
    pub sphere_counts: Vec<usize>,
    pub ball_counts: Vec<usize>,
    pub boundary_counts: Vec<usize>,
    /// The same three quantities measured with `mu`.
    pub sphere_measure: Vec<f64>,
    pub ball_measure: Vec<f64>,
    pub boundary_measure: Vec<f64>,
}

impl RadialStats {
    pub fn max_radius(&self) -> Option<usize> {
        self.sphere_counts.len().checked_sub(1)
    }

    pub fn laplacian_of_radius(&self, x: VertexId) -> i64 {
        self.m_minus[x.index()] as i64 - self.m_plus[x.index()] as i64
    }

    /// Terms `mu(B_r) / mu(dB_r)` for every radius with a nonempty boundary.
    pub fn ball_boundary_ratios(&self) -> Vec<f64> {
        self.ball_measure
            .iter()
            .zip(&self.boundary_measure)
            .take_while(|(_, d)| **d > 0.0)
            .map(|(b, d)| b / d)
            .collect()
    }
}

pub fn radial_statistics<T: Scalar>(g: &GraphWindow<T>) -> Result<RadialStats> {
    if g.is_empty() {
        return Ok(RadialStats {
            radius: Vec::new(),
            m_plus: Vec::new(),
            m_minus: Vec::new(),
            k_plus_max: Vec::new(),
            k_plus_min: Vec::new(),
            k_minus_max: Vec::new(),
            k_minus_min: Vec::new(),
            sphere_counts: Vec::new(),
            ball_counts: Vec::new(),
            boundary_counts: Vec::new(),
            sphere_measure: Vec::new(),
            ball_measure: Vec::new(),
            boundary_measure: Vec::new(),
        });
    }
    let root = g.root().ok_or(Error::NoRoot)?;
    let dist = g.distances_from([root]);
    let mut radius = Vec::with_capacity(g.len());
    for (i, d) in dist.iter().enumerate() {
        radius.push(d.ok_or(Error::Unreachable(VertexId::from(i)))?);
    }
    let rmax = radius.iter().copied().max().unwrap_or(0);
    let n_r = rmax + 1;
    let mut m_plus = vec![0u64; g.len()];
    let mut m_minus = vec![0u64; g.len()];
    for x in g.vertices() {
        let rx = radius[x.index()];
        for (y, _) in g.neighbors(x) {
            let ry = radius[y.index()];
            if ry == rx + 1 {
                m_plus[x.index()] += 1;
            } else if ry + 1 == rx {
                m_minus[x.index()] += 1;
            }
        }
    }
    let mut k_plus_max = vec![0u64; n_r];
    let mut k_plus_min = vec![u64::MAX; n_r];
    let mut k_minus_max = vec![0u64; n_r];
    let mut k_minus_min = vec![u64::MAX; n_r];
    let mut sphere_counts = vec![0usize; n_r];
    let mut sphere_measure = vec![0.0; n_r];
    for x in g.vertices() {
        let r = radius[x.index()];
        let (p, m) = (m_plus[x.index()], m_minus[x.index()]);
        k_plus_max[r] = k_plus_max[r].max(p);
        k_plus_min[r] = k_plus_min[r].min(p);
        k_minus_max[r] = k_minus_max[r].max(m);
        k_minus_min[r] = k_minus_min[r].min(m);
        sphere_counts[r] += 1;
        sphere_measure[r] += g.mu(x).f64();
    }
    let mut ball_counts = Vec::with_capacity(n_r);
    let mut ball_measure = Vec::with_capacity(n_r);
    let (mut bc, mut bm) = (0usize, 0.0);
    for r in 0..n_r {
        bc += sphere_counts[r];
        bm += sphere_measure[r];
        ball_counts.push(bc);
        ball_measure.push(bm);
    }
    // every edge changes the radius by at most one, so dB_r = S_{r+1}
    let mut boundary_counts = vec![0usize; n_r];
    let mut boundary_measure = vec![0.0; n_r];
    for r in 0..rmax {
        boundary_counts[r] = sphere_counts[r + 1];
        boundary_measure[r] = sphere_measure[r + 1];
    }
    Ok(RadialStats {
        radius,
        m_plus,
        m_minus,
        k_plus_max,
        k_plus_min,
        k_minus_max,
        k_minus_min,
        sphere_counts,
        ball_counts,
        boundary_counts,
        sphere_measure,
        ball_measure,
        boundary_measure,
    })
}

/// Closed form of the sphere sizes beyond the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    None,
    /// `S(r) = ceil(scale * (r + shift)^exponent)`
    Polynomial { exponent: f64, scale: f64, shift: f64 },
    /// `S(r) = ceil(scale * base^r)`
    Exponential { base: f64, scale: f64 },
    /// `S(r) = ceil(scale * r!)`
    Factorial { scale: f64 },
}

impl Tail {
    pub fn poly(exponent: f64) -> Self {
        Tail::Polynomial {
            exponent,
            scale: 1.0,
            shift: 1.0,
        }
    }

    pub fn exp(base: f64) -> Self {
        Tail::Exponential { base, scale: 1.0 }
    }

    /// The tail as an expression, without rounding.
    pub fn raw_expr(&self) -> Option<RadialExpr> {
        match *self {
            Tail::None => None,
            Tail::Polynomial {
                exponent,
                scale,
                shift,
            } => Some(RadialExpr::Poly {
                exponent,
                scale,
                shift,
            }),
            Tail::Exponential { base, scale } => Some(RadialExpr::Exp { base, scale }),
            Tail::Factorial { scale } => Some(RadialExpr::Factorial { scale }),
        }
    }

    pub fn size_expr(&self) -> Option<RadialExpr> {
        self.raw_expr().map(RadialExpr::ceil)
    }
}

/// Per-radius data `S(r)`, `g_+(r)`, `g_-(r)` of a weakly symmetric graph up
/// to a horizon, with an optional closed-form continuation.
///
/// Beyond the horizon a `join_complete` profile continues with
/// `g_+(r) = S(r+1)` and `g_-(r) = S(r-1)`; otherwise `g_+`, `g_-` stay at
/// their horizon values and the tail must grow at the matching rate.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    sizes: Vec<u64>,
    gplus: Vec<u64>,
    gminus: Vec<u64>,
    tail: Tail,
    join_complete: bool,
}

impl RadialProfile {
    pub fn new(
        sizes: Vec<u64>,
        gplus: Vec<u64>,
        gminus: Vec<u64>,
        tail: Tail,
        join_complete: bool,
    ) -> Result<Self> {
        let bad = |radius: usize, reason: &str| Error::InconsistentProfile {
            radius,
            reason: reason.to_string(),
        };
        if sizes.is_empty() {
            return Err(bad(0, "no spheres"));
        }
        if sizes.len() != gplus.len() || sizes.len() != gminus.len() {
            return Err(bad(0, "sequence lengths differ"));
        }
        if sizes[0] != 1 {
            return Err(bad(0, "S(0) must be 1"));
        }
        if gminus[0] != 0 {
            return Err(bad(0, "g-(0) must be 0"));
        }
        for (r, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(bad(r, "sphere size must be positive"));
            }
        }
        for r in 1..sizes.len() {
            let lhs = u128::from(gminus[r]) * u128::from(sizes[r]);
            let rhs = u128::from(gplus[r - 1]) * u128::from(sizes[r - 1]);
            if lhs != rhs {
                return Err(bad(
                    r,
                    &format!("g-(r)S(r) = {lhs} but g+(r-1)S(r-1) = {rhs}"),
                ));
            }
            if join_complete && (gminus[r] != sizes[r - 1] || gplus[r - 1] != sizes[r]) {
                return Err(bad(r, "not a complete join between consecutive spheres"));
            }
        }
        let p = RadialProfile {
            sizes,
            gplus,
            gminus,
            tail,
            join_complete,
        };
        p.check_tail()?;
        Ok(p)
    }

    fn check_tail(&self) -> Result<()> {
        let r = self.horizon();
        let bad = |reason: String| Error::InconsistentProfile { radius: r, reason };
        let Some(size) = self.tail.size_expr() else {
            return Ok(());
        };
        if let Tail::Exponential { base, .. } = self.tail {
            if base <= 1.0 {
                return Err(bad("exponential tail base must exceed 1".into()));
            }
        }
        let next = size.eval(r as i64 + 1);
        if !(next >= 1.0) || !next.is_finite() {
            return Err(bad(format!("tail gives S({}) = {next}", r + 1)));
        }
        if self.join_complete {
            if (self.gplus[r] as f64 - next).abs() > 0.5 {
                return Err(bad(format!(
                    "g+({r}) = {} but the tail gives S({}) = {next}",
                    self.gplus[r],
                    r + 1
                )));
            }
            return Ok(());
        }
        // stationary continuation: S(r+1)/S(r) = g+/g- for all later radii
        let (gp, gm) = (self.gplus[r] as f64, self.gminus[r] as f64);
        let ok = match self.tail {
            Tail::Exponential { base, .. } => {
                gm > 0.0 && (base - gp / gm).abs() <= 1e-12 * base
            }
            Tail::Polynomial { exponent, .. } => exponent == 0.0 && gp == gm,
            _ => false,
        };
        if !ok || r == 0 {
            return Err(bad(
                "tail growth does not match the stationary g+/g- continuation".into(),
            ));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn gplus(&self) -> &[u64] {
        &self.gplus
    }

    pub fn gminus(&self) -> &[u64] {
        &self.gminus
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_join_complete(&self) -> bool {
        self.join_complete
    }

    pub fn has_tail(&self) -> bool {
        self.tail != Tail::None
    }

    /// Same data with a shorter horizon.
    pub fn truncated(&self, horizon: usize) -> Result<RadialProfile> {
        if horizon > self.horizon() {
            return Err(Error::param("truncation beyond horizon"));
        }
        let n = horizon + 1;
        RadialProfile::new(
            self.sizes[..n].to_vec(),
            self.gplus[..n].to_vec(),
            self.gminus[..n].to_vec(),
            self.tail,
            self.join_complete,
        )
    }

    fn as_f64(v: &[u64]) -> Vec<f64> {
        v.iter().map(|&x| x as f64).collect()
    }

    /// `S(r)` for all `r`, or `None` without a tail.
    pub fn size_expr(&self) -> Option<RadialExpr> {
        let tail = self.tail.size_expr()?;
        Some(RadialExpr::tabled(Self::as_f64(&self.sizes), tail))
    }

    pub fn gplus_expr(&self) -> Option<RadialExpr> {
        let tail = if self.join_complete {
            self.tail.size_expr()?.shifted(1)
        } else {
            self.tail.size_expr()?;
            RadialExpr::Const(self.gplus[self.horizon()] as f64)
        };
        Some(RadialExpr::tabled(Self::as_f64(&self.gplus), tail))
    }

    pub fn gminus_expr(&self) -> Option<RadialExpr> {
        let tail = if self.join_complete {
            self.tail.size_expr()?.shifted(-1)
        } else {
            self.tail.size_expr()?;
            RadialExpr::Const(self.gminus[self.horizon()] as f64)
        };
        Some(RadialExpr::tabled(Self::as_f64(&self.gminus), tail))
    }

    /// `V(r) = #B_r`.
    pub fn volume_expr(&self) -> Option<RadialExpr> {
        Some(self.size_expr()?.partial_sum())
    }

    pub fn size(&self, r: usize) -> Option<f64> {
        match self.sizes.get(r) {
            Some(&s) => Some(s as f64),
            None => self.size_expr().map(|e| e.eval(r as i64)),
        }
    }

    pub fn gplus_at(&self, r: usize) -> Option<f64> {
        match self.gplus.get(r) {
            Some(&s) => Some(s as f64),
            None => self.gplus_expr().map(|e| e.eval(r as i64)),
        }
    }

    pub fn gminus_at(&self, r: usize) -> Option<f64> {
        match self.gminus.get(r) {
            Some(&s) => Some(s as f64),
            None => self.gminus_expr().map(|e| e.eval(r as i64)),
        }
    }

    /// Cumulative ball sizes `V(r)` up to the horizon.
    pub fn volumes(&self) -> Vec<u128> {
        let mut acc = 0u128;
        self.sizes
            .iter()
            .map(|&s| {
                acc += u128::from(s);
                acc
            })
            .collect()
    }

    /// Degree of the vertices of sphere `r`.
    pub fn degree(&self, r: usize) -> Option<f64> {
        Some(self.gplus_at(r)? + self.gminus_at(r)?)
    }
}

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "radial profile, horizon {}", self.horizon())?;
        match self.tail {
            Tail::None => Ok(()),
            t => write!(f, ", tail {t:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn rejects_inconsistent_double_count() {
        let err = RadialProfile::new(vec![1, 2, 4], vec![2, 2, 2], vec![0, 1, 2], Tail::None, false)
            .unwrap_err();
        assert!(matches!(err, Error::InconsistentProfile { radius: 2, .. }));
    }

    #[test]
    fn binary_tree_profile_extends() {
        let p = RadialProfile::new(vec![1, 2, 4], vec![2, 2, 2], vec![0, 1, 1], Tail::exp(2.0), false)
            .unwrap();
        assert_eq!(p.size(5), Some(32.0));
        assert_eq!(p.gplus_at(9), Some(2.0));
        assert_eq!(p.gminus_at(9), Some(1.0));
    }

    #[test]
    fn stationary_tail_must_match_ratio() {
        let err = RadialProfile::new(vec![1, 2, 4], vec![2, 2, 2], vec![0, 1, 1], Tail::exp(3.0), false);
        assert!(err.is_err());
    }

    #[test]
    fn path_statistics() {
        let mut b = GraphBuilder::<f64>::new(4);
        for i in 0..3u32 {
            b.edge(VertexId(i), VertexId(i + 1), 1.0);
        }
        b.set_root(Some(VertexId(0)));
        let s = radial_statistics(&b.build().unwrap()).unwrap();
        assert_eq!(s.radius, vec![0, 1, 2, 3]);
        assert_eq!(s.m_plus, vec![1, 1, 1, 0]);
        assert_eq!(s.m_minus, vec![0, 1, 1, 1]);
        assert_eq!(s.ball_counts, vec![1, 2, 3, 4]);
        assert_eq!(s.boundary_counts, vec![1, 1, 1, 0]);
    }

    #[test]
    fn statistics_errors() {
        let g = GraphBuilder::<f64>::new(2).build().unwrap();
        assert_eq!(radial_statistics(&g).unwrap_err(), Error::NoRoot);
        let g = g.with_root(Some(VertexId(0))).unwrap();
        assert_eq!(radial_statistics(&g).unwrap_err(), Error::Unreachable(VertexId(1)));
    }
}
