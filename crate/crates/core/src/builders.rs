//! Named graph families: spherically symmetric graphs, trees, paths, and
//! explicit windows realizing a radial profile.

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, GraphWindow, VertexId};
use crate::radial::{RadialProfile, Tail};
use crate::scalar::Scalar;
use crate::sequence::ceil_near;

/// Rule for the sphere sizes `S(r)` of a spherically symmetric graph.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereRule {
    /// `S(r) = ceil((r+1)^p)`
    Polynomial(f64),
    /// `S(r) = q^r` for an integer base `q >= 2`
    Exponential(u64),
    /// Explicit sizes; needs at least `horizon + 2` entries.
    Explicit(Vec<u64>),
    /// `S(r) = r!`
    Factorial,
}

/// Largest number of stored directed entries a materialization may create.
pub const MAX_MATERIALIZED_ENTRIES: u128 = 100_000_000;

fn rule_sizes(rule: &SphereRule, count: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    for r in 0..count {
        let s = match rule {
            SphereRule::Polynomial(p) => {
                if !p.is_finite() || *p < 0.0 {
                    return Err(Error::param("polynomial exponent must be nonnegative"));
                }
                if p.fract() == 0.0 {
                    (r as u64 + 1)
                        .checked_pow(*p as u32)
                        .ok_or(Error::Overflow(r))?
                } else {
                    let v = ceil_near(((r + 1) as f64).powf(*p));
                    if v >= 9.0e15 {
                        return Err(Error::Overflow(r));
                    }
                    v as u64
                }
            }
            SphereRule::Exponential(q) => {
                if *q < 2 {
                    return Err(Error::param("exponential base must be at least 2"));
                }
                q.checked_pow(r as u32).ok_or(Error::Overflow(r))?
            }
            SphereRule::Explicit(v) => *v.get(r).ok_or_else(|| {
                Error::param(format!("explicit rule needs a size for radius {r}"))
            })?,
            SphereRule::Factorial => {
                let prev = out.last().copied().unwrap_or(1u64);
                if r == 0 {
                    1
                } else {
                    prev.checked_mul(r as u64).ok_or(Error::Overflow(r))?
                }
            }
        };
        if s == 0 {
            return Err(Error::InconsistentProfile {
                radius: r,
                reason: "rule yields an empty sphere".into(),
            });
        }
        out.push(s);
    }
    Ok(out)
}

/// Spherically symmetric graph `G_S`: every vertex of `S_r` joined to every
/// vertex of `S_{r+1}`.
pub fn build_spherically_symmetric(rule: &SphereRule, horizon: usize) -> Result<RadialProfile> {
    if horizon < 1 {
        return Err(Error::param("horizon must be at least 1"));
    }
    let ext = rule_sizes(rule, horizon + 2)?;
    if ext[0] != 1 {
        return Err(Error::InconsistentProfile {
            radius: 0,
            reason: "S(0) must be 1".into(),
        });
    }
    let sizes = ext[..=horizon].to_vec();
    let gplus = (0..=horizon).map(|r| ext[r + 1]).collect();
    let gminus = (0..=horizon)
        .map(|r| if r == 0 { 0 } else { ext[r - 1] })
        .collect();
    let tail = match rule {
        SphereRule::Polynomial(p) => Tail::poly(*p),
        SphereRule::Exponential(q) => Tail::exp(*q as f64),
        SphereRule::Explicit(_) => Tail::None,
        SphereRule::Factorial => Tail::Factorial { scale: 1.0 },
    };
    RadialProfile::new(sizes, gplus, gminus, tail, true)
}

/// Rooted `k`-ary tree.
pub fn build_kary_tree(k: u64, horizon: usize) -> Result<RadialProfile> {
    if k < 2 {
        return Err(Error::param("tree arity must be at least 2"));
    }
    let sizes = rule_sizes(&SphereRule::Exponential(k), horizon + 1)?;
    let gplus = vec![k; horizon + 1];
    let gminus = (0..=horizon).map(|r| u64::from(r > 0)).collect();
    RadialProfile::new(sizes, gplus, gminus, Tail::exp(k as f64), false)
}

/// Half-line `0 ~ 1 ~ ... ~ R` with frontier `{R}` and root 0.
pub fn build_path(horizon: usize) -> GraphWindow<f64> {
    let mut b = GraphBuilder::new(horizon + 1);
    for i in 0..horizon {
        b.edge(VertexId::from(i), VertexId::from(i + 1), 1.0);
    }
    b.set_frontier(VertexId::from(horizon), true)
        .set_root(Some(VertexId(0)));
    b.build().expect("path window")
}

/// Spine `0..=R` where spine vertex `n` carries `leaves(n)` pendant leaves.
/// Spine vertices have ids `0..=R`; leaves follow in spine order.
pub fn build_pendant_tree<F: Fn(usize) -> usize>(leaves: F, horizon: usize) -> GraphWindow<f64> {
    let mut b = GraphBuilder::new(horizon + 1);
    for i in 0..horizon {
        b.edge(VertexId::from(i), VertexId::from(i + 1), 1.0);
    }
    for n in 0..=horizon {
        for _ in 0..leaves(n) {
            let leaf = b.add_vertex(1.0);
            b.edge(VertexId::from(n), leaf, 1.0);
        }
    }
    b.set_frontier(VertexId::from(horizon), true)
        .set_root(Some(VertexId(0)));
    b.build().expect("pendant tree window")
}

/// Explicit ball `B_R` realizing a radial profile. Sphere `r` occupies a
/// contiguous id range and vertex `i` of `S_r` is joined to vertices
/// `(i g_+(r) + t) mod S(r+1)`, `t < g_+(r)`, of `S_{r+1}`; this realizes
/// every `g_+`, `g_-` pair (complete joins included) with no intra-sphere
/// edges. The frontier is `S_R`.
pub fn materialize_window(p: &RadialProfile, radius: usize) -> Result<GraphWindow<f64>> {
    if radius > p.horizon() {
        return Err(Error::param(format!(
            "radius {radius} beyond profile horizon {}",
            p.horizon()
        )));
    }
    let sizes = &p.sizes()[..=radius];
    let mut entries: u128 = 0;
    for r in 0..radius {
        entries += 2 * u128::from(sizes[r]) * u128::from(p.gplus()[r]);
    }
    if entries > MAX_MATERIALIZED_ENTRIES {
        return Err(Error::param(format!(
            "window would store {entries} entries; use the radial quotient"
        )));
    }
    let mut offsets = Vec::with_capacity(radius + 2);
    let mut total = 0usize;
    for &s in sizes {
        offsets.push(total);
        total += s as usize;
    }
    let mut b = GraphBuilder::new(total);
    for r in 0..radius {
        let (a, bsz, d) = (sizes[r], sizes[r + 1], p.gplus()[r]);
        if d > bsz {
            return Err(Error::NotRealizable {
                radius: r,
                reason: format!("g+ = {d} exceeds S(r+1) = {bsz}"),
            });
        }
        for i in 0..a {
            for t in 0..d {
                let j = (i * d + t) % bsz;
                b.edge(
                    VertexId::from(offsets[r] + i as usize),
                    VertexId::from(offsets[r + 1] + j as usize),
                    1.0,
                );
            }
        }
    }
    for x in offsets[radius]..total {
        b.set_frontier(VertexId::from(x), true);
    }
    b.set_root(Some(VertexId(0)));
    b.build()
}

/// Nested windows with shared ids and a shared root.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowChain<T> {
    windows: Vec<GraphWindow<T>>,
    radii: Vec<usize>,
}

impl<T: Scalar> WindowChain<T> {
    /// Checks nesting: each window's vertices keep their ids, measures and
    /// (for vertices interior to the smaller window) their neighborhoods, and
    /// lie in the interior of the next window.
    pub fn new(windows: Vec<GraphWindow<T>>, radii: Vec<usize>) -> Result<Self> {
        if windows.len() != radii.len() {
            return Err(Error::Mismatch("one radius per window".into()));
        }
        for w in windows.windows(2) {
            let (small, big) = (&w[0], &w[1]);
            if small.root() != big.root() || small.len() > big.len() {
                return Err(Error::Mismatch("windows are not nested".into()));
            }
            for x in small.vertices() {
                if big.is_frontier(x) || small.mu(x) != big.mu(x) {
                    return Err(Error::Mismatch(format!("vertex {x} not interior to the next window")));
                }
                if !small.is_frontier(x) {
                    let a: Vec<_> = small.neighbors(x).collect();
                    let b: Vec<_> = big.neighbors(x).collect();
                    if a != b {
                        return Err(Error::Mismatch(format!("neighborhood of {x} changes")));
                    }
                }
            }
        }
        if radii.windows(2).any(|r| r[0] >= r[1]) {
            return Err(Error::Mismatch("radii must increase".into()));
        }
        Ok(WindowChain { windows, radii })
    }

    pub fn windows(&self) -> &[GraphWindow<T>] {
        &self.windows
    }

    pub fn radii(&self) -> &[usize] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn root(&self) -> Option<VertexId> {
        self.windows.first().and_then(|w| w.root())
    }
}

pub fn materialize_chain(p: &RadialProfile, radii: &[usize]) -> Result<WindowChain<f64>> {
    let windows = radii
        .iter()
        .map(|&r| materialize_window(p, r))
        .collect::<Result<Vec<_>>>()?;
    WindowChain::new(windows, radii.to_vec())
}

/// Radial quotient of `B_R`: the weighted path with `mu(r) = S(r)` and
/// `b(r, r+1) = S(r) g_+(r)`. Radial functions on a weakly symmetric graph
/// see exactly this Laplacian, so solutions with radial data coincide.
pub fn radial_quotient(p: &RadialProfile, radius: usize) -> Result<GraphWindow<f64>> {
    if radius > p.horizon() {
        return Err(Error::param(format!(
            "radius {radius} beyond profile horizon {}",
            p.horizon()
        )));
    }
    let mut b = GraphBuilder::new(radius + 1);
    for r in 0..=radius {
        b.set_mu(VertexId::from(r), p.sizes()[r] as f64);
    }
    for r in 0..radius {
        let w = p.sizes()[r] as f64 * p.gplus()[r] as f64;
        b.edge(VertexId::from(r), VertexId::from(r + 1), w);
    }
    b.set_frontier(VertexId::from(radius), true)
        .set_root(Some(VertexId(0)));
    b.build()
}

pub fn quotient_chain(p: &RadialProfile, radii: &[usize]) -> Result<WindowChain<f64>> {
    let windows = radii
        .iter()
        .map(|&r| radial_quotient(p, r))
        .collect::<Result<Vec<_>>>()?;
    WindowChain::new(windows, radii.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;
    use crate::radial::radial_statistics;

    #[test]
    fn cubic_sizes() {
        let p = build_spherically_symmetric(&SphereRule::Polynomial(3.0), 4).unwrap();
        assert_eq!(p.sizes(), &[1, 8, 27, 64, 125]);
        assert_eq!(p.gplus()[4], 216);
        assert_eq!(p.gminus()[1], 1);
    }

    #[test]
    fn fractional_exponent_uses_ceiling() {
        let p = build_spherically_symmetric(&SphereRule::Polynomial(2.5), 3).unwrap();
        assert_eq!(p.sizes(), &[1, 6, 16, 32]);
    }

    #[test]
    fn factorial_overflow_reported() {
        assert!(build_spherically_symmetric(&SphereRule::Factorial, 10).is_ok());
        assert_eq!(
            build_spherically_symmetric(&SphereRule::Factorial, 25).unwrap_err(),
            Error::Overflow(21)
        );
    }

    #[test]
    fn cubic_window_counts() {
        let p = build_spherically_symmetric(&SphereRule::Polynomial(3.0), 4).unwrap();
        let g = materialize_window(&p, 2).unwrap();
        assert_eq!(g.len(), 36);
        assert_eq!(g.edges().len(), 8 + 8 * 27);
        assert!(validate_graph(&g).is_valid());
        assert_eq!(g.frontier_len(), 27);
    }

    #[test]
    fn tree_window_matches_profile() {
        let p = build_kary_tree(3, 4).unwrap();
        let g = materialize_window(&p, 4).unwrap();
        let s = radial_statistics(&g).unwrap();
        for x in g.interior() {
            let r = s.radius[x.index()];
            assert_eq!(s.m_plus[x.index()], p.gplus()[r]);
            assert_eq!(s.m_minus[x.index()], p.gminus()[r]);
        }
        assert_eq!(g.edges().len(), g.len() - 1);
    }

    #[test]
    fn unrealizable_profile() {
        // two vertices per sphere, each wants three forward neighbors
        let p = RadialProfile::new(vec![1, 2, 2], vec![2, 3, 3], vec![0, 1, 3], Tail::None, false);
        let p = p.unwrap();
        assert!(matches!(
            materialize_window(&p, 2),
            Err(Error::NotRealizable { radius: 1, .. })
        ));
    }

    #[test]
    fn chains_nest() {
        let p = build_spherically_symmetric(&SphereRule::Polynomial(2.0), 6).unwrap();
        let c = materialize_chain(&p, &[2, 4, 6]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(quotient_chain(&p, &[2, 4, 6]).is_ok());
        let bad = vec![materialize_window(&p, 4).unwrap(), materialize_window(&p, 2).unwrap()];
        assert!(WindowChain::new(bad, vec![4, 2]).is_err());
    }

    #[test]
    fn path_and_pendant() {
        let g = build_path(5);
        assert_eq!(g.degree(VertexId(0)), 1.0);
        assert_eq!(g.degree(VertexId(3)), 2.0);
        assert!(validate_graph(&g).is_valid());
        let t = build_pendant_tree(|n| n, 6);
        for n in 1..6u32 {
            assert_eq!(t.degree(VertexId(n)), f64::from(n + 2));
        }
        assert!(validate_graph(&t).is_valid());
    }
}
