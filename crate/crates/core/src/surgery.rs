//! Subgraph restriction, gluing and the two stability rules that move
//! verdicts between a graph and a subgraph.
//!
//! Rule one: if `W` is incomplete and either the interface degrees inside
//! `W` or the outward weights from `W` are bounded by `n`, the whole graph
//! is incomplete. Rule two: the whole graph incomplete forces
//! `{Deg > n}` incomplete, so a complete high-degree part makes the whole
//! graph complete.

use std::collections::VecDeque;
use std::fmt;

use crate::builders::WindowChain;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, GraphWindow, VertexId};
use crate::scalar::Scalar;
use crate::verdict::{Caveat, Certificate, Region, Status, TheoremTag, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurgeryRule {
    /// Bounded interface degree inside `W`.
    InterfaceDegree,
    /// Bounded outward weight from `W`.
    OutwardWeight,
    /// Whole graph incomplete, so the high-degree part is.
    HighDegree,
    /// High-degree part complete, so the whole graph is.
    HighDegreeContrapositive,
}

impl SurgeryRule {
    pub fn name(self) -> &'static str {
        match self {
            SurgeryRule::InterfaceDegree => "interface-degree",
            SurgeryRule::OutwardWeight => "outward-weight",
            SurgeryRule::HighDegree => "high-degree",
            SurgeryRule::HighDegreeContrapositive => "high-degree-contrapositive",
        }
    }
}

impl fmt::Display for SurgeryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurgeryCertificate {
    pub rule: SurgeryRule,
    pub n: f64,
    /// `sup Deg_W` over interface vertices (0 without an interface).
    pub interface_degree_sup: f64,
    /// `sup (1/mu) sum_{y not in W} b(x, y)` over `W`.
    pub outward_weight_sup: f64,
    pub subset_size: usize,
    pub window_size: usize,
}

impl SurgeryCertificate {
    pub fn to_certificate(&self) -> Certificate {
        Certificate::new(TheoremTag::Stability)
            .param("rule", self.rule.name())
            .param("n", self.n)
            .param("interface_degree_sup", self.interface_degree_sup)
            .param("outward_weight_sup", self.outward_weight_sup)
            .param("subset_size", self.subset_size)
            .region(Region::Window(self.window_size))
    }
}

/// Induced subgraph together with the id map back into the parent window.
#[derive(Debug, Clone)]
pub struct Subgraph<T> {
    pub graph: GraphWindow<T>,
    /// `parent[i]` is the parent id of subgraph vertex `i`.
    pub parent: Vec<VertexId>,
    /// Subgraph ids whose membership or degree could not be decided exactly.
    pub flagged: Vec<VertexId>,
}

impl<T: Scalar> Subgraph<T> {
    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Subgraph id of a parent vertex.
    pub fn local(&self, x: VertexId) -> Option<VertexId> {
        self.parent.binary_search(&x).ok().map(VertexId::from)
    }
}

fn membership<T: Scalar>(g: &GraphWindow<T>, w: &[VertexId]) -> Result<Vec<bool>> {
    let mut inside = vec![false; g.len()];
    for &x in w {
        if !g.contains(x) {
            return Err(Error::UnknownVertex(x));
        }
        inside[x.index()] = true;
    }
    Ok(inside)
}

/// Induced subgraph on `w` with weights and measures restricted. Vertices of
/// `w` that lose a neighbor become frontier, as do old frontier vertices.
/// An empty `w` gives an empty graph, returned with no flags.
pub fn restrict_subgraph<T: Scalar>(g: &GraphWindow<T>, w: &[VertexId]) -> Result<Subgraph<T>> {
    let inside = membership(g, w)?;
    let parent: Vec<VertexId> = g.vertices().filter(|x| inside[x.index()]).collect();
    let mut local = vec![u32::MAX; g.len()];
    for (i, x) in parent.iter().enumerate() {
        local[x.index()] = i as u32;
    }
    let mut b = GraphBuilder::new(parent.len());
    for (i, &x) in parent.iter().enumerate() {
        let xi = VertexId::from(i);
        b.set_mu(xi, g.mu(x));
        let mut dropped = g.is_frontier(x);
        for (y, wt) in g.neighbors(x) {
            if inside[y.index()] {
                b.entry(xi, local[y.index()], wt);
            } else {
                dropped = true;
            }
        }
        b.set_frontier(xi, dropped);
    }
    let root = g.root().and_then(|r| inside[r.index()].then(|| VertexId(local[r.index()])));
    b.set_root(root);
    Ok(Subgraph {
        graph: b.build()?,
        parent,
        flagged: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConditions {
    pub cond1: bool,
    pub cond2: bool,
    pub certificate: SurgeryCertificate,
    /// The parent window has frontier vertices inside `W`, so the suprema
    /// only cover the materialized part.
    pub window_limited: bool,
}

impl StabilityConditions {
    pub fn holds(&self) -> bool {
        self.cond1 || self.cond2
    }
}

/// Evaluates both interface conditions for `w` with bound `n`. An interface
/// vertex (one with a neighbor outside `w`) on the frontier is rejected since
/// its degree would only be a lower bound.
pub fn stability_conditions_check<T: Scalar>(
    g: &GraphWindow<T>,
    w: &[VertexId],
    n: f64,
) -> Result<StabilityConditions> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::param(format!("n must be finite and >= 1, got {n}")));
    }
    let inside = membership(g, w)?;
    let mut deg_sup = 0.0f64;
    let mut out_sup = 0.0f64;
    let mut window_limited = false;
    let mut size = 0;
    for x in g.vertices().filter(|x| inside[x.index()]) {
        size += 1;
        let mu = g.mu(x).f64();
        let (mut inner, mut outer) = (0.0, 0.0);
        for (y, wt) in g.neighbors(x) {
            if inside[y.index()] {
                inner += wt.f64();
            } else {
                outer += wt.f64();
            }
        }
        if outer > 0.0 {
            if g.is_frontier(x) {
                return Err(Error::InterfaceOnFrontier(x));
            }
            deg_sup = deg_sup.max(inner / mu);
        }
        if g.is_frontier(x) {
            window_limited = true;
        }
        out_sup = out_sup.max(outer / mu);
    }
    let cond1 = deg_sup < n;
    let cond2 = out_sup < n;
    let rule = if cond2 || !cond1 {
        SurgeryRule::OutwardWeight
    } else {
        SurgeryRule::InterfaceDegree
    };
    Ok(StabilityConditions {
        cond1,
        cond2,
        certificate: SurgeryCertificate {
            rule,
            n,
            interface_degree_sup: deg_sup,
            outward_weight_sup: out_sup,
            subset_size: size,
            window_size: g.len(),
        },
        window_limited,
    })
}

/// Vertex set `{Deg > n}` of the window. Frontier vertices have only a lower
/// bound for their degree: they are kept when that bound already exceeds `n`
/// and otherwise dropped, and in both cases flagged.
pub fn high_degree_set<T: Scalar>(g: &GraphWindow<T>, n: f64) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::param(format!("n must be finite and >= 1, got {n}")));
    }
    let mut keep = Vec::new();
    let mut flagged = Vec::new();
    for x in g.vertices() {
        if g.is_frontier(x) {
            flagged.push(x);
        }
        if g.degree(x).f64() > n {
            keep.push(x);
        }
    }
    Ok((keep, flagged))
}

/// Induced subgraph on `{Deg > n}`; see [`high_degree_set`] for the frontier.
pub fn high_degree_subgraph<T: Scalar>(g: &GraphWindow<T>, n: f64) -> Result<Subgraph<T>> {
    let (keep, flagged) = high_degree_set(g, n)?;
    let mut sub = restrict_subgraph(g, &keep)?;
    sub.flagged = flagged.into_iter().filter_map(|x| sub.local(x)).collect();
    Ok(sub)
}

#[derive(Debug, Clone)]
pub struct Glued<T> {
    pub graph: GraphWindow<T>,
    /// Ids of the first graph are unchanged; the second is shifted by this.
    pub offset: usize,
    pub x1: VertexId,
    pub x2: VertexId,
}

impl<T> Glued<T> {
    pub fn first(&self, x: VertexId) -> VertexId {
        x
    }

    pub fn second(&self, x: VertexId) -> VertexId {
        VertexId::from(x.index() + self.offset)
    }

    /// Ids of the second graph's vertices in the glued window.
    pub fn second_part(&self, len: usize) -> Vec<VertexId> {
        (self.offset..self.offset + len).map(VertexId::from).collect()
    }
}

/// Disjoint union of two windows plus one edge `x1 ~ x2` of weight `w`.
/// Keeps the root of `g1` and both frontiers. Entries that point outside a
/// window are dropped; they only occur on frontier vertices.
pub fn glue_at_edge<T: Scalar>(
    g1: &GraphWindow<T>,
    g2: &GraphWindow<T>,
    x1: VertexId,
    x2: VertexId,
    w: T,
) -> Result<Glued<T>> {
    if !g1.contains(x1) {
        return Err(Error::UnknownVertex(x1));
    }
    if !g2.contains(x2) {
        return Err(Error::UnknownVertex(x2));
    }
    if !(w.f64() > 0.0) || !w.f64().is_finite() {
        return Err(Error::param(format!("glue weight must be positive, got {w}")));
    }
    let off = g1.len();
    let mut b = GraphBuilder::new(off + g2.len());
    for (g, shift) in [(g1, 0), (g2, off)] {
        for x in g.vertices() {
            let xi = VertexId::from(x.index() + shift);
            b.set_mu(xi, g.mu(x));
            b.set_frontier(xi, g.is_frontier(x));
            for (y, wt) in g.neighbors(x) {
                b.entry(xi, (y.index() + shift) as u32, wt);
            }
        }
    }
    let y2 = VertexId::from(x2.index() + off);
    b.edge(x1, y2, w);
    b.set_root(g1.root());
    Ok(Glued {
        graph: b.build_validated()?,
        offset: off,
        x1,
        x2: y2,
    })
}

fn sorted_set(w: &[VertexId]) -> Vec<VertexId> {
    let mut v = w.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Transfers a verdict on `W` to the whole window.
///
/// `Incomplete` on `W` with either interface condition gives `Incomplete`.
/// `Complete` on `W = {Deg > n}` gives `Complete`. Anything else is
/// `Unknown`. Conditions must come from the same `(g, W, n)`.
pub fn propagate_verdict<T: Scalar>(
    g: &GraphWindow<T>,
    w: &[VertexId],
    verdict_w: &Verdict,
    conditions: Option<&StabilityConditions>,
    n: f64,
) -> Result<Verdict> {
    let set = sorted_set(w);
    if let Some(c) = conditions {
        let fresh = stability_conditions_check(g, &set, n)?;
        if fresh.certificate != c.certificate || fresh.cond1 != c.cond1 || fresh.cond2 != c.cond2 {
            return Err(Error::Mismatch("conditions were computed for other inputs".into()));
        }
    }
    let stub = |rule: SurgeryRule| SurgeryCertificate {
        rule,
        n,
        interface_degree_sup: 0.0,
        outward_weight_sup: 0.0,
        subset_size: set.len(),
        window_size: g.len(),
    };
    let inherit = |mut v: Verdict, limited: bool| {
        for &c in &verdict_w.caveats {
            v = v.caveat(c);
        }
        if limited {
            v = v.caveat(Caveat::HorizonLimited);
        }
        v
    };
    match verdict_w.status {
        Status::Unknown => Ok(Verdict::unknown(
            stub(SurgeryRule::OutwardWeight).to_certificate().chained(verdict_w.certificate.clone()),
            "subgraph verdict is unknown",
        )),
        Status::Incomplete => match conditions {
            Some(c) if c.holds() => {
                let mut cert = c.certificate.clone();
                cert.rule = if c.cond2 {
                    SurgeryRule::OutwardWeight
                } else {
                    SurgeryRule::InterfaceDegree
                };
                let v = Verdict::incomplete(cert.to_certificate().chained(verdict_w.certificate.clone()));
                Ok(inherit(v, c.window_limited))
            }
            Some(c) => Ok(Verdict::unknown(
                c.certificate.to_certificate().chained(verdict_w.certificate.clone()),
                format!("neither interface condition holds with n = {n}"),
            )),
            None => Ok(Verdict::unknown(
                stub(SurgeryRule::OutwardWeight).to_certificate().chained(verdict_w.certificate.clone()),
                "no interface conditions supplied",
            )),
        },
        Status::Complete => {
            let (high, flagged) = high_degree_set(g, n)?;
            let cert = stub(SurgeryRule::HighDegreeContrapositive)
                .to_certificate()
                .chained(verdict_w.certificate.clone());
            if high != set {
                return Ok(Verdict::unknown(cert, format!("subset is not the set Deg > {n}")));
            }
            let v = Verdict::complete(cert);
            Ok(inherit(v, !flagged.is_empty()))
        }
    }
}

/// Aggregates per-component verdicts: `Incomplete` if any component is,
/// `Complete` if all are, else `Unknown`.
pub fn combine_components(verdicts: &[Verdict]) -> Verdict {
    let mut cert = Certificate::new(TheoremTag::Stability)
        .param("rule", "components")
        .param("components", verdicts.len());
    for v in verdicts {
        cert = cert.chained(v.certificate.clone());
    }
    let caveats = |mut out: Verdict| {
        for v in verdicts {
            for &c in &v.caveats {
                out = out.caveat(c);
            }
        }
        out
    };
    if verdicts.iter().any(|v| v.status == Status::Incomplete) {
        caveats(Verdict::incomplete(cert))
    } else if verdicts.iter().all(|v| v.status == Status::Complete) {
        caveats(Verdict::complete(cert))
    } else {
        Verdict::unknown(cert, "some component is undecided")
    }
}

/// Induced subgraphs of the connected components.
pub fn split_components<T: Scalar>(g: &GraphWindow<T>) -> Result<Vec<Subgraph<T>>> {
    g.connected_components()
        .iter()
        .map(|c| restrict_subgraph(g, c))
        .collect()
}

/// Combinatorial ball of radius `r` around `center`, relabeled in BFS order
/// (neighbors by increasing id) so balls of growing radius share ids.
/// The sphere at distance `r` and old frontier vertices form the frontier.
pub fn ball_window<T: Scalar>(g: &GraphWindow<T>, center: VertexId, r: usize) -> Result<Subgraph<T>> {
    if !g.contains(center) {
        return Err(Error::UnknownVertex(center));
    }
    let mut dist = vec![usize::MAX; g.len()];
    let mut order = vec![center];
    dist[center.index()] = 0;
    let mut queue = VecDeque::from([center]);
    while let Some(x) = queue.pop_front() {
        if dist[x.index()] == r {
            continue;
        }
        for (y, _) in g.neighbors(x) {
            if dist[y.index()] == usize::MAX {
                dist[y.index()] = dist[x.index()] + 1;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let mut local = vec![u32::MAX; g.len()];
    for (i, x) in order.iter().enumerate() {
        local[x.index()] = i as u32;
    }
    let mut b = GraphBuilder::new(order.len());
    for (i, &x) in order.iter().enumerate() {
        let xi = VertexId::from(i);
        b.set_mu(xi, g.mu(x));
        b.set_frontier(xi, g.is_frontier(x) || dist[x.index()] == r);
        for (y, wt) in g.neighbors(x) {
            if local[y.index()] != u32::MAX {
                b.entry(xi, local[y.index()], wt);
            }
        }
    }
    b.set_root(Some(VertexId(0)));
    Ok(Subgraph {
        graph: b.build()?,
        parent: order,
        flagged: Vec::new(),
    })
}

/// Nested balls around `center` for the given increasing radii.
pub fn ball_chain<T: Scalar>(g: &GraphWindow<T>, center: VertexId, radii: &[usize]) -> Result<WindowChain<T>> {
    let windows = radii
        .iter()
        .map(|&r| ball_window(g, center, r).map(|s| s.graph))
        .collect::<Result<Vec<_>>>()?;
    WindowChain::new(windows, radii.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_path, build_pendant_tree};
    use crate::graph::validate_graph;

    fn ids(v: &[usize]) -> Vec<VertexId> {
        v.iter().map(|&i| VertexId::from(i)).collect()
    }

    #[test]
    fn restrict_whole_is_identity() {
        let g = build_path(6);
        let all: Vec<_> = g.vertices().collect();
        let s = restrict_subgraph(&g, &all).unwrap();
        assert_eq!(s.graph.edges(), g.edges());
        assert_eq!(s.graph.frontier().collect::<Vec<_>>(), g.frontier().collect::<Vec<_>>());
        assert_eq!(s.graph.root(), g.root());
    }

    #[test]
    fn restrict_path_tail() {
        let g = build_path(6);
        let w = ids(&[1, 2, 3, 4, 5, 6]);
        let s = restrict_subgraph(&g, &w).unwrap();
        assert_eq!(s.graph.len(), 6);
        // old vertex 1 is local 0, old frontier 6 is local 5
        let fr: Vec<_> = s.graph.frontier().map(|x| s.parent[x.index()]).collect();
        assert_eq!(fr, ids(&[1, 6]));
        assert!(validate_graph(&s.graph).is_valid());
        assert_eq!(s.graph.root(), None);
    }

    #[test]
    fn empty_restriction() {
        let g = build_path(3);
        let s = restrict_subgraph(&g, &[]).unwrap();
        assert!(s.is_empty());
        assert!(restrict_subgraph(&g, &ids(&[9])).is_err());
    }

    #[test]
    fn pendant_spine_cond1() {
        // leaves stop at the frontier so no interface vertex is frontier
        let r = 8;
        let g = build_pendant_tree(|n| if n < r { n } else { 0 }, r);
        let spine: Vec<_> = (0..=r).map(VertexId::from).collect();
        let c = stability_conditions_check(&g, &spine, 3.0).unwrap();
        assert!(c.cond1);
        assert_eq!(c.certificate.interface_degree_sup, 2.0);
        assert_eq!(c.certificate.outward_weight_sup, (r - 1) as f64);
        assert!(!c.cond2);
        assert!(c.window_limited);
        let tight = stability_conditions_check(&g, &spine, 2.0).unwrap();
        assert!(!tight.cond1);
    }

    #[test]
    fn interface_on_frontier_rejected() {
        let g = build_path(4);
        // W = {0..3}: vertex 3 is interior with neighbor 4 outside; fine.
        assert!(stability_conditions_check(&g, &ids(&[0, 1, 2, 3]), 2.0).is_ok());
        // W = {4}: the frontier vertex 4 has neighbor 3 outside.
        assert_eq!(
            stability_conditions_check(&g, &ids(&[4]), 2.0),
            Err(Error::InterfaceOnFrontier(VertexId::from(4)))
        );
    }

    #[test]
    fn high_degree_path() {
        let g = build_path(8);
        let s = high_degree_subgraph(&g, 1.0).unwrap();
        assert_eq!(s.parent, ids(&[1, 2, 3, 4, 5, 6, 7]));
        assert!(high_degree_subgraph(&g, 2.0).unwrap().is_empty());
        assert!(high_degree_subgraph(&g, 0.5).is_err());
    }

    #[test]
    fn glue_counts_and_degree() {
        let g1 = build_path(3);
        let g2 = build_path(5);
        let gl = glue_at_edge(&g1, &g2, VertexId::from(0), VertexId::from(0), 0.5).unwrap();
        assert_eq!(gl.graph.len(), 10);
        assert_eq!(gl.graph.edges().len(), 3 + 5 + 1);
        assert!((gl.graph.degree(VertexId::from(0)) - g1.degree(VertexId::from(0)) - 0.5).abs() < 1e-15);
        assert_eq!(gl.graph.root(), g1.root());
        assert!(glue_at_edge(&g1, &g2, VertexId::from(9), VertexId::from(0), 1.0).is_err());
        assert!(glue_at_edge(&g1, &g2, VertexId::from(0), VertexId::from(0), 0.0).is_err());
    }

    #[test]
    fn balls_nest() {
        let g = build_pendant_tree(|n| n % 3, 10);
        let c = ball_chain(&g, g.root().unwrap(), &[2, 4, 6, 8]).unwrap();
        assert_eq!(c.len(), 4);
        let b = ball_window(&g, VertexId::from(0), 0).unwrap();
        assert_eq!(b.graph.len(), 1);
        assert_eq!(b.graph.frontier_len(), 1);
    }
}
