//! Weighted graph windows: finite fragments of an infinite weighted graph
//! `(V, b, mu)` together with a frontier marking where the fragment was cut.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense vertex index inside a [`GraphWindow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Anything that can be looked up by vertex: dense tables and sparse maps.
pub trait VertexValues<T> {
    fn value(&self, x: VertexId) -> Option<T>;
}

impl<T: Copy> VertexValues<T> for [T] {
    fn value(&self, x: VertexId) -> Option<T> {
        self.get(x.index()).copied()
    }
}

impl<T: Copy> VertexValues<T> for Vec<T> {
    fn value(&self, x: VertexId) -> Option<T> {
        self.get(x.index()).copied()
    }
}

impl<T: Copy> VertexValues<T> for [Option<T>] {
    fn value(&self, x: VertexId) -> Option<T> {
        self.get(x.index()).copied().flatten()
    }
}

impl<T: Copy> VertexValues<T> for HashMap<VertexId, T> {
    fn value(&self, x: VertexId) -> Option<T> {
        self.get(&x).copied()
    }
}

impl<T: Copy> VertexValues<T> for BTreeMap<VertexId, T> {
    fn value(&self, x: VertexId) -> Option<T> {
        self.get(&x).copied()
    }
}

/// Finite weighted graph fragment stored in compressed sparse row form.
///
/// Entries are stored as given, so an invalid window (asymmetric weights,
/// loops, dangling references) can be represented and then reported by
/// [`validate_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphWindow<T> {
    mu: Vec<T>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<T>,
    frontier: Vec<bool>,
    root: Option<VertexId>,
}

impl<T: Scalar> GraphWindow<T> {
    pub fn empty() -> Self {
        GraphBuilder::new(0).build().expect("empty window")
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).map(VertexId::from)
    }

    pub fn contains(&self, x: VertexId) -> bool {
        x.index() < self.len()
    }

    fn check(&self, x: VertexId) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(x))
        }
    }

    pub fn mu(&self, x: VertexId) -> T {
        self.mu[x.index()]
    }

    pub fn measures(&self) -> &[T] {
        &self.mu
    }

    pub fn is_frontier(&self, x: VertexId) -> bool {
        self.frontier[x.index()]
    }

    pub fn frontier(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.frontier
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| VertexId::from(i))
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.iter().filter(|&&f| f).count()
    }

    pub fn interior(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&x| !self.is_frontier(x))
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    /// Stored entries `(y, b(x, y))` of row `x`, including dangling ones.
    pub fn raw_row(&self, x: VertexId) -> impl Iterator<Item = (u32, T)> + '_ {
        let range = self.offsets[x.index()]..self.offsets[x.index() + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Neighbors of `x` inside the window with their edge weights, in
    /// increasing id order.
    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = (VertexId, T)> + '_ {
        let n = self.len();
        self.raw_row(x)
            .filter(move |&(y, _)| (y as usize) < n)
            .map(|(y, w)| (VertexId(y), w))
    }

    pub fn weight(&self, x: VertexId, y: VertexId) -> Option<T> {
        let range = self.offsets[x.index()]..self.offsets[x.index() + 1];
        let row = &self.targets[range.clone()];
        row.binary_search(&y.0)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    pub fn neighbor_count(&self, x: VertexId) -> usize {
        self.neighbors(x).count()
    }

    /// Number of stored directed entries.
    pub fn entry_count(&self) -> usize {
        self.targets.len()
    }

    /// Undirected edges `(x, y, b)` with `x < y`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, T)> {
        let mut out = Vec::new();
        for x in self.vertices() {
            for (y, w) in self.neighbors(x) {
                if x < y {
                    out.push((x, y, w));
                }
            }
        }
        out
    }

    /// `sum_y b(x, y)` over neighbors inside the window.
    pub fn weight_sum(&self, x: VertexId) -> T {
        let mut s = T::zero();
        for (_, w) in self.neighbors(x) {
            s = s + w;
        }
        s
    }

    /// `Deg(x)` without the frontier flag. Panics on an unknown id.
    pub fn degree(&self, x: VertexId) -> T {
        self.weight_sum(x) / self.mu(x)
    }

    pub fn max_interior_degree(&self) -> T {
        self.interior()
            .map(|x| self.degree(x))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn with_root(mut self, root: Option<VertexId>) -> Result<Self> {
        if let Some(r) = root {
            self.check(r)?;
        }
        self.root = root;
        Ok(self)
    }

    pub fn with_frontier<I: IntoIterator<Item = VertexId>>(mut self, frontier: I) -> Result<Self> {
        let mut flags = vec![false; self.len()];
        for x in frontier {
            self.check(x)?;
            flags[x.index()] = true;
        }
        self.frontier = flags;
        Ok(self)
    }

    /// Breadth-first graph distance from a set of sources; `None` when
    /// unreachable.
    pub fn distances_from<I: IntoIterator<Item = VertexId>>(&self, sources: I) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s.index()].is_none() {
                dist[s.index()] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x.index()].unwrap_or(0);
            for (y, _) in self.neighbors(x) {
                if dist[y.index()].is_none() {
                    dist[y.index()] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Distance of every vertex to the frontier (`None` if no frontier
    /// vertex is reachable, in which case truncation never matters).
    pub fn distance_to_frontier(&self) -> Vec<Option<usize>> {
        self.distances_from(self.frontier().collect::<Vec<_>>())
    }

    /// Connected components as sorted vertex lists.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut label = vec![usize::MAX; self.len()];
        let mut comps = Vec::new();
        for s in self.vertices() {
            if label[s.index()] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            label[s.index()] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                i += 1;
                for (y, _) in self.neighbors(x) {
                    if label[y.index()] == usize::MAX {
                        label[y.index()] = id;
                        members.push(y);
                    }
                }
            }
            members.sort();
            comps.push(members);
        }
        comps
    }

    /// Converts weights and measures to another scalar type.
    pub fn cast<U: Scalar>(&self) -> GraphWindow<U> {
        GraphWindow {
            mu: self.mu.iter().map(|m| U::of(m.f64())).collect(),
            offsets: self.offsets.clone(),
            targets: self.targets.clone(),
            weights: self.weights.iter().map(|w| U::of(w.f64())).collect(),
            frontier: self.frontier.clone(),
            root: self.root,
        }
    }
}

/// Incremental constructor for [`GraphWindow`].
#[derive(Debug, Clone)]
pub struct GraphBuilder<T> {
    mu: Vec<T>,
    entries: Vec<(u32, u32, T)>,
    frontier: Vec<bool>,
    root: Option<VertexId>,
}

impl<T: Scalar> GraphBuilder<T> {
    /// `n` vertices with unit measure and no edges.
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            mu: vec![T::one(); n],
            entries: Vec::new(),
            frontier: vec![false; n],
            root: None,
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn add_vertex(&mut self, mu: T) -> VertexId {
        self.mu.push(mu);
        self.frontier.push(false);
        VertexId::from(self.mu.len() - 1)
    }

    pub fn set_mu(&mut self, x: VertexId, mu: T) -> &mut Self {
        self.mu[x.index()] = mu;
        self
    }

    /// Symmetric edge: stores `b(x,y) = b(y,x) = w`.
    pub fn edge(&mut self, x: VertexId, y: VertexId, w: T) -> &mut Self {
        self.entries.push((x.0, y.0, w));
        if x != y {
            self.entries.push((y.0, x.0, w));
        }
        self
    }

    /// One directed entry `b(x, y) = w`, stored verbatim.
    pub fn entry(&mut self, x: VertexId, y: u32, w: T) -> &mut Self {
        self.entries.push((x.0, y, w));
        self
    }

    pub fn set_frontier(&mut self, x: VertexId, on: bool) -> &mut Self {
        self.frontier[x.index()] = on;
        self
    }

    pub fn set_root(&mut self, root: Option<VertexId>) -> &mut Self {
        self.root = root;
        self
    }

    pub fn build(self) -> Result<GraphWindow<T>> {
        let n = self.mu.len();
        if let Some(r) = self.root {
            if r.index() >= n {
                return Err(Error::UnknownVertex(r));
            }
        }
        let mut entries = self.entries;
        if let Some(&(x, _, _)) = entries.iter().find(|e| e.0 as usize >= n) {
            return Err(Error::UnknownVertex(VertexId(x)));
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut offsets = vec![0usize; n + 1];
        for &(x, _, _) in &entries {
            offsets[x as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = entries.iter().map(|e| e.1).collect();
        let weights = entries.iter().map(|e| e.2).collect();
        Ok(GraphWindow {
            mu: self.mu,
            offsets,
            targets,
            weights,
            frontier: self.frontier,
            root: self.root,
        })
    }

    /// Builds and rejects any window that fails [`validate_graph`].
    pub fn build_validated(self) -> Result<GraphWindow<T>> {
        let g = self.build()?;
        let report = validate_graph(&g);
        if report.is_valid() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(report.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Loop(VertexId),
    Asymmetry {
        x: VertexId,
        y: VertexId,
        forward: f64,
        backward: Option<f64>,
    },
    NonPositiveMeasure(VertexId),
    NonPositiveWeight(VertexId, VertexId),
    DuplicateEntry(VertexId, VertexId),
    DanglingEdge { x: VertexId, target: u32, frontier: bool },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop(x) => write!(f, "loop at {x}"),
            Violation::Asymmetry { x, y, forward, backward } => match backward {
                Some(b) => write!(f, "asymmetry b({x},{y})={forward} but b({y},{x})={b}"),
                None => write!(f, "asymmetry b({x},{y})={forward} but b({y},{x}) missing"),
            },
            Violation::NonPositiveMeasure(x) => write!(f, "nonpositive measure at {x}"),
            Violation::NonPositiveWeight(x, y) => write!(f, "nonpositive weight b({x},{y})"),
            Violation::DuplicateEntry(x, y) => write!(f, "duplicate entry b({x},{y})"),
            Violation::DanglingEdge { x, target, frontier } => {
                let kind = if *frontier { "frontier" } else { "interior" };
                write!(f, "{kind} vertex {x} references missing vertex {target}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the weighted graph axioms on a window. Every problem is reported;
/// nothing is thrown.
pub fn validate_graph<T: Scalar>(g: &GraphWindow<T>) -> ValidationReport {
    let n = g.len();
    let mut violations = Vec::new();
    for x in g.vertices() {
        let m = g.mu(x);
        if !(m > T::zero()) || !m.is_finite() {
            violations.push(Violation::NonPositiveMeasure(x));
        }
        let mut prev: Option<u32> = None;
        for (y, w) in g.raw_row(x) {
            if prev == Some(y) {
                violations.push(Violation::DuplicateEntry(x, VertexId(y)));
            }
            prev = Some(y);
            if y as usize >= n {
                violations.push(Violation::DanglingEdge {
                    x,
                    target: y,
                    frontier: g.is_frontier(x),
                });
                continue;
            }
            let y = VertexId(y);
            if y == x {
                violations.push(Violation::Loop(x));
                continue;
            }
            if !(w > T::zero()) || !w.is_finite() {
                violations.push(Violation::NonPositiveWeight(x, y));
            }
            let back = g.weight(y, x);
            if back != Some(w) && x < y || back.is_none() {
                violations.push(Violation::Asymmetry {
                    x,
                    y,
                    forward: w.f64(),
                    backward: back.map(Scalar::f64),
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Weighted degree together with whether it is only a lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeValue<T> {
    pub value: T,
    /// Set on frontier vertices, whose neighborhood is only partly known.
    pub lower_bound: bool,
}

/// `Deg(x) = (1/mu(x)) sum_y b(x,y)`.
pub fn weighted_degree<T: Scalar>(g: &GraphWindow<T>, x: VertexId) -> Result<DegreeValue<T>> {
    g.check(x)?;
    Ok(DegreeValue {
        value: g.degree(x),
        lower_bound: g.is_frontier(x),
    })
}

/// Formal Laplacian `(1/mu(x)) sum_y b(x,y) (f(x) - f(y))` at an interior
/// vertex.
pub fn apply_laplacian<T, F>(g: &GraphWindow<T>, f: &F, x: VertexId) -> Result<T>
where
    T: Scalar,
    F: VertexValues<T> + ?Sized,
{
    g.check(x)?;
    if g.is_frontier(x) {
        return Err(Error::FrontierVertex(x));
    }
    let fx = f.value(x).ok_or(Error::MissingValue(x))?;
    let mut acc = T::zero();
    for (y, w) in g.neighbors(x) {
        let fy = f.value(y).ok_or(Error::MissingValue(y))?;
        acc = acc + w * (fx - fy);
    }
    Ok(acc / g.mu(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn two_vertex() -> GraphWindow<f64> {
        let mut b = GraphBuilder::new(2);
        b.edge(v(0), v(1), 1.0);
        b.build().unwrap()
    }

    #[test]
    fn symmetric_unit_edge_is_valid() {
        assert!(validate_graph(&two_vertex()).is_valid());
    }

    #[test]
    fn asymmetric_weights_reported() {
        let mut b = GraphBuilder::<f64>::new(2);
        b.entry(v(0), 1, 1.0).entry(v(1), 0, 2.0);
        let report = validate_graph(&b.build().unwrap());
        assert!(matches!(report.violations[0], Violation::Asymmetry { .. }));
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn loop_reported() {
        let mut b = GraphBuilder::<f64>::new(1);
        b.entry(v(0), 0, 1.0);
        let report = validate_graph(&b.build().unwrap());
        assert_eq!(report.violations, vec![Violation::Loop(v(0))]);
    }

    #[test]
    fn bad_measure_and_dangling_reported() {
        let mut b = GraphBuilder::<f64>::new(2);
        b.set_mu(v(1), 0.0);
        b.entry(v(0), 5, 1.0);
        let report = validate_graph(&b.build().unwrap());
        assert!(report.violations.contains(&Violation::NonPositiveMeasure(v(1))));
        assert!(report.violations.iter().any(|x| matches!(x, Violation::DanglingEdge { target: 5, .. })));
    }

    #[test]
    fn empty_window_is_valid() {
        let g = GraphWindow::<f64>::empty();
        assert!(validate_graph(&g).is_valid());
        assert!(g.connected_components().is_empty());
    }

    #[test]
    fn degree_normalizations() {
        // star with three leaves
        let mut b = GraphBuilder::<f64>::new(4);
        for i in 1..4 {
            b.edge(v(0), v(i), 1.0);
        }
        let physical = b.clone().build().unwrap();
        assert_eq!(weighted_degree(&physical, v(0)).unwrap().value, 3.0);
        assert_eq!(weighted_degree(&physical, v(2)).unwrap().value, 1.0);
        b.set_mu(v(0), 3.0);
        let combinatorial = b.build().unwrap();
        for x in combinatorial.vertices() {
            assert_eq!(weighted_degree(&combinatorial, x).unwrap().value, 1.0);
        }
        let isolated = GraphBuilder::<f64>::new(1).build().unwrap();
        assert_eq!(weighted_degree(&isolated, v(0)).unwrap().value, 0.0);
        assert!(weighted_degree(&isolated, v(3)).is_err());
    }

    #[test]
    fn frontier_degree_is_lower_bound() {
        let g = two_vertex().with_frontier([v(1)]).unwrap();
        assert!(weighted_degree(&g, v(1)).unwrap().lower_bound);
        assert!(!weighted_degree(&g, v(0)).unwrap().lower_bound);
    }

    #[test]
    fn laplacian_examples() {
        let mut b = GraphBuilder::<f64>::new(5);
        for i in 0..4 {
            b.edge(v(i), v(i + 1), 1.0);
        }
        let g = b.build().unwrap().with_frontier([v(4)]).unwrap();
        let constant = vec![3.5; 5];
        assert_eq!(apply_laplacian(&g, &constant, v(2)).unwrap(), 0.0);
        let mut indicator = vec![0.0; 5];
        indicator[2] = 1.0;
        assert_eq!(apply_laplacian(&g, &indicator, v(2)).unwrap(), 2.0);
        let radius: Vec<f64> = (0..5).map(f64::from).collect();
        assert_eq!(apply_laplacian(&g, &radius, v(2)).unwrap(), 0.0);
        assert_eq!(apply_laplacian(&g, &radius, v(0)).unwrap(), -1.0);
        assert_eq!(apply_laplacian(&g, &radius, v(4)), Err(Error::FrontierVertex(v(4))));
        let partial: HashMap<VertexId, f64> = [(v(1), 1.0), (v(2), 2.0)].into_iter().collect();
        assert_eq!(apply_laplacian(&g, &partial, v(2)), Err(Error::MissingValue(v(3))));
    }

    #[test]
    fn distances_and_components() {
        let mut b = GraphBuilder::<f64>::new(5);
        b.edge(v(0), v(1), 1.0).edge(v(1), v(2), 1.0).edge(v(3), v(4), 1.0);
        let g = b.build().unwrap().with_frontier([v(2)]).unwrap();
        let d = g.distance_to_frontier();
        assert_eq!(d[..3], [Some(2), Some(1), Some(0)]);
        assert_eq!(d[3], None);
        assert_eq!(g.connected_components().len(), 2);
    }
}
