//! Iterated global weighted degree `Deg_{Theta,k}` and the bounded global
//! degree completeness test.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexId};
use crate::radial::RadialProfile;
use crate::scalar::Scalar;
use crate::verdict::{Certificate, Region, TheoremTag, Verdict, Caveat};

/// Values within this distance above a threshold do not exceed it.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Non-decreasing thresholds `a_k`; the last one repeats forever.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDegreeSchedule {
    thresholds: Vec<f64>,
}

impl GlobalDegreeSchedule {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::param("schedule needs at least one threshold"));
        }
        if thresholds.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
            return Err(Error::param("thresholds must be finite and nonnegative"));
        }
        if thresholds.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("thresholds must be non-decreasing"));
        }
        Ok(GlobalDegreeSchedule { thresholds })
    }

    pub fn constant(n: f64) -> Result<Self> {
        GlobalDegreeSchedule::new(vec![n])
    }

    pub fn threshold(&self, k: usize) -> f64 {
        self.thresholds[k.min(self.thresholds.len() - 1)]
    }
}

fn exceeds<T: Scalar>(v: T, a: T) -> bool {
    v > a + T::of(THRESHOLD_TOL)
}

/// `Deg_{Theta,0} = Deg`.
pub fn global_degree_bootstrap<T: Scalar>(g: &GraphWindow<T>) -> Vec<T> {
    g.vertices().map(|x| g.degree(x)).collect()
}

/// One step `Deg_{k+1}(x) = (1/mu(x)) sum_{y: Deg_k(y) > a_k} b(x,y)`.
pub fn global_degree_step<T: Scalar>(g: &GraphWindow<T>, prev: &[T], threshold: T) -> Result<Vec<T>> {
    if !(threshold >= T::zero()) {
        return Err(Error::param("threshold must be nonnegative"));
    }
    if prev.len() != g.len() {
        return Err(Error::Mismatch(format!(
            "{} previous values for {} vertices",
            prev.len(),
            g.len()
        )));
    }
    let n = g.len();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let x = VertexId::from(i);
            let mut s = T::zero();
            for (y, w) in g.neighbors(x) {
                if exceeds(prev[y.index()], threshold) {
                    s = s + w;
                }
            }
            s / g.mu(x)
        })
        .collect())
}

/// Iterates of the global degree together with where they are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDegreeTable<T> {
    /// `values[k][x] = Deg_{Theta,k}(x)`
    pub values: Vec<Vec<T>>,
    /// `exact[k][x]`: unaffected by truncation, i.e. at distance `>= k+1`
    /// from the frontier.
    pub exact: Vec<Vec<bool>>,
    /// First `k` with `Deg_{k+1} = Deg_k` on the exact region of step `k+1`.
    pub converged_at: Option<usize>,
    /// Per iteration, the largest radius whose whole ball is exact (needs
    /// a root).
    pub interior_valid_radius: Vec<Option<usize>>,
}

impl<T: Scalar> GlobalDegreeTable<T> {
    pub fn iterations(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, x: VertexId, k: usize) -> T {
        self.values[k][x.index()]
    }

    pub fn is_exact(&self, x: VertexId, k: usize) -> bool {
        self.exact[k][x.index()]
    }

    /// Last computed iterate, which is the limit on the exact region when
    /// the iteration converged.
    pub fn last(&self) -> &[T] {
        self.values.last().expect("table has iteration 0")
    }
}

fn valid_radius<T: Scalar>(g: &GraphWindow<T>, exact: &[bool]) -> Option<usize> {
    let root = g.root()?;
    let dist = g.distances_from([root]);
    let mut first_bad: Option<usize> = None;
    let mut rmax = 0;
    for (i, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            rmax = rmax.max(d);
            if !exact[i] {
                first_bad = Some(first_bad.map_or(d, |b| b.min(d)));
            }
        }
    }
    match first_bad {
        None => Some(rmax),
        Some(0) => None,
        Some(b) => Some(b - 1),
    }
}

pub fn global_degree_limit<T: Scalar>(
    g: &GraphWindow<T>,
    schedule: &GlobalDegreeSchedule,
    k_max: usize,
) -> Result<GlobalDegreeTable<T>> {
    if k_max < 1 {
        return Err(Error::param("k_max must be at least 1"));
    }
    let mut values = vec![global_degree_bootstrap(g)];
    let mut exact: Vec<Vec<bool>> = vec![g.vertices().map(|x| !g.is_frontier(x)).collect()];
    let mut converged_at = None;
    for k in 0..k_max {
        let next = global_degree_step(g, &values[k], T::of(schedule.threshold(k)))?;
        let prev_exact = &exact[k];
        let next_exact: Vec<bool> = g
            .vertices()
            .map(|x| prev_exact[x.index()] && g.neighbors(x).all(|(y, _)| prev_exact[y.index()]))
            .collect();
        let same = next_exact
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .all(|(i, _)| next[i] == values[k][i]);
        let any_exact = next_exact.iter().any(|&e| e);
        values.push(next);
        exact.push(next_exact);
        if same && any_exact {
            converged_at = Some(k);
            break;
        }
        if !any_exact {
            break;
        }
    }
    let interior_valid_radius = exact.iter().map(|e| valid_radius(g, e)).collect();
    Ok(GlobalDegreeTable {
        values,
        exact,
        converged_at,
        interior_valid_radius,
    })
}

/// Input of the bounded global degree test.
#[derive(Debug, Clone, Copy)]
pub enum DegreeSource<'a, T> {
    Window(&'a GraphWindow<T>),
    Profile(&'a RadialProfile),
}

/// Completeness from a uniform bound on `Deg_{n,k}`. Never returns
/// `Incomplete`.
pub fn bounded_degree_completeness_test<T: Scalar>(
    source: DegreeSource<'_, T>,
    n: f64,
    k_max: usize,
) -> Result<Verdict> {
    if !(n >= 1.0) && k_max >= 1 {
        return Err(Error::param("parameter n must be at least 1"));
    }
    match source {
        DegreeSource::Profile(p) => profile_test(p, n),
        DegreeSource::Window(g) => window_test(g, n, k_max),
    }
}

fn profile_test(p: &RadialProfile, n: f64) -> Result<Verdict> {
    let cert = Certificate::new(TheoremTag::BoundedGlobalDegree).param("n", n);
    let head_max = (0..=p.horizon())
        .filter_map(|r| p.degree(r))
        .fold(0.0, f64::max);
    let (Some(gp), Some(gm)) = (p.gplus_expr(), p.gminus_expr()) else {
        return Ok(Verdict::unknown(
            cert.region(Region::Radius(p.horizon())),
            "profile has no tail; degree bound beyond the horizon unknown",
        ));
    };
    let deg = gp.plus(gm);
    let asym = deg.asymptotic()?;
    match asym.is_bounded() {
        Some(true) => {
            // bounded tail: the sup is attained or approached within a
            // bounded stretch; scan well past the horizon
            let horizon = p.horizon() as i64;
            let tail_max = (horizon + 1..horizon + 10_000)
                .map(|r| deg.eval(r))
                .fold(f64::NEG_INFINITY, f64::max);
            let limit = asym.leading().map_or(0.0, |t| t.coef);
            let bound = head_max.max(tail_max).max(limit);
            Ok(Verdict::complete(
                cert.param("k", 0usize)
                    .param("bound", bound)
                    .param("justification", format!("degree tail {asym} is bounded"))
                    .region(Region::RadiusWithTail(p.horizon())),
            ))
        }
        Some(false) => Ok(Verdict::unknown(
            cert.param("k", 0usize).region(Region::RadiusWithTail(p.horizon())),
            format!(
                "degree grows like {asym}; every neighbor eventually exceeds n, so no iterate is bounded"
            ),
        )),
        None => Ok(Verdict::unknown(
            cert,
            format!("cannot decide boundedness of degree tail {asym}"),
        )),
    }
}

fn window_test<T: Scalar>(g: &GraphWindow<T>, n: f64, k_max: usize) -> Result<Verdict> {
    let cert = Certificate::new(TheoremTag::BoundedGlobalDegree).param("n", n);
    if g.is_empty() {
        return Ok(Verdict::unknown(cert, "empty window"));
    }
    let dist = g.distance_to_frontier();
    let table = if k_max >= 1 {
        Some(global_degree_limit(g, &GlobalDegreeSchedule::constant(n)?, k_max)?)
    } else {
        None
    };
    let deg0 = global_degree_bootstrap(g);
    let iterations = table.as_ref().map_or(0, |t| t.iterations());
    for k in 0..=iterations {
        let values = match &table {
            Some(t) => &t.values[k],
            None => &deg0,
        };
        // safe region: distance >= k+1 from the frontier (all of a window
        // without reachable frontier)
        let depth = |i: usize| dist[i].unwrap_or(usize::MAX);
        let safe: Vec<usize> = (0..g.len()).filter(|&i| depth(i) > k).collect();
        if safe.is_empty() {
            break;
        }
        let bound = safe.iter().map(|&i| values[i].f64()).fold(0.0, f64::max);
        if g.frontier_len() == 0 {
            return Ok(Verdict::complete(
                cert.param("k", k)
                    .param("bound", bound)
                    .param("justification", "window has no frontier")
                    .region(Region::Window(g.len())),
            ));
        }
        let lo = k + 1;
        let hi = safe
            .iter()
            .map(|&i| depth(i))
            .filter(|&d| d != usize::MAX)
            .max()
            .unwrap_or(lo);
        if hi <= lo {
            continue;
        }
        let mid = lo + (hi - lo) / 2;
        let shallow = safe
            .iter()
            .filter(|&&i| depth(i) <= mid)
            .map(|&i| values[i].f64())
            .fold(0.0, f64::max);
        let deep = safe
            .iter()
            .filter(|&&i| depth(i) > mid)
            .map(|&i| values[i].f64())
            .fold(0.0, f64::max);
        if shallow <= deep {
            return Ok(Verdict::complete(
                cert.param("k", k)
                    .param("bound", bound)
                    .param(
                        "justification",
                        format!(
                            "max of Deg_(n,{k}) near the frontier ({shallow}) does not exceed the max deeper inside ({deep})"
                        ),
                    )
                    .region(Region::Vertices(safe.iter().map(|&i| VertexId::from(i)).collect())),
            )
            .caveat(Caveat::HorizonLimited));
        }
    }
    Ok(Verdict::unknown(
        cert.param("k_max", k_max),
        "global degree keeps growing toward the frontier at every iteration",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_path, build_pendant_tree};
    use crate::verdict::Status;

    #[test]
    fn bootstrap_is_weighted_degree() {
        let g = build_pendant_tree(|n| n, 5);
        let d = global_degree_bootstrap(&g);
        for x in g.vertices() {
            assert_eq!(d[x.index()], crate::graph::weighted_degree(&g, x).unwrap().value);
        }
    }

    #[test]
    fn empty_sum_is_zero() {
        let g = build_path(3);
        let prev = vec![0.5; 4];
        assert_eq!(global_degree_step(&g, &prev, 1.0).unwrap(), vec![0.0; 4]);
        assert!(global_degree_step(&g, &prev, -1.0).is_err());
    }

    #[test]
    fn zero_threshold_is_stationary() {
        let g = build_pendant_tree(|n| n % 3, 8);
        let t = global_degree_limit(&g, &GlobalDegreeSchedule::constant(0.0).unwrap(), 5).unwrap();
        assert_eq!(t.converged_at, Some(0));
        assert_eq!(t.values[1], t.values[0]);
    }

    #[test]
    fn path_wave() {
        let g = build_path(20);
        let t = global_degree_limit(&g, &GlobalDegreeSchedule::constant(1.0).unwrap(), 6).unwrap();
        for k in 1..=6 {
            for j in 0..20u32 {
                let x = VertexId(j);
                if t.is_exact(x, k) {
                    // the endpoint has degree 1, so zeros trail the front
                    let j = j as usize;
                    let want = if j + 2 <= k {
                        0.0
                    } else if j <= k {
                        1.0
                    } else {
                        2.0
                    };
                    assert_eq!(t.value(x, k), want, "k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn path_is_complete_at_k0() {
        let v = bounded_degree_completeness_test(DegreeSource::Window(&build_path(30)), 1.0, 5).unwrap();
        assert_eq!(v.status, Status::Complete);
        assert_eq!(v.certificate.real("k"), Some(0.0));
        assert_eq!(v.certificate.real("bound"), Some(2.0));
    }

    #[test]
    fn pendant_tree_needs_one_iteration() {
        let g = build_pendant_tree(|n| n, 40);
        let v = bounded_degree_completeness_test(DegreeSource::Window(&g), 1.0, 10).unwrap();
        assert_eq!(v.status, Status::Complete);
        assert_eq!(v.certificate.real("k"), Some(1.0));
        assert!(v.certificate.real("bound").unwrap() <= 2.0);
    }
}
