//! The binary end to end: exit codes, file round trips and reports.

use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use stograph::builders::{build_kary_tree, build_spherically_symmetric, SphereRule};
use stograph::{GraphBuilder, RadialProfile, Tail, VertexId};
use stograph_cli::format::{parse_graph, parse_profile, write_graph, write_profile};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn stograph(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_stograph"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let r = stograph(dir, args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

fn cubic_file(dir: &Path, horizon: usize) -> String {
    let h = horizon.to_string();
    ok(dir, &["build", "gs", "--exponent", "3", "--horizon", &h, "-o", "gs_cubic.prof"]);
    "gs_cubic.prof".into()
}

#[test]
fn build_roundtrips_profile() {
    let d = TempDir::new().unwrap();
    let f = cubic_file(d.path(), 30);
    let text = std::fs::read_to_string(d.path().join(&f)).unwrap();
    let parsed = parse_profile(&text).unwrap();
    let direct = build_spherically_symmetric(&SphereRule::Polynomial(3.0), 30).unwrap();
    assert_eq!(parsed, direct);
    assert_eq!(write_profile(&parsed), text);
}

#[test]
fn analyze_cubic_incomplete() {
    let d = TempDir::new().unwrap();
    let f = cubic_file(d.path(), 30);
    let out = ok(d.path(), &["analyze", "--profile", &f, "--criteria", "all"]);
    assert!(out.contains("verdict: Incomplete via weakly-symmetric"), "{out}");
    assert!(out.contains("ratio-curvature"));
}

#[test]
fn oracle_writes_csv() {
    let d = TempDir::new().unwrap();
    let f = cubic_file(d.path(), 30);
    let out = ok(
        d.path(),
        &["oracle", "--profile", &f, "--lambda", "1", "--radii", "12,18,24,30", "--csv", "scan.csv"],
    );
    assert!(out.contains("verdict: Incomplete via oracle-elliptic"), "{out}");
    let csv = std::fs::read_to_string(d.path().join("scan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("radius,lambda,root_value,residual,iterations"));
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let radii: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(radii, ["12", "18", "24", "30"]);
    let vals: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    assert!((vals[0] - 0.8015793886).abs() < 1e-9);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < 1e-9);
    }
}

#[test]
fn tree_is_complete_with_heat_and_mc() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["build", "tree", "--arity", "2", "--horizon", "12", "-o", "t.prof"]);
    let out = ok(
        d.path(),
        &["analyze", "--profile", "t.prof", "--radii", "4,8,12", "--tmax", "2", "--mc-paths", "2000", "--seed", "7"],
    );
    assert!(out.contains("kplus (") && out.contains("verdict: Complete via"), "{out}");
    assert!(out.contains("oracle-heat") && out.contains("oracle-mc"));
    let again = ok(
        d.path(),
        &["analyze", "--profile", "t.prof", "--radii", "4,8,12", "--tmax", "2", "--mc-paths", "2000", "--seed", "7"],
    );
    let mc = |s: &str| s.lines().find(|l| l.contains("paths, seed")).unwrap().to_string();
    assert_eq!(mc(&out), mc(&again));
}

#[test]
fn glued_surgery_pipeline() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    ok(p, &["build", "tree", "--arity", "2", "--horizon", "8", "-o", "tree.prof"]);
    ok(p, &["build", "window", "--profile", "tree.prof", "-o", "tree.graph"]);
    ok(p, &["build", "gs", "--exponent", "3", "--horizon", "10", "-o", "c.prof"]);
    ok(p, &["build", "quotient", "--profile", "c.prof", "-o", "c.graph"]);
    let out = ok(p, &["surgery", "glue", "--graph", "tree.graph", "--graph2", "c.graph", "-o", "g.graph"]);
    assert!(out.contains("second graph ids start at 511"), "{out}");
    let out = ok(p, &["surgery", "check", "--graph", "g.graph", "--vertices", "511-521", "--n", "2"]);
    assert!(out.contains("condition 2 holds"), "{out}");
    let out = ok(
        p,
        &["surgery", "propagate", "--graph", "g.graph", "--vertices", "511-521", "--n", "2", "--subprofile", "c.prof"],
    );
    assert!(out.contains("graph: Incomplete"), "{out}");
    let out = ok(p, &["oracle", "--graph", "g.graph", "--radii", "4,6,8"]);
    assert!(out.contains("oracle-elliptic"));
    let out = ok(p, &["report", "--graph", "g.graph"]);
    assert!(out.contains("radius,sphere,ball,boundary"));
}

#[test]
fn restrict_and_high_degree_write_graphs() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    ok(p, &["build", "path", "--horizon", "6", "-o", "path.graph"]);
    ok(p, &["surgery", "restrict", "--graph", "path.graph", "--vertices", "1-6", "-o", "sub.graph"]);
    let g = parse_graph(&std::fs::read_to_string(p.join("sub.graph")).unwrap()).unwrap();
    assert_eq!(g.len(), 6);
    assert_eq!(g.frontier().collect::<Vec<_>>(), [VertexId::from(0), VertexId::from(5)]);
    let text = ok(p, &["surgery", "high-degree", "--graph", "path.graph", "--n", "1"]);
    assert_eq!(parse_graph(&text).unwrap().len(), 5);
}

#[test]
fn exit_code_matrix() {
    let d = TempDir::new().unwrap();
    let p = d.path();
    std::fs::write(p.join("loop.graph"), "# stograph graph v1\nvertices 2\nedge 0 0 1.0\n").unwrap();
    std::fs::write(
        p.join("conflict.graph"),
        "# stograph graph v1\nvertices 2\nedge 0 1 1.0\nedge 1 0 2.0\n",
    )
    .unwrap();
    std::fs::write(p.join("noheader.graph"), "vertices 2\n").unwrap();
    std::fs::write(
        p.join("bad.prof"),
        "# stograph profile v1\nhorizon 2\nsphere 0 1 2 0\nsphere 1 2 2 1\nsphere 2 4 1 2\n",
    )
    .unwrap();
    std::fs::write(
        p.join("ok.graph"),
        "# stograph graph v1\nvertices 3\nedge 0 1 1\nedge 1 2 1\nroot 0\nfrontier 2\n",
    )
    .unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["analyze", "--graph", "ok.graph"], 0),
        (&["oracle", "--graph", "ok.graph"], 0),
        (&["report", "--graph", "ok.graph"], 0),
        (&["analyze", "--graph", "loop.graph"], 2),
        (&["analyze", "--graph", "conflict.graph"], 2),
        (&["analyze", "--graph", "noheader.graph"], 2),
        (&["analyze", "--graph", "missing.graph"], 2),
        (&["analyze", "--profile", "bad.prof"], 2),
        (&["analyze", "--graph", "ok.graph", "--criteria", "kplus"], 2),
        (&["analyze", "--graph", "ok.graph", "--profile", "bad.prof"], 2),
        (&["oracle", "--graph", "ok.graph", "--radii", "2,1"], 2),
        (&["oracle", "--graph", "ok.graph", "--lambda", "-1"], 2),
        (&["build", "gs", "--horizon", "3"], 2),
        (&["build", "gs", "--horizon", "3", "--exponent", "2", "--base", "2"], 2),
        (&["nonsense"], 2),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        let r = stograph(p, args);
        assert_eq!(r.code, *code, "{args:?}: {}{}", r.stdout, r.stderr);
    }
    let r = stograph(p, &["analyze", "--profile", "bad.prof"]);
    assert!(r.stderr.contains("radius 2"), "{}", r.stderr);
    let r = stograph(p, &["analyze", "--graph", "conflict.graph"]);
    assert!(r.stderr.contains(":4:"), "{}", r.stderr);
}

#[test]
fn conflict_maps_to_three() {
    let e = stograph_cli::CliError::Conflict("a".into(), "b".into());
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn profile_tails_roundtrip() {
    let tree = build_kary_tree(3, 5).unwrap();
    assert_eq!(parse_profile(&write_profile(&tree)).unwrap(), tree);
    let fact = build_spherically_symmetric(&SphereRule::Factorial, 8).unwrap();
    let text = write_profile(&fact);
    assert!(text.contains("tail factorial"));
    assert_eq!(parse_profile(&text).unwrap(), fact);
    let scaled = RadialProfile::new(
        vec![1, 2, 4],
        vec![2, 2, 2],
        vec![0, 1, 1],
        Tail::Exponential { base: 2.0, scale: 1.0 },
        false,
    )
    .unwrap();
    assert_eq!(parse_profile(&write_profile(&scaled)).unwrap(), scaled);
}

proptest! {
    #[test]
    fn graph_roundtrip(
        n in 1usize..20,
        edges in prop::collection::vec((0usize..20, 0usize..20, 1e-3f64..1e3), 0..50),
        mu in prop::collection::vec(prop_oneof![Just(1.0f64), 1e-3f64..1e3], 20),
        frontier in prop::collection::vec(any::<bool>(), 20),
        root in prop::option::of(0usize..20),
    ) {
        let mut b = GraphBuilder::new(n);
        let mut seen = std::collections::HashSet::new();
        for (x, y, w) in edges {
            let (x, y) = (x % n, y % n);
            if x != y && seen.insert((x.min(y), x.max(y))) {
                b.edge(VertexId::from(x), VertexId::from(y), w);
            }
        }
        for i in 0..n {
            b.set_mu(VertexId::from(i), mu[i]);
            b.set_frontier(VertexId::from(i), frontier[i]);
        }
        b.set_root(root.map(|r| VertexId::from(r % n)));
        let g = b.build().unwrap();
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&back), text);
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.measures(), g.measures());
        prop_assert_eq!(back.root(), g.root());
        prop_assert_eq!(back.frontier().collect::<Vec<_>>(), g.frontier().collect::<Vec<_>>());
    }

    #[test]
    fn profile_roundtrip(p in 0.0f64..4.0, h in 1usize..25) {
        let prof = build_spherically_symmetric(&SphereRule::Polynomial(p), h).unwrap();
        let text = write_profile(&prof);
        prop_assert_eq!(parse_profile(&text).unwrap(), prof);
    }
}
