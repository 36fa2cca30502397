//! Line-based graph and profile files.
//!
//! Graph:
//! ```text
//! # stograph graph v1
//! vertices 3
//! mu 2 0.5
//! edge 0 1 1
//! edge 1 2 2.5
//! root 0
//! frontier 2
//! ```
//!
//! Profile:
//! ```text
//! # stograph profile v1
//! horizon 2
//! sphere 0 1 8 0
//! sphere 1 8 27 1
//! sphere 2 27 64 8
//! tail poly 3
//! join complete
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use stograph::{validate_graph, Graph, GraphBuilder, RadialProfile, Tail, VertexId};

use crate::CliError;

pub const GRAPH_HEADER: &str = "# stograph graph v1";
pub const PROFILE_HEADER: &str = "# stograph profile v1";

fn perr(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1. The header line
/// is checked and skipped.
fn lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>, CliError> {
    let mut it = text.lines();
    match it.next() {
        Some(first) if first.trim_end() == header => {}
        _ => return Err(perr(1, format!("expected header `{header}`"))),
    }
    Ok(it
        .enumerate()
        .filter_map(|(i, l)| {
            let body = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 2, toks))
        })
        .collect())
}

fn num<T: FromStr>(line: usize, tok: Option<&&str>, what: &str) -> Result<T, CliError> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("cannot parse {what} from `{tok}`")))
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), CliError> {
    if toks.len() != n {
        return Err(perr(
            line,
            format!("`{}` takes {} arguments, got {}", toks[0], n - 1, toks.len() - 1),
        ));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Graph, CliError> {
    let lines = lines(text, GRAPH_HEADER)?;
    let mut n: Option<usize> = None;
    let mut mu: BTreeMap<usize, f64> = BTreeMap::new();
    let mut edges: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut root = None;
    let mut frontier = Vec::new();
    let id = |line: usize, tok: Option<&&str>, n: Option<usize>| -> Result<usize, CliError> {
        let n = n.ok_or_else(|| perr(line, "`vertices` must come first"))?;
        let x: usize = num(line, tok, "vertex id")?;
        if x >= n {
            return Err(perr(line, format!("vertex id {x} out of range (vertices {n})")));
        }
        Ok(x)
    };
    for (line, toks) in &lines {
        let line = *line;
        match toks[0] {
            "vertices" => {
                arity(line, toks, 2)?;
                if n.is_some() {
                    return Err(perr(line, "duplicate `vertices` line"));
                }
                n = Some(num(line, toks.get(1), "vertex count")?);
            }
            "mu" => {
                arity(line, toks, 3)?;
                let x = id(line, toks.get(1), n)?;
                let m: f64 = num(line, toks.get(2), "measure")?;
                if mu.insert(x, m).is_some() {
                    return Err(perr(line, format!("measure of {x} given twice")));
                }
            }
            "edge" => {
                arity(line, toks, 4)?;
                let x = id(line, toks.get(1), n)?;
                let y = id(line, toks.get(2), n)?;
                let w: f64 = num(line, toks.get(3), "weight")?;
                if x == y {
                    return Err(perr(line, format!("loop at vertex {x}: b(x, x) must be 0")));
                }
                let key = (x.min(y), x.max(y));
                if let Some(&(old, at)) = edges.get(&key) {
                    if old != w {
                        return Err(perr(
                            line,
                            format!("edge {x} {y} has weight {w} but line {at} gave {old}"),
                        ));
                    }
                } else {
                    edges.insert(key, (w, line));
                }
            }
            "root" => {
                arity(line, toks, 2)?;
                if root.is_some() {
                    return Err(perr(line, "duplicate `root` line"));
                }
                root = Some(id(line, toks.get(1), n)?);
            }
            "frontier" => {
                for t in &toks[1..] {
                    frontier.push(id(line, Some(t), n)?);
                }
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| perr(1, "missing `vertices` line"))?;
    let mut b = GraphBuilder::new(n);
    for (&x, &m) in &mu {
        b.set_mu(VertexId::from(x), m);
    }
    for (&(x, y), &(w, _)) in &edges {
        b.edge(VertexId::from(x), VertexId::from(y), w);
    }
    for x in frontier {
        b.set_frontier(VertexId::from(x), true);
    }
    b.set_root(root.map(VertexId::from));
    let g = b.build()?;
    let report = validate_graph(&g);
    if !report.is_valid() {
        return Err(CliError::Invalid(format!("{report}")));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "{GRAPH_HEADER}").unwrap();
    writeln!(s, "vertices {}", g.len()).unwrap();
    for x in g.vertices() {
        if g.mu(x) != 1.0 {
            writeln!(s, "mu {x} {}", g.mu(x)).unwrap();
        }
    }
    for (x, y, w) in g.edges() {
        writeln!(s, "edge {x} {y} {w}").unwrap();
    }
    if let Some(r) = g.root() {
        writeln!(s, "root {r}").unwrap();
    }
    let fr: Vec<String> = g.frontier().map(|x| x.to_string()).collect();
    if !fr.is_empty() {
        writeln!(s, "frontier {}", fr.join(" ")).unwrap();
    }
    s
}

fn parse_tail(line: usize, toks: &[&str]) -> Result<Tail, CliError> {
    let kind = toks.get(1).ok_or_else(|| perr(line, "missing tail kind"))?;
    let arg = |i: usize, what: &str| num::<f64>(line, toks.get(i), what);
    let opt = |i: usize, what: &str, d: f64| {
        if toks.len() > i {
            arg(i, what)
        } else {
            Ok(d)
        }
    };
    let tail = match *kind {
        "poly" => {
            if toks.len() != 3 && toks.len() != 5 {
                return Err(perr(line, "`tail poly` takes p or p scale shift"));
            }
            Tail::Polynomial {
                exponent: arg(2, "exponent")?,
                scale: opt(3, "scale", 1.0)?,
                shift: opt(4, "shift", 1.0)?,
            }
        }
        "exp" => {
            if toks.len() != 3 && toks.len() != 4 {
                return Err(perr(line, "`tail exp` takes q or q scale"));
            }
            Tail::Exponential {
                base: arg(2, "base")?,
                scale: opt(3, "scale", 1.0)?,
            }
        }
        "factorial" => {
            if toks.len() > 3 {
                return Err(perr(line, "`tail factorial` takes at most a scale"));
            }
            Tail::Factorial {
                scale: opt(2, "scale", 1.0)?,
            }
        }
        "none" => Tail::None,
        other => return Err(perr(line, format!("unknown tail kind `{other}`"))),
    };
    Ok(tail)
}

pub fn parse_profile(text: &str) -> Result<RadialProfile, CliError> {
    let lines = lines(text, PROFILE_HEADER)?;
    let mut horizon: Option<usize> = None;
    let mut spheres: BTreeMap<usize, (u64, u64, u64)> = BTreeMap::new();
    let mut tail = Tail::None;
    let mut join = false;
    for (line, toks) in &lines {
        let line = *line;
        match toks[0] {
            "horizon" => {
                arity(line, toks, 2)?;
                if horizon.is_some() {
                    return Err(perr(line, "duplicate `horizon` line"));
                }
                horizon = Some(num(line, toks.get(1), "horizon")?);
            }
            "sphere" => {
                arity(line, toks, 5)?;
                let r: usize = num(line, toks.get(1), "radius")?;
                let v = (
                    num(line, toks.get(2), "sphere size")?,
                    num(line, toks.get(3), "g+")?,
                    num(line, toks.get(4), "g-")?,
                );
                if spheres.insert(r, v).is_some() {
                    return Err(perr(line, format!("sphere {r} given twice")));
                }
            }
            "tail" => tail = parse_tail(line, toks)?,
            "join" => {
                if toks.get(1) != Some(&"complete") || toks.len() != 2 {
                    return Err(perr(line, "expected `join complete`"));
                }
                join = true;
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    let horizon = horizon.ok_or_else(|| perr(1, "missing `horizon` line"))?;
    let (mut s, mut gp, mut gm) = (Vec::new(), Vec::new(), Vec::new());
    for r in 0..=horizon {
        let &(a, b, c) = spheres
            .get(&r)
            .ok_or_else(|| CliError::Invalid(format!("missing sphere line for radius {r}")))?;
        s.push(a);
        gp.push(b);
        gm.push(c);
    }
    if let Some((&r, _)) = spheres.range(horizon + 1..).next() {
        return Err(CliError::Invalid(format!("sphere {r} beyond horizon {horizon}")));
    }
    Ok(RadialProfile::new(s, gp, gm, tail, join)?)
}

pub fn write_profile(p: &RadialProfile) -> String {
    let mut s = String::new();
    writeln!(s, "{PROFILE_HEADER}").unwrap();
    writeln!(s, "horizon {}", p.horizon()).unwrap();
    for r in 0..=p.horizon() {
        writeln!(
            s,
            "sphere {r} {} {} {}",
            p.sizes()[r],
            p.gplus()[r],
            p.gminus()[r]
        )
        .unwrap();
    }
    match p.tail() {
        Tail::None => {}
        Tail::Polynomial {
            exponent,
            scale,
            shift,
        } => {
            if scale == 1.0 && shift == 1.0 {
                writeln!(s, "tail poly {exponent}").unwrap();
            } else {
                writeln!(s, "tail poly {exponent} {scale} {shift}").unwrap();
            }
        }
        Tail::Exponential { base, scale } => {
            if scale == 1.0 {
                writeln!(s, "tail exp {base}").unwrap();
            } else {
                writeln!(s, "tail exp {base} {scale}").unwrap();
            }
        }
        Tail::Factorial { scale } => {
            if scale == 1.0 {
                writeln!(s, "tail factorial").unwrap();
            } else {
                writeln!(s, "tail factorial {scale}").unwrap();
            }
        }
    }
    if p.is_join_complete() {
        writeln!(s, "join complete").unwrap();
    }
    s
}
