//! Argument definitions and subcommand implementations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stograph::builders::{
    build_kary_tree, build_path, build_pendant_tree, build_spherically_symmetric,
    materialize_window, quotient_chain, radial_quotient, SphereRule, WindowChain,
};
use stograph::criteria::{
    khasminskii_check, kplus_series_test, oy_violation_check, ratio_curvature_test,
    ratio_curvature_witness, weakly_symmetric_test, GammaInput, OyInput, RadialFunction,
};
use stograph::oracle::{
    elliptic_limit_scan, elliptic_window_solve, heat_deficit_scan, mc_explosion_estimate,
    ScanConfig,
};
use stograph::surgery::{
    ball_chain, glue_at_edge, high_degree_subgraph, propagate_verdict, restrict_subgraph,
    stability_conditions_check,
};
use stograph::{
    bounded_degree_completeness_test, radial_statistics, DegreeSource, Graph, RadialProfile,
    Verdict, VertexId,
};

use crate::format::{parse_graph, parse_profile, write_graph, write_profile};
use crate::report::{AnalysisReport, CriterionRun, OracleSection};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "stograph", version, about = "Stochastic completeness of weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run analytic criteria (and optionally the oracles) on an input.
    Analyze(AnalyzeArgs),
    /// Run the numerical oracles only.
    Oracle(OracleArgs),
    /// Write a profile or graph file for a named family.
    Build(BuildArgs),
    /// Restrict, glue and transfer verdicts between graphs.
    Surgery(SurgeryArgs),
    /// Print structural statistics of an input.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Radial profile file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleOpts {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Comma separated window radii, increasing.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<usize>>,
    /// Time horizon for the heat and Monte Carlo oracles.
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub mc_paths: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-radius elliptic scan output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Root values below this count as vanishing.
    #[arg(long, default_value_t = 1e-2)]
    pub theta: f64,
    /// Elliptic solver tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Relative change between the last two radii that counts as stable.
    #[arg(long, default_value_t = 1e-2)]
    pub rel_tol: f64,
    /// Heat solver tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub heat_tol: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: Input,
    /// Comma separated criterion names, or `all`.
    #[arg(long, default_value = "all")]
    pub criteria: String,
    /// Threshold `n` of the bounded global degree test.
    #[arg(long, default_value_t = 1.0)]
    pub degree_n: f64,
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,
    #[command(flatten)]
    pub oracle: OracleOpts,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub oracle: OracleOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Complete joins of consecutive spheres (profile).
    Gs,
    /// k-ary tree (profile).
    Tree,
    /// Half-line (graph).
    Path,
    /// Spine with pendant leaves (graph).
    Pendant,
    /// Explicit ball of a profile (graph).
    Window,
    /// Radial quotient of a profile (graph).
    Quotient,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub family: Family,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// `S(r) = ceil((r+1)^p)`.
    #[arg(long)]
    pub exponent: Option<f64>,
    /// `S(r) = q^r`.
    #[arg(long)]
    pub base: Option<u64>,
    /// `S(r) = r!`.
    #[arg(long)]
    pub factorial: bool,
    /// Explicit sphere sizes `S(0), S(1), ...`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<u64>>,
    #[arg(long, default_value_t = 2)]
    pub arity: u64,
    /// Spine vertex `n` carries `slope * n` leaves.
    #[arg(long, default_value_t = 1)]
    pub leaf_slope: usize,
    /// Source profile for `window` and `quotient`.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurgeryArgs {
    #[command(subcommand)]
    pub op: SurgeryOp,
}

#[derive(Debug, Subcommand)]
pub enum SurgeryOp {
    /// Disjoint union plus one edge; ids of the second graph are shifted.
    Glue {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        graph2: PathBuf,
        #[arg(long, default_value_t = 0)]
        x1: usize,
        #[arg(long, default_value_t = 0)]
        x2: usize,
        #[arg(long, default_value_t = 1.0)]
        weight: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Induced subgraph on a vertex set.
    Restrict {
        #[arg(long)]
        graph: PathBuf,
        /// Ids and ranges, e.g. `0-9,12`.
        #[arg(long)]
        vertices: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Induced subgraph on `{Deg > n}`.
    HighDegree {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate both interface conditions.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertices: String,
        #[arg(long)]
        n: f64,
    },
    /// Decide the subgraph from a profile, then transfer the verdict.
    Propagate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertices: String,
        #[arg(long)]
        n: f64,
        /// Radial profile describing the subgraph.
        #[arg(long)]
        subprofile: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

const PROFILE_CRITERIA: &[&str] = &[
    "weakly-symmetric",
    "kplus",
    "ratio-curvature",
    "oy-witness",
    "bounded-degree",
    "khasminskii",
];
const GRAPH_CRITERIA: &[&str] = &["bounded-degree"];

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

pub fn load_profile(path: &Path) -> Result<RadialProfile, CliError> {
    parse_profile(&read(path)?).map_err(|e| with_path(path, e))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Parse { line, msg } => {
            CliError::Invalid(format!("{}:{line}: {msg}", path.display()))
        }
        CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
        CliError::Core(c) => CliError::Invalid(format!("{}: {c}", path.display())),
        other => other,
    }
}

enum Loaded {
    Profile(RadialProfile),
    Graph(Graph),
}

fn load(input: &Input) -> Result<(Loaded, String), CliError> {
    match (&input.profile, &input.graph) {
        (Some(p), None) => Ok((Loaded::Profile(load_profile(p)?), p.display().to_string())),
        (None, Some(g)) => Ok((Loaded::Graph(load_graph(g)?), g.display().to_string())),
        _ => Err(CliError::Invalid("give exactly one of --profile or --graph".into())),
    }
}

/// Parses `0-9,12,15-16` into vertex ids.
pub fn parse_vertex_list(s: &str) -> Result<Vec<VertexId>, CliError> {
    let bad = |t: &str| CliError::Invalid(format!("bad vertex list entry `{t}`"));
    let mut out = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = t.split_once('-') {
            let a: usize = a.trim().parse().map_err(|_| bad(t))?;
            let b: usize = b.trim().parse().map_err(|_| bad(t))?;
            if b < a {
                return Err(bad(t));
            }
            out.extend((a..=b).map(VertexId::from));
        } else {
            out.push(VertexId::from(t.parse::<usize>().map_err(|_| bad(t))?));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn select(spec: &str, known: &[&str]) -> Result<Vec<String>, CliError> {
    if spec.trim() == "all" {
        return Ok(known.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if !known.contains(&name) {
            return Err(CliError::Invalid(format!(
                "unknown criterion `{name}` for this input; choose from {}",
                known.join(", ")
            )));
        }
        out.push(name.to_string());
    }
    Ok(out)
}

fn timed(name: &str, f: impl FnOnce() -> stograph::Result<Verdict>) -> CriterionRun {
    let t = Instant::now();
    let outcome = f().map_err(|e| e.to_string());
    CriterionRun {
        name: name.to_string(),
        outcome,
        elapsed: t.elapsed(),
    }
}

/// Parameters the profile criteria take from the command line.
#[derive(Debug, Clone, Copy)]
struct CriterionParams {
    lambda: f64,
    degree_n: f64,
    k_max: usize,
}

impl Default for CriterionParams {
    fn default() -> Self {
        CriterionParams {
            lambda: 1.0,
            degree_n: 1.0,
            k_max: 10,
        }
    }
}

fn profile_criterion(p: &RadialProfile, name: &str, args: CriterionParams) -> CriterionRun {
    timed(name, || match name {
        "weakly-symmetric" => weakly_symmetric_test(p),
        "kplus" => kplus_series_test(p),
        "ratio-curvature" => ratio_curvature_test(p),
        "oy-witness" => {
            let w = ratio_curvature_witness(p)?;
            oy_violation_check(
                OyInput::Profile {
                    profile: p,
                    f: &w.function,
                },
                w.alpha,
                w.c,
            )
        }
        "bounded-degree" => bounded_degree_completeness_test::<f64>(
            DegreeSource::Profile(p),
            args.degree_n,
            args.k_max,
        ),
        "khasminskii" => {
            let gamma = RadialFunction::radius(p.horizon());
            khasminskii_check(
                GammaInput::Profile {
                    profile: p,
                    gamma: &gamma,
                    a_radius: 0,
                },
                args.lambda,
            )
        }
        _ => unreachable!("criterion names are checked by select"),
    })
}

fn default_radii(h: usize) -> Vec<usize> {
    let mut r: Vec<usize> = (1..=4).map(|i| (h * (i + 4)).div_ceil(8)).collect();
    r.dedup();
    r
}

fn check_radii(radii: &[usize]) -> Result<(), CliError> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Invalid("--radii must be nonempty and increasing".into()));
    }
    Ok(())
}

fn write_scan_csv(path: &Path, lambda: f64, scan: &stograph::oracle::ScanResult) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Invalid(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["radius", "lambda", "root_value", "residual", "iterations"])
        .map_err(err)?;
    for ((r, v), s) in scan.radii.iter().zip(&scan.values).zip(&scan.solutions) {
        w.write_record([
            r.to_string(),
            lambda.to_string(),
            v.to_string(),
            format!("{:e}", s.residual),
            s.iterations.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn chain_oracles(
    chain: &WindowChain<f64>,
    opts: &OracleOpts,
    report: &mut AnalysisReport,
) -> Result<(), CliError> {
    let cfg = ScanConfig {
        lambda: opts.lambda,
        tol: opts.tol,
        theta: opts.theta,
        rel_tol: opts.rel_tol,
    };
    let scan = elliptic_limit_scan(chain, &cfg)?;
    let mut sec = OracleSection {
        title: "oracle-elliptic".into(),
        ..Default::default()
    };
    for ((r, v), s) in scan.radii.iter().zip(&scan.values).zip(&scan.solutions) {
        sec.lines.push(format!(
            "radius {r}: root value {v:.10} (residual {:.1e}, {} iterations)",
            s.residual, s.iterations
        ));
    }
    if let Some(p) = &opts.csv {
        write_scan_csv(p, opts.lambda, &scan)?;
    }
    sec.verdict = Some(scan.verdict);
    report.oracle.push(sec);

    let mut heat_deficit = None;
    if let Some(t) = opts.tmax {
        let (v, deficits) =
            heat_deficit_scan(chain, t, opts.heat_tol, opts.theta, opts.rel_tol)?;
        let mut sec = OracleSection {
            title: "oracle-heat".into(),
            ..Default::default()
        };
        for (r, d) in chain.radii().iter().zip(&deficits) {
            sec.lines.push(format!("radius {r}: mass deficit at t = {t}: {d:.8}"));
        }
        heat_deficit = deficits.last().copied();
        sec.verdict = Some(v);
        report.oracle.push(sec);
    }
    if let Some(paths) = opts.mc_paths {
        let t = opts.tmax.unwrap_or(1.0);
        let g = chain.windows().last().expect("chain is nonempty");
        let est = mc_explosion_estimate(g, t, paths, opts.seed)?;
        let mut sec = OracleSection {
            title: "oracle-mc".into(),
            ..Default::default()
        };
        sec.lines.push(format!(
            "radius {}: {} paths, seed {}: exit probability by t = {t}: {:.6} +- {:.6}",
            chain.radii().last().unwrap(),
            est.paths,
            est.seed,
            est.estimate,
            est.std_error
        ));
        if let Some(d) = heat_deficit {
            let se = est.std_error.max(est.null_std_error(d.clamp(0.0, 1.0)));
            sec.lines.push(format!(
                "heat deficit {d:.6}; difference {:.2} standard errors",
                (est.estimate - d).abs() / se.max(f64::MIN_POSITIVE)
            ));
        }
        report.oracle.push(sec);
    }
    Ok(())
}

fn oracle_sections(
    loaded: &Loaded,
    opts: &OracleOpts,
    report: &mut AnalysisReport,
) -> Result<(), CliError> {
    match loaded {
        Loaded::Profile(p) => {
            let radii = opts.radii.clone().unwrap_or_else(|| default_radii(p.horizon()));
            check_radii(&radii)?;
            let chain = quotient_chain(p, &radii)?;
            chain_oracles(&chain, opts, report)
        }
        Loaded::Graph(g) => match (&opts.radii, g.root()) {
            (Some(radii), Some(root)) => {
                check_radii(radii)?;
                let chain = ball_chain(g, root, radii)?;
                chain_oracles(&chain, opts, report)
            }
            (Some(_), None) => Err(CliError::Invalid("--radii needs a graph with a root".into())),
            (None, _) => {
                let s = elliptic_window_solve(g, opts.lambda, opts.tol)?;
                let mut sec = OracleSection {
                    title: "oracle-elliptic".into(),
                    ..Default::default()
                };
                if let Some(r) = g.root() {
                    sec.lines.push(format!("root value {:.10}", s.at(r)));
                }
                let min = g.interior().map(|x| s.at(x)).fold(f64::INFINITY, f64::min);
                sec.lines.push(format!(
                    "interior minimum {min:.10}; residual {:.1e}; a single window gives no verdict",
                    s.residual
                ));
                report.oracle.push(sec);
                Ok(())
            }
        },
    }
}

fn finish(report: &AnalysisReport, out: &mut dyn Write) -> Result<i32, CliError> {
    write!(out, "{report}").map_err(io)?;
    if let Some(c) = report.conflict() {
        return Err(CliError::Conflict(c.first, c.second));
    }
    Ok(0)
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (loaded, name) = load(&args.input)?;
    let mut report = AnalysisReport::new(name);
    match &loaded {
        Loaded::Profile(p) => {
            for c in select(&args.criteria, PROFILE_CRITERIA)? {
                let params = CriterionParams {
                    lambda: args.oracle.lambda,
                    degree_n: args.degree_n,
                    k_max: args.k_max,
                };
                report.criteria.push(profile_criterion(p, &c, params));
            }
        }
        Loaded::Graph(g) => {
            for c in select(&args.criteria, GRAPH_CRITERIA)? {
                report.criteria.push(timed(&c, || {
                    bounded_degree_completeness_test(DegreeSource::Window(g), args.degree_n, args.k_max)
                }));
            }
        }
    }
    let o = &args.oracle;
    if o.radii.is_some() || o.tmax.is_some() || o.mc_paths.is_some() {
        oracle_sections(&loaded, o, &mut report)?;
    }
    finish(&report, out)
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (loaded, name) = load(&args.input)?;
    let mut report = AnalysisReport::new(name);
    oracle_sections(&loaded, &args.oracle, &mut report)?;
    finish(&report, out)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("missing {flag}")))
}

fn build(args: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = match args.family {
        Family::Gs => {
            let h = need(args.horizon, "--horizon")?;
            let rules = [
                args.exponent.map(SphereRule::Polynomial),
                args.base.map(SphereRule::Exponential),
                args.factorial.then_some(SphereRule::Factorial),
                args.sizes.clone().map(SphereRule::Explicit),
            ];
            let mut chosen = rules.into_iter().flatten();
            let rule = chosen.next().ok_or_else(|| {
                CliError::Invalid("gs needs one of --exponent, --base, --factorial, --sizes".into())
            })?;
            if chosen.next().is_some() {
                return Err(CliError::Invalid("give only one sphere size rule".into()));
            }
            write_profile(&build_spherically_symmetric(&rule, h)?)
        }
        Family::Tree => write_profile(&build_kary_tree(args.arity, need(args.horizon, "--horizon")?)?),
        Family::Path => write_graph(&build_path(need(args.horizon, "--horizon")?)),
        Family::Pendant => {
            let s = args.leaf_slope;
            write_graph(&build_pendant_tree(move |n| s * n, need(args.horizon, "--horizon")?))
        }
        Family::Window | Family::Quotient => {
            let p = load_profile(&need(args.profile.clone(), "--profile")?)?;
            let r = args.radius.unwrap_or(p.horizon());
            let g = if args.family == Family::Window {
                materialize_window(&p, r)?
            } else {
                radial_quotient(&p, r)?
            };
            write_graph(&g)
        }
    };
    emit(out, args.output.as_deref(), &text)?;
    Ok(0)
}

fn conditions_text(c: &stograph::surgery::StabilityConditions) -> String {
    let k = &c.certificate;
    let mut s = format!(
        "subset {} of {} vertices, n = {}\n\
         interface degree sup {} -> condition 1 {}\n\
         outward weight sup {} -> condition 2 {}\n",
        k.subset_size,
        k.window_size,
        k.n,
        k.interface_degree_sup,
        if c.cond1 { "holds" } else { "fails" },
        k.outward_weight_sup,
        if c.cond2 { "holds" } else { "fails" },
    );
    if c.window_limited {
        s.push_str("note: the subset reaches the frontier; suprema cover the window only\n");
    }
    s
}

fn surgery(args: &SurgeryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    match &args.op {
        SurgeryOp::Glue {
            graph,
            graph2,
            x1,
            x2,
            weight,
            output,
        } => {
            let (a, b) = (load_graph(graph)?, load_graph(graph2)?);
            let gl = glue_at_edge(&a, &b, VertexId::from(*x1), VertexId::from(*x2), *weight)?;
            emit(out, output.as_deref(), &write_graph(&gl.graph))?;
            if output.is_some() {
                writeln!(
                    out,
                    "glued {} + {} vertices; second graph ids start at {}; edge {} ~ {}",
                    a.len(),
                    b.len(),
                    gl.offset,
                    gl.x1,
                    gl.x2
                )
                .map_err(io)?;
            }
        }
        SurgeryOp::Restrict {
            graph,
            vertices,
            output,
        } => {
            let g = load_graph(graph)?;
            let s = restrict_subgraph(&g, &parse_vertex_list(vertices)?)?;
            emit(out, output.as_deref(), &write_graph(&s.graph))?;
        }
        SurgeryOp::HighDegree { graph, n, output } => {
            let g = load_graph(graph)?;
            let s = high_degree_subgraph(&g, *n)?;
            emit(out, output.as_deref(), &write_graph(&s.graph))?;
            if output.is_some() {
                let ids: Vec<String> = s.parent.iter().map(|x| x.to_string()).collect();
                writeln!(out, "kept {} vertices: {}", s.parent.len(), ids.join(",")).map_err(io)?;
                if !s.flagged.is_empty() {
                    writeln!(out, "{} frontier vertices judged by a degree lower bound", s.flagged.len())
                        .map_err(io)?;
                }
            }
        }
        SurgeryOp::Check { graph, vertices, n } => {
            let g = load_graph(graph)?;
            let c = stability_conditions_check(&g, &parse_vertex_list(vertices)?, *n)?;
            out.write_all(conditions_text(&c).as_bytes()).map_err(io)?;
        }
        SurgeryOp::Propagate {
            graph,
            vertices,
            n,
            subprofile,
        } => {
            let g = load_graph(graph)?;
            let w = parse_vertex_list(vertices)?;
            let p = load_profile(subprofile)?;
            let mut sub = AnalysisReport::new(subprofile.display().to_string());
            for c in PROFILE_CRITERIA {
                sub.criteria.push(profile_criterion(&p, c, CriterionParams::default()));
            }
            if let Some(c) = sub.conflict() {
                return Err(CliError::Conflict(c.first, c.second));
            }
            let (via, verdict_w) = sub
                .consolidated()
                .unwrap_or_else(|| ("none".into(), Verdict::unknown(
                    stograph::Certificate::new(stograph::TheoremTag::Stability),
                    "subgraph undecided",
                )));
            let cond = stability_conditions_check(&g, &w, *n).ok();
            if let Some(c) = &cond {
                out.write_all(conditions_text(c).as_bytes()).map_err(io)?;
            }
            writeln!(out, "subgraph: {} via {via}", verdict_w.status).map_err(io)?;
            let v = propagate_verdict(&g, &w, &verdict_w, cond.as_ref(), *n)?;
            writeln!(out, "graph: {v}").map_err(io)?;
            for note in &v.notes {
                writeln!(out, "note: {note}").map_err(io)?;
            }
        }
    }
    Ok(0)
}

fn report(args: &ReportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (loaded, name) = load(&args.input)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let header: Vec<&str>;
    let mut summary = format!("input: {name}\n");
    match &loaded {
        Loaded::Profile(p) => {
            summary.push_str(&format!("{p}\n"));
            header = vec!["radius", "sphere", "gplus", "gminus", "degree", "volume", "ws_term"];
            let vols = p.volumes();
            for r in 0..=p.horizon() {
                let s = p.sizes()[r] as f64;
                let gp = p.gplus()[r] as f64;
                rows.push(vec![
                    r.to_string(),
                    p.sizes()[r].to_string(),
                    p.gplus()[r].to_string(),
                    p.gminus()[r].to_string(),
                    p.degree(r).map_or("nan".into(), |d| d.to_string()),
                    vols[r].to_string(),
                    (vols[r] as f64 / (gp * s)).to_string(),
                ]);
            }
        }
        Loaded::Graph(g) => {
            summary.push_str(&format!(
                "{} vertices, {} edges, {} frontier, max interior degree {}\n",
                g.len(),
                g.edges().len(),
                g.frontier_len(),
                g.max_interior_degree()
            ));
            header = vec!["radius", "sphere", "ball", "boundary", "ball_measure", "boundary_measure"];
            if g.root().is_some() {
                let st = radial_statistics(g)?;
                for r in 0..st.sphere_counts.len() {
                    rows.push(vec![
                        r.to_string(),
                        st.sphere_counts[r].to_string(),
                        st.ball_counts[r].to_string(),
                        st.boundary_counts[r].to_string(),
                        st.ball_measure[r].to_string(),
                        st.boundary_measure[r].to_string(),
                    ]);
                }
            } else {
                summary.push_str("no root: radial statistics skipped\n");
            }
        }
    }
    let mut table = header.join(",") + "\n";
    for r in &rows {
        table.push_str(&r.join(","));
        table.push('\n');
    }
    out.write_all(summary.as_bytes()).map_err(io)?;
    match &args.csv {
        Some(p) => write_file(p, &table)?,
        None => out.write_all(table.as_bytes()).map_err(io)?,
    }
    Ok(0)
}

/// Runs a parsed command, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Build(a) => build(a, out),
        Command::Surgery(a) => surgery(a, out),
        Command::Report(a) => report(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stograph::Status;

    #[test]
    fn vertex_lists() {
        let v = parse_vertex_list("3-5, 1,4").unwrap();
        assert_eq!(v, [1, 3, 4, 5].map(VertexId::from));
        assert!(parse_vertex_list("5-3").is_err());
        assert!(parse_vertex_list("x").is_err());
    }

    #[test]
    fn default_radii_increase() {
        assert_eq!(default_radii(30), vec![19, 23, 27, 30]);
        assert_eq!(default_radii(1), vec![1]);
    }

    #[test]
    fn status_consolidates() {
        let mut r = AnalysisReport::new("x");
        assert_eq!(r.status(), Status::Unknown);
        r.criteria.push(timed("k", || Err(stograph::Error::NoRoot)));
        assert_eq!(r.status(), Status::Unknown);
    }
}
