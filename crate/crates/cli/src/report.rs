//! Collected verdicts and oracle output, with consolidation.

use std::fmt;
use std::time::Duration;

use stograph::verdict::conflicts;
use stograph::{Caveat, Status, Verdict};

#[derive(Debug, Clone)]
pub struct CriterionRun {
    pub name: String,
    /// `Err` holds the reason the criterion did not apply.
    pub outcome: Result<Verdict, String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct OracleSection {
    pub title: String,
    pub verdict: Option<Verdict>,
    /// Free-form `label: value` lines.
    pub lines: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub input: String,
    pub criteria: Vec<CriterionRun>,
    pub oracle: Vec<OracleSection>,
}

#[derive(Debug, Clone)]
pub struct Conflict {
    pub first: String,
    pub second: String,
}

impl AnalysisReport {
    pub fn new(input: impl Into<String>) -> Self {
        AnalysisReport {
            input: input.into(),
            criteria: Vec::new(),
            oracle: Vec::new(),
        }
    }

    fn decided(&self) -> Vec<(String, &Verdict)> {
        let mut out: Vec<(String, &Verdict)> = self
            .criteria
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok().map(|v| (c.name.clone(), v)))
            .collect();
        out.extend(
            self.oracle
                .iter()
                .filter_map(|o| o.verdict.as_ref().map(|v| (o.title.clone(), v))),
        );
        out.retain(|(_, v)| v.is_decided());
        out
    }

    pub fn conflict(&self) -> Option<Conflict> {
        let d = self.decided();
        for (i, (a, va)) in d.iter().enumerate() {
            for (b, vb) in &d[i + 1..] {
                if conflicts(va, vb) {
                    return Some(Conflict {
                        first: a.clone(),
                        second: b.clone(),
                    });
                }
            }
        }
        None
    }

    /// The decided criterion verdict with the fewest caveats, falling back to
    /// oracle verdicts; `None` when everything is undecided.
    pub fn consolidated(&self) -> Option<(String, Verdict)> {
        let rank = |v: &Verdict| v.caveats.len();
        let from_criteria = self
            .criteria
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok().map(|v| (c.name.clone(), v)))
            .filter(|(_, v)| v.is_decided())
            .min_by_key(|(_, v)| rank(v));
        if let Some((n, v)) = from_criteria {
            return Some((n, v.clone()));
        }
        self.oracle
            .iter()
            .filter_map(|o| o.verdict.as_ref().map(|v| (o.title.clone(), v)))
            .filter(|(_, v)| v.is_decided())
            .min_by_key(|(_, v)| rank(v))
            .map(|(n, v)| (n, v.clone()))
    }

    pub fn status(&self) -> Status {
        self.consolidated().map_or(Status::Unknown, |(_, v)| v.status)
    }
}

fn caveat_name(c: Caveat) -> &'static str {
    match c {
        Caveat::HorizonLimited => "horizon-limited",
        Caveat::HeuristicSeries => "heuristic-series",
    }
}

fn write_verdict(f: &mut fmt::Formatter<'_>, v: &Verdict) -> fmt::Result {
    write!(f, "{}", v.status)?;
    if !v.caveats.is_empty() {
        let c: Vec<_> = v.caveats.iter().map(|&c| caveat_name(c)).collect();
        write!(f, " [{}]", c.join(", "))?;
    }
    writeln!(f)?;
    writeln!(f, "    certificate: {}", v.certificate)?;
    for n in &v.notes {
        writeln!(f, "    note: {n}")?;
    }
    Ok(())
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input: {}", self.input)?;
        for c in &self.criteria {
            write!(f, "{} ({:.1} ms): ", c.name, c.elapsed.as_secs_f64() * 1e3)?;
            match &c.outcome {
                Ok(v) => write_verdict(f, v)?,
                Err(e) => writeln!(f, "not applicable: {e}")?,
            }
        }
        for o in &self.oracle {
            writeln!(f, "{}:", o.title)?;
            for l in &o.lines {
                writeln!(f, "    {l}")?;
            }
            if let Some(v) = &o.verdict {
                write!(f, "  verdict: ")?;
                write_verdict(f, v)?;
            }
        }
        match self.consolidated() {
            Some((name, v)) => {
                write!(f, "verdict: {} via {name}", v.status)?;
                if !v.caveats.is_empty() {
                    let c: Vec<_> = v.caveats.iter().map(|&c| caveat_name(c)).collect();
                    write!(f, " [{}]", c.join(", "))?;
                }
                writeln!(f)
            }
            None => writeln!(f, "verdict: Unknown"),
        }
    }
}
