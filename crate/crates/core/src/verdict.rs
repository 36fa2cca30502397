//! Verdicts and the certificates that justify them.

use std::fmt;

use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Complete,
    Incomplete,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Complete => "Complete",
            Status::Incomplete => "Incomplete",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Caveat {
    /// Part of the argument was only checked up to a finite radius.
    HorizonLimited,
    /// A series was judged from partial sums only.
    HeuristicSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleMethod {
    EllipticLimit,
    HeatDeficit,
    MonteCarlo,
}

/// The result a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    OyViolation,
    Khasminskii,
    PhiKhasminskii,
    Series,
    Curvature,
    KPlus,
    IncompletenessSeries,
    RatioCurvature,
    WeaklySymmetric,
    BoundedGlobalDegree,
    Stability,
    Oracle(OracleMethod),
}

/// Which way a criterion can decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    CompletenessOnly,
    IncompletenessOnly,
    Both,
}

impl TheoremTag {
    pub fn direction(self) -> Direction {
        use TheoremTag::*;
        match self {
            Khasminskii | PhiKhasminskii | Series | Curvature | KPlus | BoundedGlobalDegree => {
                Direction::CompletenessOnly
            }
            OyViolation | IncompletenessSeries | RatioCurvature => Direction::IncompletenessOnly,
            WeaklySymmetric | Stability | Oracle(_) => Direction::Both,
        }
    }

    pub fn name(self) -> &'static str {
        use TheoremTag::*;
        match self {
            OyViolation => "oy-violation",
            Khasminskii => "khasminskii",
            PhiKhasminskii => "phi-khasminskii",
            Series => "series",
            Curvature => "curvature",
            KPlus => "kplus",
            IncompletenessSeries => "incompleteness-series",
            RatioCurvature => "ratio-curvature",
            WeaklySymmetric => "weakly-symmetric",
            BoundedGlobalDegree => "bounded-global-degree",
            Stability => "stability",
            Oracle(OracleMethod::EllipticLimit) => "oracle-elliptic",
            Oracle(OracleMethod::HeatDeficit) => "oracle-heat",
            Oracle(OracleMethod::MonteCarlo) => "oracle-mc",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Real(f64),
    Int(i64),
    Seq(Vec<f64>),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<Vec<f64>> for ParamValue {
    fn from(v: Vec<f64>) -> Self {
        ParamValue::Seq(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Text(s) => write!(f, "{s}"),
            ParamValue::Seq(v) => {
                if v.len() <= 8 {
                    write!(f, "{v:?}")
                } else {
                    write!(f, "[{}, {}, ... {} values]", v[0], v[1], v.len())
                }
            }
        }
    }
}

/// Where a certificate was checked.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Nothing was verified.
    Empty,
    /// Every radius up to and including the given one.
    Radius(usize),
    /// Radii up to the horizon plus the closed-form tail.
    RadiusWithTail(usize),
    Vertices(Vec<VertexId>),
    /// A whole window of the given size.
    Window(usize),
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Empty => write!(f, "nothing"),
            Region::Radius(r) => write!(f, "radii <= {r}"),
            Region::RadiusWithTail(r) => write!(f, "radii <= {r} and tail"),
            Region::Vertices(v) => write!(f, "{} vertices", v.len()),
            Region::Window(n) => write!(f, "window of {n} vertices"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub theorem: TheoremTag,
    pub parameters: Vec<(String, ParamValue)>,
    pub verified_region: Region,
    /// Sub-certificates this one depends on.
    pub chain: Vec<Certificate>,
}

impl Certificate {
    pub fn new(theorem: TheoremTag) -> Self {
        Certificate {
            theorem,
            parameters: Vec::new(),
            verified_region: Region::Empty,
            chain: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<ParamValue>) -> Self {
        self.parameters.push((name.to_string(), value.into()));
        self
    }

    pub fn region(mut self, region: Region) -> Self {
        self.verified_region = region;
        self
    }

    pub fn chained(mut self, sub: Certificate) -> Self {
        self.chain.push(sub);
        self
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.parameters
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
    }

    pub fn real(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            ParamValue::Real(v) => Some(*v),
            ParamValue::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    /// Depth of the certificate chain (1 for a leaf).
    pub fn depth(&self) -> usize {
        1 + self.chain.iter().map(Certificate::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.theorem, self.verified_region)?;
        for (k, v) in &self.parameters {
            write!(f, "; {k} = {v}")?;
        }
        for c in &self.chain {
            write!(f, " <- [{c}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub caveats: Vec<Caveat>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn complete(certificate: Certificate) -> Self {
        Verdict::with_status(Status::Complete, certificate)
    }

    pub fn incomplete(certificate: Certificate) -> Self {
        Verdict::with_status(Status::Incomplete, certificate)
    }

    pub fn unknown(certificate: Certificate, note: impl Into<String>) -> Self {
        Verdict::with_status(Status::Unknown, certificate).note(note)
    }

    fn with_status(status: Status, certificate: Certificate) -> Self {
        Verdict {
            status,
            certificate,
            caveats: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn caveat(mut self, c: Caveat) -> Self {
        if !self.caveats.contains(&c) {
            self.caveats.push(c);
        }
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn is_decided(&self) -> bool {
        self.status != Status::Unknown
    }

    pub fn has_caveat(&self, c: Caveat) -> bool {
        self.caveats.contains(&c)
    }

    pub fn theorem(&self) -> TheoremTag {
        self.certificate.theorem
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.status, self.certificate)?;
        if !self.caveats.is_empty() {
            write!(f, " caveats {:?}", self.caveats)?;
        }
        Ok(())
    }
}

/// Two decided verdicts disagree.
pub fn conflicts(a: &Verdict, b: &Verdict) -> bool {
    a.is_decided() && b.is_decided() && a.status != b.status
}
