//! Leading-order asymptotics of radial sequences.
//!
//! An [`Asym`] is a finite expansion `sum c_i (r!)^f_i q_i^r r^e_i + O(g)`
//! valid as `r -> infinity`. It supports the arithmetic needed to compare
//! closed-form radial tails: sums, products, reciprocals, integer shifts
//! `r -> r + s` and partial sums.

use std::cmp::Ordering;
use std::fmt;

const BASE_TOL: f64 = 1e-12;
const EXP_TOL: f64 = 1e-9;
const CANCEL_TOL: f64 = 1e-12;
/// Number of `1/r` orders kept by shift and reciprocal expansions.
const DEPTH: usize = 8;
const MAX_TERMS: usize = 24;

/// Growth class `(r!)^factorial * base^r * r^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub factorial: i32,
    pub base: f64,
    pub exponent: f64,
}

impl Growth {
    pub const ONE: Growth = Growth {
        factorial: 0,
        base: 1.0,
        exponent: 0.0,
    };

    pub fn poly(exponent: f64) -> Self {
        Growth {
            exponent,
            ..Growth::ONE
        }
    }

    pub fn exp(base: f64) -> Self {
        Growth {
            base,
            ..Growth::ONE
        }
    }

    pub fn cmp_growth(&self, other: &Growth) -> Ordering {
        match self.factorial.cmp(&other.factorial) {
            Ordering::Equal => {}
            o => return o,
        }
        let scale = self.base.abs().max(other.base.abs()).max(1e-300);
        if (self.base - other.base).abs() > BASE_TOL * scale {
            return self.base.partial_cmp(&other.base).unwrap_or(Ordering::Equal);
        }
        if (self.exponent - other.exponent).abs() > EXP_TOL {
            return self
                .exponent
                .partial_cmp(&other.exponent)
                .unwrap_or(Ordering::Equal);
        }
        Ordering::Equal
    }

    pub fn same(&self, other: &Growth) -> bool {
        self.cmp_growth(other) == Ordering::Equal
    }

    pub fn mul(&self, other: &Growth) -> Growth {
        Growth {
            factorial: self.factorial + other.factorial,
            base: self.base * other.base,
            exponent: self.exponent + other.exponent,
        }
    }

    pub fn recip(&self) -> Growth {
        Growth {
            factorial: -self.factorial,
            base: 1.0 / self.base,
            exponent: -self.exponent,
        }
    }

    pub fn powi(&self, k: i32) -> Growth {
        Growth {
            factorial: self.factorial * k,
            base: self.base.powi(k),
            exponent: self.exponent * f64::from(k),
        }
    }

    /// Whether `sum_r` of a sequence of this growth converges.
    pub fn is_summable(&self) -> bool {
        if self.factorial != 0 {
            return self.factorial < 0;
        }
        if (self.base - 1.0).abs() > BASE_TOL {
            return self.base < 1.0;
        }
        self.exponent < -1.0 - EXP_TOL
    }

    /// Whether sequences of this growth tend to zero.
    pub fn is_vanishing(&self) -> bool {
        self.cmp_growth(&Growth::ONE) == Ordering::Less
    }

    pub fn is_unbounded(&self) -> bool {
        self.cmp_growth(&Growth::ONE) == Ordering::Greater
    }

    /// Growth of the partial sums of a sequence of this growth, used for
    /// error terms only.
    fn partial_sum_bound(&self) -> Growth {
        if self.is_summable() {
            return Growth::ONE;
        }
        if self.factorial == 0 && (self.base - 1.0).abs() <= BASE_TOL {
            if (self.exponent + 1.0).abs() <= EXP_TOL {
                return Growth::poly(LOG_SLACK);
            }
            return Growth::poly(self.exponent + 1.0);
        }
        *self
    }

    fn max(self, other: Growth) -> Growth {
        if self.cmp_growth(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn eval(&self, r: f64) -> f64 {
        let mut v = self.base.powf(r) * r.powf(self.exponent);
        if self.factorial != 0 {
            v *= (ln_factorial(r) * f64::from(self.factorial)).exp();
        }
        v
    }
}

/// Exponent slack standing in for `log r` in error bounds.
const LOG_SLACK: f64 = 1e-6;

fn ln_factorial(r: f64) -> f64 {
    let n = r.max(0.0).round() as u64;
    (1..=n).map(|k| (k as f64).ln()).sum()
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.factorial != 0 {
            parts.push(format!("(r!)^{}", self.factorial));
        }
        if (self.base - 1.0).abs() > BASE_TOL {
            parts.push(format!("{}^r", self.base));
        }
        if self.exponent.abs() > EXP_TOL {
            parts.push(format!("r^{}", self.exponent));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub growth: Growth,
}

/// Eventual sign of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Asymptotic expansion: terms sorted by decreasing growth, plus an
/// optional error term `O(error)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Asym {
    terms: Vec<Term>,
    error: Option<Growth>,
}

impl Asym {
    pub fn zero() -> Self {
        Asym {
            terms: Vec::new(),
            error: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Asym::term(c, Growth::ONE)
    }

    pub fn term(coef: f64, growth: Growth) -> Self {
        Asym::from_parts(vec![Term { coef, growth }], None)
    }

    /// `O(g)` with no known terms.
    pub fn big_o(g: Growth) -> Self {
        Asym::from_parts(Vec::new(), Some(g))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn error(&self) -> Option<Growth> {
        self.error
    }

    pub fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// Largest growth present among terms and error.
    pub fn growth_bound(&self) -> Option<Growth> {
        match (self.leading(), self.error) {
            (Some(t), Some(e)) => Some(t.growth.max(e)),
            (Some(t), None) => Some(t.growth),
            (None, e) => e,
        }
    }

    fn from_parts(mut terms: Vec<Term>, error: Option<Growth>) -> Self {
        terms.retain(|t| t.coef != 0.0 && t.coef.is_finite());
        terms.sort_by(|a, b| b.growth.cmp_growth(&a.growth));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        let mut scale: Vec<f64> = Vec::new();
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.growth.same(&t.growth) => {
                    last.coef += t.coef;
                    let s = scale.last_mut().expect("parallel");
                    *s = s.max(t.coef.abs());
                }
                _ => {
                    merged.push(t);
                    scale.push(t.coef.abs());
                }
            }
        }
        let mut out: Vec<Term> = merged
            .into_iter()
            .zip(scale)
            .filter(|(t, s)| t.coef.abs() > CANCEL_TOL * s)
            .map(|(t, _)| t)
            .collect();
        let mut error = error;
        if let Some(e) = error {
            out.retain(|t| t.growth.cmp_growth(&e) == Ordering::Greater);
        }
        if out.len() > MAX_TERMS {
            let dropped = out[MAX_TERMS].growth;
            out.truncate(MAX_TERMS);
            error = Some(error.map_or(dropped, |e| e.max(dropped)));
        }
        Asym { terms: out, error }
    }

    pub fn add(&self, other: &Asym) -> Asym {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        let error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Asym::from_parts(terms, error)
    }

    pub fn neg(&self) -> Asym {
        self.scale(-1.0)
    }

    pub fn sub(&self, other: &Asym) -> Asym {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: f64) -> Asym {
        if c == 0.0 {
            return Asym::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef * c,
                growth: t.growth,
            })
            .collect();
        Asym::from_parts(terms, self.error)
    }

    pub fn mul(&self, other: &Asym) -> Asym {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coef: a.coef * b.coef,
                    growth: a.growth.mul(&b.growth),
                });
            }
        }
        let mut error: Option<Growth> = None;
        let mut bump = |g: Growth| error = Some(error.map_or(g, |e: Growth| e.max(g)));
        if let (Some(ea), Some(bb)) = (self.error, other.growth_bound()) {
            bump(ea.mul(&bb));
        }
        if let (Some(eb), Some(ba)) = (other.error, self.growth_bound()) {
            bump(eb.mul(&ba));
        }
        Asym::from_parts(terms, error)
    }

    /// `1 / self`, or `None` when the leading behavior is unknown.
    pub fn recip(&self) -> Option<Asym> {
        let lead = self.leading()?;
        if let Some(e) = self.error {
            if e.cmp_growth(&lead.growth) != Ordering::Less {
                return None;
            }
        }
        // self = lead * (1 + u) with u -> 0
        let inv_lead = Asym::term(1.0 / lead.coef, lead.growth.recip());
        let u = Asym::from_parts(self.terms[1..].to_vec(), self.error).mul(&inv_lead);
        let u_bound = match u.growth_bound() {
            Some(g) => g,
            None => return Some(inv_lead),
        };
        let cutoff = Growth::poly(-(DEPTH as f64));
        let mut sum = Asym::constant(1.0);
        let mut power = Asym::constant(1.0);
        let mut k = 0;
        loop {
            k += 1;
            power = power.mul(&u).neg();
            let bound = u_bound.powi(k);
            if bound.cmp_growth(&cutoff) != Ordering::Greater || k >= 64 {
                let remainder = u_bound.powi(k);
                sum = sum.add(&Asym::big_o(remainder));
                break;
            }
            sum = sum.add(&power);
        }
        Some(sum.mul(&inv_lead))
    }

    pub fn div(&self, other: &Asym) -> Option<Asym> {
        Some(self.mul(&other.recip()?))
    }

    /// Expansion of `a(r + s)`. Non-integer shifts are only allowed when no
    /// factorial growth is present.
    pub fn shift(&self, s: f64) -> Option<Asym> {
        if s == 0.0 {
            return Some(self.clone());
        }
        let integral = s.fract() == 0.0;
        let mut out = Asym::zero();
        for t in &self.terms {
            out = out.add(&shift_term(t.coef, t.growth, s, integral)?);
        }
        if let Some(e) = self.error {
            let shifted = Growth {
                exponent: e.exponent + f64::from(e.factorial) * s,
                ..e
            };
            out = out.add(&Asym::big_o(shifted));
        }
        Some(out)
    }

    /// Expansion of `sum_{l <= r} a(l)`. Lower-order constants are absorbed
    /// into an `O(1)` term.
    pub fn partial_sum(&self) -> Asym {
        let mut out = Asym::big_o(Growth::ONE);
        for t in &self.terms {
            out = out.add(&partial_sum_term(t.coef, t.growth));
        }
        if let Some(e) = self.error {
            out = out.add(&Asym::big_o(e.partial_sum_bound()));
        }
        out
    }

    /// Eventual sign, when the leading term dominates every error.
    pub fn sign(&self) -> Option<Sign> {
        match (self.leading(), self.error) {
            (None, None) => Some(Sign::Zero),
            (None, Some(_)) => None,
            (Some(t), e) => {
                if let Some(e) = e {
                    if t.growth.cmp_growth(&e) != Ordering::Greater {
                        return None;
                    }
                }
                Some(if t.coef > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                })
            }
        }
    }

    /// Numeric value of the known terms, for diagnostics.
    pub fn eval_terms(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.coef * t.growth.eval(r)).sum()
    }

    /// Whether the sequence is eventually bounded above and below.
    pub fn is_bounded(&self) -> Option<bool> {
        let g = self.growth_bound()?;
        if g.cmp_growth(&Growth::ONE) != Ordering::Greater {
            return Some(true);
        }
        match self.sign() {
            Some(Sign::Zero) => Some(true),
            Some(_) => Some(false),
            None => None,
        }
    }
}

impl fmt::Display for Asym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && self.error.is_none() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{} {}", t.coef, t.growth)?;
        }
        if let Some(e) = self.error {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O({e})")?;
        }
        Ok(())
    }
}

/// Truncated power series in `x = 1/r`.
#[derive(Debug, Clone)]
struct InvSeries {
    c: Vec<f64>,
    exact: bool,
}

impl InvSeries {
    fn one(depth: usize) -> Self {
        let mut c = vec![0.0; depth + 1];
        c[0] = 1.0;
        InvSeries { c, exact: true }
    }

    fn mul(&self, other: &InvSeries) -> InvSeries {
        let n = self.c.len().min(other.c.len());
        let mut c = vec![0.0; n];
        let mut overflow = false;
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                if i + j < n {
                    c[i + j] += a * b;
                } else if *a != 0.0 && *b != 0.0 {
                    overflow = true;
                }
            }
        }
        InvSeries {
            c,
            exact: self.exact && other.exact && !overflow,
        }
    }

    /// `(1 + s x)^e` by the binomial series.
    fn binomial(s: f64, e: f64, depth: usize) -> InvSeries {
        let mut c = vec![0.0; depth + 1];
        let mut coef = 1.0;
        let terminating = e >= 0.0 && e.fract() == 0.0;
        let mut exact = terminating;
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = coef * s.powi(k as i32);
            coef *= (e - k as f64) / (k as f64 + 1.0);
        }
        if terminating && (e as usize) > depth {
            exact = false;
        }
        if !terminating && s == 0.0 {
            exact = true;
        }
        InvSeries { c, exact }
    }
}

fn shift_term(coef: f64, g: Growth, s: f64, integral: bool) -> Option<Asym> {
    if g.factorial != 0 && !integral {
        return None;
    }
    let poly_degree = if g.exponent >= 0.0 && g.exponent.fract() == 0.0 {
        g.exponent as usize
    } else {
        0
    };
    let depth = DEPTH.max(poly_degree + 1) + (g.factorial.unsigned_abs() as usize) * (s.abs() as usize);
    let mut series = InvSeries::binomial(s, g.exponent, depth);
    let mut exponent = g.exponent;
    if g.factorial != 0 {
        // (r+s)! / r! as r^s * prod (1 + j/r), or its reciprocal for s < 0
        let steps = s.abs() as i64;
        let mut ratio = InvSeries::one(depth);
        for j in 0..steps {
            let offset = if s > 0.0 { (j + 1) as f64 } else { -(j as f64) };
            ratio = ratio.mul(&InvSeries::binomial(offset, 1.0, depth));
        }
        let power = if s > 0.0 { g.factorial } else { -g.factorial };
        let factor = if power >= 0 {
            let mut acc = InvSeries::one(depth);
            for _ in 0..power {
                acc = acc.mul(&ratio);
            }
            acc
        } else {
            let inv = series_recip(&ratio);
            let mut acc = InvSeries::one(depth);
            for _ in 0..(-power) {
                acc = acc.mul(&inv);
            }
            acc
        };
        series = series.mul(&factor);
        exponent += f64::from(g.factorial) * s;
    }
    let scale = coef * g.base.powf(s);
    let mut terms = Vec::new();
    for (k, c) in series.c.iter().enumerate() {
        if *c != 0.0 {
            terms.push(Term {
                coef: scale * c,
                growth: Growth {
                    exponent: exponent - k as f64,
                    ..g
                },
            });
        }
    }
    let error = if series.exact {
        None
    } else {
        Some(Growth {
            exponent: exponent - (series.c.len() as f64),
            ..g
        })
    };
    Some(Asym::from_parts(terms, error))
}

/// Reciprocal of a series with constant term 1 (never exact in general).
fn series_recip(a: &InvSeries) -> InvSeries {
    let n = a.c.len();
    let mut b = vec![0.0; n];
    b[0] = 1.0 / a.c[0];
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            s += a.c[j] * b[k - j];
        }
        b[k] = -s / a.c[0];
    }
    let exact = a.c[1..].iter().all(|&c| c == 0.0);
    InvSeries { c: b, exact }
}

/// `sum_{j >= 0} j^k x^j` for `0 <= x < 1`.
fn polylog_moment(k: usize, x: f64) -> f64 {
    let mut total = 0.0;
    let mut j = 0u64;
    loop {
        let term = (j as f64).powi(k as i32) * x.powi(j as i32);
        total += term;
        if j > 10 && term.abs() <= 1e-17 * total.abs() {
            break;
        }
        j += 1;
        if j > 100_000 {
            break;
        }
    }
    total
}

fn partial_sum_term(coef: f64, g: Growth) -> Asym {
    if g.is_summable() {
        return Asym::big_o(Growth::ONE);
    }
    if g.factorial > 0 {
        // sum_{j} a(r - j): each backward step loses a factor ~ r^factorial
        let steps = DEPTH / g.factorial as usize + 1;
        let base = Asym::term(coef, g);
        let mut out = Asym::zero();
        for j in 0..=steps {
            match base.shift(-(j as f64)) {
                Some(a) => out = out.add(&a),
                None => return Asym::big_o(g),
            }
        }
        let tail_growth = Growth {
            exponent: g.exponent - f64::from(g.factorial) * (steps as f64 + 1.0),
            ..g
        };
        return out.add(&Asym::big_o(tail_growth));
    }
    if g.base > 1.0 + BASE_TOL {
        // a(r) * sum_j q^{-j} (1 - j/r)^e
        let x = 1.0 / g.base;
        let mut terms = Vec::new();
        let mut binom = 1.0;
        for k in 0..=DEPTH {
            let moment = polylog_moment(k, x);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            terms.push(Term {
                coef: coef * binom * sign * moment,
                growth: Growth {
                    exponent: g.exponent - k as f64,
                    ..g
                },
            });
            binom *= (g.exponent - k as f64) / (k as f64 + 1.0);
        }
        let error = Growth {
            exponent: g.exponent - (DEPTH as f64 + 1.0),
            ..g
        };
        return Asym::from_parts(terms, Some(error));
    }
    // polynomial: Euler-Maclaurin
    let e = g.exponent;
    if (e + 1.0).abs() <= EXP_TOL {
        return Asym::big_o(Growth::poly(LOG_SLACK));
    }
    let terms = vec![
        Term {
            coef: coef / (e + 1.0),
            growth: Growth::poly(e + 1.0),
        },
        Term {
            coef: coef / 2.0,
            growth: Growth::poly(e),
        },
        Term {
            coef: coef * e / 12.0,
            growth: Growth::poly(e - 1.0),
        },
        Term {
            coef: -coef * e * (e - 1.0) * (e - 2.0) / 720.0,
            growth: Growth::poly(e - 3.0),
        },
    ];
    let exact_poly = e >= 0.0 && e.fract() == 0.0 && e <= 3.0;
    let error = if exact_poly {
        Growth::ONE
    } else {
        Growth::poly(e - 5.0).max(Growth::ONE)
    };
    Asym::from_parts(terms, Some(error))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: f64, e: f64) -> Asym {
        Asym::term(c, Growth::poly(e))
    }

    #[test]
    fn growth_order() {
        assert_eq!(
            Growth::exp(2.0).cmp_growth(&Growth::poly(100.0)),
            Ordering::Greater
        );
        let fact = Growth {
            factorial: 1,
            ..Growth::ONE
        };
        assert_eq!(fact.cmp_growth(&Growth::exp(1e6)), Ordering::Greater);
        assert!(Growth::poly(-2.0).is_summable());
        assert!(!Growth::poly(-1.0).is_summable());
        assert!(Growth::exp(0.5).is_summable());
    }

    #[test]
    fn cancellation_of_leading_terms() {
        // (r+2) - r = 2
        let a = poly(1.0, 1.0).shift(2.0).unwrap();
        let d = a.sub(&poly(1.0, 1.0));
        assert_eq!(d.terms().len(), 1);
        assert!(d.error().is_none());
        assert!((d.leading().unwrap().coef - 2.0).abs() < 1e-12);
        assert_eq!(d.leading().unwrap().growth, Growth::ONE);
    }

    #[test]
    fn cubic_shift_difference() {
        // r^3 - (r+2)^3 = -6 r^2 - 12 r - 8
        let d = poly(1.0, 3.0).sub(&poly(1.0, 3.0).shift(2.0).unwrap());
        let lead = d.leading().unwrap();
        assert!((lead.coef + 6.0).abs() < 1e-12);
        assert!((lead.growth.exponent - 2.0).abs() < 1e-12);
        assert!(d.error().is_none());
        assert_eq!(d.sign(), Some(Sign::Negative));
    }

    #[test]
    fn factorial_ratio() {
        // (r-1)! / (r+1)! = 1/(r(r+1)) ~ r^-2
        let f = Asym::term(
            1.0,
            Growth {
                factorial: 1,
                ..Growth::ONE
            },
        );
        let ratio = f.shift(-1.0).unwrap().div(&f.shift(1.0).unwrap()).unwrap();
        let lead = ratio.leading().unwrap();
        assert_eq!(lead.growth.factorial, 0);
        assert!((lead.growth.exponent + 2.0).abs() < 1e-9);
        assert!((lead.coef - 1.0).abs() < 1e-9);
        assert!(lead.growth.is_summable());
    }

    #[test]
    fn partial_sum_of_cubes() {
        let s = poly(1.0, 3.0).partial_sum();
        let lead = s.leading().unwrap();
        assert!((lead.coef - 0.25).abs() < 1e-12);
        assert!((lead.growth.exponent - 4.0).abs() < 1e-12);
    }

    #[test]
    fn partial_sum_of_geometric() {
        // sum_{l<=r} 2^l = 2^{r+1} - 1
        let s = Asym::term(1.0, Growth::exp(2.0)).partial_sum();
        let lead = s.leading().unwrap();
        assert!((lead.coef - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reciprocal_expansion() {
        // 1/(r+1) = r^-1 - r^-2 + ...
        let inv = poly(1.0, 1.0).add(&Asym::constant(1.0)).recip().unwrap();
        let t = inv.terms();
        assert!((t[0].coef - 1.0).abs() < 1e-12);
        assert!((t[1].coef + 1.0).abs() < 1e-12);
        let r = 50.0;
        assert!((inv.eval_terms(r) - 1.0 / (r + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn error_only_has_no_sign() {
        assert_eq!(Asym::big_o(Growth::ONE).sign(), None);
        assert_eq!(Asym::zero().sign(), Some(Sign::Zero));
        assert!(Asym::big_o(Growth::ONE).recip().is_none());
    }
}
