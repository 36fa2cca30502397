//! Closed-form radial expressions and sequences with a closed-form tail.

use std::fmt;

use crate::asymptotic::{Asym, Growth};
use crate::error::{Error, Result};

/// Ceiling that snaps values within rounding noise of an integer onto it:
/// closed forms such as `(r+1)^3` evaluated through `powf` can land a hair
/// above the exact integer.
pub(crate) fn ceil_near(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        v.ceil()
    }
}

/// Closed-form expression in the radius `n >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialExpr {
    Const(f64),
    /// `scale * (n + shift)^exponent`
    Poly { exponent: f64, scale: f64, shift: f64 },
    /// `scale * base^n`
    Exp { base: f64, scale: f64 },
    /// `scale * n!`
    Factorial { scale: f64 },
    Ceil(Box<RadialExpr>),
    Add(Box<RadialExpr>, Box<RadialExpr>),
    Sub(Box<RadialExpr>, Box<RadialExpr>),
    Mul(Box<RadialExpr>, Box<RadialExpr>),
    Div(Box<RadialExpr>, Box<RadialExpr>),
    /// `e(n + s)`
    Shift(Box<RadialExpr>, i64),
    /// `sum_{l=0}^{n} e(l)`
    PartialSum(Box<RadialExpr>),
    /// Tabulated values for `n < head.len()`, the expression beyond.
    Tabled(Vec<f64>, Box<RadialExpr>),
}

impl RadialExpr {
    pub fn constant(c: f64) -> Self {
        RadialExpr::Const(c)
    }

    /// `(n + shift)^exponent`
    pub fn poly(exponent: f64, shift: f64) -> Self {
        RadialExpr::Poly {
            exponent,
            scale: 1.0,
            shift,
        }
    }

    pub fn exp(base: f64) -> Self {
        RadialExpr::Exp { base, scale: 1.0 }
    }

    pub fn factorial() -> Self {
        RadialExpr::Factorial { scale: 1.0 }
    }

    pub fn ceil(self) -> Self {
        RadialExpr::Ceil(Box::new(self))
    }

    pub fn shifted(self, s: i64) -> Self {
        if s == 0 {
            self
        } else {
            RadialExpr::Shift(Box::new(self), s)
        }
    }

    pub fn partial_sum(self) -> Self {
        RadialExpr::PartialSum(Box::new(self))
    }

    pub fn tabled(head: Vec<f64>, tail: RadialExpr) -> Self {
        RadialExpr::Tabled(head, Box::new(tail))
    }

    pub fn plus(self, o: RadialExpr) -> Self {
        RadialExpr::Add(Box::new(self), Box::new(o))
    }

    pub fn minus(self, o: RadialExpr) -> Self {
        RadialExpr::Sub(Box::new(self), Box::new(o))
    }

    pub fn times(self, o: RadialExpr) -> Self {
        RadialExpr::Mul(Box::new(self), Box::new(o))
    }

    pub fn over(self, o: RadialExpr) -> Self {
        RadialExpr::Div(Box::new(self), Box::new(o))
    }

    pub fn recip(self) -> Self {
        RadialExpr::Const(1.0).over(self)
    }

    /// Value at radius `n`; negative arguments (reachable through shifts)
    /// evaluate tabulated data as 0.
    pub fn eval(&self, n: i64) -> f64 {
        match self {
            RadialExpr::Const(c) => *c,
            RadialExpr::Poly {
                exponent,
                scale,
                shift,
            } => scale * (n as f64 + shift).powf(*exponent),
            RadialExpr::Exp { base, scale } => scale * base.powf(n as f64),
            RadialExpr::Factorial { scale } => {
                let mut v = *scale;
                for k in 2..=n.max(0) {
                    v *= k as f64;
                    if !v.is_finite() {
                        break;
                    }
                }
                v
            }
            RadialExpr::Ceil(e) => ceil_near(e.eval(n)),
            RadialExpr::Add(a, b) => a.eval(n) + b.eval(n),
            RadialExpr::Sub(a, b) => a.eval(n) - b.eval(n),
            RadialExpr::Mul(a, b) => a.eval(n) * b.eval(n),
            RadialExpr::Div(a, b) => a.eval(n) / b.eval(n),
            RadialExpr::Shift(e, s) => e.eval(n + s),
            RadialExpr::PartialSum(e) => (0..=n).map(|l| e.eval(l)).sum(),
            RadialExpr::Tabled(head, tail) => {
                if n < 0 {
                    0.0
                } else if (n as usize) < head.len() {
                    head[n as usize]
                } else {
                    tail.eval(n)
                }
            }
        }
    }

    /// Whether every value at `n >= 0` is an integer, so that rounding
    /// steps are exact.
    pub fn is_integer_valued(&self) -> bool {
        let int = |x: f64| x.fract() == 0.0;
        match self {
            RadialExpr::Const(c) => int(*c),
            RadialExpr::Poly {
                exponent,
                scale,
                shift,
            } => *exponent >= 0.0 && int(*exponent) && int(*scale) && int(*shift),
            RadialExpr::Exp { base, scale } => *base >= 1.0 && int(*base) && int(*scale),
            RadialExpr::Factorial { scale } => int(*scale),
            RadialExpr::Ceil(_) => true,
            RadialExpr::Add(a, b) | RadialExpr::Sub(a, b) | RadialExpr::Mul(a, b) => {
                a.is_integer_valued() && b.is_integer_valued()
            }
            RadialExpr::Div(..) => false,
            RadialExpr::Shift(e, _) | RadialExpr::PartialSum(e) => e.is_integer_valued(),
            RadialExpr::Tabled(head, tail) => {
                head.iter().all(|v| int(*v)) && tail.is_integer_valued()
            }
        }
    }

    /// Asymptotic expansion as `n -> infinity`.
    pub fn asymptotic(&self) -> Result<Asym> {
        let undecided = |what: &str| Error::Internal(format!("no expansion for {what}"));
        Ok(match self {
            RadialExpr::Const(c) => Asym::constant(*c),
            RadialExpr::Poly {
                exponent,
                scale,
                shift,
            } => Asym::term(*scale, Growth::poly(*exponent))
                .shift(*shift)
                .ok_or_else(|| undecided("polynomial shift"))?,
            RadialExpr::Exp { base, scale } => {
                if *base <= 0.0 {
                    return Err(Error::param("exponential base must be positive"));
                }
                Asym::term(*scale, Growth::exp(*base))
            }
            RadialExpr::Factorial { scale } => Asym::term(
                *scale,
                Growth {
                    factorial: 1,
                    ..Growth::ONE
                },
            ),
            RadialExpr::Ceil(e) => {
                let a = e.asymptotic()?;
                if e.is_integer_valued() {
                    a
                } else {
                    a.add(&Asym::big_o(Growth::ONE))
                }
            }
            RadialExpr::Add(a, b) => a.asymptotic()?.add(&b.asymptotic()?),
            RadialExpr::Sub(a, b) => a.asymptotic()?.sub(&b.asymptotic()?),
            RadialExpr::Mul(a, b) => a.asymptotic()?.mul(&b.asymptotic()?),
            RadialExpr::Div(a, b) => a
                .asymptotic()?
                .div(&b.asymptotic()?)
                .ok_or_else(|| undecided("quotient with unknown denominator"))?,
            RadialExpr::Shift(e, s) => e
                .asymptotic()?
                .shift(*s as f64)
                .ok_or_else(|| undecided("shift"))?,
            RadialExpr::PartialSum(e) => e.asymptotic()?.partial_sum(),
            RadialExpr::Tabled(_, tail) => tail.asymptotic()?,
        })
    }
}

impl fmt::Display for RadialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialExpr::Const(c) => write!(f, "{c}"),
            RadialExpr::Poly {
                exponent,
                scale,
                shift,
            } => write!(f, "{scale}*(r+{shift})^{exponent}"),
            RadialExpr::Exp { base, scale } => write!(f, "{scale}*{base}^r"),
            RadialExpr::Factorial { scale } => write!(f, "{scale}*r!"),
            RadialExpr::Ceil(e) => write!(f, "ceil({e})"),
            RadialExpr::Add(a, b) => write!(f, "({a} + {b})"),
            RadialExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            RadialExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            RadialExpr::Div(a, b) => write!(f, "({a} / {b})"),
            RadialExpr::Shift(e, s) => write!(f, "{e}[r{s:+}]"),
            RadialExpr::PartialSum(e) => write!(f, "sum({e})"),
            RadialExpr::Tabled(head, tail) => write!(f, "[{} values] then {tail}", head.len()),
        }
    }
}

/// Sequence given by explicit values `head[0..H]` and an optional closed
/// form for indices `n >= H`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TailedSequence {
    pub head: Vec<f64>,
    pub tail: Option<RadialExpr>,
}

impl TailedSequence {
    pub fn new(head: Vec<f64>, tail: Option<RadialExpr>) -> Self {
        TailedSequence { head, tail }
    }

    /// Sequence given entirely by a closed form, tabulated on `0..=horizon`.
    pub fn from_expr(expr: RadialExpr, horizon: usize) -> Self {
        let head = (0..=horizon as i64).map(|n| expr.eval(n)).collect();
        TailedSequence {
            head,
            tail: Some(expr),
        }
    }

    pub fn head_only(head: Vec<f64>) -> Self {
        TailedSequence { head, tail: None }
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        match self.head.get(n) {
            Some(v) => Some(*v),
            None => self.tail.as_ref().map(|t| t.eval(n as i64)),
        }
    }

    /// The whole sequence as one expression (requires a tail).
    pub fn as_expr(&self) -> Option<RadialExpr> {
        self.tail
            .as_ref()
            .map(|t| RadialExpr::tabled(self.head.clone(), t.clone()))
    }

    /// Numerical value of `sum_{n >= 0}` for a convergent sequence: explicit
    /// summation until the terms are negligible, then an integral estimate
    /// of the remainder from the asymptotic expansion.
    pub fn convergent_sum(&self) -> Result<f64> {
        self.tail_sum_from(0)
    }

    /// `sum_{n >= start}`, same method as [`convergent_sum`](Self::convergent_sum).
    pub fn tail_sum_from(&self, start: usize) -> Result<f64> {
        let tail = self
            .tail
            .as_ref()
            .ok_or_else(|| Error::ConvergenceNotEstablished("no closed-form tail".into()))?;
        let asym = tail.asymptotic()?;
        if !asym.growth_bound().is_some_and(|g| g.is_summable()) {
            return Err(Error::ConvergenceNotEstablished(format!(
                "tail behaves like {asym}"
            )));
        }
        let mut total: f64 = self.head.iter().skip(start).sum();
        let mut n = self.head.len().max(start);
        const CAP: usize = 2_000_000;
        let mut small_run = 0;
        while n < CAP {
            let v = tail.eval(n as i64);
            if !v.is_finite() {
                // terms no longer representable; finish with the expansion
                break;
            }
            total += v;
            n += 1;
            if v.abs() <= 1e-17 * total.abs().max(1e-300) {
                small_run += 1;
                if small_run > 8 {
                    return Ok(total);
                }
            } else {
                small_run = 0;
            }
        }
        // midpoint-rule remainder sum_{l >= n} c l^e ~ int_{n-1/2}^inf c x^e
        let x = n as f64 - 0.5;
        for t in asym.terms() {
            let g = t.growth;
            if g.factorial == 0 && (g.base - 1.0).abs() < 1e-12 && g.exponent < -1.0 {
                total += t.coef * x.powf(g.exponent + 1.0) / (-(g.exponent + 1.0));
            } else if g.factorial < 0 || g.base < 1.0 {
                // super-geometric decay: the remainder is below rounding
            } else {
                return Err(Error::ConvergenceNotEstablished(format!(
                    "cannot bound the remainder of {asym}"
                )));
            }
        }
        Ok(total)
    }
}

impl From<Vec<f64>> for TailedSequence {
    fn from(head: Vec<f64>) -> Self {
        TailedSequence::head_only(head)
    }
}
