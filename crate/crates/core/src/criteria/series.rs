//! Divergence judgments for series with nonnegative terms.

use std::fmt;

use crate::asymptotic::{Growth, Sign};
use crate::error::{Error, Result};
use crate::sequence::{RadialExpr, TailedSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStatus {
    Divergent,
    Convergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMethod {
    /// Decided from the growth class of a closed-form tail.
    ExactTail,
    /// Only partial sums were available.
    PartialSumHeuristic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesJudgment {
    pub status: SeriesStatus,
    pub method: SeriesMethod,
    pub partial_sum: f64,
    pub terms_used: usize,
    /// Growth class of the tail terms, when known.
    pub leading: Option<Growth>,
}

impl SeriesJudgment {
    pub fn is_divergent(&self) -> bool {
        self.status == SeriesStatus::Divergent
    }

    pub fn is_convergent(&self) -> bool {
        self.status == SeriesStatus::Convergent
    }
}

impl fmt::Display for SeriesJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} by {:?} (partial sum {} over {} terms",
            self.status, self.method, self.partial_sum, self.terms_used
        )?;
        if let Some(g) = self.leading {
            write!(f, ", terms ~ {g}")?;
        }
        write!(f, ")")
    }
}

/// Judges `sum_n t(n)` where `t(n) = terms[n]` for explicit indices and
/// `tail(n)` beyond. Without a tail the judgment is always inconclusive.
pub fn series_divergence_judge(terms: &[f64], tail: Option<&RadialExpr>) -> Result<SeriesJudgment> {
    if let Some(i) = terms.iter().position(|t| !(*t >= 0.0)) {
        return Err(Error::NegativeTerm(i));
    }
    let partial_sum: f64 = terms.iter().sum();
    let mut judgment = SeriesJudgment {
        status: SeriesStatus::Inconclusive,
        method: SeriesMethod::PartialSumHeuristic,
        partial_sum,
        terms_used: terms.len(),
        leading: None,
    };
    let Some(tail) = tail else {
        return Ok(judgment);
    };
    judgment.method = SeriesMethod::ExactTail;
    let asym = tail.asymptotic()?;
    judgment.leading = asym.leading().map(|t| t.growth);
    let error_summable = asym.error().is_none_or(|e| e.is_summable());
    let terms_summable = asym.terms().iter().all(|t| t.growth.is_summable());
    if asym.sign() == Some(Sign::Negative) {
        return Err(Error::NegativeTerm(terms.len()));
    }
    judgment.status = if terms_summable && error_summable {
        SeriesStatus::Convergent
    } else {
        match (asym.sign(), asym.leading()) {
            (Some(Sign::Positive), Some(t)) if !t.growth.is_summable() => SeriesStatus::Divergent,
            _ => SeriesStatus::Inconclusive,
        }
    };
    Ok(judgment)
}

/// Convenience wrapper for a [`TailedSequence`].
pub fn judge_sequence(seq: &TailedSequence) -> Result<SeriesJudgment> {
    series_divergence_judge(&seq.head, seq.tail.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_diverges() {
        let tail = RadialExpr::poly(1.0, 0.0).recip();
        let j = series_divergence_judge(&[0.0, 1.0, 0.5], Some(&tail)).unwrap();
        assert_eq!(j.status, SeriesStatus::Divergent);
        assert_eq!(j.method, SeriesMethod::ExactTail);
    }

    #[test]
    fn geometric_converges() {
        let tail = RadialExpr::exp(0.5);
        let head: Vec<f64> = (0..10).map(|n| 0.5f64.powi(n)).collect();
        let j = series_divergence_judge(&head, Some(&tail)).unwrap();
        assert_eq!(j.status, SeriesStatus::Convergent);
    }

    #[test]
    fn raw_terms_are_inconclusive() {
        let head: Vec<f64> = (1..=50).map(|n| 1.0 / f64::from(n * n)).collect();
        let j = series_divergence_judge(&head, None).unwrap();
        assert_eq!(j.status, SeriesStatus::Inconclusive);
        assert_eq!(j.method, SeriesMethod::PartialSumHeuristic);
        assert_eq!(j.terms_used, 50);
    }

    #[test]
    fn negative_terms_rejected() {
        assert_eq!(
            series_divergence_judge(&[1.0, -1.0], None).unwrap_err(),
            Error::NegativeTerm(1)
        );
        let tail = RadialExpr::Const(-1.0);
        assert_eq!(
            series_divergence_judge(&[1.0], Some(&tail)).unwrap_err(),
            Error::NegativeTerm(1)
        );
    }

    #[test]
    fn p_series_boundary() {
        for (p, want) in [(0.5, SeriesStatus::Divergent), (1.0, SeriesStatus::Divergent), (1.5, SeriesStatus::Convergent), (3.0, SeriesStatus::Convergent)] {
            let tail = RadialExpr::poly(p, 1.0).recip();
            assert_eq!(series_divergence_judge(&[], Some(&tail)).unwrap().status, want, "p = {p}");
        }
    }
}
