//! Prediction accuracy, recall and the random-guess baseline.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::scalar::Fraction;
use crate::school::{SchoolEdgeSet, SchoolPair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("predicted pair ({0}, {1}) is not a candidate pair")]
    PredictionOutsideCandidates(String, String),
    #[error("new pair ({0}, {1}) is not a candidate pair")]
    TruthOutsideCandidates(String, String),
}

/// One evaluation row: counts plus the derived ratios.
#[derive(Clone, PartialEq, Debug)]
pub struct EvalReport<T> {
    pub n_predicted: usize,
    pub n_correct: usize,
    pub m_new: usize,
    pub n_candidates: usize,
    /// Correct predictions over predictions made; 0 when nothing was
    /// predicted.
    pub accuracy: T,
    /// Correct predictions over all new edges; 0 when there are none.
    pub recall: T,
    /// Expected accuracy of picking m_new candidate pairs uniformly at
    /// random: m_new / n_candidates.
    pub random_guess_accuracy: T,
}

fn ratio<T: Fraction>(num: usize, den: usize) -> T {
    if den == 0 {
        return T::zero();
    }
    T::from_usize(num).expect("count fits scalar") / T::from_usize(den).expect("count fits scalar")
}

/// Scores a prediction against the held-out new edges.
pub fn evaluate<T: Fraction>(
    pred: &SchoolEdgeSet,
    new_edges: &SchoolEdgeSet,
    candidates: &BTreeSet<SchoolPair>,
) -> Result<EvalReport<T>, EvalError> {
    for pair in pred {
        if !candidates.contains(pair) {
            return Err(EvalError::PredictionOutsideCandidates(
                pair.first().clone(),
                pair.second().clone(),
            ));
        }
    }
    for pair in new_edges {
        if !candidates.contains(pair) {
            return Err(EvalError::TruthOutsideCandidates(
                pair.first().clone(),
                pair.second().clone(),
            ));
        }
    }
    let n_predicted = pred.len();
    let n_correct = pred.intersection(new_edges).len();
    let m_new = new_edges.len();
    let n_candidates = candidates.len();
    Ok(EvalReport {
        n_predicted,
        n_correct,
        m_new,
        n_candidates,
        accuracy: ratio(n_correct, n_predicted),
        recall: ratio(n_correct, m_new),
        random_guess_accuracy: ratio(m_new, n_candidates),
    })
}
