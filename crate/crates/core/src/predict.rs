//! Threshold-based selection of predicted school pairs.

use std::io::Write;

use crate::scalar::Real;
use crate::school::{SchoolEdgeSet, SchoolPair, SchoolWeights};

/// How the selection threshold is derived from the aggregated weights.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ThresholdRule<T> {
    /// Nearest-rank 100(1-p)th percentile of the positive weights;
    /// selection keeps weights >= the threshold. `p = 1` keeps every
    /// positive-weight pair.
    Percentile(T),
    /// Median weight over the training pairs; selection keeps weights
    /// strictly above it.
    MedianOfTrain,
}

/// Which weights feed the percentile threshold.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum PercentilePopulation {
    /// All positive school-pair weights, training pairs included.
    #[default]
    All,
    /// Positive weights on non-training pairs only.
    Candidates,
}

impl std::str::FromStr for PercentilePopulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(PercentilePopulation::All),
            "candidates" => Ok(PercentilePopulation::Candidates),
            other => Err(format!(
                "unknown percentile population {other:?}; expected all or candidates"
            )),
        }
    }
}

/// A thresholded prediction: selected pairs, their weights, and the
/// threshold that produced them. Never intersects the training edges.
#[derive(Clone, PartialEq, Debug)]
pub struct Prediction<T> {
    pub edges: SchoolEdgeSet,
    pub weights: Vec<(SchoolPair, T)>,
    pub rule: ThresholdRule<T>,
    pub threshold: T,
}

impl<T: Real> Prediction<T> {
    fn from_selected(mut selected: Vec<(SchoolPair, T)>, rule: ThresholdRule<T>, threshold: T) -> Self {
        selected.sort_by(|(pa, wa), (pb, wb)| {
            wb.partial_cmp(wa)
                .expect("weights are finite")
                .then_with(|| pa.cmp(pb))
        });
        Prediction {
            edges: selected.iter().map(|(p, _)| p.clone()).collect(),
            weights: selected,
            rule,
            threshold,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `school_k,school_l,weight,rank` rows, best-ranked first.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "school_k,school_l,weight,rank")?;
        for (rank, (pair, w)) in self.weights.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                pair.first(),
                pair.second(),
                w.to_f64().expect("weight is finite"),
                rank + 1
            )?;
        }
        Ok(())
    }
}

fn sorted_positive<T: Real>(values: impl Iterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = values.filter(|w| *w > T::zero()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("weights are finite"));
    v
}

/// Nearest-rank percentile: the value at rank ceil(q * n) of the sorted
/// sample, 1-based.
fn nearest_rank<T: Real>(sorted: &[T], q: T) -> T {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = (q * T::from_usize(n).expect("length fits scalar"))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .clamp(1, n);
    sorted[rank - 1]
}

/// Percentile-thresholded prediction over the positive weights.
pub fn predict_percentile<T: Real>(
    weights: &SchoolWeights<T>,
    train: &SchoolEdgeSet,
    p: T,
) -> Prediction<T> {
    predict_percentile_from(weights, train, p, PercentilePopulation::All)
}

pub fn predict_percentile_from<T: Real>(
    weights: &SchoolWeights<T>,
    train: &SchoolEdgeSet,
    p: T,
    population: PercentilePopulation,
) -> Prediction<T> {
    assert!(
        p >= T::zero() && p <= T::one(),
        "p must lie in [0, 1], got {p:?}"
    );
    let pool = sorted_positive(weights.iter().filter_map(|(pair, w)| {
        match population {
            PercentilePopulation::All => Some(w),
            PercentilePopulation::Candidates => (!train.contains(pair)).then_some(w),
        }
    }));
    let threshold = if pool.is_empty() || p == T::one() {
        T::zero()
    } else {
        nearest_rank(&pool, T::one() - p)
    };
    let selected = weights
        .iter()
        .filter(|(pair, w)| *w > T::zero() && *w >= threshold && !train.contains(pair))
        .map(|(pair, w)| (pair.clone(), w))
        .collect();
    Prediction::from_selected(selected, ThresholdRule::Percentile(p), threshold)
}

/// Median of a sorted sample; even-length samples take the midpoint of
/// the two central values.
fn median<T: Real>(sorted: &[T]) -> T {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        let two = T::one() + T::one();
        (sorted[n / 2 - 1] + sorted[n / 2]) / two
    }
}

/// Keeps candidates whose weight strictly exceeds the median weight of
/// the already-collaborating (training) pairs. Training pairs without an
/// aggregated weight enter the median as zero; an empty training set
/// yields a zero threshold.
pub fn predict_median<T: Real>(weights: &SchoolWeights<T>, train: &SchoolEdgeSet) -> Prediction<T> {
    let mut train_weights: Vec<T> = train.iter().map(|pair| weights.get(pair)).collect();
    train_weights.sort_by(|a, b| a.partial_cmp(b).expect("weights are finite"));
    let threshold = if train_weights.is_empty() {
        T::zero()
    } else {
        median(&train_weights)
    };
    let selected = weights
        .iter()
        .filter(|(pair, w)| *w > threshold && !train.contains(pair))
        .map(|(pair, w)| (pair.clone(), w))
        .collect();
    Prediction::from_selected(selected, ThresholdRule::MedianOfTrain, threshold)
}
