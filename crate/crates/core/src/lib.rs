//! Two-level collaboration network link prediction.
//!
//! The library ingests researcher and publication records, builds the
//! co-authorship and researcher-journal structures for a train/test year
//! split, scores researcher pairs with neighborhood or bipartite
//! similarity measures, aggregates the scores into school-pair weights,
//! thresholds them into predicted links, and evaluates the prediction
//! against the school pairs that newly collaborate in the test period.
//! A greedy modularity community-detection baseline, DOT/GraphML export
//! and a synthetic corpus generator round out the pipeline.
//!
//! Score and weight arithmetic is generic over the scalar type via
//! `num-traits`; the aliases below fix the default `f64` instantiation.

pub mod community;
pub mod corpus;
pub mod evaluation;
pub mod export;
pub mod graph;
pub mod pair;
pub mod pipeline;
pub mod predict;
pub mod scalar;
pub mod school;
pub mod similarity;
pub mod synth;

pub use community::{
    build_school_graph, cut, greedy_modularity, predict_from_partition, CommunityError,
    Dendrogram, Partition, SchoolGraph,
};
pub use corpus::{
    load_corpus, split_by_year, Corpus, IngestError, OrgTable, PublicationRecord, Researcher,
    YearRange, YearSplit,
};
pub use evaluation::{evaluate, EvalError, EvalReport};
pub use graph::{CoauthorGraph, Geodesic, IncidenceGraph};
pub use pair::Pair;
pub use predict::{
    predict_median, predict_percentile, predict_percentile_from, PercentilePopulation, Prediction,
    ThresholdRule,
};
pub use scalar::{Fraction, Real};
pub use school::{
    aggregate_bipartite, aggregate_coauthor, candidate_pairs, new_edges, school_edges,
    DistanceGate, SchoolEdgeSet, SchoolPair, SchoolWeights,
};
pub use similarity::{
    adamic_adar, coauthor_scores, cooc, cooc_with, jaccard1, jaccard2, journal_jaccard,
    score_common_neighbors, score_order2_overlap, score_pair, score_path2, score_path_weight_sum,
    JaccardVariant, JournalSimilarity, PairScore, ScoreKind,
};

/// Default scalar for scores, weights and modularity.
pub type Weight = f64;

/// School-pair weights at the default scalar.
pub type Weights = SchoolWeights<Weight>;

/// Evaluation report at the default scalar.
pub type Report = EvalReport<Weight>;

/// Errors from any stage of the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    InvalidConfig(String),
}

impl Error {
    /// True when the error stems from the filesystem rather than from
    /// validation; the command-line front end maps this to exit code 2.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. }) || matches!(self, Error::Ingest(IngestError::Io { .. }))
    }

    /// Wraps a filesystem failure with the offending path.
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
