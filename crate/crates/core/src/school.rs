//! School-level edge sets and the aggregation of researcher-pair scores
//! into school-pair weights.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::corpus::Corpus;
use crate::graph::CoauthorGraph;
use crate::pair::Pair;
use crate::scalar::Real;
use crate::similarity::PairScore;

pub type SchoolPair = Pair<String>;

/// Unordered distinct school-code pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SchoolEdgeSet {
    edges: BTreeSet<SchoolPair>,
}

impl SchoolEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: SchoolPair) -> bool {
        self.edges.insert(pair)
    }

    pub fn contains(&self, pair: &SchoolPair) -> bool {
        self.edges.contains(pair)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SchoolPair> {
        self.edges.iter()
    }

    pub fn difference(&self, other: &SchoolEdgeSet) -> SchoolEdgeSet {
        SchoolEdgeSet {
            edges: self.edges.difference(&other.edges).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &SchoolEdgeSet) -> SchoolEdgeSet {
        SchoolEdgeSet {
            edges: self.edges.intersection(&other.edges).cloned().collect(),
        }
    }

    pub fn union(&self, other: &SchoolEdgeSet) -> SchoolEdgeSet {
        SchoolEdgeSet {
            edges: self.edges.union(&other.edges).cloned().collect(),
        }
    }
}

impl FromIterator<SchoolPair> for SchoolEdgeSet {
    fn from_iter<I: IntoIterator<Item = SchoolPair>>(iter: I) -> Self {
        SchoolEdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a SchoolEdgeSet {
    type Item = &'a SchoolPair;
    type IntoIter = std::collections::btree_set::Iter<'a, SchoolPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

/// Symmetric nonnegative school-pair weights; absent pairs weigh zero.
#[derive(Clone, PartialEq, Debug)]
pub struct SchoolWeights<T> {
    weights: BTreeMap<SchoolPair, T>,
}

impl<T: Real> SchoolWeights<T> {
    pub fn new() -> Self {
        SchoolWeights {
            weights: BTreeMap::new(),
        }
    }

    pub fn get(&self, pair: &SchoolPair) -> T {
        self.weights.get(pair).copied().unwrap_or_else(T::zero)
    }

    pub fn add(&mut self, pair: SchoolPair, value: T) {
        let slot = self.weights.entry(pair).or_insert_with(T::zero);
        *slot = *slot + value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SchoolPair, T)> {
        self.weights.iter().map(|(p, &w)| (p, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `school_k,school_l,weight` rows in sorted pair order.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "school_k,school_l,weight")?;
        for (pair, w) in self.iter() {
            writeln!(
                out,
                "{},{},{}",
                pair.first(),
                pair.second(),
                w.to_f64().expect("weight is finite")
            )?;
        }
        Ok(())
    }
}

impl<T: Real> Default for SchoolWeights<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Geodesic-distance gate applied inside bipartite aggregation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistanceGate {
    /// No distance thresholding; every pair contributes.
    Off,
    /// Only pairs connected in the co-authorship graph contribute.
    Reachable,
    /// Only pairs with geodesic distance strictly below `d` contribute.
    Below(u32),
}

impl DistanceGate {
    pub fn admits(self, hops: Option<u32>) -> bool {
        match self {
            DistanceGate::Off => true,
            DistanceGate::Reachable => hops.is_some(),
            DistanceGate::Below(d) => hops.is_some_and(|h| h < d),
        }
    }

    pub fn name(self) -> String {
        match self {
            DistanceGate::Off => "NA".into(),
            DistanceGate::Reachable => "inf".into(),
            DistanceGate::Below(d) => d.to_string(),
        }
    }
}

impl std::fmt::Display for DistanceGate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for DistanceGate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NA" | "na" | "off" => Ok(DistanceGate::Off),
            "inf" | "Inf" | "INF" => Ok(DistanceGate::Reachable),
            other => other
                .parse::<u32>()
                .ok()
                .filter(|d| *d > 0)
                .map(DistanceGate::Below)
                .ok_or_else(|| format!("invalid distance gate {other:?}; expected NA, inf or a positive integer")),
        }
    }
}

/// The distinct unordered school pairs spanned by two affiliation sets;
/// `include_self` admits the diagonal (used for intra-school weights).
fn school_pairs(
    lhs: &BTreeSet<String>,
    rhs: &BTreeSet<String>,
    include_self: bool,
) -> BTreeSet<(String, String)> {
    let mut pairs = BTreeSet::new();
    for k in lhs {
        for l in rhs {
            if k == l {
                if include_self {
                    pairs.insert((k.clone(), l.clone()));
                }
            } else {
                let (a, b) = if k < l { (k, l) } else { (l, k) };
                pairs.insert((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

/// School pairs connected by at least one co-authoring researcher pair.
pub fn school_edges(g: &CoauthorGraph, corpus: &Corpus) -> SchoolEdgeSet {
    let mut edges = SchoolEdgeSet::new();
    for (i, j, _) in g.weighted_edges() {
        for (k, l) in school_pairs(corpus.schools_of(i), corpus.schools_of(j), false) {
            edges.insert(Pair::new(k, l));
        }
    }
    edges
}

/// School pairs collaborating in the test period but not in training.
pub fn new_edges(train: &SchoolEdgeSet, test: &SchoolEdgeSet) -> SchoolEdgeSet {
    test.difference(train)
}

/// Every unordered distinct school pair without a training collaboration.
pub fn candidate_pairs(train: &SchoolEdgeSet, schools: &[String]) -> BTreeSet<SchoolPair> {
    let mut out = BTreeSet::new();
    for (a, school_a) in schools.iter().enumerate() {
        for school_b in &schools[a + 1..] {
            let pair = Pair::cloned(school_a, school_b);
            if !train.contains(&pair) {
                out.insert(pair);
            }
        }
    }
    out
}

/// Sums neighborhood-family pair scores into school-pair weights. A pair
/// whose researchers share several affiliations contributes its score
/// once to every distinct school pair it spans.
pub fn aggregate_coauthor<T: Real>(scores: &[PairScore<T>], corpus: &Corpus) -> SchoolWeights<T> {
    let mut weights = SchoolWeights::new();
    for score in scores {
        if score.value <= T::zero() {
            continue;
        }
        let (i, j) = (*score.pair.first(), *score.pair.second());
        for (k, l) in school_pairs(corpus.schools_of(i), corpus.schools_of(j), false) {
            weights.add(Pair::new(k, l), score.value);
        }
    }
    weights
}

/// Sums a bipartite similarity over every unordered researcher pair that
/// passes the geodesic gate, distributing each contribution across the
/// pair's school pairs. Direct collaborators are included; training-pair
/// exclusion happens at prediction time.
pub fn aggregate_bipartite<T, F>(
    sigma: F,
    g: &CoauthorGraph,
    corpus: &Corpus,
    gate: DistanceGate,
) -> SchoolWeights<T>
where
    T: Real,
    F: Fn(usize, usize) -> T,
{
    let n = corpus.researcher_count();
    let mut weights = SchoolWeights::new();
    let components = match gate {
        DistanceGate::Reachable => Some(g.components()),
        _ => None,
    };
    for i in 0..n {
        // One capped breadth-first pass per source answers every gate
        // query for pairs (i, j), j > i.
        let row = match gate {
            DistanceGate::Below(d) => Some(g.bfs_distances(i, Some(d.saturating_sub(1)))),
            _ => None,
        };
        let schools_i = corpus.schools_of(i);
        for j in (i + 1)..n {
            let admitted = match gate {
                DistanceGate::Off => true,
                DistanceGate::Reachable => {
                    components.as_ref().is_some_and(|c| c[i] == c[j])
                }
                DistanceGate::Below(_) => {
                    row.as_ref().is_some_and(|r| gate.admits(r[j]))
                }
            };
            if !admitted {
                continue;
            }
            let pairs = school_pairs(schools_i, corpus.schools_of(j), false);
            if pairs.is_empty() {
                continue;
            }
            let value = sigma(i, j);
            if value <= T::zero() {
                continue;
            }
            for (k, l) in pairs {
                weights.add(Pair::new(k, l), value);
            }
        }
    }
    weights
}
