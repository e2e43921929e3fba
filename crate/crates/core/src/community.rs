//! Greedy modularity-maximizing agglomeration on the weighted school
//! graph, with dendrogram cuts and intra-community link prediction.

use std::collections::BTreeMap;
use std::io::Write;

use thiserror::Error;

use crate::corpus::Corpus;
use crate::graph::CoauthorGraph;
use crate::pair::Pair;
use crate::scalar::Real;
use crate::school::{SchoolEdgeSet, SchoolWeights};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommunityError {
    #[error("school graph has no edges")]
    EdgelessGraph,
    #[error("cut at {requested} communities is outside 1..={leaves}")]
    CutOutOfRange { requested: usize, leaves: usize },
}

/// Weighted undirected school graph; diagonal entries hold intra-school
/// collaboration weight.
#[derive(Clone, PartialEq, Debug)]
pub struct SchoolGraph<T> {
    schools: Vec<String>,
    // Dense symmetric matrix of pair weights; w[k][k] is the self-weight.
    w: Vec<T>,
}

impl<T: Real> SchoolGraph<T> {
    pub fn new(schools: Vec<String>) -> Self {
        let n = schools.len();
        SchoolGraph {
            schools,
            w: vec![T::zero(); n * n],
        }
    }

    pub fn school_count(&self) -> usize {
        self.schools.len()
    }

    pub fn schools(&self) -> &[String] {
        &self.schools
    }

    pub fn weight(&self, k: usize, l: usize) -> T {
        self.w[k * self.schools.len() + l]
    }

    pub fn add_weight(&mut self, k: usize, l: usize, value: T) {
        let n = self.schools.len();
        self.w[k * n + l] = self.w[k * n + l] + value;
        if k != l {
            self.w[l * n + k] = self.w[l * n + k] + value;
        }
    }

    pub fn total_weight(&self) -> T {
        let n = self.schools.len();
        let mut total = T::zero();
        for k in 0..n {
            for l in k..n {
                total = total + self.weight(k, l);
            }
        }
        total
    }

    /// Adjacency-matrix entry under the modularity convention: self-loops
    /// count twice on the diagonal.
    fn matrix(&self, k: usize, l: usize) -> T {
        if k == l {
            self.weight(k, k) + self.weight(k, k)
        } else {
            self.weight(k, l)
        }
    }
}

/// Sums co-authorship counts over researcher pairs into school-pair
/// weights, intra-school pairs included as self-weights.
pub fn build_school_graph<T: Real>(g: &CoauthorGraph, corpus: &Corpus) -> SchoolGraph<T> {
    let schools = corpus.schools().to_vec();
    let index: BTreeMap<&str, usize> = schools
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut sg = SchoolGraph::new(schools.clone());
    for (i, j, count) in g.weighted_edges() {
        let value = T::from_u32(count).expect("count fits scalar");
        let mut pairs = std::collections::BTreeSet::new();
        for k in corpus.schools_of(i) {
            for l in corpus.schools_of(j) {
                let (a, b) = (index[k.as_str()], index[l.as_str()]);
                pairs.insert(if a <= b { (a, b) } else { (b, a) });
            }
        }
        for (a, b) in pairs {
            sg.add_weight(a, b, value);
        }
    }
    sg
}

/// One agglomerative merge: communities `a` and `b` (ids are the
/// smallest leaf index of each community) fused into `a`, and the
/// modularity of the partition after the merge.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Merge<T> {
    pub a: usize,
    pub b: usize,
    pub q_after: T,
}

/// Full merge history from singleton communities down to one community.
#[derive(Clone, PartialEq, Debug)]
pub struct Dendrogram<T> {
    schools: Vec<String>,
    initial_q: T,
    merges: Vec<Merge<T>>,
}

impl<T: Real> Dendrogram<T> {
    pub fn leaves(&self) -> usize {
        self.schools.len()
    }

    pub fn schools(&self) -> &[String] {
        &self.schools
    }

    /// Modularity of the all-singletons partition.
    pub fn initial_q(&self) -> T {
        self.initial_q
    }

    pub fn merges(&self) -> &[Merge<T>] {
        &self.merges
    }

    /// The community count maximizing modularity along the merge path,
    /// with the modularity achieved there.
    pub fn best_cut(&self) -> (usize, T) {
        let mut best = (self.leaves(), self.initial_q);
        for (t, merge) in self.merges.iter().enumerate() {
            let communities = self.leaves() - t - 1;
            if merge.q_after > best.1 {
                best = (communities, merge.q_after);
            }
        }
        best
    }

    /// Merge list with modularity values, one line per merge.
    pub fn write_text(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# leaves: {}", self.leaves())?;
        writeln!(out, "# initial modularity: {:.6}", self.initial_q.to_f64().expect("finite"))?;
        for (t, merge) in self.merges.iter().enumerate() {
            writeln!(
                out,
                "merge {}: {} + {} -> {} communities, Q = {:.6}",
                t + 1,
                self.schools[merge.a],
                self.schools[merge.b],
                self.leaves() - t - 1,
                merge.q_after.to_f64().expect("finite"),
            )?;
        }
        Ok(())
    }
}

/// School -> contiguous community id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    assignment: BTreeMap<String, usize>,
    communities: usize,
}

impl Partition {
    pub fn community_of(&self, school: &str) -> Option<usize> {
        self.assignment.get(school).copied()
    }

    pub fn community_count(&self) -> usize {
        self.communities
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, usize)> {
        self.assignment.iter().map(|(s, &c)| (s, c))
    }

    /// Community members grouped and sorted.
    pub fn groups(&self) -> Vec<Vec<&String>> {
        let mut groups = vec![Vec::new(); self.communities];
        for (school, c) in self.iter() {
            groups[c].push(school);
        }
        groups
    }

    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "school,community")?;
        for (school, c) in self.iter() {
            writeln!(out, "{school},{c}")?;
        }
        Ok(())
    }
}

struct MergeState<T> {
    alive: Vec<bool>,
    // Ordered between-community weight sums; self entries unused.
    between: Vec<Vec<T>>,
    inner: Vec<T>,
    tot: Vec<T>,
}

/// Agglomerative modularity maximization: starting from singletons, the
/// pair with the largest modularity change merges at each step (smallest
/// id pair on ties), continuing past the modularity peak until a single
/// community remains so any cut size can be requested.
pub fn greedy_modularity<T: Real>(sg: &SchoolGraph<T>) -> Result<Dendrogram<T>, CommunityError> {
    let n = sg.school_count();
    let total = sg.total_weight();
    if total <= T::zero() {
        return Err(CommunityError::EdgelessGraph);
    }
    let two_m = total + total;

    let mut state = MergeState {
        alive: vec![true; n],
        between: (0..n)
            .map(|k| (0..n).map(|l| if k == l { T::zero() } else { sg.matrix(k, l) }).collect())
            .collect(),
        inner: (0..n).map(|k| sg.matrix(k, k)).collect(),
        tot: (0..n)
            .map(|k| (0..n).map(|l| sg.matrix(k, l)).sum())
            .collect(),
    };

    let q_of = |state: &MergeState<T>| {
        let mut q = T::zero();
        for k in 0..n {
            if !state.alive[k] {
                continue;
            }
            let frac_tot = state.tot[k] / two_m;
            q = q + state.inner[k] / two_m - frac_tot * frac_tot;
        }
        q
    };

    let initial_q = q_of(&state);
    let mut q = initial_q;
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    for _ in 1..n {
        let mut best: Option<(T, usize, usize)> = None;
        for a in 0..n {
            if !state.alive[a] {
                continue;
            }
            for b in (a + 1)..n {
                if !state.alive[b] {
                    continue;
                }
                let two = T::one() + T::one();
                let delta = two * state.between[a][b] / two_m
                    - two * state.tot[a] * state.tot[b] / (two_m * two_m);
                let better = match &best {
                    None => true,
                    Some((best_delta, _, _)) => delta > *best_delta,
                };
                if better {
                    best = Some((delta, a, b));
                }
            }
        }
        let (delta, a, b) = best.expect("at least two live communities");
        // Fuse b into a.
        state.inner[a] = state.inner[a] + state.inner[b] + state.between[a][b] + state.between[a][b];
        state.tot[a] = state.tot[a] + state.tot[b];
        for c in 0..n {
            if c != a && c != b && state.alive[c] {
                let merged = state.between[b][c];
                state.between[a][c] = state.between[a][c] + merged;
                state.between[c][a] = state.between[c][a] + merged;
            }
        }
        state.alive[b] = false;
        q = q + delta;
        merges.push(Merge { a, b, q_after: q });
    }

    Ok(Dendrogram {
        schools: sg.schools().to_vec(),
        initial_q,
        merges,
    })
}

/// Replays merges until exactly `n` communities remain.
pub fn cut<T: Real>(dendrogram: &Dendrogram<T>, n: usize) -> Result<Partition, CommunityError> {
    let leaves = dendrogram.leaves();
    if n == 0 || n > leaves {
        return Err(CommunityError::CutOutOfRange {
            requested: n,
            leaves,
        });
    }
    let mut root: Vec<usize> = (0..leaves).collect();
    for merge in dendrogram.merges().iter().take(leaves - n) {
        for r in root.iter_mut() {
            if *r == merge.b {
                *r = merge.a;
            }
        }
    }
    // Contiguous ids in order of smallest member.
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &root {
        let next = relabel.len();
        relabel.entry(r).or_insert(next);
    }
    let assignment = dendrogram
        .schools()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), relabel[&root[i]]))
        .collect();
    Ok(Partition {
        assignment,
        communities: relabel.len(),
    })
}

/// All same-community school pairs absent from the training edges.
pub fn predict_from_partition(partition: &Partition, train: &SchoolEdgeSet) -> SchoolEdgeSet {
    let mut edges = SchoolEdgeSet::new();
    for group in partition.groups() {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                let pair = Pair::cloned(*a, *b);
                if !train.contains(&pair) {
                    edges.insert(pair);
                }
            }
        }
    }
    edges
}

/// The school graph rendered as plain pair weights (diagonal dropped),
/// which is what the weight CSV export carries.
pub fn school_graph_weights<T: Real>(sg: &SchoolGraph<T>) -> SchoolWeights<T> {
    let mut w = SchoolWeights::new();
    for k in 0..sg.school_count() {
        for l in (k + 1)..sg.school_count() {
            let value = sg.weight(k, l);
            if value > T::zero() {
                w.add(Pair::cloned(&sg.schools()[k], &sg.schools()[l]), value);
            }
        }
    }
    w
}
