//! Independent oracles and random-instance generators for the
//! integration suites. Everything here recomputes results from first
//! principles — publication lists and raw edge lists — without reusing
//! the library's graph traversals or score implementations.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use collabnet::{Corpus, DistanceGate, OrgTable, PublicationRecord, Researcher, ScoreKind};

/// Raw view of a corpus used by the oracles: adjacency and incidence
/// counts re-derived directly from the publication records.
pub struct RawCorpus {
    pub n: usize,
    pub schools_of: Vec<BTreeSet<String>>,
    pub pair_counts: BTreeMap<(usize, usize), u32>,
    by_researcher: Vec<BTreeMap<String, u32>>,
    by_journal: BTreeMap<String, BTreeMap<usize, u32>>,
}

impl RawCorpus {
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let n = corpus.researcher_count();
        let schools_of = (0..n).map(|i| corpus.schools_of(i).clone()).collect();
        let mut pair_counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut by_researcher = vec![BTreeMap::new(); n];
        let mut by_journal: BTreeMap<String, BTreeMap<usize, u32>> = BTreeMap::new();
        for publication in corpus.publications() {
            let authors: Vec<usize> = publication
                .authors
                .iter()
                .map(|a| corpus.index_of(a).unwrap())
                .collect();
            for (k, &i) in authors.iter().enumerate() {
                for &j in &authors[k + 1..] {
                    let key = (i.min(j), i.max(j));
                    *pair_counts.entry(key).or_insert(0) += 1;
                }
            }
            if !publication.journal.is_empty() {
                for &i in &authors {
                    *by_researcher[i]
                        .entry(publication.journal.clone())
                        .or_insert(0) += 1;
                    *by_journal
                        .entry(publication.journal.clone())
                        .or_default()
                        .entry(i)
                        .or_insert(0) += 1;
                }
            }
        }
        RawCorpus {
            n,
            schools_of,
            pair_counts,
            by_researcher,
            by_journal,
        }
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 0;
        }
        self.pair_counts
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.count(i, j) > 0
    }

    pub fn neighbors(&self, i: usize) -> BTreeSet<usize> {
        (0..self.n).filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn journals(&self, i: usize) -> &BTreeMap<String, u32> {
        &self.by_researcher[i]
    }

    pub fn researcher_total(&self, i: usize) -> u32 {
        self.journals(i).values().sum()
    }

    pub fn journal_profile(&self, journal: &str) -> Option<&BTreeMap<usize, u32>> {
        self.by_journal.get(journal)
    }

    pub fn journal_total(&self, journal: &str) -> u32 {
        self.journal_profile(journal)
            .map(|p| p.values().sum())
            .unwrap_or(0)
    }
}

/// All-pairs shortest hop counts by Floyd-Warshall.
pub fn all_pairs_distances(raw: &RawCorpus) -> Vec<Vec<Option<u32>>> {
    let n = raw.n;
    let mut dist = vec![vec![None; n]; n];
    for i in 0..n {
        dist[i][i] = Some(0);
        for j in 0..n {
            if raw.adjacent(i, j) {
                dist[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(a) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(b) = dist[k][j] else { continue };
                if dist[i][j].is_none_or(|d| d > a + b) {
                    dist[i][j] = Some(a + b);
                }
            }
        }
    }
    dist
}

fn o_order2(raw: &RawCorpus, x: usize) -> BTreeSet<usize> {
    let mut set = raw.neighbors(x);
    for l in raw.neighbors(x) {
        set.extend(raw.neighbors(l));
    }
    set
}

fn o_journal_jaccard(raw: &RawCorpus, a: &str, b: &str, weighted: bool) -> f64 {
    let empty = BTreeMap::new();
    let pa = raw.journal_profile(a).unwrap_or(&empty);
    let pb = raw.journal_profile(b).unwrap_or(&empty);
    let keys: BTreeSet<&usize> = pa.keys().chain(pb.keys()).collect();
    let mut inter = 0.0;
    let mut union = 0.0;
    for key in keys {
        let ca = pa.get(key).copied().unwrap_or(0);
        let cb = pb.get(key).copied().unwrap_or(0);
        let w = if weighted { (ca + cb) as f64 } else { 1.0 };
        union += w;
        if ca > 0 && cb > 0 {
            inter += w;
        }
    }
    if union == 0.0 {
        0.0
    } else {
        inter / union
    }
}

fn o_researcher_jaccard(raw: &RawCorpus, i: usize, j: usize, weighted: bool) -> f64 {
    let pa = raw.journals(i);
    let pb = raw.journals(j);
    let keys: BTreeSet<&String> = pa.keys().chain(pb.keys()).collect();
    let mut inter = 0.0;
    let mut union = 0.0;
    for key in keys {
        let ca = pa.get(key).copied().unwrap_or(0);
        let cb = pb.get(key).copied().unwrap_or(0);
        let w = if weighted { (ca + cb) as f64 } else { 1.0 };
        union += w;
        if ca > 0 && cb > 0 {
            inter += w;
        }
    }
    if union == 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Direct-formula evaluation of any score kind.
pub fn o_score(
    raw: &RawCorpus,
    dist: &[Vec<Option<u32>>],
    kind: ScoreKind,
    i: usize,
    j: usize,
) -> f64 {
    let gate = dist[i][j] == Some(2);
    match kind {
        ScoreKind::Path2 => {
            if gate {
                1.0
            } else {
                0.0
            }
        }
        ScoreKind::CommonNeighbors => {
            if !gate {
                return 0.0;
            }
            raw.neighbors(i).intersection(&raw.neighbors(j)).count() as f64
        }
        ScoreKind::Order2Overlap => {
            if !gate {
                return 0.0;
            }
            o_order2(raw, i).intersection(&o_order2(raw, j)).count() as f64
        }
        ScoreKind::PathWeightSum => {
            if !gate {
                return 0.0;
            }
            raw.neighbors(i)
                .intersection(&raw.neighbors(j))
                .map(|&k| (raw.count(i, k) + raw.count(k, j)) as f64)
                .sum()
        }
        ScoreKind::Jaccard1 => o_researcher_jaccard(raw, i, j, false),
        ScoreKind::Jaccard2 => o_researcher_jaccard(raw, i, j, true),
        ScoreKind::AdamicAdar => {
            let pa = raw.journals(i);
            let pb = raw.journals(j);
            pa.keys()
                .filter(|k| pb.contains_key(*k))
                .map(|k| raw.journal_total(k))
                .filter(|&t| t > 1)
                .map(|t| 1.0 / (t as f64).ln())
                .sum()
        }
        ScoreKind::Cooc1 | ScoreKind::Cooc2 => {
            let weighted = kind == ScoreKind::Cooc2;
            let (ti, tj) = (raw.researcher_total(i), raw.researcher_total(j));
            if ti == 0 || tj == 0 {
                return 0.0;
            }
            let mut total = 0.0;
            for (ja, &ca) in raw.journals(i) {
                for (jb, &cb) in raw.journals(j) {
                    total += (ca as f64 / ti as f64)
                        * (cb as f64 / tj as f64)
                        * o_journal_jaccard(raw, ja, jb, weighted);
                }
            }
            total
        }
    }
}

fn distribute(
    weights: &mut BTreeMap<(String, String), f64>,
    lhs: &BTreeSet<String>,
    rhs: &BTreeSet<String>,
    value: f64,
) {
    let mut pairs = BTreeSet::new();
    for k in lhs {
        for l in rhs {
            if k != l {
                let (a, b) = if k < l { (k, l) } else { (l, k) };
                pairs.insert((a.clone(), b.clone()));
            }
        }
    }
    for pair in pairs {
        *weights.entry(pair).or_insert(0.0) += value;
    }
}

fn gate_admits(gate: DistanceGate, hops: Option<u32>) -> bool {
    match gate {
        DistanceGate::Off => true,
        DistanceGate::Reachable => hops.is_some(),
        DistanceGate::Below(d) => hops.is_some_and(|h| h < d),
    }
}

/// Brute-force double sum over the researcher cohort, neighborhood
/// family (its own distance-2 gate is inside the score).
pub fn o_aggregate_coauthor(
    raw: &RawCorpus,
    dist: &[Vec<Option<u32>>],
    kind: ScoreKind,
) -> BTreeMap<(String, String), f64> {
    let mut weights = BTreeMap::new();
    for i in 0..raw.n {
        for j in (i + 1)..raw.n {
            let value = o_score(raw, dist, kind, i, j);
            if value > 0.0 {
                distribute(&mut weights, &raw.schools_of[i], &raw.schools_of[j], value);
            }
        }
    }
    weights
}

/// Brute-force double sum with the geodesic gate of the bipartite path.
pub fn o_aggregate_bipartite(
    raw: &RawCorpus,
    dist: &[Vec<Option<u32>>],
    kind: ScoreKind,
    gate: DistanceGate,
) -> BTreeMap<(String, String), f64> {
    let mut weights = BTreeMap::new();
    for i in 0..raw.n {
        for j in (i + 1)..raw.n {
            if !gate_admits(gate, dist[i][j]) {
                continue;
            }
            let value = o_score(raw, dist, kind, i, j);
            if value > 0.0 {
                distribute(&mut weights, &raw.schools_of[i], &raw.schools_of[j], value);
            }
        }
    }
    weights
}

/// Direct modularity of a labeled partition over symmetric pair weights
/// (`weight(k, k)` is the self-loop weight, counted twice on the matrix
/// diagonal, matching the library's convention).
pub fn o_modularity(n: usize, weight: &dyn Fn(usize, usize) -> f64, labels: &[usize]) -> f64 {
    let matrix = |i: usize, j: usize| {
        if i == j {
            2.0 * weight(i, i)
        } else {
            weight(i, j)
        }
    };
    let two_m: f64 = (0..n)
        .map(|i| (0..n).map(|j| matrix(i, j)).sum::<f64>())
        .sum();
    assert!(two_m > 0.0, "modularity needs at least one edge");
    let mut q = 0.0;
    let communities: BTreeSet<usize> = labels.iter().copied().collect();
    for c in communities {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
        let mut inner = 0.0;
        let mut tot = 0.0;
        for &i in &members {
            for &j in &members {
                inner += matrix(i, j);
            }
            tot += (0..n).map(|j| matrix(i, j)).sum::<f64>();
        }
        q += inner / two_m - (tot / two_m) * (tot / two_m);
    }
    q
}

/// Calls `f` with every set partition of `0..n` as a label vector
/// (restricted-growth strings).
pub fn for_each_partition(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn recurse(labels: &mut Vec<usize>, max: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for label in 0..=max + 1 {
            labels.push(label);
            recurse(labels, max.max(label), n, f);
            labels.pop();
        }
    }
    if n == 0 {
        return;
    }
    let mut labels = vec![0];
    recurse(&mut labels, 0, n, f);
}

/// Organisation table covering the synthetic school codes `T01..`, five
/// schools per faculty.
pub fn org_for(n_schools: usize) -> OrgTable {
    let mut csv = String::from("school,faculty,name\n");
    for k in 0..n_schools {
        csv.push_str(&format!(
            "T{:02},FT{},Test School {}\n",
            k + 1,
            k / 5 + 1,
            k + 1
        ));
    }
    OrgTable::parse(&csv).unwrap()
}

pub fn school_code(k: usize) -> String {
    format!("T{:02}", k + 1)
}

pub fn faculty_code(k: usize) -> String {
    format!("FT{}", k / 5 + 1)
}

/// Random corpus with publications spread over 2008-2013 so a 2008-2010
/// versus 2011-2013 split exercises both halves. School assignments,
/// group papers, journals (sometimes empty) and solo papers are all
/// sampled; an eighth of researchers get a second school.
pub fn random_corpus(rng: &mut ChaCha8Rng, max_researchers: usize, max_journals: usize) -> Corpus {
    let n = rng.random_range(4..=max_researchers);
    let n_schools = rng.random_range(2..=6.min(n));
    let n_journals = rng.random_range(1..=max_journals);
    let org = org_for(n_schools);

    let researchers: Vec<Researcher> = (0..n)
        .map(|i| {
            let mut schools = BTreeSet::from([school_code(rng.random_range(0..n_schools))]);
            if rng.random_range(0..8) == 0 {
                schools.insert(school_code(rng.random_range(0..n_schools)));
            }
            let faculties = schools
                .iter()
                .map(|s| {
                    let k: usize = s[1..].parse::<usize>().unwrap() - 1;
                    faculty_code(k)
                })
                .collect();
            Researcher {
                researcher_id: format!("R{:03}", i + 1),
                schools,
                faculties,
            }
        })
        .collect();

    let mut publications = Vec::new();
    let mut next = 0usize;
    let mut push = |publications: &mut Vec<PublicationRecord>,
                    rng: &mut ChaCha8Rng,
                    authors: BTreeSet<String>| {
        next += 1;
        let journal = if rng.random_range(0..10) < 7 {
            format!("Q{:02}", rng.random_range(0..n_journals) + 1)
        } else {
            String::new()
        };
        publications.push(PublicationRecord {
            pub_id: format!("p{next:04}"),
            year: 2008 + rng.random_range(0..6),
            journal,
            authors,
        });
    };

    let group_papers = rng.random_range(n / 2..=2 * n);
    for _ in 0..group_papers {
        let size = rng.random_range(2..=3.min(n));
        let mut authors = BTreeSet::new();
        while authors.len() < size {
            authors.insert(format!("R{:03}", rng.random_range(0..n) + 1));
        }
        push(&mut publications, rng, authors);
    }
    for i in 0..n {
        for _ in 0..rng.random_range(0..3) {
            push(
                &mut publications,
                rng,
                BTreeSet::from([format!("R{:03}", i + 1)]),
            );
        }
    }

    Corpus::new(researchers, publications, &org).unwrap()
}

/// Relative-tolerance comparison scaled by the larger magnitude (at
/// least 1).
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
