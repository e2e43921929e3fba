//! Co-authorship adjacency and researcher-journal incidence structures,
//! with neighborhood and unweighted geodesic queries.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;

use crate::corpus::Corpus;
use crate::pair::Pair;

/// Hop count between two researchers in the unweighted co-authorship
/// graph (edge present iff the joint-publication count is positive).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Geodesic {
    Hops(u32),
    Unreachable,
}

impl Geodesic {
    pub fn hops(self) -> Option<u32> {
        match self {
            Geodesic::Hops(h) => Some(h),
            Geodesic::Unreachable => None,
        }
    }

    pub fn is_reachable(self) -> bool {
        matches!(self, Geodesic::Hops(_))
    }
}

/// Symmetric researcher-by-researcher joint-publication counts with a
/// zero diagonal. Immutable once built; reads are safe to share.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoauthorGraph {
    adj: Vec<Vec<(usize, u32)>>,
}

impl CoauthorGraph {
    /// Counts every unordered author pair of every publication once.
    /// Single-author papers contribute nothing.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for publication in corpus.publications() {
            let authors: Vec<usize> = publication
                .authors
                .iter()
                .map(|a| corpus.index_of(a).expect("corpus validated"))
                .collect();
            for (k, &i) in authors.iter().enumerate() {
                for &j in &authors[k + 1..] {
                    let key = if i < j { (i, j) } else { (j, i) };
                    *counts.entry(key).or_insert(0) += 1;
                }
            }
        }
        Self::from_counts(
            corpus.researcher_count(),
            counts.into_iter().map(|((i, j), c)| (i, j, c)),
        )
    }

    /// Builds a graph from explicit pair counts. Counts for the same
    /// unordered pair accumulate; zero counts and self-pairs are ignored.
    pub fn from_counts(n: usize, counts: impl IntoIterator<Item = (usize, usize, u32)>) -> Self {
        let mut map: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (i, j, c) in counts {
            assert!(i < n && j < n, "node index out of range");
            if c == 0 || i == j {
                continue;
            }
            let key = if i < j { (i, j) } else { (j, i) };
            *map.entry(key).or_insert(0) += c;
        }
        let mut adj = vec![Vec::new(); n];
        for ((i, j), c) in map {
            adj[i].push((j, c));
            adj[j].push((i, c));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        CoauthorGraph { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Joint-publication count; zero when the pair never co-authored.
    pub fn count(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 0;
        }
        self.adj[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.adj[i][pos].1)
            .unwrap_or(0)
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.count(i, j) > 0
    }

    /// Positive-count neighborhood of `i`; never contains `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().map(|&(j, _)| j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&(j, _)| i < j).map(move |&(j, c)| (i, j, c)))
    }

    /// Breadth-first hop counts from `src`; `None` marks unreachable
    /// nodes. `cap` stops the search beyond that depth, leaving deeper
    /// nodes `None`.
    pub fn bfs_distances(&self, src: usize, cap: Option<u32>) -> Vec<Option<u32>> {
        assert!(src < self.adj.len(), "node index out of range");
        let mut dist = vec![None; self.adj.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued nodes have distances");
            if cap.is_some_and(|c| d >= c) {
                continue;
            }
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest unweighted path length between `i` and `j`.
    pub fn geodesic(&self, i: usize, j: usize) -> Geodesic {
        assert!(i < self.adj.len() && j < self.adj.len(), "node index out of range");
        if i == j {
            return Geodesic::Hops(0);
        }
        let mut dist = vec![None; self.adj.len()];
        dist[i] = Some(0u32);
        let mut queue = VecDeque::from([i]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued nodes have distances");
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    if v == j {
                        return Geodesic::Hops(d + 1);
                    }
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        Geodesic::Unreachable
    }

    /// Connected-component label per node; labels are the smallest node
    /// index in each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.adj.len();
        let mut label = vec![usize::MAX; n];
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            label[start] = start;
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = start;
                        queue.push_back(v);
                    }
                }
            }
        }
        label
    }

    /// Exactly the unordered pairs at geodesic distance 2: non-adjacent
    /// pairs sharing at least one neighbor.
    pub fn all_distance2_pairs(&self) -> Vec<Pair<usize>> {
        let n = self.adj.len();
        let mut pairs = Vec::new();
        let mut seen = vec![false; n];
        for i in 0..n {
            let mut marked = Vec::new();
            for mid in self.neighbors(i) {
                for j in self.neighbors(mid) {
                    if j > i && !seen[j] && !self.is_adjacent(i, j) {
                        seen[j] = true;
                        marked.push(j);
                        pairs.push(Pair::new(i, j));
                    }
                }
            }
            for j in marked {
                seen[j] = false;
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Coordinate-list debug dump: `row col count` per undirected edge.
    pub fn write_coo(&self, mut out: impl Write) -> std::io::Result<()> {
        for (i, j, c) in self.weighted_edges() {
            writeln!(out, "{i} {j} {c}")?;
        }
        Ok(())
    }
}

/// Researcher-by-journal publication counts. Journal indices follow the
/// corpus's sorted journal list; publications with an empty journal are
/// excluded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceGraph {
    journals: Vec<String>,
    by_researcher: Vec<Vec<(usize, u32)>>,
    by_journal: Vec<Vec<(usize, u32)>>,
    researcher_totals: Vec<u32>,
    journal_totals: Vec<u32>,
}

impl IncidenceGraph {
    /// Each publication counts once per listed author.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let journals: Vec<String> = corpus.journals().to_vec();
        let journal_index: BTreeMap<&str, usize> = journals
            .iter()
            .enumerate()
            .map(|(i, j)| (j.as_str(), i))
            .collect();
        let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for publication in corpus.publications() {
            if publication.journal.is_empty() {
                continue;
            }
            let j = journal_index[publication.journal.as_str()];
            for author in &publication.authors {
                let i = corpus.index_of(author).expect("corpus validated");
                *counts.entry((i, j)).or_insert(0) += 1;
            }
        }
        Self::from_counts(
            corpus.researcher_count(),
            journals,
            counts.into_iter().map(|((i, j), c)| (i, j, c)),
        )
    }

    pub fn from_counts(
        n_researchers: usize,
        journals: Vec<String>,
        counts: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Self {
        let mut map: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (i, j, c) in counts {
            assert!(i < n_researchers, "researcher index out of range");
            assert!(j < journals.len(), "journal index out of range");
            if c == 0 {
                continue;
            }
            *map.entry((i, j)).or_insert(0) += c;
        }
        let mut by_researcher = vec![Vec::new(); n_researchers];
        let mut by_journal = vec![Vec::new(); journals.len()];
        let mut researcher_totals = vec![0u32; n_researchers];
        let mut journal_totals = vec![0u32; journals.len()];
        for ((i, j), c) in map {
            by_researcher[i].push((j, c));
            by_journal[j].push((i, c));
            researcher_totals[i] += c;
            journal_totals[j] += c;
        }
        IncidenceGraph {
            journals,
            by_researcher,
            by_journal,
            researcher_totals,
            journal_totals,
        }
    }

    pub fn researcher_count(&self) -> usize {
        self.by_researcher.len()
    }

    pub fn journal_count(&self) -> usize {
        self.journals.len()
    }

    pub fn journal_name(&self, j: usize) -> &str {
        &self.journals[j]
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.by_researcher[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.by_researcher[i][pos].1)
            .unwrap_or(0)
    }

    /// Journals researcher `i` has published in, with counts.
    pub fn journals_of(&self, i: usize) -> &[(usize, u32)] {
        &self.by_researcher[i]
    }

    /// Researchers who published in journal `j`, with counts.
    pub fn researchers_of(&self, j: usize) -> &[(usize, u32)] {
        &self.by_journal[j]
    }

    /// Total publications by researcher `i` over all journals.
    pub fn researcher_total(&self, i: usize) -> u32 {
        self.researcher_totals[i]
    }

    /// Total in-corpus publication count of journal `j`, counted once per
    /// listed author.
    pub fn journal_total(&self, j: usize) -> u32 {
        self.journal_totals[j]
    }

    pub fn write_coo(&self, mut out: impl Write) -> std::io::Result<()> {
        for (i, row) in self.by_researcher.iter().enumerate() {
            for &(j, c) in row {
                writeln!(out, "{i} {j} {c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, OrgTable, PublicationRecord, Researcher};

    fn mini_corpus(pubs: &[(&str, i32, &str, &[&str])]) -> Corpus {
        let researcher_ids: std::collections::BTreeSet<&str> =
            pubs.iter().flat_map(|(_, _, _, authors)| authors.iter().copied()).collect();
        let researchers = researcher_ids
            .into_iter()
            .map(|id| Researcher {
                researcher_id: id.into(),
                schools: ["MATH".to_string()].into(),
                faculties: ["FSCI".to_string()].into(),
            })
            .collect();
        let publications = pubs
            .iter()
            .map(|(id, year, journal, authors)| PublicationRecord {
                pub_id: id.to_string(),
                year: *year,
                journal: journal.to_string(),
                authors: authors.iter().map(|a| a.to_string()).collect(),
            })
            .collect();
        Corpus::new(researchers, publications, &OrgTable::embedded()).unwrap()
    }

    fn path_graph() -> CoauthorGraph {
        // 0 - 1 - 2
        CoauthorGraph::from_counts(3, [(0, 1, 1), (1, 2, 1)])
    }

    #[test]
    fn repeat_coauthorship_accumulates() {
        let corpus = mini_corpus(&[
            ("p1", 2009, "", &["r1", "r2"]),
            ("p2", 2010, "", &["r1", "r2"]),
        ]);
        let g = CoauthorGraph::from_corpus(&corpus);
        assert_eq!(g.count(0, 1), 2);
        assert_eq!(g.count(0, 0), 0);
    }

    #[test]
    fn multi_author_paper_counts_all_pairs() {
        let corpus = mini_corpus(&[("p1", 2009, "", &["r1", "r2", "r3"])]);
        let g = CoauthorGraph::from_corpus(&corpus);
        assert_eq!(g.count(0, 1), 1);
        assert_eq!(g.count(0, 2), 1);
        assert_eq!(g.count(1, 2), 1);
    }

    #[test]
    fn single_author_paper_adds_nothing() {
        let corpus = mini_corpus(&[("p1", 2009, "", &["r1"]), ("p2", 2009, "", &["r1", "r2"])]);
        let g = CoauthorGraph::from_corpus(&corpus);
        assert_eq!(g.weighted_edges().count(), 1);
    }

    #[test]
    fn pair_count_identity_holds() {
        // Sum over i<j of A[i][j] equals sum over publications of C(k,2).
        let corpus = mini_corpus(&[
            ("p1", 2009, "", &["r1", "r2", "r3"]),
            ("p2", 2009, "", &["r2", "r3"]),
            ("p3", 2009, "", &["r4"]),
            ("p4", 2009, "", &["r1", "r2", "r3", "r4"]),
        ]);
        let g = CoauthorGraph::from_corpus(&corpus);
        let total: u32 = g.weighted_edges().map(|(_, _, c)| c).sum();
        let expected: u32 = corpus
            .publications()
            .iter()
            .map(|p| (p.authors.len() * (p.authors.len() - 1) / 2) as u32)
            .sum();
        assert_eq!(total, expected);
    }

    #[test]
    fn incidence_counts_per_author() {
        let corpus = mini_corpus(&[
            ("p1", 2009, "X", &["r1"]),
            ("p2", 2010, "X", &["r1"]),
            ("p3", 2010, "X", &["r1", "r2"]),
            ("p4", 2010, "", &["r1", "r2"]),
        ]);
        let inc = IncidenceGraph::from_corpus(&corpus);
        let x = 0;
        assert_eq!(inc.journal_name(x), "X");
        assert_eq!(inc.count(0, x), 3);
        assert_eq!(inc.count(1, x), 1);
        // The empty-journal paper left no trace.
        assert_eq!(inc.journal_count(), 1);
        assert_eq!(inc.journal_total(x), 4);
        assert_eq!(inc.researcher_total(0), 3);
    }

    #[test]
    fn neighbors_exclude_self() {
        let g = CoauthorGraph::from_counts(4, [(1, 2, 1), (1, 3, 2)]);
        let n: Vec<usize> = g.neighbors(1).collect();
        assert_eq!(n, [2, 3]);
        assert_eq!(g.neighbors(0).count(), 0);
    }

    #[test]
    fn geodesic_on_path_graph() {
        let g = path_graph();
        assert_eq!(g.geodesic(0, 2), Geodesic::Hops(2));
        assert_eq!(g.geodesic(0, 0), Geodesic::Hops(0));
        assert_eq!(g.geodesic(2, 0), Geodesic::Hops(2));
    }

    #[test]
    fn geodesic_across_components_unreachable() {
        let g = CoauthorGraph::from_counts(4, [(0, 1, 1), (2, 3, 1)]);
        assert_eq!(g.geodesic(0, 3), Geodesic::Unreachable);
        assert!(g.geodesic(0, 1).is_reachable());
    }

    #[test]
    fn distance2_pairs_on_path() {
        let g = path_graph();
        assert_eq!(g.all_distance2_pairs(), vec![Pair::new(0, 2)]);
    }

    #[test]
    fn distance2_pairs_empty_on_triangle() {
        let g = CoauthorGraph::from_counts(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        assert!(g.all_distance2_pairs().is_empty());
    }

    #[test]
    fn bfs_cap_limits_depth() {
        let g = CoauthorGraph::from_counts(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let d = g.bfs_distances(0, Some(2));
        assert_eq!(d, vec![Some(0), Some(1), Some(2), None]);
    }

    #[test]
    fn components_label_by_smallest_member() {
        let g = CoauthorGraph::from_counts(5, [(0, 1, 1), (3, 4, 1)]);
        assert_eq!(g.components(), vec![0, 0, 2, 3, 3]);
    }
}
