//! Researcher-pair similarity scores: four neighborhood scores on the
//! co-authorship graph and five measures on the researcher-journal
//! bipartite structure.
//!
//! The neighborhood family is gated: a pair scores nonzero exactly when
//! its geodesic distance is 2 (non-adjacent with at least one common
//! co-author). The bipartite family carries no such gate here; distance
//! gating for it happens at school-level aggregation.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::graph::{CoauthorGraph, IncidenceGraph};
use crate::pair::Pair;
use crate::scalar::Real;

/// The available pair-similarity measures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScoreKind {
    /// 1 when a length-2 geodesic path exists.
    Path2,
    /// Number of common direct neighbors.
    CommonNeighbors,
    /// Overlap of order-2 neighborhoods.
    Order2Overlap,
    /// Sum of edge counts along all length-2 paths.
    PathWeightSum,
    /// Jaccard coefficient of journal sets.
    Jaccard1,
    /// Jaccard weighted by publication counts.
    Jaccard2,
    /// Inverse-log rarity of shared journals.
    AdamicAdar,
    /// Co-occurrence smoothing over plain journal similarity.
    Cooc1,
    /// Co-occurrence smoothing over weighted journal similarity.
    Cooc2,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 9] = [
        ScoreKind::Path2,
        ScoreKind::CommonNeighbors,
        ScoreKind::Order2Overlap,
        ScoreKind::PathWeightSum,
        ScoreKind::Jaccard1,
        ScoreKind::Jaccard2,
        ScoreKind::AdamicAdar,
        ScoreKind::Cooc1,
        ScoreKind::Cooc2,
    ];

    pub const COAUTHOR: [ScoreKind; 4] = [
        ScoreKind::Path2,
        ScoreKind::CommonNeighbors,
        ScoreKind::Order2Overlap,
        ScoreKind::PathWeightSum,
    ];

    pub const BIPARTITE: [ScoreKind; 5] = [
        ScoreKind::Jaccard1,
        ScoreKind::Jaccard2,
        ScoreKind::AdamicAdar,
        ScoreKind::Cooc1,
        ScoreKind::Cooc2,
    ];

    /// True for the neighborhood scores on the co-authorship graph.
    pub fn is_coauthor(self) -> bool {
        matches!(
            self,
            ScoreKind::Path2
                | ScoreKind::CommonNeighbors
                | ScoreKind::Order2Overlap
                | ScoreKind::PathWeightSum
        )
    }

    /// True for the researcher-journal measures.
    pub fn is_bipartite(self) -> bool {
        !self.is_coauthor()
    }

    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Path2 => "path2",
            ScoreKind::CommonNeighbors => "common-neighbors",
            ScoreKind::Order2Overlap => "order2-overlap",
            ScoreKind::PathWeightSum => "path-weight-sum",
            ScoreKind::Jaccard1 => "jaccard1",
            ScoreKind::Jaccard2 => "jaccard2",
            ScoreKind::AdamicAdar => "adamic-adar",
            ScoreKind::Cooc1 => "cooc1",
            ScoreKind::Cooc2 => "cooc2",
        }
    }
}

impl std::fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScoreKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScoreKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ScoreKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown score {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Which Jaccard flavor to apply to a neighborhood comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JaccardVariant {
    /// Set overlap over set union.
    Plain,
    /// Shared members weighted by the pair's publication counts.
    Weighted,
}

/// A symmetric nonnegative score attached to an unordered researcher pair.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PairScore<T> {
    pub pair: Pair<usize>,
    pub value: T,
}

/// Distance-2 gate shared by the whole neighborhood family.
fn gated(g: &CoauthorGraph, i: usize, j: usize) -> bool {
    !g.is_adjacent(i, j) && g.neighbors(i).any(|k| g.is_adjacent(k, j))
}

fn common_neighbors(g: &CoauthorGraph, i: usize, j: usize) -> Vec<usize> {
    g.neighbors(i).filter(|&k| g.is_adjacent(k, j)).collect()
}

/// (a) Indicator of a length-2 geodesic path.
pub fn score_path2<T: Real>(g: &CoauthorGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    if gated(g, i, j) {
        T::one()
    } else {
        T::zero()
    }
}

/// (b) Number of common direct neighbors.
pub fn score_common_neighbors<T: Real>(g: &CoauthorGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    if !gated(g, i, j) {
        return T::zero();
    }
    T::from_usize(common_neighbors(g, i, j).len()).expect("count fits scalar")
}

fn order2_set(g: &CoauthorGraph, x: usize) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = g.neighbors(x).collect();
    for l in g.neighbors(x) {
        set.extend(g.neighbors(l));
    }
    set
}

/// (c) Size of the intersection of order-2 neighborhoods. The order-2
/// neighborhood of `x` is N(x) together with all neighbors of neighbors,
/// so it contains `x` itself whenever `x` has any neighbor.
pub fn score_order2_overlap<T: Real>(g: &CoauthorGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    if !gated(g, i, j) {
        return T::zero();
    }
    let a = order2_set(g, i);
    let b = order2_set(g, j);
    T::from_usize(a.intersection(&b).count()).expect("count fits scalar")
}

/// (d) Sum of the adjacency counts along every length-2 geodesic path.
pub fn score_path_weight_sum<T: Real>(g: &CoauthorGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    if !gated(g, i, j) {
        return T::zero();
    }
    common_neighbors(g, i, j)
        .into_iter()
        .map(|k| T::from_u32(g.count(i, k) + g.count(k, j)).expect("count fits scalar"))
        .sum()
}

fn journal_sets_overlap(
    lhs: &[(usize, u32)],
    rhs: &[(usize, u32)],
) -> impl Iterator<Item = (usize, u32, u32)> {
    // Merge of two sorted sparse rows: (key, lhs count, rhs count).
    let mut merged = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < lhs.len() || b < rhs.len() {
        match (lhs.get(a), rhs.get(b)) {
            (Some(&(ja, ca)), Some(&(jb, cb))) => {
                use std::cmp::Ordering::*;
                match ja.cmp(&jb) {
                    Less => {
                        merged.push((ja, ca, 0));
                        a += 1;
                    }
                    Greater => {
                        merged.push((jb, 0, cb));
                        b += 1;
                    }
                    Equal => {
                        merged.push((ja, ca, cb));
                        a += 1;
                        b += 1;
                    }
                }
            }
            (Some(&(ja, ca)), None) => {
                merged.push((ja, ca, 0));
                a += 1;
            }
            (None, Some(&(jb, cb))) => {
                merged.push((jb, 0, cb));
                b += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    merged.into_iter()
}

fn jaccard_of_rows<T: Real>(lhs: &[(usize, u32)], rhs: &[(usize, u32)], variant: JaccardVariant) -> T {
    let mut inter = T::zero();
    let mut union = T::zero();
    for (_, ca, cb) in journal_sets_overlap(lhs, rhs) {
        let weight = match variant {
            JaccardVariant::Plain => T::one(),
            JaccardVariant::Weighted => T::from_u32(ca + cb).expect("count fits scalar"),
        };
        union = union + weight;
        if ca > 0 && cb > 0 {
            inter = inter + weight;
        }
    }
    if union.is_zero() {
        T::zero()
    } else {
        inter / union
    }
}

/// Jaccard coefficient of the two researchers' journal sets.
pub fn jaccard1<T: Real>(inc: &IncidenceGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    jaccard_of_rows(inc.journals_of(i), inc.journals_of(j), JaccardVariant::Plain)
}

/// Jaccard coefficient weighted by the pair's publication counts.
pub fn jaccard2<T: Real>(inc: &IncidenceGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    jaccard_of_rows(
        inc.journals_of(i),
        inc.journals_of(j),
        JaccardVariant::Weighted,
    )
}

/// Shared journals weighted by inverse log of journal rarity. Journals
/// whose total in-corpus count is 1 would divide by log 1 = 0; a lone
/// paper can only be shared by its own co-authors, so such terms are
/// skipped.
pub fn adamic_adar<T: Real>(inc: &IncidenceGraph, i: usize, j: usize) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    let mut total = T::zero();
    for (journal, ca, cb) in journal_sets_overlap(inc.journals_of(i), inc.journals_of(j)) {
        if ca == 0 || cb == 0 {
            continue;
        }
        let rarity = inc.journal_total(journal);
        if rarity <= 1 {
            continue;
        }
        total = total + T::one() / T::from_u32(rarity).expect("count fits scalar").ln();
    }
    total
}

/// Jaccard similarity between two journals, comparing their researcher
/// sets; the weighted variant weights each shared researcher by the pair
/// of publication counts.
pub fn journal_jaccard<T: Real>(
    inc: &IncidenceGraph,
    j: usize,
    j2: usize,
    variant: JaccardVariant,
) -> T {
    jaccard_of_rows(inc.researchers_of(j), inc.researchers_of(j2), variant)
}

/// Precomputed journal-to-journal similarity for one Jaccard variant.
pub struct JournalSimilarity<T> {
    n: usize,
    sim: Vec<T>,
}

impl<T: Real> JournalSimilarity<T> {
    pub fn new(inc: &IncidenceGraph, variant: JaccardVariant) -> Self {
        let n = inc.journal_count();
        let mut sim = vec![T::zero(); n * n];
        for j in 0..n {
            for j2 in j..n {
                let value = journal_jaccard(inc, j, j2, variant);
                sim[j * n + j2] = value;
                sim[j2 * n + j] = value;
            }
        }
        JournalSimilarity { n, sim }
    }

    pub fn get(&self, j: usize, j2: usize) -> T {
        self.sim[j * self.n + j2]
    }
}

fn cooc_impl<T: Real>(
    inc: &IncidenceGraph,
    i: usize,
    j: usize,
    journal_sim: impl Fn(usize, usize) -> T,
) -> T {
    let (ti, tj) = (inc.researcher_total(i), inc.researcher_total(j));
    if ti == 0 || tj == 0 {
        return T::zero();
    }
    let ti = T::from_u32(ti).expect("count fits scalar");
    let tj = T::from_u32(tj).expect("count fits scalar");
    let mut total = T::zero();
    for &(ja, ca) in inc.journals_of(i) {
        let share_a = T::from_u32(ca).expect("count fits scalar") / ti;
        for &(jb, cb) in inc.journals_of(j) {
            let share_b = T::from_u32(cb).expect("count fits scalar") / tj;
            total = total + share_a * share_b * journal_sim(ja, jb);
        }
    }
    total
}

/// Co-occurrence smoothing: publication-share products over all journal
/// pairs, weighted by journal-level Jaccard similarity. Researchers with
/// no journal publications score 0.
pub fn cooc<T: Real>(inc: &IncidenceGraph, i: usize, j: usize, variant: JaccardVariant) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    cooc_impl(inc, i, j, |ja, jb| journal_jaccard(inc, ja, jb, variant))
}

/// [`cooc`] against a precomputed journal-similarity table.
pub fn cooc_with<T: Real>(
    inc: &IncidenceGraph,
    sim: &JournalSimilarity<T>,
    i: usize,
    j: usize,
) -> T {
    assert_ne!(i, j, "pair scores need distinct researchers");
    cooc_impl(inc, i, j, |ja, jb| sim.get(ja, jb))
}

/// Evaluates any score kind on a researcher pair.
pub fn score_pair<T: Real>(
    kind: ScoreKind,
    g: &CoauthorGraph,
    inc: &IncidenceGraph,
    i: usize,
    j: usize,
) -> T {
    match kind {
        ScoreKind::Path2 => score_path2(g, i, j),
        ScoreKind::CommonNeighbors => score_common_neighbors(g, i, j),
        ScoreKind::Order2Overlap => score_order2_overlap(g, i, j),
        ScoreKind::PathWeightSum => score_path_weight_sum(g, i, j),
        ScoreKind::Jaccard1 => jaccard1(inc, i, j),
        ScoreKind::Jaccard2 => jaccard2(inc, i, j),
        ScoreKind::AdamicAdar => adamic_adar(inc, i, j),
        ScoreKind::Cooc1 => cooc(inc, i, j, JaccardVariant::Plain),
        ScoreKind::Cooc2 => cooc(inc, i, j, JaccardVariant::Weighted),
    }
}

/// Scores every distance-2 pair with a neighborhood-family kind. The
/// distance-2 pairs are exactly the support of all four kinds.
pub fn coauthor_scores<T: Real>(kind: ScoreKind, g: &CoauthorGraph) -> Vec<PairScore<T>> {
    assert!(kind.is_coauthor(), "{kind} is not a co-authorship score");
    g.all_distance2_pairs()
        .into_iter()
        .map(|pair| {
            let (i, j) = (*pair.first(), *pair.second());
            let value = match kind {
                ScoreKind::Path2 => score_path2(g, i, j),
                ScoreKind::CommonNeighbors => score_common_neighbors(g, i, j),
                ScoreKind::Order2Overlap => score_order2_overlap(g, i, j),
                ScoreKind::PathWeightSum => score_path_weight_sum(g, i, j),
                _ => unreachable!(),
            };
            PairScore { pair, value }
        })
        .collect()
}
