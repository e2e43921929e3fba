//! Deterministic synthetic corpus generator for desk-scale experiments.
//!
//! The generator plants a configurable number of test-period "new"
//! school collaborations. Each planted school pair gets researcher pairs
//! that share journals and sit at geodesic distance 2 in the training
//! co-authorship graph (linked through a bridge co-author in a third
//! school), so both the neighborhood and the bipartite scores have
//! something to find. Everything else — school sizes, intra-school
//! collaboration, existing cross-school links, solo publication
//! profiles — is sampled with a seeded generator; the same seed always
//! yields byte-identical output files.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{PublicationRecord, Researcher};
use crate::Error;

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_schools: usize,
    pub n_researchers: usize,
    pub n_journals: usize,
    pub planted_new_links: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            n_schools: 20,
            n_researchers: 300,
            n_journals: 40,
            planted_new_links: 12,
        }
    }
}

/// Generated records plus the planted school pairs, kept for assertions
/// and reporting.
#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub researchers: Vec<Researcher>,
    pub publications: Vec<PublicationRecord>,
    pub organisations_csv: String,
    pub planted: Vec<(String, String)>,
    /// Researcher-id pairs planted at training distance 2.
    pub planted_pairs: Vec<(String, String)>,
}

const TRAIN_YEARS: [i32; 3] = [2008, 2009, 2010];
const TEST_YEARS: [i32; 3] = [2011, 2012, 2013];
const RESEARCHER_PAIRS_PER_PLANT: usize = 2;

struct Generator {
    cfg: SynthConfig,
    rng: ChaCha8Rng,
    // researcher index -> school indices (most have one)
    affiliation: Vec<Vec<usize>>,
    // school -> single-school researcher indices
    single_by_school: Vec<Vec<usize>>,
    journals: Vec<String>,
    forbidden: BTreeSet<(usize, usize)>,
    publications: Vec<PublicationRecord>,
    next_pub: usize,
}

impl Generator {
    fn school_code(k: usize) -> String {
        format!("S{:02}", k + 1)
    }

    fn faculty_code(k: usize) -> String {
        format!("F{}", k / 5 + 1)
    }

    fn researcher_id(i: usize) -> String {
        format!("R{:04}", i + 1)
    }

    /// Skewed school sizes by largest-remainder apportionment of 1/(k+1)
    /// weights, floored at two researchers per school.
    fn school_sizes(n_schools: usize, n_researchers: usize) -> Vec<usize> {
        let weights: Vec<f64> = (0..n_schools).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut sizes: Vec<usize> = weights
            .iter()
            .map(|w| ((w / total) * n_researchers as f64).floor() as usize)
            .map(|s| s.max(2))
            .collect();
        let mut assigned: usize = sizes.iter().sum();
        // Remainders favor the big schools first; remove from the tail if
        // the minimum pushed us over.
        let mut k = 0;
        while assigned < n_researchers {
            sizes[k % n_schools] += 1;
            assigned += 1;
            k += 1;
        }
        let mut k = 0;
        while assigned > n_researchers {
            let ix = k % n_schools;
            if sizes[ix] > 2 {
                sizes[ix] -= 1;
                assigned -= 1;
            }
            k += 1;
        }
        sizes
    }

    fn home_journal(&mut self, school: usize) -> usize {
        // Journals are dealt to schools round-robin.
        let pool: Vec<usize> = (0..self.cfg.n_journals)
            .filter(|j| j % self.cfg.n_schools == school)
            .collect();
        if pool.is_empty() {
            school % self.cfg.n_journals
        } else {
            pool[self.rng.random_range(0..pool.len())]
        }
    }

    fn spans_forbidden(&self, authors: &[usize]) -> bool {
        let mut schools = BTreeSet::new();
        for &a in authors {
            schools.extend(self.affiliation[a].iter().copied());
        }
        let schools: Vec<usize> = schools.into_iter().collect();
        for (i, &a) in schools.iter().enumerate() {
            for &b in &schools[i + 1..] {
                if self.forbidden.contains(&(a, b)) {
                    return true;
                }
            }
        }
        false
    }

    fn push_publication(&mut self, year: i32, journal: Option<usize>, authors: &[usize]) {
        let record = PublicationRecord {
            pub_id: format!("P{:05}", self.next_pub + 1),
            year,
            journal: journal.map(|j| self.journals[j].clone()).unwrap_or_default(),
            authors: authors.iter().map(|&i| Self::researcher_id(i)).collect(),
        };
        self.next_pub += 1;
        self.publications.push(record);
    }
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus, Error> {
    let all_pairs = cfg.n_schools.saturating_mul(cfg.n_schools.saturating_sub(1)) / 2;
    if cfg.n_schools < 3 {
        return Err(Error::InvalidConfig(
            "need at least 3 schools (planted links bridge through a third school)".into(),
        ));
    }
    if cfg.n_researchers < 2 * cfg.n_schools {
        return Err(Error::InvalidConfig(format!(
            "need at least {} researchers for {} schools",
            2 * cfg.n_schools,
            cfg.n_schools
        )));
    }
    if cfg.n_journals == 0 {
        return Err(Error::InvalidConfig("need at least one journal".into()));
    }
    if cfg.planted_new_links > all_pairs / 2 {
        return Err(Error::InvalidConfig(format!(
            "cannot plant {} new links among {} school pairs",
            cfg.planted_new_links, all_pairs
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let journals: Vec<String> = (0..cfg.n_journals).map(|j| format!("J{:03}", j + 1)).collect();

    // Affiliations: contiguous blocks per school, sizes skewed; every
    // 40th researcher also joins the next school over.
    let sizes = Generator::school_sizes(cfg.n_schools, cfg.n_researchers);
    let mut affiliation: Vec<Vec<usize>> = Vec::with_capacity(cfg.n_researchers);
    for (school, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            affiliation.push(vec![school]);
        }
    }
    for i in (39..cfg.n_researchers).step_by(40) {
        let second = (affiliation[i][0] + 1) % cfg.n_schools;
        if !affiliation[i].contains(&second) {
            affiliation[i].push(second);
        }
    }
    let mut single_by_school = vec![Vec::new(); cfg.n_schools];
    for (i, schools_of) in affiliation.iter().enumerate() {
        if schools_of.len() == 1 {
            single_by_school[schools_of[0]].push(i);
        }
    }

    // Planted pairs need two single-school researchers on each side.
    let mut eligible: Vec<(usize, usize)> = Vec::new();
    for a in 0..cfg.n_schools {
        for b in (a + 1)..cfg.n_schools {
            if single_by_school[a].len() >= 2 && single_by_school[b].len() >= 2 {
                eligible.push((a, b));
            }
        }
    }
    eligible.shuffle(&mut rng);
    if eligible.len() < cfg.planted_new_links {
        return Err(Error::InvalidConfig(format!(
            "only {} school pairs have enough researchers to plant {} links",
            eligible.len(),
            cfg.planted_new_links
        )));
    }
    let planted: Vec<(usize, usize)> = eligible[..cfg.planted_new_links].to_vec();
    let forbidden: BTreeSet<(usize, usize)> = planted.iter().copied().collect();

    let mut generator = Generator {
        cfg: cfg.clone(),
        rng,
        affiliation,
        single_by_school,
        journals,
        forbidden,
        publications: Vec::new(),
        next_pub: 0,
    };

    // Phase 1: training-period structure.
    let mut train_groups: Vec<Vec<usize>> = Vec::new();

    // Intra-school collaboration.
    for school in 0..cfg.n_schools {
        let members: Vec<usize> = (0..cfg.n_researchers)
            .filter(|&i| generator.affiliation[i].contains(&school))
            .collect();
        if members.len() < 2 {
            continue;
        }
        let papers = 2 + members.len() / 4;
        for _ in 0..papers {
            let group = draw_group(&mut generator, &members, 2, 3)?;
            let journal = generator.home_journal(school);
            let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
            generator.push_publication(year, Some(journal), &group);
            train_groups.push(group);
        }
    }

    // Existing cross-school collaboration.
    let mut cross_pool: Vec<(usize, usize)> = Vec::new();
    for a in 0..cfg.n_schools {
        for b in (a + 1)..cfg.n_schools {
            if !generator.forbidden.contains(&(a, b)) {
                cross_pool.push((a, b));
            }
        }
    }
    cross_pool.shuffle(&mut generator.rng);
    let n_cross = (cfg.n_schools * 3 / 2).min(cross_pool.len());
    for &(a, b) in &cross_pool[..n_cross] {
        let papers = 1 + generator.rng.random_range(0..2);
        for _ in 0..papers {
            let Some(group) = draw_cross_pair(&mut generator, a, b) else {
                continue;
            };
            let home_of = if generator.rng.random_bool(0.5) { a } else { b };
            let journal = generator.home_journal(home_of);
            let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
            generator.push_publication(year, Some(journal), &group);
            train_groups.push(group);
        }
    }

    // Solo publication profiles.
    for i in 0..cfg.n_researchers {
        let papers = 1 + generator.rng.random_range(0..2);
        for _ in 0..papers {
            let school = generator.affiliation[i][0];
            let journal = generator.home_journal(school);
            let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
            generator.push_publication(year, Some(journal), &[i]);
        }
    }

    // Planted links: distance-2 bridges plus shared journal profiles in
    // the training period, and the realized joint paper in the test
    // period.
    let mut planted_pairs: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in &planted {
        let lhs = generator.single_by_school[a].clone();
        let rhs = generator.single_by_school[b].clone();
        let shared_journal = generator.home_journal(a);
        for t in 0..RESEARCHER_PAIRS_PER_PLANT {
            let i = lhs[t % lhs.len()];
            let j = rhs[t % rhs.len()];
            let bridge_school = (0..cfg.n_schools)
                .find(|&m| {
                    m != a
                        && m != b
                        && !generator.forbidden.contains(&key(m, a))
                        && !generator.forbidden.contains(&key(m, b))
                        && !generator.single_by_school[m].is_empty()
                })
                .ok_or_else(|| {
                    Error::InvalidConfig("no bridge school available for a planted link".into())
                })?;
            let c = generator.single_by_school[bridge_school][0];
            let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
            let bridge_journal = generator.home_journal(bridge_school);
            generator.push_publication(year, Some(bridge_journal), &[i, c]);
            let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
            generator.push_publication(year, Some(bridge_journal), &[c, j]);
            // Shared journal profiles so the bipartite scores see the pair.
            for &member in &[i, j] {
                for _ in 0..2 {
                    let year = TRAIN_YEARS[generator.next_pub % TRAIN_YEARS.len()];
                    generator.push_publication(year, Some(shared_journal), &[member]);
                }
            }
            planted_pairs.push((i, j));
        }
    }

    // Phase 2: test-period structure. Only planted pairs may create new
    // school edges; everything else reuses training author groups.
    for (t, &(i, j)) in planted_pairs.iter().enumerate() {
        let year = TEST_YEARS[t % TEST_YEARS.len()];
        let (a, _) = planted[t / RESEARCHER_PAIRS_PER_PLANT];
        let journal = generator.home_journal(a);
        generator.push_publication(year, Some(journal), &[i, j]);
    }
    for (t, group) in train_groups.iter().enumerate() {
        if generator.rng.random_bool(0.6) {
            let year = TEST_YEARS[t % TEST_YEARS.len()];
            let school = generator.affiliation[group[0]][0];
            let journal = generator.home_journal(school);
            let group = group.clone();
            generator.push_publication(year, Some(journal), &group);
        }
    }
    for i in 0..cfg.n_researchers {
        if generator.rng.random_bool(0.5) {
            let school = generator.affiliation[i][0];
            let journal = generator.home_journal(school);
            let year = TEST_YEARS[generator.next_pub % TEST_YEARS.len()];
            generator.push_publication(year, Some(journal), &[i]);
        }
    }

    let researchers = (0..cfg.n_researchers)
        .map(|i| Researcher {
            researcher_id: Generator::researcher_id(i),
            schools: generator.affiliation[i]
                .iter()
                .map(|&k| Generator::school_code(k))
                .collect(),
            faculties: generator.affiliation[i]
                .iter()
                .map(|&k| Generator::faculty_code(k))
                .collect(),
        })
        .collect();

    let mut organisations_csv = String::from("school,faculty,name\n");
    for k in 0..cfg.n_schools {
        organisations_csv.push_str(&format!(
            "{},{},Synthetic School {:02}\n",
            Generator::school_code(k),
            Generator::faculty_code(k),
            k + 1
        ));
    }

    Ok(SynthCorpus {
        researchers,
        publications: generator.publications,
        organisations_csv,
        planted: planted
            .iter()
            .map(|&(a, b)| (Generator::school_code(a), Generator::school_code(b)))
            .collect(),
        planted_pairs: planted_pairs
            .iter()
            .map(|&(i, j)| (Generator::researcher_id(i), Generator::researcher_id(j)))
            .collect(),
    })
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn draw_group(
    generator: &mut Generator,
    members: &[usize],
    min: usize,
    max: usize,
) -> Result<Vec<usize>, Error> {
    for _ in 0..100 {
        let size = generator.rng.random_range(min..=max.min(members.len()));
        let mut group: Vec<usize> = Vec::with_capacity(size);
        while group.len() < size {
            let pick = members[generator.rng.random_range(0..members.len())];
            if !group.contains(&pick) {
                group.push(pick);
            }
        }
        group.sort_unstable();
        if !generator.spans_forbidden(&group) {
            return Ok(group);
        }
    }
    Err(Error::InvalidConfig(
        "could not draw a collaboration avoiding the planted school pairs".into(),
    ))
}

fn draw_cross_pair(generator: &mut Generator, a: usize, b: usize) -> Option<Vec<usize>> {
    for _ in 0..50 {
        let lhs = &generator.single_by_school[a];
        let rhs = &generator.single_by_school[b];
        if lhs.is_empty() || rhs.is_empty() {
            return None;
        }
        let i = lhs[generator.rng.random_range(0..lhs.len())];
        let j = rhs[generator.rng.random_range(0..rhs.len())];
        let group = if i < j { vec![i, j] } else { vec![j, i] };
        if !generator.spans_forbidden(&group) {
            return Some(group);
        }
    }
    None
}

/// Writes `researchers.jsonl`, `publications.jsonl` and
/// `organisations.csv` under `dir`.
pub fn write_corpus(corpus: &SynthCorpus, dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, body: String| {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))
    };
    let researchers: String = corpus
        .researchers
        .iter()
        .map(|r| serde_json::to_string(r).expect("researcher serializes") + "\n")
        .collect();
    write("researchers.jsonl", researchers)?;
    let publications: String = corpus
        .publications
        .iter()
        .map(|p| serde_json::to_string(p).expect("publication serializes") + "\n")
        .collect();
    write("publications.jsonl", publications)?;
    write("organisations.csv", corpus.organisations_csv.clone())?;
    Ok(())
}
