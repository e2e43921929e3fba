//! Corpus ingestion: publication and researcher records, validation
//! against the organisation table, and the train/test split by year.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Year bounds accepted at load time unless the caller narrows them.
pub const DEFAULT_YEAR_RANGE: YearRange = YearRange {
    start: 1800,
    end: 2100,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("duplicate researcher id {0:?}")]
    DuplicateResearcher(String),
    #[error("duplicate publication id {0:?}")]
    DuplicatePublication(String),
    #[error("publication {pub_id:?} references unknown researchers: {authors:?}")]
    DanglingAuthor { pub_id: String, authors: Vec<String> },
    #[error("publication {pub_id:?} has no authors")]
    NoAuthors { pub_id: String },
    #[error("publication with empty pub_id")]
    EmptyPubId,
    #[error("publication {pub_id:?} year {year} outside {range}")]
    YearOutOfRange {
        pub_id: String,
        year: i32,
        range: YearRange,
    },
    #[error("researcher {researcher_id:?} has no school affiliation")]
    NoSchool { researcher_id: String },
    #[error("researcher {researcher_id:?} has no faculty affiliation")]
    NoFaculty { researcher_id: String },
    #[error("researcher {researcher_id:?} lists school {school:?} missing from the organisation table")]
    UnknownSchool {
        researcher_id: String,
        school: String,
    },
    #[error("researcher {researcher_id:?} faculties {listed:?} disagree with the organisation table ({expected:?})")]
    FacultyMismatch {
        researcher_id: String,
        listed: Vec<String>,
        expected: Vec<String>,
    },
    #[error("organisation table row {line}: {message}")]
    BadOrgRow { line: usize, message: String },
    #[error("train years {train} overlap test years {test}")]
    OverlappingIntervals { train: YearRange, test: YearRange },
}

fn io_err(path: &Path, source: std::io::Error) -> IngestError {
    IngestError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Inclusive calendar-year interval.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct YearRange {
    start: i32,
    end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Option<Self> {
        (start <= end).then_some(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        self.start <= year && year <= self.end
    }

    pub fn overlaps(&self, other: &YearRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

impl std::fmt::Display for YearRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl std::str::FromStr for YearRange {
    type Err = String;

    /// Accepts `2008..2010` or a single year `2009`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| format!("invalid year {t:?}"))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (start, end) = (parse(a)?, parse(b)?);
                YearRange::new(start, end).ok_or_else(|| format!("empty year range {s:?}"))
            }
            None => {
                let y = parse(s)?;
                Ok(YearRange { start: y, end: y })
            }
        }
    }
}

/// One research output restricted to in-university authors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub year: i32,
    /// Journal name; empty when the journal is unknown. Publications with
    /// an empty journal participate in co-authorship counts but not in
    /// the researcher-journal incidence structure.
    #[serde(default)]
    pub journal: String,
    pub authors: BTreeSet<String>,
}

/// A member of academic staff with school- and faculty-level affiliations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: String,
    pub schools: BTreeSet<String>,
    pub faculties: BTreeSet<String>,
}

/// School code -> faculty code and display name, as shipped in
/// `organisations.csv`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct OrgTable {
    faculty: BTreeMap<String, String>,
    name: BTreeMap<String, String>,
}

const EMBEDDED_ORG_TABLE: &str = include_str!("../data/organisations.csv");

impl OrgTable {
    /// The built-in university organisation hierarchy.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_ORG_TABLE).expect("embedded organisation table parses")
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let mut table = OrgTable::default();
        for (i, row) in reader.records().enumerate() {
            let line = i + 2; // header is line 1
            let row = row.map_err(|e| IngestError::BadOrgRow {
                line,
                message: e.to_string(),
            })?;
            let get = |k: usize, what: &str| {
                row.get(k)
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_owned)
                    .ok_or_else(|| IngestError::BadOrgRow {
                        line,
                        message: format!("missing {what}"),
                    })
            };
            let school = get(0, "school code")?;
            let faculty = get(1, "faculty code")?;
            let name = get(2, "name")?;
            if table.faculty.insert(school.clone(), faculty).is_some() {
                return Err(IngestError::BadOrgRow {
                    line,
                    message: format!("school {school:?} listed twice"),
                });
            }
            table.name.insert(school, name);
        }
        Ok(table)
    }

    pub fn faculty_of(&self, school: &str) -> Option<&str> {
        self.faculty.get(school).map(String::as_str)
    }

    pub fn name_of(&self, school: &str) -> Option<&str> {
        self.name.get(school).map(String::as_str)
    }

    pub fn contains(&self, school: &str) -> bool {
        self.faculty.contains_key(school)
    }
}

/// A validated, immutable snapshot of researchers and publications.
///
/// The dense researcher index is frozen at construction (sorted by id), so
/// corpora produced by [`split_by_year`] share indices with their parent
/// and with each other.
#[derive(Clone, PartialEq, Debug)]
pub struct Corpus {
    researchers: BTreeMap<String, Researcher>,
    publications: Vec<PublicationRecord>,
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    schools: Vec<String>,
    journals: Vec<String>,
    school_faculty: BTreeMap<String, String>,
}

impl Corpus {
    /// Validates records and freezes the dense indices.
    pub fn new(
        researchers: Vec<Researcher>,
        publications: Vec<PublicationRecord>,
        org: &OrgTable,
    ) -> Result<Self, IngestError> {
        Self::with_year_range(researchers, publications, org, DEFAULT_YEAR_RANGE)
    }

    pub fn with_year_range(
        researchers: Vec<Researcher>,
        publications: Vec<PublicationRecord>,
        org: &OrgTable,
        years: YearRange,
    ) -> Result<Self, IngestError> {
        let mut map = BTreeMap::new();
        for r in researchers {
            if r.schools.is_empty() {
                return Err(IngestError::NoSchool {
                    researcher_id: r.researcher_id,
                });
            }
            if r.faculties.is_empty() {
                return Err(IngestError::NoFaculty {
                    researcher_id: r.researcher_id,
                });
            }
            let mut expected = BTreeSet::new();
            for school in &r.schools {
                match org.faculty_of(school) {
                    Some(f) => {
                        expected.insert(f.to_owned());
                    }
                    None => {
                        return Err(IngestError::UnknownSchool {
                            researcher_id: r.researcher_id,
                            school: school.clone(),
                        })
                    }
                }
            }
            if expected != r.faculties {
                return Err(IngestError::FacultyMismatch {
                    researcher_id: r.researcher_id,
                    listed: r.faculties.iter().cloned().collect(),
                    expected: expected.into_iter().collect(),
                });
            }
            let id = r.researcher_id.clone();
            if map.insert(id.clone(), r).is_some() {
                return Err(IngestError::DuplicateResearcher(id));
            }
        }

        let mut seen_pubs = BTreeSet::new();
        for p in &publications {
            if p.pub_id.is_empty() {
                return Err(IngestError::EmptyPubId);
            }
            if !seen_pubs.insert(p.pub_id.clone()) {
                return Err(IngestError::DuplicatePublication(p.pub_id.clone()));
            }
            if p.authors.is_empty() {
                return Err(IngestError::NoAuthors {
                    pub_id: p.pub_id.clone(),
                });
            }
            if !years.contains(p.year) {
                return Err(IngestError::YearOutOfRange {
                    pub_id: p.pub_id.clone(),
                    year: p.year,
                    range: years,
                });
            }
            let dangling: Vec<String> = p
                .authors
                .iter()
                .filter(|a| !map.contains_key(*a))
                .cloned()
                .collect();
            if !dangling.is_empty() {
                return Err(IngestError::DanglingAuthor {
                    pub_id: p.pub_id.clone(),
                    authors: dangling,
                });
            }
        }

        let ids: Vec<String> = map.keys().cloned().collect();
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let schools: BTreeSet<String> = map.values().flat_map(|r| r.schools.clone()).collect();
        let journals: BTreeSet<String> = publications
            .iter()
            .map(|p| p.journal.clone())
            .filter(|j| !j.is_empty())
            .collect();
        let school_faculty = schools
            .iter()
            .map(|s| (s.clone(), org.faculty_of(s).expect("validated").to_owned()))
            .collect();

        Ok(Corpus {
            researchers: map,
            publications,
            ids,
            index,
            schools: schools.into_iter().collect(),
            journals: journals.into_iter().collect(),
            school_faculty,
        })
    }

    pub fn researcher_count(&self) -> usize {
        self.ids.len()
    }

    /// Dense index of a researcher id; indices are stable across
    /// year-splits of the same corpus.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn researcher_id(&self, ix: usize) -> &str {
        &self.ids[ix]
    }

    pub fn researcher(&self, ix: usize) -> &Researcher {
        &self.researchers[&self.ids[ix]]
    }

    pub fn researchers(&self) -> impl Iterator<Item = &Researcher> {
        self.researchers.values()
    }

    pub fn schools_of(&self, ix: usize) -> &BTreeSet<String> {
        &self.researcher(ix).schools
    }

    pub fn publications(&self) -> &[PublicationRecord] {
        &self.publications
    }

    /// Sorted distinct school codes across the cohort.
    pub fn schools(&self) -> &[String] {
        &self.schools
    }

    /// Sorted distinct nonempty journal names across the publications.
    pub fn journals(&self) -> &[String] {
        &self.journals
    }

    pub fn faculty_of(&self, school: &str) -> Option<&str> {
        self.school_faculty.get(school).map(String::as_str)
    }

    pub fn school_faculties(&self) -> &BTreeMap<String, String> {
        &self.school_faculty
    }

    /// Writes `researchers.jsonl` and `publications.jsonl` under `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), IngestError> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let rpath = dir.join("researchers.jsonl");
        let mut out = File::create(&rpath).map_err(|e| io_err(&rpath, e))?;
        for r in self.researchers.values() {
            let line = serde_json::to_string(r).expect("researcher serializes");
            writeln!(out, "{line}").map_err(|e| io_err(&rpath, e))?;
        }
        let ppath = dir.join("publications.jsonl");
        let mut out = File::create(&ppath).map_err(|e| io_err(&ppath, e))?;
        for p in &self.publications {
            let line = serde_json::to_string(p).expect("publication serializes");
            writeln!(out, "{line}").map_err(|e| io_err(&ppath, e))?;
        }
        Ok(())
    }
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, IngestError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| IngestError::Malformed {
            path: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Parses the two jsonl files and validates them against `org`.
pub fn load_corpus(
    researchers_path: &Path,
    publications_path: &Path,
    org: &OrgTable,
) -> Result<Corpus, IngestError> {
    let researchers = read_jsonl(researchers_path)?;
    let publications = read_jsonl(publications_path)?;
    Corpus::new(researchers, publications, org)
}

/// Result of [`split_by_year`]: both halves keep the parent's full
/// researcher cohort and school set.
#[derive(Debug)]
pub struct YearSplit {
    pub train: Corpus,
    pub test: Corpus,
    /// Publications outside both intervals.
    pub dropped: usize,
}

pub fn split_by_year(
    corpus: &Corpus,
    train_years: YearRange,
    test_years: YearRange,
) -> Result<YearSplit, IngestError> {
    if train_years.overlaps(&test_years) {
        return Err(IngestError::OverlappingIntervals {
            train: train_years,
            test: test_years,
        });
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut dropped = 0usize;
    for p in &corpus.publications {
        if train_years.contains(p.year) {
            train.push(p.clone());
        } else if test_years.contains(p.year) {
            test.push(p.clone());
        } else {
            dropped += 1;
        }
    }
    let carve = |pubs: Vec<PublicationRecord>| {
        let journals: BTreeSet<String> = pubs
            .iter()
            .map(|p| p.journal.clone())
            .filter(|j| !j.is_empty())
            .collect();
        Corpus {
            researchers: corpus.researchers.clone(),
            publications: pubs,
            ids: corpus.ids.clone(),
            index: corpus.index.clone(),
            schools: corpus.schools.clone(),
            journals: journals.into_iter().collect(),
            school_faculty: corpus.school_faculty.clone(),
        }
    };
    Ok(YearSplit {
        train: carve(train),
        test: carve(test),
        dropped,
    })
}
