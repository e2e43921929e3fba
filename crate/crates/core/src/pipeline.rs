//! End-to-end orchestration: load, split, score, aggregate, threshold,
//! evaluate, and write artifacts. This is the layer the command-line
//! front end drives.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::community::{
    build_school_graph, cut, greedy_modularity, predict_from_partition, Dendrogram, Partition,
};
use crate::corpus::{load_corpus, split_by_year, Corpus, OrgTable, YearRange};
use crate::evaluation::evaluate;
use crate::graph::{CoauthorGraph, IncidenceGraph};
use crate::predict::{
    predict_median, predict_percentile_from, PercentilePopulation, Prediction,
};
use crate::school::{
    aggregate_bipartite, aggregate_coauthor, candidate_pairs, new_edges, school_edges,
    DistanceGate, SchoolEdgeSet, SchoolPair,
};
use crate::similarity::{
    adamic_adar, coauthor_scores, cooc_with, jaccard1, jaccard2, JaccardVariant,
    JournalSimilarity, ScoreKind,
};
use crate::{Error, Report, Weight, Weights};

/// Input file locations; a missing organisation table falls back to the
/// embedded university hierarchy.
#[derive(Clone, Debug)]
pub struct DataPaths {
    pub researchers: PathBuf,
    pub publications: PathBuf,
    pub organisations: Option<PathBuf>,
}

impl DataPaths {
    /// The three conventional file names under one directory.
    pub fn in_dir(dir: &Path) -> Self {
        let organisations = dir.join("organisations.csv");
        DataPaths {
            researchers: dir.join("researchers.jsonl"),
            publications: dir.join("publications.jsonl"),
            organisations: organisations.exists().then_some(organisations),
        }
    }

    pub fn org_table(&self) -> Result<OrgTable, Error> {
        Ok(match &self.organisations {
            Some(path) => OrgTable::load(path)?,
            None => OrgTable::embedded(),
        })
    }
}

/// Loaded corpus, year split, and every derived structure the scoring
/// stages need.
pub struct PipelineInput {
    pub corpus: Corpus,
    pub train: Corpus,
    pub test: Corpus,
    pub dropped: usize,
    pub g_train: CoauthorGraph,
    pub g_test: CoauthorGraph,
    pub inc_train: IncidenceGraph,
    pub inc_test: IncidenceGraph,
    pub train_edges: SchoolEdgeSet,
    pub test_edges: SchoolEdgeSet,
    pub new_edges: SchoolEdgeSet,
    pub candidates: BTreeSet<SchoolPair>,
}

pub fn prepare(paths: &DataPaths, train_years: YearRange, test_years: YearRange) -> Result<PipelineInput, Error> {
    let org = paths.org_table()?;
    let corpus = load_corpus(&paths.researchers, &paths.publications, &org)?;
    prepare_from_corpus(corpus, train_years, test_years)
}

pub fn prepare_from_corpus(
    corpus: Corpus,
    train_years: YearRange,
    test_years: YearRange,
) -> Result<PipelineInput, Error> {
    let split = split_by_year(&corpus, train_years, test_years)?;
    let g_train = CoauthorGraph::from_corpus(&split.train);
    let g_test = CoauthorGraph::from_corpus(&split.test);
    let inc_train = IncidenceGraph::from_corpus(&split.train);
    let inc_test = IncidenceGraph::from_corpus(&split.test);
    let train_edges = school_edges(&g_train, &split.train);
    let test_edges = school_edges(&g_test, &split.test);
    let new = new_edges(&train_edges, &test_edges);
    let candidates = candidate_pairs(&train_edges, corpus.schools());
    Ok(PipelineInput {
        train: split.train,
        test: split.test,
        dropped: split.dropped,
        corpus,
        g_train,
        g_test,
        inc_train,
        inc_test,
        train_edges,
        test_edges,
        new_edges: new,
        candidates,
    })
}

/// Aggregated school-pair weights for one score kind on one side of the
/// split. The geodesic gate applies to the bipartite family only; the
/// neighborhood family carries its own distance-2 gate.
pub fn school_weights_for(
    kind: ScoreKind,
    g: &CoauthorGraph,
    inc: &IncidenceGraph,
    corpus: &Corpus,
    gate: DistanceGate,
) -> Weights {
    if kind.is_coauthor() {
        return aggregate_coauthor(&coauthor_scores(kind, g), corpus);
    }
    match kind {
        ScoreKind::Jaccard1 => aggregate_bipartite(|i, j| jaccard1(inc, i, j), g, corpus, gate),
        ScoreKind::Jaccard2 => aggregate_bipartite(|i, j| jaccard2(inc, i, j), g, corpus, gate),
        ScoreKind::AdamicAdar => aggregate_bipartite(|i, j| adamic_adar(inc, i, j), g, corpus, gate),
        ScoreKind::Cooc1 => {
            let sim = JournalSimilarity::new(inc, JaccardVariant::Plain);
            aggregate_bipartite(|i, j| cooc_with(inc, &sim, i, j), g, corpus, gate)
        }
        ScoreKind::Cooc2 => {
            let sim = JournalSimilarity::new(inc, JaccardVariant::Weighted);
            aggregate_bipartite(|i, j| cooc_with(inc, &sim, i, j), g, corpus, gate)
        }
        _ => unreachable!("coauthor kinds handled above"),
    }
}

/// Which threshold rule a run uses when none is forced: percentile for
/// the neighborhood family, median-of-training for the bipartite one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleKind {
    Percentile,
    Median,
}

impl std::str::FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "percentile" => Ok(RuleKind::Percentile),
            "median" => Ok(RuleKind::Median),
            other => Err(format!("unknown rule {other:?}; expected percentile or median")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunSettings {
    pub score: ScoreKind,
    pub rule: Option<RuleKind>,
    pub p: Weight,
    pub gate: DistanceGate,
    pub population: PercentilePopulation,
}

impl RunSettings {
    pub fn new(score: ScoreKind) -> Self {
        RunSettings {
            score,
            rule: None,
            p: 0.4,
            gate: DistanceGate::Below(10),
            population: PercentilePopulation::All,
        }
    }

    fn rule_used(&self) -> RuleKind {
        self.rule.unwrap_or(if self.score.is_coauthor() {
            RuleKind::Percentile
        } else {
            RuleKind::Median
        })
    }

    fn param_label(&self) -> String {
        if self.score.is_coauthor() {
            format!("p={}", self.p)
        } else {
            format!("d={}", self.gate)
        }
    }
}

pub struct RunOutcome {
    pub prediction: Prediction<Weight>,
    pub report: Report,
    pub weights: Weights,
    /// The same weights computed from the test-period data; used to
    /// color exported edges.
    pub test_weights: Weights,
    pub rule_used: RuleKind,
    pub settings: RunSettings,
}

impl RunOutcome {
    /// Human-readable threshold-and-counts log.
    pub fn summary(&self, input: &PipelineInput) -> String {
        format!(
            "score {} ({}, rule {:?}): threshold pi = {:.6}, predicted {} of {} candidates, \
             {} correct, m_new = {}, accuracy {:.3}, recall {:.3}, random guess {:.3}",
            self.settings.score,
            self.settings.param_label(),
            self.rule_used,
            self.prediction.threshold,
            self.report.n_predicted,
            input.candidates.len(),
            self.report.n_correct,
            self.report.m_new,
            self.report.accuracy,
            self.report.recall,
            self.report.random_guess_accuracy,
        )
    }
}

pub fn run_prediction(input: &PipelineInput, settings: &RunSettings) -> Result<RunOutcome, Error> {
    if !(0.0..=1.0).contains(&settings.p) {
        return Err(Error::InvalidConfig(format!(
            "p must lie in [0, 1], got {}",
            settings.p
        )));
    }
    let weights = school_weights_for(
        settings.score,
        &input.g_train,
        &input.inc_train,
        &input.train,
        settings.gate,
    );
    let rule_used = settings.rule_used();
    let prediction = match rule_used {
        RuleKind::Percentile => {
            predict_percentile_from(&weights, &input.train_edges, settings.p, settings.population)
        }
        RuleKind::Median => predict_median(&weights, &input.train_edges),
    };
    let report = evaluate(&prediction.edges, &input.new_edges, &input.candidates)?;
    let test_weights = school_weights_for(
        settings.score,
        &input.g_test,
        &input.inc_test,
        &input.test,
        settings.gate,
    );
    Ok(RunOutcome {
        prediction,
        report,
        weights,
        test_weights,
        rule_used,
        settings: settings.clone(),
    })
}

/// One evaluated cell of the summary grid.
pub struct SweepRow {
    pub family: &'static str,
    pub score: String,
    pub param: String,
    pub threshold: Weight,
    pub report: Report,
}

pub struct SweepConfig {
    pub p_values: Vec<Weight>,
    pub gates: Vec<DistanceGate>,
    pub communities: Vec<usize>,
    pub population: PercentilePopulation,
}

impl Default for SweepConfig {
    /// The full published grid: p in {1, 0.4, 0.3, 0.2}, d in
    /// {NA, inf, 10, 4}, N in {5..8}.
    fn default() -> Self {
        SweepConfig {
            p_values: vec![1.0, 0.4, 0.3, 0.2],
            gates: vec![
                DistanceGate::Off,
                DistanceGate::Reachable,
                DistanceGate::Below(10),
                DistanceGate::Below(4),
            ],
            communities: vec![5, 6, 7, 8],
            population: PercentilePopulation::All,
        }
    }
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Community cuts skipped because the dendrogram has fewer leaves.
    pub skipped_cuts: Vec<usize>,
    pub m_new: usize,
    pub n_candidates: usize,
    pub random_guess_accuracy: Weight,
}

pub fn run_sweep(input: &PipelineInput, cfg: &SweepConfig) -> Result<SweepResult, Error> {
    let mut rows = Vec::new();
    for &p in &cfg.p_values {
        for kind in ScoreKind::COAUTHOR {
            let settings = RunSettings {
                score: kind,
                rule: Some(RuleKind::Percentile),
                p,
                gate: DistanceGate::Off,
                population: cfg.population,
            };
            let outcome = run_prediction(input, &settings)?;
            rows.push(SweepRow {
                family: "coauthor",
                score: kind.name().into(),
                param: format!("p={p}"),
                threshold: outcome.prediction.threshold,
                report: outcome.report,
            });
        }
    }
    for &gate in &cfg.gates {
        for kind in ScoreKind::BIPARTITE {
            let settings = RunSettings {
                score: kind,
                rule: Some(RuleKind::Median),
                p: 1.0,
                gate,
                population: cfg.population,
            };
            let outcome = run_prediction(input, &settings)?;
            rows.push(SweepRow {
                family: "bipartite",
                score: kind.name().into(),
                param: format!("d={gate}"),
                threshold: outcome.prediction.threshold,
                report: outcome.report,
            });
        }
    }
    let mut skipped_cuts = Vec::new();
    if !cfg.communities.is_empty() {
        let baseline = run_baseline(input, &cfg.communities)?;
        skipped_cuts = baseline.skipped;
        for cut in baseline.cuts {
            rows.push(SweepRow {
                family: "community",
                score: "comm-detect".into(),
                param: format!("N={}", cut.n),
                threshold: 0.0,
                report: cut.report,
            });
        }
    }
    let m_new = input.new_edges.len();
    let n_candidates = input.candidates.len();
    Ok(SweepResult {
        rows,
        skipped_cuts,
        m_new,
        n_candidates,
        random_guess_accuracy: if n_candidates == 0 {
            0.0
        } else {
            m_new as Weight / n_candidates as Weight
        },
    })
}

pub struct BaselineCut {
    pub n: usize,
    pub partition: Partition,
    pub prediction: SchoolEdgeSet,
    pub report: Report,
}

pub struct BaselineOutcome {
    pub dendrogram: Dendrogram<Weight>,
    pub cuts: Vec<BaselineCut>,
    pub skipped: Vec<usize>,
}

pub fn run_baseline(input: &PipelineInput, communities: &[usize]) -> Result<BaselineOutcome, Error> {
    let sg = build_school_graph::<Weight>(&input.g_train, &input.train);
    let dendrogram = greedy_modularity(&sg)?;
    let mut cuts = Vec::new();
    let mut skipped = Vec::new();
    for &n in communities {
        if n == 0 || n > dendrogram.leaves() {
            skipped.push(n);
            continue;
        }
        let partition = cut(&dendrogram, n)?;
        let prediction = predict_from_partition(&partition, &input.train_edges);
        let report = evaluate(&prediction, &input.new_edges, &input.candidates)?;
        cuts.push(BaselineCut {
            n,
            partition,
            prediction,
            report,
        });
    }
    Ok(BaselineOutcome {
        dendrogram,
        cuts,
        skipped,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn io_at<T>(path: &Path, result: std::io::Result<T>) -> Result<T, Error> {
    result.map_err(|e| Error::io(path, e))
}

/// Writes `prediction.csv`, `weights.csv` and `report.csv` for one run.
pub fn write_run(outcome: &RunOutcome, dir: &Path) -> Result<(), Error> {
    let path = dir.join("prediction.csv");
    io_at(&path, outcome.prediction.write_csv(create(&path)?))?;
    let path = dir.join("weights.csv");
    io_at(&path, outcome.weights.write_csv(create(&path)?))?;
    let path = dir.join("report.csv");
    let mut out = create(&path)?;
    io_at(&path, write_report_header(&mut out))?;
    io_at(
        &path,
        write_report_row(
            &mut out,
            "run",
            outcome.settings.score.name(),
            &outcome.settings.param_label(),
            outcome.prediction.threshold,
            &outcome.report,
        ),
    )?;
    Ok(())
}

fn write_report_header(out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "family,score,param,threshold,n_predicted,n_correct,m_new,n_candidates,accuracy,recall,random_guess_accuracy"
    )
}

fn write_report_row(
    out: &mut impl Write,
    family: &str,
    score: &str,
    param: &str,
    threshold: Weight,
    report: &Report,
) -> std::io::Result<()> {
    writeln!(
        out,
        "{family},{score},{param},{threshold},{},{},{},{},{},{},{}",
        report.n_predicted,
        report.n_correct,
        report.m_new,
        report.n_candidates,
        report.accuracy,
        report.recall,
        report.random_guess_accuracy,
    )
}

pub fn write_sweep_csv(result: &SweepResult, mut out: impl Write) -> std::io::Result<()> {
    write_report_header(&mut out)?;
    for row in &result.rows {
        write_report_row(&mut out, row.family, &row.score, &row.param, row.threshold, &row.report)?;
    }
    Ok(())
}

/// Aligned text table grouped like the published summary: one block per
/// parameter value with edge counts, accuracy and recall per score.
pub fn write_sweep_table(result: &SweepResult, mut out: impl Write) -> std::io::Result<()> {
    let families: [(&str, &str, Vec<&str>); 3] = [
        (
            "coauthor",
            "p",
            ScoreKind::COAUTHOR.iter().map(|k| k.name()).collect(),
        ),
        (
            "bipartite",
            "d",
            ScoreKind::BIPARTITE.iter().map(|k| k.name()).collect(),
        ),
        ("community", "N", vec!["comm-detect"]),
    ];
    for (family, param_name, scores) in families {
        let rows: Vec<&SweepRow> = result.rows.iter().filter(|r| r.family == family).collect();
        if rows.is_empty() {
            continue;
        }
        writeln!(out, "[{family}]")?;
        write!(out, "{param_name:>8}  {:<12}", "metric")?;
        for score in &scores {
            write!(out, "{score:>18}")?;
        }
        writeln!(out)?;
        let mut params: Vec<&str> = rows.iter().map(|r| r.param.as_str()).collect();
        params.dedup();
        for param in params {
            let value = param.split_once('=').map(|(_, v)| v).unwrap_or(param);
            for (metric, pick) in [
                ("edges", 0usize),
                ("accuracy", 1),
                ("recall", 2),
            ] {
                if pick == 0 {
                    write!(out, "{value:>8}  {metric:<12}")?;
                } else {
                    write!(out, "{:>8}  {metric:<12}", "")?;
                }
                for score in &scores {
                    let row = rows
                        .iter()
                        .find(|r| r.param == param && r.score == *score)
                        .expect("sweep grid is complete");
                    match pick {
                        0 => write!(out, "{:>18}", row.report.n_predicted)?,
                        1 => write!(out, "{:>18.3}", row.report.accuracy)?,
                        _ => write!(out, "{:>18.3}", row.report.recall)?,
                    }
                }
                writeln!(out)?;
            }
        }
        writeln!(out)?;
    }
    writeln!(
        out,
        "random guess accuracy: {:.3} ({} new of {} candidate pairs)",
        result.random_guess_accuracy, result.m_new, result.n_candidates
    )?;
    if !result.skipped_cuts.is_empty() {
        writeln!(
            out,
            "skipped community cuts (more communities than schools): {:?}",
            result.skipped_cuts
        )?;
    }
    Ok(())
}

/// Reads the school pairs back out of a prediction CSV.
pub fn read_prediction_csv(path: &Path) -> Result<SchoolEdgeSet, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut edges = SchoolEdgeSet::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (a, b) = (cols.next(), cols.next());
        match (a, b) {
            (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() && a != b => {
                edges.insert(crate::pair::Pair::new(a.to_string(), b.to_string()));
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "{}:{}: expected school_k,school_l,... row",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(edges)
}
