//! Command-line front end: ingest, split, predict, baseline, evaluate,
//! sweep, export and synth subcommands over the collabnet pipeline.
//!
//! Exit codes: 0 on success, 1 on validation errors, 2 on I/O errors.

use std::error::Error as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use collabnet::export::{export_graph, ExportFormat};
use collabnet::pipeline::{
    prepare, read_prediction_csv, run_baseline, run_prediction, run_sweep, write_run,
    write_sweep_csv, write_sweep_table, DataPaths, RuleKind, RunSettings, SweepConfig,
};
use collabnet::{
    evaluate, load_corpus, CoauthorGraph, DistanceGate, Error, IncidenceGraph,
    PercentilePopulation, Report, ScoreKind, YearRange,
};

#[derive(Parser)]
#[command(
    name = "collabnet",
    version,
    about = "Predict new cross-discipline collaboration links from co-authorship and journal data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Researcher records, one JSON object per line
    #[arg(long)]
    researchers: PathBuf,
    /// Publication records, one JSON object per line
    #[arg(long)]
    publications: PathBuf,
    /// School-to-faculty table; defaults to the built-in hierarchy
    #[arg(long)]
    organisations: Option<PathBuf>,
}

impl DataArgs {
    fn paths(&self) -> DataPaths {
        DataPaths {
            researchers: self.researchers.clone(),
            publications: self.publications.clone(),
            organisations: self.organisations.clone(),
        }
    }
}

#[derive(Args, Clone)]
struct YearArgs {
    /// Training period, e.g. 2008..2010
    #[arg(long)]
    train_years: YearRange,
    /// Test period, e.g. 2011..2013
    #[arg(long)]
    test_years: YearRange,
}

#[derive(Args, Clone)]
struct ScoreArgs {
    /// Similarity score: path2, common-neighbors, order2-overlap,
    /// path-weight-sum, jaccard1, jaccard2, adamic-adar, cooc1, cooc2
    #[arg(long)]
    score: ScoreKind,
    /// Threshold rule; defaults to percentile for the co-authorship
    /// scores and median for the bipartite ones
    #[arg(long)]
    rule: Option<RuleKind>,
    /// Percentile parameter in [0, 1] (percentile rule)
    #[arg(long, default_value_t = 0.4)]
    p: f64,
    /// Geodesic gate for bipartite aggregation: NA, inf, or a positive
    /// integer bound (strict)
    #[arg(long, default_value = "10")]
    d: DistanceGate,
    /// Weights entering the percentile: all positive pairs or candidates
    /// only
    #[arg(long, default_value = "all")]
    population: PercentilePopulation,
}

impl ScoreArgs {
    fn settings(&self) -> RunSettings {
        RunSettings {
            score: self.score,
            rule: self.rule,
            p: self.p,
            gate: self.d,
            population: self.population,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a corpus, printing summary counts
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        /// Write coordinate-list dumps (coauthor.coo, incidence.coo)
        #[arg(long)]
        dump_graphs: Option<PathBuf>,
    },
    /// Split a corpus into train/test halves by publication year
    Split {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
        /// Output directory (train/ and test/ subdirectories)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the three-step link prediction end to end
    Predict {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
        #[command(flatten)]
        score: ScoreArgs,
        /// Output directory for prediction.csv, weights.csv, report.csv
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Community-detection baseline with dendrogram cuts
    Baseline {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
        /// Community counts to cut the dendrogram at
        #[arg(long, value_delimiter = ',', default_value = "5,6,7,8")]
        communities: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a stored prediction CSV against the test period
    Evaluate {
        /// Prediction CSV (school_k,school_l,... rows)
        #[arg(long)]
        pred: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
    },
    /// The full score-by-parameter evaluation grid
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a prediction and export it as a graph-description file
    Export {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        years: YearArgs,
        #[command(flatten)]
        score: ScoreArgs,
        /// Output format: dot or graphml
        #[arg(long, default_value = "dot")]
        format: ExportFormat,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic corpus with planted new links
    Synth {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        schools: usize,
        #[arg(long, default_value_t = 300)]
        researchers: usize,
        #[arg(long, default_value_t = 40)]
        journals: usize,
        /// Test-period school pairs planted as new collaborations
        #[arg(long, default_value_t = 12)]
        planted: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_report(report: &Report) {
    println!(
        "predicted {} | correct {} | new edges {} | candidates {}",
        report.n_predicted, report.n_correct, report.m_new, report.n_candidates
    );
    println!(
        "accuracy {:.3} | recall {:.3} | random guess accuracy {:.3}",
        report.accuracy, report.recall, report.random_guess_accuracy
    );
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Ingest { data, dump_graphs } => {
            let paths = data.paths();
            let org = paths.org_table()?;
            let corpus = load_corpus(&paths.researchers, &paths.publications, &org)?;
            println!(
                "researchers {} | publications {} | schools {} | journals {}",
                corpus.researcher_count(),
                corpus.publications().len(),
                corpus.schools().len(),
                corpus.journals().len()
            );
            if let Some(dir) = dump_graphs {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let g = CoauthorGraph::from_corpus(&corpus);
                let path = dir.join("coauthor.coo");
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                g.write_coo(std::io::BufWriter::new(file))
                    .map_err(|e| Error::io(&path, e))?;
                let inc = IncidenceGraph::from_corpus(&corpus);
                let path = dir.join("incidence.coo");
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                inc.write_coo(std::io::BufWriter::new(file))
                    .map_err(|e| Error::io(&path, e))?;
                println!("graph dumps written to {}", dir.display());
            }
        }
        Command::Split { data, years, out } => {
            let paths = data.paths();
            let org = paths.org_table()?;
            let corpus = load_corpus(&paths.researchers, &paths.publications, &org)?;
            let split = collabnet::split_by_year(&corpus, years.train_years, years.test_years)?;
            split.train.save(&out.join("train"))?;
            split.test.save(&out.join("test"))?;
            println!(
                "train publications {} | test publications {} | dropped (outside both periods) {}",
                split.train.publications().len(),
                split.test.publications().len(),
                split.dropped
            );
        }
        Command::Predict {
            data,
            years,
            score,
            out,
        } => {
            let input = prepare(&data.paths(), years.train_years, years.test_years)?;
            if input.dropped > 0 {
                println!("dropped {} publications outside both periods", input.dropped);
            }
            let outcome = run_prediction(&input, &score.settings())?;
            println!("{}", outcome.summary(&input));
            if let Some(dir) = out {
                write_run(&outcome, &dir)?;
                println!("artifacts written to {}", dir.display());
            }
        }
        Command::Baseline {
            data,
            years,
            communities,
            out,
        } => {
            let input = prepare(&data.paths(), years.train_years, years.test_years)?;
            let baseline = run_baseline(&input, &communities)?;
            let (best_n, best_q) = baseline.dendrogram.best_cut();
            println!(
                "optimal cut: {} communities at modularity {:.4}",
                best_n, best_q
            );
            for cut in &baseline.cuts {
                println!(
                    "N={}: predicted {} | accuracy {:.3} | recall {:.3}",
                    cut.n, cut.report.n_predicted, cut.report.accuracy, cut.report.recall
                );
            }
            for n in &baseline.skipped {
                eprintln!("skipping N={n}: dendrogram has {} leaves", baseline.dendrogram.leaves());
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let path = dir.join("dendrogram.txt");
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                baseline
                    .dendrogram
                    .write_text(std::io::BufWriter::new(file))
                    .map_err(|e| Error::io(&path, e))?;
                for cut in &baseline.cuts {
                    let path = dir.join(format!("partition_{}.csv", cut.n));
                    let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    cut.partition
                        .write_csv(std::io::BufWriter::new(file))
                        .map_err(|e| Error::io(&path, e))?;
                    let path = dir.join(format!("prediction_{}.csv", cut.n));
                    let mut file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    writeln!(file, "school_k,school_l").map_err(|e| Error::io(&path, e))?;
                    for pair in &cut.prediction {
                        writeln!(file, "{},{}", pair.first(), pair.second())
                            .map_err(|e| Error::io(&path, e))?;
                    }
                }
                println!("artifacts written to {}", dir.display());
            }
        }
        Command::Evaluate { pred, data, years } => {
            let input = prepare(&data.paths(), years.train_years, years.test_years)?;
            let edges = read_prediction_csv(&pred)?;
            let report: Report = evaluate(&edges, &input.new_edges, &input.candidates)?;
            print_report(&report);
        }
        Command::Sweep { data, years, out } => {
            let input = prepare(&data.paths(), years.train_years, years.test_years)?;
            let result = run_sweep(&input, &SweepConfig::default())?;
            let mut table = Vec::new();
            write_sweep_table(&result, &mut table).expect("in-memory write");
            print!("{}", String::from_utf8(table).expect("table is utf-8"));
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let path = dir.join("sweep.csv");
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_sweep_csv(&result, std::io::BufWriter::new(file))
                    .map_err(|e| Error::io(&path, e))?;
                let path = dir.join("sweep.txt");
                let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_sweep_table(&result, std::io::BufWriter::new(file))
                    .map_err(|e| Error::io(&path, e))?;
                println!("artifacts written to {}", dir.display());
            }
        }
        Command::Export {
            data,
            years,
            score,
            format,
            out,
        } => {
            let input = prepare(&data.paths(), years.train_years, years.test_years)?;
            let outcome = run_prediction(&input, &score.settings())?;
            println!("{}", outcome.summary(&input));
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let name = match format {
                ExportFormat::Dot => "prediction.dot",
                ExportFormat::GraphMl => "prediction.graphml",
            };
            let path = out.join(name);
            let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            export_graph(
                std::io::BufWriter::new(file),
                &outcome.prediction,
                &input.new_edges,
                &outcome.test_weights,
                input.corpus.school_faculties(),
                format,
            )
            .map_err(|e| Error::io(&path, e))?;
            println!("graph written to {}", path.display());
        }
        Command::Synth {
            seed,
            schools,
            researchers,
            journals,
            planted,
            out,
        } => {
            let cfg = collabnet::synth::SynthConfig {
                seed,
                n_schools: schools,
                n_researchers: researchers,
                n_journals: journals,
                planted_new_links: planted,
            };
            let corpus = collabnet::synth::generate(&cfg)?;
            collabnet::synth::write_corpus(&corpus, &out)?;
            println!(
                "wrote {} researchers, {} publications, {} planted new links to {}",
                corpus.researchers.len(),
                corpus.publications.len(),
                corpus.planted.len(),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let shown = e.to_string();
            eprintln!("error: {shown}");
            let mut source = e.source();
            while let Some(s) = source {
                let text = s.to_string();
                if !shown.contains(&text) {
                    eprintln!("  caused by: {text}");
                }
                source = s.source();
            }
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
