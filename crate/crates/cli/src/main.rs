use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use gtci_core::constellations::{
    enumerate_constellations_with, is_fano, SearchOptions, WeightDegreeConstellation, DIMENSION,
};
use gtci_core::geometry::{
    anticanonical_class, anticanonical_selfintersection, generator_matrix, h0_anticanonical,
};
use gtci_core::pipeline::{
    check_record, classify_with, run_fixtures, run_fixtures_with, to_csv, to_json, to_table,
    ClassifyOptions, ExampleData,
};
use gtci_core::torsion::{is_almost_free, is_gorenstein_matrix, DegreeMatrix, FiniteAbelianGroup};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DATA: u8 = 4;

/// Smallest tail cutoff accepted; below it the sweep is not known to be
/// complete.
const MIN_CUTOFF: u64 = 24;

#[derive(Parser, Debug)]
#[command(
    name = "gtci",
    version,
    about = "Classify Gorenstein Fano toric complete intersection threefolds of Picard number one",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage error, \
                  3 output not writable, 4 inconsistent degree data."
)]
struct Cli {
    /// Print progress to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the weight-degree constellations of one type.
    Enumerate {
        /// Type `d,c`, e.g. `3,1`.
        #[arg(long = "type", value_parser = parse_type)]
        kind: (usize, usize),
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Classify families and write the records.
    Classify {
        /// Restrict to one type `d,c`; all codimensions when omitted.
        #[arg(long = "type", value_parser = parse_type)]
        kind: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; defaults to standard output, or to a file in
        /// `GTCI_OUTPUT_DIR` when that is set.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, env = "GTCI_OUTPUT_DIR", hide_env_values = true)]
        output_dir: Option<PathBuf>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Invariants of explicit degree data.
    Invariants(DegreeData),
    /// Run the worked-example fixtures and the property suite.
    Verify {
        #[command(flatten)]
        sweep: Sweep,
        /// Perturb the fixture data to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Sweep {
    /// Largest first tail entry tried by the constellation sweep.
    #[arg(long, default_value_t = 100, value_parser = parse_cutoff)]
    cutoff: u64,
}

#[derive(Args, Debug)]
struct DegreeData {
    /// Weights, ascending, comma separated.
    #[arg(long = "w", value_delimiter = ',', required = true)]
    weights: Vec<u64>,
    /// Relation degrees, comma separated.
    #[arg(long = "deg", value_delimiter = ',', required = true)]
    degrees: Vec<u64>,
    /// Invariant factors of the torsion part, largest first.
    #[arg(long, value_delimiter = ',')]
    torsion: Vec<u64>,
    /// One torsion row per invariant factor; repeat the flag per row.
    #[arg(long)]
    eta: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "tex",
        }
    }
}

fn parse_type(s: &str) -> Result<(usize, usize), String> {
    let (d, c) = s.split_once(',').ok_or("expected `d,c`")?;
    let d: usize = d
        .trim()
        .parse()
        .map_err(|e| format!("bad dimension: {e}"))?;
    let c: usize = c
        .trim()
        .parse()
        .map_err(|e| format!("bad codimension: {e}"))?;
    if d != DIMENSION || !(1..=3).contains(&c) {
        return Err(format!("type ({d},{c}) is not one of (3,1), (3,2), (3,3)"));
    }
    Ok((d, c))
}

fn parse_cutoff(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_CUTOFF {
        return Err(format!("cutoff must be at least {MIN_CUTOFF}"));
    }
    Ok(n)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Enumerate { kind, sweep } => enumerate(kind, sweep),
        Command::Classify {
            kind,
            format,
            output,
            output_dir,
            sweep,
        } => classify(kind, format, output, output_dir, sweep, cli.verbose),
        Command::Invariants(data) => invariants(&data),
        Command::Verify {
            sweep,
            inject_fault,
        } => verify(sweep, inject_fault, cli.verbose),
    };
    ExitCode::from(code)
}

fn enumerate((d, c): (usize, usize), sweep: Sweep) -> u8 {
    let options = SearchOptions {
        cutoff: sweep.cutoff,
        ..SearchOptions::default()
    };
    match enumerate_constellations_with(d, c, options) {
        Ok(set) => {
            let mut out = io::stdout().lock();
            for k in set {
                if writeln!(out, "{k}").is_err() {
                    return EXIT_IO;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn classify(
    kind: Option<(usize, usize)>,
    format: Format,
    output: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    sweep: Sweep,
    verbose: bool,
) -> u8 {
    let c_set: BTreeSet<usize> = match kind {
        Some((_, c)) => [c].into_iter().collect(),
        None => (1..=3).collect(),
    };
    if verbose {
        eprintln!(
            "classifying codimensions {c_set:?} with cutoff {}",
            sweep.cutoff
        );
    }
    let options = ClassifyOptions {
        cutoff: sweep.cutoff,
    };
    let (records, summary) = match classify_with(DIMENSION, &c_set, options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILED;
        }
    };
    let text = match format {
        Format::Json => to_json(&records),
        Format::Csv => to_csv(&records),
        Format::Table => to_table(&records),
    };
    let target = output.or_else(|| {
        output_dir.map(|dir| dir.join(format!("classification.{}", format.extension())))
    });
    let written = match &target {
        Some(path) => fs::write(path, &text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let place = target
            .as_deref()
            .map_or("standard output".into(), |p| p.display().to_string());
        eprintln!("error: cannot write {place}: {e}");
        return EXIT_IO;
    }
    for (c, n) in &summary.per_type {
        eprintln!("type (3,{c}): {n}");
    }
    eprintln!("total: {}", summary.total);
    0
}

fn parse_degree_matrix(data: &DegreeData) -> Result<DegreeMatrix, String> {
    let n = data.weights.len();
    let c = data.degrees.len();
    if n < c + 2 {
        return Err(format!("{n} weights cannot carry {c} relations"));
    }
    let k = WeightDegreeConstellation::from_parts(n - 1 - c, &data.weights, &data.degrees)
        .map_err(|e| e.to_string())?;
    let gamma = FiniteAbelianGroup::new(data.torsion.clone()).map_err(|e| e.to_string())?;
    let rows = data
        .eta
        .iter()
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|e| format!("bad torsion entry {x:?}: {e}"))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if gamma.is_trivial() && rows.is_empty() {
        return Ok(DegreeMatrix::trivial(k));
    }
    DegreeMatrix::from_torsion_rows(k, gamma, &rows).map_err(|e| e.to_string())
}

fn invariants(data: &DegreeData) -> u8 {
    let q = match parse_degree_matrix(data) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DATA;
        }
    };
    let anti = anticanonical_class(&q);
    let mut lines = vec![
        format!("constellation: {}", q.constellation()),
        format!("torsion: {:?}", q.gamma().factors()),
        format!("-K: ({}, {:?})", anti.z, anti.torsion.coords()),
        format!("-K^3: {}", anticanonical_selfintersection(&q)),
    ];
    let almost_free = is_almost_free(&q);
    let h0 = generator_matrix(&q).and_then(|p| h0_anticanonical(&q, &p));
    lines.push(match h0 {
        Ok(h) => format!("h0(-K): {h}"),
        Err(_) => "h0(-K): n/a".into(),
    });
    lines.push(format!("fano: {}", is_fano(q.constellation())));
    lines.push(format!("gorenstein: {}", is_gorenstein_matrix(&q)));
    lines.push(format!("almost free: {almost_free}"));
    let mut out = io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return EXIT_IO;
        }
    }
    0
}

fn verify(sweep: Sweep, inject_fault: bool, verbose: bool) -> u8 {
    let report = if inject_fault {
        let mut data = ExampleData::default();
        data.p[0][0] += 1;
        run_fixtures_with(&data)
    } else {
        run_fixtures()
    };
    let mut failures: Vec<String> = report
        .failures()
        .iter()
        .map(|f| format!("fixture {}: {}", f.name, f.detail))
        .collect();
    if verbose {
        eprintln!("{} fixtures checked", report.results.len());
    }
    let options = ClassifyOptions {
        cutoff: sweep.cutoff,
    };
    match classify_with(DIMENSION, &(1..=3).collect(), options) {
        Ok((records, summary)) => {
            let found: Vec<String> = records.par_iter().flat_map(check_record).collect();
            failures.extend(found);
            println!("fixtures: {} checked", report.results.len());
            for (c, n) in &summary.per_type {
                println!("type (3,{c}): {n}");
            }
            println!("total: {}", summary.total);
        }
        Err(e) => failures.push(e.to_string()),
    }
    if failures.is_empty() {
        println!("all checks passed");
        0
    } else {
        for f in &failures {
            eprintln!("FAIL {f}");
        }
        EXIT_FAILED
    }
}
