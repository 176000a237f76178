use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use hypat::discretize::build_cutpoints;
use hypat::ingest::{load_table, parse_decimal, to_transactions, LoadOptions, RawTable, SchemaSource, TableSchema};
use hypat::miner::{mine, MinerConfig};
use hypat::oracle::{oracle_mine, DEFAULT_CAP};
use hypat::random::random_dataset;
use hypat::report::{emit_report, render_cuts, render_pattern, ClassSection, Format, RunReport};
use hypat::{Dataset, Measure};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(name = "hypat", version, about = "Exhaustive-covering discriminative pattern mining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the patterns of every target class and print a report.
    Mine(MineArgs),
    /// Print the cut-points of every numeric attribute per target class.
    Cuts(DataArgs),
    /// Cross-check the miner against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DataArgs {
    /// CSV or TSV file with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Column kinds, one `name symbolic|numeric|class|ignore` per line.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Class column (default: the last column).
    #[arg(long)]
    class_column: Option<String>,
    /// Class of interest; repeatable (default: every class in order of appearance).
    #[arg(long)]
    target_class: Vec<String>,
    /// Bin width applied to numeric values before cut-points are placed.
    #[arg(long, default_value = "1e-6")]
    epsilon: String,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "fscore")]
    measure: Measure,
    /// Stop each class after this many seconds and report what was found.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    no_reorder: bool,
    #[arg(long)]
    no_merge: bool,
    #[arg(long)]
    no_bnb: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl SearchArgs {
    fn config(&self) -> MinerConfig {
        MinerConfig {
            measure: self.measure,
            dynamic_merge: !self.no_merge,
            reorder: !self.no_reorder,
            bnb: !self.no_bnb,
            threads: self.threads.max(1),
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Also print the cut-points of each class to stderr.
    #[arg(long)]
    dump_cuts: bool,
    #[arg(long, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check this (small) file instead of generated instances.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    class_column: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of generated instances.
    #[arg(long, default_value_t = 200)]
    count: u64,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Mismatch(String),
}

impl From<hypat::Error> for Failure {
    fn from(e: hypat::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(data: &DataArgs) -> Result<RawTable, Failure> {
    let epsilon = parse_decimal(&data.epsilon).ok_or_else(|| Failure::Input(format!("invalid epsilon `{}`", data.epsilon)))?;
    let schema = match &data.schema {
        Some(p) => SchemaSource::Explicit(TableSchema::parse(&std::fs::read_to_string(p)?)?),
        None => SchemaSource::Auto,
    };
    let file = File::open(&data.input).map_err(|e| Failure::Input(format!("{}: {e}", data.input.display())))?;
    let opts = LoadOptions { class_column: data.class_column.clone(), epsilon };
    Ok(load_table(file, &schema, &opts)?)
}

fn target_classes(data: &DataArgs, table: &RawTable) -> Vec<String> {
    if data.target_class.is_empty() {
        table.class_labels()
    } else {
        data.target_class.clone()
    }
}

fn dataset(table: &RawTable, class: &str) -> Result<Dataset, Failure> {
    let cuts = build_cutpoints(table, class)?;
    Ok(to_transactions(table, &cuts, class)?)
}

fn run_mine(args: &MineArgs) -> Result<u8, Failure> {
    let table = load(&args.data)?;
    let cfg = args.search.config();
    let mut sections = Vec::new();
    for class in target_classes(&args.data, &table) {
        let d = dataset(&table, &class)?;
        if args.dump_cuts {
            eprint!("# cut-points for class {class}\n{}", render_cuts(&d));
        }
        let result = mine(&d, &cfg);
        sections.push(ClassSection::new(&d, &result));
    }
    let report = RunReport { measure: cfg.measure, config: cfg, sections };
    let text = emit_report(&report, args.format);
    match &args.output {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(if report.truncated() { EXIT_TRUNCATED } else { 0 })
}

fn run_cuts(args: &DataArgs) -> Result<u8, Failure> {
    let table = load(args)?;
    let classes = target_classes(args, &table);
    let mut out = String::new();
    for class in &classes {
        let d = dataset(&table, class)?;
        if classes.len() > 1 {
            out.push_str(&format!("# class {class}\n"));
        }
        out.push_str(&render_cuts(&d));
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(0)
}

/// Compare miner and oracle on one dataset; a description of the first
/// difference on mismatch.
fn check(d: &Dataset, cfg: &MinerConfig) -> Result<Option<String>, Failure> {
    let expected = oracle_mine(d, cfg.measure, DEFAULT_CAP)?;
    let got = mine(d, cfg).patterns;
    if got == expected {
        return Ok(None);
    }
    let show = |v: &[hypat::Candidate]| {
        v.iter()
            .map(|c| format!("  {} {:?} {}", render_pattern(d, &c.pattern), c.stats, c.score.to_decimal(6)))
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok(Some(format!("oracle:\n{}\nminer:\n{}", show(&expected), show(&got))))
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let cfg = args.search.config();
    let mut checked = 0;
    if let Some(input) = &args.input {
        let data = DataArgs {
            input: input.clone(),
            schema: None,
            class_column: args.class_column.clone(),
            target_class: Vec::new(),
            epsilon: "1e-6".into(),
        };
        let table = load(&data)?;
        for class in table.class_labels() {
            if let Some(diff) = check(&dataset(&table, &class)?, &cfg)? {
                return Err(Failure::Mismatch(format!("class {class}\n{diff}")));
            }
            checked += 1;
        }
    } else {
        for seed in args.seed..args.seed + args.count {
            if let Some(diff) = check(&random_dataset(seed), &cfg)? {
                return Err(Failure::Mismatch(format!("instance seed {seed}\n{diff}")));
            }
            checked += 1;
        }
    }
    println!("{checked} instances: miner equals oracle");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Mine(a) => run_mine(a),
        Command::Cuts(a) => run_cuts(a),
        Command::Verify(a) => run_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("hypat: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("hypat: mismatch on {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}
