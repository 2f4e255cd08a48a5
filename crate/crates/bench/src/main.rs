use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bits_bench::bounds::{cmd_bounds, BoundsConfig};
use bits_bench::compare::{compare, write_report};
use bits_bench::fuzz::{cmd_fuzz, FuzzConfig, Mix};
use bits_bench::input::{load_script, load_segments, InputError};
use bits_bench::run::{cmd_run, RunOptions, Structure};
use bits_bench::workload::Window;
use clap::{Parser, Subcommand, ValueEnum};

/// Exercise and compare interval trees from the command line.
#[derive(Parser, Debug)]
#[command(name = "bits-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a segment file, then replay a script of operations.
    Run {
        /// Segment file: `<id> <lo> <hi>` per line.
        segments: PathBuf,
        /// Script file; without one only the load records are printed.
        script: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = StructureArg::Bits)]
        structure: StructureArg,
        /// Fixed dynamic segment tree range (default: span of the segments).
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        dst_range: Option<Vec<i64>>,
        /// Verify invariants after every mutation; exit 2 on failure.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build all three trees over a segment file and compare sizes and costs.
    Compare {
        segments: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        dst_range: Option<Vec<i64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Differential fuzzing against a brute-force oracle.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of consecutive seeds to run, starting at --seed.
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        /// Coordinate window for generated segments.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<i64>>,
        /// Op weights as insert,delete,stab,range.
        #[arg(long, value_delimiter = ',', default_values_t = [25, 25, 25, 25])]
        mix: Vec<u32>,
        /// Directory for shrunk reproducer scripts.
        #[arg(long, default_value = ".")]
        repro_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep random segment sets of size 1..=n-max against the size bounds.
    Bounds {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StructureArg {
    Bits,
    Sst,
    Dst,
    All,
}

impl StructureArg {
    fn selected(self) -> Vec<Structure> {
        match self {
            StructureArg::Bits => vec![Structure::Bits],
            StructureArg::Sst => vec![Structure::Sst],
            StructureArg::Dst => vec![Structure::Dst],
            StructureArg::All => Structure::ALL.to_vec(),
        }
    }
}

const OK: u8 = 0;
const USAGE: u8 = 1;
const FAILED: u8 = 2;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn pair(v: Option<Vec<i64>>, what: &str) -> Result<Option<(i64, i64)>, Failure> {
    match v.as_deref() {
        None => Ok(None),
        Some(&[lo, hi]) if lo < hi => Ok(Some((lo, hi))),
        Some(&[lo, hi]) => Err(Failure::Usage(format!("{what} [{lo}, {hi}] is empty"))),
        Some(_) => unreachable!("clap enforces two values"),
    }
}

fn execute(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Run {
            segments,
            script,
            structure,
            dst_range,
            check,
            out,
        } => {
            let segs = load_segments(&segments)?;
            let script = match script {
                Some(p) => load_script(&p)?,
                None => Vec::new(),
            };
            let opts = RunOptions {
                structures: structure.selected(),
                dst_range: pair(dst_range, "--dst-range")?,
                check,
            };
            let mut w = sink(&out)?;
            let summary = cmd_run(&segs, &script, &opts, &mut w)?;
            w.flush()?;
            Ok(if summary.invariant_failures > 0 { FAILED } else { OK })
        }
        Command::Compare { segments, dst_range, out } => {
            let segs = load_segments(&segments)?;
            let report = compare(&segs, pair(dst_range, "--dst-range")?).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut w = sink(&out)?;
            write_report(&report, &mut w)?;
            w.flush()?;
            Ok(if report.passed() { OK } else { FAILED })
        }
        Command::Fuzz {
            seed,
            seeds,
            ops,
            window,
            mix,
            repro_dir,
            out,
        } => {
            let window = match pair(window, "--window")? {
                Some((lo, hi)) => Window { lo, hi },
                None => Window::default(),
            };
            let &[insert, delete, stab, range] = mix.as_slice() else {
                return Err(Failure::Usage("--mix takes four weights: insert,delete,stab,range".into()));
            };
            let mix = Mix {
                insert,
                delete,
                stab,
                range,
            };
            if mix.insert + mix.delete + mix.stab + mix.range == 0 {
                return Err(Failure::Usage("--mix needs a non-zero weight".into()));
            }
            let cfg = FuzzConfig { seed, ops, window, mix };
            let mut w = sink(&out)?;
            let summary = cmd_fuzz(&cfg, seeds, &repro_dir, &mut w)?;
            w.flush()?;
            eprintln!("fuzz: {}", summary.verdict());
            for path in &summary.reproducers {
                eprintln!("reproducer written to {path}");
            }
            Ok(if summary.failures() > 0 { FAILED } else { OK })
        }
        Command::Bounds {
            n_max,
            trials,
            seed,
            out,
        } => {
            let cfg = BoundsConfig {
                n_max: n_max as usize,
                trials: trials as usize,
                seed,
                window: Window::default(),
            };
            let mut w = sink(&out)?;
            let summary = cmd_bounds(&cfg, &mut w)?;
            w.flush()?;
            eprintln!("bounds: {} sets checked, {} violations", summary.sets_checked, summary.violations);
            Ok(if summary.violations > 0 { FAILED } else { OK })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::from(OK),
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
