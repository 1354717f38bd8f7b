use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vandercond::bounds::{bound_report, BoundKind};
use vandercond::experiments::{run_to_dir, ExperimentKind, ExperimentSpec};
use vandercond::nodes::{
    classify, gen_compare_bdgy, gen_compare_lili, gen_one_pair, gen_pairwise, gen_well_separated,
    read_nodes, write_nodes, NodeSet,
};
use vandercond::selftest::run_selftest;
use vandercond::spectral::{spectral_summary, LemmaSample, Mode};

/// Exit status for violated preconditions: bad arguments, unreadable or
/// invalid node files, unclassifiable configurations.
const EXIT_PRECONDITION: u8 = 2;
/// Exit status when the spectral solver failed on at least one input.
const EXIT_SOLVER: u8 = 3;
/// Exit status when a self-test check reports a violation.
const EXIT_CHECK_FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "vandercond",
    version,
    about = "Condition numbers of Vandermonde matrices with nodes on the unit circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random node set.
    Gen {
        /// one-pair, pairwise, compare-bdgy, compare-lili or well-separated.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: usize,
        /// Uniformity constant of the pairwise generator.
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extreme singular values and condition number of a node set.
    Cond {
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long, default_value = "gram-dd")]
        mode: Mode,
    },
    /// Classification and every bound with its applicability.
    Bounds {
        #[arg(long)]
        nodes: PathBuf,
    },
    /// Run a randomized experiment or a constant figure.
    Experiment {
        /// one-pair, pairwise, compare-bdgy, compare-lili, fig-crho or fig-ctilde.
        #[arg(long)]
        kind: ExperimentKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gram-dd")]
        mode: Mode,
        /// Figure grid points per axis (default 200 for fig-crho, 100 for fig-ctilde).
        #[arg(long)]
        grid: Option<usize>,
        /// fig-ctilde panels as M:c, repeatable.
        #[arg(long = "panel", value_parser = parse_panel)]
        panels: Vec<(usize, f64)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Envelope grid and randomized matrix-inequality checks.
    Selftest {
        #[arg(long, default_value_t = LemmaSample::default().seed)]
        seed: u64,
    },
}

fn parse_panel(s: &str) -> Result<(usize, f64), String> {
    let (m, c) = s.split_once(':').ok_or("expected M:c")?;
    let m = m.parse().map_err(|e| format!("bad M: {e}"))?;
    let c = c.parse().map_err(|e| format!("bad c: {e}"))?;
    Ok((m, c))
}

/// A failure with its exit status.
struct Failure(u8, String);

impl Failure {
    fn precondition(msg: impl ToString) -> Self {
        Failure(EXIT_PRECONDITION, msg.to_string())
    }
}

fn load_nodes(path: &Path) -> Result<NodeSet, Failure> {
    let file =
        File::open(path).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))?;
    read_nodes(BufReader::new(file))
        .map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn generate(kind: &str, m: usize, c: f64, seed: u64) -> Result<NodeSet, Failure> {
    let need = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(Failure::precondition(msg))
        }
    };
    Ok(match kind {
        "one-pair" => {
            need(m >= 3, "one-pair needs M >= 3")?;
            gen_one_pair(m, seed)
        }
        "pairwise" => {
            need(m >= 4 && m.is_multiple_of(2), "pairwise needs even M >= 4")?;
            need(c >= 1.0, "pairwise needs c >= 1")?;
            gen_pairwise(m, c, seed)
        }
        "compare-bdgy" => {
            need(m == 3, "compare-bdgy uses M = 3")?;
            gen_compare_bdgy(seed)
        }
        "compare-lili" => {
            need(
                m >= 2 && m.is_multiple_of(2),
                "compare-lili needs even M >= 2",
            )?;
            gen_compare_lili(m, seed)
        }
        "well-separated" => {
            need(m >= 2, "well-separated needs M >= 2")?;
            gen_well_separated(m, seed)
        }
        other => {
            return Err(Failure::precondition(format!(
                "unknown generator kind {other:?}"
            )))
        }
    })
}

fn cmd_gen(kind: &str, m: usize, c: f64, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let ns = generate(kind, m, c, seed)?;
    let io_err = |e: io::Error| Failure::precondition(e);
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))?;
            write_nodes(&ns, BufWriter::new(file)).map_err(io_err)
        }
        None => write_nodes(&ns, io::stdout().lock()).map_err(io_err),
    }
}

fn cmd_cond(path: &Path, mode: Mode) -> Result<(), Failure> {
    let ns = load_nodes(path)?;
    let s = spectral_summary(&ns, mode).map_err(|e| Failure(EXIT_SOLVER, e.to_string()))?;
    println!("mode {mode}");
    println!("M {}", ns.len());
    println!("N {}", ns.bandwidth().N());
    println!("sigma_min {}", s.sigma_min.to_sci_string(20));
    println!("sigma_max {}", s.sigma_max.to_sci_string(20));
    println!("cond {}", s.cond.to_sci_string(20));
    Ok(())
}

fn cmd_bounds(path: &Path) -> Result<(), Failure> {
    let ns = load_nodes(path)?;
    let (class, stats) = classify(&ns, None).map_err(Failure::precondition)?;
    let report = bound_report(&ns, &stats);
    println!("class {}", class.name());
    println!("M {}", ns.len());
    println!("N {}", ns.bandwidth().N());
    println!("tau {:?}", stats.tau);
    println!("rho {:?}", stats.rho);
    if let Some(c) = stats.c {
        println!("c {c:?}");
    }
    for e in &report.entries {
        let side = match e.kind {
            BoundKind::Lower => ">=",
            BoundKind::Upper => "<=",
        };
        let status = if e.applicable {
            "applicable".to_string()
        } else {
            format!("n/a ({})", e.note)
        };
        println!(
            "{:<18} {:?} {side} {:e}  {status}",
            e.name, e.target, e.value
        );
    }
    Ok(())
}

fn cmd_experiment(spec: ExperimentSpec, out: &Path) -> Result<(), Failure> {
    let result = run_to_dir(&spec, out).map_err(Failure::precondition)?;
    let failures = result.failures();
    println!("wrote {}/{}.csv and .svg", out.display(), spec.stem());
    if failures > 0 {
        return Err(Failure(
            EXIT_SOLVER,
            format!("solver failed in {failures} trial(s)"),
        ));
    }
    Ok(())
}

fn cmd_selftest(seed: u64) -> Result<(), Failure> {
    let report = run_selftest(&LemmaSample {
        seed,
        ..LemmaSample::default()
    });
    println!("{report}");
    let solver_errors: usize = report.lemmas.outcomes.iter().map(|o| o.errors).sum();
    if solver_errors > 0 {
        return Err(Failure(
            EXIT_SOLVER,
            format!("solver failed in {solver_errors} case(s)"),
        ));
    }
    if !report.passed() {
        return Err(Failure(
            EXIT_CHECK_FAILED,
            "self-test reported violations".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            kind,
            m,
            c,
            seed,
            out,
        } => cmd_gen(&kind, m, c, seed, out.as_deref()),
        Command::Cond { nodes, mode } => cmd_cond(&nodes, mode),
        Command::Bounds { nodes } => cmd_bounds(&nodes),
        Command::Experiment {
            kind,
            m,
            c,
            trials,
            seed,
            mode,
            grid,
            panels,
            out,
        } => {
            let mut spec = ExperimentSpec::new(kind);
            spec.m = m;
            spec.c = c;
            spec.trials = trials;
            spec.seed = seed;
            spec.mode = mode;
            if let Some(g) = grid {
                spec.grid = g;
            }
            if !panels.is_empty() {
                spec.ctilde_panels = panels;
            }
            cmd_experiment(spec, &out)
        }
        Command::Selftest { seed } => cmd_selftest(seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io::stderr(), "vandercond: {msg}");
            ExitCode::from(code)
        }
    }
}
