use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kg_lab::acceptance::{criteria, evaluate};
use kg_lab::runner::{init_workers, run_and_write, write};
use kg_lab::{ExperimentConfig, ExperimentId, LabError, RunReport, Shape, Verdict};

#[derive(Parser)]
#[command(name = "kg-lab", about = "Numerical experiments for quadratic quasilinear Klein-Gordon equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config and KG_LAB_OUT.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the pinned acceptance criteria.
    Acceptance {
        /// Every criterion (the default).
        #[arg(long, conflicts_with = "fast")]
        all: bool,
        /// Only the quick criteria.
        #[arg(long)]
        fast: bool,
        /// Only the listed criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Also write each run's CSV and JSON.
        #[arg(long)]
        write: bool,
    },
    /// Scan `|Φ|` against its lower bound for the given sign pairs.
    ScanPhase {
        /// `++`, `+-`, `-+`, `--`, a comma list of them, or `all`.
        #[arg(long, allow_hyphen_values = true, default_value = "all")]
        signs: String,
        #[arg(long, default_value_t = 8.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        dims: Vec<usize>,
    },
    /// Lifespans of the strong-coefficient instance over a list of amplitudes.
    SweepLifespan {
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2000.0)]
        t_end: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
}

fn print_report(rep: &RunReport) {
    println!("{} [{}] verdict: {}", rep.experiment, &rep.config_hash[..12], rep.verdict.label());
    for f in &rep.fits {
        let ci = f.ci95.map_or(String::new(), |(lo, hi)| format!(" ci95 [{lo:.4}, {hi:.4}]"));
        println!("  fit {}: slope {:.4} r2 {:.4}{ci} over {}", f.name, f.slope, f.r2, f.window);
    }
    for c in &rep.checks {
        println!("  check {}: {} ({}) {}", c.name, c.value, c.condition, if c.pass { "ok" } else { "FAIL" });
    }
    for n in &rep.notes {
        println!("  note: {n}");
    }
}

fn finish(rep: &RunReport, cfg: &ExperimentConfig) -> Result<bool, LabError> {
    let w = write(cfg, rep)?;
    print_report(rep);
    println!("  wrote {} and {}", w.csv.display(), w.json.display());
    Ok(rep.verdict != Verdict::Fail)
}

fn main_inner(cli: Cli) -> Result<bool, LabError> {
    init_workers()?;
    match cli.command {
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            if out.is_some() {
                cfg.output_dir = out;
            }
            let (rep, w) = run_and_write(&cfg)?;
            print_report(&rep);
            println!("  wrote {}, {} and {}", w.csv.display(), w.json.display(), w.config.display());
            Ok(rep.verdict != Verdict::Fail)
        }
        Command::Acceptance { all: _, fast, only, write: save } => {
            let mut ok = true;
            for c in criteria() {
                if (fast && !c.fast) || (!only.is_empty() && !only.contains(&c.number)) {
                    continue;
                }
                let out = evaluate(&c)?;
                println!("{}", out.line());
                if save {
                    for (cfg, rep) in c.configs.iter().zip(&out.reports) {
                        write(cfg, rep)?;
                    }
                }
                ok &= out.pass;
            }
            Ok(ok)
        }
        Command::ScanPhase { signs, radius, step, dims } => {
            let mut cfg = ExperimentConfig::base(ExperimentId::PhaseScan);
            if signs != "all" {
                cfg.signs = signs.split(',').map(|s| s.trim().to_string()).collect();
            }
            cfg.radius = radius;
            cfg.step = step;
            cfg.dims = dims;
            cfg.thresholds.stability = Some(0.25);
            let rep = kg_lab::experiments::run(&cfg)?;
            finish(&rep, &cfg)
        }
        Command::SweepLifespan { eps, dim, t_end, n } => {
            let mut cfg = ExperimentConfig::base(ExperimentId::LifespanSweep);
            cfg.dim = dim;
            cfg.n = n;
            cfg.regularity = ExperimentConfig::default_regularity(dim).min(8.0);
            cfg.alpha = 40.0;
            cfg.beta = 0.0;
            cfg.gamma1 = 0.0;
            cfg.gamma2 = 40.0;
            cfg.shape = Shape::BandMean;
            cfg.eps = eps;
            cfg.dt = 0.02;
            cfg.t_end = t_end;
            let rep = kg_lab::experiments::run(&cfg)?;
            finish(&rep, &cfg)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
