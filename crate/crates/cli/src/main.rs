use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use memweight::commands;
use memweight::sweep::{self, Measure, SweepSpec, ALL_MEASURES, DEFAULT_STEP};
use memweight::{emit, CliError, CliResult};
use memweight_core::channel::ChannelKind;
use memweight_core::sdp::SolverOptions;
use memweight_core::weight::WeightOptions;
use memweight_verification::{self as verify, Tolerances};

#[derive(Parser)]
#[command(
    name = "memweight",
    version,
    about = "Weight-based quantum memory toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Depolarizing,
    Damping,
    Erasure,
}

impl From<Family> for ChannelKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Depolarizing => ChannelKind::Depolarizing,
            Family::Damping => ChannelKind::Damping,
            Family::Erasure => ChannelKind::Erasure,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Solver tolerance (for `verify`: every criterion tolerance).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Drop the uniform-marginal constraint on the free part.
    #[arg(long, global = true)]
    no_marginal: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Solver iteration cap.
    #[arg(long, global = true, env = "MEMWEIGHT_SOLVER_MAXITER")]
    max_iter: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Memory weight of a channel descriptor.
    Weight {
        channel: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a one-parameter family and emit one row per grid point.
    Sweep {
        #[arg(long, value_enum)]
        kind: Family,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.0)]
        end: f64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Comma-separated subset; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        measures: Vec<Measure>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification suite.
    Verify {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Payoff of a channel in an exclusion game.
    Game {
        channel: PathBuf,
        game: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Lower bounds and robustness next to the SDP value.
    Bounds {
        channel: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn weight_options(&self) -> CliResult<WeightOptions> {
        let mut solver = SolverOptions::default();
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!("--tol must be positive, got {t}")));
            }
            solver.tol = t;
        }
        if let Some(m) = self.max_iter {
            if m == 0 {
                return Err(CliError::Input("iteration cap must be positive".into()));
            }
            solver.max_iter = m;
        }
        Ok(WeightOptions {
            enforce_marginal: !self.no_marginal,
            solver,
        })
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Weight { channel, common } => {
            let r = commands::weight(&channel, common.weight_options()?)?;
            let text = match common.format(Format::Json) {
                Format::Json => json(&r),
                Format::Csv => r.to_csv(),
            };
            emit(&text, common.out.as_deref())
        }
        Command::Sweep {
            kind,
            start,
            end,
            step,
            measures,
            common,
        } => {
            let spec = SweepSpec {
                channel_kind: kind.into(),
                p_start: start,
                p_end: end,
                p_step: step,
                measures: if measures.is_empty() {
                    ALL_MEASURES.to_vec()
                } else {
                    measures
                },
            };
            let rows = sweep::run(&spec, common.weight_options()?)?;
            let text = match common.format(Format::Csv) {
                Format::Csv => sweep::to_csv(&rows),
                Format::Json => json(&serde_json::json!({ "spec": spec, "rows": rows })),
            };
            emit(&text, common.out.as_deref())
        }
        Command::Verify { only, common } => {
            let tol = match common.tol {
                Some(t) if t > 0.0 && t.is_finite() => Tolerances::uniform(t),
                Some(t) => return Err(CliError::Input(format!("--tol must be positive, got {t}"))),
                None => Tolerances::default(),
            };
            let opts = Common {
                tol: None,
                ..common.clone()
            }
            .weight_options()?;
            let ids: Vec<usize> = if only.is_empty() {
                verify::CRITERIA.iter().map(|c| c.0).collect()
            } else {
                only
            };
            let text_mode = common.format(Format::Csv) == Format::Csv;
            let stream = text_mode && common.out.is_none();
            let results: Vec<_> = ids
                .iter()
                .map(|&id| {
                    let r = verify::run_criterion(id, &tol, opts);
                    if stream {
                        println!("{}", r.line());
                    }
                    r
                })
                .collect();
            if !stream {
                let text = if text_mode {
                    results.iter().map(|r| r.line() + "\n").collect()
                } else {
                    json(&results)
                };
                emit(&text, common.out.as_deref())?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed {
                    failed,
                    total: results.len(),
                });
            }
            Ok(())
        }
        Command::Game {
            channel,
            game,
            common,
        } => {
            let r = commands::game(&channel, &game)?;
            if let Some(w) = &r.warning {
                eprintln!("warning: {w}");
            }
            emit(&json(&r), common.out.as_deref())
        }
        Command::Bounds { channel, common } => {
            let r = commands::bounds(&channel, common.weight_options()?)?;
            if let Some(n) = &r.notice {
                eprintln!("notice: {n}");
            }
            emit(&json(&r), common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
