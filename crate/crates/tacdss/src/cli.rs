//! Command-line driver.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation
//! error.

use std::ffi::OsString;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tacdss_core::domain::{self, DecisionFactors, NormalizedFactors};
use tacdss_core::genetic::{evolve, GaConfig};
use tacdss_core::gradient::{train_gd, GdConfig, GradientMode, Tunable};
use tacdss_core::wang_mendel::learn_rules;
use tacdss_core::{infer, rmse, InferenceConfig};

use crate::error::Error;
use crate::explain::rule_label;
use crate::model_io::{load_model, read_dataset, save_model, write_dataset, write_trace};
use crate::repro::{self, ExperimentPreset};
use crate::service;

#[derive(Debug, Parser)]
#[command(name = "tacdss", version, about = "Adaptive Mamdani fuzzy decision support for tactical air combat")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset from the expert scoring rule.
    GenData {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Induce a rule base from a dataset and save the model.
    LearnRules {
        #[arg(long)]
        data: PathBuf,
        /// Membership function count per input, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "3,3,3,3")]
        mfs: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        out_mfs: usize,
        #[arg(long, value_enum, default_value_t = Profile::Trainable)]
        profile: Profile,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tune membership centers of an existing model.
    Tune {
        #[command(subcommand)]
        tuner: Tuner,
    },
    /// Score one situation.
    Infer(InferArgs),
    /// RMSE of a model on a dataset.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Serve the model over HTTP.
    Serve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory of console assets served under `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// Run the full experiment (data, rules, GD at two rates, GA) into a directory.
    ReproPaper {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        ga_seed: u64,
        /// Also run the population × generation grid.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Classic,
    Trainable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TunableArg {
    Inputs,
    Outputs,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradientArg {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
pub struct TuneIo {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Tuner {
    /// Gradient descent with momentum.
    Gd {
        #[command(flatten)]
        io: TuneIo,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        lr: f64,
        #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
        momentum: f64,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        #[arg(long, value_enum, default_value_t = TunableArg::Both)]
        tunable: TunableArg,
        #[arg(long, value_enum, default_value_t = GradientArg::Analytic)]
        gradient: GradientArg,
        #[arg(long, default_value_t = 1e-6)]
        fd_step: f64,
    },
    /// Real-coded genetic algorithm.
    Ga {
        #[command(flatten)]
        io: TuneIo,
        #[arg(long, default_value_t = 50)]
        pop: usize,
        #[arg(long, default_value_t = 50)]
        gen: usize,
        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        mutation: f64,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 2)]
        tournament: usize,
        #[arg(long, default_value_t = 1)]
        elitism: usize,
        #[arg(long, default_value_t = 0.9)]
        crossover: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    fuel: f64,
    #[arg(long, allow_negative_numbers = true)]
    time: f64,
    #[arg(long, allow_negative_numbers = true)]
    weapon: f64,
    #[arg(long, allow_negative_numbers = true)]
    danger: f64,
    /// Factors are litres, minutes, percent and points instead of [0, 1].
    #[arg(long)]
    raw_units: bool,
    /// Print memberships and per-rule firing strengths.
    #[arg(long)]
    explain: bool,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } => 1,
            Error::Core(core) => core_code(core),
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<tacdss_core::Error> for CliError {
    fn from(e: tacdss_core::Error) -> Self {
        CliError {
            code: core_code(&e),
            message: e.to_string(),
        }
    }
}

fn core_code(e: &tacdss_core::Error) -> i32 {
    match e {
        tacdss_core::Error::NonFinite(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing human-readable output to stdout.
pub fn run<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            return Err(CliError {
                code,
                message: e.render().to_string(),
            });
        }
    };
    execute(cli.command)
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::GenData { n, noise, seed, out } => {
            let data = domain::generate_dataset(n as usize, noise, seed)?;
            write_dataset(&data, &out)?;
            println!("wrote {} rows to {}", data.len(), out.display());
        }
        Command::LearnRules {
            data,
            mfs,
            out_mfs,
            profile,
            out,
        } => {
            let data = read_dataset(&data)?;
            let config = match profile {
                Profile::Classic => InferenceConfig::classic(),
                Profile::Trainable => InferenceConfig::trainable(),
            };
            let skeleton = domain::skeleton(&mfs, out_mfs, config)?;
            let system = learn_rules(&skeleton, &data)?;
            save_model(&system, &out)?;
            println!("rules: {}", system.rules().len());
        }
        Command::Tune { tuner } => tune(tuner)?,
        Command::Infer(args) => infer_cmd(args)?,
        Command::Eval { model, data } => {
            let system = load_model(&model)?;
            let data = read_dataset(&data)?;
            println!("rmse: {}", rmse(&system, &data)?);
        }
        Command::Serve {
            model,
            addr,
            static_dir,
        } => {
            let system = load_model(&model)?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError {
                code: 1,
                message: e.to_string(),
            })?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| CliError {
                    code: 1,
                    message: format!("cannot bind {addr}: {e}"),
                })?;
                println!("serving on http://{}", listener.local_addr().unwrap_or(addr));
                axum::serve(listener, service::router(system, static_dir))
                    .await
                    .map_err(|e| CliError {
                        code: 1,
                        message: e.to_string(),
                    })
            })?;
        }
        Command::ReproPaper {
            out_dir,
            seed,
            ga_seed,
            sweep,
        } => {
            let mut preset = ExperimentPreset::reference();
            preset.data_seed = seed;
            preset.ga.seed = ga_seed;
            let summary = repro::run(&preset, &out_dir, sweep)?;
            print!("{}", summary.table);
        }
    }
    Ok(())
}

fn tune(tuner: Tuner) -> Result<(), CliError> {
    let (io, tuned, initial, trace) = match tuner {
        Tuner::Gd {
            io,
            lr,
            momentum,
            epochs,
            tunable,
            gradient,
            fd_step,
        } => {
            let config = GdConfig {
                learning_rate: lr,
                momentum,
                epochs,
                tunable: match tunable {
                    TunableArg::Inputs => Tunable::InputCenters,
                    TunableArg::Outputs => Tunable::OutputCenters,
                    TunableArg::Both => Tunable::Both,
                },
                gradient_mode: match gradient {
                    GradientArg::Analytic => GradientMode::Analytic,
                    GradientArg::Fd => GradientMode::FiniteDifference { step: fd_step },
                },
            };
            config.validate()?;
            let system = load_model(&io.model)?;
            let data = read_dataset(&io.data)?;
            let initial = rmse(&system, &data)?;
            let (tuned, report) = train_gd(&system, &data, &config)?;
            (io, tuned, initial, report.per_epoch)
        }
        Tuner::Ga {
            io,
            pop,
            gen,
            mutation,
            sigma,
            tournament,
            elitism,
            crossover,
            seed,
        } => {
            let config = GaConfig {
                population_size: pop,
                generations: gen,
                mutation_rate: mutation,
                mutation_sigma: sigma,
                tournament_size: tournament,
                elitism,
                crossover_rate: crossover,
                seed,
            };
            config.validate()?;
            let system = load_model(&io.model)?;
            let data = read_dataset(&io.data)?;
            let initial = rmse(&system, &data)?;
            let outcome = evolve(&system, &data, &config)?;
            (io, outcome.best, initial, outcome.trace)
        }
    };
    save_model(&tuned, &io.out)?;
    if let Some(path) = &io.trace {
        write_trace(&trace, path)?;
    }
    let last = trace.last().map(|r| r.1).unwrap_or(initial);
    println!("initial rmse: {initial}");
    println!("final rmse: {last}");
    Ok(())
}

fn infer_cmd(args: InferArgs) -> Result<(), CliError> {
    let normalized = if args.raw_units {
        domain::normalize(&DecisionFactors {
            fuel_litres: args.fuel,
            interrupt_minutes: args.time,
            weapon_percent: args.weapon,
            danger_points: args.danger,
        })?
    } else {
        NormalizedFactors::new(args.fuel, args.time, args.weapon, args.danger)?
    };
    let system = load_model(&args.model)?;
    let (score, trace) = infer(&system, &normalized.to_array())?;
    println!("score: {score}");
    if args.explain {
        for (v, degrees) in system.inputs().iter().zip(&trace.memberships) {
            let terms: Vec<String> = v
                .labels()
                .iter()
                .zip(degrees)
                .map(|(l, d)| format!("{l}={d:.4}"))
                .collect();
            println!("{}: {}", v.name(), terms.join(" "));
        }
        for (i, (rule, f)) in system.rules().iter().zip(&trace.firings).enumerate() {
            println!("rule {i:>3} firing {f:.6} weight {:.4}  {}", rule.weight, rule_label(&system, rule));
        }
        if trace.fallback {
            println!("no rule fired; returned the output midpoint");
        }
    }
    Ok(())
}
