use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use llp_core::constructions::{CircleMilConfig, MaxCutLlpConfig};
use llp_lab::config::{BagsArg, ExperimentConfig, Overrides};
use llp_lab::error::{LabError, Result};
use llp_lab::experiment::{prepare_dataset, run_on, write_report};
use llp_lab::format::save_collection;
use llp_lab::verify::{parse_fraction, verify_llp, verify_mil, LlpVerifyParams, MilVerifyParams};
use llp_lab::{convert, gen};

#[derive(Parser)]
#[command(name = "llp", version, about = "Weak-to-strong learning from bags")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated weak-to-strong runs; writes a CSV report and a summary.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Checks the properties of a construction.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
        /// Also write the report here.
        #[arg(long, global = true)]
        report: Option<PathBuf>,
    },
    /// Weighted to unweighted bags.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "T")]
        t: usize,
    },
    /// Writes a dataset or construction.
    Gen {
        #[command(subcommand)]
        what: GenKind,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    Mil(MilArgs),
    Llp(LlpArgs),
}

#[derive(clap::Args)]
struct MilArgs {
    #[arg(long, default_value = "3/4")]
    alpha: String,
    #[arg(long = "T", default_value_t = 8)]
    t: u32,
    #[arg(long, default_value_t = 100)]
    weightings: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MilArgs {
    fn config(&self) -> Result<CircleMilConfig> {
        let (alpha_num, alpha_den) = parse_fraction(&self.alpha)?;
        Ok(CircleMilConfig {
            alpha_num,
            alpha_den,
            t: self.t,
        })
    }
}

#[derive(clap::Args)]
struct LlpArgs {
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    n_pairs: usize,
    /// Band width in radians; `epsilon·π` when omitted.
    #[arg(long)]
    band: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    draws: usize,
    #[arg(long, default_value_t = 200)]
    menu: usize,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
}

impl LlpArgs {
    fn config(&self) -> MaxCutLlpConfig {
        MaxCutLlpConfig {
            band: self.band,
            ..MaxCutLlpConfig::new(self.alpha, self.epsilon, self.d, self.n_pairs, self.seed)
        }
    }
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum GenKind {
    /// Small bags (and test instances) from a config's data section.
    Data {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        test_out: Option<PathBuf>,
    },
    /// The weighted MIL circle construction.
    Mil {
        #[command(flatten)]
        args: MilArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// The sampled LLP max-cut construction.
    Llp {
        #[command(flatten)]
        args: LlpArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Union bags sampled from a collection.
    Union {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: Option<&PathBuf>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::synthetic(BagsArg::Random),
    };
    overrides.apply(&mut cfg);
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let exp = load_config(config.as_ref(), &overrides)?.resolve()?;
            let data = prepare_dataset(&exp)?;
            let report = run_on(&exp, &data)?;
            if let Some(out) = &exp.output {
                write_report(&report, &data, out)?;
            } else {
                print!("{}", report.to_csv()?);
            }
            print!("{}", report.summary());
        }
        Command::Verify { kind, report } => {
            let r = match kind {
                VerifyKind::Mil(a) => verify_mil(&MilVerifyParams {
                    circle: a.config()?,
                    weightings: a.weightings,
                    seed: a.seed,
                })?,
                VerifyKind::Llp(a) => verify_llp(&LlpVerifyParams {
                    construction: a.config(),
                    halfspace_draws: a.draws,
                    menu_size: a.menu,
                    restarts: a.restarts,
                })?,
            };
            let text = r.to_text();
            print!("{text}");
            if let Some(p) = report {
                std::fs::write(&p, &text).map_err(|e| LabError::io(&p, e))?;
            }
            r.into_result()?;
        }
        Command::Convert { input, output, t } => {
            print!("{}", convert::cmd_convert(&input, &output, t)?.to_text());
        }
        Command::Gen { what } => match what {
            GenKind::Data {
                config,
                overrides,
                out,
                test_out,
            } => {
                let data = gen::gen_dataset(&load_config(config.as_ref(), &overrides)?)?;
                gen::write_dataset(&data, &out, test_out.as_deref())?;
            }
            GenKind::Mil { args, out } => save_collection(&gen::gen_mil(&args.config()?)?, &out)?,
            GenKind::Llp { args, out } => save_collection(&gen::gen_llp(&args.config())?, &out)?,
            GenKind::Union { input, t, s, seed, out } => save_collection(&gen::gen_unions(&input, t, s, seed)?, &out)?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
