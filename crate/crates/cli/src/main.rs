use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use magic_switch::channel::KrausChannel;
use magic_switch::experiments::{
    self, find_threshold, format_float, render_report, render_rows, Experiment, Grid, Measure,
    OutputFormat, Resources, SweepConfig,
};
use magic_switch::gates;
use magic_switch::models::{self, QutritKrausVariant};
use magic_switch::qswitch;
use magic_switch::robustness;
use magic_switch::state::DensityOperator;
use magic_switch::wigner;

const JOBS_ENV: &str = "MAGIC_SWITCH_JOBS";

#[derive(Parser)]
#[command(
    name = "magic-switch",
    version,
    about = "Magic resources of channels under the quantum SWITCH"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Parameter grid as start:stop:step.
    #[arg(long)]
    grid: Option<String>,
    /// Slack on robustness floors (values below 1 + tol count as free).
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads; MAGIC_SWITCH_JOBS overrides this.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Key-value config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Kraus set for the qutrit example.
    #[arg(long, value_enum)]
    qutrit_kraus: Option<KrausSet>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KrausSet {
    Printed,
    Corrected,
}

impl From<KrausSet> for QutritKrausVariant {
    fn from(k: KrausSet) -> Self {
        match k {
            KrausSet::Printed => QutritKrausVariant::Printed,
            KrausSet::Corrected => QutritKrausVariant::Corrected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QubitChannel {
    /// The three-Kraus example channel with parameter p.
    Example,
    /// D_p ∘ D_p ∘ T.
    SequentialT,
    /// Normalized + branch of the switched depolarizers, composed with T.
    SwitchPlusT,
    /// Normalized − branch of the switched depolarizers, composed with T.
    SwitchMinusT,
    T,
    H,
    S,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum QubitState {
    /// T|+⟩.
    TState,
    Plus,
    Zero,
    /// Renormalized + output of the switched example channel at p.
    SwitchPlus,
    /// Renormalized − output of the switched example channel at p.
    SwitchMinus,
}

#[derive(Clone, Copy, ValueEnum)]
enum QutritChannel {
    /// The four-Kraus qutrit example channel with parameter p.
    Example,
    T,
    H,
    S,
    /// D_p ∘ T.
    DepolarizedT,
}

#[derive(Clone, Copy, ValueEnum)]
enum QutritState {
    /// T|+⟩.
    TState,
    Plus,
    Zero,
    /// Renormalized + output of the switched qutrit example at p.
    SwitchPlus,
    /// Renormalized − output of the switched qutrit example at p.
    SwitchMinus,
}

#[derive(Subcommand)]
enum Command {
    /// Qubit example: R_*(N_p) and the robustness of both switch outputs.
    Fig2(SweepArgs),
    /// T gate: sequential versus switched depolarizing noise.
    Fig3(SweepArgs),
    /// Qutrit example: mana of the channel and of both switch outputs.
    Figs1(SweepArgs),
    /// Check that switched noise is weaker than sequential noise.
    AppendixC {
        #[command(flatten)]
        args: SweepArgs,
        /// Dimensions to check, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Locate where a measure reaches its free floor by bisection.
    Threshold {
        #[command(flatten)]
        common: Common,
        /// One of the sweep column names, e.g. channel_robustness, rom_plus,
        /// robustness_sequential_t, robustness_switch_plus_t, mana_channel, mana_plus.
        #[arg(long)]
        measure: String,
        /// Bracket as lo:hi; defaults to a bracket suited to the measure.
        #[arg(long)]
        bracket: Option<String>,
        /// Width of the final bracket.
        #[arg(long, default_value_t = experiments::MIN_THRESHOLD_TOL)]
        threshold_tol: f64,
        #[arg(long, value_enum, default_value = "corrected")]
        qutrit_kraus: KrausSet,
    },
    /// Robustness of magic of a single-qubit state.
    Rom {
        #[command(flatten)]
        common: Common,
        /// Bloch vector x,y,z.
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 3,
            allow_hyphen_values = true,
            conflicts_with = "state"
        )]
        bloch: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        state: Option<QubitState>,
        /// Noise parameter for switch outputs.
        #[arg(long, default_value_t = 0.45)]
        p: f64,
    },
    /// Channel robustness of a single-qubit channel.
    ChannelRobustness {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        channel: QubitChannel,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Also write the LP instance in CPLEX LP format.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Mana of a qutrit state or channel.
    Mana {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, conflicts_with = "state")]
        channel: Option<QutritChannel>,
        #[arg(long, value_enum)]
        state: Option<QutritState>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_enum, default_value = "corrected")]
        qutrit_kraus: KrausSet,
    },
}

fn jobs(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(JOBS_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{JOBS_ENV}={v}"))?,
        )),
        Err(_) => Ok(flag),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            log::info!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn sweep_config(experiment: Experiment, args: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = SweepConfig::parse(&text)?;
            if cfg.experiment != experiment {
                bail!("config file is for {}, not {}", cfg.experiment, experiment);
            }
            cfg
        }
        None => SweepConfig::new(experiment),
    };
    let c = &args.common;
    if let Some(g) = &c.grid {
        cfg.grid = g.parse::<Grid>()?;
    }
    if let Some(t) = c.tol {
        cfg.tolerances.lp_tol = t;
    }
    if let Some(f) = c.format {
        cfg.format = f.into();
    }
    if let Some(o) = &c.out {
        cfg.output_path = Some(o.clone());
    }
    if let Some(k) = args.qutrit_kraus {
        cfg.qutrit_kraus = k.into();
    }
    cfg.jobs = jobs(c.jobs.or(cfg.jobs))?;
    cfg.validate()?;
    Ok(cfg)
}

fn run_sweep(experiment: Experiment, args: &SweepArgs) -> Result<()> {
    let cfg = sweep_config(experiment, args)?;
    let res = Resources::new()?;
    log::info!("{} over {} grid points", cfg.experiment, cfg.grid.len());
    let rows = experiments::run(&cfg, &res)?;
    emit(&render_rows(&rows, cfg.format), cfg.output_path.as_deref())
}

/// Renders flat key/value results in the requested format.
fn render_record(fields: &[(&str, serde_json::Value)], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("record serializes")
            )
        }
        OutputFormat::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let values: Vec<String> = fields
                .iter()
                .map(|(_, v)| match v {
                    serde_json::Value::Number(n) => n
                        .as_f64()
                        .map(format_float)
                        .unwrap_or_else(|| n.to_string()),
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
    }
}

fn format_of(c: &Common) -> OutputFormat {
    c.format.map(Into::into).unwrap_or_default()
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').context("bracket must be lo:hi")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn qubit_channel(kind: QubitChannel, p: f64) -> Result<KrausChannel> {
    Ok(match kind {
        QubitChannel::Example => models::qubit_example_channel(p)?,
        QubitChannel::SequentialT => models::two_depolarized_t(p)?,
        QubitChannel::SwitchPlusT => qswitch::effective_t_channels(p)?.0.channel,
        QubitChannel::SwitchMinusT => qswitch::effective_t_channels(p)?.1.channel,
        QubitChannel::T => KrausChannel::unitary(gates::t_gate())?,
        QubitChannel::H => KrausChannel::unitary(gates::hadamard())?,
        QubitChannel::S => KrausChannel::unitary(gates::phase_s())?,
        QubitChannel::Identity => KrausChannel::identity(2),
    })
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Fig2(args) => run_sweep(Experiment::Fig2QubitExample, &args),
        Command::Fig3(args) => run_sweep(Experiment::Fig3DepolarizedT, &args),
        Command::Figs1(args) => run_sweep(Experiment::FigS1QutritExample, &args),
        Command::AppendixC { args, dims } => {
            let mut cfg = sweep_config(Experiment::AppendixCInequality, &args)?;
            if let Some(d) = dims {
                cfg.dims = d;
                cfg.validate()?;
            }
            let report = experiments::run_appendix_c(&cfg)?;
            log::info!(
                "max gap {:.6e}, max identity residual {:.3e}: inequality {}",
                report.max_gap,
                report.max_identity_residual,
                if report.holds(1e-12) {
                    "holds"
                } else {
                    "fails"
                }
            );
            emit(
                &render_report(&report, cfg.format),
                cfg.output_path.as_deref(),
            )
        }
        Command::Threshold {
            common,
            measure,
            bracket,
            threshold_tol,
            qutrit_kraus,
        } => {
            let measure: Measure = measure.parse()?;
            let bracket = match bracket {
                Some(b) => parse_pair(&b)?,
                None => measure.default_bracket(),
            };
            let mut tol = experiments::SweepTolerances {
                threshold_tol,
                ..Default::default()
            };
            if let Some(t) = common.tol {
                if measure.is_mana() {
                    tol.mana_tol = t;
                } else {
                    tol.lp_tol = t;
                }
            }
            let variant: QutritKrausVariant = qutrit_kraus.into();
            let res = Resources::new()?;
            let t = find_threshold(measure, bracket, &tol, &res, variant)?;
            let mut fields = vec![
                ("measure", json!(measure.name())),
                ("threshold", json!(t.threshold)),
                ("lo", json!(t.bracket.0)),
                ("hi", json!(t.bracket.1)),
                ("free_above", json!(t.free_above)),
                ("evaluations", json!(t.evaluations)),
            ];
            if measure.is_mana() {
                fields.push(("qutrit_kraus", json!(variant.name())));
            }
            emit(
                &render_record(&fields, format_of(&common)),
                common.out.as_deref(),
            )
        }
        Command::Rom {
            common,
            bloch,
            state,
            p,
        } => {
            let rho = match (bloch, state) {
                (Some(b), _) => DensityOperator::qubit_bloch(b[0], b[1], b[2])?,
                (None, Some(QubitState::TState)) => {
                    DensityOperator::new(gates::t_gate().conjugate(DensityOperator::plus(2).op()))?
                }
                (None, Some(QubitState::Plus)) => DensityOperator::plus(2),
                (None, Some(QubitState::Zero)) => DensityOperator::basis(2, 0),
                (None, Some(QubitState::SwitchPlus)) => experiments::qubit_example_outputs(p)?.plus,
                (None, Some(QubitState::SwitchMinus)) => {
                    experiments::qubit_example_outputs(p)?.minus
                }
                (None, None) => bail!("give --bloch or --state"),
            };
            let dict = magic_switch::stabilizer::StabilizerDictionary::enumerate(1)?;
            let (sol, factor) = robustness::rom_state_with_factor(&rho, &dict)?;
            let mut fields = vec![
                ("rom", json!(sol.value)),
                ("renormalization_factor", json!(factor)),
                ("duality_gap", json!(sol.duality_gap)),
                ("residual", json!(sol.residual)),
            ];
            for (label, q) in dict.labels().iter().zip(&sol.coefficients) {
                fields.push((label.as_str(), json!(q)));
            }
            emit(
                &render_record(&fields, format_of(&common)),
                common.out.as_deref(),
            )
        }
        Command::ChannelRobustness {
            common,
            channel,
            p,
            dump_lp,
        } => {
            let ch = qubit_channel(channel, p)?;
            let res = Resources::new()?;
            if let Some(path) = dump_lp {
                let problem = robustness::channel_problem(&ch, &res.atoms)?;
                fs::write(&path, problem.to_lp_format())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let sol = robustness::channel_robustness(&ch, &res.atoms)?;
            let fields = [
                ("channel_robustness", json!(sol.value)),
                ("negative_weight", json!(robustness::negative_weight(&sol))),
                ("duality_gap", json!(sol.duality_gap)),
                ("residual", json!(sol.residual)),
                ("iterations", json!(sol.iterations)),
            ];
            emit(
                &render_record(&fields, format_of(&common)),
                common.out.as_deref(),
            )
        }
        Command::Mana {
            common,
            channel,
            state,
            p,
            qutrit_kraus,
        } => {
            let variant: QutritKrausVariant = qutrit_kraus.into();
            let frame = wigner::PhaseSpaceFrame::new(3)?;
            let tol = common.tol.unwrap_or(magic_switch::tolerance::MANA_ZERO_TOL);
            let fields = match (channel, state) {
                (Some(kind), _) => {
                    let ch = match kind {
                        QutritChannel::Example => models::qutrit_example_channel(p, variant)?,
                        QutritChannel::T => KrausChannel::unitary(gates::qutrit_t())?,
                        QutritChannel::H => KrausChannel::unitary(gates::qudit_hadamard(3))?,
                        QutritChannel::S => KrausChannel::unitary(gates::qutrit_s())?,
                        QutritChannel::DepolarizedT => KrausChannel::depolarizing(3, p)?
                            .compose(&KrausChannel::unitary(gates::qutrit_t())?)?,
                    };
                    let mana = wigner::mana_channel(&ch, &frame)?;
                    let mut fields = vec![("mana", json!(mana)), ("zero", json!(mana < tol))];
                    match wigner::is_cpwp(&ch, &frame, tol) {
                        Ok((cpwp, min)) => {
                            fields.push(("cpwp", json!(cpwp)));
                            fields.push(("min_choi_wigner", json!(min)));
                        }
                        Err(e) => log::warn!("CPWP test skipped: {e}"),
                    }
                    fields.push(("completeness_deviation", json!(ch.completeness_deviation())));
                    fields
                }
                (None, Some(kind)) => {
                    let rho = match kind {
                        QutritState::TState => DensityOperator::new(
                            gates::qutrit_t().conjugate(DensityOperator::plus(3).op()),
                        )?,
                        QutritState::Plus => DensityOperator::plus(3),
                        QutritState::Zero => DensityOperator::basis(3, 0),
                        QutritState::SwitchPlus => {
                            experiments::qutrit_example_outputs(p, variant)?.plus
                        }
                        QutritState::SwitchMinus => {
                            experiments::qutrit_example_outputs(p, variant)?.minus
                        }
                    };
                    let mana = wigner::mana_state(&rho, &frame)?;
                    vec![
                        ("mana", json!(mana)),
                        ("zero", json!(mana < tol)),
                        ("trace", json!(rho.trace())),
                    ]
                }
                (None, None) => bail!("give --channel or --state"),
            };
            emit(
                &render_record(&fields, format_of(&common)),
                common.out.as_deref(),
            )
        }
    }
}
