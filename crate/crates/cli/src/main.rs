use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qkmi_core::harness::KernelFamily;
use qkmi_core::input::read_columns;
use qkmi_core::{
    clamp_for_report, emit_report, gram, run_cell, run_sweep, Cell, DistributionSpec, Error,
    EstimatorConfig, ExperimentConfig, ModelForm, ModelSpec, Result, ScenarioCell,
};

#[derive(Parser)]
#[command(
    name = "qkmi",
    version,
    about = "Kernel mutual-information estimation and independence tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate MI or SMI between two columns of a CSV file
    Estimate(EstimateArgs),
    /// Run the independence test on one generated scenario and print the verdict as JSON
    Test(TestArgs),
    /// Run the sweep described by a key/value config file; flags override the file
    Experiment(ExperimentArgs),
    /// Run a sweep given entirely by flags; grid flags take comma-separated lists
    Sweep(SweepArgs),
}

#[derive(Args, Default)]
struct KernelArgs {
    /// gaussian or quantum
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<String>,
    #[arg(long)]
    qubits: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    angle_scale: Option<String>,
    /// tanh-shrink or none
    #[arg(long)]
    activation: Option<String>,
    /// mi or smi
    #[arg(long)]
    criterion: Option<String>,
    /// MI regularizer
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<String>,
    /// Constant SMI regularizer
    #[arg(long, allow_negative_numbers = true, conflicts_with = "epsilon_decay")]
    epsilon: Option<String>,
    /// SMI regularizer `scale * N^(-1/4)`
    #[arg(long, allow_negative_numbers = true)]
    epsilon_decay: Option<String>,
}

#[derive(Args, Default)]
struct ScenarioArgs {
    /// gaussian, poisson or laplace
    #[arg(long)]
    distribution: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    variance: Option<String>,
    /// linear, poly or periodic
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    coef: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    seed: Option<String>,
    /// Draw the additive noise from N(0, 1) instead of the input distribution
    #[arg(long)]
    noise_gaussian: bool,
    /// Variable expected to be independent (1, 2 or 3)
    #[arg(long)]
    target: Option<String>,
}

#[derive(Args, Default)]
struct RunArgs {
    #[arg(long)]
    trials: Option<String>,
    /// Worker threads (0 = all cores); results do not depend on it
    #[arg(long)]
    threads: Option<String>,
    /// Directory for report.csv, report.json and plot.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV file with a header row
    input: PathBuf,
    /// First column, by header name or 0-based index
    #[arg(long, default_value = "0")]
    x: String,
    /// Second column, by header name or 0-based index
    #[arg(long, default_value = "1")]
    y: String,
    #[command(flatten)]
    kernel: KernelArgs,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Write the verdict JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Key/value config file
    config: PathBuf,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    run: RunArgs,
}

fn apply(cfg: &mut ExperimentConfig, pairs: &[(&str, &Option<String>)]) -> Result<()> {
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    Ok(())
}

impl KernelArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        apply(
            cfg,
            &[
                ("kernel", &self.kernel),
                ("sigma", &self.sigma),
                ("qubits", &self.qubits),
                ("depth", &self.depth),
                ("angle-scale", &self.angle_scale),
                ("activation", &self.activation),
                ("criterion", &self.criterion),
                ("kappa", &self.kappa),
                ("epsilon", &self.epsilon),
                ("epsilon-decay", &self.epsilon_decay),
            ],
        )
    }
}

impl ScenarioArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        apply(
            cfg,
            &[
                ("distribution", &self.distribution),
                ("variance", &self.variance),
                ("model", &self.model),
                ("coef", &self.coef),
                ("samples", &self.samples),
                ("seed", &self.seed),
                ("target", &self.target),
            ],
        )?;
        if self.noise_gaussian {
            cfg.set("noise-gaussian", "true")?;
        }
        Ok(())
    }
}

impl RunArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        apply(cfg, &[("trials", &self.trials), ("threads", &self.threads)])?;
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        Ok(())
    }
}

fn only<T: Copy>(name: &str, values: &[T]) -> Result<T> {
    match values {
        [v] => Ok(*v),
        _ => Err(Error::Config(format!(
            "--{name} takes a single value here, got {}",
            values.len()
        ))),
    }
}

/// The single kernel and estimator a one-off command runs with.
fn single_kernel(cfg: &ExperimentConfig) -> Result<(qkmi_core::KernelSpec, EstimatorConfig)> {
    only("kernel", &cfg.kernels)?;
    if cfg.kernels[0] == KernelFamily::Quantum {
        only("activation", &cfg.activations)?;
    }
    let kernel = cfg.kernel_specs()[0];
    let estimator = EstimatorConfig {
        criterion: only("criterion", &cfg.criteria)?,
        mi: cfg.mi,
        smi: cfg.smi,
    };
    Ok((kernel, estimator))
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::default();
    args.kernel.apply(&mut cfg)?;
    cfg.validate()?;
    let (kernel, estimator) = single_kernel(&cfg)?;

    let columns = read_columns(&args.input)?;
    let column = |key: &str| {
        columns.get(key).ok_or_else(|| Error::Format {
            path: args.input.clone(),
            message: format!("no column `{key}`"),
        })
    };
    let (x, y) = (column(&args.x)?, column(&args.y)?);
    let value = estimator.estimate(&gram(&kernel, x)?, &gram(&kernel, y)?)?;
    println!("{}", clamp_for_report(value));
    Ok(())
}

fn test(args: &TestArgs) -> Result<()> {
    let mut cfg = ExperimentConfig {
        models: vec![ModelForm::Linear],
        samples: vec![50],
        ..ExperimentConfig::default()
    };
    args.kernel.apply(&mut cfg)?;
    args.scenario.apply(&mut cfg)?;
    cfg.trials = 1;
    cfg.validate()?;
    let (kernel, estimator) = single_kernel(&cfg)?;

    let cell = Cell {
        scenario: ScenarioCell {
            distribution: DistributionSpec::new(
                only("distribution", &cfg.distributions)?,
                only("variance", &cfg.variances)?,
            )?,
            model: ModelSpec::new(only("model", &cfg.models)?, only("coef", &cfg.coefs)?),
            samples: only("samples", &cfg.samples)?,
            noise: cfg.noise,
        },
        kernel,
        estimator,
        target: cfg.target,
    };
    let result = run_cell(&cell, 1, cfg.seed)?;
    let record = &result.records[0];
    let body = json!({
        "cell": cell,
        "base_seed": cfg.seed,
        "trial_seed": record.seed,
        "verdict": record.verdict,
    });
    let text = serde_json::to_string_pretty(&body).expect("verdict serializes") + "\n";
    match &args.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sweep(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate()?;
    let report = run_sweep(cfg)?;
    if let Some(dir) = &cfg.out {
        let files = emit_report(&report, dir)?;
        eprintln!(
            "wrote {}, {}, {}",
            files.csv.display(),
            files.json.display(),
            files.plot.display()
        );
    }
    print!("{}", report.to_csv());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => estimate(&args),
        Command::Test(args) => test(&args),
        Command::Experiment(args) => {
            let text = fs::read_to_string(&args.config).map_err(|source| Error::Io {
                path: args.config.clone(),
                source,
            })?;
            let mut cfg = ExperimentConfig::from_key_values(&text)?;
            args.kernel.apply(&mut cfg)?;
            args.scenario.apply(&mut cfg)?;
            args.run.apply(&mut cfg)?;
            sweep(&cfg)
        }
        Command::Sweep(args) => {
            let mut cfg = ExperimentConfig::default();
            args.kernel.apply(&mut cfg)?;
            args.scenario.apply(&mut cfg)?;
            args.run.apply(&mut cfg)?;
            sweep(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
