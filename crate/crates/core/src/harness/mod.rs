//! Experiment runner: trials, cells and sweeps.
//!
//! A *cell* is one point of the sweep grid (scenario parameters, kernel,
//! criterion). Each cell runs `trials` independent scenarios. Trial seeds
//! depend only on the base seed, the scenario coordinates and the trial index,
//! so any cell can be re-run alone and kernels in the same sweep see the same
//! data.

mod config;
mod report;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{parse_key_values, ExperimentConfig, KernelFamily};
pub use report::{emit_report, PlotAxis, ReportFiles};

use crate::datagen::{
    generate_scenario_with_noise, DistributionFamily, DistributionSpec, ModelForm, ModelSpec,
    NoiseSource, ScenarioSample,
};
use crate::error::{Error, Result};
use crate::estimators::{Criterion, EstimatorConfig};
use crate::independence::{scores, verdict, Verdict};
use crate::kernels::KernelSpec;
use crate::seed;

/// Scenario coordinates of a cell; these (and only these) feed the trial seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioCell {
    pub distribution: DistributionSpec,
    pub model: ModelSpec,
    pub samples: usize,
    pub noise: NoiseSource,
}

impl ScenarioCell {
    pub fn trial_seed(&self, base_seed: u64, trial: usize) -> u64 {
        let family = match self.distribution.family {
            DistributionFamily::Gaussian => 1,
            DistributionFamily::Poisson => 2,
            DistributionFamily::Laplace => 3,
        };
        let model = match self.model.form {
            ModelForm::Linear => 1,
            ModelForm::NonlinearPolynomial => 2,
            ModelForm::NonlinearPeriodic => 3,
        };
        let noise = match self.noise {
            NoiseSource::Input => 0,
            NoiseSource::StandardGaussian => 1,
        };
        seed::derive(&[
            base_seed,
            family,
            self.distribution.variance.to_bits(),
            model,
            self.model.coef.to_bits(),
            self.samples as u64,
            noise,
            trial as u64,
        ])
    }

    pub fn generate(&self, seed: u64) -> Result<ScenarioSample> {
        generate_scenario_with_noise(
            self.distribution,
            self.model,
            self.noise,
            self.samples,
            seed,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub scenario: ScenarioCell,
    pub kernel: KernelSpec,
    pub estimator: EstimatorConfig,
    pub target: usize,
}

impl Cell {
    pub fn label(&self) -> String {
        format!(
            "{} v={} {} c={} N={} {} {}",
            self.scenario.distribution.family,
            self.scenario.distribution.variance,
            self.scenario.model.form,
            self.scenario.model.coef,
            self.scenario.samples,
            self.kernel.label(),
            self.estimator.criterion
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// Raw estimator outputs; no clamping is applied here.
    pub verdict: Verdict,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub trials: usize,
    pub successes: usize,
    pub correct_ratio_pct: f64,
    pub slack_mean: f64,
    /// Population standard deviation over all trials.
    pub slack_std: f64,
    pub records: Vec<TrialRecord>,
}

fn run_trial(cell: &Cell, base_seed: u64, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = cell.scenario.trial_seed(base_seed, trial);
    let sample = cell.scenario.generate(seed)?;
    let s = scores(&sample, &cell.kernel, &cell.estimator)?;
    let verdict = verdict(s, cell.target)?;
    Ok(TrialRecord {
        trial,
        seed,
        verdict,
        wall_time_us: start.elapsed().as_micros() as u64,
    })
}

/// Aggregates verdicts in trial order.
pub fn aggregate(cell: Cell, records: Vec<TrialRecord>) -> CellResult {
    let t = records.len();
    let successes = records.iter().filter(|r| r.verdict.success).count();
    let (slack_mean, slack_std) = if t == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let mean = records.iter().map(|r| r.verdict.slack).sum::<f64>() / t as f64;
        let var = records
            .iter()
            .map(|r| (r.verdict.slack - mean).powi(2))
            .sum::<f64>()
            / t as f64;
        (mean, var.sqrt())
    };
    CellResult {
        cell,
        trials: t,
        successes,
        correct_ratio_pct: if t == 0 {
            0.0
        } else {
            100.0 * successes as f64 / t as f64
        },
        slack_mean,
        slack_std,
        records,
    }
}

/// Runs `trials` seeded trials of one cell. Trials run in parallel on the
/// current rayon pool; results are collected in trial order.
pub fn run_cell(cell: &Cell, trials: usize, base_seed: u64) -> Result<CellResult> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    cell.kernel.validate()?;
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(cell, base_seed, t).map_err(|e| Error::Trial {
                trial: t,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(*cell, records))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
}

/// Expands the Cartesian product of the config grids, in a fixed order:
/// distribution, variance, model, coef, samples, kernel, criterion.
pub fn expand_cells(config: &ExperimentConfig) -> Result<Vec<Cell>> {
    config.validate()?;
    let kernels = config.kernel_specs();
    let mut cells = Vec::new();
    for &family in &config.distributions {
        for &variance in &config.variances {
            let distribution = DistributionSpec::new(family, variance)?;
            for &form in &config.models {
                for &coef in &config.coefs {
                    for &samples in &config.samples {
                        let scenario = ScenarioCell {
                            distribution,
                            model: ModelSpec::new(form, coef),
                            samples,
                            noise: config.noise,
                        };
                        for kernel in &kernels {
                            for &criterion in &config.criteria {
                                cells.push(Cell {
                                    scenario,
                                    kernel: *kernel,
                                    estimator: estimator_for(config, criterion),
                                    target: config.target,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::Config("the sweep has no cells".into()));
    }
    Ok(cells)
}

fn estimator_for(config: &ExperimentConfig, criterion: Criterion) -> EstimatorConfig {
    EstimatorConfig {
        criterion,
        mi: config.mi,
        smi: config.smi,
    }
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let cells = expand_cells(config)?;
    let work = || -> Result<Vec<CellResult>> {
        cells
            .par_iter()
            .map(|cell| {
                run_cell(cell, config.trials, config.seed).map_err(|e| Error::Cell {
                    cell: cell.label(),
                    source: Box::new(e),
                })
            })
            .collect()
    };
    let results = if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
            .install(work)?
    } else {
        work()?
    };
    Ok(ExperimentReport {
        config: config.clone(),
        cells: results,
    })
}
