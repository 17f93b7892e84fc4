use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{CellResult, ExperimentReport};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 13] = [
    "distribution",
    "v",
    "model",
    "c",
    "N",
    "kernel",
    "activation",
    "criterion",
    "correct_ratio_pct",
    "slack_mean",
    "slack_std",
    "T",
    "seed",
];

/// Sweep axis used to key the plot-data CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotAxis {
    Variance,
    Samples,
    Coef,
}

impl PlotAxis {
    fn name(self) -> &'static str {
        match self {
            PlotAxis::Variance => "v",
            PlotAxis::Samples => "N",
            PlotAxis::Coef => "c",
        }
    }

    fn value(self, cell: &CellResult) -> String {
        let s = &cell.cell.scenario;
        match self {
            PlotAxis::Variance => s.distribution.variance.to_string(),
            PlotAxis::Samples => s.samples.to_string(),
            PlotAxis::Coef => s.model.coef.to_string(),
        }
    }
}

/// Paths written by [`emit_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub plot: PathBuf,
}

fn csv_bytes<F>(header: &[&str], rows: F) -> Vec<u8>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing to memory cannot fail.
    w.write_record(header).expect("in-memory csv write");
    rows(&mut w).expect("in-memory csv write");
    w.into_inner().expect("in-memory csv flush")
}

impl ExperimentReport {
    /// One row per cell.
    pub fn to_csv(&self) -> String {
        let bytes = csv_bytes(&CSV_HEADER, |w| {
            for c in &self.cells {
                let s = &c.cell.scenario;
                w.write_record([
                    s.distribution.family.to_string(),
                    s.distribution.variance.to_string(),
                    s.model.form.to_string(),
                    s.model.coef.to_string(),
                    s.samples.to_string(),
                    c.cell.kernel.family().to_string(),
                    c.cell.kernel.activation().to_string(),
                    c.cell.estimator.criterion.to_string(),
                    c.correct_ratio_pct.to_string(),
                    c.slack_mean.to_string(),
                    c.slack_std.to_string(),
                    c.trials.to_string(),
                    self.config.seed.to_string(),
                ])?;
            }
            Ok(())
        });
        String::from_utf8(bytes).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }

    /// Copy with every trial's wall time zeroed, for byte comparisons.
    pub fn without_wall_times(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.cells {
            for t in &mut c.records {
                t.wall_time_us = 0;
            }
        }
        r
    }

    /// First of variance, samples, coef that takes more than one value;
    /// samples when nothing varies.
    pub fn plot_axis(&self) -> PlotAxis {
        let cfg = &self.config;
        if distinct(&cfg.variances) > 1 {
            PlotAxis::Variance
        } else if cfg.samples.len() > 1 {
            PlotAxis::Samples
        } else if distinct(&cfg.coefs) > 1 {
            PlotAxis::Coef
        } else {
            PlotAxis::Samples
        }
    }

    /// Plot-ready rows keyed by the sweep axis. `series` identifies everything
    /// about the cell except the axis value.
    pub fn to_plot_csv(&self) -> String {
        let axis = self.plot_axis();
        let bytes = csv_bytes(
            &[
                "axis",
                "axis_value",
                "series",
                "correct_ratio_pct",
                "slack_mean",
                "slack_std",
            ],
            |w| {
                for c in &self.cells {
                    w.write_record([
                        axis.name().to_string(),
                        axis.value(c),
                        series_label(c, axis),
                        c.correct_ratio_pct.to_string(),
                        c.slack_mean.to_string(),
                        c.slack_std.to_string(),
                    ])?;
                }
                Ok(())
            },
        );
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

fn distinct(xs: &[f64]) -> usize {
    let mut v: Vec<u64> = xs.iter().map(|x| x.to_bits()).collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn series_label(c: &CellResult, axis: PlotAxis) -> String {
    let s = &c.cell.scenario;
    let mut parts = vec![s.distribution.family.to_string()];
    if axis != PlotAxis::Variance {
        parts.push(format!("v={}", s.distribution.variance));
    }
    parts.push(s.model.form.to_string());
    if axis != PlotAxis::Coef {
        parts.push(format!("c={}", s.model.coef));
    }
    if axis != PlotAxis::Samples {
        parts.push(format!("N={}", s.samples));
    }
    parts.push(c.cell.kernel.family().to_string());
    parts.push(c.cell.kernel.activation().to_string());
    parts.push(c.cell.estimator.criterion.to_string());
    parts.join("/")
}

pub(crate) fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `report.csv`, `report.json` and `plot.csv` into `dir`, creating it
/// if needed.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<ReportFiles> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = ReportFiles {
        csv: dir.join("report.csv"),
        json: dir.join("report.json"),
        plot: dir.join("plot.csv"),
    };
    write(&files.csv, &report.to_csv())?;
    write(&files.json, &report.to_json())?;
    write(&files.plot, &report.to_plot_csv())?;
    Ok(files)
}

impl ExperimentReport {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format {
            path: PathBuf::from("<json>"),
            message: e.to_string(),
        })
    }
}
