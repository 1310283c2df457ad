use std::path::{Path, PathBuf};
use std::time::Instant;

use boostdf::dof::df_actset_curve;
use boostdf::{
    aic_stop, binomial_boost, l2boost, BinomBoostPath, BoostConfig, DesignMatrix, DfEstimator,
    L2BoostPath, Learner,
};
use serde::Serialize;

use crate::args::{FitArgs, LearnerKind, Loss, StopRule};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{ensure_dir, num, write_atomic, Table};

pub const SUMMARY_FILE: &str = "summary.json";

/// A numeric CSV split into covariates and response.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub names: Vec<String>,
    pub x: DesignMatrix,
    pub y: Vec<f64>,
}

pub fn read_dataset(path: &Path, response: &str) -> Result<Dataset, CliError> {
    let unreadable =
        |e: &dyn std::fmt::Display| CliError::new(format!("cannot read {}: {e}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| unreadable(&e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| unreadable(&e))?
        .iter()
        .map(str::to_string)
        .collect();
    let target = header
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| CliError::new(format!("unknown column '{response}'")))?;
    if header.len() < 2 {
        return Err(CliError::new("data needs at least one covariate column"));
    }

    let mut columns = vec![Vec::new(); header.len()];
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| unreadable(&e))?;
        // line 1 is the header
        let line = r + 2;
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::new(format!(
                    "non-numeric value '{cell}' in column '{}' on line {line}",
                    header[j]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::new(format!(
                    "non-finite value in column '{}' on line {line}",
                    header[j]
                )));
            }
            columns[j].push(v);
        }
    }
    if columns[0].is_empty() {
        return Err(CliError::new(format!(
            "{} has no data rows",
            path.display()
        )));
    }

    let y = columns.remove(target);
    let mut names = header;
    names.remove(target);
    Ok(Dataset {
        names,
        x: DesignMatrix::from_columns(columns)?,
        y,
    })
}

fn learner(args: &FitArgs) -> Learner {
    match args.learner {
        LearnerKind::Linear => Learner::ComponentwiseLinear,
        LearnerKind::Spline => Learner::ComponentwiseSpline { df: args.spline_df },
        LearnerKind::Stump => Learner::Stump,
        LearnerKind::Tree => Learner::Tree {
            max_leaves: args.max_leaves,
        },
    }
}

fn validate(args: &FitArgs) -> Result<(), CliError> {
    if !(args.nu > 0.0 && args.nu <= 1.0) {
        return Err(CliError::new("--nu must lie in (0, 1]"));
    }
    if args.stop != StopRule::Fixed && args.loss != Loss::L2 {
        return Err(CliError::new("AIC stopping requires --loss l2"));
    }
    match (args.stop, args.learner) {
        (StopRule::AicTrace, LearnerKind::Stump | LearnerKind::Tree) => Err(CliError::new(
            "--stop aic-trace needs the linear or spline learner",
        )),
        (StopRule::AicActset, l) if l != LearnerKind::Linear => {
            Err(CliError::new("--stop aic-actset needs the linear learner"))
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    m_star: usize,
    /// Corrected AIC at `m_star`; absent for a fixed stop.
    criterion: Option<f64>,
    stop: StopRule,
}

pub fn run(args: &FitArgs) -> Result<(), CliError> {
    let start = Instant::now();
    validate(args)?;
    let data = read_dataset(&args.data, &args.response)?;
    let mut config = BoostConfig::new(learner(args), args.nu, args.mstop);
    if args.stop == StopRule::AicTrace {
        config = config.with_hat(false);
    }

    ensure_dir(&args.out_dir)?;
    let mut manifest = RunManifest::new("fit", args)?;
    manifest.seed("master", args.seed);

    let (summary, coefficients) = match args.loss {
        Loss::L2 => {
            let path = l2boost(&data.x, &data.y, &config)?;
            let (summary, df) = l2_stop(&path, args.stop)?;
            manifest.output(&write_l2_path(&args.out_dir, &path, df.as_deref())?);
            let coef = match args.learner {
                LearnerKind::Linear => Some(path.linear_coefficients(summary.m_star)?),
                _ => None,
            };
            (summary, coef)
        }
        Loss::Binomial => {
            let path = binomial_boost(&data.x, &data.y, &config)?;
            manifest.output(&write_binomial_path(&args.out_dir, &path)?);
            let summary = Summary {
                m_star: args.mstop,
                criterion: None,
                stop: args.stop,
            };
            let coef = match args.learner {
                LearnerKind::Linear => Some(path.linear_coefficients(summary.m_star)?),
                _ => None,
            };
            (summary, coef)
        }
    };
    if let Some((intercept, beta)) = coefficients {
        manifest.output(&write_coefficients(
            &args.out_dir,
            &data.names,
            intercept,
            &beta,
        )?);
    }

    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    let summary_path = args.out_dir.join(SUMMARY_FILE);
    write_atomic(&summary_path, text.as_bytes())?;
    manifest.output(&summary_path);
    match summary.criterion {
        Some(c) => println!("m_star={} criterion={c}", summary.m_star),
        None => println!("m_star={}", summary.m_star),
    }
    manifest.save(&args.out_dir, start.elapsed())
}

/// Stopping iteration and the df curve used to pick it, if any.
fn l2_stop(path: &L2BoostPath, stop: StopRule) -> Result<(Summary, Option<Vec<f64>>), CliError> {
    let estimator = match stop {
        StopRule::Fixed => {
            let summary = Summary {
                m_star: path.mstop(),
                criterion: None,
                stop,
            };
            return Ok((summary, None));
        }
        StopRule::AicTrace => DfEstimator::Trace,
        StopRule::AicActset => DfEstimator::ActiveSet,
    };
    let aic = aic_stop(path, estimator)?;
    let df = match estimator {
        DfEstimator::Trace => path.hat_traces.clone(),
        DfEstimator::ActiveSet => Some(
            df_actset_curve(path)
                .into_iter()
                .map(|d| d as f64)
                .collect(),
        ),
    };
    let summary = Summary {
        m_star: aic.m_star,
        criterion: Some(aic.criterion),
        stop,
    };
    Ok((summary, df))
}

fn path_header(with_df: bool) -> Vec<&'static str> {
    let mut header = vec!["m", "selected_index", "train_loss"];
    if with_df {
        header.push("df");
    }
    header
}

fn write_l2_path(dir: &Path, path: &L2BoostPath, df: Option<&[f64]>) -> Result<PathBuf, CliError> {
    let mut table = Table::new(&path_header(df.is_some()))?;
    let n = path.n() as f64;
    for m in 0..=path.mstop() {
        let selected = match m {
            0 => String::new(),
            _ => path.steps[m - 1].selected_index.to_string(),
        };
        let mut row = vec![m.to_string(), selected, num(path.rss(m)? / n)];
        if let Some(df) = df {
            row.push(num(df[m]));
        }
        table.row(row)?;
    }
    table.save(&dir.join("path.csv"))
}

fn write_binomial_path(dir: &Path, path: &BinomBoostPath) -> Result<PathBuf, CliError> {
    let mut table = Table::new(&path_header(false))?;
    for m in 0..=path.mstop() {
        let selected = match m {
            0 => String::new(),
            _ => path.steps[m - 1].selected_index.to_string(),
        };
        table.row([m.to_string(), selected, num(path.train_loss(m)?)])?;
    }
    table.save(&dir.join("path.csv"))
}

fn write_coefficients(
    dir: &Path,
    names: &[String],
    intercept: f64,
    beta: &[f64],
) -> Result<PathBuf, CliError> {
    let mut table = Table::new(&["variable", "coefficient"])?;
    table.row(["(intercept)".to_string(), num(intercept)])?;
    for (name, b) in names.iter().zip(beta) {
        table.row([name.clone(), num(*b)])?;
    }
    table.save(&dir.join("coefficients.csv"))
}
