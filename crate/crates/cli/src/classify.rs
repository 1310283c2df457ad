use std::path::{Path, PathBuf};
use std::time::Instant;

use boostdf::sim::run_classification_experiment;
use boostdf::{Learner, LogitAdditiveSpec, MetricCurves, Metrics};

use crate::args::ClassifySimArgs;
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{ensure_dir, num, write_atomic, Table};
use crate::svg::{render, Panel, Series};

fn validate(args: &ClassifySimArgs) -> Result<(), CliError> {
    if args.nsim == 0 {
        return Err(CliError::new("--nsim must be at least 1"));
    }
    if args.stride == 0 {
        return Err(CliError::new("--stride must be at least 1"));
    }
    if args.mstop < args.stride {
        return Err(CliError::new("--mstop must be at least --stride"));
    }
    if args.max_leaves < 2 {
        return Err(CliError::new("--max-leaves must be at least 2"));
    }
    if !(args.nu > 0.0 && args.nu <= 1.0) {
        return Err(CliError::new("--nu must lie in (0, 1]"));
    }
    Ok(())
}

fn learner_label(learner: &Learner) -> &'static str {
    match learner {
        Learner::Stump => "stump",
        _ => "tree",
    }
}

pub fn run(args: &ClassifySimArgs) -> Result<(), CliError> {
    let start = Instant::now();
    validate(args)?;
    let spec = LogitAdditiveSpec {
        seed: args.seed,
        ..LogitAdditiveSpec::default()
    };
    let grid: Vec<usize> = (args.stride..=args.mstop).step_by(args.stride).collect();
    let learners = [
        Learner::Stump,
        Learner::Tree {
            max_leaves: args.max_leaves,
        },
    ];
    let curves =
        run_classification_experiment(&spec, &learners, args.nsim, args.mstop, args.nu, &grid)?;

    ensure_dir(&args.out_dir)?;
    let mut manifest = RunManifest::new("classify-sim", args)?;
    manifest.seed("master", args.seed);
    manifest.output(&write_raw(&args.out_dir, &curves)?);
    manifest.output(&write_mean(&args.out_dir, &curves)?);
    let fig = args.out_dir.join("figure.svg");
    write_atomic(&fig, figure(&curves).as_bytes())?;
    manifest.output(&fig);
    manifest.save(&args.out_dir, start.elapsed())
}

fn write_raw(dir: &Path, curves: &[MetricCurves]) -> Result<PathBuf, CliError> {
    let mut table = Table::new(&[
        "learner",
        "sim",
        "m",
        "misclass",
        "surrogate",
        "abs_prob_err",
    ])?;
    for c in curves {
        for (s, row) in c.per_sim.iter().enumerate() {
            for (&m, v) in c.m_grid.iter().zip(row) {
                table.row([
                    learner_label(&c.learner).to_string(),
                    s.to_string(),
                    m.to_string(),
                    num(v.misclassification),
                    num(v.surrogate_loss),
                    num(v.abs_prob_error),
                ])?;
            }
        }
    }
    table.save(&dir.join("metrics.csv"))
}

fn write_mean(dir: &Path, curves: &[MetricCurves]) -> Result<PathBuf, CliError> {
    let mut table = Table::new(&[
        "learner",
        "m",
        "misclass",
        "surrogate",
        "abs_prob_err",
        "misclass_se",
        "surrogate_se",
        "abs_prob_err_se",
    ])?;
    for c in curves {
        for ((&m, mean), se) in c.m_grid.iter().zip(&c.mean).zip(&c.se) {
            table.row([
                learner_label(&c.learner).to_string(),
                m.to_string(),
                num(mean.misclassification),
                num(mean.surrogate_loss),
                num(mean.abs_prob_error),
                num(se.misclassification),
                num(se.surrogate_loss),
                num(se.abs_prob_error),
            ])?;
        }
    }
    table.save(&dir.join("metrics_mean.csv"))
}

fn figure(curves: &[MetricCurves]) -> String {
    let metric_panel = |title: &str, pick: fn(&Metrics) -> f64| {
        let series = curves
            .iter()
            .map(|c| {
                let pts = c
                    .m_grid
                    .iter()
                    .zip(&c.mean)
                    .map(|(&m, v)| (m as f64, pick(v)))
                    .collect();
                let s = Series::new(pts, "black").labeled(learner_label(&c.learner));
                if matches!(c.learner, Learner::Stump) {
                    s
                } else {
                    s.dashed()
                }
            })
            .collect();
        Panel {
            title: title.into(),
            x_label: "m".into(),
            y_label: title.into(),
            series,
        }
    };
    render(&[
        metric_panel("test misclassification", |m| m.misclassification),
        metric_panel("test surrogate loss", |m| m.surrogate_loss),
        metric_panel("test absolute probability error", |m| m.abs_prob_error),
    ])
}
