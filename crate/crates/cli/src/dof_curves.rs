use std::path::Path;
use std::time::Instant;

use boostdf::sim::{make_friedman1, make_model, run_df_experiment, RegressionModel};
use boostdf::{BoostConfig, DfCurves, Learner};

use crate::args::{DofCurvesArgs, ModelId, SmootherKind};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::output::{ensure_dir, num, write_atomic, Table};
use crate::svg::{render, Panel, Series};

/// The model behind `--model`, reseeded when `--seed` is given.
fn build_model(
    id: ModelId,
    seed: Option<u64>,
) -> Result<(Box<dyn RegressionModel>, u64, u64), CliError> {
    Ok(match id {
        ModelId::One | ModelId::Two | ModelId::Three => {
            let n = match id {
                ModelId::One => 1,
                ModelId::Two => 2,
                _ => 3,
            };
            let mut spec = make_model(n)?;
            if let Some(s) = seed {
                spec = spec.with_seed(s);
            }
            let seeds = (spec.design.seed, spec.noise_seed_base);
            (Box::new(spec), seeds.0, seeds.1)
        }
        ModelId::F1Lo | ModelId::F1Hi => {
            let sigma_sq = if id == ModelId::F1Lo { 1.0 } else { 10.0 };
            let mut spec = make_friedman1(sigma_sq);
            if let Some(s) = seed {
                spec = spec.with_seed(s);
            }
            let seeds = (spec.design.seed, spec.noise_seed_base);
            (Box::new(spec), seeds.0, seeds.1)
        }
    })
}

fn validate(args: &DofCurvesArgs) -> Result<(), CliError> {
    if args.mstop == 0 {
        return Err(CliError::new("--mstop must be at least 1"));
    }
    if args.reps < 2 {
        return Err(CliError::new("--reps must be at least 2"));
    }
    if !(args.nu > 0.0 && args.nu <= 1.0) {
        return Err(CliError::new("--nu must lie in (0, 1]"));
    }
    Ok(())
}

pub fn run(args: &DofCurvesArgs) -> Result<(), CliError> {
    let start = Instant::now();
    validate(args)?;
    let learner = match args.learner {
        SmootherKind::Linear => Learner::ComponentwiseLinear,
        SmootherKind::Spline => Learner::ComponentwiseSpline { df: args.spline_df },
    };
    let (model, design_seed, noise_seed) = build_model(args.model, args.seed)?;
    let grid: Vec<usize> = (1..=args.mstop).collect();
    let config = BoostConfig::new(learner, args.nu, args.mstop);
    let curves = run_df_experiment(model.as_ref(), &config, &grid, args.reps)?;

    ensure_dir(&args.out_dir)?;
    let mut manifest = RunManifest::new("dof-curves", args)?;
    if let Some(s) = args.seed {
        manifest.seed("master", s);
    }
    manifest.seed("design", design_seed);
    manifest.seed("noise_base", noise_seed);

    let with_actset = args.learner == SmootherKind::Linear;
    let label = args.model.label();
    manifest.output(&write_curves(&args.out_dir, label, &curves, with_actset)?);
    manifest.output(&write_true(&args.out_dir, label, &curves)?);
    let svg = figure(label, &curves, with_actset, args.learner);
    let fig = args.out_dir.join("figure.svg");
    write_atomic(&fig, svg.as_bytes())?;
    manifest.output(&fig);
    manifest.save(&args.out_dir, start.elapsed())
}

fn write_curves(
    dir: &Path,
    label: &str,
    curves: &DfCurves,
    with_actset: bool,
) -> Result<std::path::PathBuf, CliError> {
    let mut header = vec!["model", "replicate", "m", "df_trace"];
    if with_actset {
        header.push("df_actset");
    }
    let mut table = Table::new(&header)?;
    for (r, (trace, actset)) in curves.df_trace.iter().zip(&curves.df_actset).enumerate() {
        for (k, &m) in curves.m_grid.iter().enumerate() {
            let mut row = vec![
                label.to_string(),
                r.to_string(),
                m.to_string(),
                num(trace[k]),
            ];
            if with_actset {
                row.push(actset[k].to_string());
            }
            table.row(row)?;
        }
    }
    table.save(&dir.join("df_curves.csv"))
}

fn write_true(dir: &Path, label: &str, curves: &DfCurves) -> Result<std::path::PathBuf, CliError> {
    let mut table = Table::new(&["model", "m", "df_true_hat", "se"])?;
    for (k, &m) in curves.m_grid.iter().enumerate() {
        table.row([
            label.to_string(),
            m.to_string(),
            num(curves.df_true_hat[k]),
            num(curves.df_true_se[k]),
        ])?;
    }
    table.save(&dir.join("df_true.csv"))
}

fn figure(label: &str, curves: &DfCurves, with_actset: bool, learner: SmootherKind) -> String {
    let truth: Vec<(f64, f64)> = curves
        .m_grid
        .iter()
        .zip(&curves.df_true_hat)
        .map(|(&m, &d)| (m as f64, d))
        .collect();
    let panel = |title: String, reps: Vec<Vec<(f64, f64)>>| {
        let mut series: Vec<Series> = reps
            .into_iter()
            .map(|pts| Series::new(pts, "gray").faint())
            .collect();
        series.push(
            Series::new(truth.clone(), "black")
                .dashed()
                .labeled("df_true"),
        );
        Panel {
            title,
            x_label: "m".into(),
            y_label: "degrees of freedom".into(),
            series,
        }
    };
    let learner_name = match learner {
        SmootherKind::Linear => "componentwise linear",
        SmootherKind::Spline => "componentwise spline",
    };
    let trace_reps = curves
        .df_trace
        .iter()
        .map(|row| {
            curves
                .m_grid
                .iter()
                .zip(row)
                .map(|(&m, &d)| (m as f64, d))
                .collect()
        })
        .collect();
    let mut panels = vec![panel(
        format!("model {label}, {learner_name}: trace df"),
        trace_reps,
    )];
    if with_actset {
        let actset_reps = curves
            .df_actset
            .iter()
            .map(|row| {
                curves
                    .m_grid
                    .iter()
                    .zip(row)
                    .map(|(&m, &d)| (m as f64, d as f64))
                    .collect()
            })
            .collect();
        panels.push(panel(
            format!("model {label}, {learner_name}: active-set df"),
            actset_reps,
        ));
    }
    render(&panels)
}
