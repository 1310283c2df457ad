use serde::de::DeserializeOwned;

use crate::args::{ClassifySimArgs, DofCurvesArgs, FitArgs, ReplayArgs};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::{classify, dof_curves, fit};

fn params<T: DeserializeOwned>(manifest: &RunManifest) -> Result<T, CliError> {
    serde_json::from_value(manifest.params.clone()).map_err(|e| {
        CliError::new(format!(
            "manifest parameters do not match '{}': {e}",
            manifest.command
        ))
    })
}

pub fn run(args: &ReplayArgs) -> Result<(), CliError> {
    let manifest = RunManifest::load(&args.manifest)?;
    match manifest.command.as_str() {
        "dof-curves" => {
            let mut p: DofCurvesArgs = params(&manifest)?;
            if let Some(dir) = &args.out_dir {
                p.out_dir = dir.clone();
            }
            dof_curves::run(&p)
        }
        "classify-sim" => {
            let mut p: ClassifySimArgs = params(&manifest)?;
            if let Some(dir) = &args.out_dir {
                p.out_dir = dir.clone();
            }
            classify::run(&p)
        }
        "fit" => {
            let mut p: FitArgs = params(&manifest)?;
            if let Some(dir) = &args.out_dir {
                p.out_dir = dir.clone();
            }
            fit::run(&p)
        }
        other => Err(CliError::new(format!(
            "manifest records unknown command '{other}'"
        ))),
    }
}
