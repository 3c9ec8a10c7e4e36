//! Operations behind the `udw-coherence` subcommands. Each returns a
//! serialisable record; the binary only parses flags and prints.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldModel;
use crate::groups::{resolve, resolve_detector, resolve_energy, ParameterSet, M_OVER_OMEGA};
use crate::quantum::{cohering_power, decohering_power, remaining_coherence};
use crate::sweep::{run_sweep, SweepSpec, SweepTable};

/// Points of the θ-grid reported by `eval`, covering `[0, 2π)`.
pub const EVAL_THETA_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainingPoint {
    pub theta: f64,
    pub coherence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub z_re: f64,
    pub z_im: f64,
    pub phase: f64,
    pub cohering: f64,
    pub decohering: f64,
    pub remaining: Vec<RemainingPoint>,
}

pub fn cmd_eval(params: &ParameterSet, raw: bool, model: &FieldModel) -> Result<EvalRecord> {
    let resolved = resolve(params, raw)?;
    let kernel = model.kernel(&resolved.detector, &resolved.field)?;
    let remaining = (0..EVAL_THETA_POINTS)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / EVAL_THETA_POINTS as f64;
            RemainingPoint {
                theta,
                coherence: remaining_coherence(&kernel, theta),
            }
        })
        .collect();
    Ok(EvalRecord {
        z_re: kernel.z().re,
        z_im: kernel.z().im,
        phase: kernel.phase(),
        cohering: cohering_power(&kernel),
        decohering: decohering_power(&kernel),
        remaining,
    })
}

pub fn cmd_sweep(spec: &SweepSpec, model: &FieldModel, workers: usize) -> Result<SweepTable> {
    run_sweep(spec, model, workers)
}

/// Outcome of `infer-mass`. A refusal or an out-of-range target is reported
/// in `error` with `mass` unset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferMassRecord {
    pub target: f64,
    pub mass: Option<f64>,
    pub residual: Option<f64>,
    pub monotone_check: bool,
    pub error: Option<String>,
}

impl InferMassRecord {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// Infers `m/Ω` from a cohering power measured with the detector and coherent
/// field described by `params` (which must not fix the mass).
pub fn cmd_infer_mass(
    target: f64,
    params: &ParameterSet,
    bracket: (f64, f64),
    raw: bool,
    model: &FieldModel,
) -> Result<InferMassRecord> {
    if params.get(if raw { "m" } else { M_OVER_OMEGA }).is_some() {
        return Err(Error::Usage(
            "infer-mass solves for the mass; do not set it".into(),
        ));
    }
    let detector = resolve_detector(params, None, raw)?;
    let energy = resolve_energy(params, None, raw)?
        .ok_or_else(|| Error::Usage("missing group E/Omega (coherent field energy)".into()))?;

    let record = match model.infer_mass(target, &detector, energy, bracket) {
        Ok(found) => InferMassRecord {
            target,
            mass: Some(found.mass / detector.omega),
            residual: Some(found.residual),
            monotone_check: true,
            error: None,
        },
        Err(e @ Error::NotMonotone { .. }) => InferMassRecord {
            target,
            mass: None,
            residual: None,
            monotone_check: false,
            error: Some(e.to_string()),
        },
        Err(e @ Error::TargetOutOfRange { .. }) => InferMassRecord {
            target,
            mass: None,
            residual: None,
            monotone_check: true,
            error: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    };
    Ok(record)
}
