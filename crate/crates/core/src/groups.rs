//! Dimensionless parameter groups.
//!
//! Inputs are named by the keys in [`GROUPS`]. Internally the detector gap
//! sets the scale, `Ω = 1`. The Compton-scaled groups (`E/m`, `R/lambda_C`,
//! `lambda/lambda_C`) need a mass; when `m/Omega` is absent it defaults to 1.
//! With `t₀ = 0` the results depend on the mass only through those groups.
//!
//! Raw mode accepts physical values directly under the keys in [`RAW_KEYS`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{DetectorConfig, FieldConfig};

pub const E_OVER_M: &str = "E/m";
pub const R_OVER_COMPTON: &str = "R/lambda_C";
pub const LAMBDA_OVER_COMPTON: &str = "lambda/lambda_C";
pub const M_OVER_OMEGA: &str = "m/Omega";
pub const E_OVER_OMEGA: &str = "E/Omega";
pub const R_OMEGA: &str = "R*Omega";
pub const LAMBDA_OMEGA: &str = "lambda*Omega";
pub const BETA_OMEGA: &str = "beta*Omega";
pub const OMEGA_T0: &str = "Omega*t0";

pub const GROUPS: [&str; 9] = [
    E_OVER_M,
    R_OVER_COMPTON,
    LAMBDA_OVER_COMPTON,
    M_OVER_OMEGA,
    E_OVER_OMEGA,
    R_OMEGA,
    LAMBDA_OMEGA,
    BETA_OMEGA,
    OMEGA_T0,
];

pub const RAW_KEYS: [&str; 7] = ["Omega", "m", "E", "R", "lambda", "beta", "t0"];

/// Named parameter values, kept in sorted key order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterSet(BTreeMap<String, f64>);

impl ParameterSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `name=value`.
    pub fn parse_assignment(&mut self, text: &str) -> Result<()> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("expected group=value, got `{text}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("`{}` is not a number", value.trim())))?;
        self.insert(name.trim(), value);
        Ok(())
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn merged(&self, other: &ParameterSet) -> ParameterSet {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }

    fn check_known(&self, raw: bool) -> Result<()> {
        let allowed: &[&str] = if raw { &RAW_KEYS } else { &GROUPS };
        for name in self.0.keys() {
            if !allowed.contains(&name.as_str()) {
                return Err(Error::Usage(format!(
                    "unknown {} `{name}` (expected one of {})",
                    if raw { "raw parameter" } else { "group" },
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn one_of(&self, scaled: (&str, f64), direct: &str) -> Result<Option<f64>> {
        match (self.get(scaled.0), self.get(direct)) {
            (Some(_), Some(_)) => Err(Error::Usage(format!(
                "groups `{}` and `{direct}` set the same quantity",
                scaled.0
            ))),
            (Some(v), None) => Ok(Some(v * scaled.1)),
            (None, Some(v)) => Ok(Some(v)),
            (None, None) => Ok(None),
        }
    }
}

/// Detector and field in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub detector: DetectorConfig,
    pub field: FieldConfig,
}

fn missing(what: &str) -> Error {
    Error::Usage(format!("missing group {what}"))
}

fn uses_compton(params: &ParameterSet) -> bool {
    [E_OVER_M, R_OVER_COMPTON, LAMBDA_OVER_COMPTON]
        .iter()
        .any(|g| params.get(g).is_some())
}

/// Mass implied by the groups, or `None` if it is left open.
fn group_mass(params: &ParameterSet) -> Option<f64> {
    params
        .get(M_OVER_OMEGA)
        .or(uses_compton(params).then_some(1.0))
}

/// Detector configuration from the groups. `mass` is needed only for the
/// Compton-scaled groups.
pub fn resolve_detector(
    params: &ParameterSet,
    mass: Option<f64>,
    raw: bool,
) -> Result<DetectorConfig> {
    params.check_known(raw)?;
    if raw {
        let omega = params.get("Omega").unwrap_or(1.0);
        let radius = params.get("R").ok_or_else(|| missing("R"))?;
        let lambda = params.get("lambda").ok_or_else(|| missing("lambda"))?;
        return DetectorConfig::new(omega, radius, params.get("t0").unwrap_or(0.0), lambda);
    }
    let compton = match mass {
        Some(m) if m > 0.0 => 2.0 * PI / m,
        _ if uses_compton(params) => {
            return Err(Error::Usage(format!(
                "Compton-scaled groups need {M_OVER_OMEGA} > 0 (use {R_OMEGA}, {LAMBDA_OMEGA}, {E_OVER_OMEGA} for a massless field)"
            )))
        }
        _ => f64::NAN,
    };
    let radius = params
        .one_of((R_OVER_COMPTON, compton), R_OMEGA)?
        .ok_or_else(|| missing(&format!("{R_OMEGA} or {R_OVER_COMPTON}")))?;
    let lambda = params
        .one_of((LAMBDA_OVER_COMPTON, compton), LAMBDA_OMEGA)?
        .ok_or_else(|| missing(&format!("{LAMBDA_OMEGA} or {LAMBDA_OVER_COMPTON}")))?;
    DetectorConfig::new(1.0, radius, params.get(OMEGA_T0).unwrap_or(0.0), lambda)
}

/// Mean field energy, if a coherent state is requested.
pub fn resolve_energy(params: &ParameterSet, mass: Option<f64>, raw: bool) -> Result<Option<f64>> {
    if raw {
        return Ok(params.get("E"));
    }
    match (params.get(E_OVER_M), mass) {
        (Some(_), None) => Err(Error::Usage(format!("{E_OVER_M} needs a known mass"))),
        (_, m) => params.one_of((E_OVER_M, m.unwrap_or(f64::NAN)), E_OVER_OMEGA),
    }
}

pub fn resolve(params: &ParameterSet, raw: bool) -> Result<Resolved> {
    params.check_known(raw)?;
    let mass = if raw {
        Some(params.get("m").ok_or_else(|| missing("m"))?)
    } else {
        Some(group_mass(params).ok_or_else(|| missing(M_OVER_OMEGA))?)
    };
    let detector = resolve_detector(params, mass, raw)?;
    let mass = mass.expect("set above");
    let energy = resolve_energy(params, Some(mass), raw)?;
    let beta = params.get(if raw { "beta" } else { BETA_OMEGA });
    let field = match (energy, beta) {
        (Some(e), None) => FieldConfig::coherent(mass, e)?,
        (None, Some(b)) => FieldConfig::thermal(mass, b)?,
        (None, None) => {
            return Err(missing(if raw {
                "E or beta"
            } else {
                "for the field state: E/m, E/Omega or beta*Omega"
            }))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Usage(
                "field state is ambiguous: give either an energy (coherent) or beta (thermal), not both".into(),
            ))
        }
    };
    Ok(Resolved { detector, field })
}
