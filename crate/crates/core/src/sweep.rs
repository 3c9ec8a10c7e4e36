//! Parameter sweeps over the dimensionless groups.
//!
//! A sweep is described by a JSON [`SweepSpec`]. Points are evaluated in
//! parallel and emitted in row-major grid order (last axis fastest), so the
//! output depends only on the sweep spec.
//!
//! CSV layout:
//!
//! ```text
//! # udw-coherence v1
//! <axis groups...>,<quantity columns...>,error
//! ```
//!
//! Numbers are written in Rust's `{:.16e}` form (17 significant digits); the
//! `error` column is empty unless evaluating the point failed.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldModel, FieldState};
use crate::groups::{resolve, ParameterSet, GROUPS};
use crate::quantum::{cohering_power, decohering_power};

pub const CSV_MAGIC: &str = "# udw-coherence v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    CoheringCoherent,
    CoheringUndamped,
    DecoheringThermal,
    Kernel,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::CoheringCoherent => "cohering-coherent",
            Quantity::CoheringUndamped => "cohering-undamped",
            Quantity::DecoheringThermal => "decohering-thermal",
            Quantity::Kernel => "kernel",
        }
    }

    pub fn columns(&self) -> Vec<&'static str> {
        match self {
            Quantity::Kernel => vec!["z_re", "z_im"],
            other => vec![other.name()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub group: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn linear(group: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            group: group.to_string(),
            min,
            max,
            steps,
            scale: Scale::Linear,
        }
    }

    pub fn log(group: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            group: group.to_string(),
            min,
            max,
            steps,
            scale: Scale::Log,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.steps {
                    return self.max;
                }
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * t,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: ParameterSet,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Usage(format!(
                "a sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            if !GROUPS.contains(&axis.group.as_str()) {
                return Err(Error::Usage(format!("unknown axis group `{}`", axis.group)));
            }
            if axis.steps < 2 {
                return Err(Error::Usage(format!(
                    "axis `{}` needs at least 2 steps",
                    axis.group
                )));
            }
            if !(axis.min < axis.max) {
                return Err(Error::Usage(format!(
                    "axis `{}` needs min < max",
                    axis.group
                )));
            }
            if axis.scale == Scale::Log && !(axis.min > 0.0) {
                return Err(Error::Usage(format!(
                    "log axis `{}` needs min > 0",
                    axis.group
                )));
            }
            if self.fixed.get(&axis.group).is_some() {
                return Err(Error::Usage(format!(
                    "group `{}` is both an axis and fixed",
                    axis.group
                )));
            }
        }
        if self.axes.len() == 2 && self.axes[0].group == self.axes[1].group {
            return Err(Error::Usage("the two axes must be different groups".into()));
        }
        // resolving the first grid point catches missing or conflicting groups up front
        let first = self.point_params(&self.axes.iter().map(|a| a.min).collect::<Vec<_>>());
        resolve(&first, false)?;
        Ok(())
    }

    fn point_params(&self, coords: &[f64]) -> ParameterSet {
        let mut params = self.fixed.clone();
        for (axis, &v) in self.axes.iter().zip(coords) {
            params.insert(&axis.group, v);
        }
        params
    }

    /// Grid coordinates in row-major order, last axis fastest.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut points: Vec<Vec<f64>> = vec![vec![]];
        for axis in &self.axes {
            let values = axis.values();
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub values: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Value column `col` for every row, `NaN` where evaluation failed.
    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.values.get(col).copied().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_MAGIC);
        out.push('\n');
        let header: Vec<&str> = self
            .axes
            .iter()
            .chain(self.columns.iter())
            .map(String::as_str)
            .chain(std::iter::once("error"))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.coords.iter().map(|v| format_number(*v)).collect();
            if row.error.is_some() {
                fields.extend(self.columns.iter().map(|_| String::new()));
            } else {
                fields.extend(row.values.iter().map(|v| format_number(*v)));
            }
            fields.push(row.error.as_deref().map(csv_escape).unwrap_or_default());
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }
}

/// Decimal with 17 significant digits, independent of locale.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\"\""))
}

/// Evaluates one quantity at one parameter point.
pub fn evaluate(model: &FieldModel, quantity: Quantity, params: &ParameterSet) -> Result<Vec<f64>> {
    let resolved = resolve(params, false)?;
    let det = &resolved.detector;
    let mass = resolved.field.mass;
    match (quantity, resolved.field.state) {
        (Quantity::CoheringCoherent, FieldState::Coherent { mean_energy }) => {
            Ok(vec![cohering_power(&model.kernel_coherent(
                det,
                mass,
                mean_energy,
            )?)])
        }
        (Quantity::CoheringUndamped, FieldState::Coherent { mean_energy }) => {
            Ok(vec![model.coherent_cohering_power(
                det,
                mass,
                mean_energy,
                false,
            )?])
        }
        (
            Quantity::DecoheringThermal,
            FieldState::Thermal {
                inverse_temperature,
            },
        ) => Ok(vec![decohering_power(&model.kernel_thermal(
            det,
            mass,
            inverse_temperature,
        )?)]),
        (Quantity::Kernel, _) => {
            let z = model.kernel(det, &resolved.field)?.z();
            Ok(vec![z.re, z.im])
        }
        (q, _) => Err(Error::Usage(format!(
            "quantity `{}` does not match the field state given",
            q.name()
        ))),
    }
}

/// Runs the sweep on a pool of `workers` threads (0 = rayon default).
pub fn run_sweep(spec: &SweepSpec, model: &FieldModel, workers: usize) -> Result<SweepTable> {
    spec.validate()?;
    let grid = spec.grid();
    let eval_all = || -> Vec<SweepRow> {
        grid.par_iter()
            .map(
                |coords| match evaluate(model, spec.quantity, &spec.point_params(coords)) {
                    Ok(values) => SweepRow {
                        coords: coords.clone(),
                        values,
                        error: None,
                    },
                    Err(e) => SweepRow {
                        coords: coords.clone(),
                        values: vec![],
                        error: Some(e.to_string()),
                    },
                },
            )
            .collect()
    };
    let rows = if workers == 0 {
        eval_all()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Usage(e.to_string()))?
            .install(eval_all)
    };
    Ok(SweepTable {
        axes: spec.axes.iter().map(|a| a.group.clone()).collect(),
        columns: spec
            .quantity
            .columns()
            .into_iter()
            .map(String::from)
            .collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            quantity: Quantity::CoheringCoherent,
            axes: vec![
                Axis::linear(E_OVER_M, 0.5, 2.0, 3),
                Axis::log(R_OVER_COMPTON, 0.1, 1.0, 2),
            ],
            fixed: ParameterSet::new().with(LAMBDA_OVER_COMPTON, 0.2),
            output: None,
            format: Format::Csv,
        }
    }

    #[test]
    fn grid_is_row_major() {
        let g = small_spec().grid();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![0.5, 0.1]);
        assert!((g[1][1] - 1.0).abs() < 1e-15);
        assert_eq!(g[2][0], 1.25);
    }

    #[test]
    fn csv_layout() {
        let table = run_sweep(&small_spec(), &FieldModel::default(), 2).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_MAGIC));
        assert_eq!(lines.next(), Some("E/m,R/lambda_C,cohering-coherent,error"));
        assert_eq!(lines.count(), 6);
        assert_eq!(table.failures(), 0);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = run_sweep(&small_spec(), &FieldModel::default(), 1)
            .unwrap()
            .to_csv();
        let b = run_sweep(&small_spec(), &FieldModel::default(), 4)
            .unwrap()
            .to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn spec_validation() {
        let mut spec = small_spec();
        spec.axes[0].steps = 1;
        assert!(spec.validate().is_err());

        let mut spec = small_spec();
        spec.axes[1].min = 2.0;
        assert!(spec.validate().is_err());

        let mut spec = small_spec();
        spec.fixed = ParameterSet::new();
        assert!(spec.validate().unwrap_err().to_string().contains("lambda"));
    }

    #[test]
    fn spec_json_field_names() {
        let json = r#"{
            "quantity": "decohering-thermal",
            "axes": [{"group": "R*Omega", "min": 0.1, "max": 3.0, "steps": 4, "scale": "linear"}],
            "fixed": {"beta*Omega": 2.0, "lambda*Omega": 1.0, "m/Omega": 0.5},
            "output": "out.csv",
            "format": "csv"
        }"#;
        let spec = SweepSpec::from_json(json).unwrap();
        assert_eq!(spec.quantity, Quantity::DecoheringThermal);
        assert_eq!(spec.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn failing_points_are_marked() {
        let spec = SweepSpec {
            quantity: Quantity::DecoheringThermal,
            axes: vec![Axis::linear(R_OMEGA, 0.0, 1.0, 3)],
            fixed: ParameterSet::new()
                .with(BETA_OMEGA, 1.0)
                .with(LAMBDA_OMEGA, 1.0)
                .with(M_OVER_OMEGA, 1.0),
            output: None,
            format: Format::Csv,
        };
        let table = run_sweep(&spec, &FieldModel::default(), 1).unwrap();
        assert_eq!(table.failures(), 1);
        assert!(table.rows[0]
            .error
            .as_deref()
            .unwrap()
            .contains("pointlike"));
        let csv = table.to_csv();
        let third = csv.lines().nth(2).unwrap();
        assert!(third.ends_with("\""), "{third}");
    }
}
