//! From detector and field parameters to the channel kernel.
//!
//! The detector sits at the origin with a Gaussian smearing profile of mean
//! effective radius `R`, whose Fourier transform is `F(k) = exp(-πk²R²/16)`.
//! Field modes have `ω(k) = sqrt(k² + m²)`. All quantities are in natural
//! units.
//!
//! Two routes exist for the smeared-mode commutator and the coherent overlap:
//! direct radial quadrature and a closed form in Tricomi's `U`. Quadrature is
//! the reference; the closed forms are kept as an independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_semi_infinite, DEFAULT_REL_TOL};
use crate::numerics::roots::bisect_monotone;
use crate::numerics::special::{coth_unchecked, gamma_fn, tricomi_u};
use crate::quantum::{cohering_power, ChannelKernel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Energy gap Ω.
    pub omega: f64,
    /// Mean effective radius R.
    pub radius: f64,
    /// Kick time t₀.
    pub t0: f64,
    /// Coupling λ (dimension of length).
    pub lambda: f64,
}

impl DetectorConfig {
    pub fn new(omega: f64, radius: f64, t0: f64, lambda: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "energy gap must be positive",
            });
        }
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter {
                name: "radius",
                value: radius,
                reason: "radius must be non-negative",
            });
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t0",
                value: t0,
                reason: "kick time must be finite",
            });
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "coupling must be non-negative",
            });
        }
        Ok(Self {
            omega,
            radius,
            t0,
            lambda,
        })
    }

    /// Detector phase `Ωt₀` entering the monopole operator.
    pub fn phase(&self) -> f64 {
        self.omega * self.t0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FieldState {
    Coherent { mean_energy: f64 },
    Thermal { inverse_temperature: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub mass: f64,
    pub state: FieldState,
}

impl FieldConfig {
    pub fn coherent(mass: f64, mean_energy: f64) -> Result<Self> {
        check_mass(mass)?;
        positive("mean_energy", mean_energy)?;
        Ok(Self {
            mass,
            state: FieldState::Coherent { mean_energy },
        })
    }

    pub fn thermal(mass: f64, inverse_temperature: f64) -> Result<Self> {
        check_mass(mass)?;
        positive("inverse_temperature", inverse_temperature)?;
        Ok(Self {
            mass,
            state: FieldState::Thermal {
                inverse_temperature,
            },
        })
    }
}

/// Compton wavelength and the combined Gaussian width of the coherent overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    /// `2π/m`; infinite for a massless field.
    pub compton: f64,
    /// `σ` with `1/σ² = 4/(πE²) + πR²/8`.
    pub sigma: f64,
}

impl DerivedScales {
    pub fn new(radius: f64, energy: f64, mass: f64) -> Self {
        let inv_sigma_sq = 4.0 / (PI * energy * energy) + PI * radius * radius / 8.0;
        Self {
            compton: compton_wavelength(mass),
            sigma: inv_sigma_sq.sqrt().recip(),
        }
    }
}

pub fn compton_wavelength(mass: f64) -> f64 {
    2.0 * PI / mass
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mass",
            value: mass,
            reason: "mass must be non-negative",
        });
    }
    Ok(())
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        });
    }
    Ok(())
}

fn nonzero_radius(radius: f64, what: &'static str) -> Result<()> {
    if radius == 0.0 {
        return Err(Error::PointlikeDivergence(what));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "radius must be positive",
        });
    }
    Ok(())
}

/// Fourier transform of the Gaussian smearing profile.
pub fn smearing_fourier(k: f64, radius: f64) -> f64 {
    (-PI * k * k * radius * radius / 16.0).exp()
}

/// Width of the `|F(k)|² = exp(-πk²R²/8)` envelope in the `exp(-(k/s)²)` form.
fn smearing_envelope(radius: f64) -> f64 {
    (8.0 / PI).sqrt() / radius
}

/// Unit-consistent evaluator for the smeared-field integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldModel {
    pub rel_tol: f64,
}

impl Default for FieldModel {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

impl FieldModel {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self { rel_tol }
    }

    /// `[â, â†] = 1/(4π²) ∫₀^∞ k² e^{-πk²R²/8} / ω(k) dk` by quadrature.
    pub fn mode_commutator(&self, radius: f64, mass: f64) -> Result<f64> {
        nonzero_radius(radius, "mode commutator")?;
        check_mass(mass)?;
        let integrand =
            |k: f64| k * k * (-PI * k * k * radius * radius / 8.0).exp() / k.hypot(mass);
        let quad = integrate_semi_infinite(integrand, smearing_envelope(radius), self.rel_tol)?;
        Ok(quad.value / (4.0 * PI * PI))
    }

    /// Closed form `√π/(4λ_C²) · U(3/2, 2, π³R²/(2λ_C²))`, defined for `m > 0`.
    pub fn mode_commutator_tricomi(&self, radius: f64, mass: f64) -> Result<f64> {
        nonzero_radius(radius, "mode commutator")?;
        positive("mass", mass)?;
        let lc = compton_wavelength(mass);
        let u = tricomi_u(
            1.5,
            2.0,
            PI.powi(3) * radius * radius / (2.0 * lc * lc),
            self.rel_tol,
        )?;
        Ok(PI.sqrt() / (4.0 * lc * lc) * u)
    }

    /// `Re⟨â⟩ = sqrt(8/(π⁴E³)) ∫₀^∞ k^{5/2} e^{-k²/(2σ²)} / ω(k) dk` for the
    /// Gaussian coherent amplitude, detector at the origin, `t₀ = 0`.
    pub fn coherent_overlap(&self, radius: f64, energy: f64, mass: f64) -> Result<f64> {
        positive("energy", energy)?;
        check_mass(mass)?;
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                value: radius,
                reason: "radius must be non-negative",
            });
        }
        let sigma = DerivedScales::new(radius, energy, mass).sigma;
        let two_sigma_sq = 2.0 * sigma * sigma;
        let integrand = |k: f64| k * k * k.sqrt() * (-k * k / two_sigma_sq).exp() / k.hypot(mass);
        let quad = integrate_semi_infinite(integrand, two_sigma_sq.sqrt(), self.rel_tol)?;
        Ok((8.0 / (PI.powi(4) * energy.powi(3))).sqrt() * quad.value)
    }

    /// Closed form `m sqrt(2m³/(π⁴E³)) Γ(7/4) U(7/4, 9/4, m²/(2σ²))`, `m > 0`.
    pub fn coherent_overlap_tricomi(&self, radius: f64, energy: f64, mass: f64) -> Result<f64> {
        positive("energy", energy)?;
        positive("mass", mass)?;
        let sigma = DerivedScales::new(radius, energy, mass).sigma;
        let u = tricomi_u(
            1.75,
            2.25,
            mass * mass / (2.0 * sigma * sigma),
            self.rel_tol,
        )?;
        Ok(
            mass * (2.0 * mass.powi(3) / (PI.powi(4) * energy.powi(3))).sqrt()
                * gamma_fn(1.75)?
                * u,
        )
    }

    /// `⟨Ĥ_φ⟩ = ∫ ω(k)|a(k)|² d³k` for the Gaussian coherent amplitude.
    pub fn coherent_mean_energy(&self, energy: f64, mass: f64) -> Result<f64> {
        positive("energy", energy)?;
        check_mass(mass)?;
        // ω|a|² = k e^{-4k²/(πE²)} / (πE/2)³, radial measure 4πk²
        let integrand = |k: f64| k.powi(3) * (-4.0 * k * k / (PI * energy * energy)).exp();
        let quad = integrate_semi_infinite(integrand, energy * PI.sqrt() / 2.0, self.rel_tol)?;
        Ok(4.0 * PI * quad.value / (PI * energy / 2.0).powi(3))
    }

    /// `I(β) = 1/(2π²) ∫₀^∞ k² e^{-πk²R²/8} coth(βω/2) / ω dk`.
    pub fn thermal_integral(&self, radius: f64, mass: f64, beta: f64) -> Result<f64> {
        nonzero_radius(radius, "thermal field variance")?;
        check_mass(mass)?;
        positive("beta", beta)?;
        let integrand = |k: f64| {
            let w = k.hypot(mass);
            k * k * (-PI * k * k * radius * radius / 8.0).exp() * coth_unchecked(0.5 * beta * w) / w
        };
        let quad = integrate_semi_infinite(integrand, smearing_envelope(radius), self.rel_tol)?;
        Ok(quad.value / (2.0 * PI * PI))
    }

    /// `z = exp(-2λ²[â,â†]) exp(4iλ Re⟨â⟩)`.
    pub fn kernel_coherent(
        &self,
        det: &DetectorConfig,
        mass: f64,
        energy: f64,
    ) -> Result<ChannelKernel> {
        nonzero_radius(det.radius, "mode commutator")?;
        if det.lambda == 0.0 {
            return Ok(ChannelKernel::identity().with_phase(det.phase()));
        }
        let comm = self.mode_commutator(det.radius, mass)?;
        let overlap = self.coherent_overlap(det.radius, energy, mass)?;
        let modulus = (-2.0 * det.lambda * det.lambda * comm).exp();
        ChannelKernel::new(
            Complex64::from_polar(modulus, 4.0 * det.lambda * overlap),
            det.phase(),
        )
    }

    /// `z = exp(-λ² I(β))`, real and positive.
    pub fn kernel_thermal(
        &self,
        det: &DetectorConfig,
        mass: f64,
        beta: f64,
    ) -> Result<ChannelKernel> {
        nonzero_radius(det.radius, "thermal field variance")?;
        if det.lambda == 0.0 {
            return Ok(ChannelKernel::identity().with_phase(det.phase()));
        }
        let i_beta = self.thermal_integral(det.radius, mass, beta)?;
        ChannelKernel::new(
            Complex64::new((-det.lambda * det.lambda * i_beta).exp(), 0.0),
            det.phase(),
        )
    }

    pub fn kernel(&self, det: &DetectorConfig, field: &FieldConfig) -> Result<ChannelKernel> {
        match field.state {
            FieldState::Coherent { mean_energy } => {
                self.kernel_coherent(det, field.mass, mean_energy)
            }
            FieldState::Thermal {
                inverse_temperature,
            } => self.kernel_thermal(det, field.mass, inverse_temperature),
        }
    }

    /// Cohering power of a coherent field; `damped = false` drops the
    /// `exp(-2λ²[â,â†])` envelope and leaves `|sin(4λ Re⟨â⟩)|`.
    pub fn coherent_cohering_power(
        &self,
        det: &DetectorConfig,
        mass: f64,
        energy: f64,
        damped: bool,
    ) -> Result<f64> {
        if damped {
            return self
                .kernel_coherent(det, mass, energy)
                .map(|k| cohering_power(&k));
        }
        let overlap = self.coherent_overlap(det.radius, energy, mass)?;
        Ok((4.0 * det.lambda * overlap).sin().abs())
    }

    /// Cohering power over a grid of `(E/m, R/λ_C, λ/λ_C)` points for a field
    /// of the given mass. Points are evaluated in parallel and returned in
    /// input order; a failing point keeps its row with the error attached.
    pub fn cohering_power_surface(
        &self,
        points: &[SurfacePoint],
        mass: f64,
        damped: bool,
    ) -> Vec<SurfaceRow> {
        let lc = compton_wavelength(mass);
        points
            .par_iter()
            .map(|p| {
                let value = DetectorConfig::new(
                    1.0,
                    p.radius_over_compton * lc,
                    0.0,
                    p.lambda_over_compton * lc,
                )
                .and_then(|det| {
                    self.coherent_cohering_power(&det, mass, p.energy_over_mass * mass, damped)
                })
                .map_err(|e| e.to_string());
                SurfaceRow { point: *p, value }
            })
            .collect()
    }

    /// Radius inside `bracket` where `sin(4λ Re⟨â⟩)` changes sign, so the
    /// cohering power vanishes identically.
    pub fn find_cohering_zero(
        &self,
        det: &DetectorConfig,
        mass: f64,
        energy: f64,
        bracket: (f64, f64),
    ) -> Result<CoheringZero> {
        // the phase has to be resolved well below the 1e-10 target
        let fine = FieldModel::with_tolerance(self.rel_tol.min(1e-13));
        let phase = |r: f64| {
            fine.coherent_overlap(r, energy, mass)
                .map(|a| 4.0 * det.lambda * a)
        };
        let (lo, hi) = bracket;
        for (name, r) in [("bracket.lo", lo), ("bracket.hi", hi)] {
            if !(r > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: r,
                    reason: "radius bracket must be positive",
                });
            }
        }
        let f = |r: f64| phase(r).map(f64::sin).unwrap_or(f64::NAN);
        let radius = bisect_monotone(f, lo, hi, 1e-15 * hi.max(lo))?;
        let total_phase = phase(radius)?;
        let order = (total_phase / PI).round();
        let at_root = DetectorConfig { radius, ..*det };
        Ok(CoheringZero {
            radius,
            order: order as u32,
            phase_residue: (total_phase - order * PI).abs(),
            undamped_cohering_power: total_phase.sin().abs(),
            cohering_power: fine.coherent_cohering_power(&at_root, mass, energy, true)?,
        })
    }

    /// Recovers the field mass from a measured cohering power.
    ///
    /// The curve `m ↦ C(m)` is sampled on [`MONOTONE_SAMPLES`] points of the
    /// bracket first; a non-monotone curve is refused.
    pub fn infer_mass(
        &self,
        target: f64,
        det: &DetectorConfig,
        energy: f64,
        bracket: (f64, f64),
    ) -> Result<MassInference> {
        let (lo, hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
        if !(lo > 0.0) {
            return Err(Error::InvalidParameter {
                name: "bracket.lo",
                value: lo,
                reason: "mass bracket must be positive",
            });
        }
        let curve = |m: f64| self.coherent_cohering_power(det, m, energy, true);

        let samples = (0..MONOTONE_SAMPLES)
            .map(|i| {
                let m = lo + (hi - lo) * i as f64 / (MONOTONE_SAMPLES - 1) as f64;
                curve(m)
            })
            .collect::<Result<Vec<f64>>>()?;
        if !strictly_monotone(&samples) {
            return Err(Error::NotMonotone { lo, hi });
        }

        let (c_lo, c_hi) = (samples[0], samples[MONOTONE_SAMPLES - 1]);
        let (min, max) = (c_lo.min(c_hi), c_lo.max(c_hi));
        if !(target >= min && target <= max) {
            return Err(Error::TargetOutOfRange { target, min, max });
        }
        let f = |m: f64| curve(m).map(|c| c - target).unwrap_or(f64::NAN);
        let mass = bisect_monotone(f, lo, hi, 1e-14 * hi)?;
        let residual = (curve(mass)? - target).abs();
        Ok(MassInference {
            mass,
            residual,
            monotone_check: true,
        })
    }
}

/// Number of samples used for the monotonicity precheck in mass inference.
pub const MONOTONE_SAMPLES: usize = 50;

pub fn strictly_monotone(values: &[f64]) -> bool {
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    increasing || decreasing
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub energy_over_mass: f64,
    pub radius_over_compton: f64,
    pub lambda_over_compton: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub point: SurfacePoint,
    pub value: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoheringZero {
    pub radius: f64,
    /// `n` in `4λ Re⟨â⟩ = nπ`.
    pub order: u32,
    pub phase_residue: f64,
    pub undamped_cohering_power: f64,
    pub cohering_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassInference {
    pub mass: f64,
    pub residual: f64,
    pub monotone_check: bool,
}
