//! Self-verification suite run by `udw-coherence verify`.
//!
//! Each check measures a deviation and compares it against a pinned
//! tolerance. `tolerance_scale` multiplies every tolerance; it exists so the
//! failure path of the suite itself can be exercised.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{compton_wavelength, strictly_monotone, DetectorConfig, FieldModel};
use crate::oracle::{brute_force_powers, haar_qubit, ConvergedOracle, FockWorkspace, ModeState};
use crate::quantum::{
    apply_channel, choi_eigenvalues, cohering_power, l1_coherence, remaining_coherence,
    ChannelKernel, MaxCoherentQubit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<32} deviation {:>10.3e}  tolerance {:>9.1e}  ({:.2}s)\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance,
                c.seconds
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

struct Runner {
    scale: f64,
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, name: &str, tolerance: f64, body: impl FnOnce() -> Result<f64>) {
        let start = Instant::now();
        let deviation = body().unwrap_or(f64::INFINITY);
        let passed = deviation.is_finite() && deviation <= tolerance * self.scale;
        self.checks.push(Check {
            name: name.to_string(),
            deviation,
            tolerance: tolerance * self.scale,
            passed,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

fn random_kernel<R: Rng>(rng: &mut R) -> ChannelKernel {
    let modulus = rng.random::<f64>().sqrt();
    let arg = rng.random_range(0.0..2.0 * PI);
    let phase = rng.random_range(-PI..PI);
    ChannelKernel::new(Complex64::from_polar(modulus, arg), phase).expect("|z| <= 1")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn run_verification(level: Level, seed: u64, tolerance_scale: f64) -> VerificationReport {
    let full = level == Level::Full;
    let model = FieldModel::default();
    let mut r = Runner {
        scale: tolerance_scale,
        checks: Vec::new(),
    };

    r.run("channel-exactness", 1e-9, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trials = if full { 100 } else { 10 };
        let oracle = full.then(|| ConvergedOracle::new(128));
        let fast_ws = FockWorkspace::new(64);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let rho = haar_qubit(&mut rng).mix(&haar_qubit(&mut rng), rng.random());
            let alpha =
                Complex64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0 * PI));
            let s: f64 = rng.random_range(0.0..1.0);
            let phase = rng.random_range(0.0..2.0 * PI);
            let state = ModeState::CoherentVec { alpha };
            let (z, joint) = match &oracle {
                Some(o) => (
                    o.displacement_expectation(&state, s)?,
                    o.joint_evolution(&rho, &state, s / 2.0, phase)?,
                ),
                None => (
                    fast_ws.displacement_expectation(&state, s)?,
                    fast_ws.joint_evolution(&rho, &state, s / 2.0, phase)?,
                ),
            };
            let k = ChannelKernel::new(z, phase)?;
            worst = worst.max(joint.max_abs_diff(&apply_channel(&k, &rho)));
        }
        Ok(worst)
    });

    r.run("bch-identities", 1e-8, || {
        let oracle = ConvergedOracle::new(128);
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            let s = 0.2 * (i + 1) as f64;
            for j in 0..5 {
                let alpha = Complex64::from_polar(0.5 * j as f64, 0.3 + j as f64);
                let got = oracle.displacement_expectation(&ModeState::CoherentVec { alpha }, s)?;
                let expected = Complex64::from_polar((-s * s / 2.0).exp(), 2.0 * s * alpha.re);
                worst = worst.max((got - expected).norm());

                let nbar = 0.5 * j as f64;
                let got = oracle.displacement_expectation(&ModeState::ThermalDiag { nbar }, s)?;
                let expected = (-s * s * (2.0 * nbar + 1.0) / 2.0).exp();
                worst = worst.max((got - expected).norm());
            }
        }
        Ok(worst)
    });

    r.run("thermal-moment-identity", 1e-8, || {
        let oracle = ConvergedOracle::new(128);
        let mut worst: f64 = 0.0;
        for &nbar in &[0.3f64, 0.7, 1.5] {
            let mut factorial = 1.0;
            for order in 1..=4u32 {
                factorial *= order as f64;
                let expected = factorial * nbar.powi(order as i32);
                worst = worst.max(rel(oracle.thermal_moment(nbar, order)?, expected));
            }
        }
        Ok(worst)
    });

    r.run("dual-path-integrals", 1e-6, || {
        let mut worst: f64 = 0.0;
        for &m in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let lc = compton_wavelength(m);
            for &r_over in &[0.05, 0.1, 0.3, 0.6, 1.0] {
                let radius = r_over * lc;
                worst = worst.max(rel(
                    model.mode_commutator(radius, m)?,
                    model.mode_commutator_tricomi(radius, m)?,
                ));
                worst = worst.max(rel(
                    model.coherent_overlap(radius, 1.0, m)?,
                    model.coherent_overlap_tricomi(radius, 1.0, m)?,
                ));
            }
        }
        Ok(worst)
    });

    r.run("massless-commutator-anchor", 1e-10, || {
        let mut worst: f64 = 0.0;
        for &radius in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            worst = worst.max(rel(
                model.mode_commutator(radius, 0.0)?,
                1.0 / (PI.powi(3) * radius * radius),
            ));
        }
        Ok(worst)
    });

    r.run("zero-temperature-thermal-limit", 1e-8, || {
        let mut worst: f64 = 0.0;
        for &(radius, m) in &[(1.0, 0.0), (0.5, 1.0), (2.0, 0.3)] {
            worst = worst.max(rel(
                model.thermal_integral(radius, m, 1e4)?,
                2.0 * model.mode_commutator(radius, m)?,
            ));
        }
        Ok(worst)
    });

    r.run("generalized-cohering-power", 1e-6, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (kernels, samples) = if full { (20, 10_000) } else { (5, 2_000) };
        let mut worst: f64 = 0.0;
        for i in 0..kernels {
            let k = random_kernel(&mut rng);
            let p = brute_force_powers(&k, samples, seed.wrapping_add(i));
            worst = worst.max((p.cohering - cohering_power(&k)).max(0.0));
            worst = worst.max((p.basis_cohering - cohering_power(&k)).abs());
        }
        Ok(worst)
    });

    r.run("frozen-coherence", 1e-12, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf0f0);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let k = random_kernel(&mut rng);
            worst = worst.max((remaining_coherence(&k, k.phase()) - 1.0).abs());
            let psi = MaxCoherentQubit::new(k.phase()).state();
            worst = worst.max(apply_channel(&k, &psi).max_abs_diff(&psi));
        }
        Ok(worst)
    });

    r.run("remaining-coherence-consistency", 1e-12, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e7a);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let k = random_kernel(&mut rng);
            let theta = rng.random_range(0.0..2.0 * PI);
            let direct = l1_coherence(&apply_channel(&k, &MaxCoherentQubit::new(theta).state()));
            worst = worst.max((direct - remaining_coherence(&k, theta)).abs());
        }
        Ok(worst)
    });

    r.run("choi-positivity", 1e-12, || {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let modulus = i as f64 / 9.0;
                let z = Complex64::from_polar(modulus, 2.0 * PI * j as f64 / 10.0);
                let k = ChannelKernel::new(z, 0.37 * j as f64)?;
                worst = worst.max(-choi_eigenvalues(&k)[0]);
            }
        }
        Ok(worst.max(0.0))
    });

    r.run("thermal-monotonicity", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3333);
        let points = if full { 20 } else { 5 };
        let mut violations = 0;
        for _ in 0..points {
            let radius = rng.random_range(0.3..3.0);
            let m = rng.random_range(0.1..3.0);
            let beta = rng.random_range(0.3..5.0);
            let h = 1e-3;
            let d_r = model.thermal_integral(radius + h, m, beta)?
                - model.thermal_integral(radius - h, m, beta)?;
            let d_m = model.thermal_integral(radius, m + h, beta)?
                - model.thermal_integral(radius, m - h, beta)?;
            let d_b = model.thermal_integral(radius, m, beta + h)?
                - model.thermal_integral(radius, m, beta - h)?;
            violations += [d_r, d_m, d_b].iter().filter(|d| !(**d < 0.0)).count();
        }
        Ok(violations as f64)
    });

    r.run("mass-monotonicity", 0.0, || {
        let mut violations = 0;
        for &lambda in &[0.2, 1.0] {
            let det = DetectorConfig::new(1.0, 1.0, 0.0, lambda)?;
            let curve = (0..50)
                .map(|i| {
                    model.coherent_cohering_power(&det, 0.1 + 9.9 * i as f64 / 49.0, 1.0, true)
                })
                .collect::<Result<Vec<f64>>>()?;
            if !strictly_monotone(&curve) {
                violations += 1;
            }
        }
        Ok(violations as f64)
    });

    r.run("cohering-zero", 1e-10, || {
        let m = 1.0;
        let lc = compton_wavelength(m);
        let det = DetectorConfig::new(1.0, lc, 0.0, lc)?;
        let zero = model.find_cohering_zero(&det, m, m, (0.1 * lc, 2.0 * lc))?;
        Ok(zero.cohering_power.max(zero.undamped_cohering_power))
    });

    r.run("cohering-zero-phase-residue", 1e-8, || {
        let m = 1.0;
        let lc = compton_wavelength(m);
        let det = DetectorConfig::new(1.0, lc, 0.0, lc)?;
        Ok(model
            .find_cohering_zero(&det, m, m, (0.1 * lc, 2.0 * lc))?
            .phase_residue)
    });

    r.run("mass-round-trip", 1e-6, || {
        let det = DetectorConfig::new(1.0, 1.0, 0.0, 1.0)?;
        let mut worst: f64 = 0.0;
        for &m in &[0.5, 1.0, 2.0] {
            let target = model.coherent_cohering_power(&det, m, 1.0, true)?;
            let found = model.infer_mass(target, &det, 1.0, (0.1, 10.0))?;
            worst = worst.max(rel(found.mass, m));
        }
        Ok(worst)
    });

    VerificationReport {
        level,
        checks: r.checks,
    }
}
