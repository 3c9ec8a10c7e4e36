//! Acceptance suite. Runs every criterion at its pinned tolerance and prints
//! one PASS/FAIL line each; the process exits nonzero if any line fails.
//!
//! Run with `cargo test -p udw-coherence --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udw_coherence::field::{compton_wavelength, strictly_monotone, DetectorConfig, FieldModel};
use udw_coherence::groups::{ParameterSet, E_OVER_M, LAMBDA_OVER_COMPTON, R_OVER_COMPTON};
use udw_coherence::oracle::{
    brute_force_powers, haar_qubit, ConvergedOracle, ModeState, DEFAULT_SEED,
};
use udw_coherence::quantum::{
    apply_channel, l1_coherence, remaining_coherence, ChannelKernel, MaxCoherentQubit,
};
use udw_coherence::sweep::{run_sweep, Axis, Format, Quantity, SweepSpec, SweepTable};

struct Outcome {
    id: &'static str,
    name: &'static str,
    detail: String,
    passed: bool,
}

struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    /// Runs `body`, which returns `(passed, detail)`, and checks the wall-clock budget.
    fn criterion(
        &mut self,
        id: &'static str,
        name: &'static str,
        budget: Duration,
        body: impl FnOnce() -> (bool, String),
    ) {
        let start = Instant::now();
        let (ok, detail) = body();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let outcome = Outcome {
            id,
            name,
            detail: format!(
                "{detail}; {:.2}s of {}s budget",
                elapsed.as_secs_f64(),
                budget.as_secs()
            ),
            passed: ok && in_budget,
        };
        println!(
            "{} [{}] {}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.id,
            outcome.name,
            outcome.detail
        );
        self.outcomes.push(outcome);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn random_kernel(rng: &mut ChaCha8Rng) -> ChannelKernel {
    let modulus = rng.random::<f64>().sqrt();
    let arg = rng.random_range(0.0..2.0 * PI);
    ChannelKernel::new(
        Complex64::from_polar(modulus, arg),
        rng.random_range(-PI..PI),
    )
    .unwrap()
}

fn channel_exactness() -> (bool, String) {
    const TOL: f64 = 1e-9;
    let oracle = ConvergedOracle::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = haar_qubit(&mut rng).mix(&haar_qubit(&mut rng), rng.random());
        let alpha =
            Complex64::from_polar(rng.random_range(0.0..=2.0), rng.random_range(0.0..2.0 * PI));
        let s: f64 = rng.random_range(0.0..=1.0);
        let phase = rng.random_range(0.0..2.0 * PI);
        let state = ModeState::CoherentVec { alpha };
        let z = match oracle.displacement_expectation(&state, s) {
            Ok(z) => z,
            Err(e) => return (false, e.to_string()),
        };
        let joint = match oracle.joint_evolution(&rho, &state, s / 2.0, phase) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let k = ChannelKernel::new(z, phase).unwrap();
        worst = worst.max(joint.max_abs_diff(&apply_channel(&k, &rho)));
    }
    (
        worst <= TOL,
        format!("max entry deviation {worst:.3e} over 100 trials (tol {TOL:e})"),
    )
}

fn bch_identities() -> (bool, String) {
    const TOL: f64 = 1e-8;
    let oracle = ConvergedOracle::new(128);
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let s = 0.2 * (i + 1) as f64;
        for j in 0..5 {
            let alpha = Complex64::from_polar(0.5 * j as f64, 1.1 * j as f64);
            let expected = Complex64::from_polar((-s * s / 2.0).exp(), 2.0 * s * alpha.re);
            match oracle.displacement_expectation(&ModeState::CoherentVec { alpha }, s) {
                Ok(got) => worst = worst.max((got - expected).norm()),
                Err(e) => return (false, e.to_string()),
            }
            let nbar = 0.5 * j as f64;
            let expected = (-s * s * (2.0 * nbar + 1.0) / 2.0).exp();
            match oracle.displacement_expectation(&ModeState::ThermalDiag { nbar }, s) {
                Ok(got) => worst = worst.max((got - expected).norm()),
                Err(e) => return (false, e.to_string()),
            }
        }
    }
    (
        worst <= TOL,
        format!("max deviation {worst:.3e} on 5x5 coherent and thermal grids (tol {TOL:e})"),
    )
}

fn thermal_moments() -> (bool, String) {
    const TOL: f64 = 1e-8;
    let oracle = ConvergedOracle::new(128);
    let mut worst: f64 = 0.0;
    for nbar in [0.3f64, 0.7, 1.5] {
        let mut factorial = 1.0;
        for order in 1..=4u32 {
            factorial *= order as f64;
            match oracle.thermal_moment(nbar, order) {
                Ok(v) => worst = worst.max(rel(v, factorial * nbar.powi(order as i32))),
                Err(e) => return (false, e.to_string()),
            }
        }
    }
    (
        worst <= TOL,
        format!("max relative deviation {worst:.3e} (tol {TOL:e})"),
    )
}

fn dual_path_integrals() -> (bool, String) {
    const TOL: f64 = 1e-6;
    const ANCHOR_TOL: f64 = 1e-10;
    let model = FieldModel::default();
    let mut worst: f64 = 0.0;
    for m in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let lc = compton_wavelength(m);
        for r_over in [0.05, 0.1, 0.3, 0.6, 1.0] {
            let r = r_over * lc;
            let pairs = [
                (
                    model.mode_commutator(r, m),
                    model.mode_commutator_tricomi(r, m),
                ),
                (
                    model.coherent_overlap(r, 1.0, m),
                    model.coherent_overlap_tricomi(r, 1.0, m),
                ),
            ];
            for (a, b) in pairs {
                match (a, b) {
                    (Ok(a), Ok(b)) => worst = worst.max(rel(a, b)),
                    (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
                }
            }
        }
    }
    let mut anchor: f64 = 0.0;
    for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
        anchor = anchor.max(rel(
            model.mode_commutator(r, 0.0).unwrap(),
            1.0 / (PI.powi(3) * r * r),
        ));
    }
    (
        worst <= TOL && anchor <= ANCHOR_TOL,
        format!("quadrature vs closed form {worst:.3e} (tol {TOL:e}), massless anchor {anchor:.3e} (tol {ANCHOR_TOL:e})"),
    )
}

fn generalized_cohering_power() -> (bool, String) {
    const TOL: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0xA5);
    let mut excess: f64 = 0.0;
    let mut basis_gap: f64 = 0.0;
    for i in 0..20 {
        let k = random_kernel(&mut rng);
        let p = brute_force_powers(&k, 10_000, DEFAULT_SEED + i);
        let analytic = k.z().im.abs();
        excess = excess.max(p.cohering - analytic);
        basis_gap = basis_gap.max((p.basis_cohering - analytic).abs());
    }
    (
        excess <= TOL && basis_gap <= TOL,
        format!(
            "max excess over |Im z| {excess:.3e}, basis-state gap {basis_gap:.3e} (tol {TOL:e})"
        ),
    )
}

fn frozen_coherence() -> (bool, String) {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0xF0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = random_kernel(&mut rng);
        worst = worst.max((remaining_coherence(&k, k.phase()) - 1.0).abs());
        let direct = l1_coherence(&apply_channel(
            &k,
            &MaxCoherentQubit::new(k.phase()).state(),
        ));
        worst = worst.max((direct - 1.0).abs());
    }
    (
        worst <= TOL,
        format!("max deviation from 1: {worst:.3e} over 100 kernels (tol {TOL:e})"),
    )
}

fn monotonicity() -> (bool, String) {
    let model = FieldModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x77);
    let mut violations = Vec::new();
    for _ in 0..20 {
        let r = rng.random_range(0.2..3.0);
        let m = rng.random_range(0.1..3.0);
        let b = rng.random_range(0.3..5.0);
        let i = |r: f64, m: f64, b: f64| model.thermal_integral(r, m, b).unwrap();
        let h = 1e-3;
        let d_r = i(r * (1.0 + h), m, b) - i(r * (1.0 - h), m, b);
        let d_m = i(r, m * (1.0 + h), b) - i(r, m * (1.0 - h), b);
        let d_b = i(r, m, b * (1.0 + h)) - i(r, m, b * (1.0 - h));
        for (name, d) in [("dI/dR", d_r), ("dI/dm", d_m), ("dI/dbeta", d_b)] {
            if d.is_nan() || d >= 0.0 {
                violations.push(format!("{name}>=0 at R={r:.3},m={m:.3},beta={b:.3}"));
            }
        }
    }
    let det_for = |lambda: f64| DetectorConfig::new(1.0, 1.0, 0.0, lambda).unwrap();
    for lambda in [0.2, 1.0] {
        let det = det_for(lambda);
        let curve: Vec<f64> = (0..50)
            .map(|i| {
                let m = 0.1 + 9.9 * i as f64 / 49.0;
                model.coherent_cohering_power(&det, m, 1.0, true).unwrap()
            })
            .collect();
        if !strictly_monotone(&curve) {
            violations.push(format!(
                "cohering power not monotone in m at lambda*Omega={lambda}"
            ));
        }
    }
    (
        violations.is_empty(),
        format!(
            "{} violations {:?} (60 thermal signs, 2 mass curves)",
            violations.len(),
            violations
        ),
    )
}

fn cohering_zero() -> (bool, String) {
    const POWER_TOL: f64 = 1e-10;
    const RESIDUE_TOL: f64 = 1e-8;
    let model = FieldModel::default();
    let m = 1.0;
    let lc = compton_wavelength(m);
    let det = DetectorConfig::new(1.0, lc, 0.0, lc).unwrap();
    let zero = match model.find_cohering_zero(&det, m, m, (0.1 * lc, 2.0 * lc)) {
        Ok(z) => z,
        Err(e) => return (false, e.to_string()),
    };
    // the undamped curve has to oscillate through zero, not decay onto it
    let before = model
        .coherent_cohering_power(
            &DetectorConfig {
                radius: 0.9 * zero.radius,
                ..det
            },
            m,
            m,
            false,
        )
        .unwrap();
    let after = model
        .coherent_cohering_power(
            &DetectorConfig {
                radius: 1.1 * zero.radius,
                ..det
            },
            m,
            m,
            false,
        )
        .unwrap();
    let oscillating = zero.order >= 1 && before > 1e-3 && after > 1e-3;
    (
        zero.cohering_power < POWER_TOL && zero.phase_residue < RESIDUE_TOL && oscillating,
        format!(
            "R*/lambda_C = {:.6}, n = {}, C = {:.3e} (tol {POWER_TOL:e}), residue {:.3e} (tol {RESIDUE_TOL:e}), undamped C at 0.9R*/1.1R* = {before:.3}/{after:.3}",
            zero.radius / lc,
            zero.order,
            zero.cohering_power,
            zero.phase_residue
        ),
    )
}

const SURFACE_STEPS: usize = 50;
const SURFACE_LAMBDAS: [f64; 3] = [0.2, 1.0, 5.0];

fn surface_spec(quantity: Quantity, lambda_over_compton: f64) -> SweepSpec {
    SweepSpec {
        quantity,
        axes: vec![
            Axis::linear(E_OVER_M, 0.1, 10.0, SURFACE_STEPS),
            Axis::linear(R_OVER_COMPTON, 0.01, 5.0, SURFACE_STEPS),
        ],
        fixed: ParameterSet::new().with(LAMBDA_OVER_COMPTON, lambda_over_compton),
        output: None,
        format: Format::Csv,
    }
}

struct Surfaces {
    cohering: Vec<SweepTable>,
    kernel: Vec<SweepTable>,
}

fn surfaces() -> Surfaces {
    let model = FieldModel::default();
    let run = |q, l| run_sweep(&surface_spec(q, l), &model, 0).unwrap();
    Surfaces {
        cohering: SURFACE_LAMBDAS
            .iter()
            .map(|&l| run(Quantity::CoheringCoherent, l))
            .collect(),
        kernel: SURFACE_LAMBDAS
            .iter()
            .map(|&l| run(Quantity::Kernel, l))
            .collect(),
    }
}

fn moduli(table: &SweepTable) -> Vec<f64> {
    table
        .column(0)
        .iter()
        .zip(table.column(1))
        .map(|(re, im)| re.hypot(im))
        .collect()
}

fn surface_damping(s: &Surfaces) -> (bool, String) {
    let failures: usize = s
        .cohering
        .iter()
        .chain(&s.kernel)
        .map(SweepTable::failures)
        .sum();
    let env: Vec<Vec<f64>> = s.kernel.iter().map(moduli).collect();
    let ordered = (0..env[0].len()).all(|i| env[2][i] <= env[1][i] && env[1][i] <= env[0][i]);
    // cohering power never exceeds the damping envelope at the same point
    let bounded = s
        .cohering
        .iter()
        .zip(&env)
        .all(|(c, e)| c.column(0).iter().zip(e).all(|(c, e)| *c <= *e + 1e-15));
    let maxima: Vec<f64> = s
        .cohering
        .iter()
        .map(|t| t.column(0).iter().cloned().fold(0.0, f64::max))
        .collect();
    (
        failures == 0 && ordered && bounded,
        format!(
            "envelope ordered pointwise: {ordered}, C <= envelope: {bounded}, failed points {failures}, surface maxima {:.4}/{:.4}/{:.4}",
            maxima[0], maxima[1], maxima[2]
        ),
    )
}

fn surface_decay(s: &Surfaces) -> (bool, String) {
    const FRACTION: f64 = 0.10;
    let mut passed = true;
    let mut parts = Vec::new();
    for (table, lambda) in s.cohering.iter().zip(SURFACE_LAMBDAS) {
        let values = table.column(0);
        let global = values.iter().cloned().fold(0.0, f64::max);
        // row-major with R/lambda_C fastest: last block is E/m = max, last of each block is R/lambda_C = max
        let energy_edge = values[(SURFACE_STEPS - 1) * SURFACE_STEPS..]
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        let radius_edge = values
            .iter()
            .skip(SURFACE_STEPS - 1)
            .step_by(SURFACE_STEPS)
            .cloned()
            .fold(0.0, f64::max);
        let ok = energy_edge < FRACTION * global && radius_edge < FRACTION * global;
        passed &= ok;
        parts.push(format!(
            "lambda/lambda_C={lambda}: max {global:.4}, E/m=10 row {:.1}%, R/lambda_C=5 column {:.1}%",
            100.0 * energy_edge / global,
            100.0 * radius_edge / global
        ));
    }
    (
        passed,
        format!("{} (limit {:.0}%)", parts.join("; "), FRACTION * 100.0),
    )
}

fn mass_round_trip() -> (bool, String) {
    const TOL: f64 = 1e-6;
    let model = FieldModel::default();
    let det = DetectorConfig::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for m_true in [0.5, 1.0, 2.0] {
        let target = model
            .coherent_cohering_power(&det, m_true, 1.0, true)
            .unwrap();
        match model.infer_mass(target, &det, 1.0, (0.1, 10.0)) {
            Ok(found) => worst = worst.max(rel(found.mass, m_true)),
            Err(e) => return (false, format!("m={m_true}: {e}")),
        }
    }
    (
        worst < TOL,
        format!("max relative mass error {worst:.3e} (tol {TOL:e})"),
    )
}

fn main() -> ExitCode {
    let mut suite = Suite {
        outcomes: Vec::new(),
    };
    suite.criterion("1", "channel exactness", secs(30), channel_exactness);
    suite.criterion("2", "displacement identities", secs(20), bch_identities);
    suite.criterion("3", "thermal moment identity", secs(10), thermal_moments);
    suite.criterion("4", "dual-path integrals", secs(10), dual_path_integrals);
    suite.criterion(
        "5",
        "generalized cohering power",
        secs(30),
        generalized_cohering_power,
    );
    suite.criterion("6", "frozen coherence", secs(1), frozen_coherence);
    suite.criterion("7", "monotonicity", secs(60), monotonicity);
    suite.criterion("8", "cohering zero crossing", secs(10), cohering_zero);

    let start = Instant::now();
    let s = surfaces();
    let sweep_time = start.elapsed();
    println!(
        "     [9] surface sweeps: 6 x {}x{} points in {:.2}s",
        SURFACE_STEPS,
        SURFACE_STEPS,
        sweep_time.as_secs_f64()
    );
    let budget = secs(300).saturating_sub(sweep_time);
    suite.criterion("9i", "surface damping with coupling", budget, || {
        surface_damping(&s)
    });
    suite.criterion(
        "9ii",
        "surface decay at large E/m and R/lambda_C",
        budget,
        || surface_decay(&s),
    );

    suite.criterion("10", "mass inference round trip", secs(30), mass_round_trip);

    let failed: Vec<&str> = suite
        .outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    println!(
        "acceptance: {} criteria, {} failed {:?}",
        suite.outcomes.len(),
        failed.len(),
        failed
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
