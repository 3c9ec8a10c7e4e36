//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! Every integrand in this crate is a smooth function on `(0, ∞)` multiplied by
//! an explicit Gaussian factor, so the semi-infinite integrals are truncated
//! where that envelope has fallen below [`ENVELOPE_CUTOFF`] of its peak and
//! the remaining finite interval is handled by bisection on the interval with
//! the largest error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Relative height of the Gaussian envelope at the truncation point.
pub const ENVELOPE_CUTOFF: f64 = 1e-18;

const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Single 21-point Kronrod panel. The error estimate is the raw Gauss-Kronrod
/// difference, floored at the rounding level of the panel.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();

    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    let round_off = 50.0 * f64::EPSILON * abs_sum * half.abs();
    Panel {
        a,
        b,
        value,
        error: raw.max(round_off),
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Returns [`Error::QuadratureNotConverged`] with the best available estimate
/// when the subdivision budget is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_panels(&f, &[a, b], rel_tol)
}

fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .map(|w| kronrod21(f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * heap.len();

    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let result = QuadratureResult {
            value,
            abs_error_estimate: error,
            evaluations,
        };
        if !value.is_finite() {
            return Err(Error::QuadratureNotConverged { best: result });
        }
        if error <= rel_tol * value.abs() || error == 0.0 {
            return Ok(result);
        }
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(Error::QuadratureNotConverged { best: result });
        }

        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            heap.push(worst);
            let stuck = heap.iter().filter(|p| p.error > 0.0).count();
            if stuck == heap.len() {
                return Err(Error::QuadratureNotConverged { best: result });
            }
            return Ok(result);
        }
        heap.push(kronrod21(f, worst.a, mid));
        heap.push(kronrod21(f, mid, worst.b));
        evaluations += 42;
    }
}

/// Distance at which `exp(-(k / scale)^2)` drops to [`ENVELOPE_CUTOFF`].
pub fn envelope_cutoff(scale: f64) -> f64 {
    scale * (-ENVELOPE_CUTOFF.ln()).sqrt()
}

/// Integrates `f` over `(0, ∞)`.
///
/// `envelope_scale` is the width `s` of a Gaussian factor `exp(-(k/s)^2)` that
/// bounds the decay of `f` up to polynomial factors. The integral is truncated
/// where the envelope reaches [`ENVELOPE_CUTOFF`]; if the integrand is still
/// significant there the cutoff is pushed outward.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    envelope_scale: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(envelope_scale > 0.0 && envelope_scale.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "envelope_scale",
            value: envelope_scale,
            reason: "must be positive and finite",
        });
    }
    let mut upper = envelope_cutoff(envelope_scale);
    // Seed a few panels so that a peak well inside the interval is resolved
    // from the first pass.
    let breaks: Vec<f64> = (0..=8).map(|i| upper * i as f64 / 8.0).collect();
    let mut total = integrate_panels(&f, &breaks, rel_tol)?;

    for _ in 0..32 {
        let tail_height = f(upper).abs() * envelope_scale;
        if tail_height <= 1e-3 * rel_tol * total.value.abs() {
            break;
        }
        let next = upper * 1.5;
        let extra = integrate(&f, upper, next, rel_tol)?;
        total.value += extra.value;
        total.abs_error_estimate += extra.abs_error_estimate;
        total.evaluations += extra.evaluations;
        upper = next;
    }
    Ok(total)
}
