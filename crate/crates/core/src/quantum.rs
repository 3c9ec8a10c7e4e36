//! Qubit states, the ℓ1 coherence measure and the detector channel.
//!
//! The detector lives in the `{|g⟩, |e⟩}` basis (index 0 is `|g⟩`). After an
//! instantaneous kick with the smeared field the joint unitary is
//! `P₋ ⊗ exp(iλφ) + P₊ ⊗ exp(-iλφ)`, where `P± = (I ± μ₀)/2` are the
//! eigenprojectors of the monopole operator. Tracing out the field leaves
//!
//! ```text
//! Φ(ρ) = (1 + Re z)/2 · ρ + (1 - Re z)/2 · μ₀ρμ₀ + i Im z / 2 · (ρμ₀ - μ₀ρ)
//! ```
//!
//! with `z = ⟨exp(2iλφ)⟩`, so the pair `(z, Ωt₀)` carried by
//! [`ChannelKernel`] fixes the channel completely.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;

/// Absolute tolerance for matrix identities and state validation.
pub const STATE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Density matrix of the two-level detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState(Mat2);

impl QubitState {
    /// Validates Hermiticity, unit trace and positivity to [`STATE_TOL`].
    pub fn new(rho: Mat2) -> Result<Self> {
        let herm = (rho - rho.adjoint())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = rho.trace();
        if (trace - c(1.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        let det = rho.determinant().re;
        if det < -STATE_TOL || rho[(0, 0)].re < -STATE_TOL || rho[(1, 1)].re < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (det {det:e})"
            )));
        }
        Ok(Self(rho))
    }

    pub fn from_elements(rho_gg: f64, rho_ge: Complex64, rho_ee: f64) -> Result<Self> {
        Self::new(Mat2::new(c(rho_gg), rho_ge, rho_ge.conj(), c(rho_ee)))
    }

    pub fn ground() -> Self {
        Self(Mat2::new(c(1.0), c(0.0), c(0.0), c(0.0)))
    }

    pub fn excited() -> Self {
        Self(Mat2::new(c(0.0), c(0.0), c(0.0), c(1.0)))
    }

    /// `|ψ⟩⟨ψ|` for `|ψ⟩ = amp_g|g⟩ + amp_e|e⟩`, normalised.
    pub fn pure(amp_g: Complex64, amp_e: Complex64) -> Result<Self> {
        let norm = (amp_g.norm_sqr() + amp_e.norm_sqr()).sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let (g, e) = (amp_g / norm, amp_e / norm);
        Ok(Self(Mat2::new(
            g * g.conj(),
            g * e.conj(),
            e * g.conj(),
            e * e.conj(),
        )))
    }

    /// State with Bloch vector `(x, y, z)`, `|r| ≤ 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if x * x + y * y + z * z > 1.0 + STATE_TOL {
            return Err(Error::InvalidState("Bloch vector longer than 1".into()));
        }
        Ok(Self(Mat2::new(
            c(0.5 * (1.0 + z)),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            c(0.5 * (1.0 - z)),
        )))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn rho_gg(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn rho_ge(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn rho_eg(&self) -> Complex64 {
        self.0[(1, 0)]
    }

    pub fn rho_ee(&self) -> f64 {
        self.0[(1, 1)].re
    }

    /// Mixture `p·self + (1-p)·other`.
    pub fn mix(&self, other: &QubitState, p: f64) -> QubitState {
        QubitState(self.0 * c(p) + other.0 * c(1.0 - p))
    }

    /// Largest entrywise deviation from another state.
    pub fn max_abs_diff(&self, other: &QubitState) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}

/// Maximally coherent qubit `(|g⟩ + e^{iθ}|e⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxCoherentQubit {
    pub theta: f64,
}

impl MaxCoherentQubit {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    pub fn state(&self) -> QubitState {
        let phase = Complex64::from_polar(1.0, self.theta);
        QubitState(Mat2::new(c(0.5), 0.5 * phase.conj(), 0.5 * phase, c(0.5)))
    }
}

impl From<MaxCoherentQubit> for QubitState {
    fn from(m: MaxCoherentQubit) -> Self {
        m.state()
    }
}

/// ℓ1 norm of coherence, `2|ρ_ge|` for a qubit.
pub fn l1_coherence(rho: &QubitState) -> f64 {
    rho.0[(0, 1)].norm() + rho.0[(1, 0)].norm()
}

pub fn dephase(rho: &QubitState) -> QubitState {
    QubitState(Mat2::new(rho.0[(0, 0)], c(0.0), c(0.0), rho.0[(1, 1)]))
}

pub fn is_incoherent(rho: &QubitState) -> bool {
    l1_coherence(rho) <= STATE_TOL
}

/// Monopole operator at the kick, `e^{iφ}|e⟩⟨g| + e^{-iφ}|g⟩⟨e|` with `φ = Ωt₀`.
pub fn monopole_matrix(phase: f64) -> Mat2 {
    let up = Complex64::from_polar(1.0, phase);
    // row = bra index: (1,0) is |e⟩⟨g|
    Mat2::new(c(0.0), up.conj(), up, c(0.0))
}

/// The complex number `z = ⟨exp(2iλφ)⟩` together with the detector phase `Ωt₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelKernel {
    z: Complex64,
    phase: f64,
}

impl ChannelKernel {
    /// Accepts `|z| ≤ 1 + 1e-12`; a modulus in the round-off band above 1 is
    /// projected back onto the unit circle.
    pub fn new(z: Complex64, phase: f64) -> Result<Self> {
        let modulus = z.norm();
        if !modulus.is_finite() || modulus > 1.0 + STATE_TOL {
            return Err(Error::NonPhysicalKernel { modulus });
        }
        let z = if modulus > 1.0 { z / modulus } else { z };
        Ok(Self { z, phase })
    }

    pub fn identity() -> Self {
        Self {
            z: c(1.0),
            phase: 0.0,
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn with_phase(self, phase: f64) -> Self {
        Self { phase, ..self }
    }

    /// The channel as a linear map on arbitrary 2×2 operators.
    pub fn map(&self, rho: &Mat2) -> Mat2 {
        let mu = monopole_matrix(self.phase);
        let re = self.z.re;
        let im = self.z.im;
        rho * c(0.5 * (1.0 + re))
            + mu * rho * mu * c(0.5 * (1.0 - re))
            + (rho * mu - mu * rho) * (I * (0.5 * im))
    }

    pub fn apply(&self, rho: &QubitState) -> QubitState {
        let out = self.map(&rho.0);
        // remove round-off asymmetry so the output is exactly Hermitian
        QubitState((out + out.adjoint()) * c(0.5))
    }
}

pub fn apply_channel(k: &ChannelKernel, rho: &QubitState) -> QubitState {
    k.apply(rho)
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` (unnormalised, trace 2).
pub fn choi_matrix(k: &ChannelKernel) -> Mat4 {
    let mut choi = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = Mat2::zeros();
            unit[(i, j)] = c(1.0);
            let image = k.map(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * i + a, 2 * j + b)] = image[(a, b)];
                }
            }
        }
    }
    choi
}

/// Eigenvalues of the Choi matrix in ascending order.
pub fn choi_eigenvalues(k: &ChannelKernel) -> [f64; 4] {
    let choi = choi_matrix(k);
    let herm = (choi + choi.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut values = [0.0; 4];
    for (slot, v) in values.iter_mut().zip(eig.eigenvalues.iter()) {
        *slot = *v;
    }
    values.sort_by(f64::total_cmp);
    values
}

/// ℓ1 coherence left in `ψ₂(θ)` after the channel.
///
/// With `δ = θ - Ωt₀` the off-diagonal element becomes
/// `e^{-iΩt₀}(cos δ - i Re z sin δ)/2`, so the result is
/// `sqrt(cos²δ + (Re z)² sin²δ)`. Both eigenstates of `μ₀` (`δ = 0, π`) are
/// left untouched and the minimum `|Re z|` sits at `δ = π/2`.
pub fn remaining_coherence(k: &ChannelKernel, theta: f64) -> f64 {
    let delta = theta - k.phase;
    let (s, co) = delta.sin_cos();
    (co * co + k.z.re * k.z.re * s * s).sqrt()
}

/// ℓ1 cohering power, `|Im z|`.
pub fn cohering_power(k: &ChannelKernel) -> f64 {
    k.z.im.abs()
}

/// ℓ1 decohering power, `1 - |Re z|`.
pub fn decohering_power(k: &ChannelKernel) -> f64 {
    1.0 - k.z.re.abs()
}
