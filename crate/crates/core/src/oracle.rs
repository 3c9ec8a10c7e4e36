//! Brute-force checks in a truncated single-mode Fock space.
//!
//! The smeared field at the kick is one effective bosonic mode `b`; with
//! `φ = b + b†` the oracle evaluates `⟨exp(isφ)⟩`, normally ordered thermal
//! moments and the full detector–mode unitary by explicit matrices, so the
//! closed forms used elsewhere in the crate can be compared against plain
//! linear algebra. Every value can be recomputed at twice the dimension to
//! confirm the truncation has converged.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    l1_coherence, monopole_matrix, ChannelKernel, Mat2, MaxCoherentQubit, QubitState,
};

/// Largest probability mass allowed outside the truncated space.
pub const TRUNCATION_DEFICIT: f64 = 1e-10;

/// Relative movement tolerated when the dimension is doubled.
pub const DOUBLING_TOL: f64 = 1e-10;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Single-mode state of the effective field mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeState {
    CoherentVec { alpha: Complex64 },
    ThermalDiag { nbar: f64 },
}

/// Ladder and quadrature matrices at a fixed truncation.
#[derive(Debug, Clone)]
pub struct FockWorkspace {
    dim: usize,
    annihilate: DMatrix<Complex64>,
    create: DMatrix<Complex64>,
    position_quadrature: DMatrix<Complex64>,
    quad_vectors: DMatrix<f64>,
    quad_values: DVector<f64>,
}

impl FockWorkspace {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "Fock dimension must be at least 2");
        let mut real_b = DMatrix::<f64>::zeros(dim, dim);
        for n in 1..dim {
            real_b[(n - 1, n)] = (n as f64).sqrt();
        }
        let real_x = &real_b + real_b.transpose();
        let eig = SymmetricEigen::new(real_x.clone());
        let annihilate = real_b.map(|x| Complex64::new(x, 0.0));
        Self {
            dim,
            create: annihilate.adjoint(),
            annihilate,
            position_quadrature: real_x.map(|x| Complex64::new(x, 0.0)),
            quad_vectors: eig.eigenvectors,
            quad_values: eig.eigenvalues,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn annihilate(&self) -> &DMatrix<Complex64> {
        &self.annihilate
    }

    pub fn create(&self) -> &DMatrix<Complex64> {
        &self.create
    }

    pub fn position_quadrature(&self) -> &DMatrix<Complex64> {
        &self.position_quadrature
    }

    /// `exp(i s (b + b†))` from the eigendecomposition of the quadrature.
    pub fn exp_quadrature(&self, s: f64) -> DMatrix<Complex64> {
        let v = &self.quad_vectors;
        let cos = DMatrix::from_diagonal(&self.quad_values.map(|x| (s * x).cos()));
        let sin = DMatrix::from_diagonal(&self.quad_values.map(|x| (s * x).sin()));
        let re = v * cos * v.transpose();
        let im = v * sin * v.transpose();
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        })
    }

    /// The mode state as a weighted ensemble of normalised state vectors.
    pub fn ensemble(&self, state: &ModeState) -> Result<Vec<(f64, DVector<Complex64>)>> {
        match *state {
            ModeState::CoherentVec { alpha } => {
                let mut amp = DVector::<Complex64>::zeros(self.dim);
                let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
                for n in 0..self.dim {
                    if n > 0 {
                        term *= alpha / (n as f64).sqrt();
                    }
                    amp[n] = term;
                }
                let kept = amp.norm_squared();
                self.check_deficit(1.0 - kept)?;
                Ok(vec![(1.0, amp.unscale(kept.sqrt()))])
            }
            ModeState::ThermalDiag { nbar } => {
                if !(nbar >= 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "nbar",
                        value: nbar,
                        reason: "occupation must be non-negative",
                    });
                }
                let q = nbar / (1.0 + nbar);
                self.check_deficit(q.powi(self.dim as i32))?;
                let kept = 1.0 - q.powi(self.dim as i32);
                Ok((0..self.dim)
                    .map(|n| {
                        let p = q.powi(n as i32) / (1.0 + nbar) / kept;
                        (
                            p,
                            DVector::from_fn(self.dim, |i, _| {
                                Complex64::new(if i == n { 1.0 } else { 0.0 }, 0.0)
                            }),
                        )
                    })
                    .filter(|(p, _)| *p > 0.0)
                    .collect())
            }
        }
    }

    fn check_deficit(&self, deficit: f64) -> Result<()> {
        if deficit > TRUNCATION_DEFICIT {
            return Err(Error::TruncationNotConverged {
                dim: self.dim,
                deviation: deficit,
            });
        }
        Ok(())
    }

    /// `⟨exp(i s (b + b†))⟩` in the given mode state.
    pub fn displacement_expectation(&self, state: &ModeState, s: f64) -> Result<Complex64> {
        let ensemble = self.ensemble(state)?;
        let op = self.exp_quadrature(s);
        Ok(ensemble.iter().map(|(w, v)| *w * v.dotc(&(&op * v))).sum())
    }

    /// `⟨(b†)^m b^m⟩` in a thermal state, by explicit matrix powers.
    pub fn thermal_moment(&self, nbar: f64, order: u32) -> Result<f64> {
        let ensemble = self.ensemble(&ModeState::ThermalDiag { nbar })?;
        let mut lowered = DMatrix::<Complex64>::identity(self.dim, self.dim);
        for _ in 0..order {
            lowered = &self.annihilate * lowered;
        }
        let mut raised = DMatrix::<Complex64>::identity(self.dim, self.dim);
        for _ in 0..order {
            raised = &self.create * raised;
        }
        let moment = raised * lowered;
        Ok(ensemble
            .iter()
            .map(|(w, v)| *w * v.dotc(&(&moment * v)).re)
            .sum())
    }

    /// Joint unitary `P₋ ⊗ exp(iλφ) + P₊ ⊗ exp(-iλφ)` on `qubit ⊗ mode`,
    /// with `P± = (I ± μ₀)/2`. Index layout is `qubit * dim + n`.
    pub fn joint_unitary(&self, lambda_eff: f64, phase: f64) -> DMatrix<Complex64> {
        let mu = monopole_matrix(phase);
        let half = Complex64::new(0.5, 0.0);
        let p_plus = (Mat2::identity() + mu) * half;
        let p_minus = (Mat2::identity() - mu) * half;
        let forward = self.exp_quadrature(lambda_eff);
        let backward = self.exp_quadrature(-lambda_eff);
        let n = self.dim;
        let mut u = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        for a in 0..2 {
            for b in 0..2 {
                let mut block = u.view_mut((a * n, b * n), (n, n));
                block += &forward * p_minus[(a, b)];
                block += &backward * p_plus[(a, b)];
            }
        }
        u
    }

    /// Evolves `ρ ⊗ σ` with the joint unitary and traces out the mode.
    pub fn joint_evolution(
        &self,
        rho: &QubitState,
        state: &ModeState,
        lambda_eff: f64,
        phase: f64,
    ) -> Result<QubitState> {
        let mode = self.ensemble(state)?;
        let u = self.joint_unitary(lambda_eff, phase);
        let n = self.dim;

        let eig = SymmetricEigen::new(*rho.matrix());
        let mut out = Mat2::zeros();
        for (i, &p) in eig.eigenvalues.iter().enumerate() {
            if p.abs() < 1e-15 {
                continue;
            }
            let qubit = eig.eigenvectors.column(i);
            for (w, psi) in &mode {
                let joint = DVector::from_fn(2 * n, |idx, _| qubit[idx / n] * psi[idx % n]);
                let evolved = &u * joint;
                let upper = evolved.rows(0, n);
                let lower = evolved.rows(n, n);
                let weight = Complex64::new(p * w, 0.0);
                out[(0, 0)] += weight * upper.dotc(&upper);
                out[(0, 1)] += weight * lower.dotc(&upper);
                out[(1, 0)] += weight * upper.dotc(&lower);
                out[(1, 1)] += weight * lower.dotc(&lower);
            }
        }
        QubitState::new((out + out.adjoint()) * Complex64::new(0.5, 0.0))
    }
}

/// Pair of workspaces at `N` and `2N`; every result is computed on both and
/// rejected unless it has moved by less than [`DOUBLING_TOL`].
#[derive(Debug, Clone)]
pub struct ConvergedOracle {
    base: FockWorkspace,
    doubled: FockWorkspace,
}

impl ConvergedOracle {
    pub fn new(dim: usize) -> Self {
        Self {
            base: FockWorkspace::new(dim),
            doubled: FockWorkspace::new(2 * dim),
        }
    }

    pub fn base(&self) -> &FockWorkspace {
        &self.base
    }

    fn accept(&self, deviation: f64, scale: f64) -> Result<()> {
        if deviation > DOUBLING_TOL * scale.max(1.0) {
            return Err(Error::TruncationNotConverged {
                dim: self.base.dim,
                deviation,
            });
        }
        Ok(())
    }

    pub fn displacement_expectation(&self, state: &ModeState, s: f64) -> Result<Complex64> {
        let a = self.base.displacement_expectation(state, s)?;
        let b = self.doubled.displacement_expectation(state, s)?;
        self.accept((a - b).norm(), b.norm())?;
        Ok(a)
    }

    pub fn thermal_moment(&self, nbar: f64, order: u32) -> Result<f64> {
        let a = self.base.thermal_moment(nbar, order)?;
        let b = self.doubled.thermal_moment(nbar, order)?;
        self.accept((a - b).abs(), b.abs())?;
        Ok(a)
    }

    pub fn joint_evolution(
        &self,
        rho: &QubitState,
        state: &ModeState,
        lambda_eff: f64,
        phase: f64,
    ) -> Result<QubitState> {
        let a = self.base.joint_evolution(rho, state, lambda_eff, phase)?;
        let b = self
            .doubled
            .joint_evolution(rho, state, lambda_eff, phase)?;
        self.accept(a.max_abs_diff(&b), 1.0)?;
        Ok(a)
    }
}

/// Uniformly distributed pure qubit state (Haar measure on the Bloch sphere).
pub fn haar_qubit<R: Rng>(rng: &mut R) -> QubitState {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let azimuth: f64 = rng.random_range(0.0..2.0 * PI);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    QubitState::from_bloch(sin_t * azimuth.cos(), sin_t * azimuth.sin(), cos_t)
        .expect("unit Bloch vector")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BruteForcePowers {
    /// `max_ρ [C(Φ(ρ)) - C(ρ)]` over the sampled states and both basis states.
    pub cohering: f64,
    /// `max_i C(Φ(|i⟩⟨i|))`.
    pub basis_cohering: f64,
    /// `1 - min_θ C(Φ(ψ₂(θ)))` over the θ-grid.
    pub decohering: f64,
}

/// Sampled estimates of the cohering and decohering powers, applying the
/// channel to each state directly.
///
/// The θ-grid has `n_samples` points starting at the kernel phase, so a grid
/// size divisible by four contains the worst-case input exactly.
pub fn brute_force_powers(k: &ChannelKernel, n_samples: usize, seed: u64) -> BruteForcePowers {
    let gain = |rho: &QubitState| l1_coherence(&k.apply(rho)) - l1_coherence(rho);

    let basis_cohering = gain(&QubitState::ground()).max(gain(&QubitState::excited()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cohering = (0..n_samples)
        .map(|_| gain(&haar_qubit(&mut rng)))
        .fold(basis_cohering, f64::max);

    let steps = n_samples.max(4);
    let min_remaining = (0..steps)
        .map(|j| {
            let theta = k.phase() + 2.0 * PI * j as f64 / steps as f64;
            l1_coherence(&k.apply(&MaxCoherentQubit::new(theta).state()))
        })
        .fold(f64::INFINITY, f64::min);

    BruteForcePowers {
        cohering,
        basis_cohering,
        decohering: 1.0 - min_remaining,
    }
}
