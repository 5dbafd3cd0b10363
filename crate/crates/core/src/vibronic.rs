//! Two-level ⊗ motion product space and the rotating-wave interaction
//! Hamiltonian, in units of ħΩ₁:
//!
//! ```text
//! H = S⁺ ⊗ B + S⁻ ⊗ B†,   B = r F₀(n̂, η) + g(η) F₁(n̂, η) â
//! ```
//!
//! with `r = Ω₀/Ω₁`. Basis order is `|g,0⟩..|g,dim−1⟩, |e,0⟩..|e,dim−1⟩`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coupling::{f_j, g_eta, DriveParams};
use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::steady_state::MotionalState;
use crate::trap::TrapParams;

/// Internal level of the ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Internal {
    Ground,
    Excited,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VibronicState {
    motional_dim: usize,
    amps: Vec<Complex64>,
}

impl VibronicState {
    /// Normalises `amps`, which must have length `2·motional_dim`.
    pub fn from_amplitudes(motional_dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        if motional_dim == 0 || amps.len() != 2 * motional_dim {
            return Err(Error::Usage("vibronic amplitudes must have length 2*dim"));
        }
        let norm = libm::sqrt(amps.iter().map(|z| z.norm_sqr()).sum());
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Usage("vibronic state has zero or non-finite norm"));
        }
        Ok(Self { motional_dim, amps: amps.into_iter().map(|z| z / norm).collect() })
    }

    /// `|g⟩ ⊗ |ψ⟩`.
    pub fn ground(motion: &MotionalState) -> Self {
        Self::product(Internal::Ground, motion)
    }

    pub fn product(level: Internal, motion: &MotionalState) -> Self {
        let dim = motion.dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * dim];
        let offset = match level {
            Internal::Ground => 0,
            Internal::Excited => dim,
        };
        amps[offset..offset + dim].copy_from_slice(motion.amplitudes());
        Self { motional_dim: dim, amps }
    }

    pub fn motional_dim(&self) -> usize {
        self.motional_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn index(level: Internal, n: usize, motional_dim: usize) -> usize {
        match level {
            Internal::Ground => n,
            Internal::Excited => motional_dim + n,
        }
    }

    /// Population of one internal level.
    pub fn population(&self, level: Internal) -> f64 {
        let d = self.motional_dim;
        let block = match level {
            Internal::Ground => &self.amps[..d],
            Internal::Excited => &self.amps[d..],
        };
        block.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Motional block `B` of the Hamiltonian on `dim` levels.
fn raising_block(trap: &TrapParams, drive: &DriveParams, dim: usize) -> Result<OperatorMatrix> {
    if dim == 0 {
        return Err(Error::Usage("motional dimension must be positive"));
    }
    if dim > trap.levels() {
        return Err(Error::Truncation { requested: dim - 1, limit: trap.n_max() });
    }
    drive.validate_for(trap)?;
    let eta = drive.eta();
    let r = drive.rabi_ratio();
    let g = g_eta(eta, trap)?;
    let mut b = OperatorMatrix::zeros(dim, "B");
    for m in 0..dim {
        b[(m, m)] = Complex64::new(r * f_j(0, m, eta, trap)?.value, 0.0);
        if m + 1 < dim {
            b[(m, m + 1)] = g * (f_j(1, m, eta, trap)?.value * libm::sqrt((m + 1) as f64));
        }
    }
    Ok(b)
}

/// `H_I/(ħΩ₁)` on all bound levels.
pub fn build_interaction_hamiltonian(trap: &TrapParams, drive: &DriveParams) -> Result<OperatorMatrix> {
    build_interaction_hamiltonian_dim(trap, drive, trap.levels())
}

/// `H_I/(ħΩ₁)` on the lowest `dim` motional levels.
pub fn build_interaction_hamiltonian_dim(trap: &TrapParams, drive: &DriveParams, dim: usize) -> Result<OperatorMatrix> {
    let b = raising_block(trap, drive, dim)?;
    let mut h = OperatorMatrix::zeros(
        2 * dim,
        format!("H_I(N={}, eta={}, r={})", trap.depth(), drive.eta(), drive.rabi_ratio()),
    );
    for m in 0..dim {
        for n in 0..dim {
            let v = b[(m, n)];
            h[(dim + m, n)] = v;
            h[(n, dim + m)] = v.conj();
        }
    }
    Ok(h)
}

/// `H|g,ψ⟩` with the `|e, dim−1⟩` component dropped, since it would need
/// `c_dim`.
pub fn stationarity_vector(state: &MotionalState, hamiltonian: &OperatorMatrix) -> Result<Vec<Complex64>> {
    let dim = state.dim();
    if hamiltonian.dim() != 2 * dim {
        return Err(Error::Usage("Hamiltonian and state dimensions do not match"));
    }
    let mut out = hamiltonian.apply(VibronicState::ground(state).amplitudes())?;
    out[2 * dim - 1] = Complex64::new(0.0, 0.0);
    Ok(out)
}

/// `‖H|g,ψ⟩‖` with a prebuilt Hamiltonian.
pub fn stationarity_residual_with(state: &MotionalState, hamiltonian: &OperatorMatrix) -> Result<f64> {
    let v = stationarity_vector(state, hamiltonian)?;
    Ok(libm::sqrt(crate::sum::compensated_sum(v.iter().map(|z| z.norm_sqr()))))
}

/// `‖H|g,ψ⟩‖`, the certificate that `|g⟩|ψ⟩⟨ψ|⟨g|` commutes with `H`.
pub fn stationarity_residual(state: &MotionalState, trap: &TrapParams, drive: &DriveParams) -> Result<f64> {
    let h = build_interaction_hamiltonian_dim(trap, drive, state.dim())?;
    stationarity_residual_with(state, &h)
}

/// Frobenius norm of `[H, ρ]` for `ρ = |g,ψ⟩⟨g,ψ|`, evaluated with dense
/// matrices. Row and column `|e, dim−1⟩` are left out, as in the residual.
pub fn commutator_norm(state: &MotionalState, hamiltonian: &OperatorMatrix) -> Result<f64> {
    let dim = state.dim();
    if hamiltonian.dim() != 2 * dim {
        return Err(Error::Usage("Hamiltonian and state dimensions do not match"));
    }
    let phi = VibronicState::ground(state);
    let phi = phi.amplitudes();
    let size = 2 * dim;
    let mut rho = OperatorMatrix::zeros(size, "rho");
    for i in 0..size {
        for j in 0..size {
            rho[(i, j)] = phi[i] * phi[j].conj();
        }
    }
    let mut c = hamiltonian.commutator(&rho)?;
    for k in 0..size {
        c[(size - 1, k)] = Complex64::new(0.0, 0.0);
        c[(k, size - 1)] = Complex64::new(0.0, 0.0);
    }
    Ok(c.frobenius_norm())
}
