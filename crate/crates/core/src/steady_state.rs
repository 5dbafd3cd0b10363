//! Steady motional state under bichromatic driving.
//!
//! With the ion pumped into `|g⟩`, stationarity of `|g⟩⊗|ψ⟩` reduces to the
//! nonlinear-coherent-state condition `a·h(n̂)|ψ⟩ = χ|ψ⟩` with
//! `χ = −(Ω₀/Ω₁)/g(η)`. In the Fock basis this is the two-term recursion
//! `c_{n+1} = χ c_n / (sqrt(n+1)·h(n+1))`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coupling::{g_eta, h_n, DriveParams};
use crate::error::{Error, Result};
use crate::trap::TrapParams;

/// Population on the top retained level above which a state is reported as
/// dominated by the basis truncation.
pub const TRUNCATION_DOMINATED: f64 = 0.05;

/// Normalised Fock-basis amplitudes of the ion's centre-of-mass motion.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionalState {
    amps: Vec<Complex64>,
    /// `f(1)..f(dim−1)` of the nonlinear coherent state, when known.
    deformation: Vec<f64>,
    chi: Option<Complex64>,
    trap: Option<TrapParams>,
    drive: Option<DriveParams>,
    termination: Option<Error>,
}

impl MotionalState {
    /// Normalises an arbitrary amplitude vector.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Usage("state needs at least one amplitude"));
        }
        let mut state = Self { amps, deformation: Vec::new(), chi: None, trap: None, drive: None, termination: None };
        state.normalize()?;
        Ok(state)
    }

    /// Same metadata (trap, drive, χ, f) with new amplitudes of equal length,
    /// renormalised. Useful for perturbing a solved state.
    pub fn with_amplitudes(&self, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != self.dim() {
            return Err(Error::Usage("replacement amplitudes change the dimension"));
        }
        let mut state = Self { amps, ..self.clone() };
        state.normalize()?;
        Ok(state)
    }

    /// Fock state `|n⟩` in a basis of `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Truncation { requested: n, limit: dim.saturating_sub(1) });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    /// Glauber coherent state truncated to `dim` levels and renormalised.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Usage("state needs at least one amplitude"));
        }
        build_nlcs(&vec![1.0; dim - 1], alpha, dim - 1)
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = libm::sqrt(self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>());
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Usage("state has zero or non-finite norm"));
        }
        for c in &mut self.amps {
            *c /= norm;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn deformation(&self) -> &[f64] {
        &self.deformation
    }

    pub fn chi(&self) -> Option<Complex64> {
        self.chi
    }

    pub fn trap(&self) -> Option<&TrapParams> {
        self.trap.as_ref()
    }

    pub fn drive(&self) -> Option<&DriveParams> {
        self.drive.as_ref()
    }

    pub fn terminated_early(&self) -> bool {
        self.termination.is_some()
    }

    /// Why the recursion stopped before the top bound level, if it did.
    pub fn termination_reason(&self) -> Option<&Error> {
        self.termination.as_ref()
    }

    /// `|c_top|²`, the population on the highest retained level.
    pub fn edge_population(&self) -> f64 {
        self.amps.last().map_or(0.0, |c| c.norm_sqr())
    }

    pub fn truncation_dominated(&self) -> bool {
        self.edge_population() >= TRUNCATION_DOMINATED
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`, zero-padding the shorter vector.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let overlap: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        overlap.norm_sqr()
    }

    /// Components `0..dim−1` of `(a·h(n̂) − χ)|ψ⟩`; the top component is left
    /// out because the finite basis has no `c_dim` to balance it.
    pub fn eigen_residual_vector(&self) -> Option<Vec<Complex64>> {
        let chi = self.chi?;
        if self.deformation.len() + 1 < self.dim() {
            return None;
        }
        Some(
            (0..self.dim() - 1)
                .map(|m| {
                    let lowered = libm::sqrt((m + 1) as f64) * self.deformation[m] * self.amps[m + 1];
                    lowered - chi * self.amps[m]
                })
                .collect(),
        )
    }

    /// Norm of [`Self::eigen_residual_vector`].
    pub fn eigen_residual(&self) -> Option<f64> {
        self.eigen_residual_vector().map(|r| libm::sqrt(r.iter().map(|z| z.norm_sqr()).sum()))
    }

    /// `|χ c_top|`, the part of the eigenvalue equation the basis cannot satisfy.
    pub fn edge_residual(&self) -> Option<f64> {
        Some((self.chi? * self.amps[self.dim() - 1]).norm())
    }
}

/// Settings for [`solve_steady_state_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SteadyStateOptions {
    /// Basis size; defaults to all bound levels `n_max + 1`.
    pub dim: Option<usize>,
    /// Replaces the χ implied by the drive.
    pub chi: Option<Complex64>,
}

/// `χ = −(Ω₀/Ω₁)/g(η)`.
pub fn chi_of(drive: &DriveParams, trap: &TrapParams) -> Result<Complex64> {
    let g = g_eta(drive.eta(), trap)?;
    if g.norm() == 0.0 {
        return Err(Error::SingularDenominator { context: "chi = -ratio/g(eta)", level: 0 });
    }
    Ok(-drive.rabi_ratio() / g)
}

pub fn solve_steady_state(trap: &TrapParams, drive: &DriveParams) -> Result<MotionalState> {
    solve_steady_state_with(trap, drive, &SteadyStateOptions::default())
}

/// Seeds `c₀ = 1`, runs the recursion up to the basis edge and normalises.
///
/// A singular `h(n)` stops the recursion; the levels reached so far are kept
/// and the state is marked as terminated early.
pub fn solve_steady_state_with(
    trap: &TrapParams,
    drive: &DriveParams,
    options: &SteadyStateOptions,
) -> Result<MotionalState> {
    drive.validate_for(trap)?;
    let dim = options.dim.unwrap_or(trap.levels());
    if dim > trap.levels() {
        return Err(Error::Truncation { requested: dim - 1, limit: trap.n_max() });
    }
    if dim < 2 {
        return Err(Error::Usage("steady state needs at least one excited bound level"));
    }
    let chi = match options.chi {
        Some(chi) => chi,
        None => chi_of(drive, trap)?,
    };

    let mut amps = Vec::with_capacity(dim);
    let mut deformation = Vec::with_capacity(dim - 1);
    let mut termination = None;
    amps.push(Complex64::new(1.0, 0.0));
    for n in 0..dim - 1 {
        let h = match h_n(n + 1, drive.eta(), trap) {
            Ok(h) => h,
            Err(e @ Error::SingularDenominator { .. }) => {
                termination = Some(e);
                break;
            }
            Err(e) => return Err(e),
        };
        deformation.push(h);
        let next = chi * amps[n] / (libm::sqrt((n + 1) as f64) * h);
        amps.push(next);
    }

    let mut state =
        MotionalState { amps, deformation, chi: Some(chi), trap: Some(*trap), drive: Some(*drive), termination };
    state.normalize()?;
    Ok(state)
}

/// Nonlinear coherent state `c_n ∝ αⁿ / (sqrt(n!)·f(1)⋯f(n))` on levels `0..=n_cut`.
///
/// `f_values[k−1]` holds `f(k)`. Amplitudes are built from their logarithms and
/// normalised at the end, so no `f(0)` convention enters.
pub fn build_nlcs(f_values: &[f64], alpha: Complex64, n_cut: usize) -> Result<MotionalState> {
    if f_values.len() < n_cut {
        return Err(Error::Usage("need f(1)..f(n_cut)"));
    }
    let f_values = &f_values[..n_cut];
    if let Some(k) = f_values.iter().position(|&f| f == 0.0 || !f.is_finite()) {
        return Err(Error::SingularDenominator { context: "nonlinear coherent state", level: k + 1 });
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); n_cut + 1];
    if alpha.norm() == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
    } else {
        let ln_abs_alpha = libm::log(alpha.norm());
        let arg = alpha.arg();
        let mut logs = Vec::with_capacity(n_cut + 1);
        let mut ln_f_prod = 0.0;
        let mut negatives = 0usize;
        logs.push(0.0);
        for n in 1..=n_cut {
            let f = f_values[n - 1];
            ln_f_prod += libm::log(libm::fabs(f));
            negatives += usize::from(f < 0.0);
            let x = n as f64;
            logs.push(x * ln_abs_alpha - 0.5 * libm::lgamma(x + 1.0) - ln_f_prod);
            let phase = x * arg + if negatives % 2 == 1 { core::f64::consts::PI } else { 0.0 };
            amps[n] = Complex64::from_polar(1.0, phase);
        }
        amps[0] = Complex64::new(1.0, 0.0);
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (c, l) in amps.iter_mut().zip(&logs) {
            *c *= libm::exp(l - peak);
        }
    }

    let mut state = MotionalState {
        amps,
        deformation: f_values.to_vec(),
        chi: Some(alpha),
        trap: None,
        drive: None,
        termination: None,
    };
    state.normalize()?;
    Ok(state)
}
