//! Quadrature variances and squeezing.
//!
//! `X_θ = (L e^{−iθ} + L† e^{iθ})/2` with `L` either the bare annihilation
//! operator `a` or the trap's deformed ladder operator `A = a f(n̂)`. The
//! squeezing parameter compares the variance with that of the same quadrature
//! in the motional ground state,
//!
//! ```text
//! S(θ) = Var(X_θ) / Var₀(X_θ) − 1,   Var₀ = ⟨0|L L†|0⟩/4
//! ```
//!
//! so `S = 4·Var − 1` for bare operators and `S < 0` signals squeezing.
//! Moments are evaluated exactly, which is the same as embedding the state in
//! any larger bare Fock workspace.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coupling::DriveParams;
use crate::error::{Error, Result};
use crate::steady_state::{solve_steady_state, MotionalState};
use crate::trap::{deformation_f2, TrapParams};

/// Which ladder operator builds the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Bare `a`; ground-state variance ¼.
    Bare,
    /// Deformed `A = a f(n̂)` of the state's trap, matching the position
    /// operator `x ∝ A + A†`; ground-state variance `f²(1)/4`.
    #[default]
    Deformed,
}

/// `|⟨n−1|L|n⟩|²` for `n = 0..=len`.
fn ladder_squares(kind: Quadrature, trap: Option<&TrapParams>, len: usize) -> Result<Vec<f64>> {
    (0..=len)
        .map(|n| match kind {
            Quadrature::Bare => Ok(n as f64),
            Quadrature::Deformed => {
                let trap = trap.ok_or(Error::Usage("deformed quadrature needs the state's trap"))?;
                Ok(n as f64 * deformation_f2(n, trap)?)
            }
        })
        .collect()
}

/// `Var(X_θ)` in the given state.
pub fn quadrature_variance(state: &MotionalState, theta: f64, kind: Quadrature) -> Result<f64> {
    let c = state.amplitudes();
    let dim = c.len();
    let sq = ladder_squares(kind, state.trap(), dim)?;
    let ell: Vec<f64> = sq.iter().map(|&s| libm::sqrt(s)).collect();

    let mut mean_l = Complex64::new(0.0, 0.0);
    let mut mean_l2 = Complex64::new(0.0, 0.0);
    let mut lower = 0.0; // ⟨L†L⟩
    let mut raise = 0.0; // ⟨L L†⟩
    for n in 0..dim {
        let p = c[n].norm_sqr();
        lower += p * sq[n];
        raise += p * sq[n + 1];
        if n >= 1 {
            mean_l += c[n - 1].conj() * c[n] * ell[n];
        }
        if n >= 2 {
            mean_l2 += c[n - 2].conj() * c[n] * ell[n] * ell[n - 1];
        }
    }
    let rot = Complex64::from_polar(1.0, -theta);
    let mean_x = (rot * mean_l).re;
    let mean_x2 = (2.0 * (rot * rot * mean_l2).re + lower + raise) / 4.0;
    Ok(mean_x2 - mean_x * mean_x)
}

/// Variance of the quadrature in the motional ground state.
pub fn ground_variance(kind: Quadrature, trap: Option<&TrapParams>) -> Result<f64> {
    Ok(ladder_squares(kind, trap, 1)?[1] / 4.0)
}

/// `S(θ) = Var/Var₀ − 1`.
pub fn squeezing_parameter(state: &MotionalState, theta: f64, kind: Quadrature) -> Result<f64> {
    Ok(quadrature_variance(state, theta, kind)? / ground_variance(kind, state.trap())? - 1.0)
}

/// Squeezing parameter of the steady state across trap depths.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeScan {
    pub theta: f64,
    pub quadrature: Quadrature,
    pub depths: Vec<f64>,
    /// `None` where the steady state could not be built for that depth.
    pub s_values: Vec<Option<f64>>,
    /// Error for every missing point, paired with its depth.
    pub failures: Vec<(f64, Error)>,
}

impl SqueezeScan {
    /// Smallest recorded `S` and the depth where it occurs.
    pub fn minimum(&self) -> Option<(f64, f64)> {
        self.depths
            .iter()
            .zip(&self.s_values)
            .filter_map(|(&d, s)| s.map(|s| (d, s)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Builds the steady state for every depth and records `S(θ)`.
///
/// Per-depth failures become missing points; the scan itself only fails on
/// empty input.
pub fn squeezing_scan(depths: &[f64], drive: &DriveParams, theta: f64, kind: Quadrature) -> Result<SqueezeScan> {
    if depths.is_empty() {
        return Err(Error::Usage("depth list is empty"));
    }
    let mut s_values = Vec::with_capacity(depths.len());
    let mut failures = Vec::new();
    for &depth in depths {
        let point = TrapParams::new(depth)
            .and_then(|trap| solve_steady_state(&trap, drive))
            .and_then(|state| squeezing_parameter(&state, theta, kind));
        match point {
            Ok(s) => s_values.push(Some(s)),
            Err(e) => {
                s_values.push(None);
                failures.push((depth, e));
            }
        }
    }
    Ok(SqueezeScan { theta, quadrature: kind, depths: depths.to_vec(), s_values, failures })
}
