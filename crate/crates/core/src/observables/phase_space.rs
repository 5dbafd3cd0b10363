//! Husimi Q and Wigner functions on rectangular grids in the α plane.
//!
//! Grid points are independent. Each row (fixed `Re α`) can be evaluated on
//! its own with [`q_row`] / [`wigner_row`] and reassembled with
//! [`PhaseSpaceGrid::assemble`]; the result does not depend on how rows were
//! distributed.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, PI};

use num_complex::Complex64;

use super::distribution::mean_number;
use crate::error::{Error, Result};
use crate::laguerre::ScaledLaguerre;
use crate::steady_state::MotionalState;

pub const DEFAULT_POINTS: usize = 201;

/// Norm lost from a displaced state beyond which a point counts as leaky.
pub const LEAKAGE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Q,
    W,
}

impl GridKind {
    pub fn name(&self) -> &'static str {
        match self {
            GridKind::Q => "Q",
            GridKind::W => "W",
        }
    }
}

/// Geometry of a rectangular grid including both end points on each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(re: (f64, f64), im: (f64, f64), n_re: usize, n_im: usize) -> Result<Self> {
        if n_re < 2 || n_im < 2 {
            return Err(Error::Usage("grid needs at least two points per axis"));
        }
        if !(re.0 < re.1 && im.0 < im.1) || ![re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite()) {
            return Err(Error::Usage("grid bounds must be finite and increasing"));
        }
        Ok(Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, n_re, n_im })
    }

    /// `[−h, h]²` with `points` samples per axis.
    pub fn square(half_width: f64, points: usize) -> Result<Self> {
        Self::new((-half_width, half_width), (-half_width, half_width), points, points)
    }

    /// Half-width `2 + 2·sqrt(⟨n̂⟩ + 1)`: the classical amplitude plus two
    /// vacuum widths.
    pub fn auto_half_width(state: &MotionalState) -> f64 {
        2.0 + 2.0 * libm::sqrt(mean_number(state) + 1.0)
    }

    pub fn auto(state: &MotionalState, points: usize) -> Result<Self> {
        Self::square(Self::auto_half_width(state), points)
    }

    pub fn d_re(&self) -> f64 {
        (self.re_max - self.re_min) / (self.n_re - 1) as f64
    }

    pub fn d_im(&self) -> f64 {
        (self.im_max - self.im_min) / (self.n_im - 1) as f64
    }

    pub fn re(&self, i: usize) -> f64 {
        self.re_min + i as f64 * self.d_re()
    }

    pub fn im(&self, j: usize) -> f64 {
        self.im_min + j as f64 * self.d_im()
    }

    pub fn alpha(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re(i), self.im(j))
    }

    pub fn cell_area(&self) -> f64 {
        self.d_re() * self.d_im()
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the grid contains the disk of radius `2·sqrt(⟨n̂⟩ + 3)`.
    pub fn covers(&self, state: &MotionalState) -> bool {
        let radius = 2.0 * libm::sqrt(mean_number(state) + 3.0);
        let reach = (-self.re_min).min(self.re_max).min(-self.im_min).min(self.im_max);
        reach >= radius
    }
}

/// Sampled Q or W values, row-major with `Re α` as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    pub kind: GridKind,
    pub values: Vec<f64>,
    /// Largest norm lost when displacing into the workspace (Wigner only).
    pub max_leakage: f64,
    /// Number of points whose leakage exceeded [`LEAKAGE_TOLERANCE`].
    pub leaky_points: usize,
    /// Whether the grid extent is adequate for the state's energy.
    pub coverage_ok: bool,
}

impl PhaseSpaceGrid {
    /// Joins rows of `(value, leakage)` pairs produced by the row evaluators.
    pub fn assemble(spec: GridSpec, kind: GridKind, coverage_ok: bool, rows: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if rows.len() != spec.n_re || rows.iter().any(|r| r.len() != spec.n_im) {
            return Err(Error::Usage("row count or length does not match the grid"));
        }
        let mut values = Vec::with_capacity(spec.len());
        let mut max_leakage = 0.0f64;
        let mut leaky_points = 0;
        for (value, leak) in rows.into_iter().flatten() {
            values.push(value);
            max_leakage = max_leakage.max(leak);
            leaky_points += usize::from(leak > LEAKAGE_TOLERANCE);
        }
        Ok(Self { spec, kind, values, max_leakage, leaky_points, coverage_ok })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.n_im + j]
    }

    /// Riemann sum `Σ value · cell area`.
    pub fn integral(&self) -> f64 {
        crate::sum::compensated_sum(self.values.iter().copied()) * self.spec.cell_area()
    }

    /// Riemann sum of `weight(α)·value`.
    pub fn integrate_with(&self, weight: impl Fn(Complex64) -> f64) -> f64 {
        let mut acc = crate::sum::CompensatedSum::new();
        for i in 0..self.spec.n_re {
            for j in 0..self.spec.n_im {
                acc.add(weight(self.spec.alpha(i, j)) * self.value(i, j));
            }
        }
        acc.value() * self.spec.cell_area()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid point holding the smallest value.
    pub fn argmin(&self) -> (usize, usize) {
        let k = self.values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map_or(0, |(k, _)| k);
        (k / self.spec.n_im, k % self.spec.n_im)
    }
}

/// `Q(α) = |⟨α|ψ⟩|²/π` with `⟨α|ψ⟩ = e^{−|α|²/2} Σ_n ᾱⁿ c_n / sqrt(n!)`.
pub fn q_value(state: &MotionalState, alpha: Complex64) -> f64 {
    let conj = alpha.conj();
    let mut basis = Complex64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    let mut overlap = Complex64::new(0.0, 0.0);
    for (n, c) in state.amplitudes().iter().enumerate() {
        if n > 0 {
            basis *= conj / libm::sqrt(n as f64);
        }
        overlap += basis * c;
    }
    overlap.norm_sqr() * FRAC_1_PI
}

/// Q values along row `i`; the leakage slot is always zero.
pub fn q_row(state: &MotionalState, spec: &GridSpec, i: usize) -> Vec<(f64, f64)> {
    (0..spec.n_im).map(|j| (q_value(state, spec.alpha(i, j)), 0.0)).collect()
}

pub fn q_function(state: &MotionalState, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    let rows = (0..spec.n_re).map(|i| q_row(state, spec, i)).collect();
    PhaseSpaceGrid::assemble(*spec, GridKind::Q, spec.covers(state), rows)
}

/// Default bare-Fock workspace for displaced states: `max(4·dim, dim + 20)`.
pub fn default_workspace(dim: usize) -> usize {
    (4 * dim).max(dim + 20)
}

/// Workspace large enough for every point of `spec`: the spec-level floor
/// [`default_workspace`], raised to `(r + sqrt(dim) + 8)²` where `r` is the
/// largest `|α|` on the grid, since `D(−α)` shifts population up to about
/// `(|α| + sqrt(n))²`.
pub fn workspace_for_grid(dim: usize, spec: &GridSpec) -> usize {
    let r_re = libm::fmax(libm::fabs(spec.re_min), libm::fabs(spec.re_max));
    let r_im = libm::fmax(libm::fabs(spec.im_min), libm::fabs(spec.im_max));
    let r = libm::hypot(r_re, r_im);
    let reach = r + libm::sqrt(dim as f64) + 8.0;
    default_workspace(dim).max(libm::ceil(reach * reach) as usize)
}

/// `ln k!` for `k = 0..len`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for k in 0..len {
        if k > 1 {
            acc += libm::log(k as f64);
        }
        out.push(acc);
    }
    out
}

const COLUMN_CUTOFF: f64 = 1e-20;

/// Components `0..workspace` of `D(β)|ψ⟩`.
///
/// Uses the closed form, for `m ≥ n`,
/// `⟨m|D(β)|n⟩ = sqrt(n!/m!) β^{m−n} e^{−|β|²/2} L_n^{(m−n)}(|β|²)`, and
/// `⟨m|D(β)|n⟩ = sqrt(m!/n!) (−β*)^{n−m} e^{−|β|²/2} L_m^{(n−m)}(|β|²)` below
/// the diagonal. Prefactors are combined in log space with the scaled Laguerre
/// recurrence so large `|β|` and high levels neither overflow nor underflow
/// prematurely.
pub fn displace(amps: &[Complex64], beta: Complex64, workspace: usize) -> Vec<Complex64> {
    let dim = amps.len();
    let mut out = vec![Complex64::new(0.0, 0.0); workspace];
    let x = beta.norm_sqr();
    if x == 0.0 {
        for (o, c) in out.iter_mut().zip(amps) {
            *o = *c;
        }
        return out;
    }
    let ln_abs = 0.5 * libm::log(x);
    let arg = beta.arg();
    let ln_fact = ln_factorials(workspace.max(dim));

    // on and above the diagonal: m = n + p. Within a column the prefactor
    // changes by sqrt(n/(n+p)) per step, so it is carried by multiplication.
    // Columns past the bulk of the displaced state are dropped once they fall
    // under COLUMN_CUTOFF; any norm lost that way shows up as leakage.
    let bulk = libm::sqrt(x) + libm::sqrt(dim as f64);
    let bulk = bulk * bulk;
    for p in 0..workspace {
        let count = dim.min(workspace - p);
        let phase = Complex64::from_polar(1.0, p as f64 * arg);
        let ln_base = p as f64 * ln_abs - 0.5 * x - 0.5 * ln_fact[p];
        let mut scale_seen = 0.0;
        let mut pref = libm::exp(ln_base);
        let mut ratio = 1.0;
        let mut column_max = 0.0f64;
        for (n, (mantissa, ln_scale)) in ScaledLaguerre::new(p as f64, x).take(count).enumerate() {
            if n > 0 {
                ratio *= libm::sqrt(n as f64 / (n + p) as f64);
            }
            if ln_scale != scale_seen {
                scale_seen = ln_scale;
                pref = libm::exp(ln_base + ln_scale);
            }
            let element = mantissa * pref * ratio;
            column_max = column_max.max(libm::fabs(element));
            let c = amps[n];
            out[n + p] += phase * c * element;
        }
        if p as f64 > bulk && column_max < COLUMN_CUTOFF {
            break;
        }
    }
    // below the diagonal: n = m + q
    let arg_minus_conj = PI - arg;
    for q in 1..dim {
        let count = (dim - q).min(workspace);
        let phase = Complex64::from_polar(1.0, q as f64 * arg_minus_conj);
        let base = q as f64 * ln_abs - 0.5 * x;
        for (m, (mantissa, ln_scale)) in ScaledLaguerre::new(q as f64, x).take(count).enumerate() {
            let c = amps[m + q];
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let ln_pref = 0.5 * (ln_fact[m] - ln_fact[m + q]) + base + ln_scale;
            out[m] += phase * c * (mantissa * libm::exp(ln_pref));
        }
    }
    out
}

/// `W(α)` via displaced parity, plus the norm the displaced state lost to the
/// workspace edge.
pub fn wigner_value(state: &MotionalState, alpha: Complex64, workspace: usize) -> (f64, f64) {
    let displaced = displace(state.amplitudes(), -alpha, workspace);
    let mut parity = crate::sum::CompensatedSum::new();
    let mut kept = crate::sum::CompensatedSum::new();
    for (k, d) in displaced.iter().enumerate() {
        let p = d.norm_sqr();
        kept.add(p);
        parity.add(if k % 2 == 0 { p } else { -p });
    }
    let leakage = (state.norm_sqr() - kept.value()).max(0.0);
    (2.0 * FRAC_1_PI * parity.value(), leakage)
}

pub fn wigner_row(state: &MotionalState, spec: &GridSpec, i: usize, workspace: usize) -> Vec<(f64, f64)> {
    (0..spec.n_im).map(|j| wigner_value(state, spec.alpha(i, j), workspace)).collect()
}

fn check_workspace(state: &MotionalState, workspace: usize) -> Result<()> {
    if workspace < 4 * state.dim() {
        return Err(Error::Usage("Wigner workspace must be at least four times the state dimension"));
    }
    Ok(())
}

pub fn wigner_function(state: &MotionalState, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    wigner_function_with(state, spec, workspace_for_grid(state.dim(), spec))
}

pub fn wigner_function_with(state: &MotionalState, spec: &GridSpec, workspace: usize) -> Result<PhaseSpaceGrid> {
    check_workspace(state, workspace)?;
    let rows = (0..spec.n_re).map(|i| wigner_row(state, spec, i, workspace)).collect();
    PhaseSpaceGrid::assemble(*spec, GridKind::W, spec.covers(state), rows)
}
