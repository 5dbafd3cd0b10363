//! Laser-ion coupling in the vibrational rotating-wave approximation.
//!
//! After disentangling the displacement exponential, the carrier and lower
//! sideband couple through number-diagonal functions
//!
//! ```text
//! F_j(n, η) = Σ_{l=0}^{n} g^{2l} / (l!(l+j)!) · f(n)!f(n+j)!/[f(n−l)!]² · n!/(n−l)! · M(n−l)
//! g(η)      = (i/√γ) tan(√γ η)
//! M(n)      = cos(√γ η)^(2n+1−βN)
//! ```
//!
//! `g²` is real and negative, so every `F_j` is real. The f-factorial ratios are
//! products over contiguous ranges of `f(k)` and never need a value for `f(0)!`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laguerre::laguerre;
use crate::sum::CompensatedSum;
use crate::trap::{deformation_f2, TrapParams};

/// Sum results below this fraction of the largest term are flagged.
pub const CANCELLATION_THRESHOLD: f64 = 1e-10;

/// Relative floor on `|F₀|` below which `h(n)` is declared singular.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Lamb-Dicke parameter and the carrier/sideband Rabi frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    eta: f64,
    rabi_ratio: f64,
    rabi: Option<(f64, f64)>,
}

impl DriveParams {
    /// `eta ≥ 0`, `rabi_ratio = Ω₀/Ω₁ ≥ 0`.
    pub fn new(eta: f64, rabi_ratio: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidParameter { name: "eta", value: eta });
        }
        if !(rabi_ratio.is_finite() && rabi_ratio >= 0.0) {
            return Err(Error::InvalidParameter { name: "rabi_ratio", value: rabi_ratio });
        }
        Ok(Self { eta, rabi_ratio, rabi: None })
    }

    /// From the two Rabi frequencies (rad/s); `Ω₁` must be positive.
    pub fn from_rabi(eta: f64, omega0: f64, omega1: f64) -> Result<Self> {
        if !(omega1.is_finite() && omega1 > 0.0) {
            return Err(Error::InvalidParameter { name: "omega1", value: omega1 });
        }
        if !omega0.is_finite() {
            return Err(Error::InvalidParameter { name: "omega0", value: omega0 });
        }
        let mut drive = Self::new(eta, libm::fabs(omega0 / omega1))?;
        drive.rabi = Some((omega0, omega1));
        Ok(drive)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rabi_ratio(&self) -> f64 {
        self.rabi_ratio
    }

    /// `(Ω₀, Ω₁)` when the drive was built from absolute frequencies.
    pub fn rabi_frequencies(&self) -> Option<(f64, f64)> {
        self.rabi
    }

    /// Checks `sqrt(γ)·η < π/2` for this trap.
    pub fn validate_for(&self, trap: &TrapParams) -> Result<()> {
        branch_argument(self.eta, trap).map(|_| ())
    }
}

fn branch_argument(eta: f64, trap: &TrapParams) -> Result<f64> {
    let x = libm::sqrt(trap.gamma()) * eta;
    if x.is_nan() || libm::fabs(x) >= core::f64::consts::FRAC_PI_2 {
        return Err(Error::Branch { argument: x });
    }
    Ok(x)
}

/// `ln cos x` without the cancellation of `ln(1 − tiny)`.
fn ln_cos(x: f64) -> f64 {
    let half = libm::sin(0.5 * x);
    libm::log1p(-2.0 * half * half)
}

/// `g(η) = (i/√γ)·tan(√γ η)`.
pub fn g_eta(eta: f64, trap: &TrapParams) -> Result<Complex64> {
    let x = branch_argument(eta, trap)?;
    Ok(Complex64::new(0.0, libm::tan(x) / libm::sqrt(trap.gamma())))
}

/// `g(η)²`, real and non-positive.
fn g_squared(eta: f64, trap: &TrapParams) -> Result<f64> {
    let x = branch_argument(eta, trap)?;
    let t = libm::tan(x);
    Ok(-t * t / trap.gamma())
}

fn ln_m_factor(n: usize, ln_cos_x: f64, trap: &TrapParams) -> f64 {
    // −X_n/γ = 2n + 1 − βN
    let beta_n = trap.beta() * trap.depth();
    ((2 * n + 1) as f64 - beta_n) * ln_cos_x
}

/// `M(n) = cos(√γη)^(2n+1−βN)`, evaluated in log space.
pub fn m_factor(n: usize, eta: f64, trap: &TrapParams) -> Result<f64> {
    let x = branch_argument(eta, trap)?;
    Ok(libm::exp(ln_m_factor(n, ln_cos(x), trap)))
}

/// Value of `F_j(n, η)` together with the magnitude of its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandSum {
    pub value: f64,
    pub largest_term: f64,
}

impl SidebandSum {
    /// True when the alternating sum lost more than ten digits to cancellation.
    pub fn cancellation_warning(&self) -> bool {
        libm::fabs(self.value) < CANCELLATION_THRESHOLD * self.largest_term
    }
}

fn ln_f(k: usize, trap: &TrapParams) -> Result<f64> {
    let f2 = deformation_f2(k, trap)?;
    if f2 <= 0.0 {
        return Err(Error::Domain { level: k, f2 });
    }
    Ok(0.5 * libm::log(f2))
}

/// Sideband function `F_j(n, η)` for `j ∈ {0, 1}`.
///
/// Terms are formed as `sign · exp(log-magnitude)` and accumulated with
/// compensated summation.
pub fn f_j(j: usize, n: usize, eta: f64, trap: &TrapParams) -> Result<SidebandSum> {
    if j > 1 {
        return Err(Error::Usage("only j = 0 (carrier) and j = 1 (sideband) are defined"));
    }
    let limit = trap.n_max() + 1;
    if n + j > limit {
        return Err(Error::Truncation { requested: n + j, limit });
    }
    let x = branch_argument(eta, trap)?;
    let g2 = g_squared(eta, trap)?;
    let ln_cos_x = ln_cos(x);
    let ln_g2 = if g2 == 0.0 { f64::NEG_INFINITY } else { libm::log(-g2) };

    // f(n+j)!/f(n)! contributes only for j = 1
    let mut ln_f_ratio = if j == 1 { ln_f(n + 1, trap)? } else { 0.0 };
    let mut ln_fact_l = 0.0; // ln l!
    let mut ln_fact_lj = 0.0; // ln (l+j)!
    let mut ln_falling = 0.0; // ln n!/(n−l)!
    let mut acc = CompensatedSum::new();
    let mut largest = 0.0f64;

    for l in 0..=n {
        if l > 0 {
            if g2 == 0.0 {
                break;
            }
            let lf = l as f64;
            ln_fact_l += libm::log(lf);
            ln_fact_lj += libm::log(lf + j as f64);
            ln_falling += libm::log((n - l + 1) as f64);
            // f(n)!f(n+j)!/[f(n−l)!]² gains f(n−l+1)² at each step
            ln_f_ratio += 2.0 * ln_f(n - l + 1, trap)?;
        }
        let ln_g_pow = if l == 0 { 0.0 } else { l as f64 * ln_g2 };
        let ln_mag = ln_g_pow - ln_fact_l - ln_fact_lj + ln_f_ratio + ln_falling + ln_m_factor(n - l, ln_cos_x, trap);
        let mag = libm::exp(ln_mag);
        largest = largest.max(mag);
        acc.add(if l % 2 == 0 { mag } else { -mag });
    }

    Ok(SidebandSum { value: acc.value(), largest_term: largest })
}

/// Steady-state deformation `h(n) = F₁(n−1, η)/F₀(n−1, η)`.
pub fn h_n(n: usize, eta: f64, trap: &TrapParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::Usage("h(n) is defined for n >= 1"));
    }
    let f1 = f_j(1, n - 1, eta, trap)?.value;
    let f0 = f_j(0, n - 1, eta, trap)?.value;
    if f0 == 0.0 || libm::fabs(f0) < DENOMINATOR_FLOOR * libm::fabs(f1) {
        return Err(Error::SingularDenominator { context: "h(n) = F1/F0", level: n });
    }
    Ok(f1 / f0)
}

/// Harmonic-trap counterpart of [`h_n`]:
/// `L_{n−1}^{(1)}(η²) / (n·L_{n−1}^{(0)}(η²))`.
pub fn laguerre_h(n: usize, eta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Usage("h(n) is defined for n >= 1"));
    }
    let x = eta * eta;
    let l1 = laguerre(n - 1, 1.0, x);
    let l0 = laguerre(n - 1, 0.0, x);
    if l0 == 0.0 || libm::fabs(l0) < DENOMINATOR_FLOOR * libm::fabs(l1) {
        return Err(Error::SingularDenominator { context: "Laguerre ratio", level: n });
    }
    Ok(l1 / (n as f64 * l0))
}
