//! Modified Pöschl–Teller trap as an f-deformed oscillator.

use crate::error::{Error, Result};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Laboratory description of the well `V(x) = D·tanh²(x/δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalTrap {
    /// Ion mass in kg.
    pub mass: f64,
    /// Harmonic (small-amplitude) trap frequency in rad/s.
    pub omega: f64,
    /// Range δ of the potential in m.
    pub range: f64,
    /// Well depth D in J, derived as `½ m ω² δ²`.
    pub well_depth: f64,
}

/// Trap depth and the quantities derived from it.
///
/// `depth` is the dimensionless `N = 4D/ħω = 2mωδ²/ħ`. Everything else is
/// computed once on construction:
///
/// * `beta = sqrt(1 + 1/N²)`
/// * `gamma = 1/N`
/// * `s = (sqrt(1 + N²) − 1)/2`, the dissociation index
/// * `n_max`, the highest bound level kept (see [`truncation_level`])
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams {
    depth: f64,
    beta: f64,
    gamma: f64,
    s: f64,
    n_max: usize,
    physical: Option<PhysicalTrap>,
}

impl TrapParams {
    pub fn new(depth: f64) -> Result<Self> {
        if !(depth.is_finite() && depth > 0.0) {
            return Err(Error::InvalidParameter { name: "depth", value: depth });
        }
        let beta = libm::sqrt(1.0 + 1.0 / (depth * depth));
        let s = (libm::sqrt(1.0 + depth * depth) - 1.0) / 2.0;
        let n_max = strict_floor(s);
        let trap = Self { depth, beta, gamma: 1.0 / depth, s, n_max, physical: None };
        for n in 0..=n_max {
            let f2 = trap.f2_unchecked(n);
            if f2 <= 0.0 {
                return Err(Error::Domain { level: n, f2 });
            }
        }
        Ok(trap)
    }

    /// Builds the trap from mass (kg), frequency (rad/s) and range (m).
    pub fn from_physical(mass: f64, omega: f64, range: f64) -> Result<Self> {
        for (name, value) in [("mass", mass), ("omega", omega), ("range", range)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        let depth = 2.0 * mass * omega * range * range / HBAR;
        let well_depth = 0.5 * mass * omega * omega * range * range;
        let mut trap = Self::new(depth)?;
        trap.physical = Some(PhysicalTrap { mass, omega, range, well_depth });
        Ok(trap)
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of bound levels kept, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn physical(&self) -> Option<&PhysicalTrap> {
        self.physical.as_ref()
    }

    /// A trap with only the ground level cannot host any motional dynamics.
    pub fn is_shallow(&self) -> bool {
        self.n_max == 0
    }

    /// Critical Lamb-Dicke parameter `(π/2)·sqrt(N)` where `g(η)` diverges.
    pub fn eta_critical(&self) -> f64 {
        core::f64::consts::FRAC_PI_2 * libm::sqrt(self.depth)
    }

    #[inline]
    pub(crate) fn f2_unchecked(&self, n: usize) -> f64 {
        self.beta - n as f64 / self.depth
    }
}

/// Largest integer strictly below `s` when `s` is integral, `floor(s)` otherwise.
fn strict_floor(s: f64) -> usize {
    let fl = libm::floor(s);
    if fl == s && s >= 1.0 {
        (fl - 1.0) as usize
    } else {
        fl as usize
    }
}

/// Highest bound level retained for this trap.
pub fn truncation_level(trap: &TrapParams) -> usize {
    trap.n_max
}

/// Squared deformation function `f²(n) = β − n/N`.
///
/// Defined up to `n_max + 2`, the range needed by the sideband transition
/// frequency.
pub fn deformation_f2(n: usize, trap: &TrapParams) -> Result<f64> {
    let limit = trap.n_max + 2;
    if n > limit {
        return Err(Error::Truncation { requested: n, limit });
    }
    let f2 = trap.f2_unchecked(n);
    if f2 < 0.0 {
        return Err(Error::Domain { level: n, f2 });
    }
    Ok(f2)
}

/// `f(n)`, the positive root of [`deformation_f2`].
pub fn deformation_f(n: usize, trap: &TrapParams) -> Result<f64> {
    deformation_f2(n, trap).map(libm::sqrt)
}

fn check_bound(n: usize, trap: &TrapParams) -> Result<()> {
    if n > trap.n_max {
        Err(Error::Truncation { requested: n, limit: trap.n_max })
    } else {
        Ok(())
    }
}

/// Energy `½[(n+1)f²(n+1) + n f²(n)]` of level `n` in units of `ħω`.
pub fn energy_deformed(n: usize, trap: &TrapParams) -> Result<f64> {
    check_bound(n, trap)?;
    let x = n as f64;
    Ok(0.5 * ((x + 1.0) * deformation_f2(n + 1, trap)? + x * deformation_f2(n, trap)?))
}

/// Bound-state energy of the well written directly as a quadratic in `n`.
pub fn energy_mpt(n: usize, trap: &TrapParams) -> Result<f64> {
    check_bound(n, trap)?;
    let x = n as f64;
    let shifted = trap.beta - trap.gamma;
    Ok(-x * x / trap.depth + shifted * x + 0.5 * shifted)
}

/// Sideband frequency `½[(n+2)f²(n+2) − n f²(n)]` in units of `ω`.
///
/// Equals `E(n+1) − E(n)`.
pub fn transition_frequency(n: usize, trap: &TrapParams) -> Result<f64> {
    let x = n as f64;
    Ok(0.5 * ((x + 2.0) * deformation_f2(n + 2, trap)? - x * deformation_f2(n, trap)?))
}
