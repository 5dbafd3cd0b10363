use alloc::vec::Vec;

use crate::steady_state::MotionalState;
use crate::sum::compensated_sum;

/// `p(n) = |c_n|²`.
pub fn number_distribution(state: &MotionalState) -> Vec<f64> {
    state.amplitudes().iter().map(|c| c.norm_sqr()).collect()
}

/// `⟨n̂⟩`.
pub fn mean_number(state: &MotionalState) -> f64 {
    compensated_sum(state.amplitudes().iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()))
}

/// `W(0) = (2/π)·Σ (−1)ⁿ p(n)`, straight from the number distribution.
pub fn parity_at_origin(state: &MotionalState) -> f64 {
    let parity =
        compensated_sum(
            number_distribution(state).into_iter().enumerate().map(|(n, p)| if n % 2 == 0 { p } else { -p }),
        );
    2.0 / core::f64::consts::PI * parity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::DriveParams;
    use crate::steady_state::solve_steady_state;
    use crate::trap::TrapParams;
    use num_complex::Complex64;

    #[test]
    fn vacuum_distribution() {
        let p = number_distribution(&MotionalState::vacuum(6).unwrap());
        assert_eq!(p, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn sums_to_one() {
        for depth in [15.0, 45.0, 75.0] {
            let t = TrapParams::new(depth).unwrap();
            let s = solve_steady_state(&t, &DriveParams::new(0.22, 0.85).unwrap()).unwrap();
            let total: f64 = number_distribution(&s).iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn coherent_mean_number() {
        let alpha = Complex64::new(1.2, 0.4);
        let s = MotionalState::coherent(alpha, 50).unwrap();
        assert!((mean_number(&s) - alpha.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn parity_of_fock_states() {
        let two_over_pi = 2.0 / core::f64::consts::PI;
        assert_eq!(parity_at_origin(&MotionalState::fock(0, 3).unwrap()), two_over_pi);
        assert_eq!(parity_at_origin(&MotionalState::fock(1, 3).unwrap()), -two_over_pi);
    }
}
