use finitetrap_core::observables::{mean_number, q_value};
use finitetrap_core::*;
use proptest::prelude::*;

fn drive_for(trap: &TrapParams, eta_frac: f64, ratio: f64) -> DriveParams {
    DriveParams::new(eta_frac * trap.eta_critical(), ratio).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_is_increasing_below_the_edge(depth in 3.0f64..200.0) {
        let t = TrapParams::new(depth).unwrap();
        for n in 1..=t.n_max() {
            prop_assert!(energy_deformed(n, &t).unwrap() > energy_deformed(n - 1, &t).unwrap());
        }
        prop_assert!(deformation_f2(t.n_max(), &t).unwrap() > 0.0);
    }

    #[test]
    fn steady_state_is_normalized_and_stationary(depth in 6.0f64..120.0, eta_frac in 0.02f64..0.5, ratio in 0.0f64..1.2) {
        let t = TrapParams::new(depth).unwrap();
        let d = drive_for(&t, eta_frac, ratio);
        let s = solve_steady_state(&t, &d).unwrap();
        prop_assume!(!s.terminated_early());
        let total: f64 = number_distribution(&s).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let h = build_interaction_hamiltonian_dim(&t, &d, s.dim()).unwrap();
        prop_assert!(h.is_hermitian(1e-12));
        let scale = 1.0 + h.frobenius_norm();
        prop_assert!(stationarity_residual_with(&s, &h).unwrap() < 1e-10 * scale);
    }

    #[test]
    fn q_is_a_bounded_density(depth in 6.0f64..80.0, re in -6.0f64..6.0, im in -6.0f64..6.0) {
        let t = TrapParams::new(depth).unwrap();
        let s = solve_steady_state(&t, &drive_for(&t, 0.1, 0.9)).unwrap();
        let q = q_value(&s, Complex64::new(re, im));
        prop_assert!((-1e-14..=1.0 / std::f64::consts::PI + 1e-14).contains(&q));
    }

    #[test]
    fn quadrature_variance_respects_uncertainty(depth in 6.0f64..80.0, theta in 0.0f64..3.2) {
        // Var(X_θ)·Var(X_{θ+π/2}) ≥ ¼|⟨[X_θ, X_{θ+π/2}]⟩|² = 1/16 for bare operators
        let t = TrapParams::new(depth).unwrap();
        let s = solve_steady_state(&t, &drive_for(&t, 0.1, 0.9)).unwrap();
        let a = quadrature_variance(&s, theta, Quadrature::Bare).unwrap();
        let b = quadrature_variance(&s, theta + std::f64::consts::FRAC_PI_2, Quadrature::Bare).unwrap();
        prop_assert!(a * b >= 1.0 / 16.0 - 1e-12);
    }

    #[test]
    fn zero_ratio_gives_vacuum(depth in 4.0f64..150.0, eta_frac in 0.02f64..0.9) {
        let t = TrapParams::new(depth).unwrap();
        let s = solve_steady_state(&t, &drive_for(&t, eta_frac, 0.0)).unwrap();
        prop_assert_eq!(mean_number(&s), 0.0);
    }
}
