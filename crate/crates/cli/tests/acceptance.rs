//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_4};
use std::fs;
use std::process::Command;

use clap::Parser;
use finitetrap::output::parse_json_columns;
use finitetrap::run::{evaluate_grid, execute, thread_count};
use finitetrap::{Cli, Format};
use finitetrap_core::observables::{
    mean_number, parity_at_origin, q_value, wigner_value, workspace_for_grid, DEFAULT_POINTS,
};
use finitetrap_core::{
    build_interaction_hamiltonian_dim, build_ladder, build_nlcs, energy_deformed, energy_mpt, h_n, laguerre_h,
    number_distribution, quadrature_variance, solve_steady_state, solve_steady_state_with, squeezing_scan,
    stationarity_residual_with, Complex64, DriveParams, GridKind, GridSpec, MotionalState, Quadrature,
    SteadyStateOptions, TrapParams,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn trap(depth: f64) -> TrapParams {
    TrapParams::new(depth).unwrap()
}

fn steady(depth: f64, eta: f64, ratio: f64) -> (TrapParams, DriveParams, MotionalState) {
    let t = trap(depth);
    let d = DriveParams::new(eta, ratio).unwrap();
    let s = solve_steady_state(&t, &d).unwrap();
    (t, d, s)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spectrum_identity() -> Outcome {
    let mut worst = 0.0f64;
    for depth in [7.0, 26.0, 30.0, 45.0, 75.0] {
        let t = trap(depth);
        for n in 0..=t.n_max() {
            worst = worst.max((energy_mpt(n, &t).unwrap() - energy_deformed(n, &t).unwrap()).abs());
        }
    }
    // n_max from s = (sqrt(1+N²) − 1)/2, stepping down when s is an integer
    let independent = |depth: f64| {
        let s = ((1.0 + depth * depth).sqrt() - 1.0) / 2.0;
        if s.fract() == 0.0 {
            s as usize - 1
        } else {
            s.floor() as usize
        }
    };
    let cuts: Vec<(usize, usize, usize)> =
        [(7.0, 3), (30.0, 14), (75.0, 37)].iter().map(|&(d, e)| (trap(d).n_max(), independent(d), e)).collect();
    let cuts_ok = cuts.iter().all(|&(a, b, e)| a == e && b == e);
    check(
        worst <= 1e-12 && cuts_ok,
        format!("max |ΔE| = {worst:.2e}, n_max(7,30,75) = {:?}", cuts.iter().map(|c| c.0).collect::<Vec<_>>()),
    )
}

fn deformed_algebra() -> Outcome {
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for depth in [7.0, 26.0, 45.0, 75.0] {
        let t = trap(depth);
        let dim = t.levels();
        let (a, ad) = build_ladder(&t, dim).unwrap();
        let c = a.commutator(&ad).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                if i == j && i + 1 < dim {
                    let expected = t.beta() - (2 * i + 1) as f64 / depth;
                    diag = diag.max((c[(i, i)].re - expected).abs() + c[(i, i)].im.abs());
                } else if i != j {
                    off = off.max(c[(i, j)].norm());
                }
            }
        }
    }
    check(diag <= 1e-12 && off <= 1e-14, format!("diagonal error {diag:.2e}, off-diagonal {off:.2e}"))
}

fn harmonic_limit() -> Outcome {
    let t = trap(1e8);
    let mut worst_h = 0.0f64;
    let mut worst_fid = 1.0f64;
    for (eta, ratio) in [(0.22, 0.85), (0.25, 0.31), (0.75, 0.9)] {
        for n in 1..=10 {
            let h = h_n(n, eta, &t).unwrap();
            let l = laguerre_h(n, eta).unwrap();
            worst_h = worst_h.max(((h - l) / l).abs());
        }
        let dim = 60;
        let d = DriveParams::new(eta, ratio).unwrap();
        let s = solve_steady_state_with(&t, &d, &SteadyStateOptions { dim: Some(dim), chi: None }).unwrap();
        let f: Vec<f64> = (1..dim).map(|n| laguerre_h(n, eta).unwrap()).collect();
        let oracle = build_nlcs(&f, Complex64::new(0.0, ratio / eta), dim - 1).unwrap();
        worst_fid = worst_fid.min(s.fidelity(&oracle));
    }
    check(
        worst_h <= 1e-4 && worst_fid >= 1.0 - 1e-6,
        format!("max relative h error {worst_h:.2e}, min fidelity 1 - {:.2e}", 1.0 - worst_fid),
    )
}

fn stationarity() -> Outcome {
    let mut worst = 0.0f64;
    for depth in [15.0, 30.0, 45.0, 75.0] {
        let (t, d, s) = steady(depth, 0.22, 0.85);
        let h = build_interaction_hamiltonian_dim(&t, &d, s.dim()).unwrap();
        worst = worst.max(stationarity_residual_with(&s, &h).unwrap());
    }
    let (t, d, s) = steady(45.0, 0.22, 0.85);
    let mut amps = s.amplitudes().to_vec();
    amps[1] += 0.1;
    let bad = MotionalState::from_amplitudes(amps).unwrap();
    let h = build_interaction_hamiltonian_dim(&t, &d, s.dim()).unwrap();
    let control = stationarity_residual_with(&bad, &h).unwrap();
    check(worst <= 1e-10 && control > 1e-3, format!("max residual {worst:.2e}, perturbed state {control:.2e}"))
}

fn normalizations() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (depth, eta, ratio) in [(45.0, 0.22, 0.85), (26.0, 0.75, 0.9)] {
        let (_, _, s) = steady(depth, eta, ratio);
        let p_sum: f64 = number_distribution(&s).iter().sum();
        let spec = GridSpec::auto(&s, DEFAULT_POINTS).unwrap();
        let q = evaluate_grid(&s, &spec, GridKind::Q, 0, thread_count()).unwrap();
        let w = evaluate_grid(&s, &spec, GridKind::W, workspace_for_grid(s.dim(), &spec), thread_count()).unwrap();
        let w0 = wigner_value(&s, Complex64::new(0.0, 0.0), workspace_for_grid(s.dim(), &spec)).0;
        let parity = (w0 - parity_at_origin(&s)).abs();
        ok &= (p_sum - 1.0).abs() <= 1e-12
            && (q.integral() - 1.0).abs() <= 0.02
            && (w.integral() - 1.0).abs() <= 0.02
            && q.min() >= -1e-14
            && parity <= 1e-10;
        details.push(format!(
            "N={depth}: Σp-1={:.1e} ∫Q={:.6} ∫W={:.6} minQ={:.1e} |W(0)-parity|={parity:.1e}",
            p_sum - 1.0,
            q.integral(),
            w.integral(),
            q.min()
        ));
    }
    check(ok, details.join("; "))
}

fn interior_peak() -> Outcome {
    let (t, _, s) = steady(45.0, 0.22, 0.85);
    let p = number_distribution(&s);
    let (star, &pmax) = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let unique = p.iter().enumerate().all(|(n, &v)| n == star || v < pmax);
    check(
        star > 0 && star < t.n_max() && unique,
        format!("argmax n* = {star} of n_max = {}, p(n*) = {pmax:.4}, <n> = {:.2}", t.n_max(), mean_number(&s)),
    )
}

fn squeezing_sweep() -> Outcome {
    let depths: Vec<f64> = (0..=190).map(|i| 5.0 + 0.5 * i as f64).collect();
    let drive = DriveParams::new(0.25, 0.31).unwrap();
    let scan = squeezing_scan(&depths, &drive, FRAC_PI_4, Quadrature::Deformed).unwrap();
    let bare = squeezing_scan(&depths, &drive, FRAC_PI_4, Quadrature::Bare).unwrap();
    let (n_min, s_min) = scan.minimum().unwrap();
    let negative = scan.s_values.iter().flatten().filter(|&&s| s < 0.0).count();
    check(
        s_min < 0.0 && scan.failures.is_empty(),
        format!(
            "deformed quadrature: min S = {s_min:.4} at N = {n_min}, {negative}/{} depths squeezed (bare-operator min S = {:.2e})",
            depths.len(),
            bare.minimum().unwrap().1
        ),
    )
}

fn wigner_negativity() -> Outcome {
    let combos = [(45.0, 0.75), (45.0, 0.5), (45.0, 0.25), (7.0, 0.75), (26.0, 0.75), (75.0, 0.75)];
    let mut mins = Vec::new();
    let mut ok = true;
    for (depth, eta) in combos {
        let (_, _, s) = steady(depth, eta, 0.9);
        let spec = GridSpec::auto(&s, DEFAULT_POINTS).unwrap();
        let w = evaluate_grid(&s, &spec, GridKind::W, workspace_for_grid(s.dim(), &spec), thread_count()).unwrap();
        ok &= w.min() < 0.0 && w.leaky_points == 0;
        mins.push(format!("(N={depth}, η={eta}) {:.2e}", w.min()));
    }
    check(ok, format!("min W: {}", mins.join(", ")))
}

fn closed_forms() -> Outcome {
    let origin = Complex64::new(0.0, 0.0);
    let vac = MotionalState::vacuum(1).unwrap();
    let one = MotionalState::fock(1, 2).unwrap();
    let coh = MotionalState::coherent(Complex64::new(1.1, -0.4), 60).unwrap();
    let errors = [
        (q_value(&vac, origin) - FRAC_1_PI).abs(),
        (wigner_value(&vac, origin, 24).0 - 2.0 * FRAC_1_PI).abs(),
        (wigner_value(&one, origin, 24).0 + 2.0 * FRAC_1_PI).abs(),
        (quadrature_variance(&coh, 0.3, Quadrature::Bare).unwrap() - 0.25).abs(),
    ];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    check(worst <= 1e-10, format!("max error {worst:.2e}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_finitetrap");
    let cases: [(&str, &[&str]); 3] = [
        ("pn.json", &["pn", "--depth", "45", "--eta", "0.22", "--rabi-ratio", "0.85"]),
        ("w.csv", &["wigner", "--depth", "15", "--eta", "0.22", "--rabi-ratio", "0.85", "--points", "41"]),
        ("sq.json", &["squeeze", "--depth", "5,10,20,40", "--eta", "0.25", "--rabi-ratio", "0.31"]),
    ];
    let mut identical = true;
    for (name, args) in cases {
        let mut outputs = Vec::new();
        for (run, threads) in [(0, "1"), (1, "3")] {
            let path = dir.path().join(format!("{run}-{name}"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&path)
                .env("FINITETRAP_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!("{name}: exit {:?}", status.status.code()));
            }
            outputs.push(fs::read(&path).map_err(|e| e.to_string())?);
        }
        identical &= outputs[0] == outputs[1];
    }
    // JSON round trip against the in-memory report
    let cli = Cli::try_parse_from([
        "finitetrap",
        "steady-state",
        "--depth",
        "30",
        "--eta",
        "0.22",
        "--rabi-ratio",
        "0.85",
        "--out",
        "x.json",
    ])
    .map_err(|e| e.to_string())?;
    let report = execute(&cli.command).map_err(|e| e.to_string())?;
    let parsed = parse_json_columns(&report.render(Format::Json)).map_err(|e| e.to_string())?;
    let mut exact = parsed.len() == report.table.columns.len();
    for ((name, values), (expected_name, column)) in parsed.iter().zip(&report.table.columns) {
        exact &= name == expected_name;
        let expected: Vec<f64> = match column {
            finitetrap::output::Column::Int(v) => v.iter().map(|&i| i as f64).collect(),
            finitetrap::output::Column::Float(v) => v.iter().map(|x| x.unwrap_or(f64::NAN)).collect(),
        };
        exact &=
            values.len() == expected.len() && values.iter().zip(&expected).all(|(a, b)| a.to_bits() == b.to_bits());
    }
    check(identical && exact, format!("byte-identical reruns: {identical}, JSON round trip exact: {exact}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("spectrum identity", spectrum_identity),
        ("deformed algebra", deformed_algebra),
        ("harmonic limit", harmonic_limit),
        ("stationarity", stationarity),
        ("normalizations", normalizations),
        ("number distribution peak (N=45)", interior_peak),
        ("quadrature squeezing sweep", squeezing_sweep),
        ("Wigner negativity", wigner_negativity),
        ("closed-form sanity", closed_forms),
        ("determinism and round trip", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
