use std::fmt;
use std::io;

use finitetrap_core::observables::{mean_number, parity_at_origin, q_row, wigner_row, workspace_for_grid};
use finitetrap_core::steady_state::TRUNCATION_DOMINATED;
use finitetrap_core::{
    build_interaction_hamiltonian_dim, commutator_norm, deformation_f2, energy_deformed, energy_mpt, h_n,
    number_distribution, solve_steady_state_with, squeezing_parameter, squeezing_scan, stationarity_residual_with,
    transition_frequency, DriveParams, GridKind, GridSpec, MotionalState, PhaseSpaceGrid, Quadrature,
    SteadyStateOptions, TrapParams,
};
use rayon::prelude::*;

use crate::args::{expand_range, Command, CommonArgs, Format};
use crate::output::{write_atomic, Column, Meta, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(finitetrap_core::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Numerical(e) => e.name(),
            CliError::Io(_) => "IoError",
        }
    }

    /// `{"error": name, "message": text}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.name(), "message": self.to_string() }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<finitetrap_core::Error> for CliError {
    fn from(e: finitetrap_core::Error) -> Self {
        use finitetrap_core::Error as E;
        match e {
            E::Usage(_) | E::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Everything a command produced, before anything is written.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub table: Table,
    pub metadata: Vec<(String, Meta)>,
    pub dim: usize,
    pub leakage: Option<f64>,
    pub residual: Option<f64>,
    pub warnings: Vec<String>,
    /// `false` only for a failed `verify`.
    pub passed: bool,
}

impl Report {
    fn new(command: &'static str, args: &CommonArgs) -> Self {
        let mut metadata: Vec<(String, Meta)> = vec![
            ("command".into(), command.into()),
            ("depth".into(), Meta::List(args.depth.clone())),
            ("eta".into(), args.eta.into()),
            ("rabi_ratio".into(), args.rabi_ratio.into()),
            ("theta".into(), args.theta.into()),
            ("quadrature".into(), format!("{:?}", args.quadrature).to_lowercase().as_str().into()),
            ("points".into(), args.points.into()),
            ("half_width".into(), args.half_width.into()),
        ];
        if let Some(chi) = args.chi {
            metadata.push(("chi_re".into(), chi.re.into()));
            metadata.push(("chi_im".into(), chi.im.into()));
        }
        if let (Some(m), Some(w), Some(r)) = (args.mass, args.omega, args.range) {
            metadata.push(("mass".into(), m.into()));
            metadata.push(("omega".into(), w.into()));
            metadata.push(("range".into(), r.into()));
        }
        Self {
            command,
            table: Table::new(),
            metadata,
            dim: 0,
            leakage: None,
            residual: None,
            warnings: Vec::new(),
            passed: true,
        }
    }

    fn meta(&mut self, name: &str, value: impl Into<Meta>) {
        self.metadata.push((name.into(), value.into()));
    }

    /// One line: dim, leakage, residual.
    pub fn summary(&self) -> String {
        let show = |x: Option<f64>| x.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.3e}"));
        let mut line = format!(
            "{}: dim={} leakage={} residual={}",
            self.command,
            self.dim,
            show(self.leakage),
            show(self.residual)
        );
        if self.command == "verify" {
            line.push_str(if self.passed { " PASS" } else { " FAIL" });
        }
        line
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut meta = self.metadata.clone();
                meta.push(("dim".into(), self.dim.into()));
                meta.push(("leakage".into(), self.leakage.into()));
                meta.push(("residual".into(), self.residual.into()));
                self.table.to_json(self.command, &meta)
            }
        }
    }
}

/// Runs a command and writes its output file, if one was requested.
pub fn run(command: &Command) -> Result<Report, CliError> {
    let report = execute(command)?;
    let args = command.args();
    if let Some(path) = &args.out {
        write_atomic(path, report.render(args.format()).as_bytes())?;
    }
    Ok(report)
}

/// Computes a command's report without touching the file system.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    let args = command.args();
    if args.out.is_none() && !matches!(command, Command::Verify(_)) {
        return Err(CliError::Usage(format!("{} needs --out", command.name())));
    }
    let mut report = Report::new(command.name(), args);
    match command {
        Command::Spectrum(_) => spectrum(args, &mut report)?,
        Command::Deformation(_) => deformation(args, &mut report)?,
        Command::SteadyState(_) => steady_state(args, &mut report)?,
        Command::Pn(_) => pn(args, &mut report)?,
        Command::Squeeze(_) => squeeze(args, &mut report)?,
        Command::Qfunc(_) => phase_space(args, GridKind::Q, &mut report)?,
        Command::Wigner(_) => phase_space(args, GridKind::W, &mut report)?,
        Command::Verify(_) => verify(args, &mut report)?,
    }
    Ok(report)
}

fn single_trap(args: &CommonArgs) -> Result<TrapParams, CliError> {
    if let (Some(m), Some(w), Some(r)) = (args.mass, args.omega, args.range) {
        return Ok(TrapParams::from_physical(m, w, r)?);
    }
    match args.depth.as_slice() {
        [depth] => Ok(TrapParams::new(*depth)?),
        [] => Err(CliError::Usage("--depth (or --mass/--omega/--range) is required".into())),
        _ => Err(CliError::Usage("this command takes a single --depth".into())),
    }
}

fn drive(args: &CommonArgs) -> Result<DriveParams, CliError> {
    let eta = args.eta.ok_or_else(|| CliError::Usage("--eta is required".into()))?;
    let ratio = args.rabi_ratio.ok_or_else(|| CliError::Usage("--rabi-ratio is required".into()))?;
    Ok(DriveParams::new(eta, ratio)?)
}

fn trap_meta(report: &mut Report, trap: &TrapParams) {
    report.meta("N", trap.depth());
    report.meta("n_max", trap.n_max());
    report.meta("beta", trap.beta());
    if let Some(p) = trap.physical() {
        report.meta("well_depth", p.well_depth);
    }
}

/// Steady state plus its diagnostics in the report.
fn solve(args: &CommonArgs, report: &mut Report) -> Result<(TrapParams, DriveParams, MotionalState), CliError> {
    let trap = single_trap(args)?;
    let drive = drive(args)?;
    let options = SteadyStateOptions { dim: None, chi: args.chi };
    let state = solve_steady_state_with(&trap, &drive, &options)?;
    trap_meta(report, &trap);
    report.dim = state.dim();
    report.leakage = state.edge_residual();
    report.residual = state.eigen_residual();
    if let Some(chi) = state.chi() {
        report.meta("chi_used_re", chi.re);
        report.meta("chi_used_im", chi.im);
    }
    report.meta("edge_population", state.edge_population());
    report.meta("terminated_early", state.terminated_early());
    if let Some(reason) = state.termination_reason() {
        report.warnings.push(format!("recursion stopped early: {reason}"));
    }
    if state.truncation_dominated() {
        report.warnings.push(format!(
            "truncation dominated: population {:.3} at n_max exceeds {TRUNCATION_DOMINATED}",
            state.edge_population()
        ));
    }
    Ok((trap, drive, state))
}

fn spectrum(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let trap = single_trap(args)?;
    trap_meta(report, &trap);
    let levels = 0..trap.levels();
    let mpt: Vec<f64> = levels.clone().map(|n| energy_mpt(n, &trap)).collect::<Result<_, _>>()?;
    let deformed: Vec<f64> = levels.clone().map(|n| energy_deformed(n, &trap)).collect::<Result<_, _>>()?;
    let freq: Vec<f64> = levels.clone().map(|n| transition_frequency(n, &trap)).collect::<Result<_, _>>()?;
    report.dim = trap.levels();
    report.residual = mpt.iter().zip(&deformed).map(|(a, b)| (a - b).abs()).reduce(f64::max);
    report.table = Table::new()
        .with("n", Column::ints(levels))
        .with("energy_mpt", Column::floats(mpt))
        .with("energy_deformed", Column::floats(deformed))
        .with("transition_frequency", Column::floats(freq));
    Ok(())
}

fn deformation(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let trap = single_trap(args)?;
    let eta = args.eta.ok_or_else(|| CliError::Usage("--eta is required".into()))?;
    trap_meta(report, &trap);
    let levels = 0..trap.levels();
    let f2: Vec<f64> = levels.clone().map(|n| deformation_f2(n, &trap)).collect::<Result<_, _>>()?;
    let mut h = Vec::with_capacity(trap.levels());
    for n in levels.clone() {
        h.push(match n {
            0 => None,
            _ => match h_n(n, eta, &trap) {
                Ok(v) => Some(v),
                Err(e @ finitetrap_core::Error::SingularDenominator { .. }) => {
                    report.warnings.push(format!("{e}"));
                    None
                }
                Err(e) => return Err(e.into()),
            },
        });
    }
    report.dim = trap.levels();
    report.table =
        Table::new().with("n", Column::ints(levels)).with("f2", Column::floats(f2)).with("h", Column::Float(h));
    Ok(())
}

fn steady_state(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let (_, _, state) = solve(args, report)?;
    let amps = state.amplitudes();
    report.table = Table::new()
        .with("n", Column::ints(0..amps.len()))
        .with("re", Column::floats(amps.iter().map(|c| c.re)))
        .with("im", Column::floats(amps.iter().map(|c| c.im)));
    Ok(())
}

fn pn(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let (_, _, state) = solve(args, report)?;
    let p = number_distribution(&state);
    report.meta("mean_n", mean_number(&state));
    let quadrature = Quadrature::from(args.quadrature);
    if let Ok(s) = squeezing_parameter(&state, args.theta, quadrature) {
        report.meta("squeezing", s);
    }
    report.table = Table::new().with("n", Column::ints(0..p.len())).with("p", Column::floats(p));
    Ok(())
}

fn squeeze(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let depths = match args.depth_range {
        Some(range) => expand_range(range),
        None => args.depth.clone(),
    };
    if depths.is_empty() {
        return Err(CliError::Usage("--depth or --depth-range is required".into()));
    }
    let drive = drive(args)?;
    let quadrature = Quadrature::from(args.quadrature);
    let scan = squeezing_scan(&depths, &drive, args.theta, quadrature)?;
    for (depth, err) in &scan.failures {
        report.warnings.push(format!("N={depth}: {}: {err}", err.name()));
    }
    if let Some((depth, s)) = scan.minimum() {
        report.meta("min_N", depth);
        report.meta("min_S", s);
    }
    if let Some(entry) = report.metadata.iter_mut().find(|(n, _)| n == "depth") {
        entry.1 = Meta::List(depths.clone());
    }
    report.dim = depths.len();
    report.table = Table::new().with("N", Column::floats(depths)).with("S", Column::Float(scan.s_values));
    Ok(())
}

/// Worker count from `FINITETRAP_THREADS`; 0 or unset lets rayon decide.
pub fn thread_count() -> usize {
    std::env::var("FINITETRAP_THREADS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Evaluates a Q or W grid with rows spread over a thread pool. Rows are
/// collected in order, so the result does not depend on the thread count.
pub fn evaluate_grid(
    state: &MotionalState,
    spec: &GridSpec,
    kind: GridKind,
    workspace: usize,
    threads: usize,
) -> Result<PhaseSpaceGrid, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<(f64, f64)>> = pool.install(|| {
        (0..spec.n_re)
            .into_par_iter()
            .map(|i| match kind {
                GridKind::Q => q_row(state, spec, i),
                GridKind::W => wigner_row(state, spec, i, workspace),
            })
            .collect()
    });
    Ok(PhaseSpaceGrid::assemble(*spec, kind, spec.covers(state), rows)?)
}

fn phase_space(args: &CommonArgs, kind: GridKind, report: &mut Report) -> Result<(), CliError> {
    let (_, _, state) = solve(args, report)?;
    let half_width = args.half_width.unwrap_or_else(|| GridSpec::auto_half_width(&state));
    let spec = GridSpec::square(half_width, args.points)?;
    let workspace = match kind {
        GridKind::Q => 0,
        GridKind::W => {
            let k = args.workspace.unwrap_or_else(|| workspace_for_grid(state.dim(), &spec));
            if k < 4 * state.dim() {
                return Err(CliError::Usage(format!("--workspace must be at least {}", 4 * state.dim())));
            }
            report.meta("workspace", k);
            k
        }
    };
    let grid = evaluate_grid(&state, &spec, kind, workspace, thread_count())?;
    report.meta("grid_half_width", half_width);
    report.meta("coverage_ok", grid.coverage_ok);
    report.meta("integral", grid.integral());
    report.meta("min", grid.min());
    report.meta("max", grid.max());
    if kind == GridKind::W {
        report.meta("workspace_leakage", grid.max_leakage);
        report.meta("leaky_points", grid.leaky_points);
        report.meta("parity_at_origin", parity_at_origin(&state));
        if grid.leaky_points > 0 {
            report.warnings.push(format!(
                "{} grid points lost more than 1e-6 of the norm in the workspace (max {:.2e}); raise --workspace",
                grid.leaky_points, grid.max_leakage
            ));
        }
    }
    if !grid.coverage_ok {
        report.warnings.push("grid half-width is below 2*sqrt(<n>+3); integrals may be short".into());
    }
    let mut re = Vec::with_capacity(spec.len());
    let mut im = Vec::with_capacity(spec.len());
    for i in 0..spec.n_re {
        for j in 0..spec.n_im {
            re.push(spec.re(i));
            im.push(spec.im(j));
        }
    }
    report.table = Table::new()
        .with("re", Column::floats(re))
        .with("im", Column::floats(im))
        .with("value", Column::floats(grid.values));
    Ok(())
}

fn verify(args: &CommonArgs, report: &mut Report) -> Result<(), CliError> {
    let (trap, drive, state) = solve(args, report)?;
    let h = build_interaction_hamiltonian_dim(&trap, &drive, state.dim())?;
    let residual = stationarity_residual_with(&state, &h)?;
    let commutator = commutator_norm(&state, &h)?;
    report.leakage = state.edge_residual();
    report.residual = Some(residual);
    report.passed = residual <= args.tol;
    report.meta("stationarity_residual", residual);
    report.meta("commutator_norm", commutator);
    report.meta("hermiticity_defect", h.hermiticity_defect());
    report.meta("tolerance", args.tol);
    report.table = Table::new()
        .with("stationarity_residual", Column::floats([residual]))
        .with("commutator_norm", Column::floats([commutator]))
        .with("eigen_residual", Column::Float(vec![state.eigen_residual()]));
    Ok(())
}
