use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finitetrap_core::{Complex64, Quadrature};

#[derive(Debug, Parser)]
#[command(name = "finitetrap", version, about = "Steady states of an ion in a finite-range trap")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and transition frequencies of the bound levels.
    Spectrum(CommonArgs),
    /// f²(n) and the steady-state deformation h(n).
    Deformation(CommonArgs),
    /// Fock amplitudes of the steady state.
    SteadyState(CommonArgs),
    /// Number distribution of the steady state.
    Pn(CommonArgs),
    /// Squeezing parameter over a list of trap depths.
    Squeeze(CommonArgs),
    /// Husimi Q function on a grid.
    Qfunc(CommonArgs),
    /// Wigner function on a grid.
    Wigner(CommonArgs),
    /// Checks that |g⟩|ψ⟩ is annihilated by the interaction Hamiltonian.
    Verify(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Deformation(_) => "deformation",
            Command::SteadyState(_) => "steady-state",
            Command::Pn(_) => "pn",
            Command::Squeeze(_) => "squeeze",
            Command::Qfunc(_) => "qfunc",
            Command::Wigner(_) => "wigner",
            Command::Verify(_) => "verify",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::Deformation(a)
            | Command::SteadyState(a)
            | Command::Pn(a)
            | Command::Squeeze(a)
            | Command::Qfunc(a)
            | Command::Wigner(a)
            | Command::Verify(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadratureArg {
    Bare,
    Deformed,
}

impl From<QuadratureArg> for Quadrature {
    fn from(q: QuadratureArg) -> Self {
        match q {
            QuadratureArg::Bare => Quadrature::Bare,
            QuadratureArg::Deformed => Quadrature::Deformed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Trap depth N; a comma-separated list for `squeeze`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub depth: Vec<f64>,
    /// Inclusive depth sweep `start:stop:step` (squeeze only).
    #[arg(long, value_parser = parse_range, conflicts_with = "depth")]
    pub depth_range: Option<(f64, f64, f64)>,
    /// Ion mass in kg (with --omega and --range instead of --depth).
    #[arg(long, requires_all = ["omega", "range"], conflicts_with = "depth")]
    pub mass: Option<f64>,
    /// Trap frequency in rad/s.
    #[arg(long, requires_all = ["mass", "range"])]
    pub omega: Option<f64>,
    /// Potential range δ in m.
    #[arg(long, requires_all = ["mass", "omega"])]
    pub range: Option<f64>,
    /// Lamb–Dicke parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Carrier to sideband Rabi frequency ratio Ω₀/Ω₁.
    #[arg(long, allow_hyphen_values = true)]
    pub rabi_ratio: Option<f64>,
    /// Quadrature angle.
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    pub theta: f64,
    /// Eigenvalue override `RE,IM`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub chi: Option<Complex64>,
    #[arg(long, value_enum, default_value_t = QuadratureArg::Deformed)]
    pub quadrature: QuadratureArg,
    /// Grid half-width; automatic from ⟨n̂⟩ when omitted.
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = finitetrap_core::observables::DEFAULT_POINTS)]
    pub points: usize,
    /// Bare Fock workspace for Wigner displacements.
    #[arg(long)]
    pub workspace: Option<usize>,
    /// Residual tolerance for `verify`.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; taken from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl CommonArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.out {
            Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
            _ => Format::Csv,
        })
    }
}

fn parse_range(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err("expected start:stop:step".into());
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
    if !(step > 0.0 && start <= stop && start.is_finite() && stop.is_finite()) {
        return Err("need start <= stop and step > 0".into());
    }
    Ok((start, stop, step))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected RE,IM")?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Complex64::new(re, im))
}

/// Points of an inclusive sweep, computed from the index to avoid drift.
pub fn expand_range((start, stop, step): (f64, f64, f64)) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(expand_range((5.0, 6.0, 0.5)), vec![5.0, 5.5, 6.0]);
        assert_eq!(expand_range((5.0, 100.0, 1.0)).len(), 96);
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("3:2:1").is_err());
    }

    #[test]
    fn complex_flag() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert!(parse_complex("0.5").is_err());
    }

    #[test]
    fn parses_lists() {
        let cli = Cli::try_parse_from(["finitetrap", "squeeze", "--depth", "5,10,15", "--eta", "0.25"]).unwrap();
        assert_eq!(cli.command.args().depth, vec![5.0, 10.0, 15.0]);
        assert_eq!(cli.command.args().theta, FRAC_PI_4);
        assert!(Cli::try_parse_from(["finitetrap", "pn", "--mass", "1"]).is_err());
    }
}
