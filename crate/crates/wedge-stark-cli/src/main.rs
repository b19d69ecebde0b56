//! Command-line interface for the wedge quantum-box Stark-shift solver.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

mod csv;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use wedge_stark::energy::{self, EnergyError};
use wedge_stark::model::{unit_scales, validate_geometry, FieldSpec, ModelError};
use wedge_stark::oracle::{fd_ground_energy, OracleError, PolarGrid};
use wedge_stark::quadrature::QuadratureError;
use wedge_stark::specfun::SpecFunError;
use wedge_stark::sweep::{run_sweep, FixedParams, SweepAxis, SweepError, SweepSpec};
use wedge_stark::variational::{stark_shift, VariationalError};

/// Worker-count override honored when --workers is not given.
const WORKERS_ENV: &str = "WEDGE_STARK_WORKERS";

#[derive(Parser)]
#[command(
    name = "wedge-stark",
    version,
    about = "Ground-state energy and Stark shift of an electron in a wedge-shaped quantum box",
    long_about = "Ground-state energy and Stark shift of an electron in a wedge-shaped quantum box.\n\
        All quantities use reduced atomic units: lengths in effective Bohr radii a*, energies in \n\
        effective Rydbergs R*, electric fields in F0 = R*/(e a*); angles are in radians. \n\
        The sweep subcommand runs its points concurrently; bound the worker count with --workers \n\
        or the WEDGE_STARK_WORKERS environment variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GeometryArgs {
    /// Slice radius d in effective Bohr radii a*
    #[arg(long)]
    d: f64,
    /// Angular aperture theta0 in radians, 0 < theta0 <= 2*pi
    #[arg(long)]
    theta0: f64,
    /// Thickness L in effective Bohr radii a*
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Field-free ground state: Bessel order m0, its first zero, and E0 in R*
    GroundState {
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Variational Stark shift at one geometry and field
    Shift {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Electric-field magnitude in units of F0 (applied toward the wide side)
        #[arg(long)]
        field: f64,
        /// Gauss-Legendre nodes along rho
        #[arg(long, default_value_t = 96)]
        nr: usize,
        /// Gauss-Legendre nodes along theta
        #[arg(long, default_value_t = 96)]
        nt: usize,
        /// Relative width tolerance of the beta bracket
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Scan the Stark shift along one axis and write a CSV table
    Sweep {
        /// Swept axis; the matching fixed parameter is ignored
        #[arg(long, value_parser = ["radius", "field", "aperture"])]
        axis: String,
        /// Comma-separated, strictly increasing axis values
        /// (radius in a*, field in F0, aperture in radians)
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Fixed slice radius in a* (ignored when axis = radius)
        #[arg(long, default_value_t = 10.0)]
        d: f64,
        /// Fixed aperture in radians (ignored when axis = aperture)
        #[arg(long, default_value_t = std::f64::consts::PI / 20.0)]
        theta0: f64,
        /// Thickness L in a* (the shift itself is L-independent)
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Fixed field in F0 (ignored when axis = field)
        #[arg(long, default_value_t = 1.0)]
        field: f64,
        #[arg(long, default_value_t = 96)]
        nr: usize,
        #[arg(long, default_value_t = 96)]
        nt: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Also compute the finite-difference shift per point
        #[arg(long)]
        oracle: bool,
        /// Finite-difference grid as NRxNT, e.g. 96x96
        #[arg(long, value_parser = parse_grid, default_value = "96x96")]
        oracle_grid: (usize, usize),
        /// Output CSV path (written via temp file + rename)
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the sweep (default: rayon's choice, or WEDGE_STARK_WORKERS)
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Finite-difference planar ground energy and Stark shift on one grid
    Oracle {
        /// Slice radius d in a*
        #[arg(long)]
        d: f64,
        /// Angular aperture theta0 in radians
        #[arg(long)]
        theta0: f64,
        /// Electric-field magnitude in F0
        #[arg(long)]
        field: f64,
        /// Grid as NRxNT, e.g. 96x96
        #[arg(long, value_parser = parse_grid, default_value = "96x96")]
        grid: (usize, usize),
    },
    /// Physical values of a*, R* and F0 for a material
    Units {
        /// Effective mass ratio m*/m_e (dimensionless)
        #[arg(long)]
        mass_ratio: f64,
        /// Relative dielectric constant (dimensionless; the solver itself uses 1)
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NRxNT, got '{s}'"))?;
    let nr = a.trim().parse::<usize>().map_err(|e| format!("bad NR '{a}': {e}"))?;
    let nt = b.trim().parse::<usize>().map_err(|e| format!("bad NT '{b}': {e}"))?;
    Ok((nr, nt))
}

enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        match &e {
            EnergyError::OrderTooLarge { .. }
            | EnergyError::BetaOutOfRange { .. }
            | EnergyError::OutsideWedge { .. } => CliError::Validation(e.to_string()),
            EnergyError::Quadrature(QuadratureError::UnsupportedOrder { .. }) => {
                CliError::Validation(e.to_string())
            }
            EnergyError::SpecFun(SpecFunError::InvalidOrder { .. })
            | EnergyError::SpecFun(SpecFunError::OrderOutOfRange { .. }) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<VariationalError> for CliError {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::Energy(inner) => inner.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match &e {
            OracleError::GridTooSmall { .. } => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match &e {
            SweepError::InvalidSpec { .. } => CliError::Validation(e.to_string()),
            SweepError::Partial { axis_value, completed, source } => CliError::Numerical(format!(
                "sweep failed at axis value {axis_value} after {} completed points: {source}",
                completed.len()
            )),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::GroundState { geometry } => {
            let g = validate_geometry(geometry.d, geometry.theta0, geometry.l)?;
            let gs = energy::ground_state(g)?;
            println!("m0           = {:e}", gs.m0);
            println!("alpha_m0_1   = {:e}", gs.alpha);
            println!("e0_ry        = {:e}", gs.e0);
            println!("e0_planar_ry = {:e}", gs.planar_energy());
            Ok(())
        }
        Command::Shift { geometry, field, nr, nt, tol } => {
            let g = validate_geometry(geometry.d, geometry.theta0, geometry.l)?;
            let f = FieldSpec::new(field)?;
            let r = stark_shift(g, f, nr, nt, tol)?;
            let gs = energy::ground_state(g)?;
            let quad_check = energy::quadrature_self_check(&gs, f, r.beta_star, nr, nt)?;
            println!("beta_star   = {:e}", r.beta_star);
            println!("e_min_ry    = {:e}", r.energy);
            println!("e0_ry       = {:e}", r.e0);
            println!("delta_e_ry  = {:e}", r.stark_shift);
            println!("evaluations = {}", r.evaluations);
            println!("converged   = {}", r.converged);
            println!("bracket     = ({:e}, {:e}, {:e})", r.bracket.0, r.bracket.1, r.bracket.2);
            println!("unimodal    = {}", r.unimodal);
            println!("quad_check  = {:e}", quad_check);
            if !r.unimodal {
                eprintln!("warning: coarse beta scan saw more than one local minimum");
            }
            if quad_check > 1e-8 {
                eprintln!(
                    "warning: doubling the quadrature changes E by {quad_check:e} relative; \
                     increase --nr/--nt"
                );
            }
            Ok(())
        }
        Command::Sweep {
            axis,
            values,
            d,
            theta0,
            l,
            field,
            nr,
            nt,
            tol,
            oracle,
            oracle_grid,
            out,
            workers,
        } => {
            let axis = SweepAxis::from_str(&axis).map_err(CliError::Validation)?;
            let spec = SweepSpec {
                axis,
                values,
                fixed: FixedParams {
                    d,
                    field,
                    theta0,
                    l,
                    nr,
                    nt,
                    tol,
                    oracle_nr: oracle_grid.0,
                    oracle_nt: oracle_grid.1,
                },
                with_oracle: oracle,
            };
            let workers = workers.or_else(|| {
                std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok())
            });
            let table = match workers {
                Some(n) if n > 0 => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| CliError::Validation(format!("worker pool: {e}")))?;
                    pool.install(|| run_sweep(&spec))?
                }
                _ => run_sweep(&spec)?,
            };
            csv::write_csv(&table, &out)?;
            println!("wrote {} records to {}", table.records.len(), out.display());
            Ok(())
        }
        Command::Oracle { d, theta0, field, grid } => {
            let g = validate_geometry(d, theta0, 1.0)?;
            let f = FieldSpec::new(field)?;
            let polar = PolarGrid::new(grid.0, grid.1, g)?;
            let at_field = fd_ground_energy(&polar, f.magnitude(), 1e-10)?;
            let at_zero = fd_ground_energy(&polar, 0.0, 1e-10)?;
            println!("e_fd_planar_ry = {:e}", at_field.energy);
            println!("residual       = {:e}", at_field.residual);
            println!("delta_e_fd_ry  = {:e}", at_field.energy - at_zero.energy);
            Ok(())
        }
        Command::Units { mass_ratio, epsilon } => {
            let u = unit_scales(mass_ratio, epsilon)?;
            println!("bohr_star_nm         = {:e}", u.bohr_star_nm);
            println!("rydberg_star_mev     = {:e}", u.rydberg_star_mev);
            println!("field_unit_kv_per_cm = {:e}", u.field_unit_kv_per_cm);
            Ok(())
        }
    }
}
