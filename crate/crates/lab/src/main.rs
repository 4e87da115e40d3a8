use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rigidlab::commands;
use rigidlab::{Rejected, ScenarioConfig};

const CSV_HELP: &str = "\
Per-node CSV columns (all files start with node,ring,col,theta,lambda):
  verify_nodes.csv   rho, support (u = <V, nu>), sigma1, sigma2, kappa1, kappa2,
                     hessian_defect, grad_relation_defect, codazzi_div_defect,
                     and for pairs weight (phi~' u + phi' u~), gap (sigma2 - sigma11),
                     rigidity_integrand (weight * gap)
  geometry.csv       rho, x0..x3 (model coordinates; K = 0 uses x0..x2),
                     nu0..nu3 (unit normal), g_tt g_tl g_ll, h_tt h_tl h_ll,
                     w_tt w_tl w_lt w_ll (W = g^-1 h, row = upper index),
                     kappa1, kappa2, sigma1, sigma2, scalar_curvature,
                     support, phi, phi_prime, potential, area_weight
  converge.csv       n_colat, n_lon, then each residual with its observed order
                     (log2 ratio to the previous level, N/A at the rounding floor)

Exit codes: 0 success / CONGRUENT, 1 invalid input or domain violation,
2 NOT_ISOMETRIC, 3 HYPOTHESIS_FAIL, 4 UNDECIDED.";

#[derive(Parser, Debug)]
#[command(name = "rigidlab", version, about = "Integral-formula rigidity lab for star-shaped surfaces in space forms", after_help = CSV_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (TOML)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory (overrides [output].dir)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for `random` surfaces
    #[arg(long)]
    seed: Option<u64>,
    /// Isometry gate on the relative metric defect
    #[arg(long, value_name = "TOL")]
    tol_isometry: Option<f64>,
    /// Bound on the Garding gap and the normalized rigidity integral
    #[arg(long, value_name = "TOL")]
    tol_gap: Option<f64>,
    /// Bound on max |W - W~|
    #[arg(long, value_name = "TOL")]
    tol_w: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-surface identity residuals, plus integral formulas when [pair] is set
    Verify(Common),
    /// Congruence decision for M and M~
    Congruence {
        #[command(flatten)]
        common: Common,
        /// Scenario holding the surface M~ (same curvature and grid)
        #[arg(long, value_name = "PATH")]
        config_tilde: Option<PathBuf>,
    },
    /// Residuals at doubling resolutions with observed orders
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Per-node geometry as CSV
    DumpGeometry(Common),
}

fn load(common: &Common, path: &Path) -> anyhow::Result<ScenarioConfig> {
    let mut cfg =
        ScenarioConfig::load(path).map_err(|e| Rejected(format!("{}: {e}", path.display())))?;
    cfg.resolve(common.seed);
    let t = &mut cfg.tolerances;
    if let Some(v) = common.tol_isometry {
        t.isometry = v;
    }
    if let Some(v) = common.tol_gap {
        t.gap = v;
    }
    if let Some(v) = common.tol_w {
        t.w_match = v;
    }
    cfg.validate()
        .map_err(|e| Rejected(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Verify(c) => {
            let cfg = load(&c, &c.config)?;
            let out = c.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
            commands::verify(&cfg, &out)
        }
        Command::Congruence {
            common,
            config_tilde,
        } => {
            let cfg = load(&common, &common.config)?;
            let tilde = config_tilde
                .as_deref()
                .map(|p| load(&common, p))
                .transpose()?;
            let out = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
            commands::congruence(&cfg, tilde.as_ref(), &out)
        }
        Command::Converge { common, levels } => {
            let cfg = load(&common, &common.config)?;
            let out = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
            commands::converge(&cfg, levels, &out)
        }
        Command::DumpGeometry(c) => {
            let cfg = load(&c, &c.config)?;
            let out = c.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
            commands::dump_geometry(&cfg, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share exit 1 with invalid input; 2 means NOT_ISOMETRIC
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::EXIT_CONFIG as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if e.downcast_ref::<Rejected>().is_some() {
                eprintln!("rejected: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(commands::EXIT_CONFIG as u8)
        }
    }
}
