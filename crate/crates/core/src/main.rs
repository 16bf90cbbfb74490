use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spinfp::scenarios::{convert_units, run_sweep, verify, PhysicalParams, SweepConfig};
use spinfp::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "spinfp", version, about = "Electron transmission through a wire with two magnetic impurities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write CSV (to stdout unless the config sets `output`)
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the reproduction checks and print one line per criterion
    Verify,
    /// Convert laboratory parameters to the dimensionless coupling and phase
    #[command(allow_negative_numbers = true)]
    Convert {
        /// Effective mass in units of the bare electron mass
        #[arg(long)]
        mstar: f64,
        #[arg(long = "energy-mev")]
        energy_mev: f64,
        #[arg(long = "coupling-evA")]
        coupling_ev_angstrom: f64,
        #[arg(long = "x0-nm")]
        x0_nm: Option<f64>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::InvalidParams(_) | Error::Domain(_) | Error::Io(_) => EXIT_CONFIG,
        Error::NotNormalized(_) | Error::Singular(_) | Error::Numeric(_) => EXIT_NUMERIC,
    }
}

fn sweep(config: &Path, out: &mut dyn Write) -> Result<(), Error> {
    let cfg = SweepConfig::from_file(config)?;
    let table = run_sweep(&cfg)?;
    match &cfg.output {
        Some(path) => {
            table.write_to(path)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
            Ok(())
        }
        None => table.write_csv(out),
    }
}

fn convert(phys: &PhysicalParams, out: &mut dyn Write) -> Result<(), Error> {
    let c = convert_units(phys)?;
    writeln!(out, "k = {:.6e} 1/m", c.k)?;
    writeln!(out, "rho(E) = {:.6e} 1/(J m)", c.density_of_states)?;
    writeln!(out, "u = {:.6}", c.u)?;
    match c.theta {
        Some(theta) => writeln!(out, "theta = {theta:.6} rad ({:.6} pi)", theta / std::f64::consts::PI)?,
        None => writeln!(out, "theta = (no spacing given)")?,
    }
    writeln!(out, "x0 for theta = pi: {:.3} nm", c.resonant_spacing_nm)?;
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Sweep { config } => sweep(&config, out),
        Command::Verify => {
            let reports = verify::run();
            let write = reports.iter().try_for_each(|r| writeln!(out, "{r}"));
            let failed = reports.iter().filter(|r| !r.passed).count();
            match write {
                Err(e) => Err(e.into()),
                Ok(()) if failed > 0 => {
                    eprintln!("{failed} of {} criteria failed", reports.len());
                    return EXIT_VERIFY;
                }
                Ok(()) => Ok(()),
            }
        }
        Command::Convert {
            mstar,
            energy_mev,
            coupling_ev_angstrom,
            x0_nm,
        } => convert(
            &PhysicalParams {
                effective_mass: mstar,
                energy_mev,
                coupling_ev_angstrom,
                spacing_nm: x0_nm,
            },
            out,
        ),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not failures; usage errors count as config errors
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    ExitCode::from(run(cli, &mut io::stdout().lock()))
}
