use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asym_mhd::config::{make_initial_state, parse_config};
use asym_mhd::diagnostics::InvariantRecord;
use asym_mhd::dynamics::{stress_tensor_field, Model};
use asym_mhd::io::{read_snapshot, write_snapshot, write_timeseries};
use asym_mhd::verify::{alfven_convergence, algebra_suite, SuiteOptions, Tolerances};
use asym_mhd::{integrate, Error, Result, SpectralField, TorusGrid};

/// Exit status when a property check or convergence study fails.
const PROPERTY_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "asym-mhd",
    version,
    about = "Pseudo-spectral MHD with an asymmetric stress term"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the run described by a TOML configuration file.
    Run {
        config: PathBuf,
        /// Suppress the progress summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Check the bracket identities on seeded random elements.
    AlgebraCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 16)]
        n_points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol_antisymmetry: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol_jacobi: f64,
        #[arg(long, default_value_t = 1e-11)]
        tol_invariance: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol_first_integrals: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol_equivalence: f64,
    },
    /// Alfvén-wave convergence study: error against the exact solution for
    /// successively halved time steps.
    AlfvenTest {
        #[arg(long, default_value_t = 32)]
        n_points: usize,
        #[arg(long, default_value_t = 0.1)]
        amplitude: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Comma-separated step sizes; each should be half the previous.
        #[arg(long, value_delimiter = ',', default_value = "1e-3,5e-4")]
        dt: Vec<f64>,
        #[arg(long, default_value = "stress")]
        model: Model,
        /// Largest acceptable error at the first step size.
        #[arg(long, default_value_t = 1e-8)]
        max_error: f64,
        /// Allowed relative deviation of each ratio from 16.
        #[arg(long, default_value_t = 0.2)]
        ratio_tolerance: f64,
    },
    /// Recompute the diagnostics of a snapshot file.
    Diag { snapshot: PathBuf },
}

fn print_record(r: &InvariantRecord) {
    println!("t                 = {:.16e}", r.t);
    println!("energy            = {:.16e}", r.energy);
    println!("cross_helicity    = {:.16e}", r.cross_helicity);
    for (i, m) in r.momentum.iter().enumerate() {
        println!("momentum_{}        = {m:.16e}", i + 1);
    }
    match r.magnetic_helicity {
        Some(h) => println!("magnetic_helicity = {h:.16e}"),
        None => println!("magnetic_helicity = n/a"),
    }
    println!("max_div_v         = {:.3e}", r.max_div_v);
    println!("max_div_B         = {:.3e}", r.max_div_b);
}

fn snapshot_path(prefix: &Path, step: usize) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_{step:06}.mhdc"));
    PathBuf::from(name)
}

fn run(path: &Path, quiet: bool) -> Result<u8> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    let config = parse_config(&text)?;
    let initial = make_initial_state(&config)?;
    let out = &config.output;
    let dim = config.grid.dim();
    if let Some(prefix) = &out.snapshot_prefix {
        write_snapshot(&initial, &snapshot_path(prefix, 0))?;
    }
    let result = integrate(
        initial,
        config.model,
        &config.control,
        |step, state| match (&out.snapshot_prefix, out.snapshot_every) {
            (Some(prefix), Some(every)) if step % every == 0 => {
                write_snapshot(state, &snapshot_path(prefix, step))
            }
            _ => Ok(()),
        },
    );
    let output = match result {
        Ok(o) => o,
        Err(Error::BlowUp { t_last, records }) => {
            if let Some(p) = &out.timeseries {
                write_timeseries(&records, dim, p)?;
            }
            return Err(Error::BlowUp { t_last, records });
        }
        Err(e) => return Err(e),
    };
    if let Some(p) = &out.timeseries {
        write_timeseries(&output.records, dim, p)?;
    }
    if let Some(p) = &out.final_snapshot {
        write_snapshot(&output.state, p)?;
    }
    if !quiet {
        let first = &output.records[0];
        let last = output.records.last().expect("at least the initial record");
        println!(
            "{} model on {}: {} steps to t = {}",
            config.model,
            config.grid,
            config.control.n_steps(),
            last.t
        );
        println!(
            "energy drift {:.3e}, cross-helicity drift {:.3e}",
            (last.energy - first.energy).abs() / first.energy.abs().max(f64::MIN_POSITIVE),
            (last.cross_helicity - first.cross_helicity).abs()
                / first.cross_helicity.abs().max(f64::MIN_POSITIVE)
        );
        if config.model == Model::Stress {
            let (skew, size) = stress_tensor_field(&output.state, config.weights)?.asymmetry();
            println!(
                "stress tensor asymmetry ‖T − Tᵀ‖/‖T‖ = {:.3e}",
                skew / size.max(f64::MIN_POSITIVE)
            );
        }
    }
    Ok(0)
}

fn algebra_check(opts: SuiteOptions) -> Result<u8> {
    let outcomes = algebra_suite(&opts)?;
    let mut ok = true;
    println!(
        "{} trials, seed {}, grid {}^{}",
        opts.trials, opts.seed, opts.n_points, opts.dim
    );
    for c in &outcomes {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict}  {:<34} worst {:.3e}  tol {:.1e}",
            c.name, c.worst, c.tolerance
        );
        ok &= c.passed();
    }
    Ok(if ok { 0 } else { PROPERTY_FAILURE })
}

fn alfven_test(
    n_points: usize,
    amplitude: f64,
    t_end: f64,
    dts: &[f64],
    model: Model,
    max_error: f64,
    ratio_tolerance: f64,
) -> Result<u8> {
    let grid = TorusGrid::new(2, n_points)?;
    let w = SpectralField::from_fn(grid, |x| [amplitude * x[1].sin(), 0.0, 0.0]);
    let rows = alfven_convergence(&w, &[0.0, 1.0], t_end, dts, model)?;
    let mut ok = rows.first().is_some_and(|r| r.error < max_error);
    println!("{:>12}  {:>12}  {:>8}", "dt", "L2 error", "ratio");
    for r in &rows {
        let ratio = match r.ratio {
            Some(q) => {
                ok &= (q - 16.0).abs() <= ratio_tolerance * 16.0;
                format!("{q:8.3}")
            }
            None => format!("{:>8}", "-"),
        };
        println!("{:>12.4e}  {:>12.4e}  {ratio}", r.dt, r.error);
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { PROPERTY_FAILURE })
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run { config, quiet } => run(&config, quiet),
        Command::AlgebraCheck {
            seed,
            trials,
            dim,
            n_points,
            tol_antisymmetry,
            tol_jacobi,
            tol_invariance,
            tol_first_integrals,
            tol_equivalence,
        } => algebra_check(SuiteOptions {
            seed,
            trials,
            dim,
            n_points,
            tolerances: Tolerances {
                antisymmetry: tol_antisymmetry,
                jacobi: tol_jacobi,
                invariance: tol_invariance,
                first_integrals: tol_first_integrals,
                equivalence: tol_equivalence,
            },
        }),
        Command::AlfvenTest {
            n_points,
            amplitude,
            t_end,
            dt,
            model,
            max_error,
            ratio_tolerance,
        } => alfven_test(
            n_points,
            amplitude,
            t_end,
            &dt,
            model,
            max_error,
            ratio_tolerance,
        ),
        Command::Diag { snapshot } => {
            let state = read_snapshot(&snapshot)?;
            print_record(&InvariantRecord::sample(&state));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Config(problems)) => {
            eprintln!("configuration error:");
            for p in &problems {
                eprintln!("  - {p}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
