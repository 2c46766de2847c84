//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::ModelSpec;
use crate::cooling;
use crate::error::{Error, Result};
use crate::lyapunov;
use crate::output::{self, Cell, Table};
use crate::params::NormalizedParams;
use crate::presets;
use crate::reduction;
use crate::response;
use crate::selftest;
use crate::sweep::{Axis, Quantity, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "levcool", version, about = "Auxiliary-cavity-assisted cooling of a levitated nanosphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Model description (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output CSV path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Figure preset id.
    #[arg(long, global = true)]
    pub id: Option<String>,

    /// First sweep axis, `name:lo:hi:n:lin|log`.
    #[arg(long, global = true)]
    pub axis1: Option<String>,

    /// Optional second sweep axis.
    #[arg(long, global = true)]
    pub axis2: Option<String>,

    /// Comma-separated sweep quantities; `_single` selects the single-cavity series.
    #[arg(long, global = true)]
    pub quantity: Option<String>,

    /// Disconnect the auxiliary cavity and use `Delta'_2 = -kappa/2`.
    #[arg(long, global = true)]
    pub single_cavity: bool,

    /// Spectrum grid `lo:hi:n` in units of omega_m.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub range: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Force spectrum S_ff(omega).
    Spectrum,
    /// Cooling and heating rates.
    Rates,
    /// Phonon occupancy limits.
    Limit,
    /// Parameter sweep over one or two axes.
    Sweep,
    /// Closed-form and eigenvalue stability verdicts.
    Stability,
    /// Effective two-mode parameters.
    Effective,
    /// Closed-form limit against the covariance-matrix occupancy.
    Oracle,
    /// Figure data plus a gnuplot script.
    Figure,
    /// Built-in validation table.
    Selftest,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Csv { .. } => EXIT_IO,
        e if e.is_validation() => EXIT_VALIDATION,
        _ => EXIT_NUMERIC,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("levcool: {e}");
            exit_code(&e)
        }
    }
}

fn require<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Validation(format!("--{flag} is required for this command")))
}

fn load_spec(cli: &Cli) -> Result<ModelSpec> {
    let spec = ModelSpec::from_file(require(&cli.config, "config")?)?;
    Ok(if cli.single_cavity { spec.single_cavity() } else { spec })
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write_file(path),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock).map_err(|source| Error::Csv { path: PathBuf::from("<stdout>"), source })?;
            lock.flush().map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Spectrum => {
            let p = load_spec(cli)?.resolve()?;
            emit(&spectrum_table(&p, cli.range.as_deref())?, out)?;
        }
        Command::Rates | Command::Limit => {
            let p = load_spec(cli)?.resolve()?;
            let t = cooling_table(&p)?;
            if cli.command == Command::Limit {
                let r = cooling::cooling_report(&p);
                if r.is_cooling() {
                    eprintln!("n_f = {:.6} (n_q = {:.6}, n_c = {:.6})", r.n_f, r.n_q, r.n_c);
                } else {
                    eprintln!("not cooling: Gamma_opt = {:.6e}", r.gamma_opt);
                }
            }
            emit(&t, out)?;
        }
        Command::Sweep => {
            let mut base = ModelSpec::from_file(require(&cli.config, "config")?)?;
            if cli.single_cavity {
                base = base.single_cavity();
            }
            let spec = SweepSpec {
                base,
                axis1: require(&cli.axis1, "axis1")?.parse()?,
                axis2: cli.axis2.as_deref().map(str::parse::<Axis>).transpose()?,
                quantities: Quantity::parse_list(require(&cli.quantity, "quantity")?)?,
            };
            emit(&spec.run()?, out)?;
        }
        Command::Stability => {
            let p = load_spec(cli)?.resolve()?;
            emit(&stability_table(&p)?, out)?;
        }
        Command::Effective => {
            let p = load_spec(cli)?.resolve()?;
            emit(&reduction_table(&p)?, out)?;
        }
        Command::Oracle => {
            let p = load_spec(cli)?.resolve()?;
            emit(&oracle_table(&p)?, out)?;
        }
        Command::Figure => {
            let fig = presets::preset(require(&cli.id, "id")?)?;
            let path = require(&cli.out, "out")?;
            fig.sweep.run()?.write_file(path)?;
            let script = path.with_extension("gp");
            let csv_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            std::fs::write(&script, fig.gnuplot_script(&csv_name))
                .map_err(|source| Error::Io { path: script.clone(), source })?;
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            print!("{}", selftest::render(&checks));
            if checks.iter().any(|c| !c.passed) {
                return Ok(EXIT_NUMERIC);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `lo:hi:n`.
fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::Validation(format!("range `{s}` is not lo:hi:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(bad());
    };
    Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
}

/// Spectrum over `range`, or by default over a window covering both cavity
/// resonances and the sidebands.
pub fn spectrum_table(p: &NormalizedParams, range: Option<&str>) -> Result<Table> {
    let (lo, hi, n) = match range {
        Some(r) => parse_range(r)?,
        None => {
            let half = p.detuning2.abs().max(p.detuning3.abs()) + 2.0 * p.kappa.max(p.kappa3) + 2.0;
            (-half, half, response::DEFAULT_GRID_POINTS)
        }
    };
    let grid = response::uniform_grid(lo, hi, n)?;
    let mut t = Table::new(&output::SPECTRUM_SCHEMA)?;
    for s in response::spectrum_scan(&grid, p)? {
        t.push(vec![s.omega.into(), s.s.into()])?;
    }
    Ok(t)
}

pub fn cooling_table(p: &NormalizedParams) -> Result<Table> {
    let r = cooling::cooling_report(p);
    let flag = if r.is_cooling() { "" } else { "not_cooling" };
    let mut t = Table::new(&output::COOLING_SCHEMA)?;
    t.push(vec![
        p.kappa.into(),
        p.detuning2.into(),
        r.a_minus.into(),
        r.a_plus.into(),
        r.gamma_opt.into(),
        r.n_q.into(),
        r.n_c.into(),
        r.n_f.into(),
        flag.into(),
    ])?;
    Ok(t)
}

pub fn reduction_table(p: &NormalizedParams) -> Result<Table> {
    let e = reduction::effective_params(p);
    let v = reduction::stability_coupled(p);
    let mut t = Table::new(&output::REDUCTION_SCHEMA)?;
    t.push(vec![
        p.kappa.into(),
        p.kappa3.into(),
        p.tunneling.into(),
        p.detuning2.into(),
        e.eta.into(),
        e.coupling_eff.into(),
        e.kappa_eff.into(),
        e.detuning_eff.into(),
        v.stable.into(),
        v.margin.into(),
    ])?;
    Ok(t)
}

/// One row per closed-form criterion plus the eigenvalue verdict, whose
/// margin is minus the largest real part.
pub fn stability_table(p: &NormalizedParams) -> Result<Table> {
    let mut t = Table::new(&["criterion", "stable", "margin"])?;
    for v in [
        reduction::stability_single(p),
        reduction::stability_single_optimal(p),
        reduction::stability_coupled_effective(p),
        reduction::stability_coupled(p),
    ] {
        t.push(vec![v.criterion.label().into(), v.stable.into(), v.margin.into()])?;
    }
    let (stable, max_re) = lyapunov::eigen_stable(&lyapunov::build_model(p));
    t.push(vec!["eigenvalues".into(), stable.into(), (-max_re).into()])?;
    Ok(t)
}

/// Closed-form limit and covariance occupancy with the bath at zero
/// temperature. Missing values are `nan`.
pub fn oracle_table(p: &NormalizedParams) -> Result<Table> {
    let cold = NormalizedParams { n_th: 0.0, ..*p };
    let report = cooling::cooling_report(&cold);
    let model = lyapunov::build_model(&cold);
    let (stable, _) = lyapunov::eigen_stable(&model);
    let n_lyap = match lyapunov::solve_steady(&model) {
        Ok(c) => c.n_phonon,
        Err(Error::Unstable { .. }) => f64::NAN,
        Err(e) => return Err(e),
    };
    let rel_dev = (report.n_f - n_lyap).abs() / n_lyap;
    let mut t = Table::new(&output::ORACLE_SCHEMA)?;
    t.push(vec![
        Cell::Num(p.kappa),
        Cell::Num(p.coupling),
        Cell::Num(report.n_f),
        Cell::Num(n_lyap),
        Cell::Num(rel_dev),
        Cell::Bool(stable),
    ])?;
    Ok(t)
}
