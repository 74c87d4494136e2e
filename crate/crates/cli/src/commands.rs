use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use walker_ruled::oracle::{
    check_golden, parse_golden, pin_golden, verify_fixture_with, DiscrepancyReport, Tolerance, ToleranceTable,
    VerifyOptions,
};
use walker_ruled::ruled::gauss_map_closed;
use walker_ruled::{Hypersurface, Params};

use crate::config::SceneConfig;
use crate::error::CliError;
use crate::format::{number, vector};
use crate::invariants;
use crate::sampling::quasi_random_points;

#[derive(Debug, Parser)]
#[command(
    name = "walker-ruled",
    version,
    about = "Invariants of 2-ruled hypersurfaces in Walker 4-manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate det g, K, H, the normal character and the minimality residual on the grid.
    Invariants {
        #[arg(long)]
        config: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// PNG heat map of K and H over the (u1, u2) slice at the middle u3 value.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Compare the closed forms with the oracle at quasi-random points.
    Verify {
        /// One or more scene files.
        #[arg(long, required = true, num_args = 1..)]
        config: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `ABS` or `ABS,REL`: replaces every tolerance in the table.
        #[arg(long)]
        tol: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Closed and generic Gauss map at one parameter point.
    Gaussmap {
        #[arg(long)]
        config: PathBuf,
        /// `u1,u2,u3`
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Pin oracle values to a golden file, or check a golden file.
    Pin {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute the entries of an existing golden file instead of pinning.
        #[arg(long, conflicts_with = "out")]
        check: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Invariants {
            config,
            out: path,
            format,
            plot,
        } => cmd_invariants(&config, path.as_deref(), format, plot.as_deref(), out),
        Command::Verify {
            config,
            samples,
            seed,
            tol,
            inject_fault,
        } => {
            let tol = tol.as_deref().map(parse_tolerance).transpose()?;
            cmd_verify(&config, samples, seed, tol, inject_fault, out)
        }
        Command::Gaussmap { config, point } => cmd_gaussmap(&config, &parse_point(&point)?, out, err),
        Command::Pin {
            config,
            samples,
            seed,
            out: path,
            check,
        } => match check {
            Some(golden) => cmd_check_golden(&config, &golden, out),
            None => cmd_pin(&config, samples, seed, path.as_deref(), out),
        },
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Argument(format!("cannot write {}: {e}", p.display())))
        }
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

pub fn parse_point(text: &str) -> Result<Params, CliError> {
    let bad = || CliError::Argument(format!("point `{text}` must be three finite numbers u1,u2,u3"));
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if v.len() != 3 || v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok([v[0], v[1], v[2]])
}

pub fn parse_tolerance(text: &str) -> Result<Tolerance, CliError> {
    let bad = || CliError::Argument(format!("--tol `{text}` must be ABS or ABS,REL with nonnegative values"));
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let tol = match v.as_slice() {
        [a] => Tolerance { abs: *a, rel: *a },
        [a, r] => Tolerance { abs: *a, rel: *r },
        _ => return Err(bad()),
    };
    if !(tol.abs >= 0.0 && tol.rel >= 0.0 && tol.abs.is_finite() && tol.rel.is_finite()) {
        return Err(bad());
    }
    Ok(tol)
}

pub fn cmd_invariants(
    config: &Path,
    path: Option<&Path>,
    format: Format,
    plot: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let cfg = SceneConfig::load(config)?;
    let h = cfg.build()?;
    let rows = invariants::evaluate(&h, &cfg.grid_points());
    let text = match format {
        Format::Csv => invariants::to_csv(&rows),
        Format::Json => invariants::to_json(&rows),
    };
    emit(&text, path, out)?;
    if let Some(p) = plot {
        invariants::plot(&rows, cfg.grid.axes().map(|a| a.count), p)?;
    }
    Ok(0)
}

/// Verification report for one loaded scene.
pub fn verify_scene(
    cfg: &SceneConfig,
    samples: usize,
    seed: u64,
    tol: Option<Tolerance>,
    inject_fault: bool,
) -> Result<DiscrepancyReport, CliError> {
    let h = cfg.build()?;
    let mut tolerances: ToleranceTable = cfg.tolerance_table();
    if let Some(t) = tol {
        tolerances.default = t;
        tolerances.entries.values_mut().for_each(|e| *e = t);
    }
    let opts = VerifyOptions {
        tolerances,
        inject_fault,
        ..VerifyOptions::default()
    };
    Ok(verify_fixture_with(
        &h,
        &quasi_random_points(&cfg.grid, samples, seed),
        &opts,
    ))
}

pub fn cmd_verify(
    configs: &[PathBuf],
    samples: usize,
    seed: u64,
    tol: Option<Tolerance>,
    inject_fault: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if samples == 0 {
        return Err(CliError::Argument("--samples must be at least 1".into()));
    }
    let scenes = configs
        .iter()
        .map(|p| SceneConfig::load(p).map(|c| (p, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut suite = DiscrepancyReport::default();
    for (path, cfg) in &scenes {
        let report = verify_scene(cfg, samples, seed, tol, inject_fault)?;
        writeln!(out, "== scene {} ({})", path.display(), cfg.label())?;
        write!(out, "{}", report.render())?;
        suite.extend(report);
    }
    if scenes.len() > 1 {
        writeln!(
            out,
            "== suite ({} scenes, {samples} samples each, seed {seed})",
            scenes.len()
        )?;
        write!(out, "{}", suite.render())?;
    }
    let verdict = if suite.has_mismatch() { "FAIL" } else { "OK" };
    writeln!(out, "verdict: {verdict}")?;
    Ok(if suite.has_mismatch() { 1 } else { 0 })
}

pub fn cmd_gaussmap(config: &Path, u: &Params, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = SceneConfig::load(config)?;
    let h = cfg.build()?;
    let generic = Hypersurface::new(&h.metric, &h).gauss_map(*u)?;
    writeln!(out, "point: {}", vector(u))?;
    match gauss_map_closed(&h, *u) {
        Ok(c) => {
            writeln!(out, "closed G: {}", vector(&c.components))?;
            writeln!(out, "closed A: {}", number(c.normalizer))?;
            writeln!(out, "closed normal: {}", vector(&c.normal.0))?;
            writeln!(out, "closed character: {}", c.character.as_str())?;
            let diff = c
                .normal
                .0
                .iter()
                .zip(&generic.normal.0)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            writeln!(
                out,
                "closed vs generic normal (type {}): max abs difference {}",
                h.kind.index(),
                number(diff)
            )?;
        }
        Err(e) => writeln!(err, "closed form unavailable: {}: {e}", e.kind())?,
    }
    writeln!(out, "generic G: {}", vector(&generic.raw.0))?;
    writeln!(out, "generic A: {}", number(generic.raw_norm_sq.abs().sqrt()))?;
    writeln!(out, "generic normal: {}", vector(&generic.normal.0))?;
    writeln!(out, "generic character: {}", generic.character.as_str())?;
    Ok(0)
}

pub fn cmd_pin(
    config: &Path,
    samples: usize,
    seed: u64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let cfg = SceneConfig::load(config)?;
    let h = cfg.build()?;
    let points = quasi_random_points(&cfg.grid, samples, seed);
    let opts = VerifyOptions {
        tolerances: cfg.tolerance_table(),
        ..VerifyOptions::default()
    };
    let text = pin_golden(&h, &points, &opts)?;
    emit(&text, path, out)?;
    Ok(0)
}

pub fn cmd_check_golden(config: &Path, golden: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = SceneConfig::load(config)?;
    let h = cfg.build()?;
    let text = std::fs::read_to_string(golden)
        .map_err(|e| CliError::Argument(format!("cannot read {}: {e}", golden.display())))?;
    let entries = parse_golden(&text).map_err(|e| CliError::Argument(e.to_string()))?;
    let failures = check_golden(&h, &entries, walker_ruled::oracle::DEFAULT_STEP);
    for (entry, why) in &failures {
        writeln!(out, "FAIL {} at {}: {why}", entry.formula, vector(&entry.point))?;
    }
    writeln!(out, "{} entries, {} failures", entries.len(), failures.len())?;
    Ok(if failures.is_empty() { 0 } else { 1 })
}
