//! `ghzloc`: classification, boundary curves, figure data, symmetrization
//! and model verification for GHZ-symmetric states.
//!
//! Exit codes: 0 success / verification pass, 1 verification fail, 2 input
//! or I/O error.

mod curves;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ghzloc::ghz::{
    classify, concurrences, symmetrize_coords, symmetrize_oracle, three_qubit_density, three_tangle, triangle_edge_p,
};
use ghzloc::numerics::{default_quad_order, QUAD_ORDER_ENV};
use ghzloc::steering::critical_slope;
use ghzloc::verify::{run_verification, Integration, ModelKind, ModelSpec, SettingsBatch};
use ghzloc::{DensityOperator, SplitSphereQuadrature, ThreeQubitGhzPoint};
use serde::Serialize;

use curves::{CurveName, CurveSpec};

/// Default seed of random settings batches.
const DEFAULT_SEED: u64 = 7;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] ghzloc::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser, Debug)]
#[command(name = "ghzloc", version, about = "Local models and entanglement of GHZ-symmetric qubit states")]
struct Cli {
    /// Gauss-Legendre order of the sphere rules (default 200, or $GHZLOC_QUAD_ORDER).
    #[arg(long, global = true)]
    quad_order: Option<usize>,

    /// Machine-readable JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entanglement class and measures of the three-qubit point (p, q).
    #[command(allow_negative_numbers = true)]
    Classify {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Emit one boundary curve as CSV (param, p, q, ...).
    #[command(allow_negative_numbers = true)]
    Curve {
        #[arg(value_enum, required_unless_present = "name_flag", conflicts_with = "name_flag")]
        name: Option<CurveName>,
        /// Same as the positional curve name.
        #[arg(long = "name", value_enum, value_name = "NAME")]
        name_flag: Option<CurveName>,
        /// Number of samples (at least 2).
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Lower end of the parameter range (default depends on the curve).
        #[arg(long, requires = "to")]
        from: Option<f64>,
        /// Upper end of the parameter range.
        #[arg(long, requires = "from")]
        to: Option<f64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CSV layers of figure 1, 2 or 3 into a directory.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Samples per curve.
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// GHZ-symmetrize an 8x8 matrix given as JSON {"dim": 8, "matrix": [[[re, im], ...], ...]}.
    Symmetrize {
        input: PathBuf,
        /// Also average over the symmetry group and report the trace distance.
        #[arg(long)]
        oracle: bool,
    },
    /// Compare a hidden-variable model with the quantum prediction.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// lhs2q | lhv2q | bilocal | symmetrized-bilocal | fullylocal | fullylocal-unsym
    #[arg(long)]
    model: ModelKind,
    /// Number of random setting triples.
    #[arg(long, default_value_t = 100)]
    settings: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Use the 27 Pauli-axis triples instead of random settings.
    #[arg(long, conflicts_with = "settings_file")]
    pauli_axes: bool,
    /// JSON list of setting triples [[[x, y, z], [x, y, z], [x, y, z]], ...].
    #[arg(long)]
    settings_file: Option<PathBuf>,
    /// Monte Carlo mode with this many hidden-variable samples.
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Slope of the boundary matrix T0 (two-qubit and bilocal models).
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    /// Scale factor applied to T0 (values below 1 leave the boundary).
    #[arg(long = "scale-T", default_value_t = 1.0)]
    scale_t: f64,
    /// Parameter of the fully local model, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    v: f64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let order = cli.quad_order.unwrap_or_else(default_quad_order);
    if order == 0 {
        return Err(CliError::Input(format!("--quad-order (or {QUAD_ORDER_ENV}) must be positive")));
    }
    let json = cli.json;
    match cli.command {
        Command::Classify { p, q } => cmd_classify(p, q, json),
        Command::Curve {
            name,
            name_flag,
            samples,
            from,
            to,
            out,
        } => {
            let range = from.zip(to);
            // clap guarantees exactly one of the two.
            let name = name.or(name_flag).expect("curve name");
            let spec = CurveSpec::new(name, samples, range)?;
            let table = curves::generate(&spec, &SplitSphereQuadrature::new(order)?)?;
            match out {
                Some(path) => output::write_csv_file(&path, &table)?,
                None => output::write_csv(std::io::stdout().lock(), &table)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure { id, out, samples } => {
            let written = cmd_figure(id, &out, samples, order)?;
            for path in written {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Symmetrize { input, oracle } => cmd_symmetrize(&input, oracle, json),
        Command::Verify(args) => cmd_verify(args, order, json),
    }
}

#[derive(Serialize)]
struct Classification {
    p: f64,
    q: f64,
    class: ghzloc::EntanglementClass,
    c_t: f64,
    c_g: f64,
    tau3: f64,
}

fn classification(pt: ThreeQubitGhzPoint) -> Result<Classification, CliError> {
    let c = concurrences(&pt);
    Ok(Classification {
        p: pt.p,
        q: pt.q,
        class: classify(&pt),
        c_t: c.c_t,
        c_g: c.c_g,
        tau3: three_tangle(&pt)?,
    })
}

fn print_classification(c: &Classification, extra: &[(&str, f64)], json: bool) -> Result<(), CliError> {
    if json {
        let mut v = serde_json::to_value(c).expect("plain struct serializes");
        for (k, x) in extra {
            v[*k] = serde_json::json!(x);
        }
        println!("{v}");
    } else {
        println!("p:     {}", output::fmt_num(c.p));
        println!("q:     {}", output::fmt_num(c.q));
        println!("class: {}", c.class);
        println!("C_T:   {}", output::fmt_num(c.c_t));
        println!("C_G:   {}", output::fmt_num(c.c_g));
        println!("tau3:  {}", output::fmt_num(c.tau3));
        for (k, x) in extra {
            println!("{k}: {}", output::fmt_num(*x));
        }
    }
    Ok(())
}

/// Inputs this close to the triangle are taken as rounded boundary points.
const INPUT_SLACK: f64 = 1e-4;

/// Moves `(p, q)` onto the triangle if it lies outside by at most [`INPUT_SLACK`].
fn snap_to_triangle(p: f64, q: f64) -> Result<ThreeQubitGhzPoint, CliError> {
    let raw = ThreeQubitGhzPoint { p, q };
    let Err(err) = raw.validate() else {
        return Ok(raw);
    };
    let sqrt3 = 3f64.sqrt();
    let qc = q.clamp(-1.0 / (4.0 * sqrt3), sqrt3 / 4.0);
    let edge = triangle_edge_p(qc);
    let pc = p.clamp(-edge, edge);
    let snapped = ThreeQubitGhzPoint { p: pc, q: qc };
    if (pc - p).hypot(qc - q) <= INPUT_SLACK && snapped.validate().is_ok() {
        eprintln!("note: ({p}, {q}) snapped onto the triangle at ({pc}, {qc})");
        Ok(snapped)
    } else {
        Err(err.into())
    }
}

fn cmd_classify(p: f64, q: f64, json: bool) -> Result<ExitCode, CliError> {
    let pt = snap_to_triangle(p, q)?;
    print_classification(&classification(pt)?, &[], json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_figure(id: u8, dir: &Path, samples: usize, order: usize) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let quad = SplitSphereQuadrature::new(order)?;
    let mut layers: Vec<(String, curves::Table)> = Vec::new();
    let curve = |name: CurveName, range: Option<(f64, f64)>| -> Result<curves::Table, CliError> {
        curves::generate(&CurveSpec::new(name, samples, range)?, &quad)
    };
    match id {
        1 => {
            layers.push(("triangle2q".into(), curves::triangle2q()));
            layers.push(("sep2q".into(), curve(CurveName::Sep2q, Some((-0.25, 0.25)))?));
            layers.push(("steer2q".into(), curve(CurveName::Steer2q, None)?));
        }
        2 => {
            layers.push(("triangle3q".into(), curves::triangle3q()));
            for name in [
                CurveName::Sep3q,
                CurveName::Bisepw3q,
                CurveName::Wghz3q,
                CurveName::Bilocal3q,
                CurveName::Fullylocal3q,
            ] {
                layers.push((name.file_stem().into(), curve(name, None)?));
            }
        }
        _ => {
            let spec = CurveSpec::new(CurveName::Bilocal3q, samples, Some((critical_slope(), 1e4)))?;
            layers.push(("figure3".into(), curves::measures_along_bilocal(&spec)?));
        }
    }
    let mut written = Vec::new();
    for (stem, table) in layers {
        let path = dir.join(format!("{stem}.csv"));
        output::write_csv_file(&path, &table)?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_symmetrize(input: &Path, oracle: bool, json: bool) -> Result<ExitCode, CliError> {
    let m = output::read_matrix(input)?;
    let rho = DensityOperator::new(m)?;
    if rho.dim() != 8 {
        return Err(CliError::Input(format!("expected an 8x8 matrix, found {0}x{0}", rho.dim())));
    }
    let pt = symmetrize_coords(&rho)?;
    let mut extra = Vec::new();
    if oracle {
        let averaged = symmetrize_oracle(&rho, 8)?;
        let reconstructed = three_qubit_density(&pt)?;
        extra.push(("trace_distance", averaged.trace_distance(&reconstructed)));
    }
    print_classification(&classification(pt)?, &extra, json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, order: usize, json: bool) -> Result<ExitCode, CliError> {
    let batch = if args.pauli_axes {
        SettingsBatch::pauli_axes()
    } else if let Some(path) = &args.settings_file {
        SettingsBatch::custom(output::read_settings(path)?)?
    } else {
        if args.settings == 0 {
            return Err(CliError::Input("--settings must be positive".into()));
        }
        SettingsBatch::random(args.seed, args.settings)
    };
    let rule = match args.mc_samples {
        Some(n) => Integration::monte_carlo(args.seed, n)?,
        None => Integration::split(order)?,
    };
    let spec = ModelSpec::from_kind(args.model, args.w, args.scale_t, args.v)?;
    let report = run_verification(&spec, &batch, &rule)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("{report}");
    }
    if let Some(path) = &args.out {
        output::write_json_file(path, &report)?;
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
