//! The `renewt` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use renewt_core::characterize::{characterize_quadratic, reconstruct_general, reconstruction_error, QuadraticData};
use renewt_core::constructions::{nonconvergent_cubic, Sign};
use renewt_core::dynamics::{classify_convergence, CycleInfo, VerdictStatus};
use renewt_core::geometry::{
    basin_unbounded_probe, line_predicate, numeric_line_check, sample_julia, sample_julia_tree, symmetry_order,
};
use renewt_core::render::{default_palette, Shading, Viewport};
use renewt_core::{Complex64, Error, Point, RelaxedNewtonMap};

use crate::output::{render_parallel, write_csv, write_png, write_ppm};
use crate::parse::{parse_class, parse_coeffs, parse_complex, parse_factored, parse_sign, PolySource};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

const GRAMMAR: &str = "\
Complex literals: a | bi | a+bi | a-bi (no spaces; i alone means 1i).
Polynomials (exactly one of):
  --coeffs   c0,c1,...,cn           ascending coefficients
  --factored (r1^m1,r2^m2,...);lead  roots with multiplicities, leading coefficient
  --class    two-root:k,m | unicritical:n | composite:m,n | cubic:a | nonconvergent:+|-
Exit codes: 0 success, 2 input error, 3 verification failure.";

#[derive(Debug, Parser)]
#[command(name = "renewt", version, about = "Relaxed Newton maps as complex dynamics", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PolyArgs {
    /// Ascending coefficients, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Factored form "(root^mult,...);leading".
    #[arg(long, allow_hyphen_values = true)]
    factored: Option<String>,
    /// Representative family, e.g. "unicritical:3".
    #[arg(long)]
    class: Option<String>,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// Relaxation parameter.
    #[arg(long, allow_hyphen_values = true)]
    h: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShadingArg {
    Flat,
    Iterations,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fixed points, multipliers, indices and critical points.
    Analyze {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Follow the critical orbits.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
    /// Basin-of-attraction image (PPM, or PNG by extension) plus a JSON legend.
    Render {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        out: PathBuf,
        /// Legend path; defaults to the image path with a .json extension.
        #[arg(long)]
        legend: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: usize,
        #[arg(long, default_value_t = 800)]
        height: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        /// Width of the viewport in the plane.
        #[arg(long, default_value_t = 4.0)]
        span: f64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ShadingArg::Flat)]
        shading: ShadingArg,
        /// Skip the critical-orbit search for extraneous attracting cycles.
        #[arg(long)]
        no_cycle_search: bool,
    },
    /// Cubic z^3 - 3z + a with a superattracting 2-cycle.
    ConstructNonconvergent {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        sign: String,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
    /// Is the Julia set a straight line?
    LineTest {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        #[arg(long, default_value_t = 250)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rotation symmetry of the Julia set about the origin.
    Symmetry {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        /// Cap on the number of backward-orbit points.
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        /// Fixed threshold instead of three median neighbour spacings.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rebuild (h, p) from fixed-point data in a JSON file.
    Characterize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Heuristic witness that a root's basin reaches a given radius.
    Probe {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        #[arg(long, default_value_t = 100.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: "input", message: message.into(), exit: EXIT_INPUT }
    }

    fn verification(message: impl Into<String>) -> Self {
        CliError { code: "verification", message: message.into(), exit: EXIT_VERIFICATION }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError { code: "io", message: format!("{}: {e}", path.display()), exit: EXIT_INPUT }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailure(_) | Error::NotRealizable(_) | Error::NonIntegerMultiplicity { .. } => {
                CliError::verification(e.to_string())
            }
            Error::NoConvergence { .. } => CliError { code: "numeric", message: e.to_string(), exit: EXIT_INPUT },
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<crate::parse::ParseError> for CliError {
    fn from(e: crate::parse::ParseError) -> Self {
        CliError { code: "parse", message: e.to_string(), exit: EXIT_INPUT }
    }
}

fn build(args: &MapArgs) -> Result<RelaxedNewtonMap, CliError> {
    let h = parse_complex(&args.h)?;
    let source = match (&args.poly.coeffs, &args.poly.factored, &args.poly.class) {
        (Some(c), _, _) => PolySource::Dense(parse_coeffs(c)?),
        (_, Some(f), _) => PolySource::Factored(parse_factored(f)?),
        (_, _, Some(c)) => parse_class(c)?,
        _ => return Err(CliError::input("no polynomial given")),
    };
    Ok(match source {
        PolySource::Dense(p) => RelaxedNewtonMap::from_dense(&p, h)?,
        PolySource::Factored(p) => RelaxedNewtonMap::new(p, h)?,
        PolySource::Nonconvergent(sign) => nonconvergent_cubic(h, sign)?.map()?,
    })
}

fn warn_domain(map: &RelaxedNewtonMap, err: &mut dyn Write) {
    if !map.h_in_attracting_domain() {
        let _ = writeln!(
            err,
            "{}",
            json!({ "warning": { "code": "h-outside-domain", "message": "some root is not attracting: |h - m| >= m for the least multiplicity m" } })
        );
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn run_command(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let emit = |out: &mut dyn Write, v: &Value| -> Result<(), CliError> {
        out.write_all(report::to_text(v).as_bytes())
            .map_err(|e| CliError { code: "io", message: e.to_string(), exit: EXIT_INPUT })
    };
    match cmd {
        Command::Analyze { map } => {
            let rn = build(&map)?;
            warn_domain(&rn, err);
            emit(out, &report::analyze(&rn)?)
        }
        Command::Classify { map, budget } => {
            let rn = build(&map)?;
            warn_domain(&rn, err);
            let v = classify_convergence(&rn, budget)?;
            emit(out, &report::verdict(&v))
        }
        Command::Render {
            map,
            out: path,
            legend,
            width,
            height,
            center,
            span,
            budget,
            eps,
            shading,
            no_cycle_search,
        } => {
            let rn = build(&map)?;
            warn_domain(&rn, err);
            let vp = Viewport::new(parse_complex(&center)?, span, width, height)?;
            let cycles: Vec<CycleInfo> = if no_cycle_search {
                Vec::new()
            } else {
                let v = classify_convergence(&rn, 2000)?;
                v.cycles().into_iter().filter(|c| c.class.is_attracting()).cloned().collect()
            };
            let img = render_parallel(&rn, &cycles, vp, budget, eps);
            let palette = default_palette(&img.legend);
            let shading = match shading {
                ShadingArg::Flat => Shading::Flat,
                ShadingArg::Iterations => Shading::ByIterations,
            };
            let png = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
            if png {
                write_png(&path, &img, &palette, shading)
            } else {
                write_ppm(&path, &img, &palette, shading)
            }
            .map_err(|e| CliError::io(&path, e))?;
            let legend_path = legend.unwrap_or_else(|| path.with_extension("json"));
            let doc = report::legend(&img);
            write_text(&legend_path, &report::to_text(&doc))?;
            emit(out, &doc)
        }
        Command::ConstructNonconvergent { h, sign, budget } => {
            let h = parse_complex(&h)?;
            let sign: Sign = parse_sign(&sign)?;
            let c = nonconvergent_cubic(h, sign)?;
            let v = classify_convergence(&c.map()?, budget)?;
            emit(out, &report::nonconvergent(&c, &v))?;
            if matches!(v.status, VerdictStatus::NonConvergent(_)) {
                Ok(())
            } else {
                Err(CliError::verification("critical orbits did not exhibit the attracting 2-cycle"))
            }
        }
        Command::LineTest { map, samples, depth, seed, tol, csv } => {
            let rn = build(&map)?;
            let s = sample_julia(&rn, samples, depth, seed)?;
            if let Some(p) = &csv {
                write_csv(p, &s.points).map_err(|e| CliError::io(p, e))?;
            }
            let predicate = line_predicate(rn.polynomial(), rn.h());
            let fit = numeric_line_check(&s.points, tol)?;
            emit(out, &report::line_test(predicate.as_ref(), &fit, s.points.len()))
        }
        Command::Symmetry { map, max_order, samples, tau, csv } => {
            let rn = build(&map)?;
            let s = sample_julia_tree(&rn, samples)?;
            if let Some(p) = &csv {
                write_csv(p, &s.points).map_err(|e| CliError::io(p, e))?;
            }
            let est = symmetry_order(&s.points, max_order, tau)?;
            let line_case = line_predicate(rn.polynomial(), rn.h()).is_some();
            emit(out, &report::symmetry(&est, s.points.len(), line_case))
        }
        Command::Characterize { input } => {
            let text = fs::read_to_string(&input).map_err(|e| CliError::io(&input, e))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| CliError { code: "parse", message: format!("{}: {e}", input.display()), exit: EXIT_INPUT })?;
            emit(out, &characterize(&doc)?)
        }
        Command::Probe { map, root, radius, delta, budget } => {
            let rn = build(&map)?;
            let root = parse_complex(&root)?;
            let path = basin_unbounded_probe(&rn, root, radius, delta, budget)?;
            emit(
                out,
                &json!({
                    "heuristic": true,
                    "root": report::complex(root),
                    "radius": radius,
                    "delta": delta,
                    "found": path.is_some(),
                    "direction": path.as_ref().and_then(|p| p.get(1).map(|&z| report::complex((z - root) / (z - root).norm())) ),
                    "vertices": path.as_ref().map_or(0, |p| p.len()),
                }),
            )
        }
    }
}

fn json_complex(v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)).ok_or_else(|| CliError::input("bad number")),
        Value::String(s) => Ok(parse_complex(s)?),
        Value::Object(m) => {
            let part = |k: &str| m.get(k).and_then(Value::as_f64).unwrap_or(0.0);
            if m.contains_key("re") || m.contains_key("im") {
                Ok(Complex64::new(part("re"), part("im")))
            } else {
                Err(CliError::input("complex objects need re/im fields"))
            }
        }
        _ => Err(CliError::input(format!("expected a complex number, found {v}"))),
    }
}

fn json_point(v: &Value) -> Result<Point, CliError> {
    match v {
        Value::String(s) if s == "infinity" => Ok(Point::Infinity),
        _ => json_complex(v).map(Point::Finite),
    }
}

/// Accepts a `quadratic` case, explicit `fixed_points`, or an `analyze`
/// report (roots as attracting data, `∞` as the repelling point).
fn characterize(doc: &Value) -> Result<Value, CliError> {
    if let Some(q) = doc.get("quadratic") {
        let data = if let Some(l) = q.get("equal_multipliers") {
            QuadraticData::EqualMultipliers(json_complex(l)?)
        } else if let Some(m) = q.get("superattracting_and_rational") {
            QuadraticData::SuperattractingAndRational(json_complex(m)?)
        } else if let Some(r) = q.get("index_ratio") {
            QuadraticData::IndexRatio(json_complex(r)?)
        } else {
            return Err(CliError::input(
                "quadratic data needs equal_multipliers, superattracting_and_rational or index_ratio",
            ));
        };
        let c = characterize_quadratic(data)?;
        return Ok(json!({
            "h": report::complex(c.h),
            "k": c.k,
            "m": c.m,
            "free_scale": c.free_scale,
            "polynomial": "(z-1)^k (z+1)^m",
        }));
    }
    let h = json_complex(doc.get("h").ok_or_else(|| CliError::input("missing h"))?)?;
    let (fps, repelling) = if let Some(list) = doc.get("fixed_points").and_then(Value::as_array) {
        let fps = list
            .iter()
            .map(|f| {
                let loc = json_point(f.get("location").ok_or_else(|| CliError::input("fixed point without location"))?)?;
                let mu = json_complex(f.get("multiplier").ok_or_else(|| CliError::input("fixed point without multiplier"))?)?;
                Ok((loc, mu))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let rep = doc.get("repelling").map(json_point).transpose()?.unwrap_or(Point::Infinity);
        (fps, rep)
    } else if let Some(list) = doc.get("roots").and_then(Value::as_array) {
        let fps = list
            .iter()
            .map(|r| {
                let loc = json_point(r.get("value").ok_or_else(|| CliError::input("root without value"))?)?;
                let mu = json_complex(r.get("multiplier").ok_or_else(|| CliError::input("root without multiplier"))?)?;
                Ok((loc, mu))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        (fps, Point::Infinity)
    } else {
        return Err(CliError::input("expected quadratic, fixed_points or roots"));
    };
    let (phi, p) = reconstruct_general(&fps, repelling, h)?;
    let error = reconstruction_error(&fps, &phi, &p, h)?;
    if !(error < 1e-8) {
        return Err(CliError::verification(format!("reconstructed multipliers differ by {error:e}")));
    }
    Ok(json!({
        "h": report::complex(h),
        "mobius": report::mobius(&phi),
        "polynomial": report::polynomial(&p),
        "reconstruction_error": error,
    }))
}

/// Runs the CLI on `args` (program name first), writing results to `out`
/// and diagnostics to `err`; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run_command(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": { "code": e.code, "message": e.message } }));
            e.exit
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
