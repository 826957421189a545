//! The `h2norm` command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::{
    annulus_radii, bvn_decompose, bvn_residual, comp_norm_sq, hq_dominance, majorizes, AffineSymbol, CoeffVector,
    HqRow, DEFAULT_K_MAX,
};
use crate::dseries::{Character, DirichletPoly};
use crate::error::{H2Error, Result};
use crate::fixtures::{fixture, fixtures, FixtureSymbol};
use crate::opnorm::{
    bound_suite, bound_suite_with, build_matrix, default_truncation, kernel_sup_sq, kernel_w_grid, sigma_max_sq,
    suite_for_phi_alpha, BoundReport, OperatorSymbol, DEFAULT_K_OUT, DEFAULT_N_IN, POWER_TOL,
};
use crate::report::{render, Header};
use crate::torus::{
    curve_trace, ergodic_measure, inner_boundary_modulus, measure_e_delta, mobius_symbol_value, shapiro_constant,
    trace_csv, trace_radii, BoundarySymbol, Estimate, InnerEval, SamplePlan,
};
use crate::verify::{run_suite, SuiteReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Parser, Debug)]
#[command(name = "h2norm", version, about = "Composition operators on the Hardy space of Dirichlet series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct SymbolArgs {
    /// Center `re[,im]`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Coefficients on the first primes, comma separated.
    #[arg(long)]
    coeffs: Option<String>,
    /// Named fixture (see `h2norm bounds --fixture list`).
    #[arg(long)]
    fixture: Option<String>,
    /// `1/2 + alpha (1 - 2^-s)/(1 + 2^-s)` instead of an affine symbol.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every lower and upper bound for one symbol.
    Bounds {
        #[command(flatten)]
        sym: SymbolArgs,
        #[arg(long)]
        nin: Option<usize>,
        #[arg(long)]
        kout: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Truncated-matrix and kernel estimates, optionally over growing truncations.
    Opnorm {
        #[command(flatten)]
        sym: SymbolArgs,
        #[arg(long)]
        nin: Option<usize>,
        #[arg(long)]
        kout: Option<usize>,
        /// Report four truncation levels up to `--nin`/`--kout`.
        #[arg(long)]
        scan: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare the operators of two coefficient vectors with equal sums.
    Subordinate {
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Majorizing vector.
        #[arg(long)]
        coeffs: Option<String>,
        /// Majorized vector.
        #[arg(long)]
        b: Option<String>,
        /// Random incomparable pairs: is there a consistent ordering anyway?
        #[arg(long)]
        scan: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `||L_b||_{2k}^{2k}` against `||L_c||_{2k}^{2k}` for `k = 1..K`.
    Majorize {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 20)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Haar measure of `E_delta` and the constant `C_delta`.
    Measure {
        #[command(flatten)]
        sym: SymbolArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Also report the time average over `[-T, T]`.
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The curve `t -> phi(it)`.
    Curve {
        #[command(flatten)]
        sym: SymbolArgs,
        #[arg(long = "T", default_value_t = 200.0)]
        t: f64,
        #[arg(long, default_value_t = 400_000)]
        steps: usize,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Boundary behaviour of the inner-function symbol.
    InnerCheck {
        #[arg(long, default_value_t = 1e-8)]
        sigma: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run verification suites.
    VerifyLemmas {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Text written to stdout and stderr plus the exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a bound report: [`EXIT_VIOLATION`] when some lower bound exceeds some upper bound.
pub fn gate_exit(report: &BoundReport) -> i32 {
    if report.consistent() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Flag/value pairs as typed, for the report header.
fn recorded_args(argv: &[String]) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < argv.len() {
        if let Some(key) = argv[i].strip_prefix("--") {
            if let Some((k, v)) = key.split_once('=') {
                out.insert(k.to_string(), v.to_string());
            } else if i + 1 < argv.len() && !argv[i + 1].starts_with("--") {
                out.insert(key.to_string(), argv[i + 1].clone());
                i += 1;
            } else {
                out.insert(key.to_string(), "true".into());
            }
        }
        i += 1;
    }
    out
}

fn usage(msg: impl Into<String>) -> H2Error {
    H2Error::Domain(msg.into())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("not a number: {t:?}"))))
        .collect()
}

fn parse_center(s: &str) -> Result<Complex64> {
    let v = parse_list(s)?;
    match v.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(usage("--c takes re or re,im")),
    }
}

enum Target {
    Affine(AffineSymbol),
    Poly(crate::torus::PolySymbol),
    Alpha(f64),
}

fn target(sym: &SymbolArgs) -> Result<Target> {
    if let Some(name) = &sym.fixture {
        if sym.c.is_some() || sym.coeffs.is_some() || sym.alpha.is_some() {
            return Err(usage("--fixture excludes --c, --coeffs and --alpha"));
        }
        return match fixture(name)?.symbol {
            FixtureSymbol::Affine(a) => Ok(Target::Affine(a)),
            FixtureSymbol::Poly(p) => Ok(Target::Poly(p)),
            FixtureSymbol::PhiAlpha(a) => Ok(Target::Alpha(a)),
            FixtureSymbol::Inner(_) => Err(usage("the inner-function fixture is handled by inner-check")),
        };
    }
    if let Some(a) = sym.alpha {
        if sym.c.is_some() || sym.coeffs.is_some() {
            return Err(usage("--alpha excludes --c and --coeffs"));
        }
        return Ok(Target::Alpha(a));
    }
    let coeffs = match &sym.coeffs {
        Some(s) => parse_list(s)?,
        None => return Err(usage("give --coeffs, --fixture or --alpha")),
    };
    let c = match &sym.c {
        Some(s) => parse_center(s)?,
        // smallest real center that keeps the symbol in the class
        None => Complex64::new(0.5 + coeffs.iter().sum::<f64>(), 0.0),
    };
    Ok(Target::Affine(AffineSymbol::new(c, coeffs)?))
}

fn boundary_symbol(t: &Target) -> Result<&dyn BoundarySymbol> {
    match t {
        Target::Affine(a) => Ok(a),
        Target::Poly(p) => Ok(p),
        Target::Alpha(_) => Err(usage("the Cayley-transform symbols have no sampler")),
    }
}

struct Emit {
    text: String,
    code: i32,
}

fn json<T: Serialize>(header: &Header, body: &T, code: i32) -> Result<Emit> {
    let text = render(header, body).map_err(|e| usage(e.to_string()))? + "\n";
    Ok(Emit { text, code })
}

#[derive(Serialize)]
struct BoundsOut {
    report: BoundReport,
    best_lower: f64,
    best_upper: f64,
    consistent: bool,
    certified_norm_sq: Option<f64>,
}

fn bounds_out(report: BoundReport) -> BoundsOut {
    BoundsOut {
        best_lower: report.best_lower(),
        best_upper: report.best_upper(),
        consistent: report.consistent(),
        certified_norm_sq: report.certified_norm_sq(),
        report,
    }
}

#[derive(Serialize)]
struct Level {
    n_in: usize,
    k_out: usize,
    rows: usize,
    matrix_lower: f64,
    kernel_s_lower: f64,
    kernel_w: f64,
}

#[derive(Serialize)]
struct OpnormOut {
    levels: Vec<Level>,
    adjoint_lower: f64,
    genlower: f64,
    best_upper: f64,
}

#[derive(Serialize)]
struct SubordinateOut {
    b_majorized_by_c: bool,
    bvn: Option<Vec<(f64, Vec<usize>)>>,
    bvn_residual: Option<f64>,
    norms: Vec<(u64, f64, f64)>,
    ordering_holds: bool,
}

#[derive(Serialize)]
struct ScanOut {
    pairs: usize,
    comparable: usize,
    incomparable_consistent: usize,
    incomparable_mixed: usize,
}

#[derive(Serialize)]
struct MajorizeOut {
    b_majorized_by_c: bool,
    rows: Vec<HqRow>,
}

#[derive(Serialize)]
struct MeasureOut {
    delta: f64,
    measure: Estimate,
    shapiro_constant: Estimate,
    ergodic: Option<f64>,
}

#[derive(Serialize)]
struct CurveOut {
    t_min: f64,
    t_max: f64,
    steps: usize,
    min_radius: f64,
    max_radius: f64,
    annulus: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct InnerRow {
    angles: Vec<f64>,
    modulus: InnerEval,
    relative_distance: f64,
}

#[derive(Serialize)]
struct InnerOut {
    sigma: f64,
    at_infinity: Complex64,
    rows: Vec<InnerRow>,
    inside_disc: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    ok: bool,
    suites: Vec<SuiteReport>,
}

/// Test functions `n^{-s}` used by `subordinate`.
const PROBE_MAX: u64 = 12;

fn subordinate(c_str: &Option<String>, b: &[f64], c: &[f64]) -> Result<SubordinateOut> {
    let (cb, cc) = (CoeffVector::new(b.to_vec())?, CoeffVector::new(c.to_vec())?);
    let maj = majorizes(&cb, &cc)?;
    let (bvn, resid) = if maj {
        let parts = bvn_decompose(&cb, &cc)?;
        let res = bvn_residual(&cb, &cc, &parts);
        (Some(parts), Some(res))
    } else {
        (None, None)
    };
    let center = match c_str {
        Some(s) => parse_center(s)?,
        None => Complex64::new(0.5 + cc.r(), 0.0),
    };
    let pb = AffineSymbol::new(center, b.to_vec())?;
    let pc = AffineSymbol::new(center, c.to_vec())?;
    let mut norms = Vec::new();
    for n in 1..=PROBE_MAX {
        let f = DirichletPoly::monomial(n, Complex64::new(1.0, 0.0));
        norms.push((n, comp_norm_sq(&pb, &f, DEFAULT_K_MAX)?, comp_norm_sq(&pc, &f, DEFAULT_K_MAX)?));
    }
    let ordering_holds = norms.iter().all(|(_, x, y)| x <= &(y + 1e-9));
    Ok(SubordinateOut {
        b_majorized_by_c: maj,
        bvn,
        bvn_residual: resid,
        norms,
        ordering_holds,
    })
}

fn subordinate_scan(pairs: usize, seed: u64) -> Result<ScanOut> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ScanOut {
        pairs,
        comparable: 0,
        incomparable_consistent: 0,
        incomparable_mixed: 0,
    };
    for _ in 0..pairs {
        let d = 3;
        let mut b: Vec<f64> = (0..d).map(|_| g.gen_range(0.0..1.0)).collect();
        let c: Vec<f64> = (0..d).map(|_| g.gen_range(0.0..1.0)).collect();
        let scale = c.iter().sum::<f64>() / b.iter().sum::<f64>();
        b.iter_mut().for_each(|x| *x *= scale);
        let (cb, cc) = (CoeffVector::new(b.clone())?, CoeffVector::new(c.clone())?);
        if majorizes(&cb, &cc)? || majorizes(&cc, &cb)? {
            out.comparable += 1;
            continue;
        }
        let res = subordinate(&None, &b, &c)?;
        let below = res.norms.iter().filter(|(_, x, y)| x < y).count();
        let above = res.norms.iter().filter(|(_, x, y)| x > y).count();
        if below == 0 || above == 0 {
            out.incomparable_consistent += 1;
        } else {
            out.incomparable_mixed += 1;
        }
    }
    Ok(out)
}

fn opnorm(t: Target, nin: Option<usize>, kout: Option<usize>, scan: bool) -> Result<(OpnormOut, i32)> {
    let (symbol, report, (n_top, k_top)) = match t {
        Target::Affine(a) => {
            let (n0, k0) = default_truncation(&a);
            let (n, k) = (nin.unwrap_or(n0), kout.unwrap_or(k0));
            (OperatorSymbol::Affine(a.clone()), bound_suite_with(&a, n, k)?, (n, k))
        }
        Target::Alpha(alpha) => {
            let (n, k) = (nin.unwrap_or(DEFAULT_N_IN), kout.unwrap_or(DEFAULT_K_OUT));
            (OperatorSymbol::Cayley { alpha }, suite_for_phi_alpha(alpha, n, k)?, (n, k))
        }
        Target::Poly(_) => return Err(usage("opnorm needs an affine or Cayley-transform symbol")),
    };
    let steps: Vec<(usize, usize)> = if scan {
        (1..=4).map(|i| ((n_top * i).div_ceil(4).max(1), (k_top * i).div_ceil(4))).collect()
    } else {
        vec![(n_top, k_top)]
    };
    let grid = kernel_w_grid();
    let mut levels = Vec::new();
    for (n, k) in steps {
        let m = build_matrix(&symbol, n, k)?;
        let (w, q) = kernel_sup_sq(&m, &grid)?;
        levels.push(Level {
            n_in: n,
            k_out: k,
            rows: m.rows(),
            matrix_lower: sigma_max_sq(&m, POWER_TOL)?,
            kernel_s_lower: q,
            kernel_w: w,
        });
    }
    let value = |name: &str| report.get(name).map_or(f64::NAN, |e| e.value);
    let out = OpnormOut {
        levels,
        adjoint_lower: value("adjoint_lower"),
        genlower: value("genlower"),
        best_upper: report.best_upper(),
    };
    Ok((out, gate_exit(&report)))
}

fn dispatch(cmd: &Command, header: &mut Header) -> Result<Emit> {
    match cmd {
        Command::Bounds { sym, nin, kout, .. } => {
            if sym.fixture.as_deref() == Some("list") {
                let names: Vec<(&str, &str)> = fixtures().iter().map(|f| (f.name, f.description)).collect();
                return json(header, &names, EXIT_OK);
            }
            let report = match target(sym)? {
                Target::Affine(a) => match (nin, kout) {
                    (None, None) => bound_suite(&a)?,
                    _ => {
                        let (n0, k0) = default_truncation(&a);
                        bound_suite_with(&a, nin.unwrap_or(n0), kout.unwrap_or(k0))?
                    }
                },
                Target::Alpha(alpha) => {
                    suite_for_phi_alpha(alpha, nin.unwrap_or(DEFAULT_N_IN), kout.unwrap_or(DEFAULT_K_OUT))?
                }
                Target::Poly(_) => return Err(usage("bounds needs an affine or Cayley-transform symbol")),
            };
            let code = gate_exit(&report);
            json(header, &bounds_out(report), code)
        }
        Command::Opnorm { sym, nin, kout, scan, .. } => {
            let (out, code) = opnorm(target(sym)?, *nin, *kout, *scan)?;
            json(header, &out, code)
        }
        Command::Subordinate { c, coeffs, b, scan, samples, seed, .. } => {
            if *scan {
                let seed = seed.unwrap_or(DEFAULT_SEED);
                header.seed = Some(seed);
                return json(header, &subordinate_scan(samples.unwrap_or(200), seed)?, EXIT_OK);
            }
            let (Some(cs), Some(bs)) = (coeffs, b) else {
                return Err(usage("subordinate needs --coeffs and --b (or --scan)"));
            };
            let res = subordinate(c, &parse_list(bs)?, &parse_list(cs)?)?;
            let code = if res.b_majorized_by_c && !res.ordering_holds { EXIT_VIOLATION } else { EXIT_OK };
            json(header, &res, code)
        }
        Command::Majorize { coeffs, b, k, .. } => {
            let (cb, cc) = (CoeffVector::new(parse_list(b)?)?, CoeffVector::new(parse_list(coeffs)?)?);
            let maj = majorizes(&cb, &cc)?;
            let rows = hq_dominance(&cb, &cc, *k)?;
            let code = if maj && rows.iter().any(|r| !r.ok) { EXIT_VIOLATION } else { EXIT_OK };
            json(header, &MajorizeOut { b_majorized_by_c: maj, rows }, code)
        }
        Command::Measure { sym, delta, samples, seed, t, steps, .. } => {
            let tg = target(sym)?;
            let phi = boundary_symbol(&tg)?;
            let seed = seed.unwrap_or(DEFAULT_SEED);
            header.seed = Some(seed);
            let plan = SamplePlan::new(*samples, seed, phi.coords())?;
            let out = MeasureOut {
                delta: *delta,
                measure: measure_e_delta(phi, *delta, &plan)?,
                shapiro_constant: shapiro_constant(phi, *delta, &plan)?,
                ergodic: t.map(|t| ergodic_measure(phi, *delta, t, *steps)).transpose()?,
            };
            json(header, &out, EXIT_OK)
        }
        Command::Curve { sym, t, steps, csv, .. } => {
            let tg = target(sym)?;
            let phi = boundary_symbol(&tg)?;
            let trace = curve_trace(phi, -t, *t, *steps)?;
            if *csv {
                return Ok(Emit {
                    text: trace_csv(&trace),
                    code: EXIT_OK,
                });
            }
            let (lo, hi) = trace_radii(&trace, phi.center());
            let annulus = match &tg {
                Target::Affine(a) => Some(annulus_radii(a)),
                _ => None,
            };
            let out = CurveOut {
                t_min: -t,
                t_max: *t,
                steps: *steps,
                min_radius: lo,
                max_radius: hi,
                annulus,
            };
            json(header, &out, EXIT_OK)
        }
        Command::InnerCheck { sigma, samples, seed, .. } => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            header.seed = Some(seed);
            let p = crate::fixtures::inner_example()?;
            let mut g = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut inside = true;
            for _ in 0..*samples {
                let angles: Vec<f64> = (0..p.lambdas.len()).map(|_| g.gen_range(0.0..std::f64::consts::TAU)).collect();
                let chi = Character::from_angles(&angles);
                let rel = (mobius_symbol_value(&p, &chi, *sigma)? - p.c).norm() / p.r;
                inside &= rel <= 1.0;
                rows.push(InnerRow {
                    modulus: inner_boundary_modulus(&p, &chi, *sigma)?,
                    angles,
                    relative_distance: rel,
                });
            }
            let out = InnerOut {
                sigma: *sigma,
                at_infinity: mobius_symbol_value(&p, &Character::trivial(p.lambdas.len()), 2000.0)?,
                rows,
                inside_disc: inside,
            };
            json(header, &out, if inside { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::VerifyLemmas { suite, seed, .. } => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            header.seed = Some(seed);
            let names: Vec<&str> = if suite == "all" {
                SUITES.iter().map(|(n, _)| *n).collect()
            } else {
                vec![suite.as_str()]
            };
            let suites = names.iter().map(|n| run_suite(n, seed)).collect::<Result<Vec<_>>>()?;
            let ok = suites.iter().all(|s| s.ok);
            json(header, &VerifyOut { ok, suites }, if ok { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn out_path(cmd: &Command) -> Option<&str> {
    let o = match cmd {
        Command::Bounds { out, .. }
        | Command::Opnorm { out, .. }
        | Command::Subordinate { out, .. }
        | Command::Majorize { out, .. }
        | Command::Measure { out, .. }
        | Command::Curve { out, .. }
        | Command::InnerCheck { out, .. }
        | Command::VerifyLemmas { out, .. } => out,
    };
    o.out.as_deref()
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Bounds { .. } => "bounds",
        Command::Opnorm { .. } => "opnorm",
        Command::Subordinate { .. } => "subordinate",
        Command::Majorize { .. } => "majorize",
        Command::Measure { .. } => "measure",
        Command::Curve { .. } => "curve",
        Command::InnerCheck { .. } => "inner-check",
        Command::VerifyLemmas { .. } => "verify-lemmas",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stderr: text, ..Default::default() }
            } else {
                Outcome { code, stdout: text, ..Default::default() }
            };
        }
    };
    let strings: Vec<String> = argv.iter().skip(2).map(|s| s.to_string_lossy().into_owned()).collect();
    let mut header = Header::new(command_name(&cli.command), recorded_args(&strings), None);
    match dispatch(&cli.command, &mut header) {
        Ok(emit) => match out_path(&cli.command) {
            Some(path) => match std::fs::write(path, &emit.text) {
                Ok(()) => Outcome {
                    code: emit.code,
                    ..Default::default()
                },
                Err(e) => Outcome {
                    code: EXIT_USAGE,
                    stderr: format!("cannot write {path}: {e}\n"),
                    ..Default::default()
                },
            },
            None => Outcome {
                code: emit.code,
                stdout: emit.text,
                ..Default::default()
            },
        },
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stderr: format!("error: {e}\n"),
            ..Default::default()
        },
    }
}
