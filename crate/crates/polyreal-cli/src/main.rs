//! Command-line front end: parse and check terms, evaluate them to a
//! guaranteed precision, run the verification suites, the grid checks and
//! the reconstruction machines, and measure precision scaling.
//!
//! Every subcommand can emit JSON (`--json`); the human-readable output is
//! a rendering of the same data. Exit codes: 0 success/pass, 1 check or
//! verification failure (and any evaluation error, reported as a structured
//! error object), 2 usage errors.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use polyreal::bc::{bc_eval, check_bc_tiers, parse_bc, translate};
use polyreal::builders;
use polyreal::creal::{CauchyReal, PointLiteral};
use polyreal::dyadic::Dyadic;
use polyreal::error::Error;
use polyreal::eval::{eval_to_precision, EvalConfig};
use polyreal::harness::{
    bench_scaling, check_approximation, check_definability, check_peaceful,
    check_t_definability, check_t_smooth, floor_scaled_identity_approx, integer_approx_machine,
    lipschitz_machine, modulus_machine, poly_lipschitz_machine, scaling_machine, GridFn,
    GridSpec, RefFunction, SharpT,
};
use polyreal::suites;
use polyreal::term::{parse, Term};
use polyreal::tier::{check_tiers, CheckReport, CheckedTerm};

#[derive(Parser)]
#[command(name = "polyreal", version, about = "Tiered real function algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term file and print its tier report.
    Check {
        file: String,
        /// Treat the file as a discrete (srec) term.
        #[arg(long)]
        bc: bool,
    },
    /// Evaluate a term at a point to within 2^-prec.
    Eval {
        file: String,
        /// Comma-separated point: decimals, m*2^e, or p/q rationals.
        #[arg(long, default_value = "")]
        at: String,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
    /// Evaluate a unary term over a dyadic-stepped range.
    Table {
        file: String,
        /// Inclusive range a..b for the argument.
        #[arg(long)]
        range: String,
        /// Step as an exact dyadic literal (default 1).
        #[arg(long, default_value = "1")]
        step: String,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = ["integers", "peaceful", "closed-form", "bc-agree"])]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate a discrete term on integer arguments.
    BcEval {
        file: String,
        /// Comma-separated nonnegative integers.
        #[arg(long, default_value = "")]
        args: String,
    },
    /// Translate a discrete term into the real algebra.
    BcTranslate { file: String },
    /// Grid checks and reconstruction machines.
    Harness {
        #[command(subcommand)]
        check: HarnessCommand,
    },
    /// Measure precision scaling of evaluation.
    Bench {
        file: String,
        #[arg(long, default_value = "")]
        at: String,
        /// Comma-separated precisions.
        #[arg(long, default_value = "8,16,32,64,128,256")]
        precisions: String,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Log-log slope limit for the polynomial-trend verdict.
        #[arg(long, default_value_t = 3.0)]
        slope_limit: f64,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = -8)]
    xmin: i64,
    #[arg(long, default_value_t = 8)]
    xmax: i64,
    #[arg(long, default_value_t = 8)]
    ymax: i64,
    #[arg(long, default_value_t = 8)]
    zmax: i64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    prec: u32,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        GridSpec {
            x_range: (self.xmin, self.xmax),
            y_range: (1, self.ymax),
            z_range: (1, self.zmax),
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum HarnessCommand {
    /// `|g(x,y) - y f(x/y)| <= bound` on the integer grid.
    Definability {
        /// Reference function: identity, half, square, `const:<k>`.
        #[arg(long, default_value = "identity")]
        f: String,
        /// Term file for g (or use --g-builtin).
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_parser = ["first-proj", "zero2"])]
        g_builtin: Option<String>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// `|g(x,y,z) - y f(x/s[yz])| <= bound` under the admissibility condition.
    TDefinability {
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_parser = ["scaled-identity", "zero3"])]
        g_builtin: Option<String>,
        #[arg(long, default_value_t = 1)]
        t_deg: u32,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sampled scaled-smoothness check: `y |f(x1/s) - f(x2/s)| <= M`.
    Smooth {
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long, default_value_t = 1)]
        t_deg: u32,
        #[arg(long, default_value_t = 4)]
        m_bound: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Enclosure at x vs the hull of the enclosures at floor(x), ceil(x).
    Peaceful {
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_parser = ["nat-id", "ones", "popcount3", "parity"])]
        g_builtin: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// `|g~(x,y) - h(x,y)| <= bound` between a real and a discrete term.
    Approximation {
        /// Real-algebra term file for g~.
        #[arg(long)]
        g: String,
        /// Discrete term file for h.
        #[arg(long)]
        h: String,
        /// Bound as a point literal (default 1/4).
        #[arg(long, default_value = "1/4")]
        bound: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Rebuild f(x) from its modulus and approximation function.
    MachineModulus {
        #[arg(long, default_value = "square")]
        f: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        prec: u32,
    },
    /// Rebuild f(x) from g with `|g(x,y) - y f(x)| <= 1`.
    MachineScaling {
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        prec: u32,
    },
    /// Rebuild a Lipschitz f(x) from g with `|g(x,y) - y f(x/y)| <= 1`.
    MachineLipschitz {
        #[arg(long, default_value = "half")]
        f: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        /// Use the locally-poly-Lipschitz variant (per-ball constants).
        #[arg(long)]
        local: bool,
    },
    /// Rebuild f(x) from a polytime integer approximation.
    MachineIntapprox {
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        prec: u32,
    },
}

/// Prints to stdout, exiting quietly when the reader has gone away.
fn print_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { value, pass }) => {
            if cli.json {
                print_stdout(&serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                // The human view summarizes: the full per-point residual
                // array stays in the JSON output.
                let mut value = value;
                if let Some(obj) = value.as_object_mut() {
                    obj.remove("residuals");
                }
                print_stdout(&render_human(&value));
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let obj = json!({ "error": { "kind": error_kind(&err), "message": err.to_string() } });
            if cli.json {
                eprintln!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(1)
        }
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::ExponentOverflow { .. } => "exponent-overflow",
        Error::Resource { .. } => "resource",
        Error::Domain { .. } => "domain",
        Error::Parse { .. } => "parse",
        Error::IllTiered { .. } => "ill-tiered",
        Error::Arity { .. } => "arity",
    }
}

struct Outcome {
    value: serde_json::Value,
    pass: bool,
}

fn ok(value: serde_json::Value) -> Result<Outcome, Error> {
    Ok(Outcome { value, pass: true })
}

fn graded(value: serde_json::Value, pass: bool) -> Result<Outcome, Error> {
    Ok(Outcome { value, pass })
}

fn eval_config() -> EvalConfig {
    let mut cfg = EvalConfig::default();
    if let Ok(rounds) = std::env::var("POLYREAL_EVAL_BUDGET") {
        if let Ok(rounds) = rounds.parse::<u32>() {
            cfg.budget_rounds = rounds.max(1);
        }
    }
    cfg
}

fn parse_err(msg: String) -> Error {
    Error::Parse { msg, line: 0, col: 0 }
}

fn read_file(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read `{path}`: {e}")))
}

fn load_term(path: &str) -> Result<Term, Error> {
    parse(&read_file(path)?)
}

fn load_checked(path: &str) -> Result<CheckedTerm, Error> {
    CheckedTerm::new(&load_term(path)?)
}

fn parse_points(spec: &str) -> Result<Vec<CauchyReal>, Error> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|s| Ok(PointLiteral::from_str(s.trim())?.to_creal()))
        .collect()
}

fn parse_point(spec: &str) -> Result<PointLiteral, Error> {
    PointLiteral::from_str(spec.trim())
}

fn ref_function(name: &str) -> Result<RefFunction, Error> {
    RefFunction::by_name(name).ok_or_else(|| parse_err(format!("unknown reference function `{name}`")))
}

/// The builtin grid functions used by the harness fixtures.
fn builtin_grid_term(name: &str) -> Result<Term, Error> {
    Ok(match name {
        "first-proj" => Term::proj(2, 0, 1),
        "zero2" => {
            Term::comp(Term::Sub, vec![], vec![Term::proj(2, 0, 1), Term::proj(2, 0, 1)])
        }
        "zero3" => {
            Term::comp(Term::Sub, vec![], vec![Term::proj(3, 0, 1), Term::proj(3, 0, 1)])
        }
        "scaled-identity" => builders::scaled_identity(),
        "nat-id" => builders::nat_id(),
        "ones" => builders::ones(),
        "popcount3" => builders::popcount_plus_3(),
        "parity" => Term::Parity,
        other => return Err(parse_err(format!("unknown builtin `{other}`"))),
    })
}

fn grid_fn(file: &Option<String>, builtin: &Option<String>) -> Result<GridFn, Error> {
    let term = checked_grid_term(file, builtin)?;
    Ok(GridFn::from_term(term))
}

fn checked_grid_term(
    file: &Option<String>,
    builtin: &Option<String>,
) -> Result<CheckedTerm, Error> {
    match (file, builtin) {
        (Some(path), None) => load_checked(path),
        (None, Some(name)) => CheckedTerm::new(&builtin_grid_term(name)?),
        _ => Err(parse_err("provide exactly one of --g or --g-builtin".into())),
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    command: &'a str,
    file: &'a str,
    accepted: bool,
    signature: Option<polyreal::term::Signature>,
    violations: Vec<serde_json::Value>,
}

fn check_output(command: &str, file: &str, report: &CheckReport) -> serde_json::Value {
    let violations = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "path": CheckReport::path_string(&v.path),
                "rule": v.rule,
                "detail": v.detail,
            })
        })
        .collect();
    serde_json::to_value(CheckOutput {
        command,
        file,
        accepted: report.accepted,
        signature: report.signature,
        violations,
    })
    .expect("serializable")
}

fn value_json(d: &Dyadic) -> serde_json::Value {
    json!({ "dyadic": d.to_string(), "decimal": d.decimal_string() })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check { file, bc } => {
            let report = if *bc {
                check_bc_tiers(&parse_bc(&read_file(file)?)?)
            } else {
                check_tiers(&load_term(file)?)
            };
            let accepted = report.accepted;
            graded(check_output("check", file, &report), accepted)
        }
        Command::Eval { file, at, prec } => {
            let term = load_checked(file)?;
            let points = parse_points(at)?;
            let value = eval_to_precision(&term, &points, *prec, &eval_config())?;
            ok(json!({
                "command": "eval",
                "file": file,
                "point": at,
                "precision": prec,
                "signature": term.signature(),
                "value": value_json(&value),
            }))
        }
        Command::Table { file, range, step, prec } => {
            let term = load_checked(file)?;
            if term.signature().arity() != 1 {
                return Err(Error::Arity {
                    expected: 1,
                    got: term.signature().arity() as usize,
                });
            }
            let (a, b) = range
                .split_once("..")
                .ok_or_else(|| parse_err("range must look like a..b".into()))?;
            let (a, b, step) = match (parse_point(a)?, parse_point(b)?, parse_point(step)?) {
                (PointLiteral::Exact(a), PointLiteral::Exact(b), PointLiteral::Exact(s)) => {
                    (a, b, s)
                }
                _ => {
                    return Err(parse_err(
                        "table endpoints and step must be exact dyadics".into(),
                    ))
                }
            };
            if step.is_zero() || step.is_negative() {
                return Err(Error::Domain { what: "step must be positive".into() });
            }
            let cfg = eval_config();
            let mut rows = Vec::new();
            let mut x = a;
            while x <= b {
                let value =
                    eval_to_precision(&term, &[CauchyReal::from_dyadic(x.clone())], *prec, &cfg)?;
                rows.push(json!({ "x": x.decimal_string(), "value": value_json(&value) }));
                x = x.add(&step)?;
            }
            ok(json!({ "command": "table", "file": file, "precision": prec, "rows": rows }))
        }
        Command::Verify { suite, samples, seed } => {
            let report = match suite.as_str() {
                "integers" => suites::integers_suite(*samples, *seed)?,
                "peaceful" => suites::peaceful_suite(*samples, *seed)?,
                "closed-form" => suites::closed_form_suite(*samples, *seed)?,
                "bc-agree" => suites::bc_agreement_suite(64, *seed)?,
                _ => unreachable!("clap validates the suite name"),
            };
            let pass = report.pass;
            let mut value = serde_json::to_value(&report).expect("serializable");
            value["command"] = json!("verify");
            graded(value, pass)
        }
        Command::BcEval { file, args } => {
            let term = parse_bc(&read_file(file)?)?;
            let ints: Vec<BigInt> = args
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    BigInt::from_str(s.trim()).map_err(|_| parse_err(format!("bad integer `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let value = bc_eval(&term, &ints)?;
            ok(json!({
                "command": "bc-eval",
                "file": file,
                "args": args,
                "value": value.to_string(),
            }))
        }
        Command::BcTranslate { file } => {
            let term = parse_bc(&read_file(file)?)?;
            let report = check_bc_tiers(&term);
            if !report.accepted {
                return Err(Error::IllTiered { violations: report.violations.len() });
            }
            let translated = translate(&term);
            let checked = CheckedTerm::new(&translated)?;
            ok(json!({
                "command": "bc-translate",
                "file": file,
                "signature": checked.signature(),
                "term": translated.to_string(),
            }))
        }
        Command::Harness { check } => run_harness(check),
        Command::Bench { file, at, precisions, repeats, slope_limit } => {
            let term = load_checked(file)?;
            let literals: Vec<PointLiteral> = at
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(parse_point)
                .collect::<Result<_, _>>()?;
            let precisions: Vec<u32> = precisions
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| parse_err(format!("bad precision `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let make_point = || literals.iter().map(|l| l.to_creal()).collect();
            let report = bench_scaling(
                &term,
                make_point,
                &precisions,
                *repeats,
                *slope_limit,
                &eval_config(),
            )?;
            let pass = report.polynomial_trend;
            let mut value = serde_json::to_value(&report).expect("serializable");
            value["command"] = json!("bench");
            graded(value, pass)
        }
    }
}

fn grid_value(command: &str, report: &polyreal::harness::GridReport) -> serde_json::Value {
    let mut value = serde_json::to_value(report).expect("serializable");
    value["command"] = json!(command);
    value
}

fn run_harness(check: &HarnessCommand) -> Result<Outcome, Error> {
    match check {
        HarnessCommand::Definability { f, g, g_builtin, bound, grid } => {
            let f = ref_function(f)?;
            let g = grid_fn(g, g_builtin)?;
            let report =
                check_definability(&f, &g, &Dyadic::from_i64(*bound), &grid.spec(), grid.prec)?;
            let pass = report.pass;
            graded(grid_value("harness-definability", &report), pass)
        }
        HarnessCommand::TDefinability { f, g, g_builtin, t_deg, bound, grid } => {
            let f = ref_function(f)?;
            let g = grid_fn(g, g_builtin)?;
            let report = check_t_definability(
                &f,
                &g,
                &SharpT::degree(*t_deg),
                &Dyadic::from_i64(*bound),
                &grid.spec(),
                grid.prec,
            )?;
            let pass = report.pass;
            graded(grid_value("harness-t-definability", &report), pass)
        }
        HarnessCommand::Smooth { f, t_deg, m_bound, grid } => {
            let f = ref_function(f)?;
            let report =
                check_t_smooth(&f, &SharpT::degree(*t_deg), *m_bound, &grid.spec(), grid.prec)?;
            let pass = report.pass;
            graded(grid_value("harness-smooth", &report), pass)
        }
        HarnessCommand::Peaceful { g, g_builtin, grid } => {
            let term = checked_grid_term(g, g_builtin)?;
            let report = check_peaceful(&term, &grid.spec(), grid.prec)?;
            let pass = report.pass;
            graded(grid_value("harness-peaceful", &report), pass)
        }
        HarnessCommand::Approximation { g, h, bound, grid } => {
            let g = GridFn::from_term(load_checked(g)?);
            let h = parse_bc(&read_file(h)?)?;
            let bound = match parse_point(bound)? {
                PointLiteral::Exact(d) => d,
                PointLiteral::Rational { num, den } => {
                    polyreal::dyadic::div_round(&num, &den, 20, polyreal::Round::Nearest)?
                }
            };
            let report = check_approximation(&g, &h, &bound, &grid.spec(), grid.prec)?;
            let pass = report.pass;
            graded(grid_value("harness-approximation", &report), pass)
        }
        HarnessCommand::MachineModulus { f, x, prec } => {
            let f = ref_function(f)?;
            let modulus = f
                .modulus
                .clone()
                .ok_or_else(|| Error::Domain { what: format!("{} declares no modulus", f.name) })?;
            let point = parse_point(x)?;
            let f_for_psi = f.clone();
            let psi = move |d: &Dyadic, j: u32| f_for_psi.at_dyadic(d, j);
            let run = |p: &CauchyReal, n: u32| modulus_machine(&*modulus, &psi, p, n);
            machine_outcome("machine-modulus", &f.name, x, *prec, &point, run)
        }
        HarnessCommand::MachineScaling { f, x, prec } => {
            let f = ref_function(f)?;
            let point = parse_point(x)?;
            let f_for_g = f.clone();
            // g(x, y) = y f(x), evaluated through the oracle interface.
            let g = move |xx: &CauchyReal, yy: &CauchyReal, n: u32| -> Result<Dyadic, Error> {
                let y = match yy.exact_value() {
                    Some(d) => d.clone(),
                    None => yy.query(n + 2)?,
                };
                let bits = u32::try_from(y.int_bits()).unwrap_or(u32::MAX >> 2);
                let fx = f_for_g.apply(xx).query(n + bits + 1)?;
                fx.mul(&y)
            };
            let run = |p: &CauchyReal, n: u32| scaling_machine(&g, p, n);
            machine_outcome("machine-scaling", &f.name, x, *prec, &point, run)
        }
        HarnessCommand::MachineLipschitz { f, x, prec, local } => {
            let f = ref_function(f)?;
            let point = parse_point(x)?;
            let f_for_g = f.clone();
            // g(x, y) = y f(x/y); the machine drives it at an integer x and
            // a power-of-two y, so x/y is an exact dyadic.
            let g = move |xx: &CauchyReal, yy: &CauchyReal, n: u32| -> Result<Dyadic, Error> {
                let xd = match xx.exact_value() {
                    Some(d) => d.clone(),
                    None => xx.query(n + 2)?,
                };
                let yd = match yy.exact_value() {
                    Some(d) => d.clone(),
                    None => yy.query(n + 2)?,
                };
                let ratio = xd.mul(&Dyadic::pow2(-(yd.int_bits() as i64 - 1))?)?;
                let bits = u32::try_from(yd.int_bits()).unwrap_or(u32::MAX >> 2);
                let fx = f_for_g.at_dyadic(&ratio, n + bits + 1)?;
                fx.mul(&yd)
            };
            let local = *local;
            let seq = f.lipschitz_seq.clone();
            let exp = f.lipschitz_exp;
            let run = |p: &CauchyReal, n: u32| -> Result<Dyadic, Error> {
                if local {
                    let seq = seq.clone().ok_or_else(|| Error::Domain {
                        what: "no Lipschitz sequence declared".into(),
                    })?;
                    poly_lipschitz_machine(&g, &*seq, p, n)
                } else {
                    let a = exp.ok_or_else(|| Error::Domain {
                        what: "no Lipschitz exponent declared".into(),
                    })?;
                    lipschitz_machine(&g, a, p, n)
                }
            };
            machine_outcome("machine-lipschitz", &f.name, x, *prec, &point, run)
        }
        HarnessCommand::MachineIntapprox { f, x, prec } => {
            let f = ref_function(f)?;
            if f.name != "identity" {
                return Err(Error::Domain {
                    what: "only the identity fixture ships an integer approximation".into(),
                });
            }
            let point = parse_point(x)?;
            let h = |a: &BigInt, b: &BigInt, c: &BigInt| floor_scaled_identity_approx(a, b, c);
            let degree = f.smooth_degree.unwrap_or(1);
            let run = |p: &CauchyReal, n: u32| integer_approx_machine(&h, degree, p, n);
            machine_outcome("machine-intapprox", &f.name, x, *prec, &point, run)
        }
    }
}

/// Runs a machine on both representatives of the point and reports both
/// outputs, demonstrating representation independence.
fn machine_outcome(
    command: &str,
    f_name: &str,
    x: &str,
    prec: u32,
    point: &PointLiteral,
    run: impl Fn(&CauchyReal, u32) -> Result<Dyadic, Error>,
) -> Result<Outcome, Error> {
    let out = run(&point.to_creal(), prec)?;
    let alt = run(&point.to_creal_alt(), prec)?;
    ok(json!({
        "command": command,
        "f": f_name,
        "x": x,
        "precision": prec,
        "output": value_json(&out),
        "output_alt_representative": value_json(&alt),
    }))
}

fn render_human(value: &serde_json::Value) -> String {
    let mut out = String::new();
    render_into(&mut out, value, 0);
    out.trim_end().to_string()
}

fn render_into(out: &mut String, value: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_into(out, v, indent + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {v}");
                    }
                }
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        let _ = writeln!(out, "{pad}-");
                        render_into(out, v, indent + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {v}");
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{other}");
        }
    }
}
