//! Command-line driver. Exit codes: 0 when every requested check passes,
//! 1 on a verification failure, 2 on usage or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::higher_homotopy_defect;
use crate::cohomology::version4_residual;
use crate::cyclic::CyclicSeries;
use crate::envelope::version1::{monomial, monomials, version1_residual};
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::freelie::{LieSeries, TangentPair};
use crate::json::{self, PairJson, SCHEMA};
use crate::kvsolve::{kv2_residuals, kv_residual, solve_kv_with, ColumnOrder, SolveOptions};
use crate::liealg::flow::{convergence_study, flow_demo, FlowOptions, VectorFamily};
use crate::liealg::{builtin, eval_cyclic_symbolic, eval_lie_symbolic, StructLie, StructLieJson, TruncatedFunction};
use crate::scalar::{fmt_rational, Rational};
use crate::zerocurve::{flatness_residual, growth_check, scale_family, scaling_check, zc_series, zc_series_at};

#[derive(Parser, Debug)]
#[command(name = "kvforge", version, about = "Exact Kashiwara-Vergne computations")]
struct Cli {
    /// JSON file whose keys are flag names; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Baker-Campbell-Hausdorff series in Lyndon coordinates.
    Bch(BchArgs),
    /// Solve the KV equations degree by degree.
    SolveKv(SolveArgs),
    /// Check a β against versions 1-4 of the KV equations.
    Verify(VerifyArgs),
    /// Zero-curvature transfer of a family γ.
    Zerocurve(ZerocurveArgs),
    /// Evaluate a universal series in a finite-dimensional Lie algebra.
    Eval(EvalArgs),
    /// The degree −1 operator h̃ − h on C(g³) and its commutator with d.
    Homotopy3(HomotopyArgs),
    /// Numeric zero-curvature flow on the solvable2 example.
    FlowDemo(FlowArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Lyndon,
    Reversed,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BchArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    degree: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Solve degrees 1..=N.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    degree: u64,
    #[arg(long)]
    no_symmetrize: bool,
    /// Pinning strategy for free unknowns.
    #[arg(long, value_enum, default_value_t = Order::Lyndon)]
    order: Order,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    /// Builtin algebra: heisenberg3, solvable2, sl2, abelianN.
    #[arg(long, default_value = "heisenberg3")]
    algebra: String,
    /// Structure constants as JSON; overrides --algebra.
    #[arg(long)]
    algebra_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    beta: PathBuf,
    /// Versions to check, from 1-4.
    #[arg(long, alias = "version", value_delimiter = ',', default_values_t = vec![2u8, 3])]
    versions: Vec<u8>,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Largest degree of test distributions for version 1.
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// Degree cap of the module for version 4.
    #[arg(long, default_value_t = 3)]
    cap: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Flat,
    Scaling,
    Estimate,
}

#[derive(Args, Debug)]
struct ZerocurveArgs {
    #[arg(long)]
    gamma: PathBuf,
    /// Truncation degree applied to γ.
    #[arg(long, default_value_t = 4)]
    degree: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Check::Flat, Check::Scaling])]
    check: Vec<Check>,
    /// Replace γ by r_t^* γ before transferring.
    #[arg(long)]
    rescale: bool,
    /// Also report β at this value of s.
    #[arg(long)]
    s_upper: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// A Lie series, a tangent pair or a cyclic series.
    #[arg(long)]
    series: PathBuf,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Total-degree cap of the resulting functions.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct HomotopyArgs {
    #[arg(long)]
    beta: PathBuf,
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, default_value_t = 2)]
    cap: usize,
    /// Include the entries of h̃ − h.
    #[arg(long)]
    with_difference: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, default_value_t = 1e-2)]
    delta: f64,
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    /// Starting step of the halving study.
    #[arg(long, default_value_t = 0.25)]
    coarse_h: f64,
    #[arg(long, default_value_t = 2)]
    refinements: usize,
    #[arg(long, default_value_t = 3.5)]
    min_order: f64,
    #[command(flatten)]
    output: Output,
}

/// Appends config entries whose flags are absent from `args`.
fn merge_config(mut args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args
        .get(pos + 1)
        .ok_or("--config needs a path")?
        .clone();
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("config: {e}"))?;
    let map = value.as_object().ok_or("config must be a JSON object")?;
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if args.iter().any(|a| a == flag.as_str()) {
            continue;
        }
        let rendered = match v {
            Value::Bool(true) => None,
            Value::Bool(false) | Value::Null => continue,
            Value::String(s) => Some(s.clone()),
            Value::Array(items) => Some(
                items
                    .iter()
                    .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            other => Some(other.to_string()),
        };
        args.push(flag.into());
        if let Some(r) = rendered {
            args.push(r.into());
        }
    }
    Ok(args)
}

fn init_threads() {
    if let Some(n) = std::env::var("KVFORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let args = match merge_config(argv.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: &Output, v: &T) -> Result<()> {
    emit(output, &json::to_string_pretty(v))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_pair_file(path: &Path) -> Result<(TangentPair, Option<String>)> {
    let j: PairJson = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((json::pair_from_json(&j)?, j.strategy))
}

fn load_algebra(a: &AlgebraArgs) -> Result<StructLie> {
    match &a.algebra_file {
        Some(p) => {
            let j: StructLieJson = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
            StructLie::from_json(&j)
        }
        None => builtin(&a.algebra),
    }
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Bch(a) => cmd_bch(a),
        Command::SolveKv(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Zerocurve(a) => cmd_zerocurve(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Homotopy3(a) => cmd_homotopy(a),
        Command::FlowDemo(a) => cmd_flow(a),
    }
}

fn cmd_bch(a: BchArgs) -> Result<bool> {
    let n = a.degree as usize;
    let phi = crate::bch::dynkin_bch(n);
    match a.format {
        Format::Json => emit_json(&a.output, &json!({"schema": SCHEMA, "degree": n, "series": json::series_to_json(&phi)}))?,
        Format::Text => {
            let lines: Vec<String> = phi.terms().map(|(w, c)| format!("{w}\t{c}")).collect();
            emit(&a.output, &lines.join("\n"))?;
        }
    }
    Ok(true)
}

fn cmd_solve(a: SolveArgs) -> Result<bool> {
    let options = SolveOptions {
        symmetrize: !a.no_symmetrize,
        order: match a.order {
            Order::Lyndon => ColumnOrder::Lyndon,
            Order::Reversed => ColumnOrder::Reversed,
        },
    };
    let sol = solve_kv_with(a.degree as usize + 1, options)?;
    let strategy = format!("{}; symmetrize={}", options.order.tag(), options.symmetrize);
    let zero = kv_residual(&sol.beta)?.is_zero();
    let mut doc = serde_json::to_value(json::pair_to_json(&sol.beta, Some(&strategy)))?;
    doc["degree"] = json!(a.degree);
    doc["residual_zero"] = json!(zero);
    doc["degrees"] = sol
        .degrees
        .iter()
        .map(|d| json!({"degree": d.degree, "unknowns": d.unknowns, "equations": d.equations, "rank": d.rank}))
        .collect();
    emit_json(&a.output, &doc)?;
    Ok(zero)
}

#[derive(Serialize)]
struct DegreeNorm {
    degree: usize,
    norm: String,
}

#[derive(Serialize)]
struct CheckReport {
    version: u8,
    part: String,
    degrees: Vec<DegreeNorm>,
    zero: bool,
}

fn lie_norms(l: &LieSeries) -> Vec<DegreeNorm> {
    (1..=l.truncation())
        .map(|n| DegreeNorm {
            degree: n,
            norm: fmt_rational(&l.norm_proxy(n)),
        })
        .collect()
}

fn cyclic_norms(c: &CyclicSeries) -> Vec<DegreeNorm> {
    (1..=c.truncation())
        .map(|n| DegreeNorm {
            degree: n,
            norm: fmt_rational(
                &c.terms()
                    .filter(|(w, _)| w.len() == n)
                    .fold(Rational::zero(), |acc, (_, v)| acc + v.abs_sum()),
            ),
        })
        .collect()
}

fn padded(beta: &TangentPair, n: usize) -> TangentPair {
    if beta.truncation() >= n {
        beta.clone()
    } else {
        beta.with_truncation(n)
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let (beta, strategy) = read_pair_file(&a.beta)?;
    let n = beta.truncation();
    let mut checks = Vec::new();
    for &v in &a.versions {
        match v {
            1 => {
                let env = Envelope::new(load_algebra(&a.algebra)?);
                let max = a.max_degree;
                let beta = padded(&beta, max + 1);
                let mut degrees = Vec::new();
                let mut zero = true;
                for k in 0..=max {
                    let mut norm = Rational::zero();
                    for alpha in monomials(2 * env.dim(), k) {
                        if alpha.iter().sum::<u32>() as usize != k {
                            continue;
                        }
                        let r = version1_residual(&env, &beta, &monomial(&alpha, k.max(1)))?;
                        norm += r.terms().fold(Rational::zero(), |acc, (_, c)| acc + c.abs_sum());
                    }
                    zero &= norm.is_zero();
                    degrees.push(DegreeNorm {
                        degree: k,
                        norm: fmt_rational(&norm),
                    });
                }
                checks.push(CheckReport {
                    version: 1,
                    part: format!("m_t residual on {}", env.algebra().name),
                    degrees,
                    zero,
                });
            }
            2 => {
                let (lie, tr) = kv2_residuals(&beta)?;
                checks.push(CheckReport {
                    version: 2,
                    part: "phi_t".into(),
                    degrees: lie_norms(&lie),
                    zero: lie.is_zero(),
                });
                checks.push(CheckReport {
                    version: 2,
                    part: "kappa_t".into(),
                    degrees: cyclic_norms(&tr),
                    zero: tr.is_zero(),
                });
            }
            3 => {
                let r = kv_residual(&beta)?;
                checks.push(CheckReport {
                    version: 3,
                    part: "lie".into(),
                    degrees: lie_norms(&r.lie_part),
                    zero: r.lie_part.is_zero(),
                });
                checks.push(CheckReport {
                    version: 3,
                    part: "trace".into(),
                    degrees: cyclic_norms(&r.trace_part),
                    zero: r.trace_part.is_zero(),
                });
            }
            4 => {
                let env = Envelope::new(load_algebra(&a.algebra)?);
                let cap = a.cap;
                let op = version4_residual(&env, &padded(&beta, cap + 1), cap)?;
                let norm = op
                    .columns
                    .values()
                    .flat_map(|c| c.values())
                    .fold(Rational::zero(), |acc, c| acc + c.abs_sum());
                checks.push(CheckReport {
                    version: 4,
                    part: format!("M_t residual on {} (cap {cap})", env.algebra().name),
                    degrees: vec![DegreeNorm {
                        degree: cap,
                        norm: fmt_rational(&norm),
                    }],
                    zero: op.is_zero(),
                });
            }
            other => return Err(Error::Invalid(format!("unknown version {other}"))),
        }
    }
    let passed = checks.iter().all(|c| c.zero);
    // versions 1 and 4 read missing degrees of β as zero
    let needed = a
        .versions
        .iter()
        .map(|v| match v {
            1 => a.max_degree + 1,
            4 => a.cap + 1,
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    emit_json(
        &a.output,
        &json!({
            "schema": SCHEMA,
            "truncation": n,
            "zero_padded_to": (needed > n).then_some(needed),
            "strategy": strategy,
            "checks": checks,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_zerocurve(a: ZerocurveArgs) -> Result<bool> {
    let (gamma, strategy) = read_pair_file(&a.gamma)?;
    let mut gamma = gamma.with_truncation(a.degree);
    if a.rescale {
        gamma = scale_family(&gamma);
    }
    let beta = zc_series(&gamma)?;
    let mut doc = json!({"schema": SCHEMA, "strategy": strategy, "beta": json::pair_to_json(&beta, None)});
    let mut passed = true;
    for c in &a.check {
        match c {
            Check::Flat => {
                let ok = flatness_residual(&beta, &gamma)?.is_zero();
                passed &= ok;
                doc["flat"] = json!(ok);
            }
            Check::Scaling => {
                let ok = scaling_check(&beta);
                passed &= ok;
                doc["scaling"] = json!(ok);
            }
            Check::Estimate => {
                let report = growth_check(&gamma)?;
                passed &= report.all_hold();
                doc["estimate"] = serde_json::to_value(&report)?;
            }
        }
    }
    if let Some(s) = &a.s_upper {
        let s = crate::scalar::parse_rational(s)?;
        doc["beta_at_s"] = serde_json::to_value(json::pair_to_json(&zc_series_at(&gamma, &s)?, None))?;
    }
    doc["passed"] = json!(passed);
    emit_json(&a.output, &doc)?;
    Ok(passed)
}

fn function_json(f: &TruncatedFunction) -> Value {
    f.terms()
        .map(|(m, c)| json!({"monomial": m, "coeff": c.to_string()}))
        .collect()
}

fn cmd_eval(a: EvalArgs) -> Result<bool> {
    let g = load_algebra(&a.algebra)?;
    let value: Value = serde_json::from_str(&read(&a.series)?)?;
    let mut components = Vec::new();
    if value.get("beta1").is_some() {
        let j: PairJson = serde_json::from_value(value)?;
        let pair = json::pair_from_json(&j)?;
        let cap = a.cap.unwrap_or(pair.truncation());
        for (name, l) in [("beta1", &pair.beta1), ("beta2", &pair.beta2)] {
            let coords: Vec<Value> = eval_lie_symbolic(l, &g, cap).iter().map(function_json).collect();
            components.push(json!({"name": name, "coords": coords}));
        }
    } else if value["terms"].as_array().is_some_and(|t| t.iter().any(|x| x.get("necklace").is_some())) {
        let c = json::cyclic_from_json(&serde_json::from_value(value)?)?;
        let cap = a.cap.unwrap_or(c.truncation());
        components.push(json!({"name": "function", "coords": [function_json(&eval_cyclic_symbolic(&c, &g, cap))]}));
    } else {
        let l = json::series_from_json(&serde_json::from_value(value)?)?;
        let cap = a.cap.unwrap_or(l.truncation());
        let coords: Vec<Value> = eval_lie_symbolic(&l, &g, cap).iter().map(function_json).collect();
        components.push(json!({"name": "series", "coords": coords}));
    }
    emit_json(
        &a.output,
        &json!({"schema": SCHEMA, "algebra": g.to_json(), "variables": "x_0..x_{d-1}, y_0..y_{d-1}", "components": components}),
    )?;
    Ok(true)
}

fn cmd_homotopy(a: HomotopyArgs) -> Result<bool> {
    let (beta, strategy) = read_pair_file(&a.beta)?;
    let env = Envelope::new(load_algebra(&a.algebra)?);
    let report = higher_homotopy_defect(&env, &beta, a.cap)?;
    let mut doc = json!({
        "schema": SCHEMA,
        "strategy": strategy,
        "report": serde_json::to_value(&report)?,
        "defect": report.defect.entries(),
    });
    if a.with_difference {
        doc["difference"] = serde_json::to_value(report.difference.entries())?;
    }
    emit_json(&a.output, &doc)?;
    Ok(report.is_cochain_map)
}

fn cmd_flow(a: FlowArgs) -> Result<bool> {
    let g = builtin("solvable2")?;
    let y = VectorFamily::solvable2_example(&g)?;
    let opts = FlowOptions {
        h: a.h,
        delta: a.delta,
        threshold: a.threshold,
        ..Default::default()
    };
    let fine = flow_demo(&y, &opts)?;
    let study = convergence_study(&y, &FlowOptions { h: a.coarse_h, ..opts.clone() }, a.refinements)?;
    let passed = fine.passed && study.observed_order >= a.min_order;
    emit_json(
        &a.output,
        &json!({"schema": SCHEMA, "run": fine, "convergence": serde_json::to_value(&study)?, "min_order": a.min_order, "passed": passed}),
    )?;
    Ok(passed)
}
