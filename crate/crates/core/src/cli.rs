//! The `idlab` command line: one verb per check or simulation, one JSON
//! report per run, CSV plot data alongside.
//!
//! Exit codes: 0 for PASS/ID, 1 for FAIL/NOT_ID, 2 for INCONCLUSIVE and 3
//! for usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::divisibility::{self, ExampleKind};
use crate::dtype::{self, DiscreteStableSpec, ThinningParam};
use crate::error::{Error, Result};
use crate::laws;
use crate::max_random::{self, MaxBase, MaxStabilityCase, MidTarget};
use crate::random_sums::{self, PphiSpec};
use crate::report::Verdict;
use crate::samplers::{self, EmpiricalDist, SeededStream};
use crate::series::ProbSeq;
use crate::tolerances::{self, tolerances, Tolerances};
use crate::transforms::{self, LtSpec, PgfSpec};

/// Environment variable naming a JSON file that overrides the tolerance table.
pub const TOLERANCE_ENV: &str = "IDLAB_TOLERANCE_TABLE";

pub const LAW_GRAMMAR: &str = "family:key=val[,key=val] | @file.json";

#[derive(Debug, Parser)]
#[command(name = "idlab", version, about = "Infinite divisibility, thinning and random-sum limit laws")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed of the random stream.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Monte-Carlo sample size.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Truncation order of pmf prefixes and power series.
    #[arg(long, default_value_t = 64)]
    pub terms: usize,
    /// Directory receiving the report and CSV files.
    #[serde(skip)]
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Print a JSON description of this verb's arguments and exit.
    #[serde(skip)]
    #[arg(long)]
    pub schema: bool,
    /// Add wall time to the report (breaks byte-identity between runs).
    #[serde(skip)]
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PmfArgs {
    /// Law of the variable (a pmf family, an LT family, or @file.json).
    #[arg(long)]
    pub pmf: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub pmf: String,
    /// Also compute the n-th root component and compare supports.
    #[arg(long)]
    pub root: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThinArgs {
    #[arg(long)]
    pub pmf: String,
    /// Bernoulli success probability in (0, 1].
    #[arg(long)]
    pub c: f64,
    /// Check whether this law equals the thinned one (same D-type).
    #[arg(long)]
    pub compare: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SdArgs {
    /// Law to test (pmf, LT family, discrete-stable:alpha=..,lambda=.., or @file.json).
    #[arg(long)]
    pub law: String,
    #[arg(long, value_delimiter = ',', default_values_t = dtype::c_grid())]
    pub c_grid: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StableArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Block sizes for the stability identity.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 4, 7])]
    pub n: Vec<u32>,
    /// Optional LT whose attraction to the discrete stable law is checked.
    #[arg(long)]
    pub attraction: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![10u64, 100, 1000])]
    pub n_list: Vec<u64>,
    /// Norming scale: a_n = scale * n^(1/alpha).
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PgfFromLtArgs {
    #[arg(long)]
    pub phi: String,
    /// Also probe s -> Q(1 - s) for complete monotonicity.
    #[arg(long)]
    pub probe: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PphiArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub theta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Lemma3Args {
    #[arg(long)]
    pub phi: String,
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.1, 0.02, 0.004, 0.001])]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransferArgs {
    #[arg(long)]
    pub phi: String,
    /// Law of the summands (an LT family).
    #[arg(long)]
    pub summand: String,
    #[arg(long, value_delimiter = ',', default_values_t = random_sums::DEFAULT_THETAS.to_vec())]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Opstable2dArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub alpha1: f64,
    #[arg(long)]
    pub alpha2: f64,
    /// Summand laws; default positive-stable(alpha_i).
    #[arg(long)]
    pub summand1: Option<String>,
    #[arg(long)]
    pub summand2: Option<String>,
    /// Norming exponent matrix `e11,e12,e21,e22`; default diag(1/alpha1, 1/alpha2).
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub exponent: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_values_t = random_sums::DEFAULT_THETAS.to_vec())]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaxstabArgs {
    /// pareto-min:a=.. | logistic-max | exponential-geo-min
    #[arg(long)]
    pub case: String,
    /// Geometric parameter of the sample size on I_1.
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhiMidArgs {
    #[arg(long)]
    pub phi: String,
    /// frechet:a=.. | gumbel
    #[arg(long)]
    pub target: String,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
    pub x: Vec<f64>,
    /// Also simulate maxima of this base law (exponential | pareto:a=..),
    /// which must be attracted to the target.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = random_sums::DEFAULT_THETAS.to_vec())]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// LT family or discrete-stable:alpha=..,lambda=..
    #[arg(long)]
    pub law: String,
    /// Draw E/W with W from `law` instead of `law` itself.
    #[arg(long)]
    pub mixture: bool,
    /// Stream id of the draws.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Example2Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Verb {
    /// Infinite-divisibility verdict of a law on I_0.
    Idcheck(PmfArgs),
    /// Compound-Poisson decomposition, support profile and optional n-th root.
    Decompose(DecomposeArgs),
    /// Binomial thinning c o X, optionally compared with another law.
    Thin(ThinArgs),
    /// Discrete self-decomposability test over a grid of c.
    Sdtest(SdArgs),
    /// Discrete stability identity and optional domain-of-attraction check.
    StableCheck(StableArgs),
    /// Coefficients of Q(s) = phi(1 - s).
    PgfFromLt(PgfFromLtArgs),
    /// PGF prefix and sample check of s^j phi((1 - s^k)/theta).
    Pphi(PphiArgs),
    /// Convergence of theta N_theta to k U.
    Lemma3(Lemma3Args),
    /// Convergence of normed N_theta-sums to their phi-ID limit.
    TransferSum(TransferArgs),
    /// Atom at zero forced on any N-sum.
    Theorem7(PmfArgs),
    /// Bivariate N_theta-sums with diagonal operator norming.
    Opstable2d(Opstable2dArgs),
    /// Extremes over geometric sample sizes.
    Maxstab(MaxstabArgs),
    /// phi(-log G) and optional simulation of N_theta-maxima.
    PhiMid(PhiMidArgs),
    /// Draw from a sampler, check it, and dump the sample.
    Simulate(SimulateArgs),
    /// Thinning versus lattice max-type for two geometric laws.
    Example2(Example2Args),
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Idcheck(_) => "idcheck",
            Verb::Decompose(_) => "decompose",
            Verb::Thin(_) => "thin",
            Verb::Sdtest(_) => "sdtest",
            Verb::StableCheck(_) => "stable-check",
            Verb::PgfFromLt(_) => "pgf-from-lt",
            Verb::Pphi(_) => "pphi",
            Verb::Lemma3(_) => "lemma3",
            Verb::TransferSum(_) => "transfer-sum",
            Verb::Theorem7(_) => "theorem7",
            Verb::Opstable2d(_) => "opstable2d",
            Verb::Maxstab(_) => "maxstab",
            Verb::PhiMid(_) => "phi-mid",
            Verb::Simulate(_) => "simulate",
            Verb::Example2(_) => "example2",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Verb::Idcheck(a) | Verb::Theorem7(a) => &a.common,
            Verb::Decompose(a) => &a.common,
            Verb::Thin(a) => &a.common,
            Verb::Sdtest(a) => &a.common,
            Verb::StableCheck(a) => &a.common,
            Verb::PgfFromLt(a) => &a.common,
            Verb::Pphi(a) => &a.common,
            Verb::Lemma3(a) => &a.common,
            Verb::TransferSum(a) => &a.common,
            Verb::Opstable2d(a) => &a.common,
            Verb::Maxstab(a) => &a.common,
            Verb::PhiMid(a) => &a.common,
            Verb::Simulate(a) => &a.common,
            Verb::Example2(a) => &a.common,
        }
    }

    /// The run configuration echoed into the report.
    pub fn config(&self) -> Value {
        let v = match self {
            Verb::Idcheck(a) | Verb::Theorem7(a) => serde_json::to_value(a),
            Verb::Decompose(a) => serde_json::to_value(a),
            Verb::Thin(a) => serde_json::to_value(a),
            Verb::Sdtest(a) => serde_json::to_value(a),
            Verb::StableCheck(a) => serde_json::to_value(a),
            Verb::PgfFromLt(a) => serde_json::to_value(a),
            Verb::Pphi(a) => serde_json::to_value(a),
            Verb::Lemma3(a) => serde_json::to_value(a),
            Verb::TransferSum(a) => serde_json::to_value(a),
            Verb::Opstable2d(a) => serde_json::to_value(a),
            Verb::Maxstab(a) => serde_json::to_value(a),
            Verb::PhiMid(a) => serde_json::to_value(a),
            Verb::Simulate(a) => serde_json::to_value(a),
            Verb::Example2(a) => serde_json::to_value(a),
        };
        v.expect("configs serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verb: String,
    pub config: Value,
    pub verdict: Verdict,
    pub result: Value,
    pub provenance: Provenance,
}

/// A finished run: the report plus optional CSV plot data.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::Id => 0,
        Verdict::Fail | Verdict::NotId => 1,
        Verdict::Inconclusive => 2,
    }
}

/// A parsed law argument.
#[derive(Debug, Clone, PartialEq)]
pub enum LawSource {
    Lt(LtSpec),
    Pmf(ProbSeq),
    Pgf(PgfSpec),
}

impl LawSource {
    pub fn pmf(&self, order: usize) -> Result<ProbSeq> {
        match self {
            LawSource::Lt(phi) => transforms::pgf_from_lt(phi, order),
            LawSource::Pmf(q) => Ok(q.clone()),
            LawSource::Pgf(g) => g.probseq(order),
        }
    }

    pub fn pgf(&self) -> PgfSpec {
        match self {
            LawSource::Lt(phi) => PgfSpec::from_lt(*phi),
            LawSource::Pmf(q) => PgfSpec::pmf(q.clone()),
            LawSource::Pgf(g) => g.clone(),
        }
    }

    pub fn lt(&self) -> Result<LtSpec> {
        match self {
            LawSource::Lt(phi) => Ok(*phi),
            _ => Err(Error::NotApplicable("expected a Laplace-transform family".into())),
        }
    }
}

struct KeyRule {
    name: &'static str,
    ok: fn(f64) -> bool,
    expect: &'static str,
}

const fn rule(name: &'static str, ok: fn(f64) -> bool, expect: &'static str) -> KeyRule {
    KeyRule { name, ok, expect }
}

fn positive(x: f64) -> bool {
    x > 0.0
}
fn nonneg(x: f64) -> bool {
    x >= 0.0
}
fn alpha_range(x: f64) -> bool {
    x > 0.0 && x <= 1.0
}
fn open_unit(x: f64) -> bool {
    x > 0.0 && x < 1.0
}
fn closed_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}
fn count(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0 && x < 1e6
}
fn lattice_step(x: f64) -> bool {
    x >= 2.0 && x.fract() == 0.0 && x < 1e6
}

fn family_rules(family: &str) -> Option<Vec<KeyRule>> {
    let rules = match family {
        "degenerate" => vec![rule("c", nonneg, ">= 0")],
        "exponential" => vec![rule("rate", positive, "> 0")],
        "gamma" => vec![rule("shape", positive, "> 0"), rule("rate", positive, "> 0")],
        "positive-stable" | "mittag-leffler" => vec![rule("alpha", alpha_range, "in (0, 1]")],
        "poisson" => vec![rule("rate", nonneg, ">= 0")],
        "geometric" | "geometric1" => vec![rule("p", alpha_range, "in (0, 1]")],
        "binomial" => vec![rule("n", count, "a nonnegative integer"), rule("p", closed_unit, "in [0, 1]")],
        "bernoulli" => vec![rule("c", closed_unit, "in [0, 1]")],
        "negbin" => vec![rule("t", positive, "> 0"), rule("p", alpha_range, "in (0, 1]")],
        "ex1a" | "ex1b" => vec![
            rule("p", open_unit, "in (0, 1)"),
            rule("k", lattice_step, "an integer >= 2"),
            rule("t", nonneg, ">= 0"),
        ],
        "discrete-stable" => vec![rule("alpha", alpha_range, "in (0, 1]"), rule("lambda", positive, "> 0")],
        _ => return None,
    };
    Some(rules)
}

const FAMILIES: &str = "degenerate, exponential, gamma, positive-stable, mittag-leffler, poisson, geometric, geometric1, binomial, bernoulli, negbin, ex1a, ex1b, discrete-stable";

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// Parses `family:key=val[,key=val]` into validated key/value pairs.
fn parse_family_string(text: &str) -> Result<(String, Vec<(String, f64)>)> {
    let (family, rest, rest_start) = match text.find(':') {
        Some(i) => (&text[..i], &text[i + 1..], i + 1),
        None => (text, "", text.len()),
    };
    let family = family.trim();
    let Some(rules) = family_rules(family) else {
        return Err(parse_err(0, format!("unknown family `{family}` (expected one of: {FAMILIES}; grammar {LAW_GRAMMAR})")));
    };
    let mut pairs: Vec<(String, f64)> = Vec::new();
    let mut pos = rest_start;
    if !rest.trim().is_empty() {
        for item in rest.split(',') {
            let Some(eq) = item.find('=') else {
                return Err(parse_err(pos, format!("expected key=val, found `{item}`")));
            };
            let key = item[..eq].trim();
            let val_text = item[eq + 1..].trim();
            let Some(r) = rules.iter().find(|r| r.name == key) else {
                let names: Vec<&str> = rules.iter().map(|r| r.name).collect();
                return Err(parse_err(pos, format!("unknown key `{key}` for `{family}` (expected {})", names.join(", "))));
            };
            if pairs.iter().any(|(k, _)| k == key) {
                return Err(parse_err(pos, format!("duplicate key `{key}`")));
            }
            let val: f64 = val_text
                .parse()
                .map_err(|_| parse_err(pos + eq + 1, format!("`{key}` must be a number, found `{val_text}`")))?;
            if !(val.is_finite() && (r.ok)(val)) {
                return Err(parse_err(pos + eq + 1, format!("`{key}` must be {}, found {val}", r.expect)));
            }
            pairs.push((key.to_string(), val));
            pos += item.len() + 1;
        }
    }
    if let Some(r) = rules.iter().find(|r| !pairs.iter().any(|(k, _)| k == r.name)) {
        return Err(parse_err(text.len(), format!("missing key `{}` for `{family}`", r.name)));
    }
    Ok((family.to_string(), pairs))
}

fn load_json_law(path: &Path) -> Result<LawSource> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(1, format!("cannot read {}: {e}", path.display())))?;
    if let Ok(q) = serde_json::from_str::<ProbSeq>(&text) {
        return Ok(LawSource::Pmf(q));
    }
    if let Ok(phi) = serde_json::from_str::<LtSpec>(&text) {
        return Ok(LawSource::Lt(phi));
    }
    if let Ok(g) = serde_json::from_str::<PgfSpec>(&text) {
        return Ok(LawSource::Pgf(g));
    }
    // Report the pmf reading's error, the most common file content.
    let e = serde_json::from_str::<ProbSeq>(&text).expect_err("checked above");
    Err(parse_err(1, format!("{}: not a pmf, LT or PGF description ({e})", path.display())))
}

/// Parses a law argument: `family:key=val[,key=val]` or `@file.json`. Pmf
/// families are expanded to `order` terms.
pub fn parse_law_string(text: &str, order: usize) -> Result<LawSource> {
    if let Some(path) = text.strip_prefix('@') {
        return load_json_law(Path::new(path));
    }
    let (family, pairs) = parse_family_string(text)?;
    let get = |k: &str| pairs.iter().find(|(n, _)| n == k).map(|p| p.1).expect("presence checked");
    let built = match family.as_str() {
        "degenerate" | "exponential" | "gamma" | "positive-stable" | "mittag-leffler" => {
            let params = pairs.iter().cloned().collect();
            return LtSpec::from_params(&family, &params).map(LawSource::Lt).map_err(|m| parse_err(0, m));
        }
        "poisson" => laws::poisson(get("rate"), order),
        "geometric" => laws::geometric(get("p"), order),
        "geometric1" => laws::geometric_i1(get("p"), order),
        "binomial" => laws::binomial(get("n") as usize, get("p"), order),
        "bernoulli" => laws::bernoulli(get("c"), order),
        "negbin" => laws::negative_binomial(get("t"), get("p"), order),
        "ex1a" => divisibility::make_example_law(ExampleKind::Ex1a, get("p"), get("k") as usize, get("t"), order),
        "ex1b" => divisibility::make_example_law(ExampleKind::Ex1b, get("p"), get("k") as usize, get("t"), order),
        "discrete-stable" => {
            return PgfSpec::discrete_stable(get("alpha"), get("lambda"))
                .map(LawSource::Pgf)
                .map_err(|e| parse_err(0, e.to_string()));
        }
        _ => unreachable!("family table and constructors agree"),
    };
    built.map(LawSource::Pmf).map_err(|e| parse_err(0, e.to_string()))
}

fn parse_case(text: &str) -> Result<MaxStabilityCase> {
    match text.trim() {
        "logistic-max" => Ok(MaxStabilityCase::LogisticMax),
        "exponential-geo-min" => Ok(MaxStabilityCase::ExponentialGeoMin),
        t => {
            let a = parse_single_key(t, "pareto-min", "a")?;
            Ok(MaxStabilityCase::ParetoMin { a })
        }
    }
}

/// `family:key=val` with exactly one positive parameter.
fn parse_single_key(text: &str, family: &str, key: &str) -> Result<f64> {
    let Some(rest) = text.strip_prefix(family).and_then(|r| r.strip_prefix(':')) else {
        return Err(parse_err(0, format!("unknown case `{text}`")));
    };
    let start = family.len() + 1;
    let Some(v) = rest.strip_prefix(key).and_then(|r| r.strip_prefix('=')) else {
        return Err(parse_err(start, format!("expected `{key}=val` after `{family}:`")));
    };
    let val_pos = start + key.len() + 1;
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(parse_err(val_pos, format!("`{key}` must be a number > 0, found `{v}`"))),
    }
}

fn parse_target(text: &str) -> Result<MidTarget> {
    if text.trim() == "gumbel" {
        return Ok(MidTarget::Gumbel);
    }
    parse_single_key(text.trim(), "frechet", "a").map(|a| MidTarget::Frechet { a })
}

fn parse_base(text: &str) -> Result<MaxBase> {
    if text.trim() == "exponential" {
        return Ok(MaxBase::Exponential);
    }
    parse_single_key(text.trim(), "pareto", "a").map(|a| MaxBase::Pareto { a })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("results serialize")
}

fn pmf_csv(q: &ProbSeq) -> String {
    let mut out = String::from("k,p_k\n");
    for (k, p) in q.masses().iter().enumerate() {
        out.push_str(&format!("{k},{p}\n"));
    }
    out
}

/// Runs one verb without touching the filesystem (beyond reading `@file`
/// law arguments).
pub fn run(verb: &Verb) -> Result<Outcome> {
    let (verdict, result, csv) = dispatch(verb)?;
    let report = Report {
        verb: verb.name().to_string(),
        config: verb.config(),
        verdict,
        result,
        provenance: Provenance {
            tool: "idlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            generator: samplers::GENERATOR.into(),
            wall_time_s: None,
        },
    };
    Ok(Outcome { report, csv })
}

type Dispatched = (Verdict, Value, Option<String>);

fn dispatch(verb: &Verb) -> Result<Dispatched> {
    let tol = tolerances();
    match verb {
        Verb::Idcheck(a) => {
            let q = parse_law_string(&a.pmf, a.common.terms)?.pmf(a.common.terms)?;
            let d = divisibility::compound_poisson_decompose(&q);
            let csv = d.compounding.as_ref().map(pmf_csv);
            Ok((d.verdict.verdict(), to_value(&d), csv))
        }
        Verb::Decompose(a) => {
            let q = parse_law_string(&a.pmf, a.common.terms)?.pmf(a.common.terms)?;
            let d = divisibility::compound_poisson_decompose(&q);
            let profile = divisibility::support_profile(&q, tol.support_threshold);
            let mut result = json!({ "decomposition": d, "support": profile });
            if let Some(n) = a.root {
                result["root"] = to_value(&divisibility::nth_root_component(&q, n)?);
                if d.verdict.is_id() {
                    result["support_coincidence"] = to_value(&divisibility::theorem1a_support_check(&q, n)?);
                }
            }
            Ok((d.verdict.verdict(), result, Some(pmf_csv(&q))))
        }
        Verb::Thin(a) => {
            let q = parse_law_string(&a.pmf, a.common.terms)?.pmf(a.common.terms)?;
            let c = ThinningParam::new(a.c)?;
            let thinned = dtype::thin(&q, c)?;
            let mut result = json!({ "thinned": thinned });
            let mut verdict = Verdict::Pass;
            if let Some(other) = &a.compare {
                let q1 = parse_law_string(other, a.common.terms)?.pmf(a.common.terms)?;
                let cmp = dtype::same_dtype(&q1, &q, c);
                verdict = Verdict::from_bool(cmp.same);
                result["same_dtype"] = to_value(&cmp);
            }
            Ok((verdict, result, Some(pmf_csv(&thinned))))
        }
        Verb::Sdtest(a) => {
            let g = parse_law_string(&a.law, a.common.terms)?.pgf();
            let r = dtype::discrete_selfdecomposable_check(&g, &a.c_grid, a.common.terms)?;
            Ok((r.verdict, to_value(&r), None))
        }
        Verb::StableCheck(a) => {
            let spec = DiscreteStableSpec::new(a.alpha, a.lambda)?;
            let deviations = a.n.iter().map(|&n| dtype::stability_identity_check(&spec, n)).collect::<Result<Vec<f64>>>()?;
            let mut ok = deviations.iter().all(|&d| d < tol.stability_identity);
            let mut result = json!({ "n": a.n, "identity_deviation": deviations });
            if let Some(phi) = &a.attraction {
                let phi = parse_law_string(phi, a.common.terms)?.lt()?;
                let r = dtype::domain_of_attraction_check_scaled(&phi, a.alpha, a.scale, &a.n_list)?;
                ok &= r.verdict.is_success();
                result["attraction"] = to_value(&r);
            }
            let pmf = dtype::discrete_stable_pmf(&spec, a.common.terms)?;
            Ok((Verdict::from_bool(ok), result, Some(pmf_csv(&pmf))))
        }
        Verb::PgfFromLt(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let q = transforms::pgf_from_lt(&phi, a.common.terms)?;
            let mut result = json!({ "pmf": q });
            let mut verdict = Verdict::Pass;
            if a.probe {
                let probe = transforms::lt_candidate_from_pgf(&PgfSpec::from_lt(phi), &transforms::probe_grid());
                verdict = probe.verdict;
                result["probe"] = to_value(&probe);
            }
            Ok((verdict, result, Some(pmf_csv(&q))))
        }
        Verb::Pphi(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let spec = PphiSpec::new(phi, a.j, a.k, a.theta)?;
            let q = random_sums::pphi_pgf(&spec, a.common.terms)?;
            let mut result = json!({ "pmf": q });
            let mut ok = true;
            if a.common.samples > 0 {
                let sample = random_sums::pphi_sample(&spec, a.common.samples, SeededStream::new(a.common.seed, 0))?;
                let bound = tol.mc_sigma / (a.common.samples as f64).sqrt();
                let checks: Vec<Value> = [0.2, 0.5, 0.8]
                    .iter()
                    .map(|&s: &f64| {
                        let (emp, _) = sample.mean_of(|n| s.powf(n));
                        let exact = spec.pgf(s);
                        ok &= (emp - exact).abs() < bound;
                        json!({ "s": s, "empirical": emp, "exact": exact })
                    })
                    .collect();
                let congruent = sample.values().iter().all(|&n| (n as usize) % spec.k == spec.j % spec.k && n as usize >= spec.j);
                ok &= congruent;
                result["sample_check"] = json!({ "bound": bound, "points": checks, "congruent": congruent, "mean": sample.mean() });
            }
            Ok((Verdict::from_bool(ok), result, Some(pmf_csv(&q))))
        }
        Verb::Lemma3(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let r = random_sums::lemma3_convergence(&phi, a.j, a.k, &a.thetas, a.common.samples, a.common.seed)?;
            Ok((r.verdict, to_value(&r), Some(r.to_csv())))
        }
        Verb::TransferSum(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let summand = parse_law_string(&a.summand, a.common.terms)?.lt()?;
            let r = random_sums::transfer_sum_simulate(&phi, &summand, &a.thetas, a.common.samples, a.common.seed)?;
            Ok((r.verdict, to_value(&r), Some(r.to_csv())))
        }
        Verb::Theorem7(a) => {
            let q = parse_law_string(&a.pmf, a.common.terms)?.pmf(a.common.terms)?;
            let atom = random_sums::theorem7_atom_check(&q);
            let verdict = if atom > 0.0 { Verdict::Pass } else { Verdict::Inconclusive };
            Ok((verdict, json!({ "atom_at_zero": atom, "absolutely_continuous_excluded": atom > 0.0 }), None))
        }
        Verb::Opstable2d(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let summand = |s: &Option<String>, alpha: f64| -> Result<LtSpec> {
                match s {
                    Some(t) => parse_law_string(t, a.common.terms)?.lt(),
                    None => LtSpec::positive_stable(alpha),
                }
            };
            let summands = [summand(&a.summand1, a.alpha1)?, summand(&a.summand2, a.alpha2)?];
            let exponent = match &a.exponent {
                Some(e) => [[e[0], e[1]], [e[2], e[3]]],
                None => random_sums::diagonal_exponent(a.alpha1, a.alpha2),
            };
            let [r1, r2] = random_sums::operator_phi_sum_simulate_2d(&phi, exponent, summands, &a.thetas, a.common.samples, a.common.seed)?;
            let verdict = Verdict::from_bool(r1.verdict.is_success() && r2.verdict.is_success());
            let mut csv = String::from("theta,ks1,ks2\n");
            for i in 0..r1.theta.len() {
                csv.push_str(&format!("{},{},{}\n", r1.theta[i], r1.ks[i], r2.ks[i]));
            }
            Ok((verdict, json!({ "coordinate1": r1, "coordinate2": r2 }), Some(csv)))
        }
        Verb::Maxstab(a) => {
            let case = parse_case(&a.case)?;
            let r = max_random::geo_extreme_stability_check(case, a.p, a.common.samples, a.common.seed)?;
            Ok((r.verdict, to_value(&r), None))
        }
        Verb::PhiMid(a) => {
            let phi = parse_law_string(&a.phi, a.common.terms)?.lt()?;
            let target = parse_target(&a.target)?;
            let values = a.x.iter().map(|&x| max_random::phi_mid_df(&phi, target, x)).collect::<Result<Vec<f64>>>()?;
            let mut result = json!({ "x": a.x, "df": values });
            let mut verdict = Verdict::Pass;
            let mut csv = None;
            if let Some(b) = &a.base {
                let base = parse_base(b)?;
                if base.target() != target {
                    return Err(Error::NotApplicable(format!("base `{b}` is not attracted to target `{}`", a.target)));
                }
                let r = max_random::transfer_max_simulate(&phi, base, &a.thetas, a.common.samples, a.common.seed)?;
                verdict = r.verdict;
                csv = Some(r.to_csv());
                result["simulation"] = to_value(&r);
            }
            Ok((verdict, result, csv))
        }
        Verb::Simulate(a) => simulate(a),
        Verb::Example2(_) => {
            let r = max_random::example2_report();
            let mut csv = String::from("s,q_x,q_y,q_x_thinned,q_y_thinned\n");
            for row in &r.rows {
                csv.push_str(&format!("{},{},{},{},{}\n", row.s, row.q_x, row.q_y, row.q_x_thinned, row.q_y_thinned));
            }
            Ok((r.verdict, to_value(&r), Some(csv)))
        }
    }
}

/// Empirical-LT check at `s in {0.5, 1, 2}` within `mc_sigma` standard errors.
fn lt_checks(sample: &EmpiricalDist, exact: impl Fn(f64) -> f64) -> (bool, Vec<Value>) {
    let k = tolerances().mc_sigma;
    let mut ok = true;
    let rows = [0.5, 1.0, 2.0]
        .iter()
        .map(|&s| {
            let (emp, se) = sample.laplace(s);
            let want = exact(s);
            let pass = (emp - want).abs() <= k * se.max(1e-300);
            ok &= pass || (emp == want);
            json!({ "s": s, "empirical": emp, "std_error": se, "exact": want })
        })
        .collect();
    (ok, rows)
}

fn simulate(a: &SimulateArgs) -> Result<Dispatched> {
    let stream = SeededStream::new(a.common.seed, a.stream);
    let n = a.common.samples;
    match parse_law_string(&a.law, a.common.terms)? {
        LawSource::Lt(phi) => {
            let (sample, label) = if a.mixture {
                (samplers::sample_exponential_mixture(&phi, n, stream)?, format!("exp-mixture({phi})"))
            } else {
                (samplers::sample_lt(&phi, n, stream)?, phi.to_string())
            };
            let (ok, checks) = if a.mixture {
                // Survival of E/W is phi(x): compare on a grid within mc_sigma binomial errors.
                let k = tolerances().mc_sigma;
                let mut ok = true;
                let rows: Vec<Value> = [0.5, 1.0, 2.0, 4.0]
                    .iter()
                    .map(|&x| {
                        let emp = 1.0 - sample.ecdf(x);
                        let want = phi.value(x);
                        ok &= (emp - want).abs() <= k * (want * (1.0 - want) / n as f64).sqrt().max(1.0 / n as f64);
                        json!({ "x": x, "empirical_survival": emp, "exact": want })
                    })
                    .collect();
                (ok, rows)
            } else {
                lt_checks(&sample, |s| phi.value(s))
            };
            let result = json!({ "law": label, "mean": sample.mean(), "checks": checks });
            Ok((Verdict::from_bool(ok), result, Some(sample.to_csv(&label, stream))))
        }
        LawSource::Pgf(PgfSpec::Lt { phi: LtSpec::Degenerate { c }, psi: transforms::Exponent::Stable { alpha, scale } }) if scale == 1.0 => {
            let spec = DiscreteStableSpec::new(alpha, c)?;
            let sample = samplers::sample_discrete_stable(&spec, n, stream)?;
            let pmf = dtype::discrete_stable_pmf(&spec, 10)?;
            let k = tolerances().pmf_sigma;
            let mut ok = true;
            let bins: Vec<Value> = (0..=10)
                .map(|i| {
                    let emp = sample.frequency(i as f64);
                    let want = pmf.mass(i);
                    let se = (want * (1.0 - want) / n as f64).sqrt();
                    ok &= (emp - want).abs() <= k * se.max(1.0 / n as f64);
                    json!({ "k": i, "empirical": emp, "exact": want })
                })
                .collect();
            let label = format!("discrete-stable:alpha={alpha},lambda={c}");
            let result = json!({ "law": label, "mean": sample.mean(), "bins": bins });
            Ok((Verdict::from_bool(ok), result, Some(sample.to_csv(&label, stream))))
        }
        _ => Err(Error::NotApplicable("simulate expects an LT family or discrete-stable:alpha=..,lambda=..".into())),
    }
}

/// Installs the tolerance table named by [`TOLERANCE_ENV`], if set.
pub fn load_tolerance_table() -> std::result::Result<(), String> {
    let Some(path) = std::env::var_os(TOLERANCE_ENV) else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{TOLERANCE_ENV}: cannot read {}: {e}", Path::new(&path).display()))?;
    let table: Tolerances = serde_json::from_str(&text).map_err(|e| format!("{TOLERANCE_ENV}: {e}"))?;
    tolerances::install(table).map_err(|_| format!("{TOLERANCE_ENV}: tolerance table already in use"))
}

/// JSON description of a verb's arguments.
pub fn schema(verb: &str) -> Value {
    let cmd = Cli::command();
    let Some(sub) = cmd.get_subcommands().find(|s| s.get_name() == verb) else {
        return Value::Null;
    };
    let args: Vec<Value> = sub
        .get_arguments()
        .filter(|a| a.get_long().is_some())
        .map(|a| {
            json!({
                "name": a.get_long(),
                "help": a.get_help().map(|h| h.to_string()),
                "required": a.is_required_set(),
                "default": a.get_default_values().iter().map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "verb": verb, "about": sub.get_about().map(|h| h.to_string()), "law_grammar": LAW_GRAMMAR, "args": args })
}

/// Writes `<out>/<verb>-report.json` and, if any, `<out>/<verb>-plot.csv`.
pub fn write_outputs(outcome: &Outcome, verb: &str, out: &Path) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(out)?;
    let path = out.join(format!("{verb}-report.json"));
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
    text.push('\n');
    std::fs::write(&path, text)?;
    if let Some(csv) = &outcome.csv {
        std::fs::write(out.join(format!("{verb}-plot.csv")), csv)?;
    }
    Ok(path)
}

/// Entry point with explicit arguments; returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // `--schema` works without the verb's required arguments.
    if args.iter().any(|a| a == "--schema") {
        if let Some(verb) = args.iter().skip(1).find_map(|a| a.to_str().filter(|v| !v.starts_with('-'))) {
            let s = schema(verb);
            if !s.is_null() {
                println!("{}", serde_json::to_string_pretty(&s).expect("schema serializes"));
                return 0;
            }
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    if let Err(msg) = load_tolerance_table() {
        eprintln!("error: {msg}");
        return 3;
    }
    let common = cli.verb.common();
    let start = Instant::now();
    let mut outcome = match run(&cli.verb) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse { .. }) {
                eprintln!("law grammar: {LAW_GRAMMAR}");
            }
            return 3;
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    if common.timing {
        outcome.report.provenance.wall_time_s = Some(elapsed);
    }
    match write_outputs(&outcome, cli.verb.name(), &common.out) {
        Ok(path) => {
            println!("{} {}", outcome.report.verdict.as_str(), path.display());
            eprintln!("wall time {elapsed:.3}s");
            exit_code(outcome.report.verdict)
        }
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            3
        }
    }
}

pub fn main() -> i32 {
    main_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lt_families() {
        assert_eq!(parse_law_string("gamma:shape=2,rate=1", 8).unwrap(), LawSource::Lt(LtSpec::gamma(2.0, 1.0).unwrap()));
        let e = parse_law_string("gamma:shape=-1", 8).unwrap_err();
        let Error::Parse { position, message } = e else { panic!() };
        assert_eq!(position, 12);
        assert!(message.contains("shape"), "{message}");
        assert!(matches!(parse_law_string("gamma:shape=1", 8), Err(Error::Parse { .. })));
        let Err(Error::Parse { position, .. }) = parse_law_string("gamma:shape=1,scale=2", 8) else { panic!() };
        assert_eq!(position, 14);
        assert!(matches!(parse_law_string("weibull:k=1", 8), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn parses_pmf_families() {
        let LawSource::Pmf(q) = parse_law_string("poisson:rate=2", 16).unwrap() else { panic!() };
        assert_eq!(q.order(), 16);
        let LawSource::Pmf(b) = parse_law_string("binomial:n=2,p=0.5", 2).unwrap() else { panic!() };
        assert_eq!(b.masses(), &[0.25, 0.5, 0.25]);
        assert!(matches!(parse_law_string("binomial:n=2.5,p=0.5", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_law_string("discrete-stable:alpha=0.5,lambda=1", 8).unwrap(), LawSource::Pgf(_)));
    }

    #[test]
    fn parses_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pmf.json");
        std::fs::write(&p, r#"{"p":[0.25,0.5,0.25],"tail_bound":0.0}"#).unwrap();
        let LawSource::Pmf(q) = parse_law_string(&format!("@{}", p.display()), 8).unwrap() else { panic!() };
        assert_eq!(q.masses(), &[0.25, 0.5, 0.25]);
        std::fs::write(&p, r#"{"p":[0.5,0.6],"tail_bound":0.0}"#).unwrap();
        assert!(matches!(parse_law_string(&format!("@{}", p.display()), 8), Err(Error::Parse { .. })));
    }

    #[test]
    fn cases_and_targets() {
        assert_eq!(parse_case("pareto-min:a=2").unwrap(), MaxStabilityCase::ParetoMin { a: 2.0 });
        assert_eq!(parse_case("logistic-max").unwrap(), MaxStabilityCase::LogisticMax);
        assert!(parse_case("pareto-min:a=-2").is_err());
        assert_eq!(parse_target("frechet:a=1").unwrap(), MidTarget::Frechet { a: 1.0 });
        assert_eq!(parse_base("pareto:a=2").unwrap(), MaxBase::Pareto { a: 2.0 });
    }

    #[test]
    fn every_verb_has_a_schema() {
        for v in Cli::command().get_subcommands() {
            let s = schema(v.get_name());
            assert!(s["args"].as_array().unwrap().iter().any(|a| a["name"] == "seed"), "{}", v.get_name());
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
