//! JSON front end: every command reads one JSON document and writes a report
//! `{version, config, command, result}` (or `error` in place of `result`).
//!
//! Exit status: 0 success, 1 schema or input error, 2 verification failure,
//! 3 sampling exhausted, 4 coefficient budget exceeded.

use crate::cremona::{degree_sequence_with, DegreeOptions, PlaneBirationalMap, DEFAULT_BUDGET_DIGITS};
use crate::error::{Error, Result};
use crate::exactalg::modp::DEFAULT_PRIME;
use crate::exactalg::serial::{rational_from_json, rational_to_json};
use crate::halphen::{
    conjugacy_search, enumerate_irr_candidates, horosphere_point, is_parabolic_isometry, isometry_degree,
    model_permutations, rational_intersection, roots_modulo_xi, roots_modulo_xi_by_box, verify_degree_identity,
    HalphenModel, NSIsometry, NSVector, RationalClass, RANK,
};
use crate::oscillate::{synthesize_oscillation, OscillationTarget, SynthesisOptions};
use crate::stability::{
    falpha_iterate_multiplier, make_family_fa, make_family_falpha, renormalize_at_fixed_point, skew_product,
    stabilize_by_postcomposition, verify_falpha_conjugacy, UniRational,
};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_SAMPLING: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Default number of post-composition trials for `stabilize`.
pub const DEFAULT_TRIALS: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub horizon: usize,
    pub sample_box: i64,
    pub modp_prime: Option<u64>,
    pub coefficient_budget: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            horizon: 8,
            sample_box: 50,
            modp_prime: Some(DEFAULT_PRIME),
            coefficient_budget: DEFAULT_BUDGET_DIGITS,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 2 {
            return Err(Error::Schema("horizon must be at least 2".into()));
        }
        if self.sample_box < 1 {
            return Err(Error::Schema("sample box must be at least 1".into()));
        }
        Ok(())
    }

    pub fn degree_options(&self) -> DegreeOptions {
        DegreeOptions { modp: self.modp_prime, budget_digits: self.coefficient_budget, ..DegreeOptions::default() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "horizon": self.horizon,
            "sample_box": self.sample_box,
            "modp_prime": self.modp_prime,
            "coefficient_budget": self.coefficient_budget,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum LatticeQuery {
    /// Degree `e0 . M(e0)` of an isometry.
    Degree,
    /// Point of the horosphere above a vector orthogonal to `e0` and `xi`.
    Horosphere,
    /// Root enumeration and the classes modulo `xi`.
    Roots,
    /// Conjugator between two parabolic isometries.
    Conjugacy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum FamilyName {
    /// `(x + a, y x / (x + 1))`.
    Fa,
    /// `(alpha x, q(x) y)` with its iterate and conjugacy checks.
    Falpha,
    /// Conjugates by `(t x, t y)` at a fixed point.
    Renormalize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Synthesize a map with a prescribed oscillation of degrees.
    Oscillate,
    /// Degree sequence and growth class of a map.
    Degrees,
    /// Search for a stabilizing linear post-composition.
    Stabilize,
    /// Queries in the lattice `Z^{1,9}`.
    #[command(subcommand)]
    Lattice(LatticeQuery),
    /// Named example families.
    #[command(subcommand)]
    Family(FamilyName),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Oscillate => "oscillate".into(),
            Command::Degrees => "degrees".into(),
            Command::Stabilize => "stabilize".into(),
            Command::Lattice(q) => format!("lattice {}", format!("{q:?}").to_lowercase()),
            Command::Family(f) => format!("family {}", format!("{f:?}").to_lowercase()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cremona", version, about = "Exact experiments with plane birational maps")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 8)]
    pub horizon: usize,
    #[arg(long = "box", global = true, default_value_t = 50)]
    pub sample_box: i64,
    /// Filter prime, or `none` to disable the modular certificate.
    #[arg(long, global = true, default_value = "1000003")]
    pub modp: String,
    /// Largest coefficient size, in decimal digits, before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_DIGITS)]
    pub budget: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Read the input document from a file instead of standard input.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig> {
        let modp_prime = match self.modp.trim() {
            "none" | "off" => None,
            s => Some(
                s.parse::<u64>().map_err(|_| Error::Schema(format!("--modp expects a prime or `none`, got {s}")))?,
            ),
        };
        let config = RunConfig {
            seed: self.seed,
            horizon: self.horizon,
            sample_box: self.sample_box,
            modp_prime,
            coefficient_budget: self.budget,
            output_path: self.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Exit status and report of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub report: Value,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Verification(_) => EXIT_VERIFICATION,
        Error::SamplingExhausted { .. } | Error::Genericity(_) => EXIT_SAMPLING,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_SCHEMA,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::DegreeMismatch(_) => "degree_mismatch",
        Error::InvalidInput(_) => "invalid_input",
        Error::Precondition(_) => "precondition",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::InsufficientData(_) => "insufficient_data",
        Error::Genericity(_) => "genericity",
        Error::SamplingExhausted { .. } => "sampling_exhausted",
        Error::Verification(_) => "verification",
        Error::Schema(_) => "schema",
    }
}

fn envelope(command: &str, config: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("version".into(), json!(crate::VERSION));
    m.insert("config".into(), config.to_json());
    m.insert("command".into(), json!(command));
    m
}

/// Run one command on a parsed input document.
pub fn run(command: Command, config: &RunConfig, input: &Value) -> Outcome {
    let mut report = envelope(&command.name(), config);
    let result = config.validate().and_then(|_| dispatch(command, config, input));
    let status = match result {
        Ok((status, value)) => {
            report.insert("result".into(), value);
            status
        }
        Err(err) => {
            report.insert("error".into(), json!({"kind": error_kind(&err), "message": err.to_string()}));
            exit_code(&err)
        }
    };
    Outcome { status, report: Value::Object(report) }
}

fn dispatch(command: Command, config: &RunConfig, input: &Value) -> Result<(i32, Value)> {
    match command {
        Command::Oscillate => oscillate(config, input),
        Command::Degrees => degrees(config, input),
        Command::Stabilize => stabilize(config, input),
        Command::Lattice(q) => lattice(q, input),
        Command::Family(f) => family(f, config, input),
    }
}

fn verified_status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn field<'a>(input: &'a Value, key: &str) -> Option<&'a Value> {
    input.get(key).filter(|v| !v.is_null())
}

fn u64_field(input: &Value, key: &str, default: u64) -> Result<u64> {
    match field(input, key) {
        None => Ok(default),
        Some(v) => v.as_u64().ok_or_else(|| Error::Schema(format!("`{key}` must be a nonnegative integer"))),
    }
}

/// A map given bare or under the key `map`.
fn map_input(input: &Value) -> Result<PlaneBirationalMap> {
    let v = field(input, "map").unwrap_or(input);
    PlaneBirationalMap::from_json(v)
}

fn oscillate(config: &RunConfig, input: &Value) -> Result<(i32, Value)> {
    let support = field(input, "support").ok_or_else(|| Error::Schema("oscillate needs `support`".into()))?;
    let target = OscillationTarget::from_json(support)?;
    let opts = SynthesisOptions {
        seed: u64_field(input, "seed", config.seed)?,
        sample_box: config.sample_box,
        max_tries: u64_field(input, "max_tries", 200)? as usize,
        horizon: config.horizon as u64,
        degrees: config.degree_options(),
        ..SynthesisOptions::default()
    };
    let report = synthesize_oscillation(&target, &opts)?;
    let mut value = report.to_json();
    value["seed"] = json!(opts.seed);
    Ok((verified_status(report.verified()), value))
}

fn degrees(config: &RunConfig, input: &Value) -> Result<(i32, Value)> {
    let f = map_input(input)?;
    let report = degree_sequence_with(&f, config.horizon, &config.degree_options())?;
    Ok((EXIT_OK, json!({"map": f.to_json(), "report": report.to_json()})))
}

fn stabilize(config: &RunConfig, input: &Value) -> Result<(i32, Value)> {
    let f = map_input(input)?;
    let trials = u64_field(input, "trials", DEFAULT_TRIALS as u64)? as usize;
    let opts = config.degree_options();
    match stabilize_by_postcomposition(&f, config.seed, trials, config.horizon, &opts)? {
        Some((a, cert)) => Ok((
            EXIT_OK,
            json!({"found": true, "trials": trials, "postcomposition": a.to_json(), "certificate": cert.to_json()}),
        )),
        None => Ok((EXIT_SAMPLING, json!({"found": false, "trials": trials}))),
    }
}

/// Isometry as a matrix, or `{"quadratic": [i, j, k]}`, `{"permutation": [...]}`,
/// `{"translation": class}`, `{"matrix": rows}` or `{"compose": [specs]}`.
pub fn isometry_from_json(v: &Value) -> Result<NSIsometry> {
    if v.is_array() {
        return NSIsometry::from_json(v);
    }
    let indices = |x: &Value| -> Result<Vec<usize>> {
        x.as_array()
            .ok_or_else(|| Error::Schema("expected an index list".into()))?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| Error::Schema("indices must be integers".into())))
            .collect()
    };
    if let Some(m) = v.get("matrix") {
        NSIsometry::from_json(m)
    } else if let Some(q) = v.get("quadratic") {
        match indices(q)?.as_slice() {
            [i, j, k] => NSIsometry::quadratic(*i, *j, *k),
            _ => Err(Error::Schema("`quadratic` takes three indices".into())),
        }
    } else if let Some(p) = v.get("permutation") {
        NSIsometry::permutation(&indices(p)?)
    } else if let Some(t) = v.get("translation") {
        NSIsometry::translation(&NSVector::from_json(t)?)
    } else if let Some(list) = v.get("compose").and_then(Value::as_array) {
        list.iter().try_fold(NSIsometry::identity(), |acc, s| acc.compose(&isometry_from_json(s)?))
    } else {
        Err(Error::Schema("unrecognized isometry description".into()))
    }
}

fn model_input(input: &Value) -> Result<HalphenModel> {
    match field(input, "model") {
        Some(m) => HalphenModel::from_json(m),
        None => HalphenModel::trivial(u64_field(input, "index", 1)? as u32),
    }
}

fn rational_class(v: &Value) -> Result<RationalClass> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == RANK)
        .ok_or_else(|| Error::Schema(format!("expected {RANK} rational coordinates")))?;
    let parsed: Vec<BigRational> = arr.iter().map(rational_from_json).collect::<Result<_>>()?;
    Ok(std::array::from_fn(|i| parsed[i].clone()))
}

fn class_json(c: &RationalClass) -> Value {
    Value::Array(c.iter().map(rational_to_json).collect())
}

fn lattice(query: LatticeQuery, input: &Value) -> Result<(i32, Value)> {
    match query {
        LatticeQuery::Degree => {
            let m = isometry_from_json(field(input, "isometry").unwrap_or(input))?;
            let parabolic = is_parabolic_isometry(&m);
            let identity = if parabolic { Some(verify_degree_identity(&m, &model_input(input)?)?) } else { None };
            Ok((
                EXIT_OK,
                json!({
                    "degree": isometry_degree(&m),
                    "preserves_form": m.preserves_form(),
                    "parabolic": parabolic,
                    "degree_identity": identity,
                    "isometry": m.to_json(),
                }),
            ))
        }
        LatticeQuery::Horosphere => {
            let w = rational_class(field(input, "w").ok_or_else(|| Error::Schema("horosphere needs `w`".into()))?)?;
            let u = horosphere_point(&w)?;
            let xi = NSVector::xi().to_rational();
            Ok((
                EXIT_OK,
                json!({
                    "point": class_json(&u),
                    "square": rational_to_json(&rational_intersection(&u, &u)),
                    "xi_product": rational_to_json(&rational_intersection(&u, &xi)),
                }),
            ))
        }
        LatticeQuery::Roots => {
            let index = u64_field(input, "index", 1)? as u32;
            let bound = u64_field(input, "degree_bound", 0)? as u32;
            let candidates = enumerate_irr_candidates(index, bound)?;
            let classes = roots_modulo_xi();
            let cross_checked = classes == roots_modulo_xi_by_box();
            Ok((
                verified_status(cross_checked),
                json!({
                    "index": index,
                    "degree_bound": bound,
                    "candidate_count": candidates.len(),
                    "candidates": candidates.iter().map(NSVector::to_json).collect::<Vec<_>>(),
                    "classes_modulo_xi": classes.len(),
                    "cross_checked": cross_checked,
                }),
            ))
        }
        LatticeQuery::Conjugacy => {
            let get = |k: &str| field(input, k).ok_or_else(|| Error::Schema(format!("conjugacy needs `{k}`")));
            let f = isometry_from_json(get("f")?)?;
            let g = isometry_from_json(get("g")?)?;
            let model = model_input(input)?;
            let result = match field(input, "linear_parts").and_then(Value::as_array) {
                Some(list) => {
                    let parts: Vec<NSIsometry> = list.iter().map(isometry_from_json).collect::<Result<_>>()?;
                    conjugacy_search(&f, &g, &model, parts)?
                }
                None => conjugacy_search(&f, &g, &model, model_permutations(&model))?,
            };
            let mut value = result.to_json();
            value["bound_holds"] = json!(match (&result.conjugator, result.degree_constant) {
                (Some(h), Some(a)) =>
                    Some(isometry_degree(h) as f64 <= a * (isometry_degree(&f) + isometry_degree(&g)) as f64),
                _ => None,
            });
            Ok((EXIT_OK, value))
        }
    }
}

fn rational_field(input: &Value, key: &str) -> Result<BigRational> {
    rational_from_json(field(input, key).ok_or_else(|| Error::Schema(format!("missing `{key}`")))?)
}

fn uni_rational(v: &Value) -> Result<UniRational> {
    let list = |k: &str| -> Result<Vec<BigRational>> {
        match v.get(k) {
            None => Ok(vec![BigRational::one()]),
            Some(x) => x
                .as_array()
                .ok_or_else(|| Error::Schema(format!("`{k}` must be a coefficient list")))?
                .iter()
                .map(rational_from_json)
                .collect(),
        }
    };
    UniRational::new(list("num")?, list("den")?)
}

fn family(name: FamilyName, config: &RunConfig, input: &Value) -> Result<(i32, Value)> {
    match name {
        FamilyName::Fa => {
            let a = rational_field(input, "a")?;
            let f = make_family_fa(&a);
            let report = degree_sequence_with(&f, config.horizon, &config.degree_options())?;
            Ok((EXIT_OK, json!({"a": rational_to_json(&a), "map": f.to_json(), "report": report.to_json()})))
        }
        FamilyName::Falpha => {
            let alpha = rational_field(input, "alpha")?;
            let q = uni_rational(field(input, "q").ok_or_else(|| Error::Schema("falpha needs `q`".into()))?)?;
            let f = make_family_falpha(&alpha, &q)?;
            let mut iterate = f.clone();
            let mut checks = Vec::new();
            let mut all_ok = true;
            let mut power = alpha.clone();
            for n in 1..=config.horizon.min(5) as u32 {
                let qn = falpha_iterate_multiplier(&alpha, &q, n);
                let ok = skew_product(&power, &qn)? == iterate;
                all_ok &= ok;
                checks.push(json!({"n": n, "product_formula": ok, "multiplier_degree": qn.reduced_degree()}));
                iterate = f.compose(&iterate)?;
                power = &power * &alpha;
            }
            let ms: Vec<u32> = match field(input, "m") {
                None => vec![1, 2, 3],
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|x| x.as_u64().map(|m| m as u32))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Schema("`m` must be a list of positive integers".into()))?,
                Some(x) => {
                    vec![x.as_u64().ok_or_else(|| Error::Schema("`m` must be a positive integer".into()))? as u32]
                }
            };
            let mut conj = Vec::new();
            for m in ms {
                let ok = verify_falpha_conjugacy(&alpha, &q, m)?;
                all_ok &= ok;
                conj.push(json!({"m": m, "holds": ok}));
            }
            Ok((verified_status(all_ok), json!({"map": f.to_json(), "iterates": checks, "conjugacy": conj})))
        }
        FamilyName::Renormalize => {
            let f = match field(input, "map") {
                Some(m) => PlaneBirationalMap::from_json(m)?,
                None => quadratic_germ(&rational_field(input, "a")?, &rational_field(input, "b")?)?,
            };
            let ts: Vec<BigRational> = match field(input, "t").and_then(Value::as_array) {
                Some(list) => list.iter().map(rational_from_json).collect::<Result<_>>()?,
                None => ["1", "1/2", "1/4"]
                    .iter()
                    .map(|s| crate::exactalg::serial::parse_rational(s))
                    .collect::<Result<_>>()?,
            };
            let mut out = Vec::new();
            for t in &ts {
                let g = renormalize_at_fixed_point(&f, t)?;
                out.push(json!({"t": rational_to_json(t), "map": g.to_json()}));
            }
            Ok((EXIT_OK, json!({"map": f.to_json(), "conjugates": out})))
        }
    }
}

/// `(a x + y^2, b y)` as a plane map.
pub fn quadratic_germ(a: &BigRational, b: &BigRational) -> Result<PlaneBirationalMap> {
    use crate::exactalg::HomPoly3;
    let first = HomPoly3::from_rational_terms(2, vec![([1, 0, 1], a.clone()), ([0, 2, 0], BigRational::one())])?;
    let second = HomPoly3::from_rational_terms(2, vec![([0, 1, 1], b.clone())])?;
    let third = HomPoly3::from_rational_terms(2, vec![([0, 0, 2], BigRational::one())])?;
    PlaneBirationalMap::new([first, second, third])
}

/// Parse a JSON document; empty input counts as `{}`.
pub fn parse_input(text: &str) -> Result<Value> {
    if text.trim().is_empty() {
        return Ok(json!({}));
    }
    serde_json::from_str(text).map_err(|e| Error::Schema(format!("input is not valid JSON: {e}")))
}

pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Error::Schema(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Schema(format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

/// Parse a command line whose first item is the program name.
pub fn parse_command_line<I, T>(args: I) -> Result<Cli>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).map_err(|e| Error::Schema(e.to_string()))
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
        }
    };
    let fail = |msg: String| {
        eprintln!("error: {msg}");
        EXIT_SCHEMA
    };
    let config = match cli.config() {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let input = match read_input(cli.input.as_ref()).and_then(|t| parse_input(&t)) {
        Ok(v) => v,
        Err(e) => {
            let outcome = Outcome {
                status: EXIT_SCHEMA,
                report: {
                    let mut r = envelope(&cli.command.name(), &config);
                    r.insert("error".into(), json!({"kind": error_kind(&e), "message": e.to_string()}));
                    Value::Object(r)
                },
            };
            return emit(&outcome, &config);
        }
    };
    let outcome = run(cli.command, &config, &input);
    emit(&outcome, &config)
}

fn emit(outcome: &Outcome, config: &RunConfig) -> i32 {
    let text = render(&outcome.report);
    let written = match &config.output_path {
        Some(p) => std::fs::write(p, &text).map_err(|e| e.to_string()),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_SCHEMA;
    }
    if let Some(err) = outcome.report.get("error") {
        eprintln!("error: {}", err["message"].as_str().unwrap_or("unknown"));
    }
    outcome.status
}
