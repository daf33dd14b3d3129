//! `hypernorm` command-line front end.
//!
//! Every report is a JSON object `{"manifest": .., "report": ..}`. Exit codes:
//! 0 success, 1 violation found or inequality failed, 2 usage or input
//! error, 3 budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::classify;
use crate::catalog::{self, NamedFamily};
use crate::engine::{self, EngineConfig, GridFunction};
use crate::error::{Error, Result};
use crate::geometry::{self, ConstantKind, KKind, ModulusKind};
use crate::lab::{self, HolderMode, MonotonicityMode, SearchConfig, Side, TrialConfig};
use crate::pair::{isomorphic, HypergraphPair, Omega, PairJson, PairLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hypernorm", version, about = "Norms defined by weighted hypergraph pairs")]
pub struct Cli {
    /// Human-readable key/value output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Write a catalog pair as JSON.
    Make(MakeArgs),
    /// Necessary-condition screen for semi-norming pairs.
    Classify(ClassifyArgs),
    /// `||f||_H`, optionally diffed against a classical formula.
    Norm(NormArgs),
    /// `integral f^H`.
    Integrate(IntegrateArgs),
    /// Randomized check of one inequality.
    Verify(VerifyArgs),
    /// Search for a triangle-inequality violation.
    SearchViolation(SearchArgs),
    /// Scalar two-point constants C(t,p) and C*(r,q).
    Constants(ConstantsArgs),
    /// Moduli of smoothness or convexity.
    Moduli(ModuliArgs),
    /// Hanner's inequality.
    Hanner(TrialArgs),
    /// Clarkson's inequality and its dual form.
    Clarkson(TrialArgs),
    /// Lower bound on the smoothness/convexity constant K.
    EstimateK(EstimateKArgs),
    /// Diagonal embedding of l_{|H|}.
    EmbedCheck(EmbedArgs),
    /// Contraction plan for a pair on n points.
    Plan(PlanArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Lp,
    Gowers,
    Schatten,
    Complete,
    DoubledGowers2,
    Root2,
}

#[derive(Debug, Args, Serialize)]
pub struct MakeArgs {
    pub family: FamilyName,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Schatten exponent 2m.
    #[arg(long)]
    pub exponent: Option<usize>,
    /// Comma-separated grid for `complete`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    /// Append this many degenerate axes.
    #[arg(long, default_value_t = 0)]
    pub extra_axes: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    pub pair: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub function: PathBuf,
    /// Also evaluate a classical formula (or brute force) and diff.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub function: PathBuf,
    /// Enumerate every assignment instead of following the plan.
    #[arg(long)]
    pub brute: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TrialArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub omega_size: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Hill-climb from the worst trials.
    #[arg(long)]
    pub search: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityId {
    FirstHolder,
    GeneralHolder,
    NormMonotonicity,
    GowersCs,
    GowersApprox,
    ZeroOneBound,
    FactorEquality,
    LatticeConcavity,
    LatticeConvexity,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Nonnegative,
    Integer,
    Complex,
    TypeOne,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    pub id: InequalityId,
    #[command(flatten)]
    pub trial: TrialArgs,
    /// Cell, comma-separated coordinates.
    #[arg(long, value_delimiter = ',')]
    pub psi: Vec<usize>,
    #[arg(long, value_enum, default_value = "alpha")]
    pub side: SideArg,
    /// Part files for general-holder.
    #[arg(long = "part")]
    pub parts: Vec<PathBuf>,
    /// Second pair for norm-monotonicity.
    #[arg(long)]
    pub other: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Number of functions for the lattice estimates.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Alpha,
    Beta,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub omega_size: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantArg {
    C,
    #[value(alias = "cstar")]
    CStar,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, value_enum, ignore_case = true, default_value = "c")]
    pub kind: ConstantArg,
    /// `t` for C, `r` for C*.
    #[arg(long, visible_aliases = ["t", "r"], default_value_t = 2.0)]
    pub a: f64,
    /// Values of `p` (C) or `q` (C*).
    #[arg(long, visible_aliases = ["p", "q"], value_delimiter = ',', default_values_t = vec![1.5, 2.0, 3.0, 4.0, 6.0])]
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusArg {
    Smoothness,
    Convexity,
}

#[derive(Debug, Args, Serialize)]
pub struct ModuliArgs {
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, value_enum, default_value = "smoothness")]
    pub kind: ModulusArg,
    /// Values of tau (smoothness) or epsilon (convexity).
    #[arg(long, visible_aliases = ["tau-grid", "eps-grid"], value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0])]
    pub grid: Vec<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KArg {
    Smooth,
    Convex,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateKArgs {
    #[command(flatten)]
    pub trial: TrialArgs,
    #[arg(long, default_value_t = 2.0)]
    pub t: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "smooth")]
    pub kind: KArg,
}

#[derive(Debug, Args, Serialize)]
pub struct EmbedArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PlanArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub flags: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub budget: Option<String>,
    pub wall_time_s: f64,
}

/// What a subcommand hands back: the report and whether it counts as a
/// failure (exit 1).
struct Outcome {
    report: Value,
    failed: bool,
    /// Set by `make -o`: the pair went to a file, so print nothing else.
    quiet: bool,
}

impl Outcome {
    fn ok(report: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            failed: false,
            quiet: false,
        })
    }

    fn check(report: impl Serialize, failed: bool) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            failed,
            quiet: false,
        })
    }
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        self.0.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Error::InvalidArgument(format!("{} is not UTF-8", path.display())))
    }

    fn pair(&mut self, path: &Path) -> Result<HypergraphPair> {
        let text = self.read(path)?;
        PairJson::parse(&text)
            .map_err(|e| with_path(e, path))?
            .into_pair(&PairLimits::default())
    }

    fn function(&mut self, path: &Path) -> Result<GridFunction> {
        let text = self.read(path)?;
        GridFunction::from_json(&text).map_err(|e| with_path(e, path))
    }
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Json { line, column, message } => Error::Json {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` and diagnostics to `err`. Returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    execute(cli, argv, out, err)
}

fn execute(cli: Cli, argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest, out, err);
    }
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let mut engine = EngineConfig::from_env().with_threads(cli.threads);
    let budget = std::env::var("HYPERNORM_BUDGET").ok();
    if let Some(b) = &budget {
        if let Err(e) = engine.apply_budget_string(b) {
            let _ = writeln!(err, "error: HYPERNORM_BUDGET: {e}");
            return EXIT_USAGE;
        }
    }
    let result = dispatch(&cli, &engine, &mut inputs);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if outcome.quiet {
        return EXIT_OK;
    }
    let flags = serde_json::to_value(&cli).unwrap_or(Value::Null);
    let manifest = RunManifest {
        command: flags["command"]["name"].as_str().unwrap_or("").to_string(),
        seed: find_seed(&flags),
        argv,
        flags,
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: inputs.0,
        budget,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let doc = json!({ "manifest": manifest, "report": outcome.report });
    let text = if cli.pretty {
        let mut lines = Vec::new();
        flatten("", &doc, &mut lines);
        lines.join("\n")
    } else {
        serde_json::to_string(&doc).expect("report serialization")
    };
    if writeln!(out, "{text}").is_err() {
        return EXIT_USAGE;
    }
    if outcome.failed {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_USAGE
    }
}

fn find_seed(v: &Value) -> Option<u64> {
    match v {
        Value::Object(m) => m
            .get("seed")
            .and_then(Value::as_u64)
            .or_else(|| m.values().find_map(find_seed)),
        _ => None,
    }
}

/// `path: value` lines; arrays of scalars stay on one line.
fn flatten(prefix: &str, v: &Value, lines: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, lines);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array() && a.len() > 8) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, lines);
            }
        }
        other => lines.push(format!("{prefix:<40} {other}")),
    }
}

fn replay(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let manifest: RunManifest = match std::fs::read_to_string(path)
        .map_err(Error::from)
        .and_then(|text| {
            let doc: Value = serde_json::from_str(&text)?;
            let m = doc.get("manifest").cloned().unwrap_or(doc);
            Ok(serde_json::from_value(m)?)
        }) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    for input in &manifest.inputs {
        let digest = std::fs::read(&input.path).map(|b| hex::encode(Sha256::digest(&b)));
        match digest {
            Ok(d) if d == input.sha256 => {}
            _ => {
                let _ = writeln!(err, "error: input {} changed or is missing", input.path);
                return EXIT_USAGE;
            }
        }
    }
    if manifest.argv.iter().skip(1).any(|a| a == "replay") {
        let _ = writeln!(err, "error: manifest records a replay");
        return EXIT_USAGE;
    }
    run(manifest.argv, out, err)
}

fn trial_config(a: &TrialArgs, threads: usize, engine: &EngineConfig) -> TrialConfig {
    TrialConfig {
        trials: a.trials,
        seed: a.seed,
        omega_size: a.omega_size,
        amplitude: a.amplitude,
        tolerance: a.tolerance,
        search: a.search,
        threads,
        engine: engine.clone(),
    }
}

fn report_outcome(r: lab::InequalityReport) -> Result<Outcome> {
    let failed = r.passed == Some(false);
    Outcome::check(r, failed)
}

fn dispatch(cli: &Cli, engine: &EngineConfig, inputs: &mut Inputs) -> Result<Outcome> {
    let threads = cli.threads;
    match &cli.command {
        Command::Make(a) => make(a),
        Command::Classify(a) => Outcome::ok(classify(&inputs.pair(&a.pair)?)?),
        Command::Norm(a) => {
            let h = inputs.pair(&a.pair)?;
            let f = inputs.function(&a.function)?;
            let value = engine::norm_with(&h, &f, engine)?;
            if !a.oracle {
                return Outcome::ok(value);
            }
            let (name, reference) = oracle(&h, &f, engine)?;
            let diff = (value.value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
            let agree = diff <= 1e-9 || (value.value - reference).abs() <= 1e-300;
            Outcome::check(
                json!({ "norm": value, "oracle": { "name": name, "value": reference, "relative_difference": diff, "agree": agree } }),
                !agree,
            )
        }
        Command::Integrate(a) => {
            let h = inputs.pair(&a.pair)?;
            let f = inputs.function(&a.function)?;
            let z = if a.brute {
                engine::integrate_brute_with(&h, &f, engine)?
            } else {
                engine::integrate_with(&h, &f, engine)?
            };
            Outcome::ok(json!({ "re": z.re, "im": z.im, "method": if a.brute { "brute" } else { "planned" } }))
        }
        Command::Verify(a) => verify(a, threads, engine, inputs),
        Command::SearchViolation(a) => {
            let h = inputs.pair(&a.pair)?;
            let cfg = SearchConfig {
                restarts: a.restarts,
                seed: a.seed,
                omega_size: a.omega_size,
                tolerance: a.tolerance,
                threads,
                engine: engine.clone(),
                ..SearchConfig::default()
            };
            let r = lab::search_triangle_violation(&h, &cfg)?;
            let found = r.violation.is_some();
            Outcome::check(r, found)
        }
        Command::Constants(a) => {
            let kind = match a.kind {
                ConstantArg::C => ConstantKind::C,
                ConstantArg::CStar => ConstantKind::CStar,
            };
            let rows = a
                .b
                .iter()
                .map(|&b| geometry::two_point_constant(kind, a.a, b))
                .collect::<Result<Vec<_>>>()?;
            Outcome::ok(rows)
        }
        Command::Moduli(a) => {
            let h = inputs.pair(&a.trial.pair)?;
            let kind = match a.kind {
                ModulusArg::Smoothness => ModulusKind::Smoothness,
                ModulusArg::Convexity => ModulusKind::Convexity,
            };
            Outcome::ok(geometry::estimate_modulus(&h, kind, &a.grid, &trial_config(&a.trial, threads, engine))?)
        }
        Command::Hanner(a) => {
            let h = inputs.pair(&a.pair)?;
            report_outcome(geometry::check_hanner(&h, &trial_config(a, threads, engine))?)
        }
        Command::Clarkson(a) => {
            let h = inputs.pair(&a.pair)?;
            let r = geometry::check_clarkson(&h, &trial_config(a, threads, engine))?;
            let failed = r.direct.passed == Some(false) || r.dual.passed == Some(false);
            Outcome::check(r, failed)
        }
        Command::EstimateK(a) => {
            let h = inputs.pair(&a.trial.pair)?;
            let kind = match a.kind {
                KArg::Smooth => KKind::Smooth,
                KArg::Convex => KKind::Convex,
            };
            let r = geometry::estimate_k(&h, a.t, a.p, kind, &trial_config(&a.trial, threads, engine))?;
            let failed = r.consistent_with_exact == Some(false);
            Outcome::check(r, failed)
        }
        Command::EmbedCheck(a) => {
            let h = inputs.pair(&a.pair)?;
            let r = geometry::embedding_witness(&h, a.n, None, a.seed)?;
            let failed = !r.passed;
            Outcome::check(r, failed)
        }
        Command::Plan(a) => {
            let h = inputs.pair(&a.pair)?;
            Outcome::ok(engine::plan(&h, a.n, engine)?)
        }
        Command::Replay(_) => unreachable!("handled before dispatch"),
    }
}

fn make(a: &MakeArgs) -> Result<Outcome> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")));
    let family = match a.family {
        FamilyName::Lp => NamedFamily::Lp { p: need(a.p, "p")? },
        FamilyName::Gowers => NamedFamily::Gowers {
            k: a.k.ok_or_else(|| Error::InvalidArgument("--k is required".into()))?,
        },
        FamilyName::Schatten => NamedFamily::Schatten {
            exponent: a
                .exponent
                .ok_or_else(|| Error::InvalidArgument("--exponent is required".into()))?,
        },
        FamilyName::Complete => NamedFamily::Complete {
            p: need(a.p, "p")?,
            dims: a.dims.clone(),
        },
        FamilyName::DoubledGowers2 => NamedFamily::DoubledGowers2,
        FamilyName::Root2 => NamedFamily::Root2,
    };
    let family = if a.extra_axes > 0 {
        NamedFamily::DegenerateExtension {
            base: Box::new(family),
            extra_axes: a.extra_axes,
        }
    } else {
        family
    };
    let h = family.build()?;
    let pair = PairJson::from(&h);
    match &a.output {
        Some(path) => {
            std::fs::write(path, pair.to_string_pretty() + "\n")?;
            Ok(Outcome {
                report: Value::Null,
                failed: false,
                quiet: true,
            })
        }
        None => Outcome::ok(pair),
    }
}

/// A classical formula for the catalog families, brute force otherwise.
fn oracle(h: &HypergraphPair, f: &GridFunction, engine: &EngineConfig) -> Result<(String, f64)> {
    let size = h.size();
    if h.k() == 1 && f.k() == 1 && isomorphic(h, &catalog::make_lp(size)?) {
        return Ok((format!("lp(p={size})"), catalog::lp_oracle(f, size)?));
    }
    let counting = f.space().weights().iter().all(|&w| w == 1.0);
    if h.k() == 2 && counting && size.fract() == 0.0 && size >= 2.0 && (size as usize).is_multiple_of(2) {
        let exponent = size as usize;
        if isomorphic(h, &catalog::make_schatten(exponent)?) {
            return Ok((format!("schatten(2m={exponent})"), catalog::schatten_oracle(f, exponent / 2)?));
        }
        if exponent == 4 && isomorphic(h, &catalog::make_gowers(2)?) {
            return Ok(("schatten(2m=4) via U_2".into(), catalog::schatten_oracle(f, 2)?));
        }
    }
    let z = engine::integrate_brute_with(h, f, engine)?;
    Ok(("brute_force".into(), engine::NormValue::from_integral(z, size).value))
}

fn verify(a: &VerifyArgs, threads: usize, engine: &EngineConfig, inputs: &mut Inputs) -> Result<Outcome> {
    let h = inputs.pair(&a.trial.pair)?;
    let cfg = trial_config(&a.trial, threads, engine);
    let psi = || -> Result<Omega> {
        if a.psi.is_empty() {
            Err(Error::InvalidArgument("--psi is required".into()))
        } else {
            Ok(Omega::new(a.psi.clone()))
        }
    };
    let r = match a.id {
        InequalityId::FirstHolder => {
            let side = match a.side {
                SideArg::Alpha => Side::Alpha,
                SideArg::Beta => Side::Beta,
            };
            lab::verify_first_holder(&h, &psi()?, side, &cfg)?
        }
        InequalityId::GeneralHolder => {
            let parts = a.parts.iter().map(|p| inputs.pair(p)).collect::<Result<Vec<_>>>()?;
            let mode = match a.mode.unwrap_or(ModeArg::Nonnegative) {
                ModeArg::Nonnegative => HolderMode::Nonnegative,
                ModeArg::Integer => HolderMode::Integer,
                ModeArg::Complex => HolderMode::Complex,
                ModeArg::TypeOne => return Err(Error::InvalidArgument("mode type-one applies to norm-monotonicity".into())),
            };
            lab::verify_general_holder(&h, &parts, mode, &cfg)?
        }
        InequalityId::NormMonotonicity => {
            let other = a
                .other
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--other is required".into()))?;
            let kp = inputs.pair(other)?;
            let mode = match a.mode.unwrap_or(ModeArg::Nonnegative) {
                ModeArg::Nonnegative => MonotonicityMode::Nonnegative,
                ModeArg::Integer => MonotonicityMode::Integer,
                ModeArg::TypeOne => MonotonicityMode::TypeOne,
                ModeArg::Complex => return Err(Error::InvalidArgument("mode complex applies to general-holder".into())),
            };
            lab::verify_norm_monotonicity(&h, &kp, mode, &cfg)?
        }
        InequalityId::GowersCs => lab::verify_gowers_cs(&h, &psi()?, &cfg)?,
        InequalityId::GowersApprox => lab::verify_gowers_approx(&h, &cfg)?,
        InequalityId::ZeroOneBound => lab::verify_zero_one_bound(&h, &cfg)?,
        InequalityId::FactorEquality => lab::verify_factor_equality(&h, &cfg)?,
        InequalityId::LatticeConcavity => lab::verify_lattice_concavity(&h, a.count, &cfg)?,
        InequalityId::LatticeConvexity => lab::verify_lattice_convexity(&h, a.count, &cfg)?,
    };
    report_outcome(r)
}
