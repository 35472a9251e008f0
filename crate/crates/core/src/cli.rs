//! The `chords` command line tool.
//!
//! Exit codes: 0 success, 1 failed verification, 2 input error, 3 budget
//! exceeded. Every command writes a [`RunManifest`] next to its output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::energy::{expected_half, Kernel, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};
use crate::exact::{prob_closed_form_r1, prob_enumerate_with, EnumerateOptions, DEFAULT_ENUMERATION_BUDGET};
use crate::geometry::AngleUnit;
use crate::measure::MixtureMeasure;
use crate::montecarlo::{estimate_one_chord, estimate_two_chord};
use crate::optimize::{maximize, Objective, OptimizeConfig};
use crate::special::{karamata_law, polygon_intersections};
use crate::verify::{self, Suite, VerifyOptions};

/// Environment variable supplying the default seed.
pub const SEED_ENV: &str = "CHORD_SEED";

#[derive(Debug, Parser)]
#[command(name = "chords", version, about = "Random chords of the unit circle")]
pub struct Cli {
    /// Worker threads; results are reproducible for a fixed count.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Manifest path (default: `<out>.manifest.json` or `<command>.manifest.json`).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact probability that two random chords meet inside radius r.
    Eval(EvalArgs),
    /// Monte Carlo estimate for one or two random chords.
    Sample(SampleArgs),
    /// Diagonal crossings of regular polygons against the limit law, as CSV.
    Karamata(KaramataArgs),
    /// Search for measures maximizing a chord probability.
    Optimize(OptimizeArgs),
    /// Fourier evaluation of E|X+Y|/2 or E|X-Y|/2.
    Energy(EnergyArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMethod {
    /// Closed form when r = 1 (strict), enumeration otherwise.
    Auto,
    ClosedForm,
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    TwoChord,
    OneChord,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::TwoChord => Objective::TwoChord,
            ObjectiveArg::OneChord => Objective::OneChord,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Strictness {
    /// Count `< r` (default for two chords).
    #[arg(long, conflicts_with = "non_strict")]
    pub strict: bool,
    /// Count `<= r` (default for one chord).
    #[arg(long)]
    pub non_strict: bool,
}

impl Strictness {
    fn resolve(&self, default: bool) -> bool {
        if self.strict {
            true
        } else if self.non_strict {
            false
        } else {
            default
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureInput {
    /// Measure JSON file.
    pub measure: PathBuf,
    /// Angles in the file are radians instead of turns.
    #[arg(long)]
    pub radians: bool,
}

impl MeasureInput {
    fn load(&self) -> Result<MixtureMeasure> {
        let unit = if self.radians {
            AngleUnit::Radians
        } else {
            AngleUnit::Turns
        };
        MixtureMeasure::read(&self.measure, unit)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: MeasureInput,
    #[arg(long)]
    pub r: f64,
    #[command(flatten)]
    pub strictness: Strictness,
    #[arg(long, value_enum, default_value_t = EvalMethod::Auto)]
    pub method: EvalMethod,
    /// Largest atom count to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: MeasureInput,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::TwoChord)]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub strictness: Strictness,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KaramataArgs {
    /// Polygon sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    pub n: Vec<usize>,
    /// Radii, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"
    )]
    pub r_grid: Vec<f64>,
    /// CSV output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 4)]
    pub atoms: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub anneal_steps: usize,
    #[arg(long, default_value_t = 100)]
    pub weight_iterations: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub strictness: Strictness,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub input: MeasureInput,
    #[arg(long, value_enum, default_value_t = KernelArg::Plus)]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo trials per radius in the karamata suite.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Shift added to the closed form, to check that lemma1 can fail.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb_closed_form: f64,
    /// JSON summary file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Record of one invocation, written as JSON with sorted keys.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Rebuilds every object with keys inserted in sorted order.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// Sorted-key pretty JSON for any output record.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("output serializes");
    serde_json::to_string_pretty(&sorted(v)).expect("value serializes")
}

/// Reals in CSV output: 17 significant digits, no locale.
pub fn csv_real(x: f64) -> String {
    format!("{x:.16e}")
}

struct Outcome {
    text: String,
    out: Option<PathBuf>,
    seed: u64,
    parameters: Value,
    exit: i32,
    /// Files written by the command itself.
    extra: Vec<PathBuf>,
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 2;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Sample(_) => "sample",
        Command::Karamata(_) => "karamata",
        Command::Optimize(_) => "optimize",
        Command::Energy(_) => "energy",
        Command::Verify(_) => "verify",
    }
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn run(cli: &Cli) -> Result<i32> {
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a)?,
        Command::Sample(a) => sample(a)?,
        Command::Karamata(a) => karamata(a)?,
        Command::Optimize(a) => optimize(a)?,
        Command::Energy(a) => energy(a)?,
        Command::Verify(a) => run_verify(a)?,
    };
    let mut outputs = Vec::new();
    match &outcome.out {
        Some(path) => {
            std::fs::write(path, &outcome.text)?;
            outputs.push(path.display().to_string());
        }
        None => print!("{}", outcome.text),
    }
    outputs.extend(outcome.extra.iter().map(|p| p.display().to_string()));
    let name = command_name(&cli.command);
    let mut parameters = outcome.parameters;
    if let Value::Object(map) = &mut parameters {
        map.insert("workers".into(), rayon::current_num_threads().into());
    }
    let manifest = RunManifest {
        command: name.to_string(),
        parameters,
        seed: outcome.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
    };
    let path = cli
        .manifest
        .clone()
        .unwrap_or_else(|| match outcome.out.as_ref().or(outcome.extra.first()) {
            Some(p) => manifest_beside(p),
            None => PathBuf::from(format!("{name}.manifest.json")),
        });
    std::fs::write(path, manifest.to_json() + "\n")?;
    Ok(outcome.exit)
}

fn manifest_beside(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_os_string();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn eval(a: &EvalArgs) -> Result<Outcome> {
    let m = a.input.load()?.to_discrete()?;
    let strict = a.strictness.resolve(true);
    let closed = match a.method {
        EvalMethod::Auto => a.r == 1.0 && strict && m.len() >= 2,
        EvalMethod::ClosedForm => {
            if a.r != 1.0 || !strict {
                return Err(Error::Domain(
                    "the closed form only covers r = 1 with the strict inequality".into(),
                ));
            }
            true
        }
        EvalMethod::Enumerate => false,
    };
    let report = if closed {
        prob_closed_form_r1(&m)?
    } else {
        let opts = EnumerateOptions {
            budget: a.budget,
            ..EnumerateOptions::default()
        };
        prob_enumerate_with(&m, a.r, strict, &opts)?
    };
    Ok(Outcome {
        text: to_json(&report) + "\n",
        out: a.out.clone(),
        seed: default_seed(),
        parameters: params(a),
        exit: 0,
        extra: Vec::new(),
    })
}

fn sample(a: &SampleArgs) -> Result<Outcome> {
    let m = a.input.load()?;
    let objective: Objective = a.objective.into();
    let strict = a.strictness.resolve(objective.default_strict());
    let e = match objective {
        Objective::TwoChord => estimate_two_chord(&m, a.r, a.trials, a.seed, strict)?,
        Objective::OneChord => estimate_one_chord(&m, a.r, a.trials, a.seed, strict)?,
    };
    eprintln!("seed: {}", a.seed);
    Ok(Outcome {
        text: to_json(&e) + "\n",
        out: a.out.clone(),
        seed: a.seed,
        parameters: params(a),
        exit: 0,
        extra: Vec::new(),
    })
}

fn karamata(a: &KaramataArgs) -> Result<Outcome> {
    let mut text = String::from("n,r,inside,total,ratio,law,abs_err\n");
    for &n in &a.n {
        for &r in &a.r_grid {
            let c = polygon_intersections(n, r)?;
            let law = karamata_law(r)?;
            let ratio = c.ratio();
            writeln!(
                text,
                "{n},{},{},{},{},{},{}",
                csv_real(r),
                c.inside,
                c.total,
                csv_real(ratio),
                csv_real(law),
                csv_real((ratio - law).abs())
            )
            .expect("string write");
        }
    }
    Ok(Outcome {
        text,
        out: a.out.clone(),
        seed: default_seed(),
        parameters: params(a),
        exit: 0,
        extra: Vec::new(),
    })
}

fn optimize(a: &OptimizeArgs) -> Result<Outcome> {
    let objective: Objective = a.objective.into();
    let cfg = OptimizeConfig {
        n_atoms: a.atoms,
        restarts: a.restarts,
        anneal_steps: a.anneal_steps,
        weight_iterations: a.weight_iterations,
        seed: a.seed,
        strict: a.strictness.resolve(objective.default_strict()),
        ..OptimizeConfig::new(objective, a.r)
    };
    let report = maximize(objective, &cfg)?;
    eprintln!("seed: {}", a.seed);
    Ok(Outcome {
        text: to_json(&report) + "\n",
        out: a.out.clone(),
        seed: a.seed,
        parameters: params(a),
        exit: 0,
        extra: Vec::new(),
    })
}

fn energy(a: &EnergyArgs) -> Result<Outcome> {
    let m = a.input.load()?;
    let kernel = match a.kernel {
        KernelArg::Plus => Kernel::Plus,
        KernelArg::Minus => Kernel::Minus,
    };
    let report = expected_half(&m, a.truncation, kernel)?;
    Ok(Outcome {
        text: to_json(&report) + "\n",
        out: a.out.clone(),
        seed: default_seed(),
        parameters: params(a),
        exit: 0,
        extra: Vec::new(),
    })
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome> {
    let opts = VerifyOptions {
        perturb_closed_form: a.perturb_closed_form,
        mc_trials: a.trials,
        ..VerifyOptions::new(a.seed)
    };
    let checks = verify::run(a.suite, &opts)?;
    let mut lines = String::new();
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let suite = serde_json::to_value(c.suite).expect("suite serializes");
        let suite = suite.as_str().unwrap_or("?");
        writeln!(lines, "{tag} [{suite}] {}: {}", c.name, c.detail).expect("string write");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(lines, "{} checks, {failed} failed", checks.len()).expect("string write");
    if let Some(path) = &a.out {
        std::fs::write(path, to_json(&checks) + "\n")?;
    }
    Ok(Outcome {
        text: lines,
        out: None,
        seed: a.seed,
        parameters: params(a),
        exit: i32::from(failed > 0),
        extra: a.out.iter().cloned().collect(),
    })
}
