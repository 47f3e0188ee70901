//! Command-line front end.
//!
//! Every command reads one JSON [`RunConfig`] (file path or standard input)
//! and writes CSV, or `{params, rows, summary}` JSON with `--json`.
//! Exit codes: 0 success, 1 verification failure, 2 configuration error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coins::{defect_family, generalized_grover, grover, model_a, CoinFamily, DefectSpec};
use crate::linalg3::{c64, cis, Complex64, Mat3, Vec3};
use crate::stationary::{
    self, check_construction, AmplitudeSeq, ClosedFormMeasure, EigenConstruction, StationaryError, TwoParamSeed,
};
use crate::tolerance;
use crate::walk::{self, Generator, WalkError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Grover,
    Gphi,
    Agamma,
    Model1,
    Model2,
    Prop31,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Grover => "grover",
            ModelKind::Gphi => "gphi",
            ModelKind::Agamma => "agamma",
            ModelKind::Model1 => "model1",
            ModelKind::Model2 => "model2",
            ModelKind::Prop31 => "prop31",
        }
    }
}

/// One run's parameters. Complex numbers are `[re, im]`.
///
/// `seq` maps positions (decimal integer strings) to values of the free
/// function `φ_x`; the key `"*"` sets the value at every unlisted position
/// (default 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi1: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi3: Option<[f64; 2]>,
    #[serde(default = "default_lo")]
    pub range_lo: i64,
    #[serde(default = "default_hi")]
    pub range_hi: i64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<BTreeMap<String, [f64; 2]>>,
}

fn default_lo() -> i64 {
    tolerance::VERIFY_LO
}

fn default_hi() -> i64 {
    tolerance::VERIFY_HI
}

fn default_steps() -> usize {
    tolerance::VERIFY_STEPS
}

impl RunConfig {
    pub fn new(model: ModelKind) -> Self {
        RunConfig {
            model,
            phi: None,
            gamma: None,
            theta: None,
            phi1: None,
            phi3: None,
            range_lo: default_lo(),
            range_hi: default_hi(),
            steps: default_steps(),
            seq: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        cfg.check_range()?;
        Ok(cfg)
    }

    fn check_range(&self) -> Result<(), CliError> {
        if self.range_lo > self.range_hi {
            return Err(CliError::Config(format!(
                "range_lo = {} exceeds range_hi = {}",
                self.range_lo, self.range_hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("precondition `{condition}` failed: {message}")]
    Precondition { condition: &'static str, message: String },
    #[error("{0}")]
    Io(String),
}

impl From<StationaryError> for CliError {
    fn from(e: StationaryError) -> Self {
        CliError::Precondition { condition: e.condition(), message: e.to_string() }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<crate::coins::CoinError> for CliError {
    fn from(e: crate::coins::CoinError) -> Self {
        StationaryError::from(e).into()
    }
}

#[derive(Debug, Parser)]
#[command(name = "qwalk3", about = "Three-state quantum walks: coins, evolution and stationary measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit `{params, rows, summary}` JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override range_lo and range_hi.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub range: Option<Vec<i64>>,
    /// Override steps.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, default_value_t = tolerance::AGREEMENT)]
    pub tol_agree: f64,
    #[arg(long, global = true, default_value_t = tolerance::STATIONARITY)]
    pub tol_stat: f64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coin matrix and its unitarity defect.
    Coin { config: Option<PathBuf> },
    /// Print the coin eigenvalues (and τ or ξ where defined).
    Eigen { config: Option<PathBuf> },
    /// Closed-form stationary measure over the range.
    Stationary { config: Option<PathBuf> },
    /// Per-step measure of the evolved state on the shrinking valid window.
    Evolve { config: Option<PathBuf> },
    /// Closed form vs. constructed vector, and stationarity under evolution.
    Verify {
        config: Option<PathBuf>,
        /// Run the built-in grids for prop31, model1 and model2; no config is read.
        #[arg(long)]
        default_grid: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string().into_bytes();
            return if e.use_stderr() {
                Outcome { code, stdout: Vec::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: Vec::new() }
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => deliver(&cli, out),
        Err(e) => Outcome { code: EXIT_CONFIG, stdout: Vec::new(), stderr: format!("error: {e}\n").into_bytes() },
    }
}

struct Produced {
    code: i32,
    body: String,
    notes: String,
}

fn deliver(cli: &Cli, out: Produced) -> Outcome {
    let stderr = out.notes.into_bytes();
    match &cli.out {
        None => Outcome { code: out.code, stdout: out.body.into_bytes(), stderr },
        Some(path) => match std::fs::write(path, out.body.as_bytes()) {
            Ok(()) => Outcome { code: out.code, stdout: Vec::new(), stderr },
            Err(e) => Outcome {
                code: EXIT_CONFIG,
                stdout: Vec::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()).into_bytes(),
            },
        },
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Produced, CliError> {
    match &cli.command {
        Command::Verify { default_grid: true, .. } => cmd_verify_default(cli),
        Command::Coin { config }
        | Command::Eigen { config }
        | Command::Stationary { config }
        | Command::Evolve { config }
        | Command::Verify { config, .. } => {
            let cfg = load_config(config.as_ref(), stdin, cli)?;
            match cli.command {
                Command::Coin { .. } => cmd_coin(&cfg, cli.json),
                Command::Eigen { .. } => cmd_eigen(&cfg, cli.json),
                Command::Stationary { .. } => cmd_stationary(&cfg, cli.json),
                Command::Evolve { .. } => cmd_evolve(&cfg, cli.json),
                Command::Verify { .. } => cmd_verify(&cfg, cli),
            }
        }
    }
}

fn load_config(path: Option<&PathBuf>, stdin: &mut dyn Read, cli: &Cli) -> Result<RunConfig, CliError> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(r) = &cli.range {
        cfg.range_lo = r[0];
        cfg.range_hi = r[1];
    }
    if let Some(s) = cli.steps {
        cfg.steps = s;
    }
    cfg.check_range()?;
    Ok(cfg)
}

/// 17 significant digits; `-0` is printed as `0`.
pub fn fmt_f(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

fn fmt_c(z: Complex64) -> String {
    format!("({}, {})", fmt_f(z.re), fmt_f(z.im))
}

fn pair(z: Complex64) -> Value {
    json!([z.re + 0.0, z.im + 0.0])
}

fn to_c(p: [f64; 2]) -> Complex64 {
    c64(p[0], p[1])
}

fn need<T>(v: Option<T>, name: &str, model: ModelKind) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("model {} requires `{name}`", model.name())))
}

fn parse_seq(map: &BTreeMap<String, [f64; 2]>) -> Result<AmplitudeSeq, CliError> {
    let mut values = BTreeMap::new();
    let mut default = c64(0.0, 0.0);
    for (k, v) in map {
        if k == "*" {
            default = to_c(*v);
        } else {
            let x: i64 = k
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("seq key `{k}` is neither an integer nor \"*\"")))?;
            values.insert(x, to_c(*v));
        }
    }
    Ok(AmplitudeSeq::table(values, default))
}

fn seed_of(cfg: &RunConfig) -> Result<TwoParamSeed, CliError> {
    let f1 = to_c(need(cfg.phi1, "phi1", cfg.model)?);
    let f3 = to_c(need(cfg.phi3, "phi3", cfg.model)?);
    Ok(TwoParamSeed::new(f1, f3)?)
}

/// The homogeneous coin a model is built on.
fn base_coin(cfg: &RunConfig) -> Result<Mat3, CliError> {
    Ok(match cfg.model {
        ModelKind::Grover => grover(),
        ModelKind::Gphi | ModelKind::Model1 | ModelKind::Prop31 => generalized_grover(need(cfg.phi, "phi", cfg.model)?),
        ModelKind::Agamma | ModelKind::Model2 => model_a(need(cfg.gamma, "gamma", cfg.model)?),
    })
}

fn family_of(cfg: &RunConfig) -> Result<CoinFamily, CliError> {
    let base = base_coin(cfg)?;
    Ok(match cfg.model {
        ModelKind::Model1 | ModelKind::Model2 => {
            defect_family(base, DefectSpec::new(need(cfg.theta, "theta", cfg.model)?)?)?
        }
        _ => CoinFamily::homogeneous(base)?,
    })
}

fn document(cfg: &RunConfig, rows: Vec<Value>, summary: Value) -> String {
    let doc = json!({ "params": cfg, "rows": rows, "summary": summary });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn ok(body: String, notes: String) -> Result<Produced, CliError> {
    Ok(Produced { code: EXIT_OK, body, notes })
}

pub fn cmd_coin_text(m: &Mat3) -> String {
    let mut s = String::new();
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| fmt_c(m[(i, j)])).collect();
        writeln!(s, "{}", row.join("  ")).unwrap();
    }
    writeln!(s, "unitarity_defect {}", fmt_f(m.unitarity_defect())).unwrap();
    s
}

fn cmd_coin(cfg: &RunConfig, as_json: bool) -> Result<Produced, CliError> {
    let m = base_coin(cfg)?;
    if !as_json {
        return ok(cmd_coin_text(&m), String::new());
    }
    let rows = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| json!({ "row": i + 1, "col": j + 1, "value": pair(m[(i, j)]) }))
        .collect();
    ok(document(cfg, rows, json!({ "unitarity_defect": m.unitarity_defect() })), String::new())
}

/// Eigenvalues ordered by argument in `[0, 2π)`, then modulus.
fn sorted_eigenvalues(m: &Mat3) -> Vec<Complex64> {
    let mut ev = m.eigenvalues().to_vec();
    let key = |z: &Complex64| ((z.arg() + 0.0).rem_euclid(2.0 * PI), z.norm());
    ev.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

fn selected_angle(cfg: &RunConfig) -> Option<(&'static str, f64)> {
    match cfg.model {
        ModelKind::Gphi | ModelKind::Model1 => {
            cfg.phi.and_then(|p| stationary::model1_tau(p).ok()).map(|s| ("tau", s.tau))
        }
        ModelKind::Agamma | ModelKind::Model2 => cfg.gamma.and_then(|g| stationary::model2_xi(g).ok()).map(|x| ("xi", x)),
        _ => None,
    }
}

fn cmd_eigen(cfg: &RunConfig, as_json: bool) -> Result<Produced, CliError> {
    let m = base_coin(cfg)?;
    let ev = sorted_eigenvalues(&m);
    let angle = selected_angle(cfg);
    if as_json {
        let rows = ev.iter().map(|z| json!({ "value": pair(*z), "modulus": z.norm() })).collect();
        let mut summary = serde_json::Map::new();
        if let Some((name, v)) = angle {
            summary.insert(name.into(), json!(v));
            summary.insert("selected_eigenvalue".into(), pair(cis(v)));
        }
        return ok(document(cfg, rows, Value::Object(summary)), String::new());
    }
    let mut s = String::new();
    for (k, z) in ev.iter().enumerate() {
        writeln!(s, "lambda_{} {} modulus {}", k + 1, fmt_c(*z), fmt_f(z.norm())).unwrap();
    }
    if let Some((name, v)) = angle {
        writeln!(s, "{name} {}", fmt_f(v)).unwrap();
    }
    ok(s, String::new())
}

/// Constructed vector, closed form, and the angle used (τ or ξ).
type Built = (EigenConstruction, ClosedFormMeasure, Option<(&'static str, f64)>);

fn build_stationary(cfg: &RunConfig) -> Result<Built, CliError> {
    match cfg.model {
        ModelKind::Prop31 => {
            let phi = need(cfg.phi, "phi", cfg.model)?;
            let seq = parse_seq(need(cfg.seq.as_ref(), "seq", cfg.model)?)?;
            Ok((stationary::prop31_eigvec(phi, &seq)?, stationary::prop31_measure(phi, &seq)?, None))
        }
        ModelKind::Model1 => {
            let phi = need(cfg.phi, "phi", cfg.model)?;
            let theta = need(cfg.theta, "theta", cfg.model)?;
            let seed = seed_of(cfg)?;
            let c = stationary::model1_eigvec(phi, theta, seed)?;
            let mu = stationary::model1_measure(phi, theta, seed)?;
            let tau = c.angle.expect("model I records τ");
            Ok((c, mu, Some(("tau", tau))))
        }
        ModelKind::Model2 => {
            let gamma = need(cfg.gamma, "gamma", cfg.model)?;
            let theta = need(cfg.theta, "theta", cfg.model)?;
            let seed = seed_of(cfg)?;
            let c = stationary::model2_eigvec(gamma, theta, seed)?;
            let mu = stationary::model2_measure(gamma, theta, seed)?;
            let xi = c.angle.expect("model II records ξ");
            Ok((c, mu, Some(("xi", xi))))
        }
        other => Err(CliError::Config(format!(
            "model {} has no stationary measure; use prop31, model1 or model2",
            other.name()
        ))),
    }
}

fn cmd_stationary(cfg: &RunConfig, as_json: bool) -> Result<Produced, CliError> {
    let (c, mu, angle) = build_stationary(cfg)?;
    let (lo, hi) = (cfg.range_lo, cfg.range_hi);
    let outcome = if cfg.steps == 0 {
        let nu = c.measure(lo, hi)?;
        let agreement = nu.iter().map(|(x, v)| (v - mu.at(x)).abs()).fold(0.0, f64::max);
        stationary::CheckOutcome { agreement, stationarity: 0.0 }
    } else {
        check_construction(&c, &mu, lo, hi, cfg.steps)?
    };

    let mut summary = serde_json::Map::new();
    if let Some((name, v)) = angle {
        summary.insert(name.into(), json!(v));
    }
    summary.insert("lambda".into(), pair(c.lambda));
    summary.insert("max_stationarity_residual".into(), json!(outcome.stationarity));
    summary.insert("n_max".into(), json!(cfg.steps));
    summary.insert("max_closed_form_deviation".into(), json!(outcome.agreement));

    if as_json {
        let rows = (lo..=hi)
            .map(|x| {
                let v = c.psi.at(x);
                json!({ "x": x, "mu": mu.at(x) + 0.0, "abs": [v[0].norm(), v[1].norm(), v[2].norm()] })
            })
            .collect();
        return ok(document(cfg, rows, Value::Object(summary)), String::new());
    }
    let mut body = String::from("x,mu\n");
    for x in lo..=hi {
        writeln!(body, "{x},{}", fmt_f(mu.at(x))).unwrap();
    }
    let mut notes = String::new();
    for (k, v) in &summary {
        writeln!(notes, "# {k} = {v}").unwrap();
    }
    ok(body, notes)
}

fn initial_state(cfg: &RunConfig) -> Result<Generator, CliError> {
    Ok(match &cfg.seq {
        Some(map) => {
            let seq = parse_seq(map)?;
            Generator::new(move |x| Vec3::new(seq.at(x), c64(0.0, 0.0), c64(0.0, 0.0)))
        }
        None => Generator::point_mass(0, Vec3::real(1.0, 0.0, 0.0)),
    })
}

fn cmd_evolve(cfg: &RunConfig, as_json: bool) -> Result<Produced, CliError> {
    let family = family_of(cfg)?;
    let start = walk::materialize(&initial_state(cfg)?, cfg.range_lo, cfg.range_hi)?;
    let traj = walk::trajectory(&family, &start, cfg.steps)?;
    let totals: Vec<f64> = traj.iter().map(|w| walk::measure(w).total()).collect();
    let drift = totals.iter().map(|t| (t - totals[0]).abs()).fold(0.0, f64::max);

    if as_json {
        let mut rows = Vec::new();
        for (step, w) in traj.iter().enumerate() {
            for (x, nu) in walk::measure(w).iter() {
                rows.push(json!({ "step": step, "x": x, "nu": nu, "valid_lo": w.lo(), "valid_hi": w.hi() }));
            }
        }
        let summary = json!({ "totals": totals, "max_total_drift": drift });
        return ok(document(cfg, rows, summary), String::new());
    }
    let mut body = String::from("step,x,nu\n");
    let mut notes = String::new();
    for (step, w) in traj.iter().enumerate() {
        for (x, nu) in walk::measure(w).iter() {
            writeln!(body, "{step},{x},{}", fmt_f(nu)).unwrap();
        }
        writeln!(notes, "# step {step}: valid [{}, {}], total {}", w.lo(), w.hi(), fmt_f(totals[step])).unwrap();
    }
    ok(body, notes)
}

/// One verification case.
struct Case {
    model: ModelKind,
    param: f64,
    theta: Option<f64>,
    seed_label: String,
    seed_json: Value,
    built: (EigenConstruction, ClosedFormMeasure),
}

const PHI_GRID: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_4, 1.0];
const GAMMA_GRID: [f64; 3] = [0.0, FRAC_PI_6, 1.0];
const THETA_GRID: [f64; 3] = [0.25, 1.0 / 3.0, 0.7];
const SEED_GRID: [([f64; 2], [f64; 2]); 3] = [([1.0, 0.0], [0.0, 0.0]), ([0.0, 0.0], [1.0, 0.0]), ([1.0, 0.0], [0.0, 1.0])];

fn prop31_default_seeds() -> Vec<(&'static str, AmplitudeSeq)> {
    vec![
        ("const1", AmplitudeSeq::constant(c64(1.0, 0.0))),
        ("delta0", AmplitudeSeq::delta(0)),
        ("wave1/3", AmplitudeSeq::from_fn(|x| cis(x as f64 / 3.0))),
    ]
}

fn fmt_short_c(p: [f64; 2]) -> String {
    format!("{}{:+}i", p[0] + 0.0, p[1] + 0.0)
}

/// Expand the config into cases, substituting the default grid for every
/// absent parameter. All preconditions are checked here, before anything runs.
fn verify_cases(cfg: &RunConfig) -> Result<Vec<Case>, CliError> {
    let one_or = |v: Option<f64>, grid: &[f64]| v.map_or_else(|| grid.to_vec(), |x| vec![x]);
    let mut cases = Vec::new();
    match cfg.model {
        ModelKind::Prop31 => {
            let seeds = match &cfg.seq {
                Some(map) => vec![("config", parse_seq(map)?)],
                None => prop31_default_seeds(),
            };
            for phi in one_or(cfg.phi, &PHI_GRID) {
                for (label, seq) in &seeds {
                    let built = (stationary::prop31_eigvec(phi, seq)?, stationary::prop31_measure(phi, seq)?);
                    cases.push(Case {
                        model: cfg.model,
                        param: phi,
                        theta: None,
                        seed_label: label.to_string(),
                        seed_json: json!(label),
                        built,
                    });
                }
            }
        }
        ModelKind::Model1 | ModelKind::Model2 => {
            let seeds = match (cfg.phi1, cfg.phi3) {
                (None, None) => SEED_GRID.to_vec(),
                (Some(a), Some(b)) => vec![(a, b)],
                _ => return Err(CliError::Config("give both phi1 and phi3, or neither".into())),
            };
            let params = if cfg.model == ModelKind::Model1 {
                one_or(cfg.phi, &PHI_GRID)
            } else {
                one_or(cfg.gamma, &GAMMA_GRID)
            };
            for param in params {
                for theta in one_or(cfg.theta, &THETA_GRID) {
                    for &(f1, f3) in &seeds {
                        let seed = TwoParamSeed::new(to_c(f1), to_c(f3))?;
                        let built = if cfg.model == ModelKind::Model1 {
                            (stationary::model1_eigvec(param, theta, seed)?, stationary::model1_measure(param, theta, seed)?)
                        } else {
                            (stationary::model2_eigvec(param, theta, seed)?, stationary::model2_measure(param, theta, seed)?)
                        };
                        cases.push(Case {
                            model: cfg.model,
                            param,
                            theta: Some(theta),
                            seed_label: format!("{};{}", fmt_short_c(f1), fmt_short_c(f3)),
                            seed_json: json!({ "phi1": f1, "phi3": f3 }),
                            built,
                        });
                    }
                }
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "verify needs model prop31, model1 or model2, got {}",
                other.name()
            )))
        }
    }
    Ok(cases)
}

fn cmd_verify_default(cli: &Cli) -> Result<Produced, CliError> {
    let mut cases = Vec::new();
    let mut shown = RunConfig::new(ModelKind::Model1);
    if let Some(r) = &cli.range {
        shown.range_lo = r[0];
        shown.range_hi = r[1];
    }
    if let Some(s) = cli.steps {
        shown.steps = s;
    }
    shown.check_range()?;
    for model in [ModelKind::Prop31, ModelKind::Model1, ModelKind::Model2] {
        let cfg = RunConfig { model, ..shown.clone() };
        cases.extend(verify_cases(&cfg)?);
    }
    let params = json!({ "grid": "default", "range_lo": shown.range_lo, "range_hi": shown.range_hi, "steps": shown.steps });
    run_verify(cases, params, shown.range_lo, shown.range_hi, shown.steps, cli)
}

fn cmd_verify(cfg: &RunConfig, cli: &Cli) -> Result<Produced, CliError> {
    let cases = verify_cases(cfg)?;
    let params = serde_json::to_value(cfg).expect("serializable");
    run_verify(cases, params, cfg.range_lo, cfg.range_hi, cfg.steps, cli)
}

fn run_verify(cases: Vec<Case>, params: Value, lo: i64, hi: i64, n_max: usize, cli: &Cli) -> Result<Produced, CliError> {
    if n_max == 0 {
        return Err(CliError::Config("verify needs steps ≥ 1".into()));
    }
    let (tol_agree, tol_stat) = (cli.tol_agree, cli.tol_stat);
    let mut body = String::from("model,param,theta,seed,agreement,stationarity,status\n");
    let mut rows = Vec::new();
    let mut notes = String::new();
    let mut failed = 0usize;
    for case in &cases {
        let outcome = check_construction(&case.built.0, &case.built.1, lo, hi, n_max)?;
        let mut checks = Vec::new();
        if outcome.agreement.is_nan() || outcome.agreement > tol_agree {
            checks.push("agreement");
        }
        if outcome.stationarity.is_nan() || outcome.stationarity > tol_stat {
            checks.push("stationarity");
        }
        let status = if checks.is_empty() { "pass".to_string() } else { format!("fail:{}", checks.join("+")) };
        let param_name = if case.model == ModelKind::Model2 { "gamma" } else { "phi" };
        let theta = case.theta.map(fmt_f).unwrap_or_default();
        writeln!(
            body,
            "{},{},{},{},{},{},{}",
            case.model.name(),
            fmt_f(case.param),
            theta,
            case.seed_label,
            fmt_f(outcome.agreement),
            fmt_f(outcome.stationarity),
            status
        )
        .unwrap();
        if !checks.is_empty() {
            failed += 1;
            writeln!(
                notes,
                "FAIL {} {param_name}={} theta={} seed={}: {}",
                case.model.name(),
                case.param,
                case.theta.map_or("-".to_string(), |t| t.to_string()),
                case.seed_label,
                checks
                    .iter()
                    .map(|c| match *c {
                        "agreement" => format!("agreement {:e} > {:e}", outcome.agreement, tol_agree),
                        _ => format!("stationarity {:e} > {:e}", outcome.stationarity, tol_stat),
                    })
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
        }
        rows.push(json!({
            "model": case.model.name(),
            param_name: case.param,
            "theta": case.theta,
            "seed": case.seed_json,
            "agreement": outcome.agreement,
            "stationarity": outcome.stationarity,
            "pass": checks.is_empty(),
            "failed_checks": checks,
        }));
    }
    writeln!(notes, "verify: {} of {} cases passed", cases.len() - failed, cases.len()).unwrap();
    let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
    if cli.json {
        let summary = json!({
            "cases": cases.len(),
            "passed": cases.len() - failed,
            "failed": failed,
            "tol_agree": tol_agree,
            "tol_stat": tol_stat,
            "range": [lo, hi],
            "n_max": n_max,
        });
        let doc = json!({ "params": params, "rows": rows, "summary": summary });
        body = serde_json::to_string_pretty(&doc).expect("serializable");
        body.push('\n');
    }
    Ok(Produced { code, body, notes })
}
