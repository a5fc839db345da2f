//! Seeded verification runs and their reports.
//!
//! Every trial samples an instance document from `(seed, trial)`, builds
//! the objects in the requested scalar field and checks the identity on
//! them. Failing trials embed their instance document, which replays to
//! the same failure through [`replay`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::doc::{InputDoc, SCHEMA};
use crate::error::{Error, Result};
use crate::microcube::{Microcube, TangentVector};
use crate::sample::trial_seed;
use crate::scalar::{Rational, Scalar, ScalarMode};
use crate::suites;
use crate::weil::Weil;

/// Upper bound on `p + q + r` for the forms suites.
pub const MAX_DEGREE_SUM: usize = 5;
/// Upper bound on the target dimension.
pub const MAX_DIM: usize = 4;
/// At most this many failure messages are kept per trial.
const MAX_MESSAGES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    WeilRing,
    GeneralJacobi,
    IconAntisymmetry,
    IconJacobi,
    Interchange,
    ConvolutionLaws,
    VectorFieldBracket,
    FormsSemiformClosure,
    FormsAntisymmetry,
    FormsJacobi,
    FnGradedAntisymmetry,
    FnNestedAntisymmetrizer,
    FnGradedJacobi,
    Distributions,
}

impl SuiteName {
    pub const ALL: [SuiteName; 14] = [
        SuiteName::WeilRing,
        SuiteName::GeneralJacobi,
        SuiteName::IconAntisymmetry,
        SuiteName::IconJacobi,
        SuiteName::Interchange,
        SuiteName::ConvolutionLaws,
        SuiteName::VectorFieldBracket,
        SuiteName::FormsSemiformClosure,
        SuiteName::FormsAntisymmetry,
        SuiteName::FormsJacobi,
        SuiteName::FnGradedAntisymmetry,
        SuiteName::FnNestedAntisymmetrizer,
        SuiteName::FnGradedJacobi,
        SuiteName::Distributions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::WeilRing => "weil-ring",
            SuiteName::GeneralJacobi => "general-jacobi",
            SuiteName::IconAntisymmetry => "icon-antisymmetry",
            SuiteName::IconJacobi => "icon-jacobi",
            SuiteName::Interchange => "lemma-3-3",
            SuiteName::ConvolutionLaws => "convolution-laws",
            SuiteName::VectorFieldBracket => "vector-field-bracket",
            SuiteName::FormsSemiformClosure => "forms-semiform-closure",
            SuiteName::FormsAntisymmetry => "forms-theorem-4-3",
            SuiteName::FormsJacobi => "forms-theorem-4-4",
            SuiteName::FnGradedAntisymmetry => "fn-graded-antisymmetry",
            SuiteName::FnNestedAntisymmetrizer => "fn-lemma-4-6",
            SuiteName::FnGradedJacobi => "fn-graded-jacobi",
            SuiteName::Distributions => "distributions",
        }
    }

    /// Number of form degrees the suite uses (0 when degrees are ignored).
    pub fn degree_arity(self) -> usize {
        match self {
            SuiteName::FormsSemiformClosure | SuiteName::FormsAntisymmetry | SuiteName::FnGradedAntisymmetry => 2,
            SuiteName::FormsJacobi | SuiteName::FnNestedAntisymmetrizer | SuiteName::FnGradedJacobi => 3,
            _ => 0,
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            SuiteName::WeilRing | SuiteName::GeneralJacobi | SuiteName::ConvolutionLaws => 100,
            SuiteName::VectorFieldBracket => 100,
            SuiteName::IconAntisymmetry | SuiteName::IconJacobi | SuiteName::Interchange => 50,
            SuiteName::Distributions => 50,
            _ => 10,
        }
    }

    pub fn default_dim(self) -> usize {
        match self {
            SuiteName::VectorFieldBracket => 3,
            SuiteName::Distributions => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    /// Target dimension `m`; the domain dimension for `distributions`.
    pub dim: usize,
    pub degrees: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mode: ScalarMode,
    /// Worker threads; `1` runs serially. Never affects report contents.
    pub workers: usize,
    /// Debug switch: `false` omits domain realignment in the icon suites.
    pub realign: bool,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName) -> Self {
        SuiteConfig {
            suite,
            dim: suite.default_dim(),
            degrees: vec![1; suite.degree_arity()],
            trials: suite.default_trials(),
            seed: 42,
            mode: ScalarMode::Rational,
            workers: 1,
            realign: true,
        }
    }

    pub fn dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn degrees(mut self, degrees: &[usize]) -> Self {
        self.degrees = degrees.to_vec();
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mode(mut self, mode: ScalarMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn realign(mut self, realign: bool) -> Self {
        self.realign = realign;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::Config(format!("dimension must lie in 1..={MAX_DIM}")));
        }
        let need = self.suite.degree_arity();
        if need > 0 {
            if self.degrees.len() != need {
                return Err(Error::Config(format!(
                    "{} takes {need} degrees, got {}",
                    self.suite,
                    self.degrees.len()
                )));
            }
            if self.degrees.contains(&0) {
                return Err(Error::Config("degrees must be positive".into()));
            }
            let sum: usize = self.degrees.iter().sum();
            if sum > MAX_DEGREE_SUM {
                return Err(Error::Config(format!("degree sum {sum} exceeds {MAX_DEGREE_SUM}")));
            }
        }
        if let ScalarMode::Float { tol } = self.mode {
            ScalarMode::float(tol)?;
        }
        Ok(())
    }

    /// Reads the configuration fields of a report entry.
    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let field = |k: &str| {
            v.get(k).ok_or_else(|| Error::Parse {
                path: format!("{path}.{k}"),
                message: "missing".into(),
            })
        };
        let bad = |k: &str, m: &str| Error::Parse {
            path: format!("{path}.{k}"),
            message: m.into(),
        };
        let suite: SuiteName = field("suite")?
            .as_str()
            .ok_or_else(|| bad("suite", "expected a string"))?
            .parse()?;
        let uint = |k: &str| -> Result<u64> { field(k)?.as_u64().ok_or_else(|| bad(k, "expected an integer")) };
        let degrees = field("degrees")?
            .as_array()
            .ok_or_else(|| bad("degrees", "expected an array"))?
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| bad("degrees", "expected integers")))
            .collect::<Result<Vec<_>>>()?;
        let mode = match field("scalar")?.as_str() {
            Some("rational") => ScalarMode::Rational,
            Some("float") => ScalarMode::float(field("tol")?.as_f64().ok_or_else(|| bad("tol", "expected a number"))?)?,
            _ => return Err(bad("scalar", "expected \"rational\" or \"float\"")),
        };
        let realign = match v.get("realign") {
            None => true,
            Some(r) => r.as_bool().ok_or_else(|| bad("realign", "expected a boolean"))?,
        };
        Ok(SuiteConfig {
            suite,
            dim: uint("dim")? as usize,
            degrees,
            trials: uint("trials")? as usize,
            seed: uint("seed")?,
            mode,
            workers: 1,
            realign,
        })
    }

    fn to_json(&self) -> Map<String, Value> {
        let mut o = Map::new();
        o.insert("suite".into(), json!(self.suite.name()));
        o.insert("dim".into(), json!(self.dim));
        o.insert("degrees".into(), json!(self.degrees));
        o.insert("trials".into(), json!(self.trials));
        o.insert("seed".into(), json!(self.seed));
        o.insert("scalar".into(), json!(self.mode.name()));
        if let ScalarMode::Float { tol } = self.mode {
            o.insert("tol".into(), json!(tol));
        }
        o.insert("realign".into(), json!(self.realign));
        o
    }
}

/// Accumulates the checks of one trial.
pub struct Tally<S: Scalar> {
    tol: f64,
    checks: usize,
    failed: usize,
    worst: Option<(f64, S)>,
    messages: Vec<String>,
}

impl<S: Scalar> Tally<S> {
    pub fn new(tol: f64) -> Self {
        Tally {
            tol,
            checks: 0,
            failed: 0,
            worst: None,
            messages: Vec::new(),
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn fail(&mut self, message: String) {
        self.failed += 1;
        if self.messages.len() < MAX_MESSAGES {
            self.messages.push(message);
        }
    }

    /// Records a residual scalar; it must vanish (within tolerance).
    pub fn scalar(&mut self, label: &str, r: &S) {
        self.checks += 1;
        let mag = r.magnitude();
        if self.worst.as_ref().is_none_or(|(w, _)| mag > *w) {
            self.worst = Some((mag, r.abs_value()));
        }
        if !r.is_negligible(self.tol) {
            self.fail(format!("{label}: residual {r}"));
        }
    }

    /// Records the largest coefficient of a residual point.
    pub fn point(&mut self, label: &str, p: &[Weil<S>]) {
        let r = max_coefficient(p);
        self.scalar(label, &r);
    }

    pub fn tangent(&mut self, label: &str, t: &TangentVector<S>) {
        self.point(label, &t.dir);
    }

    /// Records the coefficientwise difference of two microcubes.
    pub fn cubes(&mut self, label: &str, a: &Microcube<S>, b: &Microcube<S>) {
        if a.arity() != b.arity() || a.dim() != b.dim() {
            self.checks += 1;
            self.fail(format!("{label}: shapes differ"));
            return;
        }
        let diff: Vec<Weil<S>> = (0..1u64 << a.arity())
            .flat_map(|mask| {
                let (x, y) = (a.coeff(mask), b.coeff(mask));
                x.iter().zip(&y).map(|(u, v)| u.sub_ref(v)).collect::<Vec<_>>()
            })
            .collect();
        self.point(label, &diff);
    }

    pub fn holds(&mut self, label: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.fail(format!("{label}: does not hold"));
        }
    }

    /// Unwraps a computation, recording an error as a failure.
    pub fn guard<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{label}: {e}"));
                None
            }
        }
    }

    pub fn finish(self, trial: usize, seed: u64) -> TrialOutcome {
        let residual = match &self.worst {
            Some((_, s)) => s.to_json(),
            None => S::zero().to_json(),
        };
        TrialOutcome {
            trial,
            trial_seed: seed,
            checks: self.checks,
            failed_checks: self.failed,
            messages: self.messages,
            residual,
            residual_magnitude: self.worst.map_or(0.0, |(m, _)| m),
            instance: None,
        }
    }
}

/// Largest coefficient, in magnitude, of all components of a point.
pub fn max_coefficient<S: Scalar>(p: &[Weil<S>]) -> S {
    let mut best = S::zero();
    let mut best_mag = 0.0;
    for w in p {
        for (_, c) in w.terms() {
            let mag = c.magnitude();
            if mag > best_mag || (best.is_zero() && !c.is_zero()) {
                best_mag = mag;
                best = c.abs_value();
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub trial_seed: u64,
    pub checks: usize,
    pub failed_checks: usize,
    pub messages: Vec<String>,
    pub residual: Value,
    pub residual_magnitude: f64,
    /// Instance document, attached to failing trials.
    pub instance: Option<Value>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failed_checks == 0
    }

    fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("trial".into(), json!(self.trial));
        o.insert("trial_seed".into(), json!(self.trial_seed));
        o.insert("checks".into(), json!(self.checks));
        o.insert("failed_checks".into(), json!(self.failed_checks));
        o.insert("messages".into(), json!(self.messages));
        o.insert("residual".into(), self.residual.clone());
        if let Some(doc) = &self.instance {
            o.insert("instance".into(), doc.clone());
        }
        Value::Object(o)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub outcomes: Vec<TrialOutcome>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed()).count()
    }

    pub fn checks(&self) -> usize {
        self.outcomes.iter().map(|o| o.checks).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// The residual of largest magnitude over all trials.
    pub fn max_residual(&self) -> Value {
        self.outcomes
            .iter()
            .fold(None::<&TrialOutcome>, |best, o| match best {
                Some(b) if b.residual_magnitude >= o.residual_magnitude => Some(b),
                _ => Some(o),
            })
            .map_or(Value::Null, |o| o.residual.clone())
    }

    pub fn failing(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn to_json(&self) -> Value {
        let mut o = self.config.to_json();
        o.insert("checks".into(), json!(self.checks()));
        o.insert("failures".into(), json!(self.failures()));
        o.insert("max_residual".into(), self.max_residual());
        o.insert("elapsed_ms".into(), json!(self.elapsed_ms as u64));
        o.insert(
            "failing".into(),
            Value::Array(self.failing().map(TrialOutcome::to_json).collect()),
        );
        Value::Object(o)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.suites.iter().map(SuiteReport::failures).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "passed": self.passed(),
            "failures": self.failures(),
            "suites": self.suites.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
        })
    }

    /// Aligned table: suite, trials, failures, max residual, time.
    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 6]> = self
            .suites
            .iter()
            .map(|s| {
                let mut label = s.config.suite.name().to_string();
                if !s.config.degrees.is_empty() {
                    let d: Vec<String> = s.config.degrees.iter().map(|d| d.to_string()).collect();
                    label.push_str(&format!(" ({})", d.join(",")));
                }
                [
                    label,
                    s.config.dim.to_string(),
                    s.outcomes.len().to_string(),
                    s.failures().to_string(),
                    residual_text(&s.max_residual()),
                    format!("{:.2}s", s.elapsed_ms as f64 / 1000.0),
                ]
            })
            .collect();
        let header = ["suite", "m", "trials", "failures", "max-residual", "time"];
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i == 0 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(header.to_vec());
        out.push('\n');
        for r in &rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        for s in &self.suites {
            for o in s.failing().take(3) {
                let first = o.messages.first().map_or("", String::as_str);
                let more = match o.failed_checks {
                    0 | 1 => String::new(),
                    n => format!(" (+{} more)", n - 1),
                };
                out.push_str(&format!("{} trial {}: {first}{more}\n", s.config.suite, o.trial));
            }
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

fn residual_text(v: &Value) -> String {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let s = |x: &Value| match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            if a[1] == json!(1) {
                s(&a[0])
            } else {
                format!("{}/{}", s(&a[0]), s(&a[1]))
            }
        }
        Value::Number(n) => format!("{:.3e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Strips the timing fields from a JSON report.
pub fn without_timing(mut report: Value) -> Value {
    if let Some(suites) = report.get_mut("suites").and_then(Value::as_array_mut) {
        for s in suites {
            if let Some(o) = s.as_object_mut() {
                o.remove("elapsed_ms");
            }
        }
    }
    report
}

/// Runs one suite.
pub fn run(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let start = Instant::now();
    let outcomes = match config.mode {
        ScalarMode::Rational => run_trials::<Rational>(config)?,
        ScalarMode::Float { .. } => run_trials::<f64>(config)?,
    };
    Ok(SuiteReport {
        config: config.clone(),
        outcomes,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Runs several suites in order.
pub fn run_all(configs: &[SuiteConfig]) -> Result<Report> {
    let suites = configs.iter().map(run).collect::<Result<Vec<_>>>()?;
    Ok(Report { suites })
}

/// Re-runs a suite's check on one instance document.
pub fn replay(config: &SuiteConfig, doc: &InputDoc) -> Result<SuiteReport> {
    replay_trials(config, &[(0, config.seed, doc.clone())])
}

fn replay_trials(config: &SuiteConfig, instances: &[(usize, u64, InputDoc)]) -> Result<SuiteReport> {
    config.validate()?;
    let start = Instant::now();
    let outcomes = instances
        .iter()
        .map(|(trial, seed, doc)| match config.mode {
            ScalarMode::Rational => one_trial::<Rational>(config, *trial, *seed, doc),
            ScalarMode::Float { .. } => one_trial::<f64>(config, *trial, *seed, doc),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut config = config.clone();
    config.trials = outcomes.len().max(1);
    Ok(SuiteReport {
        config,
        outcomes,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Re-runs every failing instance embedded in a JSON report under the
/// configuration recorded next to it.
pub fn replay_report(report: &Value) -> Result<Report> {
    let bad = |path: String, message: &str| Error::Parse {
        path,
        message: message.into(),
    };
    if report.get("schema").and_then(Value::as_u64) != Some(SCHEMA) {
        return Err(bad("schema".into(), "expected a schema 1 report"));
    }
    let suites = report
        .get("suites")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("suites".into(), "expected an array"))?;
    let mut out = Report::default();
    for (i, entry) in suites.iter().enumerate() {
        let path = format!("suites[{i}]");
        let config = SuiteConfig::from_json(entry, &path)?;
        let failing = entry
            .get("failing")
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("{path}.failing"), "expected an array"))?;
        if failing.is_empty() {
            continue;
        }
        let instances = failing
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let fp = format!("{path}.failing[{j}]");
                let trial = f.get("trial").and_then(Value::as_u64).unwrap_or(0) as usize;
                let seed = f.get("trial_seed").and_then(Value::as_u64).unwrap_or(config.seed);
                let doc = f
                    .get("instance")
                    .ok_or_else(|| bad(format!("{fp}.instance"), "missing"))?;
                let doc = InputDoc::from_value(doc).map_err(|e| match e {
                    Error::Parse { path, message } => Error::Parse {
                        path: format!("{fp}.instance.{path}"),
                        message,
                    },
                    other => other,
                })?;
                Ok((trial, seed, doc))
            })
            .collect::<Result<Vec<_>>>()?;
        out.suites.push(replay_trials(&config, &instances)?);
    }
    Ok(out)
}

fn one_trial<S: Scalar>(config: &SuiteConfig, trial: usize, seed: u64, doc: &InputDoc) -> Result<TrialOutcome> {
    let mut tally = Tally::<S>::new(config.mode.tolerance());
    suites::check(config, doc, &mut tally)?;
    let mut outcome = tally.finish(trial, seed);
    if !outcome.passed() {
        outcome.instance = Some(doc.to_json());
    }
    Ok(outcome)
}

fn run_trials<S: Scalar>(config: &SuiteConfig) -> Result<Vec<TrialOutcome>> {
    let trial = |t: usize| {
        let seed = trial_seed(config.seed, t as u64);
        let doc = suites::sample(config, t, seed);
        one_trial::<S>(config, t, seed, &doc)
    };
    if config.workers <= 1 {
        return (0..config.trials).map(trial).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| (0..config.trials).into_par_iter().map(trial).collect())
}

/// The full plan: every suite at its default size, the general Jacobi
/// identity for `m = 1, 2, 3` and the forms suites on the degree triples
/// `(1,1,1)`, `(1,1,2)`, `(1,2,2)` (pairs taken from their prefixes).
pub fn full_plan(seed: u64) -> Vec<SuiteConfig> {
    let mut plan = Vec::new();
    let base = |s: SuiteName| SuiteConfig::new(s).seed(seed);
    plan.push(base(SuiteName::WeilRing));
    for m in 1..=3 {
        plan.push(base(SuiteName::GeneralJacobi).dim(m));
    }
    for s in [
        SuiteName::ConvolutionLaws,
        SuiteName::IconAntisymmetry,
        SuiteName::IconJacobi,
        SuiteName::VectorFieldBracket,
        SuiteName::Interchange,
    ] {
        plan.push(base(s));
    }
    let triples = [[1, 1, 1], [1, 1, 2], [1, 2, 2]];
    for s in [
        SuiteName::FormsSemiformClosure,
        SuiteName::FormsAntisymmetry,
        SuiteName::FormsJacobi,
        SuiteName::FnGradedAntisymmetry,
        SuiteName::FnNestedAntisymmetrizer,
        SuiteName::FnGradedJacobi,
    ] {
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for t in &triples {
            let d = t[..s.degree_arity()].to_vec();
            if !seen.contains(&d) {
                plan.push(base(s).degrees(&d));
                seen.push(d);
            }
        }
    }
    plan.push(base(SuiteName::Distributions));
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn suite_names_round_trip() {
        for s in SuiteName::ALL {
            assert_eq!(s.name().parse::<SuiteName>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<SuiteName>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn config_validation() {
        let c = SuiteConfig::new(SuiteName::FnGradedJacobi);
        assert!(c.validate().is_ok());
        assert!(c.clone().degrees(&[1, 1]).validate().is_err());
        assert!(c.clone().degrees(&[2, 2, 2]).validate().is_err());
        assert!(c.clone().trials(0).validate().is_err());
        assert!(SuiteConfig::new(SuiteName::WeilRing).dim(9).validate().is_err());
    }

    #[test]
    fn tally_keeps_the_largest_residual() {
        let mut t = Tally::<Rational>::new(0.0);
        t.scalar("a", &rat(0, 1));
        t.scalar("b", &rat(-3, 2));
        t.scalar("c", &rat(1, 2));
        let o = t.finish(0, 0);
        assert_eq!(o.checks, 3);
        assert_eq!(o.failed_checks, 2);
        assert_eq!(o.residual, json!([3, 2]));
    }

    #[test]
    fn failing_instances_replay_to_the_same_failure() {
        let config = SuiteConfig::new(SuiteName::IconAntisymmetry).trials(6).realign(false);
        let report = run_all(&[config]).unwrap();
        assert!(report.failures() > 0);
        let json = report.to_json();
        let replayed = replay_report(&json).unwrap();
        let original: Vec<_> = report.suites[0].failing().map(|o| (o.trial, o.messages.clone())).collect();
        let again: Vec<_> = replayed.suites[0].outcomes.iter().map(|o| (o.trial, o.messages.clone())).collect();
        assert_eq!(original, again);
    }

    #[test]
    fn text_table_is_aligned() {
        let report = run_all(&[SuiteConfig::new(SuiteName::WeilRing).trials(3)]).unwrap();
        let text = report.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("suite"));
        assert!(lines[1].starts_with("weil-ring"));
        assert!(lines[1].contains(" 0 "), "{text}");
        assert_eq!(lines.last(), Some(&"PASS"));
    }
}
