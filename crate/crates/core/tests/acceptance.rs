//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test --release --test acceptance -- <filter>` runs only the
//! criteria whose name contains `<filter>`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nilbracket::distributions::flow_bracket;
use nilbracket::doc::InputDoc;
use nilbracket::harness::{self, full_plan, without_timing, Report, SuiteConfig, SuiteName, SuiteReport};
use nilbracket::icon::vector_field_bracket;
use nilbracket::sample::Sampler;
use nilbracket::suites::PROBE_DEGREE;
use nilbracket::{GeneratorContext, Rational};

const SEED: u64 = 42;

/// Seed-42 plan, each suite run at most once.
struct Plan {
    configs: Vec<SuiteConfig>,
    reports: Vec<Option<SuiteReport>>,
}

impl Plan {
    fn new() -> Self {
        let configs = full_plan(SEED);
        let reports = configs.iter().map(|_| None).collect();
        Plan { configs, reports }
    }

    fn suites(&mut self, names: &[SuiteName]) -> Result<Vec<&SuiteReport>, String> {
        let picked: Vec<usize> = (0..self.configs.len())
            .filter(|&i| names.contains(&self.configs[i].suite))
            .collect();
        for &i in &picked {
            if self.reports[i].is_none() {
                self.reports[i] = Some(harness::run(&self.configs[i]).map_err(|e| e.to_string())?);
            }
        }
        Ok(picked.iter().map(|&i| self.reports[i].as_ref().unwrap()).collect())
    }

    fn all(&mut self) -> Result<Report, String> {
        self.suites(&SuiteName::ALL)?;
        let suites = self.reports.iter_mut().map(|r| r.take().unwrap()).collect();
        Ok(Report { suites })
    }
}

struct Verdict {
    ok: bool,
    detail: String,
    /// Time attributable to the criterion; suite timings when they come from
    /// the shared plan.
    elapsed: Duration,
}

fn summarize(reports: &[&SuiteReport], extra: &str) -> Verdict {
    let trials: usize = reports.iter().map(|r| r.outcomes.len()).sum();
    let checks: usize = reports.iter().map(|r| r.checks()).sum();
    let failures: usize = reports.iter().map(|r| r.failures()).sum();
    let ms: u64 = reports.iter().map(|r| r.elapsed_ms as u64).sum();
    let ok = failures == 0 && checks > 0 && reports.iter().all(|r| r.passed());
    let suites = if reports.len() == 1 { "1 suite".to_string() } else { format!("{} suites", reports.len()) };
    let mut detail = format!("{suites}, {trials} trials, {checks} checks, {failures} failures");
    if !extra.is_empty() {
        detail.push_str("; ");
        detail.push_str(extra);
    }
    Verdict {
        ok,
        detail,
        elapsed: Duration::from_millis(ms),
    }
}

fn general_jacobi(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[SuiteName::GeneralJacobi])?;
    let dims: Vec<usize> = r.iter().map(|s| s.config.dim).collect();
    let trials_ok = r.iter().all(|s| s.outcomes.len() == 100);
    let mut v = summarize(&r, &format!("m = {dims:?}"));
    v.ok &= dims == [1, 2, 3] && trials_ok;
    Ok(v)
}

fn convolution(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[SuiteName::ConvolutionLaws])?;
    let mut v = summarize(&r, "10 test maps per trial");
    v.ok &= r[0].outcomes.len() == 100;
    Ok(v)
}

fn icons(plan: &mut Plan) -> Result<Verdict, String> {
    let names = [SuiteName::IconAntisymmetry, SuiteName::IconJacobi];
    let r = plan.suites(&names)?;
    let mut v = summarize(&r, "");
    v.ok &= r.iter().all(|s| s.outcomes.len() == 50);
    let start = Instant::now();
    let mut caught = Vec::new();
    for s in names {
        let control = harness::run(&SuiteConfig::new(s).seed(SEED).realign(false)).map_err(|e| e.to_string())?;
        caught.push(format!("{s} {}/{}", control.failures(), control.outcomes.len()));
        v.ok &= control.failures() > 0;
    }
    v.elapsed += start.elapsed();
    v.detail
        .push_str(&format!("; without realignment: {} failing trials", caught.join(", ")));
    Ok(v)
}

fn vector_fields(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[SuiteName::VectorFieldBracket])?;
    let mut v = summarize(&r, "");
    v.ok &= r[0].outcomes.len() == 100;
    let start = Instant::now();
    let doc = InputDoc::parse(
        r#"{"fields":{"f":[[{"c":[1,1],"e":[0,1]}],[]],"g":[[],[{"c":[1,1],"e":[1,0]}]],
            "want":[[{"c":[-1,1],"e":[1,0]}],[{"c":[1,1],"e":[0,1]}]]}}"#,
    )
    .map_err(|e| e.to_string())?;
    let ctx = GeneratorContext::new();
    let b = vector_field_bracket(&ctx, doc.field("f").unwrap(), doc.field("g").unwrap(), 0.0)
        .map_err(|e| e.to_string())?;
    let fixed = b.polynomials() == doc.field("want").unwrap().polynomials();
    v.elapsed += start.elapsed();
    v.ok &= fixed;
    v.detail
        .push_str(&format!("; [(x2,0),(0,x1)] = (-x1,x2): {}", if fixed { "yes" } else { "no" }));
    Ok(v)
}

fn interchange(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[SuiteName::Interchange])?;
    let mut v = summarize(&r, "all four formulas per trial");
    v.ok &= r[0].outcomes.len() == 50;
    Ok(v)
}

fn forms(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[
        SuiteName::FormsSemiformClosure,
        SuiteName::FormsAntisymmetry,
        SuiteName::FormsJacobi,
        SuiteName::FnGradedAntisymmetry,
        SuiteName::FnNestedAntisymmetrizer,
        SuiteName::FnGradedJacobi,
    ])?;
    let mut v = summarize(&r, "m = 2, degrees (1,1,1) (1,1,2) (1,2,2)");
    v.ok &= r.iter().all(|s| s.outcomes.len() == 10 && s.config.dim == 2);
    Ok(v)
}

fn distributions(plan: &mut Plan) -> Result<Verdict, String> {
    let r = plan.suites(&[SuiteName::Distributions])?;
    let mut v = summarize(&r, "");
    v.ok &= r[0].outcomes.len() == 50;
    let start = Instant::now();
    let ctx = GeneratorContext::new();
    let mut vanishing = 0;
    for trial in 0..50 {
        let mut s = Sampler::for_trial(SEED, trial);
        let k = 1 + s.below(2);
        let x1 = s.dirac_flow::<Rational>(k);
        let x2 = s.dirac_flow::<Rational>(k);
        let b = flow_bracket(&ctx, &x1, &x2, PROBE_DEGREE, 0.0).map_err(|e| e.to_string())?;
        if b.direction().is_zero() {
            vanishing += 1;
        }
    }
    v.elapsed += start.elapsed();
    v.ok &= vanishing == 50;
    v.detail
        .push_str(&format!("; bracket direction identically 0 in {vanishing}/50 flow pairs"));
    Ok(v)
}

fn determinism(plan: &mut Plan) -> Result<Verdict, String> {
    let first = plan.all()?;
    let start = Instant::now();
    let configs: Vec<SuiteConfig> = full_plan(SEED).into_iter().map(|c| c.workers(2)).collect();
    let second = harness::run_all(&configs).map_err(|e| e.to_string())?;
    let (a, b) = (without_timing(first.to_json()), without_timing(second.to_json()));
    let bytes = serde_json::to_string(&a).unwrap().len();
    Ok(Verdict {
        ok: a == b,
        detail: format!(
            "{} suites, serial vs 2 workers, {bytes} bytes of JSON {}",
            first.suites.len(),
            if a == b { "identical" } else { "differ" }
        ),
        elapsed: start.elapsed(),
    })
}

type Check = fn(&mut Plan) -> Result<Verdict, String>;

fn main() -> ExitCode {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [(&str, Option<u64>, Check); 8] = [
        ("general-jacobi", Some(5), general_jacobi),
        ("convolution-laws", Some(10), convolution),
        ("icon-antisymmetry-jacobi", Some(30), icons),
        ("vector-field-oracle", Some(10), vector_fields),
        ("interchange", None, interchange),
        ("forms", Some(120), forms),
        ("distributions", Some(10), distributions),
        ("determinism", None, determinism),
    ];
    let mut plan = Plan::new();
    let mut all_ok = true;
    for (name, limit, check) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let (ok, line) = match check(&mut plan) {
            Ok(v) => {
                let secs = v.elapsed.as_secs_f64();
                let in_time = limit.is_none_or(|l| secs < l as f64);
                let limit = limit.map(|l| format!(" (limit {l}s)")).unwrap_or_default();
                let late = if in_time { "" } else { ", too slow" };
                (v.ok && in_time, format!("{}, {secs:.2}s{limit}{late}", v.detail))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        all_ok &= ok;
        println!("{} {name}: {line}", if ok { "PASS" } else { "FAIL" });
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
