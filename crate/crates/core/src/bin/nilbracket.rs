use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nilbracket::distributions::{flow_bracket, DiracFlow};
use nilbracket::doc::{self, InputDoc, SCHEMA};
use nilbracket::harness::{self, full_plan, Report, SuiteConfig, SuiteName};
use nilbracket::icon::vector_field_bracket;
use nilbracket::microcube::JacobiCubes;
use nilbracket::sample::Sampler;
use nilbracket::suites::{test_cubes, PROBE_DEGREE};
use nilbracket::{Error, GeneratorContext, Rational, ScalarMode, Semiform, TestMap, Weil};

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "nilbracket", version, about = "Exact brackets of icons, forms and Dirac flows, with seeded identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report residuals.
    Verify(VerifyArgs),
    /// Compute one bracket from an input document.
    Bracket(BracketArgs),
    /// Run a short showcase.
    Demo,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite name, or `all` for the full plan.
    #[arg(long, required_unless_present = "replay")]
    suite: Option<String>,
    /// Target dimension m.
    #[arg(long)]
    dim: Option<usize>,
    /// Form degrees, e.g. `1,2` or `1,1,2`.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ScalarArg::Rational)]
    scalar: ScalarArg,
    /// Tolerance in float mode.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
    /// Worker threads for the trials.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Check one instance document instead of sampling.
    #[arg(long, conflicts_with = "replay")]
    input: Option<PathBuf>,
    /// Re-run the failing instances of a JSON report.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Debug: omit domain realignment in the icon suites.
    #[arg(long, hide = true)]
    no_realign: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    VectorField,
    FnForm,
    Icon,
    Distribution,
}

#[derive(clap::Args)]
struct BracketArgs {
    /// Input document (a path, or `-` for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Name of the left operand; defaults to the first entry.
    #[arg(long)]
    left: Option<String>,
    /// Name of the right operand; defaults to the second entry.
    #[arg(long)]
    right: Option<String>,
    /// Seed for the cubes used to verify a read-off kernel.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Bracket(args) => bracket(args),
        Command::Demo => demo(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn mode(scalar: ScalarArg, tol: Option<f64>) -> CliResult<ScalarMode> {
    match (scalar, tol) {
        (ScalarArg::Rational, None) => Ok(ScalarMode::Rational),
        (ScalarArg::Rational, Some(_)) => Err(Failure::Usage("--tol applies only to --scalar float".into())),
        (ScalarArg::Float, tol) => Ok(ScalarMode::float(tol.unwrap_or(1e-9))?),
    }
}

fn configs(args: &VerifyArgs) -> CliResult<Vec<SuiteConfig>> {
    let mode = mode(args.scalar, args.tol)?;
    let suite = args.suite.as_deref().unwrap_or("all");
    let mut plan = if suite == "all" {
        if args.dim.is_some() || args.degrees.is_some() {
            return Err(Failure::Usage("--dim and --degrees need a single --suite".into()));
        }
        full_plan(args.seed)
    } else {
        let name: SuiteName = suite.parse()?;
        let mut c = SuiteConfig::new(name).seed(args.seed);
        if let Some(m) = args.dim {
            c = c.dim(m);
        }
        if let Some(d) = &args.degrees {
            let need = name.degree_arity();
            if need == 0 {
                return Err(Failure::Usage(format!("{name} takes no degrees")));
            }
            c = c.degrees(d);
        }
        vec![c]
    };
    for c in &mut plan {
        c.mode = mode;
        c.workers = args.workers;
        c.realign = !args.no_realign;
        if let Some(t) = args.trials {
            c.trials = t;
        }
        c.validate()?;
    }
    Ok(plan)
}

fn verify(args: VerifyArgs) -> CliResult {
    let report = if let Some(path) = &args.replay {
        let v: Value = serde_json::from_str(&read_input(path)?)
            .map_err(|e| Failure::Usage(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
        harness::replay_report(&v)?
    } else if let Some(path) = &args.input {
        let doc = InputDoc::parse(&read_input(path)?)?;
        let plan = configs(&args)?;
        if plan.len() != 1 {
            return Err(Failure::Usage("--input needs a single --suite".into()));
        }
        Report {
            suites: vec![harness::replay(&plan[0], &doc)?],
        }
    } else {
        harness::run_all(&configs(&args)?)?
    };
    let json = report.to_json();
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&json).expect("serializable");
        fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if args.json {
        out!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
    } else {
        out!("{}", report.to_text().trim_end());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn pick<'a, T>(list: &'a [(String, T)], name: Option<&str>, index: usize, section: &str) -> CliResult<(&'a str, &'a T)> {
    let found = match name {
        Some(n) => list.iter().find(|(k, _)| k == n),
        None => list.get(index),
    };
    found.map(|(k, v)| (k.as_str(), v)).ok_or_else(|| {
        Failure::Usage(match name {
            Some(n) => format!("no entry `{n}` in `{section}`"),
            None => format!("`{section}` needs at least {} entries", index + 1),
        })
    })
}

fn bracket(args: BracketArgs) -> CliResult {
    let doc = InputDoc::parse(&read_input(&args.input)?)?;
    let (l, r) = (args.left.as_deref(), args.right.as_deref());
    let ctx = GeneratorContext::new();
    let out = match args.kind {
        Kind::VectorField => {
            let (nf, f) = pick(&doc.fields, l, 0, "fields")?;
            let (ng, g) = pick(&doc.fields, r, 1, "fields")?;
            if f.nvars() != g.nvars() {
                return Err(Error::DimensionMismatch {
                    context: format!("fields `{nf}` and `{ng}`"),
                    expected: f.nvars(),
                    found: g.nvars(),
                }
                .into());
            }
            let b = vector_field_bracket(&ctx, f, g, 0.0)?;
            let text = b
                .components()
                .iter()
                .enumerate()
                .map(|(i, c)| format!("  [{nf}, {ng}]_{} = {}", i + 1, c.polynomial()))
                .collect::<Vec<_>>()
                .join("\n");
            (json!({"kind": "vector-field", "left": nf, "right": ng, "bracket": doc::vector_field_json(&b)}), text)
        }
        Kind::FnForm => {
            let (n1, k1) = pick(&doc.kernels, l, 0, "kernels")?;
            let (n2, k2) = pick(&doc.kernels, r, 1, "kernels")?;
            let (w1, w2) = (Semiform::from_kernel(k1.clone()), Semiform::from_kernel(k2.clone()));
            let b = w1.fn_bracket(&w2, 0.0)?;
            let k = b.read_kernel(&ctx)?;
            let read = Semiform::from_kernel(k.clone());
            let mut s = Sampler::new(args.seed);
            let cubes = test_cubes(&mut s, b.degree(), b.dim());
            let mut agrees = true;
            for c in &cubes {
                agrees &= b.tangent(&ctx, c)? == read.tangent(&ctx, c)?;
            }
            if !agrees {
                return Err(Error::NotTensorial("read-off kernel disagrees with the bracket".into()).into());
            }
            let mut text = format!("  degree {} kernel on R^{}, checked on {} cubes\n", k.degree(), k.dim(), cubes.len());
            for ((c, slots), poly) in k.entries() {
                let slots: Vec<String> = slots.iter().map(|s| (s + 1).to_string()).collect();
                text.push_str(&format!("  component {} slots ({}): {}\n", c + 1, slots.join(","), poly));
            }
            (
                json!({"kind": "fn-form", "left": n1, "right": n2, "bracket": doc::kernel_to_json(&k), "verified_cubes": cubes.len()}),
                text.trim_end().to_string(),
            )
        }
        Kind::Icon => {
            let (n1, x1) = pick(&doc.icons, l, 0, "icons")?;
            let (n2, x2) = pick(&doc.icons, r, 1, "icons")?;
            let b = x1.build::<Rational>()?.lie_bracket(&x2.build()?, 0.0)?;
            let k = x1.domain_dim() + x2.domain_dim();
            if doc.test_maps.is_empty() {
                return Err(Failure::Usage("icon brackets are evaluated on `test_maps`; none given".into()));
            }
            let mut values = Vec::new();
            let mut text = String::new();
            for (name, h) in &doc.test_maps {
                if h.nvars() != k || h.target() != b.target() {
                    return Err(Error::Parse {
                        path: format!("test_maps.{name}"),
                        message: format!("expected a map R^{k} → R^{}", b.target()),
                    }
                    .into());
                }
                let t = b.tangent_map(&ctx, h)?;
                values.push(json!({"map": name, "base": doc::point_json(&t.base), "dir": doc::point_json(&t.dir)}));
                text.push_str(&format!("  on {name}: base {} dir {}\n", show(&t.base), show(&t.dir)));
            }
            (
                json!({"kind": "icon", "left": n1, "right": n2, "values": values}),
                text.trim_end().to_string(),
            )
        }
        Kind::Distribution => {
            let flows: Vec<(String, DiracFlow<Rational>)> = if doc.icons.is_empty() {
                doc.distributions
                    .iter()
                    .map(|(n, u)| (n.clone(), DiracFlow::new(u.clone())))
                    .collect()
            } else {
                doc.icons
                    .iter()
                    .map(|(n, x)| Ok((n.clone(), x.build_flow()?)))
                    .collect::<Result<_, Error>>()?
            };
            let (n1, x1) = pick(&flows, l, 0, "icons or distributions")?;
            let (n2, x2) = pick(&flows, r, 1, "icons or distributions")?;
            let b = flow_bracket(&ctx, x1, x2, PROBE_DEGREE, 0.0)?;
            let text = format!(
                "  direction: {} term(s){}",
                b.direction().terms().len(),
                if b.direction().is_zero() { " (vanishes)" } else { "" }
            );
            (
                json!({
                    "kind": "distribution",
                    "left": n1,
                    "right": n2,
                    "direction": doc::distribution_to_json(b.direction()),
                    "vanishes": b.direction().is_zero(),
                }),
                text,
            )
        }
    };
    let (v, text) = out;
    if args.json {
        let mut o = serde_json::Map::new();
        o.insert("schema".into(), json!(SCHEMA));
        o.extend(v.as_object().expect("object").clone());
        out!("{}", serde_json::to_string_pretty(&Value::Object(o)).expect("serializable"));
    } else {
        out!("bracket:\n{text}");
    }
    Ok(())
}

fn show(p: &[Weil<Rational>]) -> String {
    let parts: Vec<String> = p.iter().map(|w| w.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn demo() -> CliResult {
    let ctx = GeneratorContext::new();
    let q = |n: i64| Rational::from_integer(n);

    out!("vector fields on R^2: f = (x2, 0), g = (0, x1)");
    let doc = InputDoc::parse(
        r#"{"fields":{"f":[[{"c":[1,1],"e":[0,1]}],[]],"g":[[],[{"c":[1,1],"e":[1,0]}]]}}"#,
    )?;
    let b = vector_field_bracket(&ctx, doc.field("f").expect("f"), doc.field("g").expect("g"), 0.0)?;
    for (i, c) in b.components().iter().enumerate() {
        out!("  [f, g]_{} = {}", i + 1, c.polynomial());
    }

    out!("\nFrölicher-Nijenhuis bracket of the 1-forms x2 dx1 ⊗ e1 and x1 dx2 ⊗ e2");
    let k1 = nilbracket::Kernel::<Rational>::zero(1, 2).with(0, vec![0], nilbracket::Polynomial::var(2, 1))?;
    let k2 = nilbracket::Kernel::<Rational>::zero(1, 2).with(1, vec![1], nilbracket::Polynomial::var(2, 0))?;
    let fb = Semiform::from_kernel(k1).fn_bracket(&Semiform::from_kernel(k2), 0.0)?;
    for ((c, slots), poly) in fb.read_kernel(&ctx)?.entries() {
        let slots: Vec<String> = slots.iter().map(|s| (s + 1).to_string()).collect();
        out!("  component {} slots ({}): {}", c + 1, slots.join(","), poly);
    }

    out!("\ngeneral Jacobi identity on an order-pattern instance (m = 2)");
    let cubes: JacobiCubes<Rational> = Sampler::new(42).order_pattern(2);
    let parts = cubes.expressions(0.0)?;
    for (i, e) in parts.iter().enumerate() {
        out!("  expression {}: {}", i + 1, show(&e.dir));
    }
    out!("  sum: {}", show(&cubes.residual(0.0)?.dir));

    out!("\nDirac flows on R: point flow at 1 with velocity 2, point flow at 0 with velocity 3");
    let line = |b: i64| nilbracket::Domain::euclidean(vec![q(b)]);
    let x1 = DiracFlow::point_flow(line(1), vec![q(2)])?;
    let x2 = DiracFlow::point_flow(line(0), vec![q(3)])?;
    let fb = flow_bracket(&ctx, &x1, &x2, PROBE_DEGREE, 0.0)?;
    out!("  bracket direction vanishes: {}", fb.direction().is_zero());
    let h = TestMap::polynomial(vec![nilbracket::Polynomial::from_terms(
        2,
        vec![(q(1), vec![2, 1]), (q(4), vec![1, 1])],
    )?])?;
    out!("  on h = x1^2 x2 + 4 x1 x2: {}", show(&fb.icon().tangent_map(&ctx, &h)?.dir));

    out!("\nseeded checks (3 trials each)");
    let plan: Vec<SuiteConfig> = full_plan(42)
        .into_iter()
        .filter(|c| c.degrees.iter().sum::<usize>() <= 4)
        .map(|c| c.trials(3))
        .collect();
    let report = harness::run_all(&plan)?;
    out!("{}", report.to_text().trim_end());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}
