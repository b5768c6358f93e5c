//! Command-line front end: loads a problem file, runs one pipeline and renders
//! the result as text or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use dvint::algebra::{Polynomial, QuotientDegree, RationalFunction};
use dvint::dvariety::{compile, ProductSystem};
use dvint::integrals::{
    generic_fiber_degree, independence_test, integrability_report, level_set_dimension, search_rational_integrals,
    verify_first_integral, FirstIntegral, IndependenceReport, IntegrabilityReport,
};
use dvint::numeric::{check_constancy, integrate_flow, max_ideal_residual};
use dvint::parser::{parse_expression, parse_problem_file, ProblemSpec};
use dvint::Error;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dvint", version, about = "Rational first integrals and internality of algebraic ODEs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Debug, Args)]
pub struct Input {
    /// Problem file.
    pub input: PathBuf,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Candidates {
    /// Candidate first integral; repeatable. Defaults to the `integrals:` lines of the file.
    #[arg(long = "h", value_name = "EXPR")]
    pub hs: Vec<String>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Verb {
    /// Compile the problem and print the resulting system.
    Compile {
        #[command(flatten)]
        input: Input,
    },
    /// Check that the section is tangent to the variety.
    VerifySection {
        #[command(flatten)]
        input: Input,
    },
    /// Check candidate first integrals symbolically.
    VerifyIntegral {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        candidates: Candidates,
    },
    /// Search first integrals with numerators of bounded degree.
    Search {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Fixed denominator of the ansatz; polynomial integrals when absent.
        #[arg(long, value_name = "EXPR")]
        denominator: Option<String>,
    },
    /// Jacobian-rank independence and w-independence of candidate integrals.
    Independence {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        candidates: Candidates,
    },
    /// Number of v points over a generic common level of the integrals.
    FiberDegree {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        candidates: Candidates,
    },
    /// Search, select w-independent integrals and classify the system.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Denominator proposal for the rational search; repeatable.
        #[arg(long = "denominator", value_name = "EXPR")]
        denominators: Vec<String>,
        #[command(flatten)]
        candidates: Candidates,
    },
    /// Integrate the flow numerically and check integrals for constancy.
    Simulate {
        #[command(flatten)]
        input: Input,
        /// Initial values as `name=value` pairs separated by commas; time defaults to 0.
        #[arg(long)]
        init: String,
        #[arg(long = "t-end")]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Write the trajectory to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Relative drift accepted by the constancy check.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        candidates: Candidates,
    },
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Compile { .. } => "compile",
            Verb::VerifySection { .. } => "verify-section",
            Verb::VerifyIntegral { .. } => "verify-integral",
            Verb::Search { .. } => "search",
            Verb::Independence { .. } => "independence",
            Verb::FiberDegree { .. } => "fiber-degree",
            Verb::Report { .. } => "report",
            Verb::Simulate { .. } => "simulate",
        }
    }

    fn input(&self) -> &Input {
        match self {
            Verb::Compile { input }
            | Verb::VerifySection { input }
            | Verb::VerifyIntegral { input, .. }
            | Verb::Search { input, .. }
            | Verb::Independence { input, .. }
            | Verb::FiberDegree { input, .. }
            | Verb::Report { input, .. }
            | Verb::Simulate { input, .. } => input,
        }
    }
}

/// One parsed invocation.
#[derive(Clone, Debug)]
pub struct CommandRequest {
    pub verb: Verb,
    pub format: Format,
}

/// Exit status and the two output streams of a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses command-line arguments (program name first) and executes them.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute_command(&CommandRequest { verb: cli.verb, format: cli.format }),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

type Run<T> = std::result::Result<T, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Input problems exit with 2; failures found while checking exit with 1.
fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::PoleEncountered { .. }
        | Error::InitialConditionOffVariety { .. }
        | Error::DenominatorNearZeroOnTrajectory { .. } => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn located(path: &str, e: &Error) -> Failure {
    let message = match e {
        Error::At { line, column, inner } => format!("{path}:{line}:{column}: {inner}"),
        Error::Problem { line, message } => format!("{path}:{line}: {message}"),
        other => format!("{path}: {other}"),
    };
    Failure { code: exit_code(e), message }
}

fn in_argument(flag: &str, text: &str, e: &Error) -> Failure {
    Failure { code: exit_code(e), message: format!("{flag} `{text}`: {e}") }
}

/// Report body plus its exit status.
struct Rendered {
    code: i32,
    json: Value,
    text: String,
}

pub fn execute_command(req: &CommandRequest) -> Outcome {
    match dispatch(&req.verb) {
        Ok(r) => {
            let stdout = match req.format {
                Format::Text => r.text,
                Format::Json => {
                    let mut envelope = Map::new();
                    envelope.insert("schema".into(), SCHEMA_VERSION.into());
                    envelope.insert("command".into(), req.verb.name().into());
                    envelope.insert("input".into(), req.verb.input().input.display().to_string().into());
                    if let Value::Object(body) = r.json {
                        envelope.extend(body);
                    }
                    let mut s = serde_json::to_string_pretty(&Value::Object(envelope)).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            Outcome { code: r.code, stdout, stderr: String::new() }
        }
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

struct Loaded {
    path: String,
    spec: ProblemSpec,
    sys: ProductSystem,
}

fn load(input: &Input) -> Run<Loaded> {
    let path = input.input.display().to_string();
    let text = std::fs::read_to_string(&input.input).map_err(|e| usage(format!("{path}: {e}")))?;
    let spec = parse_problem_file(&text).map_err(|e| located(&path, &e))?;
    let sys = compile(&spec).map_err(|e| located(&path, &e))?;
    Ok(Loaded { path, spec, sys })
}

impl Loaded {
    /// Accepts the derivative notation of the problem file, such as `y'`.
    fn expression(&self, flag: &str, text: &str) -> Run<RationalFunction> {
        self.spec
            .parse_expression(text)
            .and_then(|f| f.embed(self.sys.registry()))
            .map_err(|e| in_argument(flag, text, &e))
    }

    fn polynomial(&self, flag: &str, text: &str) -> Run<Polynomial> {
        self.expression(flag, text)?
            .as_polynomial()
            .ok_or_else(|| in_argument(flag, text, &Error::NotPolynomial(text.trim().to_string())))
    }

    /// Integrals from `--h`, or from the problem file when none are given.
    fn candidates(&self, c: &Candidates) -> Run<Vec<RationalFunction>> {
        if c.hs.is_empty() {
            self.spec
                .integrals
                .iter()
                .map(|h| h.embed(self.sys.registry()).map_err(|e| located(&self.path, &e)))
                .collect()
        } else {
            c.hs.iter().map(|h| self.expression("--h", h)).collect()
        }
    }

    fn fail(&self, e: Error) -> Failure {
        located(&self.path, &e)
    }
}

#[derive(Serialize)]
struct IntegralOut {
    h: String,
    verified: bool,
    residual: String,
    excluded_locus: Vec<String>,
    provenance: &'static str,
}

impl From<&FirstIntegral> for IntegralOut {
    fn from(f: &FirstIntegral) -> Self {
        IntegralOut {
            h: f.h.to_string(),
            verified: f.verified,
            residual: f.residual.to_string(),
            excluded_locus: f.excluded_locus.iter().map(ToString::to_string).collect(),
            provenance: f.provenance.as_str(),
        }
    }
}

#[derive(Serialize)]
struct IndependenceOut {
    rank_all: usize,
    base_rank_all: usize,
    rank_v: usize,
    base_rank_v: usize,
    independent: bool,
    w_independent: bool,
}

impl From<&IndependenceReport> for IndependenceOut {
    fn from(r: &IndependenceReport) -> Self {
        IndependenceOut {
            rank_all: r.rank_all,
            base_rank_all: r.base_rank_all,
            rank_v: r.rank_v,
            base_rank_v: r.base_rank_v,
            independent: r.independent,
            w_independent: r.w_independent,
        }
    }
}

fn fiber_degree_value(d: Option<QuotientDegree>) -> Value {
    match d {
        Some(QuotientDegree::Finite(k)) => k.into(),
        Some(QuotientDegree::Infinite) => "infinite".into(),
        None => "unknown".into(),
    }
}

fn fiber_degree_text(d: Option<QuotientDegree>) -> String {
    match d {
        Some(QuotientDegree::Finite(k)) => k.to_string(),
        Some(QuotientDegree::Infinite) => "infinite".into(),
        None => "unknown".into(),
    }
}

fn names(sys: &ProductSystem, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| sys.registry().name(v).to_string()).collect()
}

fn excluded_locus(sys: &ProductSystem, extra: &[&FirstIntegral]) -> Vec<String> {
    let mut out: Vec<String> = sys.excluded_locus().iter().map(ToString::to_string).collect();
    for f in extra {
        out.extend(f.excluded_locus.iter().map(ToString::to_string));
    }
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|s| seen.insert(s.clone()));
    out
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn dispatch(verb: &Verb) -> Run<Rendered> {
    let loaded = load(verb.input())?;
    match verb {
        Verb::Compile { .. } => Ok(compile_cmd(&loaded)),
        Verb::VerifySection { .. } => Ok(verify_section_cmd(&loaded)),
        Verb::VerifyIntegral { candidates, .. } => verify_integral_cmd(&loaded, candidates),
        Verb::Search { degree, denominator, .. } => search_cmd(&loaded, *degree, denominator.as_deref()),
        Verb::Independence { candidates, .. } => independence_cmd(&loaded, candidates),
        Verb::FiberDegree { candidates, .. } => fiber_degree_cmd(&loaded, candidates),
        Verb::Report { degree, denominators, candidates, .. } => report_cmd(&loaded, *degree, denominators, candidates),
        Verb::Simulate { init, t_end, step, csv, tol, candidates, .. } => {
            simulate_cmd(&loaded, init, *t_end, *step, csv.as_ref(), *tol, candidates)
        }
    }
}

fn compile_cmd(l: &Loaded) -> Rendered {
    #[derive(Serialize)]
    struct Variable {
        name: String,
        kind: &'static str,
    }
    #[derive(Serialize)]
    struct Body {
        mode: &'static str,
        variables: Vec<Variable>,
        ideal: Vec<String>,
        section: Map<String, Value>,
        excluded_locus: Vec<String>,
        w_vars: Vec<String>,
        v_vars: Vec<String>,
    }
    let sys = &l.sys;
    let reg = sys.registry();
    let variables = reg.iter().map(|(_, i)| Variable { name: i.name.clone(), kind: i.kind.tag() }).collect();
    let section: Map<String, Value> =
        reg.dynamic_vars().into_iter().map(|v| (reg.name(v).to_string(), sys.section(v).to_string().into())).collect();
    let body = Body {
        mode: l.spec.mode().as_str(),
        variables,
        ideal: sys.equations().iter().map(ToString::to_string).collect(),
        section,
        excluded_locus: excluded_locus(sys, &[]),
        w_vars: names(sys, sys.w_vars()),
        v_vars: names(sys, sys.v_vars()),
    };
    let mut text = String::new();
    let _ = writeln!(text, "mode: {}", body.mode);
    let vars: Vec<String> = body.variables.iter().map(|v| format!("{}:{}", v.name, v.kind)).collect();
    let _ = writeln!(text, "variables: {}", vars.join(", "));
    for g in &body.ideal {
        let _ = writeln!(text, "ideal: {g}");
    }
    for (v, s) in &body.section {
        let _ = writeln!(text, "section: {v}' = {}", s.as_str().unwrap_or_default());
    }
    if !body.excluded_locus.is_empty() {
        let _ = writeln!(text, "excluded locus: {}", body.excluded_locus.join(", "));
    }
    let _ = writeln!(text, "w: [{}]  v: [{}]", body.w_vars.join(", "), body.v_vars.join(", "));
    Rendered { code: EXIT_OK, json: to_json(&body), text }
}

fn verify_section_cmd(l: &Loaded) -> Rendered {
    #[derive(Serialize)]
    struct Residual {
        generator: String,
        residual: String,
    }
    #[derive(Serialize)]
    struct Body {
        passed: bool,
        residuals: Vec<Residual>,
    }
    let report = l.sys.verify_section();
    let body = Body {
        passed: report.passed(),
        residuals: report
            .residuals
            .iter()
            .map(|(g, r)| Residual { generator: g.to_string(), residual: r.to_string() })
            .collect(),
    };
    let mut text = String::new();
    for r in &body.residuals {
        let _ = writeln!(text, "{}  ->  {}", r.generator, r.residual);
    }
    let _ = writeln!(text, "section: {}", if body.passed { "passed" } else { "FAILED" });
    Rendered { code: if body.passed { EXIT_OK } else { EXIT_NEGATIVE }, json: to_json(&body), text }
}

fn integral_lines(text: &mut String, fis: &[FirstIntegral]) {
    for f in fis {
        let status = if f.verified { "verified" } else { "not verified" };
        let _ = write!(text, "{}  [{status}, {}]", f.h, f.provenance.as_str());
        if !f.verified {
            let _ = write!(text, "  residual: {}", f.residual);
        }
        text.push('\n');
    }
}

fn verify_integral_cmd(l: &Loaded, c: &Candidates) -> Run<Rendered> {
    #[derive(Serialize)]
    struct Body {
        all_verified: bool,
        integrals: Vec<IntegralOut>,
    }
    let hs = l.candidates(c)?;
    if hs.is_empty() {
        return Err(usage("no candidate integrals: pass --h or add `integrals:` lines"));
    }
    let fis: Vec<FirstIntegral> =
        hs.iter().map(|h| verify_first_integral(h, &l.sys)).collect::<Result<_, _>>().map_err(|e| l.fail(e))?;
    let all = fis.iter().all(|f| f.verified);
    let mut text = String::new();
    integral_lines(&mut text, &fis);
    let body = Body { all_verified: all, integrals: fis.iter().map(Into::into).collect() };
    Ok(Rendered { code: if all { EXIT_OK } else { EXIT_NEGATIVE }, json: to_json(&body), text })
}

fn search_cmd(l: &Loaded, degree: u32, denominator: Option<&str>) -> Run<Rendered> {
    #[derive(Serialize)]
    struct Body {
        degree: u32,
        denominator: String,
        integrals: Vec<IntegralOut>,
    }
    let q = match denominator {
        Some(text) => l.polynomial("--denominator", text)?,
        None => Polynomial::one(l.sys.registry()),
    };
    let fis = search_rational_integrals(&l.sys, &q, degree).map_err(|e| l.fail(e))?;
    let mut text = String::new();
    let _ = writeln!(text, "degree: {degree}  denominator: {q}");
    let _ = writeln!(text, "found: {}", fis.len());
    integral_lines(&mut text, &fis);
    let body = Body { degree, denominator: q.to_string(), integrals: fis.iter().map(Into::into).collect() };
    Ok(Rendered { code: EXIT_OK, json: to_json(&body), text })
}

fn independence_cmd(l: &Loaded, c: &Candidates) -> Run<Rendered> {
    #[derive(Serialize)]
    struct Body {
        integrals: Vec<String>,
        #[serde(flatten)]
        ranks: IndependenceOut,
        level_set_dimension: usize,
        level_set_dimension_v: usize,
    }
    let hs = l.candidates(c)?;
    let report = independence_test(&hs, &l.sys).map_err(|e| l.fail(e))?;
    let dim = level_set_dimension(&hs, &l.sys, false).map_err(|e| l.fail(e))?;
    let dim_v = level_set_dimension(&hs, &l.sys, true).map_err(|e| l.fail(e))?;
    let body = Body {
        integrals: hs.iter().map(ToString::to_string).collect(),
        ranks: (&report).into(),
        level_set_dimension: dim,
        level_set_dimension_v: dim_v,
    };
    let mut text = String::new();
    for h in &body.integrals {
        let _ = writeln!(text, "h: {h}");
    }
    let _ = writeln!(text, "rank (all directions): {} over base {}", report.rank_all, report.base_rank_all);
    let _ = writeln!(text, "rank (v directions): {} over base {}", report.rank_v, report.base_rank_v);
    let _ = writeln!(text, "level set dimension: {dim} (v part: {dim_v})");
    let _ = writeln!(text, "independent: {}", report.independent);
    let _ = writeln!(text, "w-independent: {}", report.w_independent);
    let code = if report.independent { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Rendered { code, json: to_json(&body), text })
}

fn fiber_degree_cmd(l: &Loaded, c: &Candidates) -> Run<Rendered> {
    let hs = l.candidates(c)?;
    let d = generic_fiber_degree(&hs, &l.sys).map_err(|e| l.fail(e))?;
    let mut json = Map::new();
    json.insert("integrals".into(), hs.iter().map(|h| Value::from(h.to_string())).collect());
    json.insert("fiber_degree".into(), fiber_degree_value(Some(d)));
    let text = format!("fiber degree: {}\n", fiber_degree_text(Some(d)));
    Ok(Rendered { code: EXIT_OK, json: Value::Object(json), text })
}

fn report_cmd(l: &Loaded, degree: u32, denominators: &[String], c: &Candidates) -> Run<Rendered> {
    #[derive(Serialize)]
    struct Body {
        degree: u32,
        dimension: usize,
        integrals: Vec<IntegralOut>,
        rejected: Vec<IntegralOut>,
        selected: Vec<String>,
        independence: IndependenceOut,
        fiber_degree: Value,
        verdict: String,
        excluded_locus: Vec<String>,
    }
    let user = l.candidates(c)?;
    let dens: Vec<Polynomial> = denominators.iter().map(|d| l.polynomial("--denominator", d)).collect::<Run<_>>()?;
    let r: IntegrabilityReport = integrability_report(&l.sys, degree, &user, &dens).map_err(|e| l.fail(e))?;
    let selected: Vec<&FirstIntegral> = r.selected_integrals().collect();
    let body = Body {
        degree,
        dimension: r.dimension,
        integrals: r.found.iter().map(Into::into).collect(),
        rejected: r.rejected.iter().map(Into::into).collect(),
        selected: selected.iter().map(|f| f.h.to_string()).collect(),
        independence: (&r.independence).into(),
        fiber_degree: fiber_degree_value(r.fiber_degree),
        verdict: r.verdict_str(),
        excluded_locus: excluded_locus(&l.sys, &selected),
    };
    let mut text = String::new();
    let _ = writeln!(text, "degree bound: {degree}");
    let _ = writeln!(text, "dimension of the v part: {}", r.dimension);
    let _ = writeln!(text, "integrals found: {}", r.found.len());
    for (i, f) in r.found.iter().enumerate() {
        let mark = if r.selected.contains(&i) { "*" } else { " " };
        let _ = writeln!(text, " {mark} {}  [{}]", f.h, f.provenance.as_str());
    }
    for f in &r.rejected {
        let _ = writeln!(text, "rejected: {}  residual: {}", f.h, f.residual);
    }
    let _ = writeln!(text, "w-independent selected: {}", r.selected.len());
    let _ = writeln!(text, "fiber degree: {}", fiber_degree_text(r.fiber_degree));
    if !body.excluded_locus.is_empty() {
        let _ = writeln!(text, "excluded locus: {}", body.excluded_locus.join(", "));
    }
    let _ = writeln!(text, "verdict: {}", body.verdict);
    Ok(Rendered { code: EXIT_OK, json: to_json(&body), text })
}

/// `name=value` pairs; values are decimals or constant expressions such as `1/2`.
fn initial_point(l: &Loaded, init: &str) -> Run<Vec<f64>> {
    let reg = l.sys.registry();
    let mut point: Vec<Option<f64>> = vec![None; reg.len()];
    point[l.sys.time()] = Some(0.0);
    for pair in init.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) =
            pair.split_once('=').ok_or_else(|| usage(format!("--init: expected name=value, got `{pair}`")))?;
        let (name, value) = (name.trim(), value.trim());
        let v = reg.lookup(name).map_err(|e| in_argument("--init", pair, &e))?;
        let x = match value.parse::<f64>() {
            Ok(x) => x,
            Err(_) => {
                let e = parse_expression(value, reg).map_err(|e| in_argument("--init", pair, &e))?;
                if !e.is_constant() {
                    return Err(usage(format!("--init: `{value}` is not a number")));
                }
                e.eval_f64(&vec![0.0; reg.len()])
            }
        };
        point[v] = Some(x);
    }
    let missing: Vec<&str> = (0..reg.len()).filter(|&v| point[v].is_none()).map(|v| reg.name(v)).collect();
    if !missing.is_empty() {
        return Err(usage(format!("--init: missing values for {}", missing.join(", "))));
    }
    Ok(point.into_iter().map(|x| x.expect("checked")).collect())
}

fn simulate_cmd(
    l: &Loaded,
    init: &str,
    t_end: f64,
    step: f64,
    csv: Option<&PathBuf>,
    tol: f64,
    c: &Candidates,
) -> Run<Rendered> {
    #[derive(Serialize)]
    struct ConstancyOut {
        h: String,
        value: f64,
        max_drift: f64,
        pass: bool,
    }
    #[derive(Serialize)]
    struct Body {
        method: &'static str,
        step: f64,
        t_end: f64,
        samples: usize,
        final_point: Map<String, Value>,
        max_ideal_residual: f64,
        tolerance: f64,
        constancy: Vec<ConstancyOut>,
    }
    let point = initial_point(l, init)?;
    let hs = l.candidates(c)?;
    let traj = integrate_flow(&l.sys, &point, t_end, step).map_err(|e| l.fail(e))?;
    if let Some(path) = csv {
        std::fs::write(path, traj.to_csv()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let mut constancy = Vec::new();
    for h in &hs {
        let c = check_constancy(h, &traj, tol).map_err(|e| l.fail(e))?;
        constancy.push(ConstancyOut { h: h.to_string(), value: c.value, max_drift: c.max_drift, pass: c.pass });
    }
    let final_point: Map<String, Value> =
        traj.names.iter().cloned().zip(traj.last().iter().map(|&x| Value::from(x))).collect();
    let body = Body {
        method: traj.method,
        step,
        t_end,
        samples: traj.samples.len(),
        max_ideal_residual: max_ideal_residual(&l.sys, &traj),
        final_point,
        tolerance: tol,
        constancy,
    };
    let mut text = String::new();
    let _ = writeln!(text, "{} steps of {} with step {step}", body.samples - 1, body.method);
    let fin: Vec<String> = traj.names.iter().zip(traj.last()).map(|(n, x)| format!("{n} = {x:.12e}")).collect();
    let _ = writeln!(text, "final: {}", fin.join(", "));
    let _ = writeln!(text, "max ideal residual: {:.3e}", body.max_ideal_residual);
    for c in &body.constancy {
        let status = if c.pass { "constant" } else { "NOT constant" };
        let _ = writeln!(text, "{}: value {:.12e}, drift {:.3e}, {status}", c.h, c.value, c.max_drift);
    }
    let code = if body.constancy.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Rendered { code, json: to_json(&body), text })
}
