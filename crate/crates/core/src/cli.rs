//! Command-line front end: problem files, solves, condition checks.
//!
//! Problem files are JSON with every number written as a decimal string so
//! nothing passes through a binary float on the way in or out.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::conditions::{
    check, find_constants, verify_initial_ball, Constants, Theorem, TheoremReport,
};
use crate::numeric::{format_scalar, format_trimmed, parse_scalar, PrecisionContext, Scalar};
use crate::polynomials::{
    expand_factored, AlgebraicPoly, ExpPoly, FactoredSpec, Family, Polynomial, RootFunction,
    TrigPoly,
};
use crate::solver::{estimate_order, solve, OrderError, SolveConfig, SolveResult, SolveStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_UNSATISFIED: i32 = 4;
pub const EXIT_INSUFFICIENT: i32 = 5;

const DEFAULT_TABLE_DIGITS: u32 = 18;
/// Fractional digits for slopes and condition-report numbers.
const REPORT_DIGITS: u32 = 12;

#[derive(Debug, Parser)]
#[command(
    name = "multiroots",
    version,
    about = "Simultaneous refinement of multiple polynomial roots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the iteration and print the iterate table.
    Solve {
        input: PathBuf,
        /// Fractional digits in printed values.
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        tolerance: Option<String>,
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
    },
    /// Evaluate the sufficient convergence conditions at the exact roots.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        theorem: TheoremChoice,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        xi: Option<String>,
        /// Search a grid for feasible constants instead of using --c/--q/--xi.
        #[arg(long)]
        search: bool,
    },
    /// Print the coefficient form of a factored problem.
    Expand { input: PathBuf },
    /// Solve, then fit the convergence order against the exact roots.
    Order { input: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremChoice {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Auto,
}

/// On-disk problem description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub family: Family,
    pub representation: Representation,
    #[serde(default)]
    pub multiplicities: Option<Vec<u32>>,
    pub initial: Vec<String>,
    #[serde(default = "default_precision")]
    pub precision_digits: u32,
    #[serde(default = "default_tolerance")]
    pub tolerance: String,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_precision() -> u32 {
    30
}

fn default_tolerance() -> String {
    "1e-20".to_string()
}

fn default_max_iterations() -> usize {
    50
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Representation {
    Coefficients(Coefficients),
    Factored(Factored),
}

/// A plain list for algebraic polynomials (highest degree first), or the
/// harmonic coefficients `a0/2 + sum (a_l f(lx) + b_l g(lx))`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Coefficients {
    List(Vec<String>),
    Harmonics(Harmonics),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Harmonics {
    pub a0: String,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factored {
    pub roots: Vec<String>,
    pub multiplicities: Vec<u32>,
    #[serde(default)]
    pub scale: Option<String>,
}

/// Machine-readable solve output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub status: String,
    pub roots: Vec<String>,
    pub iterations_used: usize,
    pub order_estimate: Option<String>,
    pub table: Vec<TableRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem_reports: Option<Vec<ReportJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub k: usize,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub theorem: u8,
    pub applicable: bool,
    pub d: Option<String>,
    pub c: String,
    pub q: String,
    pub xi: Option<String>,
    pub derived_constants: BTreeMap<String, String>,
    pub rows: Vec<RowJson>,
    pub satisfied: bool,
    pub initial_ball_radius: String,
    pub initial_in_ball: Vec<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    pub label: String,
    pub root: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

/// A rejected input, tagged with the field or flag at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    fn new(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

/// The function whose roots are refined.
#[derive(Debug, Clone)]
pub enum Body {
    Coefficients(Polynomial),
    Factored(FactoredSpec),
}

impl RootFunction for Body {
    fn family(&self) -> Family {
        match self {
            Body::Coefficients(p) => p.family(),
            Body::Factored(s) => s.family(),
        }
    }

    fn root_count(&self) -> usize {
        match self {
            Body::Coefficients(p) => p.root_count(),
            Body::Factored(s) => s.root_count(),
        }
    }

    fn eval_with_derivative(&self, x: &Scalar) -> (Scalar, Scalar) {
        match self {
            Body::Coefficients(p) => p.eval_with_derivative(x),
            Body::Factored(s) => s.eval_with_derivative(x),
        }
    }
}

/// A validated problem with every number parsed at the file precision.
#[derive(Debug, Clone)]
pub struct Problem {
    pub family: Family,
    pub ctx: PrecisionContext,
    pub body: Body,
    pub multiplicities: Vec<u32>,
    pub initial: Vec<Scalar>,
    /// The initial values as written in the file.
    pub initial_text: Vec<String>,
    pub tolerance: Scalar,
    pub max_iterations: usize,
}

impl Problem {
    pub fn factored(&self) -> Option<&FactoredSpec> {
        match &self.body {
            Body::Factored(s) => Some(s),
            Body::Coefficients(_) => None,
        }
    }

    pub fn config(&self) -> SolveConfig {
        SolveConfig::new(self.ctx)
            .with_tolerance(self.tolerance.clone())
            .with_max_iterations(self.max_iterations)
    }
}

fn parse_field(
    text: &str,
    field: impl Into<String>,
    ctx: &PrecisionContext,
) -> Result<Scalar, InputError> {
    parse_scalar(text, ctx).map_err(|e| InputError::new(field, e))
}

fn parse_list(
    texts: &[String],
    field: &str,
    ctx: &PrecisionContext,
) -> Result<Vec<Scalar>, InputError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_field(t, format!("{field}[{i}]"), ctx))
        .collect()
}

/// Parses JSON text into a [`ProblemFile`], naming the offending path on failure.
pub fn parse_problem_json(text: &str) -> Result<ProblemFile, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." {
            "problem file".to_string()
        } else {
            path
        };
        InputError::new(field, e.into_inner())
    })
}

impl ProblemFile {
    pub fn validate(&self) -> Result<Problem, InputError> {
        let ctx = PrecisionContext::new(self.precision_digits)
            .map_err(|e| InputError::new("precision_digits", e))?;
        let (body, multiplicities) = match &self.representation {
            Representation::Factored(f) => {
                if let Some(top) = &self.multiplicities {
                    if top != &f.multiplicities {
                        return Err(InputError::new(
                            "multiplicities",
                            "must match representation.factored.multiplicities",
                        ));
                    }
                }
                let roots = parse_list(&f.roots, "representation.factored.roots", &ctx)?;
                let scale = match &f.scale {
                    Some(s) => parse_field(s, "representation.factored.scale", &ctx)?,
                    None => ctx.one(),
                };
                let spec = FactoredSpec::new(self.family, roots, f.multiplicities.clone(), scale)
                    .map_err(|e| InputError::new("representation.factored", e))?;
                (Body::Factored(spec), f.multiplicities.clone())
            }
            Representation::Coefficients(c) => {
                let mults = self.multiplicities.clone().ok_or_else(|| {
                    InputError::new(
                        "multiplicities",
                        "required when the representation is coefficients",
                    )
                })?;
                let field = "representation.coefficients";
                let poly = match (self.family, c) {
                    (Family::Algebraic, Coefficients::List(list)) => {
                        let coeffs = parse_list(list, field, &ctx)?;
                        Polynomial::Algebraic(
                            AlgebraicPoly::new(coeffs).map_err(|e| InputError::new(field, e))?,
                        )
                    }
                    (Family::Trigonometric | Family::Exponential, Coefficients::Harmonics(h)) => {
                        let a0 = parse_field(&h.a0, format!("{field}.a0"), &ctx)?;
                        let a = parse_list(&h.a, &format!("{field}.a"), &ctx)?;
                        let b = parse_list(&h.b, &format!("{field}.b"), &ctx)?;
                        if self.family == Family::Trigonometric {
                            Polynomial::Trigonometric(
                                TrigPoly::new(a0, a, b).map_err(|e| InputError::new(field, e))?,
                            )
                        } else {
                            Polynomial::Exponential(
                                ExpPoly::new(a0, a, b).map_err(|e| InputError::new(field, e))?,
                            )
                        }
                    }
                    (Family::Algebraic, Coefficients::Harmonics(_)) => {
                        return Err(InputError::new(
                            field,
                            "algebraic coefficients must be a list",
                        ));
                    }
                    (_, Coefficients::List(_)) => {
                        return Err(InputError::new(
                            field,
                            format!("{} coefficients need a0, a and b", self.family),
                        ));
                    }
                };
                (Body::Coefficients(poly), mults)
            }
        };
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(InputError::new(
                format!("multiplicities[{i}]"),
                "must be at least 1",
            ));
        }
        if self.initial.len() != multiplicities.len() {
            return Err(InputError::new(
                "initial",
                format!(
                    "has {} values but there are {} multiplicities",
                    self.initial.len(),
                    multiplicities.len()
                ),
            ));
        }
        let total: usize = multiplicities.iter().map(|&m| m as usize).sum();
        if total != body.root_count() {
            return Err(InputError::new(
                "multiplicities",
                format!(
                    "sum to {total} but the polynomial has {} roots",
                    body.root_count()
                ),
            ));
        }
        let initial = parse_list(&self.initial, "initial", &ctx)?;
        let tolerance = parse_field(&self.tolerance, "tolerance", &ctx)?;
        if tolerance.is_sign_negative() || tolerance.is_zero() {
            return Err(InputError::new("tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(InputError::new("max_iterations", "must be at least 1"));
        }
        Ok(Problem {
            family: self.family,
            ctx,
            body,
            multiplicities,
            initial,
            initial_text: self.initial.clone(),
            tolerance,
            max_iterations: self.max_iterations,
        })
    }
}

/// Reads, parses and validates a problem file.
pub fn load_problem(path: &Path) -> Result<Problem, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new(path.display().to_string(), e))?;
    parse_problem_json(&text)?.validate()
}

/// Runs the CLI with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve {
            input,
            digits,
            json,
            table: _,
            tolerance,
            max_iter,
        } => cmd_solve(
            &input,
            digits,
            json,
            tolerance.as_deref(),
            max_iter,
            out,
            err,
        ),
        Command::Check {
            input,
            theorem,
            c,
            q,
            xi,
            search,
        } => cmd_check(
            &input,
            theorem,
            c.as_deref(),
            q.as_deref(),
            xi.as_deref(),
            search,
            out,
            err,
        ),
        Command::Expand { input } => cmd_expand(&input, out),
        Command::Order { input } => cmd_order(&input, out, err),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

enum Failure {
    Input(InputError),
    Io(std::io::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn fmt_value(x: &Scalar, digits: u32, ctx: &PrecisionContext) -> Result<String, InputError> {
    format_scalar(x, digits, ctx).map_err(|e| InputError::new("value", e))
}

fn fmt_report(x: &Scalar) -> String {
    format_trimmed(x, REPORT_DIGITS).unwrap_or_else(|_| "nan".to_string())
}

/// Table rows as strings; row 0 repeats the initial values verbatim.
fn table_rows(
    problem: &Problem,
    result: &SolveResult,
    digits: u32,
) -> Result<Vec<TableRow>, InputError> {
    result
        .trace
        .rows
        .iter()
        .map(|row| {
            let values = if row.k == 0 {
                problem.initial_text.clone()
            } else {
                row.values
                    .iter()
                    .map(|v| fmt_value(v, digits, &problem.ctx))
                    .collect::<Result<_, _>>()?
            };
            Ok(TableRow { k: row.k, values })
        })
        .collect()
}

/// Builds the JSON result for a finished solve.
pub fn result_file(
    problem: &Problem,
    result: &SolveResult,
    digits: u32,
    theorem_reports: Option<Vec<ReportJson>>,
) -> Result<ResultFile, InputError> {
    Ok(ResultFile {
        status: result.status.as_str().to_string(),
        roots: result
            .roots
            .iter()
            .map(|v| fmt_value(v, digits, &problem.ctx))
            .collect::<Result<_, _>>()?,
        iterations_used: result.iterations_used,
        order_estimate: result.order_estimate.as_ref().map(fmt_report),
        table: table_rows(problem, result, digits)?,
        theorem_reports,
    })
}

fn report_json(report: &TheoremReport, initial_in_ball: Vec<bool>) -> ReportJson {
    ReportJson {
        theorem: report.theorem.number(),
        applicable: report.applicable,
        d: report.d.as_ref().map(fmt_report),
        c: fmt_report(&report.c),
        q: fmt_report(&report.q),
        xi: report.xi.as_ref().map(fmt_report),
        derived_constants: report
            .derived_constants
            .iter()
            .map(|(k, v)| (k.clone(), fmt_report(v)))
            .collect(),
        rows: report
            .rows
            .iter()
            .map(|r| RowJson {
                label: r.label.clone(),
                root: r.root,
                lhs: fmt_report(&r.lhs),
                rhs: fmt_report(&r.rhs),
                passed: r.passed,
            })
            .collect(),
        satisfied: report.satisfied,
        initial_ball_radius: fmt_report(&report.initial_ball_radius),
        initial_in_ball,
        notes: report.notes.iter().map(|n| n.to_string()).collect(),
    }
}

/// Searched-constant report for a factored problem, if any constants are feasible.
fn searched_report(problem: &Problem, spec: &FactoredSpec) -> Option<ReportJson> {
    let theorem = Theorem::for_family(problem.family);
    let n = spec.degree() as u32;
    let constants = find_constants(theorem, spec.roots(), spec.multiplicities(), n)?;
    let report = check(theorem, spec.roots(), spec.multiplicities(), n, &constants)?;
    let in_ball = verify_initial_ball(&problem.initial, spec.roots(), &constants.c, &constants.q);
    Some(report_json(&report, in_ball))
}

fn status_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged => EXIT_OK,
        _ => EXIT_NOT_CONVERGED,
    }
}

fn describe_failure(result: &SolveResult) -> String {
    match &result.failure {
        Some(f) => format!("{} at root {}", result.status.as_str(), f.index() + 1),
        None => result.status.as_str().to_string(),
    }
}

fn run_solve(problem: &Problem) -> Result<SolveResult, InputError> {
    solve(
        &problem.body,
        &problem.multiplicities,
        &problem.initial,
        &problem.config(),
    )
    .map_err(|e| InputError::new("problem", e))
}

fn cmd_solve(
    input: &Path,
    digits: Option<u32>,
    json: bool,
    tolerance: Option<&str>,
    max_iter: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut problem = load_problem(input)?;
    if let Some(t) = tolerance {
        let t = parse_field(t, "--tolerance", &problem.ctx)?;
        if t.is_sign_negative() || t.is_zero() {
            return Err(InputError::new("--tolerance", "must be positive").into());
        }
        problem.tolerance = t;
    }
    if let Some(k) = max_iter {
        if k == 0 {
            return Err(InputError::new("--max-iter", "must be at least 1").into());
        }
        problem.max_iterations = k;
    }
    let digits = digits.unwrap_or(DEFAULT_TABLE_DIGITS);
    if digits > problem.ctx.decimal_digits() {
        return Err(InputError::new(
            "--digits",
            format!(
                "{digits} exceeds precision_digits {}",
                problem.ctx.decimal_digits()
            ),
        )
        .into());
    }
    let result = run_solve(&problem)?;
    if json {
        let reports = problem
            .factored()
            .and_then(|spec| searched_report(&problem, spec))
            .map(|r| vec![r]);
        let file = result_file(&problem, &result, digits, reports)?;
        let text = serde_json::to_string_pretty(&file).map_err(|e| InputError::new("output", e))?;
        writeln!(out, "{text}")?;
    } else {
        let rows = table_rows(&problem, &result, digits)?;
        let header: Vec<String> = (1..=problem.multiplicities.len())
            .map(|i| format!("x_{i}[k]"))
            .collect();
        writeln!(out, "k  {}", header.join("  "))?;
        for row in rows {
            writeln!(out, "{}  {}", row.k, row.values.join("  "))?;
        }
    }
    if result.status == SolveStatus::Converged {
        writeln!(err, "converged after {} iterations", result.iterations_used)?;
    } else {
        writeln!(err, "stopped: {}", describe_failure(&result))?;
    }
    Ok(status_code(result.status))
}

fn resolve_theorem(choice: TheoremChoice, family: Family) -> Result<Theorem, InputError> {
    let natural = Theorem::for_family(family);
    let chosen = match choice {
        TheoremChoice::Auto => return Ok(natural),
        TheoremChoice::One => Theorem::T1,
        TheoremChoice::Two => Theorem::T2,
        TheoremChoice::Three => Theorem::T3,
    };
    if chosen != natural {
        return Err(InputError::new(
            "--theorem",
            format!(
                "theorem {} does not apply to a {family} problem",
                chosen.number()
            ),
        ));
    }
    Ok(chosen)
}

fn require_factored(problem: &Problem) -> Result<&FactoredSpec, InputError> {
    problem.factored().ok_or_else(|| {
        InputError::new(
            "representation",
            "exact roots required (use the factored form)",
        )
    })
}

fn print_report(
    out: &mut dyn Write,
    report: &TheoremReport,
    in_ball: &[bool],
) -> std::io::Result<()> {
    writeln!(out, "{}", report.theorem)?;
    if !report.applicable {
        writeln!(out, "not applicable")?;
    }
    if let Some(d) = &report.d {
        writeln!(out, "d = {}", fmt_report(d))?;
    }
    write!(
        out,
        "c = {}  q = {}",
        fmt_report(&report.c),
        fmt_report(&report.q)
    )?;
    if let Some(xi) = &report.xi {
        write!(out, "  xi = {}", fmt_report(xi))?;
    }
    writeln!(out)?;
    for (name, value) in &report.derived_constants {
        if name != "xi" {
            writeln!(out, "{name} = {}", fmt_report(value))?;
        }
    }
    for row in &report.rows {
        writeln!(
            out,
            "[{}] {}: {} < {}",
            if row.passed { "pass" } else { "FAIL" },
            row.label,
            fmt_report(&row.lhs),
            fmt_report(&row.rhs)
        )?;
    }
    writeln!(
        out,
        "ball radius c*q = {}",
        fmt_report(&report.initial_ball_radius)
    )?;
    let marks: Vec<&str> = in_ball
        .iter()
        .map(|&b| if b { "in" } else { "out" })
        .collect();
    writeln!(out, "initial values in ball: {}", marks.join(" "))?;
    for note in &report.notes {
        writeln!(out, "note: {note}")?;
    }
    writeln!(
        out,
        "{}",
        if report.satisfied {
            "satisfied"
        } else {
            "not satisfied"
        }
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    input: &Path,
    choice: TheoremChoice,
    c: Option<&str>,
    q: Option<&str>,
    xi: Option<&str>,
    search: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let problem = load_problem(input)?;
    let spec = require_factored(&problem)?;
    let theorem = resolve_theorem(choice, problem.family)?;
    let n = spec.degree() as u32;
    let constants = if search {
        match find_constants(theorem, spec.roots(), spec.multiplicities(), n) {
            Some(found) => found,
            None => {
                writeln!(out, "{theorem}: no feasible constants on the search grid")?;
                return Ok(EXIT_UNSATISFIED);
            }
        }
    } else {
        let need = |value: Option<&str>, flag: &str| {
            value
                .ok_or_else(|| InputError::new(flag, "required unless --search is given"))
                .and_then(|v| parse_field(v, flag, &problem.ctx))
        };
        let xi = match theorem {
            Theorem::T2 => Some(need(xi, "--xi")?),
            _ => None,
        };
        Constants {
            c: need(c, "--c")?,
            q: need(q, "--q")?,
            xi,
        }
    };
    let report = check(theorem, spec.roots(), spec.multiplicities(), n, &constants)
        .ok_or_else(|| InputError::new("--xi", "required for theorem 2"))?;
    let in_ball = verify_initial_ball(&problem.initial, spec.roots(), &constants.c, &constants.q);
    print_report(out, &report, &in_ball)?;
    if !report.applicable {
        writeln!(err, "a single root leaves the minimum gap undefined")?;
    }
    Ok(if report.satisfied {
        EXIT_OK
    } else {
        EXIT_UNSATISFIED
    })
}

fn cmd_expand(input: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let problem = load_problem(input)?;
    let spec = require_factored(&problem)?;
    let poly = expand_factored(spec).map_err(|e| InputError::new("representation.factored", e))?;
    let digits = problem.ctx.decimal_digits();
    let show = |x: &Scalar| format_trimmed(x, digits).map_err(|e| InputError::new("value", e));
    match &poly {
        Polynomial::Algebraic(p) => {
            let coeffs: Vec<String> = p.coeffs().iter().map(show).collect::<Result<_, _>>()?;
            writeln!(out, "{}", coeffs.join(" "))?;
        }
        Polynomial::Trigonometric(t) => write_harmonics(out, t.a0(), t.a(), t.b(), &show)?,
        Polynomial::Exponential(e) => write_harmonics(out, e.a0(), e.a(), e.b(), &show)?,
    }
    Ok(EXIT_OK)
}

fn write_harmonics(
    out: &mut dyn Write,
    a0: &Scalar,
    a: &[Scalar],
    b: &[Scalar],
    show: &dyn Fn(&Scalar) -> Result<String, InputError>,
) -> Result<(), Failure> {
    writeln!(out, "a0 = {}", show(a0)?)?;
    for (l, (al, bl)) in a.iter().zip(b).enumerate() {
        writeln!(out, "a{} = {}", l + 1, show(al)?)?;
        writeln!(out, "b{} = {}", l + 1, show(bl)?)?;
    }
    Ok(())
}

fn cmd_order(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let problem = load_problem(input)?;
    let spec = require_factored(&problem)?;
    let result = run_solve(&problem)?;
    match estimate_order(&result.trace, Some(spec.roots())) {
        Ok(slope) => {
            writeln!(out, "order = {}", fmt_report(&slope))?;
            if result.status != SolveStatus::Converged {
                writeln!(err, "stopped: {}", describe_failure(&result))?;
            }
            Ok(status_code(result.status))
        }
        Err(OrderError::InsufficientData { usable }) => {
            writeln!(
                err,
                "insufficient data: {usable} usable error pairs, at least 2 needed"
            )?;
            Ok(EXIT_INSUFFICIENT)
        }
        Err(e) => Err(InputError::new("initial", e).into()),
    }
}
