//! Batch front end for the rbcalc library: compute named expansions to a
//! requested order, run the seeded verification suites, and emit plain
//! text, JSON, or LaTeX.
//!
//! Exit status: 0 when every identity computed by the command holds;
//! 1 when an identity fails (the first nonzero residual is printed);
//! 2 on usage errors (unknown verb, instance, or malformed input);
//! 3 when a requested order exceeds a documented cap.
//!
//! The same command with the same seed produces byte-identical reports:
//! all randomness is seeded, all arithmetic is exact, and every emission
//! path sorts terms canonically.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rbcalc::algebra::{lincomb_to_json, rat_parse, BasisElem, LinComb};
use rbcalc::error::Error;
use rbcalc::permutations::bch_element;
use rbcalc::rota_baxter::{
    atkinson_solve, bogoliubov, bohnenblust_spitzer, prelie_magnus, series_exp, series_mul,
    series_one, spitzer_check, FreeRb, LambdaSeries, LaurentMinimalSubtraction,
    PolynomialIntegration, RbAlgebra, SequenceSummation, TriangularProjector,
};
use rbcalc::trees::rooted::magnus_element;
use rbcalc::verify;
use rbcalc::words::{free_shuffle_basis, quasi_shuffle, shuffle, Alphabet};

const BCH_CAP: usize = 8;
const MAGNUS_CAP: usize = 6;
const SPITZER_CAP: usize = 6;
const ATKINSON_CAP: usize = 8;
const LAURENT_SERIES_CAP: usize = 6;
const FACTOR_CAP: usize = 7;
const TREE_CAP: usize = 5;
const COUNTERTERM_CAP: usize = 5;
const WORD_CAP: usize = 8;
const VERIFY_CAP: usize = 8;
const SIZE_CAP: usize = 8;

const LONG_ABOUT: &str = "\
Exact computations in the Hopf algebras of permutations, trees, and words, \
and in Rota-Baxter algebras of every weight.

Caps (exceeding one exits with status 3): bch order <= 8; magnus and \
spitzer cutoff <= 6; atkinson cutoff <= 8 (<= 6 on the Laurent instances, \
window limit); bogoliubov degree <= 5; bohnenblust factors <= 7; \
magnus-element tree degree <= 5; basis letters <= 6; shuffle and \
quasishuffle total letters <= 8; verify order <= 8.

Instances (--instance): summation (prefix sums of polynomial sequences, \
weight -1; --size = sequence length, default 6), triangular (matrix \
projection onto the upper triangle, weight 1; --size = dimension, default \
3), laurent-pole and laurent-regular (windowed Laurent series with pole- \
or regular-part projection, weight 1), integration (polynomial \
integration with matrix coefficients, weight 0; --size = dimension, \
default 2), free (free Rota-Baxter construction, weight -1; --size = \
entry count, default 4; word-degree cap follows --order).

Reports go to stdout, or to --output FILE; a relative FILE resolves \
inside $RBCALC_OUTPUT_DIR when set. Identical command and seed give \
byte-identical reports.";

#[derive(Parser)]
#[command(name = "rbcalc", version, about = "Exact Hopf-algebra and Rota-Baxter calculator", long_about = LONG_ABOUT)]
struct Cli {
    /// Output format for the report
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout; relative paths
    /// resolve inside $RBCALC_OUTPUT_DIR
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct InstanceArgs {
    /// Operator instance: summation, triangular, laurent-pole,
    /// laurent-regular, integration, or free
    #[arg(long, default_value = "triangular")]
    instance: String,
    /// Instance size (sequence length, matrix dimension, or entry count)
    #[arg(long)]
    size: Option<usize>,
}

#[derive(Subcommand)]
enum Verb {
    /// Logarithm of the identity series in the descent algebra (order <= 8)
    Bch {
        /// Degree of the emitted element
        #[arg(long)]
        order: usize,
    },
    /// Magnus expansion of a sampled operator argument, cross-checked
    /// against the recursive factorization (order <= 6)
    Magnus {
        /// Series cutoff
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Seed for the sampled argument
        #[arg(long)]
        seed: u64,
    },
    /// Flow expansion in the rooted-tree model (order <= 5)
    MagnusElement {
        /// Tree degree cutoff
        #[arg(long)]
        order: usize,
    },
    /// Shuffle product of two words; letters are comma-separated or
    /// single characters (total letters <= 8)
    Shuffle { left: String, right: String },
    /// Quasi-shuffle product over the graded letters z1..z5
    /// (total letters <= 8)
    Quasishuffle {
        left: String,
        right: String,
        /// Weight multiplying merged letters, as an integer or p/q
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        theta: String,
    },
    /// Fluctuation identity on a commutative instance: the logarithm of
    /// the left factorization series matches the weighted power sum
    /// (order <= 6)
    Spitzer {
        /// Series cutoff
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Seed for the sampled argument
        #[arg(long)]
        seed: u64,
    },
    /// Symmetrized operator identity over all permutations of the
    /// factors (order = factor count <= 7)
    Bohnenblust {
        /// Number of sampled factors
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Seed for the sampled factors
        #[arg(long)]
        seed: u64,
    },
    /// Recursive factorization series and their inverses (order <= 8,
    /// <= 6 on Laurent instances)
    Atkinson {
        /// Series cutoff
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Seed for the sampled argument
        #[arg(long)]
        seed: u64,
    },
    /// Counterterm recursion on the pole-subtraction instance
    /// (order <= 5)
    Bogoliubov {
        /// Number of graded components
        #[arg(long)]
        order: usize,
        /// Seed for the sampled components
        #[arg(long)]
        seed: u64,
    },
    /// Run a named verification suite, or all of them (order <= 8)
    Verify {
        /// Suite name or "all"
        suite: String,
        /// Degree and cutoff budget for the checks
        #[arg(long)]
        order: usize,
        /// Seed for every random draw
        #[arg(long)]
        seed: u64,
    },
    /// Free half-shuffle grammar on one letter with its rank certificate
    /// (letters <= 6)
    Basis {
        /// Number of letters in the evaluated expressions
        #[arg(long)]
        letters: usize,
    },
}

enum Failure {
    Usage(String),
    Cap(String),
}

impl Failure {
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Cap(m) => m,
        }
    }

    fn code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Cap(_) => ExitCode::from(3),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CutoffExceeded(m) => Failure::Cap(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Element {
    label: String,
    text: String,
    json: Value,
    latex: String,
}

struct CheckLine {
    name: String,
    passed: bool,
    detail: String,
}

struct Output {
    command: &'static str,
    params: Vec<(&'static str, String)>,
    elements: Vec<Element>,
    checks: Vec<CheckLine>,
    suites: Vec<verify::Report>,
}

impl Output {
    fn new(command: &'static str) -> Self {
        Output {
            command,
            params: Vec::new(),
            elements: Vec::new(),
            checks: Vec::new(),
            suites: Vec::new(),
        }
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.suites.iter().all(|s| s.passed())
    }

    fn first_failure(&self) -> Option<(String, String)> {
        for c in &self.checks {
            if !c.passed {
                return Some((c.name.clone(), c.detail.clone()));
            }
        }
        for s in &self.suites {
            if let Some(c) = s.first_failure() {
                return Some((format!("{}: {}", s.suite, c.name), c.detail.clone()));
            }
        }
        None
    }

    fn header(&self) -> String {
        if self.params.is_empty() {
            return format!("rbcalc {}", self.command);
        }
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("rbcalc {} ({})", self.command, params.join(", "))
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => self.render_json(),
            Format::Latex => self.render_latex(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header());
        for e in &self.elements {
            if e.text.contains('\n') {
                let _ = writeln!(out, "{}:", e.label);
                let _ = writeln!(out, "{}", e.text);
            } else {
                let _ = writeln!(out, "{}: {}", e.label, e.text);
            }
        }
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} {} -- {}", c.name, c.detail);
        }
        for s in &self.suites {
            out.push_str(&s.render());
        }
        out
    }

    fn render_json(&self) -> String {
        let params: Value = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect::<serde_json::Map<String, Value>>()
            .into();
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|e| json!({ "label": e.label, "value": e.json }))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let checks: Vec<Value> = s
                    .checks
                    .iter()
                    .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                    .collect();
                json!({
                    "suite": s.suite,
                    "order": s.order,
                    "seed": s.seed,
                    "passed": s.passed(),
                    "checks": checks,
                })
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "parameters": params,
            "elements": elements,
            "checks": checks,
            "suites": suites,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    fn render_latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% {}", self.header());
        if !self.elements.is_empty() {
            let _ = writeln!(out, "\\begin{{align*}}");
            for e in &self.elements {
                let _ = writeln!(
                    out,
                    "\\text{{{}}} &= {} \\\\",
                    latex_escape(&e.label),
                    e.latex
                );
            }
            let _ = writeln!(out, "\\end{{align*}}");
        }
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            let _ = writeln!(out, "% {mark} {} -- {}", c.name, c.detail);
        }
        for s in &self.suites {
            for line in s.render().lines() {
                let _ = writeln!(out, "% {line}");
            }
        }
        out
    }
}

fn latex_escape(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\textbackslash "),
            '{' => out.push_str("\\{"),
            '}' => out.push_str("\\}"),
            '$' => out.push_str("\\$"),
            '&' => out.push_str("\\&"),
            '#' => out.push_str("\\#"),
            '%' => out.push_str("\\%"),
            '~' => out.push_str("\\textasciitilde "),
            '^' => out.push_str("\\^{}"),
            '_' => out.push_str("\\_"),
            other => out.push(other),
        }
    }
    out
}

fn elem_lincomb<B: BasisElem>(label: impl Into<String>, x: &LinComb<B>) -> Element {
    Element {
        label: label.into(),
        text: x.render(),
        json: lincomb_to_json(x),
        latex: x.latex(),
    }
}

fn elem_display(label: impl Into<String>, v: &impl Display) -> Element {
    let text = v.to_string();
    let latex = format!("\\text{{{}}}", latex_escape(&text));
    Element {
        label: label.into(),
        text,
        json: Value::String(v.to_string()),
        latex,
    }
}

fn elem_lambda<E: Display>(label: impl Into<String>, s: &LambdaSeries<E>) -> Element {
    let orders: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
    let text = orders
        .iter()
        .enumerate()
        .map(|(k, c)| format!("  lambda^{k}: {c}"))
        .collect::<Vec<_>>()
        .join("\n");
    let latex = orders
        .iter()
        .enumerate()
        .map(|(k, c)| format!("\\lambda^{{{k}}}\\colon \\text{{{}}}", latex_escape(c)))
        .collect::<Vec<_>>()
        .join(" \\\\ ");
    Element {
        label: label.into(),
        text,
        json: json!({ "cutoff": s.cutoff(), "orders": orders }),
        latex,
    }
}

fn check_cap(what: &str, value: usize, cap: usize) -> Result<(), Failure> {
    if value == 0 {
        return Err(Failure::Usage(format!("{what} must be at least 1")));
    }
    if value > cap {
        return Err(Failure::Cap(format!(
            "{what} {value} exceeds the supported cap of {cap}"
        )));
    }
    Ok(())
}

fn check_size(size: Option<usize>) -> Result<(), Failure> {
    if let Some(s) = size {
        if s == 0 || s > SIZE_CAP {
            return Err(Failure::Usage(format!(
                "--size must be between 1 and {SIZE_CAP}, got {s}"
            )));
        }
    }
    Ok(())
}

/// Per-instance series-cutoff cap: the Laurent window supports products
/// of sampled arguments only up to order six.
fn series_cap(instance: &str) -> usize {
    match instance {
        "laurent-pole" | "laurent-regular" => LAURENT_SERIES_CAP,
        _ => ATKINSON_CAP,
    }
}

/// Runs `$body` with `$inst` bound to the named instance. The free
/// construction ties its word-degree cap to the requested order so no
/// truncation loss can occur inside the computed series.
macro_rules! dispatch_instance {
    ($name:expr, $size:expr, $order:expr, |$inst:ident| $body:expr) => {
        match $name {
            "summation" => {
                let $inst = SequenceSummation::new($size.unwrap_or(6), 2);
                $body
            }
            "triangular" => {
                let $inst = TriangularProjector::new($size.unwrap_or(3));
                $body
            }
            "laurent-pole" => {
                let $inst = LaurentMinimalSubtraction::new(12, 12, true);
                $body
            }
            "laurent-regular" => {
                let $inst = LaurentMinimalSubtraction::new(12, 12, false);
                $body
            }
            "integration" => {
                let $inst = PolynomialIntegration::new($size.unwrap_or(2));
                $body
            }
            "free" => {
                let $inst = FreeRb::new($size.unwrap_or(4), $order.max(1));
                $body
            }
            other => {
                return Err(Failure::Usage(format!(
                    "unknown instance {other:?} (expected summation, triangular, \
                     laurent-pole, laurent-regular, integration, or free)"
                )))
            }
        }
    };
}

fn residual_free_check<A: RbAlgebra>(
    inst: &A,
    name: &str,
    series: &LambdaSeries<A::Elem>,
) -> CheckLine {
    for k in 0..=series.cutoff() {
        if !inst.is_zero(series.coeff(k)) {
            return CheckLine {
                name: name.to_string(),
                passed: false,
                detail: format!("order {k}: residual {}", series.coeff(k)),
            };
        }
    }
    CheckLine {
        name: name.to_string(),
        passed: true,
        detail: format!("orders 0..={} are residual-free", series.cutoff()),
    }
}

fn series_equal_check<A: RbAlgebra>(
    inst: &A,
    name: &str,
    lhs: &LambdaSeries<A::Elem>,
    rhs: &LambdaSeries<A::Elem>,
) -> CheckLine {
    let n = lhs.cutoff().min(rhs.cutoff());
    for k in 0..=n {
        if lhs.coeff(k) != rhs.coeff(k) {
            return CheckLine {
                name: name.to_string(),
                passed: false,
                detail: format!(
                    "order {k}: residual {}",
                    inst.sub(lhs.coeff(k), rhs.coeff(k))
                ),
            };
        }
    }
    CheckLine {
        name: name.to_string(),
        passed: true,
        detail: format!("orders 0..={n} agree"),
    }
}

/// Splits a word argument into letters: comma-separated when commas are
/// present, otherwise one letter per non-digit character with trailing
/// digits attached to it (so "z1z2" reads as z1, z2).
fn parse_letters(raw: &str) -> Result<Vec<String>, Failure> {
    if raw.contains(',') {
        let letters: Vec<String> = raw.split(',').map(str::to_string).collect();
        if letters.iter().any(String::is_empty) {
            return Err(Failure::Usage(format!("word {raw:?} has an empty letter")));
        }
        return Ok(letters);
    }
    let mut letters: Vec<String> = Vec::new();
    for ch in raw.chars() {
        if ch.is_ascii_digit() {
            match letters.last_mut() {
                Some(last) => last.push(ch),
                None => {
                    return Err(Failure::Usage(format!(
                        "word {raw:?} starts with a digit; separate letters with commas"
                    )))
                }
            }
        } else {
            letters.push(ch.to_string());
        }
    }
    if letters.is_empty() {
        return Err(Failure::Usage(format!("word {raw:?} is empty")));
    }
    Ok(letters)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.verb {
        Verb::Bch { order } => run_bch(*order),
        Verb::Magnus {
            order,
            instance,
            seed,
        } => run_magnus(*order, instance, *seed),
        Verb::MagnusElement { order } => run_magnus_element(*order),
        Verb::Shuffle { left, right } => run_shuffle(left, right),
        Verb::Quasishuffle { left, right, theta } => run_quasishuffle(left, right, theta),
        Verb::Spitzer {
            order,
            instance,
            seed,
        } => run_spitzer(*order, instance, *seed),
        Verb::Bohnenblust {
            order,
            instance,
            seed,
        } => run_bohnenblust(*order, instance, *seed),
        Verb::Atkinson {
            order,
            instance,
            seed,
        } => run_atkinson(*order, instance, *seed),
        Verb::Bogoliubov { order, seed } => run_bogoliubov(*order, *seed),
        Verb::Verify { suite, order, seed } => run_verify(suite, *order, *seed),
        Verb::Basis { letters } => run_basis(*letters),
    }
}

fn run_bch(order: usize) -> Result<Output, Failure> {
    check_cap("order", order, BCH_CAP)?;
    let element = bch_element(order)?;
    let mut out = Output::new("bch");
    out.params.push(("order", order.to_string()));
    out.elements
        .push(elem_lincomb(format!("bch element of degree {order}"), &element));
    Ok(out)
}

fn run_magnus(order: usize, args: &InstanceArgs, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, MAGNUS_CAP)?;
    check_size(args.size)?;
    dispatch_instance!(args.instance.as_str(), args.size, order, |inst| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = inst.sample(&mut rng);
        let omega = prelie_magnus(&inst, &x, order);
        let image = LambdaSeries::from_coeffs(
            omega.coeffs().iter().map(|e| inst.rb(e)).collect(),
        );
        let exhaled = series_exp(&inst, &image)?;
        let fac = atkinson_solve(&inst, &x, order)?;
        let mut out = Output::new("magnus");
        out.params.push(("order", order.to_string()));
        out.params.push(("instance", inst.name()));
        out.params.push(("seed", seed.to_string()));
        out.elements.push(elem_display("sampled argument", &x));
        out.elements.push(elem_lambda("magnus expansion", &omega));
        out.checks.push(series_equal_check(
            &inst,
            "exponential of the operator image equals the factorization series",
            &exhaled,
            &fac.ell,
        ));
        Ok(out)
    })
}

fn run_magnus_element(order: usize) -> Result<Output, Failure> {
    check_cap("order", order, TREE_CAP)?;
    let series = magnus_element(order)?;
    let mut out = Output::new("magnus-element");
    out.params.push(("order", order.to_string()));
    for d in 1..=order {
        out.elements
            .push(elem_lincomb(format!("degree {d}"), series.component(d)));
    }
    Ok(out)
}

fn run_shuffle(left: &str, right: &str) -> Result<Output, Failure> {
    let lu = parse_letters(left)?;
    let rv = parse_letters(right)?;
    check_cap("total letters", lu.len() + rv.len(), WORD_CAP)?;
    let universe: BTreeSet<&str> = lu.iter().chain(rv.iter()).map(String::as_str).collect();
    let names: Vec<&str> = universe.into_iter().collect();
    let alphabet = Alphabet::symbols(&names, rbcalc::algebra::rat_int(0))?;
    let u = alphabet.word(&lu.iter().map(String::as_str).collect::<Vec<_>>())?;
    let v = alphabet.word(&rv.iter().map(String::as_str).collect::<Vec<_>>())?;
    let product = shuffle(&u, &v);
    let mut out = Output::new("shuffle");
    out.params.push(("left", u.to_string()));
    out.params.push(("right", v.to_string()));
    out.elements.push(elem_lincomb("shuffle product", &product));
    Ok(out)
}

fn run_quasishuffle(left: &str, right: &str, theta: &str) -> Result<Output, Failure> {
    let lu = parse_letters(left)?;
    let rv = parse_letters(right)?;
    check_cap("total letters", lu.len() + rv.len(), WORD_CAP)?;
    let weight = rat_parse(theta)
        .ok_or_else(|| Failure::Usage(format!("--theta {theta:?} is not an integer or p/q")))?;
    let alphabet = Alphabet::harmonic(weight);
    let u = alphabet.word(&lu.iter().map(String::as_str).collect::<Vec<_>>())?;
    let v = alphabet.word(&rv.iter().map(String::as_str).collect::<Vec<_>>())?;
    let product = quasi_shuffle(&u, &v, &alphabet)?;
    let mut out = Output::new("quasishuffle");
    out.params.push(("left", u.to_string()));
    out.params.push(("right", v.to_string()));
    out.params.push(("theta", theta.to_string()));
    out.elements
        .push(elem_lincomb("quasi-shuffle product", &product));
    Ok(out)
}

fn run_spitzer(order: usize, args: &InstanceArgs, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, SPITZER_CAP)?;
    check_size(args.size)?;
    dispatch_instance!(args.instance.as_str(), args.size, order, |inst| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = inst.sample(&mut rng);
        let residual = spitzer_check(&inst, &x, order)?;
        let fac = atkinson_solve(&inst, &x, order)?;
        let mut out = Output::new("spitzer");
        out.params.push(("order", order.to_string()));
        out.params.push(("instance", inst.name()));
        out.params.push(("seed", seed.to_string()));
        out.elements.push(elem_display("sampled argument", &x));
        out.elements
            .push(elem_lambda("left factorization series", &fac.ell));
        out.checks.push(residual_free_check(
            &inst,
            "log of the factorization series equals the weighted power sum",
            &residual,
        ));
        Ok(out)
    })
}

fn run_bohnenblust(order: usize, args: &InstanceArgs, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, FACTOR_CAP)?;
    check_size(args.size)?;
    dispatch_instance!(args.instance.as_str(), args.size, order, |inst| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs: Vec<_> = (0..order).map(|_| inst.sample(&mut rng)).collect();
        let identity = bohnenblust_spitzer(&inst, &fs)?;
        let mut out = Output::new("bohnenblust");
        out.params.push(("order", order.to_string()));
        out.params.push(("instance", inst.name()));
        out.params.push(("seed", seed.to_string()));
        for (i, f) in fs.iter().enumerate() {
            out.elements
                .push(elem_display(format!("factor {}", i + 1), f));
        }
        out.elements
            .push(elem_display("symmetrized left side", &identity.lhs));
        out.elements
            .push(elem_display("cycle right side", &identity.rhs_noncommutative));
        let cycles_agree = identity.lhs == identity.rhs_noncommutative;
        out.checks.push(CheckLine {
            name: "cycle form agrees".to_string(),
            passed: cycles_agree,
            detail: if cycles_agree {
                format!("{order} factors symmetrized")
            } else {
                format!(
                    "residual {}",
                    inst.sub(&identity.lhs, &identity.rhs_noncommutative)
                )
            },
        });
        if let Some(rc) = &identity.rhs_commutative {
            out.elements
                .push(elem_display("set-partition right side", rc));
            let partitions_agree = &identity.lhs == rc;
            out.checks.push(CheckLine {
                name: "set-partition form agrees".to_string(),
                passed: partitions_agree,
                detail: if partitions_agree {
                    format!("{order} factors partitioned")
                } else {
                    format!("residual {}", inst.sub(&identity.lhs, rc))
                },
            });
        }
        Ok(out)
    })
}

fn run_atkinson(order: usize, args: &InstanceArgs, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, series_cap(&args.instance))?;
    check_size(args.size)?;
    dispatch_instance!(args.instance.as_str(), args.size, order, |inst| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = inst.sample(&mut rng);
        let fac = atkinson_solve(&inst, &x, order)?;
        let one = series_one(&inst, order)?;
        let mut out = Output::new("atkinson");
        out.params.push(("order", order.to_string()));
        out.params.push(("instance", inst.name()));
        out.params.push(("seed", seed.to_string()));
        out.elements.push(elem_display("sampled argument", &x));
        out.elements.push(elem_lambda("left series", &fac.ell));
        out.elements.push(elem_lambda("right series", &fac.r));
        out.elements
            .push(elem_lambda("left inverse", &fac.ell_inv));
        out.elements.push(elem_lambda("right inverse", &fac.r_inv));
        out.checks.push(series_equal_check(
            &inst,
            "left series times left inverse is one",
            &series_mul(&inst, &fac.ell, &fac.ell_inv),
            &one,
        ));
        out.checks.push(series_equal_check(
            &inst,
            "right series times right inverse is one",
            &series_mul(&inst, &fac.r, &fac.r_inv),
            &one,
        ));
        out.checks.push(residual_free_check(
            &inst,
            "inverse product recovers the linear factor",
            &fac.factorization_residual(&inst, &x)?,
        ));
        Ok(out)
    })
}

fn run_bogoliubov(order: usize, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, COUNTERTERM_CAP)?;
    let inst = LaurentMinimalSubtraction::new(12, 12, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<_> = (0..order).map(|_| inst.sample(&mut rng)).collect();
    let pair = bogoliubov(&inst, &xs)?;
    let mut out = Output::new("bogoliubov");
    out.params.push(("order", order.to_string()));
    out.params.push(("instance", inst.name()));
    out.params.push(("seed", seed.to_string()));
    for (i, x) in xs.iter().enumerate() {
        out.elements
            .push(elem_display(format!("component {}", i + 1), x));
    }
    out.elements.push(elem_lambda("counterterm series", &pair.f));
    out.elements
        .push(elem_lambda("inverse renormalized series", &pair.h_inv));
    let mut coeffs = vec![inst.one().expect("the Laurent carrier is unital")];
    for x in &xs {
        coeffs.push(inst.neg(x));
    }
    let one_minus_x = LambdaSeries::from_coeffs(coeffs);
    out.checks.push(series_equal_check(
        &inst,
        "counterterm series splits the argument multiplicatively",
        &series_mul(&inst, &pair.f, &one_minus_x),
        &pair.h_inv,
    ));
    let mut polar = CheckLine {
        name: "counterterms are purely polar".to_string(),
        passed: true,
        detail: format!("degrees 1..={order} checked"),
    };
    for k in 1..=order {
        let regular = inst.rb_tilde(pair.f.coeff(k));
        if !inst.is_zero(&regular) {
            polar.passed = false;
            polar.detail = format!("degree {k}: regular part {regular}");
            break;
        }
    }
    out.checks.push(polar);
    Ok(out)
}

fn run_verify(suite: &str, order: usize, seed: u64) -> Result<Output, Failure> {
    check_cap("order", order, VERIFY_CAP)?;
    let reports = if suite == "all" {
        verify::run_all(order, seed)?
    } else {
        vec![verify::run_suite(suite, order, seed)?]
    };
    let mut out = Output::new("verify");
    out.params.push(("suite", suite.to_string()));
    out.params.push(("order", order.to_string()));
    out.params.push(("seed", seed.to_string()));
    out.suites = reports;
    Ok(out)
}

fn run_basis(letters: usize) -> Result<Output, Failure> {
    if letters == 0 {
        return Err(Failure::Usage("--letters must be at least 1".to_string()));
    }
    let basis = free_shuffle_basis(letters)?;
    let lines: Vec<String> = basis
        .expressions
        .iter()
        .enumerate()
        .map(|(i, e)| format!("  {}: {e}", i + 1))
        .collect();
    let mut out = Output::new("basis");
    out.params.push(("letters", letters.to_string()));
    out.elements.push(Element {
        label: format!("grammar expressions on {letters} letters"),
        text: lines.join("\n"),
        json: Value::Array(
            basis
                .expressions
                .iter()
                .map(|e| Value::String(e.to_string()))
                .collect(),
        ),
        latex: basis
            .expressions
            .iter()
            .map(|e| format!("\\text{{{}}}", latex_escape(&e.to_string())))
            .collect::<Vec<_>>()
            .join(",\\; "),
    });
    let independent = basis.rank == basis.expressions.len();
    out.checks.push(CheckLine {
        name: "expressions are linearly independent".to_string(),
        passed: independent,
        detail: format!(
            "rank {} over {} expressions",
            basis.rank,
            basis.expressions.len()
        ),
    });
    Ok(out)
}

fn resolve_output(path: &PathBuf) -> PathBuf {
    if path.is_absolute() {
        return path.clone();
    }
    match std::env::var_os("RBCALC_OUTPUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            return failure.code();
        }
    };
    let rendered = out.render(cli.format);
    match &cli.output {
        Some(path) => {
            let target = resolve_output(path);
            if let Some(parent) = target.parent() {
                if !parent.as_os_str().is_empty() {
                    if let Err(e) = fs::create_dir_all(parent) {
                        eprintln!("error: cannot create {}: {e}", parent.display());
                        return ExitCode::from(2);
                    }
                }
            }
            if let Err(e) = fs::write(&target, rendered) {
                eprintln!("error: cannot write {}: {e}", target.display());
                return ExitCode::from(2);
            }
            eprintln!("report written to {}", target.display());
        }
        None => print!("{rendered}"),
    }
    if out.passed() {
        ExitCode::SUCCESS
    } else {
        if let Some((name, detail)) = out.first_failure() {
            eprintln!("identity failed: {name} -- {detail}");
        }
        ExitCode::from(1)
    }
}
