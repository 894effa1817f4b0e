//! Command-line front end: loads text bundles, runs one operation and prints
//! a text or JSON report.

pub mod format;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use lefint::complex::{OpenSet, SimplicialComplex};
use lefint::counting::{count_targets, generate_scenario, support_lambdas, ScenarioParams, SymmetryKind};
use lefint::homology::{betti_numbers, lefschetz_homological};
use lefint::integral::{euler_integrate, integrate, integrate_via_levels};
use lefint::lefschetz::{
    fixed_point_certificate, lambda_product_tensor, lambda_product_triangulated, LefschetzMeasure, SelfMap,
};
use lefint::linalg::{rational, Rational};
use lefint::product::product_complex;
use lefint::subdivision::iterated_subdivision;

use format::{complex_to_text, Bundle, FormatError, NamedScenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lefint", version, about = "Lefschetz numbers and Lefschetz integrals on simplicial complexes")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Bundle files, read in order.
    #[arg(short, long = "input", required = true)]
    input: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate bundle files.
    Validate(Inputs),
    /// Rational Betti numbers of a complex.
    Homology {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        complex: String,
    },
    /// Lambda(f, U) of a map on an invariant set (the whole complex by default).
    Lefschetz {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        map: String,
        #[arg(long)]
        set: Option<String>,
        /// Host complex; must match the map's.
        #[arg(long)]
        complex: Option<String>,
    },
    /// Integral of a constructible function against a map.
    Integrate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        function: String,
        #[arg(long)]
        map: String,
    },
    /// Euler integral of a function, or Euler characteristic of a set.
    Euler {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, conflicts_with = "set", required_unless_present = "set")]
        function: Option<String>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Count targets in a scenario.
    Count {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        scenario: String,
    },
    /// Iterated barycentric subdivision of a complex.
    Subdivide {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=3))]
        depth: u8,
    },
    /// Staircase product of two complexes, optionally with the product rule.
    Product {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, requires_all = ["left_set", "right_map", "right_set"])]
        left_map: Option<String>,
        #[arg(long)]
        left_set: Option<String>,
        #[arg(long)]
        right_map: Option<String>,
        #[arg(long)]
        right_set: Option<String>,
    },
    /// Look for a setwise-fixed simplex in the closure of an invariant set.
    Fixedpoint {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        map: String,
        #[arg(long)]
        set: Option<String>,
    },
    /// Generate a counting scenario as a bundle.
    ScenarioGen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "identity")]
        kind: SymmetryKind,
        #[arg(long, default_value_t = 3)]
        targets: usize,
        #[arg(long, default_value_t = 120)]
        max_simplices: usize,
    },
    /// Generate and count many scenarios; prints CSV.
    ScenarioBatch {
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// A symmetry kind, or `all` to cycle through them.
        #[arg(long, default_value = "all")]
        kind: String,
        /// Targets per scenario; derived from the seed when omitted.
        #[arg(long)]
        targets: Option<usize>,
        #[arg(long, default_value_t = 120)]
        max_simplices: usize,
    },
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub values: Vec<(String, Rational)>,
    pub diagnostics: Vec<String>,
    /// Text output such as a serialized complex or CSV.
    pub document: Option<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { command: command.into(), ..Report::default() }
    }

    fn value(&mut self, name: impl Into<String>, v: Rational) {
        self.values.push((name.into(), v));
    }

    fn int(&mut self, name: impl Into<String>, v: i64) {
        self.value(name, rational(v));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|(n, v)| json!({"name": n, "num": v.numer().to_string(), "den": v.denom().to_string()}))
            .collect();
        let mut out = json!({
            "command": self.command,
            "inputs": self.inputs,
            "values": values,
            "diagnostics": self.diagnostics,
        });
        if let Some(doc) = &self.document {
            out["document"] = Value::String(doc.clone());
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let prefix = if let Some(doc) = &self.document {
            out.push_str(doc);
            "# "
        } else {
            ""
        };
        for (n, v) in &self.values {
            out.push_str(&format!("{prefix}{n} = {v}\n"));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("{prefix}note: {d}\n"));
        }
        out
    }
}

/// A failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure { code: EXIT_VALIDATION, message: e.to_string() }
    }
}

impl From<lefint::Error> for Failure {
    fn from(e: lefint::Error) -> Self {
        let code = if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_VALIDATION };
        Failure { code, message: e.to_string() }
    }
}

fn missing(kind: &str, name: &str) -> Failure {
    Failure { code: EXIT_VALIDATION, message: format!("unknown reference: {kind} `{name}`") }
}

/// Exit status plus captured output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (program name first).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.json;
    let name = command_name(&cli.command);
    let (code, report, error) = match execute(cli.command) {
        Ok((code, report)) => (code, report, None),
        Err(f) => {
            let mut r = Report::new(name);
            r.note(f.message.clone());
            (f.code, r, Some(f.message))
        }
    };
    if json {
        let mut stdout = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
        stdout.push('\n');
        Outcome { code, stdout, stderr: String::new() }
    } else if let Some(msg) = error {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    } else {
        Outcome { code, stdout: report.to_text(), stderr: String::new() }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Homology { .. } => "homology",
        Command::Lefschetz { .. } => "lefschetz",
        Command::Integrate { .. } => "integrate",
        Command::Euler { .. } => "euler",
        Command::Count { .. } => "count",
        Command::Subdivide { .. } => "subdivide",
        Command::Product { .. } => "product",
        Command::Fixedpoint { .. } => "fixedpoint",
        Command::ScenarioGen { .. } => "scenario-gen",
        Command::ScenarioBatch { .. } => "scenario-batch",
    }
}

struct Session {
    bundle: Bundle,
    report: Report,
}

impl Session {
    fn open(command: &str, inputs: &Inputs) -> Result<Self, Failure> {
        let bundle = Bundle::parse_files(&inputs.input)?;
        let mut report = Report::new(command);
        report.inputs = inputs.input.iter().map(|p| p.display().to_string()).collect();
        Ok(Session { bundle, report })
    }

    fn arg(&mut self, key: &str, value: &str) {
        self.report.inputs.push(format!("{key}={value}"));
    }

    fn complex(&mut self, name: &str) -> Result<Arc<SimplicialComplex>, Failure> {
        self.arg("complex", name);
        self.bundle.complexes.get(name).cloned().ok_or_else(|| missing("complex", name))
    }

    fn map(&mut self, name: &str) -> Result<(String, SelfMap), Failure> {
        self.arg("map", name);
        let m = self.bundle.maps.get(name).ok_or_else(|| missing("map", name))?;
        Ok((m.host.clone(), m.map.clone()))
    }

    /// The named set, which must live on `host`; the whole complex if absent.
    fn set_on(&mut self, name: Option<&str>, host: &str) -> Result<OpenSet, Failure> {
        match name {
            None => {
                let x = self.bundle.complexes.get(host).ok_or_else(|| missing("complex", host))?;
                Ok(OpenSet::whole(x.clone()))
            }
            Some(name) => {
                self.arg("set", name);
                let s = self.bundle.sets.get(name).ok_or_else(|| missing("set", name))?;
                if s.host != host {
                    return Err(Failure {
                        code: EXIT_VALIDATION,
                        message: format!("set `{name}` lives on `{}`, not `{host}`", s.host),
                    });
                }
                Ok(s.set.clone())
            }
        }
    }

    fn done(self) -> Result<(i32, Report), Failure> {
        Ok((EXIT_OK, self.report))
    }
}

fn execute(command: Command) -> Result<(i32, Report), Failure> {
    let name = command_name(&command);
    match command {
        Command::Validate(inputs) => {
            let mut s = Session::open(name, &inputs)?;
            let b = &s.bundle;
            let counts = [
                ("complexes", b.complexes.len()),
                ("sets", b.sets.len()),
                ("maps", b.maps.len()),
                ("functions", b.functions.len()),
                ("scenarios", b.scenarios.len()),
            ];
            for (k, n) in counts {
                s.report.int(k, n as i64);
            }
            s.report.note("bundle is valid");
            s.done()
        }
        Command::Homology { inputs, complex } => {
            let mut s = Session::open(name, &inputs)?;
            let x = s.complex(&complex)?;
            for (p, b) in betti_numbers(&x).into_iter().enumerate() {
                s.report.int(format!("betti_{p}"), b as i64);
            }
            s.report.int("euler_characteristic", x.euler_characteristic());
            s.done()
        }
        Command::Lefschetz { inputs, map, set, complex } => {
            let mut s = Session::open(name, &inputs)?;
            let (host, f) = s.map(&map)?;
            if let Some(c) = complex {
                s.complex(&c)?;
                if c != host {
                    return Err(Failure { code: EXIT_VALIDATION, message: format!("map `{map}` lives on `{host}`, not `{c}`") });
                }
            }
            let u = s.set_on(set.as_deref(), &host)?;
            let m = LefschetzMeasure::new(f);
            s.report.value("lambda", m.lambda(&u)?);
            if set.is_none() {
                s.report.value("homological_lambda", lefschetz_homological(m.endomorphism())?);
            }
            s.done()
        }
        Command::Integrate { inputs, function, map } => {
            let mut s = Session::open(name, &inputs)?;
            s.arg("function", &function);
            let h = s.bundle.functions.get(&function).ok_or_else(|| missing("function", &function))?.clone();
            let (host, f) = s.map(&map)?;
            if h.host != host {
                return Err(Failure {
                    code: EXIT_VALIDATION,
                    message: format!("function `{function}` lives on `{}`, map `{map}` on `{host}`", h.host),
                });
            }
            let m = LefschetzMeasure::new(f);
            s.report.value("integral", integrate(&h.function, &m)?);
            s.report.value("level_integral", integrate_via_levels(&h.function, &m)?);
            for (k, u) in h.function.level_sets() {
                s.report.value(format!("lambda_level_{k}"), m.lambda(&u)?);
            }
            s.done()
        }
        Command::Euler { inputs, function, set } => {
            let mut s = Session::open(name, &inputs)?;
            if let Some(function) = function {
                s.arg("function", &function);
                let h = s.bundle.functions.get(&function).ok_or_else(|| missing("function", &function))?;
                let v = euler_integrate(&h.function);
                s.report.int("euler_integral", v);
            } else if let Some(set) = set {
                s.arg("set", &set);
                let u = s.bundle.sets.get(&set).ok_or_else(|| missing("set", &set))?;
                let v = u.set.combinatorial_euler();
                s.report.int("euler", v);
            }
            s.done()
        }
        Command::Count { inputs, scenario } => {
            let mut s = Session::open(name, &inputs)?;
            s.arg("scenario", &scenario);
            let sc = s.bundle.scenarios.get(&scenario).ok_or_else(|| missing("scenario", &scenario))?.clone();
            for (i, l) in support_lambdas(&sc.scenario)?.into_iter().enumerate() {
                s.report.value(format!("lambda_{}_{}", i, sc.supports[i]), l);
            }
            let r = count_targets(&sc.scenario)?;
            s.report.value("n", r.n);
            s.report.value("integral", r.integral);
            s.report.int("count", r.count);
            if let Some(t) = sc.truth {
                s.report.int("truth", t as i64);
                if r.count != t as i64 {
                    s.report.note(format!("count {} differs from the recorded truth {t}", r.count));
                    return Ok((EXIT_PRECONDITION, s.report));
                }
            }
            s.done()
        }
        Command::Subdivide { inputs, complex, depth } => {
            let mut s = Session::open(name, &inputs)?;
            let x = s.complex(&complex)?;
            s.arg("depth", &depth.to_string());
            let rec = iterated_subdivision(&x, depth as usize);
            let y = rec.refined();
            for p in 0..y.num_dims() {
                s.report.int(format!("cells_{p}"), y.count(p) as i64);
            }
            s.report.document = Some(complex_to_text(&format!("{complex}_sd{depth}"), y));
            s.done()
        }
        Command::Product { inputs, left, right, left_map, left_set, right_map, right_set } => {
            let mut s = Session::open(name, &inputs)?;
            let a = s.complex(&left)?;
            let b = s.complex(&right)?;
            let rec = product_complex(&a, &b);
            let x = rec.product();
            for p in 0..x.num_dims() {
                s.report.int(format!("cells_{p}"), x.count(p) as i64);
            }
            if let (Some(f1), Some(f2)) = (left_map, right_map) {
                let (h1, f1) = s.map(&f1)?;
                let (h2, f2) = s.map(&f2)?;
                if h1 != left || h2 != right {
                    return Err(Failure { code: EXIT_VALIDATION, message: "maps must live on the two factors".into() });
                }
                let u1 = s.set_on(left_set.as_deref(), &left)?;
                let u2 = s.set_on(right_set.as_deref(), &right)?;
                let m1 = LefschetzMeasure::new(f1.clone());
                let m2 = LefschetzMeasure::new(f2.clone());
                s.report.value("lambda_left", m1.lambda(&u1)?);
                s.report.value("lambda_right", m2.lambda(&u2)?);
                s.report.value("lambda_tensor", lambda_product_tensor(m1.endomorphism(), &u1, m2.endomorphism(), &u2)?);
                s.report.value("lambda_triangulated", lambda_product_triangulated(&f1, &u1, &f2, &u2)?);
            }
            s.report.document = Some(complex_to_text(&format!("{left}_x_{right}"), x));
            s.done()
        }
        Command::Fixedpoint { inputs, map, set } => {
            let mut s = Session::open(name, &inputs)?;
            let (host, f) = s.map(&map)?;
            let u = s.set_on(set.as_deref(), &host)?;
            let lambda = LefschetzMeasure::new(f.clone()).lambda(&u)?;
            let cert = fixed_point_certificate(&f, &u)?;
            let nonzero = lambda != rational(0);
            s.report.value("lambda", lambda);
            match cert {
                Some(c) => {
                    let x = f.host();
                    s.report.note(format!("fixed simplex {}", x.format_cell(c.cell)));
                    for (v, w) in c.barycentric {
                        s.report.value(format!("weight_{}", x.vertex_name(v)), w);
                    }
                }
                None if nonzero => {
                    s.report.note("nonzero Lefschetz number but no setwise-fixed simplex");
                    return Ok((EXIT_PRECONDITION, s.report));
                }
                None => s.report.note("no setwise-fixed simplex"),
            }
            s.done()
        }
        Command::ScenarioGen { seed, kind, targets, max_simplices } => {
            let g = generate_scenario(seed, ScenarioParams { kind, targets, max_simplices })?;
            let mut report = Report::new(name);
            report.inputs = vec![
                format!("seed={seed}"),
                format!("kind={kind}"),
                format!("targets={targets}"),
                format!("max_simplices={max_simplices}"),
            ];
            report.int("truth", g.truth as i64);
            report.document = Some(scenario_bundle(&g.scenario, g.truth).serialize());
            Ok((EXIT_OK, report))
        }
        Command::ScenarioBatch { start, count, kind, targets, max_simplices } => {
            let kinds: Vec<SymmetryKind> = if kind == "all" {
                SymmetryKind::ALL.to_vec()
            } else {
                vec![kind.parse::<SymmetryKind>()?]
            };
            let rows: Vec<(String, bool)> = (start..start.saturating_add(count))
                .collect::<Vec<u64>>()
                .par_iter()
                .map(|&seed| {
                    let kind = kinds[(seed % kinds.len() as u64) as usize];
                    let t = targets.unwrap_or(1 + (seed % ScenarioParams::MAX_TARGETS as u64) as usize);
                    batch_row(seed, kind, t, max_simplices)
                })
                .collect();
            let mut report = Report::new(name);
            report.inputs = vec![
                format!("start={start}"),
                format!("count={count}"),
                format!("kind={kind}"),
                format!("max_simplices={max_simplices}"),
            ];
            let failed = rows.iter().filter(|r| !r.1).count();
            let mut csv = String::from("seed,kind,n,integral,count,truth,status\n");
            for (row, _) in &rows {
                csv.push_str(row);
                csv.push('\n');
            }
            report.int("scenarios", rows.len() as i64);
            report.int("failed", failed as i64);
            report.document = Some(csv);
            Ok((if failed == 0 { EXIT_OK } else { EXIT_PRECONDITION }, report))
        }
    }
}

fn batch_row(seed: u64, kind: SymmetryKind, targets: usize, max_simplices: usize) -> (String, bool) {
    let g = match generate_scenario(seed, ScenarioParams { kind, targets, max_simplices }) {
        Ok(g) => g,
        Err(e) => return (format!("{seed},{kind},,,,{targets},error: {e}"), false),
    };
    match count_targets(&g.scenario) {
        Ok(r) => {
            let ok = r.count == g.truth as i64;
            let status = if ok { "pass" } else { "fail" };
            (format!("{seed},{kind},{},{},{},{},{status}", r.n, r.integral, r.count, g.truth), ok)
        }
        Err(e) => (format!("{seed},{kind},,,,{},error: {e}", g.truth), false),
    }
}

/// A bundle holding a generated scenario: its complex, symmetry and supports.
pub fn scenario_bundle(s: &lefint::counting::Scenario, truth: usize) -> Bundle {
    let mut b = Bundle::default();
    b.add_complex("floor", s.host.clone());
    b.add_map("symmetry", "floor", s.symmetry.clone());
    let mut names = Vec::new();
    let mut distinct: Vec<&OpenSet> = Vec::new();
    for u in &s.supports {
        let i = match distinct.iter().position(|d| *d == u) {
            Some(i) => i,
            None => {
                distinct.push(u);
                distinct.len() - 1
            }
        };
        let name = format!("support{i}");
        if i + 1 == distinct.len() && !names.contains(&name) {
            b.add_set(&name, "floor", u.clone());
        }
        names.push(name);
    }
    b.scenarios.insert(
        "generated".into(),
        NamedScenario {
            host: "floor".into(),
            symmetry: "symmetry".into(),
            supports: names,
            truth: Some(truth),
            scenario: s.clone(),
        },
    );
    b
}
