use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use t2hilb::gammas::{off_shell_from, KappaVariant, DEFAULT_KAPPA};
use t2hilb::hilbert::{analyze_with_bound, series_or_truncated, HilbertError, HilbertReport, SeriesOutcome};
use t2hilb::oracle::{oracle_series, perturbation_gamma, PerturbedQuantity};
use t2hilb::series::HilbertSeries;
use t2hilb::weights::{GenericizeOutcome, WeightMatrix};
use t2hilb::{gamma2, GammaOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Task {
    Classify,
    Series,
    Gammas,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GammaVariant {
    Theorem,
    Proof,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

/// Hilbert series and Laurent coefficients of 2-torus symplectic quotients.
#[derive(Parser, Debug)]
#[command(name = "t2hilb", version)]
struct RunConfig {
    /// Weight matrix, rows separated by ';', e.g. "1 2 3; 0 1 1".
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,

    #[arg(long, value_enum, value_delimiter = ',', default_value = "classify,series,gammas")]
    tasks: Vec<Task>,

    #[arg(long, default_value_t = 20)]
    oracle_degree: usize,

    #[arg(long, default_value_t = 10)]
    genericize_bound: u32,

    #[arg(long, value_enum, default_value_t = GammaVariant::Auto)]
    gamma_variant: GammaVariant,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunConfig {
    fn kappa(&self) -> KappaVariant {
        match self.gamma_variant {
            GammaVariant::Theorem => KappaVariant::Theorem,
            GammaVariant::Proof => KappaVariant::Proof,
            GammaVariant::Auto => DEFAULT_KAPPA,
        }
    }
}

/// Accumulates output in all three formats plus the failure state.
#[derive(Default)]
struct Report {
    json: serde_json::Map<String, Value>,
    text: Vec<String>,
    latex: Vec<String>,
    failed: bool,
}

impl Report {
    fn error(&mut self, op: &str, msg: impl std::fmt::Display) {
        self.failed = true;
        self.text.push(format!("error in {op}: {msg}"));
        self.latex.push(format!("% error in {op}: {msg}"));
        self.json
            .entry("errors")
            .or_insert_with(|| json!([]))
            .as_array_mut()
            .expect("errors is an array")
            .push(json!({"operation": op, "message": msg.to_string()}));
    }
}

/// Outcome lines of `verify`.
#[derive(Default)]
struct Checks {
    rows: Vec<(String, bool, String)>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.rows.push((name.into(), ok, detail.into()));
    }

    fn failed(&self) -> bool {
        self.rows.iter().any(|(_, ok, _)| !ok)
    }

    fn write(&self, report: &mut Report, key: &str) {
        for (name, ok, detail) in &self.rows {
            let status = if *ok { "PASS" } else { "FAIL" };
            let line = if detail.is_empty() {
                format!("{status} {name}")
            } else {
                format!("{status} {name}: {detail}")
            };
            report.text.push(line.clone());
            report.latex.push(format!("% {line}"));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(name, ok, detail)| json!({"check": name, "pass": ok, "detail": detail}))
            .collect();
        report.json.insert(key.into(), Value::Array(rows));
        report.failed |= self.failed();
    }
}

fn rat_json(x: &BigRational) -> Value {
    json!(x.to_string())
}

fn latex_rat(x: &BigRational) -> String {
    if x.denom() == &1.into() {
        x.numer().to_string()
    } else {
        let sign = if x.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", x.numer().abs(), x.denom())
    }
}

fn classify_task(a: &WeightMatrix, cfg: &RunConfig, out: &mut Report) {
    let f = a.faithfulness();
    let c = a.classify();
    let shell = a.shell_support();
    let minors: Vec<Value> = a
        .minor_table()
        .upper()
        .map(|(i, j, d)| json!({"pair": [i + 1, j + 1], "minor": d.to_string()}))
        .collect();
    let shell_cols: Vec<usize> = shell.columns.iter().map(|i| i + 1).collect();
    let mut doc = json!({
        "kind": format!("{:?}", c.kind),
        "faithful": f.faithful,
        "rank": f.rank,
        "minor_gcd": f.gcd.to_string(),
        "minors": minors,
        "shell_support": shell_cols,
        "shell_support_full": shell.full,
    });
    out.text.push(format!("matrix: {a}"));
    out.text.push(format!("class: {:?}; rank {}; gcd of minors {}; faithful: {}", c.kind, f.rank, f.gcd, f.faithful));
    let labels: Vec<String> = shell_cols.iter().map(|i| i.to_string()).collect();
    out.text.push(format!("shell support: {{{}}}", labels.join(",")));
    if shell.columns.is_empty() {
        out.text.push("symplectic quotient is a point".into());
        doc["note"] = json!("symplectic quotient is a point");
    } else if !shell.full {
        out.text.push("moment map does not cut out the shell; the on-shell series tracks the cotangent lift".into());
    }
    if f.rank == 2 && a.zero_column().is_none() {
        match a.to_standard_form() {
            Ok((std, log)) => {
                out.text.push(format!("standard form: {std} (moves: {log})"));
                doc["standard_form"] = json!(std.to_string());
                match std.try_genericize(cfg.genericize_bound) {
                    GenericizeOutcome::Found { matrix, log } => {
                        out.text.push(format!("generic representative: {matrix} (moves: {log})"));
                        doc["generic_representative"] = json!(matrix.to_string());
                    }
                    GenericizeOutcome::Impossible { triple } => {
                        let t = format!("{},{},{}", triple[0] + 1, triple[1] + 1, triple[2] + 1);
                        out.text.push(format!("no generic representative: columns {t} are obstructed"));
                        doc["generic_representative"] = json!(null);
                        doc["genericize"] = json!({"impossible": true, "triple": [triple[0] + 1, triple[1] + 1, triple[2] + 1]});
                    }
                    GenericizeOutcome::NotFound { bound } => {
                        out.text.push(format!("no generic representative found with bound {bound}"));
                        doc["generic_representative"] = json!(null);
                        doc["genericize"] = json!({"impossible": false, "bound": bound});
                    }
                }
            }
            Err(e) => out.error("to_standard_form", e),
        }
    }
    out.latex.push(format!("% {a}: {:?}", c.kind));
    out.json.insert("classification".into(), doc);
}

fn series_task(a: &WeightMatrix, cfg: &RunConfig, out: &mut Report) -> Option<HilbertReport> {
    match analyze_with_bound(a, 3, cfg.genericize_bound) {
        Ok(r) => {
            let rats: Vec<Value> = r.gammas.coefficients.iter().map(rat_json).collect();
            out.json.insert(
                "series".into(),
                json!({
                    "on_shell": r.on_shell.to_json(),
                    "off_shell": r.off_shell.to_json(),
                    "pole_order": r.pole_order,
                    "laurent": rats,
                    "palindromic": r.palindromic,
                    "describes_M0": r.describes_m0,
                    "genericized_from": r.genericized_from.as_ref().map(|l| l.to_string()),
                    "truncated": false,
                }),
            );
            out.text.push(format!("Hilb_on(t) = {}", r.on_shell));
            out.text.push(format!("Hilb_off(t) = {}", r.off_shell));
            out.text.push(format!("pole order at t=1: {}", r.pole_order));
            let g: Vec<String> = r.gammas.coefficients.iter().map(|x| x.to_string()).collect();
            out.text.push(format!("Laurent coefficients: {}", g.join(", ")));
            if let Some(log) = &r.genericized_from {
                out.text.push(format!("computed on a generic representative (moves: {log})"));
            }
            if !r.describes_m0 {
                out.text.push("note: some coordinates vanish on the shell".into());
            }
            out.latex.push(format!("\\operatorname{{Hilb}}^{{on}}(t) = {}", r.on_shell.to_latex()));
            out.latex.push(format!("\\operatorname{{Hilb}}^{{off}}(t) = {}", r.off_shell.to_latex()));
            Some(r)
        }
        Err(HilbertError::NotGenericizable(_)) => {
            match series_or_truncated(a, cfg.genericize_bound, cfg.oracle_degree) {
                Ok(SeriesOutcome::Truncated { on_shell, reason }) => {
                    let coeffs: Vec<String> = on_shell.iter().map(|c| c.to_string()).collect();
                    out.json.insert(
                        "series".into(),
                        json!({"truncated": true, "degree": cfg.oracle_degree, "on_shell_coefficients": coeffs, "reason": reason}),
                    );
                    out.text.push(format!("no closed form ({reason}); truncated on-shell series to degree {}:", cfg.oracle_degree));
                    out.text.push(coeffs.join(" "));
                    out.latex.push(format!("% truncated: {}", coeffs.join(", ")));
                }
                Ok(SeriesOutcome::Exact(_)) => unreachable!("genericization is deterministic"),
                Err(e) => out.error("oracle_series", e),
            }
            None
        }
        Err(e) => {
            out.error("hilbert_on", e);
            None
        }
    }
}

fn gammas_task(a: &WeightMatrix, cfg: &RunConfig, out: &mut Report) {
    let std = match a.to_standard_form() {
        Ok((s, _)) => s,
        Err(e) => return out.error("to_standard_form", e),
    };
    let opts = GammaOptions { force_symbolic: false, kappa: cfg.kappa() };
    match gamma2(&std, &opts) {
        Ok(r) => {
            let g2 = r.gamma2.clone().expect("gamma2 computed");
            let off = off_shell_from(&r.gamma0, &g2.value);
            let mut doc = r.to_json();
            doc["off_shell"] = json!(off.iter().map(rat_json).collect::<Vec<_>>());
            out.json.insert("gammas".into(), doc);
            out.text.push(format!("gamma0 = {}", r.gamma0));
            out.text.push("gamma1 = 0".into());
            out.text.push(format!("gamma2 = gamma3 = {} (kappa: {})", g2.value, g2.kappa.name()));
            let offs: Vec<String> = off.iter().map(|x| x.to_string()).collect();
            out.text.push(format!("off-shell gamma0..3 = {}", offs.join(", ")));
            if !r.gamma0.is_positive() {
                out.text.push("observation: gamma0 is not positive".into());
            }
            out.latex.push(format!(
                "\\gamma_0 = {}, \\quad \\gamma_2 = \\gamma_3 = {}",
                latex_rat(&r.gamma0),
                latex_rat(&g2.value)
            ));
        }
        Err(e) => out.error("gamma2", e),
    }
}

fn series_checks(a: &WeightMatrix, cfg: &RunConfig, report: Option<&HilbertReport>, checks: &mut Checks) {
    let oracle = match oracle_series(a, cfg.oracle_degree) {
        Ok(o) => o,
        Err(e) => return checks.push(format!("oracle {a}"), false, e.to_string()),
    };
    if let Some(r) = report {
        let taylor = r.on_shell.taylor(cfg.oracle_degree + 1);
        let ok = taylor.iter().zip(&oracle.on_shell).all(|(x, y)| *x == (*y).into());
        checks.push(format!("on-shell series of {a} matches lattice counts to degree {}", cfg.oracle_degree), ok, "");
        let off = r.off_shell.taylor(cfg.oracle_degree + 1);
        let ok = off.iter().zip(&oracle.off_shell).all(|(x, y)| *x == (*y).into());
        checks.push(format!("off-shell series of {a} matches lattice counts to degree {}", cfg.oracle_degree), ok, "");

        if let Ok((std, _)) = a.to_standard_form() {
            let opts = GammaOptions { force_symbolic: false, kappa: cfg.kappa() };
            match gamma2(&std, &opts) {
                Ok(g) => {
                    let c = &r.gammas.coefficients;
                    let g2 = g.gamma2.expect("gamma2 computed").value;
                    checks.push(format!("gamma0 of {a} agrees with the expansion"), g.gamma0 == c[0], format!("{} vs {}", g.gamma0, c[0]));
                    checks.push(format!("gamma2 of {a} agrees with the expansion"), g2 == c[2], format!("{} vs {}", g2, c[2]));
                    let off = off_shell_from(&g.gamma0, &g2);
                    let ok = off.iter().zip(&r.off_shell_gammas.coefficients).all(|(x, y)| x == y);
                    checks.push(format!("off-shell coefficients of {a} agree with the expansion"), ok, "");
                }
                Err(e) => checks.push(format!("gammas of {a}"), false, e.to_string()),
            }
        }
    } else {
        checks.push(format!("on-shell constant term of {a} is 1"), oracle.on_shell[0] == 1, "");
    }
}

fn perturbation_check(a: &WeightMatrix, cfg: &RunConfig, checks: &mut Checks) {
    let Ok((std, _)) = a.to_standard_form() else { return };
    let Ok(g) = t2hilb::gamma0(&std, &GammaOptions::default()) else { return };
    match perturbation_gamma(&std, PerturbedQuantity::Gamma0, 1e-3, 8, cfg.seed) {
        Ok(est) => {
            let exact = g.gamma0.to_f64().unwrap_or(f64::NAN);
            let ok = (est.mean - exact).abs() < 1e-4;
            checks.push(
                format!("gamma0 of {a} agrees with the perturbation limit"),
                ok,
                format!("{} vs {:.10} (spread {:.2e})", g.gamma0, est.mean, est.spread),
            );
        }
        Err(e) => checks.push(format!("perturbation of {a}"), false, e.to_string()),
    }
}

fn verify_matrix(a: &WeightMatrix, cfg: &RunConfig, report: Option<&HilbertReport>, checks: &mut Checks) {
    series_checks(a, cfg, report, checks);
    perturbation_check(a, cfg, checks);
}

/// Numerator of the five-column example, listed up to its middle.
const FIVE_COLUMN_HALF: [i64; 24] = [
    1, 0, 3, 3, 7, 11, 19, 31, 47, 68, 92, 121, 153, 188, 232, 273, 318, 359, 393, 426, 454, 475, 491, 496,
];

fn five_column_expected() -> HilbertSeries {
    let mut num: Vec<i64> = FIVE_COLUMN_HALF.to_vec();
    num.extend(FIVE_COLUMN_HALF.iter().rev().skip(1));
    HilbertSeries {
        numerator: num.into_iter().map(Into::into).collect(),
        denominator: vec![(3, 1), (4, 1), (9, 1), (10, 1), (11, 1), (15, 1)],
    }
}

fn builtin_battery(cfg: &RunConfig, checks: &mut Checks) {
    let m = |t: &[i64], b: &[i64]| WeightMatrix::from_rows(t, b);

    let point = m(&[-1, 0, -1], &[0, -1, -1]);
    checks.push(format!("shell support of {point} is empty"), point.shell_support().columns.is_empty(), "");
    let full = m(&[-1, 0, 1], &[0, -1, 1]);
    checks.push(format!("shell support of {full} is every column"), full.shell_support().full, "");

    let degenerate = m(&[2, 1, 4], &[1, -1, 1]);
    let generic = m(&[4, 1, 6], &[1, 1, 1]);
    let a = analyze_with_bound(&degenerate, 3, cfg.genericize_bound);
    let b = analyze_with_bound(&generic, 3, cfg.genericize_bound);
    match (&a, &b) {
        (Ok(x), Ok(y)) => checks.push(format!("{degenerate} and {generic} have the same series"), x.on_shell == y.on_shell, ""),
        _ => checks.push(format!("{degenerate} and {generic} have the same series"), false, "series failed"),
    }
    verify_matrix(&degenerate, cfg, a.as_ref().ok(), checks);
    verify_matrix(&generic, cfg, b.as_ref().ok(), checks);

    let five = m(&[1, 2, 3, 4, 5], &[0, 1, 2, 2, 1]);
    match analyze_with_bound(&five, 3, cfg.genericize_bound) {
        Ok(r) => {
            checks.push(format!("closed form of {five}"), r.on_shell == five_column_expected(), "");
            verify_matrix(&five, cfg, Some(&r), checks);
        }
        Err(e) => checks.push(format!("closed form of {five}"), false, e.to_string()),
    }

    let stuck = m(&[1, 1, 1], &[0, 1, 1]);
    checks.push(
        format!("{stuck} has no generic representative"),
        matches!(stuck.try_genericize(cfg.genericize_bound), GenericizeOutcome::Impossible { .. }),
        "",
    );
    verify_matrix(&stuck, cfg, None, checks);
}

fn run(cfg: &RunConfig) -> Report {
    let mut out = Report::default();
    let matrix = match &cfg.matrix {
        Some(text) => match text.parse::<WeightMatrix>() {
            Ok(a) => Some(a),
            Err(e) => {
                out.error("parse", e);
                return out;
            }
        },
        None => None,
    };
    if let Some(a) = &matrix {
        out.json.insert("matrix".into(), json!(a.to_string()));
    }

    let mut series_report = None;
    for task in &cfg.tasks {
        match (task, &matrix) {
            (Task::Verify, None) => {
                let mut checks = Checks::default();
                builtin_battery(cfg, &mut checks);
                checks.write(&mut out, "verify");
            }
            (_, None) => out.error("run", "--matrix is required for this task"),
            (Task::Classify, Some(a)) => classify_task(a, cfg, &mut out),
            (Task::Series, Some(a)) => series_report = series_task(a, cfg, &mut out),
            (Task::Gammas, Some(a)) => gammas_task(a, cfg, &mut out),
            (Task::Verify, Some(a)) => {
                let report = match series_report.clone() {
                    Some(r) => Some(r),
                    None => analyze_with_bound(a, 3, cfg.genericize_bound).ok(),
                };
                let mut checks = Checks::default();
                let f = a.faithfulness();
                if !f.faithful {
                    out.error("verify", format!("weight matrix is not faithful (rank {}, gcd {})", f.rank, f.gcd));
                    continue;
                }
                verify_matrix(a, cfg, report.as_ref(), &mut checks);
                checks.write(&mut out, "verify");
            }
        }
    }
    out
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let out = run(&cfg);
    match cfg.format {
        Format::Text => {
            for line in &out.text {
                println!("{line}");
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&Value::Object(out.json.clone())).expect("serializable"));
        }
        Format::Latex => {
            for line in &out.latex {
                println!("{line}");
            }
        }
    }
    if out.failed {
        if cfg.format != Format::Text {
            for line in out.text.iter().filter(|l| l.starts_with("error in")) {
                eprintln!("{line}");
            }
        }
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
