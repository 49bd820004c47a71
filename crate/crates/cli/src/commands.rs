//! Subcommand implementations. Each returns a [`Report`]; tolerance failures
//! are listed in `failures` so the output is still written before exiting.

use crate::config::Settings;
use crate::output::{render, Cell, OutputFormat, Table};
use crate::{CliError, RowSelect, VerifyOnly, Which};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;
use zdc_core::arith::oracle::oracle_suite;
use zdc_core::arith::{D3Mode, ParamVector};
use zdc_core::compare::{check_dominance, containing_row, improvement_percent, KlnConstants, IMPROVEMENT_SAMPLES};
use zdc_core::detector::integrals::cap_checks;
use zdc_core::foundations::log_rh_height;
use zdc_core::optimizer::{optimize_chains, random_start, Objective, SearchConfig};
use zdc_core::pipeline::display::{format_b, format_c, format_down, format_up, round_b};
use zdc_core::pipeline::published::{self, parse_log_height, PublishedRow};
use zdc_core::pipeline::reproduce::{compare_row, Comparison, Quantity, Tolerance};
use zdc_core::pipeline::{evaluate_schedule, RangeSpec, RowConstants, RowEvaluator, ScheduleRow};

#[derive(Debug, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    /// Replaces the table rendering for json output.
    pub json: Option<Value>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match (&self.json, format) {
            (Some(v), OutputFormat::Json) => serde_json::to_string_pretty(v).expect("json values serialize") + "\n",
            _ => render(&self.tables, format),
        }
    }
}

/// `3e12` for the verified height, `exp(L)` otherwise.
fn height_text(log_t: f64) -> String {
    if log_t == log_rh_height() {
        "3e12".into()
    } else {
        format!("exp({log_t})")
    }
}

fn select_row(settings: &Settings, sel: &RowSelect) -> Result<ScheduleRow, CliError> {
    if let Some(i) = sel.row {
        return settings.schedule.get(i).copied().ok_or_else(|| {
            CliError::Usage(format!("row {i} out of range (schedule has {} rows)", settings.schedule.len()))
        });
    }
    let need = |name: &str, v: Option<f64>| v.ok_or_else(|| CliError::Usage(format!("missing --{name}")));
    let (Some(t0), Some(t1)) = (&sel.t0, &sel.t1) else {
        return Err(CliError::Usage("give --row N or all of --t0 --t1 --alpha0 --u --v --w --x".into()));
    };
    let spec = RangeSpec::new(parse_log_height(t0)?, parse_log_height(t1)?, need("alpha0", sel.alpha0)?)?;
    let params = ParamVector::new(need("u", sel.u)?, need("v", sel.v)?, need("w", sel.w)?, need("x", sel.x)?)?;
    Ok(ScheduleRow { spec, params })
}

/// Everything `constants` prints; the json form round-trips exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    pub t0_log: f64,
    pub t1_log: f64,
    pub alpha0: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub x: f64,
    pub mode: D3Mode,
    pub d11: f64,
    pub d12: f64,
    pub d21: f64,
    pub d22: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    #[serde(rename = "C1_part")]
    pub c1_part: f64,
    #[serde(rename = "C2_part")]
    pub c2_part: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl From<&RowConstants> for ConstantsRecord {
    fn from(r: &RowConstants) -> Self {
        Self {
            t0_log: r.spec.log_t0,
            t1_log: r.spec.log_t1,
            alpha0: r.spec.alpha0,
            u: r.params.u,
            v: r.params.v,
            w: r.params.w,
            x: r.params.x,
            mode: r.d3_mode,
            d11: r.divisor.d11,
            d12: r.divisor.d12,
            d21: r.divisor.d21,
            d22: r.divisor.d22,
            d3: r.divisor.d3,
            d4: r.divisor.d4,
            d5: r.divisor.d5,
            b1: r.zero_count.b1,
            b2: r.zero_count.b2,
            c1: r.detector.c1,
            c2: r.detector.c2,
            c3: r.detector.c3,
            c4: r.detector.c4,
            c5: r.detector.c5,
            c1_part: r.estimate.c1_part,
            c2_part: r.estimate.c2_part,
            c: r.estimate.c,
            b: r.estimate.b,
        }
    }
}

/// Printed form of one constant: upper bounds round up, `c1` (a lower bound) rounds down.
fn shown(key: &str, v: f64) -> String {
    match key {
        "C" | "C1_part" | "C2_part" => format_c(v),
        "B" => format_b(v),
        "c1" => format_down(v, 3),
        "u" | "v" | "w" | "x" => format!("{v:.7}"),
        "t0_log" | "t1_log" | "alpha0" => format!("{v}"),
        _ => format_up(v, 3),
    }
}

pub fn constants(settings: &Settings, sel: &RowSelect) -> Result<Report, CliError> {
    let row = select_row(settings, sel)?;
    let rc = RowEvaluator::new(row.spec, settings.eval)?.evaluate(&row.params)?;
    let record = ConstantsRecord::from(&rc);
    let value = serde_json::to_value(&record).expect("record serializes");
    let Value::Object(map) = &value else { unreachable!("record is a struct") };
    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let mut table = Table::new("constants", "Constants", &keys);
    table.push(
        map.iter()
            .map(|(k, v)| match v {
                Value::Number(n) => {
                    let x = n.as_f64().expect("finite number");
                    Cell::num(x, shown(k, x))
                }
                other => Cell::text(other.as_str().unwrap_or_default()),
            })
            .collect(),
    );
    Ok(Report { tables: vec![table], json: Some(value), failures: Vec::new() })
}

fn evaluate_all(settings: &Settings) -> Result<Vec<RowConstants>, CliError> {
    evaluate_schedule(&settings.schedule, settings.eval).into_iter().map(|r| r.map_err(CliError::from)).collect()
}

fn diff_cell(c: &Comparison) -> Cell {
    match c.tolerance {
        Tolerance::Absolute(_) => Cell::num(c.diff, format!("{:+.4}", c.diff)),
        _ => Cell::num(c.diff, format!("{:+.2}%", 100.0 * c.diff)),
    }
}

fn status_cell(cmp: &[Comparison]) -> (Cell, Vec<String>) {
    let failed: Vec<String> = cmp.iter().filter(|c| c.failed()).map(|c| c.quantity.to_string()).collect();
    let known: Vec<String> =
        cmp.iter().filter(|c| c.known() && !c.within).map(|c| c.quantity.to_string()).collect();
    let mut parts = Vec::new();
    if !failed.is_empty() {
        parts.push(format!("FAIL {}", failed.join(" ")));
    }
    if !known.is_empty() {
        parts.push(format!("known {}", known.join(" ")));
    }
    let text = if parts.is_empty() { "ok".to_string() } else { parts.join("; ") };
    (Cell::text(text), failed)
}

fn quantity_shown(q: Quantity, v: f64) -> String {
    match q {
        Quantity::C => format_c(v),
        Quantity::B => format_b(v),
        Quantity::C1 => format_down(v, 3),
        _ => format_up(v, 3),
    }
}

/// One appendix table: recomputed value, printed value and difference per quantity.
fn comparison_table(
    key: &str,
    title: &str,
    quantities: &[Quantity],
    rows: &[RowConstants],
    failures: &mut Vec<String>,
) -> Table {
    let mut cols = vec!["T0".to_string(), "T1".to_string(), "alpha0".to_string()];
    for q in quantities {
        cols.extend([q.name().to_string(), format!("{q}_published"), format!("{q}_diff")]);
    }
    cols.push("status".into());
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = Table::new(key, title, &col_refs);
    let uniform = published::uniform_row();
    for (i, r) in rows.iter().enumerate() {
        let mut cells =
            vec![Cell::text(height_text(r.spec.log_t0)), Cell::text(height_text(r.spec.log_t1)), Cell::exact(r.spec.alpha0)];
        let head = |cells: &mut Vec<Cell>, q: Quantity| {
            let v = q.computed(r);
            cells.push(Cell::num(v, quantity_shown(q, v)));
        };
        if let Some(p) = published::lookup(&r.spec).filter(|p| p.params == r.params) {
            let cmp = compare_row(r, p, quantities);
            for c in &cmp {
                head(&mut cells, c.quantity);
                cells.push(Cell::num(c.published, published_text(c.quantity, p)));
                cells.push(diff_cell(c));
            }
            let (status, failed) = status_cell(&cmp);
            cells.push(status);
            failures.extend(failed.iter().map(|q| format!("{key} row {i} {q}")));
        } else if r.spec == uniform.spec && r.params == uniform.params && quantities == Quantity::FINAL {
            // the printed uniform row is a claimed upper bound, not a rounded value
            let ok_c = r.estimate.c <= uniform.c;
            let ok_b = round_b(r.estimate.b) <= uniform.b;
            for (q, claim, ok) in [(Quantity::C, uniform.c, ok_c), (Quantity::B, uniform.b, ok_b)] {
                head(&mut cells, q);
                cells.push(Cell::num(claim, if q == Quantity::C { format_c(claim) } else { format_b(claim) }));
                let d = q.computed(r) / claim - 1.0;
                cells.push(Cell::num(d, format!("{:+.4}%{}", 100.0 * d, if ok { "" } else { " (over claim)" })));
            }
            let mut failed = Vec::new();
            if !ok_c {
                failed.push("C");
            }
            if !ok_b {
                failed.push("B");
            }
            cells.push(Cell::text(if failed.is_empty() { "ok".into() } else { format!("FAIL {}", failed.join(" ")) }));
            failures.extend(failed.iter().map(|q| format!("{key} uniform row {q} exceeds the claimed value")));
        } else {
            for &q in quantities {
                head(&mut cells, q);
                cells.extend([Cell::Empty, Cell::Empty]);
            }
            cells.push(Cell::text("no printed row"));
        }
        table.push(cells);
    }
    table
}

fn published_text(q: Quantity, p: &PublishedRow) -> String {
    let v = q.published(p);
    match q {
        Quantity::C => format_c(v),
        Quantity::B => format!("{v:.3}"),
        _ => format!("{v:.3}"),
    }
}

fn params_table(rows: &[ScheduleRow]) -> Table {
    let mut t = Table::new("params", "Parameters", &["T0", "T1", "alpha0", "u", "x", "v", "w"]);
    for r in rows {
        let p = r.params;
        t.push(vec![
            Cell::text(height_text(r.spec.log_t0)),
            Cell::text(height_text(r.spec.log_t1)),
            Cell::exact(r.spec.alpha0),
            Cell::num(p.u, format!("{:.7}", p.u)),
            Cell::num(p.x, format!("{:.7}", p.x)),
            Cell::num(p.v, format!("{:.7}", p.v)),
            Cell::num(p.w, format!("{:.7}", p.w)),
        ]);
    }
    t
}

pub fn table(settings: &Settings, which: Which) -> Result<Report, CliError> {
    let rows = evaluate_all(settings)?;
    let mut failures = Vec::new();
    let printed: Vec<RowConstants> =
        rows.iter().filter(|r| published::lookup(&r.spec).is_some()).cloned().collect();
    let mut tables = Vec::new();
    let want = |w: Which| which == w || which == Which::All;
    if want(Which::Cb) {
        tables.push(comparison_table("CB", "Constants C, B", &Quantity::FINAL, &rows, &mut failures));
    }
    if want(Which::B) {
        tables.push(comparison_table("b", "Constants b1, b2", &Quantity::ZERO_COUNT, &printed, &mut failures));
    }
    if want(Which::Params) {
        tables.push(params_table(&settings.schedule));
    }
    if want(Which::D) {
        tables.push(comparison_table("d", "Constants d1..d5", &Quantity::DIVISOR, &printed, &mut failures));
    }
    if want(Which::C) {
        tables.push(comparison_table("c", "Constants c1..c5", &Quantity::DETECTOR, &printed, &mut failures));
    }
    Ok(Report { tables, json: None, failures })
}

pub fn verify(only: VerifyOnly, alpha0: Option<f64>, cases: usize, seed: u64) -> Result<Report, CliError> {
    let mut t = Table::new("verify", "Verification", &["group", "item", "case", "value", "bound", "status"]);
    let mut failures = Vec::new();
    if only != VerifyOnly::Weights {
        let alphas = alpha0.map_or_else(|| vec![0.985, 0.9927], |a| vec![a]);
        for a in alphas {
            for c in cap_checks(a, log_rh_height())? {
                let ok = c.passed();
                if !ok {
                    failures.push(format!("{} at alpha0 = {a}", c.name));
                }
                t.push(vec![
                    Cell::text("integrals"),
                    Cell::text(c.name.clone()),
                    Cell::text(format!("alpha0={a}")),
                    Cell::num(c.certified, format!("{:.6e}", c.certified)),
                    Cell::num(c.cap, format!("{}", c.cap)),
                    Cell::text(if ok { "pass" } else { "FAIL" }),
                ]);
            }
        }
    }
    if only != VerifyOnly::Integrals {
        for c in oracle_suite(seed, cases)? {
            let ok = c.passed();
            if !ok {
                failures.push(format!("{} {}", c.lemma, c.case));
            }
            t.push(vec![
                Cell::text("weights"),
                Cell::text(c.lemma.clone()),
                Cell::text(c.case.clone()),
                Cell::num(c.exact, format!("{:.6e}", c.exact)),
                Cell::num(c.bound, format!("{:.6e}", c.bound)),
                Cell::text(if ok { "pass" } else { "FAIL" }),
            ]);
        }
    }
    Ok(Report { tables: vec![t], json: None, failures })
}

pub struct OptimizeOptions {
    pub seed: u64,
    pub iters: usize,
    pub objective: Objective,
    pub chains: usize,
    pub step: f64,
    pub random_start: bool,
}

pub fn optimize(settings: &Settings, sel: &RowSelect, o: &OptimizeOptions) -> Result<Report, CliError> {
    let row = select_row(settings, sel)?;
    let initial = if o.random_start { random_start(&row.spec, settings.eval, o.seed)? } else { row.params };
    let cfg = SearchConfig {
        seed: o.seed,
        iterations: o.iters,
        initial,
        step_scales: initial.as_array().map(|c| o.step * c.abs()),
        objective: o.objective,
        settings: settings.eval,
        ..SearchConfig::new(initial)
    };
    let res = optimize_chains(&row.spec, &cfg, o.chains)?;
    let start_obj = RowEvaluator::new(row.spec, settings.eval)?
        .evaluate(&initial)
        .map(|r| o.objective.value(&row.spec, &r.estimate))
        .unwrap_or(f64::INFINITY);
    let mut t = Table::new(
        "optimize",
        "Optimised parameters",
        &["t0_log", "t1_log", "alpha0", "u", "v", "w", "x", "C", "B", "objective", "initial_objective", "accepted"],
    );
    let p = res.params;
    t.push(vec![
        Cell::exact(row.spec.log_t0),
        Cell::exact(row.spec.log_t1),
        Cell::exact(row.spec.alpha0),
        Cell::num(p.u, format!("{:.7}", p.u)),
        Cell::num(p.v, format!("{:.7}", p.v)),
        Cell::num(p.w, format!("{:.7}", p.w)),
        Cell::num(p.x, format!("{:.7}", p.x)),
        Cell::num(res.estimate.c, format_c(res.estimate.c)),
        Cell::num(res.estimate.b, format_b(res.estimate.b)),
        Cell::num(res.objective, format!("{:.6}", res.objective)),
        Cell::num(start_obj, format!("{start_obj:.6}")),
        Cell::num(res.accepted as f64, res.accepted.to_string()),
    ]);
    Ok(Report { tables: vec![t], json: None, failures: Vec::new() })
}

/// Allowed gap, in percentage points, between recomputed and printed improvements.
const IMPROVEMENT_TOLERANCE: f64 = 1.0;

pub fn compare(settings: &Settings, kln_file: Option<PathBuf>) -> Result<Report, CliError> {
    let Some(path) = kln_file else {
        return Err(zdc_core::Error::ExternalData(
            "pass --kln-file with columns sigma,C1,C2 (see crates/core/data/kln_template.csv)"
                .into(),
        )
        .into());
    };
    let kln = KlnConstants::from_path(&path).map_err(|e| match e {
        zdc_core::Error::Io(io) => CliError::io(&path, io),
        other => other.into(),
    })?;
    let rows = evaluate_all(settings)?;
    let mut failures = Vec::new();
    let mut dom = Table::new(
        "dominance",
        "Dominance over the earlier estimate",
        &["T0", "T1", "alpha0", "C", "B", "technique", "worst_margin", "status"],
    );
    for (i, r) in rows.iter().enumerate() {
        let rep = check_dominance(&r.spec, &r.estimate, &kln)?;
        if !rep.passed {
            failures.push(format!("dominance row {i}"));
        }
        dom.push(vec![
            Cell::text(height_text(r.spec.log_t0)),
            Cell::text(height_text(r.spec.log_t1)),
            Cell::exact(r.spec.alpha0),
            Cell::num(r.estimate.c, format_c(r.estimate.c)),
            Cell::num(r.estimate.b, format_b(r.estimate.b)),
            Cell::text(serde_json::to_value(rep.technique).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()),
            Cell::num(rep.worst_margin, format!("{:.6}", rep.worst_margin)),
            Cell::text(if rep.passed { "pass" } else { "FAIL" }),
        ]);
    }
    let mut imp = Table::new(
        "improvement",
        "Improvement over the earlier estimate",
        &["sigma", "T", "improvement", "published", "diff", "status"],
    );
    for (sigma, log_t, printed) in IMPROVEMENT_SAMPLES {
        let Some(row) = containing_row(&settings.schedule, sigma, log_t) else {
            return Err(CliError::Usage(format!("no schedule row covers sigma = {sigma}, log T = {log_t}")));
        };
        let idx = settings.schedule.iter().position(|r| r == row).expect("row comes from the schedule");
        let pct = improvement_percent(sigma, log_t, &rows[idx].estimate, &kln)?;
        let ok = (pct - printed).abs() <= IMPROVEMENT_TOLERANCE;
        if !ok {
            failures.push(format!("improvement at sigma = {sigma}, log T = {log_t}"));
        }
        imp.push(vec![
            Cell::exact(sigma),
            Cell::text(height_text(log_t)),
            Cell::num(pct, format!("{pct:.1}%")),
            Cell::num(printed, format!("{printed:.1}%")),
            Cell::num(pct - printed, format!("{:+.1}", pct - printed)),
            Cell::text(if ok { "pass" } else { "FAIL" }),
        ]);
    }
    Ok(Report { tables: vec![dom, imp], json: None, failures })
}

pub fn schedule(settings: &Settings) -> Report {
    let mut t = Table::new("schedule", "Schedule", &["t0_log", "t1_log", "alpha0", "u", "v", "w", "x"]);
    for r in &settings.schedule {
        let p = r.params;
        t.push([r.spec.log_t0, r.spec.log_t1, r.spec.alpha0, p.u, p.v, p.w, p.x].map(Cell::exact).to_vec());
    }
    Report { tables: vec![t], json: None, failures: Vec::new() }
}
