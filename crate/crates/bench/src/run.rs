//! One runner per command.

use std::path::Path;

use gpr_core::apps::apsp::apsp_unweighted;
use gpr_core::apps::cfg::{build_chart, valiant_recognize};
use gpr_core::apps::classify::{classify_type2, RecurrenceDescriptor, Type2Class};
use gpr_core::apps::triangle::triangle_detect;
use gpr_core::fp_leaf::StabilityRow;
use gpr_core::ledger::CostLedger;
use gpr_core::matmul::GprConfig;
use gpr_core::Int;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{directed, read_grammar, read_graph, undirected};
use crate::oracles;
use crate::report::{csv_rows, Outcome, Report, FORMAT_VERSION};
use crate::spec::{Command, ExperimentSpec};
use crate::suites::{self, AgreementSuite};
use crate::BenchError;

pub fn run(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    spec.validate()?;
    match spec.command {
        Command::Verify => verify(spec),
        Command::Bench => bench(spec),
        Command::Slices => slices(spec),
        Command::Fp => fp(spec),
        Command::Cfg => cfg(spec),
        Command::Apsp => apsp(spec),
        Command::Triangle => triangle(spec),
        Command::Classify => classify(spec),
    }
}

fn finish(spec: &ExperimentSpec, passed: Option<bool>, result: impl Serialize, csv: String, summary: Vec<String>) -> Result<Outcome, BenchError> {
    Ok(Outcome {
        report: Report {
            format_version: FORMAT_VERSION,
            command: spec.command,
            spec: spec.clone(),
            passed,
            result: serde_json::to_value(result)?,
        },
        csv,
        exit_code: if passed == Some(false) { 1 } else { 0 },
        summary,
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SuiteLine {
    suite: &'static str,
    n: Option<usize>,
    bmax: u64,
    cases: u64,
    passed_cases: u64,
    passed: bool,
}

fn verify(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let cfg = GprConfig {
        n0: spec.n0,
        child_shape: spec.child_shape,
        ..GprConfig::default()
    };
    let conformance = suites::conformance_suite(&spec.sizes, &[spec.bmax], spec.trials, spec.seed, &cfg);
    let extractor = suites::extractor_suite(1000 * spec.trials, spec.seed);
    let audit = suites::audit_suite(&spec.sizes, spec.bmax, spec.trials.min(20), spec.seed, spec.n0);
    let width = suites::width_suite(&spec.sizes, spec.bmax, spec.seed, spec.n0)?;

    let mut lines = Vec::new();
    for e in &conformance.entries {
        for (suite, r) in [("conformance", &e.literal), ("singleLevelPacked", &e.single_level)] {
            lines.push(SuiteLine {
                suite,
                n: Some(e.n),
                bmax: e.bmax,
                cases: r.trials,
                passed_cases: r.trials - r.mismatched_trials,
                passed: r.passed,
            });
        }
    }
    lines.push(SuiteLine {
        suite: "extractor",
        n: None,
        bmax: spec.bmax,
        cases: extractor.samples,
        passed_cases: extractor.samples - extractor.failures - extractor.ties,
        passed: extractor.passed,
    });
    for a in &audit {
        lines.push(SuiteLine {
            suite: "coAudit",
            n: Some(a.n),
            bmax: a.bmax,
            cases: a.instances,
            passed_cases: a.instances - a.violations,
            passed: a.passed,
        });
    }
    for w in &width {
        lines.push(SuiteLine {
            suite: "boundedWidth",
            n: Some(w.n),
            bmax: w.bmax,
            cases: 1,
            passed_cases: w.passed as u64,
            passed: w.passed,
        });
    }

    let audit_ok = audit.iter().all(|a| a.passed);
    let width_ok = width.iter().all(|w| w.passed);
    let passed = conformance.passed && extractor.passed && audit_ok && width_ok;
    let mut summary = vec![
        format!("conformance: {} ({:?})", verdict(conformance.passed), conformance.outcome),
        format!("extractor: {} ({} samples)", verdict(extractor.passed), extractor.samples),
        format!("coAudit: {}", verdict(audit_ok)),
        format!("boundedWidth: {}", verdict(width_ok)),
    ];
    if let Some(m) = conformance.entries.iter().find_map(|e| e.literal.first_mismatch.as_ref()) {
        summary.push(format!(
            "first mismatch: trial seed {}, entry ({}, {}), depth {}, path {:?}",
            m.trial_seed, m.row, m.col, m.depth, m.quadrant_path
        ));
    }
    let csv = csv_rows(&lines)?;
    let result = json!({
        "mismatchProtocol": conformance.outcome,
        "suites": lines,
        "conformance": conformance,
        "extractor": extractor,
        "coAudit": audit,
        "boundedWidth": width,
    });
    finish(spec, Some(passed), result, csv, summary)
}

fn bench(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let (rows, fit) = suites::scaling(spec)?;
    let fmt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.3}"));
    let summary = vec![
        format!("wordOps slope: {}", fmt(fit.word_ops_slope)),
        format!("bit total slope: {}", fmt(fit.bit_total_slope)),
        format!("bit constant: {}", fmt(fit.bit_constant)),
    ];
    let csv = csv_rows(&rows)?;
    finish(spec, None, json!({ "rows": rows, "fit": fit }), csv, summary)
}

fn slices(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let rows = suites::slice_suite(&spec.sizes, &spec.k, spec.bmax, spec.trials, spec.seed, spec.n0)?;
    let passed = rows.iter().all(|r| r.passed);
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "n = {}, K = {}: {}/{} equal, per-pass width {} vs {:.2}",
                r.n, r.k, r.matches, r.trials, r.per_pass_width, r.target_width
            )
        })
        .collect();
    let csv = csv_rows(&rows)?;
    finish(spec, Some(passed), json!({ "rows": rows }), csv, summary)
}

fn fp(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let suite = suites::fp_suite(&spec.sizes, spec.bmax, spec.trials, spec.seed, spec.precision.as_deref())?;
    let mut csv = String::from(StabilityRow::CSV_HEADER);
    csv.push('\n');
    for r in &suite.rows {
        let row = StabilityRow {
            n: r.n,
            bmax: r.bmax,
            precision: r.precision.clone(),
            trials: r.trials,
            fpgpr_max_err: r.fpgpr_max_err.clone(),
            classical_max_err: r.classical_max_err.clone(),
            classical_bound: r.classical_bound,
            fp_fallbacks: r.fp_fallbacks,
        };
        csv.push_str(&row.csv());
        csv.push('\n');
    }
    let summary = vec![
        format!("identical to integer leaves: {}", verdict(suite.all_identical)),
        format!("floating-point leaf error zero: {}", verdict(suite.fpgpr_error_free)),
        format!("classical error observed: {}", suite.classical_error_observed),
    ];
    finish(spec, Some(suite.passed), &suite, csv, summary)
}

fn agreement(spec: &ExperimentSpec, name: &str, suite: AgreementSuite) -> Result<Outcome, BenchError> {
    let summary = vec![format!(
        "{name}: {}/{} agree with the oracle ({} positive)",
        suite.agreements, suite.cases, suite.positives
    )];
    let csv = csv_rows(&[&suite])?;
    finish(spec, Some(suite.passed), json!({ "suite": suite }), csv, summary)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WordResult {
    word: String,
    accepted: bool,
    cyk: bool,
    closure_passes: u32,
    bmm_calls: u64,
}

fn cfg(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let Some(path) = &spec.grammar else {
        return agreement(spec, "cfg", suites::cfg_suite(spec.trials, spec.seed)?);
    };
    let g = read_grammar(Path::new(path))?;
    let mut words = Vec::new();
    for w in &spec.words {
        let mut ledger = CostLedger::default();
        let accepted = valiant_recognize(&g, w, &GprConfig::default(), &mut ledger)?;
        let passes = build_chart(&g, w, &GprConfig::default(), &mut CostLedger::default())?.passes;
        let chars: Vec<char> = w.chars().collect();
        words.push(WordResult {
            word: w.clone(),
            accepted,
            cyk: oracles::cyk(&g, &chars),
            closure_passes: passes,
            bmm_calls: ledger.tally_of("bmm_calls"),
        });
    }
    let passed = words.iter().all(|r| r.accepted == r.cyk);
    let summary = words.iter().map(|r| format!("{:?}: {}", r.word, if r.accepted { "accepted" } else { "rejected" })).collect();
    let csv = csv_rows(&words)?;
    finish(spec, Some(passed), json!({ "words": words }), csv, summary)
}

fn max_size(spec: &ExperimentSpec) -> usize {
    spec.sizes.iter().copied().max().unwrap_or(16)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DistanceRow {
    source: usize,
    target: usize,
    distance: Option<u32>,
}

fn apsp(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let Some(path) = &spec.graph else {
        return agreement(spec, "apsp", suites::apsp_suite(spec.trials, max_size(spec), spec.seed)?);
    };
    let (n, edges) = read_graph(Path::new(path))?;
    let adj = directed(n, &edges);
    let r = apsp_unweighted(&adj, &GprConfig::default(), &mut CostLedger::default())?;
    let bfs_agrees = (0..n).all(|s| r.dist[s] == oracles::bfs(&adj, s));
    let rows: Vec<DistanceRow> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| DistanceRow {
            source: i,
            target: j,
            distance: r.dist[i][j],
        })
        .collect();
    let summary = vec![format!("n = {n}: {} packed products, BFS agrees: {bfs_agrees}", r.bmm_calls)];
    let csv = csv_rows(&rows)?;
    let result = json!({
        "n": n,
        "dist": r.dist,
        "bmmCalls": r.bmm_calls,
        "refinementProducts": r.refinement_products,
        "bfsAgrees": bfs_agrees,
    });
    finish(spec, Some(bfs_agrees), result, csv, summary)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TriangleLine {
    n: usize,
    edges: usize,
    has_triangle: bool,
    count: Int,
    trace: Int,
    brute_force_count: u64,
}

fn triangle(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let Some(path) = &spec.graph else {
        let suite = suites::triangle_suite(5.min(max_size(spec)), spec.trials, max_size(spec), spec.seed)?;
        return agreement(spec, "triangle", suite);
    };
    let (n, edges) = read_graph(Path::new(path))?;
    let adj = undirected(n, &edges);
    let r = triangle_detect(&adj, &GprConfig::default(), &mut CostLedger::default())?;
    let line = TriangleLine {
        n,
        edges: (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| adj.get(i, j)).count(),
        has_triangle: r.has_triangle,
        count: r.count.clone(),
        trace: r.trace.clone(),
        brute_force_count: oracles::triangles(&adj),
    };
    let passed = line.count == Int::from(line.brute_force_count);
    let summary = vec![format!("n = {n}: {} triangles", line.count)];
    let csv = csv_rows(&[&line])?;
    finish(spec, Some(passed), &line, csv, summary)
}

/// Growth of `T(n) = sum T(alpha_i n) + n^2 log^c n` in each case.
fn case_bound(class: &Type2Class, c: u32) -> String {
    let logs = |k: u32| match k {
        0 => String::new(),
        1 => " log n".to_string(),
        k => format!(" log^{k} n"),
    };
    match class.case {
        1 => format!("n^2{}", logs(c)),
        2 => format!("n^2{}", logs(c + 1)),
        _ => format!("n^{:.12}", class.exponent),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyLine {
    alphas: String,
    c: u32,
    case: u8,
    exponent: f64,
    extra_log_power: u32,
    sum_alpha_sq: String,
    residual: f64,
    bound: String,
}

fn classify(spec: &ExperimentSpec) -> Result<Outcome, BenchError> {
    let text = spec.alphas.as_deref().expect("validated");
    let d = RecurrenceDescriptor::new(RecurrenceDescriptor::parse_alphas(text)?, spec.c)?;
    let class = classify_type2(&d);
    let line = ClassifyLine {
        alphas: text.to_string(),
        c: spec.c,
        case: class.case,
        exponent: class.exponent,
        extra_log_power: class.extra_log_power,
        sum_alpha_sq: class.sum_alpha_sq.clone(),
        residual: class.residual,
        bound: case_bound(&class, spec.c),
    };
    let table: Vec<Value> = vec![
        json!({ "case": 1, "condition": "sum alpha^2 < 1", "bound": "n^2 log^c n" }),
        json!({ "case": 2, "condition": "sum alpha^2 = 1", "bound": "n^2 log^(c+1) n" }),
        json!({ "case": 3, "condition": "sum alpha^2 > 1", "bound": "n^gamma, sum alpha^gamma = 1" }),
    ];
    let summary = vec![format!(
        "case {} (sum alpha^2 = {}): T(n) = Theta({})",
        line.case, line.sum_alpha_sq, line.bound
    )];
    let csv = csv_rows(&[&line])?;
    finish(spec, None, json!({ "classification": line, "table": table }), csv, summary)
}
