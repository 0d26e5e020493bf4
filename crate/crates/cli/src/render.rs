//! Report rendering: per-generation tables (text), CSV rows, and JSON with
//! the embedded trace. Output is byte-deterministic for a given outcome.

use garoute_core::{GenerationReport, RouteResult};
use serde::Serialize;

use crate::run::RouteOutcome;
use crate::sweep::{RunStatus, SweepSummary};

const TABLE_COLUMNS: [&str; 4] = [
    "Chromosome",
    "No. of Nodes Visited",
    "Fitness",
    "Probability of selecting chromosome",
];

/// One aligned text table per generation, with the four report columns.
pub fn render_tables(trace: &[GenerationReport<f64>]) -> String {
    let label_width = trace
        .iter()
        .flat_map(|r| r.records.iter())
        .map(|r| r.label.len())
        .chain([TABLE_COLUMNS[0].len()])
        .max()
        .unwrap_or(TABLE_COLUMNS[0].len());
    let nodes_width = TABLE_COLUMNS[1].len();
    let fitness_width = TABLE_COLUMNS[2].len();

    let mut out = String::new();
    for report in trace {
        out.push_str(&format!("GENERATION {}\n", report.generation_index));
        out.push_str(&format!(
            "{:<label_width$}  {}  {}  {}\n",
            TABLE_COLUMNS[0], TABLE_COLUMNS[1], TABLE_COLUMNS[2], TABLE_COLUMNS[3]
        ));
        for r in &report.records {
            out.push_str(&format!(
                "{:<label_width$}  {:>nodes_width$}  {:>fitness_width$.4}  {:.4}\n",
                r.label, r.nodes_visited, r.fitness, r.selection_probability
            ));
        }
        out.push('\n');
    }
    out
}

fn route_lines(route: &RouteResult<f64>, from_cache: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("Selected route: {}\n", route.path));
    out.push_str(&format!("Hop count: {}\n", route.hop_count));
    out.push_str(&format!(
        "Bottleneck available bandwidth: {}\n",
        route.bottleneck
    ));
    if from_cache {
        out.push_str("Served from the knowledge base.\n");
    } else {
        out.push_str(&format!("Selection probability: {:.4}\n", route.probability));
    }
    out
}

/// Full text report for one run.
pub fn render_text(outcome: &RouteOutcome) -> String {
    let mut out = String::new();
    for w in &outcome.kb_warnings {
        out.push_str(&format!(
            "warning: knowledge base line {} skipped: {}\n",
            w.line, w.message
        ));
    }
    if let Some(dump) = &outcome.pool_dump {
        out.push_str("Path pool:\n");
        out.push_str(dump);
        out.push('\n');
    }
    out.push_str(&render_tables(&outcome.route.trace));
    out.push_str(&route_lines(&outcome.route, outcome.from_cache));
    if let Some(oracle) = &outcome.oracle {
        out.push_str(&format!(
            "Oracle route: {} ({} hops, bottleneck {})\n",
            oracle.path, oracle.hop_count, oracle.bottleneck
        ));
        out.push_str(&format!(
            "GA matches the oracle: {}\n",
            if oracle.path == outcome.route.path { "yes" } else { "no" }
        ));
    }
    out
}

/// CSV trace rows plus a final `route` row.
pub fn render_csv(outcome: &RouteOutcome) -> String {
    let mut out = String::from(
        "generation,label,path,nodes_visited,available_bandwidth,fitness,probability,elite\n",
    );
    for report in &outcome.route.trace {
        for r in &report.records {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{}\n",
                report.generation_index,
                r.label,
                r.chromosome,
                r.nodes_visited,
                r.available_bandwidth,
                r.fitness,
                r.selection_probability,
                r.elite
            ));
        }
    }
    out.push_str(&format!(
        "route,,{},{},{},,{:.6},\n",
        outcome.route.path,
        outcome.route.path.node_count(),
        outcome.route.bottleneck,
        outcome.route.probability
    ));
    out
}

#[derive(Serialize)]
struct JsonOutcome<'a> {
    route: &'a RouteResult<f64>,
    oracle: Option<&'a RouteResult<f64>>,
    from_cache: bool,
    max_hops: usize,
}

/// JSON document embedding the full trace.
pub fn render_json(outcome: &RouteOutcome) -> String {
    let doc = JsonOutcome {
        route: &outcome.route,
        oracle: outcome.oracle.as_ref(),
        from_cache: outcome.from_cache,
        max_hops: outcome.max_hops,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("outcome serializes");
    text.push('\n');
    text
}

pub fn render_outcome(outcome: &RouteOutcome, format: crate::run::OutputFormat) -> String {
    match format {
        crate::run::OutputFormat::Text => render_text(outcome),
        crate::run::OutputFormat::Csv => render_csv(outcome),
        crate::run::OutputFormat::Json => render_json(outcome),
    }
}

/// Per-seed CSV rows for a sweep.
pub fn render_sweep_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(
        "seed,status,ga_path,ga_hops,ga_bottleneck,oracle_path,oracle_hops,oracle_bottleneck,first_generation_with_oracle_path,elite_is_oracle\n",
    );
    for row in &summary.rows {
        let opt_path = |p: &Option<garoute_core::Chromosome>| {
            p.as_ref().map(|c| c.to_string()).unwrap_or_default()
        };
        let opt_num = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_usize = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.seed,
            row.status,
            opt_path(&row.ga_path),
            opt_usize(&row.ga_hops),
            opt_num(&row.ga_bottleneck),
            opt_path(&row.oracle_path),
            opt_usize(&row.oracle_hops),
            opt_num(&row.oracle_bottleneck),
            opt_usize(&row.first_generation_with_oracle_path),
            row.elite_is_oracle.map(|b| b.to_string()).unwrap_or_default(),
        ));
    }
    out
}

/// Human-readable sweep summary.
pub fn render_sweep_summary(summary: &SweepSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Sweep: {} runs (seeds {}..={})\n",
        summary.rows.len(),
        summary.seed_range.0,
        summary.seed_range.1
    ));
    out.push_str(&format!(
        "Oracle agreement: {}/{} ({:.1}%)\n",
        summary.agreements,
        summary.comparable,
        summary.agreement_rate * 100.0
    ));
    out.push_str(&format!("GA no-route runs: {}\n", summary.ga_no_route));
    out.push_str(&format!(
        "Runs without a feasible demand: {}\n",
        summary.no_feasible_demand
    ));
    out.push_str(&format!("Errored runs: {}\n", summary.errors));
    match summary.mean_generations_to_oracle {
        Some(mean) => out.push_str(&format!(
            "Mean generations until the oracle path first appears: {mean:.2}\n"
        )),
        None => out.push_str("Mean generations until the oracle path first appears: n/a\n"),
    }
    let disagreeing: Vec<u64> = summary
        .rows
        .iter()
        .filter(|r| matches!(r.status, RunStatus::Disagreed))
        .map(|r| r.seed)
        .collect();
    if !disagreeing.is_empty() {
        out.push_str(&format!("Disagreeing seeds: {disagreeing:?}\n"));
    }
    out
}
