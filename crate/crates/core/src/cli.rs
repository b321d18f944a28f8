//! Command-line front end: diagram specs in, counts, tables and checks
//! out, as aligned text or as JSON.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 the
//! requested routes disagree, 4 the search budget ran out. Text output
//! groups digits with underscores once a value is wider than four digits;
//! JSON carries plain decimal strings. Timings go to stderr in text mode
//! and into the `timing_ms` field in JSON, which is the one field excluded
//! from determinism comparisons.

use std::fmt;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{
    e_breakdown, e_closed, e_of, e_recursive, factorize, format_factorization, multinomial,
    uniform_formula_sides, Count, CountError,
};
use crate::diagram::{
    all_connected_up_to_rank, parse_diagram, ConnectedDiagram, Diagram, DiagramError,
};
use crate::series::{abel_sum, seq_a, seq_b, seq_d, verify_convolution_identities, SeriesPrefix};
use crate::weyl::{build_root_system, Budget, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] DiagramError),
    #[error("{0}")]
    Usage(String),
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("search budget of {limit} branches exhausted; retry with --budget high or a custom limit")]
    BudgetExhausted { limit: u64 },
    #[error(transparent)]
    Count(#[from] CountError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_BAD_INPUT,
            CliError::RouteDisagreement(_) => EXIT_DISAGREEMENT,
            CliError::BudgetExhausted { .. } => EXIT_BUDGET,
            CliError::Count(_) => EXIT_CHECK_FAILED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::RouteDisagreement(_) => "route-disagreement",
            CliError::BudgetExhausted { .. } => "budget-exhausted",
            CliError::Count(_) => "check",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dynkin-count",
    version,
    about = "Exact counts of complete exceptional sequences for Dynkin diagrams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count e(Δ) for a spec such as "E6" or "B3+A2+A2".
    Count {
        spec: String,
        /// Comma-separated routes to run and cross-check.
        #[arg(long, value_delimiter = ',', default_value = "closed")]
        routes: Vec<Route>,
        /// Search budget for the oracle route: low, high, or a branch count.
        #[arg(long, default_value = "low", value_parser = parse_budget)]
        budget: Budget,
    },
    /// Check e(Δ)·|W| = n!·h^n for every connected diagram up to a rank.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
    /// Count chains by the Weyl-group search alone, then compare.
    Chains {
        spec: String,
        #[arg(long, default_value = "low", value_parser = parse_budget)]
        budget: Budget,
    },
    /// Print a reference table: e, h-w, sequences, or breakdown:<diagram>.
    Table {
        kind: String,
        /// Maximum rank for e and h-w (default 8), order for sequences
        /// (default 10).
        n: Option<usize>,
    },
    /// Check the convolution identities and the Abel expansion.
    Series {
        #[arg(default_value_t = 20)]
        order: usize,
    },
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Closed form per family, shuffled across components.
    Closed,
    /// The vertex-deletion recursion, no closed forms consulted.
    Recursive,
    /// Exhaustive reflection-factorization search in the Weyl group.
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Route::Closed => "closed",
            Route::Recursive => "recursive",
            Route::Oracle => "oracle",
        };
        write!(f, "{name}")
    }
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    match s {
        "low" => Ok(Budget::Low),
        "high" => Ok(Budget::High),
        other => other
            .parse::<u64>()
            .map(Budget::Limit)
            .map_err(|_| format!("budget must be low, high or a branch count, got {other:?}")),
    }
}

/// One computed count. `e` and all other values are plain decimal strings;
/// `timing_ms` is wall-clock and excluded from output comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub spec: String,
    pub route: Route,
    pub e: String,
    pub factorization: Vec<(u64, u32)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub breakdown: Option<BreakdownReport>,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownReport {
    pub coxeter_number: u64,
    pub rows: Vec<BreakdownRowReport>,
    pub sum: String,
    pub total: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownRowReport {
    pub vertex: usize,
    pub deleted: String,
    pub e: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOutcome {
    pub reports: Vec<Report>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainsOutcome {
    pub report: Report,
    pub branches: u64,
    pub closed: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub diagram: String,
    pub e: String,
    pub weyl_order: String,
    pub rank_factorial_h_pow: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub max_rank: usize,
    pub rows: Vec<VerifyRow>,
    pub all_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "kebab-case")]
pub enum TableOutcome {
    E {
        max_rank: usize,
        rows: Vec<CountRow>,
    },
    CoxeterWeyl {
        max_rank: usize,
        rows: Vec<GroupRow>,
    },
    Sequences {
        order: usize,
        rows: Vec<SequenceRow>,
    },
    Breakdown {
        report: Report,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub diagram: String,
    pub e: String,
    pub factorization: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRow {
    pub diagram: String,
    pub coxeter_number: u64,
    pub weyl_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: usize,
    pub a: String,
    pub b: String,
    pub d_doubled: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub label: String,
    pub closed_form: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<usize>,
    pub coeff_at_order: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub terms: Option<Vec<TermReport>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermReport {
    pub k: usize,
    pub binomial: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOutcome {
    pub order: usize,
    pub identities: Vec<IdentityReport>,
    pub abel_checks: u64,
    pub abel_failures: u64,
    pub all_ok: bool,
}

fn group_digits(decimal: &str) -> String {
    if decimal.len() <= 4 {
        return decimal.to_string();
    }
    let mut out = String::with_capacity(decimal.len() + decimal.len() / 3);
    for (i, c) in decimal.chars().enumerate() {
        if i > 0 && (decimal.len() - i).is_multiple_of(3) {
            out.push('_');
        }
        out.push(c);
    }
    out
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn make_report(
    spec: String,
    route: Route,
    e: &Count,
    breakdown: Option<BreakdownReport>,
    start: Instant,
) -> Result<Report, CliError> {
    Ok(Report {
        spec,
        route,
        e: e.to_string(),
        factorization: factorize(e)?,
        breakdown,
        timing_ms: elapsed_ms(start),
    })
}

fn oracle_count(diagram: &Diagram, budget: Budget) -> Result<Count, CliError> {
    let ranks: Vec<u64> = diagram.components().iter().map(|c| c.rank() as u64).collect();
    let mut result = multinomial(&ranks);
    for component in diagram.components() {
        let system = build_root_system(component);
        match system.count_chain_factorizations(budget) {
            SearchOutcome::Complete { count, .. } => result *= count,
            SearchOutcome::BudgetExhausted { limit } => {
                return Err(CliError::BudgetExhausted { limit });
            }
        }
    }
    Ok(result)
}

pub fn cmd_count(spec: &str, routes: &[Route], budget: Budget) -> Result<CountOutcome, CliError> {
    let diagram = parse_diagram(spec)?;
    let canonical = diagram.to_string();
    let mut reports = Vec::with_capacity(routes.len());
    for &route in routes {
        let start = Instant::now();
        let e = match route {
            Route::Closed => e_of(&diagram),
            Route::Recursive => e_recursive(&diagram),
            Route::Oracle => oracle_count(&diagram, budget)?,
        };
        reports.push(make_report(canonical.clone(), route, &e, None, start)?);
    }
    let agree = reports.windows(2).all(|pair| pair[0].e == pair[1].e);
    Ok(CountOutcome { reports, agree })
}

pub fn cmd_chains(spec: &str, budget: Budget) -> Result<ChainsOutcome, CliError> {
    let diagram = parse_diagram(spec)?;
    let Some(connected) = diagram.single_component() else {
        return Err(CliError::Usage(format!(
            "chains needs a single connected diagram, got {}",
            if diagram.is_empty() { "an empty one" } else { spec.trim() }
        )));
    };
    let system = build_root_system(&connected);
    let start = Instant::now();
    match system.count_chain_factorizations(budget) {
        SearchOutcome::Complete { count, branches } => {
            let report = make_report(connected.to_string(), Route::Oracle, &count, None, start)?;
            let closed = e_closed(&connected);
            Ok(ChainsOutcome {
                matches: count == closed,
                closed: closed.to_string(),
                branches,
                report,
            })
        }
        SearchOutcome::BudgetExhausted { limit } => Err(CliError::BudgetExhausted { limit }),
    }
}

pub fn cmd_verify(max_rank: usize) -> Result<VerifyOutcome, CliError> {
    if max_rank == 0 {
        return Err(CliError::Usage("--max-rank must be at least 1".to_string()));
    }
    let rows: Vec<VerifyRow> = all_connected_up_to_rank(max_rank)
        .iter()
        .map(|d| {
            let sides = uniform_formula_sides(d);
            VerifyRow {
                diagram: d.to_string(),
                e: sides.e.to_string(),
                weyl_order: sides.weyl_order.to_string(),
                rank_factorial_h_pow: sides.rank_factorial_h_pow.to_string(),
                ok: sides.holds(),
            }
        })
        .collect();
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(VerifyOutcome {
        max_rank,
        rows,
        all_ok,
    })
}

pub fn cmd_table(kind: &str, n: Option<usize>) -> Result<TableOutcome, CliError> {
    if let Some(spec) = kind.strip_prefix("breakdown:") {
        let diagram = parse_diagram(spec)?;
        let Some(connected) = diagram.single_component() else {
            return Err(CliError::Usage(format!(
                "breakdown needs a single connected diagram, got {spec:?}"
            )));
        };
        return Ok(TableOutcome::Breakdown {
            report: breakdown_report(&connected)?,
        });
    }
    match kind {
        "e" => {
            let max_rank = n.unwrap_or(8);
            let rows = all_connected_up_to_rank(max_rank)
                .iter()
                .map(|d| {
                    let e = e_closed(d);
                    Ok(CountRow {
                        diagram: d.to_string(),
                        factorization: format_factorization(&factorize(&e)?),
                        e: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(TableOutcome::E { max_rank, rows })
        }
        "h-w" => {
            let max_rank = n.unwrap_or(8);
            let rows = all_connected_up_to_rank(max_rank)
                .iter()
                .map(|d| GroupRow {
                    diagram: d.to_string(),
                    coxeter_number: d.coxeter_number(),
                    weyl_order: d.weyl_order().to_string(),
                })
                .collect();
            Ok(TableOutcome::CoxeterWeyl { max_rank, rows })
        }
        "sequences" => {
            let order = n.unwrap_or(10);
            let (a, b, d) = (seq_a(order), seq_b(order), seq_d(order));
            let rows = (0..=order)
                .map(|i| SequenceRow {
                    n: i,
                    a: a.coeff(i).to_string(),
                    b: b.coeff(i).to_string(),
                    d_doubled: (d.coeff(i) * 2i32).to_string(),
                })
                .collect();
            Ok(TableOutcome::Sequences { order, rows })
        }
        other => Err(CliError::Usage(format!(
            "unknown table {other:?}; expected e, h-w, sequences or breakdown:<diagram>"
        ))),
    }
}

fn breakdown_report(connected: &ConnectedDiagram) -> Result<Report, CliError> {
    let start = Instant::now();
    let breakdown = e_breakdown(connected);
    let rows: Vec<BreakdownRowReport> = breakdown
        .rows
        .iter()
        .map(|r| BreakdownRowReport {
            vertex: r.vertex,
            deleted: r.deleted.to_string(),
            e: r.value.to_string(),
        })
        .collect();
    let sum: Count = breakdown.rows.iter().map(|r| &r.value).sum();
    let report_breakdown = BreakdownReport {
        coxeter_number: breakdown.coxeter_number,
        rows,
        sum: sum.to_string(),
        total: breakdown.total.to_string(),
    };
    make_report(
        connected.to_string(),
        Route::Recursive,
        &breakdown.total,
        Some(report_breakdown),
        start,
    )
}

pub fn cmd_series(order: usize) -> SeriesOutcome {
    let report = verify_convolution_identities(order);
    let a = seq_a(order);
    let b = seq_b(order);
    let d = seq_d(order);
    let aa = a.binomial_convolution(&a).expect("orders match");
    let ab = a.binomial_convolution(&b).expect("orders match");
    let ad = a.binomial_convolution(&d).expect("orders match");
    let identity = |label: &str, closed_form: &str, failure, conv: &SeriesPrefix, left: &SeriesPrefix, right: &SeriesPrefix| {
        let terms = (order <= 8).then(|| {
            (0..=order)
                .map(|k| TermReport {
                    k,
                    binomial: crate::counting::binomial(order as u64, k as u64).to_string(),
                    left: left.coeff(k).to_string(),
                    right: right.coeff(order - k).to_string(),
                })
                .collect()
        });
        IdentityReport {
            label: label.to_string(),
            closed_form: closed_form.to_string(),
            first_failure: failure,
            coeff_at_order: conv.coeff(order).to_string(),
            terms,
        }
    };
    let identities = vec![
        identity("A*A", "2(n+2)^(n-1)", report.a_conv_a, &aa, &a, &a),
        identity("A*B", "(n+1)^n", report.a_conv_b, &ab, &a, &b),
        identity("A*D", "B(n)", report.a_conv_d, &ad, &a, &d),
    ];
    let mut abel_checks = 0u64;
    let mut abel_failures = 0u64;
    for x in -3i64..=3 {
        if x == 0 {
            continue;
        }
        for y in -3i64..=3 {
            for z in -2i64..=2 {
                for n in 0..=6u32 {
                    abel_checks += 1;
                    let expected = num_traits::pow(num_bigint::BigInt::from(x + y), n as usize);
                    if abel_sum(x, y, z, n).expect("x is nonzero") != expected {
                        abel_failures += 1;
                    }
                }
            }
        }
    }
    let all_ok = identities.iter().all(|i| i.first_failure.is_none()) && abel_failures == 0;
    SeriesOutcome {
        order,
        identities,
        abel_checks,
        abel_failures,
        all_ok,
    }
}

impl CountOutcome {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            writeln!(
                out,
                "e({}) = {} = {}   [{}]",
                r.spec,
                group_digits(&r.e),
                format_factorization(&r.factorization),
                r.route
            )
            .unwrap();
        }
        if self.reports.len() > 1 && self.agree {
            writeln!(out, "routes agree").unwrap();
        }
        out
    }

    pub fn disagreement(&self) -> String {
        self.reports
            .iter()
            .map(|r| format!("{}={}", r.route, r.e))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl ChainsOutcome {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "chains({}) = {} = {}   [oracle, {} branches]",
            self.report.spec,
            group_digits(&self.report.e),
            format_factorization(&self.report.factorization),
            group_digits(&self.branches.to_string())
        )
        .unwrap();
        if self.matches {
            writeln!(out, "matches the closed form {}", group_digits(&self.closed)).unwrap();
        }
        out
    }
}

impl VerifyOutcome {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let grouped: Vec<(String, String, String)> = self
            .rows
            .iter()
            .map(|r| {
                (
                    group_digits(&r.e),
                    group_digits(&r.weyl_order),
                    group_digits(&r.rank_factorial_h_pow),
                )
            })
            .collect();
        let width_d = self.rows.iter().map(|r| r.diagram.len()).max().unwrap_or(2);
        let width_e = grouped.iter().map(|(e, _, _)| e.len()).max().unwrap_or(1);
        let width_w = grouped.iter().map(|(_, w, _)| w.len()).max().unwrap_or(1);
        for (r, (e, w, product)) in self.rows.iter().zip(&grouped) {
            writeln!(
                out,
                "{:<width_d$}  e = {:>width_e$}  |W| = {:>width_w$}  n!·h^n = {}  {}",
                r.diagram,
                e,
                w,
                product,
                if r.ok { "ok" } else { "MISMATCH" },
            )
            .unwrap();
        }
        if self.all_ok {
            writeln!(
                out,
                "e(Δ)·|W| = n!·h^n holds for all {} diagrams of rank <= {}",
                self.rows.len(),
                self.max_rank
            )
            .unwrap();
        }
        out
    }
}

impl TableOutcome {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            TableOutcome::E { rows, .. } => {
                let width_d = rows.iter().map(|r| r.diagram.len()).max().unwrap_or(2);
                let width_e = rows
                    .iter()
                    .map(|r| group_digits(&r.e).len())
                    .max()
                    .unwrap_or(1);
                for r in rows {
                    writeln!(
                        out,
                        "{:<width_d$}  {:>width_e$}  = {}",
                        r.diagram,
                        group_digits(&r.e),
                        r.factorization
                    )
                    .unwrap();
                }
            }
            TableOutcome::CoxeterWeyl { rows, .. } => {
                let width_d = rows.iter().map(|r| r.diagram.len()).max().unwrap_or(2);
                let width_h = rows
                    .iter()
                    .map(|r| r.coxeter_number.to_string().len())
                    .max()
                    .unwrap_or(1);
                for r in rows {
                    writeln!(
                        out,
                        "{:<width_d$}  h = {:>width_h$}  |W| = {}",
                        r.diagram,
                        r.coxeter_number,
                        group_digits(&r.weyl_order)
                    )
                    .unwrap();
                }
            }
            TableOutcome::Sequences { rows, .. } => {
                let grouped: Vec<(String, String, String, String)> = rows
                    .iter()
                    .map(|r| {
                        (
                            r.n.to_string(),
                            group_digits(&r.a),
                            group_digits(&r.b),
                            group_digits(&r.d_doubled),
                        )
                    })
                    .collect();
                let width = |pick: fn(&(String, String, String, String)) -> &String, floor: usize| {
                    grouped.iter().map(|r| pick(r).len()).max().unwrap_or(1).max(floor)
                };
                let (w_n, w_a, w_b, w_d) = (
                    width(|r| &r.0, 1),
                    width(|r| &r.1, 4),
                    width(|r| &r.2, 4),
                    width(|r| &r.3, 5),
                );
                writeln!(
                    out,
                    "{:>w_n$}  {:>w_a$}  {:>w_b$}  {:>w_d$}",
                    "n", "A(n)", "B(n)", "2D(n)"
                )
                .unwrap();
                for (n, a, b, d) in &grouped {
                    writeln!(out, "{n:>w_n$}  {a:>w_a$}  {b:>w_b$}  {d:>w_d$}").unwrap();
                }
            }
            TableOutcome::Breakdown { report } => {
                let breakdown = report
                    .breakdown
                    .as_ref()
                    .expect("breakdown tables carry breakdown data");
                writeln!(
                    out,
                    "e({}) by vertex deletion, h = {}",
                    report.spec, breakdown.coxeter_number
                )
                .unwrap();
                let width_d = breakdown
                    .rows
                    .iter()
                    .map(|r| r.deleted.len())
                    .max()
                    .unwrap_or(1);
                for r in &breakdown.rows {
                    writeln!(
                        out,
                        "  vertex {}  ->  {:<width_d$}  e = {}",
                        r.vertex,
                        r.deleted,
                        group_digits(&r.e)
                    )
                    .unwrap();
                }
                writeln!(
                    out,
                    "e({}) = ({}/2)·{} = {} = {}",
                    report.spec,
                    breakdown.coxeter_number,
                    group_digits(&breakdown.sum),
                    group_digits(&breakdown.total),
                    format_factorization(&report.factorization)
                )
                .unwrap();
            }
        }
        out
    }
}

impl SeriesOutcome {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "convolution identities through order {}:", self.order).unwrap();
        for identity in &self.identities {
            let verdict = match identity.first_failure {
                None => "holds".to_string(),
                Some(n) => format!("FAILS first at order {n}"),
            };
            writeln!(
                out,
                "  ({})(n) = {:<12} {}",
                identity.label, identity.closed_form, verdict
            )
            .unwrap();
            if let Some(terms) = &identity.terms {
                let rendered: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}·{}·{}", t.binomial, t.left, t.right))
                    .collect();
                writeln!(
                    out,
                    "  ({})({}) = {} = {}",
                    identity.label,
                    self.order,
                    rendered.join(" + "),
                    group_digits(&identity.coeff_at_order)
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "  ({})({}) = {}",
                    identity.label,
                    self.order,
                    group_digits(&identity.coeff_at_order)
                )
                .unwrap();
            }
        }
        writeln!(
            out,
            "Abel expansion: {} parameter triples, {} collapse to (x+y)^n",
            self.abel_checks,
            if self.abel_failures == 0 {
                "all".to_string()
            } else {
                format!("{} FAIL to", self.abel_failures)
            }
        )
        .unwrap();
        out
    }
}

/// Everything `main` needs to finish: the two streams and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut rendered = serde_json::to_string_pretty(value).expect("reports serialize");
    rendered.push('\n');
    rendered
}

fn failure(error: &CliError, json: bool) -> Execution {
    let stdout = if json {
        json_line(&serde_json::json!({
            "error": { "kind": error.kind(), "message": error.to_string() }
        }))
    } else {
        String::new()
    };
    Execution {
        stdout,
        stderr: format!("error: {error}\n"),
        exit_code: error.exit_code(),
    }
}

/// Runs one parsed invocation to completion. Never panics on user input;
/// all failures land in the exit code.
pub fn run(cli: &Cli) -> Execution {
    let start = Instant::now();
    let mut execution = match &cli.command {
        Command::Count {
            spec,
            routes,
            budget,
        } => match cmd_count(spec, routes, *budget) {
            Err(error) => failure(&error, cli.json),
            Ok(outcome) => {
                let stdout = if cli.json {
                    json_line(&outcome)
                } else {
                    outcome.to_text()
                };
                if outcome.agree {
                    Execution {
                        stdout,
                        stderr: String::new(),
                        exit_code: EXIT_OK,
                    }
                } else {
                    let error = CliError::RouteDisagreement(outcome.disagreement());
                    Execution {
                        stdout,
                        stderr: format!("error: {error}\n"),
                        exit_code: error.exit_code(),
                    }
                }
            }
        },
        Command::Verify { max_rank } => match cmd_verify(*max_rank) {
            Err(error) => failure(&error, cli.json),
            Ok(outcome) => {
                let stdout = if cli.json {
                    json_line(&outcome)
                } else {
                    outcome.to_text()
                };
                let exit_code = if outcome.all_ok { EXIT_OK } else { EXIT_CHECK_FAILED };
                let stderr = if outcome.all_ok {
                    String::new()
                } else {
                    "error: the uniform formula failed; see rows marked MISMATCH\n".to_string()
                };
                Execution {
                    stdout,
                    stderr,
                    exit_code,
                }
            }
        },
        Command::Chains { spec, budget } => match cmd_chains(spec, *budget) {
            Err(error) => failure(&error, cli.json),
            Ok(outcome) => {
                let stdout = if cli.json {
                    json_line(&outcome)
                } else {
                    outcome.to_text()
                };
                if outcome.matches {
                    Execution {
                        stdout,
                        stderr: String::new(),
                        exit_code: EXIT_OK,
                    }
                } else {
                    let error = CliError::RouteDisagreement(format!(
                        "oracle={}, closed={}",
                        outcome.report.e, outcome.closed
                    ));
                    Execution {
                        stdout,
                        stderr: format!("error: {error}\n"),
                        exit_code: error.exit_code(),
                    }
                }
            }
        },
        Command::Table { kind, n } => match cmd_table(kind, *n) {
            Err(error) => failure(&error, cli.json),
            Ok(outcome) => Execution {
                stdout: if cli.json {
                    json_line(&outcome)
                } else {
                    outcome.to_text()
                },
                stderr: String::new(),
                exit_code: EXIT_OK,
            },
        },
        Command::Series { order } => {
            let outcome = cmd_series(*order);
            let exit_code = if outcome.all_ok { EXIT_OK } else { EXIT_CHECK_FAILED };
            let stderr = if outcome.all_ok {
                String::new()
            } else {
                "error: a series identity failed; see the report\n".to_string()
            };
            Execution {
                stdout: if cli.json {
                    json_line(&outcome)
                } else {
                    outcome.to_text()
                },
                stderr,
                exit_code,
            }
        }
    };
    if !cli.json {
        writeln!(execution.stderr, "elapsed: {} ms", elapsed_ms(start)).unwrap();
    }
    execution
}
