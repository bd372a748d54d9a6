//! Exhaustive verification suites behind `linksmooth verify`.

use std::fmt;
use std::str::FromStr;

use linksmooth::multigraph::{enumerate_connected_by_edges, Multigraph};
use linksmooth::planegraph::is_planar;
use linksmooth::solver::{Outcome, Solver};
use linksmooth::theory::{
    check_pairing_strategy, classify_by_counts, conjecture_scan, detect_l_patterns,
    find_edge_disjoint_spanning_trees, verify_grid, GraphRecord,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    Grid,
    Conjecture,
    Patterns,
    Strategy,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grid" => Ok(Suite::Grid),
            "conjecture" => Ok(Suite::Conjecture),
            "patterns" => Ok(Suite::Patterns),
            "strategy" => Ok(Suite::Strategy),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Grid => "grid",
            Suite::Conjecture => "conjecture",
            Suite::Patterns => "patterns",
            Suite::Strategy => "strategy",
        })
    }
}

impl Suite {
    pub fn default_max_e(self) -> usize {
        match self {
            Suite::Grid => 9,
            Suite::Patterns => 8,
            Suite::Conjecture | Suite::Strategy => 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub max_e: usize,
    pub max_v: usize,
    pub loops: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub records: Vec<GraphRecord>,
    pub violations: Vec<String>,
    pub summary: String,
}

fn record(solver: &Solver, g: &Multigraph) -> GraphRecord {
    GraphRecord {
        v: g.vertex_count(),
        e: g.edge_count(),
        outcome: solver.outcome(g).expect("connected graph with edges"),
        certificate: g.certificate().to_hex(),
        graph: g.clone(),
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions, solver: &Solver) -> SuiteReport {
    match suite {
        Suite::Grid => {
            let report = verify_grid(solver, opts.max_v, opts.max_e, opts.loops);
            let violations = report
                .violations()
                .iter()
                .map(|c| format!("cell ({},{}) has {:?}, allowed {:?}", c.v, c.e, c.outcomes_found, c.allowed()))
                .collect();
            let mut summary = String::new();
            for c in &report.cells {
                let counts: Vec<String> = c.counts.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                summary.push_str(&format!("v={} e={} {}\n", c.v, c.e, counts.join(" ")));
            }
            summary.push_str(&format!("{} cells, {} graphs", report.cells.len(), report.records.len()));
            SuiteReport {
                records: report.records,
                violations,
                summary,
            }
        }
        Suite::Conjecture => {
            let report = conjecture_scan(solver, opts.max_e, opts.loops);
            let violations = report
                .counterexamples
                .iter()
                .map(|c| {
                    format!(
                        "counterexample {}: outcome {} with tree pair {}\n{}",
                        c.certificate,
                        c.outcome,
                        if c.pair.is_some() { "present" } else { "absent" },
                        serde_json::to_string(c).unwrap()
                    )
                })
                .collect();
            let summary = format!(
                "{} graphs on e = 2(v-1), {} agree ({} P with a tree pair); {} counterexamples",
                report.checked,
                report.agreements,
                report.p_with_pair,
                report.counterexamples.len()
            );
            SuiteReport {
                records: report.records,
                violations,
                summary,
            }
        }
        Suite::Patterns => {
            let mut records = Vec::new();
            let mut violations = Vec::new();
            let mut decided = 0;
            for g in enumerate_connected_by_edges(opts.max_v, opts.max_e, opts.loops)
                .iter()
                .skip(1)
                .flatten()
                .filter(|g| is_planar(g))
            {
                let r = record(solver, g);
                let by_counts = classify_by_counts(r.v, r.e).is_some();
                let by_pattern = r.e.is_multiple_of(2) && !detect_l_patterns(g).is_empty();
                if by_counts || by_pattern {
                    decided += 1;
                    if r.outcome != Outcome::L {
                        violations.push(format!("{} predicted L, solver says {}", r.certificate, r.outcome));
                    }
                }
                records.push(r);
            }
            let summary = format!("{} planar graphs, {decided} predicted L by counts or patterns", records.len());
            SuiteReport {
                records,
                violations,
                summary,
            }
        }
        Suite::Strategy => {
            let mut records = Vec::new();
            let mut violations = Vec::new();
            let mut states = 0;
            for g in enumerate_connected_by_edges(opts.max_v, opts.max_e, false).iter().skip(1).flatten() {
                if g.edge_count() != 2 * (g.vertex_count() - 1) {
                    continue;
                }
                let Some(pair) = find_edge_disjoint_spanning_trees(g) else { continue };
                let r = record(solver, g);
                if r.outcome != Outcome::P {
                    violations.push(format!("{} has a tree pair but is {}", r.certificate, r.outcome));
                }
                match check_pairing_strategy(g, &pair) {
                    Ok(rep) => states += rep.states,
                    Err(f) => violations.push(format!("{}: {f}", r.certificate)),
                }
                records.push(r);
            }
            let summary = format!(
                "{} graphs with a tree pair, pairing strategy checked over {states} adversary states",
                records.len()
            );
            SuiteReport {
                records,
                violations,
                summary,
            }
        }
    }
}
