//! Graph input formats and the classification summary shared by the CLI
//! and the service.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use linksmooth::multigraph::{GraphJson, MgfError, Multigraph};
use linksmooth::solver::{Outcome, Solver, SolverError};
use linksmooth::theory::{classify_by_counts, detect_l_patterns, find_edge_disjoint_spanning_trees, LPattern, TreePair};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Mgf,
    Json,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Mgf(#[from] MgfError),
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A graph in a request body: MGF text or the JSON object form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphInput {
    Mgf(String),
    Json(GraphJson),
}

impl GraphInput {
    pub fn into_graph(self) -> Result<Multigraph, String> {
        match self {
            GraphInput::Mgf(text) => Multigraph::parse_mgf(&text).map_err(|e| e.to_string()),
            GraphInput::Json(j) => Multigraph::try_from(j).map_err(|e| e.to_string()),
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Multigraph, InputError> {
    match format {
        GraphFormat::Mgf => Ok(Multigraph::parse_mgf(text)?),
        GraphFormat::Json => Ok(serde_json::from_str(text)?),
    }
}

/// Reads a graph file; without an explicit format, `.json` files are JSON
/// and everything else MGF.
pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<Multigraph, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let format = format.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
        Some("json") => GraphFormat::Json,
        _ => GraphFormat::Mgf,
    });
    parse_graph(&text, format)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub outcome: Outcome,
    pub v: usize,
    pub e: usize,
    /// `L` when the vertex and edge counts alone decide the game.
    pub count_rule: Option<Outcome>,
    pub patterns: Vec<LPattern>,
    pub tree_pair: Option<TreePair>,
    pub note: String,
}

pub fn classify(solver: &Solver, g: &Multigraph) -> Result<Classification, SolverError> {
    let outcome = solver.outcome(g)?;
    let note = match outcome {
        Outcome::N => "K must move first",
        Outcome::P => "K must move second",
        Outcome::L => "L wins whoever moves first",
    };
    Ok(Classification {
        outcome,
        v: g.vertex_count(),
        e: g.edge_count(),
        count_rule: classify_by_counts(g.vertex_count(), g.edge_count()),
        patterns: detect_l_patterns(g),
        tree_pair: find_edge_disjoint_spanning_trees(g),
        note: note.to_string(),
    })
}

fn ids(es: &[linksmooth::multigraph::EdgeId]) -> String {
    es.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "outcome={}", self.outcome)?;
        writeln!(f, "v={} e={}", self.v, self.e)?;
        match self.count_rule {
            Some(o) => writeln!(f, "count rule applies: outcome {o} from v and e alone")?,
            None => writeln!(f, "count rule: not decided by v and e")?,
        }
        if self.patterns.is_empty() {
            writeln!(f, "L patterns: none")?;
        }
        for p in &self.patterns {
            writeln!(f, "L pattern: {}", describe(p))?;
        }
        match &self.tree_pair {
            Some(p) => writeln!(f, "tree pair: t1=[{}] t2=[{}]", ids(&p.t1), ids(&p.t2))?,
            None => writeln!(f, "tree pair: none")?,
        }
        writeln!(f, "note: {}", self.note)
    }
}

fn describe(p: &LPattern) -> String {
    match p {
        LPattern::CutEdge { edge } | LPattern::Loop { edge } => format!("{} (edge {edge})", p.name()),
        LPattern::MultiEdgeOver2 { u, w, edges } => format!("{} ({u}-{w}: edges {})", p.name(), ids(edges)),
        LPattern::AdjacentDeg2NotDigon { u, w, edge } => format!("{} ({u}, {w} via edge {edge})", p.name()),
    }
}
