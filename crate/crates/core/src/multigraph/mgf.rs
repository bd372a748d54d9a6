//! MGF text format: a `v <count>` line, then one `e <u> <w>` line per edge.
//! Vertices are 0-indexed, `u == w` is a loop, `#` starts a comment.

use thiserror::Error;

use super::{GraphError, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgfError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `v <count>` line")]
    MissingVertexCount,
    #[error("line {line}: endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        line: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl Multigraph {
    pub fn parse_mgf(text: &str) -> Result<Multigraph, MgfError> {
        let mut graph: Option<Multigraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut parts = body.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|p| {
                    p.parse::<usize>().map_err(|_| MgfError::Malformed {
                        line,
                        msg: format!("`{p}` is not a non-negative integer"),
                    })
                })
                .collect::<Result<_, _>>()?;
            match (tag, nums.as_slice(), graph.as_mut()) {
                ("v", [n], None) => graph = Some(Multigraph::new(*n)?),
                ("v", [_], Some(_)) => {
                    return Err(MgfError::Malformed {
                        line,
                        msg: "duplicate `v` line".into(),
                    })
                }
                ("e", [_, _], None) => return Err(MgfError::MissingVertexCount),
                ("e", [u, w], Some(g)) => {
                    let n = g.vertex_count();
                    if let Some(&bad) = [*u, *w].iter().find(|&&x| x >= n) {
                        return Err(MgfError::EndpointOutOfRange {
                            line,
                            endpoint: bad,
                            vertex_count: n,
                        });
                    }
                    g.add_edge(VertexId(*u), VertexId(*w))?;
                }
                _ => {
                    return Err(MgfError::Malformed {
                        line,
                        msg: format!("expected `v <n>` or `e <u> <w>`, got `{body}`"),
                    })
                }
            }
        }
        graph.ok_or(MgfError::MissingVertexCount)
    }

    /// Live edges only, in id order. Ids are therefore renumbered densely.
    pub fn to_mgf(&self) -> String {
        let mut out = format!("v {}\n", self.vertex_count());
        for (_, u, w) in self.edges() {
            out.push_str(&format!("e {} {}\n", u.0, w.0));
        }
        out
    }
}
