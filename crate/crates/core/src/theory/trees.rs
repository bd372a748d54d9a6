//! Pairs of edge-disjoint spanning trees and K's pairing strategy.
//!
//! With the edge set split into spanning trees `T1`, `T2`, K answers every L
//! move inside the other tree: after L contracts an edge of `Ti`, `Tj` holds
//! one cycle and K deletes an edge on it; after L deletes an edge of `Ti`,
//! `Ti` falls into two pieces and K contracts a `Tj` edge joining them.
//! Either way both sets are spanning trees again, two edges fewer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::{EdgeId, Multigraph};
use crate::solver::{Action, Move};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreePair {
    pub t1: Vec<EdgeId>,
    pub t2: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreePairError {
    #[error("edge {0} is in both trees")]
    Shared(EdgeId),
    #[error("edge {0} is in neither tree")]
    Uncovered(EdgeId),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("tree {tree} is not a spanning tree")]
    NotSpanning { tree: u8 },
    #[error("move {0} does not touch an edge of the pair")]
    MoveOutsidePair(Move),
    #[error("no repairing edge for {0}")]
    NoRepair(Move),
}

/// Union-find with undo, for backtracking.
struct Forest {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl Forest {
    fn new(n: usize) -> Self {
        Forest {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Joins the classes; false (and nothing recorded) if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(Some((ra, rb)));
        true
    }

    fn undo(&mut self) {
        if let Some(Some((ra, rb))) = self.history.pop() {
            self.parent[rb] = rb;
            self.size[ra] -= self.size[rb];
        }
    }
}

fn is_spanning_tree(g: &Multigraph, edges: &[EdgeId]) -> Result<bool, TreePairError> {
    let n = g.vertex_count();
    if edges.len() + 1 != n {
        return Ok(false);
    }
    let mut f = Forest::new(n);
    for &e in edges {
        let (u, w) = g.endpoints(e).map_err(|_| TreePairError::UnknownEdge(e))?;
        if !f.union(u.0, w.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl TreePair {
    pub fn new(mut t1: Vec<EdgeId>, mut t2: Vec<EdgeId>) -> Self {
        t1.sort_unstable();
        t2.sort_unstable();
        TreePair { t1, t2 }
    }

    pub fn empty() -> Self {
        TreePair::new(Vec::new(), Vec::new())
    }

    /// Checks that the sets partition the live edges and both span.
    pub fn validate(&self, g: &Multigraph) -> Result<(), TreePairError> {
        let mut owner = vec![0u8; g.edge_capacity()];
        for (tree, set) in [(1u8, &self.t1), (2, &self.t2)] {
            for &e in set.iter() {
                if !g.has_edge(e) {
                    return Err(TreePairError::UnknownEdge(e));
                }
                if owner[e.0] != 0 {
                    return Err(TreePairError::Shared(e));
                }
                owner[e.0] = tree;
            }
        }
        if let Some(e) = g.edge_ids().find(|e| owner[e.0] == 0) {
            return Err(TreePairError::Uncovered(e));
        }
        for (tree, set) in [(1u8, &self.t1), (2, &self.t2)] {
            if !is_spanning_tree(g, set)? {
                return Err(TreePairError::NotSpanning { tree });
            }
        }
        Ok(())
    }

    fn tree_of(&self, e: EdgeId) -> Option<u8> {
        if self.t1.binary_search(&e).is_ok() {
            Some(1)
        } else if self.t2.binary_search(&e).is_ok() {
            Some(2)
        } else {
            None
        }
    }
}

/// Exact search over edge bipartitions. Each edge goes to a tree only while
/// that tree stays a forest; the first edge is fixed in `t1` since the trees
/// are interchangeable.
pub fn find_edge_disjoint_spanning_trees(g: &Multigraph) -> Option<TreePair> {
    let n = g.vertex_count();
    let edges: Vec<(EdgeId, usize, usize)> = g.edges().map(|(e, u, w)| (e, u.0, w.0)).collect();
    if edges.len() != 2 * (n - 1) || !g.is_connected() {
        return None;
    }
    if edges.is_empty() {
        return Some(TreePair::empty());
    }
    struct Search<'a> {
        edges: &'a [(EdgeId, usize, usize)],
        forests: [Forest; 2],
        sides: Vec<u8>,
        cap: usize,
    }
    fn go(s: &mut Search, k: usize) -> bool {
        if k == s.edges.len() {
            return true;
        }
        let (_, u, w) = s.edges[k];
        let choices: &[u8] = if k == 0 { &[0] } else { &[0, 1] };
        for &side in choices {
            let used = s.sides.iter().filter(|&&x| x == side).count();
            if used == s.cap {
                continue;
            }
            if s.forests[usize::from(side)].union(u, w) {
                s.sides.push(side);
                if go(s, k + 1) {
                    return true;
                }
                s.sides.pop();
                s.forests[usize::from(side)].undo();
            }
        }
        false
    }
    let mut s = Search {
        edges: &edges,
        forests: [Forest::new(n), Forest::new(n)],
        sides: Vec::with_capacity(edges.len()),
        cap: n - 1,
    };
    if !go(&mut s, 0) {
        return None;
    }
    let pick = |side: u8| {
        edges
            .iter()
            .zip(&s.sides)
            .filter(|(_, &x)| x == side)
            .map(|(&(e, _, _), _)| e)
            .collect()
    };
    Some(TreePair::new(pick(0), pick(1)))
}

/// Partition into two forests by augmenting paths (matroid union), used as a
/// fast path; it must agree with [`find_edge_disjoint_spanning_trees`].
pub fn spanning_tree_pair_by_augmentation(g: &Multigraph) -> Option<TreePair> {
    let n = g.vertex_count();
    let edges: Vec<(EdgeId, usize, usize)> = g.edges().map(|(e, u, w)| (e, u.0, w.0)).collect();
    if edges.len() != 2 * (n - 1) || !g.is_connected() {
        return None;
    }
    let m = edges.len();
    // which forest holds each edge (by position in `edges`)
    let mut side: Vec<Option<usize>> = vec![None; m];

    // edge positions on the forest path between a and b, if connected
    let forest_path = |side: &[Option<usize>], f: usize, a: usize, b: usize| -> Option<Vec<usize>> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(_, u, w)) in edges.iter().enumerate() {
            if side[i] == Some(f) {
                adj[u].push((w, i));
                adj[w].push((u, i));
            }
        }
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                let mut path = Vec::new();
                let mut y = b;
                while let Some((p, e)) = prev[y] {
                    path.push(e);
                    y = p;
                }
                return Some(path);
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        None
    };

    for start in 0..m {
        // BFS over edges; label[y] = edge whose fundamental cycle contains y
        let mut label: Vec<Option<usize>> = vec![None; m];
        let mut visited = vec![false; m];
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut done = false;
        'bfs: while let Some(x) = queue.pop_front() {
            let (_, u, w) = edges[x];
            for f in 0..2 {
                if side[x] == Some(f) {
                    continue;
                }
                match forest_path(&side, f, u, w) {
                    None => {
                        // insert x into f and shift every edge back along the labels
                        let mut cur = x;
                        let mut target = f;
                        loop {
                            let old = side[cur];
                            side[cur] = Some(target);
                            match (label[cur], old) {
                                (Some(p), Some(o)) => {
                                    cur = p;
                                    target = o;
                                }
                                _ => break,
                            }
                        }
                        done = true;
                        break 'bfs;
                    }
                    Some(path) => {
                        for y in path {
                            if !visited[y] {
                                visited[y] = true;
                                label[y] = Some(x);
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        if !done {
            return None;
        }
    }
    let pick = |f: usize| {
        edges
            .iter()
            .zip(&side)
            .filter(|(_, &s)| s == Some(f))
            .map(|(&(e, _, _), _)| e)
            .collect()
    };
    let pair = TreePair::new(pick(0), pick(1));
    debug_assert!(pair.validate(g).is_ok());
    Some(pair)
}

/// K's answer to L's last move. `g` is the graph after L's move, `pair` the
/// pair before it. Returns K's move and the pair for the graph after it.
pub fn knot_pairing_move(g: &Multigraph, pair: &TreePair, last_l_move: Move) -> Result<(Move, TreePair), TreePairError> {
    let x = last_l_move.edge;
    let tree = pair.tree_of(x).ok_or(TreePairError::MoveOutsidePair(last_l_move))?;
    let (mine, other) = if tree == 1 { (&pair.t1, &pair.t2) } else { (&pair.t2, &pair.t1) };
    let rest: Vec<EdgeId> = mine.iter().copied().filter(|&e| e != x).collect();
    let n = g.vertex_count();
    let reply = match last_l_move.action {
        Action::Contract => {
            // `other` now has v edges on v vertices: exactly one cycle.
            // An edge lies on it iff it is not a bridge of the forest.
            let sub = Multigraph::from_slots(
                n,
                (0..g.edge_capacity())
                    .map(|i| {
                        let e = EdgeId(i);
                        other.contains(&e).then(|| g.endpoints(e).ok().map(|(u, w)| [u.0, w.0])).flatten()
                    })
                    .collect(),
            )
            .map_err(|_| TreePairError::NoRepair(last_l_move))?;
            let bridges = sub.bridges();
            let y = other
                .iter()
                .copied()
                .find(|e| sub.has_edge(*e) && bridges.binary_search(e).is_err())
                .ok_or(TreePairError::NoRepair(last_l_move))?;
            Move::new(y, Action::Delete)
        }
        Action::Delete => {
            let mut f = Forest::new(n);
            for &e in &rest {
                let (u, w) = g.endpoints(e).map_err(|_| TreePairError::UnknownEdge(e))?;
                f.union(u.0, w.0);
            }
            let y = other
                .iter()
                .copied()
                .find(|&e| {
                    g.endpoints(e)
                        .is_ok_and(|(u, w)| f.find(u.0) != f.find(w.0))
                })
                .ok_or(TreePairError::NoRepair(last_l_move))?;
            Move::new(y, Action::Contract)
        }
    };
    let other_rest: Vec<EdgeId> = other.iter().copied().filter(|&e| e != reply.edge).collect();
    let next = if tree == 1 {
        TreePair::new(rest, other_rest)
    } else {
        TreePair::new(other_rest, rest)
    };
    Ok((reply, next))
}
