//! Planarity testing and sphere embeddings by path addition.
//!
//! Loops and parallel edges never obstruct planarity, so the test runs on the
//! simplified graph, one biconnected block at a time. Each block is embedded
//! by Demoucron–Malgrange–Pertuiset: start from a cycle, and repeatedly route
//! a path of some fragment through a face that contains all of that
//! fragment's attachment vertices, preferring fragments with a single
//! admissible face. Faces are kept as consistently oriented vertex cycles, so
//! they translate directly into a rotation system. Block rotations are
//! concatenated at cut vertices, then parallel edges and loops are spliced
//! back in next to their representative.

use std::collections::{BTreeMap, HashSet, VecDeque};

use super::{EdgeEnd, EmbeddingError, PlaneGraph, RotationSystem};
use crate::multigraph::{EdgeId, Multigraph};

/// Neighbour sets of the simplified graph (no loops, no parallel edges).
fn simple_adjacency(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (_, u, w) in g.edges() {
        if u != w {
            adj[u.0].push(w.0);
            adj[w.0].push(u.0);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Edge sets of the biconnected blocks of a simple graph.
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Vec<(usize, usize)>>,
    }
    fn dfs(s: &mut State, u: usize, parent: usize) {
        s.disc[u] = s.time;
        s.low[u] = s.time;
        s.time += 1;
        for i in 0..s.adj[u].len() {
            let w = s.adj[u][i];
            if s.disc[w] == usize::MAX {
                s.stack.push((u, w));
                dfs(s, w, u);
                s.low[u] = s.low[u].min(s.low[w]);
                if s.low[w] >= s.disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = s.stack.pop() {
                        block.push(e);
                        if e == (u, w) {
                            break;
                        }
                    }
                    s.out.push(block);
                }
            } else if w != parent && s.disc[w] < s.disc[u] {
                s.stack.push((u, w));
                s.low[u] = s.low[u].min(s.disc[w]);
            }
        }
    }
    let n = adj.len();
    let mut s = State {
        adj,
        disc: vec![usize::MAX; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if s.disc[v] == usize::MAX {
            dfs(&mut s, v, usize::MAX);
        }
    }
    s.out
}

enum Fragment {
    Edge(usize, usize),
    Component(Vec<usize>),
}

/// Embeds a 2-connected simple block given as a local adjacency list.
/// Returns the faces as oriented vertex cycles, or `None` if non-planar.
fn embed_biconnected(adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let n = adj.len();
    let m: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if n >= 3 && m > 3 * n - 6 {
        return None;
    }
    let cycle = find_cycle(adj);
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for (i, &v) in cycle.iter().enumerate() {
        in_h[v] = true;
        let w = cycle[(i + 1) % cycle.len()];
        h_edges.insert((v.min(w), v.max(w)));
    }
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    while h_edges.len() < m {
        let fragments = fragments(adj, &in_h, &h_edges);
        let attachments = |f: &Fragment| -> Vec<usize> {
            match f {
                Fragment::Edge(a, b) => vec![*a, *b],
                Fragment::Component(vs) => {
                    let mut att: Vec<usize> = vs
                        .iter()
                        .flat_map(|&x| adj[x].iter().copied())
                        .filter(|&y| in_h[y])
                        .collect();
                    att.sort_unstable();
                    att.dedup();
                    att
                }
            }
        };
        let membership: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut mark = vec![false; n];
                for &v in f {
                    mark[v] = true;
                }
                mark
            })
            .collect();
        let mut choice: Option<(usize, usize, usize)> = None; // (admissible count, fragment, face)
        for (fi, frag) in fragments.iter().enumerate() {
            let att = attachments(frag);
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&k| att.iter().all(|&a| membership[k][a]))
                .collect();
            if admissible.is_empty() {
                return None;
            }
            if choice.is_none_or(|(c, _, _)| admissible.len() < c) {
                choice = Some((admissible.len(), fi, admissible[0]));
            }
            if admissible.len() == 1 {
                break;
            }
        }
        let (_, fi, face_idx) = choice.expect("some fragment remains while edges are missing");
        let path = match &fragments[fi] {
            Fragment::Edge(a, b) => vec![*a, *b],
            Fragment::Component(vs) => component_path(adj, &in_h, vs),
        };
        for w in path.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    Some(faces)
}

/// The edge `0 - adj[0][0]` closed by a shortest path avoiding it.
fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let (a, b) = (0, adj[0][0]);
    let mut parent = vec![usize::MAX; adj.len()];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if u == a && w == b || parent[w] != usize::MAX {
                continue;
            }
            parent[w] = u;
            if w == b {
                let mut cyc = vec![b];
                let mut x = b;
                while x != a {
                    x = parent[x];
                    cyc.push(x);
                }
                return cyc;
            }
            queue.push_back(w);
        }
    }
    unreachable!("a 2-connected block with three or more vertices has a cycle")
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], h_edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        for &b in &adj[a] {
            if a < b && in_h[a] && in_h[b] && !h_edges.contains(&(a, b)) {
                out.push(Fragment::Edge(a, b));
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &y in &adj[x] {
                if !in_h[y] && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        out.push(Fragment::Component(comp));
    }
    out
}

/// A path through the component joining two distinct attachment vertices.
fn component_path(adj: &[Vec<usize>], in_h: &[bool], comp: &[usize]) -> Vec<usize> {
    let inside: HashSet<usize> = comp.iter().copied().collect();
    let start = comp
        .iter()
        .flat_map(|&x| adj[x].iter().copied())
        .find(|&y| in_h[y])
        .expect("component attaches to the embedded subgraph");
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &y in &adj[start] {
        if inside.contains(&y) {
            parent.insert(y, start);
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        if let Some(&end) = adj[x].iter().find(|&&y| in_h[y] && y != start) {
            let mut path = vec![end, x];
            let mut cur = x;
            while let Some(&p) = parent.get(&cur) {
                path.push(p);
                if p == start {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return path;
        }
        for &y in &adj[x] {
            if inside.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragments of a 2-connected graph have two attachments")
}

/// Splits an oriented face along a path between two of its vertices,
/// keeping every directed edge in exactly one face.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let x = path[0];
    let y = *path.last().unwrap();
    let i = face.iter().position(|&v| v == x).expect("x on face");
    let j = face.iter().position(|&v| v == y).expect("y on face");
    let interior = &path[1..path.len() - 1];
    let walk = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut p = from;
        loop {
            out.push(face[p]);
            if p == to {
                break;
            }
            p = (p + 1) % k;
        }
        out
    };
    let mut f1 = walk(i, j);
    f1.extend(interior.iter().rev());
    let mut f2 = walk(j, i);
    f2.extend(interior.iter());
    (f1, f2)
}

/// Cyclic neighbour order of each vertex of a plane 2-connected block, read
/// off its oriented faces: a face walk `a -> v -> b` means `b` follows `a`.
fn rotation_from_faces(n: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for f in faces {
        let k = f.len();
        for idx in 0..k {
            let a = f[(idx + k - 1) % k];
            let v = f[idx];
            let b = f[(idx + 1) % k];
            succ[v].insert(a, b);
        }
    }
    succ.iter()
        .map(|s| {
            let Some((&first, _)) = s.iter().next() else {
                return Vec::new();
            };
            let mut order = vec![first];
            let mut x = s[&first];
            while x != first {
                order.push(x);
                x = s[&x];
            }
            debug_assert_eq!(order.len(), s.len());
            order
        })
        .collect()
}

/// Simple-graph rotation (neighbour order per vertex) for every block, glued
/// at cut vertices; `None` if some block is non-planar.
fn simple_rotation(adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); adj.len()];
    for block in blocks(adj) {
        if block.len() == 1 {
            let (u, w) = block[0];
            rot[u].push(w);
            rot[w].push(u);
            continue;
        }
        let mut verts: Vec<usize> = block.iter().flat_map(|&(u, w)| [u, w]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = |v: usize| verts.binary_search(&v).unwrap();
        let mut ladj = vec![Vec::new(); verts.len()];
        for &(u, w) in &block {
            ladj[local(u)].push(local(w));
            ladj[local(w)].push(local(u));
        }
        let faces = embed_biconnected(&ladj)?;
        for (li, order) in rotation_from_faces(verts.len(), &faces).into_iter().enumerate() {
            rot[verts[li]].extend(order.into_iter().map(|x| verts[x]));
        }
    }
    Some(rot)
}

/// True iff `g` embeds in the sphere (component-wise for disconnected input).
pub fn is_planar(g: &Multigraph) -> bool {
    simple_rotation(&simple_adjacency(g)).is_some()
}

/// A sphere embedding of a connected multigraph.
pub fn find_embedding(g: &Multigraph) -> Result<PlaneGraph, EmbeddingError> {
    if !g.is_connected() {
        return Err(EmbeddingError::Disconnected);
    }
    let adj = simple_adjacency(g);
    let simple = simple_rotation(&adj).ok_or(EmbeddingError::NotPlanar)?;

    let mut parallel: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
    let mut loops: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count()];
    for (e, u, w) in g.edges() {
        if u == w {
            loops[u.0].push(e);
        } else {
            parallel.entry((u.0.min(w.0), u.0.max(w.0))).or_default().push(e);
        }
    }
    let end_at = |e: EdgeId, v: usize| -> u8 {
        let (a, _) = g.endpoints(e).expect("live edge");
        if a.0 == v {
            0
        } else {
            1
        }
    };
    let mut rotation = Vec::with_capacity(g.vertex_count());
    for (u, order) in simple.iter().enumerate() {
        let mut cycle = Vec::new();
        for &w in order {
            let bundle = &parallel[&(u.min(w), u.max(w))];
            // consecutive parallels bound digons: ascending at the smaller end, descending at the other
            let ids: Box<dyn Iterator<Item = &EdgeId>> = if u < w {
                Box::new(bundle.iter())
            } else {
                Box::new(bundle.iter().rev())
            };
            cycle.extend(ids.map(|&e| EdgeEnd::new(e, end_at(e, u))));
        }
        for &l in &loops[u] {
            cycle.push(EdgeEnd::new(l, 0));
            cycle.push(EdgeEnd::new(l, 1));
        }
        rotation.push(cycle);
    }
    PlaneGraph::new(g.clone(), RotationSystem(rotation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{named, Multigraph};

    /// Oracle: does any rotation system of the simple graph embed it in the sphere?
    fn brute_force_planar(g: &Multigraph) -> bool {
        let adj = simple_adjacency(g);
        let n = adj.len();
        let e: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        // each component with an edge contributes 2 - v_i + e_i faces on its own sphere
        let labels = g.component_labels();
        let mut nontrivial: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).map(|v| labels[v]).collect();
        let touched = nontrivial.len() as i64;
        nontrivial.sort_unstable();
        nontrivial.dedup();
        let target_faces = 2 * nontrivial.len() as i64 - touched + e as i64;
        // all cyclic orders: fix the first neighbour, permute the rest
        fn perms(rest: &[usize]) -> Vec<Vec<usize>> {
            if rest.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for i in 0..rest.len() {
                let mut r = rest.to_vec();
                let x = r.remove(i);
                for mut p in perms(&r) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let options: Vec<Vec<Vec<usize>>> = adj
            .iter()
            .map(|nb| {
                if nb.is_empty() {
                    return vec![vec![]];
                }
                perms(&nb[1..])
                    .into_iter()
                    .map(|mut p| {
                        p.insert(0, nb[0]);
                        p
                    })
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; n];
        loop {
            // count faces of the simple rotation directly on darts (u, w)
            let mut succ = std::collections::HashMap::new();
            for v in 0..n {
                let o = &options[v][choice[v]];
                for i in 0..o.len() {
                    succ.insert((v, o[i]), o[(i + 1) % o.len()]);
                }
            }
            let mut seen = std::collections::HashSet::new();
            let mut faces = 0i64;
            for v in 0..n {
                for &w in &adj[v] {
                    if seen.contains(&(v, w)) {
                        continue;
                    }
                    faces += 1;
                    let (mut a, mut b) = (v, w);
                    while seen.insert((a, b)) {
                        let c = succ[&(b, a)];
                        a = b;
                        b = c;
                    }
                }
            }
            if faces == target_faces {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(!is_planar(&named::complete(5)));
        assert!(!is_planar(&named::complete_bipartite(3, 3)));
        assert!(matches!(find_embedding(&named::complete(5)), Err(EmbeddingError::NotPlanar)));
        let mut k5_minus = named::complete(5);
        k5_minus = k5_minus.delete_edge(EdgeId(0)).unwrap();
        assert!(is_planar(&k5_minus));
        assert!(is_planar(&named::theta()));
        assert!(is_planar(&named::complete(4)));
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let p = Multigraph::from_edges(10, &edges).unwrap();
        assert!(!is_planar(&p));
    }

    #[test]
    fn subdivided_k33_is_not_planar() {
        let mut g = named::complete_bipartite(3, 3);
        let (a, b) = g.endpoints(EdgeId(0)).unwrap();
        g = g.delete_edge(EdgeId(0)).unwrap();
        let mid = g.add_vertex();
        g.add_edge(a, mid).unwrap();
        g.add_edge(mid, b).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn every_small_graph_has_at_most_four_vertices_planar() {
        for g in crate::multigraph::enumerate_connected(4, 8, true) {
            assert!(is_planar(&g));
            let pg = find_embedding(&g).unwrap();
            assert_eq!(pg.euler_characteristic(), 2);
        }
    }

    #[test]
    fn wheel_embedding_face_count() {
        let pg = find_embedding(&named::wheel(4)).unwrap();
        assert_eq!(pg.trace_faces().len(), 5);
    }

    #[test]
    fn six_vertex_simple_graphs_match_brute_force() {
        // every labelled simple graph on 6 vertices, reduced to classes
        let pairs: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let mut classes = std::collections::BTreeMap::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = Multigraph::from_edges(6, &edges).unwrap();
            classes.entry(g.certificate()).or_insert(g);
        }
        assert_eq!(classes.len(), 156);
        let connected: Vec<_> = classes.values().filter(|g| g.is_connected()).collect();
        assert_eq!(connected.len(), 112);
        let planar = connected.iter().filter(|g| is_planar(g)).count();
        assert_eq!(planar, 99);
        // brute force where the rotation search is small enough
        let mut checked = 0;
        for g in classes.values() {
            let product: usize = simple_adjacency(g)
                .iter()
                .map(|nb| (1..nb.len().max(1)).product::<usize>())
                .product();
            if product <= 3000 {
                assert_eq!(is_planar(g), brute_force_planar(g), "{g}");
                checked += 1;
            }
        }
        assert!(checked > 60);
    }

    #[test]
    fn embeddings_of_enumerated_planar_graphs_are_spherical() {
        for g in crate::multigraph::enumerate_connected(7, 8, true) {
            match find_embedding(&g) {
                Ok(pg) => assert_eq!(pg.trace_faces().len(), 2 + g.edge_count() - g.vertex_count()),
                Err(EmbeddingError::NotPlanar) => assert!(!is_planar(&g)),
                Err(e) => panic!("{e}"),
            }
        }
    }
}
