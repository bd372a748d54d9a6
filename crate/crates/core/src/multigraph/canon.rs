//! Canonical isomorphism certificates for small multigraphs.
//!
//! The certificate is the lexicographically smallest upper-triangular
//! multiplicity matrix (diagonal = loop count) over the leaves of an
//! individualization/refinement search. Cells are split by the multiset of
//! `(cell, multiplicity)` pairs of each vertex, so every step is label
//! invariant. Branches on twin vertices (same multiplicity to every other
//! vertex, same loop count) are skipped: swapping two twins is an
//! automorphism that fixes the current partition, so both branches reach the
//! same leaf codes.

use std::fmt;

use super::Multigraph;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoCertificate(Vec<u8>);

impl IsoCertificate {
    pub fn of(g: &Multigraph) -> Self {
        Canon::new(g).run()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for IsoCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoCertificate({})", self.to_hex())
    }
}

impl fmt::Display for IsoCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: usize) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct Canon {
    n: usize,
    edges: usize,
    mat: Vec<u16>,
    best: Option<Vec<u8>>,
}

type Partition = Vec<Vec<usize>>;

impl Canon {
    fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let mut mat = vec![0u16; n * n];
        let mut edges = 0;
        for (_, u, w) in g.edges() {
            edges += 1;
            mat[u.0 * n + w.0] += 1;
            if u != w {
                mat[w.0 * n + u.0] += 1;
            }
        }
        Canon {
            n,
            edges,
            mat,
            best: None,
        }
    }

    fn m(&self, a: usize, b: usize) -> u16 {
        self.mat[a * self.n + b]
    }

    fn run(mut self) -> IsoCertificate {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (self.m(x, x), self.row_weight(x)));
        let mut cells: Partition = Vec::new();
        for x in order {
            match cells.last_mut() {
                Some(cell)
                    if (self.m(cell[0], cell[0]), self.row_weight(cell[0]))
                        == (self.m(x, x), self.row_weight(x)) =>
                {
                    cell.push(x)
                }
                _ => cells.push(vec![x]),
            }
        }
        self.refine(&mut cells);
        self.search(cells);
        IsoCertificate(self.best.expect("search visits at least one leaf"))
    }

    fn row_weight(&self, x: usize) -> u32 {
        (0..self.n)
            .filter(|&y| y != x)
            .map(|y| u32::from(self.m(x, y)))
            .sum()
    }

    fn refine(&self, cells: &mut Partition) {
        let mut cell_of = vec![0usize; self.n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &x in cell {
                    cell_of[x] = i;
                }
            }
            let mut next: Partition = Vec::with_capacity(cells.len());
            let mut changed = false;
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u16)>, usize)> = cell
                    .iter()
                    .map(|&x| {
                        let mut sig: Vec<(usize, u16)> = (0..self.n)
                            .filter(|&y| y != x && self.m(x, y) > 0)
                            .map(|y| (cell_of[y], self.m(x, y)))
                            .collect();
                        sig.sort_unstable();
                        (sig, x)
                    })
                    .collect();
                keyed.sort();
                let before = next.len();
                for (i, (sig, x)) in keyed.iter().enumerate() {
                    if i > 0 && keyed[i - 1].0 == *sig {
                        next.last_mut().unwrap().push(*x);
                    } else {
                        next.push(vec![*x]);
                    }
                }
                changed |= next.len() - before > 1;
            }
            *cells = next;
            if !changed {
                return;
            }
        }
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        self.m(a, a) == self.m(b, b)
            && (0..self.n)
                .filter(|&z| z != a && z != b)
                .all(|z| self.m(a, z) == self.m(b, z))
    }

    fn search(&mut self, cells: Partition) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(t) = target else {
            let code = self.encode(&cells);
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
            }
            return;
        };
        let cell = cells[t].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &x in &cell {
            if tried.iter().any(|&y| self.twins(x, y)) {
                continue;
            }
            tried.push(x);
            let mut child: Partition = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(vec![x]);
            child.push(cell.iter().copied().filter(|&y| y != x).collect());
            child.extend_from_slice(&cells[t + 1..]);
            self.refine(&mut child);
            self.search(child);
        }
    }

    fn encode(&self, cells: &Partition) -> Vec<u8> {
        let perm: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let mut out = Vec::with_capacity(4 + self.n * (self.n + 1) / 2);
        push_varint(&mut out, self.n);
        push_varint(&mut out, self.edges);
        for i in 0..self.n {
            for j in i..self.n {
                push_varint(&mut out, usize::from(self.m(perm[i], perm[j])));
            }
        }
        out
    }
}
