//! Partially smoothed diagrams.
//!
//! A smoothed precrossing reconnects its four arc-ends in two adjacent pairs.
//! With `s` the lower black quadrant, [`SmoothingChoice::BlackJoin`] pairs
//! slots `{s-1, s}` and `{s+1, s+2}`, opening a channel between the two black
//! quadrants; [`SmoothingChoice::WhiteJoin`] pairs `{s, s+1}` and
//! `{s+2, s+3}`, opening one between the white quadrants.

use serde::{Deserialize, Serialize};

use super::{Quadrant, Shadow, ShadowError};
use crate::multigraph::{EdgeId, Multigraph};
use crate::planegraph::{EdgeEnd, PlaneGraph, RotationSystem};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmoothingChoice {
    /// Merges the two black quadrants: contraction in the black graph.
    BlackJoin,
    /// Merges the two white quadrants: deletion in the black graph.
    WhiteJoin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothedShadow {
    shadow: Shadow,
    low: Vec<u8>,
    quadrant_black: Vec<bool>,
    choices: Vec<Option<SmoothingChoice>>,
}

impl SmoothedShadow {
    pub fn new(shadow: Shadow) -> Self {
        let n = shadow.crossing_count();
        let col = shadow.checkerboard();
        let mut quadrant_black = vec![false; n * 4];
        for (f, face) in col.faces.iter().enumerate() {
            for q in face {
                quadrant_black[q.index()] = col.black[f];
            }
        }
        let low = (0..n).map(|c| if quadrant_black[c * 4] { 0 } else { 1 }).collect();
        SmoothedShadow {
            shadow,
            low,
            quadrant_black,
            choices: vec![None; n],
        }
    }

    pub fn shadow(&self) -> &Shadow {
        &self.shadow
    }

    pub fn choices(&self) -> &[Option<SmoothingChoice>] {
        &self.choices
    }

    pub fn remaining(&self) -> usize {
        self.choices.iter().filter(|c| c.is_none()).count()
    }

    pub fn smooth(&self, c: usize, choice: SmoothingChoice) -> Result<SmoothedShadow, ShadowError> {
        match self.choices.get(c) {
            None => Err(ShadowError::UnknownCrossing(c)),
            Some(Some(_)) => Err(ShadowError::AlreadySmoothed(c)),
            Some(None) => {
                let mut next = self.clone();
                next.choices[c] = Some(choice);
                Ok(next)
            }
        }
    }

    /// The slot joined to `t` at a smoothed crossing.
    fn paired_slot(&self, c: usize, t: u8, choice: SmoothingChoice) -> u8 {
        let s = self.low[c];
        let rel = (t + 4 - s) % 4;
        let rel_partner = match choice {
            SmoothingChoice::BlackJoin => [3, 2, 1, 0][usize::from(rel)],
            SmoothingChoice::WhiteJoin => [1, 0, 3, 2][usize::from(rel)],
        };
        (rel_partner + s) % 4
    }

    /// Closed curves plus 4-valent pieces, counted by merging arcs through
    /// every crossing according to its state.
    pub fn component_count(&self) -> usize {
        let n = self.shadow.crossing_count();
        // arc id = smaller slot index of its two ends
        let arc = |c: usize, t: u8| {
            let here = c * 4 + usize::from(t);
            here.min(self.shadow.partner[here])
        };
        let mut parent: Vec<usize> = (0..n * 4).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        };
        for c in 0..n {
            match self.choices[c] {
                None => {
                    for t in 1..4 {
                        union(arc(c, 0), arc(c, t));
                    }
                }
                Some(ch) => {
                    for t in 0..4 {
                        union(arc(c, t), arc(c, self.paired_slot(c, t, ch)));
                    }
                }
            }
        }
        (0..n * 4)
            .filter(|&i| i == i.min(self.shadow.partner[i]))
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Black graph of the current diagram, traced directly: unsmoothed
    /// crossings keep their edge ids, smoothed ones are tombstones.
    pub fn black_graph(&self) -> Result<PlaneGraph, ShadowError> {
        self.color_graph(true)
    }

    pub fn white_graph(&self) -> Result<PlaneGraph, ShadowError> {
        self.color_graph(false)
    }

    fn color_graph(&self, want_black: bool) -> Result<PlaneGraph, ShadowError> {
        if !self.is_connected() {
            return Err(ShadowError::Disconnected);
        }
        let n = self.shadow.crossing_count();
        // state (c, t): arrived at slot t of c with quadrant (c, t) on the right
        let step = |q: Quadrant| -> Quadrant {
            let out = match self.choices[q.crossing] {
                None => (q.slot + 1) % 4,
                Some(ch) => self.paired_slot(q.crossing, q.slot, ch),
            };
            let (c, t) = self.shadow.other_end(q.crossing, out);
            Quadrant::new(c, t)
        };
        let mut region = vec![usize::MAX; n * 4];
        let mut regions: Vec<Vec<Quadrant>> = Vec::new();
        for i in 0..n * 4 {
            if region[i] != usize::MAX || self.quadrant_black[i] != want_black {
                continue;
            }
            let mut cyc = Vec::new();
            let mut q = Quadrant::new(i / 4, (i % 4) as u8);
            while region[q.index()] == usize::MAX {
                region[q.index()] = regions.len();
                cyc.push(q);
                q = step(q);
            }
            regions.push(cyc);
        }
        let low: Vec<u8> = self
            .low
            .iter()
            .map(|&s| if want_black { s } else { 1 - s })
            .collect();
        let slots: Vec<Option<[usize; 2]>> = (0..n)
            .map(|c| {
                self.choices[c].is_none().then(|| {
                    let s = usize::from(low[c]);
                    [region[c * 4 + s], region[c * 4 + s + 2]]
                })
            })
            .collect();
        let rotation = regions
            .iter()
            .map(|cyc| {
                cyc.iter()
                    .filter(|q| self.choices[q.crossing].is_none())
                    .map(|q| EdgeEnd::new(EdgeId(q.crossing), u8::from(q.slot != low[q.crossing])))
                    .collect()
            })
            .collect();
        let graph = Multigraph::from_slots(regions.len(), slots).expect("regions exist");
        Ok(PlaneGraph::new(graph, RotationSystem(rotation))?)
    }
}
