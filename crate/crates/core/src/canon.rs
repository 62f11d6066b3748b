//! Canonical labeling of vertex-colored graphs by iterated color refinement
//! with individualization and backtracking.
//!
//! Used by the full-automorphism equivalence mode: a vertex set is encoded as
//! a two-color vertex coloring, and two sets lie in the same orbit of the
//! full automorphism group iff the colored graphs have equal canonical forms.

use crate::bitset::BitMatrix;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Canonical form of a colored graph: cell colors in label order plus the
/// relabeled adjacency matrix, packed row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonForm {
    pub colors: Vec<u32>,
    pub bits: Vec<u64>,
}

/// Computes the canonical form; `max_nodes` caps the individualization tree.
pub fn canonical_form(adj: &BitMatrix, colors: &[u32], max_nodes: u64) -> Result<CanonForm> {
    assert_eq!(colors.len(), adj.size());
    let mut search = Search {
        adj,
        colors,
        nodes: 0,
        max_nodes,
        best: None,
    };
    let cells = initial_partition(colors);
    search.descend(cells)?;
    search
        .best
        .ok_or_else(|| Error::Internal("canonical labeling produced no leaf".into()))
}

/// Cells ordered by color value; order is isomorphism-invariant because it
/// depends only on color values.
fn initial_partition(colors: &[u32]) -> Vec<Vec<u32>> {
    let mut by_color: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        by_color.entry(c).or_default().push(v as u32);
    }
    by_color.into_values().collect()
}

struct Search<'a> {
    adj: &'a BitMatrix,
    colors: &'a [u32],
    nodes: u64,
    max_nodes: u64,
    best: Option<CanonForm>,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<Vec<u32>>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget {
                context: "canonical labeling".into(),
                nodes: self.nodes,
                partial_count: None,
            });
        }
        self.refine(&mut cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let labeling: Vec<u32> = cells.iter().map(|c| c[0]).collect();
                let form = self.build_form(&labeling);
                if self.best.as_ref().map(|b| form < *b).unwrap_or(true) {
                    self.best = Some(form);
                }
                Ok(())
            }
            Some(_) => {
                // Target: first cell of smallest size > 1. Branch over every
                // member; the minimum over branches is label-invariant.
                let target = cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.len() > 1)
                    .min_by_key(|(i, c)| (c.len(), *i))
                    .map(|(i, _)| i)
                    .unwrap();
                let members = cells[target].clone();
                for v in members {
                    let mut child = cells.clone();
                    let rest: Vec<u32> =
                        child[target].iter().copied().filter(|&u| u != v).collect();
                    child[target] = vec![v];
                    child.insert(target + 1, rest);
                    self.descend(child)?;
                }
                Ok(())
            }
        }
    }

    /// Equitable refinement: split cells by the vector of neighbor counts
    /// into every cell, until stable. Split order depends only on counts, so
    /// it is isomorphism-invariant.
    fn refine(&self, cells: &mut Vec<Vec<u32>>) {
        let n = self.adj.size();
        loop {
            let mut cell_of = vec![0u32; n];
            for (ci, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v as usize] = ci as u32;
                }
            }
            let k = cells.len();
            let mut next: Vec<Vec<u32>> = Vec::with_capacity(k);
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
                for &v in cell {
                    let mut counts = vec![0u32; k];
                    for u in crate::graph::row_iter(self.adj.row(v as usize)) {
                        counts[cell_of[u] as usize] += 1;
                    }
                    groups.entry(counts).or_default().push(v);
                }
                next.extend(groups.into_values());
            }
            let stable = next.len() == cells.len();
            *cells = next;
            if stable {
                return;
            }
        }
    }

    fn build_form(&self, labeling: &[u32]) -> CanonForm {
        let n = labeling.len();
        let colors = labeling.iter().map(|&v| self.colors[v as usize]).collect();
        let mut bits = vec![0u64; (n * n).div_ceil(64)];
        for (i, &u) in labeling.iter().enumerate() {
            for (j, &v) in labeling.iter().enumerate() {
                if self.adj.get(u as usize, v as usize) {
                    let pos = i * n + j;
                    bits[pos / 64] |= 1u64 << (pos % 64);
                }
            }
        }
        CanonForm { colors, bits }
    }
}
