//! Materialized graphs Γ(n,T): canonical vertex list plus dense adjacency
//! bit-vectors. Adjacency joins two flags exactly when they are in general
//! position.

use crate::bitset::{BitMatrix, VertexSet};
use crate::error::{Error, Result};
use crate::flags::{
    count_flags, dual_flag, enumerate_flags, gp_unchecked, Flag, GroundSize, TypeSet,
};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::VecDeque;
use std::io::Write;

/// Guard against accidentally materializing huge graphs.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;
/// Ground sizes above this never need a materialized graph; formulas cover them.
pub const DEFAULT_GROUND_CAP: u32 = 16;

#[derive(Debug, Clone, Copy)]
pub struct BuildLimits {
    pub vertex_cap: usize,
    pub ground_cap: u32,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            vertex_cap: DEFAULT_VERTEX_CAP,
            ground_cap: DEFAULT_GROUND_CAP,
        }
    }
}

/// Γ(n,T) with vertices in canonical flag order.
pub struct FlagGraph {
    ground: GroundSize,
    type_set: TypeSet,
    vertices: Vec<Flag>,
    adj: BitMatrix,
    degree: usize,
}

impl FlagGraph {
    pub fn build(ground: GroundSize, type_set: &TypeSet) -> Result<FlagGraph> {
        Self::build_with(ground, type_set, BuildLimits::default())
    }

    pub fn build_with(
        ground: GroundSize,
        type_set: &TypeSet,
        limits: BuildLimits,
    ) -> Result<FlagGraph> {
        if ground.get() > limits.ground_cap {
            return Err(Error::GroundCap {
                n: ground.get(),
                cap: limits.ground_cap,
            });
        }
        let count = count_flags(ground, type_set);
        let within = count
            .to_usize()
            .map(|c| c <= limits.vertex_cap)
            .unwrap_or(false);
        if !within {
            return Err(Error::VertexCap {
                count,
                cap: limits.vertex_cap,
            });
        }

        let vertices = enumerate_flags(ground, type_set);
        let n = vertices.len();
        let full = ground.mask();
        let mut adj = BitMatrix::zeroed(n);

        // Rows are disjoint, so row construction parallelizes cleanly; the
        // predicate is symmetric, which keeps the matrix symmetric.
        adj.rows_mut()
            .collect::<Vec<_>>()
            .into_par_iter()
            .enumerate()
            .for_each(|(u, row)| {
                for (v, other) in vertices.iter().enumerate() {
                    if v != u && gp_unchecked(&vertices[u], other, full) {
                        row[v / 64] |= 1u64 << (v % 64);
                    }
                }
            });

        let degree = if n > 0 { adj.row_degree(0) } else { 0 };
        for u in 1..n {
            if adj.row_degree(u) != degree {
                return Err(Error::Internal(format!(
                    "graph Γ({ground},{type_set}) is not regular: vertex {u}"
                )));
            }
        }

        Ok(FlagGraph {
            ground,
            type_set: type_set.clone(),
            vertices,
            adj,
            degree,
        })
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.ground
    }

    #[inline]
    pub fn type_set(&self) -> &TypeSet {
        &self.type_set
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() * self.degree / 2
    }

    #[inline]
    pub fn vertex(&self, v: usize) -> &Flag {
        &self.vertices[v]
    }

    #[inline]
    pub fn vertices(&self) -> &[Flag] {
        &self.vertices
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        self.adj.row(u)
    }

    #[inline]
    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    /// Index of a flag in the canonical vertex order.
    pub fn vertex_index(&self, flag: &Flag) -> Option<usize> {
        self.vertices.binary_search(flag).ok()
    }

    /// Two-coloring; `Some(bipartition)` when the graph is bipartite.
    pub fn is_bipartite(&self) -> Option<(VertexSet, VertexSet)> {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let next = 1 - color[u];
                for v in row_iter(self.row(u)) {
                    if color[v] == u8::MAX {
                        color[v] = next;
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        let mut left = VertexSet::empty(n);
        let mut right = VertexSet::empty(n);
        for (v, &c) in color.iter().enumerate() {
            if c == 0 {
                left.insert(v);
            } else {
                right.insert(v);
            }
        }
        Some((left, right))
    }

    /// Connected components, ordered by smallest contained vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::empty(n);
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for v in row_iter(self.row(u)) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Checks that the subgraph induced on `comp` is complete bipartite.
    pub fn component_is_complete_bipartite(&self, comp: &VertexSet) -> bool {
        let members: Vec<usize> = comp.iter().collect();
        if members.is_empty() {
            return false;
        }
        // Two-color inside the component, then check all cross pairs present.
        let mut side = std::collections::HashMap::new();
        side.insert(members[0], 0u8);
        let mut queue = VecDeque::from([members[0]]);
        while let Some(u) = queue.pop_front() {
            let next = 1 - side[&u];
            for v in row_iter(self.row(u)) {
                if !comp.contains(v) {
                    continue;
                }
                match side.get(&v) {
                    None => {
                        side.insert(v, next);
                        queue.push_back(v);
                    }
                    Some(&c) if c != next => return false,
                    _ => {}
                }
            }
        }
        for &u in &members {
            for &v in &members {
                if u == v {
                    continue;
                }
                let cross = side[&u] != side[&v];
                if cross != self.adjacent(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// DIMACS-like edge list: `p edge |V| |E|` header, then `e u v` (1-based).
    pub fn export_dimacs<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p edge {} {}", self.vertex_count(), self.edge_count())?;
        for u in 0..self.vertex_count() {
            for v in row_iter(self.row(u)) {
                if u < v {
                    writeln!(w, "e {} {}", u + 1, v + 1)?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn row_iter(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

/// Checks that the complement map is an isomorphism Γ(n,T) ≅ Γ(n,ω_n(T)).
pub fn verify_duality_isomorphism(
    ground: GroundSize,
    type_set: &TypeSet,
    limits: BuildLimits,
) -> Result<bool> {
    let g1 = FlagGraph::build_with(ground, type_set, limits)?;
    let dual_type = type_set.dual(ground);
    let g2 = FlagGraph::build_with(ground, &dual_type, limits)?;
    if g1.vertex_count() != g2.vertex_count() {
        return Ok(false);
    }
    let image: Vec<usize> = g1
        .vertices()
        .iter()
        .map(|f| {
            g2.vertex_index(&dual_flag(f)).ok_or_else(|| {
                Error::Internal(format!("dual of {f} missing from Γ({ground},{dual_type})"))
            })
        })
        .collect::<Result<_>>()?;
    for u in 0..g1.vertex_count() {
        for v in (u + 1)..g1.vertex_count() {
            if g1.adjacent(u, v) != g2.adjacent(image[u], image[v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
