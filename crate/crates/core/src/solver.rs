//! Exact maximum independent set and clique computation, plus exhaustive
//! enumeration of all maximum independent sets.
//!
//! α(G) is computed as the maximum clique of the complement. The search is a
//! Tomita-style branch and bound: at every node the candidates are sorted by
//! descending degree in the residual complement graph (ties by lowest index),
//! greedily colored in that order, and branched in descending color order, so
//! the greedy-coloring bound prunes the remainder of the loop in one test.
//! No symmetry is exploited; the search order is fully deterministic.

use crate::bitset::{BitMatrix, VertexSet};
use crate::error::{Error, Result};
use crate::graph::FlagGraph;
use std::time::{Duration, Instant};

/// Node and wall-clock limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(s: u64) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(Duration::from_secs(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// `lower == upper` is the exact value, with a witness.
    Exact,
    /// Budget ran out; only the interval `[lower, upper]` is certified.
    BoundOnly,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub lower: usize,
    pub upper: usize,
    pub witness: VertexSet,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SolveResult {
    /// The exact value when the search completed.
    pub fn value(&self) -> Option<usize> {
        match self.status {
            SolveStatus::Exact => Some(self.lower),
            SolveStatus::BoundOnly => None,
        }
    }
}

/// True iff no two members of `set` are adjacent in `g`.
pub fn is_independent(set: &VertexSet, g: &FlagGraph) -> bool {
    assert_eq!(set.capacity(), g.vertex_count(), "set built for another graph");
    set.iter().all(|v| set.is_disjoint_with(g.row(v)))
}

/// True iff `set` is independent and every outside vertex has a neighbor in
/// it. Errors when `set` is not independent.
pub fn is_maximal_independent(set: &VertexSet, g: &FlagGraph) -> Result<bool> {
    if !is_independent(set, g) {
        return Err(Error::param(
            "maximality is only defined for independent sets",
        ));
    }
    for v in 0..g.vertex_count() {
        if !set.contains(v) && set.is_disjoint_with(g.row(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact independence number of `g`. A `lower_hint` (any independent set)
/// seeds the incumbent. On budget exhaustion the result is flagged
/// [`SolveStatus::BoundOnly`] with the best certified interval.
pub fn alpha_exact(
    g: &FlagGraph,
    lower_hint: Option<&VertexSet>,
    budget: &Budget,
) -> Result<SolveResult> {
    if let Some(hint) = lower_hint {
        if !is_independent(hint, g) {
            return Err(Error::param("lower_hint is not an independent set"));
        }
    }
    let complement = g.adjacency().complement();
    let hint: Option<Vec<usize>> = lower_hint.map(|h| h.iter().collect());
    Ok(max_clique_matrix(&complement, hint.as_deref(), budget))
}

/// Exact clique number, via the same engine on the graph itself.
pub fn omega_exact(g: &FlagGraph, budget: &Budget) -> Result<SolveResult> {
    Ok(max_clique_matrix(g.adjacency(), None, budget))
}

/// Every maximum independent set of `g`, in canonical set order. `alpha`
/// must be the exact independence number. On budget exhaustion an error
/// carrying the partial count is returned.
pub fn enumerate_maximum(
    g: &FlagGraph,
    alpha: usize,
    budget: &Budget,
) -> Result<Vec<VertexSet>> {
    let complement = g.adjacency().complement();
    let mut engine = Engine::new(&complement, budget);
    let mut found: Vec<VertexSet> = Vec::new();
    let root: Vec<u64> = full_candidates(&complement);
    let mut stack = Vec::new();
    engine.enumerate(&root, &mut stack, alpha, &mut |members| {
        found.push(VertexSet::from_indices(complement.size(), members.iter().copied()));
    });
    if engine.aborted {
        return Err(Error::Budget {
            context: format!("enumerate_maximum on Γ({},{})", g.ground(), g.type_set()),
            nodes: engine.nodes,
            partial_count: Some(found.len() as u64),
        });
    }
    found.sort_unstable();
    debug_assert!(found.windows(2).all(|w| w[0] != w[1]));
    debug_assert!(found.iter().all(|s| s.len() == alpha && is_independent(s, g)));
    Ok(found)
}

/// Maximum clique of an arbitrary adjacency matrix. Exposed for the
/// independent-oracle property tests, which run on induced subgraphs.
pub fn max_clique_matrix(
    adj: &BitMatrix,
    initial: Option<&[usize]>,
    budget: &Budget,
) -> SolveResult {
    let start = Instant::now();
    let mut engine = Engine::new(adj, budget);

    let greedy = greedy_clique(adj);
    let mut best: Vec<usize> = greedy;
    if let Some(init) = initial {
        if init.len() > best.len() {
            best = init.to_vec();
        }
    }

    let root: Vec<u64> = full_candidates(adj);
    let root_bound = engine.color_bound(&root);
    let mut incumbent = best.len();
    let mut witness = best;
    let mut stack = Vec::new();
    engine.expand(&root, &mut stack, &mut incumbent, &mut witness);

    let (status, upper) = if engine.aborted {
        (SolveStatus::BoundOnly, root_bound.max(incumbent))
    } else {
        (SolveStatus::Exact, incumbent)
    };
    SolveResult {
        status,
        lower: incumbent,
        upper,
        witness: VertexSet::from_indices(adj.size(), witness),
        nodes_explored: engine.nodes,
        elapsed: start.elapsed(),
    }
}

fn full_candidates(adj: &BitMatrix) -> Vec<u64> {
    let mut words = vec![0u64; adj.stride()];
    for v in 0..adj.size() {
        words[v / 64] |= 1u64 << (v % 64);
    }
    words
}

struct Engine<'a> {
    adj: &'a BitMatrix,
    stride: usize,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl<'a> Engine<'a> {
    fn new(adj: &'a BitMatrix, budget: &Budget) -> Self {
        Engine {
            adj,
            stride: adj.stride(),
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_time.map(|t| Instant::now() + t),
            aborted: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
        } else if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    /// Candidates of `cand`, sorted by descending degree within `cand`
    /// (ties by lowest index), then greedily colored in that order.
    /// Returns (vertex, color) pairs in ascending color order; colors are
    /// 1-based, so the number of classes is the bound.
    fn color_sort(&self, cand: &[u64]) -> Vec<(u32, u32)> {
        let mut verts: Vec<(u32, u32)> = Vec::new();
        for w in 0..self.stride {
            let mut word = cand[w];
            while word != 0 {
                let v = (w * 64 + word.trailing_zeros() as usize) as u32;
                word &= word - 1;
                let deg = self.adj.row(v as usize)
                    [..self.stride]
                    .iter()
                    .zip(cand)
                    .map(|(r, c)| (r & c).count_ones())
                    .sum::<u32>();
                verts.push((v, deg));
            }
        }
        verts.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut colored: Vec<Vec<u32>> = Vec::new();
        for (v, _) in verts {
            let row = self.adj.row(v as usize);
            let slot = classes
                .iter()
                .position(|cls| cls.iter().zip(row).all(|(c, r)| c & r == 0));
            let slot = match slot {
                Some(s) => s,
                None => {
                    classes.push(vec![0u64; self.stride]);
                    colored.push(Vec::new());
                    classes.len() - 1
                }
            };
            classes[slot][v as usize / 64] |= 1u64 << (v % 64);
            colored[slot].push(v);
        }
        let mut order = Vec::with_capacity(colored.iter().map(Vec::len).sum());
        for (c, class) in colored.iter().enumerate() {
            for &v in class {
                order.push((v, c as u32 + 1));
            }
        }
        order
    }

    fn color_bound(&self, cand: &[u64]) -> usize {
        self.color_sort(cand).last().map(|&(_, c)| c as usize).unwrap_or(0)
    }

    fn expand(
        &mut self,
        cand: &[u64],
        current: &mut Vec<usize>,
        best: &mut usize,
        witness: &mut Vec<usize>,
    ) {
        if self.tick() {
            return;
        }
        let order = self.color_sort(cand);
        if order.is_empty() {
            if current.len() > *best {
                *best = current.len();
                *witness = current.clone();
            }
            return;
        }
        let mut cand = cand.to_vec();
        for idx in (0..order.len()).rev() {
            let (v, color) = order[idx];
            if current.len() + color as usize <= *best {
                return; // colors ascend; nothing left can improve
            }
            let v = v as usize;
            let row = self.adj.row(v);
            let child: Vec<u64> = cand.iter().zip(row).map(|(c, r)| c & r).collect();
            current.push(v);
            if child.iter().all(|&w| w == 0) {
                if current.len() > *best {
                    *best = current.len();
                    *witness = current.clone();
                }
            } else {
                self.expand(&child, current, best, witness);
            }
            current.pop();
            if self.aborted {
                return;
            }
            cand[v / 64] &= !(1u64 << (v % 64));
        }
    }

    /// Visits every clique of size exactly `target` once.
    fn enumerate(
        &mut self,
        cand: &[u64],
        current: &mut Vec<usize>,
        target: usize,
        emit: &mut impl FnMut(&[usize]),
    ) {
        if self.tick() {
            return;
        }
        if current.len() == target {
            emit(current);
            return;
        }
        let order = self.color_sort(cand);
        let mut cand = cand.to_vec();
        for idx in (0..order.len()).rev() {
            let (v, color) = order[idx];
            if current.len() + (color as usize) < target {
                return;
            }
            let v = v as usize;
            let row = self.adj.row(v);
            let child: Vec<u64> = cand.iter().zip(row).map(|(c, r)| c & r).collect();
            current.push(v);
            if current.len() == target {
                emit(current);
            } else if !child.iter().all(|&w| w == 0) {
                self.enumerate(&child, current, target, emit);
            }
            current.pop();
            if self.aborted {
                return;
            }
            cand[v / 64] &= !(1u64 << (v % 64));
        }
    }
}

/// Deterministic greedy clique: repeatedly take the candidate with the most
/// neighbors among the remaining candidates (ties by lowest index).
fn greedy_clique(adj: &BitMatrix) -> Vec<usize> {
    let stride = adj.stride();
    let mut cand = full_candidates(adj);
    let mut clique = Vec::new();
    loop {
        let mut pick: Option<(usize, u32)> = None;
        for w in 0..stride {
            let mut word = cand[w];
            while word != 0 {
                let v = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let deg: u32 = adj.row(v).iter().zip(&cand).map(|(r, c)| (r & c).count_ones()).sum();
                if pick.map(|(_, d)| deg > d).unwrap_or(true) {
                    pick = Some((v, deg));
                }
            }
        }
        let Some((v, _)) = pick else { break };
        clique.push(v);
        let row = adj.row(v);
        for (c, r) in cand.iter_mut().zip(row) {
            *c &= r;
        }
    }
    clique.sort_unstable();
    clique
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};
    use crate::flags::{GroundSize, TypeSet};

    fn graph(n: u32, entries: &[u32]) -> FlagGraph {
        let ground = GroundSize::new(n).unwrap();
        let t = TypeSet::new(entries.to_vec(), ground).unwrap();
        FlagGraph::build(ground, &t).unwrap()
    }

    #[test]
    fn independence_checks() {
        let g = graph(2, &[1]);
        let empty = VertexSet::empty(2);
        assert!(is_independent(&empty, &g));
        let single = VertexSet::from_indices(2, [0]);
        assert!(is_independent(&single, &g));
        assert!(is_maximal_independent(&single, &g).unwrap());
        let both = VertexSet::from_indices(2, [0, 1]);
        assert!(!is_independent(&both, &g));
        assert!(is_maximal_independent(&both, &g).is_err());
    }

    #[test]
    fn family_independent_in_big_graph() {
        let g = graph(8, &[2, 5]);
        let fam = build_family(&FamilySpec::new(8, 2, 5, 1, false).unwrap(), &g).unwrap();
        assert_eq!(fam.len(), 230);
        assert!(is_independent(&fam, &g));
    }

    #[test]
    fn alpha_small_graphs() {
        let g = graph(5, &[1, 3]);
        let r = alpha_exact(&g, None, &Budget::unlimited()).unwrap();
        assert_eq!(r.value(), Some(12));
        assert_eq!(r.witness.len(), 12);
        assert!(is_independent(&r.witness, &g));

        let g = graph(5, &[2]);
        assert_eq!(alpha_exact(&g, None, &Budget::unlimited()).unwrap().value(), Some(4));

        let g = graph(6, &[2, 4]);
        assert_eq!(alpha_exact(&g, None, &Budget::unlimited()).unwrap().value(), Some(45));
    }

    #[test]
    fn alpha_with_hint() {
        let g = graph(6, &[1, 4]);
        let fam = build_family(&FamilySpec::new(6, 1, 4, 1, false).unwrap(), &g).unwrap();
        let r = alpha_exact(&g, Some(&fam), &Budget::unlimited()).unwrap();
        assert_eq!(r.value(), Some(22));
        let bad = VertexSet::full(g.vertex_count());
        assert!(alpha_exact(&g, Some(&bad), &Budget::unlimited()).is_err());
    }

    #[test]
    fn omega_values() {
        let g = graph(2, &[1]);
        assert_eq!(omega_exact(&g, &Budget::unlimited()).unwrap().value(), Some(2));
        let petersen = graph(5, &[2]);
        assert_eq!(omega_exact(&petersen, &Budget::unlimited()).unwrap().value(), Some(2));
        let g = graph(8, &[2, 5]);
        assert_eq!(omega_exact(&g, &Budget::unlimited()).unwrap().value(), Some(2));
    }

    #[test]
    fn enumerate_tiny() {
        let g = graph(2, &[1]);
        let sets = enumerate_maximum(&g, 1, &Budget::unlimited()).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_contains_families() {
        let g = graph(5, &[1, 3]);
        let sets = enumerate_maximum(&g, 12, &Budget::unlimited()).unwrap();
        assert!(!sets.is_empty());
        for i in [0u32, 1] {
            let fam = build_family(&FamilySpec::new(5, 1, 3, i, false).unwrap(), &g).unwrap();
            assert!(sets.binary_search(&fam).is_ok(), "F_{i} missing");
        }
        let barred = build_family(&FamilySpec::new(5, 1, 3, 2, true).unwrap(), &g).unwrap();
        assert!(sets.binary_search(&barred).is_ok());
    }

    #[test]
    fn budget_interrupt_is_flagged() {
        let g = graph(6, &[1, 4]);
        let tight = Budget {
            max_nodes: Some(3),
            max_time: None,
        };
        let r = alpha_exact(&g, None, &tight).unwrap();
        assert_eq!(r.status, SolveStatus::BoundOnly);
        assert!(r.lower <= r.upper);
        assert!(r.lower >= 1);

        let err = enumerate_maximum(&g, 22, &tight).unwrap_err();
        match err {
            Error::Budget { partial_count, .. } => assert!(partial_count.is_some()),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn duality_preserves_alpha_small() {
        for (n, entries) in [(5u32, vec![1u32, 3]), (6, vec![1, 4]), (6, vec![2, 3])] {
            let ground = GroundSize::new(n).unwrap();
            let t = TypeSet::new(entries.clone(), ground).unwrap();
            let g1 = FlagGraph::build(ground, &t).unwrap();
            let g2 = FlagGraph::build(ground, &t.dual(ground)).unwrap();
            let a1 = alpha_exact(&g1, None, &Budget::unlimited()).unwrap().value();
            let a2 = alpha_exact(&g2, None, &Budget::unlimited()).unwrap().value();
            assert_eq!(a1, a2, "duality broke at ({n},{entries:?})");
        }
    }
}
