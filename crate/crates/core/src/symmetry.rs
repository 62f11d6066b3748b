//! Group action on vertex sets and equivalence classification of independent
//! sets.
//!
//! The default group is the one induced by relabelings of the ground set,
//! extended by the complement involution when the type is self-dual. The
//! full-automorphism mode instead compares canonical forms of the graph with
//! the set encoded as a vertex color, and exists to detect class fusion under
//! automorphisms beyond the induced group.

use crate::bitset::VertexSet;
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::families::neighbor_profile;
use crate::flags::Flag;
use crate::graph::FlagGraph;
use crate::solver;
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivMode {
    /// Search the group generated by ground relabelings (and duality when
    /// the type is self-dual).
    Generators,
    /// Compare canonical forms of the set-colored graph under the full
    /// automorphism group.
    FullAutomorphism,
}

#[derive(Debug, Clone, Copy)]
pub struct SymmetryGroupSpec {
    pub include_duality: bool,
    pub mode: EquivMode,
    /// Node cap for canonical labeling in full-automorphism mode.
    pub canon_budget: u64,
}

impl SymmetryGroupSpec {
    /// Default group for a graph: relabelings, plus duality iff ω_n(T) = T.
    pub fn for_graph(g: &FlagGraph) -> Self {
        SymmetryGroupSpec {
            include_duality: g.type_set().is_self_dual(g.ground()),
            mode: EquivMode::Generators,
            canon_budget: 5_000_000,
        }
    }

    pub fn with_mode(mut self, mode: EquivMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EquivClass {
    /// Lexicographically least set in the class orbit.
    pub representative: VertexSet,
    /// Number of classified input sets landing in this class.
    pub orbit_size: usize,
    /// Neighbor-count histogram of the representative (class invariant).
    pub profile: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct EquivClassReport {
    pub class_count: usize,
    pub classes: Vec<EquivClass>,
}

impl EquivClassReport {
    pub fn representatives(&self) -> impl Iterator<Item = &VertexSet> {
        self.classes.iter().map(|c| &c.representative)
    }
}

/// Applies a relabeling of ground elements to every flag of `set` (0-based:
/// element `e+1` maps to `perm[e]+1`).
pub fn act(perm: &[u32], set: &VertexSet, g: &FlagGraph) -> Result<VertexSet> {
    let n = g.ground().get() as usize;
    if perm.len() != n || !is_permutation(perm) {
        return Err(Error::param(format!(
            "expected a permutation of {n} ground elements"
        )));
    }
    image_set(perm, false, set, g)
}

/// Applies the complement involution; requires a self-dual type.
pub fn act_dual(set: &VertexSet, g: &FlagGraph) -> Result<VertexSet> {
    if !g.type_set().is_self_dual(g.ground()) {
        return Err(Error::param(format!(
            "duality maps Γ({},{}) to a different type",
            g.ground(),
            g.type_set()
        )));
    }
    let identity: Vec<u32> = (0..g.ground().get()).collect();
    image_set(&identity, true, set, g)
}

fn is_permutation(perm: &[u32]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p as usize >= perm.len() || seen[p as usize] {
            return false;
        }
        seen[p as usize] = true;
    }
    true
}

fn apply_perm_mask(mask: u64, perm: &[u32]) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1u64 << perm[e];
    }
    out
}

fn image_flag(flag: &Flag, perm: &[u32], dual: bool, full: u64) -> Flag {
    let mut levels: Vec<u64> = flag
        .levels()
        .iter()
        .map(|&m| apply_perm_mask(m, perm))
        .collect();
    if dual {
        for m in levels.iter_mut() {
            *m = full & !*m;
        }
        levels.reverse();
    }
    Flag::from_raw(flag.ground().get(), levels)
}

fn image_set(perm: &[u32], dual: bool, set: &VertexSet, g: &FlagGraph) -> Result<VertexSet> {
    let full = g.ground().mask();
    let mut out = VertexSet::empty(g.vertex_count());
    for v in set.iter() {
        let img = image_flag(g.vertex(v), perm, dual, full);
        let idx = g.vertex_index(&img).ok_or_else(|| {
            Error::Internal(format!("image flag {img} missing from the graph"))
        })?;
        out.insert(idx);
    }
    Ok(out)
}

/// Lexicographic successor of a permutation; false once at the last one.
fn next_permutation(arr: &mut [u32]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// Runs `f` over every group element as (permutation, dual?) until it
/// returns true; reports whether any call did.
fn any_group_element(
    n: usize,
    include_duality: bool,
    mut f: impl FnMut(&[u32], bool) -> bool,
) -> bool {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    loop {
        if f(&perm, false) {
            return true;
        }
        if include_duality && f(&perm, true) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Per-ground-element incidence signature: for each element, how many member
/// flags contain it at each level position. Equivalent sets have equal
/// signature multisets, and any witnessing permutation must match signatures
/// pointwise.
fn incidence_signature(set: &VertexSet, g: &FlagGraph) -> Vec<Vec<u32>> {
    let n = g.ground().get() as usize;
    let depth = g.type_set().len();
    let mut sig = vec![vec![0u32; depth]; n];
    for v in set.iter() {
        for (k, &mask) in g.vertex(v).levels().iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                m &= m - 1;
                sig[e][k] += 1;
            }
        }
    }
    sig
}

fn sorted_profile(set: &VertexSet, g: &FlagGraph) -> Option<BTreeMap<usize, usize>> {
    neighbor_profile(set, g).ok()
}

/// True iff some group element maps `s1` to `s2`.
pub fn are_equivalent(
    s1: &VertexSet,
    s2: &VertexSet,
    g: &FlagGraph,
    spec: &SymmetryGroupSpec,
) -> Result<bool> {
    if s1.capacity() != g.vertex_count() || s2.capacity() != g.vertex_count() {
        return Err(Error::param("sets do not belong to this graph"));
    }
    if s1.len() != s2.len() {
        return Ok(false);
    }
    if s1 == s2 {
        return Ok(true);
    }
    match spec.mode {
        EquivMode::FullAutomorphism => {
            let f1 = canonical_form(g.adjacency(), &color_by_set(s1, g), spec.canon_budget)?;
            let f2 = canonical_form(g.adjacency(), &color_by_set(s2, g), spec.canon_budget)?;
            Ok(f1 == f2)
        }
        EquivMode::Generators => {
            // Invariant ladder: profiles, then pointwise incidence signatures.
            if let (Some(p1), Some(p2)) = (sorted_profile(s1, g), sorted_profile(s2, g)) {
                if p1 != p2 {
                    return Ok(false);
                }
            }
            let sig1 = incidence_signature(s1, g);
            let sig2 = incidence_signature(s2, g);
            {
                let mut m1 = sig1.clone();
                let mut m2 = sig2.clone();
                m1.sort_unstable();
                m2.sort_unstable();
                if m1 != m2 && !spec.include_duality {
                    return Ok(false);
                }
            }
            let n = g.ground().get() as usize;
            let found = any_group_element(n, spec.include_duality, |perm, dual| {
                if !dual {
                    // σ maps s1 to s2 only if signatures agree pointwise.
                    if (0..n).any(|e| sig1[e] != sig2[perm[e] as usize]) {
                        return false;
                    }
                }
                image_set(perm, dual, s1, g)
                    .map(|img| img == *s2)
                    .unwrap_or(false)
            });
            Ok(found)
        }
    }
}

fn color_by_set(set: &VertexSet, g: &FlagGraph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| u32::from(set.contains(v)))
        .collect()
}

/// Partitions independent sets (all of one size) into equivalence classes.
/// The partition is a deterministic function of the input multiset.
pub fn classify(
    sets: &[VertexSet],
    g: &FlagGraph,
    spec: &SymmetryGroupSpec,
) -> Result<EquivClassReport> {
    if sets.is_empty() {
        return Ok(EquivClassReport {
            class_count: 0,
            classes: Vec::new(),
        });
    }
    let size = sets[0].len();
    for s in sets {
        if s.len() != size {
            return Err(Error::param("classify expects sets of one common size"));
        }
        if !solver::is_independent(s, g) {
            return Err(Error::param("classify expects independent sets"));
        }
    }
    let mut input: Vec<VertexSet> = sets.to_vec();
    input.sort_unstable();
    input.dedup();

    let mut classes = match spec.mode {
        EquivMode::Generators => classify_by_orbits(&input, g, spec),
        EquivMode::FullAutomorphism => classify_by_canon(&input, g, spec)?,
    };
    for class in &mut classes {
        class.profile = neighbor_profile(&class.representative, g)?;
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(EquivClassReport {
        class_count: classes.len(),
        classes,
    })
}

/// Orbit sweep: take the first unassigned set, generate its whole orbit, and
/// absorb every input member found in it.
fn classify_by_orbits(
    input: &[VertexSet],
    g: &FlagGraph,
    spec: &SymmetryGroupSpec,
) -> Vec<EquivClass> {
    let index: HashMap<&VertexSet, usize> =
        input.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = g.ground().get() as usize;
    let mut assigned = vec![false; input.len()];
    let mut classes = Vec::new();
    for start in 0..input.len() {
        if assigned[start] {
            continue;
        }
        let mut representative = input[start].clone();
        let mut members = 0usize;
        let mut orbit: HashSet<VertexSet> = HashSet::new();
        any_group_element(n, spec.include_duality, |perm, dual| {
            if let Ok(img) = image_set(perm, dual, &input[start], g) {
                if img < representative {
                    representative = img.clone();
                }
                if orbit.insert(img.clone()) {
                    if let Some(&idx) = index.get(&img) {
                        if !assigned[idx] {
                            assigned[idx] = true;
                            members += 1;
                        }
                    }
                }
            }
            false // visit the whole group
        });
        classes.push(EquivClass {
            representative,
            orbit_size: members,
            profile: BTreeMap::new(),
        });
    }
    classes
}

fn classify_by_canon(
    input: &[VertexSet],
    g: &FlagGraph,
    spec: &SymmetryGroupSpec,
) -> Result<Vec<EquivClass>> {
    let mut by_form: BTreeMap<crate::canon::CanonForm, Vec<usize>> = BTreeMap::new();
    for (i, s) in input.iter().enumerate() {
        let form = canonical_form(g.adjacency(), &color_by_set(s, g), spec.canon_budget)?;
        by_form.entry(form).or_default().push(i);
    }
    Ok(by_form
        .into_values()
        .map(|members| EquivClass {
            // Orbits are not enumerated in this mode; the least input member
            // stands in for the orbit minimum.
            representative: members.iter().map(|&i| input[i].clone()).min().unwrap(),
            orbit_size: members.len(),
            profile: BTreeMap::new(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};
    use crate::flags::{GroundSize, TypeSet};
    use crate::solver::{alpha_exact, enumerate_maximum, Budget};

    fn graph(n: u32, entries: &[u32]) -> FlagGraph {
        let ground = GroundSize::new(n).unwrap();
        let t = TypeSet::new(entries.to_vec(), ground).unwrap();
        FlagGraph::build(ground, &t).unwrap()
    }

    #[test]
    fn act_identity_and_inverse() {
        let g = graph(5, &[1, 3]);
        let fam = build_family(&FamilySpec::new(5, 1, 3, 0, false).unwrap(), &g).unwrap();
        let identity: Vec<u32> = (0..5).collect();
        assert_eq!(act(&identity, &fam, &g).unwrap(), fam);

        let sigma = vec![2u32, 0, 1, 4, 3];
        let mut inverse = vec![0u32; 5];
        for (e, &p) in sigma.iter().enumerate() {
            inverse[p as usize] = e as u32;
        }
        let moved = act(&sigma, &fam, &g).unwrap();
        assert_eq!(act(&inverse, &moved, &g).unwrap(), fam);
        assert!(solver::is_independent(&moved, &g));
        assert_eq!(
            neighbor_profile(&moved, &g).unwrap(),
            neighbor_profile(&fam, &g).unwrap()
        );
    }

    #[test]
    fn act_rejects_bad_permutation() {
        let g = graph(5, &[1, 3]);
        let fam = build_family(&FamilySpec::new(5, 1, 3, 0, false).unwrap(), &g).unwrap();
        assert!(act(&[0, 0, 1, 2, 3], &fam, &g).is_err());
        assert!(act(&[0, 1, 2], &fam, &g).is_err());
    }

    #[test]
    fn dual_action_requires_self_dual_type() {
        let g = graph(6, &[3]);
        let comp = g.components().into_iter().next().unwrap();
        let one = VertexSet::from_indices(g.vertex_count(), [comp.iter().next().unwrap()]);
        assert!(act_dual(&one, &g).is_ok());
        let g2 = graph(5, &[1, 3]);
        let s = VertexSet::from_indices(g2.vertex_count(), [0]);
        assert!(act_dual(&s, &g2).is_err());
    }

    #[test]
    fn permuted_set_is_equivalent() {
        let g = graph(5, &[1, 3]);
        let spec = SymmetryGroupSpec::for_graph(&g);
        let fam = build_family(&FamilySpec::new(5, 1, 3, 1, false).unwrap(), &g).unwrap();
        let sigma = vec![3u32, 1, 4, 0, 2];
        let moved = act(&sigma, &fam, &g).unwrap();
        assert!(are_equivalent(&fam, &moved, &g, &spec).unwrap());
    }

    #[test]
    fn distinct_families_are_inequivalent() {
        let g = graph(5, &[1, 3]);
        let spec = SymmetryGroupSpec::for_graph(&g);
        let f0 = build_family(&FamilySpec::new(5, 1, 3, 0, false).unwrap(), &g).unwrap();
        let f1 = build_family(&FamilySpec::new(5, 1, 3, 1, false).unwrap(), &g).unwrap();
        let barred = build_family(&FamilySpec::new(5, 1, 3, 2, true).unwrap(), &g).unwrap();
        assert!(!are_equivalent(&f0, &f1, &g, &spec).unwrap());
        assert!(!are_equivalent(&f0, &barred, &g, &spec).unwrap());
        assert!(!are_equivalent(&f1, &barred, &g, &spec).unwrap());
    }

    #[test]
    fn classification_of_maximum_sets_n5() {
        let g = graph(5, &[1, 3]);
        let spec = SymmetryGroupSpec::for_graph(&g);
        let alpha = alpha_exact(&g, None, &Budget::unlimited())
            .unwrap()
            .value()
            .unwrap();
        assert_eq!(alpha, 12);
        let sets = enumerate_maximum(&g, alpha, &Budget::unlimited()).unwrap();
        let report = classify(&sets, &g, &spec).unwrap();
        assert_eq!(report.class_count, 3);
        assert_eq!(
            report.classes.iter().map(|c| c.orbit_size).sum::<usize>(),
            sets.len()
        );
        // the three constructed families land in three distinct classes
        let f0 = build_family(&FamilySpec::new(5, 1, 3, 0, false).unwrap(), &g).unwrap();
        let f1 = build_family(&FamilySpec::new(5, 1, 3, 1, false).unwrap(), &g).unwrap();
        let barred = build_family(&FamilySpec::new(5, 1, 3, 2, true).unwrap(), &g).unwrap();
        for fam in [&f0, &f1, &barred] {
            assert!(report
                .representatives()
                .any(|rep| are_equivalent(rep, fam, &g, &spec).unwrap()));
        }
    }

    #[test]
    fn classify_is_idempotent_and_order_free() {
        let g = graph(5, &[1, 3]);
        let spec = SymmetryGroupSpec::for_graph(&g);
        let sets = enumerate_maximum(&g, 12, &Budget::unlimited()).unwrap();
        let report = classify(&sets, &g, &spec).unwrap();
        let reps: Vec<VertexSet> = report.representatives().cloned().collect();
        let again = classify(&reps, &g, &spec).unwrap();
        assert_eq!(again.class_count, report.class_count);

        let mut reversed = sets.clone();
        reversed.reverse();
        let r2 = classify(&reversed, &g, &spec).unwrap();
        assert_eq!(r2.class_count, report.class_count);
        for (a, b) in report.classes.iter().zip(&r2.classes) {
            assert_eq!(a.representative, b.representative);
            assert_eq!(a.orbit_size, b.orbit_size);
        }
    }

    #[test]
    fn modes_agree_on_small_cases() {
        let g = graph(5, &[1, 3]);
        let gen_spec = SymmetryGroupSpec::for_graph(&g);
        let full_spec = gen_spec.with_mode(EquivMode::FullAutomorphism);
        let sets = enumerate_maximum(&g, 12, &Budget::unlimited()).unwrap();
        let by_gen = classify(&sets, &g, &gen_spec).unwrap();
        let by_full = classify(&sets, &g, &full_spec).unwrap();
        assert_eq!(by_gen.class_count, by_full.class_count);
    }

    #[test]
    fn singleton_classification() {
        let g = graph(2, &[1]);
        let spec = SymmetryGroupSpec::for_graph(&g);
        let one = VertexSet::from_indices(2, [0]);
        let report = classify(&[one], &g, &spec).unwrap();
        assert_eq!(report.class_count, 1);
        assert_eq!(report.classes[0].orbit_size, 1);
    }
}
