//! Ground-set combinatorics: flags of finite sets, their types, general
//! position, duality and projection.
//!
//! A flag of `[n]` is a chain of nested non-empty proper subsets; its type is
//! the set of member cardinalities. Subsets are bitmasks over `[n]` with
//! element `i` at bit `i-1`, so `n` is capped at the word width. Graphs are
//! only ever materialized for much smaller `n`; the formula layer uses the
//! full range (the largest closed-form check lives at n = 36).

use crate::combin::{binomial, expand_bits, subsets_of_size};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

/// Largest ground set representable as a single-word bitmask.
pub const MAX_GROUND: u32 = 64;

/// Size of the ground set `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroundSize(u32);

impl GroundSize {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("ground size must be at least 2, got {n}")));
        }
        if n > MAX_GROUND {
            return Err(Error::param(format!(
                "ground size {n} exceeds the bitmask width {MAX_GROUND}"
            )));
        }
        Ok(GroundSize(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Bitmask of the full ground set.
    #[inline]
    pub fn mask(self) -> u64 {
        if self.0 >= 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }
}

impl std::fmt::Display for GroundSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The type of a flag: a non-empty strictly increasing set of sizes in `[n-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TypeSet(Vec<u32>);

impl TypeSet {
    pub fn new(entries: impl Into<Vec<u32>>, ground: GroundSize) -> Result<Self> {
        let entries = entries.into();
        if entries.is_empty() {
            return Err(Error::param("type set must be non-empty"));
        }
        if entries[0] < 1 {
            return Err(Error::param("type set entries must be at least 1"));
        }
        if !entries.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::param(format!(
                "type set entries must be strictly increasing, got {entries:?}"
            )));
        }
        let max = *entries.last().unwrap();
        if max >= ground.get() {
            return Err(Error::param(format!(
                "type set entry {max} must be below ground size {}",
                ground.get()
            )));
        }
        Ok(TypeSet(entries))
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn min_entry(&self) -> u32 {
        self.0[0]
    }

    pub fn max_entry(&self) -> u32 {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, size: u32) -> bool {
        self.0.binary_search(&size).is_ok()
    }

    pub fn is_subset_of(&self, other: &TypeSet) -> bool {
        self.0.iter().all(|t| other.contains(*t))
    }

    /// The dual type `ω_n(T) = {n - t : t ∈ T}`.
    pub fn dual(&self, ground: GroundSize) -> TypeSet {
        let mut entries: Vec<u32> = self.0.iter().map(|t| ground.get() - t).collect();
        entries.reverse();
        TypeSet(entries)
    }

    pub fn is_self_dual(&self, ground: GroundSize) -> bool {
        *self == self.dual(ground)
    }
}

impl std::fmt::Display for TypeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A flag: nested subset levels stored smallest first, one bitmask each.
///
/// `Ord` compares the level masks numerically in order, which is the
/// canonical vertex order used by every graph built downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    n: u32,
    levels: Vec<u64>,
}

impl Flag {
    /// Builds a flag from level masks (any order), validating the chain.
    pub fn new(levels: impl Into<Vec<u64>>, ground: GroundSize) -> Result<Self> {
        let mut levels = levels.into();
        levels.sort_by_key(|m| m.count_ones());
        if levels.is_empty() {
            return Err(Error::param("flag must have at least one level"));
        }
        let full = ground.mask();
        for w in levels.windows(2) {
            if w[0].count_ones() == w[1].count_ones() {
                return Err(Error::param("flag levels must have distinct sizes"));
            }
            if w[0] & !w[1] != 0 {
                return Err(Error::param("flag levels must be nested"));
            }
        }
        for &m in &levels {
            if m == 0 || m & !full != 0 || m == full {
                return Err(Error::param(
                    "each flag level must be a non-empty proper subset of the ground set",
                ));
            }
        }
        Ok(Flag {
            n: ground.get(),
            levels,
        })
    }

    #[inline]
    pub(crate) fn from_raw(n: u32, levels: Vec<u64>) -> Self {
        Flag { n, levels }
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        GroundSize(self.n)
    }

    #[inline]
    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// Sizes of the levels, i.e. the entries of this flag's type.
    pub fn type_entries(&self) -> Vec<u32> {
        self.levels.iter().map(|m| m.count_ones()).collect()
    }

    /// For two-level flags, the pair `(A, B)` with `|A| < |B|`.
    pub fn pair(&self) -> Option<(u64, u64)> {
        if self.levels.len() == 2 {
            Some((self.levels[0], self.levels[1]))
        } else {
            None
        }
    }

    /// Level elements as 1-based ground elements, for display.
    pub fn level_elements(&self, k: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut m = self.levels[k];
        while m != 0 {
            out.push(m.trailing_zeros() + 1);
            m &= m - 1;
        }
        out
    }
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..self.levels.len())
            .map(|k| {
                let elems: Vec<String> =
                    self.level_elements(k).iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", elems.join(","))
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of flags of type `T` over `[n]`: the product
/// C(n, t_k) · C(t_k, t_{k-1}) · ... · C(t_2, t_1).
pub fn count_flags(ground: GroundSize, type_set: &TypeSet) -> BigUint {
    chain_count(ground.get(), type_set.entries())
}

/// Like [`count_flags`] but over a raw size slice, allowing the empty chain
/// (one empty flag). Sizes must be strictly increasing and below `n`.
pub fn chain_count(n: u32, sizes: &[u32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut upper = n;
    for &t in sizes.iter().rev() {
        acc *= binomial(upper as u64, t as u64);
        upper = t;
    }
    acc
}

/// All flags of type `T` over `[n]`, in canonical order (lexicographic on the
/// level-mask tuple, smallest level first).
pub fn enumerate_flags(ground: GroundSize, type_set: &TypeSet) -> Vec<Flag> {
    let n = ground.get();
    let sizes = type_set.entries();
    let mut out = Vec::new();
    let mut levels = vec![0u64; sizes.len()];
    // Depth-first over levels, smallest first. Each extension is a disjoint
    // superset mask, so OR is addition and numeric order is preserved level
    // by level: the output arrives already in canonical order.
    fn rec(
        n: u32,
        sizes: &[u32],
        depth: usize,
        levels: &mut Vec<u64>,
        out: &mut Vec<Flag>,
    ) {
        if depth == sizes.len() {
            out.push(Flag::from_raw(n, levels.clone()));
            return;
        }
        let prev_mask = if depth == 0 { 0 } else { levels[depth - 1] };
        let prev_size = if depth == 0 { 0 } else { sizes[depth - 1] };
        let free = full_mask(n) & !prev_mask;
        let want = sizes[depth] - prev_size;
        for compact in subsets_of_size(n - prev_size, want) {
            levels[depth] = prev_mask | expand_bits(compact, free);
            rec(n, sizes, depth + 1, levels, out);
        }
    }
    rec(n, sizes, 0, &mut levels, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

#[inline]
fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Two flags are in general position iff every cross pair of levels has empty
/// intersection or full union. Errors when the flags live over different
/// ground sets.
pub fn in_general_position(f1: &Flag, f2: &Flag) -> Result<bool> {
    if f1.n != f2.n {
        return Err(Error::param(format!(
            "flags over different ground sets: {} vs {}",
            f1.n, f2.n
        )));
    }
    Ok(gp_unchecked(f1, f2, full_mask(f1.n)))
}

#[inline]
pub(crate) fn gp_unchecked(f1: &Flag, f2: &Flag, full: u64) -> bool {
    for &x in &f1.levels {
        for &y in &f2.levels {
            if x & y != 0 && x | y != full {
                return false;
            }
        }
    }
    true
}

/// The complement flag `{[n] \ A : A ∈ f}`, of type `ω_n(T)`.
pub fn dual_flag(f: &Flag) -> Flag {
    let full = full_mask(f.n);
    let mut levels: Vec<u64> = f.levels.iter().map(|m| full & !m).collect();
    levels.reverse();
    Flag {
        n: f.n,
        levels,
    }
}

/// Restriction of `f` to the level sizes in `S`; errors unless `S ⊆ T`.
pub fn project_flag(f: &Flag, type_set: &TypeSet, target: &TypeSet) -> Result<Flag> {
    let own = f.type_entries();
    if own != type_set.entries() {
        return Err(Error::param(format!(
            "flag has type {:?}, not the declared {:?}",
            own,
            type_set.entries()
        )));
    }
    if !target.is_subset_of(type_set) {
        return Err(Error::param(format!(
            "projection target {target} is not a subset of {type_set}"
        )));
    }
    let levels: Vec<u64> = f
        .levels
        .iter()
        .copied()
        .filter(|m| target.contains(m.count_ones()))
        .collect();
    Ok(Flag {
        n: f.n,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn g(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    fn ts(entries: &[u32], n: u32) -> TypeSet {
        TypeSet::new(entries.to_vec(), g(n)).unwrap()
    }

    #[test]
    fn type_set_validation() {
        assert!(TypeSet::new(vec![], g(5)).is_err());
        assert!(TypeSet::new(vec![0, 2], g(5)).is_err());
        assert!(TypeSet::new(vec![2, 2], g(5)).is_err());
        assert!(TypeSet::new(vec![3, 2], g(5)).is_err());
        assert!(TypeSet::new(vec![5], g(5)).is_err());
        assert!(TypeSet::new(vec![1, 4], g(5)).is_ok());
    }

    #[test]
    fn count_matches_enumeration() {
        for (n, t) in [(7u32, vec![2u32, 4]), (6, vec![1, 4]), (5, vec![1, 3]), (4, vec![2])] {
            let ground = g(n);
            let type_set = ts(&t, n);
            let flags = enumerate_flags(ground, &type_set);
            assert_eq!(
                BigUint::from(flags.len()),
                count_flags(ground, &type_set),
                "count mismatch for ({n},{t:?})"
            );
        }
    }

    #[test]
    fn counts_from_closed_form() {
        assert_eq!(count_flags(g(7), &ts(&[2, 4], 7)).to_u64(), Some(210));
        assert_eq!(count_flags(g(6), &ts(&[1, 4], 6)).to_u64(), Some(60));
        assert_eq!(count_flags(g(6), &ts(&[4], 6)).to_u64(), Some(15));
        assert_eq!(count_flags(g(2), &ts(&[1], 2)).to_u64(), Some(2));
        assert_eq!(count_flags(g(36), &ts(&[1, 33], 36)).to_u64(), Some(235_620));
        assert_eq!(count_flags(g(5), &ts(&[1, 3], 5)).to_u64(), Some(30));
    }

    #[test]
    fn enumeration_order_and_uniqueness() {
        let flags = enumerate_flags(g(3), &ts(&[1], 3));
        let masks: Vec<u64> = flags.iter().map(|f| f.levels()[0]).collect();
        assert_eq!(masks, vec![0b001, 0b010, 0b100]);
        let flags = enumerate_flags(g(4), &ts(&[2], 4));
        assert_eq!(flags.len(), 6);
        let mut dedup = flags.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn general_position_basics() {
        let f1 = Flag::new(vec![0b0001], g(4)).unwrap();
        let f2 = Flag::new(vec![0b0010], g(4)).unwrap();
        assert!(in_general_position(&f1, &f2).unwrap());
        assert!(!in_general_position(&f1, &f1).unwrap());
        let other = Flag::new(vec![0b00001], g(5)).unwrap();
        assert!(in_general_position(&f1, &other).is_err());
    }

    #[test]
    fn dual_is_involution_and_gp_with_self() {
        for f in enumerate_flags(g(5), &ts(&[1, 3], 5)) {
            let d = dual_flag(&f);
            assert_eq!(dual_flag(&d), f);
            assert!(in_general_position(&f, &d).unwrap());
            assert_eq!(d.type_entries(), vec![2, 4]);
        }
    }

    #[test]
    fn dual_example_n5() {
        // ({1},{1,2,3}) over [5] -> ({4,5},{2,3,4,5})
        let f = Flag::new(vec![0b00001, 0b00111], g(5)).unwrap();
        let d = dual_flag(&f);
        assert_eq!(d.levels(), &[0b11000, 0b11110]);
        assert_eq!(d.type_entries(), vec![2, 4]);
    }

    #[test]
    fn dual_type_mapping() {
        assert_eq!(ts(&[2, 5], 8).dual(g(8)), ts(&[3, 6], 8));
        assert!(ts(&[3], 6).is_self_dual(g(6)));
        assert!(!ts(&[2, 4], 7).is_self_dual(g(7)));
    }

    #[test]
    fn projection_examples() {
        let t = ts(&[1, 4], 6);
        let s = ts(&[4], 6);
        // f = ({2},{2,3,5,6})
        let f = Flag::new(vec![0b000010, 0b110110], g(6)).unwrap();
        let p = project_flag(&f, &t, &s).unwrap();
        assert_eq!(p.levels(), &[0b110110]);
        // S = T is the identity
        let idp = project_flag(&f, &t, &t).unwrap();
        assert_eq!(idp, f);
        // S not a subset of T
        assert!(project_flag(&f, &t, &ts(&[2], 6)).is_err());
    }

    #[test]
    fn projection_preimage_count() {
        // every type-S flag has count ratio many type-T preimages
        let ground = g(6);
        let t = ts(&[1, 4], 6);
        let s = ts(&[4], 6);
        let ratio = count_flags(ground, &t) / count_flags(ground, &s);
        assert_eq!(ratio.to_u64(), Some(4));
        let targets = enumerate_flags(ground, &s);
        for target in targets {
            let preimages = enumerate_flags(ground, &t)
                .into_iter()
                .filter(|f| project_flag(f, &t, &s).unwrap() == target)
                .count();
            assert_eq!(preimages, 4);
        }
    }

    #[test]
    fn pair_flags_with_complementary_sizes_have_unique_partner() {
        // For a+b=n each flag is in general position with exactly one flag of
        // its own type.
        for (n, a, b) in [(4u32, 1u32, 3u32), (6, 2, 4), (5, 2, 3)] {
            let ground = g(n);
            let t = ts(&[a, b], n);
            let flags = enumerate_flags(ground, &t);
            for f in &flags {
                let partners = flags
                    .iter()
                    .filter(|h| in_general_position(f, h).unwrap())
                    .count();
                assert_eq!(partners, 1, "n={n} a={a} b={b} flag {f}");
            }
        }
    }
}
