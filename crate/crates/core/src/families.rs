//! The constructed independent families F_i(n,a,b) and their barred variants,
//! cardinality formulas, optimal shift, recurrences and neighbor-count
//! profiles.
//!
//! A family lives in Γ(n,{a,b}) with a < n/2 < b and a+b < n. For a shift
//! 0 ≤ i ≤ 2b-n+1, a pair flag (A,B) belongs to F_i iff
//!   (I)  [i] ⊆ B ⊆ [n-1], or
//!   (II) min(A) ≤ i and [min(A)] ⊆ B.
//! The barred variant (only at i = 2b-n+1) relaxes (I) to `[i] ⊆ B`.

use crate::bitset::VertexSet;
use crate::combin::{binomial, binomial_int, factorial};
use crate::error::{Error, Result};
use crate::graph::FlagGraph;
use crate::solver;
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Parameters selecting one constructed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub i: u32,
    pub barred: bool,
}

impl FamilySpec {
    pub fn new(n: u32, a: u32, b: u32, i: u32, barred: bool) -> Result<Self> {
        check_family_params(n, a, b)?;
        let top = 2 * b - n + 1;
        if i > top {
            return Err(Error::param(format!(
                "shift i={i} out of range 0..={top} for (n,a,b)=({n},{a},{b})"
            )));
        }
        if barred && i != top {
            return Err(Error::param(format!(
                "barred family requires i = 2b-n+1 = {top}, got i={i}"
            )));
        }
        Ok(FamilySpec { n, a, b, i, barred })
    }
}

fn check_family_params(n: u32, a: u32, b: u32) -> Result<()> {
    if a + b >= n {
        return Err(Error::param(format!("need a+b < n, got a={a} b={b} n={n}")));
    }
    if 2 * a >= n || 2 * b <= n {
        return Err(Error::param(format!(
            "need a < n/2 < b, got a={a} b={b} n={n}"
        )));
    }
    Ok(())
}

#[inline]
fn low_mask(k: u32) -> u64 {
    if k == 0 {
        0
    } else {
        (1u64 << k) - 1
    }
}

/// Membership test for a pair flag (A,B), masks over [n] with element e at
/// bit e-1.
fn in_family(spec: &FamilySpec, a_mask: u64, b_mask: u64) -> bool {
    let i_mask = low_mask(spec.i);
    let top_bit = 1u64 << (spec.n - 1);
    // (I), or its barred relaxation
    if b_mask & i_mask == i_mask && (spec.barred || b_mask & top_bit == 0) {
        return true;
    }
    // (II)
    let j = a_mask.trailing_zeros() + 1;
    if j <= spec.i {
        let j_mask = low_mask(j);
        if b_mask & j_mask == j_mask {
            return true;
        }
    }
    false
}

/// Collects the family's vertices in `g`, which must be Γ(n,{a,b}) for the
/// spec's parameters. The result is verified independent.
pub fn build_family(spec: &FamilySpec, g: &FlagGraph) -> Result<VertexSet> {
    if g.ground().get() != spec.n || g.type_set().entries() != [spec.a, spec.b] {
        return Err(Error::param(format!(
            "graph Γ({},{}) does not match family parameters (n,a,b)=({},{},{})",
            g.ground(),
            g.type_set(),
            spec.n,
            spec.a,
            spec.b
        )));
    }
    let mut set = VertexSet::empty(g.vertex_count());
    for (v, flag) in g.vertices().iter().enumerate() {
        let (a_mask, b_mask) = flag.pair().expect("two-level type");
        if in_family(spec, a_mask, b_mask) {
            set.insert(v);
        }
    }
    if !solver::is_independent(&set, g) {
        return Err(Error::Internal(format!(
            "constructed family {spec:?} is not independent"
        )));
    }
    let expected = family_size_spec(spec)?;
    if BigUint::from(set.len()) != expected {
        return Err(Error::Internal(format!(
            "family {spec:?} has {} members, formula gives {expected}",
            set.len()
        )));
    }
    Ok(set)
}

/// |F_i(n,a,b)| in closed form.
pub fn family_size(n: u32, a: u32, b: u32, i: u32) -> Result<BigUint> {
    let spec = FamilySpec::new(n, a, b, i, false)?;
    family_size_spec(&spec)
}

/// Size of the family selected by `spec`, barred or not.
pub fn family_size_spec(spec: &FamilySpec) -> Result<BigUint> {
    let (n, a, b, i) = (
        spec.n as u64,
        spec.a as u64,
        spec.b as u64,
        spec.i as u64,
    );
    let term_i = binomial(n - 1 - i, b - i) * binomial(b - i, a);
    let term_ii =
        binomial(n - b + a - 1, a - 1) * (binomial(n, b - a) - binomial(n - i, b - a - i));
    let mut total = term_i + term_ii;
    debug_assert_eq!(
        BigInt::from(total.clone()),
        alternative_size_form(spec.n, spec.a, spec.b, spec.i).expect("alt form"),
        "size formulas disagree at {spec:?}"
    );
    if spec.barred {
        total += barred_excess(spec.n, spec.a, spec.b);
    }
    Ok(total)
}

/// |F̄_i \ F_i| at the top shift i = 2b-n+1: flags with [i] ∪ {n} ⊆ B and
/// min(A) > i.
pub fn barred_excess(n: u32, a: u32, b: u32) -> BigUint {
    let i = (2 * b + 1 - n) as u64;
    let (n, a, b) = (n as u64, a as u64, b as u64);
    binomial(n - i - 1, b - i - 1) * binomial(b - i, a)
}

/// The alternative closed form for |F_i(n,a,b)|, used as a cross-check.
pub fn alternative_size_form(n: u32, a: u32, b: u32, i: u32) -> Result<BigInt> {
    let (n64, a64, b64, i64v) = (n as u64, a as u64, b as u64, i as u64);
    let s = n64 - b64;
    let head = binomial_int(n64 - b64 + a64 - 1, a64 - 1) * binomial_int(n64, b64 - a64);
    let coeff = BigInt::from(s) * BigInt::from(s) + BigInt::from(a64) * (BigInt::from(i64v) - BigInt::from(b64));
    let num = coeff * BigInt::from(factorial(n64 - 1 - i64v));
    let den = BigInt::from(s + a64)
        * BigInt::from(factorial(a64))
        * BigInt::from(factorial(s))
        * BigInt::from(factorial(b64 - i64v - a64));
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "alternative size form is not integral at ({n},{a},{b},{i})"
        )));
    }
    Ok(head + q)
}

/// The real optimum of the family size in the shift, and the integer shift
/// actually used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeBreakdown {
    /// i₀ = b - 1 - (n-b)(n-b-1)/a, exact.
    pub i0: Ratio<i64>,
    /// max(0, ⌈i₀⌉), the shift attaining the largest family.
    pub i_star: u32,
    /// Whether the maximum is attained at two shifts (i₀ ≥ 0 and integral).
    pub two_maxima: bool,
    /// |F_{i*}|, split by defining condition.
    pub total: BigUint,
    pub term_condition_i: BigUint,
    pub term_condition_ii: BigUint,
}

pub fn optimal_shift(n: u32, a: u32, b: u32) -> Result<SizeBreakdown> {
    check_family_params(n, a, b)?;
    let (n64, a64, b64) = (n as i64, a as i64, b as i64);
    let s = n64 - b64;
    let i0 = Ratio::new(a64 * (b64 - 1) - s * (s - 1), a64);
    let i_star = i0.ceil().to_integer().max(0) as u32;
    let two_maxima = i0 >= Ratio::zero() && i0.is_integer();

    let (nu, au, bu, iu) = (n as u64, a as u64, b as u64, i_star as u64);
    let term_i = binomial(nu - 1 - iu, bu - iu) * binomial(bu - iu, au);
    let term_ii =
        binomial(nu - bu + au - 1, au - 1) * (binomial(nu, bu - au) - binomial(nu - iu, bu - au - iu));
    Ok(SizeBreakdown {
        i0,
        i_star,
        two_maxima,
        total: term_i.clone() + term_ii.clone(),
        term_condition_i: term_i,
        term_condition_ii: term_ii,
    })
}

/// f(n,a,b): the size of the largest constructed family.
pub fn f_max(n: u32, a: u32, b: u32) -> Result<BigUint> {
    Ok(optimal_shift(n, a, b)?.total)
}

/// Verifies the two closed-form identities relating f(n,a,b) and
/// f(n-1,a,b-1). Returns false only if an identity fails, which would
/// indicate a formula bug.
pub fn recurrence_check(n: u32, a: u32, b: u32) -> Result<bool> {
    if n < a + b + 1 {
        return Err(Error::param(format!("need n ≥ a+b+1, got ({n},{a},{b})")));
    }
    check_family_params(n, a, b)?;
    check_family_params(n - 1, a, b - 1)?;

    let f_n = BigInt::from(f_max(n, a, b)?);
    let f_prev = BigInt::from(f_max(n - 1, a, b - 1)?);
    let (n64, a64, b64) = (n as u64, a as u64, b as u64);

    let first = f_n.clone()
        == f_prev.clone() + binomial_int(n64 - 1, b64 - 1) * binomial_int(b64 - 1, a64 - 1);

    // n·f(n-1,a,b-1) - (b-a)·f(n,a,b) = [(n-b)² + a(i-b)]·(n-1-i)! / (a!(n-b)!(b-i-a)!)
    let i = optimal_shift(n, a, b)?.i_star as u64;
    let s = n64 - b64;
    let coeff =
        BigInt::from(s) * BigInt::from(s) + BigInt::from(a64) * (BigInt::from(i) - BigInt::from(b64));
    let num = coeff * BigInt::from(factorial(n64 - 1 - i));
    let den = BigInt::from(factorial(a64))
        * BigInt::from(factorial(s))
        * BigInt::from(factorial(b64 - i - a64));
    let lhs = BigInt::from(n64) * f_prev - BigInt::from(b64 - a64) * f_n;
    let second = lhs * den.clone() == num && !den.is_negative();

    Ok(first && second)
}

/// Histogram over the vertices outside `set`: key = number of neighbors in
/// `set`, value = how many outside vertices have that count. Requires `set`
/// independent.
pub fn neighbor_profile(set: &VertexSet, g: &FlagGraph) -> Result<BTreeMap<usize, usize>> {
    if !solver::is_independent(set, g) {
        return Err(Error::param("neighbor_profile requires an independent set"));
    }
    let mut hist = BTreeMap::new();
    for v in 0..g.vertex_count() {
        if set.contains(v) {
            continue;
        }
        let k = set.intersection_count(g.row(v));
        *hist.entry(k).or_insert(0) += 1;
    }
    Ok(hist)
}
