//! Closed-form independence numbers, upper and lower bounds, and a dispatcher
//! that settles α(Γ(n,T)) by theorem where possible and by intervals or the
//! exact solver otherwise.
//!
//! All combinatorial bounds are exact integer arithmetic; only the two
//! spectral bounds go through floating point, with explicit tolerances and a
//! safety margin before flooring.

use crate::bitset::VertexSet;
use crate::combin::{binomial, factorial};
use crate::error::{Error, Result};
use crate::families::{self, FamilySpec};
use crate::flags::{chain_count, count_flags, GroundSize, TypeSet};
use crate::graph::{BuildLimits, FlagGraph};
use crate::serde_util::{biguint_string, opt_biguint_string};
use crate::solver::{self, Budget};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

/// One named bound: its applicability verdict, value and supporting data.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub applicable: bool,
    pub reason: String,
    #[serde(with = "opt_biguint_string")]
    pub value: Option<BigUint>,
    pub direction: Direction,
    pub support: BTreeMap<String, String>,
}

impl BoundReport {
    fn of(name: &'static str, direction: Direction, value: BigUint, reason: String) -> Self {
        BoundReport {
            name,
            applicable: true,
            reason,
            value: Some(value),
            direction,
            support: BTreeMap::new(),
        }
    }

    fn not_applicable(name: &'static str, direction: Direction, reason: String) -> Self {
        BoundReport {
            name,
            applicable: false,
            reason,
            value: None,
            direction,
            support: BTreeMap::new(),
        }
    }

    fn with_support(mut self, key: &str, value: impl ToString) -> Self {
        self.support.insert(key.to_string(), value.to_string());
        self
    }
}

/// α from the Erdős–Ko–Rado theorem, applicable when max(T) ≤ n/2:
/// C(n-1,t-1) · |VΓ(t, T∖{t})|.
pub fn ekr_value(ground: GroundSize, type_set: &TypeSet) -> BoundReport {
    let n = ground.get();
    let t = type_set.max_entry();
    if 2 * t > n {
        return BoundReport::not_applicable(
            "ekr",
            Direction::Exact,
            format!("max(T)={t} exceeds n/2={n}/2"),
        );
    }
    let rest: Vec<u32> = type_set
        .entries()
        .iter()
        .copied()
        .filter(|&e| e != t)
        .collect();
    let value = binomial(n as u64 - 1, t as u64 - 1) * chain_count(t, &rest);
    BoundReport::of(
        "ekr",
        Direction::Exact,
        value,
        format!("max(T)={t} ≤ n/2"),
    )
}

/// α = |V|/2 when some i,j ∈ T (i = j allowed) have i + j = n.
pub fn bipartite_value(ground: GroundSize, type_set: &TypeSet) -> BoundReport {
    let n = ground.get();
    let pair = type_set
        .entries()
        .iter()
        .find(|&&i| i <= n - i && type_set.contains(n - i))
        .copied();
    let Some(i) = pair else {
        return BoundReport::not_applicable(
            "bipartite",
            Direction::Exact,
            "no i,j in T with i+j=n".into(),
        );
    };
    let count = count_flags(ground, type_set);
    let (half, rem) = count.div_rem(&BigUint::from(2u32));
    debug_assert!(rem.is_zero(), "complement pairing forces an even vertex count");
    BoundReport::of(
        "bipartite",
        Direction::Exact,
        half,
        format!("{i}+{} = n, graph is bipartite", n - i),
    )
}

/// α ≤ ⌊|V|/2⌋ for any regular non-empty graph.
pub fn half_bound(g: &FlagGraph) -> BoundReport {
    let value = BigUint::from(g.vertex_count() / 2);
    let bipartite = g.is_bipartite().is_some();
    BoundReport::of("half", Direction::Upper, value, "regular non-empty graph".into())
        .with_support("bipartite", bipartite)
        .with_support("tight", bipartite)
}

/// α = C(n-1,b)·C(b,a) by the cycle method, under n < 2b and a+3b ≤ 2n.
pub fn cycle_value(n: u32, a: u32, b: u32) -> BoundReport {
    if a >= b || a < 1 {
        return BoundReport::not_applicable(
            "cycle",
            Direction::Exact,
            format!("need 1 ≤ a < b, got a={a} b={b}"),
        );
    }
    if n >= 2 * b {
        return BoundReport::not_applicable(
            "cycle",
            Direction::Exact,
            format!("n < 2b fails: {n} ≥ {}", 2 * b),
        );
    }
    if a + 3 * b > 2 * n {
        return BoundReport::not_applicable(
            "cycle",
            Direction::Exact,
            format!("a+3b ≤ 2n fails: {} > {}", a + 3 * b, 2 * n),
        );
    }
    let value = binomial(n as u64 - 1, b as u64) * binomial(b as u64, a as u64);
    BoundReport::of("cycle", Direction::Exact, value, format!("n < 2b and a+3b ≤ 2n"))
}

/// The cycle corollary for type T ∪ {a,b} with T ⊆ [a-1]:
/// α = C(n-1,b)·C(b,a) · |VΓ(a,T)|.
pub fn cycle_corollary_value(n: u32, a: u32, b: u32, low: &[u32]) -> BoundReport {
    if low.iter().any(|&t| t >= a) {
        return BoundReport::not_applicable(
            "cycle-corollary",
            Direction::Exact,
            format!("tail {low:?} is not a subset of [a-1], a={a}"),
        );
    }
    let base = cycle_value(n, a, b);
    if !base.applicable {
        return BoundReport::not_applicable("cycle-corollary", Direction::Exact, base.reason);
    }
    let value = base.value.unwrap() * chain_count(a, low);
    BoundReport::of(
        "cycle-corollary",
        Direction::Exact,
        value,
        format!("cycle value lifted by |VΓ({a},{low:?})|"),
    )
}

/// α(Γ(n,{1,n-2})) = C(n,3) + 2 for n ≥ 5.
pub fn theorem_1nm2_value(n: u32) -> BoundReport {
    if n < 5 {
        return BoundReport::not_applicable(
            "one-nminus2",
            Direction::Exact,
            format!("needs n ≥ 5, got {n}"),
        );
    }
    let value = binomial(n as u64, 3) + BigUint::from(2u32);
    BoundReport::of("one-nminus2", Direction::Exact, value, "type {1,n-2}".into())
}

/// Projection lower bound: α(Γ(n,T)) ≥ α(Γ(n,S)) · |VΓ(n,T)|/|VΓ(n,S)| for
/// S ⊆ T. The ratio is the common preimage count, always integral.
pub fn projection_lower(
    ground: GroundSize,
    type_set: &TypeSet,
    sub: &TypeSet,
    alpha_sub: &BigUint,
) -> Result<BoundReport> {
    if !sub.is_subset_of(type_set) {
        return Err(Error::param(format!("{sub} is not a subset of {type_set}")));
    }
    let (ratio, rem) = count_flags(ground, type_set).div_rem(&count_flags(ground, sub));
    if !rem.is_zero() {
        return Err(Error::Internal("projection ratio is not integral".into()));
    }
    Ok(BoundReport::of(
        "projection-lower",
        Direction::Lower,
        alpha_sub * &ratio,
        format!("preimage count {ratio} of Γ({ground},{sub})"),
    ))
}

/// Exact projection: when S ⊆ T, min(S)+max(S) ≤ n and max(T∖S) < min(S),
/// α(Γ(n,T)) = α(Γ(n,S)) · |VΓ(min S, T∖S)|.
pub fn projection_exact(
    ground: GroundSize,
    type_set: &TypeSet,
    sub: &TypeSet,
    alpha_sub: &BigUint,
) -> BoundReport {
    let n = ground.get();
    if !sub.is_subset_of(type_set) || sub == type_set {
        return BoundReport::not_applicable(
            "projection-exact",
            Direction::Exact,
            format!("need S ⊊ T, got S={sub} T={type_set}"),
        );
    }
    if sub.min_entry() + sub.max_entry() > n {
        return BoundReport::not_applicable(
            "projection-exact",
            Direction::Exact,
            format!("min(S)+max(S) ≤ n fails: {}", sub.min_entry() + sub.max_entry()),
        );
    }
    let dropped: Vec<u32> = type_set
        .entries()
        .iter()
        .copied()
        .filter(|e| !sub.contains(*e))
        .collect();
    let max_dropped = *dropped.iter().max().unwrap();
    if max_dropped >= sub.min_entry() {
        return BoundReport::not_applicable(
            "projection-exact",
            Direction::Exact,
            format!("max(T∖S)={max_dropped} is not below min(S)={}", sub.min_entry()),
        );
    }
    let lift = chain_count(sub.min_entry(), &dropped);
    BoundReport::of(
        "projection-exact",
        Direction::Exact,
        alpha_sub * &lift,
        format!("exact lift by |VΓ({},{dropped:?})| = {lift}", sub.min_entry()),
    )
}

/// Deletion bound: α(Γ(n,{a,b})) ≤ ⌊n · α(Γ(n-1,{a,b-1})) / (b-a)⌋.
pub fn deletion_bound(n: u32, a: u32, b: u32, alpha_smaller: &BigUint) -> BoundReport {
    if a >= b {
        return BoundReport::not_applicable(
            "deletion",
            Direction::Upper,
            format!("need a < b, got a={a} b={b}"),
        );
    }
    let value = (BigUint::from(n) * alpha_smaller) / BigUint::from(b - a);
    BoundReport::of(
        "deletion",
        Direction::Upper,
        value,
        format!("each member avoids {} deleted elements", b - a),
    )
    .with_support("alpha_smaller", alpha_smaller)
}

/// Sorted adjacency spectrum of the graph.
pub fn spectrum(g: &FlagGraph, eps: f64) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| f64::from(g.adjacent(i, j)));
    let eigen = nalgebra::SymmetricEigen::try_new(m, eps, 0)
        .ok_or_else(|| Error::Eigen(format!("no convergence at tolerance {eps}")))?;
    let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Hoffman ratio bound α ≤ |V|·(-λ_min)/(d - λ_min) for a d-regular graph.
pub fn hoffman(g: &FlagGraph, eps: f64) -> Result<BoundReport> {
    let vals = spectrum(g, eps)?;
    let lambda_min = vals[0];
    let d = g.degree() as f64;
    let v = g.vertex_count() as f64;
    let ratio = v * (-lambda_min) / (d - lambda_min);
    let floor = ratio.floor();
    let margin = 1e-6;
    let near_boundary = (ratio - floor) < margin || (floor + 1.0 - ratio) < margin;
    let mut report = BoundReport::of(
        "hoffman",
        Direction::Upper,
        BigUint::from(floor.max(0.0) as u64),
        format!("d = {d}, λ_min = {lambda_min:.9}"),
    )
    .with_support("lambda_min", format!("{lambda_min:.9}"))
    .with_support("ratio", format!("{ratio:.9}"));
    if near_boundary {
        report = report
            .with_support("near_integer_boundary", "true")
            .with_support(
                "floor_candidates",
                format!("{},{}", (floor - 1.0).max(0.0) as u64, floor.max(0.0) as u64),
            );
    }
    Ok(report)
}

/// Inertia bound: α ≤ min(#eigenvalues ≥ 0, #eigenvalues ≤ 0), with the zero
/// classification at 1e-7 of the spectral radius.
pub fn inertia_bound(g: &FlagGraph, eps: f64) -> Result<BoundReport> {
    let vals = spectrum(g, eps)?;
    let radius = vals
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max);
    let tol = 1e-7 * radius;
    let pos = vals.iter().filter(|&&v| v > tol).count();
    let neg = vals.iter().filter(|&&v| v < -tol).count();
    let zero = vals.len() - pos - neg;
    let value = (pos + zero).min(neg + zero);
    Ok(BoundReport::of(
        "inertia",
        Direction::Upper,
        BigUint::from(value),
        format!("{pos} positive, {neg} negative, {zero} zero eigenvalues"),
    )
    .with_support("positive", pos)
    .with_support("negative", neg)
    .with_support("zero", zero)
    .with_support("zero_tolerance", format!("{tol:.3e}")))
}

/// Clique-coclique bound α ≤ ⌊|V|/ω⌋ for vertex-transitive graphs. The
/// transitivity comes from the symmetric-group action and is not re-verified.
pub fn clique_coclique(g: &FlagGraph, omega: usize) -> BoundReport {
    if omega == 0 {
        return BoundReport::not_applicable("clique-coclique", Direction::Upper, "ω = 0".into());
    }
    BoundReport::of(
        "clique-coclique",
        Direction::Upper,
        BigUint::from(g.vertex_count() / omega),
        format!("ω = {omega}, vertex-transitive"),
    )
}

/// The §-style induction condition
/// n ≥ [(n-b)² + a(i-b)]·(n-1-i)!/(a!(n-b)!(b-i-a)!) + 3a + 1,
/// evaluated in exact integer arithmetic with i the optimal shift.
pub fn induction_condition(n: u32, a: u32, b: u32) -> Result<bool> {
    if n < a + b + 1 {
        return Err(Error::param(format!("need n ≥ a+b+1, got ({n},{a},{b})")));
    }
    let i = families::optimal_shift(n, a, b)?.i_star as u64;
    let (n64, a64, b64) = (n as u64, a as u64, b as u64);
    let s = n64 - b64;
    let coeff =
        BigInt::from(s) * BigInt::from(s) + BigInt::from(a64) * (BigInt::from(i) - BigInt::from(b64));
    let num = coeff * BigInt::from(factorial(n64 - 1 - i));
    let den = BigInt::from(factorial(a64))
        * BigInt::from(factorial(s))
        * BigInt::from(factorial(b64 - i - a64));
    // n ≥ num/den + 3a + 1, compared without division
    let slack = BigInt::from(n64) - BigInt::from(3 * a64) - BigInt::one();
    Ok(slack * den >= num)
}

/// How the dispatcher may spend resources.
#[derive(Debug, Clone, Copy)]
pub struct DispatchConfig {
    pub limits: BuildLimits,
    /// Allow building the graph for spectral and clique-coclique bounds.
    pub spectral: bool,
    /// Fall back to the exact solver when no theorem settles the value.
    pub use_solver: bool,
    pub solver_budget: Budget,
    pub eigen_tol: f64,
    /// Node cap for the clique search feeding clique-coclique.
    pub omega_node_budget: u64,
}

impl Default for DispatchConfig {
    fn default() -> Self {
        DispatchConfig {
            limits: BuildLimits::default(),
            spectral: true,
            use_solver: false,
            solver_budget: Budget::unlimited(),
            eigen_tol: 1e-9,
            omega_node_budget: 5_000_000,
        }
    }
}

/// The dispatcher's answer, with its provenance chain.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum AlphaVerdict {
    Exact {
        #[serde(with = "biguint_string")]
        value: BigUint,
        method: Vec<String>,
    },
    Interval {
        #[serde(with = "biguint_string")]
        lo: BigUint,
        #[serde(with = "biguint_string")]
        hi: BigUint,
        method: Vec<String>,
    },
    Unknown {
        method: Vec<String>,
    },
}

impl AlphaVerdict {
    pub fn exact_value(&self) -> Option<&BigUint> {
        match self {
            AlphaVerdict::Exact { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn lower(&self) -> BigUint {
        match self {
            AlphaVerdict::Exact { value, .. } => value.clone(),
            AlphaVerdict::Interval { lo, .. } => lo.clone(),
            AlphaVerdict::Unknown { .. } => BigUint::zero(),
        }
    }

    pub fn upper(&self) -> Option<BigUint> {
        match self {
            AlphaVerdict::Exact { value, .. } => Some(value.clone()),
            AlphaVerdict::Interval { hi, .. } => Some(hi.clone()),
            AlphaVerdict::Unknown { .. } => None,
        }
    }

    pub fn method(&self) -> &[String] {
        match self {
            AlphaVerdict::Exact { method, .. }
            | AlphaVerdict::Interval { method, .. }
            | AlphaVerdict::Unknown { method } => method,
        }
    }
}

/// Decides α(Γ(n,T)): cheapest exact theorems first (bipartite, EKR directly
/// and on the dual, exact projection over admissible sub-types including
/// dualized ones, cycle theorem and its corollary, the {1,n-2} theorem), then
/// the best lower/upper interval, then the solver when allowed.
pub fn alpha_dispatch(
    ground: GroundSize,
    type_set: &TypeSet,
    cfg: &DispatchConfig,
) -> Result<AlphaVerdict> {
    if let Some((value, method)) = try_theorems(ground, type_set, cfg)? {
        return Ok(AlphaVerdict::Exact { value, method });
    }

    let mut methods: Vec<String> = Vec::new();
    let count = count_flags(ground, type_set);

    // Lower bounds: constructed families and projections.
    let mut lo = BigUint::zero();
    let mut lo_method = String::from("trivial");
    let mut consider_lower = |value: BigUint, desc: String, lo: &mut BigUint, m: &mut String| {
        if value > *lo {
            *lo = value;
            *m = desc;
        }
    };
    for (fam_ground, fam_type, dualized) in orientations(ground, type_set) {
        if let Some((a, b)) = two_type(&fam_type) {
            if 2 * a < fam_ground.get() && 2 * b > fam_ground.get() && a + b < fam_ground.get() {
                let shift = families::optimal_shift(fam_ground.get(), a, b)?;
                consider_lower(
                    shift.total.clone(),
                    format!(
                        "family F_{}({},{a},{b}){}",
                        shift.i_star,
                        fam_ground.get(),
                        if dualized { " on dual type" } else { "" }
                    ),
                    &mut lo,
                    &mut lo_method,
                );
            }
        }
        for sub in proper_subtypes(&fam_type, fam_ground) {
            let sub_verdict = alpha_dispatch(fam_ground, &sub, &recursive_cfg(cfg))?;
            let sub_lo = sub_verdict.lower();
            if sub_lo.is_zero() {
                continue;
            }
            let report = projection_lower(fam_ground, &fam_type, &sub, &sub_lo)?;
            consider_lower(
                report.value.unwrap(),
                format!(
                    "projection from Γ({fam_ground},{sub}) ≥ {sub_lo}{}",
                    if dualized { " (dual)" } else { "" }
                ),
                &mut lo,
                &mut lo_method,
            );
        }
    }
    methods.push(format!("lower: {lo_method} = {lo}"));

    // Upper bounds.
    let (half, rem) = count.div_rem(&BigUint::from(2u32));
    let _ = rem;
    let mut hi = half;
    let mut hi_method = String::from("half");
    let mut consider_upper = |value: BigUint, desc: String, hi: &mut BigUint, m: &mut String| {
        if value < *hi {
            *hi = value;
            *m = desc;
        }
    };
    for (del_ground, del_type, dualized) in orientations(ground, type_set) {
        if let Some((a, b)) = two_type(&del_type) {
            // the deleted-element argument needs the smaller type to stay a
            // genuine two-type
            if b >= a + 2 && del_ground.get() >= 3 {
                let smaller_ground = GroundSize::new(del_ground.get() - 1)?;
                let smaller = TypeSet::new(vec![a, b - 1], smaller_ground)?;
                let sub = alpha_dispatch(smaller_ground, &smaller, &recursive_cfg(cfg))?;
                if let Some(sub_hi) = sub.upper() {
                    let report = deletion_bound(del_ground.get(), a, b, &sub_hi);
                    if let Some(value) = report.value {
                        consider_upper(
                            value,
                            format!(
                                "deletion via α(Γ({smaller_ground},{smaller})) ≤ {sub_hi}{}",
                                if dualized { " (dual)" } else { "" }
                            ),
                            &mut hi,
                            &mut hi_method,
                        );
                    }
                }
            }
        }
    }

    let graph = if cfg.spectral || cfg.use_solver {
        FlagGraph::build_with(ground, type_set, cfg.limits).ok()
    } else {
        None
    };
    if let Some(g) = &graph {
        if cfg.spectral {
            if let Ok(report) = hoffman(g, cfg.eigen_tol) {
                consider_upper(
                    report.value.clone().unwrap(),
                    format!("hoffman ({})", report.reason),
                    &mut hi,
                    &mut hi_method,
                );
            }
            if let Ok(report) = inertia_bound(g, cfg.eigen_tol) {
                consider_upper(
                    report.value.clone().unwrap(),
                    format!("inertia ({})", report.reason),
                    &mut hi,
                    &mut hi_method,
                );
            }
            let omega_budget = Budget {
                max_nodes: Some(cfg.omega_node_budget),
                max_time: None,
            };
            if let Ok(res) = solver::omega_exact(g, &omega_budget) {
                if let Some(omega) = res.value() {
                    let report = clique_coclique(g, omega);
                    if let Some(value) = report.value {
                        consider_upper(value, format!("clique-coclique (ω={omega})"), &mut hi, &mut hi_method);
                    }
                }
            }
        }
    }
    methods.push(format!("upper: {hi_method} = {hi}"));

    // Solver fallback when exactness is requested.
    if cfg.use_solver {
        if let Some(g) = &graph {
            let hint = two_type(type_set).and_then(|(a, b)| {
                let shift = families::optimal_shift(ground.get(), a, b).ok()?;
                let spec = FamilySpec::new(ground.get(), a, b, shift.i_star, false).ok()?;
                families::build_family(&spec, g).ok()
            });
            let result = solver::alpha_exact(g, hint.as_ref(), &cfg.solver_budget)?;
            methods.push(format!(
                "solver: [{}, {}] after {} nodes",
                result.lower, result.upper, result.nodes_explored
            ));
            if let Some(alpha) = result.value() {
                return Ok(AlphaVerdict::Exact {
                    value: BigUint::from(alpha),
                    method: methods,
                });
            }
            lo = lo.max(BigUint::from(result.lower));
            hi = hi.min(BigUint::from(result.upper));
        }
    }

    if lo > hi {
        return Err(Error::Internal(format!(
            "bound inversion for Γ({ground},{type_set}): lower {lo} > upper {hi}"
        )));
    }
    if lo == hi {
        methods.push("interval collapsed".into());
        return Ok(AlphaVerdict::Exact {
            value: lo,
            method: methods,
        });
    }
    Ok(AlphaVerdict::Interval {
        lo,
        hi,
        method: methods,
    })
}

/// Recursive sub-dispatches keep theorem and interval machinery but never the
/// solver, so dispatch cost stays bounded.
fn recursive_cfg(cfg: &DispatchConfig) -> DispatchConfig {
    DispatchConfig {
        use_solver: false,
        ..*cfg
    }
}

fn two_type(type_set: &TypeSet) -> Option<(u32, u32)> {
    match type_set.entries() {
        [a, b] => Some((*a, *b)),
        _ => None,
    }
}

/// The type and its dual, each tagged with whether it was dualized; the dual
/// is skipped for self-dual types.
fn orientations(ground: GroundSize, type_set: &TypeSet) -> Vec<(GroundSize, TypeSet, bool)> {
    let mut out = vec![(ground, type_set.clone(), false)];
    let dual = type_set.dual(ground);
    if dual != *type_set {
        out.push((ground, dual, true));
    }
    out
}

/// Non-empty proper subsets of T, smallest first.
fn proper_subtypes(type_set: &TypeSet, ground: GroundSize) -> Vec<TypeSet> {
    let entries = type_set.entries();
    let k = entries.len();
    let mut out = Vec::new();
    for mask in 1u32..((1 << k) - 1) {
        let subset: Vec<u32> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| entries[i])
            .collect();
        out.push(TypeSet::new(subset, ground).expect("subset of a valid type"));
    }
    out.sort();
    out
}

fn try_theorems(
    ground: GroundSize,
    type_set: &TypeSet,
    cfg: &DispatchConfig,
) -> Result<Option<(BigUint, Vec<String>)>> {
    let n = ground.get();

    let bip = bipartite_value(ground, type_set);
    if bip.applicable {
        return Ok(Some((
            bip.value.unwrap(),
            vec![format!("bipartite: {}", bip.reason)],
        )));
    }

    let sides = orientations(ground, type_set);
    let tag = |s: &str, dualized: bool, t2: &TypeSet| {
        if dualized {
            format!("{s} on dual type {t2}")
        } else {
            s.to_string()
        }
    };

    for (g2, t2, dualized) in &sides {
        let ekr = ekr_value(*g2, t2);
        if ekr.applicable {
            return Ok(Some((
                ekr.value.unwrap(),
                vec![tag(&format!("ekr: {}", ekr.reason), *dualized, t2)],
            )));
        }
    }

    // exact projection: admissible S are proper suffixes of T
    for (g2, t2, dualized) in &sides {
        let entries = t2.entries();
        for k in 1..entries.len() {
            let sub = TypeSet::new(entries[k..].to_vec(), *g2)?;
            if sub.min_entry() + sub.max_entry() > n {
                continue;
            }
            let sub_verdict = alpha_dispatch(*g2, &sub, &recursive_cfg(cfg))?;
            if let Some(sub_alpha) = sub_verdict.exact_value() {
                let report = projection_exact(*g2, t2, &sub, sub_alpha);
                if report.applicable {
                    let mut method = vec![tag(
                        &format!("projection-exact: {}", report.reason),
                        *dualized,
                        t2,
                    )];
                    method.extend(
                        sub_verdict
                            .method()
                            .iter()
                            .map(|m| format!("  Γ({g2},{sub}): {m}")),
                    );
                    return Ok(Some((report.value.unwrap(), method)));
                }
            }
        }
    }

    // cycle theorem and corollary: the two largest entries are {a,b},
    // anything below lives in [a-1]
    for (_, t2, dualized) in &sides {
        let entries = t2.entries();
        if entries.len() >= 2 {
            let b = entries[entries.len() - 1];
            let a = entries[entries.len() - 2];
            let low = &entries[..entries.len() - 2];
            let report = cycle_corollary_value(n, a, b, low);
            if report.applicable {
                let name = if low.is_empty() { "cycle" } else { "cycle-corollary" };
                return Ok(Some((
                    report.value.unwrap(),
                    vec![tag(&format!("{name}: {}", report.reason), *dualized, t2)],
                )));
            }
        }
    }

    for (_, t2, dualized) in &sides {
        if t2.entries() == [1, n - 2] {
            let report = theorem_1nm2_value(n);
            if report.applicable {
                return Ok(Some((
                    report.value.unwrap(),
                    vec![tag(&format!("one-nminus2: {}", report.reason), *dualized, t2)],
                )));
            }
        }
    }
    Ok(None)
}

/// Every bound report for one graph, as shown by the CLI `bounds` command.
pub fn all_bounds(
    ground: GroundSize,
    type_set: &TypeSet,
    cfg: &DispatchConfig,
) -> Result<Vec<BoundReport>> {
    let mut out = vec![bipartite_value(ground, type_set), ekr_value(ground, type_set)];
    if let Some((a, b)) = two_type(type_set) {
        out.push(cycle_value(ground.get(), a, b));
        if ground.get() >= 3 && b >= a + 2 {
            let smaller_ground = GroundSize::new(ground.get() - 1)?;
            let smaller = TypeSet::new(vec![a, b - 1], smaller_ground)?;
            let sub = alpha_dispatch(smaller_ground, &smaller, &recursive_cfg(cfg))?;
            if let Some(hi) = sub.upper() {
                out.push(deletion_bound(ground.get(), a, b, &hi));
            }
        }
    }
    if type_set.entries() == [1, ground.get() - 2] {
        out.push(theorem_1nm2_value(ground.get()));
    }
    if let Ok(g) = FlagGraph::build_with(ground, type_set, cfg.limits) {
        out.push(half_bound(&g));
        if cfg.spectral {
            out.push(hoffman(&g, cfg.eigen_tol)?);
            out.push(inertia_bound(&g, cfg.eigen_tol)?);
        }
        let omega_budget = Budget {
            max_nodes: Some(cfg.omega_node_budget),
            max_time: None,
        };
        if let Some(omega) = solver::omega_exact(&g, &omega_budget)?.value() {
            out.push(clique_coclique(&g, omega));
        }
    }
    Ok(out)
}

/// One row of the reproduction table: the dispatch verdict for (n, T).
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub type_set: String,
    pub status: String,
    pub value_or_interval: String,
    pub method: String,
    /// Dual partner skipped in the sweep when the dual has a smaller encoding.
    pub vertices: String,
}

/// Dispatch verdicts for every non-empty T ⊆ [n-1], n from 2 to `max_n`.
pub fn report_rows(max_n: u32, cfg: &DispatchConfig) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let ground = GroundSize::new(n)?;
        for mask in 1u64..(1u64 << (n - 1)) {
            let entries: Vec<u32> = (0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let type_set = TypeSet::new(entries, ground)?;
            let verdict = alpha_dispatch(ground, &type_set, cfg)?;
            let (status, value) = match &verdict {
                AlphaVerdict::Exact { value, .. } => ("exact".to_string(), value.to_string()),
                AlphaVerdict::Interval { lo, hi, .. } => {
                    ("interval".to_string(), format!("[{lo},{hi}]"))
                }
                AlphaVerdict::Unknown { .. } => ("unknown".to_string(), String::new()),
            };
            rows.push(ReportRow {
                n,
                type_set: type_set.to_string(),
                status,
                value_or_interval: value,
                method: verdict.method().join("; "),
                vertices: count_flags(ground, &type_set).to_string(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(n: u32) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    fn ts(entries: &[u32], n: u32) -> TypeSet {
        TypeSet::new(entries.to_vec(), ground(n)).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn ekr_values() {
        assert_eq!(ekr_value(ground(5), &ts(&[2], 5)).value, Some(big(4)));
        assert_eq!(ekr_value(ground(6), &ts(&[2], 6)).value, Some(big(5)));
        assert_eq!(ekr_value(ground(6), &ts(&[1, 3], 6)).value, Some(big(30)));
        assert!(!ekr_value(ground(5), &ts(&[3], 5)).applicable);
    }

    #[test]
    fn bipartite_values() {
        assert_eq!(bipartite_value(ground(6), &ts(&[2, 4], 6)).value, Some(big(45)));
        assert_eq!(bipartite_value(ground(4), &ts(&[2], 4)).value, Some(big(3)));
        assert_eq!(bipartite_value(ground(6), &ts(&[3], 6)).value, Some(big(10)));
        assert!(!bipartite_value(ground(7), &ts(&[2, 4], 7)).applicable);
    }

    #[test]
    fn cycle_values() {
        assert_eq!(cycle_value(7, 2, 4).value, Some(big(90)));
        assert_eq!(cycle_value(5, 1, 3).value, Some(big(12)));
        let miss = cycle_value(9, 1, 6);
        assert!(!miss.applicable);
        assert!(miss.reason.contains("a+3b"));
    }

    #[test]
    fn cycle_corollary_values() {
        assert_eq!(cycle_corollary_value(7, 2, 4, &[1]).value, Some(big(180)));
        assert_eq!(cycle_corollary_value(7, 2, 4, &[]).value, Some(big(90)));
        assert!(!cycle_corollary_value(8, 2, 5, &[1]).applicable);
    }

    #[test]
    fn theorem_1nm2_values() {
        assert_eq!(theorem_1nm2_value(6).value, Some(big(22)));
        assert_eq!(theorem_1nm2_value(5).value, Some(big(12)));
        assert_eq!(theorem_1nm2_value(9).value, Some(big(86)));
        assert!(!theorem_1nm2_value(4).applicable);
    }

    #[test]
    fn projection_bounds() {
        // n=6, T={1,4}, S={4}: lower bound 20 but true α = 22
        let lower = projection_lower(ground(6), &ts(&[1, 4], 6), &ts(&[4], 6), &big(5)).unwrap();
        assert_eq!(lower.value, Some(big(20)));
        // S = T echoes α
        let echo = projection_lower(ground(6), &ts(&[1, 4], 6), &ts(&[1, 4], 6), &big(22)).unwrap();
        assert_eq!(echo.value, Some(big(22)));
        // exact projection at (6,{1,3}) via S={3}
        let exact = projection_exact(ground(6), &ts(&[1, 3], 6), &ts(&[3], 6), &big(10));
        assert_eq!(exact.value, Some(big(30)));
        // (6,{1,4}) via S={4}: min+max = 8 > 6
        let fail = projection_exact(ground(6), &ts(&[1, 4], 6), &ts(&[4], 6), &big(5));
        assert!(!fail.applicable);
    }

    #[test]
    fn deletion_values() {
        assert_eq!(deletion_bound(8, 2, 5, &big(90)).value, Some(big(240)));
        assert_eq!(deletion_bound(6, 1, 4, &big(12)).value, Some(big(24)));
        // monotone in the sub-bound
        assert!(deletion_bound(8, 2, 5, &big(91)).value > deletion_bound(8, 2, 5, &big(90)).value);
    }

    #[test]
    fn half_bound_values() {
        let g = FlagGraph::build(ground(6), &ts(&[2, 4], 6)).unwrap();
        let report = half_bound(&g);
        assert_eq!(report.value, Some(big(45)));
        assert_eq!(report.support["tight"], "true");
    }

    #[test]
    fn induction_condition_thresholds() {
        for n in 5..=9 {
            assert!(!induction_condition(n, 1, n - 2).unwrap(), "n={n}");
        }
        for n in 10..=14 {
            assert!(induction_condition(n, 1, n - 2).unwrap(), "n={n}");
        }
        assert!(!induction_condition(36, 2, 33).unwrap());
        assert!(induction_condition(37, 2, 34).unwrap());
    }

    #[test]
    fn dispatch_exact_cases() {
        let cfg = DispatchConfig::default();
        let v = alpha_dispatch(ground(6), &ts(&[1, 4], 6), &cfg).unwrap();
        assert_eq!(v.exact_value(), Some(&big(22)));
        let v = alpha_dispatch(ground(5), &ts(&[1, 3], 5), &cfg).unwrap();
        assert_eq!(v.exact_value(), Some(&big(12)));
        let v = alpha_dispatch(ground(7), &ts(&[1, 2, 4], 7), &cfg).unwrap();
        assert_eq!(v.exact_value(), Some(&big(180)));
        let v = alpha_dispatch(ground(7), &ts(&[2, 4], 7), &cfg).unwrap();
        assert_eq!(v.exact_value(), Some(&big(90)));
        // dual of {1,4} at n=6
        let v = alpha_dispatch(ground(6), &ts(&[2, 5], 6), &cfg).unwrap();
        assert_eq!(v.exact_value(), Some(&big(22)));
    }

    #[test]
    fn dispatch_interval_for_8_25() {
        let cfg = DispatchConfig::default();
        let v = alpha_dispatch(ground(8), &ts(&[2, 5], 8), &cfg).unwrap();
        match v {
            AlphaVerdict::Interval { ref lo, ref hi, .. } => {
                assert_eq!(lo, &big(230));
                assert_eq!(hi, &big(240));
            }
            other => panic!("expected interval, got {other:?}"),
        }
    }

    #[test]
    fn dispatch_solver_budget_interrupt_keeps_interval() {
        let cfg = DispatchConfig {
            use_solver: true,
            solver_budget: Budget {
                max_nodes: Some(2),
                max_time: None,
            },
            ..DispatchConfig::default()
        };
        let v = alpha_dispatch(ground(8), &ts(&[2, 5], 8), &cfg).unwrap();
        match v {
            AlphaVerdict::Interval { lo, hi, method } => {
                assert_eq!(lo, big(230));
                assert_eq!(hi, big(240));
                assert!(method.iter().any(|m| m.contains("solver")));
            }
            other => panic!("expected interval, got {other:?}"),
        }
    }
}
