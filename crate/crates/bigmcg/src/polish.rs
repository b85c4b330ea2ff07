//! The permutation topology on automorphism groups of countable graphs:
//! first-disagreement metrics, stabilizer membership, the dense
//! finitely-supported construction, and the Cauchy-without-limit family.
//!
//! Automorphisms are oracle pairs inspectable to finite depth; every claim
//! this module makes is a bounded-inspection certificate, never a global
//! assertion about the infinite object.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolishError {
    #[error("{0}")]
    Range(String),
    #[error("family does not stabilize at index {index} within bound {bound}")]
    NonStabilizing { index: u64, bound: u64 },
}

/// A countable graph given by a decidable adjacency oracle on 1-based
/// vertex indices. Adjacency is kept symmetric and irreflexive.
#[derive(Clone)]
pub struct CountableGraph {
    adj: Arc<dyn Fn(u64, u64) -> bool + Send + Sync>,
}

impl CountableGraph {
    pub fn new(adj: impl Fn(u64, u64) -> bool + Send + Sync + 'static) -> Self {
        Self {
            adj: Arc::new(move |u, v| u != v && (adj(u, v) || adj(v, u))),
        }
    }

    /// The complete graph on the natural numbers; every bijection is an
    /// automorphism.
    pub fn complete() -> Self {
        Self::new(|_, _| true)
    }

    pub fn adjacent(&self, u: u64, v: u64) -> bool {
        (self.adj)(u, v)
    }
}

/// A bijection oracle on vertex indices with forward and backward
/// directions.
#[derive(Clone)]
pub struct AutMap {
    fwd: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    bwd: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl AutMap {
    pub fn new(
        fwd: impl Fn(u64) -> u64 + Send + Sync + 'static,
        bwd: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            fwd: Arc::new(fwd),
            bwd: Arc::new(bwd),
        }
    }

    pub fn identity() -> Self {
        Self::new(|i| i, |i| i)
    }

    /// A finitely supported map; indices outside the map are fixed. The
    /// backward oracle is the inverted table.
    pub fn from_finite_map(map: HashMap<u64, u64>) -> Self {
        let inverse: HashMap<u64, u64> = map.iter().map(|(k, v)| (*v, *k)).collect();
        let fwd = move |i: u64| map.get(&i).copied().unwrap_or(i);
        let bwd = move |i: u64| inverse.get(&i).copied().unwrap_or(i);
        Self::new(fwd, bwd)
    }

    pub fn apply(&self, i: u64) -> u64 {
        (self.fwd)(i)
    }

    pub fn apply_inverse(&self, i: u64) -> u64 {
        (self.bwd)(i)
    }

    pub fn inverse(&self) -> AutMap {
        Self {
            fwd: self.bwd.clone(),
            bwd: self.fwd.clone(),
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AutMap) -> AutMap {
        let f1 = self.fwd.clone();
        let f2 = other.fwd.clone();
        let b1 = self.bwd.clone();
        let b2 = other.bwd.clone();
        AutMap::new(move |i| f1(f2(i)), move |i| b2(b1(i)))
    }

    /// Inspects the oracle pair up to `depth`: backward undoes forward and
    /// adjacency is preserved on all inspected pairs.
    pub fn check_automorphism(&self, graph: &CountableGraph, depth: u64) -> bool {
        for i in 1..=depth {
            if self.apply_inverse(self.apply(i)) != i {
                return false;
            }
            for j in 1..=depth {
                if graph.adjacent(i, j) != graph.adjacent(self.apply(i), self.apply(j)) {
                    return false;
                }
            }
        }
        true
    }
}

/// An exact nonnegative dyadic rational `num / 2^exp`, normalized to an
/// odd (or zero) numerator. Arithmetic is arbitrary precision, so sums of
/// powers with far-apart exponents stay exact. `at_depth_bound` marks
/// values that are upper bounds certified only to the inspection depth
/// (in particular the reported 0 for maps that agree on every inspected
/// vertex).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dyadic {
    num: num_bigint::BigUint,
    exp: u64,
    pub at_depth_bound: bool,
}

impl Dyadic {
    fn make(num: num_bigint::BigUint, exp: u64, at_depth_bound: bool) -> Self {
        Self {
            num,
            exp,
            at_depth_bound,
        }
        .normalize()
    }

    pub fn zero() -> Self {
        Self::make(num_bigint::BigUint::ZERO, 0, false)
    }

    pub fn zero_at_depth() -> Self {
        Self::make(num_bigint::BigUint::ZERO, 0, true)
    }

    pub fn one() -> Self {
        Self::pow(0)
    }

    /// `2^-k`.
    pub fn pow(k: u64) -> Self {
        Self::make(num_bigint::BigUint::from(1u8), k, false)
    }

    fn normalize(mut self) -> Self {
        use num_bigint::BigUint;
        let two = BigUint::from(2u8);
        while self.num != BigUint::ZERO && (&self.num % &two) == BigUint::ZERO && self.exp > 0 {
            self.num /= &two;
            self.exp -= 1;
        }
        if self.num == BigUint::ZERO {
            self.exp = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num == num_bigint::BigUint::ZERO
    }

    pub fn value_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.num.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.exp.min(1 << 30) as i32)
    }
}

impl std::ops::Add for Dyadic {
    type Output = Dyadic;

    fn add(self, other: Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let num = (self.num << (exp - self.exp)) + (other.num << (exp - other.exp));
        Dyadic::make(num, exp, self.at_depth_bound || other.at_depth_bound)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.exp == other.exp
    }
}
impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.num.clone() << other.exp;
        let rhs = other.num.clone() << self.exp;
        lhs.cmp(&rhs)
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            write!(
                f,
                "0{}",
                if self.at_depth_bound {
                    " (bound at depth)"
                } else {
                    ""
                }
            )
        } else if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// First-disagreement metric: `2^-k` where `k` is the least inspected index
/// with `f(x_k) != g(x_k)`, or a depth-bounded 0 when they agree on the
/// whole inspected prefix.
pub fn metric_d(f: &AutMap, g: &AutMap, depth: u64) -> Dyadic {
    for i in 1..=depth {
        if f.apply(i) != g.apply(i) {
            return Dyadic::pow(i);
        }
    }
    Dyadic::zero_at_depth()
}

/// `d'(f,g) = d(f,g) + d(f^-1, g^-1)`.
pub fn metric_dprime(f: &AutMap, g: &AutMap, depth: u64) -> Dyadic {
    metric_d(f, g, depth) + metric_d(&f.inverse(), &g.inverse(), depth)
}

/// The Cauchy-without-limit family on the complete graph: `g_n` cycles the
/// first `n` vertices forward and fixes the rest.
pub fn shift_example(n: u64) -> AutMap {
    let fwd = move |i: u64| {
        if i < n {
            i + 1
        } else if i == n {
            1
        } else {
            i
        }
    };
    let bwd = move |i: u64| {
        if i == 1 && n >= 1 {
            n
        } else if i <= n {
            i - 1
        } else {
            i
        }
    };
    AutMap::new(fwd, bwd)
}

/// Verdict of the Cauchy check on an indexed family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CauchyReport {
    pub threshold: u64,
    pub depth: u64,
    /// All pairwise distances `d(g_n, g_m)` with `N < n < m <= depth` are at
    /// most `2^-N`.
    pub forward_within_bound: bool,
    /// The same bound for the inverse family.
    pub inverse_within_bound: bool,
    /// Largest forward distance seen past the threshold.
    pub forward_max: Dyadic,
    /// Smallest inverse distance seen past the threshold.
    pub inverse_min: Dyadic,
    /// When the inverse distances past the threshold are a single constant,
    /// that constant.
    pub inverse_constant: Option<Dyadic>,
}

/// Checks the Cauchy bound for the family and its inverses, for indices
/// `N < n < m <= depth`.
pub fn cauchy_report(
    family: &dyn Fn(u64) -> AutMap,
    threshold: u64,
    depth: u64,
) -> Result<CauchyReport, PolishError> {
    if threshold == 0 || depth <= threshold + 1 {
        return Err(PolishError::Range(format!(
            "need 1 <= N and depth > N + 1, got N = {threshold}, depth = {depth}"
        )));
    }
    let bound = Dyadic::pow(threshold);
    let mut forward_within_bound = true;
    let mut inverse_within_bound = true;
    let mut forward_max = Dyadic::zero();
    let mut inverse_min: Option<Dyadic> = None;
    let mut inverse_constant: Option<Dyadic> = None;
    let mut constant_holds = true;
    for n in threshold + 1..=depth {
        let gn = family(n);
        for m in n + 1..=depth {
            let gm = family(m);
            let d = metric_d(&gn, &gm, depth);
            if d > bound {
                forward_within_bound = false;
            }
            if d > forward_max {
                forward_max = d;
            }
            let di = metric_d(&gn.inverse(), &gm.inverse(), depth);
            if di > bound {
                inverse_within_bound = false;
            }
            inverse_min = Some(match inverse_min {
                None => di.clone(),
                Some(prev) => prev.min(di.clone()),
            });
            match &inverse_constant {
                None => inverse_constant = Some(di),
                Some(prev) if *prev != di => constant_holds = false,
                _ => {}
            }
        }
    }
    Ok(CauchyReport {
        threshold,
        depth,
        forward_within_bound,
        inverse_within_bound,
        forward_max,
        inverse_min: inverse_min.unwrap_or_else(Dyadic::zero),
        inverse_constant: if constant_holds {
            inverse_constant
        } else {
            None
        },
    })
}

/// The pointwise limit of an eventually constant family, with bounded
/// certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitReport {
    pub bound: u64,
    /// `s(x_1), ..., s(x_bound)`.
    pub values: Vec<u64>,
    pub injective_on_prefix: bool,
    /// No inspected index maps to `x_1`.
    pub no_preimage_of_first: bool,
}

/// Computes the pointwise limit on `x_1..x_bound`; each coordinate must be
/// stable between family indices `bound+1` and `2 bound + 2`.
pub fn pointwise_limit(
    family: &dyn Fn(u64) -> AutMap,
    bound: u64,
) -> Result<LimitReport, PolishError> {
    let probe_a = family(bound + 1);
    let probe_b = family(2 * bound + 2);
    let mut values = Vec::with_capacity(bound as usize);
    for i in 1..=bound {
        let v = probe_a.apply(i);
        if probe_b.apply(i) != v {
            return Err(PolishError::NonStabilizing { index: i, bound });
        }
        values.push(v);
    }
    let mut seen = std::collections::HashSet::new();
    let injective_on_prefix = values.iter().all(|v| seen.insert(*v));
    let no_preimage_of_first = values.iter().all(|&v| v != 1);
    Ok(LimitReport {
        bound,
        values,
        injective_on_prefix,
        no_preimage_of_first,
    })
}

/// Membership in the pointwise stabilizer `U(A)`.
pub fn in_stabilizer(g: &AutMap, fixed: &[u64]) -> bool {
    fixed.iter().all(|&a| g.apply(a) == a)
}

/// The separability construction: a finitely supported automorphism that
/// agrees with `g` on `A`, supported inside `F = A` together with `g(A)`,
/// lying in the coset `g U(A)`. The leftover points of `F` are matched in
/// order so the result is a bijection even when `A` and `g(A)` overlap.
pub fn dense_support_element(g: &AutMap, fixed: &[u64]) -> AutMap {
    use std::collections::BTreeSet;
    let a_set: BTreeSet<u64> = fixed.iter().copied().collect();
    let ga_set: BTreeSet<u64> = a_set.iter().map(|&a| g.apply(a)).collect();
    let f_set: BTreeSet<u64> = a_set.union(&ga_set).copied().collect();
    let mut map = HashMap::new();
    for &a in &a_set {
        map.insert(a, g.apply(a));
    }
    let sources = f_set.difference(&a_set);
    let targets: Vec<u64> = f_set.difference(&ga_set).copied().collect();
    for (&s, d) in sources.zip(targets) {
        map.insert(s, d);
    }
    map.retain(|k, v| k != v);
    AutMap::from_finite_map(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_arithmetic() {
        assert_eq!(Dyadic::pow(1) + Dyadic::pow(1), Dyadic::one());
        assert_eq!(Dyadic::pow(2) + Dyadic::pow(2), Dyadic::pow(1));
        assert!(Dyadic::pow(5) < Dyadic::pow(4));
        assert!(Dyadic::zero() < Dyadic::pow(30));
        let sum = Dyadic::pow(1) + Dyadic::pow(3);
        assert_eq!(sum.to_string(), "5/2^3");
    }

    #[test]
    fn shift_example_cases() {
        let g3 = shift_example(3);
        assert_eq!(g3.apply(1), 2);
        assert_eq!(g3.apply(3), 1);
        assert_eq!(g3.apply(9), 9);
        assert_eq!(g3.apply_inverse(1), 3);
        assert!(g3.check_automorphism(&CountableGraph::complete(), 20));
    }

    #[test]
    fn metric_examples() {
        let g5 = shift_example(5);
        let g7 = shift_example(7);
        assert!(metric_d(&g5, &g5, 30).is_zero());
        assert!(metric_d(&g5, &g5, 30).at_depth_bound);
        // First disagreement of g_5 and g_7 is at x_5.
        assert_eq!(metric_d(&g5, &g7, 30), Dyadic::pow(5));
        // Symmetry.
        assert_eq!(metric_d(&g7, &g5, 30), Dyadic::pow(5));
        // A generic pair agreeing on exactly the first four vertices: the
        // first disagreement sits at x_5 and the definition gives 2^-5.
        let f = AutMap::from_finite_map(HashMap::from([(5, 6), (6, 5)]));
        assert_eq!(metric_d(&f, &AutMap::identity(), 30), Dyadic::pow(5));
    }

    #[test]
    fn metric_is_an_ultrametric_on_samples() {
        let maps: Vec<AutMap> = (1..=8).map(shift_example).collect();
        for f in &maps {
            for g in &maps {
                assert_eq!(metric_d(f, g, 30), metric_d(g, f, 30));
                for h in &maps {
                    let fh = metric_d(f, h, 30);
                    let max = metric_d(f, g, 30).max(metric_d(g, h, 30));
                    assert!(fh <= max);
                }
            }
        }
    }

    #[test]
    fn dprime_dominates_and_is_inverse_symmetric() {
        let g4 = shift_example(4);
        let g6 = shift_example(6);
        let d = metric_d(&g4, &g6, 30);
        let dp = metric_dprime(&g4, &g6, 30);
        assert!(dp >= d);
        assert_eq!(dp, metric_dprime(&g4.inverse(), &g6.inverse(), 30));
        assert!(metric_dprime(&g4, &g4, 30).is_zero());
        // The inverse family disagrees at the very first vertex, so the
        // inverse part contributes 2^-1 exactly.
        assert_eq!(metric_d(&g4.inverse(), &g6.inverse(), 30), Dyadic::pow(1));
    }

    #[test]
    fn cauchy_report_for_the_shift_family() {
        let report = cauchy_report(&shift_example, 5, 20).unwrap();
        assert!(report.forward_within_bound);
        assert!(!report.inverse_within_bound);
        assert_eq!(report.inverse_constant, Some(Dyadic::pow(1)));
        assert!(report.forward_max <= Dyadic::pow(5));
    }

    #[test]
    fn cauchy_report_constant_family() {
        let constant = |_: u64| shift_example(3);
        let report = cauchy_report(&constant, 2, 10).unwrap();
        assert!(report.forward_within_bound);
        assert!(report.inverse_within_bound);
        assert!(report.forward_max.is_zero());
    }

    #[test]
    fn pointwise_limit_certificates() {
        let report = pointwise_limit(&shift_example, 100).unwrap();
        assert!(report.injective_on_prefix);
        assert!(report.no_preimage_of_first);
        assert_eq!(report.values[0], 2);
        assert_eq!(report.values[99], 101);

        // The constant family stabilizes to an actual automorphism.
        let constant = |_: u64| shift_example(4);
        let report = pointwise_limit(&constant, 50).unwrap();
        assert!(report.injective_on_prefix);
        assert!(!report.no_preimage_of_first);
        let limit = shift_example(4);
        assert!(limit.check_automorphism(&CountableGraph::complete(), 50));
    }

    #[test]
    fn stabilizer_membership() {
        let g3 = shift_example(3);
        assert!(in_stabilizer(&AutMap::identity(), &[1, 5, 9]));
        assert!(in_stabilizer(&g3, &[9]));
        assert!(!in_stabilizer(&g3, &[1]));
    }

    #[test]
    fn dense_support_construction() {
        let g3 = shift_example(3);
        let fixed = [1u64, 2];
        let h = dense_support_element(&g3, &fixed);
        assert_eq!(h.apply(1), 2);
        assert_eq!(h.apply(2), 3);
        // Support within A and g(A) = {1,2,3}; everything else is fixed.
        for i in 4..50 {
            assert_eq!(h.apply(i), i);
        }
        // h lies in g U(A): inv(g) h fixes A pointwise.
        let composite = g3.inverse().compose(&h);
        assert!(in_stabilizer(&composite, &fixed));
        // And it is an automorphism of the complete graph as far as we look.
        assert!(h.check_automorphism(&CountableGraph::complete(), 50));
        // Empty A admits the identity.
        let h = dense_support_element(&g3, &[]);
        assert!(in_stabilizer(&h, &[]));
        assert_eq!(h.apply(7), 7);
    }
}
