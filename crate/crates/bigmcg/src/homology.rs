//! Exact action on first homology of truncations: finitely supported integer
//! vectors over a lazily infinite basis, the intersection pairing, and
//! symplectic transvections.
//!
//! The basis holds `alpha[j,i]`, `beta[j,i]` for every end `j` and handle
//! index `i >= 1`, plus boundary classes `delta[j]` for `j < n`; `delta[n]`
//! is eliminated as minus the sum of the others. The deltas lie in the
//! radical of the pairing. Atlas curves are marked by their carriers:
//! `a`/`a'` map to `alpha`, `b` to `beta`, and the chain and lantern
//! families to the signed sums of the alphas of their handles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{Atlas, CurveId, Handle, TableGen};
use crate::words::{Generator, Word};

/// A basis vector of the lazy homology lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisIndex {
    Alpha {
        end: u32,
        idx: u32,
    },
    Beta {
        end: u32,
        idx: u32,
    },
    /// Boundary class of the cut around one end, `end` in `1..n`.
    Delta {
        end: u32,
    },
}

impl BasisIndex {
    pub fn alpha(end: u32, idx: u32) -> Self {
        BasisIndex::Alpha { end, idx }
    }
    pub fn beta(end: u32, idx: u32) -> Self {
        BasisIndex::Beta { end, idx }
    }
    pub fn delta(end: u32) -> Self {
        BasisIndex::Delta { end }
    }

    fn handle_index(&self) -> Option<u32> {
        match self {
            BasisIndex::Alpha { idx, .. } | BasisIndex::Beta { idx, .. } => Some(*idx),
            BasisIndex::Delta { .. } => None,
        }
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisIndex::Alpha { end, idx } => write!(f, "alpha[{end},{idx}]"),
            BasisIndex::Beta { end, idx } => write!(f, "beta[{end},{idx}]"),
            BasisIndex::Delta { end } => write!(f, "delta[{end}]"),
        }
    }
}

/// A finitely supported integer vector, exact at arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct H1Vector {
    coeffs: BTreeMap<BasisIndex, BigInt>,
}

impl H1Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(ix: BasisIndex) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(ix, BigInt::one());
        Self { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisIndex, i64)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (ix, c) in terms {
            v.add_scaled_basis(ix, &BigInt::from(c));
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, ix: BasisIndex) -> BigInt {
        self.coeffs.get(&ix).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&BasisIndex, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn max_handle_index(&self) -> u32 {
        self.coeffs
            .keys()
            .filter_map(BasisIndex::handle_index)
            .max()
            .unwrap_or(0)
    }

    fn add_scaled_basis(&mut self, ix: BasisIndex, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(ix).or_insert_with(BigInt::zero);
        *entry += scale;
        if entry.is_zero() {
            self.coeffs.remove(&ix);
        }
    }

    pub fn add_scaled(&mut self, other: &H1Vector, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (ix, c) in &other.coeffs {
            self.add_scaled_basis(*ix, &(c * scale));
        }
    }

    pub fn negated(&self) -> H1Vector {
        let mut out = H1Vector::zero();
        out.add_scaled(self, &BigInt::from(-1));
        out
    }
}

impl std::fmt::Display for H1Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ix, c) in &self.coeffs {
            if first {
                if c == &BigInt::one() {
                    write!(f, "{ix}")?;
                } else {
                    write!(f, "{c}*{ix}")?;
                }
                first = false;
            } else if c.is_positive() {
                if c == &BigInt::one() {
                    write!(f, " + {ix}")?;
                } else {
                    write!(f, " + {c}*{ix}")?;
                }
            } else {
                let a = -c;
                if a == BigInt::one() {
                    write!(f, " - {ix}")?;
                } else {
                    write!(f, " - {a}*{ix}")?;
                }
            }
        }
        Ok(())
    }
}

/// The intersection pairing: antisymmetric, `<alpha[j,i], beta[j,i]> = 1`,
/// all other basis pairs zero. The deltas are in the radical.
pub fn pairing(x: &H1Vector, y: &H1Vector) -> BigInt {
    let mut total = BigInt::zero();
    for (ix, c) in x.support() {
        if let BasisIndex::Alpha { end, idx } = ix {
            total += c * y.coeff(BasisIndex::beta(*end, *idx));
        }
        if let BasisIndex::Beta { end, idx } = ix {
            total -= c * y.coeff(BasisIndex::alpha(*end, *idx));
        }
    }
    total
}

/// The transvection along `c`: `x + <x, c> c`.
pub fn transvection(c: &H1Vector, x: &H1Vector) -> H1Vector {
    let mut out = x.clone();
    out.add_scaled(c, &pairing(x, c));
    out
}

/// Signed transvection, the homology action of a twist letter.
pub fn transvection_pow(c: &H1Vector, x: &H1Vector, k: i64) -> H1Vector {
    let mut out = x.clone();
    out.add_scaled(c, &(pairing(x, c) * BigInt::from(k)));
    out
}

/// Homology class of an atlas curve, read off its carrier.
pub fn homology_class(atlas: &Atlas, c: CurveId) -> H1Vector {
    let mut v = H1Vector::zero();
    let beta = c.family == crate::atlas::Family::B;
    for (h, sign) in atlas.carrier(c) {
        let ix = if beta {
            BasisIndex::beta(h.end, h.idx)
        } else {
            BasisIndex::alpha(h.end, h.idx)
        };
        v.add_scaled_basis(ix, &BigInt::from(sign));
    }
    v
}

/// Expands `delta[j]` in the rank-`(n-1)` lattice: `delta[n]` is stored as
/// minus the sum of the others.
fn delta_vector(n: u32, j: u32) -> H1Vector {
    if j < n {
        H1Vector::basis(BasisIndex::delta(j))
    } else {
        let mut v = H1Vector::zero();
        for k in 1..n {
            v.add_scaled_basis(BasisIndex::delta(k), &BigInt::from(-1));
        }
        v
    }
}

/// Action of a signed table generator on one basis vector: handles are
/// transported, deltas follow the end permutation.
pub fn table_basis_image(atlas: &Atlas, g: TableGen, sign: i8, ix: BasisIndex) -> H1Vector {
    match ix {
        BasisIndex::Alpha { end, idx } => {
            let h = atlas.table_handle_image(g, sign, Handle { end, idx });
            H1Vector::basis(BasisIndex::alpha(h.end, h.idx))
        }
        BasisIndex::Beta { end, idx } => {
            let h = atlas.table_handle_image(g, sign, Handle { end, idx });
            H1Vector::basis(BasisIndex::beta(h.end, h.idx))
        }
        BasisIndex::Delta { end } => {
            delta_vector(atlas.ends(), atlas.table_end_image(g, sign, end))
        }
    }
}

fn table_vector_image(atlas: &Atlas, g: TableGen, sign: i8, x: &H1Vector) -> H1Vector {
    let mut out = H1Vector::zero();
    for (ix, c) in x.support() {
        out.add_scaled(&table_basis_image(atlas, g, sign, *ix), c);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActError {
    /// The support ran past the window plus slack during evaluation.
    #[error("support escaped the window at index {0}")]
    Unknown(u32),
}

/// Exact letter-wise action of a word, right to left. Returns `Unknown` when
/// an intermediate support escapes `window` plus a slack of the word length.
pub fn act(atlas: &Atlas, w: &Word, x: &H1Vector, window: u32) -> Result<H1Vector, ActError> {
    let slack = window + w.len() as u32 + 2;
    let mut current = x.clone();
    for letter in w.letters().iter().rev() {
        let sign = i64::from(letter.sign);
        current = match &letter.gen {
            Generator::Twist(c) => {
                let class = homology_class(atlas, *c);
                transvection_pow(&class, &current, sign)
            }
            other => {
                let g = other
                    .table_gen()
                    .expect("non-twist generators always have table form");
                table_vector_image(atlas, g, letter.sign, &current)
            }
        };
        let max = current.max_handle_index();
        if max > slack {
            return Err(ActError::Unknown(max));
        }
    }
    Ok(current)
}

/// Checks `|<T_a^k [b], [b]>| = |k| i(a,b)^2` by running the transvection
/// route and comparing with the arithmetic formula.
pub fn check_twist_formula(atlas: &Atlas, a: CurveId, b: CurveId, k: i64, window: u32) -> bool {
    let Ok(iab) = atlas.intersection(a, b) else {
        return false;
    };
    let class_a = homology_class(atlas, a);
    let class_b = homology_class(atlas, b);
    let moved = transvection_pow(&class_a, &class_b, k);
    let lhs = pairing(&moved, &class_b).abs();
    let _ = window;
    lhs == BigInt::from(Atlas::twisted_intersection(iab, k))
}

/// Parses the basis literal syntax `alpha[j,i]`, `beta[j,i]`, `delta[j]`.
pub fn parse_basis(text: &str) -> Option<BasisIndex> {
    let text = text.trim();
    let open = text.find('[')?;
    if !text.ends_with(']') {
        return None;
    }
    let inner = &text[open + 1..text.len() - 1];
    match &text[..open] {
        "alpha" | "beta" => {
            let (end, idx) = inner.split_once(',')?;
            let end = end.trim().parse().ok()?;
            let idx = idx.trim().parse().ok()?;
            Some(if text.starts_with("alpha") {
                BasisIndex::alpha(end, idx)
            } else {
                BasisIndex::beta(end, idx)
            })
        }
        "delta" => Some(BasisIndex::delta(inner.trim().parse().ok()?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atlas() -> Atlas {
        Atlas::new(4).unwrap()
    }

    #[test]
    fn pairing_basis_values() {
        let a = H1Vector::basis(BasisIndex::alpha(1, 1));
        let b = H1Vector::basis(BasisIndex::beta(1, 1));
        assert_eq!(pairing(&a, &b), BigInt::one());
        assert_eq!(pairing(&b, &a), BigInt::from(-1));
        let d = H1Vector::basis(BasisIndex::delta(1));
        let b34 = H1Vector::basis(BasisIndex::beta(3, 4));
        assert_eq!(pairing(&d, &b34), BigInt::zero());
        assert_eq!(pairing(&d, &a), BigInt::zero());
    }

    #[test]
    fn pairing_is_antisymmetric_on_random_vectors() {
        let mk = |s: &[(BasisIndex, i64)]| H1Vector::from_terms(s.iter().copied());
        let xs = [
            mk(&[(BasisIndex::alpha(1, 1), 2), (BasisIndex::beta(2, 3), -5)]),
            mk(&[(BasisIndex::beta(1, 1), 1), (BasisIndex::delta(1), 7)]),
            mk(&[(BasisIndex::alpha(3, 2), -4), (BasisIndex::beta(3, 2), 3)]),
        ];
        for x in &xs {
            assert_eq!(pairing(x, x), BigInt::zero());
            for y in &xs {
                assert_eq!(pairing(x, y), -pairing(y, x));
            }
        }
    }

    #[test]
    fn transvection_examples() {
        let alpha = H1Vector::basis(BasisIndex::alpha(1, 1));
        let beta = H1Vector::basis(BasisIndex::beta(1, 1));
        // beta - alpha, since <beta, alpha> = -1.
        let moved = transvection(&alpha, &beta);
        assert_eq!(moved.coeff(BasisIndex::beta(1, 1)), BigInt::one());
        assert_eq!(moved.coeff(BasisIndex::alpha(1, 1)), BigInt::from(-1));
        // Disjoint support is fixed.
        let far = H1Vector::basis(BasisIndex::beta(2, 5));
        assert_eq!(transvection(&alpha, &far), far);
        // k-th power adds k <x,c> c.
        let pow = transvection_pow(&alpha, &beta, 4);
        assert_eq!(pow.coeff(BasisIndex::alpha(1, 1)), BigInt::from(-4));
    }

    #[test]
    fn curve_classes() {
        let at = atlas();
        let a11 = homology_class(&at, CurveId::a(1, 1));
        assert_eq!(a11, H1Vector::basis(BasisIndex::alpha(1, 1)));
        assert_eq!(a11, homology_class(&at, CurveId::a_prime(1, 1)));
        assert_eq!(
            homology_class(&at, CurveId::b(2, 3)),
            H1Vector::basis(BasisIndex::beta(2, 3))
        );
        // Chain curves: alpha[j,i] - alpha[j,i+1]; the bridge crosses ends.
        let c12 = homology_class(&at, CurveId::c(1, 2));
        assert_eq!(c12.coeff(BasisIndex::alpha(1, 2)), BigInt::one());
        assert_eq!(c12.coeff(BasisIndex::alpha(1, 3)), BigInt::from(-1));
        let bridge = homology_class(&at, CurveId::c(4, 0));
        assert_eq!(bridge.coeff(BasisIndex::alpha(4, 1)), BigInt::one());
        assert_eq!(bridge.coeff(BasisIndex::alpha(1, 1)), BigInt::from(-1));
    }

    #[test]
    fn intersection_oracle_agrees_with_pairing_magnitude() {
        for n in [3, 5] {
            let at = Atlas::new(n).unwrap();
            let curves = crate::atlas::curves_up_to(&at, 5);
            for &x in &curves {
                for &y in &curves {
                    let i = at.intersection(x, y).unwrap();
                    let p = pairing(&homology_class(&at, x), &homology_class(&at, y)).abs();
                    assert_eq!(BigInt::from(i), p, "n={n} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn table_action_is_functorial_with_curve_tables() {
        for n in 3..=6 {
            let at = Atlas::new(n).unwrap();
            let mut gens = vec![
                TableGen::Rot,
                TableGen::Rho1,
                TableGen::Rho2,
                TableGen::Tau1,
                TableGen::Tau2,
            ];
            for from in 1..=n {
                gens.push(TableGen::Shift {
                    from,
                    to: at.next_end(from),
                });
            }
            for g in gens {
                for sign in [1i8, -1] {
                    for c in crate::atlas::curves_up_to(&at, 5) {
                        if let Some(img) = at.generator_image(g, sign, c) {
                            let direct = homology_class(&at, img);
                            let transported =
                                table_vector_image(&at, g, sign, &homology_class(&at, c));
                            assert!(
                                transported == direct || transported == direct.negated(),
                                "n={n} {g:?} sign {sign} {c} -> {img}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn table_action_preserves_the_pairing() {
        for n in [3, 5] {
            let at = Atlas::new(n).unwrap();
            let mut basis = vec![BasisIndex::delta(1), BasisIndex::delta(n - 1)];
            for end in 1..=n {
                for idx in 1..=4 {
                    basis.push(BasisIndex::alpha(end, idx));
                    basis.push(BasisIndex::beta(end, idx));
                }
            }
            let mut gens = vec![
                TableGen::Rot,
                TableGen::Rho1,
                TableGen::Rho2,
                TableGen::Tau1,
                TableGen::Tau2,
            ];
            for from in 1..=n {
                gens.push(TableGen::Shift {
                    from,
                    to: at.next_end(from),
                });
            }
            for g in gens {
                for sign in [1i8, -1] {
                    for &x in &basis {
                        for &y in &basis {
                            let gx = table_basis_image(&at, g, sign, x);
                            let gy = table_basis_image(&at, g, sign, y);
                            assert_eq!(
                                pairing(&gx, &gy),
                                pairing(&H1Vector::basis(x), &H1Vector::basis(y)),
                                "n={n} {g:?} {x} {y}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn word_actions_on_basis_vectors() {
        let at = atlas();
        let parse = |t: &str| crate::words::parse(t, &at).unwrap();
        assert_eq!(
            act(
                &at,
                &parse("h[1,2]"),
                &H1Vector::basis(BasisIndex::beta(1, 2)),
                10
            ),
            Ok(H1Vector::basis(BasisIndex::beta(1, 1)))
        );
        assert_eq!(
            act(
                &at,
                &parse("R"),
                &H1Vector::basis(BasisIndex::alpha(1, 1)),
                10
            ),
            Ok(H1Vector::basis(BasisIndex::alpha(2, 1)))
        );
        // Twisting about a chain curve fixes every delta coordinate.
        let d = H1Vector::basis(BasisIndex::delta(2));
        assert_eq!(act(&at, &parse("T[c,1,0]"), &d, 10), Ok(d.clone()));
    }

    #[test]
    fn twist_formula_cases() {
        let at = atlas();
        assert!(check_twist_formula(
            &at,
            CurveId::a(1, 1),
            CurveId::b(1, 1),
            3,
            10
        ));
        assert!(check_twist_formula(
            &at,
            CurveId::a(1, 1),
            CurveId::b(2, 1),
            5,
            10
        ));
        assert!(check_twist_formula(
            &at,
            CurveId::a(1, 1),
            CurveId::b(1, 1),
            -2,
            10
        ));
    }

    #[test]
    fn separating_twists_fix_deltas() {
        let at = atlas();
        // Twisting about a chain curve moves nothing in the delta lattice.
        let c = homology_class(&at, CurveId::c(1, 0));
        let d = delta_vector(4, 4);
        assert_eq!(transvection(&c, &d), d);
    }

    #[test]
    fn basis_literals() {
        assert_eq!(parse_basis("alpha[2,3]"), Some(BasisIndex::alpha(2, 3)));
        assert_eq!(parse_basis("beta[1,1]"), Some(BasisIndex::beta(1, 1)));
        assert_eq!(parse_basis("delta[2]"), Some(BasisIndex::delta(2)));
        assert_eq!(parse_basis("gamma[1,1]"), None);
    }

    #[test]
    fn class_of_lantern_diagonals() {
        let at = atlas();
        let d1 = homology_class(&at, CurveId::d1(2, 1));
        assert_eq!(d1.coeff(BasisIndex::alpha(2, 3)), BigInt::one());
        assert_eq!(d1.coeff(BasisIndex::alpha(2, 1)), BigInt::from(-1));
        let d2 = homology_class(&at, CurveId::d2(2, 1));
        assert_eq!(d2.coeff(BasisIndex::alpha(2, 2)), BigInt::from(-1));
    }

    #[test]
    fn lantern_relation_holds_in_the_homology_shadow() {
        let at = atlas();
        // Boundary twists a[i], c[i], c[i+1], a[i+2] against interior
        // a[i+1], d1, d2: both sides act identically on every basis vector.
        for end in 1..=4u32 {
            for i in 1..=3u32 {
                let lhs = [
                    CurveId::a(end, i),
                    CurveId::c(end, i),
                    CurveId::c(end, i + 1),
                    CurveId::a(end, i + 2),
                ];
                let rhs = [
                    CurveId::a(end, i + 1),
                    CurveId::d1(end, i),
                    CurveId::d2(end, i),
                ];
                let mut basis = vec![BasisIndex::delta(1)];
                for e in 1..=4 {
                    for idx in 1..=6 {
                        basis.push(BasisIndex::alpha(e, idx));
                        basis.push(BasisIndex::beta(e, idx));
                    }
                }
                for ix in basis {
                    let mut x = H1Vector::basis(ix);
                    for c in lhs.iter().rev() {
                        x = transvection(&homology_class(&at, *c), &x);
                    }
                    let mut y = H1Vector::basis(ix);
                    for c in rhs.iter().rev() {
                        y = transvection(&homology_class(&at, *c), &y);
                    }
                    assert_eq!(x, y, "end {end} base {i} at {ix}");
                }
            }
        }
    }
}
