//! Handle-shift bookkeeping: end permutations, the genus-flux homomorphism
//! shadow, shift types from occupancy sequences, separating-curve genus
//! witnesses, symmetric-group generation, and the two numeric strip maps.
//!
//! The flux of a pure word across the cut around end `j` is computed from
//! curve images: the word is applied to a far-out separating-family curve
//! `c[j,window]` and the signed index displacement counts the genus
//! transported into the singleton side.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{Atlas, CurveId, Family, SepClass, TableGen};
use crate::words::{curve_image, CurveTerm, Generator, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FluxError {
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("outside the map's domain: {0}")]
    Domain(String),
}

/// A bijection of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: u32) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from 1-based images; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self, FluxError> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &img in &images {
            if !(1..=n).contains(&img) || seen[(img - 1) as usize] {
                return Err(FluxError::Range(format!(
                    "images {images:?} are not a bijection"
                )));
            }
            seen[(img - 1) as usize] = true;
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn image(&self, j: u32) -> u32 {
        self.images[(j - 1) as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &img)| img == i as u32 + 1)
    }

    /// `self` after `other`: `(self . other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: (1..=self.degree())
                .map(|j| self.image(other.image(j)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[(img - 1) as usize] = i as u32 + 1;
        }
        Perm { images }
    }

    /// The n-cycle `(1 2 .. n)`.
    pub fn cycle(n: u32) -> Self {
        Self {
            images: (1..=n).map(|j| j % n + 1).collect(),
        }
    }

    /// The transposition `(a b)`.
    pub fn transposition(n: u32, a: u32, b: u32) -> Self {
        let mut images: Vec<u32> = (1..=n).collect();
        images.swap((a - 1) as usize, (b - 1) as usize);
        Self { images }
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, "]")
    }
}

/// The permutation a word induces on the space of ends. Twists and handle
/// shifts act trivially.
pub fn end_permutation(atlas: &Atlas, w: &Word) -> Perm {
    let n = atlas.ends();
    let mut perm = Perm::identity(n);
    for letter in w.letters().iter().rev() {
        if let Some(g) = letter.gen.table_gen() {
            if matches!(g, TableGen::Shift { .. }) {
                continue;
            }
            let letter_perm = Perm {
                images: (1..=n)
                    .map(|j| atlas.table_end_image(g, letter.sign, j))
                    .collect(),
            };
            perm = letter_perm.compose(&perm);
        }
    }
    perm
}

/// Integer flux per end, summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxVector {
    coords: Vec<i64>,
}

impl FluxVector {
    pub fn zero(n: u32) -> Self {
        Self {
            coords: vec![0; n as usize],
        }
    }

    pub fn from_coords(coords: Vec<i64>) -> Option<Self> {
        (coords.iter().sum::<i64>() == 0).then_some(Self { coords })
    }

    pub fn coord(&self, end: u32) -> i64 {
        self.coords[(end - 1) as usize]
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FluxVector) -> FluxVector {
        FluxVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::fmt::Display for FluxVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:+}")?;
        }
        write!(f, ")")
    }
}

fn phi_budget(w: &Word) -> u64 {
    64 + 8 * w.len() as u64
}

/// Genus flux of a pure word across a single-end cut class: the signed
/// index displacement of a far-out separating-family curve, positive when
/// genus enters the singleton side. `None` when the word is not pure or the
/// image does not reduce within budget.
pub fn phi(atlas: &Atlas, part: SepClass, w: &Word, window: u32) -> Option<i64> {
    if !end_permutation(atlas, w).is_identity() {
        return None;
    }
    let gamma = CurveId::c(part.end, window);
    let image = curve_image(atlas, w, &CurveTerm::atlas(gamma), phi_budget(w));
    let id = image.as_atlas()?;
    if id.family != Family::C || id.end != part.end || id.index == 0 {
        return None;
    }
    let displacement = i64::from(id.index) - i64::from(window);
    Some(if part.positive_singleton {
        displacement
    } else {
        -displacement
    })
}

/// The flux vector `(phi_1, ..., phi_n)` of a pure word; `None` when any
/// coordinate is undefined or the construction check (sum zero) fails.
pub fn flux_vector(atlas: &Atlas, w: &Word, window: u32) -> Option<FluxVector> {
    let mut coords = Vec::with_capacity(atlas.ends() as usize);
    for end in 1..=atlas.ends() {
        coords.push(phi(atlas, SepClass::singleton(end), w, window)?);
    }
    FluxVector::from_coords(coords)
}

/// The computable membership shadow for the closure of the twist subgroup:
/// trivial end action and zero flux. An undefined flux propagates as
/// false-with-flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureShadow {
    pub value: bool,
    pub undefined: bool,
}

pub fn compact_closure_shadow(atlas: &Atlas, w: &Word, window: u32) -> ClosureShadow {
    if !end_permutation(atlas, w).is_identity() {
        return ClosureShadow {
            value: false,
            undefined: false,
        };
    }
    match flux_vector(atlas, w, window) {
        Some(f) => ClosureShadow {
            value: f.is_zero(),
            undefined: false,
        },
        None => ClosureShadow {
            value: false,
            undefined: true,
        },
    }
}

/// The chain expansion of a non-adjacent shift:
/// `h_{i,k} = h_{k-1,k} ... h_{i+1,i+2} h_{i,i+1}`.
pub fn chain(atlas: &Atlas, i: u32, k: u32) -> Result<Word, FluxError> {
    if !(1 <= i && i < k && k <= atlas.ends()) {
        return Err(FluxError::Range(format!(
            "chain({i},{k}) needs 1 <= i < k <= n"
        )));
    }
    let letters = (i..k)
        .rev()
        .map(|m| crate::words::Letter::new(Generator::Shift { from: m, to: m + 1 }, 1))
        .collect();
    Ok(Word::from_letters(letters))
}

/// The genus bookkeeping around one separating-family curve and one
/// adjacent shift: the witness cut two handles further out, and the three
/// genus counts against the curve, its image, and its preimage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusWitness {
    pub gamma: CurveId,
    pub base: u32,
    pub shifted: u32,
    pub unshifted: u32,
    /// Both quoted genus equations hold (with the mirrored signs on the
    /// attracting side).
    pub valid: bool,
}

/// Witness for the one-step genus displacement. Requires `c` in the
/// separating family with index at least 2 on an end the shift touches.
pub fn separating_witness(
    atlas: &Atlas,
    c: CurveId,
    from: u32,
    to: u32,
) -> Result<GenusWitness, FluxError> {
    if c.family != Family::C || c.index < 2 {
        return Err(FluxError::Range(format!(
            "{c} must be a separating-family curve with index >= 2"
        )));
    }
    if atlas.next_end(from) != to {
        return Err(FluxError::Range(format!("h[{from},{to}] is not adjacent")));
    }
    if c.end != from && c.end != to {
        return Err(FluxError::Range(format!(
            "{c} is not on an end h[{from},{to}] touches"
        )));
    }
    let g = TableGen::Shift { from, to };
    let shifted_curve = atlas
        .generator_image(g, 1, c)
        .ok_or_else(|| FluxError::Range(format!("table image of {c} undefined")))?;
    let unshifted_curve = atlas
        .generator_image(g, -1, c)
        .ok_or_else(|| FluxError::Range(format!("table preimage of {c} undefined")))?;
    let gamma = CurveId::c(c.end, c.index + 2);
    let base = atlas.genus_between(gamma, c).expect("separating family");
    let shifted = atlas
        .genus_between(gamma, shifted_curve)
        .expect("separating family");
    let unshifted = atlas
        .genus_between(gamma, unshifted_curve)
        .expect("separating family");
    let valid = if c.end == from {
        shifted == base + 1 && unshifted == base - 1
    } else {
        shifted == base - 1 && unshifted == base + 1
    };
    Ok(GenusWitness {
        gamma,
        base,
        shifted,
        unshifted,
        valid,
    })
}

/// The equality case for difference words: two shifts with the same ends
/// cancel on separating-family curves, so the genus count against any
/// witness cut is unchanged. Checks `inv(w2) w1` fixes `c`.
pub fn difference_word_fixes(atlas: &Atlas, w1: &Word, w2: &Word, c: CurveId) -> bool {
    let diff = w2.inverse().concat(w1);
    curve_image(atlas, &diff, &CurveTerm::atlas(c), phi_budget(&diff)).as_atlas() == Some(c)
}

/// Breadth-first closure: do the permutations generate the full symmetric
/// group on `n` letters? Brute force, `n <= 8`.
pub fn sym_generated(perms: &[Perm], n: u32) -> Result<bool, FluxError> {
    if n > 8 {
        return Err(FluxError::Range(format!(
            "closure is brute-force, need n <= 8, got {n}"
        )));
    }
    if perms.iter().any(|p| p.degree() != n) {
        return Err(FluxError::Range("permutation degree mismatch".to_string()));
    }
    let order = sym_closure_order(perms, n)?;
    let full: u64 = (1..=u64::from(n)).product();
    Ok(order == full)
}

/// Order of the subgroup generated by the permutations.
pub fn sym_closure_order(perms: &[Perm], n: u32) -> Result<u64, FluxError> {
    if n > 8 {
        return Err(FluxError::Range(format!(
            "closure is brute-force, need n <= 8, got {n}"
        )));
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier = vec![Perm::identity(n)];
    seen.insert(frontier[0].images.clone());
    while let Some(current) = frontier.pop() {
        for g in perms {
            for candidate in [g.compose(&current), g.inverse().compose(&current)] {
                if seen.insert(candidate.images.clone()) {
                    frontier.push(candidate);
                }
            }
        }
    }
    Ok(seen.len() as u64)
}

// ---------------------------------------------------------------------------
// Handle-shift types from occupancy sequences.
// ---------------------------------------------------------------------------

/// An eventually periodic bit stream in canonical form: minimal period,
/// shortest preamble.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodicBits {
    preamble: Vec<bool>,
    period: Vec<bool>,
}

impl EventuallyPeriodicBits {
    pub fn new(preamble: Vec<bool>, period: Vec<bool>) -> Result<Self, FluxError> {
        if period.is_empty() {
            return Err(FluxError::Range("period must be nonempty".to_string()));
        }
        let mut bits = Self { preamble, period };
        bits.canonicalize();
        Ok(bits)
    }

    pub fn zeros() -> Self {
        Self {
            preamble: Vec::new(),
            period: vec![false],
        }
    }

    pub fn preamble(&self) -> &[bool] {
        &self.preamble
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn bit(&self, i: usize) -> bool {
        if i < self.preamble.len() {
            self.preamble[i]
        } else {
            self.period[(i - self.preamble.len()) % self.period.len()]
        }
    }

    pub fn infinitely_many_ones(&self) -> bool {
        self.period.iter().any(|&b| b)
    }

    fn canonicalize(&mut self) {
        // Minimal period: shortest divisor-length prefix that tiles it.
        let len = self.period.len();
        for d in 1..=len {
            if len.is_multiple_of(d)
                && self
                    .period
                    .chunks(d)
                    .all(|chunk| chunk == &self.period[..d])
            {
                self.period.truncate(d);
                break;
            }
        }
        // Shortest preamble: absorb trailing bits that match the period's
        // last bit by rotating the period.
        while let Some(&last) = self.preamble.last() {
            if last == *self.period.last().expect("nonempty") {
                self.preamble.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
        // Re-minimize after rotation.
        let len = self.period.len();
        for d in 1..=len {
            if len.is_multiple_of(d)
                && self
                    .period
                    .chunks(d)
                    .all(|chunk| chunk == &self.period[..d])
            {
                self.period.truncate(d);
                break;
            }
        }
    }

    /// Parses the occupancy literal `pre|period`, bits written as 0/1.
    pub fn parse(text: &str) -> Result<Self, FluxError> {
        let (pre, per) = text
            .split_once('|')
            .ok_or_else(|| FluxError::Range(format!("occupancy literal {text:?} needs '|'")))?;
        let bits = |s: &str| -> Result<Vec<bool>, FluxError> {
            s.trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(FluxError::Range(format!("bad bit {other:?}"))),
                })
                .collect()
        };
        Self::new(bits(pre)?, bits(per)?)
    }
}

/// A handle shift between two ends of `S(n)`, with the genus left outside
/// the embedded strip near each end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftSpec {
    pub from_end: u32,
    pub to_end: u32,
    pub plus_occupancy: EventuallyPeriodicBits,
    pub minus_occupancy: EventuallyPeriodicBits,
}

impl ShiftSpec {
    pub fn new(
        n: u32,
        from_end: u32,
        to_end: u32,
        plus_occupancy: EventuallyPeriodicBits,
        minus_occupancy: EventuallyPeriodicBits,
    ) -> Result<Self, FluxError> {
        if from_end == to_end || !(1..=n).contains(&from_end) || !(1..=n).contains(&to_end) {
            return Err(FluxError::Range(format!(
                "shift ends ({from_end},{to_end}) must be distinct and within 1..={n}"
            )));
        }
        Ok(Self {
            from_end,
            to_end,
            plus_occupancy,
            minus_occupancy,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftType {
    I,
    II,
    III,
}

/// Type of a handle shift: I when both complementary occupancies have
/// finitely many handles, II when both have infinitely many, III otherwise.
pub fn shift_type(spec: &ShiftSpec) -> ShiftType {
    let plus = spec.plus_occupancy.infinitely_many_ones();
    let minus = spec.minus_occupancy.infinitely_many_ones();
    match (plus, minus) {
        (false, false) => ShiftType::I,
        (true, true) => ShiftType::II,
        _ => ShiftType::III,
    }
}

// ---------------------------------------------------------------------------
// The two numeric strip maps.
// ---------------------------------------------------------------------------

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// The annulus twist map `(theta, t) -> (theta + 2 pi t, t)`, angle reduced
/// mod 2 pi.
pub fn twist_point(theta: f64, t: f64) -> Result<(f64, f64), FluxError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(FluxError::Domain(format!("t = {t} outside [0,1]")));
    }
    Ok(((theta + TAU * t).rem_euclid(TAU), t))
}

/// The model strip map of a handle shift on `R x [-1,1]`.
pub fn model_shift_point(x: f64, y: f64) -> Result<(f64, f64), FluxError> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(FluxError::Domain(format!("y = {y} outside [-1,1]")));
    }
    let image = if y.abs() <= 0.5 {
        x + 1.0
    } else if y >= 0.5 {
        x + 2.0 - 2.0 * y
    } else {
        x + 2.0 + 2.0 * y
    };
    Ok((image, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse;

    fn atlas() -> Atlas {
        Atlas::new(4).unwrap()
    }

    fn w(text: &str) -> Word {
        parse(text, &atlas()).unwrap()
    }

    #[test]
    fn end_permutations_of_generators() {
        let at = atlas();
        assert_eq!(end_permutation(&at, &w("R")), Perm::cycle(4));
        assert_eq!(end_permutation(&at, &w("rho1*rho2")), Perm::cycle(4));
        assert_eq!(
            end_permutation(&at, &w("tau1")),
            Perm::transposition(4, 1, 2)
        );
        assert!(end_permutation(&at, &w("T[a,1,1]*inv(T[b,2,3])")).is_identity());
        assert!(end_permutation(&at, &w("h[1,2]")).is_identity());
    }

    #[test]
    fn rho_projections_match_the_stated_cycles() {
        for n in 3..=8 {
            let at = Atlas::new(n).unwrap();
            let rho1 = end_permutation(&at, &parse("rho1", &at).unwrap());
            assert_eq!(rho1.image(1), 1);
            assert_eq!(rho1.image(2), n);
            let rho2 = end_permutation(&at, &parse("rho2", &at).unwrap());
            assert_eq!(rho2.image(1), n);
            for j in 1..=n {
                assert_eq!(rho1.image(rho1.image(j)), j);
                assert_eq!(rho2.image(rho2.image(j)), j);
            }
        }
    }

    #[test]
    fn phi_of_the_adjacent_shift() {
        let at = atlas();
        let h12 = w("h[1,2]");
        assert_eq!(phi(&at, SepClass::singleton(2), &h12, 10), Some(1));
        assert_eq!(phi(&at, SepClass::singleton(3), &h12, 10), Some(0));
        assert_eq!(phi(&at, SepClass::singleton(1), &h12, 10), Some(-1));
        // Twists have no flux.
        assert_eq!(
            phi(&at, SepClass::singleton(1), &w("T[b,1,1]*T[c,1,2]"), 10),
            Some(0)
        );
        // phi is undefined on impure words.
        assert_eq!(phi(&at, SepClass::singleton(1), &w("R"), 10), None);
    }

    #[test]
    fn phi_is_independent_of_the_realizing_index() {
        let at = atlas();
        let words = [w("h[1,2]"), w("h[2,3]*h[1,2]"), w("inv(h[3,4])*h[1,2]")];
        for word in &words {
            for end in 1..=4 {
                let baseline = phi(&at, SepClass::singleton(end), word, 12);
                for window in 8..=16 {
                    assert_eq!(phi(&at, SepClass::singleton(end), word, window), baseline);
                }
            }
        }
    }

    #[test]
    fn flux_examples() {
        let at = atlas();
        let f = flux_vector(&at, &w("h[1,2]"), 10).unwrap();
        assert_eq!(f.coords(), &[-1, 1, 0, 0]);
        let commutator = w("T[a,1,1]*T[b,2,2]*inv(T[a,1,1])*inv(T[b,2,2])");
        assert!(flux_vector(&at, &commutator, 10).unwrap().is_zero());
        let tau = flux_vector(&at, &w("tau1*tau2"), 10).unwrap();
        assert_eq!(tau, f);
    }

    #[test]
    fn flux_is_additive_on_pure_words() {
        let at = atlas();
        let pures = [
            w("h[1,2]"),
            w("h[2,3]"),
            w("T[a,1,1]"),
            w("inv(h[3,4])*h[1,2]"),
        ];
        for w1 in &pures {
            for w2 in &pures {
                let both = flux_vector(&at, &w1.concat(w2), 12).unwrap();
                let sum = flux_vector(&at, w1, 12)
                    .unwrap()
                    .add(&flux_vector(&at, w2, 12).unwrap());
                assert_eq!(both, sum);
            }
        }
    }

    #[test]
    fn chain_words_and_their_flux() {
        let at = atlas();
        let c13 = chain(&at, 1, 3).unwrap();
        assert_eq!(crate::words::render(&c13), "h[2,3]*h[1,2]");
        assert_eq!(crate::words::render(&chain(&at, 1, 2).unwrap()), "h[1,2]");
        let f = flux_vector(&at, &c13, 10).unwrap();
        assert_eq!(f.coords(), &[-1, 0, 1, 0]);
        assert!(chain(&at, 3, 3).is_err());
        assert!(chain(&at, 2, 9).is_err());
    }

    #[test]
    fn closure_shadow() {
        let at = atlas();
        // Two different words for same-ends shifts differ by something in
        // the closure: trivial end action and zero flux.
        let both = w("h[1,2]").concat(&w("tau1*tau2").inverse());
        assert_eq!(
            compact_closure_shadow(&at, &both, 10),
            ClosureShadow {
                value: true,
                undefined: false
            }
        );
        assert_eq!(
            compact_closure_shadow(&at, &w("h[1,2]"), 10),
            ClosureShadow {
                value: false,
                undefined: false
            }
        );
        assert_eq!(
            compact_closure_shadow(&at, &Word::identity(), 10),
            ClosureShadow {
                value: true,
                undefined: false
            }
        );
    }

    #[test]
    fn genus_witness_bookkeeping() {
        let at = atlas();
        let report = separating_witness(&at, CurveId::c(1, 3), 1, 2).unwrap();
        assert_eq!(report.gamma, CurveId::c(1, 5));
        assert_eq!((report.base, report.shifted, report.unshifted), (2, 3, 1));
        assert!(report.valid);

        let report = separating_witness(&at, CurveId::c(1, 2), 1, 2).unwrap();
        assert_eq!(report.gamma, CurveId::c(1, 4));
        assert_eq!((report.base, report.shifted, report.unshifted), (2, 3, 1));
        assert!(report.valid);

        // Attracting side mirrors the signs.
        let report = separating_witness(&at, CurveId::c(2, 3), 1, 2).unwrap();
        assert!(report.valid);
        assert_eq!((report.base, report.shifted, report.unshifted), (2, 1, 3));

        assert!(separating_witness(&at, CurveId::c(1, 1), 1, 2).is_err());
        assert!(separating_witness(&at, CurveId::c(3, 4), 1, 2).is_err());
    }

    #[test]
    fn difference_word_equality_case() {
        let at = atlas();
        let h1 = w("h[1,2]");
        let h2 = w("tau1*tau2");
        for idx in 1..=8 {
            assert!(difference_word_fixes(&at, &h1, &h2, CurveId::c(1, idx)));
            assert!(difference_word_fixes(&at, &h1, &h2, CurveId::c(2, idx)));
        }
    }

    #[test]
    fn symmetric_group_generation() {
        for n in 3..=7 {
            assert!(sym_generated(&[Perm::cycle(n), Perm::transposition(n, 1, 2)], n).unwrap());
        }
        assert!(!sym_generated(&[Perm::transposition(3, 1, 2)], 3).unwrap());
        // (1 2 3) and (1 2)(4 5) generate a proper subgroup of Sym_5.
        let two_cycles = Perm::from_images(vec![2, 1, 3, 5, 4]).unwrap();
        let three_cycle = Perm::from_images(vec![2, 3, 1, 4, 5]).unwrap();
        let order = sym_closure_order(&[three_cycle.clone(), two_cycles.clone()], 5).unwrap();
        assert!(order < 120, "order {order}");
        assert!(!sym_generated(&[three_cycle, two_cycles], 5).unwrap());
        assert!(sym_generated(&[Perm::cycle(9)], 9).is_err());
    }

    #[test]
    fn occupancy_canonical_forms() {
        let a = EventuallyPeriodicBits::new(vec![true, false], vec![false, false]).unwrap();
        assert_eq!(a.period(), &[false]);
        assert_eq!(a.preamble(), &[true]);
        let b = EventuallyPeriodicBits::new(vec![], vec![true, false, true, false]).unwrap();
        assert_eq!(b.period(), &[true, false]);
        // Same stream, different presentations.
        let c1 = EventuallyPeriodicBits::new(vec![true], vec![false, true]).unwrap();
        let c2 = EventuallyPeriodicBits::new(vec![true, false], vec![true, false]).unwrap();
        assert_eq!(c1, c2);
        for i in 0..32 {
            assert_eq!(c1.bit(i), c2.bit(i));
        }
    }

    #[test]
    fn shift_types() {
        let zeros = EventuallyPeriodicBits::zeros();
        let ones = EventuallyPeriodicBits::new(vec![], vec![true]).unwrap();
        let mk = |p: &EventuallyPeriodicBits, m: &EventuallyPeriodicBits| {
            ShiftSpec::new(4, 1, 2, p.clone(), m.clone()).unwrap()
        };
        assert_eq!(shift_type(&mk(&zeros, &zeros)), ShiftType::I);
        assert_eq!(shift_type(&mk(&ones, &ones)), ShiftType::II);
        assert_eq!(shift_type(&mk(&zeros, &ones)), ShiftType::III);
        // Invariant under canonicalization.
        let noisy = EventuallyPeriodicBits::new(vec![true, true], vec![false, false]).unwrap();
        assert_eq!(shift_type(&mk(&noisy, &noisy)), ShiftType::I);
    }

    #[test]
    fn twist_map_points() {
        assert_eq!(twist_point(1.0, 0.0).unwrap(), (1.0, 0.0));
        let (theta, t) = twist_point(1.0, 1.0).unwrap();
        assert!((theta - 1.0).abs() < 1e-12);
        assert_eq!(t, 1.0);
        let (theta, _) = twist_point(0.0, 0.5).unwrap();
        assert!((theta - std::f64::consts::PI).abs() < 1e-12);
        assert!(twist_point(0.0, 1.5).is_err());
    }

    #[test]
    fn model_shift_points() {
        assert_eq!(model_shift_point(0.0, 0.0).unwrap(), (1.0, 0.0));
        assert_eq!(model_shift_point(0.0, 1.0).unwrap(), (0.0, 1.0));
        assert_eq!(model_shift_point(0.0, 0.75).unwrap(), (0.5, 0.75));
        assert!(model_shift_point(0.0, -1.5).is_err());
        // Continuity at |y| = 1/2: both branches give x + 1.
        for x in [-3.0, 0.0, 7.5] {
            assert!((model_shift_point(x, 0.5).unwrap().0 - (x + 1.0)).abs() < 1e-12);
            assert!((model_shift_point(x, -0.5).unwrap().0 - (x + 1.0)).abs() < 1e-12);
        }
    }
}
