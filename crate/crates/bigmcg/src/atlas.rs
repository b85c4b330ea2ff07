//! The indexed curve families of the star model of `S(n)` and their action
//! tables.
//!
//! The atlas is defined by its tables, not by embedded geometry. Every curve
//! is carried by handles `(end, index)` of the model: `a`/`a'` are the two
//! side curves of a handle, `b` the through curve, and `c[j,i]` links two
//! consecutive handles — for `i >= 1` the handles `i, i+1` of end `j`, and
//! for `i = 0` the first handles of ends `j` and `j+1` across the planar
//! core. `d1`/`d2` are the diagonals of the lantern spanned by
//! `a[j,i], c[j,i], c[j,i+1], a[j,i+2]`. Non-twist generators act on handles
//! by translation or end permutation and curve images are read off from the
//! transported carriers; an image whose carrier is no longer an atlas
//! pattern is `Undefined`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Curve family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    APrime,
    B,
    C,
    D1,
    D2,
}

/// An atlas curve name. Ends are 1-based; `A`/`APrime`/`B`/`D*` indices start
/// at 1, `C` indices at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveId {
    pub family: Family,
    pub end: u32,
    pub index: u32,
}

impl CurveId {
    pub fn new(family: Family, end: u32, index: u32) -> Self {
        Self { family, end, index }
    }

    pub fn a(end: u32, index: u32) -> Self {
        Self::new(Family::A, end, index)
    }
    pub fn a_prime(end: u32, index: u32) -> Self {
        Self::new(Family::APrime, end, index)
    }
    pub fn b(end: u32, index: u32) -> Self {
        Self::new(Family::B, end, index)
    }
    pub fn c(end: u32, index: u32) -> Self {
        Self::new(Family::C, end, index)
    }
    pub fn d1(end: u32, index: u32) -> Self {
        Self::new(Family::D1, end, index)
    }
    pub fn d2(end: u32, index: u32) -> Self {
        Self::new(Family::D2, end, index)
    }
}

impl std::fmt::Display for CurveId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fam = match self.family {
            Family::A => "a",
            Family::APrime => "a'",
            Family::B => "b",
            Family::C => "c",
            Family::D1 => "d1",
            Family::D2 => "d2",
        };
        write!(f, "{fam}[{},{}]", self.end, self.index)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtlasError {
    #[error("need at least 3 ends, got {0}")]
    TooFewEnds(u32),
    #[error("at most {} ends are supported, got {0}", Atlas::MAX_ENDS)]
    TooManyEnds(u32),
    #[error("malformed curve {0} for {1} ends")]
    Malformed(CurveId, u32),
    #[error("curve literal {0:?} is not in the grammar")]
    BadLiteral(String),
    #[error("{0} is not a separating-family curve")]
    NotSeparating(CurveId),
}

/// Non-twist generators that act through the atlas tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableGen {
    /// Adjacent handle shift from `from` to `to = from mod n + 1`.
    Shift {
        from: u32,
        to: u32,
    },
    /// Rotation by one end.
    Rot,
    Rho1,
    Rho2,
    Tau1,
    Tau2,
}

/// A handle of the model: `(end, idx)` with `idx >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Handle {
    pub end: u32,
    pub idx: u32,
}

/// End permutations realized by the table generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EndPerm {
    RotBy(i64),
    Rho1,
    Rho2,
    Swap12,
}

impl EndPerm {
    fn apply(self, j: u32, n: u32) -> u32 {
        let n64 = i64::from(n);
        let j64 = i64::from(j);
        match self {
            EndPerm::RotBy(k) => ((j64 - 1 + k).rem_euclid(n64) + 1) as u32,
            // n+2-j fixing end 1, and n+1-j, both mod n into 1..=n.
            EndPerm::Rho1 => ((n64 + 1 - j64).rem_euclid(n64) + 1) as u32,
            EndPerm::Rho2 => ((n64 - j64).rem_euclid(n64) + 1) as u32,
            EndPerm::Swap12 => match j {
                1 => 2,
                2 => 1,
                other => other,
            },
        }
    }
}

/// One atomic move on handles; every table generator is a short sequence of
/// these, applied left to right.
#[derive(Debug, Clone, Copy)]
enum Atomic {
    /// The adjacent shift `src -> dst`; `back` selects its inverse.
    Shift { src: u32, dst: u32, back: bool },
    /// An end permutation; `flip` toggles the `a`/`a'` side everywhere.
    Perm { perm: EndPerm, flip: bool },
}

/// The atlas for a fixed number of ends `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Atlas {
    n: u32,
}

impl Atlas {
    pub const MAX_ENDS: u32 = 4096;

    pub fn new(n: u32) -> Result<Self, AtlasError> {
        if n < 3 {
            return Err(AtlasError::TooFewEnds(n));
        }
        if n > Self::MAX_ENDS {
            return Err(AtlasError::TooManyEnds(n));
        }
        Ok(Self { n })
    }

    pub fn ends(&self) -> u32 {
        self.n
    }

    pub fn next_end(&self, j: u32) -> u32 {
        j % self.n + 1
    }

    pub fn prev_end(&self, j: u32) -> u32 {
        (j + self.n - 2) % self.n + 1
    }

    pub fn well_formed(&self, c: CurveId) -> bool {
        let end_ok = (1..=self.n).contains(&c.end);
        let idx_ok = match c.family {
            Family::C => true,
            _ => c.index >= 1,
        };
        end_ok && idx_ok
    }

    pub fn check(&self, c: CurveId) -> Result<(), AtlasError> {
        if self.well_formed(c) {
            Ok(())
        } else {
            Err(AtlasError::Malformed(c, self.n))
        }
    }

    /// The handles a curve is attached to, with the sign each contributes to
    /// its homology class (`a`/`a'`/`b` sit on one handle; chain curves link
    /// two with opposite signs; lantern diagonals combine three).
    pub fn carrier(&self, c: CurveId) -> Vec<(Handle, i32)> {
        let h = |end, idx| Handle { end, idx };
        match c.family {
            Family::A | Family::APrime | Family::B => vec![(h(c.end, c.index), 1)],
            Family::C => {
                if c.index >= 1 {
                    vec![(h(c.end, c.index), 1), (h(c.end, c.index + 1), -1)]
                } else {
                    vec![(h(c.end, 1), 1), (h(self.next_end(c.end), 1), -1)]
                }
            }
            Family::D1 => vec![(h(c.end, c.index + 2), 1), (h(c.end, c.index), -1)],
            Family::D2 => vec![
                (h(c.end, c.index), 1),
                (h(c.end, c.index + 1), -1),
                (h(c.end, c.index + 2), 1),
            ],
        }
    }

    /// Geometric intersection oracle on atlas curves. Within one end, `b[j,i]`
    /// meets `a[j,i]`, `a'[j,i]` and the chain curves through handle `(j,i)`
    /// once; the bridge `c[j,0]` also meets `b[j+1,1]`. All other atlas pairs
    /// are disjoint.
    pub fn intersection(&self, x: CurveId, y: CurveId) -> Result<u64, AtlasError> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Ok(0);
        }
        let through = |c: CurveId| c.family == Family::B;
        let value = if through(x) || through(y) {
            let (b, other) = if through(x) { (x, y) } else { (y, x) };
            if through(b) && through(other) {
                0
            } else {
                let hb = Handle {
                    end: b.end,
                    idx: b.index,
                };
                match other.family {
                    Family::A | Family::APrime => {
                        u64::from(other.end == b.end && other.index == b.index)
                    }
                    Family::C | Family::D1 | Family::D2 => {
                        u64::from(self.carrier(other).iter().any(|(h, _)| *h == hb))
                    }
                    Family::B => unreachable!(),
                }
            }
        } else {
            0
        };
        Ok(value)
    }

    /// `i(T_a^k(b), b) = |k| i(a,b)^2`.
    pub fn twisted_intersection(iab: u64, k: i64) -> u64 {
        k.unsigned_abs() * iab * iab
    }

    fn atomics(&self, g: TableGen, sign: i8) -> Vec<Atomic> {
        let fwd = sign >= 0;
        match g {
            TableGen::Shift { from, to } => {
                vec![Atomic::Shift {
                    src: from,
                    dst: to,
                    back: !fwd,
                }]
            }
            TableGen::Rot => vec![Atomic::Perm {
                perm: EndPerm::RotBy(if fwd { 1 } else { -1 }),
                flip: false,
            }],
            TableGen::Rho1 => vec![Atomic::Perm {
                perm: EndPerm::Rho1,
                flip: true,
            }],
            TableGen::Rho2 => vec![Atomic::Perm {
                perm: EndPerm::Rho2,
                flip: true,
            }],
            TableGen::Tau1 => vec![Atomic::Perm {
                perm: EndPerm::Swap12,
                flip: true,
            }],
            // tau2 is defined as the table composition tau1 o h_{1,2}.
            TableGen::Tau2 => {
                let swap = Atomic::Perm {
                    perm: EndPerm::Swap12,
                    flip: true,
                };
                let shift = Atomic::Shift {
                    src: 1,
                    dst: 2,
                    back: !fwd,
                };
                if fwd {
                    vec![shift, swap]
                } else {
                    vec![swap, shift]
                }
            }
        }
    }

    /// Total bijective action of an atomic move on handles.
    fn handle_image(&self, a: Atomic, h: Handle) -> Handle {
        match a {
            Atomic::Shift {
                src,
                dst,
                back: false,
            } => {
                if h.end == src {
                    if h.idx == 1 {
                        Handle { end: dst, idx: 1 }
                    } else {
                        Handle {
                            end: src,
                            idx: h.idx - 1,
                        }
                    }
                } else if h.end == dst {
                    Handle {
                        end: dst,
                        idx: h.idx + 1,
                    }
                } else {
                    h
                }
            }
            Atomic::Shift {
                src,
                dst,
                back: true,
            } => {
                if h.end == dst {
                    if h.idx == 1 {
                        Handle { end: src, idx: 1 }
                    } else {
                        Handle {
                            end: dst,
                            idx: h.idx - 1,
                        }
                    }
                } else if h.end == src {
                    Handle {
                        end: src,
                        idx: h.idx + 1,
                    }
                } else {
                    h
                }
            }
            Atomic::Perm { perm, .. } => Handle {
                end: perm.apply(h.end, self.n),
                idx: h.idx,
            },
        }
    }

    /// Whether the atomic move toggles the `a`/`a'` side at handle `h`.
    fn side_flip(&self, a: Atomic, h: Handle) -> bool {
        match a {
            Atomic::Shift {
                src, back: false, ..
            } => h == Handle { end: src, idx: 1 },
            Atomic::Shift {
                dst, back: true, ..
            } => h == Handle { end: dst, idx: 1 },
            Atomic::Perm { flip, .. } => flip,
        }
    }

    fn realize_chain(&self, p: Handle, q: Handle) -> Option<CurveId> {
        if p.end == q.end {
            let (lo, hi) = if p.idx <= q.idx {
                (p.idx, q.idx)
            } else {
                (q.idx, p.idx)
            };
            (hi == lo + 1).then(|| CurveId::c(p.end, lo))
        } else if p.idx == 1 && q.idx == 1 {
            if self.next_end(p.end) == q.end {
                Some(CurveId::c(p.end, 0))
            } else if self.next_end(q.end) == p.end {
                Some(CurveId::c(q.end, 0))
            } else {
                None
            }
        } else {
            None
        }
    }

    fn apply_atomic(&self, a: Atomic, c: CurveId) -> Option<CurveId> {
        match c.family {
            Family::A | Family::APrime => {
                let h = Handle {
                    end: c.end,
                    idx: c.index,
                };
                let image = self.handle_image(a, h);
                let flip = self.side_flip(a, h);
                // The image of the plain `a` curve across the strip is never
                // stated; the corresponding table cell stays undefined in
                // both directions.
                if let Atomic::Shift { .. } = a {
                    if flip
                        && c.family
                            == (if self.shift_is_back(a) {
                                Family::APrime
                            } else {
                                Family::A
                            })
                    {
                        return None;
                    }
                }
                let family = match (c.family, flip) {
                    (Family::A, false) | (Family::APrime, true) => Family::A,
                    (Family::A, true) | (Family::APrime, false) => Family::APrime,
                    _ => unreachable!(),
                };
                Some(CurveId::new(family, image.end, image.idx))
            }
            Family::B => {
                let h = Handle {
                    end: c.end,
                    idx: c.index,
                };
                let image = self.handle_image(a, h);
                Some(CurveId::b(image.end, image.idx))
            }
            Family::C => {
                let carrier = self.carrier(c);
                let p = self.handle_image(a, carrier[0].0);
                let q = self.handle_image(a, carrier[1].0);
                self.realize_chain(p, q)
            }
            Family::D1 | Family::D2 => {
                let base = Handle {
                    end: c.end,
                    idx: c.index,
                };
                let h1 = self.handle_image(a, base);
                let h2 = self.handle_image(
                    a,
                    Handle {
                        end: c.end,
                        idx: c.index + 1,
                    },
                );
                let h3 = self.handle_image(
                    a,
                    Handle {
                        end: c.end,
                        idx: c.index + 2,
                    },
                );
                (h1.end == h2.end
                    && h2.end == h3.end
                    && h2.idx == h1.idx + 1
                    && h3.idx == h2.idx + 1)
                    .then(|| CurveId::new(c.family, h1.end, h1.idx))
            }
        }
    }

    fn shift_is_back(&self, a: Atomic) -> bool {
        matches!(a, Atomic::Shift { back: true, .. })
    }

    /// Partial action of a signed table generator on an atlas curve.
    /// `None` is the `Undefined` value: the image is not an atlas curve or
    /// the table cell was left open.
    pub fn generator_image(&self, g: TableGen, sign: i8, c: CurveId) -> Option<CurveId> {
        if !self.well_formed(c) {
            return None;
        }
        let mut current = c;
        for atomic in self.atomics(g, sign) {
            current = self.apply_atomic(atomic, current)?;
        }
        Some(current)
    }

    /// The (total, bijective) action of a signed table generator on a handle.
    /// This is the homology-level transport underlying the curve tables.
    pub fn table_handle_image(&self, g: TableGen, sign: i8, h: Handle) -> Handle {
        let mut current = h;
        for atomic in self.atomics(g, sign) {
            current = self.handle_image(atomic, current);
        }
        current
    }

    /// The permutation of the space of ends induced by a signed table
    /// generator. Handle shifts act trivially on ends.
    pub fn table_end_image(&self, g: TableGen, sign: i8, j: u32) -> u32 {
        match g {
            TableGen::Shift { .. } => j,
            TableGen::Rot => EndPerm::RotBy(if sign >= 0 { 1 } else { -1 }).apply(j, self.n),
            TableGen::Rho1 => EndPerm::Rho1.apply(j, self.n),
            TableGen::Rho2 => EndPerm::Rho2.apply(j, self.n),
            TableGen::Tau1 | TableGen::Tau2 => EndPerm::Swap12.apply(j, self.n),
        }
    }

    /// Number of handles between two separating-family cuts: on one end the
    /// index difference, across ends the sum (the core is planar).
    pub fn genus_between(&self, c1: CurveId, c2: CurveId) -> Result<u32, AtlasError> {
        for c in [c1, c2] {
            self.check(c)?;
            if c.family != Family::C {
                return Err(AtlasError::NotSeparating(c));
            }
        }
        Ok(if c1.end == c2.end {
            c1.index.abs_diff(c2.index)
        } else {
            c1.index + c2.index
        })
    }
}

/// A single-end cut class: the homology class of the separating curves
/// around one end. `positive_singleton` orients it so that genus entering
/// the singleton side counts positively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SepClass {
    pub end: u32,
    pub positive_singleton: bool,
}

impl SepClass {
    pub fn singleton(end: u32) -> Self {
        Self {
            end,
            positive_singleton: true,
        }
    }
}

/// Parses curve literals `a[j,i]`, `a'[j,i]`, `b[j,i]`, `c[j,i]`,
/// `d1[j,i]`, `d2[j,i]`.
pub fn parse_curve(text: &str) -> Result<CurveId, AtlasError> {
    let text = text.trim();
    let open = text
        .find('[')
        .ok_or_else(|| AtlasError::BadLiteral(text.to_string()))?;
    if !text.ends_with(']') {
        return Err(AtlasError::BadLiteral(text.to_string()));
    }
    let family = match &text[..open] {
        "a" => Family::A,
        "a'" => Family::APrime,
        "b" => Family::B,
        "c" => Family::C,
        "d1" => Family::D1,
        "d2" => Family::D2,
        _ => return Err(AtlasError::BadLiteral(text.to_string())),
    };
    let inner = &text[open + 1..text.len() - 1];
    let (end, index) = inner
        .split_once(',')
        .ok_or_else(|| AtlasError::BadLiteral(text.to_string()))?;
    let end: u32 = end
        .trim()
        .parse()
        .map_err(|_| AtlasError::BadLiteral(text.to_string()))?;
    let index: u32 = index
        .trim()
        .parse()
        .map_err(|_| AtlasError::BadLiteral(text.to_string()))?;
    Ok(CurveId { family, end, index })
}

/// All atlas curves with index at most `max_index` (families `a`, `a'`, `b`,
/// `c` including the bridges, `d1`, `d2`).
pub fn curves_up_to(atlas: &Atlas, max_index: u32) -> Vec<CurveId> {
    let mut out = Vec::new();
    for end in 1..=atlas.ends() {
        for idx in 1..=max_index {
            out.push(CurveId::a(end, idx));
            out.push(CurveId::a_prime(end, idx));
            out.push(CurveId::b(end, idx));
            out.push(CurveId::d1(end, idx));
            out.push(CurveId::d2(end, idx));
        }
        for idx in 0..=max_index {
            out.push(CurveId::c(end, idx));
        }
    }
    out
}
