//! Signatures of finite-type surfaces, the star model of `S(n)`, and the
//! classical generator-count formulas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The classification triple `(g, b, n)` of a finite-type surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteTypeSig {
    pub genus: u32,
    pub boundary: u32,
    pub punctures: u32,
}

impl FiniteTypeSig {
    pub fn new(genus: u32, boundary: u32, punctures: u32) -> Self {
        Self {
            genus,
            boundary,
            punctures,
        }
    }
}

impl std::fmt::Display for FiniteTypeSig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.genus, self.boundary, self.punctures)
    }
}

/// Named infinite-type surfaces used throughout the test suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedSurface {
    LochNess,
    JacobsLadder,
    CantorTree,
    BloomingCantorTree,
    Flute,
}

impl NamedSurface {
    pub const ALL: [NamedSurface; 5] = [
        NamedSurface::LochNess,
        NamedSurface::JacobsLadder,
        NamedSurface::CantorTree,
        NamedSurface::BloomingCantorTree,
        NamedSurface::Flute,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lochness" | "loch-ness" | "loch_ness" => Some(Self::LochNess),
            "jacobsladder" | "jacobs-ladder" | "jacobs_ladder" | "ladder" => {
                Some(Self::JacobsLadder)
            }
            "cantortree" | "cantor-tree" | "cantor_tree" => Some(Self::CantorTree),
            "bloomingcantortree" | "blooming-cantor-tree" | "blooming_cantor_tree" | "blooming" => {
                Some(Self::BloomingCantorTree)
            }
            "flute" => Some(Self::Flute),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LochNess => "LochNess",
            Self::JacobsLadder => "JacobsLadder",
            Self::CantorTree => "CantorTree",
            Self::BloomingCantorTree => "BloomingCantorTree",
            Self::Flute => "Flute",
        }
    }
}

/// Either a finite-type signature, the star surface `S(n)`, or a named
/// infinite-type surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceSig {
    Finite(FiniteTypeSig),
    Sn { ends: u32 },
    Named(NamedSurface),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    /// The generator-count theorems are stated for genus at least two; lower
    /// genus is rejected rather than guessed.
    #[error("generator count is only defined for genus >= 2, got {0}")]
    Unsupported(u32),
    #[error("malformed signature literal {0:?}, expected \"g,b,n\"")]
    BadLiteral(String),
}

/// `chi = 2 - 2g - b - n`.
pub fn euler_characteristic(sig: FiniteTypeSig) -> i64 {
    2 - 2 * i64::from(sig.genus) - i64::from(sig.boundary) - i64::from(sig.punctures)
}

/// Finite-type surfaces are homeomorphic exactly when their triples agree.
pub fn finite_homeomorphic(s1: FiniteTypeSig, s2: FiniteTypeSig) -> bool {
    s1 == s2
}

/// Minimal Dehn-twist generator counts: `2g+1` for closed surfaces and
/// `2g+b+n` in the presence of boundary or punctures. Only stated for
/// genus at least 2.
pub fn generator_count(sig: FiniteTypeSig) -> Result<u32, SurfaceError> {
    if sig.genus < 2 {
        return Err(SurfaceError::Unsupported(sig.genus));
    }
    if sig.boundary == 0 && sig.punctures == 0 {
        Ok(2 * sig.genus + 1)
    } else {
        Ok(2 * sig.genus + sig.boundary + sig.punctures)
    }
}

/// The level-`m` compact truncation of `S(n)` in the star model: one handle
/// per end per level, one boundary circle per end.
pub fn truncation(ends: u32, level: u32) -> FiniteTypeSig {
    FiniteTypeSig {
        genus: ends * level,
        boundary: ends,
        punctures: 0,
    }
}

/// Parses the CLI literal `"g,b,n"`.
pub fn parse_signature(text: &str) -> Result<FiniteTypeSig, SurfaceError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(SurfaceError::BadLiteral(text.to_string()));
    }
    let mut nums = [0u32; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| SurfaceError::BadLiteral(text.to_string()))?;
    }
    Ok(FiniteTypeSig::new(nums[0], nums[1], nums[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristic_small_cases() {
        assert_eq!(euler_characteristic(FiniteTypeSig::new(0, 0, 0)), 2);
        assert_eq!(euler_characteristic(FiniteTypeSig::new(1, 0, 0)), 0);
        // The lantern surface: four-holed sphere with chi = -2.
        let lantern = FiniteTypeSig::new(0, 4, 0);
        assert_eq!(euler_characteristic(lantern), -2);
        assert!(euler_characteristic(lantern) <= -2);
    }

    #[test]
    fn homeomorphism_is_triple_equality() {
        assert!(finite_homeomorphic(
            FiniteTypeSig::new(2, 1, 0),
            FiniteTypeSig::new(2, 1, 0)
        ));
        assert!(!finite_homeomorphic(
            FiniteTypeSig::new(1, 0, 0),
            FiniteTypeSig::new(0, 0, 1)
        ));
        // Annulus vs twice-punctured sphere.
        assert!(!finite_homeomorphic(
            FiniteTypeSig::new(0, 2, 0),
            FiniteTypeSig::new(0, 0, 2)
        ));
    }

    #[test]
    fn homeomorphism_is_an_equivalence_on_samples() {
        let sigs: Vec<FiniteTypeSig> = (0..4)
            .flat_map(|g| {
                (0..3).flat_map(move |b| (0..3).map(move |n| FiniteTypeSig::new(g, b, n)))
            })
            .collect();
        for &a in &sigs {
            assert!(finite_homeomorphic(a, a));
            for &b in &sigs {
                assert_eq!(finite_homeomorphic(a, b), finite_homeomorphic(b, a));
                for &c in &sigs {
                    if finite_homeomorphic(a, b) && finite_homeomorphic(b, c) {
                        assert!(finite_homeomorphic(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(generator_count(FiniteTypeSig::new(2, 0, 0)), Ok(5));
        assert_eq!(generator_count(FiniteTypeSig::new(2, 1, 0)), Ok(5));
        assert_eq!(generator_count(FiniteTypeSig::new(3, 2, 1)), Ok(9));
        assert_eq!(
            generator_count(FiniteTypeSig::new(1, 0, 0)),
            Err(SurfaceError::Unsupported(1))
        );
        assert_eq!(
            generator_count(FiniteTypeSig::new(0, 3, 2)),
            Err(SurfaceError::Unsupported(0))
        );
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation(3, 1), FiniteTypeSig::new(3, 3, 0));
        assert_eq!(truncation(3, 2), FiniteTypeSig::new(6, 3, 0));
        assert_eq!(truncation(1, 5), FiniteTypeSig::new(5, 1, 0));
    }

    #[test]
    fn truncations_nest() {
        for n in 1..=8 {
            for m in 2..=20 {
                let lo = truncation(n, m - 1);
                let hi = truncation(n, m);
                assert!(hi.genus >= lo.genus && hi.boundary >= lo.boundary);
            }
        }
    }

    #[test]
    fn truncation_euler_identity() {
        for n in 1..=8u32 {
            for m in 1..=20u32 {
                let chi = euler_characteristic(truncation(n, m));
                assert_eq!(chi, 2 - 2 * i64::from(n * m) - i64::from(n));
            }
        }
    }

    #[test]
    fn boundary_twists_extend_the_closed_count() {
        for g in 2..=10 {
            for b in 0..=3 {
                for n in 0..=3 {
                    if b + n == 0 {
                        continue;
                    }
                    let closed = generator_count(FiniteTypeSig::new(g, 0, 0)).unwrap();
                    let full = generator_count(FiniteTypeSig::new(g, b, n)).unwrap();
                    assert_eq!(closed + b + n - 1, full);
                }
            }
        }
    }

    #[test]
    fn signature_literals() {
        assert_eq!(parse_signature("2,1,0"), Ok(FiniteTypeSig::new(2, 1, 0)));
        assert!(parse_signature("2,1").is_err());
        assert!(parse_signature("a,b,c").is_err());
    }
}
