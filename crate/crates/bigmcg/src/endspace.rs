//! Finite symbolic encodings of end spaces and the decidable fragment of the
//! classification comparison.
//!
//! A code is a finite multiset of components: isolated ends, Cantor blocks,
//! and omega-chains (countably many isolated ends converging to one limit
//! end). Each carries a planar / non-planar mark. This class is small enough
//! that homeomorphism of the encoded spaces is decidable on the purely
//! finite fragment and soundly semi-decidable elsewhere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::NamedSurface;

/// One component of an end-space code. `np = true` marks ends accumulated
/// by genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Component {
    IsolatedEnd { np: bool },
    CantorBlock { np: bool },
    OmegaChain { limit_np: bool, tail_np: bool },
}

impl Component {
    fn is_isolated(&self) -> bool {
        matches!(self, Component::IsolatedEnd { .. })
    }

    fn has_np(&self) -> bool {
        match *self {
            Component::IsolatedEnd { np } | Component::CantorBlock { np } => np,
            Component::OmegaChain { limit_np, tail_np } => limit_np || tail_np,
        }
    }
}

/// A finite multiset of components, kept sorted so that equal multisets are
/// structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EndSpaceCode {
    components: Vec<Component>,
}

impl EndSpaceCode {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort();
        Self { components }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True when every component is an isolated end.
    pub fn is_purely_finite(&self) -> bool {
        self.components.iter().all(Component::is_isolated)
    }

    pub fn has_np(&self) -> bool {
        self.components.iter().any(Component::has_np)
    }
}

/// A count that may be the first infinite cardinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Count {
    Finite(u32),
    Omega,
}

/// Derivative depth: number of derivative steps until the code empties, or
/// an omega token when a nonempty perfect part survives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Depth {
    Finite(u32),
    Omega,
}

/// Extent of a boundary or genus count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extent {
    Finite(u32),
    Infinite,
}

impl std::fmt::Display for Extent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extent::Finite(k) => write!(f, "{k}"),
            Extent::Infinite => write!(f, "inf"),
        }
    }
}

/// A surface description for the classification comparison: boundary count,
/// genus, and the end-space code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDesc {
    pub boundary: Extent,
    pub genus: Extent,
    pub code: EndSpaceCode,
}

impl SurfaceDesc {
    /// Builds a description; genus is forced to infinity whenever the code
    /// marks a non-planar component.
    pub fn new(boundary: Extent, genus: Extent, code: EndSpaceCode) -> Self {
        let genus = if code.has_np() {
            Extent::Infinite
        } else {
            genus
        };
        Self {
            boundary,
            genus,
            code,
        }
    }
}

/// The computable homeomorphism invariant used to separate codes quickly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub isolated: Count,
    pub has_cantor: bool,
    pub depth: Depth,
    /// Per derivative rank: (non-planar isolated count, non-planar Cantor
    /// part present).
    pub np_profile: Vec<(Count, bool)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EndSpaceError {
    #[error("unknown surface name or code literal {0:?}")]
    BadLiteral(String),
}

/// Result of the classification comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Homeomorphic,
    Distinct,
    Inconclusive,
}

/// Codes of the five named surfaces.
pub fn named_code(name: NamedSurface) -> EndSpaceCode {
    use Component::*;
    match name {
        NamedSurface::LochNess => EndSpaceCode::new(vec![IsolatedEnd { np: true }]),
        NamedSurface::JacobsLadder => {
            EndSpaceCode::new(vec![IsolatedEnd { np: true }, IsolatedEnd { np: true }])
        }
        NamedSurface::CantorTree => EndSpaceCode::new(vec![CantorBlock { np: false }]),
        NamedSurface::BloomingCantorTree => EndSpaceCode::new(vec![CantorBlock { np: true }]),
        NamedSurface::Flute => EndSpaceCode::new(vec![OmegaChain {
            limit_np: false,
            tail_np: false,
        }]),
    }
}

/// The full description (boundary, genus, code) of a named surface.
pub fn named_desc(name: NamedSurface) -> SurfaceDesc {
    let genus = match name {
        NamedSurface::CantorTree | NamedSurface::Flute => Extent::Finite(0),
        _ => Extent::Infinite,
    };
    SurfaceDesc::new(Extent::Finite(0), genus, named_code(name))
}

/// Code of `S(n)`: n isolated non-planar ends.
pub fn sn_code(ends: u32) -> EndSpaceCode {
    EndSpaceCode::new(vec![Component::IsolatedEnd { np: true }; ends as usize])
}

pub fn sn_desc(ends: u32) -> SurfaceDesc {
    SurfaceDesc::new(Extent::Finite(0), Extent::Infinite, sn_code(ends))
}

/// One Cantor–Bendixson derivative: isolated ends vanish, each omega-chain
/// collapses to its limit end, Cantor blocks persist.
pub fn cb_derivative(code: &EndSpaceCode) -> EndSpaceCode {
    let mut out = Vec::new();
    for c in code.components() {
        match *c {
            Component::IsolatedEnd { .. } => {}
            Component::OmegaChain { limit_np, .. } => {
                out.push(Component::IsolatedEnd { np: limit_np })
            }
            Component::CantorBlock { np } => out.push(Component::CantorBlock { np }),
        }
    }
    EndSpaceCode::new(out)
}

fn rank_np(code: &EndSpaceCode) -> (Count, bool) {
    let mut isolated_np = 0u32;
    let mut omega_np = false;
    let mut cantor_np = false;
    for c in code.components() {
        match *c {
            Component::IsolatedEnd { np } => isolated_np += u32::from(np),
            Component::OmegaChain { tail_np, .. } => omega_np |= tail_np,
            Component::CantorBlock { np } => cantor_np |= np,
        }
    }
    let count = if omega_np {
        Count::Omega
    } else {
        Count::Finite(isolated_np)
    };
    (count, cantor_np)
}

/// The fingerprint: iterates [`cb_derivative`] until the code stabilizes.
pub fn fingerprint(code: &EndSpaceCode) -> Fingerprint {
    let isolated = if code
        .components()
        .iter()
        .any(|c| matches!(c, Component::OmegaChain { .. }))
    {
        Count::Omega
    } else {
        Count::Finite(code.components().iter().filter(|c| c.is_isolated()).count() as u32)
    };
    let has_cantor = code
        .components()
        .iter()
        .any(|c| matches!(c, Component::CantorBlock { .. }));

    let mut np_profile = Vec::new();
    let mut current = code.clone();
    let mut steps = 0u32;
    loop {
        np_profile.push(rank_np(&current));
        let next = cb_derivative(&current);
        if next == current {
            break;
        }
        current = next;
        steps += 1;
    }
    let depth = if current.is_empty() {
        Depth::Finite(steps)
    } else {
        Depth::Omega
    };
    Fingerprint {
        isolated,
        has_cantor,
        depth,
        np_profile,
    }
}

/// Classification comparison on the decidable fragment.
///
/// Purely finite codes are compared exactly (boundary, genus and the marked
/// multiset form a complete invariant there). Otherwise the comparison is
/// sound but may return `Inconclusive`: `Homeomorphic` is only claimed for
/// syntactically identical normalized codes.
pub fn compare(a: &SurfaceDesc, b: &SurfaceDesc) -> Comparison {
    let same_bg = a.boundary == b.boundary && a.genus == b.genus;
    if a.code.is_purely_finite() && b.code.is_purely_finite() {
        return if same_bg && a.code == b.code {
            Comparison::Homeomorphic
        } else {
            Comparison::Distinct
        };
    }
    if !same_bg || fingerprint(&a.code) != fingerprint(&b.code) {
        return Comparison::Distinct;
    }
    if a.code == b.code {
        Comparison::Homeomorphic
    } else {
        Comparison::Inconclusive
    }
}

fn parse_mark(tok: &str) -> Result<bool, EndSpaceError> {
    match tok.trim() {
        "np" => Ok(true),
        "p" => Ok(false),
        other => Err(EndSpaceError::BadLiteral(other.to_string())),
    }
}

/// Parses the code literal grammar:
/// `finite:np,np,p` | `cantor:np` | `omega:p>p` (tail mark `>` limit mark),
/// named surface keywords, or `sn:<k>`. Components may be joined with `+`.
pub fn parse_code(text: &str) -> Result<EndSpaceCode, EndSpaceError> {
    let mut components = Vec::new();
    for part in text.split('+') {
        let part = part.trim();
        if let Some(name) = NamedSurface::parse(part) {
            components.extend_from_slice(named_code(name).components());
            continue;
        }
        let (kind, rest) = part
            .split_once(':')
            .ok_or_else(|| EndSpaceError::BadLiteral(part.to_string()))?;
        match kind.trim() {
            "finite" => {
                let rest = rest.trim();
                if !rest.is_empty() {
                    for tok in rest.split(',') {
                        components.push(Component::IsolatedEnd {
                            np: parse_mark(tok)?,
                        });
                    }
                }
            }
            "cantor" => components.push(Component::CantorBlock {
                np: parse_mark(rest)?,
            }),
            "omega" => {
                let (tail, limit) = rest
                    .split_once('>')
                    .ok_or_else(|| EndSpaceError::BadLiteral(part.to_string()))?;
                components.push(Component::OmegaChain {
                    tail_np: parse_mark(tail)?,
                    limit_np: parse_mark(limit)?,
                });
            }
            "sn" => {
                let k: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|_| EndSpaceError::BadLiteral(part.to_string()))?;
                components.extend_from_slice(sn_code(k).components());
            }
            _ => return Err(EndSpaceError::BadLiteral(part.to_string())),
        }
    }
    Ok(EndSpaceCode::new(components))
}
