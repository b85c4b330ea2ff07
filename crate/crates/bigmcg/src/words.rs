//! Words of signed generators, their grammar, free reduction, curve-image
//! rewriting, and the layered equality verdicts.
//!
//! Equality of words is a semi-decision over four exact shadows, checked in
//! the order ends, flux, homology, atlas. `Verified` is always relative to
//! the window: the two words agree on every observable the window reaches,
//! which is the strongest check the identity chains themselves use.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{parse_curve, Atlas, CurveId, Family, TableGen};
use crate::homology::{self, BasisIndex, H1Vector};

/// A group generator: a Dehn twist about an atlas curve, an adjacent handle
/// shift, the rotation, or one of the four involutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Twist(CurveId),
    Shift { from: u32, to: u32 },
    Rot,
    Rho1,
    Rho2,
    Tau1,
    Tau2,
}

impl Generator {
    /// Table form of a non-twist generator.
    pub fn table_gen(&self) -> Option<TableGen> {
        match *self {
            Generator::Twist(_) => None,
            Generator::Shift { from, to } => Some(TableGen::Shift { from, to }),
            Generator::Rot => Some(TableGen::Rot),
            Generator::Rho1 => Some(TableGen::Rho1),
            Generator::Rho2 => Some(TableGen::Rho2),
            Generator::Tau1 => Some(TableGen::Tau1),
            Generator::Tau2 => Some(TableGen::Tau2),
        }
    }
}

/// A signed generator occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Generator,
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: Generator, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Self { gen, sign }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            sign: -self.sign,
        }
    }
}

/// A word: a sequence of signed generators. Application to curves and
/// homology is right to left, as for function composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn twist(c: CurveId) -> Self {
        Self::from_letters(vec![Letter::new(Generator::Twist(c), 1)])
    }

    pub fn gen(g: Generator) -> Self {
        Self::from_letters(vec![Letter::new(g, 1)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `w * self * w^-1`.
    pub fn conjugated_by(&self, w: &Word) -> Word {
        w.concat(self).concat(&w.inverse())
    }
}

/// Free reduction: cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &letter in w.letters() {
        if let Some(top) = stack.last() {
            if top.gen == letter.gen && top.sign == -letter.sign {
                stack.pop();
                continue;
            }
        }
        stack.push(letter);
    }
    Word::from_letters(stack)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("window and budget must be positive")]
    BadLimits,
    #[error("{0}")]
    Atlas(#[from] crate::atlas::AtlasError),
}

// ---------------------------------------------------------------------------
// Grammar:
//   word   := factor ("*" factor)*
//   factor := atom | atom "^" int | atom "^(" word ")" | "inv(" word ")"
//   atom   := "T[" fam "," int "," int "]" | "h[" int "," int "]"
//           | "R" | "rho1" | "rho2" | "tau1" | "tau2" | "1"
// `x^(w)` is the conjugation w x inv(w).
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    atlas: Atlas,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, atlas: Atlas) -> Self {
        Self {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            atlas,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, expected: u8) -> Result<(), WordError> {
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", expected as char))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn parse_int(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.bytes[start] == b'-') {
            return self.err("expected an integer");
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| WordError::Syntax {
                position: start,
                message: "bad integer".into(),
            })
    }

    fn parse_word(&mut self) -> Result<Word, WordError> {
        let mut word = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            word = word.concat(&self.parse_factor()?);
        }
        Ok(word)
    }

    fn parse_factor(&mut self) -> Result<Word, WordError> {
        if self.eat_keyword("inv(") {
            let inner = self.parse_word()?;
            self.eat(b')')?;
            return Ok(inner.inverse());
        }
        let atom = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let conj = self.parse_word()?;
                self.eat(b')')?;
                return Ok(atom.conjugated_by(&conj));
            }
            let k = self.parse_int()?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Word, WordError> {
        self.skip_ws();
        let n = self.atlas.ends();
        if self.eat_keyword("T[") {
            let start = self.pos;
            let close = self.text[self.pos..]
                .find(']')
                .map(|k| self.pos + k)
                .ok_or(WordError::Syntax {
                    position: start,
                    message: "missing ]".into(),
                })?;
            let inner = &self.text[self.pos..close];
            self.pos = close + 1;
            let mut parts = inner.splitn(2, ',');
            let fam = parts.next().unwrap_or("").trim();
            let rest = parts.next().ok_or(WordError::Syntax {
                position: start,
                message: "expected T[fam,j,i]".into(),
            })?;
            let literal = format!("{fam}[{rest}]");
            let curve = parse_curve(&literal).map_err(|_| WordError::Syntax {
                position: start,
                message: format!("unknown curve family or indices in T[{inner}]"),
            })?;
            if !self.atlas.well_formed(curve) {
                return Err(WordError::Syntax {
                    position: start,
                    message: format!("curve {curve} is malformed for {n} ends"),
                });
            }
            return Ok(Word::gen(Generator::Twist(curve)));
        }
        if self.eat_keyword("h[") {
            let start = self.pos;
            let from = self.parse_int()?;
            self.eat(b',')?;
            let to = self.parse_int()?;
            self.eat(b']')?;
            let (from, to) = (from as u32, to as u32);
            let in_range = (1..=i64::from(n)).contains(&i64::from(from))
                && (1..=i64::from(n)).contains(&i64::from(to));
            let adjacent = in_range
                && from != to
                && (self.atlas.next_end(from) == to || self.atlas.next_end(to) == from);
            if !adjacent {
                return Err(WordError::Syntax {
                    position: start,
                    message: format!("h[{from},{to}] is not an adjacent pair for {n} ends"),
                });
            }
            return Ok(Word::gen(Generator::Shift { from, to }));
        }
        if self.eat_keyword("rho1") {
            return Ok(Word::gen(Generator::Rho1));
        }
        if self.eat_keyword("rho2") {
            return Ok(Word::gen(Generator::Rho2));
        }
        if self.eat_keyword("tau1") {
            return Ok(Word::gen(Generator::Tau1));
        }
        if self.eat_keyword("tau2") {
            return Ok(Word::gen(Generator::Tau2));
        }
        if self.eat_keyword("R") {
            return Ok(Word::gen(Generator::Rot));
        }
        if self.eat_keyword("1") {
            return Ok(Word::identity());
        }
        self.err("expected an atom (T[..], h[..], R, rho1, rho2, tau1, tau2, or 1)")
    }
}

/// Parses a word in the grammar above, validating ends and adjacency
/// against the atlas.
pub fn parse(text: &str, atlas: &Atlas) -> Result<Word, WordError> {
    let mut p = Parser::new(text, *atlas);
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Ok(Word::identity());
    }
    let word = p.parse_word()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing input");
    }
    Ok(word)
}

fn render_atom(gen: &Generator) -> String {
    match gen {
        Generator::Twist(c) => {
            let fam = match c.family {
                Family::A => "a",
                Family::APrime => "a'",
                Family::B => "b",
                Family::C => "c",
                Family::D1 => "d1",
                Family::D2 => "d2",
            };
            format!("T[{fam},{},{}]", c.end, c.index)
        }
        Generator::Shift { from, to } => format!("h[{from},{to}]"),
        Generator::Rot => "R".to_string(),
        Generator::Rho1 => "rho1".to_string(),
        Generator::Rho2 => "rho2".to_string(),
        Generator::Tau1 => "tau1".to_string(),
        Generator::Tau2 => "tau2".to_string(),
    }
}

/// Renders a word in canonical form; `parse . render` is the identity.
pub fn render(w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters()
        .iter()
        .map(|l| {
            let atom = render_atom(&l.gen);
            if l.sign >= 0 {
                atom
            } else {
                format!("inv({atom})")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

// ---------------------------------------------------------------------------
// Curve-image rewriting.
// ---------------------------------------------------------------------------

/// An atlas curve or a suspended, unsimplified image of one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveTerm {
    Atlas(CurveId),
    Image(Word, Box<CurveTerm>),
}

impl CurveTerm {
    pub fn atlas(c: CurveId) -> Self {
        CurveTerm::Atlas(c)
    }

    pub fn as_atlas(&self) -> Option<CurveId> {
        match self {
            CurveTerm::Atlas(c) => Some(*c),
            CurveTerm::Image(..) => None,
        }
    }
}

impl std::fmt::Display for CurveTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveTerm::Atlas(c) => write!(f, "{c}"),
            CurveTerm::Image(w, t) => write!(f, "({})({t})", render(w)),
        }
    }
}

/// A lantern-figure axiom: an exact word pattern together with one
/// registered curve transport. Consumed by the rewriter, never derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomUse {
    pub name: &'static str,
    pub end: u32,
    pub base: u32,
    pub input: CurveId,
    pub output: CurveId,
}

impl AxiomUse {
    pub fn anchor(&self) -> String {
        format!(
            "{}: registered transport {} -> {} at end {} base {}",
            self.name, self.input, self.output, self.end, self.base
        )
    }
}

/// The first lantern move: eight twists taking `b[j,i+1]` to `d1[j,i]`.
pub fn lantern_axiom_word_1(j: u32, i: u32) -> Word {
    let t = |c: CurveId, s: i8| Letter::new(Generator::Twist(c), s);
    Word::from_letters(vec![
        t(CurveId::b(j, i + 1), 1),
        t(CurveId::a(j, i), -1),
        t(CurveId::c(j, i), 1),
        t(CurveId::a(j, i), -1),
        t(CurveId::a(j, i), 1),
        t(CurveId::a(j, i + 1), -1),
        t(CurveId::c(j, i), 1),
        t(CurveId::a(j, i + 1), -1),
    ])
}

/// The second lantern move: eight twists taking `d1[j,i]` to `d2[j,i]`.
pub fn lantern_axiom_word_2(j: u32, i: u32) -> Word {
    let t = |c: CurveId, s: i8| Letter::new(Generator::Twist(c), s);
    Word::from_letters(vec![
        t(CurveId::b(j, i + 2), 1),
        t(CurveId::a(j, i), -1),
        t(CurveId::c(j, i + 1), 1),
        t(CurveId::a(j, i), -1),
        t(CurveId::a(j, i + 2), 1),
        t(CurveId::a(j, i), -1),
        t(CurveId::b(j, i + 2), 1),
        t(CurveId::a(j, i), -1),
    ])
}

/// If the next eight letters to apply are a registered lantern word whose
/// transported curve is `base`, returns the consumed length and the result.
fn match_axiom(remaining: &[Letter], base: CurveId) -> Option<(usize, AxiomUse)> {
    if remaining.len() < 8 {
        return None;
    }
    let tail = &remaining[remaining.len() - 8..];
    // Identify candidate parameters from the leading letter of the block.
    let Letter {
        gen: Generator::Twist(lead),
        sign: 1,
    } = tail[0]
    else {
        return None;
    };
    if lead.family == Family::B && lead.index >= 2 {
        let (j, i) = (lead.end, lead.index - 1);
        if base == CurveId::b(j, i + 1) && tail == lantern_axiom_word_1(j, i).letters() {
            return Some((
                8,
                AxiomUse {
                    name: "lantern-first-diagonal",
                    end: j,
                    base: i,
                    input: base,
                    output: CurveId::d1(j, i),
                },
            ));
        }
        let (j2, i2) = (lead.end, lead.index.saturating_sub(2));
        if i2 >= 1 && base == CurveId::d1(j2, i2) && tail == lantern_axiom_word_2(j2, i2).letters()
        {
            return Some((
                8,
                AxiomUse {
                    name: "lantern-second-diagonal",
                    end: j2,
                    base: i2,
                    input: base,
                    output: CurveId::d2(j2, i2),
                },
            ));
        }
    }
    None
}

#[derive(Debug, Clone)]
enum RewriteState {
    Reduced(CurveId),
    Suspended { pending: Vec<Letter>, base: CurveId },
}

fn letter_twist(letter: &Letter) -> Option<(CurveId, i8)> {
    match letter.gen {
        Generator::Twist(c) => Some((c, letter.sign)),
        _ => None,
    }
}

/// Result of a traced rewrite.
#[derive(Debug, Clone)]
pub struct RewriteOutcome {
    pub term: CurveTerm,
    pub axioms: Vec<AxiomUse>,
    pub steps: u64,
}

/// Applies `w` to a curve term, letters right to left, with the
/// deterministic rule order: lantern axiom block, disjointness, table
/// lookup, braid transport, push-through, suspension. `budget` bounds the
/// number of rewriting steps; exhausting it suspends the remainder.
pub fn curve_image_traced(
    atlas: &Atlas,
    w: &Word,
    term: &CurveTerm,
    budget: u64,
) -> RewriteOutcome {
    // Flatten the input term into pending letters over an atlas base.
    let mut pending: Vec<Letter> = Vec::new();
    let mut cursor = term;
    loop {
        match cursor {
            CurveTerm::Atlas(c) => {
                let mut all = w.letters().to_vec();
                all.extend(pending.iter().copied());
                return rewrite(atlas, all, *c, budget);
            }
            CurveTerm::Image(inner, t) => {
                pending.extend(inner.letters().iter().copied());
                cursor = t;
            }
        }
    }
}

fn rewrite(
    atlas: &Atlas,
    mut remaining: Vec<Letter>,
    start: CurveId,
    budget: u64,
) -> RewriteOutcome {
    let mut state = RewriteState::Reduced(start);
    let mut axioms = Vec::new();
    let mut steps = 0u64;

    while !remaining.is_empty() {
        if steps >= budget {
            break;
        }
        steps += 1;

        // Rule 0: a registered lantern block, only on fully reduced terms.
        if let RewriteState::Reduced(base) = state {
            if let Some((consumed, axiom)) = match_axiom(&remaining, base) {
                let at = remaining.len() - consumed;
                remaining.truncate(at);
                state = RewriteState::Reduced(axiom.output);
                axioms.push(axiom);
                continue;
            }
        }

        let letter = remaining.pop().expect("nonempty");
        state = match state {
            RewriteState::Reduced(base) => match letter_twist(&letter) {
                Some((x, _)) => {
                    if atlas.intersection(x, base) == Ok(0) {
                        RewriteState::Reduced(base)
                    } else {
                        RewriteState::Suspended {
                            pending: vec![letter],
                            base,
                        }
                    }
                }
                None => {
                    let g = letter.gen.table_gen().expect("non-twist");
                    match atlas.generator_image(g, letter.sign, base) {
                        Some(image) => RewriteState::Reduced(image),
                        None => RewriteState::Suspended {
                            pending: vec![letter],
                            base,
                        },
                    }
                }
            },
            RewriteState::Suspended { mut pending, base } => {
                match letter_twist(&letter) {
                    Some((x, sign)) => {
                        // Braid transport: T_x^s T_y^s (x) = y when i(x,y) = 1.
                        if pending.len() == 1 {
                            if let Some((y, s0)) = letter_twist(&pending[0]) {
                                if s0 == sign && base == x && atlas.intersection(x, y) == Ok(1) {
                                    state = RewriteState::Reduced(y);
                                    continue;
                                }
                            }
                        }
                        // Disjointness from the whole support, twists only.
                        let all_twists = pending.iter().all(|l| letter_twist(l).is_some());
                        let disjoint = all_twists
                            && atlas.intersection(x, base) == Ok(0)
                            && pending.iter().all(|l| {
                                let (y, _) = letter_twist(l).expect("twist");
                                atlas.intersection(x, y) == Ok(0)
                            });
                        if disjoint {
                            RewriteState::Suspended { pending, base }
                        } else {
                            pending.insert(0, letter);
                            RewriteState::Suspended { pending, base }
                        }
                    }
                    None => {
                        // Push a table generator through the suspension via
                        // the conjugation property when every piece maps.
                        let g = letter.gen.table_gen().expect("non-twist");
                        let mapped_base = atlas.generator_image(g, letter.sign, base);
                        let mapped: Option<Vec<Letter>> = pending
                            .iter()
                            .map(|l| match letter_twist(l) {
                                Some((y, s)) => atlas
                                    .generator_image(g, letter.sign, y)
                                    .map(|gy| Letter::new(Generator::Twist(gy), s)),
                                None => None,
                            })
                            .collect();
                        match (mapped_base, mapped) {
                            (Some(new_base), Some(new_pending)) => RewriteState::Suspended {
                                pending: new_pending,
                                base: new_base,
                            },
                            _ => {
                                pending.insert(0, letter);
                                RewriteState::Suspended { pending, base }
                            }
                        }
                    }
                }
            }
        };
    }

    // Any unconsumed letters stay suspended in front.
    let term = match state {
        RewriteState::Reduced(c) => {
            if remaining.is_empty() {
                CurveTerm::Atlas(c)
            } else {
                CurveTerm::Image(Word::from_letters(remaining), Box::new(CurveTerm::Atlas(c)))
            }
        }
        RewriteState::Suspended { mut pending, base } => {
            let mut letters = remaining;
            letters.append(&mut pending);
            CurveTerm::Image(
                Word::from_letters(letters),
                Box::new(CurveTerm::Atlas(base)),
            )
        }
    };
    RewriteOutcome {
        term,
        axioms,
        steps,
    }
}

/// Untraced curve image.
pub fn curve_image(atlas: &Atlas, w: &Word, term: &CurveTerm, budget: u64) -> CurveTerm {
    curve_image_traced(atlas, w, term, budget).term
}

/// Default rewriting budget for a word.
pub fn default_budget(w: &Word) -> u64 {
    64 + 4 * w.len() as u64
}

/// `T_{w(c)}` when the image fully reduces, else the literal conjugate
/// `w T_c w^-1`; the two are equal by the conjugation property.
pub fn conjugate_twist(atlas: &Atlas, w: &Word, c: CurveId) -> Word {
    let image = curve_image(atlas, w, &CurveTerm::atlas(c), default_budget(w));
    match image.as_atlas() {
        Some(x) => Word::twist(x),
        None => Word::twist(c).conjugated_by(w),
    }
}

// ---------------------------------------------------------------------------
// Layered equality.
// ---------------------------------------------------------------------------

/// The observable at which a refutation was found; re-evaluating both sides
/// on the witness reproduces the disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    EndImage {
        end: u32,
        lhs: u32,
        rhs: u32,
    },
    FluxCoord {
        end: u32,
        lhs: i64,
        rhs: i64,
    },
    Basis {
        index: BasisIndex,
        lhs: H1Vector,
        rhs: H1Vector,
    },
    Curve {
        curve: CurveId,
        lhs: CurveId,
        rhs: CurveId,
    },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::EndImage { end, lhs, rhs } => {
                write!(f, "end {end} maps to {lhs} vs {rhs}")
            }
            Witness::FluxCoord { end, lhs, rhs } => {
                write!(f, "flux at end {end} is {lhs} vs {rhs}")
            }
            Witness::Basis { index, lhs, rhs } => {
                write!(f, "basis {index} maps to {lhs} vs {rhs}")
            }
            Witness::Curve { curve, lhs, rhs } => {
                write!(f, "curve {curve} maps to {lhs} vs {rhs}")
            }
        }
    }
}

/// Outcome of a layered equality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Verified { window: u32 },
    Refuted(Witness),
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Verified { window } => write!(f, "Verified(window {window})"),
            Verdict::Refuted(w) => write!(f, "Refuted: {w}"),
            Verdict::Unknown { reason } => write!(f, "Unknown: {reason}"),
        }
    }
}

fn basis_within(atlas: &Atlas, window: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for end in 1..=atlas.ends() {
        for idx in 1..=window {
            out.push(BasisIndex::alpha(end, idx));
            out.push(BasisIndex::beta(end, idx));
        }
    }
    for end in 1..atlas.ends() {
        out.push(BasisIndex::delta(end));
    }
    out
}

fn twist_curves(w: &Word) -> Option<Vec<CurveId>> {
    w.letters()
        .iter()
        .map(|l| match l.gen {
            Generator::Twist(c) => Some(c),
            _ => None,
        })
        .collect()
}

/// Basis vectors a twist-only word can move: those pairing nonzero with a
/// letter class. Everything else is fixed by every transvection.
fn basis_candidates(atlas: &Atlas, curves: &[CurveId], window: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for &c in curves {
        let beta_curve = c.family == Family::B;
        for (h, _) in atlas.carrier(c) {
            if h.idx > window {
                continue;
            }
            out.push(if beta_curve {
                BasisIndex::alpha(h.end, h.idx)
            } else {
                BasisIndex::beta(h.end, h.idx)
            });
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Atlas curves a twist-only word can move: those meeting a letter curve.
fn curve_candidates(atlas: &Atlas, curves: &[CurveId], window: u32) -> Vec<CurveId> {
    let mut out = Vec::new();
    let mut push = |c: CurveId| {
        if atlas.well_formed(c) && c.index <= window {
            out.push(c);
        }
    };
    for &c in curves {
        if c.family == Family::B {
            let (end, idx) = (c.end, c.index);
            push(CurveId::a(end, idx));
            push(CurveId::a_prime(end, idx));
            push(CurveId::c(end, idx));
            if idx >= 1 {
                push(CurveId::c(end, idx - 1));
            }
            if idx == 1 {
                push(CurveId::c(atlas.prev_end(end), 0));
            }
            // d1 carries handles {base, base+2}, d2 all three.
            push(CurveId::d1(end, idx));
            if idx >= 3 {
                push(CurveId::d1(end, idx - 2));
            }
            for base in idx.saturating_sub(2)..=idx {
                if base >= 1 {
                    push(CurveId::d2(end, base));
                }
            }
        } else {
            for (h, _) in atlas.carrier(c) {
                push(CurveId::b(h.end, h.idx));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A flux probe index that every letter of the word keeps away from the
/// core: beyond the deepest twist and the total downward drift the shift
/// letters can cause.
fn flux_probe_margin(w: &Word) -> u32 {
    let mut deepest_twist = 0u32;
    let mut shift_letters = 0u32;
    for l in w.letters() {
        match l.gen {
            Generator::Twist(c) => deepest_twist = deepest_twist.max(c.index),
            Generator::Shift { .. } | Generator::Tau2 => shift_letters += 1,
            _ => {}
        }
    }
    deepest_twist + shift_letters
}

/// Shadow equality up to a window: end permutations, flux vectors, homology
/// actions on basis vectors within the window, and atlas images wherever
/// both sides fully reduce. `Verified` is relative to the window.
pub fn equal_up_to(
    atlas: &Atlas,
    w1: &Word,
    w2: &Word,
    window: u32,
    budget: u64,
) -> Result<Verdict, WordError> {
    if window == 0 || budget == 0 {
        return Err(WordError::BadLimits);
    }
    let mut unknown: Option<String> = None;

    // Layer 1: ends.
    let p1 = crate::flux::end_permutation(atlas, w1);
    let p2 = crate::flux::end_permutation(atlas, w2);
    if p1 != p2 {
        for end in 1..=atlas.ends() {
            if p1.image(end) != p2.image(end) {
                return Ok(Verdict::Refuted(Witness::EndImage {
                    end,
                    lhs: p1.image(end),
                    rhs: p2.image(end),
                }));
            }
        }
    }

    // Layer 2: flux, defined on pure words only. The realizing cut sits
    // beyond every twist in either word, where flux is index-independent.
    if p1.is_identity() {
        let probe = window + flux_probe_margin(w1).max(flux_probe_margin(w2)) + 2;
        let f1 = crate::flux::flux_vector(atlas, w1, probe);
        let f2 = crate::flux::flux_vector(atlas, w2, probe);
        match (f1, f2) {
            (Some(f1), Some(f2)) => {
                for end in 1..=atlas.ends() {
                    let (a, b) = (f1.coord(end), f2.coord(end));
                    if a != b {
                        return Ok(Verdict::Refuted(Witness::FluxCoord {
                            end,
                            lhs: a,
                            rhs: b,
                        }));
                    }
                }
            }
            _ => unknown = Some("flux undefined within budget (suspended curve image)".to_string()),
        }
    }

    // Twist-only word pairs move only observables meeting their letters;
    // everything else is fixed on both sides and is skipped.
    let both_twists = match (twist_curves(w1), twist_curves(w2)) {
        (Some(mut a), Some(b)) => {
            a.extend(b);
            Some(a)
        }
        _ => None,
    };

    // Layer 3: homology on the windowed basis.
    let basis = match &both_twists {
        Some(curves) => basis_candidates(atlas, curves, window),
        None => basis_within(atlas, window),
    };
    for ix in basis {
        let x = H1Vector::basis(ix);
        let lhs = homology::act(atlas, w1, &x, window);
        let rhs = homology::act(atlas, w2, &x, window);
        match (lhs, rhs) {
            (Ok(lhs), Ok(rhs)) => {
                if lhs != rhs {
                    return Ok(Verdict::Refuted(Witness::Basis {
                        index: ix,
                        lhs,
                        rhs,
                    }));
                }
            }
            _ => unknown = Some("homology support escaped the window".to_string()),
        }
    }

    // Layer 4: atlas images wherever both sides fully reduce.
    let curves = match &both_twists {
        Some(curves) => curve_candidates(atlas, curves, window),
        None => crate::atlas::curves_up_to(atlas, window),
    };
    for c in curves {
        let t = CurveTerm::atlas(c);
        let lhs = curve_image(atlas, w1, &t, budget);
        let rhs = curve_image(atlas, w2, &t, budget);
        if let (Some(lhs), Some(rhs)) = (lhs.as_atlas(), rhs.as_atlas()) {
            if lhs != rhs {
                return Ok(Verdict::Refuted(Witness::Curve { curve: c, lhs, rhs }));
            }
        }
    }

    Ok(match unknown {
        Some(reason) => Verdict::Unknown { reason },
        None => Verdict::Verified { window },
    })
}

/// Truncated triviality: shadow equality with the empty word.
pub fn trivial_up_to(atlas: &Atlas, w: &Word, window: u32) -> Result<Verdict, WordError> {
    equal_up_to(
        atlas,
        w,
        &Word::identity(),
        window,
        default_budget(w).max(64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atlas() -> Atlas {
        Atlas::new(4).unwrap()
    }

    fn w(text: &str) -> Word {
        parse(text, &atlas()).unwrap()
    }

    #[test]
    fn parse_grammar_examples() {
        let t = w("T[b,1,1]");
        assert_eq!(t.len(), 1);
        assert_eq!(t.letters()[0].gen, Generator::Twist(CurveId::b(1, 1)));
        assert_eq!(t.letters()[0].sign, 1);

        let expanded = w("inv(h[1,2])*R^3");
        assert_eq!(expanded.len(), 4);
        assert_eq!(expanded.letters()[0].sign, -1);

        assert!(matches!(
            parse("T[q,1,1]", &atlas()),
            Err(WordError::Syntax { .. })
        ));
        // Shifts must be cyclically adjacent; the wraparound pair is fine.
        assert!(parse("h[1,3]", &atlas()).is_err());
        assert!(parse("h[4,1]", &atlas()).is_ok());
        assert!(parse("h[1,4]", &atlas()).is_ok());
        assert!(parse("h[1,5]", &atlas()).is_err());
    }

    #[test]
    fn parse_reports_positions() {
        let err = parse("R*T[q,1,1]", &atlas()).unwrap_err();
        match err {
            WordError::Syntax { position, .. } => assert!(position >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conjugation_sugar() {
        // x^(w) = w x inv(w)
        let sugar = w("T[a,1,1]^(h[1,2])");
        let manual = w("h[1,2]*T[a,1,1]*inv(h[1,2])");
        assert_eq!(sugar, manual);
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "T[a,1,1]",
            "inv(T[a',2,3])*R*rho1*tau2",
            "h[4,1]*inv(h[1,2])",
            "1",
        ] {
            let word = w(text);
            let rendered = render(&word);
            assert_eq!(parse(&rendered, &atlas()).unwrap(), word);
        }
    }

    #[test]
    fn free_reduction() {
        let word = w("R*inv(R)*T[a,1,1]");
        assert_eq!(free_reduce(&word), w("T[a,1,1]"));
        let cancel = w("h[1,2]*T[b,2,2]").concat(&w("h[1,2]*T[b,2,2]").inverse());
        assert!(free_reduce(&cancel).is_empty());
        let rn = w("R^4");
        assert_eq!(free_reduce(&rn), rn);
        // Idempotent.
        let once = free_reduce(&cancel);
        assert_eq!(free_reduce(&once), once);
    }

    #[test]
    fn braid_transport_on_curves() {
        let at = atlas();
        // T_a T_b (a) = b.
        let word = w("T[a,1,1]*T[b,1,1]");
        let image = curve_image(&at, &word, &CurveTerm::atlas(CurveId::a(1, 1)), 64);
        assert_eq!(image.as_atlas(), Some(CurveId::b(1, 1)));
        // Same with both letters inverted.
        let winv = word.inverse();
        let image = curve_image(&at, &winv, &CurveTerm::atlas(CurveId::b(1, 1)), 64);
        assert_eq!(image.as_atlas(), Some(CurveId::a(1, 1)));
    }

    #[test]
    fn disjoint_twists_fix_curves() {
        let at = atlas();
        let image = curve_image(&at, &w("T[a,1,1]"), &CurveTerm::atlas(CurveId::b(2, 5)), 64);
        assert_eq!(image.as_atlas(), Some(CurveId::b(2, 5)));
    }

    #[test]
    fn shift_images_through_tables() {
        let at = atlas();
        let image = curve_image(&at, &w("h[2,3]"), &CurveTerm::atlas(CurveId::b(3, 1)), 64);
        assert_eq!(image.as_atlas(), Some(CurveId::b(3, 2)));
    }

    #[test]
    fn single_twist_on_meeting_curve_suspends() {
        let at = atlas();
        let image = curve_image(&at, &w("T[a,1,1]"), &CurveTerm::atlas(CurveId::b(1, 1)), 64);
        assert!(image.as_atlas().is_none());
        if let CurveTerm::Image(word, base) = image {
            assert_eq!(word.len(), 1);
            assert_eq!(base.as_atlas(), Some(CurveId::b(1, 1)));
        } else {
            panic!("expected suspension");
        }
    }

    #[test]
    fn lantern_axioms_consume() {
        let at = atlas();
        let p1 = lantern_axiom_word_1(2, 1);
        let out = curve_image_traced(&at, &p1, &CurveTerm::atlas(CurveId::b(2, 2)), 64);
        assert_eq!(out.term.as_atlas(), Some(CurveId::d1(2, 1)));
        assert_eq!(out.axioms.len(), 1);
        assert_eq!(out.axioms[0].name, "lantern-first-diagonal");

        // The same word fixes a[2,1] purely by disjointness rules.
        let fixed = curve_image(&at, &p1, &CurveTerm::atlas(CurveId::a(2, 1)), 64);
        assert_eq!(fixed.as_atlas(), Some(CurveId::a(2, 1)));

        let p2 = lantern_axiom_word_2(2, 1);
        let out = curve_image_traced(&at, &p2, &CurveTerm::atlas(CurveId::d1(2, 1)), 64);
        assert_eq!(out.term.as_atlas(), Some(CurveId::d2(2, 1)));
        let fixed = curve_image(&at, &p2, &CurveTerm::atlas(CurveId::a(2, 1)), 64);
        assert_eq!(fixed.as_atlas(), Some(CurveId::a(2, 1)));
    }

    #[test]
    fn suspended_terms_flatten_and_resume() {
        let at = atlas();
        // Build a suspension, then finish the braid with a second call.
        let half = curve_image(&at, &w("T[b,1,1]"), &CurveTerm::atlas(CurveId::a(1, 1)), 64);
        assert!(half.as_atlas().is_none());
        let done = curve_image(&at, &w("T[a,1,1]"), &half, 64);
        assert_eq!(done.as_atlas(), Some(CurveId::b(1, 1)));
    }

    #[test]
    fn conjugate_twist_examples() {
        let at = atlas();
        assert_eq!(
            conjugate_twist(&at, &Word::identity(), CurveId::c(1, 1)),
            Word::twist(CurveId::c(1, 1))
        );
        assert_eq!(
            conjugate_twist(&at, &w("h[1,2]"), CurveId::b(1, 1)),
            Word::twist(CurveId::b(2, 1))
        );
        assert_eq!(
            conjugate_twist(&at, &w("R"), CurveId::c(1, 0)),
            Word::twist(CurveId::c(2, 0))
        );
        // Unresolvable images fall back to the literal conjugate.
        let fallback = conjugate_twist(&at, &w("T[b,1,1]"), CurveId::a(1, 1));
        assert_eq!(fallback.len(), 3);
    }

    #[test]
    fn braid_relation_verifies() {
        let at = atlas();
        let lhs = w("T[a,1,1]*T[b,1,1]*T[a,1,1]");
        let rhs = w("T[b,1,1]*T[a,1,1]*T[b,1,1]");
        let verdict = equal_up_to(&at, &lhs, &rhs, 8, 256).unwrap();
        assert!(verdict.is_verified(), "{verdict}");
    }

    #[test]
    fn distinct_twists_refuted_by_transvection() {
        let at = atlas();
        let verdict = equal_up_to(&at, &w("T[a,1,1]"), &w("T[a,1,2]"), 8, 256).unwrap();
        match verdict {
            Verdict::Refuted(Witness::Basis { index, .. }) => {
                assert_eq!(index, BasisIndex::beta(1, 1));
            }
            other => panic!("expected a basis witness, got {other}"),
        }
    }

    #[test]
    fn tau_product_is_the_shift() {
        let at = atlas();
        let verdict = equal_up_to(&at, &w("tau1*tau2"), &w("h[1,2]"), 12, 512).unwrap();
        assert!(verdict.is_verified(), "{verdict}");
    }

    #[test]
    fn triviality_examples() {
        let at = atlas();
        // Commutator of twists about disjoint curves.
        let commutator = w("T[a,1,1]*T[a,2,5]*inv(T[a,1,1])*inv(T[a,2,5])");
        assert!(trivial_up_to(&at, &commutator, 8).unwrap().is_verified());
        // A handle shift is visibly nontrivial.
        assert!(trivial_up_to(&at, &w("h[1,2]"), 8).unwrap().is_refuted());
        // A chain twist is caught by the homology layer.
        assert!(trivial_up_to(&at, &w("T[c,1,0]"), 8).unwrap().is_refuted());
    }

    #[test]
    fn refutation_transfers_to_difference_word() {
        let at = atlas();
        let w1 = w("T[a,1,1]");
        let w2 = w("T[a,1,2]");
        let verdict = equal_up_to(&at, &w1, &w2, 8, 256).unwrap();
        assert!(verdict.is_refuted());
        let difference = w1.concat(&w2.inverse());
        let verdict2 = trivial_up_to(&at, &difference, 8).unwrap();
        match (verdict, verdict2) {
            (Verdict::Refuted(Witness::Basis { .. }), Verdict::Refuted(Witness::Basis { .. })) => {}
            other => panic!("expected basis witnesses on both sides, got {other:?}"),
        }
    }

    #[test]
    fn bad_limits_error() {
        let at = atlas();
        assert_eq!(
            equal_up_to(&at, &Word::identity(), &Word::identity(), 0, 10),
            Err(WordError::BadLimits)
        );
    }
}
