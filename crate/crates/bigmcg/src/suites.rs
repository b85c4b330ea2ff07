//! Replay suites: the relation sweeps, the table-constraint checks, and the
//! identity chains behind the generating-set reductions, each reported one
//! verdict line per step.
//!
//! Anchors are the identities themselves, rendered in the word grammar, so
//! a report line is self-describing. Lantern-dependent steps consume the
//! registered figure axioms and say so in their anchor; everything else is
//! replayed through the layered equality check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atlas::{curves_up_to, Atlas, CurveId, SepClass, TableGen};
use crate::flux::{
    chain, difference_word_fixes, end_permutation, flux_vector, phi, separating_witness,
    sym_generated, Perm,
};
use crate::homology::check_twist_formula;
use crate::words::{
    curve_image, curve_image_traced, equal_up_to, lantern_axiom_word_1, lantern_axiom_word_2,
    render, trivial_up_to, CurveTerm, Generator, Letter, Verdict, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepStatus {
    Pass,
    Fail,
    Unknown,
}

impl std::fmt::Display for StepStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepStatus::Pass => write!(f, "PASS"),
            StepStatus::Fail => write!(f, "FAIL"),
            StepStatus::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepReport {
    pub id: String,
    pub status: StepStatus,
    pub anchor: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub ends: u32,
    pub window: u32,
    pub seed: u64,
    pub steps: Vec<StepReport>,
}

impl SuiteReport {
    fn new(name: &str, atlas: &Atlas, window: u32, seed: u64) -> Self {
        Self {
            name: name.to_string(),
            ends: atlas.ends(),
            window,
            seed,
            steps: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.status == StepStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.steps.iter().any(|s| s.status == StepStatus::Fail)
    }

    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&step.status.to_string());
            out.push(' ');
            out.push_str(&step.id);
            out.push_str("  ");
            out.push_str(&step.anchor);
            if !step.detail.is_empty() {
                out.push_str("  -- ");
                out.push_str(&step.detail);
            }
            out.push('\n');
        }
        out
    }

    fn push(&mut self, id: impl Into<String>, status: StepStatus, anchor: String, detail: String) {
        self.steps.push(StepReport {
            id: id.into(),
            status,
            anchor,
            detail,
        });
    }

    fn equal_step(
        &mut self,
        atlas: &Atlas,
        id: impl Into<String>,
        lhs: &Word,
        rhs: &Word,
        window: u32,
    ) {
        let anchor = format!("{} = {}", render(lhs), render(rhs));
        let budget = 64 + 8 * (lhs.len() + rhs.len()) as u64;
        match equal_up_to(atlas, lhs, rhs, window, budget) {
            Ok(Verdict::Verified { .. }) => self.push(id, StepStatus::Pass, anchor, String::new()),
            Ok(Verdict::Refuted(w)) => {
                self.push(id, StepStatus::Fail, anchor, format!("refuted: {w}"))
            }
            Ok(Verdict::Unknown { reason }) => self.push(id, StepStatus::Unknown, anchor, reason),
            Err(e) => self.push(id, StepStatus::Fail, anchor, e.to_string()),
        }
    }

    fn trivial_step(&mut self, atlas: &Atlas, id: impl Into<String>, w: &Word, window: u32) {
        let anchor = format!("{} = 1", render(w));
        match trivial_up_to(atlas, w, window) {
            Ok(Verdict::Verified { .. }) => self.push(id, StepStatus::Pass, anchor, String::new()),
            Ok(Verdict::Refuted(witness)) => {
                self.push(id, StepStatus::Fail, anchor, format!("refuted: {witness}"))
            }
            Ok(Verdict::Unknown { reason }) => self.push(id, StepStatus::Unknown, anchor, reason),
            Err(e) => self.push(id, StepStatus::Fail, anchor, e.to_string()),
        }
    }

    fn bool_step(
        &mut self,
        id: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
    ) {
        let status = if ok {
            StepStatus::Pass
        } else {
            StepStatus::Fail
        };
        self.push(id, status, anchor.into(), detail.into());
    }
}

/// Names in the suite catalog.
pub const CATALOG: &[&str] = &[
    "braid",
    "commute",
    "twist-formula",
    "tables",
    "lemma1",
    "lemma2",
    "lemma3",
    "involutions",
    "finiteset",
    "flux",
    "genus-witness",
];

/// Runs one catalog suite at the given window. `seed` feeds the randomized
/// sweeps and is recorded in the report.
pub fn run_suite(atlas: &Atlas, name: &str, window: u32, seed: u64) -> Result<SuiteReport, String> {
    match name {
        "braid" => Ok(braid_suite(atlas, window, seed)),
        "commute" => Ok(commute_suite(atlas, window, seed)),
        "twist-formula" => Ok(twist_formula_suite(atlas, window, seed)),
        "tables" => Ok(tables_suite(atlas, window, seed)),
        "lemma1" => Ok(lemma1_suite(atlas, window, seed)),
        "lemma2" => Ok(lemma2_suite(atlas, window, seed)),
        "lemma3" => Ok(lemma3_suite(atlas, window, seed)),
        "involutions" => Ok(involutions_suite(atlas, window, seed)),
        "finiteset" => Ok(finiteset_suite(atlas, window, seed)),
        "flux" => Ok(flux_suite(atlas, window, seed)),
        "genus-witness" => Ok(genus_witness_suite(atlas, window, seed)),
        other => Err(format!(
            "unknown suite {other:?}; catalog: {}",
            CATALOG.join(", ")
        )),
    }
}

fn tw(c: CurveId) -> Word {
    Word::twist(c)
}

fn ti(c: CurveId) -> Word {
    Word::twist(c).inverse()
}

fn prod(parts: &[Word]) -> Word {
    let mut out = Word::identity();
    for p in parts {
        out = out.concat(p);
    }
    out
}

fn shift_word(from: u32, to: u32) -> Word {
    Word::gen(Generator::Shift { from, to })
}

/// All unordered atlas pairs with the given intersection number.
fn pairs_with_intersection(atlas: &Atlas, window: u32, value: u64) -> Vec<(CurveId, CurveId)> {
    let curves = curves_up_to(atlas, window);
    let mut out = Vec::new();
    for (i, &x) in curves.iter().enumerate() {
        for &y in &curves[i + 1..] {
            if atlas.intersection(x, y) == Ok(value) {
                out.push((x, y));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Relation sweeps.
// ---------------------------------------------------------------------------

fn braid_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("braid", atlas, window, seed);
    for (x, y) in pairs_with_intersection(atlas, window, 1) {
        let txy = tw(x).concat(&tw(y));
        let lhs = txy.concat(&tw(x));
        let rhs = tw(y).concat(&tw(x)).concat(&tw(y));
        let budget = 128;
        let word_ok = matches!(
            equal_up_to(atlas, &lhs, &rhs, window, budget),
            Ok(Verdict::Verified { .. })
        );
        let fwd = curve_image(atlas, &txy, &CurveTerm::atlas(x), budget).as_atlas() == Some(y);
        let tyx = tw(y).concat(&tw(x));
        let bwd = curve_image(atlas, &tyx, &CurveTerm::atlas(y), budget).as_atlas() == Some(x);
        let ok = word_ok && fwd && bwd;
        report.bool_step(
            format!("braid/{x}~{y}"),
            format!("T{x} T{y} T{x} = T{y} T{x} T{y}; transports {x}->{y}, {y}->{x}"),
            ok,
            if ok {
                String::new()
            } else {
                format!("word_ok={word_ok} fwd={fwd} bwd={bwd}")
            },
        );
    }
    report
}

fn commute_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("commute", atlas, window, seed);
    let curves = curves_up_to(atlas, window);
    for (i, &x) in curves.iter().enumerate() {
        let mut checked = 0usize;
        let mut failure = None;
        for &y in &curves[i..] {
            if atlas.intersection(x, y) != Ok(0) {
                continue;
            }
            checked += 1;
            let lhs = tw(x).concat(&tw(y));
            let rhs = tw(y).concat(&tw(x));
            match equal_up_to(atlas, &lhs, &rhs, window, 64) {
                Ok(Verdict::Verified { .. }) => {}
                other => {
                    failure = Some(format!("{y}: {other:?}"));
                    break;
                }
            }
        }
        report.bool_step(
            format!("commute/{x}"),
            format!("T{x} commutes with every disjoint atlas twist ({checked} partners)"),
            failure.is_none(),
            failure.unwrap_or_default(),
        );
    }
    report
}

fn twist_formula_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("twist-formula", atlas, window, seed);
    let curves = curves_up_to(atlas, window);
    for k in -5i64..=5 {
        let mut checked = 0usize;
        let mut failure = None;
        'outer: for &a in &curves {
            for &b in &curves {
                checked += 1;
                if !check_twist_formula(atlas, a, b, k, window) {
                    failure = Some(format!("pair ({a},{b})"));
                    break 'outer;
                }
            }
        }
        report.bool_step(
            format!("twist-formula/k={k}"),
            format!("|<T_a^k [b], [b]>| = |k| i(a,b)^2 on {checked} ordered pairs"),
            failure.is_none(),
            failure.unwrap_or_default(),
        );
    }
    report
}

// ---------------------------------------------------------------------------
// Table constraints.
// ---------------------------------------------------------------------------

fn tables_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("tables", atlas, window, seed);
    let n = atlas.ends();
    let curves = curves_up_to(atlas, window);

    let squares = [
        ("rho1-squared", TableGen::Rho1),
        ("rho2-squared", TableGen::Rho2),
        ("tau1-squared", TableGen::Tau1),
        ("tau2-squared", TableGen::Tau2),
    ];
    for (id, g) in squares {
        let mut failure = None;
        for &c in &curves {
            if let Some(mid) = atlas.generator_image(g, 1, c) {
                if let Some(back) = atlas.generator_image(g, 1, mid) {
                    if back != c {
                        failure = Some(format!("{c} -> {mid} -> {back}"));
                        break;
                    }
                }
            }
        }
        report.bool_step(
            format!("tables/{id}"),
            format!("{g:?} applied twice is the identity on the atlas"),
            failure.is_none(),
            failure.unwrap_or_default(),
        );
    }

    let mut failure = None;
    for &c in &curves {
        let mut cur = c;
        let mut ok = true;
        for _ in 0..n {
            match atlas.generator_image(TableGen::Rot, 1, cur) {
                Some(next) => cur = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || cur != c {
            failure = Some(format!("{c} has rotation orbit failure"));
            break;
        }
    }
    report.bool_step(
        "tables/rot-order-n",
        format!("R^{n} is the identity on the atlas"),
        failure.is_none(),
        failure.unwrap_or_default(),
    );

    let mut failure = None;
    for &c in &curves {
        let lhs = atlas
            .generator_image(TableGen::Rho2, 1, c)
            .and_then(|m| atlas.generator_image(TableGen::Rho1, 1, m));
        if lhs != atlas.generator_image(TableGen::Rot, 1, c) {
            failure = Some(format!("{c}"));
            break;
        }
    }
    report.bool_step(
        "tables/rho1-rho2-is-rot",
        "the composed table rho1 . rho2 equals the R table".to_string(),
        failure.is_none(),
        failure.unwrap_or_default(),
    );

    let h12 = TableGen::Shift { from: 1, to: 2 };
    let mut failure = None;
    for &c in &curves {
        if c.end > 2 {
            continue;
        }
        let lhs = atlas
            .generator_image(TableGen::Tau2, 1, c)
            .and_then(|m| atlas.generator_image(TableGen::Tau1, 1, m));
        if lhs != atlas.generator_image(h12, 1, c) {
            failure = Some(format!("{c}"));
            break;
        }
    }
    report.bool_step(
        "tables/tau1-tau2-is-shift",
        "the composed table tau1 . tau2 equals the h[1,2] table on ends 1 and 2".to_string(),
        failure.is_none(),
        failure.unwrap_or_default(),
    );

    // Far ends are fixed by tau1 . tau2 wherever the carrier avoids the
    // swapped ends (the wraparound bridge touches end 1 and is exempt).
    let mut failure = None;
    for &c in &curves {
        let carrier_far = atlas.carrier(c).iter().all(|(h, _)| h.end >= 3);
        if !carrier_far {
            continue;
        }
        let lhs = atlas
            .generator_image(TableGen::Tau2, 1, c)
            .and_then(|m| atlas.generator_image(TableGen::Tau1, 1, m));
        if lhs != Some(c) {
            failure = Some(format!("{c}"));
            break;
        }
    }
    report.bool_step(
        "tables/tau1-tau2-fixes-far-ends",
        "tau1 . tau2 fixes atlas curves carried entirely on ends >= 3".to_string(),
        failure.is_none(),
        failure.unwrap_or_default(),
    );

    report
}

// ---------------------------------------------------------------------------
// The first reduction chain: conjugating the seed difference-twists across
// ends with rho1, R, and the shift.
// ---------------------------------------------------------------------------

fn lemma1_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma1", atlas, window, seed);
    let n = atlas.ends();
    let h12 = shift_word(1, 2);
    let rot = Word::gen(Generator::Rot);
    let rho1 = Word::gen(Generator::Rho1);

    // s1: the rho1 conjugate of A[1,1] ~A[2,1].
    let lhs = prod(&[tw(CurveId::a_prime(1, 1)), ti(CurveId::a_prime(n, 1))]);
    let rhs = prod(&[tw(CurveId::a(1, 1)), ti(CurveId::a(2, 1))]).conjugated_by(&rho1);
    report.equal_step(atlas, "lemma1/s1", &lhs, &rhs, window);

    // s2, s3: push across the strip.
    let lhs = prod(&[tw(CurveId::a(2, 1)), ti(CurveId::a_prime(n, 1))]);
    let rhs = prod(&[tw(CurveId::a_prime(1, 1)), ti(CurveId::a_prime(n, 1))]).conjugated_by(&h12);
    report.equal_step(atlas, "lemma1/s2", &lhs, &rhs, window);

    let lhs = prod(&[tw(CurveId::a(2, 2)), ti(CurveId::a_prime(n, 1))]);
    let rhs = prod(&[tw(CurveId::a(2, 1)), ti(CurveId::a_prime(n, 1))]).conjugated_by(&h12);
    report.equal_step(atlas, "lemma1/s3", &lhs, &rhs, window);

    // s4: combine into the same-end difference.
    let lhs = prod(&[
        tw(CurveId::a(2, 1)),
        ti(CurveId::a_prime(n, 1)),
        tw(CurveId::a_prime(n, 1)),
        ti(CurveId::a(2, 2)),
    ]);
    let rhs = prod(&[tw(CurveId::a(2, 1)), ti(CurveId::a(2, 2))]);
    report.equal_step(atlas, "lemma1/s4", &lhs, &rhs, window);

    // s5: the through-curve family.
    let lhs = prod(&[tw(CurveId::b(2, 1)), ti(CurveId::b(2, 2))]);
    let rhs = prod(&[tw(CurveId::b(1, 1)), ti(CurveId::b(2, 1))]).conjugated_by(&h12);
    report.equal_step(atlas, "lemma1/s5", &lhs, &rhs, window);

    // s6, s7: rotate the bridge differences.
    let lhs = prod(&[tw(CurveId::c(2, 0)), ti(CurveId::c(3, 0))]);
    let rhs = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(2, 0))]).conjugated_by(&rot);
    report.equal_step(atlas, "lemma1/s6", &lhs, &rhs, window);

    let lhs = prod(&[
        tw(CurveId::c(1, 0)),
        ti(CurveId::c(2, 0)),
        tw(CurveId::c(2, 0)),
        ti(CurveId::c(3, 0)),
    ]);
    let rhs = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(3, 0))]);
    report.equal_step(atlas, "lemma1/s7", &lhs, &rhs, window);

    // s8: shift the combined difference; for three ends the wraparound
    // bridge moves too and the displayed identity carries a correction.
    let base = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(3, 0))]);
    let lhs = prod(&[tw(CurveId::c(2, 1)), ti(CurveId::c(3, 0))]);
    if n == 3 {
        let rhs = base
            .conjugated_by(&h12)
            .concat(&prod(&[tw(CurveId::c(2, 0)), ti(CurveId::c(3, 0))]));
        report.equal_step(atlas, "lemma1/s8-three-ends", &lhs, &rhs, window);
    } else {
        let rhs = base.conjugated_by(&h12);
        report.equal_step(atlas, "lemma1/s8", &lhs, &rhs, window);
    }

    // s9, s10: finish on the attracting end.
    let lhs = prod(&[
        tw(CurveId::c(1, 0)),
        ti(CurveId::c(3, 0)),
        tw(CurveId::c(3, 0)),
        ti(CurveId::c(2, 1)),
    ]);
    let rhs = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(2, 1))]);
    report.equal_step(atlas, "lemma1/s9", &lhs, &rhs, window);

    let lhs = prod(&[tw(CurveId::c(2, 1)), ti(CurveId::c(2, 2))]);
    let rhs = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(2, 1))]).conjugated_by(&h12);
    report.equal_step(atlas, "lemma1/s10", &lhs, &rhs, window);

    report
}

// ---------------------------------------------------------------------------
// The lantern chain: from difference twists to single twists on one end.
// ---------------------------------------------------------------------------

fn lemma2_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma2", atlas, window, seed);
    let h12 = shift_word(1, 2);
    let rot = Word::gen(Generator::Rot);
    // Everything happens on end 2, base position 1.
    let e = 2u32;
    let a = |i| CurveId::a(e, i);
    let b = |i| CurveId::b(e, i);
    let c = |i| CurveId::c(e, i);

    // t1: stretch the difference by one position.
    let lhs = prod(&[tw(a(1)), ti(a(3))]);
    let seed_word = prod(&[tw(a(1)), ti(a(2))]);
    let rhs = seed_word.concat(&seed_word.conjugated_by(&h12));
    report.equal_step(atlas, "lemma2/t1", &lhs, &rhs, window);

    // t2: braid the difference onto the through-curve.
    let conjugator = prod(&[tw(a(1)), ti(a(2)), tw(b(1)), ti(b(2))]);
    let lhs = prod(&[tw(a(1)), ti(a(3))]).conjugated_by(&conjugator);
    let rhs = prod(&[tw(b(1)), ti(a(3))]);
    report.equal_step(atlas, "lemma2/t2", &lhs, &rhs, window);

    // t3, t4: the two lantern moves, consumed as registered axioms; the
    // rule-derivable part (the fixed curve) is checked directly.
    for (id, word, input, output, fixed) in [
        (
            "lemma2/t3-axiom",
            lantern_axiom_word_1(e, 1),
            b(2),
            CurveId::d1(e, 1),
            a(1),
        ),
        (
            "lemma2/t4-axiom",
            lantern_axiom_word_2(e, 1),
            CurveId::d1(e, 1),
            CurveId::d2(e, 1),
            a(1),
        ),
    ] {
        let traced = curve_image_traced(atlas, &word, &CurveTerm::atlas(input), 128);
        let transported = traced.term.as_atlas() == Some(output) && traced.axioms.len() == 1;
        let fixed_ok =
            curve_image(atlas, &word, &CurveTerm::atlas(fixed), 128).as_atlas() == Some(fixed);
        let anchor = match traced.axioms.first() {
            Some(ax) => format!("consumes {}; fixes {fixed} (derived)", ax.anchor()),
            None => format!("axiom {input} -> {output} did not fire"),
        };
        report.bool_step(id, anchor, transported && fixed_ok, String::new());
    }

    // t5: a free regrouping.
    let lhs = prod(&[tw(CurveId::d2(e, 1)), ti(c(1))]);
    let rhs = prod(&[tw(CurveId::d2(e, 1)), ti(a(1)), tw(a(1)), ti(c(1))]);
    report.equal_step(atlas, "lemma2/t5", &lhs, &rhs, window);

    // t6: the lantern relation in its homology shadow.
    let lhs = prod(&[tw(a(1)), tw(c(1)), tw(c(2)), tw(a(3))]);
    let rhs = prod(&[tw(a(2)), tw(CurveId::d1(e, 1)), tw(CurveId::d2(e, 1))]);
    report.equal_step(atlas, "lemma2/t6-lantern-shadow", &lhs, &rhs, window);

    // t7: isolate a single twist from the lantern.
    let lhs = tw(a(3));
    let rhs = prod(&[
        tw(a(2)),
        ti(c(2)),
        tw(CurveId::d1(e, 1)),
        ti(a(1)),
        tw(CurveId::d2(e, 1)),
        ti(c(1)),
    ]);
    report.equal_step(atlas, "lemma2/t7", &lhs, &rhs, window);

    // t8, t9: single twists for the chain and through families.
    let lhs = tw(c(1));
    let rhs = prod(&[tw(c(1)), ti(a(1)), tw(a(1))]);
    report.equal_step(atlas, "lemma2/t8", &lhs, &rhs, window);

    let lhs = tw(b(1));
    let rhs = prod(&[tw(b(1)), ti(a(3)), tw(a(3))]);
    report.equal_step(atlas, "lemma2/t9", &lhs, &rhs, window);

    // t10: pull the bridge twist back through the strip.
    let lhs = tw(CurveId::c(1, 0));
    let rhs = tw(c(1)).conjugated_by(&h12.inverse());
    report.equal_step(atlas, "lemma2/t10", &lhs, &rhs, window);

    // t11, t12: spread across positions and ends by conjugation.
    let lhs = tw(a(4));
    let rhs = tw(a(3)).conjugated_by(&h12);
    report.equal_step(atlas, "lemma2/t11", &lhs, &rhs, window);

    let lhs = tw(CurveId::a(3, 3));
    let rhs = tw(a(3)).conjugated_by(&rot);
    report.equal_step(atlas, "lemma2/t12", &lhs, &rhs, window);

    report
}

// ---------------------------------------------------------------------------
// The involution-preparation chain.
// ---------------------------------------------------------------------------

fn lemma3_words(atlas: &Atlas) -> (Word, Word) {
    let _ = atlas;
    // F1 = B[1,1] C[1,0] ~C[2,0] ~B[3,1], L1 = A[1,1] ~A'[2,1].
    let f1 = prod(&[
        tw(CurveId::b(1, 1)),
        tw(CurveId::c(1, 0)),
        ti(CurveId::c(2, 0)),
        ti(CurveId::b(3, 1)),
    ]);
    let l1 = prod(&[tw(CurveId::a(1, 1)), ti(CurveId::a_prime(2, 1))]);
    (f1, l1)
}

fn lemma3_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma3", atlas, window, seed);
    let (f1, l1) = lemma3_words(atlas);
    let rot = Word::gen(Generator::Rot);

    // u1: L2 = L1 conjugated by L1 F1.
    let l2 = prod(&[tw(CurveId::b(1, 1)), ti(CurveId::a_prime(2, 1))]);
    let lhs = l1.conjugated_by(&l1.concat(&f1));
    report.equal_step(atlas, "lemma3/u1", &lhs, &l2, window);

    // u2: L3 = inv(L1^R) inv(F1) transports a'[3,1] to b[3,1], fixing a[2,1].
    let l1_r = l1.conjugated_by(&rot);
    let l3 = l1_r.inverse().concat(&f1.inverse());
    let t1 = curve_image(atlas, &l3, &CurveTerm::atlas(CurveId::a_prime(3, 1)), 128);
    let t2 = curve_image(atlas, &l3, &CurveTerm::atlas(CurveId::a(2, 1)), 128);
    report.bool_step(
        "lemma3/u2",
        format!("{} sends a'[3,1] to b[3,1] and fixes a[2,1]", render(&l3)),
        t1.as_atlas() == Some(CurveId::b(3, 1)) && t2.as_atlas() == Some(CurveId::a(2, 1)),
        format!("images {t1} and {t2}"),
    );

    // u3: conjugating inv(L1^R) by L3 gives B[3,1] ~A[2,1]. (The chain's
    // printed conjugator carries a redundant leading factor; the inner
    // transport is the one that lands on the stated element.)
    let l4 = prod(&[tw(CurveId::b(3, 1)), ti(CurveId::a(2, 1))]);
    let lhs = l1_r.inverse().conjugated_by(&l3);
    report.equal_step(atlas, "lemma3/u3", &lhs, &l4, window);

    // u4: L5 = L2 conjugated by F1.
    let l5 = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::a_prime(2, 1))]);
    let lhs = l2.conjugated_by(&f1);
    report.equal_step(atlas, "lemma3/u4", &lhs, &l5, window);

    // u5: L6 = L4^{inv(R)} L1 = B[2,1] ~A'[2,1].
    let l6 = prod(&[tw(CurveId::b(2, 1)), ti(CurveId::a_prime(2, 1))]);
    let lhs = l4.conjugated_by(&rot.inverse()).concat(&l1);
    report.equal_step(atlas, "lemma3/u5", &lhs, &l6, window);

    // u6: B[1,1] ~B[2,1] = L2 inv(L6).
    let b_diff = prod(&[tw(CurveId::b(1, 1)), ti(CurveId::b(2, 1))]);
    let lhs = l2.concat(&l6.inverse());
    report.equal_step(atlas, "lemma3/u6", &lhs, &b_diff, window);

    // u7: L7 = inv(L2) (B-diff) L2^R = A'[2,1] ~A'[3,1].
    let l7 = prod(&[tw(CurveId::a_prime(2, 1)), ti(CurveId::a_prime(3, 1))]);
    let lhs = l2.inverse().concat(&b_diff).concat(&l2.conjugated_by(&rot));
    report.equal_step(atlas, "lemma3/u7", &lhs, &l7, window);

    // u8: C[1,0] ~C[2,0] = L5 L7 inv(L5^R).
    let c_diff = prod(&[tw(CurveId::c(1, 0)), ti(CurveId::c(2, 0))]);
    let lhs = l5.concat(&l7).concat(&l5.conjugated_by(&rot).inverse());
    report.equal_step(atlas, "lemma3/u8", &lhs, &c_diff, window);

    // u9: A[1,1] ~A[2,1] = inv(L4^{inv(R)}) (B-diff)^R L4.
    let a_diff = prod(&[tw(CurveId::a(1, 1)), ti(CurveId::a(2, 1))]);
    let lhs = l4
        .conjugated_by(&rot.inverse())
        .inverse()
        .concat(&b_diff.conjugated_by(&rot))
        .concat(&l4);
    report.equal_step(atlas, "lemma3/u9", &lhs, &a_diff, window);

    report
}

// ---------------------------------------------------------------------------
// The six-involutions bookkeeping.
// ---------------------------------------------------------------------------

fn involutions_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("involutions", atlas, window, seed);
    let n = atlas.ends();
    let (f1, l1) = lemma3_words(atlas);
    let rot = Word::gen(Generator::Rot);
    let rho1 = Word::gen(Generator::Rho1);
    let rho2 = Word::gen(Generator::Rho2);
    let rho3 = rho1.conjugated_by(&rot);
    let rho4 = rho2.conjugated_by(&rot);

    // v1: the quoted rho3 images.
    let lhs = tw(CurveId::b(1, 1)).conjugated_by(&rho3);
    report.equal_step(
        atlas,
        "involutions/v1a",
        &lhs,
        &tw(CurveId::b(3, 1)),
        window,
    );
    let lhs = tw(CurveId::c(1, 0)).conjugated_by(&rho3);
    report.equal_step(
        atlas,
        "involutions/v1b",
        &lhs,
        &tw(CurveId::c(2, 0)),
        window,
    );

    // v2: rho3 F1 rho3 = inv(F1), hence (rho3 F1)^2 = 1.
    let lhs = rho3.concat(&f1).concat(&rho3);
    report.equal_step(atlas, "involutions/v2", &lhs, &f1.inverse(), window);
    let square = rho3.concat(&f1).pow(2);
    report.trivial_step(atlas, "involutions/v3", &square, window);

    // v4, v5: the same for rho4 and L1.
    let lhs = rho4.concat(&l1).concat(&rho4);
    report.equal_step(atlas, "involutions/v4", &lhs, &l1.inverse(), window);
    let square = rho4.concat(&l1).pow(2);
    report.trivial_step(atlas, "involutions/v5", &square, window);

    // v6: the two rotations compose to the shift.
    let taus = Word::gen(Generator::Tau1).concat(&Word::gen(Generator::Tau2));
    report.equal_step(atlas, "involutions/v6", &taus, &shift_word(1, 2), window);

    // v7: every listed generator is an involution in the shadows.
    for (id, word) in [
        ("involutions/v7-rho1", rho1.pow(2)),
        ("involutions/v7-rho2", rho2.pow(2)),
        ("involutions/v7-tau1", Word::gen(Generator::Tau1).pow(2)),
        ("involutions/v7-tau2", Word::gen(Generator::Tau2).pow(2)),
    ] {
        report.trivial_step(atlas, id, &word, window);
    }

    // v8: the rotation has order n.
    report.trivial_step(atlas, "involutions/v8", &rot.pow(i64::from(n)), window);

    // v9: the end actions of the six involutions generate the symmetric
    // group.
    let perms: Vec<Perm> = [
        &rho1,
        &rho2,
        &rho3.concat(&f1),
        &rho4.concat(&l1),
        &Word::gen(Generator::Tau1),
        &Word::gen(Generator::Tau2),
    ]
    .iter()
    .map(|w| end_permutation(atlas, w))
    .collect();
    match sym_generated(&perms, n) {
        Ok(generated) => report.bool_step(
            "involutions/v9",
            format!("the six end actions generate all {n}! permutations"),
            generated,
            String::new(),
        ),
        Err(e) => report.push(
            "involutions/v9",
            StepStatus::Unknown,
            format!("the six end actions generate all {n}! permutations"),
            e.to_string(),
        ),
    }

    report
}

// ---------------------------------------------------------------------------
// The finite generating set bookkeeping.
// ---------------------------------------------------------------------------

fn finiteset_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("finiteset", atlas, window, seed);
    let n = atlas.ends();
    let rot = Word::gen(Generator::Rot);
    let h12 = shift_word(1, 2);

    // f1: the rotation conjugates adjacent shifts onward.
    let lhs = shift_word(2, 3);
    let rhs = h12.conjugated_by(&rot);
    report.equal_step(atlas, "finiteset/f1", &lhs, &rhs, window);

    // f2: chain flux moves one handle from end 1 to end k.
    for k in 2..=n {
        let word = chain(atlas, 1, k).expect("range checked");
        let flux = flux_vector(atlas, &word, window + 2);
        let ok = flux.as_ref().is_some_and(|f| {
            (1..=n).all(|j| {
                let expected = match j {
                    1 => -1,
                    j if j == k => 1,
                    _ => 0,
                };
                f.coord(j) == expected
            })
        });
        report.bool_step(
            format!("finiteset/f2-chain-1-{k}"),
            format!("flux({}) = e_{k} - e_1", render(&word)),
            ok,
            flux.map(|f| f.to_string())
                .unwrap_or_else(|| "undefined".into()),
        );
    }

    // f3: the primed side curves come from the shift.
    let lhs = tw(CurveId::a_prime(1, 1));
    let rhs = tw(CurveId::a(2, 1)).conjugated_by(&h12.inverse());
    report.equal_step(atlas, "finiteset/f3", &lhs, &rhs, window);

    // f4: rotation spreads the through-twists over the ends.
    for i in 1..n.min(4) {
        let lhs = tw(CurveId::b(i + 1, 1));
        let rhs = tw(CurveId::b(i, 1)).conjugated_by(&rot);
        report.equal_step(atlas, format!("finiteset/f4-end-{i}"), &lhs, &rhs, window);
    }

    // f5, f6: the inverse shift walks twists outward along one end.
    for j in 2..=4u32 {
        let lhs = tw(CurveId::b(1, j));
        let rhs = tw(CurveId::b(1, 1)).conjugated_by(&h12.inverse().pow(i64::from(j) - 1));
        report.equal_step(atlas, format!("finiteset/f5-pos-{j}"), &lhs, &rhs, window);
    }
    for j in 1..=3u32 {
        let lhs = tw(CurveId::c(1, j));
        let rhs = tw(CurveId::c(1, 0)).conjugated_by(&h12.inverse().pow(i64::from(j)));
        report.equal_step(atlas, format!("finiteset/f6-pos-{j}"), &lhs, &rhs, window);
    }

    // f7, f8: the end actions of R and tau1 generate the symmetric group.
    let tau1_perm = end_permutation(atlas, &Word::gen(Generator::Tau1));
    report.bool_step(
        "finiteset/f7",
        "tau1 projects to the transposition (1 2)".to_string(),
        tau1_perm == Perm::transposition(n, 1, 2),
        tau1_perm.to_string(),
    );
    match sym_generated(&[Perm::cycle(n), tau1_perm], n) {
        Ok(generated) => report.bool_step(
            "finiteset/f8",
            format!("an n-cycle and a 2-cycle generate all {n}! permutations"),
            generated,
            String::new(),
        ),
        Err(e) => report.push(
            "finiteset/f8",
            StepStatus::Unknown,
            format!("an n-cycle and a 2-cycle generate all {n}! permutations"),
            e.to_string(),
        ),
    }

    report
}

// ---------------------------------------------------------------------------
// Flux and genus-witness sweeps.
// ---------------------------------------------------------------------------

fn random_twist_word(rng: &mut ChaCha8Rng, atlas: &Atlas, max_index: u32, max_len: usize) -> Word {
    let n = atlas.ends();
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            let end = rng.gen_range(1..=n);
            let index = rng.gen_range(1..=max_index.max(1));
            let curve = match rng.gen_range(0..5) {
                0 => CurveId::a(end, index),
                1 => CurveId::a_prime(end, index),
                2 => CurveId::b(end, index),
                3 => CurveId::c(end, index),
                _ => CurveId::c(end, rng.gen_range(0..=max_index)),
            };
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            Letter::new(Generator::Twist(curve), sign)
        })
        .collect();
    Word::from_letters(letters)
}

fn random_pure_word(rng: &mut ChaCha8Rng, atlas: &Atlas, max_index: u32, max_len: usize) -> Word {
    let n = atlas.ends();
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            if rng.gen_bool(0.4) {
                let from = rng.gen_range(1..=n);
                Letter::new(
                    Generator::Shift {
                        from,
                        to: from % n + 1,
                    },
                    sign,
                )
            } else {
                let end = rng.gen_range(1..=n);
                let index = rng.gen_range(1..=max_index.max(1));
                Letter::new(Generator::Twist(CurveId::b(end, index)), sign)
            }
        })
        .collect();
    Word::from_letters(letters)
}

fn flux_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("flux", atlas, window, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h12 = shift_word(1, 2);

    let v = phi(atlas, SepClass::singleton(2), &h12, window);
    report.bool_step(
        "flux/shift-into-end-2",
        "phi_{2}(h[1,2]) = +1".to_string(),
        v == Some(1),
        format!("{v:?}"),
    );
    let v = phi(atlas, SepClass::singleton(3), &h12, window);
    report.bool_step(
        "flux/shift-misses-end-3",
        "phi_{3}(h[1,2]) = 0".to_string(),
        v == Some(0),
        format!("{v:?}"),
    );

    let max_index = window.saturating_sub(2).max(1);
    let mut zero_ok = true;
    for _ in 0..200 {
        let w = random_twist_word(&mut rng, atlas, max_index, 8);
        let f = flux_vector(atlas, &w, window + 8);
        if f.map(|f| !f.is_zero()).unwrap_or(true) {
            zero_ok = false;
            break;
        }
    }
    report.bool_step(
        "flux/twists-have-no-flux",
        "phi vanishes on 200 random compactly supported words".to_string(),
        zero_ok,
        String::new(),
    );

    let mut additive_ok = true;
    for _ in 0..100 {
        let w1 = random_pure_word(&mut rng, atlas, max_index, 6);
        let w2 = random_pure_word(&mut rng, atlas, max_index, 6);
        let probe = window + 16;
        let (f1, f2, f12) = (
            flux_vector(atlas, &w1, probe),
            flux_vector(atlas, &w2, probe),
            flux_vector(atlas, &w1.concat(&w2), probe),
        );
        match (f1, f2, f12) {
            (Some(f1), Some(f2), Some(f12)) => {
                if f1.add(&f2) != f12 {
                    additive_ok = false;
                    break;
                }
            }
            _ => {
                additive_ok = false;
                break;
            }
        }
    }
    report.bool_step(
        "flux/additivity",
        "flux(w1 w2) = flux(w1) + flux(w2) on 100 random pure pairs".to_string(),
        additive_ok,
        String::new(),
    );

    let taus = Word::gen(Generator::Tau1).concat(&Word::gen(Generator::Tau2));
    let ok = flux_vector(atlas, &taus, window) == flux_vector(atlas, &h12, window)
        && flux_vector(atlas, &h12, window).is_some();
    report.bool_step(
        "flux/tau-pair-matches-shift",
        "flux(tau1 tau2) = flux(h[1,2])".to_string(),
        ok,
        String::new(),
    );

    for k in 2..=atlas.ends() {
        let word = chain(atlas, 1, k).expect("range checked");
        let f = flux_vector(atlas, &word, window + 2);
        let ok = f.as_ref().is_some_and(|f| {
            (1..=atlas.ends()).all(|j| {
                f.coord(j)
                    == if j == 1 {
                        -1
                    } else if j == k {
                        1
                    } else {
                        0
                    }
            })
        });
        report.bool_step(
            format!("flux/chain-1-{k}"),
            format!("flux(chain(1,{k})) = e_{k} - e_1"),
            ok,
            String::new(),
        );
    }

    report
}

fn genus_witness_suite(atlas: &Atlas, window: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("genus-witness", atlas, window, seed);
    let n = atlas.ends();
    let max_index = window.min(10);
    for from in 1..=n {
        let to = atlas.next_end(from);
        let mut checked = 0usize;
        let mut failure = None;
        for end in [from, to] {
            for index in 2..=max_index {
                let c = CurveId::c(end, index);
                match separating_witness(atlas, c, from, to) {
                    Ok(w) if w.valid => checked += 1,
                    Ok(w) => {
                        failure = Some(format!(
                            "{c}: genus triple ({}, {}, {})",
                            w.base, w.shifted, w.unshifted
                        ));
                        break;
                    }
                    Err(e) => {
                        failure = Some(format!("{c}: {e}"));
                        break;
                    }
                }
            }
        }
        report.bool_step(
            format!("genus-witness/h{from}-{to}"),
            format!("one-step genus displacement around h[{from},{to}] on {checked} cuts"),
            failure.is_none(),
            failure.unwrap_or_default(),
        );
    }

    // The equality case: two shifts with the same ends differ by something
    // that moves no genus past any witness cut.
    let h1 = shift_word(1, 2);
    let h2 = Word::gen(Generator::Tau1).concat(&Word::gen(Generator::Tau2));
    let mut ok = true;
    for end in [1, 2] {
        for index in 1..=max_index {
            if !difference_word_fixes(atlas, &h1, &h2, CurveId::c(end, index)) {
                ok = false;
            }
        }
    }
    report.bool_step(
        "genus-witness/difference-word",
        "genus(S^{gamma,c}) = genus(S^{gamma,(inv(h2) h1)(c)}) for same-ends shifts".to_string(),
        ok,
        String::new(),
    );
    let _ = seed;
    report
}
