//! Property tests for the engine invariants: grammar round trips, free
//! reduction as a shadow-preserving normal form, verdict symmetry, homology
//! functoriality, and end-space comparison laws.

use proptest::prelude::*;

use bigmcg::atlas::{Atlas, CurveId};
use bigmcg::endspace::{self, Component, EndSpaceCode, Extent, SurfaceDesc};
use bigmcg::flux::{end_permutation, flux_vector};
use bigmcg::homology::{self, BasisIndex, H1Vector};
use bigmcg::words::{
    curve_image, equal_up_to, free_reduce, parse, render, CurveTerm, Generator, Letter, Verdict,
    Word,
};

const ENDS: u32 = 4;

fn atlas() -> Atlas {
    Atlas::new(ENDS).unwrap()
}

fn arb_curve() -> impl Strategy<Value = CurveId> {
    (0u8..6, 1u32..=ENDS, 1u32..=6).prop_map(|(fam, end, idx)| match fam {
        0 => CurveId::a(end, idx),
        1 => CurveId::a_prime(end, idx),
        2 => CurveId::b(end, idx),
        3 => CurveId::c(end, idx - 1),
        4 => CurveId::d1(end, idx),
        _ => CurveId::d2(end, idx),
    })
}

fn arb_letter() -> impl Strategy<Value = Letter> {
    let gen = prop_oneof![
        arb_curve().prop_map(Generator::Twist),
        (1u32..=ENDS).prop_map(|from| Generator::Shift {
            from,
            to: from % ENDS + 1
        }),
        Just(Generator::Rot),
        Just(Generator::Rho1),
        Just(Generator::Rho2),
        Just(Generator::Tau1),
        Just(Generator::Tau2),
    ];
    (gen, prop::bool::ANY)
        .prop_map(|(gen, positive)| Letter::new(gen, if positive { 1 } else { -1 }))
}

fn arb_word() -> impl Strategy<Value = Word> {
    prop::collection::vec(arb_letter(), 0..10).prop_map(Word::from_letters)
}

fn arb_component() -> impl Strategy<Value = Component> {
    prop_oneof![
        prop::bool::ANY.prop_map(|np| Component::IsolatedEnd { np }),
        prop::bool::ANY.prop_map(|np| Component::CantorBlock { np }),
        (prop::bool::ANY, prop::bool::ANY)
            .prop_map(|(limit_np, tail_np)| Component::OmegaChain { limit_np, tail_np }),
    ]
}

fn arb_desc() -> impl Strategy<Value = SurfaceDesc> {
    (
        prop::collection::vec(arb_component(), 0..5),
        0u32..3,
        0u32..3,
    )
        .prop_map(|(comps, boundary, genus)| {
            SurfaceDesc::new(
                Extent::Finite(boundary),
                Extent::Finite(genus),
                EndSpaceCode::new(comps),
            )
        })
}

proptest! {
    #[test]
    fn parse_render_round_trip(w in arb_word()) {
        let at = atlas();
        prop_assert_eq!(parse(&render(&w), &at).unwrap(), w);
    }

    #[test]
    fn free_reduction_is_idempotent_and_shorter(w in arb_word()) {
        let once = free_reduce(&w);
        prop_assert!(once.len() <= w.len());
        prop_assert_eq!(free_reduce(&once), once.clone());
        // No adjacent inverse pair survives.
        for pair in once.letters().windows(2) {
            prop_assert!(!(pair[0].gen == pair[1].gen && pair[0].sign == -pair[1].sign));
        }
    }

    #[test]
    fn free_reduction_preserves_the_shadows(w in arb_word()) {
        let at = atlas();
        let reduced = free_reduce(&w);
        prop_assert_eq!(end_permutation(&at, &w), end_permutation(&at, &reduced));
        for end in 1..=ENDS {
            for ix in [BasisIndex::alpha(end, 2), BasisIndex::beta(end, 1)] {
                let x = H1Vector::basis(ix);
                prop_assert_eq!(
                    homology::act(&at, &w, &x, 16),
                    homology::act(&at, &reduced, &x, 16)
                );
            }
        }
        if let (Some(f1), Some(f2)) =
            (flux_vector(&at, &w, 24), flux_vector(&at, &reduced, 24))
        {
            prop_assert_eq!(f1, f2);
        }
        for c in [CurveId::b(1, 1), CurveId::c(2, 0), CurveId::a(3, 2)] {
            let lhs = curve_image(&at, &w, &CurveTerm::atlas(c), 256);
            let rhs = curve_image(&at, &reduced, &CurveTerm::atlas(c), 256);
            if let (Some(lhs), Some(rhs)) = (lhs.as_atlas(), rhs.as_atlas()) {
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn equality_is_reflexive_and_symmetric(w1 in arb_word(), w2 in arb_word()) {
        let at = atlas();
        prop_assert!(equal_up_to(&at, &w1, &w1, 6, 128).unwrap().is_verified());
        let ab = equal_up_to(&at, &w1, &w2, 6, 128).unwrap();
        let ba = equal_up_to(&at, &w2, &w1, 6, 128).unwrap();
        let class = |v: &Verdict| match v {
            Verdict::Verified { .. } => 0,
            Verdict::Refuted(_) => 1,
            Verdict::Unknown { .. } => 2,
        };
        prop_assert_eq!(class(&ab), class(&ba));
    }

    #[test]
    fn verified_persists_at_smaller_windows(w in arb_word(), pad in arb_word()) {
        let at = atlas();
        // A word against its padded twin (freely equal), and conjugates of
        // the identity: wherever window 8 verifies, every smaller window
        // verifies too.
        let padded = w.concat(&pad).concat(&pad.inverse());
        for (lhs, rhs) in [
            (Word::identity().conjugated_by(&w), Word::identity()),
            (padded, w.clone()),
        ] {
            if equal_up_to(&at, &lhs, &rhs, 8, 256).unwrap().is_verified() {
                for window in 1..8 {
                    prop_assert!(
                        equal_up_to(&at, &lhs, &rhs, window, 256).unwrap().is_verified(),
                        "window {window}"
                    );
                }
            }
        }
    }

    #[test]
    fn refutations_transfer_to_the_difference_word(w1 in arb_word(), w2 in arb_word()) {
        let at = atlas();
        if let Ok(Verdict::Refuted(_)) = equal_up_to(&at, &w1, &w2, 8, 256) {
            let diff = w1.concat(&w2.inverse());
            let verdict = bigmcg::words::trivial_up_to(&at, &diff, 8).unwrap();
            prop_assert!(verdict.is_refuted(), "difference of refuted pair: {verdict}");
        }
    }

    #[test]
    fn twist_refutations_keep_their_witness_class(
        letters1 in prop::collection::vec((arb_curve(), prop::bool::ANY), 0..6),
        letters2 in prop::collection::vec((arb_curve(), prop::bool::ANY), 0..6),
    ) {
        let at = atlas();
        let mk = |ls: Vec<(CurveId, bool)>| {
            Word::from_letters(
                ls.into_iter()
                    .map(|(c, pos)| Letter::new(Generator::Twist(c), if pos { 1 } else { -1 }))
                    .collect(),
            )
        };
        let (w1, w2) = (mk(letters1), mk(letters2));
        let class = |w: &bigmcg::words::Witness| match w {
            bigmcg::words::Witness::EndImage { .. } => 0,
            bigmcg::words::Witness::FluxCoord { .. } => 1,
            bigmcg::words::Witness::Basis { .. } => 2,
            bigmcg::words::Witness::Curve { .. } => 3,
        };
        if let Ok(Verdict::Refuted(wit)) = equal_up_to(&at, &w1, &w2, 8, 256) {
            let diff = w1.concat(&w2.inverse());
            match bigmcg::words::trivial_up_to(&at, &diff, 8).unwrap() {
                Verdict::Refuted(wit2) => prop_assert_eq!(class(&wit), class(&wit2)),
                other => prop_assert!(false, "no transfer: {}", other),
            }
        }
    }

    #[test]
    fn homology_action_is_a_homomorphism(w1 in arb_word(), w2 in arb_word()) {
        let at = atlas();
        let x = H1Vector::basis(BasisIndex::beta(1, 1));
        let seq = homology::act(&at, &w2, &x, 30)
            .and_then(|mid| homology::act(&at, &w1, &mid, 30));
        let combined = homology::act(&at, &w1.concat(&w2), &x, 30);
        if let (Ok(a), Ok(b)) = (seq, combined) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn pairing_antisymmetry(
        coeffs in prop::collection::vec((0u8..2, 1u32..=ENDS, 1u32..5, -4i64..5), 0..6)
    ) {
        let mk = |terms: &[(u8, u32, u32, i64)]| {
            H1Vector::from_terms(terms.iter().map(|&(kind, end, idx, c)| {
                let ix = if kind == 0 {
                    BasisIndex::alpha(end, idx)
                } else {
                    BasisIndex::beta(end, idx)
                };
                (ix, c)
            }))
        };
        let x = mk(&coeffs);
        prop_assert_eq!(homology::pairing(&x, &x), num_bigint::BigInt::from(0));
    }

    #[test]
    fn end_space_compare_laws(a in arb_desc(), b in arb_desc()) {
        use endspace::{compare, Comparison};
        prop_assert_eq!(compare(&a, &a), Comparison::Homeomorphic);
        prop_assert_eq!(compare(&a, &b), compare(&b, &a));
    }

    #[test]
    fn fingerprint_ignores_component_order(comps in prop::collection::vec(arb_component(), 0..6)) {
        let code = EndSpaceCode::new(comps.clone());
        let mut reversed = comps;
        reversed.reverse();
        let code2 = EndSpaceCode::new(reversed);
        prop_assert_eq!(endspace::fingerprint(&code), endspace::fingerprint(&code2));
    }

    #[test]
    fn derivative_isolated_points_come_from_limits(comps in prop::collection::vec(arb_component(), 0..6)) {
        // Isolated ends of the derivative are exactly the chain limits.
        let code = EndSpaceCode::new(comps);
        let derived = endspace::cb_derivative(&code);
        let limits = code
            .components()
            .iter()
            .filter(|c| matches!(c, Component::OmegaChain { .. }))
            .count();
        let isolated = derived
            .components()
            .iter()
            .filter(|c| matches!(c, Component::IsolatedEnd { .. }))
            .count();
        prop_assert_eq!(limits, isolated);
    }
}
