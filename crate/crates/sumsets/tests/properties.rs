//! Property-based tests: the structural invariants each layer promises,
//! replayed on generated instances across every group model.

use proptest::collection::vec;
use proptest::prelude::*;

use sumsets::bounds::abelian_mu_bound;
use sumsets::group::{
    inverse, op, ordered_set_product, pow, push_syllable, set_op, stabilizer, word_inverse,
    Element, GSet, GroupModel, Syllable,
};
use sumsets::inverse::build_witness_sets;
use sumsets::json::{instance_from_json, instance_to_json, Instance, Payload};
use sumsets::seqset::{
    generalized_product_set, multiplicity_profile, naive_generalized_product_set,
    ElementSequence, SetSequence,
};
use sumsets::structure::{detect_progressions, realize, same_ratio_family, ProgressionType};
use sumsets::subseq::{subseq_disjunction, subseq_profile};

fn arb_model() -> impl Strategy<Value = GroupModel> {
    prop_oneof![
        Just(GroupModel::Integers),
        (2u64..=13).prop_map(|n| GroupModel::Cyclic { n }),
        Just(GroupModel::FiniteAbelian { moduli: vec![2, 4] }),
        Just(GroupModel::FiniteAbelian { moduli: vec![2, 2, 3] }),
        (1usize..=2).prop_map(|rank| GroupModel::Free { rank }),
    ]
}

fn arb_element(model: GroupModel) -> BoxedStrategy<Element> {
    match model {
        GroupModel::Integers => (-12i64..=12).prop_map(Element::Int).boxed(),
        GroupModel::Cyclic { n } => (0..n).prop_map(Element::Residue).boxed(),
        GroupModel::FiniteAbelian { moduli } => moduli
            .iter()
            .map(|&md| (0..md).boxed())
            .collect::<Vec<_>>()
            .prop_map(Element::ResidueVec)
            .boxed(),
        GroupModel::Free { rank } => vec((0..rank, prop_oneof![Just(1i64), Just(-1)]), 0..=3)
            .prop_map(|syllables| {
                let mut word: Vec<Syllable> = Vec::new();
                for (g, e) in syllables {
                    push_syllable(&mut word, g, e);
                }
                Element::Word(word)
            })
            .boxed(),
    }
}

fn arb_gset(model: GroupModel) -> BoxedStrategy<GSet> {
    let inner = model.clone();
    vec(arb_element(model), 1..=4)
        .prop_map(move |members| GSet::new(inner.clone(), members).unwrap())
        .boxed()
}

/// A set sequence together with a valid window size.
fn arb_instance() -> impl Strategy<Value = (SetSequence, usize)> {
    arb_model().prop_flat_map(|model| {
        (1usize..=5)
            .prop_flat_map(move |m| {
                (vec(arb_gset(model.clone()), m..=m), 1usize..=m)
            })
            .prop_map(|(sets, ell)| (SetSequence::new(sets).unwrap(), ell))
    })
}

/// An element sequence (with repetitions) together with a window size.
fn arb_term_instance() -> impl Strategy<Value = (ElementSequence, usize)> {
    arb_model().prop_flat_map(|model| {
        let inner = model.clone();
        (vec(arb_element(model), 1..=4), 2usize..=6)
            .prop_flat_map(move |(pool, m)| {
                let picks = vec(0..pool.len(), m..=m);
                let inner = inner.clone();
                let pool = pool.clone();
                (picks, 1usize..=m).prop_map(move |(indices, ell)| {
                    let terms: Vec<Element> =
                        indices.iter().map(|&i| pool[i].clone()).collect();
                    (ElementSequence::new(inner.clone(), terms).unwrap(), ell)
                })
            })
    })
}

fn arb_triple() -> impl Strategy<Value = (GroupModel, Element, Element, Element)> {
    arb_model().prop_flat_map(|model| {
        let e = arb_element(model.clone());
        (e.clone(), e.clone(), e).prop_map(move |(x, y, z)| (model.clone(), x, y, z))
    })
}

proptest! {
    /// The group law is associative and respects identity and inverses.
    #[test]
    fn group_axioms((model, x, y, z) in arb_triple()) {
        let left = op(&model, &op(&model, &x, &y).unwrap(), &z).unwrap();
        let right = op(&model, &x, &op(&model, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        let identity = model.identity();
        prop_assert_eq!(op(&model, &x, &identity).unwrap(), x.clone());
        prop_assert_eq!(op(&model, &identity, &x).unwrap(), x.clone());
        let inv = inverse(&model, &x).unwrap();
        prop_assert_eq!(op(&model, &x, &inv).unwrap(), identity);
    }

    /// Powers add: `x^{i+j} = x^i · x^j`, including negative exponents.
    #[test]
    fn powers_add((model, x, _, _) in arb_triple(), i in -4i64..=4, j in -4i64..=4) {
        let split = op(&model, &pow(&model, &x, i).unwrap(), &pow(&model, &x, j).unwrap()).unwrap();
        prop_assert_eq!(pow(&model, &x, i + j).unwrap(), split);
    }

    /// Free-word inversion is an involution and cancels its word.
    #[test]
    fn word_inverse_cancels(x in arb_element(GroupModel::Free { rank: 2 })) {
        let model = GroupModel::Free { rank: 2 };
        let Element::Word(w) = &x else { unreachable!() };
        let double = word_inverse(&word_inverse(w));
        prop_assert_eq!(&double, w);
        let inv = Element::Word(word_inverse(w));
        prop_assert_eq!(op(&model, &x, &inv).unwrap(), model.identity());
    }

    /// The multiplicity profile obeys its defining arithmetic:
    /// `μ = min(ℓ, η + raw tail)`, equivalently `min(ℓ, η + τ)` with the
    /// capped tail, and `M = {a : μ(a) = ℓ}`.
    #[test]
    fn multiplicity_profile_decomposition((seq, ell) in arb_instance()) {
        let profile = multiplicity_profile(&seq, ell).unwrap();
        prop_assert_eq!(profile.support(), seq.union());
        let mut total = 0u64;
        for a in seq.union().iter() {
            let mu = profile.mu_of(a).unwrap();
            let eta = profile.eta_of(a).unwrap();
            let tau = profile.tau_of(a).unwrap();
            prop_assert!(mu <= ell as u32 && tau <= ell as u32 && eta <= ell as u32);
            prop_assert_eq!(mu, (ell as u32).min(eta + tau));
            prop_assert_eq!(mu, (ell as u32).min(seq.incidence_of(a)));
            prop_assert_eq!(profile.m_set().contains(a), mu == ell as u32);
            total += mu as u64;
        }
        prop_assert_eq!(profile.mu_total(), total);
    }

    /// The windowed product agrees with the brute-force oracle that
    /// enumerates index subsets and chains set products directly.
    #[test]
    fn windowed_product_matches_naive_oracle((seq, ell) in arb_instance()) {
        let fast = generalized_product_set(&seq, ell).unwrap();
        let naive = naive_generalized_product_set(&seq, ell).unwrap();
        prop_assert_eq!(fast, naive);
    }

    /// Reordering the sequence never changes the windowed product.
    #[test]
    fn windowed_product_is_permutation_invariant((seq, ell) in arb_instance(), salt in 0u64..4) {
        let base = generalized_product_set(&seq, ell).unwrap();
        let mut sets = seq.sets().to_vec();
        let pivot = (salt as usize) % sets.len().max(1);
        sets.rotate_left(pivot);
        sets.reverse();
        let shuffled = SetSequence::new(sets).unwrap();
        prop_assert_eq!(generalized_product_set(&shuffled, ell).unwrap(), base);
    }

    /// Appending a set can only grow the windowed product, and so can
    /// enlarging one of the existing sets.
    #[test]
    fn windowed_product_is_monotone((seq, ell) in arb_instance(), extra in arb_element(GroupModel::Integers)) {
        let base = generalized_product_set(&seq, ell).unwrap();

        let mut appended = seq.sets().to_vec();
        appended.push(seq.set(0).clone());
        let bigger = SetSequence::new(appended).unwrap();
        prop_assert!(base.is_subset_of(&generalized_product_set(&bigger, ell).unwrap()));

        if seq.model() == &GroupModel::Integers {
            let mut widened = seq.sets().to_vec();
            let grown = widened[0]
                .union(&GSet::new(GroupModel::Integers, vec![extra]).unwrap())
                .unwrap();
            widened[0] = grown;
            let wider = SetSequence::new(widened).unwrap();
            prop_assert!(base.is_subset_of(&generalized_product_set(&wider, ell).unwrap()));
        }
    }

    /// The universal multiplicity bound never exceeds the computed size.
    #[test]
    fn universal_bound_is_sound((seq, ell) in arb_instance()) {
        let report = abelian_mu_bound(&seq, ell).unwrap();
        prop_assert!(report.slack >= 0);
    }

    /// The stabilizer is closed under the group law and fixes the set.
    #[test]
    fn stabilizer_fixes_the_set((seq, _) in arb_instance()) {
        let model = seq.model().clone();
        if !model.is_finite() {
            return Ok(());
        }
        let s = seq.union().clone();
        let h = stabilizer(&model, &s).unwrap();
        for g in h.iter() {
            prop_assert_eq!(s.translate_right(g).unwrap(), s.clone());
        }
        for g in h.iter() {
            for k in h.iter() {
                prop_assert!(h.contains(&op(&model, g, k).unwrap()));
            }
        }
    }

    /// Set products of translates: `(A·g)·B = (A·B)·g` in abelian models —
    /// the translate passes through the pairwise product.
    #[test]
    fn translate_passes_through_products((seq, _) in arb_instance(), pick in any::<prop::sample::Index>()) {
        let model = seq.model().clone();
        if !model.is_abelian() || seq.m() < 2 {
            return Ok(());
        }
        let g = pick.get(seq.union().as_slice());
        let a = seq.set(0);
        let b = seq.set(1.min(seq.m() - 1));
        let left = set_op(&a.translate_right(g).unwrap(), b).unwrap();
        let right = set_op(a, b).unwrap().translate_right(g).unwrap();
        prop_assert_eq!(left, right);
    }

    /// Realizing a progression type and re-detecting it is a fixed point,
    /// and a translated copy joins the original in a shared-ratio family.
    #[test]
    fn realized_progressions_are_redetected(
        start in -8i64..=8,
        gap in prop_oneof![(-4i64..=-1), (1i64..=4)],
        len in 1usize..=5,
        shift in -6i64..=6,
    ) {
        let model = GroupModel::Integers;
        let t = ProgressionType::new(
            Element::Int(start),
            Element::Int(gap),
            Element::Int(0),
            len,
        );
        let s = realize(&model, &t).unwrap();
        let detected = detect_progressions(&s);
        prop_assert!(!detected.is_empty());
        for d in &detected {
            prop_assert_eq!(realize(&model, d).unwrap(), s.clone());
        }
        let translated = s.translate_right(&Element::Int(shift)).unwrap();
        prop_assert!(same_ratio_family(&[s, translated]).is_some());
    }

    /// The witness augmentation always builds and self-verifies when the
    /// window is at least two.
    #[test]
    fn witness_augmentation_always_verifies((seq, ell) in arb_instance()) {
        if ell < 2 {
            return Ok(());
        }
        let ws = build_witness_sets(&seq, ell).unwrap();
        prop_assert!(ws.verify(&seq, ell).is_ok());
        // The augmented window dominates the original sets.
        let product = ordered_set_product(&ws.a2).unwrap();
        prop_assert!(product.is_subset_of(&generalized_product_set(&seq, ell).unwrap()));
    }

    /// Every element sequence satisfies the size-or-power disjunction, and
    /// its profile counts terms exactly.
    #[test]
    fn sequences_satisfy_the_disjunction((seq, ell) in arb_term_instance()) {
        let profile = subseq_profile(&seq, ell).unwrap();
        let total: u64 = seq
            .distinct()
            .iter()
            .map(|a| seq.rho_of(a) as u64)
            .sum();
        prop_assert_eq!(total, seq.m() as u64);
        let mu: u64 = seq
            .distinct()
            .iter()
            .map(|a| (seq.rho_of(a).min(ell as u32)) as u64)
            .sum();
        prop_assert_eq!(profile.mu_total(), mu);

        let report = subseq_disjunction(&seq, ell).unwrap();
        prop_assert!(report.holds());
    }

    /// Instances survive a JSON round-trip exactly.
    #[test]
    fn instances_roundtrip_through_json((seq, ell) in arb_instance()) {
        let instance = Instance { ell, payload: Payload::Sets(seq.clone()) };
        let value = instance_to_json(&instance);
        let back = instance_from_json(&value).unwrap();
        prop_assert_eq!(back.ell, ell);
        let Payload::Sets(parsed) = back.payload else {
            return Err(TestCaseError::fail("payload kind changed in round-trip"));
        };
        prop_assert_eq!(parsed.model(), seq.model());
        prop_assert_eq!(parsed.sets(), seq.sets());
    }
}
