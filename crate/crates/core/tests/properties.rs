//! Property tests for the structural invariants of nets, reduction,
//! monomial rewriting and edifices.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sic_core::edifice::{closure_equal_up_to, edifice_equal, is_canonical, vault_contained};
use sic_core::gen::{random_cut_free, random_net, random_total_net, NetShape};
use sic_core::goi::interpret;
use sic_core::{
    alpha_eq, all_obs_paths, canonical_key, canonicalize, is_cut_free, mono_rewrite, parse_net, reduce,
    serialize_net, truncate, Address, AddressSet, Atom, Base, BiWord, CellKind, Monomial, Pillar, Status,
    Strategy as Reduction, Word,
};

const CASES: u32 = 64;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just('p'), Just('q')], 0..4)
        .prop_map(|v| Word::parse(&v.into_iter().collect::<String>()).expect("word"))
}

fn pillar(ports: usize) -> impl Strategy<Value = Pillar> {
    (word(), word(), 1..=ports).prop_map(|(w1, w2, p)| Pillar::new(BiWord { w1, w2 }, p))
}

fn address_set() -> impl Strategy<Value = AddressSet> {
    proptest::collection::vec((pillar(2), pillar(2)), 0..6).prop_map(|v| {
        let mut s = AddressSet::new();
        for (a, b) in v {
            s.insert(Address::new(a, b));
        }
        s
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    let atom = (0..4usize, any::<bool>()).prop_map(|(b, starred)| {
        let base = [Base::C, Base::D, Base::F, Base::G][b];
        if starred {
            Atom::neg(base)
        } else {
            Atom::pos(base)
        }
    });
    proptest::collection::vec(atom, 0..10).prop_map(Monomial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn serialization_round_trips_up_to_alpha(seed in any::<u64>()) {
        let net = random_net(&mut rng(seed), &NetShape::new(8, 4));
        let back = parse_net(&serialize_net(&net)).expect("reparse");
        prop_assert!(alpha_eq(&net, &back));
        prop_assert_eq!(canonical_key(&net), canonical_key(&back));
    }

    #[test]
    fn compaction_preserves_alpha_class(seed in any::<u64>()) {
        let net = random_net(&mut rng(seed), &NetShape::new(8, 4));
        prop_assert!(alpha_eq(&net, &net.compacted()));
    }

    #[test]
    fn reduction_keeps_interface_and_validity(seed in any::<u64>(), budget in 0usize..12) {
        let net = random_net(&mut rng(seed), &NetShape::new(6, 4));
        for s in [Reduction::FullParallel, Reduction::Leftmost, Reduction::Random(seed)] {
            let out = reduce(&net, s, budget);
            prop_assert_eq!(out.net.interface(), net.interface());
            prop_assert!(out.net.validate().is_ok());
            if out.status == Status::CutFree {
                prop_assert!(is_cut_free(&out.net));
            }
        }
    }

    #[test]
    fn strategies_agree_on_total_nets(seed in any::<u64>()) {
        if let Some(net) = random_total_net(&mut rng(seed), &NetShape::new(6, 3), 50, 200) {
            let a = reduce(&net, Reduction::FullParallel, 200);
            let b = reduce(&net, Reduction::Leftmost, 200);
            let c = reduce(&net, Reduction::Random(seed), 200);
            prop_assert_eq!(a.status, Status::CutFree);
            prop_assert_eq!(a.steps, b.steps);
            prop_assert_eq!(a.steps, c.steps);
            prop_assert!(alpha_eq(&a.net, &b.net));
            prop_assert!(alpha_eq(&a.net, &c.net));
        }
    }

    #[test]
    fn reduction_preserves_observable_addresses(seed in any::<u64>()) {
        if let Some(net) = random_total_net(&mut rng(seed), &NetShape::new(6, 3), 50, 200) {
            let nf = reduce(&net, Reduction::FullParallel, 200).net;
            let before = all_obs_paths(&net, 60);
            let after = all_obs_paths(&nf, 60);
            prop_assert!(edifice_equal(&before.addrs, &after.addrs));
        }
    }

    #[test]
    fn cut_free_nets_are_their_own_normal_form(seed in any::<u64>(), n in 1usize..4) {
        let net = random_cut_free(&mut rng(seed), n, 3, &[CellKind::Delta, CellKind::Zeta]);
        prop_assert!(is_cut_free(&net));
        let out = reduce(&net, Reduction::FullParallel, 5);
        prop_assert_eq!(out.steps, 0);
        prop_assert!(alpha_eq(&out.net, &net));
    }

    #[test]
    fn monomial_rewriting_preserves_interpretation(m in monomial()) {
        let nf = mono_rewrite(&m);
        prop_assert_eq!(interpret(&m), interpret(&nf));
        prop_assert_eq!(mono_rewrite(&nf), nf);
    }

    #[test]
    fn monomial_star_is_involutive(m in monomial()) {
        prop_assert_eq!(m.star().star(), m);
    }

    #[test]
    fn canonicalize_is_idempotent_and_exact(s in address_set()) {
        let c = canonicalize(&s);
        prop_assert!(is_canonical(&c));
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert!(edifice_equal(&s, &c));
        for a in s.iter() {
            prop_assert!(vault_contained(a, &c));
        }
    }

    #[test]
    fn truncation_ignores_presentation(s in address_set(), k in 0usize..4) {
        prop_assert_eq!(truncate(&s, k), truncate(&canonicalize(&s), k));
        prop_assert!(closure_equal_up_to(&s, &canonicalize(&s), k));
    }

    #[test]
    fn union_is_monotone_for_containment(a in address_set(), b in address_set()) {
        let mut u = a.clone();
        u.extend(&b);
        for x in a.iter().chain(b.iter()) {
            prop_assert!(vault_contained(x, &u));
        }
    }

    #[test]
    fn word_prefix_laws(u in word(), v in word()) {
        let uv = u.concat(&v);
        prop_assert!(u.is_prefix_of(&uv));
        prop_assert_eq!(u.strip_from(&uv), Some(v.clone()));
        prop_assert_eq!(uv.truncate(u.len()), u.clone());
        prop_assert_eq!(uv.len(), u.len() + v.len());
    }
}

#[test]
fn total_net_generator_is_productive() {
    let drawn = (0..64u64)
        .filter_map(|s| random_total_net(&mut rng(s), &NetShape::new(6, 3), 50, 200))
        .filter(|n| !n.active_pairs().is_empty())
        .count();
    assert!(drawn >= 16, "only {drawn} nontrivial total nets drawn");
}
