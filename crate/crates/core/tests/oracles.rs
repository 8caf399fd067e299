//! Frozen values for the shipped corpus, each checked against a hand count
//! or an independent construction rather than the code under test.

use sic_core::encodings::{corpus, ping_pong_spec, solve_recursion, untagged};
use sic_core::equivalence::{beta_eps_eq, fin_ax_eq, observability, EqVerdict, Observability};
use sic_core::goi::mono_value;
use sic_core::structure::WireClass;
use sic_core::{
    all_obs_paths, alpha_eq, classify_wires, eps_reduce, mono_rewrite, reduce, Address, AddressSet, Monomial,
    Net, Pillar, Status, Strategy,
};

fn net(name: &str) -> Net {
    corpus().remove(name).unwrap_or_else(|| panic!("no fixture {name}"))
}

#[test]
fn fig1_wire_census() {
    // Counted by hand from the fixture: seven axioms touching no principal
    // port, the a-b and e1-e2 cuts, the v self-circle plus the free loop.
    let r = classify_wires(&net("fig1"));
    assert_eq!(r.count(WireClass::ProperAxiom), 7);
    assert_eq!(r.count(WireClass::ProperCut), 2);
    assert_eq!(r.axiom_cuts(), 2);
    assert_eq!(r.loops, 1);
}

#[test]
fn pingpong_fixtures_are_the_recursion_solutions() {
    // pingpong_1 delays port 2 and pingpong_2 delays port 1.
    for (fixture, late) in [("pingpong_1", 2), ("pingpong_2", 1)] {
        let solved = untagged(&solve_recursion(&ping_pong_spec(late)).expect("solve"));
        assert!(alpha_eq(&net(fixture), &solved), "{fixture}");
    }
}

#[test]
fn wire_is_its_own_edifice() {
    let p = all_obs_paths(&net("wire"), 5);
    let mut want = AddressSet::new();
    want.insert(Address::wire(1, 2));
    assert_eq!(p.addrs, want);
    assert!(p.exhausted);
}

#[test]
fn fig4_observes_exactly_the_capped_leaf_pair() {
    // Port 1 carries ζ then ζ on its first branch, whose two leaves are tied.
    let p = all_obs_paths(&net("fig4"), 30);
    let mut want = AddressSet::new();
    want.insert(Address::new(Pillar::of("", "pp", 1), Pillar::of("", "pq", 1)));
    assert_eq!(p.addrs, want);
    assert_eq!(observability(&net("fig4"), 30), Observability::ImmediatelyObservable);
}

#[test]
fn fig12_pair_is_blind_and_identified() {
    let (mu, nu) = (net("fig12_mu"), net("fig12_nu"));
    assert_eq!(observability(&mu, 20), Observability::Blind);
    assert_eq!(observability(&nu, 20), Observability::Blind);
    assert!(matches!(fin_ax_eq(&mu, &nu, 20).expect("fin-ax"), EqVerdict::Equal | EqVerdict::EqualUpTo(_)));
    assert_eq!(beta_eps_eq(&mu, &nu, 20).expect("beta-eps"), EqVerdict::Equal);
}

#[test]
fn quasi_wire_sheds_its_closed_part() {
    let q = net("quasi_wire");
    assert_eq!(reduce(&q, Strategy::FullParallel, 20).status, Status::BudgetExhausted);
    assert_eq!(beta_eps_eq(&q, &Net::wire(), 20).expect("beta-eps"), EqVerdict::Equal);
}

#[test]
fn loop_erases_to_the_empty_net() {
    let out = eps_reduce(&net("loop"), 5);
    assert_eq!(out.status, Status::CutFree);
    assert!(alpha_eq(&out.net, &Net::empty()));
}

#[test]
fn iota_keeps_emitting() {
    let short = all_obs_paths(&net("iota"), 4).addrs.len();
    let long = all_obs_paths(&net("iota"), 10).addrs.len();
    assert!(short > 0 && long > short);
}

#[test]
fn monomial_oracles() {
    // g* d commutes to d g*; c* c cancels to the unit.
    let m = |s: &str| Monomial::parse(s).expect("monomial");
    assert_eq!(mono_rewrite(&m("g*d")), m("dg*"));
    assert_eq!(mono_rewrite(&m("c*c")), Monomial::one());
    // Negative atoms count the positive atoms to their right.
    assert_eq!(mono_value(&m("c*dc*f")), 3);
    assert_eq!(mono_value(&m("cdf*")), 0);
}
