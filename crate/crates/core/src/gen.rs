//! Seeded generators of random nets, trees, cut-free nets and feedbacks.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::net::{CellKind, Net, PortRef, Slot};
use crate::rewrite::parallel_round;
use crate::structure::{is_cut_free, Feedback, Tree};

/// Shape of the random nets drawn by [`random_net`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetShape {
    /// Largest number of cells.
    pub max_cells: usize,
    /// Largest interface.
    pub max_interface: usize,
    /// Probability that a cell is ε.
    pub eps_prob: f64,
}

impl NetShape {
    /// Shape with the given bounds and a 20% ε rate.
    pub fn new(max_cells: usize, max_interface: usize) -> NetShape {
        NetShape { max_cells, max_interface, eps_prob: 0.2 }
    }
}

fn random_kind<R: Rng>(rng: &mut R, eps_prob: f64) -> CellKind {
    if rng.gen_bool(eps_prob) {
        CellKind::Eps
    } else if rng.gen_bool(0.5) {
        CellKind::Delta
    } else {
        CellKind::Zeta
    }
}

/// Wires every endpoint of a net (cells already added, nothing linked) by a
/// uniform perfect matching. The endpoint count must be even.
fn random_matching<R: Rng>(rng: &mut R, net: &mut Net) {
    let mut ends: Vec<PortRef> = (1..=net.interface()).map(PortRef::Free).collect();
    for c in net.cell_ids().collect::<Vec<_>>() {
        for s in 0..=net.kind(c).arity() {
            ends.push(PortRef::Cell(c, Slot::from_index(s)));
        }
    }
    debug_assert!(ends.len() % 2 == 0);
    ends.shuffle(rng);
    for pair in ends.chunks(2) {
        net.link(pair[0], pair[1]);
    }
}

/// A uniformly wired random net with at least one cell.
pub fn random_net<R: Rng>(rng: &mut R, shape: &NetShape) -> Net {
    let cells = rng.gen_range(1..=shape.max_cells.max(1));
    let mut kinds: Vec<CellKind> = (0..cells).map(|_| random_kind(rng, shape.eps_prob)).collect();
    let mut interface = rng.gen_range(0..=shape.max_interface);
    let ends: usize = kinds.iter().map(|k| k.arity() + 1).sum::<usize>() + interface;
    if ends % 2 == 1 {
        if interface < shape.max_interface {
            interface += 1;
        } else if interface > 0 {
            interface -= 1;
        } else if kinds.len() < shape.max_cells.max(1) {
            kinds.push(CellKind::Eps);
        } else {
            kinds.pop();
            if kinds.is_empty() {
                kinds.push(CellKind::Delta);
                kinds.push(CellKind::Eps);
            }
        }
    }
    let mut net = Net::with_interface(interface);
    for k in kinds {
        net.add_cell(k);
    }
    random_matching(rng, &mut net);
    net
}

/// Growth factor beyond which a draw is rejected as exploding.
const GROWTH_CAP: usize = 16;

/// True when full-parallel rounds reach a cut-free net within `budget`
/// rounds without the net outgrowing `GROWTH_CAP` times its size.
fn reaches_cut_free(net: &Net, budget: usize) -> bool {
    let cap = GROWTH_CAP * net.cell_count().max(4);
    let mut cur = net.clone();
    for _ in 0..budget {
        if parallel_round(&mut cur) == 0 {
            return is_cut_free(&cur);
        }
        if cur.cell_count() > cap {
            return false;
        }
    }
    parallel_round(&mut cur) == 0 && is_cut_free(&cur)
}

/// True when `rounds` full-parallel rounds never push the net above `cap`
/// cells. Used to skip exploding draws before budgeted analyses.
pub fn stays_small(net: &Net, rounds: usize, cap: usize) -> bool {
    let mut cur = net.clone();
    for _ in 0..rounds {
        if cur.cell_count() > cap {
            return false;
        }
        if parallel_round(&mut cur) == 0 {
            return true;
        }
    }
    cur.cell_count() <= cap
}

/// A random net whose full-parallel reduction reaches a cut-free net within
/// `budget` rounds, without exploding on the way. Gives up after `tries`
/// draws.
pub fn random_total_net<R: Rng>(rng: &mut R, shape: &NetShape, budget: usize, tries: usize) -> Option<Net> {
    (0..tries).map(|_| random_net(rng, shape)).find(|n| reaches_cut_free(n, budget))
}

/// A random tree of height at most `depth` over the given binary symbols.
pub fn random_tree<R: Rng>(rng: &mut R, depth: usize, kinds: &[CellKind], eps_prob: f64) -> Tree {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(eps_prob) { Tree::EpsLeaf } else { Tree::Leaf };
    }
    let k = *kinds.choose(rng).expect("nonempty symbol set");
    Tree::node(k, random_tree(rng, depth - 1, kinds, eps_prob), random_tree(rng, depth - 1, kinds, eps_prob))
}

/// A random cut-free net: a tree of height at most `depth` at each of
/// `interface` ports, leaves paired uniformly; an odd leftover leaf is
/// capped with ε.
pub fn random_cut_free<R: Rng>(rng: &mut R, interface: usize, depth: usize, kinds: &[CellKind]) -> Net {
    let mut net = Net::with_interface(interface);
    let mut leaves = Vec::new();
    for i in 1..=interface {
        let t = random_tree(rng, depth, kinds, 0.15);
        leaves.extend(t.attach(&mut net, PortRef::Free(i), Default::default()));
    }
    leaves.shuffle(rng);
    if leaves.len() % 2 == 1 {
        let e = net.add_cell(CellKind::Eps);
        net.link(PortRef::p(e), leaves.pop().expect("odd"));
    }
    for pair in leaves.chunks(2) {
        net.link(pair[0], pair[1]);
    }
    net
}

/// A random feedback on `n` ports with `pairs` pairs (clamped to `n / 2`).
pub fn random_feedback<R: Rng>(rng: &mut R, n: usize, pairs: usize) -> Feedback {
    let mut ports: Vec<usize> = (1..=n).collect();
    ports.shuffle(rng);
    let k = pairs.min(n / 2);
    let ps: Vec<(usize, usize)> = (0..k).map(|i| (ports[2 * i], ports[2 * i + 1])).collect();
    Feedback::from_pairs(&ps).expect("distinct ports")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_nets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let n = random_net(&mut rng, &NetShape::new(12, 4));
            n.validate().unwrap();
            assert!(n.cell_count() <= 12);
        }
    }

    #[test]
    fn cut_free_generator_is_cut_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = random_cut_free(&mut rng, 3, 3, &CellKind::BINARY);
            n.validate().unwrap();
            assert!(crate::structure::is_cut_free(&n));
        }
    }

    #[test]
    fn feedback_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_feedback(&mut rng, 7, 5);
        assert_eq!(f.len(), 3);
    }
}
