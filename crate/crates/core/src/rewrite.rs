//! β-reduction: the interaction rules, strategies, traces, guided replays
//! and the η moves used to generate test instances.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::net::{CellId, CellKind, Net, PortRef, Tag};
use crate::structure::is_cut_free;

/// Which interaction rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Two cells of the same symbol.
    Anni,
    /// Two cells of different symbols.
    Comm,
    /// An ε-step replacing a blind subnet.
    Eps,
}

impl Rule {
    /// Name used in trace logs.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Anni => "anni",
            Rule::Comm => "comm",
            Rule::Eps => "eps",
        }
    }
}

/// One line of a reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Round number, starting at 1.
    pub round: usize,
    /// Rule fired.
    pub rule: Rule,
    /// Cells involved, as arena ids of the net at that moment.
    pub cells: Vec<CellId>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        write!(f, "round {}: rule={} at {}", self.round, self.rule.name(), cells.join(" "))
    }
}

/// How active pairs are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Every pair present at the start of a round fires in that round.
    FullParallel,
    /// One pair at a time, smallest cell id first.
    Leftmost,
    /// One pair at a time, chosen by a seeded generator.
    Random(u64),
}

/// Final state of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// No active pair is left (and for βε-reduction no nontrivial ε-tree),
    /// but the net still has vicious circles or loops.
    Normal,
    /// A cut-free net was reached.
    CutFree,
    /// The round budget ran out with active pairs left.
    BudgetExhausted,
}

/// Result of [`reduce`] and of the ε-reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionOutcome {
    /// Final net.
    pub net: Net,
    /// Interaction steps performed.
    pub steps: usize,
    /// Rounds performed.
    pub rounds: usize,
    /// How the reduction ended.
    pub status: Status,
    /// Optional step log.
    pub trace: Option<Vec<TraceEntry>>,
}

fn copy_tag(original: &crate::net::Cell, crossed: &crate::net::Cell, aux: usize) -> (Tag, [Option<Tag>; 2]) {
    if original.tag.rebuilds {
        if let Some(t) = crossed.relabel[aux - 1] {
            return (t, [None, None]);
        }
    }
    (original.tag, original.relabel)
}

/// Fires the active pair `(a, b)` in place. The caller guarantees the pair
/// is active.
pub fn fire(net: &mut Net, a: CellId, b: CellId) -> Rule {
    let ka = net.kind(a);
    let kb = net.kind(b);
    let rule = match (ka, kb) {
        (CellKind::Eps, CellKind::Eps) => {
            net.splice(&[PortRef::p(a), PortRef::p(b)], &[]);
            Rule::Anni
        }
        (CellKind::Eps, _) | (_, CellKind::Eps) => {
            let (e, c) = if ka == CellKind::Eps { (a, b) } else { (b, a) };
            let tag = net.cell(e).tag;
            let e1 = net.add_tagged(CellKind::Eps, tag);
            let e2 = net.add_tagged(CellKind::Eps, tag);
            let removed = [PortRef::p(e), PortRef::p(c), PortRef::aux(c, 1), PortRef::aux(c, 2)];
            let glue = [(PortRef::aux(c, 1), PortRef::p(e1)), (PortRef::aux(c, 2), PortRef::p(e2))];
            net.splice(&removed, &glue);
            Rule::Comm
        }
        _ if ka == kb => {
            let removed = [
                PortRef::p(a),
                PortRef::aux(a, 1),
                PortRef::aux(a, 2),
                PortRef::p(b),
                PortRef::aux(b, 1),
                PortRef::aux(b, 2),
            ];
            let glue = [(PortRef::aux(a, 1), PortRef::aux(b, 1)), (PortRef::aux(a, 2), PortRef::aux(b, 2))];
            net.splice(&removed, &glue);
            Rule::Anni
        }
        _ => {
            let (ca, cb) = (net.cell(a).clone(), net.cell(b).clone());
            // Copies of b sit on the aux ports of a, copies of a on those of b.
            let mut bs = [0; 2];
            let mut as_ = [0; 2];
            for i in 1..=2 {
                let (t, r) = copy_tag(&cb, &ca, i);
                bs[i - 1] = net.add_tagged(kb, t);
                net.cell_mut(bs[i - 1]).relabel = r;
                let (t, r) = copy_tag(&ca, &cb, i);
                as_[i - 1] = net.add_tagged(ka, t);
                net.cell_mut(as_[i - 1]).relabel = r;
            }
            for i in 1..=2 {
                for j in 1..=2 {
                    net.link(PortRef::aux(bs[i - 1], j), PortRef::aux(as_[j - 1], i));
                }
            }
            let removed = [
                PortRef::p(a),
                PortRef::aux(a, 1),
                PortRef::aux(a, 2),
                PortRef::p(b),
                PortRef::aux(b, 1),
                PortRef::aux(b, 2),
            ];
            let glue = [
                (PortRef::aux(a, 1), PortRef::p(bs[0])),
                (PortRef::aux(a, 2), PortRef::p(bs[1])),
                (PortRef::aux(b, 1), PortRef::p(as_[0])),
                (PortRef::aux(b, 2), PortRef::p(as_[1])),
            ];
            net.splice(&removed, &glue);
            Rule::Comm
        }
    };
    net.remove_cell(a);
    net.remove_cell(b);
    rule
}

/// One β-step on the active pair `(a, b)`.
pub fn reduce_step(net: &Net, a: CellId, b: CellId) -> Result<Net> {
    if !net.is_active_pair(a, b) {
        return Err(Error::NotAnActivePair(a, b));
    }
    let mut out = net.clone();
    fire(&mut out, a, b);
    Ok(out)
}

/// All one-step reducts, one per active pair.
pub fn one_step_reducts(net: &Net) -> Vec<Net> {
    net.active_pairs()
        .into_iter()
        .map(|(a, b)| {
            let mut n = net.clone();
            fire(&mut n, a, b);
            n
        })
        .collect()
}

/// One full-parallel round in place; returns the number of steps.
pub fn parallel_round(net: &mut Net) -> usize {
    let pairs = net.active_pairs();
    for &(a, b) in &pairs {
        fire(net, a, b);
    }
    pairs.len()
}

fn finish_status(net: &Net) -> Status {
    if is_cut_free(net) {
        Status::CutFree
    } else {
        Status::Normal
    }
}

/// Reduces for at most `budget` rounds. A round of a sequential strategy
/// performs as many single steps as there were active pairs at its start.
pub fn reduce(net: &Net, strategy: Strategy, budget: usize) -> ReductionOutcome {
    reduce_inner(net, strategy, budget, false)
}

/// Like [`reduce`], also recording a step log.
pub fn reduce_traced(net: &Net, strategy: Strategy, budget: usize) -> ReductionOutcome {
    reduce_inner(net, strategy, budget, true)
}

fn reduce_inner(net: &Net, strategy: Strategy, budget: usize, traced: bool) -> ReductionOutcome {
    let mut net = net.clone();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut trace = traced.then(Vec::new);
    let (mut steps, mut rounds) = (0, 0);
    let status = loop {
        let pairs = net.active_pairs();
        if pairs.is_empty() {
            break finish_status(&net);
        }
        if rounds == budget {
            break Status::BudgetExhausted;
        }
        rounds += 1;
        let mut log = |rule: Rule, a: CellId, b: CellId| {
            if let Some(t) = trace.as_mut() {
                t.push(TraceEntry { round: rounds, rule, cells: vec![a, b] });
            }
        };
        match strategy {
            Strategy::FullParallel => {
                for &(a, b) in &pairs {
                    let r = fire(&mut net, a, b);
                    log(r, a, b);
                    steps += 1;
                }
            }
            Strategy::Leftmost | Strategy::Random(_) => {
                for _ in 0..pairs.len() {
                    let now = net.active_pairs();
                    let chosen = match rng.as_mut() {
                        Some(r) => now.choose(r).copied(),
                        None => now.first().copied(),
                    };
                    let Some((a, b)) = chosen else { break };
                    let r = fire(&mut net, a, b);
                    log(r, a, b);
                    steps += 1;
                }
            }
        }
    };
    ReductionOutcome { net, steps, rounds, status, trace }
}

/// Full-parallel rounds restricted to active pairs accepted by `allow`,
/// until none is accepted or `budget` rounds pass. Returns the rounds used.
pub fn reduce_guided(net: &mut Net, budget: usize, allow: impl Fn(&Net, CellId, CellId) -> bool) -> usize {
    let mut rounds = 0;
    while rounds < budget {
        let pairs: Vec<_> = net.active_pairs().into_iter().filter(|&(a, b)| allow(net, a, b)).collect();
        if pairs.is_empty() {
            break;
        }
        for (a, b) in pairs {
            fire(net, a, b);
        }
        rounds += 1;
    }
    rounds
}

/// η₀ expansion of the wire between `x` and its peer: two cells of `kind`
/// whose principal ports face the former ends and whose auxiliary ports are
/// wired pairwise.
pub fn eta0_expand(net: &Net, x: PortRef, kind: CellKind) -> Result<Net> {
    if kind == CellKind::Eps {
        return Err(Error::PatternMismatch("η₀ needs a binary symbol".into()));
    }
    let mut out = net.clone();
    let y = out.peer(x);
    if y == PortRef::UNSET {
        return Err(Error::PatternMismatch(format!("{x} is not wired")));
    }
    let a = out.add_cell(kind);
    let b = out.add_cell(kind);
    out.link(x, PortRef::p(a));
    out.link(y, PortRef::p(b));
    out.link(PortRef::aux(a, 1), PortRef::aux(b, 1));
    out.link(PortRef::aux(a, 2), PortRef::aux(b, 2));
    Ok(out)
}

/// η₀ contraction of cells `a`, `b` of the same binary kind whose auxiliary
/// ports are wired pairwise; the wire produced must be a proper axiom.
pub fn eta0_contract(net: &Net, a: CellId, b: CellId) -> Result<Net> {
    let bad = |m: &str| Err(Error::PatternMismatch(m.into()));
    if a == b || !net.contains(a) || !net.contains(b) {
        return bad("two distinct live cells expected");
    }
    let k = net.kind(a);
    if k == CellKind::Eps || net.kind(b) != k {
        return bad("two binary cells of one kind expected");
    }
    if net.peer(PortRef::aux(a, 1)) != PortRef::aux(b, 1) || net.peer(PortRef::aux(a, 2)) != PortRef::aux(b, 2) {
        return bad("auxiliary ports are not wired pairwise");
    }
    let x = net.peer(PortRef::p(a));
    let y = net.peer(PortRef::p(b));
    if x.is_principal() || y.is_principal() {
        return bad("the contracted wire would not be an axiom");
    }
    let mut out = net.clone();
    out.remove_cell(a);
    out.remove_cell(b);
    out.link(x, y);
    Ok(out)
}

/// Cells of an η₁ pattern rooted at `top`: the two children, which must be
/// principal-attached cells of one binary kind different from `top`'s.
pub fn eta1_children(net: &Net, top: CellId) -> Option<(CellId, CellId)> {
    let k = net.kind(top);
    if k == CellKind::Eps {
        return None;
    }
    let c1 = net.peer(PortRef::aux(top, 1));
    let c2 = net.peer(PortRef::aux(top, 2));
    match (c1, c2) {
        (PortRef::Cell(b1, crate::Slot::Principal), PortRef::Cell(b2, crate::Slot::Principal)) => {
            let kb = net.kind(b1);
            (b1 != b2 && kb == net.kind(b2) && kb != k && kb != CellKind::Eps).then_some((b1, b2))
        }
        _ => None,
    }
}

/// η₁ swap at `top`: α(β(x1,x2), β(x3,x4)) becomes β(α(x1,x3), α(x2,x4)).
pub fn eta1_swap(net: &Net, top: CellId) -> Result<Net> {
    let Some((b1, b2)) = eta1_children(net, top) else {
        return Err(Error::PatternMismatch(format!("no η₁ pattern at cell {top}")));
    };
    let ka = net.kind(top);
    let kb = net.kind(b1);
    let root = net.peer(PortRef::p(top));
    let xs = [
        net.peer(PortRef::aux(b1, 1)),
        net.peer(PortRef::aux(b1, 2)),
        net.peer(PortRef::aux(b2, 1)),
        net.peer(PortRef::aux(b2, 2)),
    ];
    let mut out = net.clone();
    let tag = out.cell(top).tag;
    for c in [top, b1, b2] {
        out.remove_cell(c);
    }
    let nb = out.add_tagged(kb, tag);
    let a1 = out.add_tagged(ka, tag);
    let a2 = out.add_tagged(ka, tag);
    // Leaves that were wired among the removed cells' own ports need care:
    // map old endpoints to the new ones first.
    let old = [PortRef::aux(b1, 1), PortRef::aux(b1, 2), PortRef::aux(b2, 1), PortRef::aux(b2, 2)];
    let new = [PortRef::aux(a1, 1), PortRef::aux(a2, 1), PortRef::aux(a1, 2), PortRef::aux(a2, 2)];
    let tr = |p: PortRef| -> PortRef {
        if p == PortRef::p(top) {
            PortRef::p(nb)
        } else if let Some(i) = old.iter().position(|&o| o == p) {
            new[i]
        } else {
            p
        }
    };
    out.link(tr(root), PortRef::p(nb));
    out.link(PortRef::aux(nb, 1), PortRef::p(a1));
    out.link(PortRef::aux(nb, 2), PortRef::p(a2));
    for i in 0..4 {
        out.link(new[i], tr(xs[i]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::alpha_eq;
    use crate::structure::classify_wires;

    #[test]
    fn delta_delta_annihilation_wires_free_ports() {
        let n = Net::active_pair(CellKind::Delta, CellKind::Delta);
        let (a, b) = n.active_pairs()[0];
        let r = reduce_step(&n, a, b).unwrap();
        let mut w = Net::with_interface(4);
        w.link(PortRef::Free(1), PortRef::Free(3));
        w.link(PortRef::Free(2), PortRef::Free(4));
        assert!(alpha_eq(&r, &w));
    }

    #[test]
    fn eps_eps_vanishes() {
        let r = reduce(&Net::active_pair(CellKind::Eps, CellKind::Eps), Strategy::FullParallel, 5);
        assert_eq!(r.net.cell_count(), 0);
        assert_eq!(r.status, Status::CutFree);
    }

    #[test]
    fn commutation_builds_a_square() {
        let n = Net::active_pair(CellKind::Delta, CellKind::Zeta);
        let r = reduce(&n, Strategy::FullParallel, 1);
        assert_eq!(r.net.cell_count(), 4);
        assert_eq!(r.status, Status::CutFree);
        r.net.validate().unwrap();
    }

    #[test]
    fn self_looped_pair_gives_loops() {
        // Both cells with aux ports wired to each other pairwise.
        let mut n = Net::empty();
        let a = n.add_cell(CellKind::Delta);
        let b = n.add_cell(CellKind::Delta);
        n.link(PortRef::p(a), PortRef::p(b));
        n.link(PortRef::aux(a, 1), PortRef::aux(b, 1));
        n.link(PortRef::aux(a, 2), PortRef::aux(b, 2));
        let r = reduce(&n, Strategy::FullParallel, 1);
        assert_eq!(r.net.loops(), 2);
        assert_eq!(classify_wires(&r.net).axiom_cuts(), 2);
    }

    #[test]
    fn eta_moves_are_inverse() {
        let w = Net::wire();
        let e = eta0_expand(&w, PortRef::Free(1), CellKind::Delta).unwrap();
        assert_eq!(e.cell_count(), 2);
        let ids: Vec<_> = e.cell_ids().collect();
        let back = eta0_contract(&e, ids[0], ids[1]).unwrap();
        assert!(alpha_eq(&back, &w));
    }

    #[test]
    fn eta1_is_an_involution() {
        let mut n = Net::with_interface(5);
        let top = n.add_cell(CellKind::Delta);
        let b1 = n.add_cell(CellKind::Zeta);
        let b2 = n.add_cell(CellKind::Zeta);
        n.link(PortRef::p(top), PortRef::Free(1));
        n.link(PortRef::aux(top, 1), PortRef::p(b1));
        n.link(PortRef::aux(top, 2), PortRef::p(b2));
        n.link(PortRef::aux(b1, 1), PortRef::Free(2));
        n.link(PortRef::aux(b1, 2), PortRef::Free(3));
        n.link(PortRef::aux(b2, 1), PortRef::Free(4));
        n.link(PortRef::aux(b2, 2), PortRef::Free(5));
        let s = eta1_swap(&n, top).unwrap();
        s.validate().unwrap();
        assert!(!alpha_eq(&s, &n));
        let new_top = match s.peer(PortRef::Free(1)) {
            PortRef::Cell(c, _) => c,
            _ => panic!(),
        };
        let back = eta1_swap(&s, new_top).unwrap();
        assert!(alpha_eq(&back, &n));
    }

    #[test]
    fn trace_lines_have_the_documented_shape() {
        let r = reduce_traced(&Net::active_pair(CellKind::Delta, CellKind::Zeta), Strategy::FullParallel, 3);
        let t = r.trace.unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].to_string().starts_with("round 1: rule=comm at "));
    }
}
