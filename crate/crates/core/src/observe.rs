//! Observation under full-parallel reduction: the blindness oracle, the
//! ε-reduction, enumeration of observable addresses and finiteness verdicts.
//!
//! The *core* of a net is the set of cells outside the trees hanging from
//! its free ports. Trees never interact again, so the future of a net is
//! determined by its core together with the order of the leaves it is
//! attached to. When the core seen as a standalone net (boundary ordered by
//! leaf position, loops dropped) repeats under full-parallel reduction, the
//! run is periodic from then on. The number of observable axioms produced in
//! one period is then produced again in every later period, which certifies
//! either exhaustion (none produced) or an infinite stream (some produced).

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::address::{obs_axioms_in, Address, AddressSet};
use crate::canon::canonical_key;
use crate::net::{CellId, CellKind, Net, PortRef, Slot};
use crate::rewrite::{parallel_round, ReductionOutcome, Rule, Status, TraceEntry};
use crate::structure::Forest;

/// Why a net was certified blind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlindReason {
    /// No free port, hence no observable axiom ever.
    EmptyInterface,
    /// Reduction stopped without any observable axiom.
    Stuck,
    /// The core repeated without any observable axiom.
    Cycle,
}

/// Outcome of the blindness oracle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlindVerdict {
    /// Certified blind.
    Blind(BlindReason),
    /// An observable axiom was found; its address is the witness.
    Observable(Address),
    /// Nothing certified within the given number of rounds.
    Unknown(usize),
}

impl BlindVerdict {
    /// True for a certified blind verdict.
    pub fn is_blind(&self) -> bool {
        matches!(self, BlindVerdict::Blind(_))
    }
}

/// A connected group of core cells with its boundary.
#[derive(Debug, Clone)]
pub struct Component {
    /// Cells of the group.
    pub cells: Vec<CellId>,
    /// Boundary as (inner endpoint, outer endpoint), in leaf order.
    pub boundary: Vec<(PortRef, PortRef)>,
}

fn leaf_rank(forest: &Forest, q: PortRef) -> (usize, usize, PortRef) {
    match forest.leaf_info.get(&q) {
        Some(info) => (info.port, info.index, q),
        None => (usize::MAX, usize::MAX, q),
    }
}

fn component_of(net: &Net, forest: &Forest, cells: Vec<CellId>, member: &[bool]) -> Component {
    let mut boundary = Vec::new();
    for &c in &cells {
        for e in net.endpoints(c) {
            let q = net.peer(e);
            let inside = q.cell().map_or(false, |d| member[d]);
            if !inside {
                boundary.push((e, q));
            }
        }
    }
    boundary.sort_by_key(|&(_, q)| leaf_rank(forest, q));
    Component { cells, boundary }
}

/// Connected components of the core, ordered by their smallest cell id.
pub fn core_components(net: &Net, forest: &Forest) -> Vec<Component> {
    let mut seen = vec![false; net.id_bound()];
    let mut out = Vec::new();
    for start in net.cell_ids() {
        if forest.in_tree[start] || seen[start] {
            continue;
        }
        let mut cells = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            cells.push(c);
            for e in net.endpoints(c) {
                if let Some(d) = net.peer(e).cell() {
                    if !forest.in_tree[d] && !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        cells.sort_unstable();
        let mut member = vec![false; net.id_bound()];
        for &c in &cells {
            member[c] = true;
        }
        out.push(component_of(net, forest, cells, &member));
    }
    out
}

/// The whole core as one component.
pub fn core_of(net: &Net, forest: &Forest) -> Component {
    let member: Vec<bool> = (0..net.id_bound()).map(|c| net.contains(c) && !forest.in_tree[c]).collect();
    let cells = (0..net.id_bound()).filter(|&c| member[c]).collect();
    component_of(net, forest, cells, &member)
}

/// The component as a standalone net whose port `i` is boundary entry `i`.
pub fn extract(net: &Net, comp: &Component) -> Net {
    let mut out = Net::with_interface(comp.boundary.len());
    let mut map: HashMap<CellId, CellId> = HashMap::new();
    for &c in &comp.cells {
        let cell = net.cell(c);
        let id = out.add_tagged(cell.kind, cell.tag);
        out.cell_mut(id).relabel = cell.relabel;
        map.insert(c, id);
    }
    let tr = |p: PortRef| match p {
        PortRef::Cell(c, s) => PortRef::Cell(map[&c], s),
        f => f,
    };
    for (i, &(inner, _)) in comp.boundary.iter().enumerate() {
        out.link(PortRef::Free(i + 1), tr(inner));
    }
    for &c in &comp.cells {
        for e in net.endpoints(c) {
            let q = net.peer(e);
            if let Some(d) = q.cell() {
                if map.contains_key(&d) && e < q {
                    out.link(tr(e), tr(q));
                }
            }
        }
    }
    out
}

/// Canonical key of the core: what determines all future observations.
pub fn core_key(net: &Net, forest: &Forest) -> String {
    canonical_key(&extract(net, &core_of(net, forest)))
}

/// Replaces a component by one ε cell on each outer endpoint.
pub fn erase_component(net: &mut Net, comp: &Component) {
    for &c in &comp.cells {
        net.remove_cell(c);
    }
    for &(_, q) in &comp.boundary {
        let e = net.add_cell(CellKind::Eps);
        net.link(PortRef::p(e), q);
    }
}

/// Sound, budgeted blindness oracle.
///
/// Empty interface is blind outright. Otherwise the net is reduced with
/// full-parallel rounds: an observable axiom proves observability, while
/// stopping or a repeated core without any observable axiom proves
/// blindness.
pub fn blindness_oracle(net: &Net, budget: usize) -> BlindVerdict {
    if net.interface() == 0 {
        return BlindVerdict::Blind(BlindReason::EmptyInterface);
    }
    let mut cur = net.clone();
    let mut seen = std::collections::HashSet::new();
    for round in 0..=budget {
        let forest = Forest::of(&cur);
        if let Some(a) = obs_axioms_in(&cur, &forest).iter().next() {
            return BlindVerdict::Observable(a.clone());
        }
        if cur.active_pairs().is_empty() {
            return BlindVerdict::Blind(BlindReason::Stuck);
        }
        if !seen.insert(core_key(&cur, &forest)) {
            return BlindVerdict::Blind(BlindReason::Cycle);
        }
        if round == budget {
            break;
        }
        parallel_round(&mut cur);
    }
    BlindVerdict::Unknown(budget)
}

fn eps_tree_marks(net: &Net) -> Vec<bool> {
    let mut mark = vec![false; net.id_bound()];
    for c in net.cell_ids() {
        if net.kind(c) == CellKind::Eps {
            mark[c] = true;
        }
    }
    loop {
        let mut changed = false;
        for c in net.cell_ids() {
            if mark[c] {
                continue;
            }
            let ok = (1..=2).all(|i| match net.peer(PortRef::aux(c, i)) {
                PortRef::Cell(d, Slot::Principal) => mark[d],
                _ => false,
            });
            if ok {
                mark[c] = true;
                changed = true;
            }
        }
        if !changed {
            return mark;
        }
    }
}

fn nontrivial_eps_roots(net: &Net, mark: &[bool]) -> Vec<CellId> {
    net.cell_ids()
        .filter(|&c| mark[c] && net.kind(c) != CellKind::Eps)
        .filter(|&c| match net.peer(PortRef::p(c)) {
            PortRef::Cell(d, s) if s != Slot::Principal => !mark[d],
            _ => true,
        })
        .collect()
}

/// True when no binary cell has both auxiliary ports fed by ε-trees.
pub fn has_only_trivial_eps_trees(net: &Net) -> bool {
    let mark = eps_tree_marks(net);
    nontrivial_eps_roots(net, &mark).is_empty()
}

/// True for a cut-free net whose ε-trees are all single ε cells.
pub fn is_beta_eps_normal(net: &Net) -> bool {
    crate::structure::is_cut_free(net) && has_only_trivial_eps_trees(net)
}

/// Collapses every maximal nontrivial ε-tree to one ε cell. Returns the
/// roots that were collapsed.
pub fn collapse_eps_trees(net: &mut Net) -> Vec<CellId> {
    let mark = eps_tree_marks(net);
    let roots = nontrivial_eps_roots(net, &mark);
    for &r in &roots {
        let mut stack = vec![r];
        let mut cells = Vec::new();
        while let Some(c) = stack.pop() {
            cells.push(c);
            if net.kind(c) != CellKind::Eps {
                for i in 1..=2 {
                    if let Some(d) = net.peer(PortRef::aux(c, i)).cell() {
                        stack.push(d);
                    }
                }
            }
        }
        let outer = net.peer(PortRef::p(r));
        let tag = net.cell(r).tag;
        for c in cells {
            net.remove_cell(c);
        }
        let e = net.add_tagged(CellKind::Eps, tag);
        net.link(PortRef::p(e), outer);
    }
    roots
}

/// Memo of oracle verdicts by canonical key.
pub type OracleMemo = HashMap<String, BlindVerdict>;

/// One ε-phase: collapse nontrivial ε-trees, drop loops and closed
/// components (both blind with an empty boundary), and replace every core
/// component the oracle certifies blind by ε cells. Returns the log of
/// ε-steps as lists of erased cells.
pub fn eps_phase(net: &mut Net, oracle_budget: usize, memo: &mut OracleMemo) -> Vec<Vec<CellId>> {
    let mut log: Vec<Vec<CellId>> = collapse_eps_trees(net).into_iter().map(|r| vec![r]).collect();
    let loops = net.loops();
    let closed = net.drop_closed_components();
    if loops > 0 || closed > 0 {
        log.push(Vec::new());
    }
    let forest = Forest::of(net);
    for comp in core_components(net, &forest) {
        let sub = extract(net, &comp);
        let key = canonical_key(&sub);
        let verdict = memo.entry(key).or_insert_with(|| blindness_oracle(&sub, oracle_budget)).clone();
        if verdict.is_blind() {
            erase_component(net, &comp);
            log.push(comp.cells.clone());
        }
    }
    log
}

/// βε-reduction: ε-phases interleaved with full-parallel β-rounds, for at
/// most `budget` rounds. The oracle gets the same budget per component.
pub fn eps_reduce(net: &Net, budget: usize) -> ReductionOutcome {
    eps_reduce_with(net, budget, budget)
}

/// [`eps_reduce`] with a separate oracle budget.
pub fn eps_reduce_with(net: &Net, budget: usize, oracle_budget: usize) -> ReductionOutcome {
    let mut cur = net.clone();
    let mut memo = OracleMemo::new();
    let mut trace = Vec::new();
    let (mut steps, mut rounds) = (0, 0);
    let status = loop {
        loop {
            let log = eps_phase(&mut cur, oracle_budget, &mut memo);
            if log.is_empty() {
                break;
            }
            for cells in log {
                steps += 1;
                trace.push(TraceEntry { round: rounds, rule: Rule::Eps, cells });
            }
        }
        if cur.active_pairs().is_empty() {
            break if crate::structure::is_cut_free(&cur) { Status::CutFree } else { Status::Normal };
        }
        if rounds == budget {
            break Status::BudgetExhausted;
        }
        rounds += 1;
        for (a, b) in cur.active_pairs() {
            let rule = crate::rewrite::fire(&mut cur, a, b);
            steps += 1;
            trace.push(TraceEntry { round: rounds, rule, cells: vec![a, b] });
        }
    };
    ReductionOutcome { net: cur.compacted(), steps, rounds, status, trace: Some(trace) }
}

/// How an enumeration of observable addresses ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObsCertificate {
    /// No active pair was left.
    Stopped,
    /// The core repeated and no address was produced in the period.
    Exhausted,
    /// The core repeated and the period produced new observable axioms.
    Productive,
    /// The budget ran out first.
    None,
}

/// Observable addresses met along the full-parallel sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObsPaths {
    /// Union of the observable axioms of every visited reduct.
    pub addrs: AddressSet,
    /// True when `addrs` is provably all there will ever be.
    pub exhausted: bool,
    /// How the run ended.
    pub certificate: ObsCertificate,
    /// Rounds performed.
    pub rounds: usize,
}

/// Union of observable addresses over at most `budget` full-parallel rounds.
///
/// A productive cycle does not stop the run, so the set keeps growing up to
/// the budget. Parts cut off from the interface are dropped as they appear.
pub fn all_obs_paths(net: &Net, budget: usize) -> ObsPaths {
    let mut cur = net.clone();
    cur.drop_closed_components();
    let mut addrs = AddressSet::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut certificate = ObsCertificate::None;
    let mut rounds = 0;
    loop {
        let forest = Forest::of(&cur);
        let now = obs_axioms_in(&cur, &forest);
        let count = now.len();
        addrs.extend(&now);
        if cur.active_pairs().is_empty() {
            certificate = ObsCertificate::Stopped;
            break;
        }
        if certificate == ObsCertificate::None {
            let key = core_key(&cur, &forest);
            if let Some(&before) = seen.get(&key) {
                if before == count {
                    certificate = ObsCertificate::Exhausted;
                    break;
                }
                certificate = ObsCertificate::Productive;
            } else {
                seen.insert(key, count);
            }
        }
        if rounds == budget {
            break;
        }
        parallel_round(&mut cur);
        cur.drop_closed_components();
        rounds += 1;
    }
    let exhausted = matches!(certificate, ObsCertificate::Stopped | ObsCertificate::Exhausted);
    ObsPaths { addrs, exhausted, certificate, rounds }
}

/// Whether a net develops finitely many observable axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Finiteness {
    /// βε-normalizable, or provably no new address.
    Finite,
    /// A productive cycle was found.
    Infinite,
    /// Nothing certified within the budget.
    Unknown,
}

/// Finiteness verdict from the ε-reduction and the cycle certificates.
pub fn finiteness_verdict(net: &Net, budget: usize) -> Finiteness {
    if matches!(eps_reduce(net, budget).status, Status::Normal | Status::CutFree) {
        return Finiteness::Finite;
    }
    match all_obs_paths(net, budget).certificate {
        ObsCertificate::Stopped | ObsCertificate::Exhausted => Finiteness::Finite,
        ObsCertificate::Productive => Finiteness::Infinite,
        ObsCertificate::None => Finiteness::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_net;

    #[test]
    fn oracle_tiers() {
        assert_eq!(blindness_oracle(&Net::eps_net(2), 5), BlindVerdict::Blind(BlindReason::Stuck));
        assert_eq!(blindness_oracle(&Net::loops_net(1), 5), BlindVerdict::Blind(BlindReason::EmptyInterface));
        assert_eq!(blindness_oracle(&Net::wire(), 5), BlindVerdict::Observable(Address::wire(1, 2)));
    }

    #[test]
    fn loop_erases_to_empty() {
        let out = eps_reduce(&Net::loops_net(1), 5);
        assert_eq!(out.status, Status::CutFree);
        assert!(crate::canon::alpha_eq(&out.net, &Net::empty()));
    }

    #[test]
    fn nontrivial_eps_tree_is_not_normal() {
        let n = parse_net(
            "net t { interface 1; cell d: delta; cell a: eps; cell b: eps;
             wire d.p free.1; wire d.1 a.p; wire d.2 b.p; }",
        )
        .unwrap();
        assert!(!is_beta_eps_normal(&n));
        let out = eps_reduce(&n, 3);
        assert!(crate::canon::alpha_eq(&out.net, &Net::eps_net(1)));
        assert!(is_beta_eps_normal(&out.net));
    }

    #[test]
    fn cut_free_nets_are_exhausted_at_once() {
        let r = all_obs_paths(&Net::wire(), 4);
        assert!(r.exhausted);
        assert_eq!(r.rounds, 0);
        assert_eq!(finiteness_verdict(&Net::eps_net(2), 4), Finiteness::Finite);
    }
}
