//! Observability predicates, tests, and budgeted semi-decision procedures
//! for the observational equivalences.
//!
//! Every checker takes explicit budgets. Distinguished verdicts carry a
//! test that [`replay_test`] re-executes on both nets.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::address::{obs_axioms, Address, AddressSet};
use crate::canon::canonical_key;
use crate::edifice::{canonicalize, closure_equal_up_to, edifice_equal, edifice_subset, truncate, vault_contained};
use crate::error::{Error, Result};
use crate::net::{CellKind, Net, PortRef};
use crate::observe::{
    all_obs_paths, blindness_oracle, eps_phase, eps_reduce, finiteness_verdict, BlindVerdict, Finiteness,
    ObsCertificate, ObsPaths, OracleMemo,
};
use crate::parse::serialize_named;
use crate::rewrite::{one_step_reducts, parallel_round, reduce, Status, Strategy};
use crate::structure::{decompose, is_cut_free, plug, Forest, Tree};
use crate::word::{BiWord, Letter, Word};

/// A test: one tree per free port of the tested net, rooted at that port.
/// The free leaves of the trees, port by port and left to right, are the
/// free ports of the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Test {
    /// Tree plugged at each port.
    pub trees: Vec<Tree>,
}

impl Test {
    /// The identity test on `n` ports.
    pub fn identity(n: usize) -> Test {
        Test { trees: vec![Tree::Leaf; n] }
    }

    /// Ports of the tested net.
    pub fn arity(&self) -> usize {
        self.trees.len()
    }

    /// Free ports left after plugging.
    pub fn outputs(&self) -> usize {
        self.trees.iter().map(Tree::leaves).sum()
    }

    /// The test as a context net: ports `1..=arity` are the roots, the
    /// following ports the free leaves.
    pub fn context(&self) -> Net {
        let n = self.arity();
        let mut net = Net::with_interface(n + self.outputs());
        let mut next = n + 1;
        for (k, t) in self.trees.iter().enumerate() {
            for leaf in t.attach(&mut net, PortRef::Free(k + 1), Default::default()) {
                net.link(leaf, PortRef::Free(next));
                next += 1;
            }
        }
        net
    }

    /// Plugs `net` into the test.
    pub fn apply(&self, net: &Net) -> Result<Net> {
        if net.interface() != self.arity() {
            return Err(Error::InterfaceMismatch { expected: self.arity(), found: net.interface() });
        }
        plug(&self.context(), net)
    }

    /// Net-source text of the context.
    pub fn to_source(&self) -> String {
        serialize_named(&self.context(), "test")
    }
}

/// A path tree for one pillar: δ branchings first, then ζ branchings, with
/// ε on every branch off the path.
pub fn path_tree(bw: &BiWord) -> Tree {
    let steps: Vec<(CellKind, Letter)> = bw
        .w1
        .0
        .iter()
        .map(|&l| (CellKind::Delta, l))
        .chain(bw.w2.0.iter().map(|&l| (CellKind::Zeta, l)))
        .collect();
    steps.iter().rev().fold(Tree::Leaf, |sub, &(k, l)| match l {
        Letter::P => Tree::node(k, sub, Tree::EpsLeaf),
        Letter::Q => Tree::node(k, Tree::EpsLeaf, sub),
    })
}

/// A tree with two free leaves at the branch addresses `s` and `t` of one
/// port, ε elsewhere. Fails when the two pillars have intersecting vaults.
pub fn pair_tree(s: &BiWord, t: &BiWord) -> Result<Tree> {
    fn go(a: (&[Letter], &[Letter]), b: (&[Letter], &[Letter])) -> Option<(Tree, bool)> {
        // Returns the tree and whether `a`'s leaf comes first.
        for (kind, c) in [(CellKind::Delta, 0), (CellKind::Zeta, 1)] {
            let (x, y) = if c == 0 { (a.0, b.0) } else { (a.1, b.1) };
            if x.is_empty() || y.is_empty() {
                continue;
            }
            let step = |p: (&[Letter], &[Letter])| -> (Vec<Letter>, Vec<Letter>) {
                if c == 0 {
                    (p.0[1..].to_vec(), p.1.to_vec())
                } else {
                    (p.0.to_vec(), p.1[1..].to_vec())
                }
            };
            let (a2, b2) = (step(a), step(b));
            if x[0] == y[0] {
                let (sub, first) = go((&a2.0, &a2.1), (&b2.0, &b2.1))?;
                let t = match x[0] {
                    Letter::P => Tree::node(kind, sub, Tree::EpsLeaf),
                    Letter::Q => Tree::node(kind, Tree::EpsLeaf, sub),
                };
                return Some((t, first));
            }
            let ta = path_tree(&BiWord { w1: Word(a2.0), w2: Word(a2.1) });
            let tb = path_tree(&BiWord { w1: Word(b2.0), w2: Word(b2.1) });
            return Some(match x[0] {
                Letter::P => (Tree::node(kind, ta, tb), true),
                Letter::Q => (Tree::node(kind, tb, ta), false),
            });
        }
        None
    }
    go((&s.w1.0, &s.w2.0), (&t.w1.0, &t.w2.0))
        .map(|(t, _)| t)
        .ok_or_else(|| Error::PatternMismatch(format!("pillars {s} and {t} have intersecting vaults")))
}

/// Keeps the leaves of `tree` whose 1-based indices are in `keep`; the other
/// leaves are capped with ε.
pub fn prune(tree: &Tree, keep: &[usize]) -> Tree {
    fn go(t: &Tree, keep: &[usize], next: &mut usize) -> Tree {
        match t {
            Tree::Leaf => {
                *next += 1;
                if keep.contains(&*next) {
                    Tree::Leaf
                } else {
                    Tree::EpsLeaf
                }
            }
            Tree::EpsLeaf => Tree::EpsLeaf,
            Tree::Node(k, l, r) => {
                let l = go(l, keep, next);
                let r = go(r, keep, next);
                Tree::node(*k, l, r)
            }
        }
    }
    go(tree, keep, &mut 0)
}

/// The dual-tree test extracting the axiom at `addr` from a net with `n`
/// ports: path trees at the two ports of the address, ε at the others.
pub fn discriminating_test(addr: &Address, n: usize) -> Result<Test> {
    let (i, j) = (addr.a.port, addr.b.port);
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InterfaceMismatch { expected: n, found: i.max(j) });
    }
    let mut trees = vec![Tree::EpsLeaf; n];
    if i == j {
        trees[i - 1] = pair_tree(&addr.a.bw, &addr.b.bw)?;
    } else {
        trees[i - 1] = path_tree(&addr.a.bw);
        trees[j - 1] = path_tree(&addr.b.bw);
    }
    Ok(Test { trees })
}

/// Levels of observability, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observability {
    /// An observable axiom is present now.
    ImmediatelyObservable,
    /// Observable axioms appear and their set is certified finite.
    FinitarilyObservable,
    /// Observable axioms appear; finiteness not established.
    Observable,
    /// Certified blind.
    Blind,
    /// Nothing found within budget.
    Unknown,
}

/// Classifies a net. Immediate observability takes precedence, then
/// finitary, then plain observability.
pub fn observability(net: &Net, budget: usize) -> Observability {
    if !obs_axioms(net).is_empty() {
        return Observability::ImmediatelyObservable;
    }
    let paths = all_obs_paths(net, budget);
    if !paths.addrs.is_empty() {
        return if finiteness_verdict(net, budget) == Finiteness::Finite {
            Observability::FinitarilyObservable
        } else {
            Observability::Observable
        };
    }
    match blindness_oracle(net, budget) {
        BlindVerdict::Blind(_) => Observability::Blind,
        BlindVerdict::Observable(_) => Observability::Observable,
        BlindVerdict::Unknown(_) => Observability::Unknown,
    }
}

/// True when the net has two free ports wired to each other.
pub fn is_quasi_wire(net: &Net) -> bool {
    net.interface() == 2 && net.peer(PortRef::Free(1)) == PortRef::Free(2)
}

/// Finds a test turning the net into a quasi-wire: the port trees of the
/// first reduct showing an observable axiom, with only the axiom's two
/// leaves left free.
pub fn solving_test(net: &Net, budget: usize) -> Option<Test> {
    let mut cur = net.clone();
    for round in 0..=budget {
        let forest = Forest::of(&cur);
        if let Some(&(x, y)) = forest.observable_wires(&cur).first() {
            let (lx, ly) = (&forest.leaf_info[&x], &forest.leaf_info[&y]);
            let trees = (1..=cur.interface())
                .map(|k| {
                    let keep: Vec<usize> = [lx, ly].iter().filter(|l| l.port == k).map(|l| l.index).collect();
                    if keep.is_empty() {
                        Tree::EpsLeaf
                    } else {
                        prune(&forest.trees[k - 1], &keep)
                    }
                })
                .collect();
            return Some(Test { trees });
        }
        if round == budget || parallel_round(&mut cur) == 0 {
            return None;
        }
    }
    None
}

/// What plugging a net into a test produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestOutcome {
    /// Reached a quasi-wire.
    QuasiWire,
    /// βε-normal and not a quasi-wire.
    NormalNonWire,
    /// Certified to produce infinitely many observable axioms.
    Infinite,
    /// Certified blind.
    Blind,
    /// Nothing certified within budget.
    Unknown,
}

/// Plugs `net` into `test` and classifies the result.
pub fn replay_test(test: &Test, net: &Net, budget: usize) -> Result<TestOutcome> {
    let plugged = test.apply(net)?;
    let mut cur = plugged.clone();
    for round in 0..=budget {
        if is_quasi_wire(&cur) {
            return Ok(TestOutcome::QuasiWire);
        }
        if round == budget || parallel_round(&mut cur) == 0 {
            break;
        }
    }
    let e = eps_reduce(&plugged, budget);
    if e.status != Status::BudgetExhausted {
        return Ok(if is_quasi_wire(&e.net) { TestOutcome::QuasiWire } else { TestOutcome::NormalNonWire });
    }
    if finiteness_verdict(&plugged, budget) == Finiteness::Infinite {
        return Ok(TestOutcome::Infinite);
    }
    Ok(match blindness_oracle(&plugged, budget) {
        BlindVerdict::Blind(_) => TestOutcome::Blind,
        _ => TestOutcome::Unknown,
    })
}

/// Verdict of an equivalence checker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqVerdict {
    /// Certified equivalent.
    Equal,
    /// Equivalent as far as depth `k`.
    EqualUpTo(usize),
    /// Separated by a test.
    Distinguished {
        /// The separating test.
        witness: Test,
        /// What the test does to each side.
        evidence: String,
        /// Truncation depth at which the sides differ, when known.
        depth: Option<usize>,
    },
    /// Budget ran out.
    Inconclusive {
        /// Budget used.
        budget: usize,
    },
}

/// JSON report of a verdict: `{verdict, depth?, witness?, replay}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    /// `Equal`, `EqualUpTo`, `Distinguished` or `Inconclusive`.
    pub verdict: String,
    /// Depth for `EqualUpTo`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Net-source text of the witness test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Replay log lines.
    pub replay: Vec<String>,
}

impl EqVerdict {
    /// Short name.
    pub fn name(&self) -> &'static str {
        match self {
            EqVerdict::Equal => "Equal",
            EqVerdict::EqualUpTo(_) => "EqualUpTo",
            EqVerdict::Distinguished { .. } => "Distinguished",
            EqVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    /// Report with the given replay log.
    pub fn report(&self, replay: Vec<String>) -> VerdictReport {
        let (depth, witness) = match self {
            EqVerdict::EqualUpTo(k) => (Some(*k), None),
            EqVerdict::Distinguished { witness, evidence, depth } => {
                let mut r = replay;
                r.insert(0, evidence.clone());
                return VerdictReport {
                    verdict: self.name().into(),
                    depth: *depth,
                    witness: Some(witness.to_source()),
                    replay: r,
                };
            }
            _ => (None, None),
        };
        VerdictReport { verdict: self.name().into(), depth, witness, replay }
    }
}

fn same_interface(mu: &Net, nu: &Net) -> Result<()> {
    if mu.interface() != nu.interface() {
        return Err(Error::InterfaceMismatch { expected: mu.interface(), found: nu.interface() });
    }
    Ok(())
}

fn complete(p: &ObsPaths) -> bool {
    matches!(p.certificate, ObsCertificate::Stopped | ObsCertificate::Exhausted)
}

/// Distinguishing address: an address of `a` whose vault `b` does not cover.
fn uncovered(a: &AddressSet, b: &AddressSet) -> Option<Address> {
    canonicalize(a).iter().find(|x| !vault_contained(x, b)).cloned()
}

fn distinguished_by(addr: &Address, n: usize, owner: &str) -> Result<EqVerdict> {
    let witness = discriminating_test(addr, n)?;
    Ok(EqVerdict::Distinguished {
        witness,
        evidence: format!("{owner} has {addr}; the other edifice misses its vault"),
        depth: None,
    })
}

/// Finitary axiom-equivalence: Equal when both address sets are complete
/// and generate the same edifice.
pub fn fin_ax_eq(mu: &Net, nu: &Net, budget: usize) -> Result<EqVerdict> {
    same_interface(mu, nu)?;
    let n = mu.interface();
    let (a, b) = (all_obs_paths(mu, budget), all_obs_paths(nu, budget));
    let (ca, cb) = (complete(&a), complete(&b));
    if ca && cb {
        if edifice_equal(&a.addrs, &b.addrs) {
            return Ok(EqVerdict::Equal);
        }
        if let Some(x) = uncovered(&a.addrs, &b.addrs) {
            return distinguished_by(&x, n, "left");
        }
        if let Some(x) = uncovered(&b.addrs, &a.addrs) {
            return distinguished_by(&x, n, "right");
        }
    }
    let productive = |p: &ObsPaths| p.certificate == ObsCertificate::Productive;
    for (c, other, side) in [(ca, &b, "left"), (cb, &a, "right")] {
        let mine = if side == "left" { &a } else { &b };
        if c && !mine.addrs.is_empty() && productive(other) {
            return Ok(EqVerdict::Distinguished {
                witness: Test::identity(n),
                evidence: format!("{side} side is finitarily observable, the other produces infinitely many axioms"),
                depth: None,
            });
        }
    }
    // A complete side missing an address the other side already shows.
    if cb {
        if let Some(x) = uncovered(&a.addrs, &b.addrs) {
            return distinguished_by(&x, n, "left");
        }
    }
    if ca {
        if let Some(x) = uncovered(&b.addrs, &a.addrs) {
            return distinguished_by(&x, n, "right");
        }
    }
    Ok(EqVerdict::Inconclusive { budget })
}

/// Axiom-equivalence up to depth `k`: compares the closures of the budgeted
/// address sets at every depth up to `k`.
pub fn ax_eq_up_to(mu: &Net, nu: &Net, k: usize, budget: usize) -> Result<EqVerdict> {
    same_interface(mu, nu)?;
    let n = mu.interface();
    let (a, b) = (all_obs_paths(mu, budget), all_obs_paths(nu, budget));
    if (0..=k).all(|d| closure_equal_up_to(&a.addrs, &b.addrs, d)) {
        return Ok(EqVerdict::EqualUpTo(k));
    }
    for d in 0..=k {
        let (ta, tb) = (truncate(&a.addrs, d), truncate(&b.addrs, d));
        for (mine, theirs, other_complete, side) in
            [(&a, &tb, complete(&b), "left"), (&b, &ta, complete(&a), "right")]
        {
            if !other_complete {
                continue;
            }
            for x in mine.addrs.iter() {
                let single: AddressSet = [x.clone()].into_iter().collect();
                if !truncate(&single, d).pairs.is_subset(&theirs.pairs) {
                    let witness = discriminating_test(x, n)?;
                    return Ok(EqVerdict::Distinguished {
                        witness,
                        evidence: format!("{side} has {x}; truncations differ at depth {d}"),
                        depth: Some(d),
                    });
                }
            }
        }
    }
    Ok(EqVerdict::Inconclusive { budget })
}

/// Canonical keys of budgeted βε-reducts: a breadth-first search over
/// single steps capped at `max_states`, the full-parallel sequence with an
/// ε-phase after every round, and the ε-reduct. States larger than
/// [`JOIN_CELLS`] are recorded but not expanded.
fn reduct_keys(net: &Net, budget: usize, max_states: usize) -> HashSet<String> {
    let mut memo = OracleMemo::new();
    let mut keys = HashSet::new();
    let mut eps_step = |n: &mut Net, keys: &mut HashSet<String>| {
        keys.insert(canonical_key(n));
        if !eps_phase(n, budget, &mut memo).is_empty() {
            *n = n.compacted();
            keys.insert(canonical_key(n));
        }
    };
    let mut cur = net.clone();
    eps_step(&mut cur, &mut keys);
    for _ in 0..budget {
        if cur.cell_count() > JOIN_CELLS || parallel_round(&mut cur) == 0 {
            break;
        }
        eps_step(&mut cur, &mut keys);
    }
    let e = eps_reduce(net, budget);
    keys.insert(canonical_key(&e.net));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(net.clone(), 0usize)]);
    seen.insert(canonical_key(net));
    while let Some((n, depth)) = queue.pop_front() {
        if depth == budget || seen.len() >= max_states || n.cell_count() > JOIN_CELLS {
            continue;
        }
        for r in one_step_reducts(&n) {
            let key = canonical_key(&r);
            if seen.len() < max_states && seen.insert(key.clone()) {
                keys.insert(key);
                queue.push_back((r, depth + 1));
            }
        }
    }
    keys
}

/// Largest state expanded by [`beta_eps_eq`].
pub const JOIN_CELLS: usize = 256;

/// States explored per side by [`beta_eps_eq`].
pub const JOIN_STATES: usize = 2000;

/// βε-equivalence, semi-decided: Equal when budgeted reducts of the two
/// nets share a canonical key.
pub fn beta_eps_eq(mu: &Net, nu: &Net, budget: usize) -> Result<EqVerdict> {
    same_interface(mu, nu)?;
    let (a, b) = (reduct_keys(mu, budget, JOIN_STATES), reduct_keys(nu, budget, JOIN_STATES));
    if a.iter().any(|k| b.contains(k)) {
        Ok(EqVerdict::Equal)
    } else {
        Ok(EqVerdict::Inconclusive { budget })
    }
}

/// Which shape made a port visible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VisibleShape {
    /// The port faces the principal port of a cell of this symbol.
    Principal(CellKind),
    /// The port is a leaf of the tree hanging from another free port.
    LeafOf {
        /// Root port of the tree.
        root: usize,
        /// The tree.
        tree: Tree,
    },
}

/// Visibility of a port.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Visibility {
    /// Some reduct shows one of the two shapes at the port.
    Visible(VisibleShape),
    /// Budget ran out.
    NotVisibleWithinBudget,
    /// The full-parallel sequence ended or repeated without ever showing a
    /// shape; both shapes persist under reduction, so none will appear.
    ProvablyNotVisible,
}

fn immediately_visible(net: &Net, port: usize) -> Option<VisibleShape> {
    match net.peer(PortRef::Free(port)) {
        PortRef::Cell(c, s) if s == crate::net::Slot::Principal => Some(VisibleShape::Principal(net.kind(c))),
        q => {
            let forest = Forest::of(net);
            forest
                .leaf_info
                .get(&q)
                .filter(|l| l.port != port)
                .map(|l| VisibleShape::LeafOf { root: l.port, tree: forest.trees[l.port - 1].clone() })
        }
    }
}

/// Decides visibility of `port` along the full-parallel sequence.
pub fn visible(net: &Net, port: usize, budget: usize) -> Result<Visibility> {
    if port == 0 || port > net.interface() {
        return Err(Error::InterfaceMismatch { expected: net.interface(), found: port });
    }
    let mut cur = net.clone();
    let mut seen = HashSet::new();
    for round in 0..=budget {
        if let Some(shape) = immediately_visible(&cur, port) {
            return Ok(Visibility::Visible(shape));
        }
        if !seen.insert(canonical_key(&cur)) {
            return Ok(Visibility::ProvablyNotVisible);
        }
        if round == budget {
            break;
        }
        if parallel_round(&mut cur) == 0 {
            return Ok(Visibility::ProvablyNotVisible);
        }
        cur = cur.compacted();
    }
    Ok(Visibility::NotVisibleWithinBudget)
}

/// Visible equivalence, checked over tests only: the identity and the
/// solving tests of both sides. Distinguished when some port is visible on
/// one side and provably not visible on the other; Inconclusive otherwise,
/// since the full quantification over contexts is out of reach.
pub fn visible_eq(mu: &Net, nu: &Net, budget: usize) -> Result<EqVerdict> {
    same_interface(mu, nu)?;
    let mut tests = vec![Test::identity(mu.interface())];
    tests.extend(solving_test(mu, budget));
    tests.extend(solving_test(nu, budget));
    for test in tests {
        let (a, b) = (test.apply(mu)?, test.apply(nu)?);
        for port in 1..=a.interface() {
            let (va, vb) = (visible(&a, port, budget)?, visible(&b, port, budget)?);
            let split = |x: &Visibility, y: &Visibility| {
                matches!(x, Visibility::Visible(_)) && *y == Visibility::ProvablyNotVisible
            };
            if split(&va, &vb) || split(&vb, &va) {
                return Ok(EqVerdict::Distinguished {
                    witness: test,
                    evidence: format!("port {port}: left {va:?}, right {vb:?}"),
                    depth: None,
                });
            }
        }
    }
    Ok(EqVerdict::Inconclusive { budget })
}

/// Three-valued answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tri {
    /// Holds.
    Yes,
    /// Fails.
    No,
    /// Not settled within budget.
    Unknown,
}

/// Whether a cut-free `candidate` approximates `net`: its edifice must be
/// contained in the budgeted edifice of `net`.
pub fn is_approximation(candidate: &Net, net: &Net, budget: usize) -> Result<Tri> {
    if !is_cut_free(candidate) {
        return Err(Error::NotCutFree);
    }
    same_interface(candidate, net)?;
    let mine = obs_axioms(candidate);
    let theirs = all_obs_paths(net, budget);
    if edifice_subset(&mine, &theirs.addrs) {
        Ok(Tri::Yes)
    } else if complete(&theirs) {
        Ok(Tri::No)
    } else {
        Ok(Tri::Unknown)
    }
}

/// The collapse construction: decompose the net, replace the feedback
/// wires and the port wires by ε pairs, and reduce. The result is εₙ.
pub fn collapse_replay(net: &Net, budget: usize) -> Net {
    let n = net.interface();
    let (nu, _) = decompose(net);
    let mut closed = plug(&Net::eps_net(nu.interface()), &nu).expect("matching interface");
    // Loops are erased by an ε-step.
    closed.set_loops(0);
    let whole = Net::eps_net(n).juxtapose(&closed);
    reduce(&whole, Strategy::FullParallel, budget).net.compacted()
}

/// One genericity instance: `candidate` approximates `C[μ]` for a blind μ;
/// checks that it also approximates `C[ξ]`.
pub fn genericity_holds(context: &Net, mu: &Net, xi: &Net, candidate: &Net, budget: usize) -> Result<Tri> {
    let with_mu = plug(context, mu)?;
    let with_xi = plug(context, xi)?;
    match is_approximation(candidate, &with_mu, budget)? {
        Tri::Yes => is_approximation(candidate, &with_xi, budget),
        other => Ok(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::corpus;
    use crate::rewrite::eta0_expand;

    #[test]
    fn path_trees() {
        assert_eq!(path_tree(&BiWord::empty()), Tree::Leaf);
        let t = path_tree(&BiWord::from_strs("q", "p"));
        let z = Tree::node(CellKind::Zeta, Tree::Leaf, Tree::EpsLeaf);
        assert_eq!(t, Tree::node(CellKind::Delta, Tree::EpsLeaf, z));
    }

    #[test]
    fn pair_tree_fig4() {
        let t = pair_tree(&BiWord::from_strs("", "pp"), &BiWord::from_strs("", "pq")).unwrap();
        let z = CellKind::Zeta;
        assert_eq!(t, Tree::node(z, Tree::node(z, Tree::Leaf, Tree::Leaf), Tree::EpsLeaf));
        assert!(pair_tree(&BiWord::from_strs("p", ""), &BiWord::from_strs("", "p")).is_err());
    }

    #[test]
    fn observability_levels() {
        let c = corpus();
        assert_eq!(observability(&Net::wire(), 10), Observability::ImmediatelyObservable);
        assert_eq!(observability(&Net::eps_net(2), 10), Observability::Blind);
        assert_eq!(observability(&c["iota"], 10), Observability::Observable);
    }

    #[test]
    fn solving_tests_reach_quasi_wires() {
        let c = corpus();
        for name in ["wire", "fig4", "quasi_wire", "iota", "fig1"] {
            let t = solving_test(&c[name], 20).unwrap();
            assert_eq!(replay_test(&t, &c[name], 40).unwrap(), TestOutcome::QuasiWire, "{name}");
        }
        assert!(solving_test(&Net::eps_net(2), 10).is_none());
        assert_eq!(solving_test(&c["quasi_wire"], 10), Some(Test::identity(2)));
    }

    #[test]
    fn discriminating_examples() {
        let c = corpus();
        let w = Address::wire(1, 2);
        let t = discriminating_test(&w, 2).unwrap();
        assert_eq!(replay_test(&t, &Net::wire(), 10).unwrap(), TestOutcome::QuasiWire);
        assert_ne!(replay_test(&t, &Net::eps_net(2), 10).unwrap(), TestOutcome::QuasiWire);
        let f4 = all_obs_paths(&c["fig4"], 10).addrs.iter().next().unwrap().clone();
        let t = discriminating_test(&f4, 1).unwrap();
        assert_eq!(replay_test(&t, &c["fig4"], 20).unwrap(), TestOutcome::QuasiWire);
        assert_ne!(replay_test(&t, &Net::eps_net(1), 20).unwrap(), TestOutcome::QuasiWire);
        let half = Address::new(
            crate::address::Pillar::of("p", "", 1),
            crate::address::Pillar::of("p", "", 2),
        );
        let t = discriminating_test(&half, 2).unwrap();
        assert_eq!(replay_test(&t, &Net::wire(), 20).unwrap(), TestOutcome::QuasiWire);
    }

    #[test]
    fn fin_ax_examples() {
        let c = corpus();
        let w = Net::wire();
        let ew = eta0_expand(&w, PortRef::Free(1), CellKind::Delta).unwrap();
        assert_eq!(fin_ax_eq(&w, &ew, 10).unwrap(), EqVerdict::Equal);
        assert!(matches!(fin_ax_eq(&w, &c["iota"], 10).unwrap(), EqVerdict::Distinguished { .. }));
        assert_eq!(fin_ax_eq(&c["fig12_mu"], &c["fig12_nu"], 10).unwrap(), EqVerdict::Equal);
        assert!(fin_ax_eq(&w, &Net::eps_net(1), 5).is_err());
    }

    #[test]
    fn ax_up_to_examples() {
        let c = corpus();
        assert_eq!(ax_eq_up_to(&c["iota"], &Net::wire(), 5, 8).unwrap(), EqVerdict::EqualUpTo(5));
        assert!(matches!(ax_eq_up_to(&Net::wire(), &Net::eps_net(2), 3, 5).unwrap(), EqVerdict::Distinguished { .. }));
    }

    #[test]
    fn beta_eps_examples() {
        let pair = Net::active_pair(CellKind::Delta, CellKind::Zeta);
        let r = crate::rewrite::one_step_reducts(&pair).remove(0);
        assert_eq!(beta_eps_eq(&pair, &r, 5).unwrap(), EqVerdict::Equal);
        let ee = crate::parse::parse_net("net e { interface 0; cell a: eps; cell b: eps; wire a.p b.p; }").unwrap();
        assert_eq!(beta_eps_eq(&ee, &Net::empty(), 3).unwrap(), EqVerdict::Equal);
    }

    #[test]
    fn visibility_examples() {
        let c = corpus();
        assert_eq!(visible(&c["fig12_mu"], 1, 5).unwrap(), Visibility::Visible(VisibleShape::Principal(CellKind::Eps)));
        assert_eq!(visible(&c["fig12_nu"], 1, 50).unwrap(), Visibility::ProvablyNotVisible);
        assert!(matches!(visible_eq(&c["fig12_mu"], &c["fig12_nu"], 20).unwrap(), EqVerdict::Distinguished { .. }));
        assert!(matches!(visible(&Net::wire(), 1, 1).unwrap(), Visibility::Visible(VisibleShape::LeafOf { root: 2, .. })));
    }

    #[test]
    fn approximations() {
        let c = corpus();
        assert_eq!(is_approximation(&Net::eps_net(2), &c["iota"], 5).unwrap(), Tri::Yes);
        assert_eq!(is_approximation(&Net::wire(), &Net::eps_net(2), 5).unwrap(), Tri::No);
        let pair = Net::active_pair(CellKind::Delta, CellKind::Delta);
        let nf = reduce(&pair, Strategy::FullParallel, 5).net;
        assert_eq!(is_approximation(&nf, &pair, 5).unwrap(), Tri::Yes);
    }

    #[test]
    fn collapse_small() {
        for n in [Net::wire(), Net::active_pair(CellKind::Delta, CellKind::Zeta), Net::loops_net(2)] {
            let k = n.interface();
            assert!(crate::canon::alpha_eq(&collapse_replay(&n, 50), &Net::eps_net(k)));
        }
    }
}
