//! Structural analysis: wire classification, vicious circles, trees hanging
//! from free ports, the canonical form of cut-free nets, decomposition into
//! a cut-free net plus a feedback, and plugging into contexts.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::net::{CellId, CellKind, Net, PortRef, Slot, Tag};
use crate::word::{BiWord, Letter};

/// Classification of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WireClass {
    /// No principal endpoint.
    ProperAxiom,
    /// Principal to principal: an active pair.
    ProperCut,
    /// Principal to auxiliary on a vicious circle.
    AxiomCut,
    /// Any other principal to auxiliary or principal to free wire.
    Internal,
}

/// Result of [`classify_wires`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireReport {
    /// Every wire with its class.
    pub wires: Vec<(PortRef, PortRef, WireClass)>,
    /// Active pairs `(a, b)` with `a < b`.
    pub active_pairs: Vec<(CellId, CellId)>,
    /// Vicious circles as cell lists, each starting at its smallest id.
    pub vicious_circles: Vec<Vec<CellId>>,
    /// Free-standing loops; each is a vicious circle with one axiom-cut.
    pub loops: usize,
}

impl WireReport {
    /// Number of wires of a class (loops excluded).
    pub fn count(&self, class: WireClass) -> usize {
        self.wires.iter().filter(|w| w.2 == class).count()
    }

    /// Axiom-cuts including loops.
    pub fn axiom_cuts(&self) -> usize {
        self.count(WireClass::AxiomCut) + self.loops
    }

    /// Cut-free iff no proper cut, no axiom-cut and no loop.
    pub fn is_cut_free(&self) -> bool {
        self.active_pairs.is_empty() && self.axiom_cuts() == 0
    }
}

/// Vicious circles: cycles of the map sending a cell to the cell whose
/// auxiliary port receives its principal port.
pub fn vicious_circles(net: &Net) -> Vec<Vec<CellId>> {
    let next = |c: CellId| -> Option<CellId> {
        match net.cell(c).ports[0] {
            PortRef::Cell(d, s) if s != Slot::Principal => Some(d),
            _ => None,
        }
    };
    // 0 = unseen, 1 = on current walk, 2 = done.
    let mut state = vec![0u8; net.id_bound()];
    let mut out = Vec::new();
    for start in net.cell_ids() {
        if state[start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = Some(start);
        while let Some(c) = cur {
            if state[c] == 2 {
                break;
            }
            if state[c] == 1 {
                let pos = walk.iter().position(|&x| x == c).expect("on walk");
                let mut cyc: Vec<CellId> = walk[pos..].to_vec();
                let m = cyc.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).expect("non-empty");
                cyc.rotate_left(m);
                out.push(cyc);
                break;
            }
            state[c] = 1;
            walk.push(c);
            cur = next(c);
        }
        for c in walk {
            state[c] = 2;
        }
    }
    out.sort();
    out
}

/// Classifies every wire of the net.
pub fn classify_wires(net: &Net) -> WireReport {
    let circles = vicious_circles(net);
    let mut on_circle = vec![false; net.id_bound()];
    for c in circles.iter().flatten() {
        on_circle[*c] = true;
    }
    let wires = net
        .wires()
        .into_iter()
        .map(|(a, b)| {
            let class = match (a.is_principal(), b.is_principal()) {
                (true, true) => WireClass::ProperCut,
                (false, false) => WireClass::ProperAxiom,
                (true, false) | (false, true) => {
                    let (p, other) = if a.is_principal() { (a, b) } else { (b, a) };
                    let owner = p.cell().expect("principal is a cell port");
                    if on_circle[owner] && other.cell().map_or(false, |d| on_circle[d]) {
                        WireClass::AxiomCut
                    } else {
                        WireClass::Internal
                    }
                }
            };
            (a, b, class)
        })
        .collect();
    WireReport { wires, active_pairs: net.active_pairs(), vicious_circles: circles, loops: net.loops() }
}

/// True when the net has no active pair, no vicious circle and no loop.
pub fn is_cut_free(net: &Net) -> bool {
    net.loops() == 0 && net.active_pairs().is_empty() && vicious_circles(net).is_empty()
}

/// A tree of binary cells with ⌶ and ε leaves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tree {
    /// The one-leaf tree with no cell.
    Leaf,
    /// A single ε cell: a tree with no leaf.
    EpsLeaf,
    /// A binary cell with its two subtrees.
    Node(CellKind, Box<Tree>, Box<Tree>),
}

impl Tree {
    /// Binary node.
    pub fn node(kind: CellKind, l: Tree, r: Tree) -> Tree {
        Tree::Node(kind, Box::new(l), Box::new(r))
    }

    /// Number of ⌶ leaves.
    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::EpsLeaf => 0,
            Tree::Node(_, l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::EpsLeaf => 1,
            Tree::Node(_, l, r) => 1 + l.cells() + r.cells(),
        }
    }

    /// Height counted in cells.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::EpsLeaf => 1,
            Tree::Node(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Branch addresses of all leaves, left to right.
    pub fn leaf_addresses(&self) -> Vec<BiWord> {
        fn go(t: &Tree, at: BiWord, out: &mut Vec<BiWord>) {
            match t {
                Tree::Leaf => out.push(at),
                Tree::EpsLeaf => {}
                Tree::Node(k, l, r) => {
                    for (i, sub) in [(1, l), (2, r)] {
                        let mut next = at.clone();
                        let letter = Letter::of_aux(i);
                        if *k == CellKind::Delta {
                            next.w1 = next.w1.push(letter);
                        } else {
                            next.w2 = next.w2.push(letter);
                        }
                        go(sub, next, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, BiWord::empty(), &mut out);
        out
    }

    /// Builds this tree in `net` with its root attached to the unwired
    /// endpoint `at`. Returns the leaf endpoints, still unwired, left to
    /// right; for [`Tree::Leaf`] that is `at` itself.
    pub fn attach(&self, net: &mut Net, at: PortRef, tag: Tag) -> Vec<PortRef> {
        match self {
            Tree::Leaf => vec![at],
            Tree::EpsLeaf => {
                let e = net.add_tagged(CellKind::Eps, tag);
                net.link(at, PortRef::p(e));
                Vec::new()
            }
            Tree::Node(k, l, r) => {
                let c = net.add_tagged(*k, tag);
                net.link(at, PortRef::p(c));
                let mut out = l.attach(net, PortRef::aux(c, 1), tag);
                out.extend(r.attach(net, PortRef::aux(c, 2), tag));
                out
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "⌶"),
            Tree::EpsLeaf => write!(f, "ε"),
            Tree::Node(k, l, r) => {
                let s = if *k == CellKind::Delta { "δ" } else { "ζ" };
                write!(f, "{s}({l},{r})")
            }
        }
    }
}

/// Branch address of leaf `leaf` (1-based, left to right): δ branchings
/// append to the first word, ζ branchings to the second, root first.
pub fn branch_address(tree: &Tree, leaf: usize) -> Result<BiWord> {
    let all = tree.leaf_addresses();
    if leaf == 0 || leaf > all.len() {
        return Err(Error::LeafOutOfRange { leaf, leaves: all.len() });
    }
    Ok(all[leaf - 1].clone())
}

/// Position of a leaf in the trees hanging from the free ports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafInfo {
    /// Free port at the root of the tree.
    pub port: usize,
    /// 1-based leaf index, left to right.
    pub index: usize,
    /// Branch address of the leaf.
    pub address: BiWord,
}

/// The trees hanging from the free ports of any net.
///
/// The tree at port `k` is found by descending through principal ports: a
/// cell whose principal port faces the port (or a tree leaf) belongs to the
/// tree. Cells in these trees can never interact again.
#[derive(Debug, Clone)]
pub struct Forest {
    /// Tree at each free port.
    pub trees: Vec<Tree>,
    /// Leaf endpoints of each tree, left to right. The endpoint of a ⌶
    /// tree is the free port itself.
    pub leaves: Vec<Vec<PortRef>>,
    /// Leaf endpoint to its position.
    pub leaf_info: HashMap<PortRef, LeafInfo>,
    /// Which cells belong to a tree.
    pub in_tree: Vec<bool>,
}

impl Forest {
    /// Computes the forest of `net`.
    pub fn of(net: &Net) -> Forest {
        let mut in_tree = vec![false; net.id_bound()];
        let mut trees = Vec::new();
        let mut leaves = Vec::new();
        let mut leaf_info = HashMap::new();
        for k in 1..=net.interface() {
            let mut ls = Vec::new();
            let tree = descend(net, PortRef::Free(k), &mut in_tree, &mut ls);
            for (i, (e, addr)) in ls.iter().enumerate() {
                leaf_info.insert(*e, LeafInfo { port: k, index: i + 1, address: addr.clone() });
            }
            leaves.push(ls.into_iter().map(|(e, _)| e).collect());
            trees.push(tree);
        }
        Forest { trees, leaves, leaf_info, in_tree }
    }

    /// Observable axioms: wires joining two leaves, as pairs of leaf
    /// endpoints (each wire once).
    pub fn observable_wires(&self, net: &Net) -> Vec<(PortRef, PortRef)> {
        let mut out = Vec::new();
        for ls in &self.leaves {
            for &e in ls {
                let q = net.peer(e);
                if e < q && self.leaf_info.contains_key(&q) {
                    out.push((e, q));
                }
            }
        }
        out.sort();
        out
    }
}

fn descend(net: &Net, from: PortRef, in_tree: &mut [bool], leaves: &mut Vec<(PortRef, BiWord)>) -> Tree {
    fn go(net: &Net, from: PortRef, at: BiWord, in_tree: &mut [bool], leaves: &mut Vec<(PortRef, BiWord)>) -> Tree {
        match net.peer(from) {
            PortRef::Cell(c, Slot::Principal) => {
                in_tree[c] = true;
                let kind = net.kind(c);
                if kind == CellKind::Eps {
                    return Tree::EpsLeaf;
                }
                let mut subs = Vec::new();
                for i in 1..=2 {
                    let mut next = at.clone();
                    if kind == CellKind::Delta {
                        next.w1 = next.w1.push(Letter::of_aux(i));
                    } else {
                        next.w2 = next.w2.push(Letter::of_aux(i));
                    }
                    subs.push(go(net, PortRef::aux(c, i), next, in_tree, leaves));
                }
                let r = subs.pop().expect("two");
                let l = subs.pop().expect("two");
                Tree::node(kind, l, r)
            }
            _ => {
                leaves.push((from, at));
                Tree::Leaf
            }
        }
    }
    go(net, from, BiWord::empty(), in_tree, leaves)
}

/// A leaf of the canonical form: free port and 1-based leaf index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LeafRef {
    /// Free port of the tree.
    pub port: usize,
    /// Leaf index in that tree.
    pub leaf: usize,
}

/// Trees at the free ports plus the pairing of their leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutFreeForm {
    /// One tree per free port.
    pub trees: Vec<Tree>,
    /// Leaf pairs joined by a wire, each pair sorted, list sorted.
    pub wiring: Vec<(LeafRef, LeafRef)>,
}

impl CutFreeForm {
    /// Rebuilds the net described by the form.
    pub fn reassemble(&self) -> Net {
        let mut net = Net::with_interface(self.trees.len());
        let mut leaves = Vec::new();
        for (k, t) in self.trees.iter().enumerate() {
            leaves.push(t.attach(&mut net, PortRef::Free(k + 1), Tag::default()));
        }
        for (a, b) in &self.wiring {
            let pa = leaves[a.port - 1][a.leaf - 1];
            let pb = leaves[b.port - 1][b.leaf - 1];
            net.link(pa, pb);
        }
        net
    }
}

/// Canonical form of a cut-free net: a tree at each free port and a wiring
/// of their leaves.
pub fn cut_free_canonical_form(net: &Net) -> Result<CutFreeForm> {
    if !is_cut_free(net) {
        return Err(Error::NotCutFree);
    }
    let forest = Forest::of(net);
    if forest.in_tree.iter().filter(|&&b| b).count() != net.cell_count() {
        return Err(Error::NotCutFree);
    }
    let mut wiring = Vec::new();
    for (e, q) in forest.observable_wires(net) {
        let a = &forest.leaf_info[&e];
        let b = &forest.leaf_info[&q];
        let la = LeafRef { port: a.port, leaf: a.index };
        let lb = LeafRef { port: b.port, leaf: b.index };
        wiring.push(if la < lb { (la, lb) } else { (lb, la) });
    }
    wiring.sort();
    Ok(CutFreeForm { trees: forest.trees, wiring })
}

/// A fixpoint-free partial involution on free-port indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Feedback(BTreeMap<usize, usize>);

impl Feedback {
    /// The empty feedback.
    pub fn empty() -> Feedback {
        Feedback::default()
    }

    /// Builds from unordered pairs; rejects fixpoints and overlaps.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Feedback> {
        let mut m = BTreeMap::new();
        for &(i, j) in pairs {
            if i == j || i == 0 || j == 0 {
                return Err(Error::InvalidFeedback(format!("bad pair ({i}, {j})")));
            }
            if m.insert(i, j).is_some() || m.insert(j, i).is_some() {
                return Err(Error::InvalidFeedback(format!("port used twice in ({i}, {j})")));
            }
        }
        Ok(Feedback(m))
    }

    /// Image of `i`, if in the domain.
    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(&i).copied()
    }

    /// True when `i` is in the domain.
    pub fn contains(&self, i: usize) -> bool {
        self.0.contains_key(&i)
    }

    /// Pairs `(i, σ(i))` with `i < σ(i)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.iter().filter(|(i, j)| i < j).map(|(&i, &j)| (i, j)).collect()
    }

    /// Domain, sorted.
    pub fn domain(&self) -> Vec<usize> {
        self.0.keys().copied().collect()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.0.len() / 2
    }

    /// True for the empty feedback.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of two feedbacks with disjoint domains.
    pub fn union(&self, other: &Feedback) -> Result<Feedback> {
        let mut pairs = self.pairs();
        pairs.extend(other.pairs());
        Feedback::from_pairs(&pairs)
    }

    /// The feedback as a wiring context for nets with `n` ports: context
    /// port `i` is wired to `σ(i)`, or to surplus port `n + rank(i)` when
    /// `i` is outside the domain.
    pub fn as_context(&self, n: usize) -> Net {
        let outside: Vec<usize> = (1..=n).filter(|i| !self.contains(*i)).collect();
        let mut c = Net::with_interface(n + outside.len());
        for (i, j) in self.pairs() {
            c.link(PortRef::Free(i), PortRef::Free(j));
        }
        for (r, &i) in outside.iter().enumerate() {
            c.link(PortRef::Free(i), PortRef::Free(n + r + 1));
        }
        c
    }
}

/// Applies a feedback: fuses each pair of ports, renumbering the rest.
pub fn apply_feedback(net: &Net, sigma: &Feedback) -> Result<Net> {
    if let Some(&m) = sigma.domain().last() {
        if m > net.interface() {
            return Err(Error::InvalidFeedback(format!("port {m} beyond interface {}", net.interface())));
        }
    }
    let mut out = net.clone();
    out.fuse_free_pairs(&sigma.pairs());
    Ok(out)
}

/// Splits a net into a cut-free net and a feedback: every proper cut is
/// opened into two fresh ports, then one axiom-cut per vicious circle, then
/// each loop becomes a wire between two fresh ports.
pub fn decompose(net: &Net) -> (Net, Feedback) {
    let mut out = net.clone();
    let mut pairs = Vec::new();
    let mut open = |out: &mut Net, a: PortRef, b: PortRef| {
        let i = out.push_free();
        let j = out.push_free();
        out.link(a, PortRef::Free(i));
        out.link(b, PortRef::Free(j));
        pairs.push((i, j));
    };
    for (a, b) in net.active_pairs() {
        open(&mut out, PortRef::p(a), PortRef::p(b));
    }
    for circle in vicious_circles(&out) {
        let c = circle[0];
        let q = out.peer(PortRef::p(c));
        open(&mut out, PortRef::p(c), q);
    }
    for _ in 0..out.loops() {
        let i = out.push_free();
        let j = out.push_free();
        out.link(PortRef::Free(i), PortRef::Free(j));
        pairs.push((i, j));
    }
    out.set_loops(0);
    (out, Feedback::from_pairs(&pairs).expect("fresh ports"))
}

/// Plugs free port `i` of `net` into free port `i` of `context` for
/// `i = 1..=net.interface()`; the surplus context ports become `1..`.
pub fn plug(context: &Net, net: &Net) -> Result<Net> {
    let (m, n) = (context.interface(), net.interface());
    if m < n {
        return Err(Error::InterfaceTooSmall { context: m, net: n });
    }
    let mut out = context.juxtapose(net);
    let pairs: Vec<(usize, usize)> = (1..=n).map(|i| (i, m + i)).collect();
    out.fuse_free_pairs(&pairs);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::alpha_eq;

    #[test]
    fn branch_address_examples() {
        assert_eq!(branch_address(&Tree::Leaf, 1).unwrap(), BiWord::empty());
        let d = Tree::node(CellKind::Delta, Tree::Leaf, Tree::Leaf);
        assert_eq!(branch_address(&d, 2).unwrap(), BiWord::from_strs("q", ""));
        let z = Tree::node(CellKind::Zeta, d.clone(), Tree::Leaf);
        assert_eq!(branch_address(&z, 1).unwrap(), BiWord::from_strs("p", "p"));
        assert!(branch_address(&z, 4).is_err());
    }

    #[test]
    fn canonical_form_of_small_nets() {
        let w = cut_free_canonical_form(&Net::wire()).unwrap();
        assert_eq!(w.trees, vec![Tree::Leaf, Tree::Leaf]);
        assert_eq!(w.wiring, vec![(LeafRef { port: 1, leaf: 1 }, LeafRef { port: 2, leaf: 1 })]);
        let e = cut_free_canonical_form(&Net::eps_net(2)).unwrap();
        assert_eq!(e.trees, vec![Tree::EpsLeaf, Tree::EpsLeaf]);
        assert!(e.wiring.is_empty());
        let d = cut_free_canonical_form(&Net::single_cell(CellKind::Delta)).unwrap();
        assert_eq!(d.trees[0], Tree::node(CellKind::Delta, Tree::Leaf, Tree::Leaf));
        assert_eq!(d.wiring.len(), 2);
        assert!(alpha_eq(&d.reassemble(), &Net::single_cell(CellKind::Delta)));
    }

    #[test]
    fn decompose_active_pair() {
        let n = Net::active_pair(CellKind::Delta, CellKind::Delta);
        let (nu, sigma) = decompose(&n);
        assert_eq!(nu.interface(), 6);
        assert_eq!(sigma.get(5), Some(6));
        assert!(is_cut_free(&nu));
        assert!(alpha_eq(&apply_feedback(&nu, &sigma).unwrap(), &n));
    }

    #[test]
    fn decompose_loop() {
        let (nu, sigma) = decompose(&Net::loops_net(1));
        assert!(alpha_eq(&nu, &Net::wire()));
        assert_eq!(sigma.pairs(), vec![(1, 2)]);
        assert!(alpha_eq(&apply_feedback(&nu, &sigma).unwrap(), &Net::loops_net(1)));
    }

    #[test]
    fn plug_identity_and_feedback_context() {
        let d = Net::single_cell(CellKind::Zeta);
        assert!(alpha_eq(&plug(&Net::identity_context(3), &d).unwrap(), &d));
        let n = Net::active_pair(CellKind::Delta, CellKind::Zeta);
        let (nu, sigma) = decompose(&n);
        let via_ctx = plug(&sigma.as_context(nu.interface()), &nu).unwrap();
        assert!(alpha_eq(&via_ctx, &n));
    }

    #[test]
    fn feedback_rejects_bad_pairs() {
        assert!(Feedback::from_pairs(&[(1, 1)]).is_err());
        assert!(Feedback::from_pairs(&[(1, 2), (2, 3)]).is_err());
    }
}
