//! The net data model: an arena of cells whose ports store their peers.
//!
//! Every port endpoint (cell ports and free ports) is attached to exactly
//! one other endpoint. Free-standing loops carry no endpoint and are kept
//! as a counter.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a cell inside one [`Net`]. Ids are arena slots and carry no
/// meaning beyond the net that issued them.
pub type CellId = usize;

/// The three cell symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellKind {
    /// Binary duplicator δ.
    Delta,
    /// Binary duplicator ζ.
    Zeta,
    /// Nullary eraser ε.
    Eps,
}

impl CellKind {
    /// Number of auxiliary ports.
    pub fn arity(self) -> usize {
        match self {
            CellKind::Eps => 0,
            _ => 2,
        }
    }

    /// Keyword used by the net-source format.
    pub fn keyword(self) -> &'static str {
        match self {
            CellKind::Delta => "delta",
            CellKind::Zeta => "zeta",
            CellKind::Eps => "eps",
        }
    }

    /// Both binary kinds.
    pub const BINARY: [CellKind; 2] = [CellKind::Delta, CellKind::Zeta];
}

/// A port of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// Principal port.
    Principal,
    /// First auxiliary port.
    Aux1,
    /// Second auxiliary port.
    Aux2,
}

impl Slot {
    /// Slot stored at index `i` of [`Cell::ports`].
    pub fn from_index(i: usize) -> Slot {
        match i {
            0 => Slot::Principal,
            1 => Slot::Aux1,
            2 => Slot::Aux2,
            _ => panic!("slot index {i} out of range"),
        }
    }

    /// Index of this slot in [`Cell::ports`].
    pub fn index(self) -> usize {
        match self {
            Slot::Principal => 0,
            Slot::Aux1 => 1,
            Slot::Aux2 => 2,
        }
    }

    /// Auxiliary slot number `i` (1 or 2).
    pub fn aux(i: usize) -> Slot {
        match i {
            1 => Slot::Aux1,
            2 => Slot::Aux2,
            _ => panic!("aux index {i} out of range"),
        }
    }

    /// Suffix used by the net-source format.
    pub fn suffix(self) -> &'static str {
        match self {
            Slot::Principal => "p",
            Slot::Aux1 => "1",
            Slot::Aux2 => "2",
        }
    }
}

/// An endpoint: a free port (1-based) or a port of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PortRef {
    /// Free port `k`, with `k >= 1`. Index 0 marks a port not yet wired.
    Free(usize),
    /// A port of a cell.
    Cell(CellId, Slot),
}

impl PortRef {
    /// Placeholder stored in freshly created ports.
    pub const UNSET: PortRef = PortRef::Free(0);

    /// Principal port of `c`.
    pub fn p(c: CellId) -> PortRef {
        PortRef::Cell(c, Slot::Principal)
    }

    /// Auxiliary port `i` of `c`.
    pub fn aux(c: CellId, i: usize) -> PortRef {
        PortRef::Cell(c, Slot::aux(i))
    }

    /// The cell owning this endpoint, if any.
    pub fn cell(self) -> Option<CellId> {
        match self {
            PortRef::Cell(c, _) => Some(c),
            PortRef::Free(_) => None,
        }
    }

    /// True for principal ports.
    pub fn is_principal(self) -> bool {
        matches!(self, PortRef::Cell(_, Slot::Principal))
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PortRef::Free(k) => write!(f, "free.{k}"),
            PortRef::Cell(c, s) => write!(f, "#{c}.{}", s.suffix()),
        }
    }
}

/// Role of a cell in replayed encodings. Tags never influence reduction or
/// α-equivalence; they only let replays select which active pairs to fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub enum Role {
    /// Ordinary cell of the net being studied.
    #[default]
    Payload,
    /// Cell of a decoder, duplicator or unpacking tree.
    Machinery,
    /// Cell added by an encoding to pack ports or cells.
    Packing,
}

/// Provenance tag carried through rewriting for replay purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Tag {
    /// What the cell is for.
    pub role: Role,
    /// Encoding depth: cells inside a code live one generation deeper.
    pub generation: u16,
    /// Set on decoder cells whose copies rebuild encoded δ cells; such copies
    /// take the tag stored in [`Cell::relabel`] of the cell they cross.
    pub rebuilds: bool,
}

impl Tag {
    /// Tag with the given role and generation.
    pub fn new(role: Role, generation: u16) -> Tag {
        Tag { role, generation, rebuilds: false }
    }
}

/// A cell: its symbol, the peers of its ports and its replay tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    /// Symbol.
    pub kind: CellKind,
    /// Peer of the principal port, then of aux 1 and aux 2. Entries beyond
    /// the arity are unused and hold [`PortRef::UNSET`].
    pub ports: [PortRef; 3],
    /// Replay tag.
    pub tag: Tag,
    /// Tags handed to rebuilding copies that cross aux 1 / aux 2.
    pub relabel: [Option<Tag>; 2],
}

/// A net of symmetric interaction combinators.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Net {
    cells: Vec<Option<Cell>>,
    free: Vec<PortRef>,
    loops: usize,
    vacant: Vec<CellId>,
}

impl Net {
    /// Net with `n` unwired free ports and no cells. Every free port must be
    /// linked before the net is valid.
    pub fn with_interface(n: usize) -> Net {
        Net { cells: Vec::new(), free: vec![PortRef::UNSET; n], loops: 0, vacant: Vec::new() }
    }

    /// Empty closed net (the ε-net with no port).
    pub fn empty() -> Net {
        Net::default()
    }

    /// Number of free ports.
    pub fn interface(&self) -> usize {
        self.free.len()
    }

    /// Number of free-standing loops.
    pub fn loops(&self) -> usize {
        self.loops
    }

    /// Sets the loop counter.
    pub fn set_loops(&mut self, loops: usize) {
        self.loops = loops;
    }

    /// Adds `k` loops.
    pub fn add_loops(&mut self, k: usize) {
        self.loops += k;
    }

    /// Number of live cells.
    pub fn cell_count(&self) -> usize {
        self.cells.len() - self.vacant.len()
    }

    /// Upper bound (exclusive) on cell ids.
    pub fn id_bound(&self) -> usize {
        self.cells.len()
    }

    /// True when `c` is a live cell.
    pub fn contains(&self, c: CellId) -> bool {
        self.cells.get(c).map_or(false, Option::is_some)
    }

    /// The cell `c`. Panics on a dead id.
    pub fn cell(&self, c: CellId) -> &Cell {
        self.cells[c].as_ref().expect("dead cell id")
    }

    /// Mutable access to cell `c`.
    pub fn cell_mut(&mut self, c: CellId) -> &mut Cell {
        self.cells[c].as_mut().expect("dead cell id")
    }

    /// Kind of cell `c`.
    pub fn kind(&self, c: CellId) -> CellKind {
        self.cell(c).kind
    }

    /// Live cell ids in increasing order.
    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter_map(|(i, c)| c.as_ref().map(|_| i))
    }

    /// Live cells with their ids.
    pub fn cells(&self) -> impl Iterator<Item = (CellId, &Cell)> + '_ {
        self.cells.iter().enumerate().filter_map(|(i, c)| c.as_ref().map(|c| (i, c)))
    }

    /// Adds an unwired cell with the default tag.
    pub fn add_cell(&mut self, kind: CellKind) -> CellId {
        self.add_tagged(kind, Tag::default())
    }

    /// Adds an unwired cell with a tag.
    pub fn add_tagged(&mut self, kind: CellKind, tag: Tag) -> CellId {
        let cell = Cell { kind, ports: [PortRef::UNSET; 3], tag, relabel: [None, None] };
        match self.vacant.pop() {
            Some(id) => {
                self.cells[id] = Some(cell);
                id
            }
            None => {
                self.cells.push(Some(cell));
                self.cells.len() - 1
            }
        }
    }

    /// Appends a free port, returning its index.
    pub fn push_free(&mut self) -> usize {
        self.free.push(PortRef::UNSET);
        self.free.len()
    }

    /// Removes a cell without touching its peers.
    pub fn remove_cell(&mut self, c: CellId) {
        if self.cells[c].take().is_some() {
            self.vacant.push(c);
        }
    }

    /// Removes loops and every cell not connected to a free port. Such
    /// parts can never reach the interface, so they carry no observable
    /// axiom now or later. Returns the number of cells removed.
    pub fn drop_closed_components(&mut self) -> usize {
        let mut open = vec![false; self.id_bound()];
        let mut stack: Vec<CellId> = (1..=self.interface()).filter_map(|k| self.peer(PortRef::Free(k)).cell()).collect();
        while let Some(c) = stack.pop() {
            if std::mem::replace(&mut open[c], true) {
                continue;
            }
            for e in self.endpoints(c) {
                if let Some(d) = self.peer(e).cell() {
                    if !open[d] {
                        stack.push(d);
                    }
                }
            }
        }
        let closed: Vec<CellId> = self.cell_ids().filter(|&c| !open[c]).collect();
        for &c in &closed {
            self.remove_cell(c);
        }
        self.set_loops(0);
        closed.len()
    }

    /// Peer of an endpoint.
    pub fn peer(&self, p: PortRef) -> PortRef {
        match p {
            PortRef::Free(k) => self.free[k - 1],
            PortRef::Cell(c, s) => self.cell(c).ports[s.index()],
        }
    }

    fn set_peer(&mut self, p: PortRef, q: PortRef) {
        match p {
            PortRef::Free(k) => self.free[k - 1] = q,
            PortRef::Cell(c, s) => self.cell_mut(c).ports[s.index()] = q,
        }
    }

    /// Wires `a` to `b`, overwriting whatever they were attached to.
    pub fn link(&mut self, a: PortRef, b: PortRef) {
        self.set_peer(a, b);
        self.set_peer(b, a);
    }

    /// Endpoints of cell `c` in slot order, up to its arity.
    pub fn endpoints(&self, c: CellId) -> Vec<PortRef> {
        let k = self.kind(c);
        (0..=k.arity()).map(|i| PortRef::Cell(c, Slot::from_index(i))).collect()
    }

    /// Every endpoint of the net: free ports first, then cell ports.
    pub fn all_endpoints(&self) -> Vec<PortRef> {
        let mut out: Vec<PortRef> = (1..=self.interface()).map(PortRef::Free).collect();
        for c in self.cell_ids() {
            out.extend(self.endpoints(c));
        }
        out
    }

    /// Each wire once, as an ordered pair `(a, b)` with `a < b`.
    pub fn wires(&self) -> Vec<(PortRef, PortRef)> {
        self.all_endpoints()
            .into_iter()
            .filter_map(|a| {
                let b = self.peer(a);
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// Active pairs `(a, b)` with `a < b`, sorted.
    pub fn active_pairs(&self) -> Vec<(CellId, CellId)> {
        let mut out = Vec::new();
        for (a, cell) in self.cells() {
            if let PortRef::Cell(b, Slot::Principal) = cell.ports[0] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// True when `a` and `b` form an active pair.
    pub fn is_active_pair(&self, a: CellId, b: CellId) -> bool {
        a != b
            && self.contains(a)
            && self.contains(b)
            && self.cell(a).ports[0] == PortRef::p(b)
    }

    /// Checks every representation invariant.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invariant(m));
        for e in self.all_endpoints() {
            let q = self.peer(e);
            if q == PortRef::UNSET {
                return bad(format!("{e} is not wired"));
            }
            if q == e {
                return bad(format!("{e} is wired to itself"));
            }
            match q {
                PortRef::Free(k) if k > self.interface() => {
                    return bad(format!("{e} points to free.{k} beyond the interface"))
                }
                PortRef::Cell(c, s) => {
                    if !self.contains(c) {
                        return bad(format!("{e} points to dead cell #{c}"));
                    }
                    if s.index() > self.kind(c).arity() {
                        return bad(format!("{e} points to a missing slot of #{c}"));
                    }
                }
                _ => {}
            }
            if self.peer(q) != e {
                return bad(format!("{e} -> {q} is not symmetric"));
            }
        }
        let vacant_ok = self.vacant.iter().all(|&v| self.cells[v].is_none())
            && self.cells.iter().filter(|c| c.is_none()).count() == self.vacant.len();
        if !vacant_ok {
            return bad("vacant list out of sync".into());
        }
        Ok(())
    }

    /// Returns a copy whose arena is compacted: ids `0..cell_count` in the
    /// order of the old ids.
    pub fn compacted(&self) -> Net {
        let mut map = vec![usize::MAX; self.cells.len()];
        for (new, old) in self.cell_ids().enumerate() {
            map[old] = new;
        }
        let remap = |p: PortRef| match p {
            PortRef::Cell(c, s) => PortRef::Cell(map[c], s),
            f => f,
        };
        let cells = self
            .cells()
            .map(|(_, c)| {
                let mut c = c.clone();
                for p in c.ports.iter_mut() {
                    if *p != PortRef::UNSET {
                        *p = remap(*p);
                    }
                }
                Some(c)
            })
            .collect();
        Net { cells, free: self.free.iter().map(|&p| remap(p)).collect(), loops: self.loops, vacant: Vec::new() }
    }

    /// Copies every cell of `other` into `self`, shifting its free ports by
    /// `self.interface()`. Returns the id map of the copied cells.
    pub fn absorb(&mut self, other: &Net) -> Vec<Option<CellId>> {
        let shift = self.interface();
        let mut map = vec![None; other.id_bound()];
        for (c, cell) in other.cells() {
            let id = self.add_tagged(cell.kind, cell.tag);
            self.cell_mut(id).relabel = cell.relabel;
            map[c] = Some(id);
        }
        self.free.extend(std::iter::repeat(PortRef::UNSET).take(other.interface()));
        let tr = |p: PortRef| match p {
            PortRef::Free(k) => PortRef::Free(k + shift),
            PortRef::Cell(c, s) => PortRef::Cell(map[c].expect("live"), s),
        };
        for (a, b) in other.wires() {
            self.link(tr(a), tr(b));
        }
        self.loops += other.loops;
        map
    }

    /// Disjoint union: ports of `self` first, then those of `other`.
    pub fn juxtapose(&self, other: &Net) -> Net {
        let mut out = self.clone();
        out.absorb(other);
        out
    }

    /// Removes the endpoints in `removed` and reconnects through `glue`.
    ///
    /// `removed` lists endpoints that disappear (ports of cells about to be
    /// deleted, or free ports about to be fused). Each glue pair joins a
    /// removed endpoint to another removed endpoint or to a surviving port.
    /// Alternating wire/glue chains are followed: a chain between two
    /// surviving ports becomes a wire, a closed chain becomes a loop.
    /// Cells owning removed endpoints are not deleted here.
    pub fn splice(&mut self, removed: &[PortRef], glue: &[(PortRef, PortRef)]) {
        let is_removed = |p: PortRef| removed.contains(&p);
        let glue_of = |p: PortRef| -> Option<PortRef> {
            glue.iter().find_map(|&(a, b)| {
                if a == p {
                    Some(b)
                } else if b == p {
                    Some(a)
                } else {
                    None
                }
            })
        };
        let mut visited: Vec<PortRef> = Vec::new();
        let mut links: Vec<(PortRef, PortRef)> = Vec::new();
        // Chains starting from a surviving port.
        let mut starts: Vec<(PortRef, PortRef, bool)> = Vec::new();
        for &e in removed {
            let w = self.peer(e);
            if !is_removed(w) {
                starts.push((w, e, true));
            }
            if let Some(g) = glue_of(e) {
                if !is_removed(g) {
                    starts.push((g, e, false));
                }
            }
        }
        for (outer, first, via_wire) in starts {
            if visited.contains(&outer) {
                continue;
            }
            let mut cur = first;
            let mut entered_by_wire = via_wire;
            loop {
                visited.push(cur);
                let next = if entered_by_wire { glue_of(cur) } else { Some(self.peer(cur)) };
                let Some(next) = next else {
                    // A removed endpoint with no glue ends the chain: the
                    // outer port would dangle, which no rewrite produces.
                    panic!("splice: chain from {outer} ends at {cur}");
                };
                if is_removed(next) {
                    cur = next;
                    entered_by_wire = !entered_by_wire;
                    continue;
                }
                visited.push(outer);
                visited.push(next);
                links.push((outer, next));
                break;
            }
        }
        // Closed chains made only of removed endpoints that carry glue.
        let mut loops = 0;
        for &e in removed {
            if visited.contains(&e) || glue_of(e).is_none() {
                continue;
            }
            let mut cur = e;
            loop {
                visited.push(cur);
                let g = glue_of(cur).expect("glued");
                visited.push(g);
                let w = self.peer(g);
                if w == e {
                    break;
                }
                cur = w;
            }
            loops += 1;
        }
        self.loops += loops;
        for (a, b) in links {
            self.link(a, b);
        }
    }

    /// Fuses free ports pairwise (`i` with `j` for each pair) and renumbers
    /// the remaining free ports in order.
    pub fn fuse_free_pairs(&mut self, pairs: &[(usize, usize)]) {
        let removed: Vec<PortRef> =
            pairs.iter().flat_map(|&(i, j)| [PortRef::Free(i), PortRef::Free(j)]).collect();
        let glue: Vec<(PortRef, PortRef)> =
            pairs.iter().map(|&(i, j)| (PortRef::Free(i), PortRef::Free(j))).collect();
        self.splice(&removed, &glue);
        let keep: Vec<usize> = (1..=self.interface()).filter(|k| !removed.contains(&PortRef::Free(*k))).collect();
        self.renumber_free(&keep);
    }

    /// Keeps exactly the free ports listed in `keep` (old indices), which
    /// become ports `1..=keep.len()` in the given order. Dropped ports must
    /// already be disconnected by the caller.
    pub fn renumber_free(&mut self, keep: &[usize]) {
        let mut new_index = vec![0usize; self.interface() + 1];
        for (i, &k) in keep.iter().enumerate() {
            new_index[k] = i + 1;
        }
        let old = std::mem::take(&mut self.free);
        let peers: Vec<PortRef> = keep.iter().map(|&k| old[k - 1]).collect();
        self.free = vec![PortRef::UNSET; keep.len()];
        for (i, &peer) in peers.iter().enumerate() {
            let me = PortRef::Free(i + 1);
            let peer = match peer {
                PortRef::Free(j) => PortRef::Free(new_index[j]),
                p => p,
            };
            self.link(me, peer);
        }
    }

    /// Permutes free ports: new port `i + 1` is old port `order[i]`.
    pub fn permute_free(&mut self, order: &[usize]) {
        assert_eq!(order.len(), self.interface());
        self.renumber_free(order);
    }
}

/// Convenience constructors for small nets used across the crate.
impl Net {
    /// A single wire between two free ports.
    pub fn wire() -> Net {
        let mut n = Net::with_interface(2);
        n.link(PortRef::Free(1), PortRef::Free(2));
        n
    }

    /// The ε-net with `n` ports: one ε cell per port.
    pub fn eps_net(n: usize) -> Net {
        let mut net = Net::with_interface(n);
        for k in 1..=n {
            let e = net.add_cell(CellKind::Eps);
            net.link(PortRef::p(e), PortRef::Free(k));
        }
        net
    }

    /// Closed net made of `k` loops.
    pub fn loops_net(k: usize) -> Net {
        let mut n = Net::empty();
        n.loops = k;
        n
    }

    /// Identity wiring on `n` ports: port `i` wired to port `n + i`.
    pub fn identity_context(n: usize) -> Net {
        let mut net = Net::with_interface(2 * n);
        for i in 1..=n {
            net.link(PortRef::Free(i), PortRef::Free(n + i));
        }
        net
    }

    /// One binary cell with principal at free 1 and aux at free 2, 3.
    pub fn single_cell(kind: CellKind) -> Net {
        let mut net = Net::with_interface(1 + kind.arity());
        let c = net.add_cell(kind);
        for i in 0..=kind.arity() {
            net.link(PortRef::Cell(c, Slot::from_index(i)), PortRef::Free(i + 1));
        }
        net
    }

    /// Two cells in an active pair; aux of the first at free 1,2 and of the
    /// second at free 3,4 (ε cells contribute no port).
    pub fn active_pair(a: CellKind, b: CellKind) -> Net {
        let mut net = Net::with_interface(a.arity() + b.arity());
        let x = net.add_cell(a);
        let y = net.add_cell(b);
        net.link(PortRef::p(x), PortRef::p(y));
        let mut k = 1;
        for (c, kind) in [(x, a), (y, b)] {
            for i in 1..=kind.arity() {
                net.link(PortRef::aux(c, i), PortRef::Free(k));
                k += 1;
            }
        }
        net
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        for n in [Net::wire(), Net::eps_net(3), Net::loops_net(2), Net::identity_context(3)] {
            n.validate().unwrap();
        }
        Net::single_cell(CellKind::Delta).validate().unwrap();
        Net::active_pair(CellKind::Delta, CellKind::Eps).validate().unwrap();
    }

    #[test]
    fn fusing_a_wire_with_itself_makes_a_loop() {
        let mut n = Net::wire();
        n.fuse_free_pairs(&[(1, 2)]);
        assert_eq!(n.interface(), 0);
        assert_eq!(n.loops(), 1);
    }

    #[test]
    fn fusing_chains_through_free_ports() {
        // free1-free2, free3-free4; fuse 2 with 3 gives free1-free2 (renumbered).
        let mut n = Net::wire().juxtapose(&Net::wire());
        n.fuse_free_pairs(&[(2, 3)]);
        n.validate().unwrap();
        assert_eq!(n.interface(), 2);
        assert_eq!(n.peer(PortRef::Free(1)), PortRef::Free(2));
    }

    #[test]
    fn unset_port_is_rejected() {
        let mut n = Net::with_interface(1);
        let _ = n.add_cell(CellKind::Eps);
        assert!(n.validate().is_err());
    }
}
