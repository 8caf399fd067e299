//! α-canonicalization: a deterministic numbering of cells that depends only
//! on the net up to renaming, and the digest built on it.
//!
//! Cells reachable from the interface are numbered breadth-first, starting
//! from the free ports in index order and visiting slots in the order
//! principal, aux 1, aux 2. Each closed component is numbered from the start
//! cell giving the smallest code; closed components are then sorted by code.

use sha2::{Digest, Sha256};
use std::collections::VecDeque;

use crate::net::{CellId, Net, PortRef, Slot};

fn kind_code(net: &Net, c: CellId) -> u32 {
    match net.kind(c) {
        crate::CellKind::Delta => 0,
        crate::CellKind::Zeta => 1,
        crate::CellKind::Eps => 2,
    }
}

/// BFS numbering from the given roots. `index` maps cell id to its number
/// (usize::MAX when unnumbered); newly numbered cells are appended to
/// `order`. Returns the structural code of the numbered cells.
fn bfs(net: &Net, seeds: &[CellId], index: &mut [usize], order: &mut Vec<CellId>) -> Vec<u32> {
    let mut queue = VecDeque::new();
    for &s in seeds {
        if index[s] == usize::MAX {
            index[s] = order.len();
            order.push(s);
            queue.push_back(s);
        }
    }
    let mut code = Vec::new();
    while let Some(c) = queue.pop_front() {
        code.push(kind_code(net, c));
        for i in 0..=net.kind(c).arity() {
            match net.cell(c).ports[i] {
                PortRef::Cell(d, s) => {
                    if index[d] == usize::MAX {
                        index[d] = order.len();
                        order.push(d);
                        queue.push_back(d);
                    }
                    code.push(3 + 3 * index[d] as u32 + s.index() as u32);
                }
                PortRef::Free(k) => code.push(u32::MAX - k as u32),
            }
        }
    }
    code
}

/// Canonical numbering of the live cells: `order[i]` is the cell numbered `i`.
pub fn canonical_order(net: &Net) -> Vec<CellId> {
    let mut index = vec![usize::MAX; net.id_bound()];
    let mut order = Vec::with_capacity(net.cell_count());
    for k in 1..=net.interface() {
        if let PortRef::Cell(c, _) = net.peer(PortRef::Free(k)) {
            bfs(net, &[c], &mut index, &mut order);
        }
    }
    // Closed components.
    let mut components: Vec<(Vec<u32>, Vec<CellId>)> = Vec::new();
    for c in net.cell_ids() {
        if index[c] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        bfs(net, &[c], &mut index, &mut members);
        let mut best: Option<(Vec<u32>, Vec<CellId>)> = None;
        for &s in &members {
            let mut local = vec![usize::MAX; net.id_bound()];
            let mut ord = Vec::with_capacity(members.len());
            let code = bfs(net, &[s], &mut local, &mut ord);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                best = Some((code, ord));
            }
        }
        components.push(best.expect("non-empty component"));
    }
    components.sort();
    for (_, ord) in components {
        order.extend(ord);
    }
    order
}

/// Endpoint name under a canonical numbering.
fn endpoint_name(p: PortRef, number: &[usize]) -> String {
    match p {
        PortRef::Free(k) => format!("free.{k}"),
        PortRef::Cell(c, s) => format!("c{}.{}", number[c] + 1, s.suffix()),
    }
}

/// Canonical net-source text under the given net name.
pub fn canonical_text(net: &Net, name: &str) -> String {
    let order = canonical_order(net);
    let mut number = vec![usize::MAX; net.id_bound()];
    for (i, &c) in order.iter().enumerate() {
        number[c] = i;
    }
    let mut out = format!("net {name} {{\n  interface {};\n", net.interface());
    for (i, &c) in order.iter().enumerate() {
        out.push_str(&format!("  cell c{}: {};\n", i + 1, net.kind(c).keyword()));
    }
    let rank = |p: PortRef| -> (usize, usize) {
        match p {
            PortRef::Free(k) => (0, k),
            PortRef::Cell(c, s) => (1, 3 * number[c] + s.index()),
        }
    };
    let mut endpoints: Vec<PortRef> = (1..=net.interface()).map(PortRef::Free).collect();
    for &c in &order {
        for i in 0..=net.kind(c).arity() {
            endpoints.push(PortRef::Cell(c, Slot::from_index(i)));
        }
    }
    for e in endpoints {
        let q = net.peer(e);
        if rank(e) < rank(q) {
            out.push_str(&format!("  wire {} {};\n", endpoint_name(e, &number), endpoint_name(q, &number)));
        }
    }
    for _ in 0..net.loops() {
        out.push_str("  loop;\n");
    }
    out.push_str("}\n");
    out
}

/// Hex SHA-256 digest of the canonical text; equal iff α-equivalent.
pub fn canonical_key(net: &Net) -> String {
    let text = canonical_text(net, "_");
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// α-equivalence test.
pub fn alpha_eq(a: &Net, b: &Net) -> bool {
    a.interface() == b.interface()
        && a.cell_count() == b.cell_count()
        && a.loops() == b.loops()
        && canonical_text(a, "_") == canonical_text(b, "_")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CellKind;

    fn circle(len: usize) -> Net {
        let mut n = Net::empty();
        let ids: Vec<_> = (0..len).map(|_| n.add_cell(CellKind::Delta)).collect();
        for i in 0..len {
            let next = ids[(i + 1) % len];
            n.link(PortRef::p(ids[i]), PortRef::aux(next, 1));
        }
        for &c in &ids {
            let e = n.add_cell(CellKind::Eps);
            n.link(PortRef::aux(c, 2), PortRef::p(e));
        }
        n
    }

    #[test]
    fn circles_of_different_length_differ() {
        assert_ne!(canonical_key(&circle(2)), canonical_key(&circle(3)));
        assert_eq!(canonical_key(&circle(3)), canonical_key(&circle(3)));
    }

    #[test]
    fn wire_and_eps2_differ() {
        assert_ne!(canonical_key(&Net::wire()), canonical_key(&Net::eps_net(2)));
    }

    #[test]
    fn closed_component_order_is_rotation_invariant() {
        let a = circle(3);
        let mut b = Net::empty();
        // Same circle built with a different id order.
        let ids: Vec<_> = (0..3).map(|_| b.add_cell(CellKind::Delta)).collect();
        let eps: Vec<_> = (0..3).map(|_| b.add_cell(CellKind::Eps)).collect();
        for i in 0..3 {
            b.link(PortRef::p(ids[(i + 2) % 3]), PortRef::aux(ids[(i + 1) % 3], 1));
            b.link(PortRef::aux(ids[i], 2), PortRef::p(eps[2 - i]));
        }
        b.validate().unwrap();
        assert!(alpha_eq(&a, &b));
    }
}
