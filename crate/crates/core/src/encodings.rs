//! Codes, decoders, the recursion solver and the named example nets.
//!
//! Every construction tags its cells so that [`replay`] can perform exactly
//! the decoding interactions and nothing else: cells of an encoded net are
//! pushed one generation deeper and never fire during a replay, while
//! packing and decoding cells do.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_order;
use crate::error::{Error, Result};
use crate::net::{CellKind, Net, PortRef, Role, Tag};
use crate::parse::parse_named;
use crate::rewrite::reduce_guided;
use crate::structure::{decompose, Tree};

const PACKING: Tag = Tag { role: Role::Packing, generation: 0, rebuilds: false };
const MACHINERY: Tag = Tag { role: Role::Machinery, generation: 0, rebuilds: false };
const REBUILDER: Tag = Tag { role: Role::Machinery, generation: 0, rebuilds: true };

/// The fixed tree with `k` leaves: a left comb of `kind` cells, a single ε
/// for `k = 0` and a bare wire for `k = 1`.
pub fn mux_tree(kind: CellKind, k: usize) -> Tree {
    match k {
        0 => Tree::EpsLeaf,
        1 => Tree::Leaf,
        _ => Tree::node(kind, mux_tree(kind, k - 1), Tree::Leaf),
    }
}

/// Copy of `net` with every tag (and stored relabel) one generation deeper.
pub fn deepen(net: &Net) -> Net {
    let mut out = net.clone();
    let ids: Vec<_> = out.cell_ids().collect();
    for c in ids {
        let cell = out.cell_mut(c);
        cell.tag.generation += 1;
        for t in cell.relabel.iter_mut().flatten() {
            t.generation += 1;
        }
    }
    out
}

/// Copy of `net` with every tag reset to the default payload tag.
pub fn untagged(net: &Net) -> Net {
    let mut out = net.clone();
    let ids: Vec<_> = out.cell_ids().collect();
    for c in ids {
        let cell = out.cell_mut(c);
        cell.tag = Tag::default();
        cell.relabel = [None, None];
    }
    out
}

/// True when a replay fires the active pair: a top-generation machinery
/// cell meets anything, a rebuilding cell meets packing, or two packing
/// cells meet.
fn replay_allows(net: &Net, a: usize, b: usize) -> bool {
    let (ta, tb) = (net.cell(a).tag, net.cell(b).tag);
    let driver = |t: Tag| t.role == Role::Machinery && t.generation == 0 && !t.rebuilds;
    driver(ta)
        || driver(tb)
        || (ta.rebuilds && tb.role == Role::Packing)
        || (tb.rebuilds && ta.role == Role::Packing)
        || (ta.role == Role::Packing && tb.role == Role::Packing)
}

/// Runs the decoding interactions of a tagged net for at most `budget`
/// full-parallel rounds; returns the rounds used.
pub fn replay(net: &mut Net, budget: usize) -> usize {
    reduce_guided(net, budget, replay_allows)
}

/// Rounds granted to replays by the convenience decoders.
pub const REPLAY_BUDGET: usize = 10_000;

/// Wraps `inner` (deepened) under a packing tree rooted at a fresh port 1.
/// Leaf `i` of the tree is fused with port `leaf_port[i]` of `inner`.
/// Every port of `inner` must be used exactly once. Returns the net and the
/// leaf endpoints, in tree order, as they were before fusion.
fn wrap(inner: &Net, tree: &Tree, leaf_port: &[usize]) -> (Net, Vec<PortRef>) {
    let mut out = Net::with_interface(1);
    out.absorb(&deepen(inner));
    let leaves = tree.attach(&mut out, PortRef::Free(1), PACKING);
    debug_assert_eq!(leaves.len(), leaf_port.len());
    let removed: Vec<PortRef> = leaf_port.iter().map(|&k| PortRef::Free(k + 1)).collect();
    let glue: Vec<(PortRef, PortRef)> = leaves.iter().zip(&removed).map(|(&l, &r)| (l, r)).collect();
    out.splice(&removed, &glue);
    out.renumber_free(&[1]);
    (out, leaves)
}

/// The Lafont code of a one-port net: its δ cells are removed and their
/// three ports gathered by three ζ-combs, packed with the port as
/// ζ(ζ(A, R), ζ(B, C)). The result has no δ cell.
pub fn lafont_code(net: &Net) -> Result<Net> {
    if net.interface() != 1 {
        return Err(Error::InterfaceMismatch { expected: 1, found: net.interface() });
    }
    let deltas: Vec<_> = canonical_order(net).into_iter().filter(|&c| net.kind(c) == CellKind::Delta).collect();
    let m = deltas.len();
    let z = |k| mux_tree(CellKind::Zeta, k);
    let tree = Tree::node(
        CellKind::Zeta,
        Tree::node(CellKind::Zeta, z(m), Tree::Leaf),
        Tree::node(CellKind::Zeta, z(m), z(m)),
    );
    let mut out = Net::with_interface(1);
    let map = out.absorb(&deepen(net));
    let leaves = tree.attach(&mut out, PortRef::Free(1), PACKING);
    // Leaves: A (m), R (1), B (m), C (m).
    let (a, rest) = leaves.split_at(m);
    let (r, rest) = rest.split_at(1);
    let (b, c) = rest.split_at(m);
    let mut removed = vec![PortRef::Free(2)];
    let mut glue = vec![(PortRef::Free(2), r[0])];
    for (i, &d) in deltas.iter().enumerate() {
        let d = map[d].expect("copied");
        for (slot, leaf) in [(PortRef::p(d), a[i]), (PortRef::aux(d, 1), b[i]), (PortRef::aux(d, 2), c[i])] {
            removed.push(slot);
            glue.push((slot, leaf));
        }
        if m >= 2 {
            let tag = out.cell(d).tag;
            if let PortRef::Cell(owner, s) = a[i] {
                out.cell_mut(owner).relabel[s.index() - 1] = Some(tag);
            }
        }
    }
    out.splice(&removed, &glue);
    for &d in &deltas {
        out.remove_cell(map[d].expect("copied"));
    }
    out.renumber_free(&[1]);
    Ok(out.compacted())
}

/// The universal decoder of Lafont codes: port 1 takes a code, port 2
/// delivers the decoded net.
pub fn lafont_decoder() -> Net {
    let mut n = Net::with_interface(2);
    let u1 = n.add_tagged(CellKind::Zeta, MACHINERY);
    let u2 = n.add_tagged(CellKind::Zeta, MACHINERY);
    let u3 = n.add_tagged(CellKind::Zeta, MACHINERY);
    let d = n.add_tagged(CellKind::Delta, REBUILDER);
    n.link(PortRef::Free(1), PortRef::p(u1));
    n.link(PortRef::aux(u1, 1), PortRef::p(u2));
    n.link(PortRef::aux(u1, 2), PortRef::p(u3));
    n.link(PortRef::aux(u2, 1), PortRef::p(d));
    n.link(PortRef::aux(u2, 2), PortRef::Free(2));
    n.link(PortRef::aux(u3, 1), PortRef::aux(d, 1));
    n.link(PortRef::aux(u3, 2), PortRef::aux(d, 2));
    n
}

/// The cut-free code of a net with `n` ports: its decomposition packed as
/// ζ(P, ζ(L, R)), where P gathers the `n` ports and L, R gather the two
/// sides of the feedback with δ-combs. The result is cut-free.
pub fn cut_free_code(net: &Net) -> Net {
    let n = net.interface();
    let (nu, sigma) = decompose(net);
    let pairs = sigma.pairs();
    let c = pairs.len();
    let tree = Tree::node(
        CellKind::Zeta,
        mux_tree(CellKind::Zeta, n),
        Tree::node(CellKind::Zeta, mux_tree(CellKind::Delta, c), mux_tree(CellKind::Delta, c)),
    );
    let mut order: Vec<usize> = (1..=n).collect();
    order.extend(pairs.iter().map(|p| p.0));
    order.extend(pairs.iter().map(|p| p.1));
    wrap(&nu, &tree, &order).0.compacted()
}

/// The universal decoder of cut-free codes: port 1 takes a code, port 2
/// delivers the original ports packed by the fixed ζ-comb.
pub fn recover() -> Net {
    let mut n = Net::with_interface(2);
    let v1 = n.add_tagged(CellKind::Zeta, MACHINERY);
    let v2 = n.add_tagged(CellKind::Zeta, MACHINERY);
    n.link(PortRef::Free(1), PortRef::p(v1));
    n.link(PortRef::aux(v1, 1), PortRef::Free(2));
    n.link(PortRef::aux(v1, 2), PortRef::p(v2));
    n.link(PortRef::aux(v2, 1), PortRef::aux(v2, 2));
    n
}

/// Context unpacking a ζ-comb of `n` leaves at port 1 onto ports `2..=n+1`.
pub fn unpacker(n: usize) -> Net {
    let mut net = Net::with_interface(n + 1);
    let leaves = mux_tree(CellKind::Zeta, n).attach(&mut net, PortRef::Free(1), MACHINERY);
    for (i, l) in leaves.into_iter().enumerate() {
        net.link(l, PortRef::Free(i + 2));
    }
    net
}

/// Packs an `n`-port net into a one-port net under the fixed ζ-comb.
pub fn pack(net: &Net) -> Net {
    let n = net.interface();
    let mut out = Net::with_interface(1);
    out.absorb(net);
    let leaves = mux_tree(CellKind::Zeta, n).attach(&mut out, PortRef::Free(1), PACKING);
    let removed: Vec<PortRef> = (2..=n + 1).map(PortRef::Free).collect();
    let glue: Vec<(PortRef, PortRef)> = leaves.into_iter().zip(removed.iter().copied()).collect();
    out.splice(&removed, &glue);
    out.renumber_free(&[1]);
    out.compacted()
}

/// Feeds port `out_port` of `a` into port 1 of `b`; the remaining ports of
/// `a` come first, then those of `b` after its port 1.
fn chain(a: &Net, out_port: usize, b: &Net) -> Net {
    let mut j = a.juxtapose(b);
    j.fuse_free_pairs(&[(out_port, a.interface() + 1)]);
    j
}

/// The full code: the Lafont code of the cut-free code. It is cut-free and
/// has no δ cell.
pub fn full_code(net: &Net) -> Net {
    lafont_code(&cut_free_code(net)).expect("cut-free codes have one port")
}

/// The universal decoder of full codes for nets with `n` ports: port 1 takes
/// a code, ports `2..=n+1` deliver the decoded net.
pub fn full_decoder(n: usize) -> Net {
    chain(&chain(&lafont_decoder(), 2, &recover()), 2, &unpacker(n))
}

fn decode_with(decoder: &Net, code: &Net) -> Result<Net> {
    if code.interface() != 1 {
        return Err(Error::InterfaceMismatch { expected: 1, found: code.interface() });
    }
    let mut out = crate::structure::plug(decoder, code)?;
    replay(&mut out, REPLAY_BUDGET);
    Ok(out.compacted())
}

/// Decodes a Lafont code by replay.
pub fn lafont_decode(code: &Net) -> Result<Net> {
    decode_with(&lafont_decoder(), code)
}

/// Decodes a cut-free code by replay, unpacking the `n` original ports.
pub fn cut_free_decode(code: &Net, n: usize) -> Result<Net> {
    decode_with(&chain(&recover(), 2, &unpacker(n)), code)
}

/// Decodes a full code by replay, unpacking the `n` original ports.
pub fn full_decode(code: &Net, n: usize) -> Result<Net> {
    decode_with(&full_decoder(n), code)
}

/// Duplicates a one-port net through a δ cell by replay; the two copies sit
/// at ports 1 and 2. Faithful for cut-free δ-free nets.
pub fn duplicate(code: &Net) -> Result<Net> {
    let mut ctx = Net::with_interface(3);
    let d = ctx.add_tagged(CellKind::Delta, MACHINERY);
    ctx.link(PortRef::Free(1), PortRef::p(d));
    ctx.link(PortRef::aux(d, 1), PortRef::Free(2));
    ctx.link(PortRef::aux(d, 2), PortRef::Free(3));
    decode_with(&ctx, code)
}

/// Decodes both full codes produced by [`duplicate`] for nets with `n`
/// ports. The copy at port 2 lands on ports `1..=n`.
pub fn decode_copies(two: &Net, n: usize) -> Net {
    let dec = chain(two, 1, &full_decoder(n));
    let mut dec = chain(&dec, 1, &full_decoder(n));
    replay(&mut dec, REPLAY_BUDGET);
    dec.compacted()
}

/// A recursive equation `μ = RHS[μ, …, μ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionSpec {
    /// Interface of the unknown.
    pub arity: usize,
    /// Number of holes.
    pub holes: usize,
    /// Right-hand side with `arity * (1 + holes)` ports: first its own
    /// interface, then the ports of each hole in turn.
    pub template: Net,
}

impl RecursionSpec {
    /// Checks the template interface.
    pub fn validate(&self) -> Result<()> {
        let want = self.arity * (1 + self.holes);
        if self.template.interface() != want {
            return Err(Error::MalformedTemplate(format!(
                "template has {} ports, expected {want}",
                self.template.interface()
            )));
        }
        self.template.validate().map_err(|e| Error::MalformedTemplate(e.to_string()))
    }

    /// The template with every hole filled by `net`.
    pub fn fill(&self, net: &Net) -> Result<Net> {
        self.validate()?;
        if net.interface() != self.arity {
            return Err(Error::InterfaceMismatch { expected: self.arity, found: net.interface() });
        }
        let n = self.arity;
        let mut out = self.template.clone();
        for _ in 0..self.holes {
            out.absorb(net);
        }
        let total = n * (1 + self.holes);
        let pairs: Vec<(usize, usize)> = (n + 1..=total).map(|k| (k, k + total - n)).collect();
        out.fuse_free_pairs(&pairs);
        Ok(out)
    }
}

/// Solves a recursive equation. The solution is `X` fed with the full code
/// of `X` packed, where `X` duplicates its extra port into two copies per
/// hole, decodes one and unpacks it into the hole, handing it the other.
pub fn solve_recursion(spec: &RecursionSpec) -> Result<Net> {
    spec.validate()?;
    let (n, k) = (spec.arity, spec.holes);
    // X: ports 1..=n of the template, then port n + 1 for the code.
    let mut x = spec.template.clone();
    let code_port = x.push_free();
    let dup = mux_tree(CellKind::Delta, 2 * k).attach(&mut x, PortRef::Free(code_port), MACHINERY);
    let mut removed = Vec::new();
    let mut glue = Vec::new();
    for h in 0..k {
        let mut dec = full_decoder(n + 1);
        // Decoder ports: 1 code in, 2..=n+2 the unpacked X ports.
        let shift = x.interface();
        x.absorb(&std::mem::take(&mut dec));
        let code_in = PortRef::Free(shift + 1);
        removed.push(code_in);
        glue.push((code_in, dup[2 * h]));
        for l in 1..=n {
            let hole = PortRef::Free(n + h * n + l);
            let out = PortRef::Free(shift + 1 + l);
            removed.push(hole);
            removed.push(out);
            glue.push((hole, out));
        }
        let back = PortRef::Free(shift + n + 2);
        removed.push(back);
        glue.push((back, dup[2 * h + 1]));
    }
    x.splice(&removed, &glue);
    let mut keep: Vec<usize> = (1..=n).collect();
    keep.push(code_port);
    x.renumber_free(&keep);
    let x = x.compacted();
    let code = full_code(&pack(&x));
    Ok(chain_last(&x, &code))
}

/// Fuses the last port of `x` with port 1 of the one-port `code`.
fn chain_last(x: &Net, code: &Net) -> Net {
    let last = x.interface();
    let mut j = x.juxtapose(code);
    j.fuse_free_pairs(&[(last, last + 1)]);
    j.compacted()
}

/// Replays one unfolding of a solution built by [`solve_recursion`] (or of
/// a template filled with such solutions).
pub fn unfold(net: &Net) -> Net {
    let mut out = net.clone();
    replay(&mut out, REPLAY_BUDGET);
    out.compacted()
}

/// The equation whose solution prepends a δ layer to both ports at each
/// unfolding, the first branches wired together.
pub fn iota_spec() -> RecursionSpec {
    let mut t = Net::with_interface(4);
    let d1 = t.add_cell(CellKind::Delta);
    let d2 = t.add_cell(CellKind::Delta);
    t.link(PortRef::Free(1), PortRef::p(d1));
    t.link(PortRef::Free(2), PortRef::p(d2));
    t.link(PortRef::aux(d1, 1), PortRef::aux(d2, 1));
    t.link(PortRef::aux(d1, 2), PortRef::Free(3));
    t.link(PortRef::aux(d2, 2), PortRef::Free(4));
    RecursionSpec { arity: 2, holes: 1, template: t }
}

/// One ping-pong equation: each unfolding puts a δ layer with a capped
/// first branch on both ports, the layer on port `late` one round late.
pub fn ping_pong_spec(late: usize) -> RecursionSpec {
    assert!(late == 1 || late == 2);
    let mut t = Net::with_interface(4);
    for port in 1..=2 {
        let d = t.add_cell(CellKind::Delta);
        let cap = t.add_cell(CellKind::Zeta);
        t.link(PortRef::aux(d, 1), PortRef::p(cap));
        t.link(PortRef::aux(cap, 1), PortRef::aux(cap, 2));
        t.link(PortRef::aux(d, 2), PortRef::Free(port + 2));
        if port == late {
            let e = t.add_cell(CellKind::Delta);
            let f = t.add_cell(CellKind::Delta);
            let x = t.add_cell(CellKind::Eps);
            let y = t.add_cell(CellKind::Eps);
            t.link(PortRef::p(e), PortRef::p(f));
            t.link(PortRef::aux(e, 1), PortRef::Free(port));
            t.link(PortRef::aux(f, 1), PortRef::p(d));
            t.link(PortRef::aux(e, 2), PortRef::p(x));
            t.link(PortRef::aux(f, 2), PortRef::p(y));
        } else {
            t.link(PortRef::Free(port), PortRef::p(d));
        }
    }
    RecursionSpec { arity: 2, holes: 1, template: t }
}

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../fixtures/", $name, ".net")))
    };
}

/// Net-source text of every shipped fixture, by name.
pub fn fixture_sources() -> Vec<(&'static str, &'static str)> {
    vec![
        fixture!("fig1"),
        fixture!("fig4"),
        fixture!("iota"),
        fixture!("fig12_mu"),
        fixture!("fig12_nu"),
        fixture!("pingpong_1"),
        fixture!("pingpong_2"),
        fixture!("quasi_wire"),
        fixture!("parallelizer"),
        fixture!("wire"),
        fixture!("eps2"),
        fixture!("loop"),
    ]
}

/// The named example nets, parsed from the shipped fixtures.
pub fn corpus() -> BTreeMap<String, Net> {
    fixture_sources()
        .into_iter()
        .map(|(name, src)| {
            let (_, net) = parse_named(src).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
            (name.to_string(), net)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::alpha_eq;
    use crate::structure::is_cut_free;

    fn no_delta(n: &Net) -> bool {
        n.cells().all(|(_, c)| c.kind != CellKind::Delta)
    }

    #[test]
    fn mux_shapes() {
        assert_eq!(mux_tree(CellKind::Zeta, 0), Tree::EpsLeaf);
        assert_eq!(mux_tree(CellKind::Zeta, 1), Tree::Leaf);
        let d = CellKind::Delta;
        assert_eq!(mux_tree(d, 3), Tree::node(d, Tree::node(d, Tree::Leaf, Tree::Leaf), Tree::Leaf));
    }

    #[test]
    fn lafont_roundtrip_small() {
        for src in [
            "net a { interface 1; cell e: eps; wire free.1 e.p; }",
            "net b { interface 1; cell d: delta; wire free.1 d.1; wire d.p d.2; }",
            "net c { interface 1; cell d: delta; cell f: delta; cell g: delta; cell z: zeta; cell e: eps; \
             wire free.1 d.p; wire d.1 f.p; wire d.2 g.1; wire f.1 g.p; wire f.2 z.1; wire g.2 z.2; wire z.p e.p; }",
        ] {
            let (_, n) = parse_named(src).unwrap();
            let code = lafont_code(&n).unwrap();
            assert!(no_delta(&code), "{src}");
            assert!(alpha_eq(&lafont_decode(&code).unwrap(), &n), "{src}");
        }
    }

    #[test]
    fn cut_free_roundtrip_small() {
        let pair = Net::active_pair(CellKind::Delta, CellKind::Delta);
        for n in [Net::loops_net(1), pair, Net::wire(), Net::eps_net(2)] {
            let code = cut_free_code(&n);
            assert!(is_cut_free(&code));
            assert!(alpha_eq(&cut_free_decode(&code, n.interface()).unwrap(), &n));
        }
    }

    #[test]
    fn full_code_duplicates() {
        let n = Net::active_pair(CellKind::Delta, CellKind::Zeta);
        let code = full_code(&n);
        assert!(is_cut_free(&code) && no_delta(&code));
        let two = duplicate(&code).unwrap();
        assert!(alpha_eq(&decode_copies(&two, 4), &n.juxtapose(&n)));
    }

    #[test]
    fn constant_recursion_is_total() {
        let spec = RecursionSpec { arity: 2, holes: 0, template: Net::wire() };
        let mu = solve_recursion(&spec).unwrap();
        let out = crate::rewrite::reduce(&mu, crate::rewrite::Strategy::FullParallel, 10_000);
        assert_eq!(out.status, crate::rewrite::Status::CutFree);
        assert!(alpha_eq(&out.net, &Net::wire()));
    }

    #[test]
    fn iota_solution_unfolds_twice() {
        let spec = iota_spec();
        let mu = solve_recursion(&spec).unwrap();
        let once = unfold(&mu);
        assert!(alpha_eq(&once, &spec.fill(&mu).unwrap()));
        let fresh = spec.fill(&mu).unwrap();
        let twice = unfold(&fresh);
        assert!(alpha_eq(&twice, &spec.fill(&spec.fill(&mu).unwrap()).unwrap()));
    }

    #[test]
    fn corpus_loads() {
        let c = corpus();
        for (name, n) in &c {
            n.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert_eq!(c["fig1"].cell_count(), 11);
    }
}
