//! Edifices represented by finite sets of vault generators: canonical
//! forms, containment, prefix truncations and the trace along a feedback.
//!
//! An address `⟨s@i | t@j⟩` generates the vault of arches `⟨sw@i | tw@j⟩`
//! for every pair of infinite words `w`. Stripping the longest common
//! suffix of `s` and `t` in each coordinate gives a *root* `(r, r')` and a
//! parameter `v` with `s = r·v`, `t = r'·v`. Vaults with the same root are
//! product cylinders in the parameter space; vaults with distinct roots
//! meet in a nowhere dense set. So two finite unions of vaults are equal
//! exactly when, root by root, their cylinder unions agree.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::address::{Address, AddressSet, Pillar};
use crate::structure::Feedback;
use crate::word::{BiWord, Letter, Word};

/// Oriented root of a vault: the two root pillars, smaller first.
type Root = (Pillar, Pillar);

fn strip_common_suffix(a: &Word, b: &Word) -> (Word, Word, Word) {
    let mut k = 0;
    while k < a.len() && k < b.len() && a.0[a.len() - 1 - k] == b.0[b.len() - 1 - k] {
        k += 1;
    }
    let v = Word(a.0[a.len() - k..].to_vec());
    (Word(a.0[..a.len() - k].to_vec()), Word(b.0[..b.len() - k].to_vec()), v)
}

/// Splits an address into its oriented root and parameter.
fn root_of(x: &Address) -> (Root, BiWord) {
    let (r1, q1, v1) = strip_common_suffix(&x.a.bw.w1, &x.b.bw.w1);
    let (r2, q2, v2) = strip_common_suffix(&x.a.bw.w2, &x.b.bw.w2);
    let pa = Pillar::new(BiWord { w1: r1, w2: r2 }, x.a.port);
    let pb = Pillar::new(BiWord { w1: q1, w2: q2 }, x.b.port);
    let root = if pa <= pb { (pa, pb) } else { (pb, pa) };
    (root, BiWord { w1: v1, w2: v2 })
}

fn from_root(root: &Root, v: &BiWord) -> Address {
    Address::new(
        Pillar::new(root.0.bw.concat(v), root.0.port),
        Pillar::new(root.1.bw.concat(v), root.1.port),
    )
}

fn group(addrs: &AddressSet) -> BTreeMap<Root, Vec<BiWord>> {
    let mut out: BTreeMap<Root, Vec<BiWord>> = BTreeMap::new();
    for x in addrs.iter() {
        let (r, v) = root_of(x);
        out.entry(r).or_default().push(v);
    }
    out
}

/// True when the cylinder of `c` lies in the union of the cylinders `gens`.
fn covers(c: &BiWord, gens: &[BiWord]) -> bool {
    let live: Vec<&BiWord> =
        gens.iter().filter(|g| g.w1.comparable(&c.w1) && g.w2.comparable(&c.w2)).collect();
    if live.iter().any(|g| g.is_prefix_of(c)) {
        return true;
    }
    if live.is_empty() {
        return false;
    }
    // Some generator is strictly deeper than `c` in a coordinate: split there.
    let split_first = live.iter().any(|g| g.w1.len() > c.w1.len());
    [Letter::P, Letter::Q].iter().all(|&l| {
        let mut d = c.clone();
        if split_first {
            d.w1 = d.w1.push(l);
        } else {
            d.w2 = d.w2.push(l);
        }
        covers(&d, gens)
    })
}

fn prefixes(w: &Word) -> Vec<Word> {
    (0..=w.len()).map(|k| w.truncate(k)).collect()
}

fn maximal_cylinders(gens: &[BiWord]) -> Vec<BiWord> {
    let firsts: BTreeSet<Word> = gens.iter().flat_map(|g| prefixes(&g.w1)).collect();
    let seconds: BTreeSet<Word> = gens.iter().flat_map(|g| prefixes(&g.w2)).collect();
    let mut inside = Vec::new();
    for a in &firsts {
        for b in &seconds {
            let c = BiWord { w1: a.clone(), w2: b.clone() };
            if covers(&c, gens) {
                inside.push(c);
            }
        }
    }
    inside.iter().filter(|c| !inside.iter().any(|d| d != *c && d.is_prefix_of(c))).cloned().collect()
}

/// Canonical generator set: every maximal vault contained in the edifice.
///
/// The result is independent of the input presentation, contains no pair
/// of sibling addresses, and two sets generate the same edifice iff their
/// canonical forms are equal.
pub fn canonicalize(addrs: &AddressSet) -> AddressSet {
    let mut out = AddressSet::new();
    for (root, gens) in group(addrs) {
        for v in maximal_cylinders(&gens) {
            out.insert(from_root(&root, &v));
        }
    }
    out
}

/// True when `addrs` is its own canonical form.
pub fn is_canonical(addrs: &AddressSet) -> bool {
    canonicalize(addrs) == *addrs
}

/// Equality of the generated edifices.
pub fn edifice_equal(a: &AddressSet, b: &AddressSet) -> bool {
    canonicalize(a) == canonicalize(b)
}

/// True when the vault of `x` lies inside the edifice generated by `addrs`.
pub fn vault_contained(x: &Address, addrs: &AddressSet) -> bool {
    let (root, v) = root_of(x);
    match group(addrs).get(&root) {
        Some(gens) => covers(&v, gens),
        None => false,
    }
}

/// True when every vault of `a` lies inside the edifice of `b`.
pub fn edifice_subset(a: &AddressSet, b: &AddressSet) -> bool {
    a.iter().all(|x| vault_contained(x, b))
}

/// Length-`k` prefix shadows of the arches of an edifice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSet {
    /// Depth.
    pub k: usize,
    /// Pairs of length-`k` word pairs with ports.
    pub pairs: BTreeSet<Address>,
}

fn cut(w: &Word, u: &Word, k: usize) -> Word {
    w.concat(u).truncate(k)
}

/// Prefix shadows at depth `k` of the vaults generated by `addrs`.
pub fn truncate(addrs: &AddressSet, k: usize) -> TruncationSet {
    let mut pairs = BTreeSet::new();
    for x in addrs.iter() {
        let need1 = k.saturating_sub(x.a.bw.w1.len().min(x.b.bw.w1.len()));
        let need2 = k.saturating_sub(x.a.bw.w2.len().min(x.b.bw.w2.len()));
        let us1 = Word::all_of_length(need1);
        let us2 = Word::all_of_length(need2);
        for u1 in &us1 {
            for u2 in &us2 {
                let pa = BiWord { w1: cut(&x.a.bw.w1, u1, k), w2: cut(&x.a.bw.w2, u2, k) };
                let pb = BiWord { w1: cut(&x.b.bw.w1, u1, k), w2: cut(&x.b.bw.w2, u2, k) };
                pairs.insert(Address::new(Pillar::new(pa, x.a.port), Pillar::new(pb, x.b.port)));
            }
        }
    }
    TruncationSet { k, pairs }
}

/// True when the depth-`j` shadows agree for every `j <= k`.
///
/// Shadows at depth `j` are the prefix images of those at depth `k`, so
/// comparing at depth `k` decides all lower depths.
pub fn closure_equal_up_to(a: &AddressSet, b: &AddressSet, k: usize) -> bool {
    truncate(a, k) == truncate(b, k)
}

/// Deepest `j <= k` at which the shadows agree, or `None` if they already
/// differ at depth 0.
pub fn closure_agreement_depth(a: &AddressSet, b: &AddressSet, k: usize) -> Option<usize> {
    (0..=k).take_while(|&j| truncate(a, j) == truncate(b, j)).last()
}

/// Result of a trace enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    /// Canonical generators of the visible trace.
    pub addrs: AddressSet,
    /// False when `max_len` or `max_out` cut the enumeration short. The
    /// number of partial sequences explored is capped in proportion to
    /// `max_out`.
    pub complete: bool,
}

fn compose_coord(start: &Word, cur: &Word, next_in: &Word, next_out: &Word) -> Option<(Word, Word)> {
    if let Some(r) = cur.strip_from(next_in) {
        Some((start.concat(&r), next_out.clone()))
    } else {
        next_in.strip_from(cur).map(|r| (start.clone(), next_out.concat(&r)))
    }
}

/// Partial sequences explored per allowed output before giving up.
const STATES_PER_OUTPUT: usize = 4;

/// Visible trace of the edifice generated by `addrs` along `sigma`.
///
/// Trace sequences are enumerated symbolically on generators: chaining a
/// vault ending at `t@j` with a vault starting at `s'@σ(j)` needs `t` and
/// `s'` comparable in each coordinate, and the leftover suffix moves to the
/// opposite end. Ports keep their original numbers.
pub fn trace_addresses(addrs: &AddressSet, sigma: &Feedback, max_len: usize, max_out: usize) -> TraceResult {
    let oriented: Vec<(Pillar, Pillar)> = addrs
        .iter()
        .flat_map(|x| [(x.a.clone(), x.b.clone()), (x.b.clone(), x.a.clone())])
        .collect();
    let mut by_port: BTreeMap<usize, Vec<(Pillar, Pillar)>> = BTreeMap::new();
    for (s, t) in &oriented {
        by_port.entry(s.port).or_default().push((s.clone(), t.clone()));
    }
    let mut complete = true;
    let mut out = AddressSet::new();
    let mut seen: HashSet<(Pillar, Pillar)> = HashSet::new();
    let mut queue: VecDeque<(Pillar, Pillar, usize)> = VecDeque::new();
    for (s, t) in oriented {
        if !sigma.contains(s.port) && seen.insert((s.clone(), t.clone())) {
            queue.push_back((s, t, 1));
        }
    }
    while let Some((s, t, len)) = queue.pop_front() {
        let Some(next_port) = sigma.get(t.port) else {
            out.insert(Address::new(s, t));
            if out.len() > max_out {
                complete = false;
                break;
            }
            continue;
        };
        for (s2, t2) in by_port.get(&next_port).into_iter().flatten() {
            let Some((a1, b1)) = compose_coord(&s.bw.w1, &t.bw.w1, &s2.bw.w1, &t2.bw.w1) else { continue };
            let Some((a2, b2)) = compose_coord(&s.bw.w2, &t.bw.w2, &s2.bw.w2, &t2.bw.w2) else { continue };
            let ns = Pillar::new(BiWord { w1: a1, w2: a2 }, s.port);
            let nt = Pillar::new(BiWord { w1: b1, w2: b2 }, t2.port);
            if len + 1 > max_len {
                complete = false;
                continue;
            }
            if seen.len() > STATES_PER_OUTPUT * max_out {
                complete = false;
                queue.clear();
                break;
            }
            if seen.insert((ns.clone(), nt.clone())) {
                queue.push_back((ns, nt, len + 1));
            }
        }
    }
    TraceResult { addrs: canonicalize(&out), complete }
}

/// Renames ports: `keep[i]` becomes port `i + 1`. Addresses touching other
/// ports are dropped.
pub fn renumber_ports(addrs: &AddressSet, keep: &[usize]) -> AddressSet {
    let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect();
    addrs
        .iter()
        .filter_map(|x| {
            let a = *index.get(&x.a.port)?;
            let b = *index.get(&x.b.port)?;
            Some(Address::new(Pillar::new(x.a.bw.clone(), a), Pillar::new(x.b.bw.clone(), b)))
        })
        .collect()
}
