//! Geometry of interaction: monomials and their rewriting, the semiring
//! interpretation, port graphs, maximal paths, GoI matrices and the
//! execution formula.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::address::{Address, AddressSet, Pillar};
use crate::error::{Error, Result};
use crate::net::{CellKind, Net, PortRef, Slot};
use crate::structure::{is_cut_free, Feedback};
use crate::word::{BiWord, Letter, Word};

/// Base symbol of an atom: `c`, `d` for δ aux 1, 2 and `f`, `g` for ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Base {
    /// δ, auxiliary port 1.
    C,
    /// δ, auxiliary port 2.
    D,
    /// ζ, auxiliary port 1.
    F,
    /// ζ, auxiliary port 2.
    G,
}

impl Base {
    /// All four bases.
    pub const ALL: [Base; 4] = [Base::C, Base::D, Base::F, Base::G];

    /// Base of the internal edge to auxiliary port `aux` of a `kind` cell.
    pub fn of(kind: CellKind, aux: usize) -> Base {
        match (kind, aux) {
            (CellKind::Delta, 1) => Base::C,
            (CellKind::Delta, _) => Base::D,
            (_, 1) => Base::F,
            _ => Base::G,
        }
    }

    fn is_delta(self) -> bool {
        matches!(self, Base::C | Base::D)
    }

    fn as_char(self) -> char {
        match self {
            Base::C => 'c',
            Base::D => 'd',
            Base::F => 'f',
            Base::G => 'g',
        }
    }

    fn letter(self) -> Letter {
        match self {
            Base::C | Base::F => Letter::P,
            Base::D | Base::G => Letter::Q,
        }
    }
}

/// An atom: a base, possibly starred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    /// Base symbol.
    pub base: Base,
    /// True for the dual atom.
    pub starred: bool,
}

impl Atom {
    /// Positive atom.
    pub fn pos(base: Base) -> Atom {
        Atom { base, starred: false }
    }

    /// Negative atom.
    pub fn neg(base: Base) -> Atom {
        Atom { base, starred: true }
    }

    /// The dual atom.
    pub fn star(self) -> Atom {
        Atom { base: self.base, starred: !self.starred }
    }

    /// All eight atoms.
    pub fn all() -> Vec<Atom> {
        Base::ALL.iter().flat_map(|&b| [Atom::pos(b), Atom::neg(b)]).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base.as_char(), if self.starred { "*" } else { "" })
    }
}

/// A finite word of atoms; the empty word is the unit `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub Vec<Atom>);

impl Monomial {
    /// The unit.
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    /// Parses a word such as `c*f` or `1`.
    pub fn parse(s: &str) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(ch) = chars.next() {
            let base = match ch {
                'c' => Base::C,
                'd' => Base::D,
                'f' => Base::F,
                'g' => Base::G,
                '1' => continue,
                _ => return None,
            };
            let starred = chars.peek() == Some(&'*');
            if starred {
                chars.next();
            }
            out.push(Atom { base, starred });
        }
        Some(Monomial(out))
    }

    /// The involution: reversed word of dual atoms.
    pub fn star(&self) -> Monomial {
        Monomial(self.0.iter().rev().map(|a| a.star()).collect())
    }

    /// True when no atom is starred.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|a| !a.starred)
    }

    /// Length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the unit.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Positions `i` where a rule applies to atoms `i, i+1`.
pub fn redexes(m: &Monomial) -> Vec<usize> {
    (0..m.0.len().saturating_sub(1)).filter(|&i| rewrite_at(m, i).is_some()).collect()
}

/// Applies the rule at position `i`, if any.
///
/// `x* x` cancels; `x* y` with `x`, `y` from different cells kinds swaps to
/// `y x*`; `x* y` with distinct atoms of one kind is a clash and is stuck.
pub fn rewrite_at(m: &Monomial, i: usize) -> Option<Monomial> {
    let (a, b) = (*m.0.get(i)?, *m.0.get(i + 1)?);
    if !a.starred || b.starred {
        return None;
    }
    let mut v = m.0.clone();
    if a.base == b.base {
        v.drain(i..i + 2);
    } else if a.base.is_delta() != b.base.is_delta() {
        v[i] = b;
        v[i + 1] = a;
    } else {
        return None;
    }
    Some(Monomial(v))
}

/// Normal form by leftmost rewriting.
pub fn mono_rewrite(m: &Monomial) -> Monomial {
    let mut cur = m.clone();
    while let Some(&i) = redexes(&cur).first() {
        cur = rewrite_at(&cur, i).expect("redex");
    }
    cur
}

/// True when the normal form is a positive word followed by a negative one.
pub fn is_clash_free(m: &Monomial) -> bool {
    let nf = mono_rewrite(m);
    let first_neg = nf.0.iter().position(|a| a.starred).unwrap_or(nf.0.len());
    nf.0[first_neg..].iter().all(|a| a.starred)
}

/// Sum over negative atoms of the number of positive atoms to their right.
pub fn mono_value(m: &Monomial) -> usize {
    let mut positives_right = 0;
    let mut total = 0;
    for a in m.0.iter().rev() {
        if a.starred {
            total += positives_right;
        } else {
            positives_right += 1;
        }
    }
    total
}

/// A normalized semiring term `t·s*`, with both sides word pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    /// Positive part.
    pub t: BiWord,
    /// Starred part.
    pub s: BiWord,
}

fn mul_coord(t: &Word, s: &Word, u: &Word, v: &Word) -> Option<(Word, Word)> {
    // (t s*)(u v*): cancel s* against u.
    if let Some(rest) = s.strip_from(u) {
        Some((t.concat(&rest), v.clone()))
    } else {
        u.strip_from(s).map(|rest| (t.clone(), v.concat(&rest)))
    }
}

impl Term {
    /// The unit `1⊗1`.
    pub fn one() -> Term {
        Term { t: BiWord::empty(), s: BiWord::empty() }
    }

    /// Product, or `None` for zero.
    pub fn mul(&self, other: &Term) -> Option<Term> {
        let (t1, s1) = mul_coord(&self.t.w1, &self.s.w1, &other.t.w1, &other.s.w1)?;
        let (t2, s2) = mul_coord(&self.t.w2, &self.s.w2, &other.t.w2, &other.s.w2)?;
        Some(Term { t: BiWord { w1: t1, w2: t2 }, s: BiWord { w1: s1, w2: s2 } })
    }

    /// The involution.
    pub fn star(&self) -> Term {
        Term { t: self.s.clone(), s: self.t.clone() }
    }

    /// True when every power is nonzero.
    pub fn is_idempotent_free(&self) -> bool {
        self.t.w1.comparable(&self.s.w1) && self.t.w2.comparable(&self.s.w2)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}*", self.t, self.s)
    }
}

/// An element of the GoI semiring: a finite multiset of terms; the empty
/// multiset is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SemiringElement(pub BTreeMap<Term, usize>);

impl SemiringElement {
    /// Zero.
    pub fn zero() -> SemiringElement {
        SemiringElement::default()
    }

    /// A single term.
    pub fn term(t: Term) -> SemiringElement {
        let mut m = BTreeMap::new();
        m.insert(t, 1);
        SemiringElement(m)
    }

    /// The unit.
    pub fn one() -> SemiringElement {
        SemiringElement::term(Term::one())
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `k` copies of a term.
    pub fn add_term(&mut self, t: Term, k: usize) {
        *self.0.entry(t).or_insert(0) += k;
    }

    /// Sum in place.
    pub fn add(&mut self, other: &SemiringElement) {
        for (t, &k) in &other.0 {
            self.add_term(t.clone(), k);
        }
    }

    /// Product.
    pub fn mul(&self, other: &SemiringElement) -> SemiringElement {
        let mut out = SemiringElement::zero();
        for (a, &ka) in &self.0 {
            for (b, &kb) in &other.0 {
                if let Some(t) = a.mul(b) {
                    out.add_term(t, ka * kb);
                }
            }
        }
        out
    }

    /// The involution.
    pub fn star(&self) -> SemiringElement {
        SemiringElement(self.0.iter().map(|(t, &k)| (t.star(), k)).collect())
    }

    /// Terms with multiplicity, in order.
    pub fn terms(&self) -> Vec<Term> {
        self.0.iter().flat_map(|(t, &k)| std::iter::repeat(t.clone()).take(k)).collect()
    }
}

impl Serialize for SemiringElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            t: [&'a Word; 2],
            s: [&'a Word; 2],
        }
        let terms = self.terms();
        let js: Vec<J> = terms.iter().map(|x| J { t: [&x.t.w1, &x.t.w2], s: [&x.s.w1, &x.s.w2] }).collect();
        js.serialize(s)
    }
}

impl fmt::Display for SemiringElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn atom_term(a: Atom) -> Term {
    let mut w = BiWord::empty();
    let word = Word(vec![a.base.letter()]);
    if a.base.is_delta() {
        w.w1 = word;
    } else {
        w.w2 = word;
    }
    if a.starred {
        Term { t: BiWord::empty(), s: w }
    } else {
        Term { t: w, s: BiWord::empty() }
    }
}

/// The semiring interpretation of a monomial.
pub fn interpret(m: &Monomial) -> SemiringElement {
    let mut acc = Term::one();
    for &a in &m.0 {
        match acc.mul(&atom_term(a)) {
            Some(t) => acc = t,
            None => return SemiringElement::zero(),
        }
    }
    SemiringElement::term(acc)
}

/// An edge of the port graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortEdge {
    /// One end.
    pub a: PortRef,
    /// Other end; for an internal edge this is the auxiliary port.
    pub b: PortRef,
    /// Base of an internal edge; `None` for a wire (weight 1).
    pub weight: Option<Base>,
}

/// The port graph of a net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortGraph {
    /// Free ports and cell ports.
    pub vertices: Vec<PortRef>,
    /// Wires first, then internal edges.
    pub edges: Vec<PortEdge>,
}

/// Builds the port graph.
pub fn build_port_graph(net: &Net) -> PortGraph {
    let vertices = net.all_endpoints();
    let mut edges: Vec<PortEdge> = net.wires().into_iter().map(|(a, b)| PortEdge { a, b, weight: None }).collect();
    for c in net.cell_ids() {
        let kind = net.kind(c);
        if kind == CellKind::Eps {
            continue;
        }
        for i in 1..=2 {
            edges.push(PortEdge { a: PortRef::p(c), b: PortRef::aux(c, i), weight: Some(Base::of(kind, i)) });
        }
    }
    PortGraph { vertices, edges }
}

/// A maximal path between two free ports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxPath {
    /// Starting free port.
    pub from: usize,
    /// Ending free port.
    pub to: usize,
    /// Visited vertices, starting and ending with free ports.
    pub ports: Vec<PortRef>,
    /// Number of proper cuts crossed.
    pub crossings: usize,
    /// Weight: edge weights in reverse order.
    pub weight: Monomial,
}

impl MaxPath {
    /// True when no active pair is crossed.
    pub fn is_observable(&self) -> bool {
        self.crossings == 0
    }
}

struct Walker<'a> {
    net: &'a Net,
    max_crossings: usize,
    prune_zero: bool,
    out: Vec<MaxPath>,
}

impl Walker<'_> {
    // `at` is the endpoint just reached by a wire; `atoms` are in path
    // order; `term` is the interpretation of the reversed word so far.
    #[allow(clippy::too_many_arguments)]
    fn arrive(
        &mut self,
        from: usize,
        at: PortRef,
        ports: &mut Vec<PortRef>,
        atoms: &mut Vec<Atom>,
        term: Option<&Term>,
        crossings: usize,
        descent: &mut HashSet<PortRef>,
    ) {
        ports.push(at);
        match at {
            PortRef::Free(j) => {
                let weight = Monomial(atoms.iter().rev().copied().collect());
                self.out.push(MaxPath { from, to: j, ports: ports.clone(), crossings, weight });
            }
            PortRef::Cell(c, Slot::Principal) => {
                let kind = self.net.kind(c);
                if kind != CellKind::Eps {
                    for i in 1..=2 {
                        let atom = Atom::neg(Base::of(kind, i));
                        self.internal(from, PortRef::aux(c, i), atom, ports, atoms, term, crossings, descent, false);
                    }
                }
            }
            PortRef::Cell(c, s) => {
                let kind = self.net.kind(c);
                let atom = Atom::pos(Base::of(kind, s.index()));
                if descent.insert(at) {
                    self.internal(from, PortRef::p(c), atom, ports, atoms, term, crossings, descent, true);
                    descent.remove(&at);
                }
            }
        }
        ports.pop();
    }

    #[allow(clippy::too_many_arguments)]
    fn internal(
        &mut self,
        from: usize,
        exit: PortRef,
        atom: Atom,
        ports: &mut Vec<PortRef>,
        atoms: &mut Vec<Atom>,
        term: Option<&Term>,
        crossings: usize,
        descent: &mut HashSet<PortRef>,
        down: bool,
    ) {
        let next_term = match term {
            Some(t) => match atom_term(atom).mul(t) {
                Some(x) => Some(x),
                None if self.prune_zero => return,
                None => None,
            },
            None => None,
        };
        let peer = self.net.peer(exit);
        let cut = down && peer.is_principal();
        let crossings = crossings + usize::from(cut);
        if crossings > self.max_crossings {
            return;
        }
        ports.push(exit);
        atoms.push(atom);
        if cut {
            // A crossing starts a fresh segment.
            let mut fresh = HashSet::new();
            self.arrive(from, peer, ports, atoms, next_term.as_ref(), crossings, &mut fresh);
        } else {
            self.arrive(from, peer, ports, atoms, next_term.as_ref(), crossings, descent);
        }
        atoms.pop();
        ports.pop();
    }
}

fn walk(net: &Net, max_crossings: usize, prune_zero: bool) -> Vec<MaxPath> {
    let mut w = Walker { net, max_crossings, prune_zero, out: Vec::new() };
    for i in 1..=net.interface() {
        let mut ports = vec![PortRef::Free(i)];
        let mut atoms = Vec::new();
        let peer = net.peer(PortRef::Free(i));
        let mut descent = HashSet::new();
        w.arrive(i, peer, &mut ports, &mut atoms, Some(&Term::one()), 0, &mut descent);
    }
    w.out
}

/// All maximal paths crossing at most `max_crossings` proper cuts, in both
/// directions.
pub fn maximal_paths(net: &Net, max_crossings: usize) -> Vec<MaxPath> {
    walk(net, max_crossings, false)
}

/// An `n×n` matrix over the semiring; entry `(j, i)` collects paths from
/// port `i` to port `j` (both 1-based in the API).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoIMatrix {
    /// Dimension.
    pub n: usize,
    /// Row-major entries, 0-based.
    pub entries: Vec<Vec<SemiringElement>>,
}

impl GoIMatrix {
    /// The zero matrix.
    pub fn zero(n: usize) -> GoIMatrix {
        GoIMatrix { n, entries: vec![vec![SemiringElement::zero(); n]; n] }
    }

    /// Entry for paths from port `i` to port `j`.
    pub fn get(&self, j: usize, i: usize) -> &SemiringElement {
        &self.entries[j - 1][i - 1]
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(SemiringElement::is_zero))
    }

    /// Matrix product.
    pub fn mul(&self, other: &GoIMatrix) -> GoIMatrix {
        let mut out = GoIMatrix::zero(self.n);
        for j in 0..self.n {
            for k in 0..self.n {
                if self.entries[j][k].is_zero() {
                    continue;
                }
                for i in 0..self.n {
                    if other.entries[k][i].is_zero() {
                        continue;
                    }
                    let x = self.entries[j][k].mul(&other.entries[k][i]);
                    out.entries[j][i].add(&x);
                }
            }
        }
        out
    }

    /// Sum in place.
    pub fn add(&mut self, other: &GoIMatrix) {
        for j in 0..self.n {
            for i in 0..self.n {
                let x = other.entries[j][i].clone();
                self.entries[j][i].add(&x);
            }
        }
    }

    /// True when entry `(i, j)` is the star of entry `(j, i)` everywhere.
    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|j| (0..self.n).all(|i| self.entries[i][j] == self.entries[j][i].star()))
    }

    /// Top-left `k×k` block.
    pub fn restrict(&self, k: usize) -> GoIMatrix {
        GoIMatrix { n: k, entries: self.entries[..k].iter().map(|r| r[..k].to_vec()).collect() }
    }

    /// JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// The GoI matrix of a cut-free net.
pub fn goi_matrix(cutfree: &Net) -> Result<GoIMatrix> {
    if !is_cut_free(cutfree) {
        return Err(Error::NotCutFree);
    }
    let mut m = GoIMatrix::zero(cutfree.interface());
    for p in walk(cutfree, 0, false) {
        let x = interpret(&p.weight);
        m.entries[p.to - 1][p.from - 1].add(&x);
    }
    Ok(m)
}

/// The matrix of a feedback on `n` ports.
pub fn feedback_matrix(sigma: &Feedback, n: usize) -> GoIMatrix {
    let mut m = GoIMatrix::zero(n);
    for (i, j) in sigma.pairs() {
        m.entries[i - 1][j - 1] = SemiringElement::one();
        m.entries[j - 1][i - 1] = SemiringElement::one();
    }
    m
}

/// Three-valued nilpotency answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Nilpotency {
    /// The `h`-th power vanishes (`h` is the least such power).
    Yes(usize),
    /// A diagonal term all of whose powers are nonzero was found.
    No,
    /// Neither within the budget.
    Unknown,
}

/// Result of the execution formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Execution {
    /// Nilpotency of `σ·ν₀`.
    pub nilpotent: Nilpotency,
    /// Partial sum projected on the surviving ports.
    pub matrix: GoIMatrix,
}

/// Computes `Σ_h ν₀(σν₀)^h` up to `power_budget` powers, projected on the
/// ports outside the domain of `sigma`, which must be the last ports.
pub fn execution_formula(cutfree: &Net, sigma: &Feedback, power_budget: usize) -> Result<Execution> {
    let n = cutfree.interface();
    let nu = goi_matrix(cutfree)?;
    let dom = sigma.domain();
    if dom.iter().any(|&i| i > n) {
        return Err(Error::InvalidFeedback(format!("feedback domain exceeds {n} ports")));
    }
    let surviving = n - dom.len();
    if dom.iter().any(|&i| i <= surviving) {
        return Err(Error::InvalidFeedback("feedback must act on the last ports".into()));
    }
    let s = feedback_matrix(sigma, n);
    let step = s.mul(&nu);
    let mut sum = nu.clone();
    let mut power = step.clone();
    let mut nilpotent = Nilpotency::Unknown;
    for h in 1..=power_budget.max(1) {
        if power.is_zero() {
            nilpotent = Nilpotency::Yes(h);
            break;
        }
        if (0..n).any(|i| power.entries[i][i].0.keys().any(Term::is_idempotent_free)) {
            nilpotent = Nilpotency::No;
            break;
        }
        sum.add(&nu.mul(&power));
        power = power.mul(&step);
    }
    Ok(Execution { nilpotent, matrix: sum.restrict(surviving) })
}

/// Addresses `⟨s@i | t@j⟩` of maximal paths `i → j` with nonzero weight
/// `t·s*`, over paths crossing at most `crossing_budget` cuts.
pub fn addresses_via_goi(net: &Net, crossing_budget: usize) -> AddressSet {
    let mut out = AddressSet::new();
    for p in walk(net, crossing_budget, true) {
        for t in interpret(&p.weight).0.keys() {
            out.insert(Address::new(Pillar::new(t.s.clone(), p.from), Pillar::new(t.t.clone(), p.to)));
        }
    }
    out
}
