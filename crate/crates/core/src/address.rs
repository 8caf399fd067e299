//! Addresses of observable axioms and finite address sets.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::net::Net;
use crate::structure::Forest;
use crate::word::BiWord;

/// A finite word pair attached to a free port.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pillar {
    /// Branch words.
    #[serde(flatten)]
    pub bw: BiWord,
    /// Free port, from 1.
    pub port: usize,
}

impl Pillar {
    /// Builds a pillar.
    pub fn new(bw: BiWord, port: usize) -> Pillar {
        Pillar { bw, port }
    }

    /// Builds from two strings over `p`/`q` and a port.
    pub fn of(w1: &str, w2: &str, port: usize) -> Pillar {
        Pillar { bw: BiWord::from_strs(w1, w2), port }
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.bw, self.port)
    }
}

/// Unordered pair of pillars, stored with `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Address {
    /// Smaller pillar.
    pub a: Pillar,
    /// Larger pillar.
    pub b: Pillar,
}

impl Address {
    /// Normalizing constructor.
    pub fn new(x: Pillar, y: Pillar) -> Address {
        if x <= y {
            Address { a: x, b: y }
        } else {
            Address { a: y, b: x }
        }
    }

    /// True when both pillars coincide.
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// The wire address between ports `i` and `j`.
    pub fn wire(i: usize, j: usize) -> Address {
        Address::new(Pillar::new(BiWord::empty(), i), Pillar::new(BiWord::empty(), j))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}|{}⟩", self.a, self.b)
    }
}

/// A finite set of addresses, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AddressSet(pub BTreeSet<Address>);

impl AddressSet {
    /// The empty set.
    pub fn new() -> AddressSet {
        AddressSet::default()
    }

    /// Inserts an address; returns true if it was new.
    pub fn insert(&mut self, a: Address) -> bool {
        self.0.insert(a)
    }

    /// Number of addresses.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterates in order.
    pub fn iter(&self) -> impl Iterator<Item = &Address> {
        self.0.iter()
    }

    /// Union in place.
    pub fn extend(&mut self, other: &AddressSet) {
        self.0.extend(other.0.iter().cloned());
    }

    /// True when every address is in `other`.
    pub fn is_subset(&self, other: &AddressSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// JSON text of the set.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl FromIterator<Address> for AddressSet {
    fn from_iter<I: IntoIterator<Item = Address>>(it: I) -> AddressSet {
        AddressSet(it.into_iter().collect())
    }
}

impl fmt::Display for AddressSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Addresses of the observable axioms of a net given its forest.
pub fn obs_axioms_in(net: &Net, forest: &Forest) -> AddressSet {
    forest
        .observable_wires(net)
        .into_iter()
        .map(|(x, y)| {
            let a = &forest.leaf_info[&x];
            let b = &forest.leaf_info[&y];
            Address::new(Pillar::new(a.address.clone(), a.port), Pillar::new(b.address.clone(), b.port))
        })
        .collect()
}

/// Addresses of the observable axioms of a net.
pub fn obs_axioms(net: &Net) -> AddressSet {
    obs_axioms_in(net, &Forest::of(net))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_and_eps_nets() {
        let w = obs_axioms(&Net::wire());
        assert_eq!(w.0.into_iter().collect::<Vec<_>>(), vec![Address::wire(1, 2)]);
        assert!(obs_axioms(&Net::eps_net(2)).is_empty());
    }

    #[test]
    fn json_shape() {
        let s: AddressSet = [Address::wire(1, 2)].into_iter().collect();
        assert_eq!(s.to_json(), r#"[{"a":{"w1":"","w2":"","port":1},"b":{"w1":"","w2":"","port":2}}]"#);
    }
}
