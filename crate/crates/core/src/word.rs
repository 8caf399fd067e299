//! Finite words over `{p, q}` and pairs of them.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A letter of the two-letter alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Left branch / first auxiliary port.
    P,
    /// Right branch / second auxiliary port.
    Q,
}

impl Letter {
    /// Letter for auxiliary port `i` (1 or 2).
    pub fn of_aux(i: usize) -> Letter {
        if i == 1 {
            Letter::P
        } else {
            Letter::Q
        }
    }

    /// Character form.
    pub fn as_char(self) -> char {
        match self {
            Letter::P => 'p',
            Letter::Q => 'q',
        }
    }
}

/// A finite word over `{p, q}`; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    /// The empty word.
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parses a string of `p` and `q`; other characters yield `None`.
    pub fn parse(s: &str) -> Option<Word> {
        s.chars()
            .map(|c| match c {
                'p' => Some(Letter::P),
                'q' => Some(Letter::Q),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the empty word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word with one more letter.
    pub fn push(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other` with the prefix `self` removed, when `self` is a prefix.
    pub fn strip_from(&self, other: &Word) -> Option<Word> {
        other.0.strip_prefix(self.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    /// True when one word is a prefix of the other.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// First `k` letters (the whole word when shorter).
    pub fn truncate(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.len())].to_vec())
    }

    /// All words of length exactly `k`, in lexicographic order.
    pub fn all_of_length(k: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..k {
            out = out.iter().flat_map(|w| [w.push(Letter::P), w.push(Letter::Q)]).collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.iter().map(|l| l.as_char()).collect::<String>())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("not a word over p/q: {s}")))
    }
}

/// A pair of words: the first records δ branchings, the second ζ ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct BiWord {
    /// δ coordinate.
    pub w1: Word,
    /// ζ coordinate.
    pub w2: Word,
}

impl BiWord {
    /// The pair of empty words.
    pub fn empty() -> BiWord {
        BiWord::default()
    }

    /// Builds from two strings over `p`/`q`. Panics on other characters.
    pub fn from_strs(a: &str, b: &str) -> BiWord {
        BiWord { w1: Word::parse(a).expect("word"), w2: Word::parse(b).expect("word") }
    }

    /// Coordinate `i` (0 or 1).
    pub fn coord(&self, i: usize) -> &Word {
        if i == 0 {
            &self.w1
        } else {
            &self.w2
        }
    }

    /// Componentwise concatenation.
    pub fn concat(&self, other: &BiWord) -> BiWord {
        BiWord { w1: self.w1.concat(&other.w1), w2: self.w2.concat(&other.w2) }
    }

    /// Componentwise prefix test.
    pub fn is_prefix_of(&self, other: &BiWord) -> bool {
        self.w1.is_prefix_of(&other.w1) && self.w2.is_prefix_of(&other.w2)
    }

    /// Total length.
    pub fn len(&self) -> usize {
        self.w1.len() + self.w2.len()
    }

    /// True when both words are empty.
    pub fn is_empty(&self) -> bool {
        self.w1.is_empty() && self.w2.is_empty()
    }
}

impl fmt::Display for BiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.w1, self.w2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_and_strip() {
        let a = Word::parse("pq").unwrap();
        let b = Word::parse("pqqp").unwrap();
        assert!(a.is_prefix_of(&b));
        assert_eq!(a.strip_from(&b), Word::parse("qp"));
        assert!(a.comparable(&b) && b.comparable(&a));
        assert!(!Word::parse("q").unwrap().comparable(&a));
    }

    #[test]
    fn enumerates_words() {
        assert_eq!(Word::all_of_length(2).len(), 4);
        assert_eq!(Word::all_of_length(0), vec![Word::empty()]);
    }

    #[test]
    fn serde_as_string() {
        let b = BiWord::from_strs("pq", "");
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(j, r#"{"w1":"pq","w2":""}"#);
        let back: BiWord = serde_json::from_str(&j).unwrap();
        assert_eq!(back, b);
    }
}
