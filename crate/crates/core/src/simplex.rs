//! Small simplices stored as vertex bitmasks.
//!
//! Bit `l - 1` of a [`VSet`] is set when label `l` belongs to the set. Labels
//! are 1-based everywhere in the public API, matching the hexahedron template.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of vertex labels in `1..=16`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VSet(pub u16);

/// Serialized as the sorted label list.
impl Serialize for VSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<u8>::deserialize(d)?;
        if labels.iter().any(|&l| !(1..=16).contains(&l)) {
            return Err(serde::de::Error::custom("labels must lie in 1..=16"));
        }
        Ok(VSet::from_labels(&labels))
    }
}

impl VSet {
    pub const EMPTY: VSet = VSet(0);

    pub fn from_labels(labels: &[u8]) -> VSet {
        let mut m = 0u16;
        for &l in labels {
            debug_assert!((1..=16).contains(&l));
            m |= 1 << (l - 1);
        }
        VSet(m)
    }

    #[inline]
    pub fn singleton(label: u8) -> VSet {
        VSet(1 << (label - 1))
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, label: u8) -> bool {
        self.0 & (1 << (label - 1)) != 0
    }

    #[inline]
    pub fn is_subset(self, other: VSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: VSet) -> VSet {
        VSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VSet) -> VSet {
        VSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VSet) -> VSet {
        VSet(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, label: u8) -> VSet {
        VSet(self.0 | (1 << (label - 1)))
    }

    #[inline]
    pub fn without(self, label: u8) -> VSet {
        VSet(self.0 & !(1 << (label - 1)))
    }

    /// Labels in increasing order.
    pub fn labels(self) -> impl Iterator<Item = u8> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let t = m.trailing_zeros() as u8;
                m &= m - 1;
                Some(t + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.labels().collect()
    }

    /// Subsets of `self` with exactly `k` elements, in increasing bitmask order.
    pub fn subsets_of_size(self, k: u32) -> impl Iterator<Item = VSet> {
        let full = self.0;
        let mut sub: u32 = 0;
        let mut done = false;
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let cur = sub as u16;
            if sub == full as u32 {
                done = true;
            } else {
                sub = ((sub | !(full as u32)) + 1) & full as u32;
                if sub == 0 {
                    done = true;
                }
            }
            if cur.count_ones() == k {
                return Some(VSet(cur));
            }
        })
    }
}

impl fmt::Debug for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All `k`-subsets of `{1..n}` in lexicographic order of their sorted label
/// tuples.
pub fn lex_subsets(n: u8, k: usize) -> Vec<VSet> {
    fn rec(start: u8, n: u8, k: usize, cur: &mut Vec<u8>, out: &mut Vec<VSet>) {
        if cur.len() == k {
            out.push(VSet::from_labels(cur));
            return;
        }
        for l in start..=n {
            cur.push(l);
            rec(l + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Sign of the permutation that sorts `seq` (which must have distinct entries).
pub fn sort_sign(seq: &[u8]) -> i8 {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
