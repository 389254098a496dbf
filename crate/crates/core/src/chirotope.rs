//! Uniform rank-4 chirotopes on the 8 hexahedron labels.
//!
//! A chirotope stores one sign per sorted 4-subset (basis); values on
//! unsorted tuples follow the alternating rule at lookup time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::simplex::{sort_sign, VSet};
use crate::template::{self, Permutation};
use crate::triangulation::{quad_rank, quadruples};

pub const NUM_BASES: usize = 70;

/// Bit `i` set means the `i`-th basis (lexicographic order) is positive.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chirotope(u128);

/// Radon partition of a 5-subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    pub plus: VSet,
    pub minus: VSet,
}

impl Circuit {
    pub fn support(&self) -> VSet {
        self.plus.union(self.minus)
    }

    pub fn negated(&self) -> Circuit {
        Circuit {
            plus: self.minus,
            minus: self.plus,
        }
    }
}

/// Why a sign map fails to be an acyclic uniform chirotope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChirotopeViolation {
    Exchange { sigma: VSet, quad: VSet },
    PositiveCircuit(VSet),
}

impl Chirotope {
    pub fn from_bits(bits: u128) -> Chirotope {
        Chirotope(bits & ((1u128 << NUM_BASES) - 1))
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    pub fn from_signs(signs: &[i8]) -> Option<Chirotope> {
        if signs.len() != NUM_BASES {
            return None;
        }
        let mut bits = 0u128;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => bits |= 1 << i,
                -1 => {}
                _ => return None,
            }
        }
        Some(Chirotope(bits))
    }

    /// Sign of the `i`-th sorted basis.
    #[inline]
    pub fn basis_sign(&self, i: usize) -> i8 {
        if self.0 & (1 << i) != 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn sign_of_set(&self, basis: VSet) -> i8 {
        self.basis_sign(quad_rank(basis))
    }

    /// Value on an ordered tuple; 0 if a label repeats.
    pub fn eval(&self, tuple: [u8; 4]) -> i8 {
        let s = VSet::from_labels(&tuple);
        if s.len() != 4 {
            return 0;
        }
        sort_sign(&tuple) * self.sign_of_set(s)
    }

    pub fn negated(&self) -> Chirotope {
        Chirotope::from_bits(!self.0)
    }

    /// The chirotope of the relabeled configuration: label `l` becomes
    /// `g(l)`.
    pub fn relabel(&self, g: &Permutation) -> Chirotope {
        let inv = g.inverse();
        let mut bits = 0u128;
        for (i, b) in quadruples().iter().enumerate() {
            let l: Vec<u8> = b.labels().map(|x| inv.apply(x)).collect();
            if self.eval([l[0], l[1], l[2], l[3]]) > 0 {
                bits |= 1 << i;
            }
        }
        Chirotope(bits)
    }

    /// Circuit of a 5-subset by the alternating-sign formula; the smallest
    /// label is placed in `plus`.
    pub fn circuit(&self, five: VSet) -> Circuit {
        debug_assert_eq!(five.len(), 5);
        let labels = five.to_vec();
        let mut plus = VSet::EMPTY;
        let mut minus = VSet::EMPTY;
        for (i, &a) in labels.iter().enumerate() {
            // (-1)^(i+1) with 1-based position i+1.
            let alt = if i % 2 == 0 { -1 } else { 1 };
            if alt * self.sign_of_set(five.without(a)) > 0 {
                plus = plus.with(a);
            } else {
                minus = minus.with(a);
            }
        }
        let c = Circuit { plus, minus };
        if c.plus.contains(labels[0]) {
            c
        } else {
            c.negated()
        }
    }

    /// The three 3-term exchange products for `sigma` (2 labels) and four
    /// further labels `e1 < e2 < e3 < e4`.
    pub fn exchange_products(&self, sigma: VSet, quad: VSet) -> [i8; 3] {
        let s = sigma.to_vec();
        let e = quad.to_vec();
        let x = |a: u8, b: u8| self.eval([s[0], s[1], a, b]);
        [
            x(e[0], e[1]) * x(e[2], e[3]),
            -x(e[0], e[2]) * x(e[1], e[3]),
            x(e[0], e[3]) * x(e[1], e[2]),
        ]
    }

    /// Checks the exchange condition and acyclicity (alternation and
    /// uniformity hold by construction).
    pub fn check(&self) -> Result<(), ChirotopeViolation> {
        let all = template::all_labels();
        for sigma in all.subsets_of_size(2) {
            for quad in all.difference(sigma).subsets_of_size(4) {
                let p = self.exchange_products(sigma, quad);
                if p[0] == p[1] && p[1] == p[2] {
                    return Err(ChirotopeViolation::Exchange { sigma, quad });
                }
            }
        }
        for five in all.subsets_of_size(5) {
            if self.circuit(five).minus.is_empty() {
                return Err(ChirotopeViolation::PositiveCircuit(five));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// 70 characters of `+`/`-` in lexicographic basis order.
    pub fn to_sign_string(&self) -> String {
        (0..NUM_BASES).map(|i| if self.basis_sign(i) > 0 { '+' } else { '-' }).collect()
    }

    pub fn parse_sign_string(s: &str) -> Option<Chirotope> {
        let signs: Vec<i8> = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Some(1),
                '-' => Some(-1),
                _ => None,
            })
            .collect::<Option<_>>()?;
        Chirotope::from_signs(&signs)
    }

    /// True iff no circuit has its positive part in one tetrahedron and its
    /// negative part in the other.
    pub fn tets_intersect_properly(&self, a: VSet, b: VSet) -> bool {
        a.union(b).subsets_of_size(5).all(|f| {
            let c = self.circuit(f);
            !((c.plus.is_subset(a) && c.minus.is_subset(b)) || (c.plus.is_subset(b) && c.minus.is_subset(a)))
        })
    }

    /// Triangles with every other label strictly on one side.
    pub fn hull_facets(&self) -> Vec<VSet> {
        let all = template::all_labels();
        all.subsets_of_size(3)
            .filter(|&f| {
                let l = f.to_vec();
                let mut sides = all.difference(f).labels().map(|x| self.eval([l[0], l[1], l[2], x]));
                let first = sides.next();
                sides.all(|s| Some(s) == first)
            })
            .collect()
    }

    /// True iff some label lies inside the tetrahedron of four others.
    pub fn has_interior_point(&self) -> bool {
        template::all_labels()
            .subsets_of_size(5)
            .any(|f| {
                let c = self.circuit(f);
                c.plus.len() == 1 || c.minus.len() == 1
            })
    }
}

impl fmt::Debug for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chirotope({})", self.to_sign_string())
    }
}

impl fmt::Display for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sign_string())
    }
}

impl Serialize for Chirotope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sign_string())
    }
}

impl<'de> Deserialize<'de> for Chirotope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Chirotope::parse_sign_string(&s).ok_or_else(|| serde::de::Error::custom("expected 70 '+'/'-' characters"))
    }
}

/// Orientation of each tetrahedron making the complex coherently oriented,
/// with the first tetrahedron positive: `orient[i]` is the required value of
/// the chirotope on the sorted labels of `tets[i]`. Tetrahedra sharing a
/// triangle must lie on opposite sides of it. Returns `None` if the complex
/// is not orientable or not face-connected.
pub fn coherent_orientation(tets: &[VSet]) -> Option<Vec<i8>> {
    let n = tets.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut orient = vec![0i8; n];
    orient[0] = 1;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            let shared = tets[i].intersection(tets[j]);
            if i == j || shared.len() != 3 {
                continue;
            }
            let f = shared.to_vec();
            let p = tets[i].difference(shared).to_vec()[0];
            let q = tets[j].difference(shared).to_vec()[0];
            // chi(f, p) = -chi(f, q)
            let want = -orient[i] * sort_sign(&[f[0], f[1], f[2], p]) * sort_sign(&[f[0], f[1], f[2], q]);
            if orient[j] == 0 {
                orient[j] = want;
                stack.push(j);
            } else if orient[j] != want {
                return None;
            }
        }
    }
    orient.iter().all(|&o| o != 0).then_some(orient)
}
