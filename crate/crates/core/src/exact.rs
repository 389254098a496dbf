//! Exact rational point configurations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chirotope::{Chirotope, Circuit};
use crate::error::{Error, Result};
use crate::simplex::VSet;
use crate::triangulation::quadruples;

/// Arbitrary-precision rational.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Rat {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Rat, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat(BigRational::new(n, d)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl std::ops::$tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat(&self.0 $op &o.0)
            }
        }
    };
}
rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);
rat_binop!(Div, div, /);

pub type Point = [Rat; 3];

pub fn point(x: i64, y: i64, z: i64) -> Point {
    [Rat::int(x), Rat::int(y), Rat::int(z)]
}

fn det3(a: &Point, b: &Point, c: &Point) -> Rat {
    let m = |x: &Rat, y: &Rat| x * y;
    let t1 = &m(&a[0], &(&m(&b[1], &c[2]) - &m(&b[2], &c[1]))) - &m(&a[1], &(&m(&b[0], &c[2]) - &m(&b[2], &c[0])));
    &t1 + &m(&a[2], &(&m(&b[0], &c[1]) - &m(&b[1], &c[0])))
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

/// The homogeneous 4×4 determinant with rows `(1,1,1,1)` and the point
/// coordinates: six times the signed volume of `abcd`.
pub fn orientation(a: &Point, b: &Point, c: &Point, d: &Point) -> Rat {
    det3(&sub(b, a), &sub(c, a), &sub(d, a))
}

/// A labeled point configuration; label `l` is `points[l - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> PointSet {
        PointSet { points }
    }

    pub fn from_ints(points: &[[i64; 3]]) -> PointSet {
        PointSet::new(points.iter().map(|p| point(p[0], p[1], p[2])).collect())
    }

    fn p(&self, label: u8) -> &Point {
        &self.points[label as usize - 1]
    }

    pub fn det(&self, t: [u8; 4]) -> Rat {
        orientation(self.p(t[0]), self.p(t[1]), self.p(t[2]), self.p(t[3]))
    }

    pub fn det_of_set(&self, s: VSet) -> Rat {
        let l = s.to_vec();
        self.det([l[0], l[1], l[2], l[3]])
    }

    /// Exact determinant signs of the 70 sorted bases; fails on the first
    /// coplanar quadruple.
    pub fn chirotope(&self) -> Result<Chirotope> {
        let mut signs = Vec::with_capacity(70);
        for &b in quadruples() {
            match self.det_of_set(b).signum() {
                0 => return Err(Error::Degenerate(b.to_string())),
                s => signs.push(s),
            }
        }
        Ok(Chirotope::from_signs(&signs).expect("70 nonzero signs"))
    }

    /// Signed coefficients of the affine dependence on `s`, if `s` is a
    /// circuit (minimally affinely dependent). Works for degenerate sets.
    pub fn circuit_of(&self, s: VSet) -> Option<Circuit> {
        let labels = s.to_vec();
        let k = labels.len();
        // Columns (1, x, y, z) of each point.
        let mut m: Vec<Vec<Rat>> = (0..4)
            .map(|r| {
                labels
                    .iter()
                    .map(|&l| if r == 0 { Rat::int(1) } else { self.p(l)[r - 1].clone() })
                    .collect()
            })
            .collect();
        let pivots = row_reduce(&mut m);
        if pivots.len() != k - 1 {
            return None;
        }
        let free = (0..k).find(|c| !pivots.contains(c))?;
        let mut x = vec![Rat::zero(); k];
        x[free] = Rat::int(1);
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = &Rat::zero() - &m[r][free];
        }
        if x.iter().any(Rat::is_zero) {
            return None;
        }
        let mut plus = VSet::EMPTY;
        let mut minus = VSet::EMPTY;
        for (i, &l) in labels.iter().enumerate() {
            if x[i].signum() > 0 {
                plus = plus.with(l);
            } else {
                minus = minus.with(l);
            }
        }
        Some(Circuit { plus, minus })
    }

    /// All circuits of the configuration, one orientation each.
    pub fn circuits(&self) -> Vec<Circuit> {
        let all = VSet((1u16 << self.points.len()) - 1);
        (2..=5).flat_map(|k| all.subsets_of_size(k)).filter_map(|s| self.circuit_of(s)).collect()
    }

    /// Volume of the convex hull of the points, from the hull facets of the
    /// chirotope, as the sum of cones over the centroid.
    pub fn hull_volume(&self, c: &Chirotope) -> Rat {
        let n = Rat::int(self.points.len() as i64);
        let centroid: Point = std::array::from_fn(|i| {
            let s = self.points.iter().fold(Rat::zero(), |acc, p| &acc + &p[i]);
            &s / &n
        });
        let mut six_vol = Rat::zero();
        for f in c.hull_facets() {
            let l = f.to_vec();
            six_vol = &six_vol + &orientation(self.p(l[0]), self.p(l[1]), self.p(l[2]), &centroid).abs();
        }
        &six_vol / &Rat::int(6)
    }

    pub fn tet_volume(&self, t: VSet) -> Rat {
        &self.det_of_set(t).abs() / &Rat::int(6)
    }
}

/// Gauss-Jordan elimination in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = &Rat::int(1) / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(p * &f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// True iff `conv(a) ∩ conv(b) = conv(a ∩ b)`: no circuit has its positive
/// part in one simplex and its negative part in the other.
pub fn intersect_properly(circuits: &[Circuit], a: VSet, b: VSet) -> bool {
    let u = a.union(b);
    circuits.iter().filter(|c| c.support().is_subset(u)).all(|c| {
        !((c.plus.is_subset(a) && c.minus.is_subset(b)) || (c.plus.is_subset(b) && c.minus.is_subset(a)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::UNIT_CUBE;

    #[test]
    fn parse_and_print() {
        let r: Rat = "-6/4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::int(7));
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn cube_is_degenerate() {
        let p = PointSet::from_ints(&UNIT_CUBE);
        assert!(matches!(p.chirotope(), Err(Error::Degenerate(s)) if s == "1234"));
    }

    #[test]
    fn cube_circuits() {
        let p = PointSet::from_ints(&UNIT_CUBE);
        let cs = p.circuits();
        // Facet 1234: the two diagonals cross.
        let c = p.circuit_of(VSet::from_labels(&[1, 2, 3, 4])).unwrap();
        assert!(c.plus == VSet::from_labels(&[1, 3]) || c.plus == VSet::from_labels(&[2, 4]));
        // Main diagonals 17 and 35 cross at the centre.
        assert!(cs.iter().any(|c| c.support() == VSet::from_labels(&[1, 3, 5, 7])));
        // Three cube corners are never collinear.
        assert!(cs.iter().all(|c| c.support().len() >= 4));
    }

    #[test]
    fn swapping_points_flips_determinant() {
        let p = PointSet::from_ints(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(p.det([1, 2, 3, 4]), Rat::int(1));
        assert_eq!(p.det([2, 1, 3, 4]), Rat::int(-1));
    }
}
