//! Labeled triangulations of the hexahedron and their canonical forms.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{lex_subsets, VSet};
use crate::template::{self, Permutation};

/// The 70 four-subsets of `{1..8}` in lexicographic order.
pub fn quadruples() -> &'static [VSet] {
    static Q: OnceLock<Vec<VSet>> = OnceLock::new();
    Q.get_or_init(|| lex_subsets(8, 4))
}

/// Position of a four-subset of `{1..8}` in [`quadruples`].
pub fn quad_rank(s: VSet) -> usize {
    static RANK: OnceLock<[u8; 256]> = OnceLock::new();
    let table = RANK.get_or_init(|| {
        let mut t = [u8::MAX; 256];
        for (i, q) in quadruples().iter().enumerate() {
            t[q.0 as usize] = i as u8;
        }
        t
    });
    let r = table[(s.0 & 0xff) as usize];
    debug_assert!(r != u8::MAX && s.0 < 256, "not a quadruple: {s:?}");
    r as usize
}

/// A set of tetrahedra on the labels `1..=8`, kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    tets: Vec<VSet>,
}

impl Triangulation {
    /// Validates and sorts a tetrahedron list.
    pub fn new(tets: impl IntoIterator<Item = VSet>) -> Result<Triangulation> {
        let mut tets: Vec<VSet> = tets.into_iter().collect();
        for &t in &tets {
            if t.len() != 4 || t.0 > 0xff {
                return Err(Error::InvalidTet(t.to_vec()));
            }
            if template::is_facet_quad(t) {
                return Err(Error::BoundaryTet(t.to_string()));
            }
        }
        if tets.is_empty() || tets.len() > 18 {
            return Err(Error::TetCount(tets.len()));
        }
        tets.sort_by_key(|&t| quad_rank(t));
        for w in tets.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateTet(w[0].to_string()));
            }
        }
        Ok(Triangulation { tets })
    }

    pub fn from_label_lists(lists: &[[u8; 4]]) -> Result<Triangulation> {
        let mut tets = Vec::with_capacity(lists.len());
        for l in lists {
            let s = VSet::from_labels(l);
            if l.iter().any(|&x| !(1..=8).contains(&x)) || s.len() != 4 {
                return Err(Error::InvalidTet(l.to_vec()));
            }
            tets.push(s);
        }
        Triangulation::new(tets)
    }

    pub fn tets(&self) -> &[VSet] {
        &self.tets
    }

    pub fn len(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    pub fn contains(&self, t: VSet) -> bool {
        self.tets.contains(&t)
    }

    pub fn relabel(&self, g: &Permutation) -> Triangulation {
        let mut tets: Vec<VSet> = self.tets.iter().map(|&t| g.apply_set(t)).collect();
        tets.sort_by_key(|&t| quad_rank(t));
        Triangulation { tets }
    }

    /// Sorted label tuples, e.g. `[[1,2,4,5], ...]`.
    pub fn label_lists(&self) -> Vec<[u8; 4]> {
        self.tets
            .iter()
            .map(|t| {
                let v = t.to_vec();
                [v[0], v[1], v[2], v[3]]
            })
            .collect()
    }

    fn encoding(&self) -> Vec<u8> {
        self.tets.iter().map(|&t| quad_rank(t) as u8).collect()
    }

    /// Lexicographically smallest encoding over the 48 template symmetries.
    pub fn canonical_form(&self) -> CanonicalKey {
        template::symmetry_group()
            .iter()
            .map(|g| {
                let mut e: Vec<u8> = self.tets.iter().map(|&t| quad_rank(g.apply_set(t)) as u8).collect();
                e.sort_unstable();
                e
            })
            .min()
            .map(CanonicalKey)
            .expect("symmetry group is nonempty")
    }

    /// Number of distinct labeled triangulations in the symmetry orbit.
    pub fn orbit_size(&self) -> usize {
        let mut images: Vec<Vec<u8>> = template::symmetry_group()
            .iter()
            .map(|g| self.relabel(g).encoding())
            .collect();
        images.sort();
        images.dedup();
        images.len()
    }

    /// Triangle faces of every tetrahedron, with multiplicity.
    pub fn triangles(&self) -> impl Iterator<Item = (usize, VSet)> + '_ {
        self.tets.iter().enumerate().flat_map(|(i, &t)| t.subsets_of_size(3).map(move |f| (i, f)))
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Triangulation[")?;
        for (i, t) in self.tets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// Orbit invariant of a triangulation under the template symmetries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn tet_count(&self) -> usize {
        self.0.len()
    }

    /// The canonical representative itself.
    pub fn representative(&self) -> Triangulation {
        Triangulation {
            tets: self.0.iter().map(|&r| quadruples()[r as usize]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_tet() -> Triangulation {
        Triangulation::from_label_lists(&[[1, 2, 4, 5], [2, 3, 4, 7], [2, 5, 6, 7], [4, 5, 7, 8], [2, 4, 5, 7]])
            .unwrap()
    }

    fn five_tet_mirror() -> Triangulation {
        Triangulation::from_label_lists(&[[1, 2, 3, 6], [1, 3, 4, 8], [1, 5, 6, 8], [3, 6, 7, 8], [1, 3, 6, 8]])
            .unwrap()
    }

    /// Orbit minimum computed by trying every one of the 8! relabelings and
    /// keeping those that preserve template edges.
    fn brute_canonical(t: &Triangulation) -> Vec<u8> {
        fn perms(k: usize, cur: &mut Vec<u8>, out: &mut Vec<[u8; 8]>) {
            if k == 8 {
                let mut a = [0u8; 8];
                a.copy_from_slice(cur);
                out.push(a);
                return;
            }
            for l in 1..=8u8 {
                if !cur.contains(&l) {
                    cur.push(l);
                    perms(k + 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut all = Vec::new();
        perms(0, &mut Vec::new(), &mut all);
        all.into_iter()
            .filter_map(Permutation::from_images)
            .filter(|p| p.preserves_edges())
            .map(|p| t.relabel(&p).encoding())
            .min()
            .unwrap()
    }

    #[test]
    fn rejects_facet_quadruple() {
        let err = Triangulation::from_label_lists(&[[1, 2, 3, 4], [1, 2, 4, 5]]).unwrap_err();
        assert!(matches!(err, Error::BoundaryTet(_)));
    }

    #[test]
    fn rejects_duplicates() {
        let err = Triangulation::from_label_lists(&[[1, 2, 4, 5], [5, 4, 2, 1]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateTet(_)));
    }

    #[test]
    fn five_tet_and_mirror_share_key() {
        let a = five_tet();
        let b = five_tet_mirror();
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.canonical_form().0, brute_canonical(&a));
        assert_eq!(a.orbit_size(), 2);
    }

    #[test]
    fn canonical_is_idempotent() {
        let k = five_tet().canonical_form();
        assert_eq!(k.representative().canonical_form(), k);
    }

    #[test]
    fn quad_rank_is_lexicographic() {
        assert_eq!(quad_rank(VSet::from_labels(&[1, 2, 3, 4])), 0);
        assert_eq!(quad_rank(VSet::from_labels(&[5, 6, 7, 8])), 69);
    }
}
