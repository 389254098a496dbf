//! Triangulations of the hexahedron surface: one diagonal per facet.

use serde::{Deserialize, Serialize};

use crate::simplex::VSet;
use crate::template::{self, Permutation, FACETS};

/// Bit `f` selects the diagonal of facet `f`: clear for the pair at cyclic
/// positions (0, 2), set for positions (1, 3).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct BoundaryTriangulation(pub u8);

impl BoundaryTriangulation {
    pub fn all() -> impl Iterator<Item = BoundaryTriangulation> {
        (0u8..64).map(BoundaryTriangulation)
    }

    /// Diagonal of facet `f`, lower label first.
    pub fn diagonal(self, f: usize) -> (u8, u8) {
        let c = FACETS[f];
        let (a, b) = if self.0 & (1 << f) == 0 { (c[0], c[2]) } else { (c[1], c[3]) };
        (a.min(b), a.max(b))
    }

    pub fn diagonals(self) -> [(u8, u8); 6] {
        std::array::from_fn(|f| self.diagonal(f))
    }

    /// The two triangles of facet `f`.
    pub fn facet_triangles(self, f: usize) -> [VSet; 2] {
        let (a, b) = self.diagonal(f);
        let quad = template::facet_set(f);
        let rest: Vec<u8> = quad.without(a).without(b).to_vec();
        let d = VSet::from_labels(&[a, b]);
        [d.with(rest[0]), d.with(rest[1])]
    }

    /// The 12 boundary triangles.
    pub fn triangles(self) -> [VSet; 12] {
        let mut out = [VSet::EMPTY; 12];
        for f in 0..6 {
            let [x, y] = self.facet_triangles(f);
            out[2 * f] = x;
            out[2 * f + 1] = y;
        }
        out
    }

    /// Recovers the boundary from the diagonal of each facet.
    pub fn from_diagonals(diags: &[(u8, u8)]) -> Option<BoundaryTriangulation> {
        let mut bits = 0u8;
        for (f, c) in FACETS.iter().enumerate() {
            let d0 = VSet::from_labels(&[c[0], c[2]]);
            let d1 = VSet::from_labels(&[c[1], c[3]]);
            let found = diags.iter().map(|&(a, b)| VSet::from_labels(&[a, b])).find(|&d| d == d0 || d == d1)?;
            if found == d1 {
                bits |= 1 << f;
            }
        }
        Some(BoundaryTriangulation(bits))
    }

    /// Recovers the boundary from a set of 12 triangles, if they match one.
    pub fn from_triangles(tris: &[VSet]) -> Option<BoundaryTriangulation> {
        let mut sorted = tris.to_vec();
        sorted.sort();
        BoundaryTriangulation::all().find(|b| {
            let mut t = b.triangles().to_vec();
            t.sort();
            t == sorted
        })
    }

    pub fn relabel(self, g: &Permutation) -> BoundaryTriangulation {
        let diags: Vec<(u8, u8)> = self.diagonals().iter().map(|&(a, b)| (g.apply(a), g.apply(b))).collect();
        BoundaryTriangulation::from_diagonals(&diags).expect("symmetries map diagonals to diagonals")
    }

    /// Smallest image under the symmetry group.
    pub fn canonical(self) -> BoundaryTriangulation {
        template::symmetry_group()
            .iter()
            .map(|g| self.relabel(g))
            .min()
            .expect("nonempty group")
    }
}

/// The 64 labeled boundaries grouped into symmetry classes.
///
/// Classes are numbered by increasing canonical bit pattern.
pub fn boundary_classes() -> Vec<(BoundaryTriangulation, usize)> {
    let mut reps: Vec<BoundaryTriangulation> = BoundaryTriangulation::all().map(|b| b.canonical()).collect();
    reps.sort();
    reps.dedup();
    BoundaryTriangulation::all()
        .map(|b| {
            let c = b.canonical();
            (b, reps.binary_search(&c).expect("present"))
        })
        .collect()
}

/// Class index of a boundary, consistent with [`boundary_classes`].
pub fn boundary_class_of(b: BoundaryTriangulation) -> usize {
    boundary_classes()[b.0 as usize].1
}
