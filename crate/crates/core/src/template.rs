//! The hexahedron template `{12345678}` and its combinatorial symmetry group.

use std::sync::OnceLock;

use crate::simplex::VSet;

pub const NUM_LABELS: u8 = 8;

/// The 12 template edges.
pub const EDGES: [(u8, u8); 12] = [
    (1, 2),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 6),
    (3, 4),
    (3, 7),
    (4, 8),
    (5, 6),
    (5, 8),
    (6, 7),
    (7, 8),
];

/// The 6 quadrilateral facets, each listed in cyclic order.
pub const FACETS: [[u8; 4]; 6] = [
    [1, 2, 3, 4],
    [1, 2, 6, 5],
    [1, 4, 8, 5],
    [2, 3, 7, 6],
    [3, 4, 8, 7],
    [5, 6, 7, 8],
];

/// Corner positions of the reference unit cube, indexed by `label - 1`.
pub const UNIT_CUBE: [[i64; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

pub fn all_labels() -> VSet {
    VSet(0xff)
}

pub fn is_edge(a: u8, b: u8) -> bool {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.contains(&(a, b))
}

pub fn facet_set(f: usize) -> VSet {
    VSet::from_labels(&FACETS[f])
}

/// Index of the facet whose four corners are exactly `s`.
pub fn facet_of_quad(s: VSet) -> Option<usize> {
    (0..6).find(|&f| facet_set(f) == s)
}

/// True when `s` is one of the six facet quadruples.
pub fn is_facet_quad(s: VSet) -> bool {
    facet_of_quad(s).is_some()
}

/// The facet containing the triangle `t`, if any.
pub fn facet_containing(t: VSet) -> Option<usize> {
    (0..6).find(|&f| t.is_subset(facet_set(f)))
}

/// Labels adjacent to `v` along template edges.
/// The neighbour of `v` across reference axis `axis` (0, 1 or 2).
pub fn axis_neighbor(v: u8, axis: usize) -> u8 {
    let c = UNIT_CUBE[v as usize - 1];
    let mut target = c;
    target[axis] = 1 - c[axis];
    UNIT_CUBE.iter().position(|&p| p == target).expect("cube corner") as u8 + 1
}

pub fn neighbors(v: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut k = 0;
    for &(a, b) in &EDGES {
        if a == v {
            out[k] = b;
            k += 1;
        } else if b == v {
            out[k] = a;
            k += 1;
        }
    }
    debug_assert_eq!(k, 3);
    out
}

/// A bijection of the labels `1..=8`; `image[l - 1]` is the image of `l`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Permutation {
    image: [u8; 8],
}

impl Permutation {
    pub fn identity() -> Permutation {
        Permutation {
            image: [1, 2, 3, 4, 5, 6, 7, 8],
        }
    }

    /// Builds a permutation from its image table, rejecting non-bijections.
    pub fn from_images(image: [u8; 8]) -> Option<Permutation> {
        let mut seen = 0u16;
        for &l in &image {
            if !(1..=8).contains(&l) || seen & (1 << (l - 1)) != 0 {
                return None;
            }
            seen |= 1 << (l - 1);
        }
        Some(Permutation { image })
    }

    #[inline]
    pub fn apply(&self, label: u8) -> u8 {
        self.image[(label - 1) as usize]
    }

    pub fn images(&self) -> [u8; 8] {
        self.image
    }

    pub fn apply_set(&self, s: VSet) -> VSet {
        let mut out = 0u16;
        for l in s.labels() {
            out |= 1 << (self.apply(l) - 1);
        }
        VSet(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut image = [0u8; 8];
        for l in 1..=8u8 {
            image[(l - 1) as usize] = self.apply(other.apply(l));
        }
        Permutation { image }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = [0u8; 8];
        for l in 1..=8u8 {
            image[(self.apply(l) - 1) as usize] = l;
        }
        Permutation { image }
    }

    pub fn preserves_edges(&self) -> bool {
        EDGES
            .iter()
            .all(|&(a, b)| is_edge(self.apply(a), self.apply(b)))
    }
}

/// All label permutations mapping the template edge set onto itself.
///
/// Computed once by extending every choice of image for vertex 1 and an
/// ordering of its three neighbours, then checked edge by edge.
pub fn symmetry_group() -> &'static [Permutation] {
    static GROUP: OnceLock<Vec<Permutation>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut out = Vec::new();
        let mut image = [0u8; 8];
        search_automorphisms(0, &mut image, &mut out);
        out.sort();
        out
    })
}

fn search_automorphisms(pos: usize, image: &mut [u8; 8], out: &mut Vec<Permutation>) {
    if pos == 8 {
        let p = Permutation { image: *image };
        if p.preserves_edges() {
            out.push(p);
        }
        return;
    }
    let label = pos as u8 + 1;
    'cand: for cand in 1..=8u8 {
        if image[..pos].contains(&cand) {
            continue;
        }
        // Adjacency with already-placed labels must be preserved both ways.
        for prev in 1..label {
            let pi = image[(prev - 1) as usize];
            if is_edge(prev, label) != is_edge(pi, cand) {
                continue 'cand;
            }
        }
        image[pos] = cand;
        search_automorphisms(pos + 1, image, out);
        image[pos] = 0;
    }
}
