//! Exhaustive enumeration of labeled hexahedron triangulations.
//!
//! For a fixed surface triangulation the search keeps, for every triangle on
//! the 8 labels, the number of chosen tetrahedra containing it. A triangle is
//! *open* when it still needs exactly one more tetrahedron: a boundary
//! triangle with no tetrahedron yet, or an interior triangle with one. Each
//! step picks the open triangle with the fewest admissible completions and
//! branches over them. Branches differ in the tetrahedron covering the chosen
//! triangle, so every complex is produced exactly once, and every valid
//! complex contains one of the branch tetrahedra, so none is missed.

use rayon::prelude::*;

use crate::ball::BallComplex;
use crate::boundary::BoundaryTriangulation;
use crate::simplex::VSet;
use crate::template;
use crate::triangulation::Triangulation;

pub const DEFAULT_MAX_TETS: usize = 15;

/// The 64 admissible tetrahedra: four-subsets that are not facet quadruples.
pub fn admissible_tets() -> Vec<VSet> {
    template::all_labels()
        .subsets_of_size(4)
        .filter(|&t| !template::is_facet_quad(t))
        .collect()
}

/// Search statistics for one boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub closed: u64,
    pub rejected: u64,
}

struct Search {
    boundary: [bool; 256],
    count: [u8; 256],
    used: [bool; 256],
    /// Admissible tetrahedra containing each triangle.
    cofaces: Vec<Vec<VSet>>,
    /// The four triangles of each four-subset, by bitmask.
    faces: Vec<[u8; 4]>,
    triangles: Vec<VSet>,
    /// Candidate restriction (all admissible when enumerating the catalog).
    allowed: [bool; 256],
    stack: Vec<VSet>,
    max_tets: usize,
    out: Vec<Triangulation>,
    stats: SearchStats,
}

impl Search {
    fn new(b: BoundaryTriangulation, allowed_tets: &[VSet], max_tets: usize) -> Search {
        let mut boundary = [false; 256];
        for t in b.triangles() {
            boundary[t.0 as usize] = true;
        }
        let mut allowed = [false; 256];
        for t in allowed_tets {
            if !template::is_facet_quad(*t) {
                allowed[t.0 as usize] = true;
            }
        }
        let triangles: Vec<VSet> = template::all_labels().subsets_of_size(3).collect();
        let mut cofaces = vec![Vec::new(); 256];
        for &tri in &triangles {
            cofaces[tri.0 as usize] = template::all_labels()
                .difference(tri)
                .labels()
                .map(|l| tri.with(l))
                .filter(|t| allowed[t.0 as usize])
                .collect();
        }
        let faces = (0..256u16)
            .map(|m| {
                let mut f = [0u8; 4];
                if m.count_ones() == 4 {
                    for (k, tri) in VSet(m).subsets_of_size(3).enumerate() {
                        f[k] = tri.0 as u8;
                    }
                }
                f
            })
            .collect();
        Search {
            boundary,
            faces,
            count: [0; 256],
            used: [false; 256],
            cofaces,
            triangles,
            allowed,
            stack: Vec::new(),
            max_tets,
            out: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    #[inline]
    fn fits(&self, t: VSet) -> bool {
        if self.used[t.0 as usize] || !self.allowed[t.0 as usize] {
            return false;
        }
        self.faces[t.0 as usize].iter().all(|&f| {
            let c = self.count[f as usize];
            if self.boundary[f as usize] {
                c == 0
            } else {
                c < 2
            }
        })
    }

    #[inline]
    fn is_open(&self, f: VSet) -> bool {
        let c = self.count[f.0 as usize];
        if self.boundary[f.0 as usize] {
            c == 0
        } else {
            c == 1
        }
    }

    fn toggle(&mut self, t: VSet, add: bool) {
        self.used[t.0 as usize] = add;
        for k in 0..4 {
            let f = self.faces[t.0 as usize][k] as usize;
            if add {
                self.count[f] += 1;
            } else {
                self.count[f] -= 1;
            }
        }
        if add {
            self.stack.push(t);
        } else {
            self.stack.pop();
        }
    }

    /// V - E + F - T of the current complex.
    fn euler(&self) -> i64 {
        let mut verts = 0u16;
        let mut edges = 0u64;
        for &t in &self.stack {
            verts |= t.0;
            let l: Vec<u8> = t.labels().collect();
            for i in 0..4 {
                for j in i + 1..4 {
                    edges |= 1 << ((l[i] - 1) * 8 + (l[j] - 1));
                }
            }
        }
        let tris = self.triangles.iter().filter(|f| self.count[f.0 as usize] > 0).count();
        verts.count_ones() as i64 - edges.count_ones() as i64 + tris as i64 - self.stack.len() as i64
    }

    fn run(&mut self) {
        self.stats.nodes += 1;
        let mut open = 0usize;
        let mut best: Option<(usize, VSet)> = None;
        for i in 0..self.triangles.len() {
            let f = self.triangles[i];
            if !self.is_open(f) {
                continue;
            }
            open += 1;
            let n = self.cofaces[f.0 as usize].iter().filter(|&&t| self.fits(t)).count();
            if n == 0 {
                return;
            }
            // Interior triangles with one coface first, then fewest options.
            let prio = n + if self.boundary[f.0 as usize] { 8 } else { 0 };
            if best.is_none_or(|(p, _)| prio < p) {
                best = Some((prio, f));
            }
        }
        let Some((_, f)) = best else {
            self.stats.closed += 1;
            if self.euler() != 1 {
                self.stats.rejected += 1;
                return;
            }
            let complex = BallComplex::new(self.stack.clone());
            match complex.validate_hexahedron() {
                Ok(_) => self
                    .out
                    .push(Triangulation::new(self.stack.iter().copied()).expect("admissible tets")),
                Err(_) => self.stats.rejected += 1,
            }
            return;
        };
        if self.stack.len() + open.div_ceil(4) > self.max_tets {
            return;
        }
        let options: Vec<VSet> = self.cofaces[f.0 as usize].iter().copied().filter(|&t| self.fits(t)).collect();
        for t in options {
            self.toggle(t, true);
            self.run();
            self.toggle(t, false);
        }
    }
}

/// Every labeled triangulation whose surface is `b`, with at most `max_tets`
/// tetrahedra.
pub fn enumerate_triangulations(b: BoundaryTriangulation, max_tets: usize) -> Vec<Triangulation> {
    enumerate_with_stats(b, max_tets).0
}

pub fn enumerate_with_stats(b: BoundaryTriangulation, max_tets: usize) -> (Vec<Triangulation>, SearchStats) {
    let mut s = Search::new(b, &admissible_tets(), max_tets);
    s.run();
    let mut out = s.out;
    out.sort();
    (out, s.stats)
}

/// Triangulations with surface `b` built only from `candidates`.
pub fn enumerate_restricted(b: BoundaryTriangulation, candidates: &[VSet], max_tets: usize) -> Vec<Triangulation> {
    let mut s = Search::new(b, candidates, max_tets);
    s.run();
    let mut out = s.out;
    out.sort();
    out
}

/// All labeled triangulations over the 64 surfaces, paired with their surface.
pub fn enumerate_all(max_tets: usize) -> Vec<(BoundaryTriangulation, Triangulation)> {
    let mut all: Vec<(BoundaryTriangulation, Triangulation)> = BoundaryTriangulation::all()
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|b| enumerate_triangulations(b, max_tets).into_iter().map(move |t| (b, t)))
        .collect();
    all.sort();
    all
}
