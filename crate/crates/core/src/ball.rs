//! Validation of simplicial complexes as combinatorial 3-balls.
//!
//! A complex passes when it is a pseudomanifold with boundary, every edge link
//! is a cycle (interior) or a path with boundary endpoints, every vertex link
//! is a disk (or a sphere for interior vertices), the Euler characteristic is
//! 1, the tetrahedra are face-connected and the first mod-2 Betti number is 0.
//! With at most 9 vertices this characterises balls; the catalog counts are
//! the regression guard for that assumption.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::boundary::BoundaryTriangulation;
use crate::simplex::VSet;

/// A pure 3-dimensional complex given by its tetrahedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallComplex {
    pub tets: Vec<VSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FVector {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub tets: usize,
}

impl FVector {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.triangles as i64 - self.tets as i64
    }
}

/// First violated condition, naming the offending simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "simplex")]
pub enum BallDefect {
    Empty,
    TriangleOverfull(String),
    EulerCharacteristic(i64),
    EdgeLink(String),
    VertexLink(String),
    Disconnected,
    NonTrivialCycles,
    BoundaryMismatch,
}

impl fmt::Display for BallDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallDefect::Empty => write!(f, "empty complex"),
            BallDefect::TriangleOverfull(t) => write!(f, "triangle {t} lies in more than two tetrahedra"),
            BallDefect::EulerCharacteristic(c) => write!(f, "Euler characteristic {c} != 1"),
            BallDefect::EdgeLink(e) => write!(f, "link of edge {e} is not a path or cycle"),
            BallDefect::VertexLink(v) => write!(f, "link of vertex {v} is not a disk or sphere"),
            BallDefect::Disconnected => write!(f, "tetrahedra are not face-connected"),
            BallDefect::NonTrivialCycles => write!(f, "first mod-2 homology is nonzero"),
            BallDefect::BoundaryMismatch => write!(f, "boundary is not a triangulated hexahedron surface"),
        }
    }
}

impl BallComplex {
    pub fn new(tets: Vec<VSet>) -> BallComplex {
        BallComplex { tets }
    }

    fn triangle_map(&self) -> BTreeMap<VSet, Vec<usize>> {
        let mut m: BTreeMap<VSet, Vec<usize>> = BTreeMap::new();
        for (i, &t) in self.tets.iter().enumerate() {
            for f in t.subsets_of_size(3) {
                m.entry(f).or_default().push(i);
            }
        }
        m
    }

    pub fn vertex_set(&self) -> VSet {
        self.tets.iter().fold(VSet::EMPTY, |a, &t| a.union(t))
    }

    pub fn f_vector(&self) -> FVector {
        let mut edges = BTreeSet::new();
        let mut tris = BTreeSet::new();
        for &t in &self.tets {
            edges.extend(t.subsets_of_size(2));
            tris.extend(t.subsets_of_size(3));
        }
        FVector {
            vertices: self.vertex_set().len() as usize,
            edges: edges.len(),
            triangles: tris.len(),
            tets: self.tets.len(),
        }
    }

    /// Triangles lying in exactly one tetrahedron.
    pub fn boundary_triangles(&self) -> Vec<VSet> {
        self.triangle_map()
            .into_iter()
            .filter(|(_, v)| v.len() == 1)
            .map(|(t, _)| t)
            .collect()
    }

    /// Checks every ball condition and returns the f-vector on success.
    pub fn validate(&self) -> Result<FVector, BallDefect> {
        if self.tets.is_empty() {
            return Err(BallDefect::Empty);
        }
        let tri_map = self.triangle_map();
        if let Some((t, _)) = tri_map.iter().find(|(_, v)| v.len() > 2) {
            return Err(BallDefect::TriangleOverfull(t.to_string()));
        }
        let boundary: BTreeSet<VSet> = tri_map.iter().filter(|(_, v)| v.len() == 1).map(|(t, _)| *t).collect();

        if !self.dual_connected(&tri_map) {
            return Err(BallDefect::Disconnected);
        }

        let fv = self.f_vector();
        if fv.euler() != 1 {
            return Err(BallDefect::EulerCharacteristic(fv.euler()));
        }

        // Edge links.
        let mut edge_links: BTreeMap<VSet, Vec<VSet>> = BTreeMap::new();
        for &t in &self.tets {
            for e in t.subsets_of_size(2) {
                edge_links.entry(e).or_default().push(t.difference(e));
            }
        }
        for (&e, link) in &edge_links {
            let on_boundary = boundary.iter().any(|b| e.is_subset(*b));
            let ends: Vec<VSet> = match graph_shape(link) {
                Some(Shape::Cycle) if !on_boundary => continue,
                Some(Shape::Path(a, b)) if on_boundary => vec![VSet::singleton(a), VSet::singleton(b)],
                _ => return Err(BallDefect::EdgeLink(e.to_string())),
            };
            if !ends.iter().all(|w| boundary.contains(&e.union(*w))) {
                return Err(BallDefect::EdgeLink(e.to_string()));
            }
        }

        // Vertex links: connected surfaces with the Euler characteristic of a
        // disk (boundary vertex) or a sphere (interior vertex). The edge-link
        // check above already makes them surfaces.
        for v in self.vertex_set().labels() {
            let link: Vec<VSet> = self.tets.iter().filter(|t| t.contains(v)).map(|t| t.without(v)).collect();
            let on_boundary = boundary.iter().any(|b| b.contains(v));
            let lv = link.iter().fold(VSet::EMPTY, |a, &t| a.union(t)).len() as i64;
            let le = link.iter().flat_map(|t| t.subsets_of_size(2)).collect::<BTreeSet<_>>().len() as i64;
            let chi = lv - le + link.len() as i64;
            let expected = if on_boundary { 1 } else { 2 };
            if chi != expected || !triangles_connected(&link) {
                return Err(BallDefect::VertexLink(v.to_string()));
            }
        }

        if mod2_first_betti(&self.tets) != 0 {
            return Err(BallDefect::NonTrivialCycles);
        }
        Ok(fv)
    }

    /// Ball validation plus the requirement that the boundary is exactly the
    /// 12 triangles of some hexahedron surface triangulation.
    pub fn validate_hexahedron(&self) -> Result<(FVector, BoundaryTriangulation), BallDefect> {
        let fv = self.validate()?;
        let b = BoundaryTriangulation::from_triangles(&self.boundary_triangles()).ok_or(BallDefect::BoundaryMismatch)?;
        Ok((fv, b))
    }

    fn dual_connected(&self, tri_map: &BTreeMap<VSet, Vec<usize>>) -> bool {
        let n = self.tets.len();
        let mut adj = vec![Vec::new(); n];
        for v in tri_map.values() {
            if let [a, b] = v[..] {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

enum Shape {
    Cycle,
    Path(u8, u8),
}

/// Classifies a graph given as a list of 2-element vertex sets.
fn graph_shape(edges: &[VSet]) -> Option<Shape> {
    let mut deg: HashMap<u8, usize> = HashMap::new();
    let mut uniq: BTreeSet<VSet> = BTreeSet::new();
    for &e in edges {
        if !uniq.insert(e) {
            return None;
        }
        for l in e.labels() {
            *deg.entry(l).or_default() += 1;
        }
    }
    if deg.values().any(|&d| d > 2) {
        return None;
    }
    let ends: Vec<u8> = deg.iter().filter(|(_, &d)| d == 1).map(|(&l, _)| l).collect();
    // Connectivity.
    let verts: Vec<u8> = deg.keys().copied().collect();
    let start = *verts.first()?;
    let mut seen = VSet::singleton(start);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for e in &uniq {
            if e.contains(x) {
                let y = e.without(x).labels().next().expect("edge");
                if !seen.contains(y) {
                    seen = seen.with(y);
                    stack.push(y);
                }
            }
        }
    }
    if seen.len() as usize != verts.len() {
        return None;
    }
    match ends.len() {
        0 if uniq.len() >= 3 => Some(Shape::Cycle),
        2 => Some(Shape::Path(ends[0].min(ends[1]), ends[0].max(ends[1]))),
        _ => None,
    }
}

fn triangles_connected(tris: &[VSet]) -> bool {
    if tris.is_empty() {
        return false;
    }
    let n = tris.len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && tris[i].intersection(tris[j]).len() == 2 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// dim H_1 over GF(2) of the 2-skeleton of the complex.
pub fn mod2_first_betti(tets: &[VSet]) -> usize {
    let mut verts = VSet::EMPTY;
    let mut edges = BTreeSet::new();
    let mut tris = BTreeSet::new();
    for &t in tets {
        verts = verts.union(t);
        edges.extend(t.subsets_of_size(2));
        tris.extend(t.subsets_of_size(3));
    }
    let edges: Vec<VSet> = edges.into_iter().collect();
    let edge_index: HashMap<VSet, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let words = edges.len().div_ceil(64);
    let rows: Vec<Vec<u64>> = tris
        .iter()
        .map(|t| {
            let mut r = vec![0u64; words];
            for e in t.subsets_of_size(2) {
                let i = edge_index[&e];
                r[i / 64] |= 1 << (i % 64);
            }
            r
        })
        .collect();
    let rank2 = gf2_rank(rows);
    // Components of the 1-skeleton.
    let vlist = verts.to_vec();
    let mut parent: HashMap<u8, u8> = vlist.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut HashMap<u8, u8>, x: u8) -> u8 {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for e in &edges {
        let l = e.to_vec();
        let (a, b) = (find(&mut parent, l[0]), find(&mut parent, l[1]));
        if a != b {
            parent.insert(a, b);
        }
    }
    let comps = vlist.iter().filter(|&&v| find(&mut parent, v) == v).count();
    let rank1 = vlist.len() - comps;
    edges.len() - rank1 - rank2
}

fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..words * 64 {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] & b != 0 {
                for k in 0..words {
                    r[k] ^= pivot[k];
                }
            }
        }
        rank += 1;
    }
    rank
}
