//! Detection of hexahedra formed by the tetrahedra of a mesh.
//!
//! Eight mesh vertices form a hexahedron when the mesh contains the twelve
//! template edges between them, every facet is covered by the two mesh
//! triangles of exactly one diagonal, and mesh tetrahedra on those vertices
//! triangulate the enclosed region as one of the catalog patterns.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::BallComplex;
use crate::boundary::BoundaryTriangulation;
use crate::catalog::Catalog;
use crate::enumerate::{enumerate_restricted, DEFAULT_MAX_TETS};
use crate::error::{Error, Result};
use crate::jacobian::validity_proxy;
use crate::simplex::VSet;
use crate::template::{self, FACETS, UNIT_CUBE};
use crate::triangulation::Triangulation;

fn sorted<const N: usize>(mut a: [usize; N]) -> [usize; N] {
    a.sort_unstable();
    a
}

/// A tetrahedral mesh with its edge graph, vertex stars and triangle
/// incidences.
#[derive(Clone, Debug)]
pub struct TetMesh {
    vertices: Vec<[f64; 3]>,
    tets: Vec<[usize; 4]>,
    neighbors: Vec<Vec<usize>>,
    stars: Vec<Vec<usize>>,
    triangles: HashMap<[usize; 3], Vec<usize>>,
}

impl TetMesh {
    /// Rejects out-of-range indices, repeated vertices and duplicate tetrahedra.
    pub fn new(vertices: Vec<[f64; 3]>, tets: Vec<[usize; 4]>) -> Result<TetMesh> {
        let n = vertices.len();
        let mut seen = HashSet::with_capacity(tets.len());
        let mut neighbors = vec![Vec::new(); n];
        let mut stars = vec![Vec::new(); n];
        let mut triangles: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
        for (i, t) in tets.iter().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(Error::MeshIndex(format!("tetrahedron {i} references vertex {v}, mesh has {n}")));
            }
            let s = sorted(*t);
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MeshIndex(format!("tetrahedron {i} repeats a vertex: {t:?}")));
            }
            if !seen.insert(s) {
                return Err(Error::MeshIndex(format!("tetrahedron {i} duplicates {s:?}")));
            }
            for a in 0..4 {
                stars[s[a]].push(i);
                for b in a + 1..4 {
                    neighbors[s[a]].push(s[b]);
                    neighbors[s[b]].push(s[a]);
                }
                let mut tri = [0; 3];
                let mut k = 0;
                for (j, &v) in s.iter().enumerate() {
                    if j != a {
                        tri[k] = v;
                        k += 1;
                    }
                }
                triangles.entry(tri).or_default().push(i);
            }
        }
        for l in &mut neighbors {
            l.sort_unstable();
            l.dedup();
        }
        Ok(TetMesh {
            vertices,
            tets,
            neighbors,
            stars,
            triangles,
        })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices sharing an edge with `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Tetrahedra incident to `v`.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.stars[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn has_triangle(&self, t: [usize; 3]) -> bool {
        self.triangles.contains_key(&sorted(t))
    }

    /// Tetrahedra containing the triangle.
    pub fn triangle_tets(&self, t: [usize; 3]) -> &[usize] {
        self.triangles.get(&sorted(t)).map_or(&[], Vec::as_slice)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Triangles shared by more than two tetrahedra, sorted.
    pub fn non_manifold_triangles(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self.triangles.iter().filter(|(_, v)| v.len() > 2).map(|(t, _)| *t).collect();
        out.sort_unstable();
        out
    }

    /// The same mesh with vertex `v` renamed `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<TetMesh> {
        if perm.len() != self.vertices.len() {
            return Err(Error::MeshIndex(format!("permutation of length {} for {} vertices", perm.len(), self.vertices.len())));
        }
        let mut vertices = vec![[0.0; 3]; perm.len()];
        for (v, &p) in perm.iter().enumerate() {
            if p >= perm.len() {
                return Err(Error::MeshIndex(format!("permutation image {p} out of range")));
            }
            vertices[p] = self.vertices[v];
        }
        TetMesh::new(vertices, self.tets.iter().map(|t| t.map(|v| perm[v])).collect())
    }

    /// ASCII MEDIT text, 1-based.
    pub fn to_medit(&self) -> String {
        let mut s = String::from("MeshVersionFormatted 1\nDimension 3\nVertices\n");
        writeln!(s, "{}", self.vertices.len()).expect("string write");
        for p in &self.vertices {
            writeln!(s, "{} {} {} 0", p[0], p[1], p[2]).expect("string write");
        }
        writeln!(s, "Tetrahedra\n{}", self.tets.len()).expect("string write");
        for t in &self.tets {
            writeln!(s, "{} {} {} {} 0", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1).expect("string write");
        }
        s.push_str("End\n");
        s
    }

    /// TetGen `.node` and `.ele` text numbered from `base`.
    pub fn to_tetgen(&self, base: usize) -> (String, String) {
        let mut node = format!("{} 3 0 0\n", self.vertices.len());
        for (i, p) in self.vertices.iter().enumerate() {
            writeln!(node, "{} {} {} {}", i + base, p[0], p[1], p[2]).expect("string write");
        }
        let mut ele = format!("{} 4 0\n", self.tets.len());
        for (i, t) in self.tets.iter().enumerate() {
            writeln!(ele, "{} {} {} {} {}", i + base, t[0] + base, t[1] + base, t[2] + base, t[3] + base).expect("string write");
        }
        (node, ele)
    }
}

struct Tokens<'a> {
    path: &'a Path,
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str, path: &'a Path) -> Tokens<'a> {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split('#').next().unwrap_or("").split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Tokens { path, items, pos: 0 }
    }

    fn error(&self, line: usize, msg: String) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            msg,
        }
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let t = self
            .items
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.error(self.last_line(), format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn parse<T: FromStr>(&mut self, what: &str) -> Result<(usize, T)> {
        let (line, tok) = self.next(what)?;
        tok.parse().map(|v| (line, v)).map_err(|_| self.error(line, format!("expected {what}, found {tok:?}")))
    }

    fn is_done(&self) -> bool {
        self.pos >= self.items.len()
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: e.to_string(),
    })
}

/// Loads a MEDIT `.mesh` file or a TetGen `.node`/`.ele` pair (either path
/// of the pair may be given).
pub fn load_mesh(path: &Path) -> Result<TetMesh> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mesh") => parse_medit(&read(path)?, path),
        Some("node") | Some("ele") => {
            let node = path.with_extension("node");
            let ele = path.with_extension("ele");
            parse_tetgen(&read(&node)?, &node, &read(&ele)?, &ele)
        }
        _ => Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            msg: "unknown mesh format, expected .mesh, .node or .ele".into(),
        }),
    }
}

/// Parses TetGen text; numbering starts at the first index of the node file
/// (0 or 1).
pub fn parse_tetgen(node: &str, node_path: &Path, ele: &str, ele_path: &Path) -> Result<TetMesh> {
    let mut t = Tokens::new(node, node_path);
    let (_, n) = t.parse::<usize>("vertex count")?;
    let (line, dim) = t.parse::<usize>("dimension")?;
    if dim != 3 {
        return Err(t.error(line, format!("dimension {dim}, expected 3")));
    }
    let (_, attrs) = t.parse::<usize>("attribute count")?;
    let (_, markers) = t.parse::<usize>("boundary marker flag")?;
    let mut base = 0;
    let mut vertices = Vec::with_capacity(n);
    for k in 0..n {
        let (line, idx) = t.parse::<usize>("vertex index")?;
        if k == 0 {
            if idx > 1 {
                return Err(t.error(line, format!("first vertex index {idx}, expected 0 or 1")));
            }
            base = idx;
        } else if idx != base + k {
            return Err(t.error(line, format!("vertex index {idx}, expected {}", base + k)));
        }
        let mut p = [0.0; 3];
        for c in &mut p {
            *c = t.parse::<f64>("coordinate")?.1;
        }
        for _ in 0..attrs + markers.min(1) {
            t.next("vertex attribute")?;
        }
        vertices.push(p);
    }
    if !t.is_done() {
        let line = t.next("")?.0;
        return Err(t.error(line, "trailing data after vertices".into()));
    }

    let mut t = Tokens::new(ele, ele_path);
    let (_, m) = t.parse::<usize>("tetrahedron count")?;
    let (line, per) = t.parse::<usize>("nodes per tetrahedron")?;
    if per != 4 && per != 10 {
        return Err(t.error(line, format!("{per} nodes per tetrahedron, expected 4 or 10")));
    }
    let (_, attrs) = t.parse::<usize>("region attribute flag")?;
    let mut tets = Vec::with_capacity(m);
    for _ in 0..m {
        t.next("tetrahedron index")?;
        let mut tet = [0; 4];
        for slot in &mut tet {
            let (line, v) = t.parse::<usize>("vertex index")?;
            if v < base || v - base >= n {
                return Err(Error::MeshIndex(format!(
                    "{}:{line}: vertex {v} out of range for {n} vertices numbered from {base}",
                    ele_path.display()
                )));
            }
            *slot = v - base;
        }
        for _ in 4..per + attrs {
            t.next("tetrahedron attribute")?;
        }
        tets.push(tet);
    }
    TetMesh::new(vertices, tets)
}

/// Parses ASCII MEDIT text (1-based).
pub fn parse_medit(text: &str, path: &Path) -> Result<TetMesh> {
    let mut t = Tokens::new(text, path);
    let mut vertices = Vec::new();
    let mut tets = Vec::new();
    while !t.is_done() {
        let (line, kw) = t.next("keyword")?;
        match kw {
            "MeshVersionFormatted" => {
                t.next("version")?;
            }
            "Dimension" => {
                let (line, d) = t.parse::<usize>("dimension")?;
                if d != 3 {
                    return Err(t.error(line, format!("dimension {d}, expected 3")));
                }
            }
            "Vertices" => {
                let (_, n) = t.parse::<usize>("vertex count")?;
                for _ in 0..n {
                    let mut p = [0.0; 3];
                    for c in &mut p {
                        *c = t.parse::<f64>("coordinate")?.1;
                    }
                    t.next("vertex reference")?;
                    vertices.push(p);
                }
            }
            "Tetrahedra" => {
                let (_, n) = t.parse::<usize>("tetrahedron count")?;
                for _ in 0..n {
                    let mut tet = [0; 4];
                    for slot in &mut tet {
                        let (line, v) = t.parse::<usize>("vertex index")?;
                        if v == 0 {
                            return Err(t.error(line, "vertex index 0 in a 1-based file".into()));
                        }
                        *slot = v - 1;
                    }
                    t.next("tetrahedron reference")?;
                    tets.push(tet);
                }
            }
            "End" => break,
            other => {
                let width = match other {
                    "Corners" | "Ridges" | "RequiredVertices" | "RequiredEdges" | "RequiredTriangles" => 1,
                    "NormalAtVertices" | "TangentAtVertices" => 2,
                    "Edges" | "Normals" | "Tangents" => 3,
                    "Triangles" => 4,
                    "Quadrilaterals" => 5,
                    "Hexahedra" => 9,
                    _ => return Err(t.error(line, format!("unsupported keyword {other:?}"))),
                };
                let (_, n) = t.parse::<usize>("entry count")?;
                for _ in 0..n * width {
                    t.next("entry")?;
                }
            }
        }
    }
    TetMesh::new(vertices, tets)
}

/// One hexahedron found in a mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HexOccurrence {
    /// `corners[l - 1]` is the mesh vertex playing template label `l`.
    pub corners: [usize; 8],
    /// Mesh tetrahedra filling the hexahedron, ascending.
    pub tets: Vec<usize>,
    pub class_id: String,
    pub tet_count: usize,
    /// Corner and sampled trilinear Jacobians all positive.
    pub valid: bool,
}

impl HexOccurrence {
    /// The corner vertices in ascending order.
    pub fn vertex_key(&self) -> [usize; 8] {
        sorted(self.corners)
    }
}

/// All hexahedra of `m`, one per vertex set, ordered by vertex set. A vertex
/// set with several fillings reports the one with most tetrahedra, then a
/// valid one, then smallest class id and tetrahedron indices.
///
/// The search takes each vertex as label 1 with larger neighbours as labels 2,
/// 4 and 5, then completes labels 3, 6, 8 and 7 by common neighbours. Fails
/// with `UnknownPattern` if a filling is missing from `catalog`.
pub fn find_hexahedra(m: &TetMesh, catalog: &Catalog) -> Result<Vec<HexOccurrence>> {
    let found: Vec<Result<Vec<HexOccurrence>>> =
        (0..m.num_vertices()).into_par_iter().map(|v| hexahedra_at(m, catalog, v)).collect();
    let mut out = Vec::new();
    for r in found {
        out.extend(r?);
    }
    out.sort_by(|a, b| {
        (a.vertex_key(), Reverse(a.tet_count), !a.valid, &a.class_id, &a.tets).cmp(&(
            b.vertex_key(),
            Reverse(b.tet_count),
            !b.valid,
            &b.class_id,
            &b.tets,
        ))
    });
    out.dedup_by_key(|o| o.vertex_key());
    Ok(out)
}

fn common(m: &TetMesh, vs: &[usize], lo: usize, used: &[usize]) -> Vec<usize> {
    m.neighbors(vs[0])
        .iter()
        .copied()
        .filter(|&x| x > lo && !used.contains(&x) && vs[1..].iter().all(|&v| m.has_edge(v, x)))
        .collect()
}

fn hexahedra_at(m: &TetMesh, catalog: &Catalog, v1: usize) -> Result<Vec<HexOccurrence>> {
    let mut out = Vec::new();
    let up: Vec<usize> = m.neighbors(v1).iter().copied().filter(|&u| u > v1).collect();
    for (i, &a) in up.iter().enumerate() {
        for (j, &b) in up.iter().enumerate().skip(i + 1) {
            for &c in &up[j + 1..] {
                for v3 in common(m, &[a, b], v1, &[v1, c]) {
                    for v6 in common(m, &[a, c], v1, &[v1, b, v3]) {
                        for v8 in common(m, &[b, c], v1, &[v1, a, v3, v6]) {
                            for v7 in common(m, &[v3, v6, v8], v1, &[v1, a, b, c]) {
                                out.extend(occurrences(m, catalog, [v1, a, v3, b, c, v6, v7, v8])?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every filling of the hexahedron with the given corner map by mesh
/// tetrahedra.
pub fn occurrences(m: &TetMesh, catalog: &Catalog, corners: [usize; 8]) -> Result<Vec<HexOccurrence>> {
    let label = |v: usize| corners.iter().position(|&c| c == v).map(|p| p as u8 + 1);
    let mut diags = Vec::with_capacity(6);
    for f in FACETS {
        let c = f.map(|l| corners[l as usize - 1]);
        let first = m.has_triangle([c[0], c[1], c[2]]) && m.has_triangle([c[0], c[2], c[3]]);
        let second = m.has_triangle([c[0], c[1], c[3]]) && m.has_triangle([c[1], c[2], c[3]]);
        match (first, second) {
            (true, false) => diags.push((f[0], f[2])),
            (false, true) => diags.push((f[1], f[3])),
            _ => return Ok(Vec::new()),
        }
    }
    let b = BoundaryTriangulation::from_diagonals(&diags).expect("one diagonal per facet");
    let mut cands: Vec<(VSet, usize)> = Vec::new();
    for &v in &corners {
        for &t in m.star(v) {
            if let Some(ls) = m.tets[t].iter().map(|&x| label(x)).collect::<Option<Vec<u8>>>() {
                cands.push((VSet::from_labels(&ls), t));
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands.retain(|(s, _)| !template::is_facet_quad(*s));
    let sets: Vec<VSet> = cands.iter().map(|c| c.0).collect();
    let fillings = enumerate_restricted(b, &sets, DEFAULT_MAX_TETS);
    if fillings.is_empty() {
        return Ok(Vec::new());
    }
    let canonical = canonical_corners(m, corners);
    let valid = validity_proxy(&canonical.map(|v| m.vertices[v]));
    fillings
        .iter()
        .map(|t| {
            let entry = catalog.lookup(t).ok_or_else(|| Error::UnknownPattern(format!("{t:?}")))?;
            let mut tets: Vec<usize> = t
                .tets()
                .iter()
                .map(|s| cands[sets.binary_search(s).expect("chosen from candidates")].1)
                .collect();
            tets.sort_unstable();
            Ok(HexOccurrence {
                corners: canonical,
                tets,
                class_id: entry.id.clone(),
                tet_count: entry.tet_count,
                valid,
            })
        })
        .collect()
}

fn corner_orientation(m: &TetMesh, c: &[usize; 8]) -> f64 {
    let p = |l: usize| m.vertices[c[l - 1]];
    let d = |l: usize| [p(l)[0] - p(1)[0], p(l)[1] - p(1)[1], p(l)[2] - p(1)[2]];
    let (u, v, w) = (d(2), d(4), d(5));
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Smallest corner map among the symmetric relabelings, preferring those
/// positively oriented at corner 1.
fn canonical_corners(m: &TetMesh, corners: [usize; 8]) -> [usize; 8] {
    let images: Vec<[usize; 8]> = template::symmetry_group()
        .iter()
        .map(|g| std::array::from_fn(|i| corners[g.apply(i as u8 + 1) as usize - 1]))
        .collect();
    images
        .iter()
        .filter(|c| corner_orientation(m, c) > 0.0)
        .min()
        .or_else(|| images.iter().min())
        .copied()
        .expect("nonempty group")
}

/// Occurrence counts in the layout of pattern tables: one column per
/// tetrahedron count `5..=15`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OccurrenceTable {
    pub per_class: BTreeMap<String, usize>,
    pub occurrences: [usize; 11],
    /// Distinct classes seen per tetrahedron count.
    pub patterns: [usize; 11],
}

impl OccurrenceTable {
    pub fn total(&self) -> usize {
        self.occurrences.iter().sum()
    }

    pub fn distinct(&self) -> usize {
        self.patterns.iter().sum()
    }
}

/// Counts occurrences per class and per tetrahedron count.
pub fn classify_occurrences(occ: &[HexOccurrence]) -> OccurrenceTable {
    let mut table = OccurrenceTable::default();
    let mut sizes = BTreeMap::new();
    for o in occ {
        *table.per_class.entry(o.class_id.clone()).or_default() += 1;
        sizes.insert(o.class_id.clone(), o.tet_count);
    }
    for (id, n) in &table.per_class {
        let k = sizes[id];
        if (5..=15).contains(&k) {
            table.occurrences[k - 5] += n;
            table.patterns[k - 5] += 1;
        }
    }
    table
}

fn table_csv(rows: &[(String, usize, OccurrenceTable)], cells: impl Fn(&OccurrenceTable) -> ([usize; 11], usize)) -> String {
    let mut s = String::from("model,vertices");
    for n in 5..=15 {
        write!(s, ",{n}").expect("string write");
    }
    s.push_str(",total\n");
    for (name, vertices, t) in rows {
        let (row, total) = cells(t);
        write!(s, "{name},{vertices}").expect("string write");
        for c in row {
            write!(s, ",{c}").expect("string write");
        }
        writeln!(s, ",{total}").expect("string write");
    }
    s
}

/// Distinct patterns per tetrahedron count, one row per mesh.
pub fn patterns_csv(rows: &[(String, usize, OccurrenceTable)]) -> String {
    table_csv(rows, |t| (t.patterns, t.distinct()))
}

/// Occurrences per tetrahedron count, one row per mesh.
pub fn occurrences_csv(rows: &[(String, usize, OccurrenceTable)]) -> String {
    table_csv(rows, |t| (t.occurrences, t.total()))
}

/// A generated mesh with the hexahedra it was built from.
#[derive(Clone, Debug)]
pub struct SyntheticMesh {
    pub mesh: TetMesh,
    /// Corner maps (label `l` at index `l - 1`) and the labeled fillings.
    pub cells: Vec<([usize; 8], Triangulation)>,
}

fn surface(t: &Triangulation) -> BoundaryTriangulation {
    BoundaryTriangulation::from_triangles(&BallComplex::new(t.tets().to_vec()).boundary_triangles())
        .expect("catalog triangulations have hexahedron surfaces")
}

fn shuffled<R: Rng>(vertices: Vec<[f64; 3]>, tets: Vec<[usize; 4]>, cells: Vec<([usize; 8], Triangulation)>, rng: &mut R) -> Result<SyntheticMesh> {
    let mut perm: Vec<usize> = (0..vertices.len()).collect();
    perm.shuffle(rng);
    let mut tets: Vec<[usize; 4]> = tets.iter().map(|t| t.map(|v| perm[v])).collect();
    tets.shuffle(rng);
    let mut placed = vec![[0.0; 3]; vertices.len()];
    for (v, p) in vertices.into_iter().enumerate() {
        placed[perm[v]] = p;
    }
    Ok(SyntheticMesh {
        mesh: TetMesh::new(placed, tets)?,
        cells: cells.into_iter().map(|(c, t)| (c.map(|v| perm[v]), t)).collect(),
    })
}

/// A `dims` grid of cubes, each filled by a random member of `pool` whose
/// facet diagonals agree with the cells already placed. Positions are jittered
/// by up to `jitter` per coordinate and vertex and tetrahedron order shuffled.
/// `None` if some cell has no compatible filling.
pub fn grid_mesh<R: Rng>(dims: [usize; 3], pool: &[Triangulation], jitter: f64, rng: &mut R) -> Result<Option<SyntheticMesh>> {
    let surfaces: Vec<BoundaryTriangulation> = pool.iter().map(surface).collect();
    let id = |p: [usize; 3]| p[0] + (dims[0] + 1) * (p[1] + (dims[1] + 1) * p[2]);
    let mut vertices = Vec::new();
    for z in 0..=dims[2] {
        for y in 0..=dims[1] {
            for x in 0..=dims[0] {
                let mut p = [x as f64, y as f64, z as f64];
                for c in &mut p {
                    *c += rng.gen_range(-jitter..=jitter);
                }
                vertices.push(p);
            }
        }
    }
    let mut diagonals: HashMap<[usize; 4], [usize; 2]> = HashMap::new();
    let mut tets = Vec::new();
    let mut cells = Vec::new();
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let corners: [usize; 8] = std::array::from_fn(|l| {
                    let c = UNIT_CUBE[l];
                    id([x + c[0] as usize, y + c[1] as usize, z + c[2] as usize])
                });
                let facet = |f: usize| sorted(FACETS[f].map(|l| corners[l as usize - 1]));
                let fits: Vec<usize> = (0..pool.len())
                    .filter(|&i| {
                        (0..6).all(|f| match diagonals.get(&facet(f)) {
                            None => true,
                            Some(d) => {
                                let (a, b) = surfaces[i].diagonal(f);
                                sorted([corners[a as usize - 1], corners[b as usize - 1]]) == *d
                            }
                        })
                    })
                    .collect();
                let Some(&pick) = fits.choose(rng) else {
                    return Ok(None);
                };
                for f in 0..6 {
                    let (a, b) = surfaces[pick].diagonal(f);
                    diagonals.insert(facet(f), sorted([corners[a as usize - 1], corners[b as usize - 1]]));
                }
                for t in pool[pick].tets() {
                    let l = t.to_vec();
                    tets.push(std::array::from_fn(|k| corners[l[k] as usize - 1]));
                }
                cells.push((corners, pool[pick].clone()));
            }
        }
    }
    shuffled(vertices, tets, cells, rng).map(Some)
}

/// Disjoint copies of the given hexahedra, spaced along the x axis, with
/// vertex and tetrahedron order shuffled.
pub fn disjoint_mesh<R: Rng>(hexes: &[([[f64; 3]; 8], Triangulation)], rng: &mut R) -> Result<SyntheticMesh> {
    let mut vertices = Vec::new();
    let mut tets = Vec::new();
    let mut cells = Vec::new();
    let mut offset = 0.0;
    for (points, t) in hexes {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let start = vertices.len();
        vertices.extend(points.iter().map(|p| [p[0] - lo + offset, p[1], p[2]]));
        offset += hi - lo + 1.0;
        for s in t.tets() {
            let l = s.to_vec();
            tets.push(std::array::from_fn(|k| start + l[k] as usize - 1));
        }
        cells.push((std::array::from_fn(|l| start + l), t.clone()));
    }
    shuffled(vertices, tets, cells, rng)
}

/// The unit cube corners, label `l` at index `l - 1`.
pub fn unit_cube_corners() -> [[f64; 3]; 8] {
    UNIT_CUBE.map(|c| c.map(|x| x as f64))
}
