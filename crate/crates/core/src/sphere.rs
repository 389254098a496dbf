//! Closed 3-spheres on 9 vertices and the vertex-deletion route to 3-balls.
//!
//! Input files list one triangulation per record, e.g.
//! `manifold_lex_d3_n9_#1=[[1,2,3,4],[1,2,3,5],...]`. A record may span
//! several lines; it ends when its brackets balance. Anything before `=` is
//! treated as a name.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::ball::BallComplex;
use crate::error::{Error, Result};
use crate::simplex::VSet;
use crate::template;
use crate::triangulation::{CanonicalKey, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereTriangulation {
    pub tets: Vec<VSet>,
}

impl SphereTriangulation {
    /// Every triangle lies in exactly two tetrahedra.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        let mut m: BTreeMap<VSet, usize> = BTreeMap::new();
        for t in &self.tets {
            for f in t.subsets_of_size(3) {
                *m.entry(f).or_default() += 1;
            }
        }
        m.values().all(|&c| c == 2)
    }

    /// Cone over the boundary of a ball on labels `1..=8`, apex 9.
    pub fn cone_over(ball: &BallComplex) -> SphereTriangulation {
        let mut tets = ball.tets.clone();
        tets.extend(ball.boundary_triangles().into_iter().map(|f| f.with(9)));
        SphereTriangulation { tets }
    }

    pub fn relabel(&self, image: &[u8; 9]) -> SphereTriangulation {
        SphereTriangulation {
            tets: self
                .tets
                .iter()
                .map(|t| VSet::from_labels(&t.labels().map(|l| image[(l - 1) as usize]).collect::<Vec<_>>()))
                .collect(),
        }
    }

    pub fn to_record(&self, name: &str) -> String {
        let mut tets: Vec<Vec<u8>> = self.tets.iter().map(|t| t.to_vec()).collect();
        tets.sort();
        let body: Vec<String> = tets
            .iter()
            .map(|t| format!("[{}]", t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("{name}=[{}]", body.join(","))
    }
}

pub fn parse_sphere_data(text: &str, path: &Path) -> Result<Vec<SphereTriangulation>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut out = Vec::new();
    let mut record = String::new();
    let mut start_line = 0;
    let mut depth: i64 = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() && record.is_empty() {
            continue;
        }
        if record.is_empty() {
            start_line = i + 1;
        }
        let body = match (record.is_empty(), line.find('=')) {
            (true, Some(p)) => &line[p + 1..],
            _ => line,
        };
        for c in body.chars() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
        }
        record.push_str(body);
        if depth < 0 {
            return Err(err(i + 1, "unbalanced ']'".into()));
        }
        if depth == 0 && !record.trim().is_empty() {
            out.push(parse_record(&record).map_err(|m| err(start_line, m))?);
            record.clear();
        }
    }
    if !record.trim().is_empty() {
        return Err(err(start_line, "unterminated record".into()));
    }
    Ok(out)
}

fn parse_record(rec: &str) -> std::result::Result<SphereTriangulation, String> {
    let s = rec.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| "expected [[...],...]".to_string())?;
    let mut tets = Vec::new();
    for chunk in inner.split(']') {
        let chunk = chunk.trim_start_matches(',').trim();
        if chunk.is_empty() {
            continue;
        }
        let nums = chunk.strip_prefix('[').ok_or_else(|| format!("malformed tuple '{chunk}'"))?;
        let labels: Vec<u8> = nums
            .split(',')
            .map(|x| x.trim().parse::<u8>().map_err(|e| format!("bad label '{x}': {e}")))
            .collect::<std::result::Result<_, _>>()?;
        if labels.len() != 4 {
            return Err(format!("tuple with {} entries, expected 4", labels.len()));
        }
        if let Some(l) = labels.iter().find(|&&l| !(1..=9).contains(&l)) {
            return Err(format!("label {l} outside 1..9"));
        }
        let set = VSet::from_labels(&labels);
        if set.len() != 4 {
            return Err(format!("repeated label in {labels:?}"));
        }
        tets.push(set);
    }
    let verts = tets.iter().fold(VSet::EMPTY, |a, t| a.union(*t));
    if verts.len() != 9 {
        return Err(format!("triangulation uses {} vertices, expected 9", verts.len()));
    }
    Ok(SphereTriangulation { tets })
}

pub fn ingest_sphere_data(path: &Path) -> Result<Vec<SphereTriangulation>> {
    let text = std::fs::read_to_string(path)?;
    parse_sphere_data(&text, path)
}

/// Removes `v` and every tetrahedron containing it, then relabels the
/// remaining vertices order-preservingly onto `1..`.
pub fn delete_vertex_link(s: &SphereTriangulation, v: u8) -> BallComplex {
    let remaining: Vec<VSet> = s.tets.iter().copied().filter(|t| !t.contains(v)).collect();
    let verts = remaining.iter().fold(VSet::EMPTY, |a, t| a.union(*t));
    let order: Vec<u8> = verts.to_vec();
    let relabel = |t: VSet| {
        VSet::from_labels(
            &t.labels()
                .map(|l| order.iter().position(|&x| x == l).expect("vertex present") as u8 + 1)
                .collect::<Vec<_>>(),
        )
    };
    BallComplex::new(remaining.into_iter().map(relabel).collect())
}

/// Every way to read a ball on 8 vertices as a hexahedron triangulation:
/// pick 6 boundary edges whose removal pairs the 12 boundary triangles into
/// quadrilaterals and leaves a cube graph, then map that graph onto the
/// template. Returns the canonical keys of the valid readings.
pub fn hexahedron_readings(ball: &BallComplex) -> BTreeSet<CanonicalKey> {
    let mut out = BTreeSet::new();
    if ball.vertex_set() != template::all_labels() || ball.validate().is_err() {
        return out;
    }
    let boundary = ball.boundary_triangles();
    if boundary.len() != 12 {
        return out;
    }
    let bedges: Vec<VSet> = boundary
        .iter()
        .flat_map(|t| t.subsets_of_size(2))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Each candidate diagonal must be shared by two boundary triangles.
    let choose = |k: usize, n: usize| -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    };
    for pick in choose(6, bedges.len()) {
        let diags: Vec<VSet> = pick.iter().map(|&i| bedges[i]).collect();
        let mut covered = VSet::EMPTY.0 as u32;
        let mut ok = true;
        for d in &diags {
            let tris: Vec<usize> = (0..12).filter(|&i| d.is_subset(boundary[i])).collect();
            if tris.len() != 2 || tris.iter().any(|&i| covered & (1 << i) != 0) {
                ok = false;
                break;
            }
            for i in tris {
                covered |= 1 << i;
            }
        }
        if !ok || covered != 0xfff {
            continue;
        }
        let cube: Vec<VSet> = bedges.iter().copied().filter(|e| !diags.contains(e)).collect();
        if let Some(map) = cube_isomorphism(&cube) {
            let tets = ball.tets.iter().map(|t| {
                VSet::from_labels(&t.labels().map(|l| map[(l - 1) as usize]).collect::<Vec<_>>())
            });
            if let Ok(tri) = Triangulation::new(tets) {
                out.insert(tri.canonical_form());
            }
        }
    }
    out
}

/// A bijection sending the given 12 edges onto the template edges.
fn cube_isomorphism(edges: &[VSet]) -> Option<[u8; 8]> {
    let adj = |a: u8, b: u8| edges.contains(&VSet::from_labels(&[a, b]));
    fn rec(pos: usize, img: &mut [u8; 8], adj: &dyn Fn(u8, u8) -> bool) -> bool {
        if pos == 8 {
            return true;
        }
        let src = pos as u8 + 1;
        for cand in 1..=8u8 {
            if img[..pos].contains(&cand) {
                continue;
            }
            if (1..src).all(|p| adj(p, src) == template::is_edge(img[(p - 1) as usize], cand)) {
                img[pos] = cand;
                if rec(pos + 1, img, adj) {
                    return true;
                }
            }
        }
        img[pos] = 0;
        false
    }
    let mut img = [0u8; 8];
    rec(0, &mut img, &adj).then_some(img)
}

/// Canonical keys of every hexahedron triangulation obtained by deleting any
/// vertex of any sphere.
pub fn catalog_keys_from_spheres(spheres: &[SphereTriangulation]) -> BTreeSet<CanonicalKey> {
    use rayon::prelude::*;
    spheres
        .par_iter()
        .flat_map_iter(|s| {
            let verts = s.tets.iter().fold(VSet::EMPTY, |a, t| a.union(*t));
            verts
                .labels()
                .flat_map(|v| hexahedron_readings(&delete_vertex_link(s, v)))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
