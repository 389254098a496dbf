#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;

use hextet::meshscan::TetMesh;
use hextet::pipeline::Manifest;
use hextet::realize::Realization;
use hextet::simplex::VSet;
use hextet::template::{self, EDGES, FACETS};
use hextet::triangulation::{quad_rank, Triangulation};
use hextet::Catalog;

pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::build(15))
}

pub fn labeled() -> &'static [Triangulation] {
    static LABELED: OnceLock<Vec<Triangulation>> = OnceLock::new();
    LABELED.get_or_init(|| catalog().labeled_triangulations().expect("catalog members are valid"))
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// The shipped file recorded under `role` in the data manifest.
pub fn shipped(role: &str) -> PathBuf {
    let dir = data_dir();
    Manifest::load(&dir).unwrap().path(&dir, role).unwrap_or_else(|| panic!("no {role} in manifest"))
}

pub fn shipped_realizations(convex: bool) -> Vec<Realization> {
    let role = if convex { "realizations-convex" } else { "realizations" };
    serde_json::from_str(&std::fs::read_to_string(shipped(role)).unwrap()).unwrap()
}

/// Every permutation of 1..=8 mapping template edges onto template edges,
/// by exhaustive search over all 8! permutations.
pub fn brute_force_group() -> &'static [[u8; 8]] {
    static GROUP: OnceLock<Vec<[u8; 8]>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let edges: BTreeSet<(u8, u8)> = EDGES.iter().copied().collect();
        let mut out = Vec::new();
        for code in 0..40320usize {
            let mut pool: Vec<u8> = (1..=8).collect();
            let mut k = code;
            let img: [u8; 8] = std::array::from_fn(|i| {
                let d = 8 - i;
                let x = pool.remove(k % d);
                k /= d;
                x
            });
            let ok = edges.iter().all(|&(a, b)| {
                let (x, y) = (img[a as usize - 1], img[b as usize - 1]);
                edges.contains(&(x.min(y), x.max(y)))
            });
            if ok {
                out.push(img);
            }
        }
        out
    })
}

fn mask(tets: &[VSet]) -> u128 {
    tets.iter().fold(0, |m, &t| m | 1u128 << quad_rank(t))
}

fn labeled_masks() -> &'static [(u128, String)] {
    static MASKS: OnceLock<Vec<(u128, String)>> = OnceLock::new();
    MASKS.get_or_init(|| {
        labeled()
            .iter()
            .map(|t| (mask(t.tets()), catalog().lookup(t).expect("member").id.clone()))
            .collect()
    })
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for v in start..n {
        if n - v < k - cur.len() {
            break;
        }
        cur.push(v);
        subsets(n, k, v + 1, cur, f);
        cur.pop();
    }
}

fn assign(m: &TetMesh, rest: &[usize], labels: &mut [usize; 8], used: &mut [bool; 7], depth: usize, out: &mut Vec<[usize; 8]>) {
    if depth == 9 {
        out.push(*labels);
        return;
    }
    for i in 0..7 {
        if used[i] {
            continue;
        }
        let v = rest[i];
        let ok = EDGES
            .iter()
            .all(|&(a, b)| !(b as usize == depth && (a as usize) < depth) || m.has_edge(labels[a as usize - 1], v));
        if ok {
            used[i] = true;
            labels[depth - 1] = v;
            assign(m, rest, labels, used, depth + 1, out);
            used[i] = false;
        }
    }
}

/// Classes found on one sorted 8-vertex set: every label assignment with
/// template edges present, one diagonal per facet, and some labeled catalog
/// triangulation contained in the mesh tetrahedra on the set.
pub fn brute_force_on(m: &TetMesh, s: &[usize]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if s.iter().any(|&v| s.iter().filter(|&&u| m.has_edge(u, v)).count() < 3) {
        return out;
    }
    let rest: Vec<usize> = s[1..].to_vec();
    let mut maps = Vec::new();
    let mut labels = [0usize; 8];
    labels[0] = s[0];
    assign(m, &rest, &mut labels, &mut [false; 7], 2, &mut maps);
    for c in maps {
        let facets_ok = FACETS.iter().all(|f| {
            let q = f.map(|l| c[l as usize - 1]);
            let first = m.has_triangle([q[0], q[1], q[2]]) && m.has_triangle([q[0], q[2], q[3]]);
            let second = m.has_triangle([q[0], q[1], q[3]]) && m.has_triangle([q[1], q[2], q[3]]);
            first != second
        });
        if !facets_ok {
            continue;
        }
        let inside: Vec<VSet> = m
            .tets()
            .iter()
            .filter_map(|t| {
                let ls: Option<Vec<u8>> = t.iter().map(|v| c.iter().position(|x| x == v).map(|p| p as u8 + 1)).collect();
                ls.map(|l| VSet::from_labels(&l))
            })
            .filter(|&t| !template::is_facet_quad(t))
            .collect();
        let have = mask(&inside);
        for (tm, id) in labeled_masks() {
            if tm & !have == 0 {
                out.insert(id.clone());
            }
        }
    }
    out
}

/// [`brute_force_on`] over all 8-vertex subsets, keeping the nonempty ones.
pub fn brute_force_hexahedra(m: &TetMesh) -> BTreeMap<[usize; 8], BTreeSet<String>> {
    let mut out = BTreeMap::new();
    subsets(m.num_vertices(), 8, 0, &mut Vec::new(), &mut |s| {
        let found = brute_force_on(m, s);
        if !found.is_empty() {
            out.insert(std::array::from_fn(|i| s[i]), found);
        }
    });
    out
}
