//! The catalog of triangulation classes.
//!
//! Classes are named `N_X`: `N` is the number of tetrahedra and `X` a letter
//! code (`A`..`Z`, `AA`, `AB`, ...) assigned in increasing order of canonical
//! key within each tetrahedron count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_class_of, BoundaryTriangulation};
use crate::decomp::DecompGraph;
use crate::enumerate;
use crate::template;
use crate::error::{Error, Result};
use crate::triangulation::{CanonicalKey, Triangulation};

pub const NAMING_RULE: &str =
    "classes sorted by tetrahedron count, then by lexicographically smallest relabeled tetrahedron list; letters A..Z, AA, AB, ...";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    pub id: String,
    pub tet_count: usize,
    pub tets: Vec<[u8; 4]>,
    pub orbit_size: usize,
    pub boundary_class: usize,
    pub decomp_graph: DecompGraph,
}

impl CatalogEntry {
    pub fn triangulation(&self) -> Result<Triangulation> {
        Triangulation::from_label_lists(&self.tets)
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    naming: String,
    #[serde(rename = "labeledTotal")]
    labeled_total: usize,
    classes: Vec<CatalogEntry>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    index: HashMap<CanonicalKey, usize>,
    labeled_total: usize,
}

/// Spreadsheet-style letters: 0 → A, 25 → Z, 26 → AA.
pub fn letter_code(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

impl Catalog {
    /// Enumerates every labeled triangulation and groups them into classes.
    pub fn build(max_tets: usize) -> Catalog {
        let labeled = enumerate::enumerate_all(max_tets);
        Catalog::from_labeled(labeled.iter().map(|(_, t)| t))
    }

    /// Groups labeled triangulations by canonical key.
    pub fn from_labeled<'a>(labeled: impl IntoIterator<Item = &'a Triangulation>) -> Catalog {
        let mut classes: BTreeMap<(usize, CanonicalKey), usize> = BTreeMap::new();
        let mut total = 0;
        for t in labeled {
            let k = t.canonical_form();
            *classes.entry((k.tet_count(), k)).or_default() += 1;
            total += 1;
        }
        let mut entries = Vec::with_capacity(classes.len());
        let mut index = HashMap::new();
        let mut letter = 0;
        let mut last_count = 0;
        for ((n, key), orbit) in classes {
            if n != last_count {
                letter = 0;
                last_count = n;
            }
            let rep = key.representative();
            let boundary = BoundaryTriangulation::from_triangles(&crate::ball::BallComplex::new(rep.tets().to_vec()).boundary_triangles())
                .expect("catalog triangulations have hexahedron surfaces");
            let graph = DecompGraph::new(&rep).expect("catalog triangulations have decomposition graphs");
            index.insert(key, entries.len());
            entries.push(CatalogEntry {
                id: format!("{n}_{}", letter_code(letter)),
                tet_count: n,
                tets: rep.label_lists(),
                orbit_size: orbit,
                boundary_class: boundary_class_of(boundary),
                decomp_graph: graph,
            });
            letter += 1;
        }
        Catalog {
            entries,
            index,
            labeled_total: total,
        }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labeled_total(&self) -> usize {
        self.labeled_total
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Class of a labeled triangulation.
    pub fn lookup(&self, t: &Triangulation) -> Option<&CatalogEntry> {
        self.index.get(&t.canonical_form()).map(|&i| &self.entries[i])
    }

    /// Every labeled member of every class, sorted.
    pub fn labeled_triangulations(&self) -> Result<Vec<Triangulation>> {
        let mut out = Vec::with_capacity(self.labeled_total);
        for e in &self.entries {
            let t = e.triangulation()?;
            let mut orbit: Vec<Triangulation> = template::symmetry_group().iter().map(|g| t.relabel(g)).collect();
            orbit.sort();
            orbit.dedup();
            out.extend(orbit);
        }
        out.sort();
        Ok(out)
    }

    /// Number of classes for each tetrahedron count `5..=15`.
    pub fn counts_by_size(&self) -> [usize; 11] {
        let mut out = [0; 11];
        for e in &self.entries {
            if (5..=15).contains(&e.tet_count) {
                out[e.tet_count - 5] += 1;
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let f = CatalogFile {
            naming: NAMING_RULE.to_string(),
            labeled_total: self.labeled_total,
            classes: self.entries.clone(),
        };
        Ok(serde_json::to_string_pretty(&f)?)
    }

    /// Reads a catalog document, recomputing keys from the stored tetrahedra.
    pub fn from_json(s: &str) -> Result<Catalog> {
        let f: CatalogFile = serde_json::from_str(s)?;
        let mut index = HashMap::new();
        let mut entries = f.classes;
        for (i, e) in entries.iter_mut().enumerate() {
            let t = e.triangulation()?;
            if t.len() != e.tet_count {
                return Err(Error::Schema(format!("{}: tetCount {} != {}", e.id, e.tet_count, t.len())));
            }
            e.decomp_graph.nodes = t.len();
            if index.insert(t.canonical_form(), i).is_some() {
                return Err(Error::Schema(format!("{}: duplicate class", e.id)));
            }
        }
        Ok(Catalog {
            entries,
            index,
            labeled_total: f.labeled_total,
        })
    }

    /// Per-size class counts in the layout `#tets,5,...,15,Sum`.
    pub fn counts_csv(&self) -> String {
        let counts = self.counts_by_size();
        let mut s = String::from("#tets");
        for n in 5..=15 {
            write!(s, ",{n}").expect("string write");
        }
        s.push_str(",Sum\ncombinatorial");
        for c in counts {
            write!(s, ",{c}").expect("string write");
        }
        writeln!(s, ",{}", counts.iter().sum::<usize>()).expect("string write");
        s
    }
}
