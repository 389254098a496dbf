//! Decomposition graphs and their isomorphism test.
//!
//! One node per tetrahedron; a black edge for every shared triangle and a
//! grey edge joining the two tetrahedra that carry the two triangles of each
//! hexahedron facet. Isomorphism is decided by comparing canonical codes
//! computed with colour refinement and individualisation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::VSet;
use crate::template;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompGraph {
    #[serde(skip)]
    pub nodes: usize,
    /// Node pairs sharing a triangle, `i < j`, sorted.
    pub black: Vec<[usize; 2]>,
    /// Node pairs whose boundary triangles lie on the same facet, sorted.
    pub grey: Vec<[usize; 2]>,
}

impl DecompGraph {
    /// Builds the graph with nodes indexed like `t.tets()`.
    pub fn new(t: &Triangulation) -> Result<DecompGraph> {
        let mut tri_owner: BTreeMap<VSet, Vec<usize>> = BTreeMap::new();
        for (i, f) in t.triangles() {
            tri_owner.entry(f).or_default().push(i);
        }
        let mut black = Vec::new();
        let mut facet_owner: [Vec<usize>; 6] = Default::default();
        let mut accounted = vec![0usize; t.len()];
        for (f, owners) in &tri_owner {
            match owners[..] {
                [a, b] => {
                    black.push([a.min(b), a.max(b)]);
                    accounted[a] += 1;
                    accounted[b] += 1;
                }
                [a] => {
                    let facet = template::facet_containing(*f)
                        .ok_or_else(|| Error::Graph(format!("boundary triangle {f} is not on a facet")))?;
                    facet_owner[facet].push(a);
                    accounted[a] += 1;
                }
                _ => return Err(Error::Graph(format!("triangle {f} lies in {} tetrahedra", owners.len()))),
            }
        }
        let mut grey = Vec::new();
        for (facet, owners) in facet_owner.iter().enumerate() {
            match owners[..] {
                [a, b] if a != b => grey.push([a.min(b), a.max(b)]),
                _ => {
                    return Err(Error::Graph(format!(
                        "facet {} carries {} boundary triangles",
                        template::facet_set(facet),
                        owners.len()
                    )))
                }
            }
        }
        if let Some(i) = accounted.iter().position(|&c| c != 4) {
            return Err(Error::Graph(format!("tetrahedron {} has {} accounted faces", t.tets()[i], accounted[i])));
        }
        black.sort();
        grey.sort();
        Ok(DecompGraph {
            nodes: t.len(),
            black,
            grey,
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.black.iter().chain(&self.grey).filter(|e| e[0] == v || e[1] == v).count()
    }

    /// Edge code between two nodes: black multiplicity in the high bits,
    /// grey multiplicity in the low bits.
    fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.nodes;
        let mut m = vec![vec![0u8; n]; n];
        for &[a, b] in &self.black {
            m[a][b] += 16;
            m[b][a] += 16;
        }
        for &[a, b] in &self.grey {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    /// Certificate equal for two graphs iff they are colour-isomorphic.
    pub fn canonical_code(&self) -> Vec<u8> {
        let m = self.matrix();
        let n = self.nodes;
        let cells = refine(&m, vec![(0..n).collect()]);
        let mut best: Option<Vec<u8>> = None;
        search(&m, cells, &mut best);
        let mut code = vec![n as u8];
        code.extend(best.unwrap_or_default());
        code
    }

    /// Reorders nodes: node `i` of the result is node `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> DecompGraph {
        let mut pos = vec![0; order.len()];
        for (i, &o) in order.iter().enumerate() {
            pos[o] = i;
        }
        let map = |e: &[usize; 2]| {
            let (a, b) = (pos[e[0]], pos[e[1]]);
            [a.min(b), a.max(b)]
        };
        let mut black: Vec<_> = self.black.iter().map(map).collect();
        let mut grey: Vec<_> = self.grey.iter().map(map).collect();
        black.sort();
        grey.sort();
        DecompGraph {
            nodes: self.nodes,
            black,
            grey,
        }
    }
}

/// True iff a bijection of nodes maps black edges onto black edges and grey
/// edges onto grey edges, multiplicities included.
pub fn graph_isomorphic(a: &DecompGraph, b: &DecompGraph) -> bool {
    a.nodes == b.nodes
        && a.black.len() == b.black.len()
        && a.grey.len() == b.grey.len()
        && a.canonical_code() == b.canonical_code()
}

type Cells = Vec<Vec<usize>>;

/// Equitable refinement of an ordered partition. Cells split by the sorted
/// multiset of (cell, edge code) pairs of each node; the new cells are
/// ordered by that signature so the result depends only on the structure.
fn refine(m: &[Vec<u8>], mut cells: Cells) -> Cells {
    loop {
        let n = m.len();
        let mut cell_of = vec![0; n];
        for (ci, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        let mut next: Cells = Vec::with_capacity(cells.len());
        let mut changed = false;
        for c in &cells {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<(usize, u8)>, Vec<usize>> = BTreeMap::new();
            for &v in c {
                let mut sig: Vec<(usize, u8)> =
                    (0..n).filter(|&u| m[v][u] != 0).map(|u| (cell_of[u], m[v][u])).collect();
                sig.sort_unstable();
                groups.entry(sig).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            next.extend(groups.into_values());
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn search(m: &[Vec<u8>], cells: Cells, best: &mut Option<Vec<u8>>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let n = order.len();
        let mut code = Vec::with_capacity(n * n / 2);
        for i in 0..n {
            for j in i + 1..n {
                code.push(m[order[i]][order[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for &v in &cells[target] {
        let mut split = cells.clone();
        let rest: Vec<usize> = split[target].iter().copied().filter(|&u| u != v).collect();
        split[target] = vec![v];
        split.insert(target + 1, rest);
        search(m, refine(m, split), best);
    }
}
