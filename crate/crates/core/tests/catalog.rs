mod support;

use std::collections::{BTreeMap, BTreeSet};

use hextet::ball::BallComplex;
use hextet::boundary::{boundary_class_of, boundary_classes, BoundaryTriangulation};
use hextet::decomp::DecompGraph;
use hextet::enumerate::enumerate_all;
use hextet::simplex::VSet;
use hextet::template::{symmetry_group, Permutation};
use hextet::{Catalog, Triangulation};
use proptest::prelude::*;
use support::{brute_force_group, catalog, labeled, shipped};

fn relabel_sets(sets: &[VSet], img: &[u8; 8]) -> BTreeSet<VSet> {
    sets.iter()
        .map(|s| VSet::from_labels(&s.labels().map(|l| img[l as usize - 1]).collect::<Vec<_>>()))
        .collect()
}

#[test]
fn symmetry_group_matches_exhaustive_search() {
    let group: BTreeSet<[u8; 8]> = symmetry_group().iter().map(Permutation::images).collect();
    let brute: BTreeSet<[u8; 8]> = brute_force_group().iter().copied().collect();
    assert_eq!(group.len(), 48);
    assert_eq!(group, brute);
}

#[test]
fn boundaries_fall_into_seven_classes() {
    let all: Vec<BTreeSet<VSet>> =
        BoundaryTriangulation::all().map(|b| b.triangles().into_iter().collect()).collect();
    assert_eq!(all.len(), 64);
    let mut orbit_of: BTreeMap<BTreeSet<VSet>, usize> = BTreeMap::new();
    let mut next = 0;
    for b in &all {
        if orbit_of.contains_key(b) {
            continue;
        }
        let tris: Vec<VSet> = b.iter().copied().collect();
        for g in brute_force_group() {
            orbit_of.insert(relabel_sets(&tris, g), next);
        }
        next += 1;
    }
    assert_eq!(next, 7);
    let library: Vec<usize> = boundary_classes().iter().map(|&(_, c)| c).collect();
    for (i, j) in (0..64).flat_map(|i| (0..64).map(move |j| (i, j))) {
        assert_eq!(orbit_of[&all[i]] == orbit_of[&all[j]], library[i] == library[j]);
    }
}

#[test]
fn catalog_distribution_by_tet_count() {
    let c = catalog();
    assert_eq!(c.len(), 174);
    assert_eq!(c.counts_by_size(), [1, 5, 5, 7, 13, 20, 35, 30, 28, 19, 11]);
}

#[test]
fn labeled_total_agrees_across_routes() {
    let direct: BTreeSet<Vec<VSet>> = enumerate_all(15).into_iter().map(|(_, t)| t.tets().to_vec()).collect();
    let expanded: BTreeSet<Vec<VSet>> = labeled().iter().map(|t| t.tets().to_vec()).collect();
    assert_eq!(direct, expanded);
    let by_stabilizer: usize = catalog()
        .entries()
        .iter()
        .map(|e| {
            let tets: Vec<VSet> = e.triangulation().unwrap().tets().to_vec();
            let own: BTreeSet<VSet> = tets.iter().copied().collect();
            48 / brute_force_group().iter().filter(|g| relabel_sets(&tets, g) == own).count()
        })
        .sum();
    assert_eq!(by_stabilizer, expanded.len());
    assert_eq!(catalog().labeled_total(), expanded.len());
}

#[test]
fn every_entry_is_a_hexahedron_ball() {
    for e in catalog().entries() {
        let t = e.triangulation().unwrap();
        assert_eq!(t.len(), e.tet_count, "{}", e.id);
        let (f, b) = BallComplex::new(t.tets().to_vec()).validate_hexahedron().unwrap();
        assert_eq!(f.euler(), 1, "{}", e.id);
        assert_eq!(boundary_class_of(b), e.boundary_class, "{}", e.id);
        assert_eq!(t.orbit_size(), e.orbit_size, "{}", e.id);
    }
}

#[test]
fn five_tet_class_is_the_corner_cut_with_central_tet() {
    let e = catalog().get("5_A").unwrap();
    let t = Triangulation::from_label_lists(&[[1, 2, 4, 5], [2, 3, 4, 7], [2, 5, 6, 7], [4, 5, 7, 8], [2, 4, 5, 7]]).unwrap();
    assert_eq!(catalog().lookup(&t).unwrap().id, e.id);
    assert_eq!(e.orbit_size, 2);
}

#[test]
fn canonical_form_is_idempotent_and_symmetry_invariant() {
    for e in catalog().entries() {
        let t = e.triangulation().unwrap();
        let key = t.canonical_form();
        let rep = key.representative();
        assert_eq!(rep.canonical_form(), key, "{}", e.id);
        for g in symmetry_group() {
            assert_eq!(t.relabel(g).canonical_form(), key, "{}", e.id);
        }
    }
}

#[test]
fn decomposition_graphs_separate_exactly_the_symmetry_classes() {
    let mut codes = BTreeMap::new();
    for e in catalog().entries() {
        let t = e.triangulation().unwrap();
        let code = DecompGraph::new(&t).unwrap().canonical_code();
        for g in symmetry_group() {
            assert_eq!(DecompGraph::new(&t.relabel(g)).unwrap().canonical_code(), code, "{}", e.id);
        }
        assert!(codes.insert(code, e.id.clone()).is_none(), "{} shares a graph", e.id);
    }
    assert_eq!(codes.len(), 174);
}

#[test]
fn shipped_catalog_equals_a_fresh_build() {
    let text = std::fs::read_to_string(shipped("catalog")).unwrap();
    let loaded = Catalog::from_json(&text).unwrap();
    assert_eq!(loaded.entries(), catalog().entries());
    assert_eq!(loaded.to_json().unwrap(), catalog().to_json().unwrap());
}

#[test]
fn larger_search_bound_finds_nothing_new() {
    let c = Catalog::build(18);
    assert_eq!(c.entries(), catalog().entries());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lookup_is_invariant_under_relabeling(i in 0usize..6966, g in 0usize..48) {
        let t = &labeled()[i];
        let image = t.relabel(&symmetry_group()[g]);
        prop_assert_eq!(&catalog().lookup(&image).unwrap().id, &catalog().lookup(t).unwrap().id);
        prop_assert!(labeled().binary_search(&image).is_ok());
    }
}

#[test]
fn sphere_route_recovers_the_catalog_from_cones() {
    use hextet::pipeline::run_enumerate;
    use hextet::sphere::SphereTriangulation;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut text = String::new();
    for (i, e) in catalog().entries().iter().enumerate() {
        let ball = BallComplex::new(e.triangulation().unwrap().tets().to_vec());
        let mut image: [u8; 9] = std::array::from_fn(|k| k as u8 + 1);
        image.shuffle(&mut rng);
        text += &SphereTriangulation::cone_over(&ball).relabel(&image).to_record(&format!("cone_{i}"));
        text.push('\n');
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spheres.txt");
    std::fs::write(&path, text).unwrap();
    let report = run_enumerate(dir.path(), 15, Some(&path)).unwrap();
    assert_eq!(report.sphere_agrees, Some(true));
}
