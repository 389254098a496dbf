mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use hextet::exact::Rat;
use hextet::jacobian::validity_proxy;
use hextet::meshscan::*;
use hextet::realize::{corner_jacobians, realize_convex, Budget, Verdict};
use hextet::triangulation::Triangulation;
use hextet::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{brute_force_hexahedra, brute_force_on, catalog, labeled};

fn five_tet() -> Triangulation {
    Triangulation::from_label_lists(&[[1, 2, 4, 5], [2, 3, 4, 7], [2, 5, 6, 7], [4, 5, 7, 8], [2, 4, 5, 7]]).unwrap()
}

fn detected(m: &TetMesh) -> BTreeMap<[usize; 8], String> {
    find_hexahedra(m, catalog())
        .unwrap()
        .into_iter()
        .map(|o| (o.vertex_key(), o.class_id))
        .collect()
}

fn assert_matches_oracle(m: &TetMesh) -> BTreeMap<[usize; 8], BTreeSet<String>> {
    let found = detected(m);
    let oracle = brute_force_hexahedra(m);
    assert_eq!(found.keys().collect::<Vec<_>>(), oracle.keys().collect::<Vec<_>>());
    let size = |id: &String| catalog().get(id).unwrap().tet_count;
    for (k, id) in &found {
        let most = oracle[k].iter().map(size).max().unwrap();
        assert!(oracle[k].contains(id), "{k:?}: {id} not in {:?}", oracle[k]);
        assert_eq!(size(id), most, "{k:?}: {id} is not a largest filling");
    }
    oracle
}

#[test]
fn tetgen_single_tet_in_both_numberings() {
    let dir = tempfile::tempdir().unwrap();
    for (base, name) in [(0, "zero"), (1, "one")] {
        let i = |k: usize| k + base;
        std::fs::write(
            dir.path().join(format!("{name}.node")),
            format!(
                "# single tetrahedron\n4 3 0 0\n{} 0 0 0\n{} 1 0 0\n{} 0 1 0\n{} 0 0 1\n",
                i(0),
                i(1),
                i(2),
                i(3)
            ),
        )
        .unwrap();
        std::fs::write(
            dir.path().join(format!("{name}.ele")),
            format!("1 4 0\n{} {} {} {} {}\n", i(0), i(0), i(1), i(2), i(3)),
        )
        .unwrap();
        let m = load_mesh(&dir.path().join(format!("{name}.ele"))).unwrap();
        assert_eq!(m.tets(), &[[0, 1, 2, 3]]);
        assert_eq!((m.tets().len(), m.triangle_count(), m.edge_count()), (1, 4, 6));
    }
}

#[test]
fn tetgen_index_beyond_nodes_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.node"), "4 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n").unwrap();
    std::fs::write(dir.path().join("m.ele"), "1 4 0\n1 1 2 3 5\n").unwrap();
    assert!(matches!(load_mesh(&dir.path().join("m.node")), Err(Error::MeshIndex(_))));
}

#[test]
fn medit_cube_in_six_tets_around_a_diagonal() {
    let text = "MeshVersionFormatted 1
Dimension 3
Vertices
8
0 0 0 0
1 0 0 0
1 1 0 0
0 1 0 0
0 0 1 0
1 0 1 0
1 1 1 0
0 1 1 0
Tetrahedra
6
1 2 3 7 0
1 3 4 7 0
1 4 8 7 0
1 8 5 7 0
1 5 6 7 0
1 6 2 7 0
End
";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.mesh");
    std::fs::write(&path, text).unwrap();
    let m = load_mesh(&path).unwrap();
    assert_eq!(m.tets().len(), 6);
    assert!(m.tets().iter().all(|t| t.contains(&0) && t.contains(&6)));
    assert_eq!(m.triangle_tets([0, 6, 2]).len(), 2);
    let occ = find_hexahedra(&m, catalog()).unwrap();
    assert_eq!(occ.len(), 1);
    assert_eq!(occ[0].vertex_key(), [0, 1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(occ[0].tet_count, 6);
    assert!(occ[0].valid);
    assert_matches_oracle(&m);
}

#[test]
fn mesh_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = grid_mesh([2, 1, 1], labeled(), 0.1, &mut rng).unwrap().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let medit = dir.path().join("g.mesh");
    std::fs::write(&medit, s.mesh.to_medit()).unwrap();
    let back = load_mesh(&medit).unwrap();
    assert_eq!(back.tets(), s.mesh.tets());
    assert_eq!(back.vertices(), s.mesh.vertices());
    for base in [0, 1] {
        let (node, ele) = s.mesh.to_tetgen(base);
        std::fs::write(dir.path().join("g.node"), node).unwrap();
        std::fs::write(dir.path().join("g.ele"), ele).unwrap();
        let back = load_mesh(&dir.path().join("g.node")).unwrap();
        assert_eq!(back.tets(), s.mesh.tets());
        assert_eq!(back.vertices(), s.mesh.vertices());
    }
    assert!(load_mesh(Path::new("mesh.vtk")).is_err());
}

#[test]
fn one_five_tet_hexahedron() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = disjoint_mesh(&[(unit_cube_corners(), five_tet())], &mut rng).unwrap();
    let occ = find_hexahedra(&s.mesh, catalog()).unwrap();
    assert_eq!(occ.len(), 1);
    assert_eq!(occ[0].class_id, "5_A");
    assert_eq!(occ[0].tets.len(), 5);
    assert!(occ[0].valid);
}

#[test]
fn two_five_tet_hexahedra_glued_on_a_facet() {
    let pool: Vec<Triangulation> = labeled().iter().filter(|t| t.len() == 5).cloned().collect();
    assert_eq!(pool.len(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = grid_mesh([2, 1, 1], &pool, 0.0, &mut rng).unwrap().unwrap();
    assert_eq!(s.mesh.num_vertices(), 12);
    assert_matches_oracle(&s.mesh);
    // A third, flattened hexahedron spans both cubes; only the cubes are valid.
    let valid: Vec<HexOccurrence> = find_hexahedra(&s.mesh, catalog()).unwrap().into_iter().filter(|o| o.valid).collect();
    assert_eq!(valid.len(), 2);
    assert!(valid.iter().all(|o| o.class_id == "5_A"));
}

#[test]
fn kuhn_grid_cell_is_found() {
    let six: Vec<Triangulation> = labeled()
        .iter()
        .filter(|t| t.len() == 6 && t.tets().iter().all(|s| s.contains(1) && s.contains(7)))
        .cloned()
        .collect();
    assert_eq!(six.len(), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = grid_mesh([1, 1, 1], &six, 0.0, &mut rng).unwrap().unwrap();
    assert!(!assert_matches_oracle(&s.mesh).is_empty());
    assert_eq!(detected(&s.mesh).keys().next(), Some(&[0, 1, 2, 3, 4, 5, 6, 7]));
}

#[test]
fn disjoint_hexahedra_are_counted_by_class() {
    let cat = catalog();
    let small: Vec<Triangulation> =
        cat.entries().iter().filter(|e| e.tet_count <= 7).map(|e| e.triangulation().unwrap()).collect();
    let hexes: Vec<_> = small.iter().map(|t| (unit_cube_corners(), t.clone())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = disjoint_mesh(&hexes, &mut rng).unwrap();
    let occ = find_hexahedra(&s.mesh, cat).unwrap();
    assert_eq!(occ.len(), small.len());
    let mut expected: Vec<String> = small.iter().map(|t| cat.lookup(t).unwrap().id.clone()).collect();
    let mut got: Vec<String> = occ.iter().map(|o| o.class_id.clone()).collect();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);

    let table = classify_occurrences(&occ);
    assert_eq!(&table.patterns[..3], &[1, 5, 5]);
    assert_eq!(table.total(), table.per_class.values().sum::<usize>());
    let csv = patterns_csv(&[("small".into(), s.mesh.num_vertices(), table)]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("model,vertices,5,6,7,8,9,10,11,12,13,14,15,total"));
    assert_eq!(lines.next(), Some("small,88,1,5,5,0,0,0,0,0,0,0,0,11"));
}

#[test]
fn empty_occurrences_give_zero_table() {
    let t = classify_occurrences(&[]);
    assert_eq!((t.total(), t.distinct()), (0, 0));
    assert!(t.per_class.is_empty());
    assert_eq!(occurrences_csv(&[("none".into(), 0, t)]).lines().nth(1), Some("none,0,0,0,0,0,0,0,0,0,0,0,0,0"));
}

#[test]
fn validity_proxy_on_cubes() {
    let cube = unit_cube_corners();
    assert!(validity_proxy(&cube));
    let mut swapped = cube;
    swapped.swap(0, 6);
    assert!(!validity_proxy(&swapped));
}

#[test]
fn validity_proxy_agrees_with_exact_corners_on_sheared_realization() {
    let e = catalog().get("5_A").unwrap();
    let Verdict::Realized { realization, .. } = realize_convex(e, &Budget::default()).unwrap() else {
        panic!("5_A is realizable in convex position");
    };
    let shear = |p: &[Rat; 3]| {
        let x = p.clone().map(|c| c.to_f64());
        [x[0] + 3.0 * x[1] + 2.0 * x[2], x[1] + 4.0 * x[2], x[2]]
    };
    let corners: [[f64; 3]; 8] = std::array::from_fn(|i| shear(&realization.points[i]));
    let exact_positive = corner_jacobians(&realization.points).iter().all(|j| j.signum() > 0);
    if validity_proxy(&corners) {
        assert!(exact_positive);
    }
    let cube = unit_cube_corners();
    let sheared_cube: [[f64; 3]; 8] = std::array::from_fn(|i| {
        let x = cube[i];
        [x[0] + 3.0 * x[1] + 2.0 * x[2], x[1] + 4.0 * x[2], x[2]]
    });
    assert!(validity_proxy(&sheared_cube));
}

#[test]
fn random_grids_match_brute_force() {
    for seed in 0..4 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let dims = [[1, 1, 1], [2, 1, 1], [3, 1, 1], [2, 2, 1]][seed as usize];
        let s = grid_mesh(dims, labeled(), 0.15, &mut rng).unwrap().unwrap();
        assert!(s.mesh.num_vertices() <= 20);
        let oracle = assert_matches_oracle(&s.mesh);
        for (corners, t) in &s.cells {
            let mut key = *corners;
            key.sort_unstable();
            assert!(oracle[&key].contains(&catalog().lookup(t).unwrap().id));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn detection_ignores_vertex_numbering(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = grid_mesh([2, 1, 1], labeled(), 0.1, &mut rng).unwrap().unwrap();
        let mut perm: Vec<usize> = (0..s.mesh.num_vertices()).collect();
        perm.shuffle(&mut rng);
        let moved = s.mesh.relabeled(&perm).unwrap();
        let renamed: BTreeMap<[usize; 8], String> = detected(&s.mesh)
            .into_iter()
            .map(|(k, id)| {
                let mut k = k.map(|v| perm[v]);
                k.sort_unstable();
                (k, id)
            })
            .collect();
        prop_assert_eq!(renamed, detected(&moved));
    }
}

/// Brute-force classes on the cell's vertex set with the most tetrahedra.
fn cell_oracle(m: &TetMesh, corners: [usize; 8]) -> BTreeSet<String> {
    let mut key = corners;
    key.sort_unstable();
    let found = brute_force_on(m, &key);
    let size = |id: &String| catalog().get(id).unwrap().tet_count;
    let most = found.iter().map(size).max().unwrap_or(0);
    found.into_iter().filter(|id| size(id) == most).collect()
}

#[test]
fn bundled_meshes_match_construction_record() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/meshes");
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("construction.json")).unwrap()).unwrap();
    let mut ambiguous = 0;
    for (name, entry) in record.as_object().unwrap() {
        let m = load_mesh(&dir.join(entry["file"].as_str().unwrap())).unwrap();
        let found: BTreeMap<[usize; 8], HexOccurrence> =
            find_hexahedra(&m, catalog()).unwrap().into_iter().map(|o| (o.vertex_key(), o)).collect();
        let cells = entry["cells"].as_array().unwrap();
        // Hexahedra built from geometric realizations are detectable as built;
        // combinatorial grid cells can be masked by their neighbours.
        let geometric = name != "grid-3x2x2";
        if name == "realized-disjoint" {
            assert_eq!(found.len(), cells.len());
        }
        for cell in cells {
            let corners: [usize; 8] = serde_json::from_value(cell["corners"].clone()).unwrap();
            let built = cell["classId"].as_str().unwrap();
            let mut key = corners;
            key.sort_unstable();
            let oracle = cell_oracle(&m, corners);
            let Some(o) = found.get(&key) else {
                assert!(oracle.is_empty() && !geometric, "{name}: cell {corners:?} not found");
                continue;
            };
            assert!(oracle.contains(&o.class_id), "{name}: {} not in {oracle:?}", o.class_id);
            if geometric {
                assert!(oracle.contains(built), "{name}: {built} not in {oracle:?}");
                if oracle.len() == 1 {
                    assert_eq!(o.class_id, built);
                } else {
                    ambiguous += 1;
                }
            }
        }
    }
    assert!(ambiguous <= 8, "{ambiguous} ambiguous cells");
}
