mod support;

use std::collections::{BTreeMap, BTreeSet};

use hextet::chirotope::Chirotope;
use hextet::encode::{encode_constraints, solve_all};
use hextet::exact::{point, PointSet, Rat};
use hextet::realize::perturbed_cube_chirotope;
use hextet::sat::{Cnf, SolveResult, Solver};
use hextet::simplex::VSet;
use hextet::template::{all_labels, symmetry_group};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use support::{catalog, shipped_realizations};

fn brute_force_sat(cnf: &Cnf) -> bool {
    (0u32..1 << cnf.num_vars).any(|m| {
        let model: Vec<bool> = (0..cnf.num_vars).map(|v| m >> v & 1 == 1).collect();
        cnf.satisfied_by(&model)
    })
}

fn cnf_strategy() -> impl Strategy<Value = Cnf> {
    (1usize..=10).prop_flat_map(|n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 0..=40)
            .prop_map(move |clauses| Cnf { num_vars: n, clauses })
    })
}

/// Radon partition of five labels read directly from determinant signs.
fn partition(c: &Chirotope, five: VSet) -> (VSet, VSet) {
    let l = five.to_vec();
    let mut plus = VSet::EMPTY;
    let mut minus = VSet::EMPTY;
    for i in 0..5 {
        let rest: Vec<u8> = l.iter().copied().filter(|&x| x != l[i]).collect();
        let s = if i % 2 == 0 { 1 } else { -1 } * c.eval([rest[0], rest[1], rest[2], rest[3]]);
        if s > 0 {
            plus = plus.with(l[i]);
        } else {
            minus = minus.with(l[i]);
        }
    }
    (plus, minus)
}

/// No Radon partition of the union of two tetrahedra splits across them.
fn tets_meet_properly(c: &Chirotope, a: VSet, b: VSet) -> bool {
    a.union(b).subsets_of_size(5).all(|f| {
        let (p, m) = partition(c, f);
        !(p.is_subset(a) && m.is_subset(b) || p.is_subset(b) && m.is_subset(a))
    })
}

fn sat_verdicts(convex: bool) -> BTreeMap<String, bool> {
    catalog()
        .entries()
        .par_iter()
        .map(|e| {
            let s = encode_constraints(&e.triangulation().unwrap(), convex).unwrap();
            (e.id.clone(), s.is_satisfiable(0))
        })
        .collect()
}

fn ids(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn instance_has_seventy_basis_variables() {
    let s = encode_constraints(&catalog().get("5_A").unwrap().triangulation().unwrap(), false).unwrap();
    assert_eq!(s.sidecar().bases.len(), 70);
    assert_eq!(s.cnf.num_vars, 70 + s.products.len());
}

#[test]
fn three_fifteen_tet_classes_are_unsatisfiable() {
    let v = sat_verdicts(false);
    let unsat: BTreeSet<String> = v.iter().filter(|(_, &s)| !s).map(|(id, _)| id.clone()).collect();
    assert_eq!(unsat, ids(&["15_A", "15_B", "15_J"]));
    assert_eq!(v.len() - unsat.len(), 171);
}

#[test]
fn convex_infeasible_classes() {
    let plain = sat_verdicts(false);
    let convex = sat_verdicts(true);
    let unsat: BTreeSet<String> = convex.iter().filter(|(_, &s)| !s).map(|(id, _)| id.clone()).collect();
    let expected = ids(&[
        "12_U", "12_Y", "13_T", "13_W", "14_A", "14_N", "14_O", "14_P", "14_R", "15_F", "15_H", "15_I", "15_A", "15_B",
        "15_J",
    ]);
    assert_eq!(unsat, expected);
    for (id, &sat) in &convex {
        assert!(!sat || plain[id], "{id}: convex-satisfiable but not satisfiable");
    }
}

#[test]
fn convex_clauses_extend_plain_clauses() {
    for id in ["5_A", "9_C", "12_U", "15_G"] {
        let t = catalog().get(id).unwrap().triangulation().unwrap();
        let plain: BTreeSet<Vec<i32>> = encode_constraints(&t, false).unwrap().cnf.clauses.into_iter().collect();
        let convex: BTreeSet<Vec<i32>> = encode_constraints(&t, true).unwrap().cnf.clauses.into_iter().collect();
        assert!(plain.is_subset(&convex), "{id}");
        assert!(convex.len() > plain.len(), "{id}");
    }
}

#[test]
fn unsatisfiable_instance_yields_no_chirotopes() {
    let s = encode_constraints(&catalog().get("15_A").unwrap().triangulation().unwrap(), false).unwrap();
    assert_eq!(solve_all(&s, 10, 0, None).unwrap(), vec![]);
}

#[test]
fn solver_output_satisfies_every_constraint_post_hoc() {
    for e in catalog().entries() {
        let t = e.triangulation().unwrap();
        let s = encode_constraints(&t, false).unwrap();
        for c in solve_all(&s, 3, 7, None).unwrap() {
            assert!(c.is_valid(), "{}", e.id);
            let tets = t.tets();
            let sign = c.sign_of_set(tets[0]) * s.orientation[0];
            for (k, &a) in tets.iter().enumerate() {
                assert_eq!(c.sign_of_set(a) * s.orientation[k], sign, "{}: orientation of {a}", e.id);
                for &b in &tets[k + 1..] {
                    assert!(tets_meet_properly(&c, a, b), "{}: {a} and {b}", e.id);
                }
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_and_duplicate_free() {
    let s = encode_constraints(&catalog().get("7_B").unwrap().triangulation().unwrap(), false).unwrap();
    let a = solve_all(&s, 50, 3, None).unwrap();
    let b = solve_all(&s, 50, 3, None).unwrap();
    assert_eq!(a, b);
    let distinct: BTreeSet<Chirotope> = a.iter().copied().collect();
    assert_eq!(distinct.len(), a.len());
    assert!(a.iter().all(|c| s.admits(c)));
}

#[test]
fn limit_one_gives_one_valid_chirotope() {
    let s = encode_constraints(&catalog().get("5_A").unwrap().triangulation().unwrap(), false).unwrap();
    let out = solve_all(&s, 1, 0, None).unwrap();
    assert_eq!(out.len(), 1);
    assert!(out[0].is_valid());
}

#[test]
fn tiny_conflict_budget_reports_partial_results() {
    let s = encode_constraints(&catalog().get("14_B").unwrap().triangulation().unwrap(), false).unwrap();
    if let Err(e) = solve_all(&s, 1000, 0, Some(1)) {
        assert!(e.partial.iter().all(|c| s.admits(c)));
    }
}

/// `c` relabeled by `g`, mirrored if needed to match the instance's
/// orientation.
fn transport(c: &Chirotope, g: &hextet::template::Permutation, target: &hextet::encode::SatInstance) -> Option<Chirotope> {
    let r = c.relabel(g);
    [r, r.negated()].into_iter().find(|x| target.admits(x))
}

#[test]
fn symmetries_map_admissible_chirotopes_between_relabeled_instances() {
    for id in ["5_A", "8_D", "11_C", "14_B"] {
        let t = catalog().get(id).unwrap().triangulation().unwrap();
        let s = encode_constraints(&t, false).unwrap();
        let own = solve_all(&s, 200, 0, None).unwrap();
        for g in symmetry_group() {
            let image = encode_constraints(&t.relabel(g), false).unwrap();
            for c in &own {
                assert!(transport(c, g, &image).is_some(), "{id}: {c} not transported");
            }
            for c in solve_all(&image, 20, 1, None).unwrap() {
                let back = transport(&c, &g.inverse(), &s).unwrap_or_else(|| panic!("{id}: {c} not transported back"));
                assert_eq!(transport(&back, g, &image), Some(c));
            }
        }
    }
}

#[test]
fn shipped_realizations_satisfy_their_instances() {
    for r in shipped_realizations(false) {
        let t = hextet::Triangulation::from_label_lists(&r.tets).unwrap();
        let c = r.point_set().chirotope().unwrap();
        assert!(encode_constraints(&t, false).unwrap().admits(&c), "{}", r.class_id);
    }
    for r in shipped_realizations(true) {
        let t = hextet::Triangulation::from_label_lists(&r.tets).unwrap();
        let c = r.point_set().chirotope().unwrap();
        assert!(encode_constraints(&t, true).unwrap().admits(&c), "{}", r.class_id);
    }
}

#[test]
fn perturbed_cubes_are_valid_chirotopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        assert!(perturbed_cube_chirotope(&mut rng).is_valid());
    }
}

#[test]
fn constant_positive_chirotope_is_the_moment_curve() {
    let pts: Vec<[i64; 3]> = (1..=8).map(|t: i64| [t, t * t, t * t * t]).collect();
    let c = PointSet::from_ints(&pts).chirotope().unwrap();
    assert_eq!(c.to_sign_string(), "+".repeat(70));
    assert!(c.is_valid());
    let mut flipped = c.to_sign_string().into_bytes();
    flipped[1] = b'-';
    let f = Chirotope::parse_sign_string(std::str::from_utf8(&flipped).unwrap()).unwrap();
    assert!(!f.is_valid());
}

#[test]
fn interior_point_gives_singleton_circuit() {
    let mut pts: Vec<[i64; 3]> = vec![[0, 0, 0], [10, 0, 0], [0, 10, 0], [0, 0, 10], [2, 3, 1]];
    pts.extend([[50, 51, 53], [-37, 41, 19], [23, -61, 47]]);
    let ps = PointSet::from_ints(&pts);
    let c = ps.chirotope().unwrap();
    let five = VSet::from_labels(&[1, 2, 3, 4, 5]);
    let circuit = c.circuit(five);
    assert!(circuit.plus.len() == 1 || circuit.minus.len() == 1);
    assert!(circuit.plus == VSet::singleton(5) || circuit.minus == VSet::singleton(5));
    assert!(c.has_interior_point());
}

#[test]
fn coplanar_quadruple_is_reported() {
    let mut pts = vec![point(0, 0, 0), point(1, 0, 0), point(0, 1, 0), point(1, 1, 0)];
    pts.extend([point(0, 0, 1), point(3, 1, 2), point(1, 4, 3), point(2, 2, 7)]);
    let err = PointSet::new(pts).chirotope().unwrap_err();
    assert!(err.to_string().contains("1234"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_agrees_with_exhaustive_search(cnf in cnf_strategy(), seed in any::<u64>()) {
        let expected = brute_force_sat(&cnf);
        match Solver::from_cnf(&cnf, seed).solve(None) {
            SolveResult::Sat(model) => {
                prop_assert!(expected);
                prop_assert!(cnf.satisfied_by(&model));
            }
            SolveResult::Unsat => prop_assert!(!expected),
            SolveResult::Unknown => prop_assert!(false, "no budget was set"),
        }
    }

    #[test]
    fn dimacs_round_trip(cnf in cnf_strategy()) {
        let back = Cnf::from_dimacs(&cnf.to_dimacs()).unwrap();
        prop_assert_eq!(&back, &cnf);
        let a = matches!(Solver::from_cnf(&cnf, 1).solve(None), SolveResult::Sat(_));
        let b = matches!(Solver::from_cnf(&back, 1).solve(None), SolveResult::Sat(_));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn circuits_partition_their_five_labels(seed in any::<u64>(), pick in 0usize..56) {
        let c = perturbed_cube_chirotope(&mut ChaCha8Rng::seed_from_u64(seed));
        let five = all_labels().subsets_of_size(5).nth(pick).unwrap();
        let circuit = c.circuit(five);
        prop_assert_eq!(circuit.plus.intersection(circuit.minus), VSet::EMPTY);
        prop_assert_eq!(circuit.support(), five);
        prop_assert!(circuit.plus.contains(five.to_vec()[0]));
        prop_assert_eq!(c.negated().circuit(five), circuit);
        let (p, m) = partition(&c, five);
        prop_assert!((p, m) == (circuit.plus, circuit.minus) || (m, p) == (circuit.plus, circuit.minus));
    }

    #[test]
    fn chirotope_matches_exact_determinants(coords in prop::collection::vec(-40i64..40, 24)) {
        let pts: Vec<[i64; 3]> = coords.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let ps = PointSet::from_ints(&pts);
        if let Ok(c) = ps.chirotope() {
            for b in all_labels().subsets_of_size(4) {
                let l = b.to_vec();
                let m: Vec<[Rat; 3]> = l.iter().map(|&x| ps.points[x as usize - 1].clone()).collect();
                let d = |i: usize, k: usize| &m[i][k] - &m[0][k];
                let det = &(&(&d(1, 0) * &(&(&d(2, 1) * &d(3, 2)) - &(&d(2, 2) * &d(3, 1))))
                    - &(&d(1, 1) * &(&(&d(2, 0) * &d(3, 2)) - &(&d(2, 2) * &d(3, 0)))))
                    + &(&d(1, 2) * &(&(&d(2, 0) * &d(3, 1)) - &(&d(2, 1) * &d(3, 0))));
                prop_assert_eq!(c.sign_of_set(b), det.signum());
            }
        }
    }
}
