//! Boolean encoding of admissible chirotopes for a triangulation.
//!
//! Variable `i + 1` is the sign of the `i`-th sorted basis (true = +1).
//! Further variables are definitions `q <-> (x_a <-> x_b)`, i.e. `q` is true
//! iff the product of the two basis signs is +1. Clause families:
//!
//! * exchange: for two labels `s1 < s2` and four more `e1 < .. < e4`, the
//!   products `X(e1e2)X(e3e4)`, `-X(e1e3)X(e2e4)`, `X(e1e4)X(e2e3)` with
//!   `X(ab) = chi(s1,s2,a,b)` are not all +1 and not all -1;
//! * acyclic: for each 5-subset the values `(-1)^i chi(F - a_i)` are not all
//!   equal;
//! * tetrahedra: unit clauses fixing a coherent orientation whose global sign
//!   agrees with the unit cube (positive corner Jacobians);
//! * intersection: for two tetrahedra and a 5-subset of their union, every
//!   sign pattern whose circuit has one part in each tetrahedron is excluded;
//! * convex (optional): no circuit separates one label from four others.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::ball::BallComplex;
use crate::chirotope::{coherent_orientation, Chirotope, NUM_BASES};
use crate::error::{Error, Result};
use crate::exact::PointSet;
use crate::sat::{Cnf, SolveResult, Solver};
use crate::simplex::{sort_sign, VSet};
use crate::template;
use crate::triangulation::{quad_rank, quadruples, Triangulation};

/// A CNF whose models restricted to the first 70 variables are the admissible
/// chirotopes of a triangulation.
#[derive(Clone, Debug)]
pub struct SatInstance {
    pub cnf: Cnf,
    pub convex: bool,
    /// The tetrahedra the instance was built for.
    pub tets: Vec<VSet>,
    /// Required sign of each tetrahedron's sorted basis.
    pub orientation: Vec<i8>,
    /// Auxiliary variable → the two basis ranks it multiplies.
    pub products: Vec<(usize, usize)>,
}

/// Describes the variables of an exported instance.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Sidecar {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub convex: bool,
    pub tets: Vec<[u8; 4]>,
    /// Variable `i + 1` is basis `bases[i]`; true means sign +1.
    pub bases: Vec<[u8; 4]>,
    /// Variable `71 + k` is true iff the two listed bases have equal sign.
    pub products: Vec<[[u8; 4]; 2]>,
}

#[inline]
fn bvar(rank: usize) -> i32 {
    rank as i32 + 1
}

/// Literal asserting `sign * chi(basis) = +1`.
#[inline]
fn basis_lit(basis: VSet, sign: i8) -> i32 {
    let v = bvar(quad_rank(basis));
    if sign > 0 {
        v
    } else {
        -v
    }
}

/// Literal and sign of `chi(tuple)` with the tuple sorted: value is
/// `sign * x_basis`.
#[inline]
fn tuple_basis(tuple: [u8; 4]) -> (usize, i8) {
    (quad_rank(VSet::from_labels(&tuple)), sort_sign(&tuple))
}

struct Builder {
    num_vars: usize,
    clauses: BTreeSet<Vec<i32>>,
    products: Vec<(usize, usize)>,
    product_var: HashMap<(usize, usize), i32>,
}

impl Builder {
    fn new() -> Builder {
        Builder {
            num_vars: NUM_BASES,
            clauses: BTreeSet::new(),
            products: Vec::new(),
            product_var: HashMap::new(),
        }
    }

    fn clause(&mut self, mut c: Vec<i32>) {
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        self.clauses.insert(c);
    }

    /// Variable true iff `x_a` and `x_b` are equal.
    fn product(&mut self, a: usize, b: usize) -> i32 {
        let key = (a.min(b), a.max(b));
        if let Some(&q) = self.product_var.get(&key) {
            return q;
        }
        self.num_vars += 1;
        let q = self.num_vars as i32;
        let (x, y) = (bvar(key.0), bvar(key.1));
        self.clause(vec![-q, -x, y]);
        self.clause(vec![-q, x, -y]);
        self.clause(vec![q, x, y]);
        self.clause(vec![q, -x, -y]);
        self.product_var.insert(key, q);
        self.products.push(key);
        q
    }

    fn exchange(&mut self) {
        let all = template::all_labels();
        for sigma in all.subsets_of_size(2) {
            let s = sigma.to_vec();
            for quad in all.difference(sigma).subsets_of_size(4) {
                let e = quad.to_vec();
                let x = |a: u8, b: u8| tuple_basis([s[0], s[1], a, b]);
                let terms = [
                    (x(e[0], e[1]), x(e[2], e[3]), 1i8),
                    (x(e[0], e[2]), x(e[1], e[3]), -1),
                    (x(e[0], e[3]), x(e[1], e[2]), 1),
                ];
                // Literal asserting that each product is +1.
                let mut pos = Vec::with_capacity(3);
                for ((ra, sa), (rb, sb), c) in terms {
                    let q = self.product(ra, rb);
                    pos.push(if sa * sb * c > 0 { q } else { -q });
                }
                self.clause(pos.iter().map(|&l| -l).collect());
                self.clause(pos);
            }
        }
    }

    /// Literals asserting `lambda_i = +1` for the circuit signs of `five`.
    fn circuit_lits(five: VSet) -> [i32; 5] {
        let labels = five.to_vec();
        std::array::from_fn(|i| basis_lit(five.without(labels[i]), if i % 2 == 0 { -1 } else { 1 }))
    }

    fn acyclic(&mut self) {
        for five in template::all_labels().subsets_of_size(5) {
            let lits = Self::circuit_lits(five);
            self.clause(lits.to_vec());
            self.clause(lits.iter().map(|&l| -l).collect());
        }
    }

    /// Excludes every sign pattern on `five` whose positive part and negative
    /// part satisfy `forbidden`.
    fn forbid_patterns(&mut self, five: VSet, forbidden: impl Fn(VSet, VSet) -> bool) {
        let labels = five.to_vec();
        let lits = Self::circuit_lits(five);
        for mask in 0u32..32 {
            let mut plus = VSet::EMPTY;
            for (i, &l) in labels.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    plus = plus.with(l);
                }
            }
            let minus = five.difference(plus);
            if forbidden(plus, minus) {
                let c = (0..5).map(|i| if mask & (1 << i) != 0 { -lits[i] } else { lits[i] }).collect();
                self.clause(c);
            }
        }
    }

    fn intersection(&mut self, tets: &[VSet]) {
        for (i, &a) in tets.iter().enumerate() {
            for &b in &tets[i + 1..] {
                for five in a.union(b).subsets_of_size(5) {
                    self.forbid_patterns(five, |p, n| {
                        (p.is_subset(a) && n.is_subset(b)) || (p.is_subset(b) && n.is_subset(a))
                    });
                }
            }
        }
    }

    fn convex(&mut self) {
        for five in template::all_labels().subsets_of_size(5) {
            self.forbid_patterns(five, |p, n| p.len() == 1 || n.len() == 1);
        }
    }
}

/// Builds the instance for `t`; with `convex` no label may lie inside the
/// tetrahedron of four others.
pub fn encode_constraints(t: &Triangulation, convex: bool) -> Result<SatInstance> {
    let tets = t.tets().to_vec();
    let orientation = reference_orientation(&tets)
        .ok_or_else(|| Error::Graph("triangulation is not coherently orientable".into()))?;
    let mut b = Builder::new();
    b.exchange();
    b.acyclic();
    for (&tet, &o) in tets.iter().zip(&orientation) {
        b.clause(vec![basis_lit(tet, o)]);
    }
    b.intersection(&tets);
    if convex {
        b.convex();
    }
    Ok(SatInstance {
        cnf: Cnf {
            num_vars: b.num_vars,
            clauses: b.clauses.into_iter().collect(),
        },
        convex,
        tets,
        orientation,
        products: b.products,
    })
}

/// Coherent orientation with the global sign of the unit cube: the apex of
/// the tetrahedron on a surface triangle lies on the cube's side of the facet.
pub fn reference_orientation(tets: &[VSet]) -> Option<Vec<i8>> {
    let mut o = coherent_orientation(tets)?;
    let f = *BallComplex::new(tets.to_vec()).boundary_triangles().first()?;
    let facet = template::facet_set(template::facet_containing(f)?);
    let (i, t) = tets.iter().enumerate().find(|(_, t)| f.is_subset(**t))?;
    let l = f.to_vec();
    let apex = t.difference(f).to_vec()[0];
    let off = template::all_labels().difference(facet).labels().next()?;
    let cube = PointSet::from_ints(&template::UNIT_CUBE);
    let inside = cube.det([l[0], l[1], l[2], off]).signum();
    if sort_sign(&[l[0], l[1], l[2], apex]) * o[i] != inside {
        o.iter_mut().for_each(|x| *x = -*x);
    }
    Some(o)
}

impl SatInstance {
    /// Adds clauses putting all labels off a surface triangle on one side of
    /// it, so that the tetrahedra fill the convex hull.
    pub fn require_shell(&mut self) {
        for f in BallComplex::new(self.tets.clone()).boundary_triangles() {
            let l = f.to_vec();
            let side = |x: u8| {
                let (r, s) = tuple_basis([l[0], l[1], l[2], x]);
                if s > 0 {
                    bvar(r)
                } else {
                    -bvar(r)
                }
            };
            let others: Vec<i32> = template::all_labels().difference(f).labels().map(side).collect();
            for w in others.windows(2) {
                self.cnf.clauses.push(vec![-w[0], w[1]]);
                self.cnf.clauses.push(vec![w[0], -w[1]]);
            }
        }
    }

    pub fn sidecar(&self) -> Sidecar {
        let arr = |s: VSet| -> [u8; 4] {
            let v = s.to_vec();
            [v[0], v[1], v[2], v[3]]
        };
        let q = quadruples();
        Sidecar {
            num_vars: self.cnf.num_vars,
            num_clauses: self.cnf.clauses.len(),
            convex: self.convex,
            tets: self.tets.iter().map(|&t| arr(t)).collect(),
            bases: q.iter().map(|&b| arr(b)).collect(),
            products: self.products.iter().map(|&(a, b)| [arr(q[a]), arr(q[b])]).collect(),
        }
    }

    /// The chirotope read off the basis variables of a model.
    pub fn chirotope_of_model(model: &[bool]) -> Chirotope {
        let mut bits = 0u128;
        for (i, &m) in model.iter().take(NUM_BASES).enumerate() {
            if m {
                bits |= 1 << i;
            }
        }
        Chirotope::from_bits(bits)
    }

    /// True iff `c` satisfies the instance (auxiliary variables are derived).
    pub fn admits(&self, c: &Chirotope) -> bool {
        let mut model: Vec<bool> = (0..NUM_BASES).map(|i| c.basis_sign(i) > 0).collect();
        model.extend(self.products.iter().map(|&(a, b)| c.basis_sign(a) == c.basis_sign(b)));
        self.cnf.satisfied_by(&model)
    }

    /// True iff the instance has a solution.
    pub fn is_satisfiable(&self, seed: u64) -> bool {
        matches!(Solver::from_cnf(&self.cnf, seed).solve(None), SolveResult::Sat(_))
    }
}

/// The conflict budget of `solve_all` ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceLimit {
    pub partial: Vec<Chirotope>,
    pub conflicts: u64,
}

/// Incremental enumeration of admissible chirotopes: each solution is
/// blocked before the next solve.
pub struct ChirotopeSolver {
    solver: Solver,
    products: Vec<(usize, usize)>,
    exhausted: bool,
}

impl ChirotopeSolver {
    pub fn new(s: &SatInstance, seed: u64) -> ChirotopeSolver {
        ChirotopeSolver {
            solver: Solver::from_cnf(&s.cnf, seed),
            products: s.products.clone(),
            exhausted: false,
        }
    }

    /// Steers the next solve towards `c` by setting decision phases.
    pub fn set_hint(&mut self, c: &Chirotope) {
        for i in 0..NUM_BASES {
            self.solver.set_phase(i + 1, c.basis_sign(i) > 0);
        }
        for (k, &(a, b)) in self.products.iter().enumerate() {
            self.solver.set_phase(NUM_BASES + 1 + k, c.basis_sign(a) == c.basis_sign(b));
        }
    }

    pub fn conflicts(&self) -> u64 {
        self.solver.stats().conflicts
    }

    /// The next unseen chirotope, `Ok(None)` once all have been produced, or
    /// `Err(())` when `conflict_limit` runs out.
    #[allow(clippy::result_unit_err)]
    pub fn next(&mut self, conflict_limit: Option<u64>) -> std::result::Result<Option<Chirotope>, ()> {
        if self.exhausted {
            return Ok(None);
        }
        match self.solver.solve(conflict_limit) {
            SolveResult::Sat(model) => {
                let c = SatInstance::chirotope_of_model(&model);
                let block: Vec<i32> = (0..NUM_BASES)
                    .map(|i| if model[i] { -bvar(i) } else { bvar(i) })
                    .collect();
                if !self.solver.add_clause(&block) {
                    self.exhausted = true;
                }
                Ok(Some(c))
            }
            SolveResult::Unsat => {
                self.exhausted = true;
                Ok(None)
            }
            SolveResult::Unknown => Err(()),
        }
    }
}

/// Enumerates up to `limit` admissible chirotopes by solving and blocking
/// each solution's basis assignment. `conflict_budget` bounds the total work;
/// when exceeded the chirotopes found so far are returned in the error.
pub fn solve_all(
    s: &SatInstance,
    limit: usize,
    seed: u64,
    conflict_budget: Option<u64>,
) -> std::result::Result<Vec<Chirotope>, ResourceLimit> {
    let mut solver = ChirotopeSolver::new(s, seed);
    let mut out = Vec::new();
    while out.len() < limit {
        let remaining = conflict_budget.map(|b| b.saturating_sub(solver.conflicts()));
        match solver.next(remaining) {
            Ok(Some(c)) => out.push(c),
            Ok(None) => break,
            Err(()) => {
                return Err(ResourceLimit {
                    partial: out,
                    conflicts: solver.conflicts(),
                })
            }
        }
    }
    Ok(out)
}
