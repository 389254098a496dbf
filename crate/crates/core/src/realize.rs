//! Coordinate realizations of chirotopes.
//!
//! Points 1, 2, 3 and 5 are pinned to an affine frame; the remaining twelve
//! coordinates minimise `sum_b max(0, h - chi(b) det(b))^2` by Adam descent
//! from random starts until every `chi(b) det(b)` reaches `EPSILON`. The hinge
//! target `h >= EPSILON` varies between restarts. A numeric solution is rounded to nearby rationals with
//! continued fractions and accepted only if its exact determinant signs
//! reproduce the target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;
use crate::chirotope::{coherent_orientation, Chirotope, NUM_BASES};
use crate::encode::{encode_constraints, ChirotopeSolver, SatInstance};
use crate::error::{Error, Result};
use crate::exact::{intersect_properly, Point, PointSet, Rat};
use crate::final_poly::{find_final_polynomial, verify_certificate, FinalPolynomialCertificate};
use crate::simplex::VSet;
use crate::triangulation::{quadruples, Triangulation};

pub const EPSILON: f64 = 1e-4;
pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_ITERATIONS: usize = 10_000;
pub const DENOMINATOR_CAP: u64 = 1_000_000;
/// Hinge targets of the penalty, cycled over restarts. Success is always
/// judged against `EPSILON`.
pub const HINGE_TARGETS: [f64; 4] = [5e-2, 1e-2, 1e-3, EPSILON];

/// Labels whose positions are fixed by the gauge.
const PINNED: [usize; 4] = [0, 1, 2, 4];
const FREE: [usize; 4] = [3, 5, 6, 7];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            restarts: DEFAULT_RESTARTS,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }
}

/// Exact coordinates for a triangulation, with the target chirotope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Realization {
    pub class_id: String,
    pub convex: bool,
    pub tets: Vec<[u8; 4]>,
    pub chirotope: Chirotope,
    pub points: Vec<Point>,
}

/// Bases in lexicographic order as label quadruples.
fn basis_labels() -> Vec<[usize; 4]> {
    quadruples()
        .iter()
        .map(|b| {
            let l = b.to_vec();
            [l[0] as usize - 1, l[1] as usize - 1, l[2] as usize - 1, l[3] as usize - 1]
        })
        .collect()
}

type P3 = [f64; 3];

fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Problem {
    bases: Vec<[usize; 4]>,
    signs: Vec<f64>,
    frame: [P3; 4],
    margin: f64,
}

impl Problem {
    fn new(c: &Chirotope) -> Problem {
        let s = c.eval([1, 2, 3, 5]) as f64;
        Problem {
            bases: basis_labels(),
            signs: (0..NUM_BASES).map(|i| c.basis_sign(i) as f64).collect(),
            frame: [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, s]],
            margin: EPSILON,
        }
    }

    fn points(&self, x: &[f64; 12]) -> [P3; 8] {
        let mut p = [[0.0; 3]; 8];
        for (k, &i) in PINNED.iter().enumerate() {
            p[i] = self.frame[k];
        }
        for (k, &i) in FREE.iter().enumerate() {
            p[i] = [x[3 * k], x[3 * k + 1], x[3 * k + 2]];
        }
        p
    }

    /// Penalty, gradient and smallest signed determinant.
    fn eval(&self, x: &[f64; 12], grad: &mut [f64; 12]) -> (f64, f64) {
        let p = self.points(x);
        let mut g = [[0.0; 3]; 8];
        let mut loss = 0.0;
        let mut worst = f64::INFINITY;
        for (b, &s) in self.bases.iter().zip(&self.signs) {
            let [a, bb, c, d] = *b;
            let (u, v, w) = (sub3(p[bb], p[a]), sub3(p[c], p[a]), sub3(p[d], p[a]));
            let det = dot(u, cross(v, w));
            let m = s * det;
            worst = worst.min(m);
            let gap = self.margin - m;
            if gap > 0.0 {
                loss += gap * gap;
                // d(loss)/d(det) = -2 gap s
                let k = -2.0 * gap * s;
                let gb = cross(v, w);
                let gc = cross(w, u);
                let gd = cross(u, v);
                for i in 0..3 {
                    g[bb][i] += k * gb[i];
                    g[c][i] += k * gc[i];
                    g[d][i] += k * gd[i];
                    g[a][i] -= k * (gb[i] + gc[i] + gd[i]);
                }
            }
        }
        for (k, &i) in FREE.iter().enumerate() {
            grad[3 * k..3 * k + 3].copy_from_slice(&g[i]);
        }
        (loss, worst)
    }

    /// Adam descent from `x`; returns true once every signed determinant
    /// reaches `EPSILON`.
    fn descend(&self, x: &mut [f64; 12], iterations: usize) -> bool {
        let (b1, b2, lr) = (0.9, 0.999, 0.02);
        let mut m = [0.0; 12];
        let mut v = [0.0; 12];
        let mut g = [0.0; 12];
        for t in 1..=iterations {
            let (_, worst) = self.eval(x, &mut g);
            if worst >= EPSILON {
                return true;
            }
            let c1 = 1.0 - f64::powi(b1, t as i32);
            let c2 = 1.0 - f64::powi(b2, t as i32);
            for i in 0..12 {
                m[i] = b1 * m[i] + (1.0 - b1) * g[i];
                v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
                x[i] -= lr * (m[i] / c1) / ((v[i] / c2).sqrt() + 1e-12);
            }
        }
        self.eval(x, &mut g).1 >= EPSILON
    }

    fn exact(&self, x: &[f64; 12], cap: u64) -> Option<PointSet> {
        let p = self.points(x);
        let pts = p
            .iter()
            .map(|q| {
                let r = |v: f64| rationalize(v, cap);
                Some([r(q[0])?, r(q[1])?, r(q[2])?])
            })
            .collect::<Option<Vec<Point>>>()?;
        Some(PointSet::new(pts))
    }
}

/// Closest continued-fraction convergent of `x` with denominator at most
/// `cap`.
pub fn rationalize(x: f64, cap: u64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > cap as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(Rat(num_rational::BigRational::new(h1.into(), k1.into())))
}

/// Searches for exact coordinates whose chirotope is `c`.
pub fn realize(c: &Chirotope, budget: &Budget) -> Result<PointSet> {
    let mut problem = Problem::new(c);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let z = problem.frame[3][2];
    for attempt in 0..budget.restarts {
        problem.margin = HINGE_TARGETS[(attempt / 2) % HINGE_TARGETS.len()];
        let mut x = [0.0; 12];
        if attempt % 2 == 0 {
            // Near the reference cube, mirrored to match the frame.
            let noise = rng.gen_range(0.05..0.6);
            for (k, &i) in FREE.iter().enumerate() {
                let c = crate::template::UNIT_CUBE[i];
                let base = [c[0] as f64, c[1] as f64, c[2] as f64 * z];
                for d in 0..3 {
                    x[3 * k + d] = base[d] + rng.gen_range(-noise..noise);
                }
            }
        } else {
            for v in &mut x {
                *v = rng.gen_range(-2.0..2.0);
            }
        }
        if !problem.descend(&mut x, budget.iterations) {
            continue;
        }
        let mut cap = DENOMINATOR_CAP;
        while cap <= DENOMINATOR_CAP << 20 {
            if let Some(ps) = problem.exact(&x, cap) {
                if ps.chirotope().ok().as_ref() == Some(c) {
                    return Ok(ps);
                }
            }
            cap *= 2;
        }
    }
    Err(Error::BudgetExhausted {
        attempts: budget.restarts,
    })
}

/// The first reason a realization fails exact verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum VerifyFailure {
    PointCount(usize),
    InvalidTets,
    /// The basis is coplanar.
    Degenerate(VSet),
    /// The basis sign differs from the target chirotope.
    SignMismatch(VSet),
    /// Tetrahedra sharing this tetrahedron's triangle lie on one side.
    Orientation(VSet),
    Intersection(VSet, VSet),
    /// A label lies inside the hull of the others.
    NotConvex(u8),
}

/// Exact verification: chirotope match, coherent orientation, proper pairwise
/// intersection via exact circuits and, for convex realizations, every point
/// being a hull vertex.
pub fn verify_realization(r: &Realization) -> std::result::Result<(), VerifyFailure> {
    if r.points.len() != 8 {
        return Err(VerifyFailure::PointCount(r.points.len()));
    }
    let ps = PointSet::new(r.points.clone());
    for (i, &b) in quadruples().iter().enumerate() {
        let s = ps.det_of_set(b).signum();
        if s == 0 {
            return Err(VerifyFailure::Degenerate(b));
        }
        if s != r.chirotope.basis_sign(i) {
            return Err(VerifyFailure::SignMismatch(b));
        }
    }
    let tets: Vec<VSet> = r.tets.iter().map(|t| VSet::from_labels(t)).collect();
    if tets.iter().any(|t| t.len() != 4) {
        return Err(VerifyFailure::InvalidTets);
    }
    let orient = coherent_orientation(&tets).ok_or(VerifyFailure::InvalidTets)?;
    let global = ps.det_of_set(tets[0]).signum() * orient[0];
    for (t, o) in tets.iter().zip(&orient) {
        if ps.det_of_set(*t).signum() * o != global {
            return Err(VerifyFailure::Orientation(*t));
        }
    }
    let circuits = ps.circuits();
    for (i, &a) in tets.iter().enumerate() {
        for &b in &tets[i + 1..] {
            if !intersect_properly(&circuits, a, b) {
                return Err(VerifyFailure::Intersection(a, b));
            }
        }
    }
    if r.convex {
        for c in &circuits {
            for part in [c.plus, c.minus] {
                if part.len() == 1 {
                    return Err(VerifyFailure::NotConvex(part.labels().next().expect("singleton")));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumeReport {
    pub tet_sum: Rat,
    pub hull: Rat,
    /// Volume enclosed by the oriented surface triangles.
    pub enclosed: Rat,
}

impl VolumeReport {
    pub fn fills_hull(&self) -> bool {
        self.tet_sum == self.hull
    }
}

/// Exact volumes: the sum over tetrahedra, the convex hull from the hull
/// facets of the chirotope, and the region bounded by the surface.
pub fn volumes(r: &Realization) -> Result<VolumeReport> {
    let ps = PointSet::new(r.points.clone());
    let c = ps.chirotope()?;
    let tets: Vec<VSet> = r.tets.iter().map(|t| VSet::from_labels(t)).collect();
    let tet_sum = tets.iter().fold(Rat::zero(), |acc, &t| &acc + &ps.tet_volume(t));
    let hull = ps.hull_volume(&c);
    // Each surface triangle, oriented away from its tetrahedron, contributes a
    // signed cone over the origin.
    let mut six = Rat::zero();
    for &t in &tets {
        for f in t.subsets_of_size(3) {
            if tets.iter().filter(|&&u| f.is_subset(u)).count() != 1 {
                continue;
            }
            let l = f.to_vec();
            let apex = t.difference(f).to_vec()[0];
            let origin = [Rat::zero(), Rat::zero(), Rat::zero()];
            let pf = |x: u8| ps.points[x as usize - 1].clone();
            let cone = crate::exact::orientation(&pf(l[0]), &pf(l[1]), &pf(l[2]), &origin);
            let inward = ps.det([l[0], l[1], l[2], apex]).signum();
            // Outward orientation has the apex on the negative side.
            six = if inward > 0 { &six + &cone } else { &six - &cone };
        }
    }
    let enclosed = &six / &Rat::int(6);
    Ok(VolumeReport { tet_sum, hull, enclosed })
}

/// Exact Jacobian determinants of the trilinear map from the reference cube
/// at its eight corners.
pub fn corner_jacobians(points: &[Point]) -> [Rat; 8] {
    std::array::from_fn(|i| {
        let v = i as u8 + 1;
        let n: [u8; 3] = std::array::from_fn(|k| crate::template::axis_neighbor(v, k));
        let p = |l: u8| &points[l as usize - 1];
        let d = crate::exact::orientation(p(v), p(n[0]), p(n[1]), p(n[2]));
        // Each axis traversed backwards flips the sign.
        let flips = crate::template::UNIT_CUBE[i].iter().sum::<i64>();
        if flips % 2 == 0 {
            d
        } else {
            &Rat::zero() - &d
        }
    })
}

impl Realization {
    pub fn point_set(&self) -> PointSet {
        PointSet::new(self.points.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Realization> {
        Ok(serde_json::from_str(s)?)
    }

    /// ASCII MEDIT mesh with positively oriented tetrahedra.
    pub fn to_medit(&self) -> String {
        let ps = self.point_set();
        let mut s = String::from("MeshVersionFormatted 1\n\nDimension 3\n\nVertices\n8\n");
        for p in &self.points {
            s.push_str(&format!("{} {} {} 0\n", p[0].to_f64(), p[1].to_f64(), p[2].to_f64()));
        }
        s.push_str(&format!("\nTetrahedra\n{}\n", self.tets.len()));
        for t in &self.tets {
            let mut t = *t;
            if ps.det(t).signum() < 0 {
                t.swap(2, 3);
            }
            s.push_str(&format!("{} {} {} {} 0\n", t[0], t[1], t[2], t[3]));
        }
        s.push_str("\nEnd\n");
        s
    }
}

/// Outcome of realizing one catalog class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "camelCase")]
pub enum Verdict {
    #[serde(rename_all = "camelCase")]
    Realized {
        realization: Realization,
        chirotopes_tried: usize,
    },
    /// No admissible chirotope exists.
    SatInfeasible,
    /// Every admissible chirotope has a final polynomial.
    Certificate { certificates: Vec<FinalPolynomialCertificate> },
    /// Budget exhausted without a realization or a complete set of
    /// certificates.
    #[serde(rename_all = "camelCase")]
    Undecided {
        chirotopes_tried: usize,
        certificates: usize,
        complete: bool,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Realized { .. } => "realized",
            Verdict::SatInfeasible => "sat-infeasible",
            Verdict::Certificate { .. } => "certificate",
            Verdict::Undecided { .. } => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealizeOptions {
    pub convex: bool,
    /// First look for a realization whose tetrahedra fill the convex hull.
    pub prefer_shell: bool,
    pub budget: Budget,
    /// Chirotopes attempted numerically.
    pub chirotope_limit: usize,
    /// Chirotopes examined for final polynomials when none was realized.
    pub certificate_limit: usize,
}

impl Default for RealizeOptions {
    fn default() -> RealizeOptions {
        RealizeOptions {
            convex: false,
            prefer_shell: false,
            budget: Budget::default(),
            chirotope_limit: 8,
            certificate_limit: 64,
        }
    }
}

/// Admissible chirotopes in solver order, and whether the list is exhaustive.
fn admissible(instance: &SatInstance, limit: usize, seed: u64) -> (Vec<Chirotope>, bool) {
    let mut solver = ChirotopeSolver::new(instance, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chirotopes = Vec::new();
    while chirotopes.len() < limit {
        solver.set_hint(&perturbed_cube_chirotope(&mut rng));
        match solver.next(None) {
            Ok(Some(c)) => chirotopes.push(c),
            _ => return (chirotopes, true),
        }
    }
    (chirotopes, false)
}

fn first_realization(entry: &CatalogEntry, chirotopes: &[Chirotope], opts: &RealizeOptions) -> Option<Verdict> {
    for (k, c) in chirotopes.iter().take(opts.chirotope_limit).enumerate() {
        let budget = Budget {
            seed: opts.budget.seed.wrapping_add(k as u64),
            ..opts.budget
        };
        let Ok(ps) = realize(c, &budget) else {
            continue;
        };
        let r = Realization {
            class_id: entry.id.clone(),
            convex: opts.convex,
            tets: entry.tets.clone(),
            chirotope: *c,
            points: ps.points,
        };
        if verify_realization(&r).is_ok() {
            return Some(Verdict::Realized {
                realization: r,
                chirotopes_tried: k + 1,
            });
        }
    }
    None
}

/// Runs the feasibility pipeline for one class: SAT, numeric realization of
/// admissible chirotopes, then final polynomials.
pub fn realize_class(entry: &CatalogEntry, opts: &RealizeOptions) -> Result<Verdict> {
    let t = entry.triangulation()?;
    let instance = encode_constraints(&t, opts.convex)?;
    if opts.prefer_shell {
        let mut shell = instance.clone();
        shell.require_shell();
        let (chirotopes, _) = admissible(&shell, opts.chirotope_limit, opts.budget.seed);
        if let Some(v) = first_realization(entry, &chirotopes, opts) {
            return Ok(v);
        }
    }
    let limit = opts.chirotope_limit.max(opts.certificate_limit).max(1);
    let (chirotopes, complete) = admissible(&instance, limit, opts.budget.seed);
    if chirotopes.is_empty() {
        return Ok(Verdict::SatInfeasible);
    }
    if let Some(v) = first_realization(entry, &chirotopes, opts) {
        return Ok(v);
    }
    let mut certificates = Vec::new();
    for c in chirotopes.iter().take(opts.certificate_limit) {
        match find_final_polynomial(c).filter(|cert| verify_certificate(cert).is_ok()) {
            Some(cert) => certificates.push(cert),
            None => break,
        }
    }
    if complete && certificates.len() == chirotopes.len() {
        Ok(Verdict::Certificate { certificates })
    } else {
        Ok(Verdict::Undecided {
            chirotopes_tried: chirotopes.len().min(opts.chirotope_limit),
            certificates: certificates.len(),
            complete,
        })
    }
}

/// The members of `candidates` that triangulate `points` geometrically: no
/// flat tetrahedron and every pair intersecting properly. Works for
/// degenerate configurations such as the unit cube.
pub fn compatible_triangulations<'a>(points: &PointSet, candidates: &'a [Triangulation]) -> Vec<&'a Triangulation> {
    let circuits = points.circuits();
    candidates
        .iter()
        .filter(|t| {
            let tets = t.tets();
            tets.iter().all(|&s| !points.det_of_set(s).is_zero())
                && tets
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| tets[i + 1..].iter().all(|&b| intersect_properly(&circuits, a, b)))
        })
        .collect()
}

/// Chirotope of the unit cube with every coordinate randomly perturbed.
pub fn perturbed_cube_chirotope(rng: &mut impl Rng) -> Chirotope {
    loop {
        let pts: Vec<[i64; 3]> = crate::template::UNIT_CUBE
            .iter()
            .map(|c| c.map(|x| 1000 * x + rng.gen_range(-150..=150)))
            .collect();
        if let Ok(c) = PointSet::from_ints(&pts).chirotope() {
            return c;
        }
    }
}

/// Convex-position variant of [`realize_class`].
pub fn realize_convex(entry: &CatalogEntry, budget: &Budget) -> Result<Verdict> {
    realize_class(
        entry,
        &RealizeOptions {
            convex: true,
            budget: *budget,
            ..RealizeOptions::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(rationalize(0.5, 10), Some(Rat::new(1, 2)));
        assert_eq!(rationalize(-1.25, 10), Some(Rat::new(-5, 4)));
        assert_eq!(rationalize(std::f64::consts::PI, 1000), Some(Rat::new(355, 113)));
        assert_eq!(rationalize(f64::NAN, 10), None);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let c = Chirotope::from_bits(0x2a_5a5a_5a5a_5a5a_5a5a);
        let p = Problem::new(&c);
        let x: [f64; 12] = std::array::from_fn(|i| ((i * 37 % 11) as f64 - 5.0) * 0.013);
        let mut g = [0.0; 12];
        p.eval(&x, &mut g);
        let h = 1e-7;
        for i in 0..12 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let mut dummy = [0.0; 12];
            let fd = (p.eval(&xp, &mut dummy).0 - p.eval(&xm, &mut dummy).0) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * (1.0 + fd.abs()), "{i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn moment_curve_is_realized() {
        let c = Chirotope::from_bits(u128::MAX);
        let ps = realize(&c, &Budget::default()).unwrap();
        assert_eq!(ps.chirotope().unwrap(), c);
    }
}
