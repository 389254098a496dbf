//! Exact feasibility of `A x = b, x >= 0` by the two-phase-I simplex method
//! over the rationals with Bland's anti-cycling rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// A nonnegative solution.
    Feasible(Vec<Rat>),
    /// Farkas witness `y` with `y^T A <= 0` and `y^T b > 0`.
    Infeasible(Vec<Rat>),
}

/// Decides whether `a x = b` has a solution with `x >= 0`. `a` is given by
/// rows.
pub fn nonnegative_solution(a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    // Rows scaled so the right-hand side is nonnegative; artificial basis.
    let mut flip = vec![false; m];
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        flip[i] = b[i].0.is_negative();
        let s = if flip[i] { -BigRational::one() } else { BigRational::one() };
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = &a[i][j].0 * &s;
        }
        row[n + i] = BigRational::one();
        row[width - 1] = &b[i].0 * &s;
        t.push(row);
    }
    // Reduced costs of the phase-I objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-I objective is bounded below by zero.
        let (r, _) = leave.expect("phase-I objective is bounded");
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    if t[m][width - 1].is_zero() {
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = Rat(t[i][width - 1].clone());
            }
        }
        LpOutcome::Feasible(x)
    } else {
        let y = (0..m)
            .map(|i| {
                let yi = BigRational::one() - &t[m][n + i];
                Rat(if flip[i] { -yi } else { yi })
            })
            .collect();
        LpOutcome::Infeasible(y)
    }
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let inv = BigRational::one() / &t[r][c];
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = t[r].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nz {
            row[j] -= &prow[j] * &f;
        }
    }
}
