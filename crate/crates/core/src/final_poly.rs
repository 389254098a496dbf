//! Bi-quadratic final polynomials.
//!
//! For two labels `s` and four more `e1 < e2 < e3 < e4` the brackets satisfy
//! `[s e1 e2][s e3 e4] - [s e1 e3][s e2 e4] + [s e1 e4][s e2 e3] = 0`. When the
//! chirotope gives one of the three signed terms a sign opposite to the other
//! two, that term is strictly the largest in absolute value. In logarithms of
//! absolute brackets this yields linear inequalities `y_a + y_b > y_c + y_d`.
//! If a nonnegative combination of them sums to zero no realization exists;
//! the combination is found with exact linear programming.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chirotope::{Chirotope, NUM_BASES};
use crate::exact::Rat;
use crate::lp::{nonnegative_solution, LpOutcome};
use crate::simplex::VSet;
use crate::template;
use crate::triangulation::quad_rank;

/// `log|larger[0]| + log|larger[1]| > log|smaller[0]| + log|smaller[1]|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BracketInequality {
    pub larger: [VSet; 2],
    pub smaller: [VSet; 2],
}

impl BracketInequality {
    /// Coefficients over the 70 log variables.
    pub fn coefficients(&self) -> [i8; NUM_BASES] {
        let mut v = [0i8; NUM_BASES];
        for b in self.larger {
            v[quad_rank(b)] += 1;
        }
        for b in self.smaller {
            v[quad_rank(b)] -= 1;
        }
        v
    }
}

/// Every inequality forced by a three-term relation of `c`.
pub fn bracket_inequalities(c: &Chirotope) -> Vec<BracketInequality> {
    let all = template::all_labels();
    let mut out = Vec::new();
    for sigma in all.subsets_of_size(2) {
        for quad in all.difference(sigma).subsets_of_size(4) {
            let e = quad.to_vec();
            let b = |i: usize, j: usize| sigma.with(e[i]).with(e[j]);
            let terms = [[b(0, 1), b(2, 3)], [b(0, 2), b(1, 3)], [b(0, 3), b(1, 2)]];
            let signs = c.exchange_products(sigma, quad);
            for k in 0..3 {
                let others = [(k + 1) % 3, (k + 2) % 3];
                if others.iter().all(|&o| signs[o] == -signs[k]) {
                    for o in others {
                        out.push(BracketInequality {
                            larger: terms[k],
                            smaller: terms[o],
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub inequality: BracketInequality,
    pub multiplier: Rat,
}

/// Positive multipliers of bracket inequalities whose weighted sum vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalPolynomialCertificate {
    pub chirotope: Chirotope,
    pub terms: Vec<CertificateTerm>,
}

/// Searches for a final polynomial; `None` leaves realizability undecided.
pub fn find_final_polynomial(c: &Chirotope) -> Option<FinalPolynomialCertificate> {
    let ineqs = bracket_inequalities(c);
    if ineqs.is_empty() {
        return None;
    }
    let cols: Vec<[i8; NUM_BASES]> = ineqs.iter().map(BracketInequality::coefficients).collect();
    // Rows with no nonzero coefficient are dropped.
    let rows: Vec<usize> = (0..NUM_BASES).filter(|&r| cols.iter().any(|v| v[r] != 0)).collect();
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .map(|&r| cols.iter().map(|v| Rat::int(v[r] as i64)).collect())
        .collect();
    a.push(vec![Rat::int(1); cols.len()]);
    let mut b = vec![Rat::zero(); rows.len()];
    b.push(Rat::int(1));
    match nonnegative_solution(&a, &b) {
        LpOutcome::Infeasible(_) => None,
        LpOutcome::Feasible(x) => {
            let terms = ineqs
                .into_iter()
                .zip(x)
                .filter(|(_, m)| m.signum() > 0)
                .map(|(inequality, multiplier)| CertificateTerm { inequality, multiplier })
                .collect();
            Some(FinalPolynomialCertificate { chirotope: *c, terms })
        }
    }
}

/// Why a certificate does not check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateDefect {
    Empty,
    NonPositiveMultiplier(usize),
    /// The inequality is not implied by the chirotope.
    Unsupported(usize),
    /// The weighted sum has a nonzero coefficient on this basis.
    Residual(VSet),
}

/// Re-derives each inequality from the chirotope and checks the weighted sum
/// exactly.
pub fn verify_certificate(cert: &FinalPolynomialCertificate) -> Result<(), CertificateDefect> {
    if cert.terms.is_empty() {
        return Err(CertificateDefect::Empty);
    }
    let implied = bracket_inequalities(&cert.chirotope);
    let mut sum: BTreeMap<usize, Rat> = BTreeMap::new();
    for (i, t) in cert.terms.iter().enumerate() {
        if t.multiplier.signum() <= 0 {
            return Err(CertificateDefect::NonPositiveMultiplier(i));
        }
        if implied.binary_search(&t.inequality).is_err() {
            return Err(CertificateDefect::Unsupported(i));
        }
        for (r, &k) in t.inequality.coefficients().iter().enumerate() {
            if k != 0 {
                let e = sum.entry(r).or_insert_with(Rat::zero);
                *e = &*e + &(&t.multiplier * &Rat::int(k as i64));
            }
        }
    }
    match sum.into_iter().find(|(_, v)| !v.is_zero()) {
        Some((r, _)) => Err(CertificateDefect::Residual(crate::triangulation::quadruples()[r])),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_curve_has_no_certificate() {
        let c = Chirotope::from_bits(u128::MAX);
        assert!(!bracket_inequalities(&c).is_empty());
        assert!(find_final_polynomial(&c).is_none());
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let c = Chirotope::from_bits(u128::MAX);
        let ineq = bracket_inequalities(&c)[0];
        let cert = FinalPolynomialCertificate {
            chirotope: c,
            terms: vec![CertificateTerm {
                inequality: ineq,
                multiplier: Rat::int(1),
            }],
        };
        assert!(matches!(verify_certificate(&cert), Err(CertificateDefect::Residual(_))));
        let mut flipped = cert.clone();
        flipped.terms[0].inequality = BracketInequality {
            larger: ineq.smaller,
            smaller: ineq.larger,
        };
        assert_eq!(verify_certificate(&flipped), Err(CertificateDefect::Unsupported(0)));
    }
}
