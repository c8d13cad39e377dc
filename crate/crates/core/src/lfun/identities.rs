//! Coefficientwise identities between Dirichlet series.

use num_complex::Complex64;

use crate::arith::{is_prime, lcm};
use crate::chargroup::{ramanujan_sum, DirichletCharacter};
use crate::coeffs::{eisenstein_coefficients, CoefficientSequence};
use crate::cyclo::{Cyclotomic, Scalar};
use crate::report::Report;

use super::LfunError;

#[derive(Debug, Clone)]
pub struct RamanujanTwistReport {
    pub q: u64,
    pub checked: usize,
    pub exact: bool,
    /// Every `n` at which the identity failed.
    pub violations: Vec<usize>,
}

impl RamanujanTwistReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("q", self.q)
            .text("checked", self.checked)
            .text("exact", self.exact)
            .text("violations", self.violations.len());
        if let Some(n) = self.violations.first() {
            r.text("first_violation", n)
                .text("reason", "ramanujan_identity");
        }
        r.check("identity", self.passed());
        r
    }
}

fn ramanujan_violations<V: Scalar>(
    values: &[V],
    q: usize,
    xi_q: crate::cyclo::RootOfUnity,
    k: u32,
    tol: f64,
) -> Vec<usize> {
    let a = |n: usize| &values[n - 1];
    let mut out = Vec::new();
    for n in 1..=values.len() {
        let cq = ramanujan_sum(q as u64, n as i64) as i128;
        let lhs = a(n).scale(cq);
        let mut rhs = a(n).scale(-1);
        let mut scale = a(n).to_complex().norm() * (q as f64);
        if n % q == 0 {
            let t = a(q).mul(a(n / q)).scale(q as i128);
            scale += t.to_complex().norm();
            rhs = rhs.add(&t);
        }
        if n % (q * q) == 0 {
            let t = (0..k)
                .fold(a(n / (q * q)).clone(), |v, _| v.scale(q as i128))
                .rotate(xi_q);
            scale += t.to_complex().norm();
            rhs = rhs.sub(&t);
        }
        if !lhs.agrees(&rhs, scale, tol) {
            out.push(n);
        }
    }
    out
}

/// Checks `L_{c_q} = D_q · L` coefficientwise for `n ≤ X`.
///
/// In the normalization `a_n = λ_n n^{(k−1)/2}` the identity
/// `λ_n c_q(n) = −λ_n + q λ_q λ_{n/q} − q ξ(q) λ_{n/q²}` becomes
/// `a_n c_q(n) = −a_n + q a_q a_{n/q} − ξ(q) q^k a_{n/q²}`, which is checked exactly when the
/// sequence carries exact values.
pub fn verify_ramanujan_twist(
    seq: &CoefficientSequence,
    q: u64,
    x: usize,
) -> Result<RamanujanTwistReport, LfunError> {
    if !is_prime(q) {
        return Err(LfunError::NotPrime(q));
    }
    if seq.level() % q == 0 {
        return Err(LfunError::DividesLevel {
            q,
            level: seq.level(),
        });
    }
    if x > seq.len() || (q as usize) > x {
        return Err(LfunError::InsufficientCoefficients {
            required: x.max(q as usize),
            available: seq.len(),
        });
    }
    let xi_q = seq
        .nebentypus()
        .value(q as i64)
        .expect("q is coprime to the level");
    let k = seq.weight();
    let truncated = seq.truncated(x);
    // q a_q a_{n/q} and q^k a_{n/q²} are the largest integers formed
    let m = truncated.prefix_max_abs();
    let lq = (q as f64).log2();
    let qu = q as usize;
    let product = truncated.a(qu).norm() * m[x / qu];
    let bits = (lq + product.max(1.0).log2())
        .max(k as f64 * lq + m[x / (qu * qu)].max(1.0).log2())
        .max(lq + m[x].max(1.0).log2());
    let exact = truncated.exact_values_within(bits + 2.0);
    let violations = match exact {
        Some(exact) => ramanujan_violations(exact, q as usize, xi_q, k, 0.0),
        None => ramanujan_violations(truncated.values(), q as usize, xi_q, k, 1e-10),
    };
    Ok(RamanujanTwistReport {
        q,
        checked: x,
        exact: exact.is_some(),
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub checked: usize,
    pub exact: bool,
    pub mismatches: Vec<usize>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("checked", self.checked)
            .text("exact", self.exact)
            .text("mismatches", self.mismatches.len());
        if let Some(n) = self.mismatches.first() {
            r.text("first_mismatch", n).text("reason", "factorization");
        }
        r.check("factorization", self.passed());
        r
    }
}

/// Multiplies the Dirichlet series of `L(s + (k−1)/2, ξ₁)` and `L(s − (k−1)/2, ξ₂)` term by
/// term and compares with `Σ f_n n^{−s−(k−1)/2}` for `n ≤ X`.
///
/// Both sides are scaled by `n^{(k−1)/2}`, which makes every coefficient an element of
/// `Z[ζ_L]`: the product term `ξ₁(m) m^{−(k−1)/2} · ξ₂(d) d^{(k−1)/2}` becomes
/// `ξ₁(m) ξ₂(d) d^{k−1}`.
pub fn eisenstein_l_factorization(
    xi1: &DirichletCharacter,
    xi2: &DirichletCharacter,
    k: u32,
    x: usize,
) -> Result<FactorizationReport, LfunError> {
    let seq = eisenstein_coefficients(xi1, xi2, k, x)?;
    let Some(exact) = seq.exact_values() else {
        // the builder only drops to floats when the divisor sums leave i128
        let mut acc = vec![Complex64::new(0.0, 0.0); x + 1];
        for m in 1..=x {
            for d in 1..=x / m {
                acc[m * d] +=
                    xi1.eval(m as i64) * xi2.eval(d as i64) * (d as f64).powi(k as i32 - 1);
            }
        }
        let mismatches = (1..=x)
            .filter(|&n| (acc[n] - seq.a(n)).norm() > 1e-12 * seq.a(n).norm().max(1.0))
            .collect();
        return Ok(FactorizationReport {
            checked: x,
            exact: false,
            mismatches,
        });
    };
    let order = lcm(xi1.order(), xi2.order());
    let mut acc = vec![vec![0i128; order as usize]; x + 1];
    for m in 1..=x {
        let Some(r1) = xi1.value(m as i64) else {
            continue;
        };
        for d in 1..=x / m {
            if let Some(r2) = xi2.value(d as i64) {
                acc[m * d][r1.mul(r2).exponent_in(order) as usize] += (d as i128).pow(k - 1);
            }
        }
    }
    let product: Vec<Cyclotomic> = acc[1..]
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .fold(Cyclotomic::zero(), |s, (j, &c)| {
                    s.add(&Cyclotomic::monomial(order, j as u64, c))
                })
        })
        .collect();
    let mismatches = (1..=x)
        .filter(|&n| product[n - 1] != exact[n - 1])
        .collect();
    Ok(FactorizationReport {
        checked: x,
        exact: true,
        mismatches,
    })
}
