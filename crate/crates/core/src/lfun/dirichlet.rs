//! Finite Dirichlet series and the local ratio `D_q(s) = −1 + λ_q q^{1−s} − ξ(q) q^{1−2s}`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::is_prime;
use crate::cyclo::Scalar;

use super::LfunError;

/// `Σ c_n n^{−s}` over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial<T = Complex64> {
    terms: BTreeMap<u64, T>,
}

impl<T: Scalar> DirichletPolynomial<T> {
    pub fn new(terms: impl IntoIterator<Item = (u64, T)>) -> Result<Self, LfunError> {
        let mut map = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(LfunError::ZeroIndex);
            }
            let entry = map.entry(n).or_insert_with(|| T::from_int(0));
            *entry = entry.add(&c);
        }
        Ok(DirichletPolynomial { terms: map })
    }

    pub fn coefficient(&self, n: u64) -> Option<&T> {
        self.terms.get(&n)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &T)> + '_ {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&n, c)| c.to_complex() * (-s * (n as f64).ln()).exp())
            .sum()
    }
}

fn check_prime(q: u64) -> Result<(), LfunError> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(LfunError::NotPrime(q))
    }
}

/// `D_q` with coefficients `c_1 = −1`, `c_q = λ_q q`, `c_{q²} = −ξ(q) q`.
pub fn ratio_dq<T: Scalar>(
    lambda_q: &T,
    xi_q: &T,
    q: u64,
) -> Result<DirichletPolynomial<T>, LfunError> {
    check_prime(q)?;
    let xi_abs = xi_q.to_complex().norm();
    if xi_abs > 1e-12 && (xi_abs - 1.0).abs() > 1e-12 {
        return Err(LfunError::BadNebentypusValue(xi_abs));
    }
    let qi = q as i128;
    DirichletPolynomial::new([
        (1, T::from_int(-1)),
        (q, lambda_q.scale(qi)),
        (q * q, xi_q.scale(-qi)),
    ])
}

/// Whether `D(s) = ξ(q) q^{1−2s} conj(D(1−s̄))` holds, in the coefficient form
/// `n·c_{q²/n} = ξ(q)·q·conj(c_n)` for `n ∈ {1, q, q²}`.
///
/// Exact for cyclotomic coefficients; float coefficients are compared at relative precision
/// `1e−12`.
pub fn check_dq_fe<T: Scalar>(
    d: &DirichletPolynomial<T>,
    q: u64,
    xi_q: &T,
) -> Result<bool, LfunError> {
    check_prime(q)?;
    if let Some(n) = d.support().find(|&n| n != 1 && n != q && n != q * q) {
        return Err(LfunError::UnsupportedSupport(n));
    }
    let zero = T::from_int(0);
    let c = |n: u64| d.coefficient(n).unwrap_or(&zero);
    let scale: f64 = d.terms().map(|(_, c)| c.to_complex().norm()).sum::<f64>() * q as f64;
    Ok([1, q, q * q].iter().all(|&n| {
        let lhs = c(q * q / n).scale(n as i128);
        let rhs = xi_q.mul(&c(n).conj()).scale(q as i128);
        lhs.agrees(&rhs, scale, 1e-12)
    }))
}

/// Both sides `D(s)` and `ξ q^{1−2s} conj(D(1−s̄))` evaluated numerically.
pub fn dq_fe_sides<T: Scalar>(
    d: &DirichletPolynomial<T>,
    q: u64,
    xi_q: Complex64,
    s: Complex64,
) -> (Complex64, Complex64) {
    let lhs = d.eval(s);
    let rhs = xi_q * ((1.0 - 2.0 * s) * (q as f64).ln()).exp() * d.eval(1.0 - s.conj()).conj();
    (lhs, rhs)
}
