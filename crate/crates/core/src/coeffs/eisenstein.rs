use crate::arith::{divisors, factor, gcd};
use crate::chargroup::DirichletCharacter;
use crate::cyclo::Cyclotomic;

use super::{CoeffError, CoefficientSequence};

/// Checks the admissibility conditions on `(ξ₁, ξ₂, k)` for an Eisenstein sequence.
fn validate(xi1: &DirichletCharacter, xi2: &DirichletCharacter, k: u32) -> Result<(), CoeffError> {
    if k == 0 {
        return Err(CoeffError::ZeroWeight);
    }
    if !xi1.is_primitive() {
        return Err(CoeffError::Xi1NotPrimitive {
            modulus: xi1.modulus(),
            conductor: xi1.conductor(),
        });
    }
    let product = xi1.parity() * xi2.parity();
    let expected = if k % 2 == 0 { 1 } else { -1 };
    if product != expected {
        return Err(CoeffError::EisensteinParity { product, expected });
    }
    if k == 1 && !xi1.is_even() {
        return Err(CoeffError::OddXi1WeightOne);
    }
    let n2 = xi2.modulus();
    let conductor = xi2.conductor();
    if k != 2 {
        if conductor != n2 {
            return Err(CoeffError::Xi2NotPrimitive {
                modulus: n2,
                conductor,
            });
        }
    } else if conductor != n2 {
        let ratio = n2 / conductor;
        if !factor(ratio).expect("ratio > 0").is_squarefree() || gcd(ratio, conductor) != 1 {
            return Err(CoeffError::WeightTwoConductor { ratio, conductor });
        }
    } else if xi1.is_trivial() && xi2.is_trivial() {
        return Err(CoeffError::WeightTwoBothTrivial);
    }
    Ok(())
}

/// Whether the products formed in relation checks stay inside `i128`.
///
/// Every product read there is bounded by `d(m)d(n)(mn)^{k−1}` with `mn ≤ X`, and the divisor
/// counts fit in the 24 bits of margin.
fn exact_fits(k: u32, x: usize) -> bool {
    (x.max(2) as f64).log2() * (k as f64 - 1.0) + 24.0 < 126.0
}

/// `f_n = Σ_{d | n} ξ₁(n/d) ξ₂(d) d^{k−1}` for `n ≤ X`, exactly in `Z[ζ_L]`.
pub fn eisenstein_exact_values(
    xi1: &DirichletCharacter,
    xi2: &DirichletCharacter,
    k: u32,
    x: usize,
) -> Vec<Cyclotomic> {
    let order = crate::arith::lcm(xi1.order(), xi2.order());
    (1..=x as u64)
        .map(|n| {
            let mut acc = vec![0i128; order as usize];
            for d in divisors(n).expect("n ≥ 1") {
                if let (Some(a), Some(b)) = (xi1.value((n / d) as i64), xi2.value(d as i64)) {
                    let j = a.mul(b).exponent_in(order) as usize;
                    acc[j] += (d as i128).pow(k - 1);
                }
            }
            acc.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .fold(Cyclotomic::zero(), |s, (j, &c)| {
                    s.add(&Cyclotomic::monomial(order, j as u64, c))
                })
        })
        .collect()
}

fn eisenstein_float_values(
    xi1: &DirichletCharacter,
    xi2: &DirichletCharacter,
    k: u32,
    x: usize,
) -> Vec<num_complex::Complex64> {
    (1..=x as u64)
        .map(|n| {
            divisors(n)
                .expect("n ≥ 1")
                .into_iter()
                .map(|d| {
                    xi1.eval((n / d) as i64) * xi2.eval(d as i64) * (d as f64).powi(k as i32 - 1)
                })
                .sum()
        })
        .collect()
}

/// Eisenstein coefficient sequence of weight `k` attached to `(ξ₁ mod N₁, ξ₂ mod N₂)`.
///
/// The level is `N₁N₂` and the nebentypus is `ξ₁ξ₂` taken mod `N₁N₂`. Values are exact
/// whenever the products needed for relation checks fit in 128-bit integers.
pub fn eisenstein_coefficients(
    xi1: &DirichletCharacter,
    xi2: &DirichletCharacter,
    k: u32,
    x: usize,
) -> Result<CoefficientSequence, CoeffError> {
    validate(xi1, xi2, k)?;
    if x == 0 {
        return Err(CoeffError::Empty);
    }
    let level = xi1.modulus() * xi2.modulus();
    let nebentypus = xi1.induce(level)?.mul(&xi2.induce(level)?)?;
    if exact_fits(k, x) {
        CoefficientSequence::from_exact(
            k,
            level,
            nebentypus,
            eisenstein_exact_values(xi1, xi2, k, x),
        )
    } else {
        let values = eisenstein_float_values(xi1, xi2, k, x);
        CoefficientSequence::new(k, level, nebentypus, values, None)
    }
}
