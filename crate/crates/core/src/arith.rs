//! Exact integer arithmetic: factorization, divisors, totients, inverses, CRT.
//!
//! All inputs are desk-scale (below ~10^7), so trial division is used throughout.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("argument must be positive")]
    Zero,
    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: i64, n: u64 },
    #[error("moduli {m1} and {m2} are not coprime")]
    NonCoprimeModuli { m1: u64, m2: u64 },
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn divisor_count(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

pub fn factor(n: u64) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(Factorization(out))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    let f = factor(n)?;
    let mut out = vec![1u64];
    for &(p, e) in f.pairs() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn euler_phi(n: u64) -> Result<u64, ArithError> {
    let f = factor(n)?;
    Ok(f.pairs()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

pub fn mobius(n: u64) -> Result<i8, ArithError> {
    let f = factor(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.pairs().len() % 2 == 0 { 1 } else { -1 })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Reduces `a` into `[0, n)`.
pub fn modulo(a: i64, n: u64) -> u64 {
    (a as i128).rem_euclid(n as i128) as u64
}

/// The inverse of `a` modulo `n`, normalized to `[0, n)`.
pub fn mod_inverse(a: i64, n: u64) -> Result<u64, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    if n == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (n as i128, modulo(a, n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(ArithError::NotInvertible { a, n });
    }
    Ok(t0.rem_euclid(n as i128) as u64)
}

pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let n128 = n as u128;
    let mut b = (base % n) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % n128;
        }
        b = b * b % n128;
        exp >>= 1;
    }
    acc as u64
}

/// Chinese remaindering over pairwise coprime moduli. Returns `(residue, product of moduli)`.
pub fn crt(congruences: &[(i64, u64)]) -> Result<(u64, u64), ArithError> {
    let mut x: u64 = 0;
    let mut m: u64 = 1;
    for &(r, n) in congruences {
        if n == 0 {
            return Err(ArithError::Zero);
        }
        if gcd(m, n) != 1 {
            return Err(ArithError::NonCoprimeModuli { m1: m, m2: n });
        }
        // x + m*t ≡ r (mod n)
        let inv = mod_inverse(m as i64, n)?;
        let diff = (r as i128 - x as i128).rem_euclid(n as i128) as u128;
        let t = diff * inv as u128 % n as u128;
        x = (x as u128 + m as u128 * t) as u64;
        m *= n;
    }
    Ok((x % m, m))
}

/// Kronecker symbol (a/n) for n ≥ 1.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    let mut a = a as i128;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= tz;
    }
    // Jacobi symbol (a/n) for odd n.
    let mut n = n as i128;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Primes in increasing order, starting from 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert_eq!(factor(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert!(factor(1).unwrap().pairs().is_empty());
        assert_eq!(factor(97).unwrap().pairs(), &[(97, 1)]);
        assert_eq!(factor(0), Err(ArithError::Zero));
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(6).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(16).unwrap(), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn phi_mobius_inverse() {
        // count residues coprime to 9
        let brute = (0..9u64).filter(|&a| gcd(a, 9) == 1).count() as u64;
        assert_eq!(euler_phi(9).unwrap(), brute);
        assert_eq!(brute, 6);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mod_inverse(3, 11).unwrap(), 4);
        assert_eq!(mod_inverse(-3, 11).unwrap(), 7);
        assert!(matches!(
            mod_inverse(6, 9),
            Err(ArithError::NotInvertible { .. })
        ));
    }

    #[test]
    fn crt_cases() {
        assert_eq!(crt(&[(2, 3), (3, 5), (2, 7)]).unwrap(), (23, 105));
        assert_eq!(crt(&[]).unwrap(), (0, 1));
        assert!(matches!(
            crt(&[(1, 4), (3, 6)]),
            Err(ArithError::NonCoprimeModuli { .. })
        ));
    }

    #[test]
    fn summatory_identities() {
        for n in 1..=10_000u64 {
            let ds = divisors(n).unwrap();
            let phi_sum: u64 = ds.iter().map(|&d| euler_phi(d).unwrap()).sum();
            assert_eq!(phi_sum, n);
            let mu_sum: i64 = ds.iter().map(|&d| mobius(d).unwrap() as i64).sum();
            assert_eq!(mu_sum, (n == 1) as i64);
            assert_eq!(ds.len() as u64, factor(n).unwrap().divisor_count());
            assert_eq!(factor(n).unwrap().value(), n);
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 0..p as i64 {
                let e = pow_mod(a as u64, (p - 1) / 2, p);
                let expect = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expect, "({a}/{p})");
            }
        }
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(5, 8), -1);
    }
}
