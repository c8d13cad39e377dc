//! Exact arithmetic in cyclotomic integer rings `Z[ζ_L]`.
//!
//! Character values are roots of unity, so Eisenstein and eta-product coefficients (and their
//! twists) live in `Z[ζ_L]` for `L` the lcm of the character orders involved. Elements are kept
//! reduced modulo the cyclotomic polynomial `Φ_L`, which makes equality a plain coefficient
//! comparison once both sides are lifted to a common `L`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::arith::{gcd, lcm};

/// The root of unity `e(num/den) = exp(2πi·num/den)`, stored in lowest terms with `num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let num = crate::arith::modulo(num, den);
        let g = gcd(num, den);
        if num == 0 {
            return Self::ONE;
        }
        RootOfUnity {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn mul(self, other: Self) -> Self {
        let den = lcm(self.den, other.den);
        let num = self.num * (den / self.den) + other.num * (den / other.den);
        Self::new(num as i64, den)
    }

    pub fn conj(self) -> Self {
        Self::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, e: u64) -> Self {
        let num = (self.num as u128 * e as u128 % self.den as u128) as i64;
        Self::new(num, self.den)
    }

    /// Exponent `j` with `self = ζ_L^j`; `L` must be a multiple of the order.
    pub fn exponent_in(&self, l: u64) -> u64 {
        debug_assert_eq!(l % self.den, 0);
        self.num * (l / self.den)
    }

    pub fn to_complex(self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (n, d) => Complex64::from_polar(1.0, TAU * n as f64 / d as f64),
        }
    }
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i128>> {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_divide(&num, &phi_d);
        }
    }
    let poly = Arc::new(num);
    cyclotomic_cache().write().unwrap().insert(n, poly.clone());
    poly
}

fn exact_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn] / lead;
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces `poly` modulo the monic polynomial `modulus` in place, returning the remainder.
fn reduce(mut poly: Vec<i128>, modulus: &[i128]) -> Vec<i128> {
    let deg = modulus.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = poly[i];
            if c != 0 {
                for (j, &mj) in modulus.iter().enumerate() {
                    poly[i - deg + j] -= c * mj;
                }
            }
        }
    }
    poly.resize(deg, 0);
    poly
}

/// An element of `Z[ζ_L]` in the power basis `1, ζ, …, ζ^{φ(L)−1}`.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<i128>,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "Z[ζ_{}]{:?}", self.order, self.coeffs)
    }
}

impl Cyclotomic {
    pub fn from_int(n: i128) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![n],
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn root(r: RootOfUnity) -> Self {
        Self::monomial(r.order(), r.num(), 1)
    }

    /// `c·ζ_L^j`.
    pub fn monomial(order: u64, j: u64, c: i128) -> Self {
        let mut poly = vec![0i128; (j % order) as usize + 1];
        poly[(j % order) as usize] = c;
        let coeffs = reduce(poly, &cyclotomic_polynomial(order));
        Cyclotomic { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The integer value, when the element is rational.
    pub fn as_int(&self) -> Option<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Re-expresses the element in `Z[ζ_target]`; `target` must be a multiple of the order.
    pub fn lift(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert_eq!(
            target % self.order,
            0,
            "cannot lift Z[ζ_{}] into Z[ζ_{target}]",
            self.order
        );
        let step = (target / self.order) as usize;
        let mut poly = vec![0i128; (self.coeffs.len().max(1) - 1) * step + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c;
        }
        Cyclotomic {
            order: target,
            coeffs: reduce(poly, &cyclotomic_polynomial(target)),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = lcm(self.order, other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic {
            order: a.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Cyclotomic {
            order: a.order,
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_int(self.coeffs[0] * other.coeffs[0]);
        }
        let (a, b) = self.aligned(other);
        let mut poly = vec![0i128; a.coeffs.len() + b.coeffs.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                poly[i + j] += x * y;
            }
        }
        Cyclotomic {
            order: a.order,
            coeffs: reduce(poly, &cyclotomic_polynomial(a.order)),
        }
    }

    pub fn scale(&self, c: i128) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_root(&self, r: RootOfUnity) -> Self {
        if r == RootOfUnity::ONE {
            return self.clone();
        }
        self.mul(&Self::root(r))
    }

    /// Complex conjugation, i.e. `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let l = self.order as usize;
        let mut poly = vec![0i128; l];
        for (j, &c) in self.coeffs.iter().enumerate() {
            poly[(l - j) % l] += c;
        }
        Cyclotomic {
            order: self.order,
            coeffs: reduce(poly, &cyclotomic_polynomial(self.order)),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| RootOfUnity::new(j as i64, self.order).to_complex() * c as f64)
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

/// Ring operations shared by exact cyclotomic values and floating-point approximations, so
/// identity checks can run on either.
pub trait Scalar: Clone {
    fn from_int(n: i128) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: i128) -> Self;
    fn rotate(&self, r: RootOfUnity) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Equality: exact for cyclotomic values; for floats, within `tol · max(scale, 1)`.
    fn agrees(&self, other: &Self, scale: f64, tol: f64) -> bool;
}

impl Scalar for Cyclotomic {
    fn from_int(n: i128) -> Self {
        Cyclotomic::from_int(n)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclotomic::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclotomic::mul(self, other)
    }
    fn scale(&self, c: i128) -> Self {
        Cyclotomic::scale(self, c)
    }
    fn rotate(&self, r: RootOfUnity) -> Self {
        self.mul_root(r)
    }
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }
    fn agrees(&self, other: &Self, _scale: f64, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for Complex64 {
    fn from_int(n: i128) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: i128) -> Self {
        self * c as f64
    }
    fn rotate(&self, r: RootOfUnity) -> Self {
        self * r.to_complex()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn agrees(&self, other: &Self, scale: f64, tol: f64) -> bool {
        (self - other).norm() <= tol * scale.max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for l in 2..=24u64 {
            let mut s = Cyclotomic::zero();
            for j in 0..l {
                s = s.add(&Cyclotomic::monomial(l, j, 1));
            }
            assert!(s.is_zero(), "sum of {l}-th roots");
        }
    }

    #[test]
    fn lift_and_conjugate_agree_with_complex() {
        let z = Cyclotomic::monomial(3, 1, 2).add(&Cyclotomic::from_int(5));
        let w = Cyclotomic::monomial(4, 3, -7);
        let prod = z.mul(&w);
        let expect = z.to_complex() * w.to_complex();
        assert!((prod.to_complex() - expect).norm() < 1e-12);
        assert_eq!(prod.order(), 12);
        assert!((z.conj().to_complex() - z.to_complex().conj()).norm() < 1e-12);
        assert_eq!(z.lift(6), z);
        // i * (-i) = 1
        let i = Cyclotomic::root(RootOfUnity::new(1, 4));
        assert_eq!(i.mul(&i.conj()), Cyclotomic::from_int(1));
    }

    #[test]
    fn root_arithmetic() {
        let a = RootOfUnity::new(1, 6);
        assert_eq!(a.pow(3), RootOfUnity::new(1, 2));
        assert_eq!(a.mul(a.conj()), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(-2, 8), RootOfUnity::new(3, 4));
        assert_eq!(RootOfUnity::new(2, 4).order(), 2);
    }
}
