//! Exact 2×2 integer and rational matrices and the identities among them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

use crate::arith::{gcd, is_prime, mod_inverse, modulo};

use crate::report::Report;

use super::ModularError;

/// `(a, b; c, d)` with integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerMatrix2x2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntegerMatrix2x2 {
    pub const IDENTITY: Self = IntegerMatrix2x2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntegerMatrix2x2 { a, b, c, d }
    }

    /// `(1, 1; 0, 1)`.
    pub const fn translation() -> Self {
        Self::new(1, 1, 0, 1)
    }

    /// `(1, 0; N, 1)`.
    pub const fn lower(n: i64) -> Self {
        Self::new(1, 0, n, 1)
    }

    /// `(0, −1; N, 0)`.
    pub const fn fricke(n: i64) -> Self {
        Self::new(0, -1, n, 0)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Option<Self> {
        (self.det() == 1).then(|| Self::new(self.d, -self.b, -self.c, self.a))
    }

    /// Integer power of a determinant-one matrix; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { *self };
        let mut out = Self::IDENTITY;
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn in_gamma0(&self, n: u64) -> bool {
        self.det() == 1 && self.c % n as i64 == 0
    }

    pub fn in_gamma1(&self, n: u64) -> bool {
        self.in_gamma0(n) && modulo(self.a, n) == 1 % n && modulo(self.d, n) == 1 % n
    }

    pub fn to_rational(&self) -> RationalMatrix2x2 {
        RationalMatrix2x2::new(self.a.into(), self.b.into(), self.c.into(), self.d.into())
    }

    /// `cz + d`.
    pub fn automorphy(&self, z: Complex64) -> Complex64 {
        self.c as f64 * z + self.d as f64
    }

    /// `(az + b) / (cz + d)`.
    pub fn act(&self, z: Complex64) -> Complex64 {
        (self.a as f64 * z + self.b as f64) / self.automorphy(z)
    }
}

impl fmt::Display for IntegerMatrix2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Parses `"a,b;c,d"`.
impl FromStr for IntegerMatrix2x2 {
    type Err = ModularError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModularError::BadMatrix(s.to_string());
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(bad());
            }
            for c in cols {
                entries.push(c.trim().parse::<i64>().map_err(|_| bad())?);
            }
        }
        Ok(Self::new(entries[0], entries[1], entries[2], entries[3]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalMatrix2x2 {
    pub a: Rational64,
    pub b: Rational64,
    pub c: Rational64,
    pub d: Rational64,
}

impl RationalMatrix2x2 {
    pub fn new(a: Rational64, b: Rational64, c: Rational64, d: Rational64) -> Self {
        RationalMatrix2x2 { a, b, c, d }
    }

    pub fn det(&self) -> Rational64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn scale(&self, t: Rational64) -> Self {
        Self::new(self.a * t, self.b * t, self.c * t, self.d * t)
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == Rational64::from_integer(0) {
            return None;
        }
        Some(Self::new(self.d, -self.b, -self.c, self.a).scale(det.recip()))
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix2x2> {
        let entries = [self.a, self.b, self.c, self.d];
        if entries.iter().all(|e| e.is_integer()) {
            Some(IntegerMatrix2x2::new(
                self.a.to_integer(),
                self.b.to_integer(),
                self.c.to_integer(),
                self.d.to_integer(),
            ))
        } else {
            None
        }
    }
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint(Complex64);

impl UpperHalfPoint {
    pub fn new(z: Complex64) -> Result<Self, ModularError> {
        if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(UpperHalfPoint(z))
        } else {
            Err(ModularError::NotInUpperHalfPlane(z))
        }
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

/// An element of `Γ_0(N)` with top row `(q, −a)`: `(q, −a; −Nm, (Nam + 1)/q)` with `m` the
/// least positive solution of `Nam ≡ −1 (mod q)`.
pub fn gamma_qa(q: u64, a: i64, n: u64) -> Result<IntegerMatrix2x2, ModularError> {
    if q == 0 || n == 0 {
        return Err(ModularError::ZeroArgument);
    }
    let na = n as i64 * a;
    if q > 1 && gcd(q, modulo(na, q)) != 1 {
        return Err(ModularError::NotCoprime { q, na });
    }
    let m = if q == 1 {
        1
    } else {
        let inv = mod_inverse(na, q).map_err(|_| ModularError::NotCoprime { q, na })?;
        match modulo(-(inv as i64), q) {
            0 => q as i64,
            m => m as i64,
        }
    };
    let nm = n as i64 * m;
    let num = na * m + 1;
    debug_assert_eq!(num % q as i64, 0);
    Ok(IntegerMatrix2x2::new(q as i64, -a, -nm, num / q as i64))
}

/// A determinant-one matrix with bottom row `(c, d)`, or `None` when `gcd(c, d) ≠ 1`.
pub fn complete_bottom_row(c: i64, d: i64) -> Option<IntegerMatrix2x2> {
    let e = Integer::extended_gcd(&d, &c);
    // e.x·d + e.y·c = gcd
    match e.gcd {
        1 => Some(IntegerMatrix2x2::new(e.x, -e.y, c, d)),
        -1 => Some(IntegerMatrix2x2::new(-e.x, e.y, c, d)),
        _ => None,
    }
}

/// One checked instance of a matrix identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub q: u64,
    pub a: i64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub level: u64,
    pub checks: Vec<IdentityCheck>,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn count(&self, identity: &str) -> usize {
        self.checks
            .iter()
            .filter(|c| c.identity == identity)
            .count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("level", self.level);
        for name in IDENTITY_NAMES {
            r.text(&format!("{name}_checked"), self.count(name));
        }
        let failures: Vec<_> = self.failures().collect();
        r.text("failures", failures.len());
        if let Some(f) = failures.first() {
            r.text(
                "first_failure",
                format!("{}:q={}:a={}", f.identity, f.q, f.a),
            )
            .text("reason", "matrix_identity")
            .fail();
        }
        r
    }
}

const IDENTITY_NAMES: [&str; 4] = [
    "fricke_conjugation",
    "top_row",
    "q_one_mod_n",
    "gamma_qa_product",
];

/// The first `count` primes not dividing `n`.
pub fn admissible_primes(n: u64, count: usize) -> Vec<u64> {
    crate::arith::primes()
        .filter(|&p| n % p != 0)
        .take(count)
        .collect()
}

/// The first `count` primes `≡ 1 (mod n)`.
pub fn primes_one_mod(n: u64, count: usize) -> Vec<u64> {
    crate::arith::primes()
        .filter(|&p| p % n == 1 % n && n % p != 0)
        .take(count)
        .collect()
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Checks, in exact arithmetic:
///
/// 1. `(1, 0; N, 1) = W (1, 1; 0, 1)^{−1} W^{−1}` with `W = (0, −1; N, 0)`;
/// 2. for two elements of `Γ_0(N)` with the same top row, `γ′γ^{−1}` is a power of
///    `(1, 0; N, 1)`;
/// 3. for `q ≡ 1 (mod N)`, `(q, −1; 1−q, 1) = (1, 1; 0, 1)^{−1} (1, 0; N, 1)^{(1−q)/N}`;
/// 4. `q · W (1, m/q; 0, 1) W_{q²}^{−1} (1, a/q; 0, 1)^{−1} = γ_{q,a}` with
///    `W_{q²} = (0, −1; Nq², 0)`, the product landing in integer matrices.
///
/// Identity 3 runs for the members of `q_list` that are `≡ 1 (mod N)`; identities 2 and 4 run
/// for every admissible `q` in the list and every unit `a mod q`.
pub fn verify_matrix_identities(n: u64, q_list: &[u64]) -> Result<MatrixReport, ModularError> {
    if n == 0 {
        return Err(ModularError::ZeroArgument);
    }
    let ni = n as i64;
    let mut checks = Vec::new();
    let t = IntegerMatrix2x2::translation();
    let lower = IntegerMatrix2x2::lower(ni);
    let w = IntegerMatrix2x2::fricke(ni).to_rational();
    let w_inv = w.inverse().expect("det N > 0");

    let first = w
        .mul(&t.inverse().expect("det 1").to_rational())
        .mul(&w_inv);
    checks.push(IdentityCheck {
        identity: "fricke_conjugation",
        q: 1,
        a: 0,
        holds: first == lower.to_rational(),
    });

    for &q in q_list {
        if !is_prime(q) || n % q == 0 {
            return Err(ModularError::NotAdmissible { q, level: n });
        }
        let qi = q as i64;
        for a in (1..qi).filter(|&a| gcd(a as u64, q) == 1) {
            let g = gamma_qa(q, a, n)?;
            let m = -g.c / ni;

            // another solution m' = m + q·t gives another element with the same top row
            for step in [1i64, 2, -3] {
                let m2 = m + qi * step;
                let g2 = IntegerMatrix2x2::new(qi, -a, -ni * m2, (ni * a * m2 + 1) / qi);
                let p = g2.mul(&g.inverse().expect("det 1"));
                let holds = g2.in_gamma0(n)
                    && p.a == 1
                    && p.b == 0
                    && p.d == 1
                    && p.c % ni == 0
                    && lower.pow(p.c / ni) == Some(p);
                checks.push(IdentityCheck {
                    identity: "top_row",
                    q,
                    a,
                    holds,
                });
            }

            let w_q2 = IntegerMatrix2x2::fricke(ni * qi * qi).to_rational();
            let product = w
                .mul(&RationalMatrix2x2::new(
                    rat(1, 1),
                    rat(m, qi),
                    rat(0, 1),
                    rat(1, 1),
                ))
                .mul(&w_q2.inverse().expect("det > 0"))
                .mul(
                    &RationalMatrix2x2::new(rat(1, 1), rat(a, qi), rat(0, 1), rat(1, 1))
                        .inverse()
                        .expect("det 1"),
                )
                .scale(rat(qi, 1));
            let holds = product.to_integer() == Some(g) && g.in_gamma0(n) && g.a == qi && g.b == -a;
            checks.push(IdentityCheck {
                identity: "gamma_qa_product",
                q,
                a,
                holds,
            });
        }

        if q % n == 1 % n {
            let lhs = IntegerMatrix2x2::new(qi, -1, 1 - qi, 1);
            let rhs = lower
                .pow((1 - qi) / ni)
                .map(|p| t.inverse().expect("det 1").mul(&p));
            checks.push(IdentityCheck {
                identity: "q_one_mod_n",
                q,
                a: 1,
                holds: rhs == Some(lhs) && lhs.in_gamma1(n),
            });
        }
    }
    Ok(MatrixReport { level: n, checks })
}
