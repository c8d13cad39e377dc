//! Dirichlet characters, Gauss sums, Ramanujan sums and the residue-class indicator
//! decomposition.
//!
//! Characters mod `q` are addressed by exponent vectors on a fixed set of generators of
//! `(Z/qZ)^*`. The generator for an odd prime power `p^e` is the smallest primitive root mod
//! `p^e`; for `2^e` the generators are `-1` (when `e ≥ 2`) and `5` (when `e ≥ 3`). Each generator
//! is lifted by CRT to be `≡ 1` modulo the other prime-power factors.
//!
//! Canonical order: components are sorted by prime (for `2^e` the `-1` component precedes the
//! `5` component) and the exponent vector is read as a mixed-radix number with the first
//! component most significant. Index 0 is the trivial character. The label `"q.j"` names the
//! `j`-th character mod `q` in this order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{self, gcd, is_prime, lcm};
use crate::cyclo::{cyclotomic_polynomial, RootOfUnity};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {0} exceeds supported range")]
    ModulusTooLarge(u64),
    #[error("character index {index} out of range for modulus {modulus} ({count} characters)")]
    IndexOutOfRange {
        modulus: u64,
        index: usize,
        count: usize,
    },
    #[error("malformed character label {0:?}; expected \"q.j\"")]
    BadLabel(String),
    #[error("generator values do not define a character mod {0}")]
    NotACharacter(u64),
    #[error("{modulus} is not a multiple of {base}")]
    NotAMultiple { modulus: u64, base: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{a} is not coprime to {q}")]
    NotCoprime { a: i64, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ComponentKind {
    Odd,
    TwoSign,
    TwoFive,
}

#[derive(Debug, Clone)]
struct Component {
    kind: ComponentKind,
    prime: u64,
    prime_power: u64,
    /// Generator lifted to a residue mod `q`.
    generator: u64,
    order: u64,
}

/// Discrete-logarithm tables for one modulus, shared by every character mod `q`.
struct ModulusData {
    modulus: u64,
    components: Vec<Component>,
    /// Exponent of the unit group; all character values are `λ`-th roots of unity.
    exponent: u64,
    /// `logs[n * components.len() + i]` is the discrete log of `n` on component `i`.
    logs: Vec<u32>,
    unit: Vec<bool>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for ModulusData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulusData")
            .field("modulus", &self.modulus)
            .field("components", &self.components)
            .finish()
    }
}

fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let phi = (p - 1) * p.pow(e - 1);
    let fac = arith::factor(phi).expect("phi > 0");
    (2..pe)
        .find(|&g| gcd(g, p) == 1 && fac.primes().all(|r| arith::pow_mod(g, phi / r, pe) != 1))
        .unwrap_or(1)
}

impl ModulusData {
    fn build(q: u64) -> Result<Self, CharError> {
        if q == 0 {
            return Err(CharError::ZeroModulus);
        }
        if q > MAX_MODULUS {
            return Err(CharError::ModulusTooLarge(q));
        }
        let fac = arith::factor(q).expect("q > 0");
        let mut components = Vec::new();
        // local log tables, indexed by residue mod prime power
        let mut local_logs: Vec<Vec<u32>> = Vec::new();
        for &(p, e) in fac.pairs() {
            let pe = p.pow(e);
            let lift = |g: u64| -> u64 {
                arith::crt(&[(g as i64, pe), (1, q / pe)])
                    .expect("coprime")
                    .0
            };
            if p == 2 {
                if e >= 2 {
                    components.push(Component {
                        kind: ComponentKind::TwoSign,
                        prime: 2,
                        prime_power: pe,
                        generator: lift(pe - 1),
                        order: 2,
                    });
                    let mut t = vec![0u32; pe as usize];
                    for u in (1..pe).step_by(2) {
                        t[u as usize] = if u % 4 == 1 { 0 } else { 1 };
                    }
                    local_logs.push(t);
                }
                if e >= 3 {
                    let order = pe / 4;
                    components.push(Component {
                        kind: ComponentKind::TwoFive,
                        prime: 2,
                        prime_power: pe,
                        generator: lift(5),
                        order,
                    });
                    let mut t = vec![0u32; pe as usize];
                    let mut x = 1u64;
                    for b in 0..order {
                        t[x as usize] = b as u32;
                        t[(pe - x) as usize] = b as u32;
                        x = x * 5 % pe;
                    }
                    local_logs.push(t);
                }
            } else {
                let g = smallest_primitive_root(p, e);
                let order = (p - 1) * p.pow(e - 1);
                components.push(Component {
                    kind: ComponentKind::Odd,
                    prime: p,
                    prime_power: pe,
                    generator: lift(g),
                    order,
                });
                let mut t = vec![0u32; pe as usize];
                let mut x = 1u64;
                for j in 0..order {
                    t[x as usize] = j as u32;
                    x = x * g % pe;
                }
                local_logs.push(t);
            }
        }
        let nc = components.len();
        let mut logs = vec![0u32; q as usize * nc];
        let mut unit = vec![false; q as usize];
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            unit[n as usize] = true;
            for (i, c) in components.iter().enumerate() {
                logs[n as usize * nc + i] = local_logs[i][(n % c.prime_power) as usize];
            }
        }
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        let roots = (0..exponent)
            .map(|j| RootOfUnity::new(j as i64, exponent).to_complex())
            .collect();
        Ok(ModulusData {
            modulus: q,
            components,
            exponent,
            logs,
            unit,
            roots,
        })
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct DirichletCharacter {
    data: Arc<ModulusData>,
    exps: Vec<u64>,
    /// `exps[i] * λ / order_i`, so that `χ(n) = e(Σ weights[i]·log_i(n) / λ)`.
    weights: Vec<u64>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter({})", self.label())
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

/// The group of Dirichlet characters modulo `q`.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    data: Arc<ModulusData>,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self, CharError> {
        Ok(CharacterGroup {
            data: Arc::new(ModulusData::build(q)?),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.data.modulus
    }

    pub fn order(&self) -> usize {
        self.data
            .components
            .iter()
            .map(|c| c.order as usize)
            .product()
    }

    pub fn character(&self, index: usize) -> Result<DirichletCharacter, CharError> {
        let count = self.order();
        if index >= count {
            return Err(CharError::IndexOutOfRange {
                modulus: self.modulus(),
                index,
                count,
            });
        }
        let mut rest = index as u64;
        let mut exps = vec![0u64; self.data.components.len()];
        for (i, c) in self.data.components.iter().enumerate().rev() {
            exps[i] = rest % c.order;
            rest /= c.order;
        }
        Ok(DirichletCharacter::from_exponents(self.data.clone(), exps))
    }

    pub fn trivial(&self) -> DirichletCharacter {
        DirichletCharacter::from_exponents(self.data.clone(), vec![0; self.data.components.len()])
    }

    /// All `φ(q)` characters in canonical order.
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        (0..self.order())
            .map(|j| self.character(j).expect("index in range"))
            .collect()
    }

    /// Builds the character taking the given values on the canonical generators.
    pub fn from_generator_values<F>(&self, mut value: F) -> Result<DirichletCharacter, CharError>
    where
        F: FnMut(u64) -> Option<RootOfUnity>,
    {
        let mut exps = Vec::with_capacity(self.data.components.len());
        for c in &self.data.components {
            let v = value(c.generator).ok_or(CharError::NotACharacter(self.modulus()))?;
            if c.order % v.order() != 0 {
                return Err(CharError::NotACharacter(self.modulus()));
            }
            exps.push(v.exponent_in(c.order));
        }
        Ok(DirichletCharacter::from_exponents(self.data.clone(), exps))
    }
}

/// Every character mod `q`, index 0 trivial.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>, CharError> {
    Ok(CharacterGroup::new(q)?.characters())
}

impl DirichletCharacter {
    fn from_exponents(data: Arc<ModulusData>, exps: Vec<u64>) -> Self {
        let lam = data.exponent;
        let weights = exps
            .iter()
            .zip(&data.components)
            .map(|(&e, c)| e * (lam / c.order) % lam.max(1))
            .collect();
        DirichletCharacter {
            data,
            exps,
            weights,
        }
    }

    /// Character `j` mod `q`.
    pub fn new(q: u64, index: usize) -> Result<Self, CharError> {
        CharacterGroup::new(q)?.character(index)
    }

    pub fn trivial(q: u64) -> Result<Self, CharError> {
        Ok(CharacterGroup::new(q)?.trivial())
    }

    /// Parses a `"q.j"` label.
    pub fn from_label(label: &str) -> Result<Self, CharError> {
        let bad = || CharError::BadLabel(label.to_string());
        let (q, j) = label.trim().split_once('.').ok_or_else(bad)?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        Self::new(q, j)
    }

    pub fn group(&self) -> CharacterGroup {
        CharacterGroup {
            data: self.data.clone(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.data.modulus
    }

    /// Position in the canonical order.
    pub fn index(&self) -> usize {
        self.exps
            .iter()
            .zip(&self.data.components)
            .fold(0u64, |acc, (&e, c)| acc * c.order + e) as usize
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.modulus(), self.index())
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.data.components)
            .fold(1, |acc, (&e, c)| lcm(acc, c.order / gcd(e, c.order)))
    }

    fn exponent_at(&self, n: i64) -> Option<u64> {
        let q = self.data.modulus;
        let r = arith::modulo(n, q) as usize;
        if !self.data.unit[r] {
            return None;
        }
        let nc = self.weights.len();
        let lam = self.data.exponent;
        let logs = &self.data.logs[r * nc..(r + 1) * nc];
        let e = self
            .weights
            .iter()
            .zip(logs)
            .fold(0u64, |acc, (&w, &l)| (acc + w * l as u64) % lam);
        Some(e)
    }

    /// `χ(n)` as an exact root of unity, `None` when `gcd(n, q) > 1`.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        self.exponent_at(n)
            .map(|e| RootOfUnity::new(e as i64, self.data.exponent))
    }

    /// `χ(n)` as a complex number.
    pub fn eval(&self, n: i64) -> Complex64 {
        match self.exponent_at(n) {
            Some(e) => self.data.roots[e as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ(-1) ∈ {±1}`.
    pub fn parity(&self) -> i8 {
        match self.value(-1) {
            Some(r) if r == RootOfUnity::ONE => 1,
            _ => -1,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.data.components)
            .map(|(&e, c)| (c.order - e) % c.order)
            .collect();
        Self::from_exponents(self.data.clone(), exps)
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.data.components)
            .map(|(&e, c)| (e as u128 * k as u128 % c.order as u128) as u64)
            .collect();
        Self::from_exponents(self.data.clone(), exps)
    }

    /// Product of two characters, taken modulo the lcm of their moduli.
    pub fn mul(&self, other: &Self) -> Result<Self, CharError> {
        let m = lcm(self.modulus(), other.modulus());
        let a = self.induce(m)?;
        let b = other.induce(m)?;
        let exps = a
            .exps
            .iter()
            .zip(&b.exps)
            .zip(&a.data.components)
            .map(|((&x, &y), c)| (x + y) % c.order)
            .collect();
        Ok(Self::from_exponents(a.data.clone(), exps))
    }

    /// The character mod `m` induced by this one; `m` must be a multiple of `q`.
    pub fn induce(&self, m: u64) -> Result<Self, CharError> {
        if m == self.modulus() {
            return Ok(self.clone());
        }
        if m == 0 || m % self.modulus() != 0 {
            return Err(CharError::NotAMultiple {
                modulus: m,
                base: self.modulus(),
            });
        }
        CharacterGroup::new(m)?.from_generator_values(|g| self.value(g as i64))
    }

    pub fn conductor(&self) -> u64 {
        let mut f = 1u64;
        let comps = &self.data.components;
        let mut two_sign = 0u64;
        let mut two_five_order = 1u64;
        for (c, &e) in comps.iter().zip(&self.exps) {
            let ord = c.order / gcd(e, c.order);
            match c.kind {
                ComponentKind::Odd => {
                    if ord > 1 {
                        let mut a = 0;
                        let mut o = ord;
                        while o % c.prime == 0 {
                            o /= c.prime;
                            a += 1;
                        }
                        f *= c.prime.pow(a + 1);
                    }
                }
                ComponentKind::TwoSign => two_sign = e,
                ComponentKind::TwoFive => two_five_order = ord,
            }
        }
        if two_five_order > 1 {
            f *= 4 * two_five_order;
        } else if two_sign == 1 {
            f *= 4;
        }
        f
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The primitive character of modulus `conductor(χ)` inducing `χ`.
    pub fn primitivize(&self) -> Self {
        let f = self.conductor();
        let q = self.modulus();
        CharacterGroup::new(f)
            .expect("conductor divides modulus")
            .from_generator_values(|g| {
                let mut n = g.max(1);
                while gcd(n, q) != 1 {
                    n += f;
                }
                self.value(n as i64)
            })
            .expect("character factors through its conductor")
    }
}

impl FromStr for DirichletCharacter {
    type Err = CharError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_label(s)
    }
}

/// `τ(χ) = Σ_{a mod q} χ(a) e(a/q)`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    (0..q as i64)
        .filter_map(|a| {
            chi.value(a)
                .map(|v| v.mul(RootOfUnity::new(a, q)).to_complex())
        })
        .sum()
}

/// `c_q(n) = Σ_{(a,q)=1} e(an/q)`, computed exactly in `Z[ζ_q]`.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q > 0, "ramanujan_sum requires q ≥ 1");
    let mut counts = vec![0i128; q as usize];
    for a in 0..q {
        if gcd(a, q) == 1 {
            let j = arith::modulo(a as i64 * arith::modulo(n, q) as i64, q);
            counts[j as usize] += 1;
        }
    }
    // reduce Σ counts_j x^j modulo Φ_q; the result is a constant.
    let phi = cyclotomic_polynomial(q);
    let deg = phi.len() - 1;
    for i in (deg..counts.len()).rev() {
        let c = counts[i];
        if c != 0 {
            for (j, &m) in phi.iter().enumerate() {
                counts[i - deg + j] -= c * m;
            }
        }
    }
    debug_assert!(counts[1..deg].iter().all(|&c| c == 0));
    counts[0] as i64
}

/// Evaluates `1/q − c_q(n)/(q(q−1)) + (1/(q−1)) Σ_{χ≠χ₀} χ̄(a)χ(n)`, the indicator of
/// `n ≡ a (mod q)` written through characters of prime modulus `q`.
pub fn indicator_decomposition(q: u64, a: i64, n: i64) -> Result<Complex64, CharError> {
    if !is_prime(q) {
        return Err(CharError::NotPrime(q));
    }
    if gcd(arith::modulo(a, q), q) != 1 {
        return Err(CharError::NotCoprime { a, q });
    }
    let qf = q as f64;
    let cq = ramanujan_sum(q, n) as f64;
    let twisted: Complex64 = enumerate_characters(q)?
        .iter()
        .skip(1)
        .map(|chi| chi.eval(a).conj() * chi.eval(n))
        .sum();
    Ok(Complex64::new(1.0 / qf - cq / (qf * (qf - 1.0)), 0.0) + twisted / (qf - 1.0))
}
