//! Hecke coefficient sequences: construction, validation, twisting and file I/O.
//!
//! Sequences store the arithmetic normalization `a_n = λ_n n^{(k−1)/2}`. Builders that produce
//! values in a cyclotomic ring (eta products, Eisenstein series, and their twists) also keep the
//! exact values so relation checks can run without rounding.

mod eisenstein;
mod eta;
mod hecke;
mod io;

pub use eisenstein::{eisenstein_coefficients, eisenstein_exact_values};
pub use eta::{eta_product_expansion, parse_eta_spec, EtaExpansion, EtaFactor};
pub use hecke::{check_hecke_relations, HeckeReport, Relation};
pub use io::{load_coefficients, read_coefficients, save_coefficients, write_coefficients};

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::gcd;
use crate::chargroup::{CharError, DirichletCharacter};
use crate::cyclo::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoeffError {
    #[error("coefficient sequence is empty")]
    Empty,
    #[error("not normalized: a_1 = {0}")]
    NotNormalized(Complex64),
    #[error("nebentypus parity ξ(−1) = {parity} does not match (−1)^k for k = {weight}")]
    ParityMismatch { weight: u32, parity: i8 },
    #[error("nebentypus modulus {modulus} differs from level {level}")]
    NebentypusModulus { modulus: u64, level: u64 },
    #[error("twist modulus {q} is not coprime to level {level}")]
    TwistNotCoprime { q: u64, level: u64 },
    #[error("ξ₁ must be primitive (conductor {conductor}, modulus {modulus})")]
    Xi1NotPrimitive { modulus: u64, conductor: u64 },
    #[error("ξ₂ must be primitive for k ≠ 2 (conductor {conductor}, modulus {modulus})")]
    Xi2NotPrimitive { modulus: u64, conductor: u64 },
    #[error("parity violation: ξ₁(−1)ξ₂(−1) = {product} but (−1)^k = {expected}")]
    EisensteinParity { product: i8, expected: i8 },
    #[error("weight 1 requires ξ₁ even")]
    OddXi1WeightOne,
    #[error("weight 2 conductor condition fails: N₂/N₂* = {ratio}, N₂* = {conductor}")]
    WeightTwoConductor { ratio: u64, conductor: u64 },
    #[error("weight 2 with ξ₁, ξ₂ both trivial requires imprimitive ξ₂")]
    WeightTwoBothTrivial,
    #[error("weight must be positive")]
    ZeroWeight,
    #[error("malformed eta specification {0:?}")]
    BadEtaSpec(String),
    #[error("eta product offset Σ d·r / 24 = {0}/24 is not integral")]
    NonIntegralOffset(i64),
    #[error("eta product weight Σ r / 2 = {0}/2 is not integral")]
    NonIntegralWeight(i64),
    #[error("eta product starts at q^{0}, expected q^1")]
    EtaOffset(i64),
    #[error("could not determine the nebentypus of the eta product mod {0}")]
    EtaNebentypus(u64),
    #[error("index {n} outside sequence of length {len}")]
    IndexOutOfRange { n: usize, len: usize },
    #[error(transparent)]
    Character(#[from] CharError),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed data line {line}: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("non-monotone index at line {line}: expected {expected}, found {found}")]
    NonMonotoneIndex {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("missing a_1")]
    MissingFirst,
    #[error("header declares X={declared} but file has {found} coefficients")]
    LengthMismatch { declared: usize, found: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CoeffError {
    fn from(e: std::io::Error) -> Self {
        CoeffError::Io(e.to_string())
    }
}

/// Bits kept free below the `i128` limit for the sums inside cyclotomic products.
const EXACT_HEADROOM_BITS: f64 = 8.0;

/// A normalized coefficient sequence `a_1 = 1, a_2, …, a_X` of weight `k`, level `N` and
/// nebentypus `ξ mod N`.
#[derive(Debug, Clone)]
pub struct CoefficientSequence {
    weight: u32,
    level: u64,
    nebentypus: DirichletCharacter,
    values: Vec<Complex64>,
    exact: Option<Vec<Cyclotomic>>,
    growth: f64,
}

/// `max_{n ≤ X} |λ_n| / √n` for arithmetic coefficients of weight `k`.
fn observed_growth(weight: u32, values: &[Complex64]) -> f64 {
    let half = (weight as f64 - 1.0) / 2.0;
    values
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = (i + 1) as f64;
            a.norm() / n.powf(half) / n.sqrt()
        })
        .fold(0.0, f64::max)
}

impl CoefficientSequence {
    /// Validates and wraps arithmetic coefficients `values[n−1] = a_n`.
    ///
    /// `growth` is the constant `C` in `|λ_n| ≤ C√n`; `None` takes the maximum observed.
    pub fn new(
        weight: u32,
        level: u64,
        nebentypus: DirichletCharacter,
        values: Vec<Complex64>,
        growth: Option<f64>,
    ) -> Result<Self, CoeffError> {
        if weight == 0 {
            return Err(CoeffError::ZeroWeight);
        }
        let first = *values.first().ok_or(CoeffError::Empty)?;
        if first != Complex64::new(1.0, 0.0) {
            return Err(CoeffError::NotNormalized(first));
        }
        if nebentypus.modulus() != level {
            return Err(CoeffError::NebentypusModulus {
                modulus: nebentypus.modulus(),
                level,
            });
        }
        let parity = nebentypus.parity();
        let expected = if weight % 2 == 0 { 1 } else { -1 };
        if parity != expected {
            return Err(CoeffError::ParityMismatch { weight, parity });
        }
        let growth = growth.unwrap_or_else(|| observed_growth(weight, &values));
        Ok(CoefficientSequence {
            weight,
            level,
            nebentypus,
            values,
            exact: None,
            growth,
        })
    }

    /// Builds a sequence from exact cyclotomic values; the float values are derived from them.
    pub fn from_exact(
        weight: u32,
        level: u64,
        nebentypus: DirichletCharacter,
        exact: Vec<Cyclotomic>,
    ) -> Result<Self, CoeffError> {
        let values = exact.iter().map(Cyclotomic::to_complex).collect();
        let mut seq = Self::new(weight, level, nebentypus, values, None)?;
        seq.exact = Some(exact);
        Ok(seq)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn nebentypus(&self) -> &DirichletCharacter {
        &self.nebentypus
    }

    /// Number of stored coefficients `X`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arithmetic coefficients, `values()[n−1] = a_n`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn exact_values(&self) -> Option<&[Cyclotomic]> {
        self.exact.as_deref()
    }

    /// `a_n` for `1 ≤ n ≤ X`.
    /// `M(t) = max_{n ≤ t} |a_n|` for `t = 0, …, X`, with `M(0) = 0`.
    pub fn prefix_max_abs(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        out.push(0.0);
        for v in &self.values {
            let last = *out.last().unwrap();
            out.push(v.norm().max(last));
        }
        out
    }

    /// `log2` of the largest `|a_m a_n|` with `mn ≤ X`, and at least 0.
    pub fn log2_max_product(&self) -> f64 {
        let m = self.prefix_max_abs();
        let x = self.values.len();
        (1..=x)
            .map(|i| self.values[i - 1].norm() * m[x / i])
            .fold(1.0, f64::max)
            .log2()
    }

    /// The exact values, if a computation whose intermediate integers reach `2^bits` in size
    /// stays within `i128`.
    pub fn exact_values_within(&self, bits: f64) -> Option<&[Cyclotomic]> {
        if bits + EXACT_HEADROOM_BITS < 127.0 {
            self.exact_values()
        } else {
            None
        }
    }

    pub fn a(&self, n: usize) -> Complex64 {
        self.values[n - 1]
    }

    /// The analytic normalization `λ_n = a_n n^{−(k−1)/2}`.
    pub fn lambda(&self, n: usize) -> Complex64 {
        self.values[n - 1] / (n as f64).powf((self.weight as f64 - 1.0) / 2.0)
    }

    /// Constant `C` in the hypothesis `|λ_n| ≤ C√n`.
    pub fn growth_constant(&self) -> f64 {
        self.growth
    }

    pub fn with_growth_constant(mut self, c: f64) -> Self {
        self.growth = c;
        self
    }

    /// The first `x` coefficients.
    pub fn truncated(&self, x: usize) -> Self {
        let mut out = self.clone();
        out.values.truncate(x);
        if let Some(e) = out.exact.as_mut() {
            e.truncate(x);
        }
        out
    }

    /// Adds `delta` to `a_n`, discarding exact values.
    pub fn perturbed(&self, n: usize, delta: Complex64) -> Result<Self, CoeffError> {
        if n == 0 || n > self.len() {
            return Err(CoeffError::IndexOutOfRange { n, len: self.len() });
        }
        let mut out = self.clone();
        out.values[n - 1] += delta;
        out.exact = None;
        Ok(out)
    }

    /// Adds the integer `delta` to `a_n`, keeping exact values when present.
    pub fn perturbed_exact(&self, n: usize, delta: i128) -> Result<Self, CoeffError> {
        let mut out = self.perturbed(n, Complex64::new(delta as f64, 0.0))?;
        if let Some(exact) = &self.exact {
            let mut e = exact.clone();
            e[n - 1] = e[n - 1].add(&Cyclotomic::from_int(delta));
            out.values[n - 1] = e[n - 1].to_complex();
            out.exact = Some(e);
        }
        Ok(out)
    }
}

/// Twists by `χ mod q`: `a_n ↦ a_n χ(n)`, level `Nq²`, nebentypus `ξχ²`.
pub fn twist_coefficients(
    seq: &CoefficientSequence,
    chi: &DirichletCharacter,
) -> Result<CoefficientSequence, CoeffError> {
    let q = chi.modulus();
    let level = seq.level();
    if gcd(q, level) != 1 {
        return Err(CoeffError::TwistNotCoprime { q, level });
    }
    let new_level = level * q * q;
    let nebentypus = seq.nebentypus().mul(&chi.pow(2))?.induce(new_level)?;
    let values = seq
        .values()
        .iter()
        .enumerate()
        .map(|(i, a)| a * chi.eval((i + 1) as i64))
        .collect();
    let exact = seq.exact_values().map(|ex| {
        ex.iter()
            .enumerate()
            .map(|(i, a)| match chi.value((i + 1) as i64) {
                Some(r) => a.mul_root(r),
                None => Cyclotomic::zero(),
            })
            .collect()
    });
    Ok(CoefficientSequence {
        weight: seq.weight(),
        level: new_level,
        nebentypus,
        values,
        exact,
        growth: seq.growth_constant(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chargroup::enumerate_characters;

    fn delta(x: usize) -> CoefficientSequence {
        let spec = parse_eta_spec("1^24").unwrap();
        eta_product_expansion(&spec, x)
            .unwrap()
            .to_sequence()
            .unwrap()
    }

    #[test]
    fn constructor_validation() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(CoefficientSequence::new(12, 1, triv.clone(), vec![one], None).is_ok());
        assert_eq!(
            CoefficientSequence::new(12, 1, triv.clone(), vec![one * 2.0], None).unwrap_err(),
            CoeffError::NotNormalized(one * 2.0)
        );
        assert!(matches!(
            CoefficientSequence::new(3, 1, triv.clone(), vec![one], None),
            Err(CoeffError::ParityMismatch { .. })
        ));
        assert!(matches!(
            CoefficientSequence::new(2, 5, triv, vec![one], None),
            Err(CoeffError::NebentypusModulus { .. })
        ));
    }

    #[test]
    fn trivial_twist_is_identity() {
        let d = delta(50);
        let t = twist_coefficients(&d, &DirichletCharacter::trivial(1).unwrap()).unwrap();
        assert_eq!(t.values(), d.values());
        assert_eq!(t.level(), 1);
    }

    #[test]
    fn twist_by_quadratic_mod_5() {
        let d = delta(50);
        let quad = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        let t = twist_coefficients(&d, &quad).unwrap();
        assert_eq!(t.a(2), Complex64::new(24.0, 0.0));
        assert_eq!(t.level(), 25);
        assert!(t.nebentypus().is_trivial());
        assert_eq!(t.exact_values().unwrap()[1], Cyclotomic::from_int(24));
    }

    #[test]
    fn twist_untwist_restores_coprime_terms() {
        // the second twist would violate gcd(q, N) = 1, so undo it on the values directly
        let d = delta(200);
        for chi in enumerate_characters(7).unwrap() {
            let t = twist_coefficients(&d, &chi).unwrap();
            let exact = t.exact_values().unwrap();
            for n in 1..=200usize {
                match chi.conj().value(n as i64) {
                    Some(r) => {
                        assert_eq!(
                            exact[n - 1].mul_root(r),
                            d.exact_values().unwrap()[n - 1],
                            "n={n}"
                        )
                    }
                    None => assert!(exact[n - 1].is_zero()),
                }
            }
        }
    }

    #[test]
    fn twist_rejects_shared_factor() {
        let spec = parse_eta_spec("1^2*11^2").unwrap();
        let f = eta_product_expansion(&spec, 30)
            .unwrap()
            .to_sequence()
            .unwrap();
        let chi = DirichletCharacter::new(11, 1).unwrap();
        assert_eq!(
            twist_coefficients(&f, &chi).unwrap_err(),
            CoeffError::TwistNotCoprime { q: 11, level: 11 }
        );
    }

    #[test]
    fn perturbation_keeps_exactness() {
        let d = delta(10);
        let p = d.perturbed_exact(4, 1).unwrap();
        assert_eq!(
            p.exact_values().unwrap()[3],
            Cyclotomic::from_int(-1472 + 1)
        );
        assert!(d
            .perturbed(4, Complex64::new(0.5, 0.0))
            .unwrap()
            .exact_values()
            .is_none());
        assert!(d.perturbed(11, Complex64::new(0.5, 0.0)).is_err());
    }
}
