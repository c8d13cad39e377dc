//! The four bundled inputs: `Δ = η(z)^24`, `η(z)²η(11z)²`, the level-1 weight-4 Eisenstein
//! series and the weight-1 Eisenstein series attached to `(1, χ₄)`.

use std::fmt;
use std::str::FromStr;

use crate::chargroup::DirichletCharacter;
use crate::coeffs::{
    eisenstein_coefficients, eta_product_expansion, parse_eta_spec, CoeffError, CoefficientSequence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    Delta,
    Level11,
    EisensteinWeight4,
    EisensteinWeight1,
}

impl Dataset {
    pub const ALL: [Dataset; 4] = [
        Dataset::Delta,
        Dataset::Level11,
        Dataset::EisensteinWeight4,
        Dataset::EisensteinWeight1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Dataset::Delta => "delta",
            Dataset::Level11 => "level11",
            Dataset::EisensteinWeight4 => "e4",
            Dataset::EisensteinWeight1 => "e1chi4",
        }
    }

    /// Enough terms for every bundled check on this input.
    pub fn default_length(&self) -> usize {
        match self {
            Dataset::Delta => 3000,
            Dataset::Level11 => 20_000,
            Dataset::EisensteinWeight4 => 10_000,
            Dataset::EisensteinWeight1 => 5000,
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(self, Dataset::Delta | Dataset::Level11)
    }

    pub fn build(&self, x: usize) -> Result<CoefficientSequence, CoeffError> {
        let eta = |spec: &str| eta_product_expansion(&parse_eta_spec(spec)?, x)?.to_sequence();
        match self {
            Dataset::Delta => eta("1^24"),
            Dataset::Level11 => eta("1^2*11^2"),
            Dataset::EisensteinWeight4 => {
                let one = DirichletCharacter::trivial(1)?;
                eisenstein_coefficients(&one, &one, 4, x)
            }
            Dataset::EisensteinWeight1 => {
                let one = DirichletCharacter::trivial(1)?;
                eisenstein_coefficients(&one, &DirichletCharacter::new(4, 1)?, 1, x)
            }
        }
    }

    pub fn build_default(&self) -> Result<CoefficientSequence, CoeffError> {
        self.build(self.default_length())
    }

    /// Constant term making `a_0 + Σ a_n e(nz)` modular: `L(1−k, ξ₂)/2` here since `ξ₁` is trivial.
    pub fn constant_term(&self) -> f64 {
        match self {
            Dataset::EisensteinWeight4 => 1.0 / 240.0,
            Dataset::EisensteinWeight1 => 0.25,
            _ => 0.0,
        }
    }

    /// Untwisted root number for inputs whose FE cannot be solved by the cut-point method.
    /// Both Eisenstein datasets have `ε = 1`: the product of the Dirichlet root numbers of the
    /// factors `ζ` and `L(·, χ₄)`.
    pub fn known_eps1(&self) -> Option<num_complex::Complex64> {
        (!self.is_cuspidal()).then(|| num_complex::Complex64::new(1.0, 0.0))
    }

    /// The two characters an Eisenstein dataset is built from.
    pub fn eisenstein_characters(&self) -> Option<(DirichletCharacter, DirichletCharacter, u32)> {
        let one = DirichletCharacter::trivial(1).ok()?;
        match self {
            Dataset::EisensteinWeight4 => Some((one.clone(), one, 4)),
            Dataset::EisensteinWeight1 => Some((one, DirichletCharacter::new(4, 1).ok()?, 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dataset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown dataset {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn datasets_build() {
        for d in Dataset::ALL {
            let s = d.build(50).unwrap();
            assert_eq!(s.a(1), num_complex::Complex64::new(1.0, 0.0), "{d}");
            assert_eq!(d.name().parse::<Dataset>().unwrap(), d);
        }
        assert_eq!(Dataset::Delta.build(2).unwrap().a(2).re, -24.0);
        assert_eq!(Dataset::Level11.build(2).unwrap().level(), 11);
        let e1 = Dataset::EisensteinWeight1.build(10).unwrap();
        assert_eq!((e1.level(), e1.weight()), (4, 1));
        assert_eq!(e1.a(5).re, 2.0);
        assert!("nope".parse::<Dataset>().is_err());
    }
}
