//! Eta products `∏ η(d·z)^{r_d}` expanded exactly through the pentagonal number theorem.

use std::fmt;

use crate::arith::{kronecker, lcm};
use crate::chargroup::{CharacterGroup, DirichletCharacter};
use crate::cyclo::{Cyclotomic, RootOfUnity};

use super::{CoeffError, CoefficientSequence};

/// One factor `η(scale·z)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaFactor {
    pub scale: u64,
    pub exponent: u32,
}

/// Parses `"1^24"` or `"1^2*11^2"`; a bare `"d"` means exponent 1.
pub fn parse_eta_spec(spec: &str) -> Result<Vec<EtaFactor>, CoeffError> {
    let bad = || CoeffError::BadEtaSpec(spec.to_string());
    let mut out = Vec::new();
    for part in spec.split('*') {
        let part = part.trim();
        let (d, r) = match part.split_once('^') {
            Some((d, r)) => (d, r),
            None => (part, "1"),
        };
        let scale: u64 = d.trim().parse().map_err(|_| bad())?;
        let exponent: u32 = r.trim().parse().map_err(|_| bad())?;
        if scale == 0 || exponent == 0 {
            return Err(bad());
        }
        out.push(EtaFactor { scale, exponent });
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// q-expansion of an eta product: `coefficients[j]` multiplies `q^{offset + j}`.
#[derive(Debug, Clone)]
pub struct EtaExpansion {
    pub factors: Vec<EtaFactor>,
    pub weight: u32,
    pub offset: i64,
    pub coefficients: Vec<i128>,
}

impl fmt::Display for EtaExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|e| format!("{}^{}", e.scale, e.exponent))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Expands `∏ η(d·z)^r` to `x` coefficients starting at `q^offset`, `offset = Σ d·r / 24`.
pub fn eta_product_expansion(factors: &[EtaFactor], x: usize) -> Result<EtaExpansion, CoeffError> {
    let dr: i64 = factors
        .iter()
        .map(|f| (f.scale * f.exponent as u64) as i64)
        .sum();
    if dr % 24 != 0 {
        return Err(CoeffError::NonIntegralOffset(dr));
    }
    let r_total: i64 = factors.iter().map(|f| f.exponent as i64).sum();
    if r_total % 2 != 0 {
        return Err(CoeffError::NonIntegralWeight(r_total));
    }
    let mut series = vec![0i128; x];
    if x > 0 {
        series[0] = 1;
    }
    for f in factors {
        let pent = pentagonal_series(f.scale as usize, x);
        for _ in 0..f.exponent {
            series = multiply_sparse(&series, &pent);
        }
    }
    Ok(EtaExpansion {
        factors: factors.to_vec(),
        weight: (r_total / 2) as u32,
        offset: dr / 24,
        coefficients: series,
    })
}

/// Nonzero terms of `∏_{n≥1} (1 − q^{d·n})` below `q^x`, as `(exponent, sign)`.
fn pentagonal_series(d: usize, x: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    let mut j = 1usize;
    loop {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let a = d * j * (3 * j - 1) / 2;
        let b = d * j * (3 * j + 1) / 2;
        if a >= x {
            break;
        }
        terms.push((a, sign));
        if b < x {
            terms.push((b, sign));
        }
        j += 1;
    }
    terms
}

fn multiply_sparse(dense: &[i128], sparse: &[(usize, i128)]) -> Vec<i128> {
    let x = dense.len();
    let mut out = vec![0i128; x];
    for &(e, c) in sparse {
        for i in 0..x - e.min(x) {
            out[i + e] += c * dense[i];
        }
    }
    out
}

impl EtaExpansion {
    /// Coefficient of `q^n`.
    pub fn coefficient(&self, n: i64) -> i128 {
        let j = n - self.offset;
        if j < 0 {
            return 0;
        }
        self.coefficients.get(j as usize).copied().unwrap_or(0)
    }

    /// Smallest `N`, a multiple of every scale, with `24 | N·Σ r_d/d`.
    pub fn level(&self) -> u64 {
        let base = self.factors.iter().fold(1, |acc, f| lcm(acc, f.scale));
        (1..=24u64)
            .map(|t| base * t)
            .find(|&n| {
                let s: u64 = self
                    .factors
                    .iter()
                    .map(|f| n / f.scale * f.exponent as u64)
                    .sum();
                s % 24 == 0
            })
            .unwrap_or(base * 24)
    }

    /// The character `n ↦ ((−1)^k s / n)` mod `N`, `s = ∏ d^{r_d}`.
    pub fn nebentypus(&self) -> Result<DirichletCharacter, CoeffError> {
        let level = self.level();
        // only the squarefree part of s matters on units
        let s: i64 = self
            .factors
            .iter()
            .filter(|f| f.exponent % 2 == 1)
            .map(|f| f.scale as i64)
            .product();
        let disc = if self.weight % 2 == 1 { -s } else { s };
        let symbol = |n: u64| -> Option<RootOfUnity> {
            match kronecker(disc, n) {
                1 => Some(RootOfUnity::ONE),
                -1 => Some(RootOfUnity::new(1, 2)),
                _ => None,
            }
        };
        let chi = CharacterGroup::new(level)?.from_generator_values(symbol)?;
        let consistent =
            (1..level).all(|n| chi.value(n as i64).map_or(true, |v| Some(v) == symbol(n)));
        if !consistent {
            return Err(CoeffError::EtaNebentypus(level));
        }
        Ok(chi)
    }

    /// The normalized sequence `a_n` (requires the expansion to start at `q^1`).
    pub fn to_sequence(&self) -> Result<CoefficientSequence, CoeffError> {
        if self.offset != 1 {
            return Err(CoeffError::EtaOffset(self.offset));
        }
        let exact = self
            .coefficients
            .iter()
            .map(|&c| Cyclotomic::from_int(c))
            .collect();
        CoefficientSequence::from_exact(self.weight, self.level(), self.nebentypus()?, exact)
    }
}
