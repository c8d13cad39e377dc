//! `C_χ`, `Ĉ_q(a) = φ(q)^{−1} Σ_χ C_χ χ̄(a)` and `S_q(x) = Σ_{(a,q)=1} Ĉ_q(a) e((a−1)x/q)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{gcd, is_prime, modulo};
use crate::chargroup::{enumerate_characters, gauss_sum, DirichletCharacter};
use crate::coeffs::CoefficientSequence;
use crate::lfun::{default_s_grid, CompletedLFunction, FEReport};
use crate::report::Report;

use super::ModularError;

/// Unimodularity slack accepted on solver output.
const UNIMODULAR_SLACK: f64 = 1e-6;

fn check_unimodular(label: impl Into<String>, eps: Complex64) -> Result<(), ModularError> {
    if (eps.norm() - 1.0).abs() > UNIMODULAR_SLACK {
        return Err(ModularError::NotUnimodular {
            label: label.into(),
            modulus: eps.norm(),
        });
    }
    Ok(())
}

/// `C_χ = conj(ξ(q))` for trivial `χ`, otherwise `χ(−N) ε₁ conj(ε_χ τ(χ̄)/τ(χ))`.
pub fn compute_c_chi(
    chi: &DirichletCharacter,
    xi: &DirichletCharacter,
    eps1: Complex64,
    eps_chi: Complex64,
    level: u64,
) -> Result<Complex64, ModularError> {
    let q = chi.modulus();
    if gcd(q, level) != 1 {
        return Err(ModularError::DividesLevel { q, level });
    }
    if chi.is_trivial() {
        return Ok(xi.eval(q as i64).conj());
    }
    check_unimodular("1", eps1)?;
    check_unimodular(chi.label(), eps_chi)?;
    let ratio = gauss_sum(&chi.conj()) / gauss_sum(chi);
    Ok(chi.eval(-(level as i64)) * eps1 * (eps_chi * ratio).conj())
}

fn check_c_values(q: u64, values: &[(DirichletCharacter, Complex64)]) -> Result<(), ModularError> {
    let expected = enumerate_characters(q)?.len();
    let mut seen: Vec<usize> = values
        .iter()
        .filter(|(chi, _)| chi.modulus() == q)
        .map(|(chi, _)| chi.index())
        .collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != expected || values.len() != expected {
        return Err(ModularError::IncompleteCValues {
            expected,
            got: seen.len(),
        });
    }
    Ok(())
}

/// `Ĉ_q(a)`; `values` must hold exactly one entry per character mod `q`.
pub fn c_hat(
    q: u64,
    a: i64,
    values: &[(DirichletCharacter, Complex64)],
) -> Result<Complex64, ModularError> {
    check_c_values(q, values)?;
    if gcd(q, modulo(a, q)) != 1 && q > 1 {
        return Err(ModularError::NotCoprime { q, na: a });
    }
    let sum: Complex64 = values.iter().map(|(chi, c)| c * chi.eval(a).conj()).sum();
    Ok(sum / values.len() as f64)
}

/// `S_q(x)`.
pub fn s_q(
    q: u64,
    x: i64,
    values: &[(DirichletCharacter, Complex64)],
) -> Result<Complex64, ModularError> {
    check_c_values(q, values)?;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 1..=q as i64 {
        if gcd(q, a as u64) != 1 {
            continue;
        }
        let ch = c_hat(q, a, values)?;
        let phase = 2.0 * PI * (modulo((a - 1) * x, q) as f64) / q as f64;
        total += ch * Complex64::from_polar(1.0, phase);
    }
    Ok(total)
}

/// Grids for the root-number solves. The y-grid is given in units of `1/√M` with `M` the
/// level of the function being solved.
///
/// `eps1` supplies the untwisted root number when it cannot be solved for, as for Eisenstein
/// series whose constant term spoils the cut-point form; twisted root numbers are always solved.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub s_grid: Vec<Complex64>,
    pub y_scales: Vec<f64>,
    pub fe_tol: f64,
    pub eps1: Option<Complex64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            s_grid: default_s_grid(),
            y_scales: vec![0.7, 1.0, 1.4],
            fe_tol: 1e-6,
            eps1: None,
        }
    }
}

impl SolverConfig {
    fn y_grid(&self, level: u64) -> Vec<f64> {
        let r = (level as f64).sqrt();
        self.y_scales.iter().map(|y| y / r).collect()
    }
}

/// `ε₁` and one `ε_χ` per nontrivial `χ mod q`, each with the FE report it came from.
#[derive(Debug, Clone)]
pub struct RootNumbers {
    pub q: u64,
    pub eps1: Complex64,
    /// `None` when `ε₁` was supplied rather than solved.
    pub untwisted: Option<FEReport>,
    pub twisted: Vec<(DirichletCharacter, FEReport)>,
}

impl RootNumbers {
    pub fn eps1(&self) -> Complex64 {
        self.eps1
    }

    pub fn eps(&self, chi: &DirichletCharacter) -> Option<Complex64> {
        self.twisted
            .iter()
            .find(|(c, _)| c == chi)
            .map(|(_, r)| r.epsilon)
    }

    /// Replaces `ε_χ` by `factor · ε_χ`.
    pub fn scaled(&self, chi: &DirichletCharacter, factor: Complex64) -> Self {
        let mut out = self.clone();
        for (c, r) in &mut out.twisted {
            if c == chi {
                r.epsilon *= factor;
            }
        }
        out
    }
}

fn check_q(seq: &CoefficientSequence, q: u64) -> Result<(), ModularError> {
    if !is_prime(q) {
        return Err(ModularError::NotPrime(q));
    }
    if seq.level() % q == 0 {
        return Err(ModularError::DividesLevel {
            q,
            level: seq.level(),
        });
    }
    Ok(())
}

/// Solves the functional equation of `Λ` and of every nontrivial twist mod `q`.
pub fn solve_root_numbers(
    seq: &CoefficientSequence,
    q: u64,
    config: &SolverConfig,
) -> Result<RootNumbers, ModularError> {
    check_q(seq, q)?;
    let solve = |chi: &DirichletCharacter| -> Result<FEReport, ModularError> {
        let wrap = |source| ModularError::Solver {
            character: chi.label(),
            source,
        };
        let lf = CompletedLFunction::twisted(seq, chi).map_err(wrap)?;
        lf.verify_fe(&config.s_grid, &config.y_grid(lf.level()), config.fe_tol)
            .map_err(wrap)
    };
    let untwisted = match config.eps1 {
        Some(_) => None,
        None => Some(solve(&DirichletCharacter::trivial(1)?)?),
    };
    let eps1 = config
        .eps1
        .or(untwisted.as_ref().map(|r| r.epsilon))
        .expect("one of the two is set");
    let twisted = enumerate_characters(q)?
        .into_par_iter()
        .filter(|chi| !chi.is_trivial())
        .map(|chi| solve(&chi).map(|r| (chi, r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RootNumbers {
        q,
        eps1,
        untwisted,
        twisted,
    })
}

#[derive(Debug, Clone)]
pub struct SqReport {
    pub q: u64,
    pub c_values: Vec<(DirichletCharacter, Complex64)>,
    /// `S_q(x)` for `x = 0, …, q−1`.
    pub s_values: Vec<Complex64>,
    /// `conj(ξ(q))`, the constant `S_q` must equal; it is 1 for trivial `ξ`.
    pub target: Complex64,
    pub max_deviation: f64,
    /// Whether every FE solve feeding the C values passed its own tolerance.
    pub fe_passed: bool,
    pub eps1_solved: bool,
    pub tol: f64,
    pub passed: bool,
}

impl SqReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("q", self.q)
            .float("target_re", self.target.re)
            .float("target_im", self.target.im);
        for (chi, c) in &self.c_values {
            r.float(&format!("C_{}_re", chi.label()), c.re)
                .float(&format!("C_{}_im", chi.label()), c.im);
        }
        for (x, s) in self.s_values.iter().enumerate() {
            r.float(&format!("S_{x}_re"), s.re)
                .float(&format!("S_{x}_im"), s.im);
        }
        r.float("max_deviation", self.max_deviation)
            .text("fe_passed", self.fe_passed)
            .text(
                "eps1_source",
                if self.eps1_solved {
                    "solved"
                } else {
                    "supplied"
                },
            )
            .float("tol", self.tol);
        if !self.passed {
            r.text(
                "reason",
                if self.fe_passed {
                    "sq_deviation"
                } else {
                    "fe_solve"
                },
            )
            .fail();
        }
        r
    }
}

/// Builds `C_χ` from recovered root numbers and evaluates `S_q` at every residue.
pub fn sq_from_root_numbers(
    seq: &CoefficientSequence,
    roots: &RootNumbers,
    tol: f64,
) -> Result<SqReport, ModularError> {
    let q = roots.q;
    check_q(seq, q)?;
    let xi = seq.nebentypus();
    let eps1 = roots.eps1();
    let mut c_values = Vec::new();
    for chi in enumerate_characters(q)? {
        let eps_chi = if chi.is_trivial() {
            eps1
        } else {
            roots.eps(&chi).ok_or(ModularError::IncompleteCValues {
                expected: roots.twisted.len() + 1,
                got: roots.twisted.len(),
            })?
        };
        let c = compute_c_chi(&chi, xi, eps1, eps_chi, seq.level())?;
        c_values.push((chi, c));
    }
    let s_values = (0..q as i64)
        .map(|x| s_q(q, x, &c_values))
        .collect::<Result<Vec<_>, _>>()?;
    let target = xi.eval(q as i64).conj();
    let max_deviation = s_values
        .iter()
        .map(|s| (s - target).norm())
        .fold(0.0, f64::max);
    let fe_passed = roots.untwisted.as_ref().map_or(true, |r| r.passed)
        && roots.twisted.iter().all(|(_, r)| r.passed);
    Ok(SqReport {
        q,
        c_values,
        s_values,
        target,
        max_deviation,
        fe_passed,
        eps1_solved: roots.untwisted.is_some(),
        tol,
        passed: fe_passed && max_deviation <= tol,
    })
}

/// Recovers every root number from the data and checks `S_q(x) = conj(ξ(q))` for all `x`.
pub fn verify_sq_equals_one(
    seq: &CoefficientSequence,
    q: u64,
    config: &SolverConfig,
    tol: f64,
) -> Result<SqReport, ModularError> {
    let roots = solve_root_numbers(seq, q, config)?;
    sq_from_root_numbers(seq, &roots, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{eta_product_expansion, parse_eta_spec};

    fn ones(q: u64) -> Vec<(DirichletCharacter, Complex64)> {
        enumerate_characters(q)
            .unwrap()
            .into_iter()
            .map(|c| (c, Complex64::new(1.0, 0.0)))
            .collect()
    }

    fn eta_seq(spec: &str, x: usize) -> CoefficientSequence {
        eta_product_expansion(&parse_eta_spec(spec).unwrap(), x)
            .unwrap()
            .to_sequence()
            .unwrap()
    }

    #[test]
    fn constant_c_values() {
        for q in [3u64, 5, 7, 11] {
            let v = ones(q);
            for a in 1..q as i64 {
                let ch = c_hat(q, a, &v).unwrap();
                let expect = if a == 1 { 1.0 } else { 0.0 };
                assert!((ch - expect).norm() < 1e-12);
            }
            for x in 0..q as i64 {
                assert!((s_q(q, x, &v).unwrap() - 1.0).norm() < 1e-12);
            }
        }
        let mut v = ones(5);
        v.pop();
        assert!(matches!(
            s_q(5, 0, &v),
            Err(ModularError::IncompleteCValues {
                expected: 4,
                got: 3
            })
        ));
        assert!(matches!(
            c_hat(5, 5, &ones(5)),
            Err(ModularError::NotCoprime { .. })
        ));
    }

    #[test]
    fn c_chi_examples() {
        let one = Complex64::new(1.0, 0.0);
        let triv1 = DirichletCharacter::trivial(1).unwrap();
        let t5 = DirichletCharacter::trivial(5).unwrap();
        assert_eq!(compute_c_chi(&t5, &triv1, one, one, 1).unwrap(), one);
        let quad = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        assert!((compute_c_chi(&quad, &triv1, one, one, 1).unwrap() - one).norm() < 1e-12);
        for chi in enumerate_characters(7).unwrap() {
            let e = Complex64::from_polar(1.0, 0.7);
            let c = compute_c_chi(&chi, &triv1, e, e.conj(), 1).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            compute_c_chi(&quad, &triv1, one, Complex64::new(1.1, 0.0), 1),
            Err(ModularError::NotUnimodular { .. })
        ));
        assert!(matches!(
            compute_c_chi(&quad, &triv1, one, one, 10),
            Err(ModularError::DividesLevel { .. })
        ));
    }

    #[test]
    fn delta_sq_is_one_and_sign_flip_breaks_it() {
        let delta = eta_seq("1^24", 3000);
        let roots = solve_root_numbers(&delta, 5, &SolverConfig::default()).unwrap();
        let r = sq_from_root_numbers(&delta, &roots, 1e-6).unwrap();
        assert!(r.passed, "{}", r.to_report());
        let chi = roots.twisted[0].0.clone();
        let flipped = roots.scaled(&chi, Complex64::new(-1.0, 0.0));
        let bad = sq_from_root_numbers(&delta, &flipped, 1e-6).unwrap();
        assert!(bad.max_deviation > 0.1 && !bad.passed);
    }

    #[test]
    fn level_eleven_sq() {
        let f = eta_seq("1^2*11^2", 6000);
        let r = verify_sq_equals_one(&f, 3, &SolverConfig::default(), 1e-5).unwrap();
        assert!(r.passed, "{}", r.to_report());
        assert!(matches!(
            verify_sq_equals_one(&f, 11, &SolverConfig::default(), 1e-5),
            Err(ModularError::DividesLevel { .. })
        ));
    }
}
