//! Completed L-functions `Λ(s) = Γ_C(s + (k−1)/2) Σ λ_n n^{−s}` evaluated by splitting the
//! Mellin integral `Λ(s) = 2∫₀^∞ f(iy) y^w dy/y`, `w = s + (k−1)/2`, at a cut point `y0`.
//!
//! The upper piece is the rapidly convergent sum
//! `S(s; y0) = 2 Σ a_n (2πn)^{−w} Γ(w, 2πn·y0)`. If the functional equation
//! `Λ(s) = ε M^{1/2−s} conj(Λ(1−s̄))` holds, the lower piece equals
//! `ε M^{1/2−s} conj(S(1−s̄; 1/(M·y0)))` and the combination is independent of `y0`. That
//! independence is the operational test of the functional equation, and two cut points
//! determine `ε`.

mod dirichlet;
mod identities;

pub use dirichlet::{check_dq_fe, dq_fe_sides, ratio_dq, DirichletPolynomial};
pub use identities::{
    eisenstein_l_factorization, verify_ramanujan_twist, FactorizationReport, RamanujanTwistReport,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::chargroup::{CharError, DirichletCharacter};
use crate::coeffs::{twist_coefficients, CoeffError, CoefficientSequence};
use crate::report::Report;
use crate::special::{upper_incomplete_gamma, SpecialError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LfunError {
    #[error("insufficient coefficients: need X={required}, have {available}")]
    InsufficientCoefficients { required: usize, available: usize },
    #[error("degenerate cut pair y0={y0}, y1={y1} at s={s}")]
    DegenerateCutPair { s: Complex64, y0: f64, y1: f64 },
    #[error("cut point must be positive and finite, got {0}")]
    BadCutPoint(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q={q} divides the level {level}")]
    DividesLevel { q: u64, level: u64 },
    #[error("twisting character {0} is not primitive")]
    ImprimitiveTwist(String),
    #[error("grid is empty or degenerate: {0}")]
    DegenerateGrid(&'static str),
    #[error("Dirichlet polynomial has a term outside {{1, q, q²}}: n={0}")]
    UnsupportedSupport(u64),
    #[error("Dirichlet polynomial index must be positive")]
    ZeroIndex,
    #[error("|ξ(q)| must be 0 or 1, got {0}")]
    BadNebentypusValue(f64),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Character(#[from] CharError),
}

/// Absolute bound imposed on the truncation tail of every cut sum.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-16;

/// Points closer than this to a possible pole are dropped from FE grids.
pub const POLE_RADIUS: f64 = 0.1;

const POLE_CANDIDATES: [f64; 5] = [0.0, 1.0, -0.5, 0.5, 1.5];

pub fn default_s_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 2.0),
        Complex64::new(1.5, -1.0),
    ]
}

/// `{0.7, 1, 1.4} / √M`.
pub fn default_y_grid(level: u64) -> Vec<f64> {
    let r = (level as f64).sqrt();
    [0.7, 1.0, 1.4].iter().map(|y| y / r).collect()
}

/// `Λ` for a coefficient sequence or one of its twists by a primitive character.
#[derive(Debug, Clone)]
pub struct CompletedLFunction {
    seq: CoefficientSequence,
    twist: Option<DirichletCharacter>,
    tail_tol: f64,
}

/// One evaluation of `S(s; y0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSum {
    pub value: Complex64,
    /// Bound on the omitted terms `n > terms`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// The two halves `S(s; y0)` and `T(s; y0) = M^{1/2−s} conj(S(1−s̄; 1/(M y0)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeParts {
    pub s_part: Complex64,
    pub t_part: Complex64,
    pub terms: usize,
}

impl FeParts {
    pub fn combine(&self, epsilon: Complex64) -> Complex64 {
        self.s_part + epsilon * self.t_part
    }
}

impl CompletedLFunction {
    /// The untwisted function; the effective level is the level of the sequence.
    pub fn new(seq: CoefficientSequence) -> Self {
        CompletedLFunction {
            seq,
            twist: None,
            tail_tol: DEFAULT_TAIL_TOLERANCE,
        }
    }

    /// `Λ_χ` for primitive `χ mod q` with `gcd(q, N) = 1`; the effective level is `Nq²`.
    pub fn twisted(seq: &CoefficientSequence, chi: &DirichletCharacter) -> Result<Self, LfunError> {
        if chi.modulus() == 1 {
            return Ok(Self::new(seq.clone()));
        }
        if !chi.is_primitive() {
            return Err(LfunError::ImprimitiveTwist(chi.label()));
        }
        let twisted = twist_coefficients(seq, chi)?;
        Ok(CompletedLFunction {
            seq: twisted,
            twist: Some(chi.clone()),
            tail_tol: DEFAULT_TAIL_TOLERANCE,
        })
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Result<Self, LfunError> {
        if !(tol > 0.0) {
            return Err(LfunError::BadTolerance(tol));
        }
        self.tail_tol = tol;
        Ok(self)
    }

    pub fn sequence(&self) -> &CoefficientSequence {
        &self.seq
    }

    pub fn level(&self) -> u64 {
        self.seq.level()
    }

    pub fn weight(&self) -> u32 {
        self.seq.weight()
    }

    pub fn twist(&self) -> Option<&DirichletCharacter> {
        self.twist.as_ref()
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tol
    }

    /// Character tag: the twist label, or `1.0` for the untwisted function.
    pub fn tag(&self) -> String {
        self.twist
            .as_ref()
            .map_or_else(|| "1.0".to_string(), |c| c.label())
    }

    /// `ln` of a bound on `2 Σ_{n>x} |a_n| (2πn)^{−σ} Γ(σ, 2πn·y)` with `|a_n| ≤ C n^{k/2}`.
    ///
    /// Uses `Γ(σ, t) ≤ t^{σ−1} e^{−t} / (1 − (σ−1)/t)` for `t > σ−1`, after which consecutive
    /// terms shrink by at least a fixed ratio and the tail is dominated by a geometric series.
    fn ln_tail_bound(&self, x: usize, sigma: f64, y: f64) -> f64 {
        let half_k = self.weight() as f64 / 2.0;
        let n1 = (x + 1) as f64;
        let t = 2.0 * PI * n1 * y;
        let excess = (sigma - 1.0).max(0.0);
        if t <= excess + 1.0 {
            return f64::INFINITY;
        }
        let ln_first = 2f64.ln() + self.seq.growth_constant().ln() + half_k * n1.ln()
            - sigma * (2.0 * PI * n1).ln()
            + (sigma - 1.0) * t.ln()
            - t
            - (1.0 - excess / t).ln();
        let ln_ratio = (half_k - 1.0).max(0.0) * ((n1 + 1.0) / n1).ln() - 2.0 * PI * y;
        if ln_ratio >= 0.0 {
            return f64::INFINITY;
        }
        ln_first - (-ln_ratio.exp()).ln_1p()
    }

    /// Smallest truncation whose tail bound at `(Re w, y)` is below the tail tolerance.
    pub fn required_terms(&self, sigma: f64, y: f64) -> usize {
        let target = self.tail_tol.ln();
        let ok = |x: usize| self.ln_tail_bound(x, sigma, y) < target;
        let mut hi = 1usize;
        while !ok(hi) {
            hi *= 2;
            if hi > 1 << 40 {
                return usize::MAX;
            }
        }
        let mut lo = hi / 2;
        // invariant: ok(hi), and lo == 0 or !ok(lo)
        if lo > 0 && ok(lo) {
            lo = 0;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `S(s; y0) = 2 Σ_{n≤X} a_n (2πn)^{−w} Γ(w, 2πn·y0)` with `X` chosen from the tail bound.
    pub fn cut_sum(&self, s: Complex64, y0: f64) -> Result<CutSum, LfunError> {
        if !(y0 > 0.0 && y0.is_finite()) {
            return Err(LfunError::BadCutPoint(y0));
        }
        let w = s + (self.weight() as f64 - 1.0) / 2.0;
        let terms = self.required_terms(w.re, y0);
        if terms > self.seq.len() {
            return Err(LfunError::InsufficientCoefficients {
                required: terms,
                available: self.seq.len(),
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, a) in self.seq.values()[..terms].iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let x = 2.0 * PI * (i + 1) as f64;
            let g = upper_incomplete_gamma(w, x * y0)?;
            sum += a * (-w * x.ln()).exp() * g;
        }
        Ok(CutSum {
            value: 2.0 * sum,
            tail_bound: self.ln_tail_bound(terms, w.re, y0).exp(),
            terms,
        })
    }

    pub fn fe_parts(&self, s: Complex64, y0: f64) -> Result<FeParts, LfunError> {
        let m = self.level() as f64;
        let direct = self.cut_sum(s, y0)?;
        let dual = self.cut_sum(1.0 - s.conj(), 1.0 / (m * y0))?;
        let factor = ((0.5 - s) * m.ln()).exp();
        Ok(FeParts {
            s_part: direct.value,
            t_part: factor * dual.value.conj(),
            terms: direct.terms.max(dual.terms),
        })
    }

    /// `S(s; y0) + ε M^{1/2−s} conj(S(1−s̄; 1/(M·y0)))`; equals `Λ(s)` for every `y0` when `ε`
    /// is the root number.
    pub fn fe_value(
        &self,
        s: Complex64,
        epsilon: Complex64,
        y0: f64,
    ) -> Result<Complex64, LfunError> {
        Ok(self.fe_parts(s, y0)?.combine(epsilon))
    }

    /// `ε̂ = (S(s;y1) − S(s;y0)) / (T(s;y0) − T(s;y1))`.
    pub fn solve_epsilon(&self, s: Complex64, y0: f64, y1: f64) -> Result<Complex64, LfunError> {
        let p0 = self.fe_parts(s, y0)?;
        let p1 = self.fe_parts(s, y1)?;
        solve_from_parts(s, (y0, &p0), (y1, &p1))
    }

    /// Whether `s` is within [`POLE_RADIUS`] of a point where an untwisted weight ≤ 2
    /// function may have a pole.
    pub fn near_possible_pole(&self, s: Complex64) -> bool {
        self.twist.is_none()
            && self.weight() <= 2
            && POLE_CANDIDATES
                .iter()
                .any(|&p| (s - p).norm() < POLE_RADIUS)
    }

    /// Recovers `ε` from every `(s, y-pair)` and measures how well it explains the data.
    pub fn verify_fe(
        &self,
        s_grid: &[Complex64],
        y_grid: &[f64],
        tol: f64,
    ) -> Result<FEReport, LfunError> {
        if !(tol > 0.0) {
            return Err(LfunError::BadTolerance(tol));
        }
        let mut ys = y_grid.to_vec();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        if ys.len() < 2 {
            return Err(LfunError::DegenerateGrid(
                "y-grid needs two distinct points",
            ));
        }
        let (used, excluded): (Vec<Complex64>, Vec<Complex64>) =
            s_grid.iter().partition(|&&s| !self.near_possible_pole(s));
        if used.is_empty() {
            return Err(LfunError::DegenerateGrid(
                "no s-point away from possible poles",
            ));
        }
        let lf = if tol / 10.0 < self.tail_tol {
            self.clone().with_tail_tolerance(tol / 10.0)?
        } else {
            self.clone()
        };

        let per_s: Vec<Vec<FeParts>> = used
            .par_iter()
            .map(|&s| ys.iter().map(|&y| lf.fe_parts(s, y)).collect())
            .collect::<Result<_, _>>()?;

        let mut solves = Vec::new();
        for (&s, parts) in used.iter().zip(&per_s) {
            for i in 0..ys.len() {
                for j in i + 1..ys.len() {
                    solves.push(solve_from_parts(s, (ys[i], &parts[i]), (ys[j], &parts[j]))?);
                }
            }
        }
        let epsilon = complex_median(&solves);
        let max_dispersion = solves
            .iter()
            .map(|e| (e - epsilon).norm())
            .fold(0.0, f64::max);
        let max_residual = per_s
            .iter()
            .map(|parts| {
                let scale = parts
                    .iter()
                    .map(|p| p.s_part.norm() + p.t_part.norm())
                    .fold(0.0, f64::max);
                let first = parts[0].combine(epsilon);
                parts
                    .iter()
                    .map(|p| (p.combine(epsilon) - first).norm() / scale)
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let unimodularity_defect = (epsilon.norm() - 1.0).abs();
        let x_used = per_s.iter().flatten().map(|p| p.terms).max().unwrap_or(0);
        Ok(FEReport {
            epsilon,
            unimodularity_defect,
            max_residual,
            max_dispersion,
            passed: unimodularity_defect <= tol && max_residual <= tol && max_dispersion <= tol,
            tol,
            x_used,
            s_used: used,
            excluded,
            solves,
        })
    }
}

fn solve_from_parts(
    s: Complex64,
    (y0, p0): (f64, &FeParts),
    (y1, p1): (f64, &FeParts),
) -> Result<Complex64, LfunError> {
    let denom = p0.t_part - p1.t_part;
    if y0 == y1 || denom.norm() < 1e-13 {
        return Err(LfunError::DegenerateCutPair { s, y0, y1 });
    }
    Ok((p1.s_part - p0.s_part) / denom)
}

/// Componentwise median.
fn complex_median(values: &[Complex64]) -> Complex64 {
    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }
    Complex64::new(
        median(values.iter().map(|z| z.re).collect()),
        median(values.iter().map(|z| z.im).collect()),
    )
}

#[derive(Debug, Clone)]
pub struct FEReport {
    /// Median of the pairwise solves.
    pub epsilon: Complex64,
    pub unimodularity_defect: f64,
    /// Largest spread of `fe_value(s, ε̂, ·)` over the y-grid, relative to the size of its parts.
    pub max_residual: f64,
    /// Largest distance of a single `(s, y-pair)` solve from `ε̂`.
    pub max_dispersion: f64,
    pub passed: bool,
    pub tol: f64,
    pub x_used: usize,
    pub s_used: Vec<Complex64>,
    /// Grid points dropped as possible poles.
    pub excluded: Vec<Complex64>,
    pub solves: Vec<Complex64>,
}

impl FEReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.float("epsilon_re", self.epsilon.re)
            .float("epsilon_im", self.epsilon.im)
            .float("unimodularity_defect", self.unimodularity_defect)
            .float("max_dispersion", self.max_dispersion)
            .float("max_residual", self.max_residual)
            .text("X_used", self.x_used)
            .float("tol", self.tol)
            .text("s_points", self.s_used.len())
            .text("s_excluded", self.excluded.len());
        if !self.passed {
            r.fail();
            let reason = if self.max_dispersion > self.tol || self.max_residual > self.tol {
                "dispersion"
            } else {
                "unimodularity"
            };
            r.text("reason", reason);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chargroup::{enumerate_characters, gauss_sum};
    use crate::coeffs::{eisenstein_coefficients, eta_product_expansion, parse_eta_spec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eta_seq(spec: &str, x: usize) -> CoefficientSequence {
        eta_product_expansion(&parse_eta_spec(spec).unwrap(), x)
            .unwrap()
            .to_sequence()
            .unwrap()
    }

    fn delta() -> CompletedLFunction {
        CompletedLFunction::new(eta_seq("1^24", 1000))
    }

    /// `Δ(iy)` straight from the product `q ∏ (1 − qⁿ)^24`.
    fn delta_product(y: f64) -> f64 {
        let q = (-2.0 * PI * y).exp();
        let mut p = q;
        let mut qn = q;
        while qn > 1e-20 {
            p *= (1.0 - qn).powi(24);
            qn *= q;
        }
        p
    }

    #[test]
    fn delta_cut_sum_matches_quadrature() {
        // 2 ∫_1^∞ Δ(iy) y^6 dy / y by 16-point Gauss–Legendre panels on [1, 9]
        const NODES: [f64; 8] = [
            0.095_012_509_837_637_44,
            0.281_603_550_779_258_9,
            0.458_016_777_657_227_4,
            0.617_876_244_402_643_8,
            0.755_404_408_355_003,
            0.865_631_202_387_831_7,
            0.944_575_023_073_232_6,
            0.989_400_934_991_649_9,
        ];
        const WEIGHTS: [f64; 8] = [
            0.189_450_610_455_068_5,
            0.182_603_415_044_923_6,
            0.169_156_519_395_002_5,
            0.149_595_988_816_576_7,
            0.124_628_971_255_533_9,
            0.095_158_511_682_492_8,
            0.062_253_523_938_647_9,
            0.027_152_459_411_754_1,
        ];
        let panels = 400;
        let h = 8.0 / panels as f64;
        let mut integral = 0.0;
        for p in 0..panels {
            let mid = 1.0 + (p as f64 + 0.5) * h;
            for (t, w) in NODES.iter().zip(WEIGHTS) {
                for sign in [-1.0, 1.0] {
                    let y = mid + sign * 0.5 * h * t;
                    integral += w * 0.5 * h * delta_product(y) * y.powi(5);
                }
            }
        }
        let s = delta().cut_sum(c(0.5, 0.0), 1.0).unwrap();
        assert!(
            (s.value - c(2.0 * integral, 0.0)).norm() < 1e-9,
            "{} vs {}",
            s.value,
            2.0 * integral
        );
    }

    #[test]
    fn truncation_consistency() {
        let l = delta();
        let s = c(0.7, 1.3);
        let base = l.cut_sum(s, 0.8).unwrap();
        let mut sum = c(0.0, 0.0);
        let w = s + 5.5;
        for n in 1..=(base.terms + 100) {
            let x = 2.0 * PI * n as f64;
            sum += l.sequence().a(n)
                * (-w * x.ln()).exp()
                * upper_incomplete_gamma(w, x * 0.8).unwrap();
        }
        assert!((2.0 * sum - base.value).norm() <= base.tail_bound + 1e-15);
    }

    #[test]
    fn insufficient_coefficients_names_required_x() {
        let l = CompletedLFunction::new(eta_seq("1^24", 20));
        match l.cut_sum(c(0.5, 0.0), 0.1) {
            Err(LfunError::InsufficientCoefficients {
                required,
                available,
            }) => {
                assert!(required > 20);
                assert_eq!(available, 20);
                let again = CompletedLFunction::new(eta_seq("1^24", required));
                assert!(again.cut_sum(c(0.5, 0.0), 0.1).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eisenstein_cut_sum_decreases_in_y() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let e = CompletedLFunction::new(eisenstein_coefficients(&triv, &triv, 4, 2000).unwrap());
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let y = 0.3 + 0.1 * i as f64;
            let v = e.cut_sum(c(3.0, 0.0), y).unwrap().value;
            assert!(v.im.abs() < 1e-15 && v.re > 0.0);
            assert!(v.re < prev);
            prev = v.re;
        }
    }

    #[test]
    fn delta_cut_point_independence_and_sign() {
        let l = delta();
        let s = c(0.5, 0.0);
        let a = l.fe_value(s, c(1.0, 0.0), 1.0).unwrap();
        let b = l.fe_value(s, c(1.0, 0.0), 2.0).unwrap();
        assert!((a - b).norm() < 1e-10);
        let a = l.fe_value(s, c(-1.0, 0.0), 1.0).unwrap();
        let b = l.fe_value(s, c(-1.0, 0.0), 2.0).unwrap();
        assert!((a - b).norm() > 1e-4);
    }

    #[test]
    fn symmetric_cut_point() {
        let l = CompletedLFunction::new(eta_seq("1^2*11^2", 1000));
        let y = 1.0 / 11f64.sqrt();
        let s = c(0.8, 0.4);
        let eps = c(0.6, 0.8);
        let direct = l.cut_sum(s, y).unwrap().value;
        let dual = l.cut_sum(1.0 - s.conj(), y).unwrap().value;
        let expect = direct + eps * ((0.5 - s) * 11f64.ln()).exp() * dual.conj();
        assert!((l.fe_value(s, eps, y).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn delta_root_number() {
        let e = delta().solve_epsilon(c(0.5, 0.0), 0.7, 1.4).unwrap();
        assert!((e - 1.0).norm() < 1e-8, "{e}");
        let e = delta().solve_epsilon(c(1.5, -1.0), 0.8, 1.1).unwrap();
        assert!((e - 1.0).norm() < 1e-8, "{e}");
    }

    #[test]
    fn level_eleven_root_number_is_stable() {
        let l = CompletedLFunction::new(eta_seq("1^2*11^2", 1000));
        let r = 11f64.sqrt();
        let eps: Vec<Complex64> = [c(0.5, 0.0), c(0.5, 1.0), c(1.2, 0.0)]
            .iter()
            .map(|&s| l.solve_epsilon(s, 0.7 / r, 1.4 / r).unwrap())
            .collect();
        for e in &eps {
            assert!((e.norm() - 1.0).abs() < 1e-8, "{e}");
            assert!((e - eps[0]).norm() < 1e-6);
        }
    }

    #[test]
    fn twisted_eisenstein_root_number_matches_gauss_sums() {
        // L(s, E₄ ⊗ χ) = L(s + 3/2, χ) L(s − 3/2, χ); each Dirichlet factor contributes
        // τ(χ) / (i^δ √q)
        let triv = DirichletCharacter::trivial(1).unwrap();
        let e4 = eisenstein_coefficients(&triv, &triv, 4, 2000).unwrap();
        let chi = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        let l = CompletedLFunction::twisted(&e4, &chi).unwrap();
        assert_eq!(l.level(), 25);
        let eps = l.solve_epsilon(c(0.5, 0.0), 0.7 / 5.0, 1.4 / 5.0).unwrap();
        let delta = if chi.is_even() { 0 } else { 1 };
        let single = gauss_sum(&chi) / (Complex64::i().powi(delta) * 5f64.sqrt());
        assert!((eps - single * single).norm() < 1e-6, "{eps}");
    }

    #[test]
    fn verify_fe_delta() {
        let l = delta();
        let report = l
            .verify_fe(
                &[c(0.5, 0.0), c(0.5, 2.0), c(1.5, 0.0)],
                &[0.7, 1.0, 1.4],
                1e-8,
            )
            .unwrap();
        assert!(report.passed, "{report:?}");
        assert!((report.epsilon - 1.0).norm() < 1e-8);
        assert_eq!(report.solves.len(), 9);
    }

    #[test]
    fn verify_fe_flags_corruption() {
        let bad = eta_seq("1^24", 1000).perturbed(2, c(0.01, 0.0)).unwrap();
        let l = CompletedLFunction::new(bad);
        let report = l
            .verify_fe(&default_s_grid(), &default_y_grid(1), 1e-8)
            .unwrap();
        assert!(!report.passed);
        assert_eq!(report.to_report().get("reason"), Some("dispersion"));
    }

    #[test]
    fn verify_fe_weight_one_eisenstein_twist() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let odd4 = DirichletCharacter::new(4, 1).unwrap();
        let e1 = eisenstein_coefficients(&triv, &odd4, 1, 3000).unwrap();
        for chi in enumerate_characters(5)
            .unwrap()
            .into_iter()
            .filter(|c| !c.is_trivial())
        {
            let l = CompletedLFunction::twisted(&e1, &chi).unwrap();
            assert_eq!(l.level(), 100);
            let report = l
                .verify_fe(&default_s_grid(), &default_y_grid(l.level()), 1e-6)
                .unwrap();
            assert!(report.passed, "{}: {report:?}", chi.label());
            assert!(report.excluded.is_empty());
        }
    }

    #[test]
    fn pole_neighbourhoods_are_excluded_only_when_untwisted() {
        let l = CompletedLFunction::new(eta_seq("1^2*11^2", 1000));
        let report = l
            .verify_fe(&default_s_grid(), &default_y_grid(11), 1e-6)
            .unwrap();
        assert_eq!(report.excluded, vec![c(0.5, 0.0)]);
        assert!(report.passed, "{report:?}");
        assert!(!delta().near_possible_pole(c(0.5, 0.0)));
    }

    #[test]
    fn degenerate_inputs() {
        let l = delta();
        assert!(matches!(
            l.solve_epsilon(c(0.5, 0.0), 1.0, 1.0),
            Err(LfunError::DegenerateCutPair { .. })
        ));
        assert!(matches!(
            l.cut_sum(c(0.5, 0.0), 0.0),
            Err(LfunError::BadCutPoint(_))
        ));
        assert!(matches!(
            l.verify_fe(&default_s_grid(), &[1.0], 1e-8),
            Err(LfunError::DegenerateGrid(_))
        ));
        let imprim = DirichletCharacter::trivial(5).unwrap();
        assert!(matches!(
            CompletedLFunction::twisted(l.sequence(), &imprim),
            Err(LfunError::ImprimitiveTwist(_))
        ));
    }
}
