//! Evaluating `f(z) = Σ a_n e(nz)` on the upper half-plane and acting on it by matrices.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coeffs::CoefficientSequence;
use crate::report::Report;

use super::matrix::{gamma_qa, IntegerMatrix2x2};
use super::ModularError;

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub error: f64,
    pub terms: usize,
}

/// `ln` of `C Σ_{n>x} n^{k/2} e^{−2πny}` bounded by a geometric series from its first term.
fn ln_fourier_tail(seq: &CoefficientSequence, x: usize, y: f64) -> f64 {
    let half_k = seq.weight() as f64 / 2.0;
    let n1 = (x + 1) as f64;
    let ln_ratio = half_k * ((n1 + 1.0) / n1).ln() - 2.0 * PI * y;
    if ln_ratio >= 0.0 {
        return f64::INFINITY;
    }
    seq.growth_constant().ln() + half_k * n1.ln() - 2.0 * PI * n1 * y - (-ln_ratio.exp()).ln_1p()
}

/// Partial sum `Σ_{n≤X} a_n e(nz)` with the tail bound `C Σ_{n>X} n^{k/2} e^{−2πn Im z}` plus a
/// rounding estimate.
pub fn evaluate_fourier(
    seq: &CoefficientSequence,
    z: Complex64,
    x: usize,
) -> Result<Evaluated, ModularError> {
    if !(z.im > 0.0) {
        return Err(ModularError::NotInUpperHalfPlane(z));
    }
    if x > seq.len() {
        return Err(ModularError::InsufficientCoefficients {
            required: x,
            available: seq.len(),
        });
    }
    let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for (i, a) in seq.values()[..x].iter().enumerate() {
        // recompute the power directly now and then to keep the running product accurate
        qn = if i % 64 == 0 {
            (Complex64::new(0.0, 2.0 * PI * (i + 1) as f64) * z).exp()
        } else {
            qn * q
        };
        let t = a * qn;
        magnitude += t.norm();
        sum += t;
    }
    let rounding = 8.0 * f64::EPSILON * (x.max(1) as f64).sqrt() * magnitude;
    Ok(Evaluated {
        value: sum,
        error: ln_fourier_tail(seq, x, z.im).exp() + rounding,
        terms: x,
    })
}

/// Smallest `X` whose Fourier tail bound at height `y` is below `tol`.
pub fn required_fourier_terms(seq: &CoefficientSequence, y: f64, tol: f64) -> usize {
    let target = tol.ln();
    let ok = |x: usize| ln_fourier_tail(seq, x, y) < target;
    let mut hi = 1usize;
    while !ok(hi) {
        hi *= 2;
        if hi > 1 << 40 {
            return usize::MAX;
        }
    }
    let mut lo = if hi > 1 && !ok(hi / 2) { hi / 2 } else { 0 };
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

/// A function on the upper half-plane that can be evaluated with an error bound and slashed.
pub trait ModularFunction: Sync {
    fn weight(&self) -> u32;
    fn eval(&self, z: Complex64) -> Result<Evaluated, ModularError>;
}

/// `f(z) = a_0 + Σ a_n e(nz)`, truncated per point so the tail stays below `tol`.
#[derive(Debug, Clone)]
pub struct FourierSeries<'a> {
    seq: &'a CoefficientSequence,
    constant: Complex64,
    tol: f64,
}

impl<'a> FourierSeries<'a> {
    pub fn new(seq: &'a CoefficientSequence, tol: f64) -> Self {
        FourierSeries {
            seq,
            constant: Complex64::new(0.0, 0.0),
            tol,
        }
    }

    /// Adds `a_0`; Eisenstein series are modular only with their constant term.
    pub fn with_constant(mut self, a0: Complex64) -> Self {
        self.constant = a0;
        self
    }

    pub fn sequence(&self) -> &CoefficientSequence {
        self.seq
    }
}

impl ModularFunction for FourierSeries<'_> {
    fn weight(&self) -> u32 {
        self.seq.weight()
    }

    fn eval(&self, z: Complex64) -> Result<Evaluated, ModularError> {
        if !(z.im > 0.0) {
            return Err(ModularError::NotInUpperHalfPlane(z));
        }
        let x = required_fourier_terms(self.seq, z.im, self.tol);
        if x > self.seq.len() {
            return Err(ModularError::InsufficientCoefficients {
                required: x,
                available: self.seq.len(),
            });
        }
        let mut v = evaluate_fourier(self.seq, z, x)?;
        v.value += self.constant;
        Ok(v)
    }
}

/// `f|γ`.
#[derive(Debug, Clone)]
pub struct Slashed<F> {
    inner: F,
    gamma: IntegerMatrix2x2,
}

impl<F: ModularFunction> Slashed<F> {
    pub fn new(inner: F, gamma: IntegerMatrix2x2) -> Result<Self, ModularError> {
        if gamma.det() <= 0 {
            return Err(ModularError::NonPositiveDeterminant(gamma));
        }
        Ok(Slashed { inner, gamma })
    }
}

impl<F: ModularFunction> ModularFunction for Slashed<F> {
    fn weight(&self) -> u32 {
        self.inner.weight()
    }

    fn eval(&self, z: Complex64) -> Result<Evaluated, ModularError> {
        slash(&self.inner, &self.gamma, z)
    }
}

/// `(f|γ)(z) = (det γ)^{k/2} (cz + d)^{−k} f((az + b)/(cz + d))`.
pub fn slash<F: ModularFunction + ?Sized>(
    f: &F,
    gamma: &IntegerMatrix2x2,
    z: Complex64,
) -> Result<Evaluated, ModularError> {
    let det = gamma.det();
    if det <= 0 {
        return Err(ModularError::NonPositiveDeterminant(*gamma));
    }
    let j = gamma.automorphy(z);
    if j.norm() == 0.0 {
        return Err(ModularError::NotInUpperHalfPlane(z));
    }
    let k = f.weight() as i32;
    let factor = (det as f64).powf(k as f64 / 2.0) * j.powi(-k);
    let inner = f.eval(gamma.act(z))?;
    Ok(Evaluated {
        value: factor * inner.value,
        error: factor.norm() * inner.error,
        terms: inner.terms,
    })
}

#[derive(Debug, Clone)]
pub struct ModularityReport {
    pub gamma: IntegerMatrix2x2,
    /// `conj(ξ(a))` with `a` the top-left entry.
    pub multiplier: Complex64,
    pub max_deviation: f64,
    /// Largest combined evaluation error bound over the points.
    pub max_error_bound: f64,
    pub points: usize,
    pub passed: bool,
    pub tol: f64,
}

impl ModularityReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("gamma", self.gamma)
            .float("multiplier_re", self.multiplier.re)
            .float("multiplier_im", self.multiplier.im)
            .float("max_deviation", self.max_deviation)
            .float("max_error_bound", self.max_error_bound)
            .text("points", self.points)
            .float("tol", self.tol);
        if !self.passed {
            r.text("reason", "modularity").fail();
        }
        r
    }
}

/// `max_z |(f|γ)(z) − conj(ξ(a)) f(z)|` for `γ = (a, b; c, d) ∈ Γ_0(N)`; passes when the
/// deviation is within `tol` plus the evaluation error bounds.
pub fn modularity_check(
    seq: &CoefficientSequence,
    gamma: &IntegerMatrix2x2,
    z_points: &[Complex64],
    tol: f64,
) -> Result<ModularityReport, ModularError> {
    modularity_check_with_constant(seq, Complex64::new(0.0, 0.0), gamma, z_points, tol)
}

/// [`modularity_check`] for `a_0 + Σ a_n e(nz)`.
pub fn modularity_check_with_constant(
    seq: &CoefficientSequence,
    a0: Complex64,
    gamma: &IntegerMatrix2x2,
    z_points: &[Complex64],
    tol: f64,
) -> Result<ModularityReport, ModularError> {
    let n = seq.level();
    if !gamma.in_gamma0(n) {
        return Err(ModularError::NotInGamma0 {
            gamma: *gamma,
            level: n,
        });
    }
    if z_points.is_empty() {
        return Err(ModularError::EmptyPoints);
    }
    let xi_a = seq.nebentypus().eval(gamma.a);
    let multiplier = xi_a.conj();
    let f = FourierSeries::new(seq, tol / 100.0).with_constant(a0);
    let rows: Vec<(f64, f64)> = z_points
        .par_iter()
        .map(|&z| {
            let lhs = slash(&f, gamma, z)?;
            let rhs = f.eval(z)?;
            Ok((
                (lhs.value - multiplier * rhs.value).norm(),
                lhs.error + rhs.error,
            ))
        })
        .collect::<Result<_, ModularError>>()?;
    let passed = rows.iter().all(|(dev, err)| *dev <= tol + err);
    Ok(ModularityReport {
        gamma: *gamma,
        multiplier,
        max_deviation: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        max_error_bound: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        points: rows.len(),
        passed,
        tol,
    })
}

/// Points `z` with `Im z` and `Im γz` both of order `1/|c|`, so that evaluating on either side
/// needs few coefficients: `z = −d/c + (t + i)/|c|` gives `Im γz = Im z / (1 + t²)`.
pub fn balanced_points(gamma: &IntegerMatrix2x2, offsets: &[f64]) -> Vec<Complex64> {
    if gamma.c == 0 {
        return offsets.iter().map(|&t| Complex64::new(t, 1.0)).collect();
    }
    let c = gamma.c as f64;
    let base = -(gamma.d as f64) / c;
    offsets
        .iter()
        .map(|&t| Complex64::new(base + t / c.abs(), 1.0 / c.abs()))
        .collect()
}

/// The first `n_max` Fourier coefficients of `f|γ`, from the trapezoidal rule on
/// `x ∈ [0, 1)` at height `y`: `a_n = ∫ (f|γ)(x + iy) e(−n(x + iy)) dx`.
pub fn slash_fourier_coefficients<F: ModularFunction>(
    f: &F,
    gamma: &IntegerMatrix2x2,
    y: f64,
    nodes: usize,
    n_max: usize,
) -> Result<Vec<Complex64>, ModularError> {
    let samples: Vec<Complex64> = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::new(j as f64 / nodes as f64, y);
            slash(f, gamma, z).map(|e| e.value)
        })
        .collect::<Result<_, _>>()?;
    Ok((1..=n_max)
        .map(|n| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let x = j as f64 / nodes as f64;
                    v * Complex64::from_polar(1.0, -2.0 * PI * n as f64 * x)
                })
                .sum();
            s / nodes as f64 * (2.0 * PI * n as f64 * y).exp()
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SlashCoefficientReport {
    pub gamma: IntegerMatrix2x2,
    /// Largest `|a_n − conj(ξ(q)) f_n| / n^{(k−1)/2}` over `n ≤ n_max`.
    pub max_deviation: f64,
    pub n_max: usize,
    pub passed: bool,
}

impl SlashCoefficientReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("gamma", self.gamma)
            .text("n_max", self.n_max)
            .float("max_coefficient_deviation", self.max_deviation);
        if !self.passed {
            r.text("reason", "slash_coefficients").fail();
        }
        r
    }
}

/// Recovers the Fourier coefficients of `f|γ_{q,b}` and compares them with `conj(ξ(q)) f_n`.
///
/// Deviations are measured in the normalization `λ_n = a_n n^{−(k−1)/2}`.
pub fn check_slash_coefficients(
    seq: &CoefficientSequence,
    a0: Complex64,
    q: u64,
    b: i64,
    y: f64,
    nodes: usize,
    n_max: usize,
    tol: f64,
) -> Result<SlashCoefficientReport, ModularError> {
    let gamma = gamma_qa(q, b, seq.level())?;
    let f = FourierSeries::new(seq, 1e-14).with_constant(a0);
    let coeffs = slash_fourier_coefficients(&f, &gamma, y, nodes, n_max)?;
    let mult = seq.nebentypus().eval(q as i64).conj();
    let half = (seq.weight() as f64 - 1.0) / 2.0;
    let max_deviation = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = (i + 1) as f64;
            (a - mult * seq.a(i + 1)).norm() / n.powf(half)
        })
        .fold(0.0, f64::max);
    Ok(SlashCoefficientReport {
        gamma,
        max_deviation,
        n_max,
        passed: max_deviation < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chargroup::DirichletCharacter;
    use crate::coeffs::{eta_product_expansion, parse_eta_spec};
    use crate::modular::matrix::complete_bottom_row;
    use rand::{Rng, SeedableRng};

    fn eta_seq(spec: &str, x: usize) -> CoefficientSequence {
        eta_product_expansion(&parse_eta_spec(spec).unwrap(), x)
            .unwrap()
            .to_sequence()
            .unwrap()
    }

    /// `η(z)^24` from the product, for comparison.
    fn delta_product(z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut p = q;
        let mut qn = q;
        while qn.norm() > 1e-20 {
            p *= (1.0 - qn).powi(24);
            qn *= q;
        }
        p
    }

    #[test]
    fn single_term_series() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let mut values = vec![Complex64::new(0.0, 0.0); 50];
        values[0] = Complex64::new(1.0, 0.0);
        let seq = CoefficientSequence::new(12, 1, triv, values, Some(1.0)).unwrap();
        let z = Complex64::new(0.3, 0.4);
        let v = evaluate_fourier(&seq, z, 50).unwrap();
        let expect = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        assert!((v.value - expect).norm() < 1e-15);
    }

    #[test]
    fn delta_matches_eta_product() {
        let seq = eta_seq("1^24", 1000);
        for z in [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.37, 0.3),
            Complex64::new(-0.2, 0.1),
        ] {
            let v = FourierSeries::new(&seq, 1e-16).eval(z).unwrap();
            let p = delta_product(z);
            assert!((v.value - p).norm() < 1e-10 * p.norm().max(1e-3), "z={z}");
            assert!(v.error < 1e-10);
        }
    }

    #[test]
    fn tail_bound_shrinks_with_height() {
        let seq = eta_seq("1^24", 200);
        let a = evaluate_fourier(&seq, Complex64::new(0.1, 0.2), 100).unwrap();
        let b = evaluate_fourier(&seq, Complex64::new(0.1, 0.4), 100).unwrap();
        assert!(b.error < a.error);
    }

    #[test]
    fn slash_examples() {
        let seq = eta_seq("1^24", 1000);
        let f = FourierSeries::new(&seq, 1e-16);
        let z = Complex64::new(0.0, 1.0);
        let id = slash(&f, &IntegerMatrix2x2::IDENTITY, z).unwrap();
        assert_eq!(id.value, f.eval(z).unwrap().value);
        let s = IntegerMatrix2x2::new(0, -1, 1, 0);
        let v = slash(&f, &s, z).unwrap();
        assert!((v.value - f.eval(z).unwrap().value).norm() < 1e-15);
        assert!(slash(&f, &IntegerMatrix2x2::new(1, 0, 0, -1), z).is_err());
    }

    #[test]
    fn slash_cocycle_on_gamma0_11() {
        let seq = eta_seq("1^2*11^2", 4000);
        let f = FourierSeries::new(&seq, 1e-14);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let z = Complex64::new(0.3, 1.1);
        let mut done = 0;
        while done < 20 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let c = 11 * rng.gen_range(-1i64..=1);
                let d = rng.gen_range(-6i64..=6);
                complete_bottom_row(c, d)
            };
            let (Some(g1), Some(g2)) = (pick(&mut rng), pick(&mut rng)) else {
                continue;
            };
            let two_step = Slashed::new(Slashed::new(f.clone(), g1).unwrap(), g2).unwrap();
            let (Ok(a), Ok(b)) = (two_step.eval(z), slash(&f, &g1.mul(&g2), z)) else {
                continue;
            };
            assert!(
                (a.value - b.value).norm() <= 1e-10 + a.error + b.error,
                "{g1} {g2}"
            );
            done += 1;
        }
    }

    #[test]
    fn delta_modularity() {
        let seq = eta_seq("1^24", 1000);
        let s = IntegerMatrix2x2::new(0, -1, 1, 0);
        let r = modularity_check(&seq, &s, &[Complex64::new(0.2, 1.3)], 1e-9).unwrap();
        assert!(r.passed && r.max_deviation < 1e-9, "{r:?}");
        let t = modularity_check(
            &seq,
            &IntegerMatrix2x2::translation(),
            &[Complex64::new(0.2, 0.5)],
            1e-12,
        )
        .unwrap();
        assert!(t.passed);
    }

    #[test]
    fn level_eleven_modularity() {
        let seq = eta_seq("1^2*11^2", 3000);
        let g = IntegerMatrix2x2::new(3, -1, -11, 4);
        let r = modularity_check(&seq, &g, &[Complex64::new(0.1, 1.5)], 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
        let pts = balanced_points(&g, &[-0.3, 0.0, 0.4]);
        let r = modularity_check(&seq, &g, &pts, 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
        // corrupt a coefficient and the check fails
        let bad = seq.perturbed(3, Complex64::new(0.5, 0.0)).unwrap();
        let r = modularity_check(&bad, &g, &pts, 1e-7).unwrap();
        assert!(!r.passed);
        assert!(matches!(
            modularity_check(&seq, &IntegerMatrix2x2::new(1, 0, 2, 1), &pts, 1e-7),
            Err(ModularError::NotInGamma0 { .. })
        ));
    }

    #[test]
    fn slash_coefficients_match() {
        let delta = eta_seq("1^24", 2000);
        let r =
            check_slash_coefficients(&delta, Complex64::new(0.0, 0.0), 5, 2, 0.2, 256, 10, 1e-5)
                .unwrap();
        assert!(r.passed, "{r:?}");
        let f11 = eta_seq("1^2*11^2", 20_000);
        let r = check_slash_coefficients(&f11, Complex64::new(0.0, 0.0), 3, 1, 0.2, 256, 10, 1e-5)
            .unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn eisenstein_needs_its_constant_term() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let e4 = crate::coeffs::eisenstein_coefficients(&triv, &triv, 4, 2000).unwrap();
        let s = IntegerMatrix2x2::new(0, -1, 1, 0);
        let z = [Complex64::new(0.1, 1.2)];
        let a0 = Complex64::new(1.0 / 240.0, 0.0);
        assert!(
            modularity_check_with_constant(&e4, a0, &s, &z, 1e-9)
                .unwrap()
                .passed
        );
        assert!(!modularity_check(&e4, &s, &z, 1e-9).unwrap().passed);
        let chi4 = DirichletCharacter::new(4, 1).unwrap();
        let e1 = crate::coeffs::eisenstein_coefficients(&triv, &chi4, 1, 4000).unwrap();
        let g = IntegerMatrix2x2::new(3, -1, -8, 3);
        let r = modularity_check_with_constant(
            &e1,
            Complex64::new(0.25, 0.0),
            &g,
            &balanced_points(&g, &[0.0, 0.5]),
            1e-9,
        )
        .unwrap();
        assert!(r.passed && (r.multiplier.re + 1.0).abs() < 1e-12, "{r:?}");
    }
}
