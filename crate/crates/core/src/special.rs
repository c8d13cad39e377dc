//! Complex gamma, `Γ_C`, and the upper incomplete gamma function in double precision.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),
    #[error("incomplete gamma requires x > 0, got {0}")]
    NonPositiveArgument(f64),
    #[error("non-finite result at {0}")]
    NonFinite(Complex64),
}

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn pole_check(s: Complex64) -> Result<(), SpecialError> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(SpecialError::Pole(s));
    }
    Ok(())
}

/// `ln Γ(s)` for `Re s ≥ 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

pub fn complex_gamma(s: Complex64) -> Result<Complex64, SpecialError> {
    pole_check(s)?;
    let v = if s.re < 0.5 {
        // Γ(s)Γ(1−s) = π / sin(πs)
        let refl = ln_gamma_right(1.0 - s);
        Complex64::new(PI, 0.0) / ((PI * s).sin() * refl.exp())
    } else {
        ln_gamma_right(s).exp()
    };
    finite(s, v)
}

fn finite(at: Complex64, v: Complex64) -> Result<Complex64, SpecialError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::NonFinite(at))
    }
}

/// `Γ_C(s) = 2(2π)^{−s} Γ(s)`.
pub fn gamma_c(s: Complex64) -> Result<Complex64, SpecialError> {
    let g = complex_gamma(s)?;
    finite(s, 2.0 * (-s * (2.0 * PI).ln()).exp() * g)
}

const MAX_ITER: usize = 20_000;

/// Lower incomplete gamma via its power series: `γ(w,x) = x^w e^{−x} Σ x^j / (w)_{j+1}`.
fn lower_series(w: Complex64, x: f64) -> Complex64 {
    let mut term = 1.0 / w;
    let mut sum = term;
    let mut denom = w;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
    }
    sum * (w * x.ln() - x).exp()
}

/// `Γ(w,x)` by the Legendre continued fraction (modified Lentz).
fn upper_continued_fraction(w: Complex64, x: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(x + 1.0, 0.0) - w;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -fi * (fi - w);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < f64::EPSILON {
            break;
        }
    }
    (w * x.ln() - x).exp() * h
}

fn near_nonpositive_integer(w: Complex64) -> bool {
    w.re < 0.5 && w.im.abs() < 1e-6 && (w.re - w.re.round()).abs() < 1e-6
}

/// Upper incomplete gamma `Γ(w,x) = ∫_x^∞ t^{w−1} e^{−t} dt` for real `x > 0`.
pub fn upper_incomplete_gamma(w: Complex64, x: f64) -> Result<Complex64, SpecialError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::NonPositiveArgument(x));
    }
    let v = if x < w.norm() + 1.0 && !near_nonpositive_integer(w) {
        complex_gamma(w)? - lower_series(w, x)
    } else {
        upper_continued_fraction(w, x)
    };
    finite(w, v)
}
