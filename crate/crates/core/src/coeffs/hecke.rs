//! Checks of the Euler-product relations satisfied by Hecke eigenvalues.
//!
//! In the arithmetic normalization `a_n = λ_n n^{(k−1)/2}` the degree-two Euler product with
//! nebentypus `ξ` is equivalent to
//!
//! * `a_{mn} = a_m a_n` for coprime `m, n`,
//! * `a_{p^{r+1}} = a_p a_{p^r} − ξ(p) p^{k−1} a_{p^{r−1}}`,
//!
//! and the self-duality condition reads `conj(a_p) = conj(ξ(p)) a_p` for `p ∤ N`. Sequences
//! carrying exact cyclotomic values are checked exactly; float sequences use a relative
//! tolerance.

use std::fmt;

use crate::arith::{gcd, is_prime};
use crate::cyclo::Scalar;
use crate::report::Report;

use super::CoefficientSequence;

/// One relation that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    /// `a_{mn} = a_m a_n`, `gcd(m, n) = 1`.
    Multiplicative { m: usize, n: usize },
    /// `a_{p^{r+1}} = a_p a_{p^r} − ξ(p) p^{k−1} a_{p^{r−1}}`.
    PrimePower { p: usize, r: u32 },
    /// `conj(a_p) = conj(ξ(p)) a_p`.
    SelfDual { p: usize },
    /// `|λ_n| ≤ C √n`.
    Growth { n: usize },
}

impl Relation {
    /// Every coefficient index the relation reads.
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Relation::Multiplicative { m, n } => vec![m, n, m * n],
            Relation::PrimePower { p, r } => {
                vec![p, p.pow(r + 1), p.pow(r), p.pow(r - 1)]
            }
            Relation::SelfDual { p } => vec![p],
            Relation::Growth { n } => vec![n],
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Multiplicative { m, n } => write!(f, "multiplicative({m},{n})"),
            Relation::PrimePower { p, r } => write!(f, "prime_power({p}^{})", r + 1),
            Relation::SelfDual { p } => write!(f, "self_dual({p})"),
            Relation::Growth { n } => write!(f, "growth({n})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeckeReport {
    pub violations: Vec<Relation>,
    pub relations_checked: usize,
    pub exact: bool,
    pub length: usize,
    pub growth_constant: f64,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("X", self.length)
            .text("exact", self.exact)
            .float("growth_constant", self.growth_constant)
            .text("relations_checked", self.relations_checked)
            .text("violations", self.violations.len());
        if let Some(v) = self.violations.first() {
            r.text("first_violation", v)
                .text("reason", "hecke_relation")
                .fail();
        }
        r
    }
}

fn check_relations<V: Scalar>(
    seq: &CoefficientSequence,
    values: &[V],
    tol: f64,
) -> (Vec<Relation>, usize) {
    let x = values.len();
    let a = |n: usize| &values[n - 1];
    let mag = |v: &V| v.to_complex().norm();
    let xi = seq.nebentypus();
    let k = seq.weight();
    let mut violations = Vec::new();
    let mut checked = 0usize;

    for m in 2..=x {
        if m * (m + 1) > x {
            break;
        }
        for n in (m + 1)..=(x / m) {
            if gcd(m as u64, n as u64) != 1 {
                continue;
            }
            checked += 1;
            let rhs = a(m).mul(a(n));
            let scale = mag(a(m)) * mag(a(n)) + mag(a(m * n));
            if !a(m * n).agrees(&rhs, scale, tol) {
                violations.push(Relation::Multiplicative { m, n });
            }
        }
    }

    for p in (2..=x).filter(|&p| is_prime(p as u64)) {
        let xi_p = xi.value(p as i64);
        let mut r = 1u32;
        while p.pow(r + 1) <= x {
            checked += 1;
            let head = a(p).mul(a(p.pow(r)));
            let tail = match xi_p {
                // p^{k−1} one factor at a time, since it need not fit in i128 on the float path
                Some(root) => (1..k)
                    .fold(a(p.pow(r - 1)).clone(), |v, _| v.scale(p as i128))
                    .rotate(root),
                None => a(p.pow(r - 1)).scale(0),
            };
            let rhs = head.sub(&tail);
            let scale = mag(&head) + mag(&tail) + mag(a(p.pow(r + 1)));
            if !a(p.pow(r + 1)).agrees(&rhs, scale, tol) {
                violations.push(Relation::PrimePower { p, r });
            }
            r += 1;
        }
        if let Some(root) = xi_p {
            checked += 1;
            let lhs = a(p).conj();
            let rhs = a(p).rotate(root.conj());
            if !lhs.agrees(&rhs, 2.0 * mag(a(p)), tol) {
                violations.push(Relation::SelfDual { p });
            }
        }
    }
    (violations, checked)
}

/// Lists every violated relation among the first `X` coefficients.
///
/// `tol` is the relative tolerance used for sequences without exact values and for the growth
/// bound `|λ_n| ≤ C√n`.
pub fn check_hecke_relations(seq: &CoefficientSequence, tol: f64) -> HeckeReport {
    // a_m a_n with mn ≤ X and p^{k−1} a_{p^{r−1}} with p^{r+1} ≤ X are the largest integers formed
    let x = seq.len();
    let m = seq.prefix_max_abs();
    let k1 = seq.weight() as f64 - 1.0;
    let tail_bits = (2..=x)
        .take_while(|p| p * p <= x)
        .map(|p| k1 * (p as f64).log2() + m[x / (p * p)].max(1.0).log2())
        .fold(0.0, f64::max);
    let exact = seq.exact_values_within(seq.log2_max_product().max(tail_bits) + 1.0);
    let (mut violations, mut checked) = match exact {
        Some(exact) => check_relations(seq, exact, tol),
        None => check_relations(seq, seq.values(), tol),
    };
    let c = seq.growth_constant();
    for n in 1..=seq.len() {
        checked += 1;
        if seq.lambda(n).norm() > c * (n as f64).sqrt() * (1.0 + tol) {
            violations.push(Relation::Growth { n });
        }
    }
    HeckeReport {
        violations,
        relations_checked: checked,
        exact: exact.is_some(),
        length: seq.len(),
        growth_constant: c,
    }
}
