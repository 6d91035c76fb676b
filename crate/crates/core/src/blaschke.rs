//! Finite Blaschke products `B(z) = ∏ (z − wᵢ)/(1 − w̄ᵢ z)` and truncated power
//! series arithmetic.
//!
//! The unimodular constant is fixed to 1, so a product is determined by its
//! zero multiset. Zeros are stored in canonical order: exact zeros at the
//! origin first, the rest sorted by modulus, then argument, then real part.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::codec::{pairs, unpairs, Pair};
use crate::error::{LabError, Result};
use crate::linalg::{c64, CMatrix, CVector, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Pair>", into = "Vec<Pair>")]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
}

impl BlaschkeProduct {
    pub fn new(mut zeros: Vec<C64>) -> Result<Self> {
        for w in &zeros {
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(LabError::InvalidBlaschke(format!("non-finite zero {w}")));
            }
            if w.norm() >= 1.0 {
                return Err(LabError::InvalidBlaschke(format!(
                    "zero {w} lies outside the open unit disk"
                )));
            }
        }
        zeros.sort_by(canonical_cmp);
        Ok(BlaschkeProduct { zeros })
    }

    /// `z^l`.
    pub fn monomial(l: usize) -> Self {
        BlaschkeProduct {
            zeros: vec![C64::new(0.0, 0.0); l],
        }
    }

    /// The constant 1 (no zeros).
    pub fn one() -> Self {
        BlaschkeProduct { zeros: Vec::new() }
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.zeros.first().is_some_and(|w| *w == C64::new(0.0, 0.0))
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }

    pub fn all_zeros_at_origin(&self) -> bool {
        self.zeros.iter().all(|w| *w == C64::new(0.0, 0.0))
    }

    /// Product of two Blaschke products (zero multisets concatenated).
    pub fn times(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        zeros.sort_by(canonical_cmp);
        BlaschkeProduct { zeros }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, w| acc * (z - w) / (C64::new(1.0, 0.0) - w.conj() * z))
    }

    /// Maclaurin coefficients through degree `d`.
    pub fn taylor(&self, d: usize) -> Vec<C64> {
        let mut acc = vec![C64::new(0.0, 0.0); d + 1];
        acc[0] = C64::new(1.0, 0.0);
        for w in &self.zeros {
            acc = series_mul(&acc, &factor_series(*w, d), d);
        }
        acc
    }

    /// Multiset inclusion of zeros, compared by exact stored value.
    pub fn divides(&self, other: &BlaschkeProduct) -> bool {
        let mut used = vec![false; other.zeros.len()];
        'outer: for w in &self.zeros {
            for (k, v) in other.zeros.iter().enumerate() {
                if !used[k] && v == w {
                    used[k] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

impl TryFrom<Vec<Pair>> for BlaschkeProduct {
    type Error = LabError;

    fn try_from(value: Vec<Pair>) -> Result<Self> {
        BlaschkeProduct::new(unpairs(&value))
    }
}

impl From<BlaschkeProduct> for Vec<Pair> {
    fn from(b: BlaschkeProduct) -> Self {
        pairs(&b.zeros)
    }
}

fn canonical_cmp(a: &C64, b: &C64) -> Ordering {
    let origin = C64::new(0.0, 0.0);
    match (*a == origin, *b == origin) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a
            .norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
            .then(a.re.total_cmp(&b.re)),
    }
}

/// Series of `(z − w)/(1 − w̄ z)` by long division: `q₀ = −w`,
/// `q₁ = 1 + w̄ q₀`, `q_k = w̄ q_{k−1}`.
fn factor_series(w: C64, d: usize) -> Vec<C64> {
    let wc = w.conj();
    let mut q = vec![C64::new(0.0, 0.0); d + 1];
    q[0] = -w;
    if d >= 1 {
        q[1] = C64::new(1.0, 0.0) + wc * q[0];
    }
    for k in 2..=d {
        q[k] = wc * q[k - 1];
    }
    q
}

/// Truncated Cauchy product through degree `d`.
pub fn series_mul(a: &[C64], b: &[C64], d: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d + 1];
    for (i, ai) in a.iter().enumerate().take(d + 1) {
        if *ai == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(d + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Evaluate a truncated series at `z` (Horner).
pub fn series_eval(a: &[C64], z: C64) -> C64 {
    a.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Taylor coefficients of `Σₙ Aₙ Bⁿ` through degree `d`, one row per
/// component of the `Aₙ ∈ ℂᵖ`.
pub fn compose_power_series(blocks: &[CVector], b: &BlaschkeProduct, d: usize) -> Result<CMatrix> {
    let p = blocks.first().map_or(0, |a| a.len());
    if let Some(bad) = blocks.iter().find(|a| a.len() != p) {
        return Err(LabError::DimensionMismatch {
            expected: p,
            actual: bad.len(),
        });
    }
    let bt = b.taylor(d);
    let mut out = CMatrix::zeros(p, d + 1);
    for s in 0..p {
        let mut acc = vec![C64::new(0.0, 0.0); d + 1];
        for a in blocks.iter().rev() {
            acc = series_mul(&acc, &bt, d);
            acc[0] += a[s];
        }
        for (k, c) in acc.into_iter().enumerate() {
            out[(s, k)] = c;
        }
    }
    Ok(out)
}

/// Convenience constructor used in tests and examples.
pub fn zero_at(re: f64, im: f64) -> C64 {
    c64(re, im)
}
