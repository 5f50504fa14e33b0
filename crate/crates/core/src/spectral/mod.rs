//! Fourier side of the Cantor–Lebesgue measure and the lacunary products
//!
//! ```text
//! lambda_hat(s) = prod_{k>=1} (1 + e^{-2 pi i 3 4^-k s}) / 2
//! P(s)          = prod_{k>=1} cos^2(2 pi 4^-k s)
//! P_K(s)        = prod_{l<K}  cos^2(2 pi 4^l s)
//! ```
//!
//! `|lambda_hat(s)|^2 = P(3s/2)`, and `P(4^K s) = P_K(s) P(s)`; both
//! identities are used by the integral checks.

mod reps;
mod trig;

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::digit_sets::Budget;
use crate::error::{Error, Result};

pub use reps::{brute_force_rep_count, brute_force_rep_histogram, rep_digits, RepDigits};
pub use trig::{
    constant_term_of_power, integrate_against, lebesgue_unit_transform, trigpoly_power,
    TrigPolynomial,
};

/// Truncated product for the transform of the Cantor–Lebesgue measure.
///
/// Factors `k = 1..=k0` are multiplied, where `k0` is the first index with
/// `pi |s| 4^-k0 < tol`. Each omitted factor differs from 1 by at most
/// `3 pi 4^-k |s|`, and all factors have modulus at most 1, so the omitted
/// tail changes the result by less than `tol`.
pub fn lambda_hat(s: f64, tol: f64) -> Complex64 {
    lambda_hat_terms(s, tol).0
}

/// [`lambda_hat`] together with the number of factors used.
pub fn lambda_hat_terms(s: f64, tol: f64) -> (Complex64, u32) {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut acc = Complex64::new(1.0, 0.0);
    let mut scaled = s; // s 4^-k, exact power-of-two scaling
    let mut k = 0u32;
    while PI * s.abs() * 0.25f64.powi(k as i32) >= tol {
        k += 1;
        scaled *= 0.25;
        let x = 3.0 * scaled;
        let phase = x - x.floor();
        let factor = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -TAU * phase)) * 0.5;
        acc *= factor;
    }
    (acc, k)
}

/// `prod_{k=1}^{m} cos^2(2 pi 4^-k s)`. The omitted factors change the
/// infinite product by at most [`tail_product_bound`]`(s, m)`.
pub fn tail_product_p(s: f64, m: u32) -> f64 {
    let mut v = 1.0;
    let mut scaled = s;
    for _ in 0..m {
        scaled *= 0.25;
        let phase = scaled - scaled.floor();
        let c = (TAU * phase).cos();
        v *= c * c;
    }
    v
}

/// `sum_{k>m} (2 pi 4^-k s)^2 = (2 pi s)^2 16^-m / 15`, using
/// `1 - cos^2 x <= x^2`.
pub fn tail_product_bound(s: f64, m: u32) -> f64 {
    (TAU * s).powi(2) * 16f64.powi(-(m as i32)) / 15.0
}

/// Factor count for `P(x)` that leaves `extra` factors beyond the scale of
/// `|x|`, so the tail bound is at most `(2 pi)^2 16^-extra / 15`.
pub fn factors_for(x: f64, extra: u32) -> u32 {
    let a = x.abs();
    if a <= 1.0 || !a.is_finite() {
        return extra;
    }
    // ceil(log4 a) from the binary exponent e = floor(log2 a)
    let bits = a.to_bits();
    let e = ((bits >> 52) & 0x7ff) as u32 - 1023;
    let scale = if bits & ((1 << 52) - 1) == 0 { e.div_ceil(2) } else { e / 2 + 1 };
    scale + extra
}

/// `P_K(s)`, with the phase reduced modulo 1 before each factor; multiplying
/// a reduced phase by 4 is exact in binary floating point.
pub fn pk_eval(k: u32, s: f64) -> f64 {
    let mut f = s - s.floor();
    let mut v = 1.0;
    for _ in 0..k {
        let c = (TAU * f).cos();
        v *= c * c;
        f *= 4.0;
        f -= f.floor();
    }
    v
}

/// `P_K(t)` at a rational point. Phases `4^l t mod 1` are reduced in exact
/// integer arithmetic before conversion.
pub fn pk_eval_rational(k: u32, t: &crate::exact::Rational) -> f64 {
    let q = *t.denom() as u128;
    let mut r = t.numer().rem_euclid(*t.denom()) as u128;
    let qf = q as f64;
    let mut v = 1.0;
    for _ in 0..k {
        let c = (TAU * (r as f64 / qf)).cos();
        v *= c * c;
        if v == 0.0 {
            break;
        }
        r = (2 * r) % q;
        r = (2 * r) % q;
    }
    v
}

/// Exact coefficients of `P_K`: the convolution of the level factors
/// `cos^2(2 pi 4^l s) = 1/4 e^{-4 pi i 4^l s} + 1/2 + 1/4 e^{4 pi i 4^l s}`.
pub fn pk_coefficients(k: u32, budget: &Budget) -> Result<TrigPolynomial> {
    let support = 3u128.checked_pow(k).ok_or(Error::Overflow("3^K"))?;
    if support > budget.coefficients as u128 {
        return Err(Error::BudgetExceeded {
            what: "pk_coefficients",
            requested: support,
            budget: budget.coefficients as u128,
        });
    }
    if k > 30 {
        return Err(Error::Overflow("frequency 4^K"));
    }
    // numerators over 4^K stay below 2^K, so u64 is plenty
    let mut terms: Vec<(i64, u64)> = vec![(0, 1)];
    for l in 0..k {
        let shift = 2i64 << (2 * l);
        let mut next = Vec::with_capacity(terms.len() * 3);
        for &(n, c) in &terms {
            next.push((n - shift, c));
            next.push((n, 2 * c));
            next.push((n + shift, c));
        }
        next.sort_unstable_by_key(|t| t.0);
        next.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        terms = next;
    }
    let denom = BigInt::from(4u8).pow(k);
    Ok(TrigPolynomial::from_numerators(
        denom,
        terms.into_iter().map(|(n, c)| (n, BigInt::from(c))).collect(),
    ))
}

/// `int_0^1 P_K(s)^p ds`, exactly, as the constant term of `P_K^p`.
pub fn pk_lp_norm_exact(k: u32, p: u32, budget: &Budget) -> Result<BigRational> {
    if p == 0 {
        return Err(Error::precondition("p must be at least 1"));
    }
    let coeffs = pk_coefficients(k, budget)?;
    constant_term_of_power(&coeffs, p, budget)
}

/// Closed forms for `int_0^1 P_K^p` where they are known: `2^K/4^K` for
/// `p = 1`, `6^K/16^K` for `p = 2` and `(5/16)^K` for `p = 3`.
pub fn pk_power_closed_form(k: u32, p: u32) -> Option<BigRational> {
    let (num, den): (u32, u32) = match p {
        1 => (2, 4),
        2 => (6, 16),
        3 => (5, 16),
        _ => return None,
    };
    Some(BigRational::new(
        BigInt::from(num).pow(k),
        BigInt::from(den).pow(k),
    ))
}

/// The naive per-level product `(C(2p, p) / 4^p)^K`; exact only while no
/// cross-level frequency cancellations exist (p <= 3).
pub fn pk_power_level_product(k: u32, p: u32) -> BigRational {
    let mut binom = BigInt::one();
    for i in 0..p {
        binom = binom * BigInt::from(2 * p - i) / BigInt::from(i + 1);
    }
    BigRational::new(binom.pow(k), BigInt::from(4u8).pow(p * k))
}

/// Table-driven evaluation of `P(x) = prod_k cos^2(2 pi 4^-k x)`.
///
/// `H(x) = prod_{k=1}^{block} cos^2(2 pi 4^-k x)` has period `4^block / 2`;
/// it is sampled once and read back with four-point Lagrange
/// interpolation. Consecutive blocks of factors are `H(x 4^-j block)`.
/// With the default table (block 5, 256 samples per unit) the
/// interpolation error is below `2e-9` per block. The table carries one
/// sample before and two after the period so lookups need no wrapping.
#[derive(Clone, Debug)]
pub struct LacunaryTable {
    block: u32,
    period: f64,
    inv_step: f64,
    values: Vec<f64>,
}

impl Default for LacunaryTable {
    fn default() -> Self {
        LacunaryTable::new(5, 256)
    }
}

impl LacunaryTable {
    pub fn new(block: u32, samples_per_unit: u32) -> Self {
        assert!(block >= 1 && samples_per_unit >= 4);
        let period = 4f64.powi(block as i32) / 2.0;
        let len = (period as usize) * samples_per_unit as usize;
        let step = 1.0 / samples_per_unit as f64;
        let values = (-1..len as i64 + 2)
            .map(|i| tail_product_p(i as f64 * step, block))
            .collect();
        LacunaryTable {
            block,
            period,
            inv_step: samples_per_unit as f64,
            values,
        }
    }

    fn block_value(&self, x: f64) -> f64 {
        let n = self.values.len() - 3;
        let u = (x - (x / self.period).floor() * self.period) * self.inv_step;
        let i = u.floor();
        let t = u - i;
        // values[i + 1] holds sample i
        let i = (i as usize).min(n - 1);
        let w = &self.values[i..i + 4];
        let (ym, y0, y1, y2) = (w[0], w[1], w[2], w[3]);
        let v = -t * (t - 1.0) * (t - 2.0) / 6.0 * ym + (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * y0
            - (t + 1.0) * t * (t - 2.0) / 2.0 * y1
            + (t + 1.0) * t * (t - 1.0) / 6.0 * y2;
        v.clamp(0.0, 1.0)
    }

    /// `prod_{k=1}^{factors} cos^2(2 pi 4^-k x)`.
    pub fn product(&self, x: f64, factors: u32) -> f64 {
        let mut v = 1.0;
        let mut scaled = x;
        let shrink = 4f64.powi(-(self.block as i32));
        let mut left = factors;
        while left >= self.block {
            v *= self.block_value(scaled);
            if v == 0.0 {
                return 0.0;
            }
            scaled *= shrink;
            left -= self.block;
        }
        v * tail_product_p(scaled, left)
    }

    /// `P(x)` with at least `extra` factors past the scale of `x`; the
    /// count is rounded up to whole table blocks.
    pub fn p(&self, x: f64, extra: u32) -> f64 {
        let f = factors_for(x, extra);
        self.product(x, f.div_ceil(self.block) * self.block)
    }
}
