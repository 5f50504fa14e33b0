//! Numerical checks of the estimate chain behind the sumset bound
//! `dim(C + tC) >= c + alpha'/2`.
//!
//! Every check reports a left-hand side next to an envelope with the
//! implicit constant set to 1; [`verify_sequence`] tabulates them over a
//! range of block indices `K`.

mod block;
mod measures;
mod transfer;
mod verify;

use num_complex::Complex64;
use serde::Serialize;

use crate::digit_sets::{natural_measure, Budget, CantorSpec, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, Rational};
use crate::quadrature::CompensatedSum;
use crate::spectral::{
    factors_for, integrate_against, lambda_hat, pk_coefficients, pk_eval_rational,
    tail_product_bound, tail_product_p,
};

pub use block::{
    block_integral, energy_integral, mainest2_value, BlockIntegral, BlockQuadrature, EnergyBlock,
    EnergyReport,
};
pub use measures::{InnerMeasure, TestMeasure};
pub use transfer::{pest1_direct, pest1_value, Pest1Value};
pub use verify::{verify_sequence, DepthRule, Estimate, RatioSummary, VerificationRow, VerifyConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    /// `log(8/3) / log 16`.
    pub c: f64,
    /// `log(32/5) / (6 log 2)`.
    pub c_prime: f64,
}

impl Constants {
    /// `4^(1 - c)`, equal to `sqrt(6)`.
    pub fn four_pow_one_minus_c(&self) -> f64 {
        4f64.powf(1.0 - self.c)
    }
}

pub fn constants() -> Constants {
    let c = (8.0f64 / 3.0).ln() / 16f64.ln();
    let c_prime = (32.0f64 / 5.0).ln() / (6.0 * 2f64.ln());
    let k = Constants { c, c_prime };
    assert!((k.four_pow_one_minus_c() - 6f64.sqrt()).abs() < 1e-12);
    k
}

/// `int P_K dmu` as an exact-phase atom sum.
pub fn est2_value(k: u32, mu: &DiscreteMeasure) -> f64 {
    mu.atoms()
        .iter()
        .map(|(t, w)| rational_to_f64(w) * pk_eval_rational(k, t))
        .collect::<CompensatedSum>()
        .value()
}

/// `int P_K dlambda` by pairing the coefficients of `P_K` with
/// `conj(lambda_hat(n))`.
///
/// The coefficients are nonnegative and sum to `P_K(0) = 1`, so truncating
/// each transform value to within `tol` keeps the total within `tol`.
pub fn integrate_pk_dlambda(k: u32, tol: f64, budget: &Budget) -> Result<f64> {
    integrate_pk_dilated_lambda(k, &Rational::from_integer(1), tol, budget)
}

/// As [`integrate_pk_dlambda`] for the image of the Cantor–Lebesgue measure
/// under `t -> s0 t`, whose transform is `lambda_hat(s0 s)`.
pub fn integrate_pk_dilated_lambda(k: u32, s0: &Rational, tol: f64, budget: &Budget) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidSpec(format!("tol must be positive, got {tol}")));
    }
    let p = pk_coefficients(k, budget)?;
    let s0 = rational_to_f64(s0);
    integrate_against(&p, |n| -> Result<Complex64> { Ok(lambda_hat(s0 * n as f64, tol)) })
}

/// `int P_K dlambda_depth` for the dilated depth-`depth` Cantor measure.
pub fn pk_dlambda_atom_sum(k: u32, depth: u32, s0: &Rational, budget: &Budget) -> Result<f64> {
    let mu = natural_measure(&CantorSpec::cantor(), depth, budget)?.dilate(*s0)?;
    Ok(est2_value(k, &mu))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pest2Value {
    /// `sum_i w_i P(t_i s)`.
    pub value: f64,
    /// `sum_i w_i P_K(t_i s0) P(t_i s0)` with `s = 4^K s0`.
    pub factorized: f64,
    /// Truncation bound shared by both sums.
    pub error_bound: f64,
}

/// `int P(t s) dmu(t)` for `4^K <= s <= 4^{K+2}`.
///
/// `P(x)` keeps `tail_depth` factors past the scale of `x`.
pub fn pest2_value(k: u32, s: f64, mu: &DiscreteMeasure, tail_depth: u32) -> Result<Pest2Value> {
    if k > 40 {
        return Err(Error::Overflow("4^K for K > 40"));
    }
    let lo = 4f64.powi(k as i32);
    if !(s >= lo && s <= 16.0 * lo) {
        return Err(Error::Precondition(format!(
            "s = {s} outside [4^K, 4^(K+2)] for K = {k}"
        )));
    }
    let s0 = s / lo;
    let mut direct = CompensatedSum::default();
    let mut split = CompensatedSum::default();
    let mut bound = 0.0;
    for (t, w) in mu.atoms() {
        let (t, w) = (rational_to_f64(t), rational_to_f64(w));
        let x = t * s;
        let m = factors_for(x, tail_depth);
        direct.add(w * tail_product_p(x, m));
        let y = t * s0;
        let tail_m = factors_for(y, tail_depth);
        split.add(w * crate::spectral::pk_eval(k, y) * tail_product_p(y, tail_m));
        bound += w * tail_product_bound(x, m).max(tail_product_bound(y, tail_m)).min(1.0);
    }
    let value = direct.value();
    Ok(Pest2Value {
        value,
        factorized: split.value(),
        error_bound: bound + 1e-13 * (k as f64 + 1.0),
    })
}
