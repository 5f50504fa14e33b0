use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::block::{mainest2_value, BlockQuadrature};
use super::measures::TestMeasure;
use super::transfer::pest1_value;
use super::{constants, est2_value, integrate_pk_dilated_lambda, pest2_value};
use crate::digit_sets::Budget;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, rational_to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimate {
    /// `int_{4^K}^{4^{K+1}} P` against `4^{K/2}`.
    Pest1,
    /// `int P(t 4^K s0) dmu(t)` against `(sqrt 6 4^{-(1+a)/2})^K`.
    Pest2,
    /// `int P_K d(mu dilated by s0)` against the same envelope.
    Est2,
    /// The block integral against `(4^{1-c-a/2})^K`.
    Mainest2,
    /// `int P_K d(lambda dilated by s0)` against `(3/4)^K`.
    PkDlambda,
    /// `int P_K d(mu dilated by s0)` against `(2^{-a})^K`.
    Eq10Failure,
}

impl Estimate {
    pub const ALL: [Estimate; 6] = [
        Estimate::Pest1,
        Estimate::Pest2,
        Estimate::Est2,
        Estimate::Mainest2,
        Estimate::PkDlambda,
        Estimate::Eq10Failure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimate::Pest1 => "pest1",
            Estimate::Pest2 => "pest2",
            Estimate::Est2 => "est2",
            Estimate::Mainest2 => "mainest2",
            Estimate::PkDlambda => "pk-dlambda",
            Estimate::Eq10Failure => "eq10-failure",
        }
    }

    /// Envelope at `k` for a measure of Frostman exponent `a`.
    pub fn envelope(self, k: u32, a: f64) -> f64 {
        let k = k as f64;
        match self {
            Estimate::Pest1 => 2f64.powf(k),
            Estimate::Pest2 | Estimate::Est2 => (6f64.sqrt() * 4f64.powf(-(1.0 + a) / 2.0)).powf(k),
            Estimate::Mainest2 => 4f64.powf(1.0 - constants().c - a / 2.0).powf(k),
            Estimate::PkDlambda => 0.75f64.powf(k),
            Estimate::Eq10Failure => 2f64.powf(-a).powf(k),
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimate::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Estimate::ALL.iter().map(|e| e.name()).collect();
                Error::InvalidSpec(format!("unknown estimate {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Depth of the test measure's atoms for row `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthRule {
    /// The depth stored in the measure.
    Fixed,
    /// `K + offset`.
    AboveK(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub measure: TestMeasure,
    pub depth: DepthRule,
    /// Dilation `s0`; rows use `s = 4^K s0`.
    #[serde(serialize_with = "ser_rational")]
    pub s0: Rational,
    /// Per-term truncation of `lambda_hat`.
    pub tol: f64,
    /// Factors of `P` kept past the scale of the argument.
    pub tail_depth: u32,
    /// Chebyshev points per level in the factorized block integral of `P`.
    pub cheb_points: usize,
    pub block: BlockQuadrature,
    #[serde(skip)]
    pub budget: Budget,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            measure: TestMeasure::cantor(0),
            depth: DepthRule::AboveK(2),
            s0: Rational::from_integer(1),
            tol: 1e-12,
            tail_depth: 8,
            cheb_points: 48,
            block: BlockQuadrature::default(),
            budget: Budget::default(),
        }
    }
}

impl VerifyConfig {
    fn measure_at(&self, k: u32) -> TestMeasure {
        let depth = match self.depth {
            DepthRule::Fixed => return self.measure.clone(),
            DepthRule::AboveK(d) => k + d,
        };
        match &self.measure {
            TestMeasure::Dirac => TestMeasure::Dirac,
            TestMeasure::Lebesgue { .. } => TestMeasure::Lebesgue { depth },
            TestMeasure::Digits { spec, .. } => TestMeasure::Digits {
                spec: spec.clone(),
                depth,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRow {
    pub estimate: Estimate,
    #[serde(rename = "K")]
    pub k: u32,
    pub lhs: f64,
    pub envelope: f64,
    pub ratio: f64,
    /// How `lhs` was computed.
    pub method: &'static str,
    pub error_bound: f64,
}

impl VerificationRow {
    pub const CSV_HEADER: &'static str = "estimate,K,lhs,envelope,ratio,method,error_bound";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{},{:.3e}",
            self.estimate, self.k, self.lhs, self.envelope, self.ratio, self.method, self.error_bound
        )
    }
}

fn row(estimate: Estimate, k: u32, cfg: &VerifyConfig) -> Result<VerificationRow> {
    let measure = cfg.measure_at(k);
    let a = measure.exponent();
    let envelope = estimate.envelope(k, a);
    let (lhs, method, error_bound) = match estimate {
        Estimate::Pest1 => {
            let v = pest1_value(k, cfg.tail_depth, cfg.cheb_points)?;
            (v.value, "factorized-transfer", v.error_bound)
        }
        Estimate::Pest2 => {
            let s = 4f64.powi(k as i32) * rational_to_f64(&cfg.s0);
            let v = pest2_value(k, s, &measure.atoms(&cfg.budget)?, cfg.tail_depth)?;
            (v.value, "atom-sum", v.error_bound)
        }
        Estimate::Est2 | Estimate::Eq10Failure => {
            let mu = measure.atoms(&cfg.budget)?.dilate(cfg.s0)?;
            let v = est2_value(k, &mu);
            (v, "exact-phase-atom-sum", 4.0 * f64::EPSILON * (k as f64 + 1.0))
        }
        Estimate::Mainest2 => {
            let b = mainest2_value(k, &measure.inner(&cfg.budget)?, &cfg.block)?;
            (b.value, "pruned-block-quadrature", b.error_bound)
        }
        Estimate::PkDlambda => {
            let v = integrate_pk_dilated_lambda(k, &cfg.s0, cfg.tol, &cfg.budget)?;
            (v, "spectral-pairing", cfg.tol)
        }
    };
    Ok(VerificationRow {
        estimate,
        k,
        lhs,
        envelope,
        ratio: lhs / envelope,
        method,
        error_bound,
    })
}

/// One row per `K` in `ks`, in order. Rows are computed on the current
/// rayon pool; each row's arithmetic is sequential. `pk-dlambda` always
/// uses the Cantor–Lebesgue measure and ignores `cfg.measure`.
pub fn verify_sequence(
    estimate: Estimate,
    ks: std::ops::RangeInclusive<u32>,
    cfg: &VerifyConfig,
) -> Result<Vec<VerificationRow>> {
    ks.into_par_iter().map(|k| row(estimate, k, cfg)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioSummary {
    pub min: f64,
    pub max: f64,
    /// `max / min`.
    pub spread: f64,
    /// Geometric mean of successive ratio quotients.
    pub mean_step: f64,
    /// Every ratio exceeds its predecessor.
    pub increasing: bool,
}

impl RatioSummary {
    pub fn from_rows(rows: &[VerificationRow]) -> Option<Self> {
        let first = rows.first()?;
        let last = rows.last()?;
        let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        let steps = (rows.len() - 1) as f64;
        let mean_step = if steps > 0.0 {
            (last.ratio / first.ratio).powf(1.0 / steps)
        } else {
            1.0
        };
        Some(RatioSummary {
            min,
            max,
            spread: max / min,
            mean_step,
            increasing: rows.windows(2).all(|w| w[1].ratio > w[0].ratio),
        })
    }
}
