//! Block integrals `int_{4^K}^{4^{K+1}} |lambda_hat(s)|^2 J(s) w(s) ds`
//! with `J(s) = int |lambda_hat(t s)|^2 dmu(t)`.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::measures::InnerMeasure;
use crate::error::{Error, Result};
use crate::quadrature::{CompensatedSum, GaussLegendre};
use crate::spectral::{tail_product_bound, LacunaryTable};

/// Interpolation error of one table lookup of `P`, all blocks included.
const TABLE_ERROR: f64 = 1e-8;

fn table() -> &'static LacunaryTable {
    static TABLE: OnceLock<LacunaryTable> = OnceLock::new();
    TABLE.get_or_init(LacunaryTable::default)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockQuadrature {
    /// Gauss–Legendre nodes per unit panel in `s`.
    pub panel_nodes: usize,
    /// Factors of `P` kept past the scale of the argument.
    pub tail_depth: u32,
    /// Fraction of the outer mass that may be dropped before the inner
    /// integral is evaluated.
    pub prune: f64,
}

impl Default for BlockQuadrature {
    fn default() -> Self {
        BlockQuadrature {
            panel_nodes: 12,
            tail_depth: 8,
            prune: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockIntegral {
    pub value: f64,
    pub error_bound: f64,
    /// Same integral with the extra weight `s^(tau - 1)`, when requested.
    pub weighted: Option<f64>,
    pub weighted_error_bound: Option<f64>,
    pub nodes: usize,
    pub kept: usize,
}

/// `int_{4^K}^{4^{K+1}} |lambda_hat(s)|^2 int |lambda_hat(t s)|^2 dmu(t) ds`.
pub fn mainest2_value(k: u32, inner: &InnerMeasure, quad: &BlockQuadrature) -> Result<BlockIntegral> {
    block_integral(k, inner, quad, None)
}

/// Block integral, optionally also weighted by `s^(tau - 1)`.
///
/// `|lambda_hat(s)|^2 = P(3s/2)` is read from a lookup table. Outer nodes are
/// dropped smallest-first while their total mass stays below
/// `prune * total`; since the inner factor is at most 1 the dropped mass
/// bounds the error it causes. The remaining quadrature error is estimated
/// from the outer integral alone by rerunning it with two fewer nodes.
pub fn block_integral(
    k: u32,
    inner: &InnerMeasure,
    quad: &BlockQuadrature,
    tau: Option<f64>,
) -> Result<BlockIntegral> {
    if quad.panel_nodes < 4 {
        return Err(Error::InvalidSpec(format!(
            "panel_nodes must be at least 4, got {}",
            quad.panel_nodes
        )));
    }
    if !(0.0..1.0).contains(&quad.prune) {
        return Err(Error::InvalidSpec(format!("prune must lie in [0, 1), got {}", quad.prune)));
    }
    let panels = 3u128 << (2 * k.min(60));
    let limit = 3u128 << 24;
    if k > 12 || panels > limit {
        return Err(Error::BudgetExceeded {
            what: "block quadrature panels",
            requested: panels,
            budget: limit,
        });
    }
    let panels = panels as usize;
    let table = table();
    let extra = quad.tail_depth;
    let outer = |s: f64| table.p(1.5 * s, extra);

    let a = 4f64.powi(k as i32);
    let gl = GaussLegendre::new(quad.panel_nodes);
    let n = gl.len();
    let mut nodes = Vec::with_capacity(panels * n);
    let mut mass = Vec::with_capacity(panels * n);
    for j in 0..panels {
        let lo = a + j as f64;
        for (s, w) in gl.mapped(lo, lo + 1.0) {
            nodes.push(s);
            mass.push(w * outer(s));
        }
    }
    let total: f64 = mass.iter().copied().collect::<CompensatedSum>().value();
    let check = GaussLegendre::new(quad.panel_nodes - 2).composite(a, 4.0 * a, panels, outer);
    let relative_quadrature = if total > 0.0 { (total - check).abs() / total } else { 0.0 };

    let mut order: Vec<usize> = (0..mass.len()).collect();
    order.sort_by(|&i, &j| mass[i].total_cmp(&mass[j]).then(i.cmp(&j)));
    let allowance = quad.prune * total;
    let mut dropped = 0.0;
    let mut keep = vec![true; mass.len()];
    for &i in &order {
        if dropped + mass[i] > allowance {
            break;
        }
        dropped += mass[i];
        keep[i] = false;
    }

    let inner_values = inner_factors(&nodes, &keep, inner, &gl, extra, a);
    let weight = |s: f64| tau.map(|t| s.powf(t - 1.0));
    let mut acc = CompensatedSum::default();
    let mut acc_w = CompensatedSum::default();
    let mut kept = 0;
    for i in 0..mass.len() {
        if !keep[i] {
            continue;
        }
        kept += 1;
        let v = mass[i] * inner_values[i];
        acc.add(v);
        if let Some(w) = weight(nodes[i]) {
            acc_w.add(v * w);
        }
    }
    let value = acc.value();
    let per_eval = TABLE_ERROR + tail_product_bound(1.0, extra);
    let length = 3.0 * a;
    let error_bound = dropped + relative_quadrature * value + 2.0 * per_eval * length;
    // s^(tau - 1) is decreasing, so its largest value on the block is at 4^K.
    let (weighted, weighted_error_bound) = match tau {
        Some(t) => {
            let top = a.powf(t - 1.0);
            let wv = acc_w.value();
            (Some(wv), Some(top * (dropped + 2.0 * per_eval * length) + relative_quadrature * wv))
        }
        None => (None, None),
    };
    Ok(BlockIntegral {
        value,
        error_bound,
        weighted,
        weighted_error_bound,
        nodes: mass.len(),
        kept,
    })
}

fn inner_factors(
    nodes: &[f64],
    keep: &[bool],
    inner: &InnerMeasure,
    gl: &GaussLegendre,
    extra: u32,
    a: f64,
) -> Vec<f64> {
    let table = table();
    let p = |x: f64| table.p(x, extra);
    match inner {
        InnerMeasure::Atoms(m) => {
            let (ts, ws) = m.to_f64();
            // each node is summed sequentially, so the result does not
            // depend on the pool size
            nodes
                .par_iter()
                .zip(keep)
                .map(|(&s, &k)| {
                    if !k {
                        return 0.0;
                    }
                    ts.iter()
                        .zip(&ws)
                        .map(|(&t, &w)| w * p(1.5 * t * s))
                        .collect::<CompensatedSum>()
                        .value()
                })
                .collect()
        }
        InnerMeasure::Lebesgue => {
            // J(s) = Phi(3s/2) / (3s/2) with Phi(X) = int_0^X P, accumulated
            // panel by panel in X.
            let n = gl.len();
            let x0 = 1.5 * a;
            let base_panels = x0.ceil() as usize;
            let mut phi = gl.composite(0.0, x0, base_panels, p);
            let mut out = vec![0.0; nodes.len()];
            for (j, chunk) in nodes.chunks(n).enumerate() {
                let start = 1.5 * (a + j as f64);
                for (l, &s) in chunk.iter().enumerate() {
                    let i = j * n + l;
                    if keep[i] {
                        let x = 1.5 * s;
                        out[i] = (phi + gl.integrate(start, x, p)) / x;
                    }
                }
                phi += gl.integrate(start, start + 0.75, p) + gl.integrate(start + 0.75, start + 1.5, p);
            }
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyBlock {
    #[serde(rename = "K")]
    pub k: u32,
    /// `int_block |lambda_hat(s)|^2 J(s) s^(tau - 1) ds`.
    pub increment: f64,
    pub error_bound: f64,
    /// `4^{-K(1 - tau)}` times the unweighted block integral; an upper bound
    /// for the increment.
    pub block_bound: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub tau: f64,
    pub blocks: Vec<EnergyBlock>,
    /// Least-squares slope of `ln increment` against `K`.
    pub log_slope: f64,
}

impl EnergyReport {
    /// Per-block factor `exp(log_slope)`.
    pub fn decay_factor(&self) -> f64 {
        self.log_slope.exp()
    }

    /// Increments shrink by a common factor below 1 and each one is below
    /// its predecessor.
    pub fn decays_geometrically(&self) -> bool {
        self.decay_factor() < 1.0
            && self
                .blocks
                .windows(2)
                .all(|w| w[1].increment < w[0].increment)
    }
}

/// Partial sums of the energy integral over blocks `K = 1..=k_max`.
pub fn energy_integral(
    tau: f64,
    inner: &InnerMeasure,
    k_max: u32,
    quad: &BlockQuadrature,
) -> Result<EnergyReport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidSpec(format!("tau must lie in (0, 1), got {tau}")));
    }
    if k_max == 0 {
        return Err(Error::InvalidSpec("k_max must be at least 1".into()));
    }
    let mut blocks = Vec::with_capacity(k_max as usize);
    let mut partial = 0.0;
    for k in 1..=k_max {
        let b = block_integral(k, inner, quad, Some(tau))?;
        let increment = b.weighted.unwrap_or_default();
        partial += increment;
        blocks.push(EnergyBlock {
            k,
            increment,
            error_bound: b.weighted_error_bound.unwrap_or_default(),
            block_bound: b.value * 4f64.powf(-(k as f64) * (1.0 - tau)),
            partial_sum: partial,
        });
    }
    let log_slope = slope(
        &blocks
            .iter()
            .map(|b| (b.k as f64, b.increment.max(f64::MIN_POSITIVE).ln()))
            .collect::<Vec<_>>(),
    );
    Ok(EnergyReport {
        tau,
        blocks,
        log_slope,
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
