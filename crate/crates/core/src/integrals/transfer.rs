//! `int_{4^K}^{4^{K+1}} P(s) ds` through the self-similar factorization
//! `4^K int_1^4 P_K(u) P(u) du`.
//!
//! With `G_0(u) = sum_{j=1}^{3} P(j + u)` on `[0, 1]` the integral is
//! `4^K int_0^1 P_K G_0`, and substituting `u = (r + v) / 4` peels one factor
//! off `P_K` at a time:
//!
//! ```text
//! G_{k+1}(v) = 1/4 sum_{r=0}^{3} cos^2(pi (r + v) / 2) G_k((r + v) / 4)
//! ```
//!
//! so `int_0^1 P_K G_0 = int_0^1 G_K`. Each `G_k` is held as its values at
//! Chebyshev points, which keeps the cost linear in `K`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::spectral::{tail_product_bound, tail_product_p};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pest1Value {
    pub value: f64,
    pub error_bound: f64,
}

struct Chebyshev {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    /// First-kind points mapped to `[0, 1]`.
    fn new(n: usize) -> Self {
        let nodes = (0..n)
            .map(|j| 0.5 * (1.0 - (PI * (j as f64 + 0.5) / n as f64).cos()))
            .collect();
        let weights = (0..n)
            .map(|j| {
                let w = (PI * (2 * j + 1) as f64 / (2 * n) as f64).sin();
                if j % 2 == 0 {
                    w
                } else {
                    -w
                }
            })
            .collect();
        Chebyshev { nodes, weights }
    }

    /// Barycentric interpolation of `values` at `x`.
    fn eval(&self, values: &[f64], x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &fj) in self.nodes.iter().zip(&self.weights).zip(values) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let c = wj / d;
            num += c * fj;
            den += c;
        }
        num / den
    }
}

fn factorized(k: u32, tail_factors: u32, points: usize) -> f64 {
    let cheb = Chebyshev::new(points);
    let mut g: Vec<f64> = cheb
        .nodes
        .iter()
        .map(|&u| (1..=3).map(|j| tail_product_p(j as f64 + u, tail_factors)).sum())
        .collect();
    for _ in 0..k {
        let next = cheb
            .nodes
            .iter()
            .map(|&v| {
                let mut acc = 0.0;
                for r in 0..4 {
                    let x = r as f64 + v;
                    let c = (0.5 * PI * x).cos();
                    acc += c * c * cheb.eval(&g, 0.25 * x);
                }
                0.25 * acc
            })
            .collect();
        g = next;
    }
    // The interpolant has degree points - 1; this rule integrates it exactly.
    let gl = GaussLegendre::new(points);
    4f64.powi(k as i32) * gl.integrate(0.0, 1.0, |x| cheb.eval(&g, x))
}

/// `int_{4^K}^{4^{K+1}} P(s) ds` through the factorized form.
///
/// `P(u)` on `[1, 4]` keeps `1 + tail_depth` factors. `quad_points` is the
/// number of Chebyshev points per level. The error bound adds the
/// truncation bound, the change against a half-resolution run, and a
/// rounding allowance.
pub fn pest1_value(k: u32, tail_depth: u32, quad_points: usize) -> Result<Pest1Value> {
    if quad_points < 8 {
        return Err(Error::InvalidSpec(format!(
            "quad_points must be at least 8, got {quad_points}"
        )));
    }
    if k > 40 {
        return Err(Error::Overflow("4^K for K > 40"));
    }
    let m = 1 + tail_depth;
    let fine = factorized(k, m, quad_points);
    let coarse = factorized(k, m, quad_points / 2);
    // int_1^4 P_K = 3 * 2^-K; the truncated tail is bounded at u = 4.
    let truncation = 4f64.powi(k as i32) * 3.0 * 0.5f64.powi(k as i32) * tail_product_bound(4.0, m);
    let rounding = 1e-14 * fine.abs() * (k as f64 + 1.0);
    Ok(Pest1Value {
        value: fine,
        error_bound: (fine - coarse).abs() + truncation + rounding,
    })
}

/// Composite Gauss–Legendre quadrature of `P` over `[4^K, 4^{K+1}]` on unit
/// panels, keeping `K + 1 + tail_depth` factors. The error bound is the
/// change against a rule with four more nodes plus the truncation bound.
pub fn pest1_direct(k: u32, tail_depth: u32, nodes: usize) -> Result<Pest1Value> {
    if k > 12 {
        return Err(Error::BudgetExceeded {
            what: "direct quadrature panels",
            requested: 3u128 << (2 * k),
            budget: 3u128 << 24,
        });
    }
    let a = 4f64.powi(k as i32);
    let b = 4.0 * a;
    let m = k + 1 + tail_depth;
    let panels = (b - a) as usize;
    let run = |n: usize| {
        GaussLegendre::new(n).composite(a, b, panels, |s| tail_product_p(s, m))
    };
    let value = run(nodes);
    let check = run(nodes + 4);
    let truncation = (b - a) * tail_product_bound(b, m);
    Ok(Pest1Value {
        value,
        error_bound: (value - check).abs() + truncation + 1e-14 * value.abs() * panels as f64,
    })
}

/// `int_0^1 P_K(u) f(u) du` by the same recursion, for testing.
#[cfg(test)]
fn weighted_mean<F: Fn(f64) -> f64>(k: u32, f: F, points: usize) -> f64 {
    let cheb = Chebyshev::new(points);
    let mut g: Vec<f64> = cheb.nodes.iter().map(|&u| f(u)).collect();
    for _ in 0..k {
        g = cheb
            .nodes
            .iter()
            .map(|&v| {
                (0..4)
                    .map(|r| {
                        let x = r as f64 + v;
                        let c = (0.5 * PI * x).cos();
                        c * c * cheb.eval(&g, 0.25 * x)
                    })
                    .sum::<f64>()
                    * 0.25
            })
            .collect();
    }
    GaussLegendre::new(points).integrate(0.0, 1.0, |x| cheb.eval(&g, x))
}
