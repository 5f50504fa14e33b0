//! Projections of the four-corner set, the sets
//! `E = {(x, (1-x) c1 + x c2 / 2) : c1, c2 in C, x in K}` and the
//! dimension bounds they are compared against.
//!
//! `P_x(x1, x2) = (1-x) x1 + x x2 / 2` is, up to scaling, the orthogonal
//! projection onto the unit vector along `(1-x, x/2)`; a profile over `x`
//! therefore samples the projection directions of `C x C`.

use rayon::prelude::*;
use serde::Serialize;

use crate::boxdim::{count_series, default_fit_range, regress_dim, BoxCountSeries, DimEstimate};
use crate::digit_sets::{enumerate_points, Budget, CantorSpec, PlanarPointSet, PointSet1D};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, Rational};
use crate::integrals::constants;

fn cantor_numerators(depth: u32, budget: &Budget) -> Result<(i128, Vec<i128>)> {
    let c = enumerate_points(&CantorSpec::cantor(), depth, budget)?;
    budget.check_points("pairs of Cantor points", (c.len() as u128).pow(2))?;
    Ok((c.denominator(), c.numerators().to_vec()))
}

/// `{a c1 + b c2 : c1, c2 in C_depth}` for `a = an/q`, `b = bn/q`.
fn linear_image(an: i128, bn: i128, q: i128, depth: u32, budget: &Budget) -> Result<PointSet1D> {
    let (den, nums) = cantor_numerators(depth, budget)?;
    let big_den = q.checked_mul(den).ok_or(Error::Overflow("image denominator"))?;
    let mut out = Vec::with_capacity(nums.len() * nums.len());
    for &c1 in &nums {
        let base = an.checked_mul(c1).ok_or(Error::Overflow("image numerator"))?;
        for &c2 in &nums {
            let v = bn
                .checked_mul(c2)
                .and_then(|v| v.checked_add(base))
                .ok_or(Error::Overflow("image numerator"))?;
            out.push(v);
        }
    }
    PointSet1D::from_numerators(depth, big_den, out)
}

/// `P_x(C_depth x C_depth)`, exactly.
pub fn project_px(x: &Rational, depth: u32, budget: &Budget) -> Result<PointSet1D> {
    if *x < Rational::from_integer(0) || *x > Rational::from_integer(1) {
        return Err(Error::precondition(format!("x = {} outside [0, 1]", fmt_rational(x))));
    }
    let (p, q) = (*x.numer(), *x.denom());
    let q2 = q.checked_mul(2).ok_or(Error::Overflow("projection denominator"))?;
    linear_image(2 * (q - p), p, q2, depth, budget)
}

/// `C_depth + t C_depth`, exactly.
pub fn sumset(t: &Rational, depth: u32, budget: &Budget) -> Result<PointSet1D> {
    linear_image(*t.denom(), *t.numer(), *t.denom(), depth, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSet {
    pub spec: CantorSpec,
    pub requested: f64,
    /// `log d / log base` for the chosen digit count `d`.
    pub achieved: f64,
}

/// A digit set of dimension close to `alpha`: `d = round(base^alpha)`
/// digits spread evenly over `0..base`.
pub fn build_k(alpha: f64, base: u32) -> Result<KSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidSpec(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if base < 3 {
        return Err(Error::InvalidSpec(format!("base must be at least 3, got {base}")));
    }
    let d = (base as f64).powf(alpha).round() as u32;
    if d < 2 || d >= base {
        return Err(Error::InvalidSpec(format!(
            "alpha = {alpha} in base {base} needs {d} digits; need 2 <= d < {base}"
        )));
    }
    let digits: Vec<u32> = (0..d)
        .map(|i| ((i as f64) * (base - 1) as f64 / (d - 1) as f64).round() as u32)
        .collect();
    let spec = CantorSpec::new(base, &digits)?;
    Ok(KSet {
        achieved: spec.similarity_dim(),
        requested: alpha,
        spec,
    })
}

/// The planar set `{(x, P_x(c1, c2)) : x in K_depth_k, c1, c2 in C_depth_c}`.
/// Its depth is `min(depth_k, depth_c)`.
pub fn build_e(spec_k: &CantorSpec, depth_k: u32, depth_c: u32, budget: &Budget) -> Result<PlanarPointSet> {
    let ks = enumerate_points(spec_k, depth_k, budget)?;
    let (c_den, cn) = cantor_numerators(depth_c, budget)?;
    let total = (ks.len() as u128) * (cn.len() as u128).pow(2);
    budget.check_points("build_e", total)?;
    let q = ks.denominator();
    // y = ((q - p) 2 c1 + p c2) / (2 q c_den)
    let y_den = q
        .checked_mul(2)
        .and_then(|v| v.checked_mul(c_den))
        .ok_or(Error::Overflow("section denominator"))?;
    let mut points = Vec::with_capacity(total as usize);
    let mut section = Vec::with_capacity(cn.len() * cn.len());
    for &p in ks.numerators() {
        section.clear();
        let a = 2 * (q - p);
        for &c1 in &cn {
            let base = a.checked_mul(c1).ok_or(Error::Overflow("section numerator"))?;
            for &c2 in &cn {
                section.push(base + p * c2);
            }
        }
        section.sort_unstable();
        section.dedup();
        points.extend(section.iter().map(|&y| (p, y)));
    }
    PlanarPointSet::from_numerators(depth_k.min(depth_c), q, y_den, points)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    pub dim_estimate: DimEstimate,
    pub n_points: usize,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// `x = i / (grid - 1)` for `i < grid`.
pub fn uniform_grid(grid: u32) -> Result<Vec<Rational>> {
    if grid < 2 {
        return Err(Error::InvalidSpec(format!("grid must be at least 2, got {grid}")));
    }
    let d = (grid - 1) as i128;
    Ok((0..grid as i128).map(|i| Rational::new(i, d)).collect())
}

/// Box-dimension estimate of `P_x(C x C)` at each `x`, in input order.
pub fn dimension_profile(depth: u32, xs: &[Rational], budget: &Budget) -> Result<Vec<ProfilePoint>> {
    let (lo, hi) = default_fit_range(depth);
    xs.par_iter()
        .map(|x| {
            let img = project_px(x, depth, budget)?;
            let series = count_series(&img, 4, lo, hi)?;
            Ok(ProfilePoint {
                x: *x,
                dim_estimate: regress_dim(&series)?,
                n_points: img.len(),
            })
        })
        .collect()
}

/// Dimension bounds for `E` when `dim K = alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub alpha: f64,
    /// `max(1/2 + alpha, 2 alpha)`.
    pub lower_elementary: f64,
    /// `c + 3 alpha / 2`, from the `L^2` estimate of `P_K`.
    pub lower_l2: f64,
    /// `c' + 4 alpha / 3`, from the `L^3` estimate of `P_K`.
    pub lower_l3: f64,
    /// `1/2 + 3 alpha / 2`.
    pub upper: f64,
    pub c: f64,
    pub c_prime: f64,
}

impl BoundsReport {
    /// `(1 - 2c, 2c)`: the `alpha` for which `lower_l2` beats
    /// `lower_elementary`. The lower edge is where `c + 3 alpha / 2` passes
    /// `1/2 + alpha`; `1/2 - c` is too small by `1/2 - c`.
    pub fn improvement_window(&self) -> (f64, f64) {
        (1.0 - 2.0 * self.c, 2.0 * self.c)
    }

    pub fn l2_improves(&self) -> bool {
        self.lower_l2 > self.lower_elementary
    }
}

pub fn bounds_report(alpha: f64) -> Result<BoundsReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidSpec(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let k = constants();
    Ok(BoundsReport {
        alpha,
        lower_elementary: (0.5 + alpha).max(2.0 * alpha),
        lower_l2: k.c + 1.5 * alpha,
        lower_l3: k.c_prime + 4.0 * alpha / 3.0,
        upper: 0.5 + 1.5 * alpha,
        c: k.c,
        c_prime: k.c_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FurstenbergReport {
    pub k_set: KSet,
    pub depth_k: u32,
    pub depth_c: u32,
    /// Bounds evaluated at the achieved dimension of `K`.
    pub bounds: BoundsReport,
    pub n_points: usize,
    pub series: BoxCountSeries,
    pub estimate: DimEstimate,
}

/// Builds `E` for `K = build_k(alpha, base)` and fits its box dimension.
pub fn furstenberg_experiment(
    alpha: f64,
    base: u32,
    depth_k: u32,
    depth_c: u32,
    budget: &Budget,
) -> Result<FurstenbergReport> {
    let k_set = build_k(alpha, base)?;
    let bounds = bounds_report(k_set.achieved)?;
    let e = build_e(&k_set.spec, depth_k, depth_c, budget)?;
    // Grid cells are base 4; K digits in another base resolve to 4^-m only
    // down to base^-depth_k.
    let resolution = ((depth_k as f64) * (base as f64).log(4.0)).floor() as u32;
    let depth = resolution.min(depth_c);
    let (lo, hi) = default_fit_range(depth);
    let series = count_series(&e, 4, 0, depth)?;
    let estimate = regress_dim(&series.restrict(lo, hi))?;
    Ok(FurstenbergReport {
        k_set,
        depth_k,
        depth_c,
        bounds,
        n_points: e.len(),
        series,
        estimate,
    })
}

/// Scatter plot of a planar point set on the unit square.
pub fn svg_scatter(points: &[(f64, f64)], title: &str) -> String {
    const SIZE: f64 = 512.0;
    const PAD: f64 = 16.0;
    let (mut y_lo, mut y_hi) = (0.0f64, 1.0f64);
    for &(_, y) in points {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let span = (y_hi - y_lo).max(f64::MIN_POSITIVE);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"0 0 {w} {w}\">\n<title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        escape(title),
        w = SIZE + 2.0 * PAD
    );
    for &(x, y) in points {
        let px = PAD + x * SIZE;
        let py = PAD + (1.0 - (y - y_lo) / span) * SIZE;
        out.push_str(&format!("<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"1\" height=\"1\"/>\n"));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
