//! Covering counts on `b`-adic grids and log-log slope estimates.
//!
//! Cells are half-open, `[j b^-m, (j+1) b^-m)`, and indices are computed
//! with exact integer floors, so a point on a cell boundary belongs to the
//! upper cell.

use serde::Serialize;

use crate::digit_sets::{PlanarPointSet, PointSet1D};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Point sets that can be binned into `b`-adic cells.
pub trait BoxCountable {
    fn ambient_dim(&self) -> u32;
    /// Digit depth at which the set was generated.
    fn resolution_depth(&self) -> u32;
    /// Sorted, deduplicated cell indices at level `m`.
    fn cells(&self, base: u32, m: u32) -> Result<Vec<(i128, i128)>>;
}

fn scale(base: u32, m: u32) -> Result<i128> {
    if base < 2 {
        return Err(Error::InvalidSpec(format!("base must be at least 2, got {base}")));
    }
    (base as i128).checked_pow(m).ok_or(Error::Overflow("grid scale b^m"))
}

fn cell(num: i128, den: i128, scale: i128) -> Result<i128> {
    let n = num.checked_mul(scale).ok_or(Error::Overflow("cell index"))?;
    Ok(n.div_euclid(den))
}

impl BoxCountable for PointSet1D {
    fn ambient_dim(&self) -> u32 {
        1
    }

    fn resolution_depth(&self) -> u32 {
        self.depth()
    }

    fn cells(&self, base: u32, m: u32) -> Result<Vec<(i128, i128)>> {
        let s = scale(base, m)?;
        let den = self.denominator();
        let mut out = self
            .numerators()
            .iter()
            .map(|&n| cell(n, den, s).map(|j| (j, 0)))
            .collect::<Result<Vec<_>>>()?;
        // Numerators are sorted, so the indices already are.
        out.dedup();
        Ok(out)
    }
}

impl BoxCountable for PlanarPointSet {
    fn ambient_dim(&self) -> u32 {
        2
    }

    fn resolution_depth(&self) -> u32 {
        self.depth()
    }

    fn cells(&self, base: u32, m: u32) -> Result<Vec<(i128, i128)>> {
        let s = scale(base, m)?;
        let (xd, yd) = self.denominators();
        let mut out = self
            .numerators()
            .iter()
            .map(|&(x, y)| Ok((cell(x, xd, s)?, cell(y, yd, s)?)))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub fn box_count_1d(points: &PointSet1D, base: u32, m: u32) -> Result<u64> {
    Ok(points.cells(base, m)?.len() as u64)
}

pub fn box_count_2d(points: &PlanarPointSet, base: u32, m: u32) -> Result<u64> {
    Ok(points.cells(base, m)?.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCountSeries {
    base: u32,
    ambient_dim: u32,
    entries: Vec<(u32, u64)>,
}

impl BoxCountSeries {
    /// Checks that `m` increases strictly, counts are positive, each count
    /// is at most `b^{d m}`, and consecutive counts grow by a factor in
    /// `[1, b^{d (m' - m)}]`.
    pub fn new(base: u32, ambient_dim: u32, entries: Vec<(u32, u64)>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSpec(format!("base must be at least 2, got {base}")));
        }
        if !(1..=2).contains(&ambient_dim) {
            return Err(Error::InvalidSpec(format!("ambient dimension {ambient_dim} unsupported")));
        }
        let cap = |m: u32| (base as u128).checked_pow(ambient_dim * m);
        for (i, &(m, n)) in entries.iter().enumerate() {
            if n == 0 {
                return Err(Error::precondition(format!("zero count at m = {m}")));
            }
            if let Some(c) = cap(m) {
                if n as u128 > c {
                    return Err(Error::precondition(format!("count {n} exceeds {c} cells at m = {m}")));
                }
            }
            if i > 0 {
                let (pm, pn) = entries[i - 1];
                if m <= pm {
                    return Err(Error::precondition("scale exponents must increase strictly"));
                }
                let grow = cap(m - pm).unwrap_or(u128::MAX);
                if n < pn || n as u128 > (pn as u128).saturating_mul(grow) {
                    return Err(Error::precondition(format!(
                        "count ratio {n}/{pn} outside [1, {grow}] between m = {pm} and m = {m}"
                    )));
                }
            }
        }
        Ok(BoxCountSeries {
            base,
            ambient_dim,
            entries,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn entries(&self) -> &[(u32, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, m: u32) -> Option<u64> {
        self.entries.iter().find(|e| e.0 == m).map(|e| e.1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,count\n");
        for (m, n) in &self.entries {
            out.push_str(&format!("{m},{n}\n"));
        }
        out
    }

    /// Entries with `lo <= m <= hi`.
    pub fn restrict(&self, lo: u32, hi: u32) -> BoxCountSeries {
        BoxCountSeries {
            base: self.base,
            ambient_dim: self.ambient_dim,
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(m, _)| m >= lo && m <= hi)
                .collect(),
        }
    }
}

/// Counts for `m` in `m_lo..=m_hi`. The finest level is binned once and
/// coarser levels are obtained by dividing cell indices, which agrees with
/// direct binning because `floor(floor(x) / q) = floor(x / q)`.
pub fn count_series<S: BoxCountable + ?Sized>(
    points: &S,
    base: u32,
    m_lo: u32,
    m_hi: u32,
) -> Result<BoxCountSeries> {
    if m_lo > m_hi {
        return Err(Error::InvalidSpec(format!("empty scale range {m_lo}..{m_hi}")));
    }
    if m_hi > points.resolution_depth() {
        return Err(Error::precondition(format!(
            "m_hi = {m_hi} exceeds the point set depth {}",
            points.resolution_depth()
        )));
    }
    let finest = points.cells(base, m_hi)?;
    if finest.is_empty() {
        return Err(Error::precondition("cannot count boxes of an empty set"));
    }
    let two_d = points.ambient_dim() == 2;
    let mut entries = Vec::with_capacity((m_hi - m_lo + 1) as usize);
    for m in m_lo..=m_hi {
        let q = scale(base, m_hi - m)?;
        let mut coarse: Vec<(i128, i128)> = finest
            .iter()
            .map(|&(x, y)| (x.div_euclid(q), if two_d { y.div_euclid(q) } else { 0 }))
            .collect();
        coarse.sort_unstable();
        coarse.dedup();
        entries.push((m, coarse.len() as u64));
    }
    BoxCountSeries::new(base, points.ambient_dim(), entries)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub m_range: (u32, u32),
}

/// Default fit range `2..=depth-1`, widened to the whole series when that
/// leaves fewer than three levels.
pub fn default_fit_range(depth: u32) -> (u32, u32) {
    if depth >= 5 {
        (2, depth - 1)
    } else {
        (0, depth)
    }
}

/// Least-squares fit of `ln N_m` against `m ln b`.
pub fn regress_dim(series: &BoxCountSeries) -> Result<DimEstimate> {
    let e = series.entries();
    if e.len() < 3 {
        return Err(Error::precondition(format!(
            "need at least 3 scales to fit, got {}",
            e.len()
        )));
    }
    let lb = (series.base() as f64).ln();
    let pts: Vec<(f64, f64)> = e.iter().map(|&(m, n)| (m as f64 * lb, (n as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(DimEstimate {
        slope,
        intercept,
        r_squared,
        m_range: (e[0].0, e[e.len() - 1].0),
    })
}

/// Largest distance between consecutive points.
pub fn max_gap(points: &PointSet1D) -> Result<Rational> {
    let nums = points.numerators();
    if nums.len() < 2 {
        return Err(Error::precondition("max_gap needs at least 2 points"));
    }
    let g = nums.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Ok(Rational::new(g, points.denominator()))
}
