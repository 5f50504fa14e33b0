//! Finite-depth approximations of digit-restricted Cantor sets.
//!
//! A [`CantorSpec`] with base `b` and digit set `D` describes the compact set
//! `{ sum_j e_j b^-j : e_j in D }`. Everything here is computed at a fixed
//! finite depth `n` with exact rational arithmetic: the depth-`n` points
//! share the denominator `b^n`, so point sets store integer numerators over
//! one common denominator.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{common_gcd, fmt_rational, rational_to_f64, Rational};

/// Size limits for exact enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximum number of points (or atoms) in an enumerated set.
    pub points: u64,
    /// Maximum support size of a trigonometric polynomial.
    pub coefficients: u64,
    /// Maximum number of sign tuples enumerated by the brute-force counter.
    pub tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            points: 1 << 24,
            coefficients: 1_594_323, // 3^13
            tuples: 1 << 16,         // 4^8
        }
    }
}

impl Budget {
    pub(crate) fn check_points(&self, what: &'static str, requested: u128) -> Result<()> {
        if requested > self.points as u128 {
            return Err(Error::BudgetExceeded {
                what,
                requested,
                budget: self.points as u128,
            });
        }
        Ok(())
    }
}

/// A digit-restricted self-similar set in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CantorSpec {
    base: u32,
    digits: Vec<u32>,
}

impl CantorSpec {
    /// Validates `base >= 2` and a nonempty digit list inside `[0, base - 1]`
    /// without repeats. Digits are stored in increasing order.
    pub fn new(base: u32, digits: &[u32]) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSpec(format!("base must be at least 2, got {base}")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidSpec("digit list is empty".into()));
        }
        let mut sorted = digits.to_vec();
        sorted.sort_unstable();
        if let Some(&d) = sorted.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidSpec(format!("digit {d} out of range for base {base}")));
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("duplicate digits".into()));
        }
        Ok(CantorSpec {
            base,
            digits: sorted,
        })
    }

    /// The middle-half Cantor set: base 4, digits {0, 3}.
    pub fn cantor() -> Self {
        CantorSpec {
            base: 4,
            digits: vec![0, 3],
        }
    }

    /// All digits `0..base`; the limit set is `[0, 1]`.
    pub fn full(base: u32) -> Result<Self> {
        let digits: Vec<u32> = (0..base).collect();
        CantorSpec::new(base, &digits)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `log |D| / log b`.
    pub fn similarity_dim(&self) -> f64 {
        if self.digits.len() == 1 {
            return 0.0;
        }
        (self.digits.len() as f64).ln() / (self.base as f64).ln()
    }

    /// Number of depth-`n` words, `|D|^n`, or `None` on overflow.
    pub fn word_count(&self, depth: u32) -> Option<u128> {
        (self.digits.len() as u128).checked_pow(depth)
    }
}

pub fn make_spec(base: u32, digits: &[u32]) -> Result<CantorSpec> {
    CantorSpec::new(base, digits)
}

/// Sorted, duplicate-free set of rationals over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet1D {
    depth: u32,
    denom: i128,
    nums: Vec<i128>,
}

impl PointSet1D {
    /// Builds a set from numerators over `denom`; sorts, removes duplicates
    /// and reduces to the smallest common denominator.
    pub fn from_numerators(depth: u32, denom: i128, mut nums: Vec<i128>) -> Result<Self> {
        if denom <= 0 {
            return Err(Error::precondition("denominator must be positive"));
        }
        nums.sort_unstable();
        nums.dedup();
        let g = common_gcd(denom, &nums);
        if g > 1 {
            for n in &mut nums {
                *n /= g;
            }
        }
        Ok(PointSet1D {
            depth,
            denom: denom / g,
            nums,
        })
    }

    pub fn from_rationals(depth: u32, points: &[Rational]) -> Result<Self> {
        let mut denom: i128 = 1;
        for p in points {
            denom = denom.lcm(p.denom());
        }
        let nums = points
            .iter()
            .map(|p| {
                p.numer()
                    .checked_mul(denom / p.denom())
                    .ok_or(Error::Overflow("common denominator"))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet1D::from_numerators(depth, denom, nums)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    /// Common denominator of all points.
    pub fn denominator(&self) -> i128 {
        self.denom
    }

    /// Numerators over [`Self::denominator`], strictly increasing.
    pub fn numerators(&self) -> &[i128] {
        &self.nums
    }

    pub fn point(&self, i: usize) -> Rational {
        Rational::new(self.nums[i], self.denom)
    }

    pub fn iter(&self) -> impl Iterator<Item = Rational> + '_ {
        self.nums.iter().map(move |&n| Rational::new(n, self.denom))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.nums.iter().map(|&n| n as f64 / self.denom as f64).collect()
    }

    pub fn contains(&self, p: &Rational) -> bool {
        if self.denom % p.denom() != 0 {
            return false;
        }
        match p.numer().checked_mul(self.denom / p.denom()) {
            Some(n) => self.nums.binary_search(&n).is_ok(),
            None => false,
        }
    }

    /// Multiplies every point by a rational factor.
    pub fn scaled(&self, factor: Rational) -> Result<Self> {
        let denom = self
            .denom
            .checked_mul(*factor.denom())
            .ok_or(Error::Overflow("scaled point set"))?;
        let nums = self
            .nums
            .iter()
            .map(|&n| n.checked_mul(*factor.numer()).ok_or(Error::Overflow("scaled point set")))
            .collect::<Result<Vec<_>>>()?;
        PointSet1D::from_numerators(self.depth, denom, nums)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,position_decimal\n");
        for p in self.iter() {
            out.push_str(&format!("{},{:.17e}\n", fmt_rational(&p), rational_to_f64(&p)));
        }
        out
    }
}

impl Serialize for PointSet1D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            depth: u32,
            points: Vec<String>,
        }
        Repr {
            depth: self.depth,
            points: self.iter().map(|p| fmt_rational(&p)).collect(),
        }
        .serialize(s)
    }
}

/// Depth-`n` truncation: the `|D|^n` points `sum_{j<=n} e_j b^-j`, sorted.
pub fn enumerate_points(spec: &CantorSpec, depth: u32, budget: &Budget) -> Result<PointSet1D> {
    let count = spec
        .word_count(depth)
        .ok_or(Error::Overflow("point count"))?;
    budget.check_points("enumerate_points", count)?;
    let base = spec.base as i128;
    let denom = base
        .checked_pow(depth)
        .ok_or(Error::Overflow("base^depth"))?;
    let mut nums: Vec<i128> = vec![0];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(nums.len() * spec.digits.len());
        // a*b + d with d < b keeps lexicographic order, so the output stays sorted
        for &a in &nums {
            for &d in &spec.digits {
                next.push(a * base + d as i128);
            }
        }
        nums = next;
    }
    // reduces, e.g. digits {0, 2} in base 4 share a factor with 4^n
    PointSet1D::from_numerators(depth, denom, nums)
}

/// An atomic probability measure with exact positions and weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<(Rational, Rational)>,
}

impl DiscreteMeasure {
    /// Merges repeated positions and checks that weights are positive and
    /// sum to exactly one.
    pub fn new(mut atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::precondition("measure has no atoms"));
        }
        if atoms.iter().any(|(_, w)| *w <= Rational::from_integer(0)) {
            return Err(Error::precondition("atom weights must be positive"));
        }
        atoms.sort_by_key(|a| a.0);
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += w,
                _ => merged.push((p, w)),
            }
        }
        let total: Rational = merged.iter().map(|(_, w)| *w).sum();
        if total != Rational::from_integer(1) {
            return Err(Error::precondition(format!(
                "weights sum to {}, not 1",
                fmt_rational(&total)
            )));
        }
        Ok(DiscreteMeasure { atoms: merged })
    }

    pub fn dirac(at: Rational) -> Self {
        DiscreteMeasure {
            atoms: vec![(at, Rational::from_integer(1))],
        }
    }

    /// Uniform weights on a point set.
    pub fn uniform(points: &PointSet1D) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::precondition("empty point set"));
        }
        let w = Rational::new(1, points.len() as i128);
        Ok(DiscreteMeasure {
            atoms: points.iter().map(|p| (p, w)).collect(),
        })
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> Rational {
        self.atoms.iter().map(|(_, w)| *w).sum()
    }

    /// Push-forward under `t -> factor * t`.
    pub fn dilate(&self, factor: Rational) -> Result<Self> {
        if factor == Rational::from_integer(0) {
            return Ok(DiscreteMeasure::dirac(Rational::from_integer(0)));
        }
        let mut atoms: Vec<(Rational, Rational)> =
            self.atoms.iter().map(|(p, w)| (*p * factor, *w)).collect();
        if factor < Rational::from_integer(0) {
            atoms.reverse();
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// Positions and weights as floats, in increasing position order.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        self.atoms
            .iter()
            .map(|(p, w)| (rational_to_f64(p), rational_to_f64(w)))
            .unzip()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,weight,position_decimal,weight_decimal\n");
        for (p, w) in &self.atoms {
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e}\n",
                fmt_rational(p),
                fmt_rational(w),
                rational_to_f64(p),
                rational_to_f64(w)
            ));
        }
        out
    }
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Atom {
            position: String,
            weight: String,
        }
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|(p, w)| Atom {
                position: fmt_rational(p),
                weight: fmt_rational(w),
            })
            .collect();
        atoms.serialize(s)
    }
}

/// Uniform weights `|D|^-n` on the depth-`n` points; the truncation of the
/// infinite convolution of the one-digit measures.
pub fn natural_measure(spec: &CantorSpec, depth: u32, budget: &Budget) -> Result<DiscreteMeasure> {
    let points = enumerate_points(spec, depth, budget)?;
    DiscreteMeasure::uniform(&points)
}

/// Deduplicated planar points with one common denominator per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarPointSet {
    depth: u32,
    x_den: i128,
    y_den: i128,
    points: Vec<(i128, i128)>,
}

impl PlanarPointSet {
    pub fn from_numerators(
        depth: u32,
        x_den: i128,
        y_den: i128,
        mut points: Vec<(i128, i128)>,
    ) -> Result<Self> {
        if x_den <= 0 || y_den <= 0 {
            return Err(Error::precondition("denominators must be positive"));
        }
        points.sort_unstable();
        points.dedup();
        let gx = common_gcd(x_den, points.iter().map(|(x, _)| x));
        let gy = common_gcd(y_den, points.iter().map(|(_, y)| y));
        if gx > 1 || gy > 1 {
            for (x, y) in &mut points {
                *x /= gx;
                *y /= gy;
            }
        }
        Ok(PlanarPointSet {
            depth,
            x_den: x_den / gx,
            y_den: y_den / gy,
            points,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn denominators(&self) -> (i128, i128) {
        (self.x_den, self.y_den)
    }

    /// Numerator pairs, sorted lexicographically.
    pub fn numerators(&self) -> &[(i128, i128)] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        self.points
            .iter()
            .map(move |&(x, y)| (Rational::new(x, self.x_den), Rational::new(y, self.y_den)))
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        if self.x_den % x.denom() != 0 || self.y_den % y.denom() != 0 {
            return false;
        }
        let (Some(xn), Some(yn)) = (
            x.numer().checked_mul(self.x_den / x.denom()),
            y.numer().checked_mul(self.y_den / y.denom()),
        ) else {
            return false;
        };
        self.points.binary_search(&(xn, yn)).is_ok()
    }

    /// The vertical section `{y : (x, y) in set}`.
    pub fn section(&self, x: &Rational) -> Result<PointSet1D> {
        let nums: Vec<i128> = if self.x_den % x.denom() != 0 {
            Vec::new()
        } else {
            let xn = x
                .numer()
                .checked_mul(self.x_den / x.denom())
                .ok_or(Error::Overflow("section abscissa"))?;
            let lo = self.points.partition_point(|p| p.0 < xn);
            self.points[lo..]
                .iter()
                .take_while(|p| p.0 == xn)
                .map(|p| p.1)
                .collect()
        };
        PointSet1D::from_numerators(self.depth, self.y_den, nums)
    }

    /// Distinct abscissae, increasing.
    pub fn abscissae(&self) -> Vec<Rational> {
        let mut xs: Vec<Rational> = Vec::new();
        for &(x, _) in &self.points {
            let r = Rational::new(x, self.x_den);
            if xs.last().is_none_or(|l| l.cmp(&r) != Ordering::Equal) {
                xs.push(r);
            }
        }
        xs
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|&(x, y)| (x as f64 / self.x_den as f64, y as f64 / self.y_den as f64))
            .collect()
    }
}

/// `C_n x C_n` for the base-4 digits {0, 3}: `4^n` points.
pub fn four_corner(depth: u32, budget: &Budget) -> Result<PlanarPointSet> {
    let c = CantorSpec::cantor();
    let count = c.word_count(2 * depth).ok_or(Error::Overflow("point count"))?;
    budget.check_points("four_corner", count)?;
    let pts = enumerate_points(&c, depth, budget)?;
    let mut points = Vec::with_capacity(pts.len() * pts.len());
    for &x in pts.numerators() {
        for &y in pts.numerators() {
            points.push((x, y));
        }
    }
    PlanarPointSet::from_numerators(depth, pts.denominator(), pts.denominator(), points)
}
