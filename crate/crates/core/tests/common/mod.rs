//! Independent reference computations for the integration tests. None of
//! these go through the convolution engine, the lookup table or the
//! library's quadrature.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn binomial(n: u32, k: u32) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// `int_0^1 P_K^p` by a carry recursion over levels.
///
/// Level `l` of `P_K^p` is `cos^{2p}(2 pi 4^l s)`, whose coefficients are
/// `C(2p, p + j) / 4^p` at frequency `2 j 4^l`, `|j| <= p`. The constant
/// term collects the tuples with `sum_l j_l 4^l = 0`; reading that sum
/// digit by digit from level 0 upward, a carry `c` must satisfy
/// `c + j_l = 0 mod 4` and passes `(c + j_l) / 4` on.
pub fn lp_constant_term(k: u32, p: u32) -> BigRational {
    let weights: Vec<(i64, BigInt)> = (-(p as i64)..=p as i64)
        .map(|j| (j, binomial(2 * p, (p as i64 + j) as u32)))
        .collect();
    let mut states: HashMap<i64, BigInt> = HashMap::from([(0, BigInt::one())]);
    for _ in 0..k {
        let mut next: HashMap<i64, BigInt> = HashMap::new();
        for (c, count) in &states {
            for (j, w) in &weights {
                let v = c + j;
                if v.rem_euclid(4) == 0 {
                    *next.entry(v / 4).or_insert_with(BigInt::zero) += count * w;
                }
            }
        }
        states = next;
    }
    let num = states.remove(&0).unwrap_or_else(BigInt::zero);
    BigRational::new(num, BigInt::from(4u8).pow(p * k))
}

/// Histogram of `sum_k (e_k + e'_k) 4^k` over all `e, e'` in `{-1, 1}^K`.
pub fn sign_pair_histogram(k: u32) -> BTreeMap<i64, u64> {
    let mut hist = BTreeMap::new();
    for code in 0u64..(1 << (2 * k)) {
        let mut n = 0i64;
        let mut pow = 1i64;
        for l in 0..k {
            let e = if code >> (2 * l) & 1 == 1 { 1 } else { -1 };
            let f = if code >> (2 * l + 1) & 1 == 1 { 1 } else { -1 };
            n += (e + f) * pow;
            pow *= 4;
        }
        *hist.entry(n).or_insert(0) += 1;
    }
    hist
}

/// Number of zero digits of `n` in its `K`-digit `{-2, 0, 2}` base-4
/// expansion, found by exhaustive search over `3^K` digit strings.
pub fn zero_digits(n: i64, k: u32) -> Option<u32> {
    let mut found = None;
    for code in 0..3u64.pow(k) {
        let (mut c, mut v, mut pow, mut zeros) = (code, 0i64, 1i64, 0);
        for _ in 0..k {
            let d = (c % 3) as i64 * 2 - 2;
            if d == 0 {
                zeros += 1;
            }
            v += d * pow;
            pow *= 4;
            c /= 3;
        }
        if v == n {
            assert!(found.is_none(), "expansion of {n} is not unique");
            found = Some(zeros);
        }
    }
    found
}

/// `|lambda_hat(s)|^2 = prod_{k >= 1} cos^2(3 pi 4^-k s)`, taken until the
/// factors are 1 to double precision.
pub fn abs_lambda_hat_sq(s: f64) -> f64 {
    let mut v = 1.0;
    let mut x = 3.0 * PI * s / 4.0;
    while x.abs() > 1e-9 {
        v *= x.cos().powi(2);
        x /= 4.0;
    }
    v
}

/// `P_K(s)` straight from its definition.
pub fn pk_direct(k: u32, s: f64) -> f64 {
    (0..k)
        .map(|l| (2.0 * PI * 4f64.powi(l as i32) * s).cos().powi(2))
        .product()
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Occupied cells `floor(x b^m)` of points `num / den`, by hashing.
pub fn brute_box_count(nums: &[i128], den: i128, base: u32, m: u32) -> usize {
    let scale = (base as i128).pow(m);
    let cells: std::collections::HashSet<i128> =
        nums.iter().map(|&n| (n * scale).div_euclid(den)).collect();
    cells.len()
}

/// Depth-`n` points of the base-4 `{0, 3}` Cantor set as numerators over
/// `4^n`, by direct digit expansion.
pub fn cantor_numerators(n: u32) -> Vec<i128> {
    (0u64..1 << n)
        .map(|code| {
            (0..n).fold(0i128, |acc, j| {
                let d = if code >> (n - 1 - j) & 1 == 1 { 3 } else { 0 };
                acc * 4 + d
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `m ln base`.
pub fn loglog_slope(base: f64, pts: &[(u32, u64)]) -> f64 {
    let xs: Vec<f64> = pts.iter().map(|p| p.0 as f64 * base.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| (p.1 as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
