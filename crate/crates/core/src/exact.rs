//! Small helpers around exact rationals.

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

/// Exact rational with 128-bit numerator and denominator.
pub type Rational = Ratio<i128>;

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_big_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `p/q`, `p`, or a terminating decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 30 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let scale = 10i128.checked_pow(frac.len() as u32)?;
        let frac_part: i128 = frac.parse().ok()?;
        let mag = int_part.abs().checked_mul(scale)?.checked_add(frac_part)?;
        return Some(Rational::new(if neg { -mag } else { mag }, scale));
    }
    s.parse::<i128>().ok().map(Rational::from_integer)
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    // ToPrimitive on BigRational handles huge numerators and denominators.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// gcd of a denominator and a list of numerators; 1 when everything is zero.
pub(crate) fn common_gcd<'a>(denom: i128, nums: impl IntoIterator<Item = &'a i128>) -> i128 {
    let mut g = denom.abs();
    for n in nums {
        if g == 1 {
            break;
        }
        g = g.gcd(n);
    }
    if g.is_zero() {
        1
    } else {
        g.abs()
    }
}
