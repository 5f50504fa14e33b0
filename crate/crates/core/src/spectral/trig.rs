//! Exact trigonometric polynomials `sum_n a_n e^{2 pi i n s}`.
//!
//! Coefficients are rationals stored as integer numerators over one common
//! denominator. Products are exact coefficient convolutions; an `i128` fast
//! path is taken whenever a magnitude bound rules out overflow, otherwise
//! the convolution runs on `BigInt`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::digit_sets::Budget;
use crate::error::{Error, Result};
use crate::exact::{big_to_f64, fmt_big_rational};

/// Finitely supported map from integer frequency to exact rational
/// coefficient. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPolynomial {
    denom: BigInt,
    terms: Vec<(i64, BigInt)>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        TrigPolynomial {
            denom: BigInt::one(),
            terms: Vec::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        TrigPolynomial::from_coefficients(vec![(0, c)])
    }

    /// Builds from `(frequency, coefficient)` pairs; repeated frequencies add.
    pub fn from_coefficients(pairs: Vec<(i64, BigRational)>) -> Self {
        let mut denom = BigInt::one();
        for (_, c) in &pairs {
            denom = denom.lcm(c.denom());
        }
        let terms = pairs
            .into_iter()
            .map(|(n, c)| {
                let scale = &denom / c.denom();
                (n, c.numer() * scale)
            })
            .collect();
        TrigPolynomial::from_numerators(denom, terms)
    }

    /// Numerators over a common positive denominator.
    pub(crate) fn from_numerators(denom: BigInt, mut terms: Vec<(i64, BigInt)>) -> Self {
        assert!(denom.is_positive());
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(i64, BigInt)> = Vec::with_capacity(terms.len());
        for (n, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == n => last.1 += c,
                _ => merged.push((n, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        let mut g = denom.clone();
        for (_, c) in &merged {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for t in &mut merged {
                t.1 /= &g;
            }
        }
        TrigPolynomial {
            denom: denom / g,
            terms: merged,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common denominator of the coefficients (in lowest terms).
    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Frequencies in increasing order.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn coefficient(&self, n: i64) -> BigRational {
        match self.terms.binary_search_by_key(&n, |t| t.0) {
            Ok(i) => BigRational::new(self.terms[i].1.clone(), self.denom.clone()),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.terms
            .iter()
            .map(move |(n, c)| (*n, BigRational::new(c.clone(), self.denom.clone())))
    }

    /// `(frequency, numerator)` pairs over [`Self::denominator`].
    pub fn numerators(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(0)
    }

    /// `sum_n a_n`, the value at `s = 0`.
    pub fn coefficient_sum(&self) -> BigRational {
        let total: BigInt = self.terms.iter().map(|t| &t.1).sum();
        BigRational::new(total, self.denom.clone())
    }

    /// `sum_n a_n^2`; equals the constant term of the square for even
    /// polynomials (Parseval).
    pub fn sum_of_squares(&self) -> BigRational {
        let total: BigInt = self.terms.iter().map(|t| &t.1 * &t.1).sum();
        BigRational::new(total, &self.denom * &self.denom)
    }

    /// `a_n = a_{-n}` for every `n`.
    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(n, c)| {
            self.terms
                .binary_search_by_key(&-n, |t| t.0)
                .is_ok_and(|i| &self.terms[i].1 == c)
        })
    }

    /// Coefficients as floats, in frequency order.
    pub fn to_f64(&self) -> Vec<(i64, f64)> {
        self.iter().map(|(n, c)| (n, big_to_f64(&c))).collect()
    }

    /// `sum_n a_n e^{2 pi i n s}` in increasing frequency order.
    pub fn eval(&self, s: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.to_f64() {
            let phase = frac_of_product(n, s);
            acc += c * Complex64::from_polar(1.0, std::f64::consts::TAU * phase);
        }
        acc
    }

    /// Exact product by coefficient convolution.
    pub fn mul(&self, other: &TrigPolynomial, budget: &Budget) -> Result<TrigPolynomial> {
        let terms = convolve(&self.terms, &other.terms, budget)?;
        Ok(TrigPolynomial::from_numerators(&self.denom * &other.denom, terms))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency,numerator,denominator\n");
        for (n, c) in self.iter() {
            out.push_str(&format!("{},{},{}\n", n, c.numer(), c.denom()));
        }
        out
    }
}

impl Serialize for TrigPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Coeff {
            frequency: i64,
            coefficient: String,
        }
        let coeffs: Vec<Coeff> = self
            .iter()
            .map(|(frequency, c)| Coeff {
                frequency,
                coefficient: fmt_big_rational(&c),
            })
            .collect();
        coeffs.serialize(s)
    }
}

/// Fractional part of `n * s` with the rounding error of the product folded
/// back in, so large frequencies keep an accurate phase.
pub(crate) fn frac_of_product(n: i64, s: f64) -> f64 {
    let nf = n as f64;
    let p = nf * s;
    let err = nf.mul_add(s, -p);
    let f = (p - p.floor()) + err;
    f - f.floor()
}

const DENSE_LIMIT: i64 = 1 << 24;

fn to_i128(terms: &[(i64, BigInt)]) -> Option<(Vec<(i64, i128)>, u128)> {
    let mut l1: u128 = 0;
    let mut out = Vec::with_capacity(terms.len());
    for (n, c) in terms {
        let v = c.to_i128()?;
        l1 = l1.checked_add(v.unsigned_abs())?;
        out.push((*n, v));
    }
    Some((out, l1))
}

fn span(terms: &[(i64, impl Sized)]) -> Option<(i64, i64)> {
    Some((terms.first()?.0, terms.last()?.0))
}

fn convolve(
    a: &[(i64, BigInt)],
    b: &[(i64, BigInt)],
    budget: &Budget,
) -> Result<Vec<(i64, BigInt)>> {
    let (Some((alo, ahi)), Some((blo, bhi))) = (span(a), span(b)) else {
        return Ok(Vec::new());
    };
    let lo = alo.checked_add(blo).ok_or(Error::Overflow("frequency"))?;
    let hi = ahi.checked_add(bhi).ok_or(Error::Overflow("frequency"))?;
    let width = hi - lo + 1;
    let max_support = (a.len() as u128 * b.len() as u128).min(width as u128);
    let fast = match (to_i128(a), to_i128(b)) {
        (Some((a, la)), Some((b, lb))) => la
            .checked_mul(lb)
            .filter(|&bound| bound < (1u128 << 126))
            .map(|_| (a, b)),
        _ => None,
    };
    if let Some((a, b)) = fast {
        let dense_ok = width <= DENSE_LIMIT && (width as u128) <= 64 * max_support;
        let out = if dense_ok {
            let mut acc = vec![0i128; width as usize];
            for &(n, x) in &a {
                for &(m, y) in &b {
                    acc[(n + m - lo) as usize] += x * y;
                }
            }
            let nonzero = acc.iter().filter(|v| **v != 0).count() as u128;
            check_support(nonzero, budget)?;
            acc.into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0)
                .map(|(i, v)| (lo + i as i64, BigInt::from(v)))
                .collect()
        } else {
            let mut acc: HashMap<i64, i128> = HashMap::new();
            for &(n, x) in &a {
                for &(m, y) in &b {
                    *acc.entry(n + m).or_insert(0) += x * y;
                }
                check_support(acc.len() as u128, budget)?;
            }
            acc.into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|(n, v)| (n, BigInt::from(v)))
                .collect()
        };
        return Ok(out);
    }
    let mut acc: HashMap<i64, BigInt> = HashMap::new();
    for (n, x) in a {
        for (m, y) in b {
            *acc.entry(n + m).or_insert_with(BigInt::zero) += x * y;
        }
        check_support(acc.len() as u128, budget)?;
    }
    Ok(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

fn check_support(size: u128, budget: &Budget) -> Result<()> {
    if size > budget.coefficients as u128 {
        return Err(Error::BudgetExceeded {
            what: "trigonometric polynomial support",
            requested: size,
            budget: budget.coefficients as u128,
        });
    }
    Ok(())
}

/// `p^e` by repeated exact convolution.
pub fn trigpoly_power(p: &TrigPolynomial, e: u32, budget: &Budget) -> Result<TrigPolynomial> {
    if e == 0 {
        return Err(Error::precondition("exponent must be at least 1"));
    }
    let mut acc = p.clone();
    for _ in 1..e {
        acc = acc.mul(p, budget)?;
    }
    Ok(acc)
}

/// Constant term of `p^e` without forming the full power: with
/// `e = a + b`, it is `sum_n [p^a]_n [p^b]_{-n}`.
pub fn constant_term_of_power(p: &TrigPolynomial, e: u32, budget: &Budget) -> Result<BigRational> {
    if e == 0 {
        return Err(Error::precondition("exponent must be at least 1"));
    }
    if e == 1 {
        return Ok(p.constant_term());
    }
    let a = e.div_ceil(2);
    let b = e - a;
    let pa = trigpoly_power(p, a, budget)?;
    let pb = if b == a { pa.clone() } else { trigpoly_power(p, b, budget)? };
    let mut total = BigInt::zero();
    let small = to_i128(pa.numerators()).zip(to_i128(pb.numerators()));
    match small {
        Some(((xa, la), (xb, lb))) if la.checked_mul(lb).is_some_and(|v| v < (1 << 126)) => {
            let mut t: i128 = 0;
            for &(n, x) in &xa {
                if let Ok(i) = xb.binary_search_by_key(&-n, |u| u.0) {
                    t += x * xb[i].1;
                }
            }
            total += t;
        }
        _ => {
            let tb = pb.numerators();
            for (n, x) in pa.numerators() {
                if let Ok(i) = tb.binary_search_by_key(&-n, |u| u.0) {
                    total += x * &tb[i].1;
                }
            }
        }
    }
    Ok(BigRational::new(total, pa.denominator() * pb.denominator()))
}

/// `sum_n a_n conj(mu_hat(n))`, i.e. `int p dmu` for the convention
/// `mu_hat(s) = int e^{-2 pi i s t} dmu(t)`. Terms are summed in increasing
/// frequency order. Fails when the imaginary part exceeds
/// `1e-9 * sum |a_n|`.
pub fn integrate_against<F>(p: &TrigPolynomial, mut transform: F) -> Result<f64>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    let mut l1 = 0.0;
    for (n, c) in p.to_f64() {
        let t = transform(n)?;
        acc += c * t.conj();
        l1 += c.abs();
    }
    let tol = 1e-9 * l1.max(f64::MIN_POSITIVE);
    if acc.im.abs() > tol {
        return Err(Error::NonReal { imag: acc.im, tol });
    }
    Ok(acc.re)
}

/// Transform of Lebesgue measure on `[0, 1]` at integer frequencies.
pub fn lebesgue_unit_transform(n: i64) -> Result<Complex64> {
    Ok(if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    fn p1() -> TrigPolynomial {
        TrigPolynomial::from_coefficients(vec![(-2, q(1, 4)), (0, q(1, 2)), (2, q(1, 4))])
    }

    #[test]
    fn power_one_is_identity() {
        let b = Budget::default();
        assert_eq!(trigpoly_power(&p1(), 1, &b).unwrap(), p1());
        assert!(trigpoly_power(&p1(), 0, &b).is_err());
    }

    #[test]
    fn square_of_cos_squared() {
        let b = Budget::default();
        let sq = trigpoly_power(&p1(), 2, &b).unwrap();
        assert_eq!(sq.constant_term(), q(3, 8));
        assert_eq!(sq.coefficient(4), q(1, 16));
        assert_eq!(sq.constant_term(), p1().sum_of_squares());
        assert_eq!(constant_term_of_power(&p1(), 2, &b).unwrap(), q(3, 8));
        assert_eq!(constant_term_of_power(&p1(), 3, &b).unwrap(), q(5, 16));
    }

    #[test]
    fn zero_terms_are_dropped_and_merged() {
        let p = TrigPolynomial::from_coefficients(vec![(1, q(1, 2)), (1, q(-1, 2)), (3, q(2, 6))]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(3), q(1, 3));
        assert_eq!(p.denominator(), &BigInt::from(3));
        assert!(!p.is_even());
        assert!(p1().is_even());
    }

    #[test]
    fn bigint_path_matches_fast_path() {
        // numerators near 2^70 force the BigInt convolution
        let big = BigInt::from(1u128 << 70);
        let p = TrigPolynomial::from_numerators(
            big.clone() * 4,
            vec![(-1, big.clone()), (0, big.clone() * 2), (1, big.clone())],
        );
        let b = Budget::default();
        let sq = trigpoly_power(&p, 2, &b).unwrap();
        let expect = TrigPolynomial::from_coefficients(vec![
            (-2, q(1, 16)),
            (-1, q(4, 16)),
            (0, q(6, 16)),
            (1, q(4, 16)),
            (2, q(1, 16)),
        ]);
        assert_eq!(sq, expect);
        let raw = TrigPolynomial {
            denom: big.clone() * big.clone() * 16,
            terms: vec![(0, big.clone() * big.clone() * 16)],
        };
        assert_eq!(trigpoly_power(&raw, 2, &b).unwrap().constant_term(), q(1, 1));
    }

    #[test]
    fn support_budget() {
        let tight = Budget {
            coefficients: 4,
            ..Budget::default()
        };
        assert!(trigpoly_power(&p1(), 2, &tight).unwrap_err().is_budget());
    }

    #[test]
    fn pairing_with_point_masses() {
        let delta0 = |_n: i64| Ok(Complex64::new(1.0, 0.0));
        assert_eq!(integrate_against(&p1(), delta0).unwrap(), 1.0);
        assert_eq!(integrate_against(&p1(), lebesgue_unit_transform).unwrap(), 0.5);
        // point mass at 1/8: cos^2(pi/4) = 1/2
        let at = |n: i64| Ok(Complex64::from_polar(1.0, -std::f64::consts::TAU * n as f64 / 8.0));
        assert!((integrate_against(&p1(), at).unwrap() - 0.5).abs() < 1e-15);
        let odd = TrigPolynomial::from_coefficients(vec![(1, q(1, 1))]);
        let rot = |_n: i64| Ok(Complex64::new(0.0, 1.0));
        assert!(matches!(integrate_against(&odd, rot), Err(Error::NonReal { .. })));
        let failing = |n: i64| {
            Err(Error::Transform {
                frequency: n,
                reason: "boom".into(),
            })
        };
        assert!(matches!(integrate_against(&p1(), failing), Err(Error::Transform { .. })));
    }

    #[test]
    fn phase_reduction_is_accurate() {
        let f = frac_of_product(44_739_242, 0.123_456_789);
        let exact = (44_739_242.0f64 * 0.123_456_789f64).fract();
        assert!((f - exact).abs() < 1e-7);
        assert_eq!(frac_of_product(-3, 0.5), 0.5);
    }
}
