//! Balanced base-4 digit representations with digits in {-2, 0, 2}.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digit_sets::Budget;
use crate::error::{Error, Result};

/// The unique expansion `n = sum_k delta_k 4^k` with `delta_k in {-2, 0, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepDigits {
    delta: Vec<i8>,
}

impl RepDigits {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// Digits from the lowest power upward.
    pub fn digits(&self) -> &[i8] {
        &self.delta
    }

    /// Number of zero digits.
    pub fn zeros(&self) -> u32 {
        self.delta.iter().filter(|&&d| d == 0).count() as u32
    }

    /// `sum_k delta_k 4^k`.
    pub fn value(&self) -> i64 {
        self.delta
            .iter()
            .rev()
            .fold(0i64, |acc, &d| acc * 4 + d as i64)
    }

    /// Number of sign pairs `(e, e')` with `e_k + e'_k = delta_k`: each zero
    /// digit has two choices, each `+-2` exactly one.
    pub fn rep_count(&self) -> u64 {
        1u64 << self.zeros()
    }
}

/// Greedy extraction of the K-digit balanced expansion of `n`, or `None`
/// when `n` is not of that form.
pub fn rep_digits(n: i64, k: u32) -> Option<RepDigits> {
    let mut rest = n as i128;
    let mut delta = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let d: i128 = match rest.rem_euclid(4) {
            0 => 0,
            2 => {
                // exactly one of (rest - 2)/4 and (rest + 2)/4 is even, and all
                // higher digits are even, so the quotient must be
                if ((rest - 2) / 4) % 2 == 0 {
                    2
                } else {
                    -2
                }
            }
            _ => return None,
        };
        delta.push(d as i8);
        rest = (rest - d) / 4;
    }
    (rest == 0).then_some(RepDigits { delta })
}

fn check_tuples(k: u32, budget: &Budget) -> Result<u64> {
    let tuples = 4u128
        .checked_pow(k)
        .ok_or(Error::Overflow("4^K sign tuples"))?;
    if tuples > budget.tuples as u128 {
        return Err(Error::BudgetExceeded {
            what: "brute_force_rep_count",
            requested: tuples,
            budget: budget.tuples as u128,
        });
    }
    Ok(tuples as u64)
}

/// Value of the sign tuple encoded by the low `2k` bits of `mask`:
/// bit `2j` picks `e_j`, bit `2j+1` picks `e'_j`, set bit meaning `+1`.
fn tuple_value(mask: u64, k: u32) -> i64 {
    let mut sum = 0i64;
    let mut power = 1i64;
    for j in 0..k {
        let e = if mask >> (2 * j) & 1 == 1 { 1 } else { -1 };
        let e2 = if mask >> (2 * j + 1) & 1 == 1 { 1 } else { -1 };
        sum += (e + e2) * power;
        power *= 4;
    }
    sum
}

/// Counts `(e, e') in {-1,1}^K x {-1,1}^K` with `sum_k (e_k + e'_k) 4^k = n`
/// by enumerating all `4^K` tuples.
pub fn brute_force_rep_count(n: i64, k: u32, budget: &Budget) -> Result<u64> {
    let tuples = check_tuples(k, budget)?;
    Ok((0..tuples).filter(|&m| tuple_value(m, k) == n).count() as u64)
}

/// All counts at once: `n -> r(n)` over the full enumeration.
pub fn brute_force_rep_histogram(k: u32, budget: &Budget) -> Result<BTreeMap<i64, u64>> {
    let tuples = check_tuples(k, budget)?;
    let mut hist = BTreeMap::new();
    for m in 0..tuples {
        *hist.entry(tuple_value(m, k)).or_insert(0) += 1;
    }
    Ok(hist)
}
