//! Stern's diatomic sequence `a(n)` and Northshield's analogue `b(n)` over
//! Z[√2]: fast evaluation, interval maxima, and maximal-order ratio scans.
//!
//! Both sequences are evaluated by digit descent. Reading the digits of `n`
//! from the most significant end, we carry the pair `(f(m), f(m+1))` for
//! the prefix `m` and update it per digit, so one evaluation costs
//! `O(log n)` ring operations.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::csv_float;
use crate::json::serialize_biguint;
use crate::quadfield::QuadInt;

/// Largest interval exponent `n` accepted by
/// [`interval_max_bruteforce`] unless the caller raises it.
pub const DEFAULT_INTERVAL_CAP: u32 = 9;
/// Default upper index for Northshield brute-force scans (3⁹).
pub const DEFAULT_NORTHSHIELD_SCAN_CAP: u64 = 19_683;
/// Default upper index for Stern brute-force scans (2²⁰).
pub const DEFAULT_STERN_SCAN_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("interval exponent {requested} exceeds the brute-force cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },
    #[error("invalid range [{lo}, {hi}]: need 2 <= lo <= hi")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("decimation must be positive")]
    ZeroDecimation,
    #[error("interval exponent must be at least 1")]
    ZeroExponent,
}

/// `log₃(1 + √2)`, the growth exponent of `b`.
pub fn silver_exponent() -> f64 {
    (1.0 + std::f64::consts::SQRT_2).ln() / 3f64.ln()
}

/// `log₂ φ`, the growth exponent of Stern's sequence.
pub fn golden_exponent() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).log2()
}

/// `3^{log₂ φ} / √5`, the limsup of `a(n) / n^{log₂ φ}`.
pub fn stern_constant() -> f64 {
    3f64.powf(golden_exponent()) / 5f64.sqrt()
}

/// Stern's diatomic sequence: `a(0) = 0`, `a(1) = 1`, `a(2n) = a(n)`,
/// `a(2n+1) = a(n) + a(n+1)`.
pub fn stern(n: u64) -> u64 {
    let (mut cur, mut next) = (0u64, 1u64);
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        if (n >> bit) & 1 == 0 {
            next += cur;
        } else {
            cur += next;
        }
    }
    cur
}

/// Stern value embedded in Z[√2] (zero √2-coefficient).
pub fn stern_quad(n: u64) -> QuadInt {
    QuadInt::from_integer(stern(n))
}

/// Base-3 digits of `n`, most significant first.
fn ternary_msb_first(mut n: u64) -> Vec<u8> {
    let mut digits = Vec::with_capacity(41);
    while n > 0 {
        digits.push((n % 3) as u8);
        n /= 3;
    }
    digits.reverse();
    digits
}

/// `√2 · x` for `x = a + b√2` given as a coefficient pair.
fn times_sqrt2((a, b): (i128, i128)) -> Option<(i128, i128)> {
    Some((b.checked_mul(2)?, a))
}

fn add_pair(x: (i128, i128), y: (i128, i128)) -> Option<(i128, i128)> {
    Some((x.0.checked_add(y.0)?, x.1.checked_add(y.1)?))
}

/// Digit descent with `i128` coefficients. Coefficients of `b(n)` are
/// bounded by roughly `(1+√2)^{log₃ n}`, so every `u64` index fits; checked
/// arithmetic still guards the claim.
fn northshield_small(n: u64) -> Option<(i128, i128)> {
    let (mut cur, mut next) = ((0i128, 0i128), (1i128, 0i128));
    for d in ternary_msb_first(n) {
        (cur, next) = match d {
            0 => (cur, add_pair(times_sqrt2(cur)?, next)?),
            1 => (add_pair(times_sqrt2(cur)?, next)?, add_pair(cur, times_sqrt2(next)?)?),
            _ => (add_pair(cur, times_sqrt2(next)?)?, next),
        };
    }
    Some(cur)
}

fn northshield_big(n: u64) -> QuadInt {
    let sqrt2 = QuadInt::sqrt2();
    let (mut cur, mut next) = (QuadInt::zero(), QuadInt::one());
    for d in ternary_msb_first(n) {
        (cur, next) = match d {
            0 => {
                let n1 = &sqrt2 * &cur + &next;
                (cur, n1)
            }
            1 => (&sqrt2 * &cur + &next, &cur + &sqrt2 * &next),
            _ => (&cur + &sqrt2 * &next, next),
        };
    }
    cur
}

/// Northshield's sequence: `b(0) = 0`, `b(1) = 1`, `b(3n) = b(n)`,
/// `b(3n+1) = √2·b(n) + b(n+1)`, `b(3n+2) = b(n) + √2·b(n+1)`.
pub fn northshield(n: u64) -> QuadInt {
    match northshield_small(n) {
        Some((a, b)) => QuadInt::new(a, b),
        None => northshield_big(n),
    }
}

/// `b(n)` as a float, without building big integers on the fast path.
pub fn northshield_f64(n: u64) -> f64 {
    match northshield_small(n) {
        Some((a, b)) => a as f64 + b as f64 * std::f64::consts::SQRT_2,
        None => northshield_big(n).to_f64(),
    }
}

/// Maximum of `b` over `[3^{n-1}, 3^n]` and the least index attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalMax {
    pub n: u32,
    pub max_value: QuadInt,
    #[serde(serialize_with = "serialize_biguint")]
    pub first_argmax: BigUint,
}

impl IntervalMax {
    pub fn csv_header() -> &'static str {
        "n,max_a,max_b,argmax"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n, self.max_value.a, self.max_value.b, self.first_argmax
        )
    }
}

/// CSV table (header plus one row per entry, `\n` endings).
pub fn interval_max_csv(rows: &[IntervalMax]) -> String {
    let mut out = String::from(IntervalMax::csv_header());
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Exhaustive exact scan of `[3^{n-1}, 3^n]`.
///
/// Refuses `n > cap`; the interval has `2·3^{n-1} + 1` points.
pub fn interval_max_bruteforce(n: u32, cap: u32) -> Result<IntervalMax, SequenceError> {
    if n == 0 {
        return Err(SequenceError::ZeroExponent);
    }
    if n > cap {
        return Err(SequenceError::CapExceeded {
            requested: n.into(),
            cap: cap.into(),
        });
    }
    if n > 40 {
        // 3^n must fit the u64 index space.
        return Err(SequenceError::CapExceeded {
            requested: n.into(),
            cap: 40,
        });
    }
    let lo = 3u64.pow(n - 1);
    let hi = 3u64.pow(n);
    let (max_value, argmax) = par_argmax(lo, hi, northshield);
    Ok(IntervalMax {
        n,
        max_value,
        first_argmax: BigUint::from(argmax),
    })
}

/// Closed form: the maximum is `((1+√2)^n + (√2-1)^n) / 2`, first attained
/// at `(3^n + 1) / 2`.
///
/// Writing `(1+√2)^n = p + q√2`, the value is `p` for even `n` and `q√2`
/// for odd `n`. For `n = 0` this degenerates to `b(1) = 1` at index 1.
pub fn interval_max_closed_form(n: u32) -> IntervalMax {
    let power = QuadInt::silver().pow(n);
    let max_value = if n.is_multiple_of(2) {
        QuadInt::new(power.a, 0)
    } else {
        QuadInt::new(0, power.b)
    };
    let first_argmax = (BigUint::from(3u32).pow(n) + 1u32) / 2u32;
    IntervalMax {
        n,
        max_value,
        first_argmax,
    }
}

/// Running maximum of a normalised sequence over an index range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioScan {
    pub lo: u64,
    pub hi: u64,
    pub exponent: f64,
    pub running_max: f64,
    pub argmax: u64,
    pub decimation: u64,
    /// `(index, ratio)` at `lo, lo + decimation, lo + 2·decimation, …`.
    pub samples: Vec<(u64, f64)>,
}

impl RatioScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,ratio\n");
        for (m, r) in &self.samples {
            out.push_str(&format!("{m},{}\n", csv_float(*r)));
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "range [{}, {}]: running max {} at m = {}",
            self.lo,
            self.hi,
            csv_float(self.running_max),
            self.argmax
        )
    }
}

/// `2·b(m) / (2m)^α` with `α = log₃(1+√2)`.
pub fn northshield_ratio(m: u64) -> f64 {
    2.0 * northshield_f64(m) / (2.0 * m as f64).powf(silver_exponent())
}

/// `a(m) / m^{log₂ φ}`.
pub fn stern_ratio(m: u64) -> f64 {
    stern(m) as f64 / (m as f64).powf(golden_exponent())
}

fn check_range(lo: u64, hi: u64, decimation: u64) -> Result<(), SequenceError> {
    if lo < 2 || lo > hi {
        return Err(SequenceError::InvalidRange { lo, hi });
    }
    if decimation == 0 {
        return Err(SequenceError::ZeroDecimation);
    }
    Ok(())
}

fn ratio_scan<F>(lo: u64, hi: u64, decimation: u64, exponent: f64, ratio: F) -> Result<RatioScan, SequenceError>
where
    F: Fn(u64) -> f64 + Sync,
{
    check_range(lo, hi, decimation)?;
    let (running_max, argmax) = par_argmax(lo, hi, &ratio);
    let count = (hi - lo) / decimation + 1;
    let samples = (0..count)
        .into_par_iter()
        .map(|j| {
            let m = lo + j * decimation;
            (m, ratio(m))
        })
        .collect();
    Ok(RatioScan {
        lo,
        hi,
        exponent,
        running_max,
        argmax,
        decimation,
        samples,
    })
}

/// Scan of `2·b(m) / (2m)^α` over `[lo, hi]`.
pub fn ratio_scan_northshield(lo: u64, hi: u64, decimation: u64) -> Result<RatioScan, SequenceError> {
    ratio_scan(lo, hi, decimation, silver_exponent(), northshield_ratio)
}

/// Scan of `a(m) / m^{log₂ φ}` over `[lo, hi]`.
pub fn ratio_scan_stern(lo: u64, hi: u64, decimation: u64) -> Result<RatioScan, SequenceError> {
    ratio_scan(lo, hi, decimation, golden_exponent(), stern_ratio)
}

/// The witness index `m_n = (3^{n+1} + 1) / 2`.
pub fn witness_index(n: u32) -> BigUint {
    interval_max_closed_form(n + 1).first_argmax
}

/// `2·b(m_n) / (2·m_n)^α` at the witness index, with `b(m_n)` taken from
/// the closed form, so large `n` costs nothing.
pub fn witness_ratio(n: u32) -> f64 {
    let peak = interval_max_closed_form(n + 1);
    let b = peak.max_value.to_f64();
    let two_m = BigInt::from(BigUint::from(3u32).pow(n + 1) + 1u32);
    2.0 * b / two_m.to_f64().unwrap_or(f64::INFINITY).powf(silver_exponent())
}

/// Maximum of `f` over `[lo, hi]` with ties resolved to the smallest index.
///
/// Blocks are evaluated in parallel; the merge is associative and
/// commutative, so the answer does not depend on the partition.
pub(crate) fn par_argmax<T, F>(lo: u64, hi: u64, f: F) -> (T, u64)
where
    T: PartialOrd + Send,
    F: Fn(u64) -> T + Sync,
{
    const BLOCK: u64 = 4096;
    let blocks = (hi - lo) / BLOCK + 1;
    (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let start = lo + blk * BLOCK;
            let end = start.saturating_add(BLOCK - 1).min(hi);
            let mut best = (f(start), start);
            for m in start + 1..=end {
                let v = f(m);
                if v > best.0 {
                    best = (v, m);
                }
            }
            best
        })
        .reduce_with(|x, y| match x.0.partial_cmp(&y.0) {
            Some(Ordering::Greater) => x,
            Some(Ordering::Less) => y,
            _ => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        })
        .expect("range is nonempty")
}

/// Sanity helper for callers holding a [`BigUint`] index.
pub fn index_to_u64(m: &BigUint) -> Option<u64> {
    if m.bits() <= 64 {
        m.to_u64()
    } else {
        None
    }
}

/// `true` when `b(m)` for `m` in `[lo, hi]` are all positive.
pub fn all_positive(lo: u64, hi: u64) -> bool {
    (lo.max(1)..=hi).into_par_iter().all(|m| northshield(m).signum() == 1)
}

impl IntervalMax {
    /// Closed-form value as a float, for display.
    pub fn max_f64(&self) -> f64 {
        self.max_value.to_f64()
    }
}
