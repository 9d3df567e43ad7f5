//! The piecewise-linear envelope `h` and exact checks of the inequalities
//! that tie it to Northshield's sequence.
//!
//! `h` joins `(0, 0)` and the breakpoints `(x_n, y_n) = (3ⁿ/2, (1+√2)ⁿ/2)`
//! for `n ≥ 1`. Segment `n ≥ 1` spans `[x_n, x_{n+1}]`; segment 0 spans
//! `[0, x_1]`. Every slope and intercept lies in Q(√2), so `h` is evaluated
//! exactly at rational points. Its slopes are positive and strictly
//! decreasing, which makes `h` increasing and concave on `[x_1, ∞)`.
//!
//! The checks here are finite-range verifications:
//!
//! * [`check_log_bound`]: `b(m) ≤ h(m) + c·⌊log₃ m⌋` for every `m` in a range,
//!   with `c = 1 + √2` (or `c = 1` for comparison).
//! * [`check_peak_identity`]: at `m = (3^{n+1}+1)/2`, `h(m)` equals
//!   `(√2/(4·3^{n+1}) + 1/2)(1+√2)^{n+1}`, and that value plus `n + 1`
//!   strictly exceeds the interval maximum of `b`.
//! * [`check_gap_identity`]: `h(3k+1) - (1+√2)·h(k+1)` is the constant
//!   `-√2((1+√2)/3)^{n+1}` whenever `k+1` lies on segment `n` and `3k+1`
//!   on segment `n+1`.
//! * [`power_gap`] and friends: `2h(x) - (2x)^α` with `α = log₃(1+√2)`,
//!   sampled in floating point.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::csv_float;
use crate::json::serialize_biguint;
use crate::quadfield::{QuadInt, QuadRat};
use crate::sequences::{interval_max_closed_form, northshield, silver_exponent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("h is defined on [0, ∞); got negative argument {0}")]
    NegativeArgument(BigRational),
    #[error("the log bound is only claimed for m >= 2 (got lower end {lo})")]
    BelowDomain { lo: u64 },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("k = {k} is outside the strip [{k_min}, {k_max}] for n = {n}")]
    OutsideStrip { n: u32, k: u64, k_min: u64, k_max: u64 },
    #[error("exponent n must be at least 1")]
    ZeroExponent,
}

fn pow3(n: u32) -> BigInt {
    BigInt::from(3u32).pow(n)
}

/// `q · r` for a rational `r`.
fn scale_by(q: &QuadRat, r: &BigRational) -> QuadRat {
    QuadRat::new(q.num().scale(r.numer()), q.den() * r.denom())
}

/// A breakpoint `(3ⁿ/2, (1+√2)ⁿ/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakpoint {
    pub n: u32,
    pub x: BigRational,
    pub y: QuadRat,
}

pub fn breakpoint(n: u32) -> Breakpoint {
    Breakpoint {
        n,
        x: BigRational::new(pow3(n), BigInt::from(2)),
        y: QuadRat::new(QuadInt::silver().pow(n), 2),
    }
}

/// One linear piece `slope·x + intercept` of `h` on `[x_lo, x_hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub n: u32,
    pub slope: QuadRat,
    pub intercept: QuadRat,
    pub x_lo: BigRational,
    pub x_hi: BigRational,
}

impl Segment {
    pub fn eval(&self, x: &BigRational) -> QuadRat {
        scale_by(&self.slope, x) + &self.intercept
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.x_lo <= x && x <= &self.x_hi
    }
}

fn build_segment(n: u32) -> Segment {
    let right = breakpoint(n + 1);
    if n == 0 {
        return Segment {
            n,
            slope: QuadRat::new(QuadInt::silver(), 3),
            intercept: QuadRat::zero(),
            x_lo: BigRational::zero(),
            x_hi: right.x,
        };
    }
    let left = breakpoint(n);
    // Chord through the two breakpoints; x_{n+1} - x_n = 3ⁿ.
    let slope = (&right.y - &left.y).div_int(&pow3(n));
    let intercept = &left.y - &scale_by(&slope, &left.x);
    Segment {
        n,
        slope,
        intercept,
        x_lo: left.x,
        x_hi: right.x,
    }
}

const CACHED_SEGMENTS: u32 = 64;

fn cached_segments() -> &'static [Segment] {
    static SEGMENTS: OnceLock<Vec<Segment>> = OnceLock::new();
    SEGMENTS.get_or_init(|| (0..=CACHED_SEGMENTS).map(build_segment).collect())
}

/// Segment `n` (0 is the piece through the origin).
pub fn segment(n: u32) -> Segment {
    match cached_segments().get(n as usize) {
        Some(s) => s.clone(),
        None => build_segment(n),
    }
}

fn with_segment<R>(n: u32, f: impl FnOnce(&Segment) -> R) -> R {
    match cached_segments().get(n as usize) {
        Some(s) => f(s),
        None => f(&build_segment(n)),
    }
}

/// Index of the segment containing `x ≥ 0`; at a breakpoint the left one.
fn segment_index(x: &BigRational) -> u32 {
    // x ≤ x_{n+1}  <=>  2·numer ≤ 3^{n+1}·denom
    let twice = x.numer() * 2;
    let mut n = 0u32;
    let mut bound = x.denom() * 3;
    while twice > bound {
        n += 1;
        bound *= 3;
    }
    n
}

/// The segment whose closed domain contains `x`. At a breakpoint this is the
/// left segment; both pieces give the same value there.
pub fn segment_of(x: &BigRational) -> Result<Segment, EnvelopeError> {
    if x.is_negative() {
        return Err(EnvelopeError::NegativeArgument(x.clone()));
    }
    let n = segment_index(x);
    let seg = segment(n);
    debug_assert!(seg.contains(x));
    if x == &seg.x_hi {
        debug_assert_eq!(seg.eval(x), segment(n + 1).eval(x));
    }
    Ok(seg)
}

/// `h(x)` exactly.
pub fn h_exact(x: &BigRational) -> Result<QuadRat, EnvelopeError> {
    if x.is_negative() {
        return Err(EnvelopeError::NegativeArgument(x.clone()));
    }
    Ok(with_segment(segment_index(x), |s| s.eval(x)))
}

/// `h(m)` at an integer argument.
pub fn h_at(m: u64) -> QuadRat {
    let x = BigRational::from_integer(BigInt::from(m));
    with_segment(segment_index(&x), |s| s.eval(&x))
}

/// `⌊log₃ m⌋` by integer comparison; `m ≥ 1`.
pub fn floor_log3(m: u64) -> u32 {
    assert!(m >= 1, "log of zero");
    let mut k = 0;
    let mut p = 3u64;
    while p <= m {
        k += 1;
        match p.checked_mul(3) {
            Some(next) => p = next,
            None => break,
        }
    }
    k
}

/// Coefficient multiplying `⌊log₃ m⌋` in the log bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogCoefficient {
    /// `1 + √2`, the coefficient needed by the induction.
    Silver,
    /// `1`, the weaker variant shown alongside the small-m table.
    One,
}

impl LogCoefficient {
    pub fn value(self) -> QuadRat {
        match self {
            LogCoefficient::Silver => QuadRat::from(QuadInt::silver()),
            LogCoefficient::One => QuadRat::one(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogCoefficient::Silver => "1 + √2",
            LogCoefficient::One => "1",
        }
    }
}

/// Right-hand side `h(m) + c·⌊log₃ m⌋`.
pub fn log_bound_rhs(m: u64, coefficient: LogCoefficient) -> QuadRat {
    let log = BigInt::from(floor_log3(m));
    h_at(m) + coefficient.value().mul_int(&log)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub lhs: QuadRat,
    pub rhs: QuadRat,
}

/// Result of a log-bound scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lo: u64,
    pub hi: u64,
    pub coefficient: LogCoefficient,
    /// Sorted by index.
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn checked(&self) -> u64 {
        self.hi - self.lo + 1
    }

    /// JSON with the range, counts, status and at most the first 100
    /// violations.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "range": [self.lo, self.hi],
            "coefficient": self.coefficient,
            "count": self.checked(),
            "violation_count": self.violations.len(),
            "status": if self.passed() { "pass" } else { "fail" },
            "violations": &self.violations[..self.violations.len().min(100)],
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "b(m) <= h(m) + ({})·floor(log3 m) for m in [{}, {}]: {} ({} checked, {} violations)\n",
            self.coefficient.label(),
            self.lo,
            self.hi,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked(),
            self.violations.len()
        );
        for v in self.violations.iter().take(100) {
            out.push_str(&format!(
                "  m = {}: b = {} ({}) > {} ({})\n",
                v.index,
                v.lhs,
                csv_float(v.lhs.to_f64()),
                v.rhs,
                csv_float(v.rhs.to_f64())
            ));
        }
        out
    }
}

/// Exact scan of `b(m) ≤ h(m) + (1+√2)·⌊log₃ m⌋` over `[lo, hi]`.
///
/// The bound fails at `m = 1` (`h(1) = (1+√2)/3 < 1`), so `lo < 2` is
/// refused rather than reported.
pub fn check_log_bound(lo: u64, hi: u64) -> Result<LemmaReport, EnvelopeError> {
    check_log_bound_with(lo, hi, LogCoefficient::Silver)
}

pub fn check_log_bound_with(lo: u64, hi: u64, coefficient: LogCoefficient) -> Result<LemmaReport, EnvelopeError> {
    if lo < 2 {
        return Err(EnvelopeError::BelowDomain { lo });
    }
    if lo > hi {
        return Err(EnvelopeError::InvalidRange { lo, hi });
    }
    let mut violations: Vec<Violation> = (lo..=hi)
        .into_par_iter()
        .filter_map(|m| {
            let lhs = QuadRat::from(northshield(m));
            let rhs = log_bound_rhs(m, coefficient);
            (lhs > rhs).then_some(Violation { index: m, lhs, rhs })
        })
        .collect();
    violations.sort_by_key(|v| v.index);
    Ok(LemmaReport {
        lo,
        hi,
        coefficient,
        violations,
    })
}

/// `(√2/(4·3^{n+1}) + 1/2)·(1+√2)^{n+1}`, computed without the envelope.
pub fn peak_closed_form(n: u32) -> QuadRat {
    let small = QuadRat::new(QuadInt::sqrt2(), pow3(n + 1) * 4);
    let half = QuadRat::from_ratio(1, 2);
    (small + half) * QuadRat::from(QuadInt::silver().pow(n + 1))
}

/// Exact comparison at the peak index `m = (3^{n+1}+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeakCheck {
    pub n: u32,
    #[serde(serialize_with = "serialize_biguint")]
    pub m: BigUint,
    pub h_value: QuadRat,
    pub closed_form: QuadRat,
    /// `h(m)` equals the closed form.
    pub identity_holds: bool,
    /// `closed_form + n + 1`.
    pub bound: QuadRat,
    /// `((1+√2)^{n+1} + (√2-1)^{n+1})/2`, the maximum of `b` on
    /// `[3ⁿ, 3^{n+1}]`.
    pub interval_max: QuadRat,
    /// `bound > interval_max`.
    pub exceeds: bool,
}

impl PeakCheck {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.exceeds
    }
}

pub fn check_peak_identity(n: u32) -> Result<PeakCheck, EnvelopeError> {
    if n == 0 {
        return Err(EnvelopeError::ZeroExponent);
    }
    let m: BigInt = (pow3(n + 1) + 1) / 2;
    let h_value = h_exact(&BigRational::from_integer(m.clone()))?;
    let closed_form = peak_closed_form(n);
    let bound = &closed_form + &QuadRat::from(i64::from(n) + 1);
    let interval_max = QuadRat::from(interval_max_closed_form(n + 1).max_value);
    Ok(PeakCheck {
        n,
        m: m.to_biguint().expect("positive"),
        identity_holds: h_value == closed_form,
        exceeds: bound > interval_max,
        h_value,
        closed_form,
        bound,
        interval_max,
    })
}

/// `h(3k+1) - (1+√2)·h(k+1)`.
pub fn gap_value(k: u64) -> QuadRat {
    let silver = QuadRat::from(QuadInt::silver());
    h_at(3 * k + 1) - &silver * &h_at(k + 1)
}

/// `-√2·((1+√2)/3)^{n+1}`.
pub fn gap_closed_form(n: u32) -> QuadRat {
    let num = -(QuadInt::sqrt2() * QuadInt::silver().pow(n + 1));
    QuadRat::new(num, pow3(n + 1))
}

/// The `k` for which `k+1` lies on segment `n` and `3k+1` on segment `n+1`:
/// `⌈(3^{n+1}-2)/6⌉ ≤ k ≤ (3^{n+1}-3)/2`.
pub fn gap_strip(n: u32) -> Option<(u64, u64)> {
    if n == 0 || n > 38 {
        return None;
    }
    let p = 3u64.pow(n + 1);
    Some(((p - 2).div_ceil(6), (p - 3) / 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCheck {
    pub n: u32,
    pub k: u64,
    pub value: QuadRat,
    pub closed_form: QuadRat,
    pub identity_holds: bool,
    /// `|value| < 1`.
    pub magnitude_below_one: bool,
    /// Sign of `value`. The identity makes it negative, so the positive
    /// quantity is `(1+√2)·h(k+1) - h(3k+1)`.
    pub sign: i8,
}

impl GapCheck {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.magnitude_below_one
    }
}

/// Exact check of `h(3k+1) - (1+√2)·h(k+1) = -√2((1+√2)/3)^{n+1}` for `k` in
/// [`gap_strip`]`(n)`.
pub fn check_gap_identity(n: u32, k: u64) -> Result<GapCheck, EnvelopeError> {
    if n == 0 {
        return Err(EnvelopeError::ZeroExponent);
    }
    let (k_min, k_max) = gap_strip(n).ok_or(EnvelopeError::ZeroExponent)?;
    if k < k_min || k > k_max {
        return Err(EnvelopeError::OutsideStrip { n, k, k_min, k_max });
    }
    let value = gap_value(k);
    let closed_form = gap_closed_form(n);
    Ok(GapCheck {
        n,
        k,
        identity_holds: value == closed_form,
        magnitude_below_one: value.abs() < QuadRat::one(),
        sign: value.signum(),
        value,
        closed_form,
    })
}

/// Summary of `(1+√2)·h(k+1) - h(3k+1)` over the index strip of the
/// induction step for `[3ⁿ, 3^{n+1}]`: `3k+1 ∈ [3ⁿ, (3^{n+1}-1)/2]`.
///
/// That strip sits one segment lower than [`gap_strip`]`(n)`: for all but
/// its last `k` the gap equals `√2((1+√2)/3)ⁿ`, and the last `k` straddles
/// the breakpoint `x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionStripReport {
    pub n: u32,
    pub k_min: u64,
    pub k_max: u64,
    /// Every gap lies strictly between 0 and 1.
    pub all_in_unit_interval: bool,
    pub max_gap: QuadRat,
    /// How many `k` give exactly `√2((1+√2)/3)^{n+1}`.
    pub matches_exponent_n_plus_1: u64,
    /// How many `k` give exactly `√2((1+√2)/3)ⁿ`.
    pub matches_exponent_n: u64,
}

pub fn induction_strip_report(n: u32) -> Result<InductionStripReport, EnvelopeError> {
    if n == 0 || n > 38 {
        return Err(EnvelopeError::ZeroExponent);
    }
    let k_min = 3u64.pow(n - 1);
    let k_max = (3u64.pow(n) - 1) / 2;
    let at_n1 = -gap_closed_form(n);
    let at_n = -gap_closed_form(n - 1);
    let gaps: Vec<QuadRat> = (k_min..=k_max).into_par_iter().map(|k| -gap_value(k)).collect();
    let zero = QuadRat::zero();
    let one = QuadRat::one();
    Ok(InductionStripReport {
        n,
        k_min,
        k_max,
        all_in_unit_interval: gaps.iter().all(|g| g > &zero && g < &one),
        max_gap: gaps.iter().max().cloned().unwrap_or_else(QuadRat::zero),
        matches_exponent_n_plus_1: gaps.iter().filter(|g| **g == at_n1).count() as u64,
        matches_exponent_n: gaps.iter().filter(|g| **g == at_n).count() as u64,
    })
}

/// `2·h(x) - (2x)^α` with `h` exact and the power in `f64`.
pub fn power_gap(x: &BigRational) -> Result<f64, EnvelopeError> {
    let h = h_exact(x)?.to_f64();
    let xf = x.to_f64().unwrap_or(f64::INFINITY);
    Ok(2.0 * h - (2.0 * xf).powf(silver_exponent()))
}

/// [`power_gap`] at a float argument, converted exactly to a rational.
pub fn power_gap_f64(x: f64) -> Result<f64, EnvelopeError> {
    let r = BigRational::from_float(x).ok_or_else(|| EnvelopeError::NegativeArgument(BigRational::zero()))?;
    power_gap(&r)
}

/// `power_gap` at the breakpoint `x_n`, with its size relative to `(1+√2)ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakpointGap {
    pub n: u32,
    pub gap: f64,
    pub relative: f64,
}

pub fn power_gap_at_breakpoints(n_max: u32) -> Vec<BreakpointGap> {
    (1..=n_max)
        .map(|n| {
            let gap = power_gap(&breakpoint(n).x).expect("breakpoints are positive");
            let scale = (1.0 + std::f64::consts::SQRT_2).powi(n as i32);
            BreakpointGap {
                n,
                gap,
                relative: gap / scale,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpacing {
    Linear,
    Geometric,
}

/// Sampled values of [`power_gap`] on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerGapGrid {
    pub lo: f64,
    pub hi: f64,
    pub spacing: GridSpacing,
    pub points: Vec<(f64, f64)>,
}

impl PowerGapGrid {
    pub fn max(&self) -> (f64, f64) {
        self.points.iter().copied().fold(
            (f64::NAN, f64::NEG_INFINITY),
            |best, p| if p.1 > best.1 { p } else { best },
        )
    }

    /// Every sampled value is at most `tol`.
    pub fn all_below(&self, tol: f64) -> bool {
        self.points.iter().all(|p| p.1 <= tol)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,H\n");
        for (x, g) in &self.points {
            out.push_str(&format!("{},{}\n", csv_float(*x), csv_float(*g)));
        }
        out
    }
}

/// Evaluates [`power_gap`] at `count` points spanning `[lo, hi]`
/// (endpoints included).
pub fn power_gap_grid(lo: f64, hi: f64, count: usize, spacing: GridSpacing) -> Result<PowerGapGrid, EnvelopeError> {
    if !(lo > 0.0 && lo <= hi) || count == 0 {
        return Err(EnvelopeError::NegativeArgument(
            BigRational::from_float(lo).unwrap_or_default(),
        ));
    }
    let step = |i: usize| -> f64 {
        if count == 1 {
            return lo;
        }
        let t = i as f64 / (count - 1) as f64;
        match spacing {
            GridSpacing::Linear => lo + (hi - lo) * t,
            GridSpacing::Geometric => lo * (hi / lo).powf(t),
        }
    };
    let points = (0..count)
        .into_par_iter()
        .map(|i| {
            let x = step(i).min(hi);
            (x, power_gap_f64(x).expect("grid points are positive"))
        })
        .collect();
    Ok(PowerGapGrid {
        lo,
        hi,
        spacing,
        points,
    })
}

/// `b(m_n) / h(m_n)` at the peak index `m_n = (3^{n+1}+1)/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeRatio {
    pub n: u32,
    #[serde(serialize_with = "serialize_biguint")]
    pub m: BigUint,
    pub ratio: f64,
}

/// Exact `b/h` at the peak indices for `n` in `[n_lo, n_hi]`, floated last.
pub fn ratio_to_envelope_scan(n_lo: u32, n_hi: u32) -> Result<Vec<EnvelopeRatio>, EnvelopeError> {
    if n_lo == 0 {
        return Err(EnvelopeError::ZeroExponent);
    }
    Ok((n_lo..=n_hi)
        .map(|n| {
            let peak = interval_max_closed_form(n + 1);
            let m = BigInt::from(peak.first_argmax.clone());
            let h = h_exact(&BigRational::from_integer(m)).expect("positive");
            let b = QuadRat::from(peak.max_value);
            EnvelopeRatio {
                n,
                m: peak.first_argmax,
                ratio: (b / h).to_f64(),
            }
        })
        .collect())
}

/// One row of the small-m comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub m: u64,
    pub b: QuadInt,
    pub b_float: f64,
    /// `h(m) + ⌊log₃ m⌋`.
    pub rhs_one: QuadRat,
    /// `h(m) + (1+√2)⌊log₃ m⌋`.
    pub rhs_silver: QuadRat,
    /// Published value for `h(m) + ⌊log₃ m⌋`, three decimals.
    pub published: f64,
    /// `published` equals `rhs_one` truncated to three decimals.
    pub published_matches: bool,
    /// Value the published row would have if segment 1 were extended past
    /// `x_2 = 9/2`.
    pub segment1_extension: f64,
}

/// Published `h(m) + ⌊log₃ m⌋` for `m = 2..9`.
pub const PUBLISHED_TABLE: [(u64, f64); 8] = [
    (2, 1.491),
    (3, 3.060),
    (4, 3.629),
    (5, 4.198),
    (6, 4.767),
    (7, 5.336),
    (8, 5.905),
    (9, 7.474),
];

fn truncate3(x: f64) -> f64 {
    (x * 1000.0).floor() / 1000.0
}

pub fn reference_table() -> Vec<TableRow> {
    let seg1 = segment(1);
    PUBLISHED_TABLE
        .iter()
        .map(|&(m, published)| {
            let b = northshield(m);
            let rhs_one = log_bound_rhs(m, LogCoefficient::One);
            let rhs_silver = log_bound_rhs(m, LogCoefficient::Silver);
            let x = BigRational::from_integer(BigInt::from(m));
            let ext = seg1.eval(&x) + QuadRat::from(i64::from(floor_log3(m)));
            TableRow {
                m,
                b_float: b.to_f64(),
                b,
                published_matches: (truncate3(rhs_one.to_f64()) - published).abs() < 5e-7,
                segment1_extension: ext.to_f64(),
                rhs_one,
                rhs_silver,
                published,
            }
        })
        .collect()
}

/// Least common multiple of the denominators of slope and intercept; used
/// by tests to confirm they divide `4·3ⁿ`.
pub fn segment_denominator(seg: &Segment) -> BigInt {
    seg.slope.den().lcm(seg.intercept.den())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn qr(a: i64, b: i64, d: i64) -> QuadRat {
        QuadRat::new(QuadInt::new(a, b), d)
    }

    /// Slope and intercept as written in closed form, independent of the
    /// chord construction.
    fn closed_slope(n: u32) -> QuadRat {
        QuadRat::new(QuadInt::sqrt2() * QuadInt::silver().pow(n), pow3(n) * 2)
    }

    fn closed_intercept(n: u32) -> QuadRat {
        QuadRat::new(QuadInt::silver().pow(n) * QuadInt::new(2, -1), 4)
    }

    #[test]
    fn segments_match_closed_forms() {
        for n in 1..=40 {
            let s = segment(n);
            assert_eq!(s.slope, closed_slope(n), "slope {n}");
            assert_eq!(s.intercept, closed_intercept(n), "intercept {n}");
            let d4 = pow3(n) * 4;
            let rem: BigInt = &d4 % segment_denominator(&s);
            assert!(rem.is_zero());
        }
        let s0 = segment(0);
        assert_eq!(s0.slope, qr(1, 1, 3));
        assert!(s0.intercept.is_zero());
    }

    #[test]
    fn segment_of_examples() {
        assert_eq!(segment_of(&r(1, 1)).unwrap().n, 0);
        assert_eq!(segment_of(&r(5, 1)).unwrap().n, 2);
        assert_eq!(segment_of(&r(9, 2)).unwrap().n, 1);
        assert_eq!(segment_of(&r(3, 2)).unwrap().n, 0);
        let x = r(9, 2);
        assert_eq!(segment(1).eval(&x), segment(2).eval(&x));
        assert_eq!(h_exact(&x).unwrap(), qr(3, 2, 2));
        assert!(matches!(segment_of(&r(-1, 2)), Err(EnvelopeError::NegativeArgument(_))));
    }

    #[test]
    fn breakpoints_and_continuity() {
        assert!(h_exact(&BigRational::zero()).unwrap().is_zero());
        for n in 1..=40 {
            let bp = breakpoint(n);
            assert_eq!(h_exact(&bp.x).unwrap(), bp.y, "n = {n}");
            assert_eq!(segment(n - 1).eval(&bp.x), segment(n).eval(&bp.x));
        }
    }

    #[test]
    fn slopes_positive_and_decreasing() {
        let mut prev = segment(0).slope;
        assert!(prev.signum() > 0);
        for n in 1..=40 {
            let s = segment(n).slope;
            assert!(s.signum() > 0);
            assert!(s < prev, "slope {n} not below slope {}", n - 1);
            prev = s;
        }
    }

    #[test]
    fn h_at_four() {
        let v = h_at(4);
        // slope_1·4 + intercept_1 with slope_1 ≈ 0.569036, intercept_1 ≈ 0.353553
        assert!((v.to_f64() - 2.629_695_765_508_670_5).abs() < 1e-12);
        assert_eq!(v, &closed_slope(1).mul_int(&BigInt::from(4)) + &closed_intercept(1));
    }

    #[test]
    fn floor_log3_exact() {
        assert_eq!(floor_log3(1), 0);
        assert_eq!(floor_log3(2), 0);
        assert_eq!(floor_log3(3), 1);
        assert_eq!(floor_log3(8), 1);
        assert_eq!(floor_log3(9), 2);
        for k in 1..40 {
            let p = 3u64.pow(k);
            assert_eq!(floor_log3(p), k);
            assert_eq!(floor_log3(p - 1), k - 1);
        }
        assert_eq!(floor_log3(u64::MAX), 40);
    }

    #[test]
    fn log_bound_small_ranges() {
        assert!(check_log_bound(2, 9).unwrap().passed());
        for k in 1..=12 {
            let m = 3u64.pow(k);
            assert!(check_log_bound(m, m).unwrap().passed());
        }
        assert_eq!(check_log_bound(1, 9), Err(EnvelopeError::BelowDomain { lo: 1 }));
        // The refused point really fails.
        assert!(QuadRat::from(northshield(1)) > log_bound_rhs(1, LogCoefficient::Silver));
    }

    #[test]
    fn peak_identity_examples() {
        let c = check_peak_identity(1).unwrap();
        assert_eq!(c.m, BigUint::from(5u32));
        assert!(c.passed());
        // (3+2√2)/2 + √2(3+2√2)/36 expanded independently.
        let expected = qr(3, 2, 2) + QuadRat::new(QuadInt::new(4, 3), 36);
        assert_eq!(c.h_value, expected);
        assert!((c.h_value.to_f64() - 3.143_175_803_681_964).abs() < 1e-12);
        for n in 2..=12 {
            assert!(check_peak_identity(n).unwrap().passed(), "n = {n}");
        }
    }

    #[test]
    fn gap_strips() {
        assert_eq!(gap_strip(1), Some((2, 3)));
        assert_eq!(gap_strip(2), Some((5, 12)));
        assert_eq!(gap_strip(0), None);
    }

    #[test]
    fn gap_identity_examples() {
        let g = check_gap_identity(1, 3).unwrap();
        assert!(g.passed());
        assert_eq!(g.sign, -1);
        assert!((g.value.to_f64() + 0.915_848_965_235_476).abs() < 1e-12);
        let a = check_gap_identity(2, 5).unwrap();
        let b = check_gap_identity(2, 12).unwrap();
        assert_eq!(a.value, b.value);
        assert!((a.value.to_f64() + 0.737_018_330_985_617).abs() < 1e-12);
        assert!(matches!(
            check_gap_identity(2, 3),
            Err(EnvelopeError::OutsideStrip { .. })
        ));
        for n in 1..=6 {
            let (lo, hi) = gap_strip(n).unwrap();
            for k in lo..=hi {
                assert!(check_gap_identity(n, k).unwrap().passed(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn induction_strip() {
        let s1 = induction_strip_report(1).unwrap();
        assert_eq!((s1.k_min, s1.k_max), (1, 1));
        assert!(s1.all_in_unit_interval);
        assert_eq!(s1.matches_exponent_n_plus_1, 0);
        let s3 = induction_strip_report(3).unwrap();
        assert!(s3.all_in_unit_interval);
        assert_eq!(s3.matches_exponent_n, 4);
        assert_eq!(s3.matches_exponent_n_plus_1, 0);
    }

    #[test]
    fn power_gap_examples() {
        let g2 = power_gap_f64(2.0).unwrap();
        assert!((g2 - -0.057_699_851_104_334_45).abs() < 1e-12);
        for bg in power_gap_at_breakpoints(12) {
            assert!(bg.relative.abs() < 1e-9, "n = {}", bg.n);
        }
    }

    #[test]
    fn power_gap_grid_small() {
        let grid = power_gap_grid(1.6, 3f64.powi(6) / 2.0, 500, GridSpacing::Linear).unwrap();
        assert_eq!(grid.points.len(), 500);
        assert!(grid.all_below(1e-9));
        assert!(grid.to_csv().starts_with("x,H\n1.6,"));
    }

    #[test]
    fn envelope_ratio_examples() {
        let rows = ratio_to_envelope_scan(1, 20).unwrap();
        assert!((rows[0].ratio - 0.954_448_681_007_837_4).abs() < 1e-12);
        assert!((1.0 - rows[11].ratio - 4.434_035_464e-7).abs() < 1e-15);
        assert!(rows.windows(2).all(|w| w[0].ratio < w[1].ratio));
        assert!(rows.iter().all(|r| r.ratio < 1.0));
    }

    #[test]
    fn table_rows() {
        let rows = reference_table();
        let b: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.b_float)).collect();
        assert_eq!(
            b,
            ["1.414", "1.000", "2.828", "3.000", "1.414", "3.000", "2.828", "1.000"]
        );
        let matches: Vec<bool> = rows.iter().map(|r| r.published_matches).collect();
        assert_eq!(matches, [true, true, true, false, false, false, false, false]);
        for row in &rows[3..] {
            assert!(
                (truncate3(row.segment1_extension) - row.published).abs() < 5e-7,
                "m = {}",
                row.m
            );
        }
    }
}
