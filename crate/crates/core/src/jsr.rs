//! Joint spectral radius bounds for finite matrix sets.
//!
//! For a set `M = {M_0, …, M_{k-1}}` every word `i_0 … i_{n-1}` gives
//!
//! ```text
//! ρ(M_{i_0}⋯M_{i_{n-1}})^{1/n}  ≤  ρ(M)  ≤  max ‖M_{i_0}⋯M_{i_{n-1}}‖^{1/n}
//! ```
//!
//! where the maximum runs over all words of length `n` and `‖·‖` is any
//! submultiplicative norm. [`jsr_lower_bound`] maximizes the left side over
//! all words up to a length; [`jsr_upper_bound`] evaluates the right side
//! with the ∞-norm (maximum absolute row sum).
//!
//! Products are taken left to right in word order, as in [`LinRep`]. Lower
//! bounds use exact products; upper bounds use the `f64` shadows.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::csv_float;
use crate::linrep::{builtin_northshield_rep, builtin_stern_rep, LinRep, QMatrix};

/// Default cap on `k^len`, the number of words of the longest length.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Relative tolerance for ties between lower-bound candidates.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsrError {
    #[error("matrix set is empty")]
    EmptySet,
    #[error("matrix {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("digit {digit} is out of range for a set of {count} matrices")]
    DigitOutOfRange { digit: u32, count: usize },
    #[error("{count}^{len} words exceed the budget of {budget}")]
    BudgetExceeded { count: usize, len: u32, budget: u64 },
    #[error("word length must be at least 1")]
    ZeroLength,
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
}

/// A nonempty set of square matrices of one dimension, with `f64` copies.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    dim: usize,
    matrices: Vec<QMatrix>,
    shadows: Vec<Vec<f64>>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<QMatrix>) -> Result<Self, JsrError> {
        let dim = matrices.first().ok_or(JsrError::EmptySet)?.dim();
        if let Some((index, m)) = matrices.iter().enumerate().find(|(_, m)| m.dim() != dim) {
            return Err(JsrError::DimensionMismatch {
                index,
                expected: dim,
                found: m.dim(),
            });
        }
        let shadows = matrices.iter().map(QMatrix::to_f64).collect();
        Ok(MatrixSet { dim, matrices, shadows })
    }

    pub fn from_rep(rep: &LinRep) -> Self {
        MatrixSet::new(rep.matrices().to_vec()).expect("representations are nonempty and uniform")
    }

    /// `{A_0, A_1}` from Stern's representation.
    pub fn stern() -> Self {
        MatrixSet::from_rep(&builtin_stern_rep())
    }

    /// `{B_0, B_1, B_2}` from Northshield's representation.
    pub fn northshield() -> Self {
        MatrixSet::from_rep(&builtin_northshield_rep())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    pub fn shadow(&self, i: usize) -> &[f64] {
        &self.shadows[i]
    }

    fn check_word(&self, word: &[u32]) -> Result<(), JsrError> {
        match word.iter().find(|&&d| d as usize >= self.len()) {
            Some(&digit) => Err(JsrError::DigitOutOfRange {
                digit,
                count: self.len(),
            }),
            None => Ok(()),
        }
    }

    fn check_budget(&self, len: u32, budget: u64) -> Result<(), JsrError> {
        if len == 0 {
            return Err(JsrError::ZeroLength);
        }
        let within = (self.len() as u64).checked_pow(len).is_some_and(|n| n <= budget);
        if within {
            Ok(())
        } else {
            Err(JsrError::BudgetExceeded {
                count: self.len(),
                len,
                budget,
            })
        }
    }
}

/// Exact `M_{w_0} M_{w_1} ⋯`; the empty word gives the identity.
pub fn word_product(set: &MatrixSet, word: &[u32]) -> Result<QMatrix, JsrError> {
    set.check_word(word)?;
    Ok(word.iter().fold(QMatrix::identity(set.dim()), |acc, &d| {
        acc.mul(&set.matrices[d as usize])
    }))
}

/// `f64` product of the shadows.
pub fn word_product_f64(set: &MatrixSet, word: &[u32]) -> Result<Vec<f64>, JsrError> {
    set.check_word(word)?;
    let d = set.dim();
    let mut acc = identity_f64(d);
    let mut tmp = vec![0.0; d * d];
    for &digit in word {
        mul_f64(&acc, &set.shadows[digit as usize], &mut tmp, d);
        std::mem::swap(&mut acc, &mut tmp);
    }
    Ok(acc)
}

fn identity_f64(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

fn mul_f64(a: &[f64], b: &[f64], out: &mut [f64], d: usize) {
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
        }
    }
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &[f64], d: usize) -> f64 {
    m.chunks(d)
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral radius. In dimension 2 this is the largest root modulus of
/// `λ² - tλ + δ`, with the discriminant `t² - 4δ` formed exactly; larger
/// matrices go through a real Schur decomposition of the `f64` shadow.
pub fn spectral_radius(m: &QMatrix) -> Result<f64, JsrError> {
    match m.dim() {
        0 => Ok(0.0),
        1 => Ok(m.get(0, 0).to_f64().abs()),
        2 => {
            let t = m.trace();
            let det = m.det();
            let disc = &t * &t - det.mul_int(&4.into());
            if disc.signum() >= 0 {
                Ok((t.to_f64().abs() + disc.to_f64().sqrt()) / 2.0)
            } else {
                Ok(det.to_f64().abs().sqrt())
            }
        }
        d => {
            let a = DMatrix::from_row_slice(d, d, &m.to_f64());
            let schur = nalgebra::linalg::Schur::try_new(a, 1e-14, 10_000).ok_or(JsrError::EigenFailure)?;
            Ok(schur.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max))
        }
    }
}

/// Best normalized spectral radius over words of length `1..=max_len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub witness: Vec<u32>,
}

fn normalized_radius(m: &QMatrix, len: usize) -> Result<f64, JsrError> {
    Ok(spectral_radius(m)?.powf(1.0 / len as f64))
}

/// Depth below which children are explored in parallel.
const PAR_DEPTH: usize = 6;

fn lower_max(set: &MatrixSet, prefix: &QMatrix, depth: usize, max_len: usize) -> Result<f64, JsrError> {
    let here = if depth == 0 {
        0.0
    } else {
        normalized_radius(prefix, depth)?
    };
    if depth == max_len {
        return Ok(here);
    }
    let child = |d: usize| lower_max(set, &prefix.mul(&set.matrices[d]), depth + 1, max_len);
    let best = if depth < PAR_DEPTH {
        (0..set.len())
            .into_par_iter()
            .map(child)
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?
    } else {
        let mut best = 0.0f64;
        for d in 0..set.len() {
            best = best.max(child(d)?);
        }
        best
    };
    Ok(here.max(best))
}

/// First word in lexicographic (preorder) order whose normalized radius is at
/// least `threshold`.
fn lower_first(
    set: &MatrixSet,
    prefix: &QMatrix,
    word: &mut Vec<u32>,
    max_len: usize,
    threshold: f64,
) -> Option<Vec<u32>> {
    if !word.is_empty() && normalized_radius(prefix, word.len()).ok()? >= threshold {
        return Some(word.clone());
    }
    if word.len() == max_len {
        return None;
    }
    if word.len() < PAR_DEPTH {
        let base = word.clone();
        (0..set.len()).into_par_iter().find_map_first(|d| {
            let mut w = base.clone();
            w.push(d as u32);
            lower_first(set, &prefix.mul(&set.matrices[d]), &mut w, max_len, threshold)
        })
    } else {
        for d in 0..set.len() {
            word.push(d as u32);
            let found = lower_first(set, &prefix.mul(&set.matrices[d]), word, max_len, threshold);
            word.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// `max ρ(product)^{1/len}` over nonempty words of length at most `max_len`.
///
/// Among words within [`TIE_TOLERANCE`] (relative) of the maximum the
/// lexicographically least is returned as witness; a proper prefix sorts
/// first.
pub fn jsr_lower_bound(set: &MatrixSet, max_len: u32, budget: u64) -> Result<LowerBound, JsrError> {
    set.check_budget(max_len, budget)?;
    let identity = QMatrix::identity(set.dim());
    let value = lower_max(set, &identity, 0, max_len as usize)?;
    let threshold = value * (1.0 - TIE_TOLERANCE);
    let witness = lower_first(set, &identity, &mut Vec::new(), max_len as usize, threshold)
        .expect("the maximizing word passes its own threshold");
    Ok(LowerBound { value, witness })
}

/// Options for [`jsr_upper_bound_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpperOptions {
    pub budget: u64,
    /// Skip subtrees whose best possible norm is below the best found.
    pub prune: bool,
}

impl Default for UpperOptions {
    fn default() -> Self {
        UpperOptions {
            budget: DEFAULT_BUDGET,
            prune: true,
        }
    }
}

/// `max ‖product‖_∞^{1/len}` over words of length exactly `len`.
pub fn jsr_upper_bound(set: &MatrixSet, len: u32, budget: u64) -> Result<f64, JsrError> {
    jsr_upper_bound_with(
        set,
        len,
        UpperOptions {
            budget,
            ..UpperOptions::default()
        },
    )
}

struct UpperSearch<'a> {
    set: &'a MatrixSet,
    len: usize,
    /// `max_i ‖M_i‖^r` for `r = 0..=len`.
    tail_bound: Vec<f64>,
    prune: bool,
    best: AtomicU64,
}

impl UpperSearch<'_> {
    fn best(&self) -> f64 {
        f64::from_bits(self.best.load(Ordering::Relaxed))
    }

    fn offer(&self, norm: f64) {
        // Norms are nonnegative, so their bit patterns order like the values.
        self.best.fetch_max(norm.to_bits(), Ordering::Relaxed);
    }

    /// Serial depth-first scan below `prefix`, one buffer per level.
    fn scan(&self, prefix: &[f64], depth: usize) {
        let d = self.set.dim();
        let mut bufs: Vec<Vec<f64>> = vec![vec![0.0; d * d]; self.len - depth + 1];
        bufs[0].copy_from_slice(prefix);
        let mut digits = vec![0usize; self.len - depth];
        self.scan_level(&mut bufs, &mut digits, 0);
    }

    fn scan_level(&self, bufs: &mut [Vec<f64>], digits: &mut [usize], level: usize) {
        let d = self.set.dim();
        let remaining = digits.len() - level;
        if remaining == 0 {
            self.offer(inf_norm(&bufs[level], d));
            return;
        }
        if self.prune {
            let ceiling = inf_norm(&bufs[level], d) * self.tail_bound[remaining];
            if ceiling < self.best() * (1.0 - TIE_TOLERANCE) {
                return;
            }
        }
        for i in 0..self.set.len() {
            digits[level] = i;
            let (head, tail) = bufs.split_at_mut(level + 1);
            mul_f64(&head[level], &self.set.shadows[i], &mut tail[0], d);
            self.scan_level(bufs, digits, level + 1);
        }
    }
}

pub fn jsr_upper_bound_with(set: &MatrixSet, len: u32, opts: UpperOptions) -> Result<f64, JsrError> {
    set.check_budget(len, opts.budget)?;
    let len = len as usize;
    let k = set.len();
    let max_norm = set.shadows.iter().map(|m| inf_norm(m, set.dim())).fold(0.0, f64::max);
    let search = UpperSearch {
        set,
        len,
        tail_bound: (0..=len).map(|r| max_norm.powi(r as i32)).collect(),
        prune: opts.prune,
        best: AtomicU64::new(0f64.to_bits()),
    };
    // Split into independent subtrees at a fixed prefix length.
    let mut split = 0;
    while split < len && k.pow(split as u32) < 256 {
        split += 1;
    }
    let subtrees = k.pow(split as u32);
    (0..subtrees).into_par_iter().for_each(|index| {
        let mut word = vec![0u32; split];
        let mut rest = index;
        for slot in word.iter_mut().rev() {
            *slot = (rest % k) as u32;
            rest /= k;
        }
        let prefix = word_product_f64(set, &word).expect("digits are below k");
        search.scan(&prefix, split);
    });
    Ok(search.best().powf(1.0 / len as f64))
}

/// `(len, upper bound)` rows.
pub fn convergence_table(set: &MatrixSet, lens: &[u32], budget: u64) -> Result<Vec<(u32, f64)>, JsrError> {
    lens.iter()
        .map(|&len| Ok((len, jsr_upper_bound(set, len, budget)?)))
        .collect()
}

pub fn convergence_csv(rows: &[(u32, f64)]) -> String {
    let mut out = String::from("len,upper\n");
    for (len, upper) in rows {
        out.push_str(&format!("{len},{}\n", csv_float(*upper)));
    }
    out
}

/// Lower and upper bounds on the joint spectral radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Vec<u32>,
    pub lower_len: u32,
    pub upper_len: u32,
}

impl JsrBounds {
    /// `lower ≤ upper` up to `1e-9`.
    pub fn consistent(&self) -> bool {
        self.lower <= self.upper + 1e-9
    }

    pub fn to_text(&self) -> String {
        format!(
            "lower {} (words up to length {}, witness {:?})\nupper {} (words of length {})\n",
            csv_float(self.lower),
            self.lower_len,
            self.lower_witness,
            csv_float(self.upper),
            self.upper_len
        )
    }
}

pub fn jsr_bounds(set: &MatrixSet, lower_len: u32, upper_len: u32, budget: u64) -> Result<JsrBounds, JsrError> {
    let lower = jsr_lower_bound(set, lower_len, budget)?;
    let upper = jsr_upper_bound(set, upper_len, budget)?;
    Ok(JsrBounds {
        lower: lower.value,
        upper,
        lower_witness: lower.witness,
        lower_len,
        upper_len,
    })
}

/// Whether a candidate product pins the joint spectral radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinitenessReport {
    pub word: Vec<u32>,
    /// `ρ(product)^{1/len}`.
    pub normalized_radius: f64,
    pub upper: f64,
    /// `upper - normalized_radius`; nonnegative up to rounding.
    pub gap: f64,
    pub tolerance: f64,
    /// `gap ≤ tolerance`: the word attains the upper bound, so the radius
    /// equals it (numerically).
    pub certified: bool,
}

impl FinitenessReport {
    pub fn to_text(&self) -> String {
        format!(
            "word {:?}: rho^(1/len) = {}, upper = {}, gap = {} -> {}\n",
            self.word,
            csv_float(self.normalized_radius),
            csv_float(self.upper),
            csv_float(self.gap),
            if self.certified {
                "certified within tolerance"
            } else {
                "not certified"
            }
        )
    }
}

pub fn finiteness_check(
    set: &MatrixSet,
    word: &[u32],
    bounds: &JsrBounds,
    tolerance: f64,
) -> Result<FinitenessReport, JsrError> {
    if word.is_empty() {
        return Err(JsrError::ZeroLength);
    }
    let product = word_product(set, word)?;
    let normalized_radius = normalized_radius(&product, word.len())?;
    let gap = bounds.upper - normalized_radius;
    Ok(FinitenessReport {
        word: word.to_vec(),
        normalized_radius,
        upper: bounds.upper,
        gap,
        tolerance,
        certified: gap.abs() <= tolerance,
    })
}
