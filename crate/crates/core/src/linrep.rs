//! Linear representations of k-regular sequences over Q(√2).
//!
//! A representation `(w, {M_0, …, M_{k-1}}, v)` defines
//! `f(n) = w · M_{i_0} · M_{i_1} ⋯ M_{i_s} · v`, where `i_0 i_1 … i_s` are
//! the base-k digits of `n` read least significant first. For `n = 0` the
//! product is empty and `f(0) = w · v`.
//!
//! The convention is fixed here for the whole crate and validated against
//! the recurrences in [`crate::sequences`]. Under it, the Northshield
//! representation works with the selectors `w = [1 0]`, `v = [0 1]`, but
//! Stern's matrices `A_0 = [[1,1],[0,1]]`, `A_1 = [[1,0],[1,1]]` need
//! `w = [0 1]`, `v = [1 0]`: the pair `w = v = [1 0]` gives `f(2) = 2`
//! instead of `a(2) = 1`.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::json::{self, JsonError};
use crate::quadfield::{QuadInt, QuadRat};
use crate::sequences::{northshield, stern};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("malformed JSON: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] JsonError),
    #[error("field `base` must be at least 2, got {base}")]
    BaseTooSmall { base: u64 },
    #[error("dimension mismatch in `{field}`: expected {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
}

/// Square matrix over Q(√2), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    dim: usize,
    entries: Vec<QuadRat>,
}

impl QMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![QuadRat::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = QuadRat::one();
        }
        QMatrix { dim, entries }
    }

    /// Builds a matrix from rows; `None` unless the rows form a nonempty
    /// square.
    pub fn from_rows(rows: Vec<Vec<QuadRat>>) -> Option<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(QMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from `(a, b)` pairs meaning `a + b√2`.
    pub fn from_pairs(rows: &[&[(i64, i64)]]) -> Option<Self> {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| QuadRat::from(QuadInt::new(a, b))).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadRat {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[QuadRat]> {
        self.entries.chunks(self.dim)
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push((0..d).map(|k| self.get(i, k) * rhs.get(k, j)).sum());
            }
        }
        QMatrix { dim: d, entries }
    }

    pub fn trace(&self) -> QuadRat {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    /// Determinant by cofactor expansion along the first row; fine for the
    /// small dimensions this crate deals with.
    pub fn det(&self) -> QuadRat {
        match self.dim {
            1 => self.entries[0].clone(),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            d => {
                let mut acc = QuadRat::zero();
                for j in 0..d {
                    let minor = self.minor(0, j);
                    let term = self.get(0, j) * &minor.det();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> QMatrix {
        let d = self.dim;
        let entries = (0..d)
            .filter(|&i| i != row)
            .flat_map(|i| (0..d).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        QMatrix { dim: d - 1, entries }
    }

    /// Float copy, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(QuadRat::to_f64).collect()
    }

    fn row_times(&self, row: &[QuadRat]) -> Vec<QuadRat> {
        (0..self.dim)
            .map(|j| row.iter().enumerate().map(|(k, x)| x * self.get(k, j)).sum())
            .collect()
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[QuadRat]> = self.rows().collect();
        rows.serialize(s)
    }
}

/// A base-k linear representation `(w, {M_0, …, M_{k-1}}, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinRep {
    base: u32,
    dim: usize,
    w: Vec<QuadRat>,
    v: Vec<QuadRat>,
    matrices: Vec<QMatrix>,
}

impl LinRep {
    pub fn new(base: u32, w: Vec<QuadRat>, matrices: Vec<QMatrix>, v: Vec<QuadRat>) -> Result<Self, RepError> {
        if base < 2 {
            return Err(RepError::BaseTooSmall { base: base.into() });
        }
        if matrices.len() != base as usize {
            return Err(RepError::DimensionMismatch {
                field: "matrices".into(),
                expected: base as usize,
                found: matrices.len(),
            });
        }
        let dim = w.len();
        if v.len() != dim {
            return Err(RepError::DimensionMismatch {
                field: "v".into(),
                expected: dim,
                found: v.len(),
            });
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.dim() != dim {
                return Err(RepError::DimensionMismatch {
                    field: format!("matrices[{i}]"),
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        Ok(LinRep {
            base,
            dim,
            w,
            v,
            matrices,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w(&self) -> &[QuadRat] {
        &self.w
    }

    pub fn v(&self) -> &[QuadRat] {
        &self.v
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    /// `f(n) = w · M_{i_0} ⋯ M_{i_s} · v` over the LSB-first digits of `n`.
    pub fn eval(&self, n: u64) -> QuadRat {
        let word = digits_lsb_first(n, self.base);
        self.eval_digits(&word)
    }

    /// Evaluates an arbitrary word, leading zeros included.
    pub fn eval_word(&self, word: &[u32]) -> Result<QuadRat, RepError> {
        if let Some(&digit) = word.iter().find(|&&d| d >= self.base) {
            return Err(RepError::DigitOutOfRange { digit, base: self.base });
        }
        Ok(self.eval_digits(word))
    }

    fn eval_digits(&self, word: &[u32]) -> QuadRat {
        let row = word
            .iter()
            .fold(self.w.clone(), |row, &d| self.matrices[d as usize].row_times(&row));
        row.iter().zip(&self.v).map(|(x, y)| x * y).sum()
    }

    /// The product `M_{word[0]} ⋯ M_{word[last]}`; identity for the empty
    /// word.
    pub fn word_matrix(&self, word: &[u32]) -> Result<QMatrix, RepError> {
        let mut acc = QMatrix::identity(self.dim);
        for &d in word {
            let m = self.matrices.get(d as usize).ok_or(RepError::DigitOutOfRange {
                digit: d,
                base: self.base,
            })?;
            acc = acc.mul(m);
        }
        Ok(acc)
    }

    /// Serializes to the representation JSON schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("representation serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("representation serializes")
    }
}

/// Base-k digits of `n`, least significant first; empty for `n = 0`.
pub fn digits_lsb_first(mut n: u64, base: u32) -> Vec<u32> {
    assert!(base >= 2, "base must be at least 2");
    let k = u64::from(base);
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % k) as u32);
        n /= k;
    }
    digits
}

/// Outcome of comparing a representation against an oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Pass { checked: u64 },
    Mismatch { n: u64, expected: QuadRat, found: QuadRat },
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }
}

/// Exact comparison of `rep.eval(n)` with `oracle(n)` for `n < limit`,
/// reporting the least mismatching index.
pub fn verify_rep<F>(rep: &LinRep, oracle: F, limit: u64) -> Verification
where
    F: Fn(u64) -> QuadRat,
{
    for n in 0..limit {
        let expected = oracle(n);
        let found = rep.eval(n);
        if expected != found {
            return Verification::Mismatch { n, expected, found };
        }
    }
    Verification::Pass { checked: limit }
}

fn pairs_matrix(rows: &[&[(i64, i64)]]) -> QMatrix {
    QMatrix::from_pairs(rows).expect("builtin matrix is square")
}

fn unit(dim: usize, i: usize) -> Vec<QuadRat> {
    (0..dim)
        .map(|j| if i == j { QuadRat::one() } else { QuadRat::zero() })
        .collect()
}

/// Northshield's 3-regular representation: `w = [1 0]`, `v = [0 1]`,
/// `B_0 = [[1,0],[√2,1]]`, `B_1 = [[√2,1],[1,√2]]`, `B_2 = [[1,√2],[0,1]]`.
pub fn builtin_northshield_rep() -> LinRep {
    let rep = LinRep::new(
        3,
        unit(2, 0),
        vec![
            pairs_matrix(&[&[(1, 0), (0, 0)], &[(0, 1), (1, 0)]]),
            pairs_matrix(&[&[(0, 1), (1, 0)], &[(1, 0), (0, 1)]]),
            pairs_matrix(&[&[(1, 0), (0, 1)], &[(0, 0), (1, 0)]]),
        ],
        unit(2, 1),
    )
    .expect("builtin representation is well formed");
    self_check(&rep, |n| QuadRat::from(northshield(n)), &NORTHSHIELD_CHECKED);
    rep
}

/// Stern's 2-regular representation with `A_0 = [[1,1],[0,1]]`,
/// `A_1 = [[1,0],[1,1]]` and selectors `w = [0 1]`, `v = [1 0]`.
pub fn builtin_stern_rep() -> LinRep {
    let rep = LinRep::new(
        2,
        unit(2, 1),
        vec![
            pairs_matrix(&[&[(1, 0), (1, 0)], &[(0, 0), (1, 0)]]),
            pairs_matrix(&[&[(1, 0), (0, 0)], &[(1, 0), (1, 0)]]),
        ],
        unit(2, 0),
    )
    .expect("builtin representation is well formed");
    self_check(&rep, |n| QuadRat::from(stern(n) as i64), &STERN_CHECKED);
    rep
}

static NORTHSHIELD_CHECKED: OnceLock<()> = OnceLock::new();
static STERN_CHECKED: OnceLock<()> = OnceLock::new();

/// In debug and test builds the builtins verify their first 1000 terms once
/// per process.
fn self_check<F: Fn(u64) -> QuadRat>(rep: &LinRep, oracle: F, done: &OnceLock<()>) {
    if cfg!(debug_assertions) {
        done.get_or_init(|| {
            let outcome = verify_rep(rep, oracle, 1000);
            assert!(
                outcome.passed(),
                "builtin representation self-check failed: {outcome:?}"
            );
        });
    }
}

/// Parses and validates a representation document:
///
/// ```json
/// {"base": k, "dim": d, "w": [QuadRat…], "v": [QuadRat…],
///  "matrices": [d×d arrays of QuadRat …]}
/// ```
///
/// where a QuadRat is `{"num": [a, b], "den": d}` (`den` and `b` optional).
pub fn load_rep(document: &str) -> Result<LinRep, RepError> {
    let root: Value = serde_json::from_str(document)?;
    let Value::Object(map) = &root else {
        return Err(JsonError::WrongType {
            field: "(root)".into(),
            expected: "object",
        }
        .into());
    };
    let get = |field: &str| -> Result<&Value, RepError> {
        map.get(field).ok_or_else(|| {
            JsonError::Missing {
                field: field.to_string(),
            }
            .into()
        })
    };

    let base = json::unsigned(get("base")?, "base")?;
    if base < 2 {
        return Err(RepError::BaseTooSmall { base });
    }
    let base = u32::try_from(base).map_err(|_| JsonError::WrongType {
        field: "base".into(),
        expected: "base below 2^32",
    })?;
    let dim = json::unsigned(get("dim")?, "dim")? as usize;
    if dim == 0 {
        return Err(JsonError::WrongType {
            field: "dim".into(),
            expected: "positive integer",
        }
        .into());
    }

    let w = quad_vector(get("w")?, "w", dim)?;
    let v = quad_vector(get("v")?, "v", dim)?;

    let mats = array(get("matrices")?, "matrices")?;
    if mats.len() != base as usize {
        return Err(RepError::DimensionMismatch {
            field: "matrices".into(),
            expected: base as usize,
            found: mats.len(),
        });
    }
    let mut matrices = Vec::with_capacity(mats.len());
    for (i, m) in mats.iter().enumerate() {
        let field = format!("matrices[{i}]");
        let rows = array(m, &field)?;
        if rows.len() != dim {
            return Err(RepError::DimensionMismatch {
                field,
                expected: dim,
                found: rows.len(),
            });
        }
        let rows = rows
            .iter()
            .enumerate()
            .map(|(r, row)| quad_vector(row, &format!("{field}[{r}]"), dim))
            .collect::<Result<Vec<_>, _>>()?;
        matrices.push(QMatrix::from_rows(rows).expect("rows validated as square"));
    }
    LinRep::new(base, w, matrices, v)
}

fn array<'a>(value: &'a Value, field: &str) -> Result<&'a Vec<Value>, RepError> {
    value.as_array().ok_or_else(|| {
        JsonError::WrongType {
            field: field.to_string(),
            expected: "array",
        }
        .into()
    })
}

fn quad_vector(value: &Value, field: &str, dim: usize) -> Result<Vec<QuadRat>, RepError> {
    let items = array(value, field)?;
    if items.len() != dim {
        return Err(RepError::DimensionMismatch {
            field: field.to_string(),
            expected: dim,
            found: items.len(),
        });
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| QuadRat::from_json(x, &format!("{field}[{i}]")).map_err(RepError::from))
        .collect()
}
