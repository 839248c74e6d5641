//! Sparse finitary rows and finite matrices over the rationals.
//!
//! JSON layout of a matrix:
//!
//! ```json
//! {"nrows":3,"ncols":2,"rows":[[[0,"1"]],[[1,"1"]],[[0,"1"],[1,"1"]]]}
//! ```
//!
//! Each row lists `[column, value]` pairs with strictly increasing columns and
//! nonzero values. Values are written as canonical strings on output; bare JSON
//! integers are accepted on input.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::IprError;
use crate::rational::Rational;

/// A row with finitely many nonzero entries.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, Rational)>", into = "Vec<(usize, Rational)>")]
pub struct SparseRow {
    entries: Vec<(usize, Rational)>,
}

impl SparseRow {
    /// Builds a row from `(column, value)` pairs. Columns must be strictly
    /// increasing and values nonzero.
    pub fn new(entries: Vec<(usize, Rational)>) -> Result<Self, IprError> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(IprError::MalformedRow(format!(
                    "columns {} and {} are not strictly increasing",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((c, _)) = entries.iter().find(|(_, v)| v.is_zero()) {
            return Err(IprError::MalformedRow(format!("explicit zero at column {c}")));
        }
        Ok(SparseRow { entries })
    }

    /// Builds a row from unordered pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut acc: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (c, v) in pairs {
            *acc.entry(c).or_default() += &v;
        }
        SparseRow { entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseRow {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
        }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        SparseRow {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, Rational::from(v)))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, col: usize) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn first_nonzero(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn last_nonzero(&self) -> Option<(usize, &Rational)> {
        self.entries.last().map(|(c, v)| (*c, v))
    }

    /// One past the largest column in the support (0 for the zero row).
    pub fn width(&self) -> usize {
        self.entries.last().map_or(0, |(c, _)| c + 1)
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().map(|(_, v)| v).sum()
    }

    pub fn scaled(&self, factor: &Rational) -> SparseRow {
        if factor.is_zero() {
            return SparseRow::default();
        }
        SparseRow { entries: self.entries.iter().map(|(c, v)| (*c, v * factor)).collect() }
    }

    pub fn shifted(&self, offset: usize) -> SparseRow {
        SparseRow { entries: self.entries.iter().map(|(c, v)| (c + offset, v.clone())).collect() }
    }

    /// Entries with columns in `[start, end)`, re-indexed to start at 0.
    pub fn slice(&self, start: usize, end: usize) -> SparseRow {
        SparseRow {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| *c >= start && *c < end)
                .map(|(c, v)| (c - start, v.clone()))
                .collect(),
        }
    }

    /// Concatenates `other` after this row, with `other` starting at column `offset`.
    pub fn append(&mut self, other: &SparseRow, offset: usize) {
        debug_assert!(self.width() <= offset);
        self.entries.extend(other.entries.iter().map(|(c, v)| (c + offset, v.clone())));
    }

    pub fn dot(&self, x: &[Rational]) -> Rational {
        self.entries.iter().map(|(c, v)| v * &x[*c]).sum()
    }

    pub fn to_dense(&self, width: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); width];
        for (c, v) in &self.entries {
            if *c < width {
                out[*c] = v.clone();
            }
        }
        out
    }
}

impl TryFrom<Vec<(usize, Rational)>> for SparseRow {
    type Error = IprError;
    fn try_from(v: Vec<(usize, Rational)>) -> Result<Self, IprError> {
        SparseRow::new(v)
    }
}

impl From<SparseRow> for Vec<(usize, Rational)> {
    fn from(r: SparseRow) -> Self {
        r.entries
    }
}

impl fmt::Debug for SparseRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(c, v)| (c, v))).finish()
    }
}

/// A `nrows × ncols` matrix of rationals stored as sparse rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct FinMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl TryFrom<MatrixFile> for FinMatrix {
    type Error = IprError;
    fn try_from(f: MatrixFile) -> Result<Self, IprError> {
        if f.rows.len() != f.nrows {
            return Err(IprError::MalformedMatrix(format!(
                "nrows is {} but {} rows are listed",
                f.nrows,
                f.rows.len()
            )));
        }
        FinMatrix::new(f.ncols, f.rows)
    }
}

impl From<FinMatrix> for MatrixFile {
    fn from(m: FinMatrix) -> Self {
        MatrixFile { nrows: m.rows.len(), ncols: m.ncols, rows: m.rows }
    }
}

impl FinMatrix {
    pub fn new(ncols: usize, rows: Vec<SparseRow>) -> Result<Self, IprError> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.width() > ncols) {
            return Err(IprError::MalformedMatrix(format!(
                "row {i} uses column {} but ncols is {ncols}",
                r.width() - 1
            )));
        }
        Ok(FinMatrix { ncols, rows })
    }

    /// Width is one past the widest row.
    pub fn from_rows(rows: Vec<SparseRow>) -> Self {
        let ncols = rows.iter().map(SparseRow::width).max().unwrap_or(0);
        FinMatrix { ncols, rows }
    }

    /// Dense integer constructor, mostly for tests and built-in families.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let ncols = rows.iter().map(|r| r.as_ref().len()).max().unwrap_or(0);
        FinMatrix { ncols, rows: rows.iter().map(|r| SparseRow::from_i64(r.as_ref())).collect() }
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<Rational>]) -> Result<Self, IprError> {
        for r in rows {
            if r.len() != ncols {
                return Err(IprError::DimensionMismatch { expected: ncols, got: r.len() });
            }
        }
        Ok(FinMatrix { ncols, rows: rows.iter().map(|r| SparseRow::from_dense(r)).collect() })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        FinMatrix { ncols, rows: vec![SparseRow::default(); nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<SparseRow> {
        self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(j)
    }

    /// Same rows, with the column count raised to at least `ncols`.
    pub fn padded(mut self, ncols: usize) -> Self {
        self.ncols = self.ncols.max(ncols);
        self
    }

    /// The first `n` rows (or all of them, if fewer).
    pub fn prefix(&self, n: usize) -> FinMatrix {
        FinMatrix { ncols: self.ncols, rows: self.rows.iter().take(n).cloned().collect() }
    }

    /// Columns `[start, end)` as a new matrix; every row is kept, zero or not.
    pub fn column_block(&self, start: usize, end: usize) -> FinMatrix {
        FinMatrix {
            ncols: end.saturating_sub(start),
            rows: self.rows.iter().map(|r| r.slice(start, end)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    /// The image vector `A·x`, computed exactly.
    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>, IprError> {
        if x.len() != self.ncols {
            return Err(IprError::DimensionMismatch { expected: self.ncols, got: x.len() });
        }
        Ok(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    /// Dense initial segment of row `i` through column `l` (length `l + 1`).
    pub fn row_profile(&self, i: usize, l: usize) -> Result<Vec<Rational>, IprError> {
        let row = self.rows.get(i).ok_or_else(|| {
            IprError::InvalidArgument(format!("row {i} out of range (nrows = {})", self.nrows()))
        })?;
        Ok(row.to_dense(l + 1))
    }

    /// The common row sum, if every row sums to the same value.
    pub fn constant_row_sum(&self) -> Option<Rational> {
        let mut sums = self.rows.iter().map(SparseRow::sum);
        let first = sums.next()?;
        sums.all(|s| s == first).then_some(first)
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.entries().iter().all(|(_, v)| v.is_integer()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, IprError> {
        serde_json::from_str(s).map_err(|e| IprError::MalformedMatrix(e.to_string()))
    }
}

impl fmt::Debug for FinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FinMatrix {}x{} [", self.nrows(), self.ncols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact image of `x` under `a`; see [`FinMatrix::apply`].
pub fn mat_apply(a: &FinMatrix, x: &[Rational]) -> Result<Vec<Rational>, IprError> {
    a.apply(x)
}
