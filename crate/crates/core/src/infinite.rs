//! Lazily generated `ω × ω` matrices with finitely supported rows.
//!
//! An [`InfMatrixSpec`] is a pure row generator plus an optional per-row
//! column bound. [`materialize`] turns an `n`-row prefix into a [`FinMatrix`].

use std::fmt;
use std::sync::Arc;

use crate::error::IprError;
use crate::matrix::{FinMatrix, SparseRow};
use crate::rational::Rational;

type RowFn = dyn Fn(usize) -> Result<SparseRow, IprError> + Send + Sync;
type IndexFn = dyn Fn(usize) -> usize + Send + Sync;

/// Structural facts a family knows about itself.
#[derive(Clone, Default)]
pub struct SpecMetadata {
    /// Column cut `α_n` of the block segmentation, as a function of `n`.
    pub segment_cut: Option<Arc<IndexFn>>,
    /// `(d, j)` for families that are restricted triangular.
    pub triangular: Option<(u64, Arc<IndexFn>)>,
}

#[derive(Clone)]
pub struct InfMatrixSpec {
    name: String,
    rows: Arc<RowFn>,
    bound: Option<Arc<IndexFn>>,
    metadata: SpecMetadata,
}

impl fmt::Debug for InfMatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfMatrixSpec")
            .field("name", &self.name)
            .field("declared_bound", &self.bound.is_some())
            .finish()
    }
}

impl InfMatrixSpec {
    pub fn new<F>(name: impl Into<String>, rows: F) -> Self
    where
        F: Fn(usize) -> SparseRow + Send + Sync + 'static,
    {
        InfMatrixSpec {
            name: name.into(),
            rows: Arc::new(move |n| Ok(rows(n))),
            bound: None,
            metadata: SpecMetadata::default(),
        }
    }

    /// A generator that may run out of rows (user-supplied finite tables).
    pub fn new_fallible<F>(name: impl Into<String>, rows: F) -> Self
    where
        F: Fn(usize) -> Result<SparseRow, IprError> + Send + Sync + 'static,
    {
        InfMatrixSpec {
            name: name.into(),
            rows: Arc::new(rows),
            bound: None,
            metadata: SpecMetadata::default(),
        }
    }

    /// Declares that row `n` lives inside columns `[0, bound(n))`.
    pub fn with_bound<F>(mut self, bound: F) -> Self
    where
        F: Fn(usize) -> usize + Send + Sync + 'static,
    {
        self.bound = Some(Arc::new(bound));
        self
    }

    pub fn with_metadata(mut self, metadata: SpecMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn metadata(&self) -> &SpecMetadata {
        &self.metadata
    }

    pub fn declared_bound(&self, n: usize) -> Option<usize> {
        self.bound.as_ref().map(|b| b(n))
    }

    /// Row `n`, checked against the declared bound.
    pub fn row(&self, n: usize) -> Result<SparseRow, IprError> {
        let row = (self.rows)(n)?;
        if let Some(bound) = self.declared_bound(n) {
            if row.width() > bound {
                return Err(IprError::SupportBoundViolated { row: n, bound });
            }
        }
        Ok(row)
    }

    /// `ω × ω` identity; restricted triangular with `d = 1`, `j(i) = i`.
    pub fn identity() -> Self {
        InfMatrixSpec::new("identity", |n| {
            SparseRow::new(vec![(n, Rational::one())]).expect("single entry")
        })
        .with_bound(|n| n + 1)
        .with_metadata(SpecMetadata {
            segment_cut: Some(Arc::new(|n| n)),
            triangular: Some((1, Arc::new(|i| i))),
        })
    }

    /// The finite sums matrix: row `n` is the 0/1 indicator of the binary
    /// digits of `n + 1`. Its first `2^m − 1` rows are exactly `fs(m)`.
    ///
    /// With `vars = Some(k)` the family stops after `2^k − 1` rows.
    pub fn finite_sums(vars: Option<u32>) -> Self {
        let limit = vars.map(|k| (1usize << k) - 1);
        InfMatrixSpec::new_fallible("fs", move |n| {
            if limit.is_some_and(|l| n >= l) {
                return Err(IprError::GeneratorExhausted(n));
            }
            Ok(finite_sums_row(n + 1))
        })
        .with_bound(|n| (usize::BITS - (n + 1).leading_zeros()) as usize)
        .with_metadata(SpecMetadata { segment_cut: Some(Arc::new(|n| n)), triangular: None })
    }

    /// Arithmetic progressions in two columns: row `n` is `(1, n)`.
    pub fn progression() -> Self {
        InfMatrixSpec::new("progression", |n| {
            SparseRow::from_pairs([(0, Rational::one()), (1, Rational::from(n as i64))])
        })
        .with_bound(|_| 2)
    }

    /// Block diagonal of `vdw(2), vdw(3), vdw(4), …`, each block in its own
    /// pair of columns.
    pub fn vdw_tower() -> Self {
        fn locate(mut n: usize) -> (usize, usize) {
            // block b has b + 2 rows
            let mut b = 0;
            while n >= b + 2 {
                n -= b + 2;
                b += 1;
            }
            (b, n)
        }
        InfMatrixSpec::new("vdw-tower", |n| {
            let (b, i) = locate(n);
            SparseRow::from_pairs([(2 * b, Rational::one()), (2 * b + 1, Rational::from(i as i64))])
        })
        .with_bound(move |n| 2 * locate(n).0 + 2)
        .with_metadata(SpecMetadata { segment_cut: Some(Arc::new(|n| 2 * n)), triangular: None })
    }

    /// Cycles through `rows`; each pass shifts the columns right by `shift`.
    /// With `shift = None` the table is finite and asking for more rows fails.
    pub fn from_rows(rows: Vec<SparseRow>, shift: Option<usize>) -> Result<Self, IprError> {
        if rows.is_empty() {
            return Err(IprError::InvalidArgument("row table is empty".into()));
        }
        let period = rows.len();
        let table = Arc::new(rows);
        let widths: Vec<usize> = table.iter().map(SparseRow::width).collect();
        let spec = InfMatrixSpec::new_fallible("rows", move |n| match shift {
            None => table.get(n).cloned().ok_or(IprError::GeneratorExhausted(n)),
            Some(s) => Ok(table[n % period].shifted((n / period) * s)),
        });
        Ok(match shift {
            Some(s) => spec.with_bound(move |n| widths[n % period] + (n / period) * s),
            None => spec,
        })
    }
}

pub(crate) fn finite_sums_row(mask: usize) -> SparseRow {
    SparseRow::from_pairs(
        (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| (b, Rational::one())),
    )
}

/// The first `n` rows of `spec` as a finite matrix.
///
/// The column count is the largest declared bound over those rows when the
/// spec declares one, otherwise one past the largest column seen.
pub fn materialize(spec: &InfMatrixSpec, n: usize) -> Result<FinMatrix, IprError> {
    if n == 0 {
        return Err(IprError::InvalidArgument("materialize needs at least one row".into()));
    }
    let rows = (0..n).map(|i| spec.row(i)).collect::<Result<Vec<_>, _>>()?;
    let seen = rows.iter().map(SparseRow::width).max().unwrap_or(0);
    let ncols = match spec.bound {
        Some(_) => (0..n).filter_map(|i| spec.declared_bound(i)).max().unwrap_or(0).max(seen),
        None => seen,
    };
    FinMatrix::new(ncols, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_prefix() {
        let m = materialize(&InfMatrixSpec::identity(), 3).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    }

    #[test]
    fn finite_sums_prefix() {
        let m = materialize(&InfMatrixSpec::finite_sums(Some(2)), 3).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[1, 0], [0, 1], [1, 1]]));
        assert!(matches!(
            materialize(&InfMatrixSpec::finite_sums(Some(2)), 4),
            Err(IprError::GeneratorExhausted(3))
        ));
    }

    #[test]
    fn declared_bound_sets_width() {
        let spec = InfMatrixSpec::new("diag", |n| SparseRow::from_pairs([(n, Rational::one())]))
            .with_bound(|n| n + 1);
        let m = materialize(&spec, 2).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[1, 0], [0, 1]]));
    }

    #[test]
    fn bound_violation_is_an_error() {
        let spec =
            InfMatrixSpec::new("liar", |n| SparseRow::from_pairs([(n + 1, Rational::one())]))
                .with_bound(|n| n + 1);
        assert_eq!(materialize(&spec, 2), Err(IprError::SupportBoundViolated { row: 0, bound: 1 }));
    }

    #[test]
    fn zero_rows_rejected() {
        assert!(materialize(&InfMatrixSpec::identity(), 0).is_err());
    }

    #[test]
    fn vdw_tower_blocks() {
        let m = materialize(&InfMatrixSpec::vdw_tower(), 5).unwrap();
        assert_eq!(
            m,
            FinMatrix::from_i64(&[
                [1, 0, 0, 0],
                [1, 1, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 1, 1],
                [0, 0, 1, 2],
            ])
        );
    }

    #[test]
    fn row_table_with_shift() {
        let rows = vec![SparseRow::from_i64(&[1, 1])];
        let spec = InfMatrixSpec::from_rows(rows.clone(), Some(2)).unwrap();
        let m = materialize(&spec, 2).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[1, 1, 0, 0], [0, 0, 1, 1]]));

        let finite = InfMatrixSpec::from_rows(rows, None).unwrap();
        assert!(materialize(&finite, 1).is_ok());
        assert!(materialize(&finite, 2).is_err());
    }

    fn any_family() -> impl Strategy<Value = InfMatrixSpec> {
        prop_oneof![
            Just(InfMatrixSpec::identity()),
            Just(InfMatrixSpec::finite_sums(None)),
            Just(InfMatrixSpec::progression()),
            Just(InfMatrixSpec::vdw_tower()),
            Just(InfMatrixSpec::new("unbounded", |n| SparseRow::from_pairs([
                (n / 2, Rational::one()),
                (n, Rational::from(2)),
            ]))),
        ]
    }

    proptest! {
        #[test]
        fn prefixes_nest(spec in any_family(), m in 1usize..20, extra in 0usize..20) {
            let n = m + extra;
            let big = materialize(&spec, n).unwrap();
            let small = materialize(&spec, m).unwrap();
            prop_assert!(small.ncols() <= big.ncols());
            prop_assert_eq!(big.prefix(m), small.padded(big.ncols()));
        }

        #[test]
        fn generator_is_deterministic(spec in any_family(), n in 0usize..200) {
            prop_assert_eq!(spec.row(n).unwrap(), spec.row(n).unwrap());
        }
    }
}
