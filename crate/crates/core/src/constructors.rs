//! Canonical matrix families and the combinators that build new image
//! partition regular matrices out of old ones.

use std::collections::HashSet;

use crate::error::IprError;
use crate::infinite::finite_sums_row;
use crate::matrix::{FinMatrix, SparseRow};
use crate::rational::Rational;

/// `[[1,0],[0,1],[1,1]]`: monochromatic `x`, `y`, `x + y`.
pub fn schur() -> FinMatrix {
    FinMatrix::from_i64(&[[1, 0], [0, 1], [1, 1]])
}

/// `k × 2` matrix with rows `(1, i)`, `i = 0..k`: a `k`-term progression `a, a+d, …`.
pub fn vdw(k: usize) -> Result<FinMatrix, IprError> {
    if k < 2 {
        return Err(IprError::InvalidArgument(format!("vdw needs k >= 2, got {k}")));
    }
    let rows: Vec<[i64; 2]> = (0..k as i64).map(|i| [1, i]).collect();
    Ok(FinMatrix::from_i64(&rows))
}

/// All `2^n − 1` nonzero 0/1 rows of length `n`.
///
/// Row `r` is the binary expansion of `r + 1` (bit `b` in column `b`), so rows
/// are grouped by the largest column used and `fs(m)` is a prefix of `fs(n)`.
pub fn fs(n: usize) -> Result<FinMatrix, IprError> {
    if n < 1 {
        return Err(IprError::InvalidArgument("fs needs n >= 1".into()));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(IprError::InvalidArgument(format!("fs({n}) is too large")));
    }
    let rows = (1..1usize << n).map(finite_sums_row).collect();
    FinMatrix::new(n, rows)
}

pub fn block_diag(blocks: &[FinMatrix]) -> Result<FinMatrix, IprError> {
    if blocks.is_empty() {
        return Err(IprError::InvalidArgument("block_diag needs at least one block".into()));
    }
    let mut rows = Vec::with_capacity(blocks.iter().map(FinMatrix::nrows).sum());
    let mut offset = 0;
    for b in blocks {
        rows.extend(b.rows().iter().map(|r| r.shifted(offset)));
        offset += b.ncols();
    }
    FinMatrix::new(offset, rows)
}

/// Outer matrix `C` (`γ × δ`) and one inner matrix `B_t` per column of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionPlan {
    outer: FinMatrix,
    inner: Vec<FinMatrix>,
}

impl InsertionPlan {
    pub fn new(outer: FinMatrix, inner: Vec<FinMatrix>) -> Result<Self, IprError> {
        if inner.len() != outer.ncols() {
            return Err(IprError::DimensionMismatch { expected: outer.ncols(), got: inner.len() });
        }
        if let Some(t) = inner.iter().position(|b| b.nrows() == 0) {
            return Err(IprError::InvalidArgument(format!("inner matrix {t} has no rows")));
        }
        Ok(InsertionPlan { outer, inner })
    }

    pub fn outer(&self) -> &FinMatrix {
        &self.outer
    }

    pub fn inner(&self) -> &[FinMatrix] {
        &self.inner
    }
}

/// Rows `c_{i,0}·b^{(0)}_{j(0)} ⌢ c_{i,1}·b^{(1)}_{j(1)} ⌢ …` over all `(i, j)`.
///
/// `i` is outermost; `j` runs lexicographically with `j(0)` most significant.
/// Repeated rows are dropped, keeping the first occurrence.
pub fn insertion(plan: &InsertionPlan) -> Result<FinMatrix, IprError> {
    let inner = &plan.inner;
    let offsets: Vec<usize> = inner
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.ncols();
            Some(o)
        })
        .collect();
    let ncols = inner.iter().map(FinMatrix::ncols).sum();

    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for c_row in plan.outer.rows() {
        let coeffs: Vec<Rational> = (0..inner.len()).map(|t| c_row.get(t)).collect();
        let mut j = vec![0usize; inner.len()];
        loop {
            let mut row = SparseRow::default();
            for (t, b) in inner.iter().enumerate() {
                row.append(&b.row(j[t]).scaled(&coeffs[t]), offsets[t]);
            }
            if seen.insert(row.clone()) {
                rows.push(row);
            }
            if !advance(&mut j, |t| inner[t].nrows()) {
                break;
            }
        }
    }
    FinMatrix::new(ncols, rows)
}

/// Odometer step over `j`, last index fastest; false once it wraps around.
fn advance(j: &mut [usize], size: impl Fn(usize) -> usize) -> bool {
    for t in (0..j.len()).rev() {
        j[t] += 1;
        if j[t] < size(t) {
            return true;
        }
        j[t] = 0;
    }
    false
}

/// Compresses columns `l, l+1, …` of a matrix with constant row sum `m` into
/// a single column: the distinct profiles `⟨a_{i,0}, …, a_{i,l−1}⟩` (first
/// occurrence order) followed by `d_i = m − Σ profile`.
pub fn compress_profile(a: &FinMatrix, l: usize, m: &Rational) -> Result<FinMatrix, IprError> {
    if l < 1 {
        return Err(IprError::InvalidArgument("compress_profile needs l >= 1".into()));
    }
    for (i, row) in a.rows().iter().enumerate() {
        let s = row.sum();
        if &s != m {
            return Err(IprError::RowSumMismatch {
                row: i,
                expected: m.to_string(),
                got: s.to_string(),
            });
        }
    }
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for row in a.rows() {
        let w = row.slice(0, l);
        if seen.insert(w.clone()) {
            let d = m - &w.sum();
            rows.push(SparseRow::from_pairs(
                w.entries().iter().cloned().chain(std::iter::once((l, d))),
            ));
        }
    }
    FinMatrix::new(l + 1, rows)
}

/// `[[O, B], [A, O], [A, B]]` with `B = diag(bs)`, for a `p × q` matrix `A`.
pub fn combine_diag(a: &FinMatrix, bs: &[u64]) -> Result<FinMatrix, IprError> {
    let (p, q) = (a.nrows(), a.ncols());
    if bs.len() != p {
        return Err(IprError::DimensionMismatch { expected: p, got: bs.len() });
    }
    if bs.contains(&0) {
        return Err(IprError::InvalidArgument("diagonal entries must be positive".into()));
    }
    let diag = |n: usize| (q + n, Rational::from_integer(bs[n]));
    let mut rows = Vec::with_capacity(3 * p);
    rows.extend((0..p).map(|n| SparseRow::from_pairs([diag(n)])));
    rows.extend(a.rows().iter().cloned());
    rows.extend(a.rows().iter().enumerate().map(|(n, r)| {
        let mut r = r.clone();
        r.append(&SparseRow::from_pairs([(0, Rational::from_integer(bs[n]))]), q + n);
        r
    }));
    FinMatrix::new(q + p, rows)
}

/// `b·r` stacked on top of `a`; the width grows to fit `r` if needed.
pub fn scale_row_augment(
    r: &SparseRow,
    b: &Rational,
    a: &FinMatrix,
) -> Result<FinMatrix, IprError> {
    if b.is_zero() {
        return Err(IprError::InvalidArgument("scalar b must be nonzero".into()));
    }
    let ncols = a.ncols().max(r.width());
    let mut rows = Vec::with_capacity(a.nrows() + 1);
    rows.push(r.scaled(b));
    rows.extend(a.rows().iter().cloned());
    FinMatrix::new(ncols, rows)
}

/// The constant vector `x = (d, …, d)` and its image `(d·m, …, d·m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformWitness {
    pub x: Vec<Rational>,
    pub image: Vec<Rational>,
}

/// For a matrix whose rows all sum to `m`, every entry of `A·(d, …, d)` is `d·m`.
pub fn uniform_witness(a: &FinMatrix, d: u64) -> Result<UniformWitness, IprError> {
    if d == 0 {
        return Err(IprError::InvalidArgument("d must be a positive integer".into()));
    }
    let m = a.constant_row_sum().ok_or(IprError::NonConstantRowSum)?;
    let d = Rational::from_integer(d);
    let value = &d * &m;
    if !(value.is_integer() && value.is_positive()) {
        return Err(IprError::InvalidArgument(format!("d·m = {value} is not a positive integer")));
    }
    let x = vec![d; a.ncols()];
    let image = a.apply(&x)?;
    debug_assert!(image.iter().all(|v| *v == value));
    Ok(UniformWitness { x, image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::is_first_entries;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn schur_matrix() {
        assert_eq!(schur().to_dense(), vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])]);
        assert_eq!(schur().apply(&ints(&[1, 1])).unwrap(), ints(&[1, 1, 2]));
        assert!(is_first_entries(&schur()).is_some());
    }

    #[test]
    fn vdw_matrices() {
        assert_eq!(vdw(4).unwrap(), FinMatrix::from_i64(&[[1, 0], [1, 1], [1, 2], [1, 3]]));
        assert_eq!(vdw(2).unwrap(), FinMatrix::from_i64(&[[1, 0], [1, 1]]));
        assert_eq!(vdw(3).unwrap().apply(&ints(&[5, 7])).unwrap(), ints(&[5, 12, 19]));
        assert!(vdw(1).is_err());
    }

    #[test]
    fn finite_sums_matrices() {
        assert_eq!(fs(2).unwrap(), schur());
        assert_eq!(fs(1).unwrap(), FinMatrix::from_i64(&[[1]]));
        assert_eq!(fs(4).unwrap().nrows(), 15);
        assert!(fs(0).is_err());
    }

    #[test]
    fn finite_sums_truncation_nests() {
        let big = fs(5).unwrap();
        for m in 1..=5 {
            let rows = (1 << m) - 1;
            assert_eq!(big.prefix(rows).column_block(0, m), fs(m).unwrap());
        }
    }

    #[test]
    fn block_diag_layout() {
        let m = block_diag(&[schur(), schur()]).unwrap();
        assert_eq!(m.nrows(), 6);
        assert_eq!(m.ncols(), 4);
        assert_eq!(m.row(4), &SparseRow::from_i64(&[0, 0, 0, 1]));
        assert_eq!(block_diag(&[vdw(3).unwrap()]).unwrap(), vdw(3).unwrap());
        assert!(block_diag(&[]).is_err());
    }

    #[test]
    fn insertion_reproduces_worked_example() {
        let c = FinMatrix::from_i64(&[[1, 0], [2, 1]]);
        let b0 = FinMatrix::from_i64(&[[1, 1], [5, 7]]);
        let b1 = FinMatrix::from_i64(&[[0, 1], [3, 3]]);
        let d = insertion(&InsertionPlan::new(c, vec![b0, b1]).unwrap()).unwrap();
        assert_eq!(
            d,
            FinMatrix::from_i64(&[
                [1, 1, 0, 0],
                [5, 7, 0, 0],
                [2, 2, 0, 1],
                [2, 2, 3, 3],
                [10, 14, 0, 1],
                [10, 14, 3, 3],
            ])
        );
    }

    #[test]
    fn insertion_trivial_outer() {
        let b0 = FinMatrix::from_i64(&[[1, 2, 3], [4, 5, 6]]);
        let d =
            insertion(&InsertionPlan::new(FinMatrix::from_i64(&[[1]]), vec![b0.clone()]).unwrap())
                .unwrap();
        assert_eq!(d, b0);
    }

    #[test]
    fn insertion_zero_scale_collapses() {
        let c = FinMatrix::from_i64(&[[0, 1]]);
        let b0 = FinMatrix::from_i64(&[[1], [2]]);
        let b1 = FinMatrix::from_i64(&[[1]]);
        let d = insertion(&InsertionPlan::new(c, vec![b0, b1]).unwrap()).unwrap();
        assert_eq!(d, FinMatrix::from_i64(&[[0, 1]]));
    }

    #[test]
    fn insertion_plan_validation() {
        let c = FinMatrix::from_i64(&[[1, 0]]);
        assert!(InsertionPlan::new(c.clone(), vec![schur()]).is_err());
        assert!(InsertionPlan::new(c, vec![schur(), FinMatrix::zeros(0, 2)]).is_err());
    }

    #[test]
    fn compress_examples() {
        let three = Rational::from(3);
        let a = FinMatrix::from_i64(&[[1, 1, 1], [1, 1, 1]]);
        assert_eq!(compress_profile(&a, 2, &three).unwrap(), FinMatrix::from_i64(&[[1, 1, 1]]));

        let a = FinMatrix::from_i64(&[[2, 1, 0, 0], [1, 1, 1, 0], [2, 1, 0, 0]]);
        assert_eq!(
            compress_profile(&a, 2, &three).unwrap(),
            FinMatrix::from_i64(&[[2, 1, 0], [1, 1, 1]])
        );

        assert!(matches!(
            compress_profile(&FinMatrix::from_i64(&[[1, 1], [1, 0]]), 1, &Rational::from(2)),
            Err(IprError::RowSumMismatch { row: 1, .. })
        ));
        assert!(compress_profile(&a, 0, &three).is_err());
    }

    #[test]
    fn combine_diag_examples() {
        let m = combine_diag(&FinMatrix::from_i64(&[[1]]), &[2]).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[0, 2], [1, 0], [1, 2]]));

        let m = combine_diag(&schur(), &[1, 1, 1]).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (9, 5));
        assert_eq!(m.row(0), &SparseRow::from_i64(&[0, 0, 1, 0, 0]));
        assert_eq!(m.row(8), &SparseRow::from_i64(&[1, 1, 0, 0, 1]));

        assert!(combine_diag(&schur(), &[1, 1]).is_err());
        assert!(combine_diag(&schur(), &[1, 0, 1]).is_err());
    }

    #[test]
    fn augment_examples() {
        let r = SparseRow::from_i64(&[1, 1]);
        let m = scale_row_augment(&r, &Rational::from(2), &schur()).unwrap();
        assert_eq!(m, FinMatrix::from_i64(&[[2, 2], [1, 0], [0, 1], [1, 1]]));

        let dup = scale_row_augment(schur().row(0), &Rational::one(), &schur()).unwrap();
        assert_eq!(dup.row(0), dup.row(1));

        let b = Rational::new(-3, 4).unwrap();
        let scaled = scale_row_augment(&r, &b, &schur()).unwrap();
        let unit = scale_row_augment(&r, &Rational::one(), &schur()).unwrap();
        assert_eq!(scaled.row(0), &unit.row(0).scaled(&b));

        assert!(scale_row_augment(&r, &Rational::zero(), &schur()).is_err());

        let wide = SparseRow::from_i64(&[0, 0, 0, 1]);
        assert_eq!(scale_row_augment(&wide, &Rational::one(), &schur()).unwrap().ncols(), 4);
    }

    #[test]
    fn uniform_witness_examples() {
        let a = FinMatrix::from_i64(&[[1, 2, 0], [0, 0, 3], [3, 0, 0]]);
        let w = uniform_witness(&a, 2).unwrap();
        assert_eq!(w.x, ints(&[2, 2, 2]));
        assert_eq!(w.image, ints(&[6, 6, 6]));

        assert_eq!(uniform_witness(&vdw(4).unwrap(), 1), Err(IprError::NonConstantRowSum));

        let half = Rational::new(1, 2).unwrap();
        let a = FinMatrix::from_dense(
            2,
            &[
                vec![half.clone(), Rational::zero()],
                vec![Rational::new(1, 4).unwrap(), Rational::new(1, 4).unwrap()],
            ],
        )
        .unwrap();
        assert_eq!(uniform_witness(&a, 2).unwrap().image, ints(&[1, 1]));
        assert!(uniform_witness(&a, 1).is_err());
        assert!(uniform_witness(&a, 0).is_err());
    }
}
