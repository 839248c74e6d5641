//! Structural matrix classes, each decided with a re-checkable certificate.
//!
//! * first entries: no zero row, and the first nonzero entry of every row
//!   depends only on its column and is positive;
//! * segmented first entries: columns cut into consecutive blocks whose
//!   nonzero row profiles form first entries matrices;
//! * restricted triangular: integer rows with an increasing pivot column
//!   carrying a value in `1..=d`, zeros to the right of the pivot, and
//!   every later row divisible by all of `1..=d` in earlier pivot columns.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::IprError;
use crate::infinite::InfMatrixSpec;
use crate::matrix::{FinMatrix, SparseRow};
use crate::rational::Rational;

/// The first entry `t_j` for every column that starts some row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstEntriesCert {
    pub t: BTreeMap<usize, Rational>,
}

impl FirstEntriesCert {
    pub fn is_monic(&self) -> bool {
        self.t.values().all(|v| *v == Rational::one())
    }

    /// Re-scans `a` against the definition.
    pub fn check(&self, a: &FinMatrix) -> bool {
        let mut used = BTreeSet::new();
        for row in a.rows() {
            let Some((j, v)) = row.first_nonzero() else {
                return false;
            };
            match self.t.get(&j) {
                Some(t) if t == v && t.is_positive() => {
                    used.insert(j);
                }
                _ => return false,
            }
        }
        used.len() == self.t.len()
    }
}

pub fn is_first_entries(a: &FinMatrix) -> Option<FirstEntriesCert> {
    let mut t: BTreeMap<usize, Rational> = BTreeMap::new();
    for row in a.rows() {
        let (j, v) = row.first_nonzero()?;
        if !v.is_positive() {
            return None;
        }
        match t.get(&j) {
            Some(prev) if prev != v => return None,
            Some(_) => {}
            None => {
                t.insert(j, v.clone());
            }
        }
    }
    Some(FirstEntriesCert { t })
}

pub fn is_monic_first_entries(a: &FinMatrix) -> bool {
    is_first_entries(a).is_some_and(|c| c.is_monic())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum BlockClass {
    Empty,
    FirstEntries(FirstEntriesCert),
    Unverified,
}

/// Cut points `α_0 = 0 < α_1 < … < α_k = ncols` with one class per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationCert {
    pub alphas: Vec<usize>,
    pub blocks: Vec<BlockClass>,
}

impl SegmentationCert {
    /// Every block is empty or first entries.
    pub fn is_first_entries(&self) -> bool {
        !self.blocks.iter().any(|b| matches!(b, BlockClass::Unverified))
    }

    /// First entries blocks whose first entries are all 1.
    pub fn is_monic(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            BlockClass::Empty => true,
            BlockClass::FirstEntries(c) => c.is_monic(),
            BlockClass::Unverified => false,
        })
    }

    pub fn check(&self, a: &FinMatrix) -> bool {
        let cuts = &self.alphas;
        if cuts.first() != Some(&0)
            || cuts.last() != Some(&a.ncols())
            || cuts.windows(2).any(|w| w[0] >= w[1])
            || self.blocks.len() != cuts.len().saturating_sub(1)
        {
            return false;
        }
        if a.rows().iter().any(SparseRow::is_zero) {
            return false;
        }
        self.blocks.iter().zip(cuts.windows(2)).all(|(class, w)| {
            let profiles = block_profiles(a, w[0], w[1]);
            match class {
                BlockClass::Empty => profiles.nrows() == 0,
                BlockClass::FirstEntries(c) => profiles.nrows() > 0 && c.check(&profiles),
                BlockClass::Unverified => profiles.nrows() > 0,
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SegmentationMode {
    /// Only empty or first entries blocks.
    #[default]
    Strict,
    /// Blocks that are neither are accepted and labelled unverified; the
    /// chosen cuts minimise the number of columns inside such blocks.
    AllowUnverified,
}

/// Distinct nonzero row profiles of columns `[start, end)`, in first-occurrence order.
fn block_profiles(a: &FinMatrix, start: usize, end: usize) -> FinMatrix {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for r in a.rows() {
        let p = r.slice(start, end);
        if !p.is_zero() && seen.insert(p.clone()) {
            rows.push(p);
        }
    }
    FinMatrix::new(end - start, rows).expect("slice fits the block")
}

fn classify_block(a: &FinMatrix, start: usize, end: usize) -> BlockClass {
    let profiles = block_profiles(a, start, end);
    if profiles.nrows() == 0 {
        BlockClass::Empty
    } else if let Some(c) = is_first_entries(&profiles) {
        BlockClass::FirstEntries(c)
    } else {
        BlockClass::Unverified
    }
}

/// Segmented first entries certificate with the lexicographically smallest
/// cut sequence, or `None` if no cut sequence works.
pub fn detect_segmentation(a: &FinMatrix) -> Result<Option<SegmentationCert>, IprError> {
    detect_segmentation_with(a, SegmentationMode::Strict)
}

pub fn detect_segmentation_with(
    a: &FinMatrix,
    mode: SegmentationMode,
) -> Result<Option<SegmentationCert>, IprError> {
    if let Some(i) = a.rows().iter().position(SparseRow::is_zero) {
        return Err(IprError::ZeroRow(i));
    }
    let w = a.ncols();
    if w == 0 {
        return Ok(Some(SegmentationCert { alphas: vec![0], blocks: vec![] }));
    }

    // classes[s][e - s - 1] for the block [s, e)
    let classes: Vec<Vec<BlockClass>> =
        (0..w).map(|s| (s + 1..=w).map(|e| classify_block(a, s, e)).collect()).collect();
    let class = |s: usize, e: usize| &classes[s][e - s - 1];
    let cost = |s: usize, e: usize| match class(s, e) {
        BlockClass::Unverified => match mode {
            SegmentationMode::Strict => None,
            SegmentationMode::AllowUnverified => Some(e - s),
        },
        _ => Some(0),
    };

    // best[p]: least unverified width over cut sequences covering [p, w)
    let mut best: Vec<Option<usize>> = vec![None; w + 1];
    best[w] = Some(0);
    for p in (0..w).rev() {
        best[p] = (p + 1..=w).filter_map(|e| Some(cost(p, e)? + best[e]?)).min();
    }
    let Some(mut remaining) = best[0] else {
        return Ok(None);
    };

    let mut alphas = vec![0];
    let mut blocks = Vec::new();
    let mut p = 0;
    while p < w {
        let e = (p + 1..=w)
            .find(|&e| match (cost(p, e), best[e]) {
                (Some(c), Some(b)) => c + b == remaining,
                _ => false,
            })
            .expect("best[p] is attained");
        remaining -= cost(p, e).unwrap();
        alphas.push(e);
        blocks.push(class(p, e).clone());
        p = e;
    }
    Ok(Some(SegmentationCert { alphas, blocks }))
}

/// Restricted triangular certificate: bound `d` and pivot columns `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriCert {
    pub d: u64,
    pub j: Vec<usize>,
}

impl TriCert {
    /// Direct scan of the three defining conditions over every row and column.
    pub fn check(&self, a: &FinMatrix) -> bool {
        if self.d == 0 || self.j.len() != a.nrows() || self.j.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        let d = BigInt::from(self.d);
        for i in 0..a.nrows() {
            let ji = self.j[i];
            if ji >= a.ncols() {
                return false;
            }
            let Some(pivot) = a.entry(i, ji).to_integer() else {
                return false;
            };
            if pivot < BigInt::one() || pivot > d {
                return false;
            }
            if (ji + 1..a.ncols()).any(|l| !a.entry(i, l).is_zero()) {
                return false;
            }
            for k in i + 1..a.nrows() {
                let Some(below) = a.entry(k, ji).to_integer() else {
                    return false;
                };
                if (1..=self.d).any(|t| !below.is_multiple_of(&BigInt::from(t))) {
                    return false;
                }
            }
        }
        true
    }
}

fn lcm_upto(d: u64) -> BigInt {
    (1..=d).fold(BigInt::one(), |acc, t| acc.lcm(&BigInt::from(t)))
}

/// Smallest `d ≤ d_max` with a pivot sequence making `a` restricted triangular.
///
/// Condition (2) forces the pivot of a row to be its last nonzero column, so
/// `j` is determined by the matrix and only `d` is searched.
pub fn is_restricted_triangular(a: &FinMatrix, d_max: u64) -> Result<Option<TriCert>, IprError> {
    let mut ints: Vec<Vec<(usize, BigInt)>> = Vec::with_capacity(a.nrows());
    for (i, row) in a.rows().iter().enumerate() {
        let mut out = Vec::with_capacity(row.entries().len());
        for (c, v) in row.entries() {
            out.push((*c, v.to_integer().ok_or(IprError::NonIntegerEntry { row: i, col: *c })?));
        }
        ints.push(out);
    }

    let mut j = Vec::with_capacity(a.nrows());
    let mut pivots = Vec::with_capacity(a.nrows());
    for row in &ints {
        let Some((c, v)) = row.last() else {
            return Ok(None);
        };
        if j.last().is_some_and(|&prev| prev >= *c) || v < &BigInt::one() {
            return Ok(None);
        }
        j.push(*c);
        pivots.push(v.clone());
    }

    let at = |k: usize, col: usize| -> BigInt {
        match ints[k].binary_search_by_key(&col, |(c, _)| *c) {
            Ok(p) => ints[k][p].1.clone(),
            Err(_) => BigInt::zero(),
        }
    };

    for d in 1..=d_max {
        let bound = BigInt::from(d);
        if pivots.iter().any(|p| p > &bound) {
            continue;
        }
        let l = lcm_upto(d);
        let divisible =
            (0..j.len()).all(|i| (i + 1..j.len()).all(|k| at(k, j[i]).is_multiple_of(&l)));
        if divisible {
            return Ok(Some(TriCert { d, j }));
        }
        // a larger d only adds divisors
        return Ok(None);
    }
    Ok(None)
}

/// How many of the first `n_probe` rows are supported entirely inside columns `[0, k)`.
pub fn finite_support_condition(
    spec: &InfMatrixSpec,
    k: usize,
    n_probe: usize,
) -> Result<usize, IprError> {
    let mut count = 0;
    for n in 0..n_probe {
        if spec.row(n)?.width() <= k {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{block_diag, fs, schur};

    fn t(pairs: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
        pairs.iter().map(|&(c, v)| (c, Rational::from(v))).collect()
    }

    #[test]
    fn first_entries_examples() {
        let cert = is_first_entries(&schur()).unwrap();
        assert_eq!(cert.t, t(&[(0, 1), (1, 1)]));
        assert!(cert.check(&schur()));

        assert!(is_first_entries(&FinMatrix::from_i64(&[[1, 0], [0, 0]])).is_none());
        assert!(is_first_entries(&FinMatrix::from_i64(&[[2, 0], [1, 1]])).is_none());
        assert!(is_first_entries(&FinMatrix::from_i64(&[[-1, 1]])).is_none());

        let half = FinMatrix::new(
            2,
            vec![SparseRow::new(vec![(1, Rational::new(1, 2).unwrap())]).unwrap()],
        )
        .unwrap();
        assert_eq!(is_first_entries(&half).unwrap().t.get(&1), Some(&Rational::new(1, 2).unwrap()));
    }

    #[test]
    fn monic_examples() {
        assert!(is_monic_first_entries(&schur()));
        assert!(!is_monic_first_entries(&FinMatrix::from_i64(&[[2, 0], [2, 1]])));
        assert!(is_monic_first_entries(&FinMatrix::zeros(0, 3)));
    }

    #[test]
    fn segmentation_of_finite_sums() {
        let cert = detect_segmentation(&fs(3).unwrap()).unwrap().unwrap();
        assert_eq!(cert.alphas, vec![0, 1, 2, 3]);
        for b in &cert.blocks {
            assert_eq!(b, &BlockClass::FirstEntries(FirstEntriesCert { t: t(&[(0, 1)]) }));
        }
        assert!(cert.is_monic());
        assert!(cert.check(&fs(3).unwrap()));
    }

    #[test]
    fn segmentation_of_block_diagonal() {
        let m = block_diag(&[schur(), schur()]).unwrap();
        let cert = detect_segmentation(&m).unwrap().unwrap();
        // every single column already works, so the smallest cuts refine (0, 2, 4)
        assert_eq!(cert.alphas, vec![0, 1, 2, 3, 4]);
        assert!(cert.blocks.iter().all(|b| matches!(b, BlockClass::FirstEntries(_))));
        assert!(cert.check(&m));
    }

    #[test]
    fn segmentation_backtracks_past_first_cut() {
        // cutting after column 0 leaves the block <-1>, which is not first entries
        let m = FinMatrix::from_i64(&[[1, -1]]);
        let cert = detect_segmentation(&m).unwrap().unwrap();
        assert_eq!(cert.alphas, vec![0, 2]);
        assert_eq!(
            cert.blocks,
            vec![BlockClass::FirstEntries(FirstEntriesCert { t: t(&[(0, 1)]) })]
        );
    }

    #[test]
    fn segmentation_failure_and_lenient_mode() {
        let m = FinMatrix::from_i64(&[[1, 0], [0, -1]]);
        assert_eq!(detect_segmentation(&m).unwrap(), None);
        let cert =
            detect_segmentation_with(&m, SegmentationMode::AllowUnverified).unwrap().unwrap();
        assert_eq!(cert.alphas, vec![0, 1, 2]);
        assert_eq!(cert.blocks[1], BlockClass::Unverified);
        assert!(cert.check(&m));
        assert!(!cert.is_first_entries());
    }

    #[test]
    fn segmentation_rejects_zero_rows() {
        let m = FinMatrix::from_i64(&[[1, 0], [0, 0]]);
        assert_eq!(detect_segmentation(&m), Err(IprError::ZeroRow(1)));
    }

    #[test]
    fn restricted_triangular_examples() {
        let lower = FinMatrix::from_i64(&[[1, 0, 0], [1, 1, 0], [0, 1, 1]]);
        let cert = is_restricted_triangular(&lower, 1).unwrap().unwrap();
        assert_eq!(cert, TriCert { d: 1, j: vec![0, 1, 2] });
        assert!(cert.check(&lower));

        let m = FinMatrix::from_i64(&[[1, 0], [3, 2]]);
        assert_eq!(is_restricted_triangular(&m, 2).unwrap(), None);

        let m = FinMatrix::from_i64(&[[1, 0], [6, 2]]);
        let cert = is_restricted_triangular(&m, 2).unwrap().unwrap();
        assert_eq!(cert, TriCert { d: 2, j: vec![0, 1] });
        assert!(cert.check(&m));
        assert_eq!(is_restricted_triangular(&m, 1).unwrap(), None);
    }

    #[test]
    fn restricted_triangular_rejects_fractions() {
        let m = FinMatrix::new(
            1,
            vec![SparseRow::new(vec![(0, Rational::new(1, 2).unwrap())]).unwrap()],
        )
        .unwrap();
        assert_eq!(
            is_restricted_triangular(&m, 3),
            Err(IprError::NonIntegerEntry { row: 0, col: 0 })
        );
    }

    #[test]
    fn support_probe_examples() {
        assert_eq!(finite_support_condition(&InfMatrixSpec::identity(), 3, 10).unwrap(), 3);
        let two_cols = InfMatrixSpec::new("pair", |n| {
            SparseRow::from_pairs([(0, Rational::one()), (1, Rational::from(n as i64 + 1))])
        });
        assert_eq!(finite_support_condition(&two_cols, 2, 50).unwrap(), 50);
        assert_eq!(finite_support_condition(&InfMatrixSpec::progression(), 1, 20).unwrap(), 1);
    }
}
