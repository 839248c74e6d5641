use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::matrix::{FinMatrix, SparseRow};

/// An input vector whose image is monochromatic under a specific coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<u64>,
    pub image: Vec<u64>,
    pub color: usize,
}

/// One distinct row scaled to integer coefficients: its value at `x` is
/// `Σ coeffs·x / denom`.
#[derive(Clone, Debug)]
struct IntRow<T> {
    coeffs: Vec<(usize, T)>,
    denom: T,
}

#[derive(Clone, Debug)]
enum Rows {
    Small(Vec<IntRow<i64>>),
    Big(Vec<IntRow<BigInt>>),
}

/// A matrix prepared for repeated witness searches under different colorings.
///
/// Duplicate rows are merged (they always have equal images) and every row
/// is scaled to integers. Rows are grouped by their last support column: once
/// that component of `x` is fixed, the row's image entry is final and can be
/// checked, which prunes the rest of the subtree on failure.
#[derive(Clone, Debug)]
pub struct WitnessSearch {
    ncols: usize,
    x_max: u64,
    strong: bool,
    /// original row index -> distinct row index
    row_class: Vec<usize>,
    rows: Rows,
    /// distinct rows whose last support column is `j`
    finishing: Vec<Vec<usize>>,
    has_zero_row: bool,
}

fn to_int_row(row: &SparseRow) -> IntRow<BigInt> {
    let denom = row.entries().iter().fold(BigInt::from(1), |acc, (_, v)| acc.lcm(v.denom()));
    let coeffs =
        row.entries().iter().map(|(c, v)| (*c, v.numer() * (&denom / v.denom()))).collect();
    IntRow { coeffs, denom }
}

impl WitnessSearch {
    pub fn new(a: &FinMatrix, x_max: u64, strong: bool) -> Self {
        let mut distinct: Vec<&SparseRow> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let row_class = a
            .rows()
            .iter()
            .map(|r| {
                *index.entry(r).or_insert_with(|| {
                    distinct.push(r);
                    distinct.len() - 1
                })
            })
            .collect();

        let mut finishing = vec![Vec::new(); a.ncols()];
        let mut has_zero_row = false;
        for (k, r) in distinct.iter().enumerate() {
            match r.last_nonzero() {
                Some((j, _)) => finishing[j].push(k),
                None => has_zero_row = true,
            }
        }

        let big: Vec<IntRow<BigInt>> = distinct.iter().map(|r| to_int_row(r)).collect();
        // |Σ c·x| ≤ Σ|c|·x_max must stay well inside i64
        let limit = BigInt::from(i64::MAX / 4);
        let fits = big.iter().all(|r| {
            let total: BigInt = r.coeffs.iter().map(|(_, c)| c.abs()).sum::<BigInt>() * x_max;
            total < limit && r.denom < limit
        });
        let rows = if fits {
            Rows::Small(
                big.iter()
                    .map(|r| IntRow {
                        coeffs: r.coeffs.iter().map(|(j, c)| (*j, c.to_i64().unwrap())).collect(),
                        denom: r.denom.to_i64().unwrap(),
                    })
                    .collect(),
            )
        } else {
            Rows::Big(big)
        };

        WitnessSearch { ncols: a.ncols(), x_max, strong, row_class, rows, finishing, has_zero_row }
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    pub fn strong(&self) -> bool {
        self.strong
    }

    /// The lexicographically first `x ∈ [1..x_max]^q` whose image is a
    /// monochromatic set of integers in `[1..N]`.
    pub fn find(&self, coloring: &Coloring) -> Option<Witness> {
        if self.row_class.is_empty() || self.has_zero_row || self.x_max == 0 {
            return None;
        }
        match &self.rows {
            Rows::Small(rows) => self.run(rows, coloring),
            Rows::Big(rows) => self.run(rows, coloring),
        }
    }

    fn run<T: Integer + Clone + ToPrimitive + From<i64>>(
        &self,
        rows: &[IntRow<T>],
        coloring: &Coloring,
    ) -> Option<Witness> {
        let mut st = Dfs {
            search: self,
            rows,
            coloring,
            x: vec![0; self.ncols],
            values: vec![0; rows.len()],
            used: vec![false; coloring.universe() + 1],
            color: None,
        };
        if !st.descend(0) {
            return None;
        }
        let image = self.row_class.iter().map(|&k| st.values[k]).collect();
        Some(Witness { x: st.x, image, color: st.color.expect("at least one row") })
    }
}

struct Dfs<'a, T> {
    search: &'a WitnessSearch,
    rows: &'a [IntRow<T>],
    coloring: &'a Coloring,
    x: Vec<u64>,
    values: Vec<u64>,
    /// values taken by finished rows; consulted only for strong witnesses
    used: Vec<bool>,
    color: Option<usize>,
}

impl<T: Integer + Clone + ToPrimitive + From<i64>> Dfs<'_, T> {
    fn value(&self, row: &IntRow<T>) -> Option<u64> {
        let mut acc = T::zero();
        for (j, c) in &row.coeffs {
            acc = acc + c.clone() * T::from(self.x[*j] as i64);
        }
        let (q, r) = acc.div_rem(&row.denom);
        if !r.is_zero() {
            return None;
        }
        q.to_u64().filter(|&v| v >= 1 && v as usize <= self.coloring.universe())
    }

    fn descend(&mut self, j: usize) -> bool {
        if j == self.search.ncols {
            return true;
        }
        let finishing = &self.search.finishing[j];
        for xj in 1..=self.search.x_max {
            self.x[j] = xj;
            let saved_color = self.color;
            let mut placed = 0;
            let mut ok = true;
            for &k in finishing {
                let Some(v) = self.value(&self.rows[k]) else {
                    ok = false;
                    break;
                };
                let c = self.coloring.color_of(v).expect("value within universe");
                if self.color.is_some_and(|prev| prev != c) {
                    ok = false;
                    break;
                }
                if self.search.strong {
                    if self.used[v as usize] {
                        ok = false;
                        break;
                    }
                    self.used[v as usize] = true;
                }
                self.color = Some(c);
                self.values[k] = v;
                placed += 1;
            }
            if ok && self.descend(j + 1) {
                return true;
            }
            if self.search.strong {
                for &k in &finishing[..placed] {
                    self.used[self.values[k] as usize] = false;
                }
            }
            self.color = saved_color;
        }
        false
    }
}

/// First witness for `a` under `c` in lexicographic `x` order, if any.
///
/// With `strong`, image entries of distinct rows must also be distinct.
pub fn find_witness(a: &FinMatrix, c: &Coloring, x_max: u64, strong: bool) -> Option<Witness> {
    WitnessSearch::new(a, x_max, strong).find(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{schur, vdw};
    use crate::rational::Rational;

    #[test]
    fn everything_monochromatic() {
        let c = Coloring::constant(3, 1, 0).unwrap();
        let w = find_witness(&schur(), &c, 2, false).unwrap();
        assert_eq!(w, Witness { x: vec![1, 1], image: vec![1, 1, 2], color: 0 });
    }

    #[test]
    fn sum_free_partition_escapes() {
        // {1,4} and {2,3}
        let c = Coloring::new(2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(find_witness(&schur(), &c, 4, false), None);
    }

    #[test]
    fn alternating_coloring_has_odd_progression() {
        let c = Coloring::new(2, (0..9).map(|i| i % 2).collect()).unwrap();
        let w = find_witness(&vdw(3).unwrap(), &c, 9, false).unwrap();
        assert_eq!(w, Witness { x: vec![1, 2], image: vec![1, 3, 5], color: 0 });
    }

    #[test]
    fn strong_witness_avoids_repeats() {
        let c = Coloring::constant(6, 1, 0).unwrap();
        let w = find_witness(&schur(), &c, 6, true).unwrap();
        assert_eq!(w, Witness { x: vec![1, 2], image: vec![1, 2, 3], color: 0 });
    }

    #[test]
    fn duplicate_rows_do_not_block_strong_witnesses() {
        let a = FinMatrix::from_i64(&[[1, 0], [1, 0], [0, 1]]);
        let c = Coloring::constant(4, 1, 0).unwrap();
        let w = find_witness(&a, &c, 4, true).unwrap();
        assert_eq!(w.x, vec![1, 2]);
        assert_eq!(w.image, vec![1, 1, 2]);
    }

    #[test]
    fn rational_entries_need_integral_images() {
        let half = Rational::new(1, 2).unwrap();
        let a = FinMatrix::new(1, vec![SparseRow::new(vec![(0, half)]).unwrap()]).unwrap();
        let c = Coloring::constant(3, 1, 0).unwrap();
        let w = find_witness(&a, &c, 5, false).unwrap();
        assert_eq!(w.x, vec![2]);
        assert_eq!(w.image, vec![1]);
    }

    #[test]
    fn zero_row_never_has_witness() {
        let a = FinMatrix::from_i64(&[[1, 0], [0, 0]]);
        let c = Coloring::constant(3, 1, 0).unwrap();
        assert_eq!(find_witness(&a, &c, 3, false), None);
    }

    #[test]
    fn negative_entries_and_big_coefficients() {
        let a = FinMatrix::from_i64(&[[2, -1]]);
        let c = Coloring::new(2, vec![1, 0, 0]).unwrap();
        let w = find_witness(&a, &c, 3, false).unwrap();
        // 2·1 − 1 = 1 has color 1; lexicographically first x with color... any single row is mono
        assert_eq!(w.x, vec![1, 1]);

        let huge: Rational = "100000000000000000000000".parse().unwrap();
        let a =
            FinMatrix::new(2, vec![SparseRow::new(vec![(0, huge.clone()), (1, -huge)]).unwrap()])
                .unwrap();
        let c = Coloring::constant(2, 1, 0).unwrap();
        assert_eq!(find_witness(&a, &c, 3, false), None);
    }
}
