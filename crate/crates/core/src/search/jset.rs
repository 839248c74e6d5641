use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::IprError;

/// A bounded instance of the J-set condition: find `a` and a nonempty
/// `H ⊆ [1..T]` with `a + Σ_{t∈H} f(t)` in the target set for every `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsetQuery {
    target: BTreeSet<i64>,
    /// `sequences[s][t - 1]` is `f_s(t)`.
    sequences: Vec<Vec<i64>>,
    len: usize,
    a_max: u64,
    h_card_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsetHit {
    pub a: u64,
    /// 1-based indices, increasing.
    pub h: Vec<usize>,
}

impl JsetQuery {
    pub fn new(
        target: impl IntoIterator<Item = i64>,
        sequences: Vec<Vec<i64>>,
        a_max: u64,
        h_card_max: usize,
    ) -> Result<Self, IprError> {
        let target: BTreeSet<i64> = target.into_iter().collect();
        if let Some(v) = target.iter().find(|&&v| v < 1) {
            return Err(IprError::InvalidArgument(format!("target member {v} is not positive")));
        }
        if a_max < 1 || h_card_max < 1 {
            return Err(IprError::InvalidArgument("a_max and h_card_max must be >= 1".into()));
        }
        let len = sequences.first().map_or(h_card_max, Vec::len);
        if let Some(s) = sequences.iter().find(|s| s.len() != len) {
            return Err(IprError::DimensionMismatch { expected: len, got: s.len() });
        }
        if len < h_card_max {
            return Err(IprError::InvalidArgument(format!(
                "sequences have length {len}, shorter than h_card_max = {h_card_max}"
            )));
        }
        Ok(JsetQuery { target, sequences, len, a_max, h_card_max })
    }

    pub fn seq_len(&self) -> usize {
        self.len
    }

    fn hits(&self, a: u64, h: &[usize]) -> bool {
        self.sequences.iter().all(|f| {
            let s: i128 = a as i128 + h.iter().map(|&t| f[t - 1] as i128).sum::<i128>();
            i64::try_from(s).is_ok_and(|s| self.target.contains(&s))
        })
    }
}

/// The least `(a, H)` in the order `(a, |H|, H lexicographic)`.
pub fn jset_find(q: &JsetQuery) -> Option<JsetHit> {
    for a in 1..=q.a_max {
        for k in 1..=q.h_card_max {
            let mut h: Vec<usize> = (1..=k).collect();
            loop {
                if q.hits(a, &h) {
                    return Some(JsetHit { a, h });
                }
                if !next_combination(&mut h, q.len) {
                    break;
                }
            }
        }
    }
    None
}

/// Next `k`-subset of `[1..n]` in lexicographic order.
fn next_combination(h: &mut [usize], n: usize) -> bool {
    let k = h.len();
    for i in (0..k).rev() {
        if h[i] < n - (k - 1 - i) {
            h[i] += 1;
            for m in i + 1..k {
                h[m] = h[m - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_target() {
        let q = JsetQuery::new(1..=10, vec![vec![1; 4]], 1, 2).unwrap();
        assert_eq!(jset_find(&q), Some(JsetHit { a: 1, h: vec![1] }));
    }

    #[test]
    fn even_target_identity_sequence() {
        let evens = (1..=20).filter(|v| v % 2 == 0);
        let q = JsetQuery::new(evens, vec![(1..=6).collect()], 5, 3).unwrap();
        assert_eq!(jset_find(&q), Some(JsetHit { a: 1, h: vec![1] }));
    }

    #[test]
    fn impossible_target() {
        let q = JsetQuery::new([1], vec![vec![1; 5]], 10, 3).unwrap();
        assert_eq!(jset_find(&q), None);
    }

    #[test]
    fn needs_larger_h() {
        // a = 1 needs two terms: 1 + 2 + 3
        let q = JsetQuery::new([6], vec![vec![2, 3, 3]], 3, 2).unwrap();
        assert_eq!(jset_find(&q), Some(JsetHit { a: 1, h: vec![1, 2] }));
    }

    #[test]
    fn combinations_in_order() {
        let mut h = vec![1, 2];
        let mut all = vec![h.clone()];
        while next_combination(&mut h, 4) {
            all.push(h.clone());
        }
        assert_eq!(
            all,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn validation() {
        assert!(JsetQuery::new([1], vec![vec![1, 2], vec![1]], 1, 1).is_err());
        assert!(JsetQuery::new([1], vec![vec![1]], 1, 2).is_err());
        assert!(JsetQuery::new([0], vec![vec![1]], 1, 1).is_err());
        assert!(JsetQuery::new([1], vec![vec![1]], 0, 1).is_err());
    }
}
