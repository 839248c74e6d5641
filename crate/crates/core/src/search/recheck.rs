//! Independent re-validation of search results.
//!
//! Nothing here reuses the pruned search: witnesses are re-evaluated with
//! exact rational arithmetic, and escaping colorings are confirmed by a plain
//! scan over every `x ∈ [1..xmax]^q`.

use std::collections::HashMap;

use crate::coloring::{mono_check, Coloring};
use crate::matrix::{FinMatrix, SparseRow};
use crate::rational::Rational;

use super::verify::{Outcome, Verdict};
use super::witness::Witness;

fn distinct_rows_distinct(a: &FinMatrix, image: &[Rational]) -> bool {
    let mut by_value: HashMap<&Rational, &SparseRow> = HashMap::new();
    for (row, v) in a.rows().iter().zip(image) {
        if let Some(prev) = by_value.insert(v, row) {
            if prev != row {
                return false;
            }
        }
    }
    true
}

/// `w` is a witness for `a` under `c`: its image is recomputed and must match,
/// lie in `[1..N]`, and carry `w.color` throughout.
pub fn recheck_witness(
    a: &FinMatrix,
    c: &Coloring,
    w: &Witness,
    x_max: Option<u64>,
    strong: bool,
) -> bool {
    if w.x.len() != a.ncols() || w.image.len() != a.nrows() || a.nrows() == 0 {
        return false;
    }
    if w.x.iter().any(|&x| x == 0 || x_max.is_some_and(|m| x > m)) {
        return false;
    }
    let x: Vec<Rational> = w.x.iter().map(|&v| Rational::from_integer(v)).collect();
    let Ok(image) = a.apply(&x) else {
        return false;
    };
    let claimed: Vec<Rational> = w.image.iter().map(|&v| Rational::from_integer(v)).collect();
    if image != claimed {
        return false;
    }
    if mono_check(&image, c) != Some(w.color) {
        return false;
    }
    !strong || distinct_rows_distinct(a, &image)
}

/// No `x ∈ [1..x_max]^q` gives `a` a monochromatic image under `c`.
pub fn recheck_escaping(a: &FinMatrix, c: &Coloring, x_max: u64, strong: bool) -> bool {
    let q = a.ncols();
    if a.nrows() == 0 || x_max == 0 {
        return true;
    }
    let mut x = vec![1u64; q];
    loop {
        let xr: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v)).collect();
        let image = a.apply(&xr).expect("x has ncols entries");
        if mono_check(&image, c).is_some() && (!strong || distinct_rows_distinct(a, &image)) {
            return false;
        }
        // odometer over [1..x_max]^q
        let mut i = q;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if x[i] < x_max {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

/// Re-validates whatever certificate a verdict carries. A budget-exhausted
/// verdict carries none and is accepted as is.
pub fn recheck_verdict(a: &FinMatrix, v: &Verdict) -> bool {
    let p = &v.params;
    match &v.outcome {
        Outcome::ForcedAtScale { witnesses } => witnesses.iter().all(|(&counter, w)| {
            Coloring::from_counter(p.universe, p.colors, counter)
                .is_ok_and(|c| recheck_witness(a, &c, w, Some(p.xmax), p.strong))
        }),
        Outcome::EscapingColoring { counter, coloring } => {
            coloring.counter() == *counter
                && coloring.universe() == p.universe
                && coloring.num_colors() == p.colors
                && recheck_escaping(a, coloring, p.xmax, p.strong)
        }
        Outcome::BudgetExhausted { .. } => true,
    }
}
