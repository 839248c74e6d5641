//! Finite colorings of `[1..N]` and their enumeration.
//!
//! A coloring is identified with its counter value: the assignment read as a
//! base-`r` number with the color of `1` as the most significant digit.
//! Enumeration walks counters upward from zero (or from a resume offset).
//! With symmetry breaking only restricted growth strings are produced, i.e.
//! colorings in which colors first appear in the order `0, 1, 2, …`; these are
//! exactly one representative per orbit under permuting the colors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::IprError;
use crate::rational::Rational;

/// Default cap on the number of colorings a single call may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColoringFile")]
pub struct Coloring {
    n: usize,
    r: usize,
    colors: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringFile {
    n: usize,
    r: usize,
    colors: Vec<usize>,
}

impl TryFrom<ColoringFile> for Coloring {
    type Error = IprError;
    fn try_from(f: ColoringFile) -> Result<Self, IprError> {
        Coloring::new(f.r, f.colors).and_then(|c| {
            if c.n == f.n {
                Ok(c)
            } else {
                Err(IprError::DimensionMismatch { expected: f.n, got: c.n })
            }
        })
    }
}

impl Coloring {
    /// `colors[i]` is the color of the integer `i + 1`.
    pub fn new(r: usize, colors: Vec<usize>) -> Result<Self, IprError> {
        if r == 0 {
            return Err(IprError::InvalidArgument("need at least one color".into()));
        }
        if colors.is_empty() {
            return Err(IprError::InvalidArgument("universe must be nonempty".into()));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= r) {
            return Err(IprError::InvalidArgument(format!("color {c} out of range for r = {r}")));
        }
        Ok(Coloring { n: colors.len(), r, colors })
    }

    pub fn constant(n: usize, r: usize, color: usize) -> Result<Self, IprError> {
        Coloring::new(r, vec![color; n])
    }

    /// The coloring with the given counter value.
    pub fn from_counter(n: usize, r: usize, counter: u64) -> Result<Self, IprError> {
        let total = space_size(n, r)?;
        if counter >= total {
            return Err(IprError::InvalidArgument(format!(
                "counter {counter} out of range (r^N = {total})"
            )));
        }
        let mut colors = vec![0; n];
        let mut c = counter;
        for slot in colors.iter_mut().rev() {
            *slot = (c % r as u64) as usize;
            c /= r as u64;
        }
        Coloring::new(r, colors)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.r
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Color of the integer `k`, for `1 ≤ k ≤ N`.
    pub fn color_of(&self, k: u64) -> Option<usize> {
        if k == 0 {
            return None;
        }
        self.colors.get((k - 1) as usize).copied()
    }

    pub fn counter(&self) -> u64 {
        self.colors.iter().fold(0u64, |acc, &c| acc * self.r as u64 + c as u64)
    }

    /// Colors first appear in increasing order.
    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for &c in &self.colors {
            if c > next {
                return false;
            }
            if c == next {
                next += 1;
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serialization cannot fail")
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring(r={}, {:?})", self.r, self.colors)
    }
}

/// `r^N`, or an error if it does not fit in a `u64`.
pub fn space_size(n: usize, r: usize) -> Result<u64, IprError> {
    u32::try_from(n)
        .ok()
        .and_then(|n| (r as u64).checked_pow(n))
        .ok_or_else(|| IprError::InvalidArgument(format!("{r}^{n} colorings overflow a counter")))
}

/// All colorings of `[1..n]` with `r` colors, optionally one per color-permutation orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColoringSpace {
    pub n: usize,
    pub r: usize,
    pub symmetry_break: bool,
}

impl ColoringSpace {
    pub fn new(n: usize, r: usize, symmetry_break: bool) -> Result<Self, IprError> {
        if n == 0 || r == 0 {
            return Err(IprError::InvalidArgument("need N >= 1 and r >= 1".into()));
        }
        space_size(n, r)?;
        Ok(ColoringSpace { n, r, symmetry_break })
    }

    pub fn total_counters(&self) -> u64 {
        space_size(self.n, self.r).expect("checked in new")
    }

    /// Colorings with counter `>= offset`, in counter order.
    pub fn iter_from(&self, offset: u64) -> ColoringIter {
        let space = *self;
        if offset >= self.total_counters() {
            return ColoringIter { space, digits: Vec::new(), done: true };
        }
        let digits =
            Coloring::from_counter(self.n, self.r, offset).expect("offset in range").colors;
        let mut it = ColoringIter { space, digits, done: false };
        if self.symmetry_break {
            it.done = !it.settle_canonical();
        }
        it
    }

    pub fn iter(&self) -> ColoringIter {
        self.iter_from(0)
    }
}

/// Yields `(counter, coloring)` pairs in increasing counter order.
#[derive(Clone, Debug)]
pub struct ColoringIter {
    space: ColoringSpace,
    digits: Vec<usize>,
    done: bool,
}

impl ColoringIter {
    /// Moves `digits` to the smallest restricted growth string not below it.
    /// Returns false if there is none.
    fn settle_canonical(&mut self) -> bool {
        let mut next = 0;
        let mut bad = None;
        for (i, &c) in self.digits.iter().enumerate() {
            if c > next {
                bad = Some(i);
                break;
            }
            if c == next {
                next += 1;
            }
        }
        match bad {
            None => true,
            Some(p) => {
                // nothing extends digits[..p] at or above digits[p]; step past that prefix
                for d in &mut self.digits[p..] {
                    *d = self.space.r - 1;
                }
                self.step_canonical()
            }
        }
    }

    /// Next restricted growth string in lexicographic order.
    fn step_canonical(&mut self) -> bool {
        let r = self.space.r;
        let mut prefix_max = Vec::with_capacity(self.digits.len());
        let mut m: isize = -1;
        for &d in &self.digits {
            prefix_max.push(m);
            m = m.max(d as isize);
        }
        for i in (1..self.digits.len()).rev() {
            let d = self.digits[i];
            if d + 1 < r && (d as isize) <= prefix_max[i] {
                self.digits[i] += 1;
                for x in &mut self.digits[i + 1..] {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }

    fn step_plain(&mut self) -> bool {
        let r = self.space.r;
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < r {
                return true;
            }
            self.digits[i] = 0;
        }
        false
    }
}

impl Iterator for ColoringIter {
    type Item = (u64, Coloring);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let c = Coloring { n: self.space.n, r: self.space.r, colors: self.digits.clone() };
        let item = (c.counter(), c);
        let more =
            if self.space.symmetry_break { self.step_canonical() } else { self.step_plain() };
        self.done = !more;
        Some(item)
    }
}

/// Every coloring of `[1..n]` with `r` colors, refusing spaces with more than
/// `budget` counters.
pub fn enumerate_colorings(
    n: usize,
    r: usize,
    symmetry_break: bool,
    budget: u64,
) -> Result<ColoringIter, IprError> {
    let space = ColoringSpace::new(n, r, symmetry_break)?;
    let total = space.total_counters();
    if total > budget {
        return Err(IprError::BudgetExceeded { needed: total.to_string(), budget });
    }
    Ok(space.iter())
}

/// The shared color of `values` if every value is an integer in `[1..N]` and
/// all of them have the same color. An empty list has no color.
pub fn mono_check(values: &[Rational], c: &Coloring) -> Option<usize> {
    let mut common = None;
    for v in values {
        let k = v.to_i64().filter(|&k| k >= 1)?;
        let color = c.color_of(k as u64)?;
        match common {
            None => common = Some(color),
            Some(prev) if prev != color => return None,
            Some(_) => {}
        }
    }
    common
}
