use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::coloring::{Coloring, ColoringSpace, DEFAULT_BUDGET};
use crate::error::IprError;
use crate::matrix::FinMatrix;

use super::witness::{Witness, WitnessSearch};

const CHUNK: usize = 2048;

/// Bounds and execution settings for [`verify_at_scale`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub colors: usize,
    pub universe: usize,
    pub xmax: u64,
    pub strong: bool,
    /// Counter to start from; 0 for a fresh run.
    pub resume_offset: u64,
    /// Most colorings examined by this call.
    pub budget: u64,
    #[serde(skip)]
    pub threads: usize,
    /// How many leading colorings keep their witness in a forced verdict.
    #[serde(skip)]
    pub witness_samples: usize,
}

impl VerifyParams {
    pub fn new(colors: usize, universe: usize, xmax: u64) -> Self {
        VerifyParams {
            colors,
            universe,
            xmax,
            strong: false,
            resume_offset: 0,
            budget: DEFAULT_BUDGET,
            threads: 1,
            witness_samples: 4,
        }
    }

    pub fn strong(mut self, strong: bool) -> Self {
        self.strong = strong;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn resume_from(mut self, offset: u64) -> Self {
        self.resume_offset = offset;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    /// Every canonical coloring from the resume offset on has a witness.
    ForcedAtScale {
        /// counter -> witness, for the first few colorings
        #[serde(deserialize_with = "counter_keys")]
        witnesses: BTreeMap<u64, Witness>,
    },
    /// No `x ∈ [1..xmax]^q` maps into `[1..N]` monochromatically under this
    /// coloring. This is a statement about the bounds only.
    EscapingColoring { counter: u64, coloring: Coloring },
    /// The budget ran out; continue with `--resume` at `resume_offset`.
    BudgetExhausted { resume_offset: u64 },
}

// Tagged and flattened content reaches us with string map keys.
fn counter_keys<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, Witness>, D::Error> {
    BTreeMap::<String, Witness>::deserialize(d)?
        .into_iter()
        .map(|(k, w)| k.parse().map(|k| (k, w)).map_err(D::Error::custom))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub params: VerifyParams,
    /// Canonical colorings examined by this call, up to and including an escaping one.
    pub checked: u64,
}

impl Verdict {
    pub fn is_forced(&self) -> bool {
        matches!(self.outcome, Outcome::ForcedAtScale { .. })
    }

    pub fn escaping(&self) -> Option<&Coloring> {
        match &self.outcome {
            Outcome::EscapingColoring { coloring, .. } => Some(coloring),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serialization cannot fail")
    }
}

/// Checks every canonical `r`-coloring of `[1..N]` for a witness with
/// `x ∈ [1..xmax]^q`.
///
/// Colorings are visited in counter order; with several threads each chunk
/// of that order is searched in parallel and the first failure in order is
/// kept, so the verdict does not depend on the thread count.
pub fn verify_at_scale(a: &FinMatrix, params: &VerifyParams) -> Result<Verdict, IprError> {
    if params.xmax == 0 {
        return Err(IprError::InvalidArgument("xmax must be at least 1".into()));
    }
    if params.budget == 0 {
        return Err(IprError::InvalidArgument("budget must be at least 1".into()));
    }
    let space = ColoringSpace::new(params.universe, params.colors, true)?;
    let search = WitnessSearch::new(a, params.xmax, params.strong);
    let pool = if params.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(params.threads)
                .build()
                .map_err(|e| IprError::InvalidArgument(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut colorings = space.iter_from(params.resume_offset).peekable();
    let mut checked = 0u64;
    let mut witnesses = BTreeMap::new();
    let verdict = |outcome, checked| Verdict { outcome, params: params.clone(), checked };

    while checked < params.budget && witnesses.len() < params.witness_samples {
        let Some((counter, c)) = colorings.next() else {
            return Ok(verdict(Outcome::ForcedAtScale { witnesses }, checked));
        };
        checked += 1;
        match search.find(&c) {
            Some(w) => {
                witnesses.insert(counter, w);
            }
            None => {
                return Ok(verdict(Outcome::EscapingColoring { counter, coloring: c }, checked));
            }
        }
    }

    loop {
        let room = (params.budget - checked).min(CHUNK as u64) as usize;
        let chunk: Vec<(u64, Coloring)> = colorings.by_ref().take(room).collect();
        if chunk.is_empty() {
            break;
        }
        let failed = match &pool {
            Some(pool) => {
                pool.install(|| chunk.par_iter().position_first(|(_, c)| search.find(c).is_none()))
            }
            None => chunk.iter().position(|(_, c)| search.find(c).is_none()),
        };
        if let Some(i) = failed {
            let (counter, coloring) = chunk.into_iter().nth(i).expect("index from position");
            return Ok(verdict(
                Outcome::EscapingColoring { counter, coloring },
                checked + i as u64 + 1,
            ));
        }
        checked += chunk.len() as u64;
        if checked >= params.budget {
            break;
        }
    }

    match colorings.peek() {
        Some((next, _)) => Ok(verdict(Outcome::BudgetExhausted { resume_offset: *next }, checked)),
        None => Ok(verdict(Outcome::ForcedAtScale { witnesses }, checked)),
    }
}
