//! Desk-scale verification: witnesses, exhaustive coloring checks,
//! certificate re-validation and the bounded J-set checker.

mod jset;
mod recheck;
mod verify;
mod witness;

pub use jset::{jset_find, JsetHit, JsetQuery};
pub use recheck::{recheck_escaping, recheck_verdict, recheck_witness};
pub use verify::{verify_at_scale, Outcome, Verdict, VerifyParams};
pub use witness::{find_witness, Witness, WitnessSearch};
