//! Maximal subsets under properties of finite character, closure operators
//! (deterministic and nondeterministic) with maximal closed extensions, and
//! maximal-ideal extension in finite join-semilattices and posets — each
//! construction paired with a brute-force oracle that re-checks its output.

mod bitset;

pub mod closure;
pub mod error;
pub mod fcp;
pub mod finset;
pub mod formula;
pub mod ndclosure;
pub mod oracle;
pub mod orders;

pub use error::{Error, Result};
pub use finset::{FinSet, Universe};
