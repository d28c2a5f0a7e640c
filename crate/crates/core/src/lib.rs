//! Hilbert-space model of word occurrence and co-occurrence over a corpus.
//!
//! Pages are basis vectors, concepts are states, words are projectors. From
//! presence counts of three words A, B and X the crate computes
//!
//! * the individual probabilities `μ(A) = n_ax/n_a`, `μ(B) = n_bx/n_b`,
//! * the interval of `μ(AB)` reachable through interference alone
//!   ([`interference`]),
//! * a context-plus-interference parameter set reproducing any observed
//!   `μ(AB)` ([`context`]).
//!
//! [`hilbert`] holds the explicit vector machinery every aggregate formula is
//! tested against.
//!
//! ```
//! use qweb::corpus::CountTable;
//! use qweb::interference::{fits_interference_only, interference_interval};
//!
//! let table = CountTable::new(378_000_000, 357_000_000, 115_000_000,
//!                             62_748_000, 84_252_000, 31_165_000)?;
//! let interval = interference_interval(&table)?;
//! assert!(interval.lo.value() < 0.271 && 0.271 < interval.hi.value());
//! assert!(fits_interference_only(&table)?);
//! # Ok::<(), qweb::Error>(())
//! ```

pub mod analysis;
pub mod context;
pub mod corpus;
mod error;
pub mod hilbert;
pub mod interference;

pub use error::{Error, Result};
pub use hilbert::Probability;
pub use num_complex::Complex64;
