//! Spans, bispans and distributivity diagrams over finite sets and finite
//! G-sets, with semiring evaluation and Tambara functors.

pub mod context;
pub mod degree;
pub mod error;
pub mod finset;
pub mod gset;
pub mod span;
pub mod bispan;
pub mod checks;
pub mod eval;
pub mod random;
pub mod tambara;

pub use error::{Error, Result};
