//! Exact-arithmetic toric topology: complete non-singular fans, their
//! cohomology rings and characteristic classes, and classification searches
//! (fan equivalence, simplicial complex isomorphism, bounded graded-ring
//! isomorphism, Pontrjagin-class preservation, characteristic functions).
//!
//! All arithmetic is over arbitrary-precision integers; there is no floating
//! point anywhere in the crate.

pub mod cohomology;
pub mod error;
pub mod fan;
pub mod isosearch;
pub mod quasitoric;
pub mod simplicial;
pub mod zlattice;

pub use error::{Error, Result};
// re-exports filled in as modules land
pub use zlattice::{IntMatrix, IntVector, SmithDecomposition};
