//! Exact lattice, discriminant-form and graph computations for line
//! configurations on polarized K3 surfaces and their real structures.
//!
//! Sign conventions: the root lattices `A_n`, `D_n`, `E_n` are **negative
//! definite** (`A2 = [[-2, 1], [1, -2]]`), lines have square −2 and meet the
//! polarization `h` with multiplicity 1.

pub mod criteria;
pub mod error;
pub mod fano;
pub mod fqf;
pub mod lattice;
pub mod linalg;

pub use error::{Error, Result};
