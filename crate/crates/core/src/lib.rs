//! Cyclic representations of the quantized `gl2` at odd roots of unity and
//! the holonomy R-matrices they carry.
//!
//! The crate builds, for an odd degree `ℓ`:
//!
//! - the `ℓ`-dimensional cyclic irreducible representations and their
//!   Frobenius-center characters ([`rep`]);
//! - the birational braiding map on pairs of characters and its matrix
//!   factorization route ([`glstar`]);
//! - the holonomy R-matrix of a pair of generic representations, both as the
//!   nullspace of a brute-force intertwining system and in closed form
//!   ([`intertwiner`]);
//! - the holonomy Yang–Baxter check on triples ([`hybe`]);
//! - the q-series and Φ-function machinery the closed form relies on
//!   ([`scalars`]);
//! - a seeded, reproducible verification suite with JSON reports ([`report`]).
//!
//! Every identity is checked numerically in double precision; see the
//! `examples/` directory for one runnable program per capability.

pub mod error;
pub mod glstar;
pub mod hybe;
pub mod intertwiner;
pub mod linalg;
pub mod report;
pub mod rep;
pub mod scalars;

pub use error::{Error, Result};
pub use glstar::{GL2Matrix, Z0Char};
pub use intertwiner::{ChiData, Intertwiner};
pub use linalg::{CMat, C64};
pub use rep::{ClockShift, RepMatrices, RepParams};
pub use scalars::{RootContext, Series};
