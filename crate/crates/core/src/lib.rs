//! Exact computation of D0-D6 BPS and Donaldson-Thomas invariants through
//! ordered-product factorization in the tropical vertex group.

pub mod combinat;
pub mod dtcore;
pub mod error;
pub mod gwbridge;
pub mod joycesong;
pub mod liealg;
pub mod numbertheory;
pub mod ring;
pub mod sampling;
pub mod series;
pub mod vertex;

pub use error::{Error, Result};
