//! Numerics for generalized XX0 spin chains: partition and correlation
//! functions through Selberg-type closed forms, Toeplitz determinants and
//! Fredholm determinants, together with Tracy-Widom statistics, free
//! energies and a non-intersecting random-walk sampler.

pub mod acceptance;
pub mod error;
pub mod fredholm;
pub mod linalg;
pub mod nibm;
pub mod phase;
pub mod potential;
pub mod quadrature;
pub mod selberg;
pub mod special;
pub mod symfun;
pub mod toeplitz;
pub mod tracy_widom;
pub mod value;

pub use error::{Error, Result};
pub use symfun::Partition;
pub use value::LogValue;
