pub mod affine;
pub mod algebra;
pub mod cli;
pub mod error;
pub mod kl;
pub mod rootsys;
pub mod sigchar;
pub mod signs;
pub mod skl;
pub mod sweep;
pub mod weyl;

pub use algebra::{IntPolynomial, TruncatedCharacter};
pub use error::{Error, Result};
pub use rootsys::{CartanType, LatticeVector, Rational, RootSystem, Weight};
pub use weyl::{CoxeterGroup, ElemId, IntegralData};
