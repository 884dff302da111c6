//! Array erasure codes over the ring `F2[x]/(1 + x^p)`: encoding, erasure
//! decoding by a sparse LU factorization of Vandermonde matrices, exact XOR
//! accounting, and a shard file format.

pub mod cli;
pub mod codes;
pub mod costmodel;
pub mod decoder;
pub mod error;
pub mod gf2x;
pub mod ring;
pub mod selftest;
pub mod shardio;
pub mod vandermonde;

pub use codes::{CodeParams, CodewordArray, AugmentedArray, Family};
pub use decoder::{DecodePlan, Decoder, ErasureSpec};
pub use error::{Error, ParamError, Result};
pub use ring::{DivisionForm, QuotientPoly, RingPoly, XorTally};
pub use vandermonde::{
    build_vandermonde, lu_factors, solve_cramer, solve_lu, vandermonde_matrix, CramerSystem, ExponentTuple,
    LuFactors, RingMatrix,
};
