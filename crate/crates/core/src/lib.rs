//! Linear algebra over finite commutative chain rings and convolutional
//! codes with maximum distance profile.
//!
//! A chain ring `R` has a maximal ideal `(gamma)` with nilpotency index
//! `nu`, residue field `F_q`, and a Teichmüller-style set `T` of residue
//! representatives. Codes are spanned by gamma-linear combinations, i.e.
//! coefficients drawn from `T`.

pub mod block;
pub mod construct;
pub mod conv;
pub mod error;
pub mod format;
mod fpoly;
pub mod gamma;
pub mod matrix;
pub mod registry;
pub mod ring;

pub use block::BlockCode;
pub use construct::{RowConvention, SearchStrategy, ToeplitzSpec};
pub use conv::{ConvCode, DistanceBounds, DistanceProfile, MdpMethod, PolyMatrix};
pub use error::{Error, Result};
pub use gamma::{BlockParameters, IndependenceMethod, NuShape, DEFAULT_BUDGET};
pub use matrix::RingMatrix;
pub use ring::{ChainRing, ChainRingSpec, Convention, Elem};
