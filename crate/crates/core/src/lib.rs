//! Distance-one structure of the affine buildings of `SL_n` and `Sp_n`
//! over `F_q((t))`, computed by exact enumeration.

pub mod error;
pub mod gfq;
pub mod lattice;
pub mod sl;
pub mod sp;
pub mod spherical;

pub use error::{Error, Result};
