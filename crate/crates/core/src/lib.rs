//! Emptiness of affine Deligne-Lusztig varieties `X_w(1)` in the affine flag
//! variety, decided combinatorially through partial conjugation, K-stable
//! pieces and G-stable pieces of the wonderful compactification.

pub mod adlv;
pub mod afweyl;
pub mod conj;
pub mod error;
pub mod geom;
pub mod oracle;
pub mod pieces;
pub mod rootsys;
pub mod weyl;

pub use afweyl::{AffineElt, AffineWeylGroup, Letter, NormalForm};
pub use error::{Error, Result};
pub use rootsys::{CartanType, Coweight, NodeSet, RootSystem};
pub use weyl::{WeylElt, WeylGroup};
