//! Exact-arithmetic analysis of convolutional codes over Z_{p^r}.
//!
//! The crate computes the gcd-of-minors invariants of polynomial generator
//! matrices over F_p and Z_{p^r}, decides catastrophicity, produces
//! catastrophic input witnesses, and constructively synthesizes minimal
//! p-encoders for free and general codes. All arithmetic is exact; every
//! transformation is tracked and replayable.

pub mod error;
pub mod ring;
pub mod poly;
pub mod factor;
pub mod rational;
pub mod laurent;
pub mod textio;
pub mod linalg;
pub mod matrix;
pub mod pbasis;
pub mod field_encoder;
pub mod ring_encoder;

pub use error::{Error, Result};
pub use ring::{ExtElem, ExtField, RingCtx};
pub use poly::Poly;
pub use rational::RationalFn;
pub use laurent::{LaurentWindow, WeightClass};
pub use matrix::{PolyMatrix, RatMatrix, TransformLog};
