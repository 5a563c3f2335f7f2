//! Exact computation on one-dimensional cut-and-project point sets and the
//! graded Lie algebras whose generators are indexed by them.
//!
//! Everything is built on [`qring::RingElement`], an exact element of
//! `Z[α]` with arbitrary-precision coefficients. Membership, ordering and
//! floors are decided by integer arithmetic only.

pub mod error;
pub mod free;
pub mod liealg;
mod linalg;
pub mod modelset;
pub mod qring;
pub mod verify;
pub mod virasoro;
pub mod window;

pub use error::{Error, Result};
pub use free::FreeElement;
pub use liealg::{Generator, Mode};
pub use modelset::{chain_point, fibonacci_point, Parity, ParityVariant, PointSetSpec};
pub use qring::{RingElement, RingSpec};
pub use window::{Boundary, Window};
