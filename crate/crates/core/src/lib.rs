//! Exact arithmetic and certificates for Köthe sequence algebras with the
//! min-product `e_i e_j = e_min(i,j)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`seq`]: finitely supported rational sequences, the min-product,
//!   unitization and the functionals `w` (total mass) and `ℓ` (leading index).
//! - [`weights`]: weight sequences, Köthe sets and weighted ℓ¹ seminorms.
//! - [`cex`]: the diagonal enumeration and the weight family `p^(k)` of the
//!   counterexample algebra.
//! - [`certify`]: checking and constructing approximate-identity witnesses.
//! - [`lp`]: exact minimax linear programs that bound from below the norms of
//!   any sequence satisfying the b.a.i. necessary condition.
//! - [`bv0`]: the isomorphism onto `bv₀` given by suffix sums.
//! - [`cli`]: the command-line front end.
//!
//! Every quantity is an exact rational; nothing in the algebra path touches
//! floating point.

pub mod bv0;
pub mod certify;
pub mod cex;
pub mod cli;
pub mod error;
pub mod lp;
pub mod rational;
pub mod seq;
mod simplex;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Q;
pub use seq::{FinSeq, UnitalElement};
pub use weights::{KotheSet, Weight};
