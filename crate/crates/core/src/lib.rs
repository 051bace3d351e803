//! Semistable reduction of multi-filtered vector spaces.
//!
//! Given a semistable multi-filtered vector space over `Q` and a prime `p`,
//! this crate finds a `Z_(p)`-lattice whose reduction modulo `p`, with the
//! induced filtrations, is again semistable. The search repeatedly takes the
//! maximal destabilizing subspace of the current reduction, lifts it modulo
//! the largest possible power `p^m`, and replaces the lattice by the kernel
//! of `M -> (M / p^m M) / B`. Each modification is recorded in a
//! [`LangtonTrace`](langton::LangtonTrace) that [`langton::verify_trace`] can
//! re-check from scratch.
//!
//! All arithmetic is exact. The linear algebra is generic over the scalar
//! ring (see [`arith`]); the aliases below fix the concrete scalar types.

pub mod arith;
pub mod error;
pub mod filtration;
pub mod flags;
pub mod gen;
pub mod langton;
pub mod lattice;

pub use error::{Error, Result};

/// An element of `K = Q` (and of `O = Z_(p)` when its valuation is `>= 0`).
pub type ValuedScalar = num_rational::BigRational;
/// An element of the residue field `F_p`, as a representative in `[0, p)`.
pub type ResidueScalar = u64;
/// An element of `Z/p^m`, as a representative in `[0, p^m)`.
pub type ChainScalar = num_bigint::BigInt;

pub type QMat = arith::Mat<ValuedScalar>;
pub type FpMat = arith::Mat<ResidueScalar>;
pub type ChainMat = arith::Mat<ChainScalar>;

/// A subspace of `K^n`.
pub type KSubspace = arith::Subspace<ValuedScalar>;
/// A subspace of `F_p^n`.
pub type SubspaceF = arith::Subspace<ResidueScalar>;
