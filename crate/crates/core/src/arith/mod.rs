//! Exact scalar and matrix arithmetic.
//!
//! Scalars are manipulated through ring *contexts*: a context value owns the
//! runtime parameters (the prime, the chain-ring level) and the element type
//! stays a plain number. All linear algebra in this module is written once
//! against the [`Ring`], [`Field`] and [`ValuationRing`] traits and then
//! instantiated over `Q` (as the field `K` or the valuation ring `O`), `F_p`
//! and `Z/p^m`.

mod chain;
mod elimination;
mod linalg;
mod matrix;
mod prime_field;
mod rational;

pub use chain::ChainRing;
pub use elimination::{
    chain_inverse, echelon_dvr, left_kernel, smith, smith_chain, solve_left, Echelon, SmithForm, Submodule,
};
pub use linalg::{determinant, inverse, rank, rref, solve_row, Subspace};
pub use matrix::Mat;
pub use prime_field::PrimeField;
pub use rational::{format_rational, parse_rational, Dvr, RationalField, Rationals};

use std::cmp::Ordering;
use std::fmt;

/// A commutative ring with identity, given as a context object.
pub trait Ring {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// `a + b * c`, the elimination workhorse.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(b, c))
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// A ring whose elements carry a discrete valuation such that `a | b`
/// whenever `v(a) <= v(b)`: the DVR `Z_(p)` and its quotients `Z/p^m`.
pub trait ValuationRing: Ring {
    fn valuation(&self, a: &Self::Elem) -> Valuation;

    /// Some `c` with `c * a == b`. Requires `a != 0` and `v(a) <= v(b)`.
    fn quotient(&self, b: &Self::Elem, a: &Self::Elem) -> Self::Elem;
}

/// A valuation value; `Infinity` is the valuation of zero and sorts above
/// every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// Clamp into `[0, cap]`, mapping infinity to `cap`. Used to read
    /// exponents over `Z/p^cap`.
    pub fn capped(self, cap: u32) -> u32 {
        match self {
            Valuation::Finite(v) => v.clamp(0, cap as i64) as u32,
            Valuation::Infinity => cap,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// `p`-adic valuation of a nonzero integer.
pub(crate) fn int_valuation(n: &num_bigint::BigInt, p: u64) -> i64 {
    use num_integer::Integer;
    use num_traits::Zero;
    debug_assert!(!n.is_zero());
    let p = num_bigint::BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
