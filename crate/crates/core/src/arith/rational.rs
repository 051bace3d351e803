use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::{int_valuation, ChainRing, Field, Ring, Valuation, ValuationRing};
use crate::error::{Error, Result};

/// The field of fractions over any `num-traits` integer type.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField<T>(PhantomData<T>);

/// Exact rationals over arbitrary-precision integers: the field `K = Q`.
pub type Rationals = RationalField<BigInt>;

impl<T> RationalField<T> {
    pub const fn new() -> Self {
        RationalField(PhantomData)
    }
}

impl<T> Ring for RationalField<T>
where
    T: Clone + Integer + Signed + FromPrimitive + std::fmt::Debug,
{
    type Elem = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }
    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }
    fn from_int(&self, n: i64) -> Ratio<T> {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range"))
    }
    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a.clone() + b.clone()
    }
    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }
    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a.clone() * b.clone()
    }
    fn sub(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a.clone() - b.clone()
    }
    fn is_zero(&self, a: &Ratio<T>) -> bool {
        a.is_zero()
    }
}

impl<T> Field for RationalField<T>
where
    T: Clone + Integer + Signed + FromPrimitive + std::fmt::Debug,
{
    fn inv(&self, a: &Ratio<T>) -> Option<Ratio<T>> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// The discrete valuation ring `O = Z_(p)` inside `K = Q`.
///
/// Elements are plain [`BigRational`]s; membership in `O` is a valuation
/// condition. As a [`ValuationRing`] context it is used for elimination over
/// `O`, where every pivot is chosen with minimal valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dvr {
    p: u64,
}

impl Dvr {
    pub fn new(p: u64) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Dvr { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `v_p(x)`; zero has infinite valuation.
    pub fn valuation(&self, x: &BigRational) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinity;
        }
        Valuation::Finite(int_valuation(x.numer(), self.p) - int_valuation(x.denom(), self.p))
    }

    pub fn in_ring(&self, x: &BigRational) -> bool {
        self.valuation(x) >= Valuation::Finite(0)
    }

    pub fn in_max_ideal(&self, x: &BigRational) -> bool {
        self.valuation(x) >= Valuation::Finite(1)
    }

    pub fn prime_power(&self, m: u32) -> BigRational {
        BigRational::from_integer(BigInt::from(self.p).pow(m))
    }

    /// The ring map `O -> Z/p^m`.
    pub fn reduce_mod(&self, x: &BigRational, m: u32) -> Result<BigInt> {
        if !self.in_ring(x) {
            return Err(Error::NegativeValuation(format_rational(x)));
        }
        let chain = ChainRing::new(self.p, m);
        let den_inv = chain
            .unit_inverse(&chain.reduce(x.denom()))
            .expect("denominator is prime to p");
        Ok(chain.mul(&chain.reduce(x.numer()), &den_inv))
    }

    /// Reduce a whole matrix with entries in `O`.
    pub fn reduce_mat(&self, a: &super::Mat<BigRational>, m: u32) -> Result<super::Mat<BigInt>> {
        let rows: Result<Vec<Vec<BigInt>>> = a
            .rows()
            .map(|r| r.iter().map(|x| self.reduce_mod(x, m)).collect())
            .collect();
        Ok(super::Mat::from_rows(a.ncols(), rows?))
    }

    /// Reduction to the residue field as `u64` values.
    pub fn reduce_residue(&self, a: &super::Mat<BigRational>) -> Result<super::Mat<u64>> {
        let z = self.reduce_mat(a, 1)?;
        Ok(z.map(|x| u64::try_from(x).expect("residue fits in u64")))
    }
}

impl Ring for Dvr {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl ValuationRing for Dvr {
    fn valuation(&self, a: &BigRational) -> Valuation {
        Dvr::valuation(self, a)
    }

    fn quotient(&self, b: &BigRational, a: &BigRational) -> BigRational {
        b / a
    }
}

/// Parses `"a/b"` or `"a"`. The sign may only sit on the numerator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let is_int = |x: &str, allow_sign: bool| {
        let digits = if allow_sign { x.strip_prefix('-').unwrap_or(x) } else { x };
        !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
    };
    if !is_int(num, true) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) if is_int(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical `"a/b"` (or `"a"` when `b = 1`) form.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let d2 = Dvr::new(2).unwrap();
        let d3 = Dvr::new(3).unwrap();
        assert_eq!(d2.valuation(&q("0")), Valuation::Infinity);
        assert_eq!(d2.valuation(&q("12/5")), Valuation::Finite(2));
        assert_eq!(d3.valuation(&q("5/9")), Valuation::Finite(-2));
        assert!(d2.in_ring(&q("1/3")));
        assert!(!d2.in_max_ideal(&q("1/3")));
        assert!(d2.in_max_ideal(&q("-6/7")));
    }

    #[test]
    fn reduce_mod_examples() {
        let d2 = Dvr::new(2).unwrap();
        assert_eq!(d2.reduce_mod(&q("1/3"), 1).unwrap(), BigInt::from(1));
        assert_eq!(d2.reduce_mod(&q("1/3"), 3).unwrap(), BigInt::from(3));
        assert_eq!(d2.reduce_mod(&q("0"), 5).unwrap(), BigInt::from(0));
        assert_eq!(d2.reduce_mod(&q("-1"), 3).unwrap(), BigInt::from(7));
        assert!(matches!(d2.reduce_mod(&q("1/2"), 1), Err(Error::NegativeValuation(_))));
    }

    #[test]
    fn rejects_composite_prime() {
        assert!(matches!(Dvr::new(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&q("4/6")), "2/3");
        assert_eq!(format_rational(&q("-3/1")), "-3");
        assert_eq!(format_rational(&q(" 7 ")), "7");
        for bad in ["1//2", "", "a", "1/-2", "1/0", "--1", "1/", "/2", "+1"] {
            let err = parse_rational(bad).unwrap_err();
            if bad != "1/0" {
                assert!(err.to_string().contains(&format!("{bad:?}")), "{bad}: {err}");
            }
        }
    }

    #[test]
    fn generic_over_machine_integers() {
        let f = RationalField::<i64>::new();
        let x = f.from_int(3);
        let y = f.inv(&f.from_int(6)).unwrap();
        assert_eq!(f.mul(&x, &y), Ratio::new(1, 2));
    }
}
