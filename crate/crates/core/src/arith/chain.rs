use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{int_valuation, Ring, Valuation, ValuationRing};

/// The finite chain ring `Z/p^m`. Elements are canonical representatives in
/// `[0, p^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRing {
    p: u64,
    level: u32,
    modulus: BigInt,
}

impl ChainRing {
    pub fn new(p: u64, level: u32) -> Self {
        assert!(level >= 1, "chain ring level must be positive");
        ChainRing { p, level, modulus: BigInt::from(p).pow(level) }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.modulus)
    }

    /// `p^e` as a ring element (zero once `e >= level`).
    pub fn prime_power(&self, e: u32) -> BigInt {
        if e >= self.level {
            BigInt::zero()
        } else {
            BigInt::from(self.p).pow(e)
        }
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        !(a % BigInt::from(self.p)).is_zero()
    }

    pub fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        let g = a.extended_gcd(&self.modulus);
        if g.gcd.is_one() {
            Some(self.reduce(&g.x))
        } else {
            None
        }
    }

    /// Reduction `Z/p^level -> Z/p^lower`.
    pub fn truncate(&self, a: &BigInt, lower: u32) -> BigInt {
        assert!(lower <= self.level);
        a.mod_floor(&BigInt::from(self.p).pow(lower))
    }
}

impl Ring for ChainRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn from_int(&self, n: i64) -> BigInt {
        self.reduce(&BigInt::from(n))
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&-a)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn mul_add(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
        self.reduce(&(a + b * c))
    }
}

impl ValuationRing for ChainRing {
    fn valuation(&self, a: &BigInt) -> Valuation {
        if a.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(int_valuation(a, self.p))
        }
    }

    fn quotient(&self, b: &BigInt, a: &BigInt) -> BigInt {
        let va = self.valuation(a).finite().expect("division by zero in Z/p^m") as u32;
        debug_assert!(self.valuation(b) >= Valuation::Finite(va as i64));
        let pv = BigInt::from(self.p).pow(va);
        let unit = a / &pv;
        let inv = self.unit_inverse(&unit).expect("unit part is invertible");
        self.reduce(&((b / &pv) * inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_inverts_multiplication() {
        let r = ChainRing::new(3, 4);
        for a in 1..81i64 {
            let a = BigInt::from(a);
            let va = r.valuation(&a).finite().unwrap();
            for b in 0..81i64 {
                let b = BigInt::from(b);
                if r.valuation(&b) >= Valuation::Finite(va) {
                    let c = r.quotient(&b, &a);
                    assert_eq!(r.mul(&c, &a), b);
                }
            }
        }
    }

    #[test]
    fn valuation_in_chain_ring() {
        let r = ChainRing::new(2, 3);
        assert_eq!(r.valuation(&BigInt::from(4)), Valuation::Finite(2));
        assert_eq!(r.valuation(&r.from_int(8)), Valuation::Infinity);
        assert_eq!(r.valuation(&r.from_int(-1)), Valuation::Finite(0));
        assert_eq!(r.truncate(&BigInt::from(7), 1), BigInt::from(1));
    }
}
