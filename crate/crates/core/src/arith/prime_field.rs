use super::{Field, Ring};

/// The residue field `F_p`, elements stored as `u64` in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime and below `2^32`.
    pub fn new(p: u64) -> Self {
        assert!(super::is_prime(p), "{p} is not prime");
        assert!(p < (1 << 32), "prime too large for the residue backend");
        PrimeField { p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// All field elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat
        let mut base = *a;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7, 101] {
            let f = PrimeField::new(p);
            for a in 1..p {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            assert_eq!(f.inv(&0), None);
        }
    }
}
