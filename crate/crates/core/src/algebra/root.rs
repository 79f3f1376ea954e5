use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;

/// A root of unity `exp(2πi · num/den)`, stored as the reduced fraction
/// `num/den` with `0 <= num < den`.
///
/// Multiplication of roots is addition of exponents modulo one, so group
/// elements built from these stay hashable and compare in constant time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { num: 1, den: 2 };

    /// `ζ_den^num`. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero level");
        let d = den as i64;
        let r = num.rem_euclid(d) as u64;
        let g = r.gcd(&den);
        RootOfUnity { num: r / g, den: den / g }
    }

    /// Primitive `n`-th root `ζ_n`.
    pub fn primitive(n: u64) -> Self {
        Self::new(1, n)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn pow(&self, e: i64) -> Self {
        let n = (self.num as i128 * e as i128).rem_euclid(self.den as i128) as i64;
        Self::new(n, self.den)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// The exponent `j` with `self = ζ_level^j`, if `order | level`.
    pub fn exponent_at(&self, level: u64) -> Option<u64> {
        if !level.is_multiple_of(self.den) {
            return None;
        }
        Some(self.num * (level / self.den))
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.num, self.den as u32)
    }
}

impl Default for RootOfUnity {
    fn default() -> Self {
        Self::ONE
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let l = self.den.lcm(&rhs.den);
        let a = self.num * (l / self.den) + rhs.num * (l / rhs.den);
        RootOfUnity::new((a % l) as i64, l)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "i"),
            (3, 4) => write!(f, "-i"),
            (1, d) => write!(f, "ζ{d}"),
            (n, d) => write!(f, "ζ{d}^{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_fraction() {
        let r = RootOfUnity::new(4, 6);
        assert_eq!((r.num(), r.den()), (2, 3));
        assert_eq!(RootOfUnity::new(-1, 3), RootOfUnity::new(2, 3));
        assert_eq!(RootOfUnity::new(6, 6), RootOfUnity::ONE);
    }

    #[test]
    fn order_of_power() {
        // order of ζ_N^j is N / gcd(j, N)
        for n in 1..=12u64 {
            for j in 0..n {
                let r = RootOfUnity::new(j as i64, n);
                assert_eq!(r.order(), n / j.gcd(&n));
            }
        }
    }

    #[test]
    fn mul_adds_exponents() {
        let a = RootOfUnity::new(1, 3);
        let b = RootOfUnity::new(1, 2);
        assert_eq!(a * b, RootOfUnity::new(5, 6));
        assert_eq!(a * a * a, RootOfUnity::ONE);
        assert_eq!(a.inv() * a, RootOfUnity::ONE);
        assert_eq!(a.pow(-2), a);
    }
}
