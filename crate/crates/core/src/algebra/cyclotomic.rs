//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element of level `N` is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}`,
//! i.e. as a rational polynomial reduced modulo the `N`-th cyclotomic
//! polynomial `Φ_N`. This form is canonical for a fixed level. Elements of
//! different levels are lifted to the least common multiple of their levels
//! before they are combined or compared.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<[i64]>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first. Monic with integer coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Arc<[i64]> {
    assert!(n > 0);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_div(&num, &div);
        }
    }
    let p: Arc<[i64]> = num.into();
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient, which is the degree of `Φ_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// An exact element of the cyclotomic field `Q(ζ_level)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { level: 1, coeffs: vec![q] }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `ζ_level^j`.
    pub fn root_of_unity(j: u64, level: u32) -> Self {
        assert!(level > 0);
        let mut raw = vec![BigRational::zero(); (j % level as u64) as usize + 1];
        *raw.last_mut().unwrap() = BigRational::one();
        Self::from_raw(level, raw)
    }

    /// Build from an arbitrary polynomial in `ζ_level`, lowest degree first.
    pub fn from_raw(level: u32, mut raw: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(level);
        let deg = phi.len() - 1;
        for i in (deg..raw.len()).rev() {
            let c = std::mem::take(&mut raw[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    raw[i - deg + j] -= &c * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        Cyclotomic { level, coeffs: raw }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coefficients at the stored level.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-express at a level that is a multiple of the current one.
    pub fn lift(&self, level: u32) -> Cyclotomic {
        assert_eq!(level % self.level, 0, "lift to a non-multiple level");
        if level == self.level {
            return self.clone();
        }
        let step = (level / self.level) as usize;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * step] = c.clone();
            }
        }
        Self::from_raw(level, raw)
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let l = a.level.lcm(&b.level);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Cyclotomic {
        assert!(!self.is_zero(), "inverse of zero");
        if let Some(q) = self.as_rational() {
            return Self::from_rational(q.recip()).lift(self.level);
        }
        // The product of all Galois conjugates other than self is rational
        // times the inverse: self · Π_{σ≠1} σ(self) = Norm(self) ∈ Q.
        let n = self.level;
        let mut others = Cyclotomic::one().lift(n);
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = &others * self;
        let q = norm
            .as_rational()
            .expect("field norm is rational")
            .clone();
        others.scale(&q.recip())
    }

    /// Image under the automorphism `ζ ↦ ζ^k`, `gcd(k, level) = 1`.
    pub fn galois(&self, k: u32) -> Cyclotomic {
        let n = self.level as u64;
        let mut raw = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (i as u64 * k as u64 % n) as usize;
                raw[e] += c;
            }
        }
        Self::from_raw(self.level, raw)
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Writes `self = q · ζ_level^j` if possible, with the smallest such `j`.
    pub fn as_scaled_root(&self) -> Option<(BigRational, u64, u32)> {
        if self.is_zero() {
            return None;
        }
        for j in 0..self.level as u64 {
            let back = self * &Cyclotomic::root_of_unity(
                (self.level as u64 - j) % self.level as u64,
                self.level,
            );
            if let Some(q) = back.as_rational() {
                return Some((q.clone(), j, self.level));
            }
        }
        None
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.level == rhs.level {
            return Cyclotomic {
                level: self.level,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            };
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.level != rhs.level {
            let (a, b) = Cyclotomic::common(self, rhs);
            return &a * &b;
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        let mut raw = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Cyclotomic::from_raw(self.level, raw)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_root(j: u64, n: u32) -> String {
    let r = super::RootOfUnity::new(j as i64, n as u64);
    r.to_string()
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some((q, j, n)) = self.as_scaled_root() {
            let root = fmt_root(j, n);
            return match (root.as_str(), q.is_one(), (-&q).is_one()) {
                ("1", _, _) => write!(f, "{}", fmt_rational(&q)),
                (_, true, _) => write!(f, "{root}"),
                ("-1", _, _) => write!(f, "{}", fmt_rational(&-q)),
                (r, _, true) if r.starts_with('-') => write!(f, "{}", &r[1..]),
                (r, _, true) => write!(f, "-{r}"),
                (r, _, _) => write!(f, "{}·{r}", fmt_rational(&q)),
            };
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{}", fmt_rational(&abs))?,
                (_, true) => write!(f, "{}", fmt_root(i as u64, self.level))?,
                (_, false) => write!(f, "{}·{}", fmt_rational(&abs), fmt_root(i as u64, self.level))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_polynomial(2), &[1, 1]);
        assert_eq!(&*cyclotomic_polynomial(3), &[1, 1, 1]);
        assert_eq!(&*cyclotomic_polynomial(4), &[1, 0, 1]);
        assert_eq!(&*cyclotomic_polynomial(6), &[1, -1, 1]);
        assert_eq!(&*cyclotomic_polynomial(12), &[1, 0, -1, 0, 1]);
        assert_eq!(totient(15), 8);
    }

    #[test]
    fn roots_have_expected_order() {
        for n in 1..=12u32 {
            for j in 0..n as u64 {
                let z = Cyclotomic::root_of_unity(j, n);
                let ord = n as u64 / j.gcd(&(n as u64));
                assert!(z.pow(ord as u32).is_one(), "ζ{n}^{j}");
                for d in 1..ord {
                    assert!(!z.pow(d as u32).is_one());
                }
            }
        }
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for n in 2..=12u32 {
            let mut s = Cyclotomic::zero();
            for j in 0..n as u64 {
                s = &s + &Cyclotomic::root_of_unity(j, n);
            }
            assert!(s.is_zero(), "level {n}");
        }
    }

    #[test]
    fn canonical_equality_across_levels() {
        assert_eq!(Cyclotomic::root_of_unity(2, 4), Cyclotomic::from_integer(-1));
        assert_eq!(Cyclotomic::root_of_unity(2, 6), Cyclotomic::root_of_unity(1, 3));
        assert_eq!(Cyclotomic::root_of_unity(3, 12), Cyclotomic::root_of_unity(1, 4));
        assert_ne!(Cyclotomic::root_of_unity(1, 3), Cyclotomic::root_of_unity(2, 3));
    }

    #[test]
    fn inverse() {
        let a = &Cyclotomic::root_of_unity(1, 5) + &Cyclotomic::from_integer(2);
        assert!((&a * &a.inv()).is_one());
        let b = Cyclotomic::from_ratio(3, 7);
        assert_eq!(b.inv(), Cyclotomic::from_ratio(7, 3));
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::root_of_unity(2, 3).to_string(), "ζ3^2");
        assert_eq!(Cyclotomic::root_of_unity(1, 4).to_string(), "i");
        assert_eq!((-Cyclotomic::root_of_unity(1, 4)).to_string(), "-i");
        assert_eq!(Cyclotomic::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Cyclotomic::root_of_unity(2, 4).to_string(), "-1");
    }
}
