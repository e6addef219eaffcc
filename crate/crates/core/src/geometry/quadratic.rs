//! Exact arithmetic in `ℚ(√D)`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `p + q√D` with `p, q ∈ ℚ` and `D` a positive non-square integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    p: BigRational,
    q: BigRational,
    radicand: i64,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl QuadraticNumber {
    pub fn new(p: BigRational, q: BigRational, radicand: i64) -> Self {
        assert!(radicand > 0, "radicand must be positive");
        QuadraticNumber { p, q, radicand }
    }

    pub fn from_rational(p: BigRational, radicand: i64) -> Self {
        Self::new(p, BigRational::zero(), radicand)
    }

    pub fn from_ints(p: i64, q: i64, radicand: i64) -> Self {
        Self::new(rational(p, 1), rational(q, 1), radicand)
    }

    pub fn zero(radicand: i64) -> Self {
        Self::from_ints(0, 0, radicand)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `p − q√D`
    pub fn conjugate(&self) -> Self {
        Self::new(self.p.clone(), -self.q.clone(), self.radicand)
    }

    /// Field norm `p² − D q²`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigInt::from(self.radicand)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.p * k, &self.q * k, self.radicand)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conjugate().scale(&n.recip()))
    }

    /// Exact sign, by comparing `p²` against `D q²` when the parts disagree.
    pub fn signum(&self) -> i32 {
        let sp = sign_of(&self.p);
        let sq = sign_of(&self.q);
        if sq == 0 || sp == sq {
            return if sp != 0 { sp } else { sq };
        }
        if sp == 0 {
            return sq;
        }
        // opposite signs: the part with larger square wins
        let pp = &self.p * &self.p;
        let qq = &self.q * &self.q * BigInt::from(self.radicand);
        match pp.cmp(&qq) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => unreachable!("radicand is not a square"),
        }
    }

    /// Nearest `f64`, avoiding cancellation between `p` and `q√D`.
    pub fn to_f64(&self) -> f64 {
        let root = (self.radicand as f64).sqrt();
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        if sign_of(&self.p) * sign_of(&self.q) >= 0 {
            p + q * root
        } else {
            // p + q√D = (p² − q²D) / (p − q√D), the denominator has no cancellation
            self.norm().to_f64().unwrap_or(f64::NAN) / (p - q * root)
        }
    }

    fn check_radicand(&self, other: &Self) {
        assert_eq!(
            self.radicand, other.radicand,
            "mixing ℚ(√{}) and ℚ(√{})",
            self.radicand, other.radicand
        );
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.radicand != other.radicand {
            return None;
        }
        Some((self - other).signum().cmp(&0))
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_radicand(rhs);
        QuadraticNumber::new(&self.p + &rhs.p, &self.q + &rhs.q, self.radicand)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_radicand(rhs);
        QuadraticNumber::new(&self.p - &rhs.p, &self.q - &rhs.q, self.radicand)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.check_radicand(rhs);
        let d = BigInt::from(self.radicand);
        QuadraticNumber::new(
            &self.p * &rhs.p + &self.q * &rhs.q * d,
            &self.p * &rhs.q + &self.q * &rhs.p,
            self.radicand,
        )
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.p.clone(), -self.q.clone(), self.radicand)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
