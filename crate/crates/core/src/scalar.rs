//! Scalar types: the floating-point bound used by the numerics and an exact
//! dyadic rational for the combinatorial side.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::RealField;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Real scalar the matrix code is generic over (`f32` or `f64`).
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Default + Send + Sync {
    /// Unitarity defect above which a matrix is rejected as not unitary.
    const GROSS_DEFECT: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// `e^{i theta}`.
    fn unit_phase(theta: Self) -> nalgebra::Complex<Self> {
        let (s, c) = theta.sin_cos();
        nalgebra::Complex::new(c, s)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }
}

impl Real for f32 {
    const GROSS_DEFECT: f64 = 1e-4;
}

impl Real for f64 {
    const GROSS_DEFECT: f64 = 1e-6;
}

/// Exact rational `numerator / 2^exponent`, always stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = Dyadic { numerator: numerator.into(), exponent };
        d.normalize();
        d
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::new(value, 0)
    }

    /// `2^{-exponent}`.
    pub fn inverse_power_of_two(exponent: u32) -> Self {
        Self::new(1, exponent)
    }

    /// `2^power` for a possibly negative power.
    pub fn power_of_two(power: i64) -> Self {
        if power >= 0 {
            Self::from_integer(BigInt::one() << power as usize)
        } else {
            Self::inverse_power_of_two((-power) as u32)
        }
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && self.numerator.is_even() {
            self.numerator >>= 1;
            self.exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    /// Denominator is `2^denominator_exponent()`.
    pub fn denominator_exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::one() << self.exponent as usize
    }

    /// Numerator over the fixed denominator `2^exponent` (must not lose precision).
    pub fn numerator_over(&self, exponent: u32) -> Option<BigInt> {
        (exponent >= self.exponent).then(|| &self.numerator << (exponent - self.exponent) as usize)
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.numerator.to_f64().unwrap_or(f64::NAN);
        num * (-(self.exponent as f64)).exp2()
    }

    /// Exact decimal expansion; finite since the denominator is a power of two.
    pub fn to_decimal_string(&self) -> String {
        let e = self.exponent as usize;
        let scaled = self.numerator.abs() * BigInt::from(5u8).pow(self.exponent);
        let digits = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if e == 0 {
            return format!("{sign}{digits}");
        }
        let padded = format!("{digits:0>width$}", width = e + 1);
        let (int, frac) = padded.split_at(padded.len() - e);
        format!("{sign}{int}.{frac}")
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let exponent = self.exponent.max(other.exponent);
        let a = &self.numerator << (exponent - self.exponent) as usize;
        let b = &other.numerator << (exponent - other.exponent) as usize;
        (a, b, exponent)
    }
}

impl fmt::Display for Dyadic {
    /// `p/q` in lowest terms, or a bare integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator())
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(&rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { numerator: -self.numerator, exponent: self.exponent }
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic { numerator: BigInt::zero(), exponent: 0 }
    }
    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic { numerator: BigInt::one(), exponent: 0 }
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}
