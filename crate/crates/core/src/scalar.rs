//! Scalar abstraction over machine doubles and a multiprecision float.
//!
//! Every exact (algebraic) route is generic over [`Real`], so the same code
//! runs in `f64` or in [`Mp`] at a caller-chosen number of decimal digits.
//! `Mp` values carry their own binary precision; binary operations run at the
//! larger of the two operand precisions, and constants produced by
//! [`Real::from_f64`] are exact so they never lower the working precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex;
use num_traits::{Num, One, Zero};

pub type C64 = Complex<f64>;

/// Real field used by the exact routes.
pub trait Real: Clone + fmt::Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// Exact conversion of a double.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

type Big = FBig<HalfEven, 2>;

/// Binary precision used when both operands of a division are exact.
const EXACT_DIV_BITS: usize = 256;

/// Multiprecision real with per-value binary precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mp(Big);

/// Number of significand bits needed for `digits` decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + 16
}

impl Mp {
    /// A double rounded (it is already exact) into a value carrying `digits` decimal digits.
    pub fn with_digits(x: f64, digits: u32) -> Self {
        Self::with_bits(x, bits_for_digits(digits))
    }

    pub fn with_bits(x: f64, bits: usize) -> Self {
        let v = Big::try_from(x).expect("finite input");
        Mp(v.with_precision(bits.max(1)).value())
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// Decimal rendering with the value's full precision.
    pub fn to_decimal_string(&self) -> String {
        self.0.to_decimal().value().to_string()
    }

    /// Parse a decimal literal, keeping at least `digits` decimal digits.
    pub fn parse_decimal(s: &str, digits: u32) -> Result<Self, String> {
        let v: dashu_float::DBig = s.trim().parse().map_err(|e| format!("{e:?}"))?;
        // a decimal literal is rarely exact in binary
        let digits = (v.precision() as u32).max(digits);
        let bin = v.with_precision(digits as usize).value().with_base::<2>().value();
        Ok(Mp(bin.with_rounding::<HalfEven>().with_precision(bits_for_digits(digits)).value()))
    }

    fn exact(v: Big) -> Self {
        Mp(v.with_precision(0).value())
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp({})", self.to_decimal_string())
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Add for Mp {
    type Output = Mp;
    fn add(self, rhs: Mp) -> Mp {
        Mp(self.0 + rhs.0)
    }
}

impl Sub for Mp {
    type Output = Mp;
    fn sub(self, rhs: Mp) -> Mp {
        Mp(self.0 - rhs.0)
    }
}

impl Mul for Mp {
    type Output = Mp;
    fn mul(self, rhs: Mp) -> Mp {
        Mp(self.0 * rhs.0)
    }
}

impl Div for Mp {
    type Output = Mp;
    fn div(self, rhs: Mp) -> Mp {
        if self.0.precision() == 0 && rhs.0.precision() == 0 {
            let lhs = self.0.with_precision(EXACT_DIV_BITS).value();
            return Mp(lhs / rhs.0);
        }
        Mp(self.0 / rhs.0)
    }
}

impl Rem for Mp {
    type Output = Mp;
    fn rem(self, rhs: Mp) -> Mp {
        let q = (self.clone() / rhs.clone()).0.trunc();
        self - Mp(q) * rhs
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Zero for Mp {
    fn zero() -> Self {
        Mp(Big::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}

impl One for Mp {
    fn one() -> Self {
        Mp(Big::ONE)
    }
}

impl Num for Mp {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        Mp::parse_decimal(s, 40)
    }
}

impl Real for Mp {
    fn from_f64(x: f64) -> Self {
        Mp::exact(Big::try_from(x).expect("finite input"))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn sqrt(&self) -> Self {
        if self.0 == Big::ZERO {
            return self.clone();
        }
        if self.0.precision() == 0 {
            return Mp(self.0.clone().with_precision(EXACT_DIV_BITS).value().sqrt());
        }
        Mp(self.0.sqrt())
    }
}

/// Modulus of a complex value.
pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

/// Modulus as a double, for tolerance checks.
pub fn cabs_f64<T: Real>(z: &Complex<T>) -> f64 {
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    re.hypot(im)
}

pub fn to_c64<T: Real>(z: &Complex<T>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn lift<T: Real>(z: C64) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Lift a double into an `Mp` complex carrying `digits` decimal digits.
pub fn lift_mp(z: C64, digits: u32) -> Complex<Mp> {
    Complex::new(Mp::with_digits(z.re, digits), Mp::with_digits(z.im, digits))
}

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

pub fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Integer power by repeated squaring; negative exponents invert.
pub fn cpowi<T: Real>(z: &Complex<T>, exp: i64) -> Complex<T> {
    let mut base = z.clone();
    let mut e = exp.unsigned_abs();
    let mut acc = cone::<T>();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    if exp < 0 {
        cone::<T>() / acc
    } else {
        acc
    }
}

/// Principal square root.
pub fn csqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    let zero = T::zero();
    if z.re.is_zero() && z.im.is_zero() {
        return czero();
    }
    let two = T::from_f64(2.0);
    let r = cabs(z);
    if z.re >= zero {
        let t = ((r + z.re.clone()) / two.clone()).sqrt();
        let im = z.im.clone() / (two * t.clone());
        Complex::new(t, im)
    } else {
        let t = ((r - z.re.clone()) / two.clone()).sqrt();
        let re = z.im.abs() / (two * t.clone());
        let im = if z.im < zero { -t } else { t };
        Complex::new(re, im)
    }
}

/// `exp(z) - 1` without cancellation for small `z`.
pub fn cexpm1(z: C64) -> C64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    // cos(y) - 1 = -2 sin^2(y/2)
    let re = z.re.exp_m1() * c - 2.0 * half * half;
    let im = z.re.exp() * s;
    C64::new(re, im)
}

/// Compare two doubles with NaN sorted last.
pub fn total_cmp(a: &f64, b: &f64) -> Ordering {
    a.total_cmp(b)
}

/// Relative deviation `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_dev(a: C64, b: C64, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm()).max(floor);
    (a - b).norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_carries_precision_through_exact_constants() {
        let x = Mp::with_digits(0.1, 40);
        let p = x.precision();
        let y = Mp::from_f64(3.0) / x.clone();
        assert_eq!(y.precision(), p);
        let z = Mp::from_f64(1.0) / Mp::from_f64(3.0);
        assert!((z.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn mp_sqrt_matches_double() {
        let x = Mp::with_digits(2.0, 40);
        assert!((x.sqrt().to_f64() - std::f64::consts::SQRT_2).abs() < 1e-16);
        let r = x.sqrt() * x.sqrt() - x;
        assert!(r.abs().to_f64() < 1e-40);
    }

    #[test]
    fn csqrt_branches() {
        for z in [C64::new(3.0, 4.0), C64::new(-3.0, 4.0), C64::new(-3.0, -4.0), C64::new(0.0, -2.0)] {
            let s = csqrt(&z);
            assert!((s * s - z).norm() < 1e-14);
            assert!(s.re >= 0.0);
        }
    }

    #[test]
    fn cpowi_negative_and_zero() {
        let z = C64::new(0.5, -1.5);
        assert_eq!(cpowi(&z, 0), C64::new(1.0, 0.0));
        let p = cpowi(&z, 5) * cpowi(&z, -5);
        assert!((p - 1.0).norm() < 1e-14);
    }

    #[test]
    fn expm1_small_argument() {
        let z = C64::new(1e-12, -2e-12);
        let e = cexpm1(z);
        assert!((e - z).norm() < 1e-23);
    }

    #[test]
    fn mp_parses_decimal() {
        let v: Mp = Num::from_str_radix("0.1", 10).unwrap();
        assert!((v.to_f64() - 0.1).abs() < 1e-17);
    }
}
