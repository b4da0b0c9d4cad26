//! Scalars: exact Gaussian rationals and the coefficient abstraction shared
//! by the exact and floating-point polynomial models.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex number with arbitrary-precision rational real and imaginary parts.
///
/// `BigRational` keeps every component in lowest terms with a positive
/// denominator, so all arithmetic is exact and representations are canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn integer(v: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    /// num/den as a real value. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }

    /// Exact complex division. Panics on a zero divisor.
    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sq();
        assert!(!d.is_zero(), "division by zero GaussianRational");
        let num = self.mul(&rhs.conj());
        Self::new(num.re / &d, num.im / &d)
    }

    pub fn scale_int(&self, s: i64) -> Self {
        let f = BigRational::from_integer(BigInt::from(s));
        Self::new(&self.re * &f, &self.im * &f)
    }

    pub fn scale_rational(&self, s: &BigRational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    /// Multiplication by i^m for any signed exponent.
    pub fn mul_i_pow(&self, m: i64) -> Self {
        match m.rem_euclid(4) {
            0 => self.clone(),
            1 => Self::new(-self.im.clone(), self.re.clone()),
            2 => self.neg(),
            _ => Self::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// |z|^2, an exact rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical coefficient string `num/den+num/den·i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, im_abs) = if self.im.is_negative() {
            ("-", -self.im.clone())
        } else {
            ("+", self.im.clone())
        };
        write!(
            f,
            "{}/{}{}{}/{}·i",
            self.re.numer(),
            self.re.denom(),
            sign,
            im_abs.numer(),
            im_abs.denom()
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        GaussianRational::add(&self, &rhs)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational::sub(&self, &rhs)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        GaussianRational::mul(&self, &rhs)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational::neg(&self)
    }
}

/// Coefficient field for the full polynomial model. Implemented by the exact
/// [`GaussianRational`] and by `Complex64` for floating-point work.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    /// Tag recorded in serialized polynomials.
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn from_gaussian(g: &GaussianRational) -> Self;
    fn to_complex(&self) -> Complex64;
    fn is_zero(&self) -> bool;
    /// Exact zero test for exact scalars; `|z| <= tol` for floating point.
    fn is_negligible(&self, tol: f64) -> bool;
    /// Real and imaginary parts for serialization: `num/den` strings in
    /// exact mode, plain numbers in numeric mode.
    fn json_parts(&self) -> (serde_json::Value, serde_json::Value);
}

impl Scalar for GaussianRational {
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussianRational::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        GaussianRational::neg(self)
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        GaussianRational::from_rational(r.clone())
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
    fn to_complex(&self) -> Complex64 {
        GaussianRational::to_complex(self)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        GaussianRational::is_zero(self)
    }
    fn json_parts(&self) -> (serde_json::Value, serde_json::Value) {
        (
            serde_json::Value::String(format!("{}/{}", self.re.numer(), self.re.denom())),
            serde_json::Value::String(format!("{}/{}", self.im.numer(), self.im.denom())),
        )
    }
}

impl Scalar for Complex64 {
    const MODE: &'static str = "numeric";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.to_complex()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn json_parts(&self) -> (serde_json::Value, serde_json::Value) {
        (serde_json::json!(self.re), serde_json::json!(self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_format() {
        assert_eq!(GaussianRational::ratio(3, 2).to_string(), "3/2+0/1·i");
        let c = GaussianRational::new(
            BigRational::new(BigInt::from(-2), BigInt::from(1)),
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
        );
        assert_eq!(c.to_string(), "-2/1-1/3·i");
    }

    #[test]
    fn i_powers_cycle() {
        let one = GaussianRational::one();
        assert_eq!(one.mul_i_pow(0), GaussianRational::one());
        assert_eq!(one.mul_i_pow(1), GaussianRational::i());
        assert_eq!(one.mul_i_pow(2), GaussianRational::integer(-1));
        assert_eq!(one.mul_i_pow(3), GaussianRational::i().neg());
        assert_eq!(one.mul_i_pow(-1), GaussianRational::i().neg());
        assert_eq!(one.mul_i_pow(6), GaussianRational::integer(-1));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = GaussianRational::new(
            BigRational::new(BigInt::from(3), BigInt::from(7)),
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
        );
        let b = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(4), BigInt::from(3)),
        );
        assert_eq!((a.clone() * b.clone()).div(&b), a);
    }
}
