//! The minimal field interface used by the linear-algebra layer, with
//! implementations for ℚ, ℚ(q) and prime fields.

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;

pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    /// `None` when the denominator is not invertible (prime fields).
    fn from_rational(r: &Rational) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Heuristic size, smaller is cheaper; used for pivot choice.
    fn cost(&self) -> u32 {
        1
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }

    /// `self -= a * b`.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.sub(&a.mul(b));
    }

    fn pow(&self, e: i64) -> Option<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        Some(acc)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn cost(&self) -> u32 {
        (self.numer().bits() + self.denom().bits()) as u32
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
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
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self).ok()
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(Scalar::from_rational(r.clone()))
    }
    fn cost(&self) -> u32 {
        Scalar::cost(self)
    }
}

/// Integers modulo a prime `P < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

/// `2^61 - 1`.
pub type F1 = Fp<2_305_843_009_213_693_951>;
/// `2^61 - 31`.
pub type F2 = Fp<2_305_843_009_213_693_921>;
/// `2^62 - 57`.
pub type F3 = Fp<4_611_686_018_427_387_847>;
/// `2^62 - 87`.
pub type F4 = Fp<4_611_686_018_427_387_817>;

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(P);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("reduced residue fits"))
    }

    #[inline]
    pub fn mul_raw(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow_u(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, b);
            }
            b = Self::mul_raw(b, b);
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    #[inline]
    fn zero() -> Self {
        Fp(0)
    }
    #[inline]
    fn one() -> Self {
        Fp(1)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        Fp(Self::mul_raw(self.0, rhs.0))
    }
    #[inline]
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Fp(Self::pow_u(self.0, P - 2)))
        }
    }
    fn from_i64(n: i64) -> Self {
        let m = (n as i128).rem_euclid(P as i128);
        Fp(m as u64)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        let d = Self::from_bigint(r.denom());
        d.inv().map(|di| Self::from_bigint(r.numer()).mul(&di))
    }
    #[inline]
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = Self::mul_raw(a.0, b.0);
        self.0 = if self.0 >= p { self.0 - p } else { self.0 + P - p };
    }
}

/// A ring homomorphism out of ℚ(q), defined away from finitely many poles.
pub trait Specialize<F: Field>: Sync {
    fn apply(&self, s: &Scalar) -> Result<F>;
}

/// Evaluation `q -> q0` into ℚ.
#[derive(Clone, Debug)]
pub struct AtRational(pub Rational);

impl Specialize<Rational> for AtRational {
    fn apply(&self, s: &Scalar) -> Result<Rational> {
        s.specialize(&self.0)
    }
}

/// Identity embedding ℚ(q) -> ℚ(q).
#[derive(Clone, Debug, Default)]
pub struct Generic;

impl Specialize<Scalar> for Generic {
    fn apply(&self, s: &Scalar) -> Result<Scalar> {
        Ok(s.clone())
    }
}

/// Evaluation `q -> q0` followed by reduction modulo `P`.
#[derive(Clone, Debug)]
pub struct ModP<const P: u64> {
    pub q0: Rational,
    q: Fp<P>,
    qinv: Fp<P>,
}

impl<const P: u64> ModP<P> {
    pub fn new(q0: Rational) -> Result<Self> {
        let q = Fp::<P>::from_rational(&q0).ok_or(Error::DivisionByZero)?;
        let qinv = q.inv().ok_or(Error::ZeroSpecialization)?;
        Ok(ModP { q0, q, qinv })
    }

    fn eval(&self, p: &crate::scalar::LaurentPoly) -> Result<Fp<P>> {
        let mut acc = Fp::<P>::zero();
        for c in p.dense().iter().rev() {
            let c = Fp::<P>::from_rational(c).ok_or(Error::DivisionByZero)?;
            acc = acc.mul(&self.q).add(&c);
        }
        let shift = if p.low() >= 0 {
            self.q.pow(p.low() as i64).unwrap()
        } else {
            self.qinv.pow(-(p.low() as i64)).unwrap()
        };
        Ok(acc.mul(&shift))
    }
}

impl<const P: u64> Specialize<Fp<P>> for ModP<P> {
    fn apply(&self, s: &Scalar) -> Result<Fp<P>> {
        let d = self.eval(s.den())?;
        let di = d.inv().ok_or_else(|| Error::Pole { at: format!("{} mod {}", self.q0, P), order: 1 })?;
        Ok(self.eval(s.num())?.mul(&di))
    }
}

/// Reduce a rational into `F_P`, failing on `P | den`.
pub fn reduce<const P: u64>(r: &Rational) -> Result<Fp<P>> {
    Fp::<P>::from_rational(r).ok_or(Error::DivisionByZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn prime_field_arithmetic() {
        let a = F1::from_i64(-5);
        let b = F1::from_i64(7);
        assert_eq!(a.add(&b), F1::from_i64(2));
        assert_eq!(a.mul(&b), F1::from_i64(-35));
        assert_eq!(b.inv().unwrap().mul(&b), F1::one());
        assert_eq!(F3::from_rational(&rat(1, 3)).unwrap().mul(&F3::from_i64(3)), F3::one());
        let mut c = F2::from_i64(10);
        c.sub_mul_assign(&F2::from_i64(3), &F2::from_i64(4));
        assert_eq!(c, F2::from_i64(-2));
    }

    #[test]
    fn mod_p_specialization_matches_rational() {
        let s: Scalar = "(q^3 - 2*q^-1 + 1/5)/(q^2 + 3*q + 7)".parse().unwrap();
        let q0 = rat(-3, 2);
        let r = s.specialize(&q0).unwrap();
        let m = ModP::<{ F4::MODULUS }>::new(q0).unwrap();
        assert_eq!(m.apply(&s).unwrap(), F4::from_rational(&r).unwrap());
    }
}
