//! The field ℚ(q) in canonical reduced form.

use super::laurent::LaurentPoly;
use super::{poly, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `num / den` with `den` a monic ordinary polynomial, `den(0) != 0`, and
/// `gcd(num, den) = 1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentPoly::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_laurent(LaurentPoly::constant(r))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::from_laurent(LaurentPoly::q_pow(e))
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Reduce `num / den` to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let lc = den.leading_coeff();
        let shift = den.low();
        let dpoly = poly::make_monic(den.dense().to_vec());
        let num = num.shift(-shift).scale(&lc.recip());
        if dpoly.len() == 1 {
            return Ok(Scalar { num, den: LaurentPoly::one() });
        }
        let g = poly::gcd(num.dense(), &dpoly);
        if g.len() == 1 {
            return Ok(Scalar { num, den: LaurentPoly::from_dense(0, dpoly) });
        }
        let n = LaurentPoly::from_dense(num.low(), poly::exact_div(num.dense(), &g));
        let d = LaurentPoly::from_dense(0, poly::exact_div(&dpoly, &g));
        Ok(Scalar { num: n, den: d })
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Constant (q-free) value, if any.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Rough size measure used for pivot selection.
    pub fn cost(&self) -> u32 {
        (self.num.dense().len() + self.den.dense().len()) as u32
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar { num: self.num.pow(e), den: self.den.pow(e) })
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        Scalar { num: self.num.shift(e), den: self.den.clone() }
    }

    /// Substitute `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Scalar::new(self.num.bar(), self.den.bar()).expect("nonzero denominator")
    }

    /// Exact value at `q0`.
    pub fn specialize(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() {
            return Err(Error::ZeroSpecialization);
        }
        let d = self.den.eval(q0).expect("q0 != 0");
        if d.is_zero() {
            return Err(Error::Pole { at: q0.to_string(), order: self.den.order_at(q0) });
        }
        Ok(self.num.eval(q0).expect("q0 != 0") / d)
    }

    /// Whether the value at `q0` is defined.
    pub fn regular_at(&self, q0: &Rational) -> bool {
        !q0.is_zero() && !self.den.eval(q0).expect("q0 != 0").is_zero()
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_laurent(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return Scalar::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let g = poly::gcd(self.den.dense(), rhs.den.dense());
        if g.len() == 1 {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return Scalar::zero();
            }
            return Scalar { num, den: &self.den * &rhs.den };
        }
        let b1 = LaurentPoly::from_dense(0, poly::exact_div(self.den.dense(), &g));
        let d1 = LaurentPoly::from_dense(0, poly::exact_div(rhs.den.dense(), &g));
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return Scalar::zero();
        }
        let g2 = poly::gcd(t.dense(), &g);
        let t = LaurentPoly::from_dense(t.low(), poly::exact_div(t.dense(), &g2));
        let gr = LaurentPoly::from_dense(0, poly::exact_div(&g, &g2));
        Scalar { num: t, den: &(&b1 * &d1) * &gr }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_laurent(&self.num * &rhs.num);
        }
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        Scalar { num: &a * &c, den: &b * &d }
    }
}

/// Remove the common factor of a numerator and a canonical denominator.
fn cancel(n: &LaurentPoly, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = poly::gcd(n.dense(), d.dense());
    if g.len() == 1 {
        return (n.clone(), d.clone());
    }
    (
        LaurentPoly::from_dense(n.low(), poly::exact_div(n.dense(), &g)),
        LaurentPoly::from_dense(0, poly::exact_div(d.dense(), &g)),
    )
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<LaurentPoly> for Scalar {
    fn from(p: LaurentPoly) -> Self {
        Scalar::from_laurent(p)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::text::parse(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}
