//! Laurent polynomials in `q` with rational coefficients.

use super::{poly, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial `sum_k c_k q^(low + k)`.
///
/// The coefficient vector never has zero first or last entries; the zero
/// polynomial is stored with an empty vector and `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    /// `c q^e`.
    pub fn monomial(c: Rational, e: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: e, coeffs: vec![c] }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// Build from a dense coefficient vector starting at exponent `low`.
    pub fn from_dense(low: i32, coeffs: Vec<Rational>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    /// Build from (exponent, coefficient) pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let terms: Vec<(i32, Rational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, e: i32) -> Rational {
        let k = e - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Dense coefficients from `low()` to `high()`.
    pub fn dense(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn trailing_coeff(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitute `q -> q^-1`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly { low: -self.high(), coeffs: c }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Evaluate at `q0`; `None` when `q0 = 0` and a negative power is present.
    pub fn eval(&self, q0: &Rational) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if q0.is_zero() {
            return match self.low.cmp(&0) {
                Ordering::Less => None,
                Ordering::Equal => Some(self.coeffs[0].clone()),
                Ordering::Greater => Some(Rational::zero()),
            };
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q0 + c;
        }
        Some(acc * pow_rat(q0, self.low))
    }

    /// Order of vanishing at `q0` (multiplicity of the root), for `q0 != 0`.
    pub fn order_at(&self, q0: &Rational) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut p = self.coeffs.clone();
        let mut k = 0;
        loop {
            let (quot, rem) = poly::div_linear(&p, q0);
            if !rem.is_zero() {
                return k;
            }
            p = quot;
            k += 1;
        }
    }

    /// Split as `q^low * P` with `P` an ordinary polynomial having nonzero constant term.
    pub fn split_power(&self) -> (i32, Vec<Rational>) {
        (self.low, self.coeffs.clone())
    }

    /// Gcd (up to sign) of the integer numerators once denominators are cleared,
    /// as a positive rational `g` with `self / g` integral and primitive.
    pub fn rational_content(&self) -> Rational {
        poly::rational_content(&self.coeffs)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn map_coeffs<F: FnMut(&Rational) -> Rational>(&self, mut f: F) -> Self {
        Self::from_dense(self.low, self.coeffs.iter().map(&mut f).collect())
    }
}

pub(crate) fn pow_rat(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high().max(rhs.high());
        let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (k, x) in self.coeffs.iter().enumerate() {
            c[(self.low - lo) as usize + k] += x;
        }
        for (k, x) in rhs.coeffs.iter().enumerate() {
            c[(rhs.low - lo) as usize + k] += x;
        }
        LaurentPoly::from_dense(lo, c)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_dense(self.low + rhs.low, poly::mul(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_qpow(e: i32) -> String {
    if e == 1 {
        "q".to_string()
    } else {
        format!("q^{e}")
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing exponent order, e.g. `q^2 - 3 + 2*q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_qpow(e))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), fmt_qpow(e))?;
            }
        }
        Ok(())
    }
}
