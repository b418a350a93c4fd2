//! Dense univariate polynomial kernels over ℚ. Index `k` holds the coefficient of `q^k`;
//! inputs and outputs carry no trailing zeros.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub(crate) fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 {
        return trim(b.iter().map(|x| x * &a[0]).collect());
    }
    if b.len() == 1 {
        return trim(a.iter().map(|x| x * &b[0]).collect());
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(out)
}

/// Division by `q - r`: returns (quotient, remainder).
pub(crate) fn div_linear(p: &[Rational], r: &Rational) -> (Vec<Rational>, Rational) {
    if p.is_empty() {
        return (Vec::new(), Rational::zero());
    }
    let n = p.len();
    let mut quot = vec![Rational::zero(); n - 1];
    let mut acc = Rational::zero();
    for k in (0..n).rev() {
        acc = &acc * r + &p[k];
        if k > 0 {
            quot[k - 1] = acc.clone();
        }
    }
    (quot, acc)
}

/// Euclidean division `a = q*b + r`, `deg r < deg b`. Panics if `b` is zero.
pub(crate) fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

/// Exact quotient; panics (debug) if the division leaves a remainder.
pub(crate) fn exact_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if b.len() == 1 {
        let inv = b[0].recip();
        return a.iter().map(|x| x * &inv).collect();
    }
    let (q, r) = divrem(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub(crate) fn make_monic(mut p: Vec<Rational>) -> Vec<Rational> {
    if let Some(l) = p.last().cloned() {
        if !l.is_one() {
            let inv = l.recip();
            for c in p.iter_mut() {
                *c *= &inv;
            }
        }
    }
    p
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() {
        return make_monic(b.to_vec());
    }
    if b.is_empty() {
        return make_monic(a.to_vec());
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![Rational::one()];
    }
    let (mut x, mut y) = if a.len() >= b.len() {
        (a.to_vec(), make_monic(b.to_vec()))
    } else {
        (b.to_vec(), make_monic(a.to_vec()))
    };
    // cheap exit: a linear factor either divides or is coprime
    if y.len() == 2 {
        let root = -&y[0];
        let (_, rem) = div_linear(&x, &root);
        return if rem.is_zero() { y } else { vec![Rational::one()] };
    }
    loop {
        let (_, r) = divrem(&x, &y);
        if r.is_empty() {
            return y;
        }
        if r.len() == 1 {
            return vec![Rational::one()];
        }
        x = y;
        y = make_monic(r);
    }
}

/// Positive rational `g` such that `p / g` has coprime integer coefficients.
pub(crate) fn rational_content(p: &[Rational]) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in p.iter().filter(|c| !c.is_zero()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return Rational::zero();
    }
    Rational::new(num, den)
}
