//! Exact scalars: ℚ, ℚ[q,q⁻¹] and ℚ(q).

mod laurent;
pub(crate) mod poly;
mod ratfunc;
mod text;

pub use laurent::LaurentPoly;
pub use ratfunc::Scalar;
pub use text::parse;

use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
pub fn quantum_integer(n: i64, d: u32) -> Scalar {
    let sign = if n < 0 { -1 } else { 1 };
    let m = n.unsigned_abs() as i32;
    let d = d as i32;
    let terms = (0..m).map(|k| (d * (m - 1 - 2 * k), int(sign)));
    Scalar::from_laurent(LaurentPoly::from_terms(terms))
}

/// `[n]_{q^d}!`.
pub fn quantum_factorial(n: u32, d: u32) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| &acc * &quantum_integer(k, d))
}

/// The scalar `c` such that every entry of `M / c` is a Laurent polynomial with
/// integer coefficients, the entries have no common polynomial factor, the gcd of all
/// coefficients is 1, the lowest exponent occurring is 0, and the leading coefficient
/// of the polynomial part of `c` is positive.
pub fn laurent_content<'a, I>(entries: I) -> Result<Scalar>
where
    I: IntoIterator<Item = &'a Scalar>,
{
    let nz: Vec<&Scalar> = entries.into_iter().filter(|s| !s.is_zero()).collect();
    if nz.is_empty() {
        return Err(Error::ZeroContent);
    }
    let mut lcm: Vec<Rational> = vec![Rational::one()];
    for s in &nz {
        let d = s.den().dense();
        if d.len() > 1 {
            let g = poly::gcd(&lcm, d);
            lcm = poly::mul(&lcm, &poly::exact_div(d, &g));
        }
    }
    let lcm_p = LaurentPoly::from_dense(0, lcm.clone());
    let cleared: Vec<LaurentPoly> = nz
        .iter()
        .map(|s| {
            let f = poly::exact_div(&lcm, s.den().dense());
            s.num() * &LaurentPoly::from_dense(0, f)
        })
        .collect();
    let mut g: Vec<Rational> = Vec::new();
    for p in &cleared {
        g = poly::gcd(&g, p.dense());
        if g.len() == 1 {
            break;
        }
    }
    let gc = poly::rational_content(&g);
    let g_int: Vec<Rational> = g.iter().map(|c| c / &gc).collect();
    let mut kappa = Rational::zero();
    let mut low = i32::MAX;
    for p in &cleared {
        let f = poly::exact_div(p.dense(), &g_int);
        let c = poly::rational_content(&f);
        kappa = if kappa.is_zero() { c } else { rational_gcd(&kappa, &c) };
        low = low.min(p.low());
    }
    let c = LaurentPoly::from_dense(low, g_int).scale(&kappa.abs());
    Scalar::new(c, lcm_p)
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}
