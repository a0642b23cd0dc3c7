//! Exact coefficient arithmetic: arbitrary-precision rationals and elements
//! of a single quadratic extension Q(sqrt(D)).
//!
//! Every scalar in the library is either rational or lives in Q(sqrt(D)) for
//! one squarefree D != 0, 1. Mixing two different extensions is a caller bug
//! surfaced as `Error::IncompatibleField` by the public entry points; the
//! arithmetic operators themselves panic on a mismatch.

use crate::error::{Error, Result};
use crate::numtheory::squarefree_decompose;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rational = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element a + b*sqrt(d) with d squarefree, d != 0, 1 and b != 0.
/// (b = 0 collapses to `Scalar::Rat` at construction.)
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadExt {
    pub d: BigInt,
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn conj(&self) -> QuadExt {
        QuadExt { d: self.d.clone(), a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm a^2 - d*b^2; nonzero whenever (a, b) != 0 since d is not a square.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.clone()) * &self.b * &self.b
    }
}

/// A coefficient: rational, or quadratic over one discriminant.
///
/// The derived ordering (rationals first, then by discriminant and
/// components) is used only for deterministic tie-breaking, not as a
/// numeric order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rat(Rational),
    Quad(QuadExt),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(rat_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rat(rat(n, d))
    }

    /// Build a + b*sqrt(d), normalizing d to its squarefree core and
    /// collapsing b = 0 to a rational.
    pub fn quad(d: BigInt, a: Rational, b: Rational) -> Scalar {
        if b.is_zero() {
            return Scalar::Rat(a);
        }
        assert!(!d.is_zero() && !d.is_one(), "discriminant must be != 0, 1");
        let (s, core) = squarefree_decompose(&d);
        let b = b * Rational::from_integer(BigInt::from(s));
        if core.is_one() {
            // d was a perfect square: the element is rational after all
            return Scalar::Rat(a + b);
        }
        Scalar::Quad(QuadExt { d: core, a, b })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    pub fn disc(&self) -> Option<&BigInt> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad(q) => Some(&q.d),
        }
    }

    /// Galois conjugate over Q (identity on rationals).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.conj()),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Rat(r.recip())
            }
            Scalar::Quad(q) => {
                let n = q.norm();
                assert!(!n.is_zero(), "division by zero");
                Scalar::Quad(QuadExt { d: q.d.clone(), a: &q.a / &n, b: -(&q.b / &n) })
            }
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// sqrt of a rational as a scalar: sqrt(n/m) = (s/m) * sqrt(core) where
    /// n*m = s^2 * core. Returns the branch with positive coefficient.
    pub fn sqrt_rational(r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        let n = r.numer() * r.denom();
        let (s, core) = squarefree_decompose(&n);
        let coeff = Rational::new(BigInt::from(s), r.denom().clone());
        if core.is_one() {
            Scalar::Rat(coeff)
        } else {
            Scalar::Quad(QuadExt { d: core, a: Rational::zero(), b: coeff })
        }
    }

    fn promote(&self, d: &BigInt) -> QuadExt {
        match self {
            Scalar::Rat(r) => QuadExt { d: d.clone(), a: r.clone(), b: Rational::zero() },
            Scalar::Quad(q) => {
                assert_eq!(&q.d, d, "incompatible quadratic extensions");
                q.clone()
            }
        }
    }

    fn collapse(q: QuadExt) -> Scalar {
        if q.b.is_zero() {
            Scalar::Rat(q.a)
        } else {
            Scalar::Quad(q)
        }
    }
}

/// Common discriminant of a collection, or IncompatibleField.
pub fn common_disc<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Result<Option<BigInt>> {
    let mut found: Option<BigInt> = None;
    for s in items {
        if let Some(d) = s.disc() {
            match &found {
                None => found = Some(d.clone()),
                Some(e) if e == d => {}
                Some(e) => {
                    return Err(Error::IncompatibleField { left: e.clone(), right: d.clone() })
                }
            }
        }
    }
    Ok(found)
}

fn quad_add(p: QuadExt, q: QuadExt) -> QuadExt {
    QuadExt { d: p.d, a: p.a + q.a, b: p.b + q.b }
}

fn quad_sub(p: QuadExt, q: QuadExt) -> QuadExt {
    QuadExt { d: p.d, a: p.a - q.a, b: p.b - q.b }
}

fn quad_mul(p: QuadExt, q: QuadExt) -> QuadExt {
    let d = Rational::from_integer(p.d.clone());
    QuadExt {
        a: &p.a * &q.a + &d * &p.b * &q.b,
        b: &p.a * &q.b + &p.b * &q.a,
        d: p.d,
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (x, y) => {
                let d = x.disc().or_else(|| y.disc()).expect("quadratic side").clone();
                Scalar::collapse(quad_add(x.promote(&d), y.promote(&d)))
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (x, y) => {
                let d = x.disc().or_else(|| y.disc()).expect("quadratic side").clone();
                Scalar::collapse(quad_sub(x.promote(&d), y.promote(&d)))
            }
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (x, y) => {
                let d = x.disc().or_else(|| y.disc()).expect("quadratic side").clone();
                Scalar::collapse(quad_mul(x.promote(&d), y.promote(&d)))
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => {
                Scalar::Quad(QuadExt { d: q.d.clone(), a: -q.a.clone(), b: -q.b.clone() })
            }
        }
    }
}

macro_rules! scalar_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
scalar_owned!(Add, add);
scalar_owned!(Sub, sub);
scalar_owned!(Mul, mul);
scalar_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => fmt_rational(r, f),
            Scalar::Quad(q) => {
                if !q.a.is_zero() {
                    fmt_rational(&q.a, f)?;
                    if q.b.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if q.b.abs() != Rational::one() {
                    fmt_rational(&q.b, f)?;
                    write!(f, "*")?;
                } else if q.b.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "sqrt({})", q.d)
            }
        }
    }
}

/// Exact "num/den" form with the denominator always present; the JSON
/// serialization of rational scalars.
pub fn rational_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Scalar {
        Scalar::quad(BigInt::from(2), rat_int(0), rat_int(1))
    }

    #[test]
    fn rational_basics() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::ratio(1, 3);
        assert_eq!(&a + &b, Scalar::ratio(5, 6));
        assert_eq!(&a * &b, Scalar::ratio(1, 6));
        assert_eq!(a.inv(), Scalar::int(2));
    }

    #[test]
    fn quad_collapse_and_norm() {
        // (1 + sqrt(2)) * (1 - sqrt(2)) = -1
        let p = &Scalar::one() + &sqrt2();
        let q = p.conj();
        assert_eq!(&p * &q, Scalar::int(-1));
        // sqrt(2)^2 = 2 collapses to a rational
        assert_eq!(&sqrt2() * &sqrt2(), Scalar::int(2));
    }

    #[test]
    fn quad_inverse() {
        let p = &Scalar::int(3) + &sqrt2();
        assert!( (&p * &p.inv()).is_one() );
    }

    #[test]
    fn discriminant_normalization() {
        // sqrt(8) = 2*sqrt(2)
        let s = Scalar::quad(BigInt::from(8), rat_int(0), rat_int(1));
        assert_eq!(s, Scalar::quad(BigInt::from(2), rat_int(0), rat_int(2)));
        // sqrt(9) = 3 is rational
        let t = Scalar::quad(BigInt::from(9), rat_int(1), rat_int(1));
        assert_eq!(t, Scalar::int(4));
    }

    #[test]
    fn sqrt_of_rational() {
        let s = Scalar::sqrt_rational(&rat(9, 4));
        assert_eq!(s, Scalar::ratio(3, 2));
        let s = Scalar::sqrt_rational(&rat(1, 2));
        assert_eq!(&s * &s, Scalar::ratio(1, 2));
        let s = Scalar::sqrt_rational(&rat_int(-4));
        assert_eq!(&s * &s, Scalar::int(-4));
    }

    #[test]
    fn incompatible_fields_detected() {
        let a = sqrt2();
        let b = Scalar::quad(BigInt::from(3), rat_int(0), rat_int(1));
        assert!(common_disc([&a, &b]).is_err());
        assert!(common_disc([&a, &Scalar::one(), &a]).unwrap() == Some(BigInt::from(2)));
    }

    #[test]
    fn powers() {
        assert_eq!(Scalar::int(2).pow(10), Scalar::int(1024));
        assert_eq!(Scalar::int(2).pow(-2), Scalar::ratio(1, 4));
        let s = &Scalar::one() + &sqrt2();
        assert_eq!(s.pow(2), &Scalar::int(3) + &(&Scalar::int(2) * &sqrt2()));
    }
}
