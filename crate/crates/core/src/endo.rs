//! Plane endomorphisms and their algebra: parsing, printing, composition,
//! Jacobians, derivatives, together with the affine and triangular shapes
//! the factorization machinery works with.

use crate::bipoly::{BiPoly, Degree};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::upoly::UniPoly;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }

    pub fn origin() -> Point {
        Point { x: Scalar::zero(), y: Scalar::zero() }
    }
}

/// A 2x2 matrix [[a, b], [c, d]] of scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2 { a: Scalar::one(), b: Scalar::zero(), c: Scalar::zero(), d: Scalar::one() }
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point {
            x: &(&self.a * &p.x) + &(&self.b * &p.y),
            y: &(&self.c * &p.x) + &(&self.d * &p.y),
        }
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        let inv = det.inv();
        Mat2 {
            a: &self.d * &inv,
            b: -&(&self.b * &inv),
            c: -&(&self.c * &inv),
            d: &self.a * &inv,
        }
    }

    /// Characteristic polynomial T^2 - tr T + det.
    pub fn char_poly(&self) -> UniPoly {
        UniPoly::new(vec![self.det(), -&self.trace(), Scalar::one()])
    }
}

/// A polynomial endomorphism of the plane, identified with its coordinate
/// pair. The degree is the max of the component degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneEndo {
    pub f1: BiPoly,
    pub f2: BiPoly,
}

impl PlaneEndo {
    pub fn new(f1: BiPoly, f2: BiPoly) -> PlaneEndo {
        PlaneEndo { f1, f2 }
    }

    pub fn identity() -> PlaneEndo {
        PlaneEndo { f1: BiPoly::x(), f2: BiPoly::y() }
    }

    /// The coordinate swap (Y, X).
    pub fn swap() -> PlaneEndo {
        PlaneEndo { f1: BiPoly::y(), f2: BiPoly::x() }
    }

    pub fn is_identity(&self) -> bool {
        self.f1 == BiPoly::x() && self.f2 == BiPoly::y()
    }

    pub fn degree(&self) -> Degree {
        self.f1.degree().max(self.f2.degree())
    }

    /// self o g, i.e. ξ -> self(g(ξ)).
    pub fn compose(&self, g: &PlaneEndo) -> PlaneEndo {
        PlaneEndo {
            f1: self.f1.compose(&g.f1, &g.f2),
            f2: self.f2.compose(&g.f1, &g.f2),
        }
    }

    pub fn eval(&self, p: &Point) -> Point {
        Point { x: self.f1.eval(&p.x, &p.y), y: self.f2.eval(&p.x, &p.y) }
    }

    /// Determinant of the matrix of partial derivatives, as a polynomial.
    /// Constant and nonzero for any automorphism.
    pub fn jacobian_det(&self) -> BiPoly {
        self.f1.dx().mul(&self.f2.dy()).sub(&self.f1.dy().mul(&self.f2.dx()))
    }

    /// The exact Jacobian matrix at a point.
    pub fn derivative_at(&self, p: &Point) -> Mat2 {
        Mat2 {
            a: self.f1.dx().eval(&p.x, &p.y),
            b: self.f1.dy().eval(&p.x, &p.y),
            c: self.f2.dx().eval(&p.x, &p.y),
            d: self.f2.dy().eval(&p.x, &p.y),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.f1.is_rational() && self.f2.is_rational()
    }
}

impl fmt::Display for PlaneEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

/// An invertible affine map ξ -> L ξ + v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: Mat2,
    pub translation: (Scalar, Scalar),
}

impl AffineMap {
    pub fn new(linear: Mat2, translation: (Scalar, Scalar)) -> AffineMap {
        assert!(!linear.det().is_zero(), "affine map must be invertible");
        AffineMap { linear, translation }
    }

    pub fn identity() -> AffineMap {
        AffineMap::new(Mat2::identity(), (Scalar::zero(), Scalar::zero()))
    }

    pub fn swap() -> AffineMap {
        AffineMap::new(
            Mat2 { a: Scalar::zero(), b: Scalar::one(), c: Scalar::one(), d: Scalar::zero() },
            (Scalar::zero(), Scalar::zero()),
        )
    }

    pub fn translation(v: (Scalar, Scalar)) -> AffineMap {
        AffineMap::new(Mat2::identity(), v)
    }

    pub fn to_endo(&self) -> PlaneEndo {
        let l = &self.linear;
        PlaneEndo {
            f1: BiPoly::x()
                .scale(&l.a)
                .add(&BiPoly::y().scale(&l.b))
                .add(&BiPoly::constant(self.translation.0.clone())),
            f2: BiPoly::x()
                .scale(&l.c)
                .add(&BiPoly::y().scale(&l.d))
                .add(&BiPoly::constant(self.translation.1.clone())),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse();
        let t = inv.apply(&Point::new(self.translation.0.clone(), self.translation.1.clone()));
        AffineMap { linear: inv, translation: (-&t.x, -&t.y) }
    }

    /// self o other.
    pub fn compose(&self, o: &AffineMap) -> AffineMap {
        let linear = self.linear.mul(&o.linear);
        let t = self.linear.apply(&Point::new(o.translation.0.clone(), o.translation.1.clone()));
        AffineMap {
            linear,
            translation: (&t.x + &self.translation.0, &t.y + &self.translation.1),
        }
    }

    /// True when the map is also triangular, i.e. the linear part is upper
    /// triangular (lower-left entry zero).
    pub fn is_triangular(&self) -> bool {
        self.linear.c.is_zero()
    }

    pub fn from_endo(e: &PlaneEndo) -> Option<AffineMap> {
        if e.degree() > Degree::Finite(1) {
            return None;
        }
        let linear = Mat2 {
            a: e.f1.coeff((1, 0)),
            b: e.f1.coeff((0, 1)),
            c: e.f2.coeff((1, 0)),
            d: e.f2.coeff((0, 1)),
        };
        if linear.det().is_zero() {
            return None;
        }
        Some(AffineMap { linear, translation: (e.f1.coeff((0, 0)), e.f2.coeff((0, 0))) })
    }
}

/// A triangular (de Jonquieres) automorphism (aX + p(Y), bY + c) with
/// a, b nonzero. Its Jacobian is a*b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularMap {
    pub a: Scalar,
    pub p: UniPoly,
    pub b: Scalar,
    pub c: Scalar,
}

impl TriangularMap {
    pub fn new(a: Scalar, p: UniPoly, b: Scalar, c: Scalar) -> TriangularMap {
        assert!(!a.is_zero() && !b.is_zero(), "triangular map must be invertible");
        TriangularMap { a, p: p.with_var("Y"), b, c }
    }

    pub fn identity() -> TriangularMap {
        TriangularMap::new(Scalar::one(), UniPoly::zero(), Scalar::one(), Scalar::zero())
    }

    pub fn diagonal(a: Scalar, b: Scalar) -> TriangularMap {
        TriangularMap::new(a, UniPoly::zero(), b, Scalar::zero())
    }

    pub fn degree(&self) -> u32 {
        self.p.degree().map_or(1, |d| (d as u32).max(1))
    }

    pub fn is_affine(&self) -> bool {
        self.p.degree().map_or(true, |d| d <= 1)
    }

    pub fn jacobian(&self) -> Scalar {
        &self.a * &self.b
    }

    pub fn to_endo(&self) -> PlaneEndo {
        PlaneEndo {
            f1: BiPoly::x().scale(&self.a).add(&BiPoly::from_y_poly(&self.p)),
            f2: BiPoly::y().scale(&self.b).add(&BiPoly::constant(self.c.clone())),
        }
    }

    pub fn inverse(&self) -> TriangularMap {
        let ai = self.a.inv();
        let bi = self.b.inv();
        // Y-part inverse: (Y - c)/b
        let neg_cb = -&(&self.c * &bi);
        let ylin = UniPoly::new(vec![neg_cb.clone(), bi.clone()]).with_var("Y");
        let p_inv = self.p.compose(&ylin).scale(&(-&ai));
        TriangularMap::new(ai, p_inv, bi, neg_cb)
    }

    /// self o other, still triangular.
    pub fn compose(&self, o: &TriangularMap) -> TriangularMap {
        let ylin = UniPoly::new(vec![o.c.clone(), o.b.clone()]).with_var("Y");
        let p = o.p.scale(&self.a).add(&self.p.compose(&ylin));
        TriangularMap::new(
            &self.a * &o.a,
            p,
            &self.b * &o.b,
            &(&self.b * &o.c) + &self.c,
        )
    }

    pub fn from_endo(e: &PlaneEndo) -> Option<TriangularMap> {
        // f2 must be bY + c, f1 must be aX + p(Y)
        if e.f2.degree_x() > Degree::Finite(0) || e.f2.degree_y() > Degree::Finite(1) {
            return None;
        }
        if e.f1.degree_x() > Degree::Finite(1) {
            return None;
        }
        if e.f1.terms().any(|(&(i, j), _)| i == 1 && j > 0) {
            return None;
        }
        let a = e.f1.coeff((1, 0));
        let b = e.f2.coeff((0, 1));
        if a.is_zero() || b.is_zero() {
            return None;
        }
        let p = e.f1.sub(&BiPoly::x().scale(&a)).as_y_poly()?;
        Some(TriangularMap::new(a, p, b, e.f2.coeff((0, 0))))
    }
}

impl fmt::Display for TriangularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_endo())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{}'", c as char))),
        }
    }

    fn err(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer".into()));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let n = self.integer()?;
        use num_traits::ToPrimitive;
        n.to_u32().ok_or(Error::Syntax { offset: start, message: "exponent too large".into() })
    }

    /// coeff := integer [ "/" positive-integer ]
    fn coeff(&mut self) -> Result<Scalar> {
        let start = self.pos;
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            use num_traits::Zero;
            if den.is_zero() {
                return Err(Error::Syntax { offset: start, message: "zero denominator".into() });
            }
            Ok(Scalar::Rat(crate::scalar::Rational::new(num, den)))
        } else {
            Ok(Scalar::Rat(crate::scalar::Rational::from_integer(num)))
        }
    }

    /// mono := "X" ["^" nat] ["*" "Y" ["^" nat]] | "Y" ["^" nat]
    fn mono(&mut self) -> Result<(u32, u32)> {
        match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                let i = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() == Some(b'Y') {
                        self.pos += 1;
                        let j = if self.peek() == Some(b'^') {
                            self.pos += 1;
                            self.exponent()?
                        } else {
                            1
                        };
                        return Ok((i, j));
                    }
                    // a '*' after a monomial must introduce Y
                    return Err(self.err("expected 'Y'".into()));
                }
                if let Some(c) = self.peek() {
                    if c.is_ascii_alphabetic() {
                        return Err(self.unknown_variable());
                    }
                }
                Ok((i, 0))
            }
            Some(b'Y') => {
                self.pos += 1;
                let j = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                if let Some(c) = self.peek() {
                    if c.is_ascii_alphabetic() {
                        return Err(self.unknown_variable());
                    }
                }
                Ok((0, j))
            }
            Some(c) if c.is_ascii_alphabetic() => Err(self.unknown_variable()),
            _ => Err(self.err("expected 'X' or 'Y'".into())),
        }
    }

    fn unknown_variable(&mut self) -> Error {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        while end < self.bytes.len() && self.bytes[end].is_ascii_alphanumeric() {
            end += 1;
        }
        Error::UnknownVariable {
            offset: start,
            name: std::str::from_utf8(&self.bytes[start..end]).unwrap_or("?").to_string(),
        }
    }

    /// term := coeff ["*"] mono | coeff | mono
    /// (the separating '*' may be omitted after a coefficient)
    fn term(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coeff()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        let e = self.mono()?;
                        Ok(BiPoly::monomial(e, coeff))
                    }
                    Some(b'X') | Some(b'Y') => {
                        let e = self.mono()?;
                        Ok(BiPoly::monomial(e, coeff))
                    }
                    Some(c) if c.is_ascii_alphabetic() => Err(self.unknown_variable()),
                    _ => Ok(BiPoly::constant(coeff)),
                }
            }
            _ => {
                let e = self.mono()?;
                Ok(BiPoly::monomial(e, Scalar::one()))
            }
        }
    }

    /// poly := ["+"|"-"] term (("+"|"-") term)*
    fn poly(&mut self) -> Result<BiPoly> {
        let mut acc = BiPoly::zero();
        let mut negate = false;
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
            }
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn endo(&mut self) -> Result<PlaneEndo> {
        self.expect(b'(')?;
        let f1 = self.poly()?;
        self.expect(b',')?;
        let f2 = self.poly()?;
        self.expect(b')')?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input".into()));
        }
        Ok(PlaneEndo::new(f1, f2))
    }
}

/// Parse the ASCII grammar `"(" poly "," poly ")"`. Round-trips with
/// `format_endo` on the canonical form.
pub fn parse_endo(text: &str) -> Result<PlaneEndo> {
    Parser::new(text).endo()
}

/// Canonical printing: terms in descending monomial order, reduced
/// fractions, explicit `*` and `^`.
pub fn format_endo(e: &PlaneEndo) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(text: &str) -> PlaneEndo {
        parse_endo(text).unwrap()
    }

    #[test]
    fn parse_basic() {
        let f = e("(2*X + Y^3, 3*Y)");
        assert_eq!(f.f1, BiPoly::x().scale(&Scalar::int(2)).add(&BiPoly::y().pow(3)));
        assert_eq!(f.f2, BiPoly::y().scale(&Scalar::int(3)));
    }

    #[test]
    fn parse_rational_coeff() {
        let f = e("(X + 1/25*Y^3, Y)");
        assert_eq!(f.f1.coeff((0, 3)), Scalar::ratio(1, 25));
    }

    #[test]
    fn parse_error_position() {
        match parse_endo("(X*, Y)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_unknown_variable() {
        match parse_endo("(X + Z, Y)") {
            Err(Error::UnknownVariable { name, offset }) => {
                assert_eq!(name, "Z");
                assert_eq!(offset, 5);
            }
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn parse_implicit_star_and_signs() {
        // the CLI accepts "2X" for "2*X"
        let f = e("(2X+Y^3, 3Y)");
        assert_eq!(f, e("(2*X + Y^3, 3*Y)"));
        let g = e("(-Y, X)");
        assert_eq!(g.f1, BiPoly::y().neg());
    }

    #[test]
    fn format_round_trip() {
        for s in [
            "(2*X + Y^3, 3*Y)",
            "(X, Y)",
            "(-Y, X)",
            "(X + 1/25*Y^3, Y)",
            "(2*X - 1/2*Y + 3, -X + Y^2 - 7)",
        ] {
            let f = e(s);
            assert_eq!(e(&format_endo(&f)), f);
        }
    }

    #[test]
    fn compose_cases() {
        // (2X,3Y) o (X+Y,Y) = (2X+2Y, 3Y)
        let f = e("(2*X, 3*Y)");
        let g = e("(X + Y, Y)");
        assert_eq!(f.compose(&g), e("(2*X + 2*Y, 3*Y)"));
        // phi o f0 o phi^{-1} with phi = (X, Y+X^2), f0 = (2X, 3Y)
        let phi = e("(X, Y + X^2)");
        let phi_inv = e("(X, Y - X^2)");
        let f0 = e("(2*X, 3*Y)");
        let conj = phi.compose(&f0).compose(&phi_inv);
        assert_eq!(conj, e("(2*X, 3*Y + X^2)"));
        // f o id = f
        assert_eq!(f.compose(&PlaneEndo::identity()), f);
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(e("(2*X + Y^3, 3*Y)").jacobian_det(), BiPoly::int(6));
        assert_eq!(e("(Y, X + Y^2)").jacobian_det(), BiPoly::int(-1));
        assert_eq!(PlaneEndo::identity().jacobian_det(), BiPoly::int(1));
    }

    #[test]
    fn derivative_at_examples() {
        let m = e("(2*X + Y^3, 3*Y)").derivative_at(&Point::origin());
        assert_eq!(
            m,
            Mat2 { a: Scalar::int(2), b: Scalar::zero(), c: Scalar::zero(), d: Scalar::int(3) }
        );
        let m = e("(Y, X + Y^2)").derivative_at(&Point::origin());
        assert_eq!(
            m,
            Mat2 { a: Scalar::zero(), b: Scalar::one(), c: Scalar::one(), d: Scalar::zero() }
        );
        let m = PlaneEndo::identity().derivative_at(&Point::new(Scalar::int(5), Scalar::int(-7)));
        assert_eq!(m, Mat2::identity());
    }

    #[test]
    fn chain_rule_on_examples() {
        let f = e("(Y, X + Y^2)");
        let g = e("(2*X, 3*Y + X^2)");
        let lhs = f.compose(&g).jacobian_det();
        let rhs = f.jacobian_det().compose(&g.f1, &g.f2).mul(&g.jacobian_det());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn triangular_algebra() {
        let t = TriangularMap::new(
            Scalar::int(2),
            UniPoly::from_ints(&[0, 0, 0, 1]),
            Scalar::int(3),
            Scalar::int(5),
        );
        assert_eq!(t.to_endo(), e("(2*X + Y^3, 3*Y + 5)"));
        let ti = t.inverse();
        assert!(t.to_endo().compose(&ti.to_endo()).is_identity());
        assert!(ti.to_endo().compose(&t.to_endo()).is_identity());
        let t2 = TriangularMap::new(
            Scalar::int(1),
            UniPoly::from_ints(&[1, 2]),
            Scalar::int(1),
            Scalar::int(0),
        );
        assert_eq!(t.compose(&t2).to_endo(), t.to_endo().compose(&t2.to_endo()));
    }

    #[test]
    fn affine_algebra() {
        let a = AffineMap::new(
            Mat2 { a: Scalar::int(1), b: Scalar::int(2), c: Scalar::int(1), d: Scalar::int(3) },
            (Scalar::int(4), Scalar::int(-1)),
        );
        let ai = a.inverse();
        assert!(a.to_endo().compose(&ai.to_endo()).is_identity());
        let b = AffineMap::swap();
        assert_eq!(a.compose(&b).to_endo(), a.to_endo().compose(&b.to_endo()));
        assert!(!a.is_triangular());
        assert!(AffineMap::translation((Scalar::int(1), Scalar::zero())).is_triangular());
    }

    #[test]
    fn from_endo_recognition() {
        let t = TriangularMap::from_endo(&e("(2*X + Y^3, 3*Y + 5)")).unwrap();
        assert_eq!(t.a, Scalar::int(2));
        assert_eq!(t.c, Scalar::int(5));
        assert!(TriangularMap::from_endo(&e("(Y, X)")).is_none());
        assert!(TriangularMap::from_endo(&e("(X + X*Y, Y)")).is_none());
        let a = AffineMap::from_endo(&e("(Y, X)")).unwrap();
        assert_eq!(a, AffineMap::swap());
        assert!(AffineMap::from_endo(&e("(X + Y, X + Y)")).is_none());
        assert!(AffineMap::from_endo(&e("(X^2, Y)")).is_none());
    }
}
