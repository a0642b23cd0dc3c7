//! Sparse bivariate polynomials over `Scalar`.
//!
//! Terms live in a `BTreeMap` keyed by exponent pairs `(i, j)` for X^i Y^j.
//! The natural tuple order on keys is exactly the monomial order used
//! throughout: lexicographic with the X-exponent dominant.

use crate::error::Result;
use crate::scalar::{common_disc, Scalar};
use crate::upoly::UniPoly;
use num_bigint::BigInt;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type Exp = (u32, u32);

/// Total order on monomials: X^k Y^l < X^m Y^n iff k < m, or k = m and l < n.
pub struct MonomialOrder;

impl MonomialOrder {
    pub fn cmp(a: Exp, b: Exp) -> Ordering {
        a.cmp(&b)
    }
}

/// Degree with a dedicated minus-infinity for the zero polynomial, so that
/// max/product formulas stay total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn expect_finite(self) -> u32 {
        self.finite().expect("degree of the zero polynomial")
    }

    pub fn mul(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a * b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<Exp, Scalar>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> BiPoly {
        let mut p = BiPoly::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn int(n: i64) -> BiPoly {
        BiPoly::constant(Scalar::int(n))
    }

    pub fn x() -> BiPoly {
        BiPoly::monomial((1, 0), Scalar::one())
    }

    pub fn y() -> BiPoly {
        BiPoly::monomial((0, 1), Scalar::one())
    }

    pub fn monomial(e: Exp, c: Scalar) -> BiPoly {
        let mut p = BiPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Scalar)>>(terms: I) -> BiPoly {
        let mut p = BiPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exp) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(i, j)| Degree::Finite(i + j))
            .max()
            .unwrap_or(Degree::NegInf)
    }

    pub fn degree_x(&self) -> Degree {
        self.terms.keys().map(|&(i, _)| Degree::Finite(i)).max().unwrap_or(Degree::NegInf)
    }

    pub fn degree_y(&self) -> Degree {
        self.terms.keys().map(|&(_, j)| Degree::Finite(j)).max().unwrap_or(Degree::NegInf)
    }

    pub fn common_disc(&self) -> Result<Option<BigInt>> {
        common_disc(self.terms.values())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    /// The constant value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(Scalar::zero())
        } else if self.is_constant() {
            Some(self.coeff((0, 0)))
        } else {
            None
        }
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(Scalar::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn dx(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term((i - 1, j), &Scalar::int(i as i64) * c);
            }
        }
        out
    }

    pub fn dy(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term((i, j - 1), &Scalar::int(j as i64) * c);
            }
        }
        out
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        let mut xpows: Vec<Scalar> = vec![Scalar::one()];
        let mut ypows: Vec<Scalar> = vec![Scalar::one()];
        for (&(i, j), c) in &self.terms {
            while xpows.len() <= i as usize {
                let next = &xpows[xpows.len() - 1] * x;
                xpows.push(next);
            }
            while ypows.len() <= j as usize {
                let next = &ypows[ypows.len() - 1] * y;
                ypows.push(next);
            }
            acc = &acc + &(&(c * &xpows[i as usize]) * &ypows[j as usize]);
        }
        acc
    }

    /// Substitute X := x0, producing a univariate polynomial in Y.
    pub fn substitute_x(&self, x0: &Scalar) -> UniPoly {
        let mut coeffs: Vec<Scalar> = Vec::new();
        let mut xpows: Vec<Scalar> = vec![Scalar::one()];
        for (&(i, j), c) in &self.terms {
            while xpows.len() <= i as usize {
                let next = &xpows[xpows.len() - 1] * x0;
                xpows.push(next);
            }
            while coeffs.len() <= j as usize {
                coeffs.push(Scalar::zero());
            }
            coeffs[j as usize] = &coeffs[j as usize] + &(c * &xpows[i as usize]);
        }
        UniPoly::new(coeffs).with_var("Y")
    }

    /// Substitute Y := y0, producing a univariate polynomial in X.
    pub fn substitute_y(&self, y0: &Scalar) -> UniPoly {
        let mut coeffs: Vec<Scalar> = Vec::new();
        let mut ypows: Vec<Scalar> = vec![Scalar::one()];
        for (&(i, j), c) in &self.terms {
            while ypows.len() <= j as usize {
                let next = &ypows[ypows.len() - 1] * y0;
                ypows.push(next);
            }
            while coeffs.len() <= i as usize {
                coeffs.push(Scalar::zero());
            }
            coeffs[i as usize] = &coeffs[i as usize] + &(c * &ypows[j as usize]);
        }
        UniPoly::new(coeffs).with_var("X")
    }

    /// Group terms as a polynomial in X with UniPoly-in-Y coefficients,
    /// returned sparsely as (x-exponent, poly) pairs in ascending order.
    fn rows_by_x(&self) -> Vec<(u32, UniPoly)> {
        let mut rows: BTreeMap<u32, Vec<Scalar>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let row = rows.entry(i).or_default();
            while row.len() <= j as usize {
                row.push(Scalar::zero());
            }
            row[j as usize] = c.clone();
        }
        rows.into_iter().map(|(i, v)| (i, UniPoly::new(v).with_var("Y"))).collect()
    }

    /// Coefficients of Y^j as polynomials in X, ascending in j (dense).
    pub fn y_coefficients(&self) -> Vec<UniPoly> {
        let deg_y = match self.degree_y() {
            Degree::NegInf => return vec![],
            Degree::Finite(d) => d,
        };
        let mut cols: Vec<Vec<Scalar>> = vec![Vec::new(); (deg_y + 1) as usize];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            while col.len() <= i as usize {
                col.push(Scalar::zero());
            }
            col[i as usize] = c.clone();
        }
        cols.into_iter().map(|v| UniPoly::new(v).with_var("X")).collect()
    }

    /// p(u, v): substitute u for X and v for Y. Horner in X, Horner in Y.
    pub fn compose(&self, u: &BiPoly, v: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let rows = self.rows_by_x();
        let mut acc = BiPoly::zero();
        let mut prev_exp: Option<u32> = None;
        for (i, ypoly) in rows.iter().rev() {
            if let Some(p) = prev_exp {
                // multiply by u^(p - i)
                for _ in 0..(p - i) {
                    acc = acc.mul(u);
                }
            }
            acc = acc.add(&substitute_upoly(ypoly, v));
            prev_exp = Some(*i);
        }
        if let Some(p) = prev_exp {
            for _ in 0..p {
                acc = acc.mul(u);
            }
        }
        acc
    }

    /// The homogeneous part of top total degree; None for the zero polynomial.
    pub fn leading_form(&self) -> Option<HomForm> {
        let deg = self.degree().finite()?;
        let mut coeffs = vec![Scalar::zero(); (deg + 1) as usize];
        for (&(i, j), c) in &self.terms {
            if i + j == deg {
                coeffs[i as usize] = c.clone();
            }
        }
        Some(HomForm { deg, coeffs })
    }

    /// Build from a univariate polynomial in Y.
    pub fn from_y_poly(p: &UniPoly) -> BiPoly {
        BiPoly::from_terms(
            p.coeffs().iter().enumerate().map(|(j, c)| ((0u32, j as u32), c.clone())),
        )
    }

    /// Build from a univariate polynomial in X.
    pub fn from_x_poly(p: &UniPoly) -> BiPoly {
        BiPoly::from_terms(
            p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0u32), c.clone())),
        )
    }

    /// Extract as a univariate polynomial in Y, if no X appears.
    pub fn as_y_poly(&self) -> Option<UniPoly> {
        if self.terms.keys().any(|&(i, _)| i > 0) {
            return None;
        }
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (&(_, j), c) in &self.terms {
            while coeffs.len() <= j as usize {
                coeffs.push(Scalar::zero());
            }
            coeffs[j as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs).with_var("Y"))
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }
}

/// Substitute v into a univariate polynomial (Horner).
pub fn substitute_upoly(p: &UniPoly, v: &BiPoly) -> BiPoly {
    let mut acc = BiPoly::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(v);
        acc = acc.add(&BiPoly::constant(c.clone()));
    }
    acc
}

/// A homogeneous form of fixed degree; coeffs[i] is the coefficient of
/// X^i Y^(deg - i). Used for leading-form arithmetic in the decomposition
/// loop and for composition-degree prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm {
    pub deg: u32,
    pub coeffs: Vec<Scalar>,
}

impl HomForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &HomForm) -> HomForm {
        let deg = self.deg + other.deg;
        let mut coeffs = vec![Scalar::zero(); (deg + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        HomForm { deg, coeffs }
    }

    pub fn pow(&self, e: u32) -> HomForm {
        let mut acc = HomForm { deg: 0, coeffs: vec![Scalar::one()] };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> HomForm {
        HomForm { deg: self.deg, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &HomForm) -> HomForm {
        assert_eq!(self.deg, other.deg, "adding forms of different degree");
        HomForm {
            deg: self.deg,
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// If self = c * other for a scalar c, return c.
    pub fn proportional_to(&self, other: &HomForm) -> Option<Scalar> {
        if self.deg != other.deg {
            return None;
        }
        let pivot = other.coeffs.iter().position(|c| !c.is_zero())?;
        let c = &self.coeffs[pivot] / &other.coeffs[pivot];
        if self == &other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }
}

/// Resultant of p and q with respect to Y: the determinant of the Sylvester
/// matrix of p, q viewed as polynomials in Y over Q[X]. Vanishes identically
/// iff p and q share a factor of positive Y-degree.
pub fn resultant_y(p: &BiPoly, q: &BiPoly) -> UniPoly {
    let pc = p.y_coefficients();
    let qc = q.y_coefficients();
    if pc.is_empty() || qc.is_empty() {
        // resultant with the zero polynomial
        return UniPoly::zero().with_var("X");
    }
    let m = pc.len() - 1; // deg_Y p
    let n = qc.len() - 1; // deg_Y q
    if m == 0 && n == 0 {
        return UniPoly::one().with_var("X");
    }
    if m == 0 {
        return pc[0].pow(n);
    }
    if n == 0 {
        return qc[0].pow(m);
    }
    let size = m + n;
    let zero = UniPoly::zero().with_var("X");
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for k in 0..=m {
            mat[row][row + k] = pc[m - k].clone();
        }
    }
    for row in 0..m {
        for k in 0..=n {
            mat[n + row][row + k] = qc[n - k].clone();
        }
    }
    poly_matrix_det(mat)
}

/// Fraction-free (Bareiss) determinant over the polynomial ring Q[X];
/// all divisions are exact.
fn poly_matrix_det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one().with_var("X");
    }
    let mut sign = false;
    let mut prev = UniPoly::one().with_var("X");
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return UniPoly::zero().with_var("X"),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = UniPoly::zero().with_var("X");
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, mag: &Scalar, e: Exp) -> fmt::Result {
    let unit = mag.is_one();
    let mut wrote_coeff = false;
    if !unit || e == (0, 0) {
        match mag {
            Scalar::Rat(_) => write!(f, "{mag}")?,
            Scalar::Quad(_) => write!(f, "({mag})")?,
        }
        wrote_coeff = true;
    }
    let (i, j) = e;
    if i > 0 {
        if wrote_coeff {
            write!(f, "*")?;
        }
        write!(f, "X")?;
        if i > 1 {
            write!(f, "^{i}")?;
        }
        wrote_coeff = true;
    }
    if j > 0 {
        if wrote_coeff {
            write!(f, "*")?;
        }
        write!(f, "Y")?;
        if j > 1 {
            write!(f, "^{j}")?;
        }
    }
    Ok(())
}

impl fmt::Display for BiPoly {
    /// Canonical form: terms in descending monomial order, reduced fraction
    /// coefficients, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let (neg, mag) = match c {
                Scalar::Rat(r) if r < &crate::scalar::rat_int(0) => (true, -c),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_term(f, &mag, e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> BiPoly {
        BiPoly::x()
    }

    fn y() -> BiPoly {
        BiPoly::y()
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(BiPoly::zero().degree(), Degree::NegInf);
        assert!(Degree::NegInf < Degree::Finite(0));
        assert_eq!(x().mul(&y()).degree(), Degree::Finite(2));
    }

    #[test]
    fn compose_substitution() {
        // (X+Y) o (X^2, Y) = X^2 + Y
        let p = x().add(&y());
        let got = p.compose(&x().pow(2), &y());
        assert_eq!(got, x().pow(2).add(&y()));
        // (XY) o (X+1, Y-1) = XY - X + Y - 1
        let p = x().mul(&y());
        let got = p.compose(&x().add(&BiPoly::int(1)), &y().sub(&BiPoly::int(1)));
        let want = x().mul(&y()).sub(&x()).add(&y()).sub(&BiPoly::int(1));
        assert_eq!(got, want);
        // identity substitution
        let p = x().pow(3).add(&y().mul(&x())).add(&BiPoly::int(7));
        assert_eq!(p.compose(&x(), &y()), p);
    }

    #[test]
    fn resultant_henon_system() {
        // res_Y(Y - X, X + Y^2 - Y) = X^2 (hand Sylvester determinant)
        let p = y().sub(&x());
        let q = x().add(&y().pow(2)).sub(&y());
        assert_eq!(resultant_y(&p, &q), UniPoly::from_ints(&[0, 0, 1]).with_var("X"));
    }

    #[test]
    fn resultant_constant_cases() {
        // res_Y(Y, X) = X
        assert_eq!(resultant_y(&y(), &x()), UniPoly::from_ints(&[0, 1]).with_var("X"));
        // res_Y(Y-1, Y+1) = 2
        let got = resultant_y(&y().sub(&BiPoly::int(1)), &y().add(&BiPoly::int(1)));
        assert_eq!(got, UniPoly::from_ints(&[2]).with_var("X"));
    }

    #[test]
    fn resultant_detects_common_factor() {
        // p = (Y - X) * (Y + 1), q = (Y - X) * (Y + 2) share Y - X
        let common = y().sub(&x());
        let p = common.mul(&y().add(&BiPoly::int(1)));
        let q = common.mul(&y().add(&BiPoly::int(2)));
        assert!(resultant_y(&p, &q).is_zero());
    }

    #[test]
    fn leading_form_proportionality() {
        // top form of (2X + Y^3) is Y^3; (Y^3) = 1 * (Y)^3
        let p = BiPoly::int(2).mul(&x()).add(&y().pow(3));
        let lf = p.leading_form().unwrap();
        let ylf = y().leading_form().unwrap();
        assert_eq!(lf.proportional_to(&ylf.pow(3)), Some(Scalar::one()));
        let q = x().pow(2).add(&y().pow(2));
        assert_eq!(q.leading_form().unwrap().proportional_to(&ylf.pow(2)), None);
    }

    #[test]
    fn display_canonical_order() {
        let p = BiPoly::int(2)
            .mul(&x())
            .add(&y().pow(3))
            .sub(&BiPoly::monomial((1, 1), Scalar::ratio(1, 2)));
        assert_eq!(p.to_string(), "-1/2*X*Y + 2*X + Y^3");
    }

    #[test]
    fn eval_and_substitute() {
        let p = x().pow(2).add(&y().scale(&Scalar::int(3)));
        assert_eq!(p.eval(&Scalar::int(2), &Scalar::int(5)), Scalar::int(19));
        let u = p.substitute_x(&Scalar::int(2));
        assert_eq!(u.coeff(0), Scalar::int(4));
        assert_eq!(u.coeff(1), Scalar::int(3));
    }
}
