//! One-parameter conjugation families with Laurent coefficients in t,
//! their limits at t = 0, and the closure witness: for any automorphism, a
//! degeneration family whose limit is a semisimple map sharing its
//! Jacobian (and trace, in the locally finite case).

use crate::bipoly::{BiPoly, Exp};
use crate::endo::{PlaneEndo, Point, TriangularMap};
use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::matrix_min_poly;
use crate::scalar::Scalar;
use crate::upoly::{quadratic_roots, rational_roots, roots_in_field, upoly_gcd, UniPoly};
use crate::word::{cyclic_reduce, Automorphism};
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------------
// Laurent scalars and family polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial in the deformation parameter t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Scalar>, // exponent -> nonzero coefficient
}

impl LaurentScalar {
    pub fn zero() -> LaurentScalar {
        LaurentScalar { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> LaurentScalar {
        let mut l = LaurentScalar::zero();
        l.add_term(0, c);
        l
    }

    pub fn monomial(exp: i64, c: Scalar) -> LaurentScalar {
        let mut l = LaurentScalar::zero();
        l.add_term(exp, c);
        l
    }

    pub fn t() -> LaurentScalar {
        LaurentScalar::monomial(1, Scalar::one())
    }

    fn add_term(&mut self, exp: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent of t; None for zero.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, o: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (&e, c) in &o.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &o.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Substitute t -> t^m (an exact reparametrization for m >= 1).
    pub fn stretch(&self, m: i64) -> LaurentScalar {
        assert!(m >= 1);
        LaurentScalar { terms: self.terms.iter().map(|(&e, c)| (e * m, c.clone())).collect() }
    }

    /// Exact value at a nonzero rational (or quadratic) t0.
    pub fn specialize(&self, t0: &Scalar) -> Scalar {
        assert!(!t0.is_zero(), "families specialize at nonzero t only");
        let mut acc = Scalar::zero();
        for (&e, c) in &self.terms {
            acc = &acc + &(c * &t0.pow(e));
        }
        acc
    }

    /// If this is a single monomial u * t^e, return (e, u).
    pub fn as_monomial(&self) -> Option<(i64, Scalar)> {
        if self.terms.len() == 1 {
            let (&e, c) = self.terms.iter().next().unwrap();
            Some((e, c.clone()))
        } else {
            None
        }
    }
}

impl fmt::Display for LaurentScalar {
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
            let unit = mag.is_one();
            if !unit || e == 0 {
                match &mag {
                    Scalar::Quad(_) => write!(f, "({mag})")?,
                    _ => write!(f, "{mag}")?,
                }
            }
            if e != 0 {
                if !unit {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A bivariate polynomial whose coefficients are Laurent polynomials in t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoly {
    terms: BTreeMap<Exp, LaurentScalar>,
}

impl FamilyPoly {
    pub fn zero() -> FamilyPoly {
        FamilyPoly { terms: BTreeMap::new() }
    }

    pub fn from_bipoly(p: &BiPoly) -> FamilyPoly {
        let mut out = FamilyPoly::zero();
        for (&e, c) in p.terms() {
            out.add_term(e, LaurentScalar::constant(c.clone()));
        }
        out
    }

    pub fn monomial(e: Exp, c: LaurentScalar) -> FamilyPoly {
        let mut out = FamilyPoly::zero();
        out.add_term(e, c);
        out
    }

    fn add_term(&mut self, e: Exp, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &FamilyPoly) -> FamilyPoly {
        let mut out = self.clone();
        for (&e, c) in &o.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &FamilyPoly) -> FamilyPoly {
        let mut out = FamilyPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &o.terms {
                out.add_term((i1 + i2, j1 + j2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &LaurentScalar) -> FamilyPoly {
        let mut out = FamilyPoly::zero();
        for (&e, v) in &self.terms {
            out.add_term(e, v.mul(c));
        }
        out
    }

    pub fn stretch(&self, m: i64) -> FamilyPoly {
        FamilyPoly { terms: self.terms.iter().map(|(&e, c)| (e, c.stretch(m))).collect() }
    }

    pub fn specialize(&self, t0: &Scalar) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&e, c)| (e, c.specialize(t0))))
    }

    /// Substitute a constant polynomial p(X, Y) for this polynomial's
    /// variables: p(u, v) with u, v family polynomials (Horner).
    pub fn compose_bipoly(p: &BiPoly, u: &FamilyPoly, v: &FamilyPoly) -> FamilyPoly {
        // group p by x-exponent, Horner in u, inner Horner in v
        let mut rows: BTreeMap<u32, Vec<Scalar>> = BTreeMap::new();
        for (&(i, j), c) in p.terms() {
            let row = rows.entry(i).or_default();
            while row.len() <= j as usize {
                row.push(Scalar::zero());
            }
            row[j as usize] = c.clone();
        }
        let mut acc = FamilyPoly::zero();
        let mut prev: Option<u32> = None;
        for (&i, ycoeffs) in rows.iter().rev() {
            if let Some(p) = prev {
                for _ in 0..(p - i) {
                    acc = acc.mul(u);
                }
            }
            // inner Horner over v
            let mut inner = FamilyPoly::zero();
            for c in ycoeffs.iter().rev() {
                inner = inner.mul(v);
                if !c.is_zero() {
                    inner = inner.add(&FamilyPoly::monomial(
                        (0, 0),
                        LaurentScalar::constant(c.clone()),
                    ));
                }
            }
            acc = acc.add(&inner);
            prev = Some(i);
        }
        if let Some(p) = prev {
            for _ in 0..p {
                acc = acc.mul(u);
            }
        }
        acc
    }
}

/// An endomorphism family over Laurent coefficients; specializing at any
/// nonzero t yields a plane endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyEndo {
    pub f1: FamilyPoly,
    pub f2: FamilyPoly,
}

impl FamilyEndo {
    pub fn from_endo(e: &PlaneEndo) -> FamilyEndo {
        FamilyEndo { f1: FamilyPoly::from_bipoly(&e.f1), f2: FamilyPoly::from_bipoly(&e.f2) }
    }

    /// The family (u t^a X, v t^b Y).
    pub fn monomial_diagonal(u: Scalar, a: i64, v: Scalar, b: i64) -> FamilyEndo {
        assert!(!u.is_zero() && !v.is_zero());
        FamilyEndo {
            f1: FamilyPoly::monomial((1, 0), LaurentScalar::monomial(a, u)),
            f2: FamilyPoly::monomial((0, 1), LaurentScalar::monomial(b, v)),
        }
    }

    /// (tX, Y).
    pub fn scale_x() -> FamilyEndo {
        FamilyEndo::monomial_diagonal(Scalar::one(), 1, Scalar::one(), 0)
    }

    /// (X, tY).
    pub fn scale_y() -> FamilyEndo {
        FamilyEndo::monomial_diagonal(Scalar::one(), 0, Scalar::one(), 1)
    }

    /// (tX, tY).
    pub fn scale_both() -> FamilyEndo {
        FamilyEndo::monomial_diagonal(Scalar::one(), 1, Scalar::one(), 1)
    }

    pub fn specialize(&self, t0: &Scalar) -> PlaneEndo {
        PlaneEndo::new(self.f1.specialize(t0), self.f2.specialize(t0))
    }

    pub fn stretch(&self, m: i64) -> FamilyEndo {
        FamilyEndo { f1: self.f1.stretch(m), f2: self.f2.stretch(m) }
    }

    /// Recognize (u t^a X, v t^b Y).
    fn as_monomial_diagonal(&self) -> Option<(Scalar, i64, Scalar, i64)> {
        let mut it1 = self.f1.terms();
        let (e1, c1) = it1.next()?;
        if it1.next().is_some() || *e1 != (1, 0) {
            return None;
        }
        let mut it2 = self.f2.terms();
        let (e2, c2) = it2.next()?;
        if it2.next().is_some() || *e2 != (0, 1) {
            return None;
        }
        let (a, u) = c1.as_monomial()?;
        let (b, v) = c2.as_monomial()?;
        Some((u, a, v, b))
    }
}

impl fmt::Display for FamilyEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_poly = |poly: &FamilyPoly, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if poly.terms.is_empty() {
                return write!(f, "0");
            }
            let mut first = true;
            for (&(i, j), c) in poly.terms.iter().rev() {
                if first {
                    first = false;
                } else {
                    write!(f, " + ")?;
                }
                let unit = c.as_monomial().is_some_and(|(e, u)| e == 0 && u.is_one());
                let single = c.terms.len() == 1;
                if (i, j) == (0, 0) {
                    if single {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "({c})")?;
                    }
                    continue;
                }
                if !unit {
                    if single && !c.to_string().contains(" ") {
                        write!(f, "{c}*")?;
                    } else {
                        write!(f, "({c})*")?;
                    }
                }
                if i > 0 {
                    write!(f, "X")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                    if j > 0 {
                        write!(f, "*")?;
                    }
                }
                if j > 0 {
                    write!(f, "Y")?;
                    if j > 1 {
                        write!(f, "^{j}")?;
                    }
                }
            }
            Ok(())
        };
        write!(f, "(")?;
        fmt_poly(&self.f1, f)?;
        write!(f, ", ")?;
        fmt_poly(&self.f2, f)?;
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Family conjugation and limits
// ---------------------------------------------------------------------------

/// The family t -> phi_t o f o phi_t^{-1}, exact in Laurent coefficients.
/// Only monomial-diagonal families (u t^a X, v t^b Y) — which cover the
/// stock scalings (tX, Y), (X, tY), (tX, tY) — are invertible here;
/// anything else is rejected.
pub fn family_conjugate(phi_t: &FamilyEndo, f: &PlaneEndo) -> Result<FamilyEndo> {
    let (u, a, v, b) = phi_t.as_monomial_diagonal().ok_or(Error::NonInvertibleFamily)?;
    Ok(monomial_conjugate(&u, a, &v, b, f))
}

/// (u t^a X, v t^b Y) o f o (u t^a X, v t^b Y)^{-1}, termwise: the X^i Y^j
/// coefficient of f1 picks up u^{1-i} v^{-j} t^{a(1-i) - b j}, and of f2
/// picks up u^{-i} v^{1-j} t^{-a i + b(1-j)}.
fn monomial_conjugate(u: &Scalar, a: i64, v: &Scalar, b: i64, f: &PlaneEndo) -> FamilyEndo {
    let mut f1 = FamilyPoly::zero();
    for (&(i, j), c) in f.f1.terms() {
        let (i64i, i64j) = (i as i64, j as i64);
        let coeff = &(c * &u.pow(1 - i64i)) * &v.pow(-i64j);
        f1.add_term((i, j), LaurentScalar::monomial(a * (1 - i64i) - b * i64j, coeff));
    }
    let mut f2 = FamilyPoly::zero();
    for (&(i, j), c) in f.f2.terms() {
        let (i64i, i64j) = (i as i64, j as i64);
        let coeff = &(c * &u.pow(-i64i)) * &v.pow(1 - i64j);
        f2.add_term((i, j), LaurentScalar::monomial(-a * i64i + b * (1 - i64j), coeff));
    }
    FamilyEndo { f1, f2 }
}

/// Coefficientwise constant term, when every coefficient has order >= 0;
/// otherwise the offending monomial is reported.
pub fn limit_at_zero(family: &FamilyEndo) -> Result<PlaneEndo> {
    let mut comps = Vec::with_capacity(2);
    for poly in [&family.f1, &family.f2] {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &poly.terms {
            match c.order() {
                Some(o) if o < 0 => return Err(Error::NegativeOrder { x_exp: i, y_exp: j }),
                _ => {}
            }
            let c0 = c.coeff(0);
            if !c0.is_zero() {
                out = out.add(&BiPoly::monomial((i, j), c0));
            }
        }
        comps.push(out);
    }
    let f2 = comps.pop().unwrap();
    let f1 = comps.pop().unwrap();
    Ok(PlaneEndo::new(f1, f2))
}

// ---------------------------------------------------------------------------
// Closure witness
// ---------------------------------------------------------------------------

/// The scaling conjugation Phi_t = (t^x X, t^y Y) defining a witness
/// family as Phi_t o base o Phi_t^{-1}.
#[derive(Clone, Debug)]
pub struct ScalingConjugation {
    pub x_exp: i64,
    pub y_exp: i64,
}

impl ScalingConjugation {
    /// Phi at a concrete nonzero parameter value.
    pub fn at(&self, t0: &Scalar) -> PlaneEndo {
        TriangularMap::diagonal(t0.pow(self.x_exp), t0.pow(self.y_exp)).to_endo()
    }

    pub fn at_inverse(&self, t0: &Scalar) -> PlaneEndo {
        TriangularMap::diagonal(t0.pow(-self.x_exp), t0.pow(-self.y_exp)).to_endo()
    }

    fn family_of(&self, base: &PlaneEndo) -> FamilyEndo {
        monomial_conjugate(&Scalar::one(), self.x_exp, &Scalar::one(), self.y_exp, base)
    }
}

/// A degeneration family, its limit, and the verification data.
#[derive(Clone, Debug)]
pub struct DegenerationWitness {
    /// t -> Phi_t o base o Phi_t^{-1}, exact.
    pub family: FamilyEndo,
    /// The family at t = 0; always exists and is semisimple.
    pub limit: PlaneEndo,
    /// The conjugate of the source the family degenerates; family(1) = base.
    pub base: PlaneEndo,
    /// source = base_conjugator o base o base_conjugator^{-1}.
    pub base_conjugator: Automorphism,
    pub scaling: ScalingConjugation,
    /// (trace, jac) records: trace is defined for LF sources only.
    pub source_trace: Option<Scalar>,
    pub source_jac: Scalar,
    pub limit_trace: Scalar,
    pub limit_jac: Scalar,
    /// limit in the conjugacy class of the source — true iff the source is
    /// semisimple; positive answers are verified by an explicit conjugator.
    pub limit_in_class: bool,
}

/// Construct a degeneration family for f whose limit at t = 0 is a
/// semisimple automorphism with the same Jacobian (and the same trace when
/// f is locally finite). Triangularizable maps scale to their diagonal
/// part; the others are conjugated over a fixed point of their cyclically
/// reduced form and scaled to the linear part, iterating once more when
/// that linear part is itself not semisimple.
pub fn closure_witness(f: &Automorphism) -> Result<DegenerationWitness> {
    let source_jac = f.jacobian();
    let lf = crate::classify::is_lf(f);

    let (base, base_conjugator, scaling) = if lf {
        let (phi, t) = crate::classify::triangularize(f)?;
        let n = t.p.degree().map_or(1, |d| d as i64 + 1);
        (t.to_endo(), phi, ScalingConjugation { x_exp: n, y_exp: 1 })
    } else {
        let (conj, reduced) = cyclic_reduce(f);
        let g = reduced.composite().clone();
        let xi = rational_or_quadratic_fixed_point(&g)?;
        let shift = Automorphism::affine(crate::endo::AffineMap::translation((
            xi.x.clone(),
            xi.y.clone(),
        )));
        // base fixes the origin: base = shift^{-1} o g o shift
        let base = shift.inverse().endo().compose(&g).compose(shift.endo());
        debug_assert!(base.eval(&Point::origin()) == Point::origin());
        let base_conjugator = conj.compose(&shift);
        let linear = Automorphism::from_endo(&linear_part(&base))?;
        if crate::classify::is_semisimple(&linear) {
            (base, base_conjugator, ScalingConjugation { x_exp: -1, y_exp: -1 })
        } else {
            // The linear part is a Jordan block with eigenvalue
            // lambda = tr/2; move to its eigenbasis and scale X past the
            // whole map: (t^(2-M) X, t^(1-M) Y) sends the rebased map to
            // (lambda X, lambda Y) once M separates the degrees.
            let (c, _) = crate::classify::triangularize(&linear)?;
            let base = c.inverse().endo().compose(&base).compose(c.endo());
            let base_conjugator = base_conjugator.compose(&c);
            let deg = base.degree().finite().unwrap_or(1) as i64;
            let mut m = deg + 4;
            loop {
                let scaling = ScalingConjugation { x_exp: 2 - m, y_exp: 1 - m };
                let family = scaling.family_of(&base);
                if let Ok(limit) = limit_at_zero(&family) {
                    if let Ok(laut) = Automorphism::from_endo(&limit) {
                        if crate::classify::is_semisimple(&laut) {
                            break;
                        }
                    }
                }
                m *= 2;
                assert!(m < 1 << 20, "scaling separation failed to converge");
            }
            (base, base_conjugator, ScalingConjugation { x_exp: 2 - m, y_exp: 1 - m })
        }
    };

    let family = scaling.family_of(&base);
    let limit = limit_at_zero(&family)?;
    let limit_aut = Automorphism::from_endo(&limit)?;
    assert!(crate::classify::is_semisimple(&limit_aut), "witness limit must be semisimple");

    // family(1) must reproduce the base exactly
    assert_eq!(family.specialize(&Scalar::one()), base, "family(1) != base");
    // and the base must conjugate back to the source
    let back = base_conjugator
        .endo()
        .compose(&base)
        .compose(base_conjugator.inverse().endo());
    assert_eq!(&back, f.endo(), "base fails to conjugate back to the source");

    let (limit_trace, limit_jac) = crate::classify::pseudo_trace_jac(&limit_aut)?;
    assert_eq!(limit_jac, source_jac, "limit must share the Jacobian");
    let source_trace = if lf {
        let (trace, _) = crate::classify::pseudo_trace_jac(f)?;
        assert_eq!(trace, limit_trace, "LF limit must share the trace");
        Some(trace)
    } else {
        None
    };

    let limit_in_class = if crate::classify::is_semisimple(f) {
        let psi = crate::normalform::conjugacy_test_semisimple(f, &limit_aut)?;
        assert!(psi.is_some(), "semisimple source must be conjugate to its witness limit");
        true
    } else {
        // the limit is semisimple and the source is not; semisimplicity is
        // a conjugation invariant, so the limit leaves the class
        false
    };

    Ok(DegenerationWitness {
        family,
        limit,
        base,
        base_conjugator,
        scaling,
        source_trace,
        source_jac,
        limit_trace,
        limit_jac,
        limit_in_class,
    })
}

fn linear_part(e: &PlaneEndo) -> PlaneEndo {
    let keep = |p: &BiPoly| {
        BiPoly::from_terms(
            p.terms().filter(|(&(i, j), _)| i + j == 1).map(|(&e, c)| (e, c.clone())),
        )
    };
    PlaneEndo::new(keep(&e.f1), keep(&e.f2))
}

/// A fixed point of g with coordinates in Q or a single quadratic
/// extension, chosen deterministically (smallest in the scalar order).
/// The x-coordinates are the eigenvalues of multiplication by X on the
/// quotient by the fixed-point ideal.
fn rational_or_quadratic_fixed_point(g: &PlaneEndo) -> Result<Point> {
    let gens = [g.f1.sub(&BiPoly::x()), g.f2.sub(&BiPoly::y())];
    let gb = groebner::groebner_basis(&gens);
    let basis = groebner::standard_monomials(&gb).ok_or_else(|| {
        Error::UnsupportedExtension("fixed scheme is not finite".into())
    })?;
    if basis.is_empty() {
        return Err(Error::UnsupportedExtension("empty fixed scheme".into()));
    }
    let mx = groebner::multiplication_matrix(&gb, &basis, true);
    let cp = matrix_min_poly(&mx);

    let mut candidates: Vec<Point> = Vec::new();
    let mut remaining = cp.clone();
    for (x0, _) in rational_roots(&cp) {
        let x0 = Scalar::Rat(x0);
        for _ in 0..cp.degree().unwrap_or(0) {
            let (q, r) = remaining.div_rem(&UniPoly::linear_root(&x0));
            if r.is_zero() {
                remaining = q;
            } else {
                break;
            }
        }
        for y0 in y_coordinates_over(g, &x0)? {
            candidates.push(Point::new(x0.clone(), y0));
        }
    }
    if candidates.is_empty() {
        // no rational point: look for a quadratic x-coordinate
        let deriv = remaining.derivative();
        let squarefree = if remaining.degree().unwrap_or(0) >= 1 {
            remaining.div_exact(&upoly_gcd(&remaining, &deriv).map_err(|_| {
                Error::UnsupportedExtension("mixed fields in the fixed locus".into())
            })?)
        } else {
            remaining.clone()
        };
        if squarefree.degree() == Some(2) {
            let (x1, x2) = quadratic_roots(&squarefree.monic())?;
            for x0 in [x1, x2] {
                for y0 in y_coordinates_over(g, &x0)? {
                    candidates.push(Point::new(x0.clone(), y0));
                }
            }
        }
    }
    candidates.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
    let xi = candidates.into_iter().next().ok_or_else(|| {
        Error::UnsupportedExtension(
            "fixed points generate an extension of degree > 2".into(),
        )
    })?;
    debug_assert!(g.eval(&xi) == xi, "candidate point is not fixed");
    Ok(xi)
}

/// y-coordinates of fixed points above a given x, inside the field of x
/// (or one quadratic extension of Q when x is rational).
fn y_coordinates_over(g: &PlaneEndo, x0: &Scalar) -> Result<Vec<Scalar>> {
    let u = g.f1.substitute_x(x0).sub(&UniPoly::constant(x0.clone()).with_var("Y"));
    let v = g
        .f2
        .substitute_x(x0)
        .sub(&UniPoly::new(vec![Scalar::zero(), Scalar::one()]).with_var("Y"));
    let common = upoly_gcd(&u, &v)?;
    if common.degree().is_none() || common.degree() == Some(0) {
        return Ok(vec![]);
    }
    let mut roots = roots_in_field(&common)?;
    if roots.is_empty() && x0.is_rational() && common.degree() == Some(2) {
        let (r1, r2) = quadratic_roots(&common.monic())?;
        roots = vec![r1, r2];
    }
    let mut out: Vec<Scalar> = Vec::new();
    for y0 in roots {
        let p = Point::new(x0.clone(), y0.clone());
        if g.eval(&p) == p && !out.contains(&y0) {
            out.push(y0);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::parse_endo;

    fn aut(s: &str) -> Automorphism {
        Automorphism::from_endo(&parse_endo(s).unwrap()).unwrap()
    }

    #[test]
    fn family_conjugate_shear() {
        // (tX, Y) conj of (X+Y, Y) = (X + tY, Y)
        let fam = family_conjugate(&FamilyEndo::scale_x(), &parse_endo("(X + Y, Y)").unwrap())
            .unwrap();
        assert_eq!(fam.to_string(), "(X + t*Y, Y)");
        assert_eq!(fam.specialize(&Scalar::int(3)), parse_endo("(X + 3*Y, Y)").unwrap());
    }

    #[test]
    fn family_conjugate_henon_by_inverse_homothety() {
        // (t^{-1}X, t^{-1}Y) conj of (Y, X+Y^2) = (Y, X + tY^2)
        let phi = FamilyEndo::monomial_diagonal(Scalar::one(), -1, Scalar::one(), -1);
        let fam = family_conjugate(&phi, &parse_endo("(Y, X + Y^2)").unwrap()).unwrap();
        assert_eq!(fam.to_string(), "(Y, X + t*Y^2)");
        assert_eq!(limit_at_zero(&fam).unwrap(), PlaneEndo::swap());
    }

    #[test]
    fn family_conjugate_identity_family() {
        let f = parse_endo("(2*X + Y^3, 3*Y)").unwrap();
        let id = FamilyEndo::monomial_diagonal(Scalar::one(), 0, Scalar::one(), 0);
        let fam = family_conjugate(&id, &f).unwrap();
        assert_eq!(fam, FamilyEndo::from_endo(&f));
    }

    #[test]
    fn family_conjugate_rejects_general_families() {
        let f = parse_endo("(X + Y, Y)").unwrap();
        let bad = FamilyEndo::from_endo(&f);
        assert!(matches!(
            family_conjugate(&bad, &f),
            Err(Error::NonInvertibleFamily)
        ));
    }

    #[test]
    fn limits() {
        let fam = family_conjugate(&FamilyEndo::scale_x(), &parse_endo("(X + Y, Y)").unwrap())
            .unwrap();
        assert!(limit_at_zero(&fam).unwrap().is_identity());
        // (t^{-1}X, Y) conj of (X + Y^2, Y) = (X + t^{-1} Y^2, Y): no limit,
        // and the offending monomial is Y^2
        let phi = FamilyEndo::monomial_diagonal(Scalar::one(), -1, Scalar::one(), 0);
        let f = parse_endo("(X + Y^2, Y)").unwrap();
        let fam = family_conjugate(&phi, &f).unwrap();
        match limit_at_zero(&fam) {
            Err(Error::NegativeOrder { x_exp: 0, y_exp: 2 }) => {}
            other => panic!("expected NegativeOrder at Y^2, got {other:?}"),
        }
    }

    #[test]
    fn witness_shear() {
        // (X+Y, Y): family (X + tY, Y), limit id, not in class
        let w = closure_witness(&aut("(X + Y, Y)")).unwrap();
        assert_eq!(w.family.to_string(), "(X + t*Y, Y)");
        assert!(w.limit.is_identity());
        assert!(!w.limit_in_class);
        assert_eq!(w.source_trace, Some(Scalar::int(2)));
    }

    #[test]
    fn witness_semisimple_triangular() {
        let w = closure_witness(&aut("(2*X + Y^3, 3*Y)")).unwrap();
        assert_eq!(w.limit, parse_endo("(2*X, 3*Y)").unwrap());
        assert!(w.limit_in_class);
        assert_eq!(w.family.to_string(), "(2*X + t*Y^3, 3*Y)");
    }

    #[test]
    fn witness_henon() {
        let w = closure_witness(&aut("(Y, X + Y^2)")).unwrap();
        assert_eq!(w.limit, PlaneEndo::swap());
        assert_eq!(w.family.to_string(), "(Y, X + t*Y^2)");
        assert!(!w.limit_in_class);
        assert_eq!(w.source_trace, None);
        assert_eq!(w.limit_jac, Scalar::int(-1));
        // the limit's own pair is {1, -1}
        assert_eq!(w.limit_trace, Scalar::zero());
    }

    #[test]
    fn witness_specialization_consistency() {
        for s in ["(X + Y, Y)", "(2*X + Y^3, 3*Y)", "(Y, X + Y^2)", "(2*X, 3*Y + X^2)"] {
            let f = aut(s);
            let w = closure_witness(&f).unwrap();
            for t0 in [Scalar::one(), Scalar::ratio(1, 2), Scalar::int(-3)] {
                let direct = w
                    .scaling
                    .at(&t0)
                    .compose(&w.base)
                    .compose(&w.scaling.at_inverse(&t0));
                assert_eq!(w.family.specialize(&t0), direct, "specialization at {t0} for {s}");
            }
        }
    }

    #[test]
    fn witness_translation_shift() {
        // (X+1, 2Y) is LF with empty fixed locus; limit must be (X, 2Y)
        let w = closure_witness(&aut("(X + 1, 2*Y)")).unwrap();
        assert_eq!(w.limit, parse_endo("(X, 2*Y)").unwrap());
        assert!(!w.limit_in_class); // source is not semisimple
        assert_eq!(w.source_trace, Some(Scalar::int(3)));
    }

    #[test]
    fn witness_henon_with_quadratic_fixed_point() {
        // (Y, X + Y^2 - 2): fixed points have x = y, x^2 = 2 — quadratic
        let w = closure_witness(&aut("(Y, X + Y^2 - 2)")).unwrap();
        assert!(!w.limit_in_class);
        assert_eq!(w.limit_jac, Scalar::int(-1));
        // base fixes the origin over Q(sqrt 2)
        assert!(w.base.eval(&Point::origin()) == Point::origin());
    }

    #[test]
    fn witness_nonss_linear_part() {
        // cyclically reduced word [affine, triangular] fixing the origin
        // whose derivative there is a Jordan block: the witness must scale
        // past the linear part to a scalar limit
        let g = aut("(X + Y^2, X + Y^2 + Y)");
        assert!(!crate::classify::is_lf(&g));
        let w = closure_witness(&g).unwrap();
        let laut = Automorphism::from_endo(&w.limit).unwrap();
        assert!(crate::classify::is_semisimple(&laut));
        assert_eq!(w.limit_jac, g.jacobian());
        // family(1) = base exactly
        assert_eq!(w.family.specialize(&Scalar::one()), w.base);
    }

    #[test]
    fn stretch_is_exact_reparametrization() {
        let f = parse_endo("(X + Y, Y)").unwrap();
        let fam = family_conjugate(&FamilyEndo::scale_x(), &f).unwrap();
        let stretched = fam.stretch(3);
        let t0 = Scalar::int(2);
        assert_eq!(stretched.specialize(&t0), fam.specialize(&Scalar::int(8)));
    }
}
