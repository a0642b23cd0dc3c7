//! Classification of plane automorphisms: local finiteness, pseudo-
//! eigenvalues, minimal polynomial, fixed locus, semisimplicity, unipotence
//! and the conjugacy-class-closedness verdict.

use crate::bipoly::{BiPoly, Degree, Exp};
use crate::endo::{Mat2, PlaneEndo, Point, TriangularMap};
use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::{Insert, RowSpace};
use crate::scalar::{Rational, Scalar};
use crate::upoly::{is_squarefree, quadratic_roots, roots_in_field, UniPoly};
use crate::word::{cyclic_reduce, dynamical_degree, Automorphism, Factor};
use num_traits::One;
use std::cell::OnceCell;

// ---------------------------------------------------------------------------
// Composition degree and iterate machinery
// ---------------------------------------------------------------------------

/// Power products u^i v^j for i + j <= bound, so that r o (u, v) for any r
/// of degree <= bound is a plain linear combination. This is what makes
/// iterating a fixed automorphism cheap.
pub struct ComposeTable {
    bound: u32,
    products: Vec<Vec<BiPoly>>, // products[i][j] = u^i v^j, i + j <= bound
}

impl ComposeTable {
    pub fn new(f: &PlaneEndo, bound: u32) -> ComposeTable {
        let mut products: Vec<Vec<BiPoly>> = Vec::with_capacity(bound as usize + 1);
        let mut xpow = BiPoly::constant(Scalar::one());
        for i in 0..=bound {
            let mut row = Vec::with_capacity((bound - i) as usize + 1);
            row.push(xpow.clone());
            for j in 1..=(bound - i) {
                let next = row[(j - 1) as usize].mul(&f.f2);
                row.push(next);
            }
            products.push(row);
            if i < bound {
                xpow = xpow.mul(&f.f1);
            }
        }
        ComposeTable { bound, products }
    }

    /// r o f, for deg r <= bound.
    pub fn apply(&self, r: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for (&(i, j), c) in r.terms() {
            assert!(i + j <= self.bound, "compose table bound exceeded");
            acc = acc.add(&self.products[i as usize][j as usize].scale(c));
        }
        acc
    }

    /// e o f componentwise, for deg e <= bound.
    pub fn apply_endo(&self, e: &PlaneEndo) -> PlaneEndo {
        PlaneEndo::new(self.apply(&e.f1), self.apply(&e.f2))
    }
}

/// The shape of a homogeneous form that is a scalar multiple of a power of
/// one linear form — the shape every leading form of an automorphism
/// component has.
#[derive(Clone, Debug, PartialEq, Eq)]
enum LinearPower {
    /// c * (X + r Y)^deg
    XShape(Scalar),
    /// c * Y^deg
    YShape,
}

/// Recognize form = c * ell^deg for a linear ell; returns (c, shape).
fn as_linear_power(form: &crate::bipoly::HomForm) -> Option<(Scalar, LinearPower)> {
    let d = form.deg as usize;
    let coeffs = &form.coeffs;
    if d == 0 {
        // constants count as X-shape with r = 0
        return Some((coeffs[0].clone(), LinearPower::XShape(Scalar::zero())));
    }
    let top = &coeffs[d]; // X^d coefficient
    if top.is_zero() {
        // must be c * Y^d
        if coeffs[1..d].iter().any(|c| !c.is_zero()) || coeffs[0].is_zero() {
            return None;
        }
        return Some((coeffs[0].clone(), LinearPower::YShape));
    }
    // c (X + rY)^d: coefficient of X^(d-k) Y^k is c * C(d,k) r^k
    let r = &(&coeffs[d - 1] / top) * &Scalar::ratio(1, d as i64);
    let mut rpow = Scalar::one();
    let mut binom = Scalar::one();
    for k in 0..=d {
        if k > 0 {
            rpow = &rpow * &r;
            binom = &(&binom * &Scalar::int((d - k + 1) as i64)) * &Scalar::ratio(1, k as i64);
        }
        let want = &(top * &binom) * &rpow;
        if coeffs[d - k] != want {
            return None;
        }
    }
    Some((top.clone(), LinearPower::XShape(r)))
}

/// deg(f o g) with a leading-form shortcut: when the candidate top form of
/// the composition does not vanish, the degree is known without expanding.
/// Falls back to the full composition otherwise.
pub fn compose_degree(f: &PlaneEndo, g: &PlaneEndo) -> Degree {
    let (e1, e2) = match (g.f1.degree().finite(), g.f2.degree().finite()) {
        (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
        _ => return f.compose(g).degree(),
    };
    let (l1, l2) = match (g.f1.leading_form(), g.f2.leading_form()) {
        (Some(a), Some(b)) => (a, b),
        _ => return f.compose(g).degree(),
    };
    // leading forms of automorphism components are powers of a common
    // linear form, which turns the vanishing test into scalar arithmetic
    let shapes = (as_linear_power(&l1), as_linear_power(&l2));
    let mut decided: Vec<Option<u32>> = Vec::new();
    let mut bounds: Vec<u32> = Vec::new();
    for comp in [&f.f1, &f.f2] {
        if comp.is_zero() {
            decided.push(Some(0));
            bounds.push(0);
            continue;
        }
        let m = comp.terms().map(|(&(i, j), _)| i * e1 + j * e2).max().unwrap();
        bounds.push(m);
        let top_terms: Vec<(u32, u32, &Scalar)> = comp
            .terms()
            .filter(|(&(i, j), _)| i * e1 + j * e2 == m)
            .map(|(&(i, j), c)| (i, j, c))
            .collect();
        let known = match &shapes {
            (Some((c1, s1)), Some((c2, s2))) if s1 == s2 => {
                // everything collapses onto powers of one linear form
                let mut sum = Scalar::zero();
                for (i, j, c) in &top_terms {
                    sum = &sum + &(&(*c * &c1.pow(*i as i64)) * &c2.pow(*j as i64));
                }
                if sum.is_zero() {
                    None
                } else {
                    Some(m)
                }
            }
            (Some(_), Some(_)) => {
                // independent linear forms: distinct (i, j) at the top give
                // linearly independent products, so the sum cannot vanish
                Some(m)
            }
            _ => {
                // not an automorphism shape; do the form arithmetic with
                // cached powers
                let max_i = top_terms.iter().map(|t| t.0).max().unwrap();
                let max_j = top_terms.iter().map(|t| t.1).max().unwrap();
                let mut p1 = vec![crate::bipoly::HomForm { deg: 0, coeffs: vec![Scalar::one()] }];
                for _ in 0..max_i {
                    let next = p1.last().unwrap().mul(&l1);
                    p1.push(next);
                }
                let mut p2 = vec![crate::bipoly::HomForm { deg: 0, coeffs: vec![Scalar::one()] }];
                for _ in 0..max_j {
                    let next = p2.last().unwrap().mul(&l2);
                    p2.push(next);
                }
                let mut cand: Option<crate::bipoly::HomForm> = None;
                for (i, j, c) in &top_terms {
                    let prod = p1[*i as usize].mul(&p2[*j as usize]).scale(c);
                    cand = Some(match cand {
                        None => prod,
                        Some(acc) => acc.add(&prod),
                    });
                }
                if cand.unwrap().is_zero() {
                    None
                } else {
                    Some(m)
                }
            }
        };
        decided.push(known);
    }
    match (decided[0], decided[1]) {
        (Some(a), Some(b)) => Degree::Finite(a.max(b)),
        (Some(a), None) if a >= bounds[1] => Degree::Finite(a),
        (None, Some(b)) if b >= bounds[0] => Degree::Finite(b),
        _ => f.compose(g).degree(),
    }
}

/// Lazily shared iterate machinery for one automorphism.
pub struct LfProbe<'a> {
    f: &'a Automorphism,
    table: OnceCell<ComposeTable>,
    deg_f2: OnceCell<u32>,
}

impl<'a> LfProbe<'a> {
    pub fn new(f: &'a Automorphism) -> LfProbe<'a> {
        LfProbe { f, table: OnceCell::new(), deg_f2: OnceCell::new() }
    }

    fn table(&self) -> &ComposeTable {
        self.table.get_or_init(|| ComposeTable::new(self.f.endo(), self.f.degree()))
    }

    /// deg f^2, by the leading-form shortcut when it decides.
    pub fn degree_f2(&self) -> u32 {
        *self.deg_f2.get_or_init(|| match compose_degree(self.f.endo(), self.f.endo()) {
            Degree::Finite(d) => d,
            Degree::NegInf => unreachable!("automorphism iterates are nonzero"),
        })
    }

    /// deg f^2 <= deg f.
    pub fn is_lf(&self) -> bool {
        self.degree_f2() <= self.f.degree()
    }

    /// deg f^n <= deg f for 2 <= n <= n_max, with early exit.
    pub fn iterates_bounded(&self, n_max: u32) -> bool {
        let m = self.f.degree();
        if self.degree_f2() > m {
            return false;
        }
        let mut cur = self.table().apply_endo(self.f.endo()); // f^2
        for _ in 3..=n_max {
            if cur.degree() > Degree::Finite(m) {
                return false;
            }
            cur = self.table().apply_endo(&cur);
            if cur.degree() > Degree::Finite(m) {
                return false;
            }
        }
        cur.degree() <= Degree::Finite(m)
    }

    /// Minimal monic polynomial annihilating the iterate sequence, by
    /// incremental elimination on iterate coefficient vectors: the first
    /// linear dependence among id, f, f^2, ... yields it, since a relation
    /// composed with f^n shifts to all n.
    pub fn minimal_polynomial(&self) -> Result<UniPoly> {
        if !self.is_lf() {
            return Err(Error::NotLocallyFinite);
        }
        let m = self.f.degree();
        let basis: Vec<Exp> = monomials_up_to(m);
        let dim = 2 * basis.len();
        let mut rows = RowSpace::new(dim);
        let mut cur = PlaneEndo::identity();
        for _ in 0..=dim + 1 {
            let v = endo_vector(&cur, &basis);
            match rows.insert(v) {
                Insert::Independent => {
                    cur = self.table().apply_endo(&cur);
                    debug_assert!(cur.degree() <= Degree::Finite(m));
                }
                Insert::Dependent(coeffs) => {
                    let mu = UniPoly::new(coeffs);
                    debug_assert!(mu.is_monic());
                    return Ok(mu);
                }
            }
        }
        unreachable!("iterates of an LF automorphism span a bounded space")
    }

    /// Evaluate sum p_k f^k coefficientwise; zero iff p annihilates f.
    pub fn annihilates(&self, p: &UniPoly) -> bool {
        let m = self.f.degree();
        let mut acc1 = BiPoly::zero();
        let mut acc2 = BiPoly::zero();
        let mut cur = PlaneEndo::identity();
        for (k, c) in p.coeffs().iter().enumerate() {
            acc1 = acc1.add(&cur.f1.scale(c));
            acc2 = acc2.add(&cur.f2.scale(c));
            if k + 1 < p.coeffs().len() {
                cur = self.table().apply_endo(&cur);
                if cur.degree() > Degree::Finite(m) {
                    return false; // iterates unbounded: nothing of this degree annihilates
                }
            }
        }
        acc1.is_zero() && acc2.is_zero()
    }
}

fn monomials_up_to(m: u32) -> Vec<Exp> {
    let mut v = Vec::new();
    for i in 0..=m {
        for j in 0..=(m - i) {
            v.push((i, j));
        }
    }
    v.sort();
    v
}

fn endo_vector(e: &PlaneEndo, basis: &[Exp]) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(2 * basis.len());
    for comp in [&e.f1, &e.f2] {
        for &exp in basis {
            v.push(comp.coeff(exp));
        }
    }
    v
}

/// deg f^2 <= deg f (equivalent to every other local-finiteness test).
pub fn is_lf(f: &Automorphism) -> bool {
    LfProbe::new(f).is_lf()
}

/// Minimal polynomial of an LF automorphism.
pub fn minimal_polynomial(f: &Automorphism) -> Result<UniPoly> {
    LfProbe::new(f).minimal_polynomial()
}

// ---------------------------------------------------------------------------
// Triangularization
// ---------------------------------------------------------------------------

/// f = phi o t o phi^{-1} with the degree identity
/// deg f = deg t * (deg phi)^2, exactly.
pub fn triangularize(f: &Automorphism) -> Result<(Automorphism, TriangularMap)> {
    let (conj, reduced) = cyclic_reduce(f);
    match reduced.len() {
        0 => Ok((conj, TriangularMap::identity())),
        1 => {
            let (phi, t) = match &reduced.factors()[0] {
                Factor::Triangular(t) => (conj, t.clone()),
                Factor::Affine(a) => {
                    let (p, t) = triangularize_affine(a);
                    (conj.compose(&Automorphism::affine(p)), t)
                }
            };
            let recomposed = phi.endo().compose(&t.to_endo()).compose(phi.inverse().endo());
            assert_eq!(&recomposed, f.endo(), "triangularization failed to verify");
            let (df, dt, dp) = (f.degree(), t.degree(), phi.degree());
            assert_eq!(df, dt * dp * dp, "triangularization degree identity failed");
            Ok((phi, t))
        }
        _ => Err(Error::NotTriangularizable),
    }
}

/// Conjugate a non-triangular affine map to triangular form by an eigen
/// basis change; may introduce one quadratic extension.
fn triangularize_affine(a: &crate::endo::AffineMap) -> (crate::endo::AffineMap, TriangularMap) {
    let l = &a.linear;
    assert!(!l.c.is_zero(), "already triangular");
    let (r1, r2) = eigenvalues(l);
    // prefer a rational eigenvalue on top so transported fixed data stays
    // rational whenever possible
    let lambda = if r1.is_rational() { r1 } else if r2.is_rational() { r2 } else { r1 };
    // (lambda - d, c) is a lambda-eigenvector; c != 0 keeps it nonzero
    let v = (&lambda - &l.d, l.c.clone());
    let p = Mat2 { a: v.0, b: Scalar::one(), c: v.1, d: Scalar::zero() };
    let basis = crate::endo::AffineMap::new(p, (Scalar::zero(), Scalar::zero()));
    let conj = basis.inverse().compose(a).compose(&basis);
    let t = TriangularMap::from_endo(&conj.to_endo())
        .expect("eigen conjugation yields a triangular map");
    (basis, t)
}

fn eigenvalues(l: &Mat2) -> (Scalar, Scalar) {
    let cp = l.char_poly();
    if let Ok(pair) = quadratic_roots(&cp) {
        return pair;
    }
    // coefficients already in a quadratic extension
    let roots = roots_in_field(&cp).expect("eigenvalues beyond one quadratic extension");
    assert_eq!(roots.len(), 2, "linear part must split over its own field");
    (roots[0].clone(), roots[1].clone())
}

// ---------------------------------------------------------------------------
// Pseudo-eigenvalues, fixed locus
// ---------------------------------------------------------------------------

/// The conjugation-invariant unordered pair attached to an LF automorphism:
/// derivative eigenvalues at its fixed point when the fixed locus is a
/// single point, and {1, Jac f} otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoEigenPair {
    pub trace: Scalar,
    pub jac: Scalar,
    pub roots: (Scalar, Scalar),
}

impl PseudoEigenPair {
    fn from_trace_jac(trace: Scalar, jac: Scalar) -> Result<PseudoEigenPair> {
        let quad = UniPoly::new(vec![jac.clone(), -&trace, Scalar::one()]);
        let roots = if trace.is_rational() && jac.is_rational() {
            quadratic_roots(&quad)?
        } else {
            let rs = roots_in_field(&quad)?;
            if rs.len() != 2 {
                return Err(Error::UnsupportedExtension(
                    "pseudo-eigenvalues beyond one quadratic extension".into(),
                ));
            }
            (rs[0].clone(), rs[1].clone())
        };
        Ok(PseudoEigenPair { trace, jac, roots })
    }

    pub fn from_roots(a: Scalar, b: Scalar) -> PseudoEigenPair {
        PseudoEigenPair { trace: &a + &b, jac: &a * &b, roots: (a, b) }
    }

    /// Unordered equality, decided on (trace, jac): the pair is the root
    /// set of T^2 - trace T + jac.
    pub fn same_pair(&self, other: &PseudoEigenPair) -> bool {
        self.trace == other.trace && self.jac == other.jac
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        &self.roots.0 == s || &self.roots.1 == s
    }

    pub fn is_unipotent_pair(&self) -> bool {
        self.roots.0.is_one() && self.roots.1.is_one()
    }
}

/// The fixed locus of an automorphism, by shape. `Plane` is the identity
/// map only (its fixed set is the whole plane, which the LF trichotomy
/// does not cover).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedLocus {
    Empty,
    SimplePoint(Point),
    Lines {
        count: u32,
        /// Defining polynomial of the fixed curve, transported to the
        /// input coordinates (radical: one factor per component).
        curve: BiPoly,
    },
    FiniteScheme {
        length: u32,
    },
    Plane,
}

impl FixedLocus {
    pub fn kind(&self) -> &'static str {
        match self {
            FixedLocus::Empty => "empty",
            FixedLocus::SimplePoint(_) => "simple_point",
            FixedLocus::Lines { .. } => "lines",
            FixedLocus::FiniteScheme { .. } => "finite_scheme",
            FixedLocus::Plane => "plane",
        }
    }
}

/// Fixed set of an affine map by direct linear algebra; avoids any eigen
/// basis change, so coordinates stay in the map's own field.
fn affine_fixed_locus(f: &Automorphism) -> FixedLocus {
    let a = crate::endo::AffineMap::from_endo(f.endo()).expect("degree <= 1 is affine");
    let l = &a.linear;
    let one = Scalar::one();
    let m = Mat2 { a: &l.a - &one, b: l.b.clone(), c: l.c.clone(), d: &l.d - &one };
    let v = &a.translation;
    if !m.det().is_zero() {
        // unique solution of (L - I) xi = -v
        let sol = m.inverse().apply(&Point::new(-&v.0, -&v.1));
        return FixedLocus::SimplePoint(sol);
    }
    let rows =
        [(m.a.clone(), m.b.clone(), v.0.clone()), (m.c.clone(), m.d.clone(), v.1.clone())];
    let nonzero = |r: &(Scalar, Scalar, Scalar)| !r.0.is_zero() || !r.1.is_zero();
    match (nonzero(&rows[0]), nonzero(&rows[1])) {
        (false, false) => {
            if v.0.is_zero() && v.1.is_zero() {
                FixedLocus::Plane
            } else {
                FixedLocus::Empty // pure translation
            }
        }
        (r0, _) => {
            let (pivot, other) = if r0 { (&rows[0], &rows[1]) } else { (&rows[1], &rows[0]) };
            let lambda =
                if !pivot.0.is_zero() { &other.0 / &pivot.0 } else { &other.1 / &pivot.1 };
            let consistent = other.0 == &lambda * &pivot.0
                && other.1 == &lambda * &pivot.1
                && other.2 == &lambda * &pivot.2;
            if consistent {
                let curve = BiPoly::x()
                    .scale(&pivot.0)
                    .add(&BiPoly::y().scale(&pivot.1))
                    .add(&BiPoly::constant(pivot.2.clone()));
                FixedLocus::Lines { count: 1, curve }
            } else {
                FixedLocus::Empty
            }
        }
    }
}

/// Fixed locus, computed on the triangular conjugate for LF maps and
/// transported back; for non-LF maps, a finite scheme whose length is the
/// degree of the cyclically reduced conjugate, cross-checked against the
/// dimension of the quotient by the fixed-point ideal.
pub fn fixed_locus(f: &Automorphism) -> FixedLocus {
    if f.is_identity() {
        return FixedLocus::Plane;
    }
    if f.degree() <= 1 {
        return affine_fixed_locus(f);
    }
    if !is_lf(f) {
        let (_, reduced) = cyclic_reduce(f);
        let d = reduced.degree();
        let g = reduced.composite();
        let gens = [g.f1.sub(&BiPoly::x()), g.f2.sub(&BiPoly::y())];
        let dim = groebner::quotient_dimension(&gens)
            .expect("fixed scheme of a cyclically reduced map is finite");
        assert_eq!(dim as u32, d, "fixed-scheme length disagrees with the word degree");
        return FixedLocus::FiniteScheme { length: d };
    }
    let (phi, t) = triangularize(f).expect("LF maps of degree >= 2 triangularize");
    let phi_inv = phi.inverse();
    let transport_point = |p: &Point| phi.endo().eval(p);
    let transport_curve = |h: &BiPoly| h.compose(&phi_inv.endo().f1, &phi_inv.endo().f2);

    let one = Scalar::one();
    if t.b != one {
        let y0 = &t.c / &(&one - &t.b);
        let p_y0 = t.p.eval(&y0);
        if t.a != one {
            let x0 = &p_y0 / &(&one - &t.a);
            return FixedLocus::SimplePoint(transport_point(&Point::new(x0, y0)));
        }
        if p_y0.is_zero() {
            let line = BiPoly::y().sub(&BiPoly::constant(y0));
            return FixedLocus::Lines { count: 1, curve: transport_curve(&line) };
        }
        return FixedLocus::Empty;
    }
    // b = 1
    if !t.c.is_zero() {
        return FixedLocus::Empty;
    }
    if t.a != one {
        // X = p(Y)/(1-a): the graph, one component
        let curve = BiPoly::x().scale(&(&one - &t.a)).sub(&BiPoly::from_y_poly(&t.p));
        return FixedLocus::Lines { count: 1, curve: transport_curve(&curve) };
    }
    // a = b = 1, c = 0: fixed set is p(Y) = 0
    match t.p.degree() {
        None => FixedLocus::Plane, // identity; already handled above
        Some(0) => FixedLocus::Empty,
        Some(_) => {
            let derivative = t.p.derivative();
            let gcd = crate::upoly::upoly_gcd(&t.p, &derivative).expect("common field");
            let radical = t.p.div_exact(&gcd);
            let count = radical.degree().unwrap() as u32;
            FixedLocus::Lines {
                count,
                curve: transport_curve(&BiPoly::from_y_poly(&radical)),
            }
        }
    }
}

/// (trace, jac) of the pseudo-eigenvalue pair, without extracting roots:
/// the derivative trace at the fixed point when there is exactly one, and
/// 1 + Jac otherwise.
pub fn pseudo_trace_jac(f: &Automorphism) -> Result<(Scalar, Scalar)> {
    if !is_lf(f) {
        return Err(Error::NotLocallyFinite);
    }
    let jac = f.jacobian();
    Ok(match fixed_locus(f) {
        FixedLocus::SimplePoint(xi) => {
            let m = f.endo().derivative_at(&xi);
            debug_assert_eq!(m.det(), jac);
            (m.trace(), jac)
        }
        FixedLocus::FiniteScheme { .. } => unreachable!("LF fixed loci are not finite schemes"),
        _ => (&Scalar::one() + &jac, jac),
    })
}

/// Pseudo-eigenvalues of an LF automorphism.
pub fn pseudo_eigenvalues(f: &Automorphism) -> Result<PseudoEigenPair> {
    let (trace, jac) = pseudo_trace_jac(f)?;
    PseudoEigenPair::from_trace_jac(trace, jac)
}

/// True iff the fixed locus is a single point of multiplicity one.
pub fn in_s(f: &Automorphism) -> bool {
    matches!(fixed_locus(f), FixedLocus::SimplePoint(_))
}

/// LF with squarefree minimal polynomial; equivalent to diagonalizability.
pub fn is_semisimple(f: &Automorphism) -> bool {
    match minimal_polynomial(f) {
        Ok(mu) => is_squarefree(&mu).expect("minimal polynomial is nonzero"),
        Err(_) => false,
    }
}

/// Annihilated by a power of (T - 1); equivalently both pseudo-eigenvalues
/// are 1.
pub fn is_unipotent(f: &Automorphism) -> bool {
    match minimal_polynomial(f) {
        Ok(mu) => {
            let d = mu.degree().unwrap();
            mu == UniPoly::linear_root(&Scalar::one()).pow(d)
        }
        Err(_) => false,
    }
}

// ---------------------------------------------------------------------------
// Spectral helpers
// ---------------------------------------------------------------------------

/// The squarefree monic polynomial whose roots are exactly
/// {a^k b^l : 0 <= k+l <= m} (duplicates collapsed). It annihilates every
/// automorphism conjugate to (aX, bY) by a conjugator of degree <= m.
pub fn omega_annihilator(pseudo: &PseudoEigenPair, m: u32) -> UniPoly {
    let (a, b) = &pseudo.roots;
    let mut omega: Vec<Scalar> = Vec::new();
    for k in 0..=m {
        for l in 0..=(m - k) {
            let w = &a.pow(k as i64) * &b.pow(l as i64);
            if !omega.contains(&w) {
                omega.push(w);
            }
        }
    }
    let mut p = UniPoly::one();
    for w in &omega {
        p = p.mul(&UniPoly::linear_root(w));
    }
    // a Galois-stable root pair gives rational coefficients
    if pseudo.trace.is_rational() && pseudo.jac.is_rational() {
        assert!(
            p.coeffs().iter().all(Scalar::is_rational),
            "orbit polynomial of a Galois-stable pair must be rational"
        );
    }
    p
}

/// Eigenvalue multiset of the pullback r -> r o t on the monomial space
/// V_s spanned by X^k Y^l with d k + l <= s, d = max(1, deg p). The matrix
/// is verified upper triangular in the monomial order; its diagonal is
/// {a^k b^l : d k + l <= s}.
pub fn pullback_spectrum(t: &TriangularMap, s: u32) -> Vec<Scalar> {
    let d = t.degree();
    let mut basis: Vec<Exp> = Vec::new();
    for k in 0..=(s / d) {
        for l in 0..=(s - d * k) {
            basis.push((k, l));
        }
    }
    basis.sort();
    let endo = t.to_endo();
    let mut diagonal = Vec::with_capacity(basis.len());
    for (col, &(k, l)) in basis.iter().enumerate() {
        let image = endo.f1.pow(k).mul(&endo.f2.pow(l));
        for (&e, c) in image.terms() {
            let row = basis
                .binary_search(&e)
                .unwrap_or_else(|_| panic!("V_s is not stable: X^{}Y^{} escapes", e.0, e.1));
            assert!(
                row <= col,
                "pullback matrix is not upper triangular in the monomial order"
            );
            if row == col {
                let expected = &t.a.pow(k as i64) * &t.b.pow(l as i64);
                assert_eq!(c, &expected, "diagonal entry differs from a^k b^l");
            }
        }
        diagonal.push(&t.a.pow(k as i64) * &t.b.pow(l as i64));
    }
    diagonal.sort();
    diagonal
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

/// Everything the library can say about one automorphism.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub degree: u32,
    pub is_automorphism: bool,
    pub is_lf: bool,
    pub is_triangularizable: bool,
    pub pseudo: Option<PseudoEigenPair>,
    pub minimal_polynomial: Option<UniPoly>,
    pub is_unipotent: bool,
    pub is_semisimple: bool,
    pub in_s: bool,
    pub fixed_locus: FixedLocus,
    pub dynamical_degree: Rational,
    pub conjugacy_class_closed: bool,
}

/// Classify an endomorphism. Fails with NotAnAutomorphism when the
/// factorization loop cannot certify invertibility.
pub fn full_report(f: &PlaneEndo) -> Result<ClassificationReport> {
    let aut = Automorphism::from_endo(f)?;
    full_report_for(&aut)
}

pub fn full_report_for(aut: &Automorphism) -> Result<ClassificationReport> {
    let probe = LfProbe::new(aut);
    let lf = probe.is_lf();
    let locus = fixed_locus(aut);
    let (pseudo, mu) = if lf {
        let mu = probe.minimal_polynomial()?;
        (Some(pseudo_eigenvalues(aut)?), Some(mu))
    } else {
        (None, None)
    };
    let semisimple = match &mu {
        Some(mu) => is_squarefree(mu).expect("nonzero"),
        None => false,
    };
    let unipotent = match &mu {
        Some(mu) => {
            let d = mu.degree().unwrap();
            *mu == UniPoly::linear_root(&Scalar::one()).pow(d)
        }
        None => false,
    };
    Ok(ClassificationReport {
        degree: aut.degree(),
        is_automorphism: true,
        is_lf: lf,
        is_triangularizable: lf,
        pseudo,
        minimal_polynomial: mu,
        is_unipotent: unipotent,
        is_semisimple: semisimple,
        in_s: matches!(locus, FixedLocus::SimplePoint(_)),
        fixed_locus: locus,
        dynamical_degree: if lf { Rational::one() } else { dynamical_degree(aut) },
        conjugacy_class_closed: semisimple,
    })
}

/// Re-run the internal cross-verifications on a finished report; returns
/// the list of failed checks (empty when consistent).
pub fn consistency_failures(aut: &Automorphism, report: &ClassificationReport) -> Vec<String> {
    let mut failures = Vec::new();
    let probe = LfProbe::new(aut);
    if let Some(mu) = &report.minimal_polynomial {
        if !probe.annihilates(mu) {
            failures.push("minimal polynomial does not annihilate the map".into());
        }
        if let Some(pseudo) = &report.pseudo {
            for root in [&pseudo.roots.0, &pseudo.roots.1] {
                if !mu.eval(root).is_zero() {
                    failures.push(format!("pseudo-eigenvalue {root} is not a root of mu"));
                }
            }
        }
    }
    if report.is_lf {
        let (_, reduced) = cyclic_reduce(aut);
        if reduced.len() > 1 {
            failures.push("LF map failed to reduce to a short word".into());
        }
        if let Some(pseudo) = &report.pseudo {
            match &report.fixed_locus {
                FixedLocus::Empty | FixedLocus::Lines { .. } | FixedLocus::Plane => {
                    if pseudo.trace != &Scalar::one() + &pseudo.jac {
                        failures.push("trace != 1 + jac on a fixed-point-free locus".into());
                    }
                }
                _ => {}
            }
        }
        if report.conjugacy_class_closed != report.is_semisimple {
            failures.push("closedness verdict must equal semisimplicity".into());
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::parse_endo;

    fn aut(s: &str) -> Automorphism {
        Automorphism::from_endo(&parse_endo(s).unwrap()).unwrap()
    }

    #[test]
    fn lf_examples() {
        assert!(is_lf(&aut("(2*X + Y^3, 3*Y)")));
        assert!(!is_lf(&aut("(Y, X + Y^2)")));
        assert!(is_lf(&Automorphism::identity()));
    }

    #[test]
    fn lf_probe_iterates() {
        let f = aut("(2*X + Y^3, 3*Y)");
        assert!(LfProbe::new(&f).iterates_bounded(4));
        let h = aut("(Y, X + Y^2)");
        assert!(!LfProbe::new(&h).iterates_bounded(4));
    }

    #[test]
    fn triangularize_conjugated() {
        let f = aut("(2*X, 3*Y + X^2)");
        let (phi, t) = triangularize(&f).unwrap();
        assert_eq!(phi.endo(), &PlaneEndo::swap());
        assert_eq!(t.to_endo(), parse_endo("(3*X + Y^2, 2*Y)").unwrap());
    }

    #[test]
    fn triangularize_rejects_henon() {
        assert!(matches!(
            triangularize(&aut("(Y, X + Y^2)")),
            Err(Error::NotTriangularizable)
        ));
    }

    #[test]
    fn triangularize_rotation_needs_gaussian_integers() {
        let f = aut("(-Y, X)");
        let (phi, t) = triangularize(&f).unwrap();
        assert_eq!(&t.a * &t.b, Scalar::one());
        assert!(!t.a.is_rational());
        let recomposed = phi.endo().compose(&t.to_endo()).compose(phi.inverse().endo());
        assert_eq!(&recomposed, f.endo());
    }

    #[test]
    fn minimal_polynomials_frozen() {
        // id -> T - 1
        assert_eq!(
            minimal_polynomial(&Automorphism::identity()).unwrap(),
            UniPoly::from_ints(&[-1, 1])
        );
        // (2X+Y^3, 3Y) -> (T-2)(T-3)(T-27) = T^3 - 32 T^2 + 141 T - 162
        assert_eq!(
            minimal_polynomial(&aut("(2*X + Y^3, 3*Y)")).unwrap(),
            UniPoly::from_ints(&[-162, 141, -32, 1])
        );
        // (X+1, 2Y) -> (T-1)^2 (T-2) = T^3 - 4T^2 + 5T - 2
        assert_eq!(
            minimal_polynomial(&aut("(X + 1, 2*Y)")).unwrap(),
            UniPoly::from_ints(&[-2, 5, -4, 1])
        );
        // (X+Y^2, Y) -> (T-1)^2
        assert_eq!(
            minimal_polynomial(&aut("(X + Y^2, Y)")).unwrap(),
            UniPoly::from_ints(&[1, -2, 1])
        );
        assert!(matches!(
            minimal_polynomial(&aut("(Y, X + Y^2)")),
            Err(Error::NotLocallyFinite)
        ));
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        for s in ["(2*X + Y^3, 3*Y)", "(X + 1, 2*Y)", "(X + Y^2, Y)", "(2*X, 3*Y + X^2)"] {
            let f = aut(s);
            let probe = LfProbe::new(&f);
            let mu = probe.minimal_polynomial().unwrap();
            assert!(probe.annihilates(&mu), "mu must annihilate {s}");
            // no maximal proper divisor annihilates
            for (root, _) in crate::upoly::rational_roots(&mu) {
                let divisor = mu.div_exact(&UniPoly::linear_root(&Scalar::Rat(root)));
                assert!(!probe.annihilates(&divisor), "mu not minimal for {s}");
            }
        }
    }

    #[test]
    fn pseudo_eigenvalue_examples() {
        let p = pseudo_eigenvalues(&aut("(2*X + Y^3, 3*Y)")).unwrap();
        assert_eq!(p.trace, Scalar::int(5));
        assert_eq!(p.jac, Scalar::int(6));
        assert!(p.contains(&Scalar::int(2)) && p.contains(&Scalar::int(3)));

        let p = pseudo_eigenvalues(&aut("(X + 1, 2*Y)")).unwrap();
        assert!(p.contains(&Scalar::one()) && p.contains(&Scalar::int(2)));

        let p = pseudo_eigenvalues(&aut("(-Y, X)")).unwrap();
        assert_eq!(p.trace, Scalar::zero());
        assert_eq!(p.jac, Scalar::one());
        assert!(!p.roots.0.is_rational());
    }

    #[test]
    fn fixed_locus_examples() {
        match fixed_locus(&aut("(2*X + Y^3, 3*Y)")) {
            FixedLocus::SimplePoint(p) => assert_eq!(p, Point::origin()),
            other => panic!("expected a simple point, got {other:?}"),
        }
        match fixed_locus(&aut("(X + Y^2, Y)")) {
            FixedLocus::Lines { count, curve } => {
                assert_eq!(count, 1);
                // the line Y = 0
                assert_eq!(curve, BiPoly::y());
            }
            other => panic!("expected lines, got {other:?}"),
        }
        match fixed_locus(&aut("(Y, X + Y^2)")) {
            FixedLocus::FiniteScheme { length } => assert_eq!(length, 2),
            other => panic!("expected a finite scheme, got {other:?}"),
        }
        assert_eq!(fixed_locus(&Automorphism::identity()), FixedLocus::Plane);
        // (X+1, 2Y) has no fixed point
        assert_eq!(fixed_locus(&aut("(X + 1, 2*Y)")), FixedLocus::Empty);
    }

    #[test]
    fn in_s_examples() {
        assert!(in_s(&aut("(2*X + Y^3, 3*Y)")));
        assert!(!in_s(&aut("(X + 1, 2*Y)")));
        assert!(!in_s(&aut("(Y, X + Y^2)")));
    }

    #[test]
    fn semisimple_and_unipotent_examples() {
        assert!(is_semisimple(&aut("(2*X + Y^3, 3*Y)")));
        assert!(!is_semisimple(&aut("(X + 1, 2*Y)")));
        assert!(!is_semisimple(&aut("(X + Y^2, Y)")));
        assert!(!is_semisimple(&aut("(Y, X + Y^2)")));
        assert!(is_unipotent(&aut("(X + Y^2, Y)")));
        assert!(is_unipotent(&Automorphism::identity()));
        assert!(!is_unipotent(&aut("(2*X, 3*Y)")));
    }

    #[test]
    fn omega_annihilator_examples() {
        let pseudo = PseudoEigenPair::from_roots(Scalar::int(2), Scalar::int(3));
        // m = 1: roots {1, 2, 3}
        let p = omega_annihilator(&pseudo, 1);
        let want = UniPoly::linear_root(&Scalar::int(1))
            .mul(&UniPoly::linear_root(&Scalar::int(2)))
            .mul(&UniPoly::linear_root(&Scalar::int(3)));
        assert_eq!(p, want);
        // m = 2: roots {1, 2, 3, 4, 6, 9}
        let p = omega_annihilator(&pseudo, 2);
        assert_eq!(p.degree(), Some(6));
        for r in [1, 2, 3, 4, 6, 9] {
            assert!(p.eval(&Scalar::int(r)).is_zero());
        }
        // unipotent pair: T - 1 regardless of m
        let unip = PseudoEigenPair::from_roots(Scalar::one(), Scalar::one());
        assert_eq!(omega_annihilator(&unip, 5), UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn omega_annihilator_gaussian_pair_is_rational() {
        let (i, mi) = quadratic_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap();
        let pseudo = PseudoEigenPair::from_roots(i, mi);
        let p = omega_annihilator(&pseudo, 2);
        assert!(p.coeffs().iter().all(Scalar::is_rational));
    }

    #[test]
    fn pullback_spectrum_examples() {
        let t = TriangularMap::new(
            Scalar::int(2),
            UniPoly::from_ints(&[0, 0, 0, 1]),
            Scalar::int(3),
            Scalar::zero(),
        );
        let mut want: Vec<Scalar> = [1, 3, 9, 27, 2].iter().map(|&n| Scalar::int(n)).collect();
        want.sort();
        assert_eq!(pullback_spectrum(&t, 3), want);

        let diag = TriangularMap::diagonal(Scalar::int(2), Scalar::int(3));
        let mut want: Vec<Scalar> = [1, 3, 2].iter().map(|&n| Scalar::int(n)).collect();
        want.sort();
        assert_eq!(pullback_spectrum(&diag, 1), want);

        let id = TriangularMap::identity();
        assert!(pullback_spectrum(&id, 4).iter().all(Scalar::is_one));
    }

    #[test]
    fn pullback_spectrum_matches_enumeration() {
        let t = TriangularMap::new(
            Scalar::int(-2),
            UniPoly::from_ints(&[1, 0, 3]),
            Scalar::ratio(1, 2),
            Scalar::int(1),
        );
        for s in 0..=4 {
            let spec = pullback_spectrum(&t, s);
            let d = t.degree();
            let mut direct: Vec<Scalar> = Vec::new();
            for k in 0..=(s / d) {
                for l in 0..=(s - d * k) {
                    direct.push(&t.a.pow(k as i64) * &t.b.pow(l as i64));
                }
            }
            direct.sort();
            assert_eq!(spec, direct);
        }
    }

    #[test]
    fn full_report_examples() {
        let r = full_report(&parse_endo("(2*X + Y^3, 3*Y)").unwrap()).unwrap();
        assert!(r.is_lf && r.is_semisimple && r.conjugacy_class_closed && r.in_s);
        assert_eq!(r.degree, 3);

        let r = full_report(&parse_endo("(X + Y^2, Y)").unwrap()).unwrap();
        assert!(r.is_lf && r.is_unipotent && !r.is_semisimple && !r.conjugacy_class_closed);

        let r = full_report(&parse_endo("(Y, X + Y^2)").unwrap()).unwrap();
        assert!(!r.is_lf && !r.conjugacy_class_closed);
        assert_eq!(r.dynamical_degree, Rational::from_integer(2.into()));
        assert!(matches!(r.fixed_locus, FixedLocus::FiniteScheme { length: 2 }));

        assert!(matches!(
            full_report(&parse_endo("(X^2, Y)").unwrap()),
            Err(Error::NotAnAutomorphism(_))
        ));
    }

    #[test]
    fn report_consistency_clean() {
        for s in ["(2*X + Y^3, 3*Y)", "(X + 1, 2*Y)", "(X + Y^2, Y)", "(Y, X + Y^2)"] {
            let f = aut(s);
            let r = full_report_for(&f).unwrap();
            assert!(consistency_failures(&f, &r).is_empty(), "inconsistent: {s}");
        }
    }
}
