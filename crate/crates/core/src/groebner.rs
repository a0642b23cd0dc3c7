//! Buchberger's algorithm for small bivariate ideals under graded lex order,
//! plus quotient dimension and multiplication matrices on the standard
//! monomial basis. Sized for fixed-point ideals of desk-scale automorphisms.

use crate::bipoly::{BiPoly, Exp};
use crate::scalar::Scalar;
use std::cmp::Ordering;

/// Graded lexicographic order with X > Y.
pub fn grlex_cmp(a: Exp, b: Exp) -> Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

fn leading_term(p: &BiPoly) -> Option<(Exp, Scalar)> {
    p.terms()
        .max_by(|(&ea, _), (&eb, _)| grlex_cmp(ea, eb))
        .map(|(&e, c)| (e, c.clone()))
}

fn divides(a: Exp, b: Exp) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

fn exp_lcm(a: Exp, b: Exp) -> Exp {
    (a.0.max(b.0), a.1.max(b.1))
}

/// Full normal form of p modulo the basis: every remaining term is
/// divisible by no leading term.
pub fn normal_form(p: &BiPoly, basis: &[BiPoly]) -> BiPoly {
    let lts: Vec<(Exp, Scalar)> = basis.iter().filter_map(leading_term).collect();
    let mut rem = BiPoly::zero();
    let mut work = p.clone();
    'outer: while let Some((e, c)) = leading_term(&work) {
        for (g, (lt, lc)) in basis.iter().zip(lts.iter()) {
            if divides(*lt, e) {
                let shift = (e.0 - lt.0, e.1 - lt.1);
                let factor = BiPoly::monomial(shift, &c / lc);
                work = work.sub(&factor.mul(g));
                continue 'outer;
            }
        }
        // move the irreducible leading term to the remainder
        work = work.sub(&BiPoly::monomial(e, c.clone()));
        rem = rem.add(&BiPoly::monomial(e, c));
    }
    rem
}

fn s_poly(f: &BiPoly, g: &BiPoly) -> BiPoly {
    let (ef, cf) = leading_term(f).unwrap();
    let (eg, cg) = leading_term(g).unwrap();
    let l = exp_lcm(ef, eg);
    let mf = BiPoly::monomial((l.0 - ef.0, l.1 - ef.1), cf.inv());
    let mg = BiPoly::monomial((l.0 - eg.0, l.1 - eg.1), cg.inv());
    mf.mul(f).sub(&mg.mul(g))
}

/// Rescale to a primitive integer form (positive leading coefficient) to
/// keep coefficient growth under control; falls back to a monic rescale
/// over a quadratic extension. Scaling a basis element never changes the
/// ideal.
fn primitive_part(p: &BiPoly) -> BiPoly {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    if p.is_zero() {
        return p.clone();
    }
    if !p.is_rational() {
        let (_, lc) = leading_term(p).unwrap();
        return p.scale(&lc.inv());
    }
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for (_, c) in p.terms() {
        let r = c.as_rational().unwrap();
        denom_lcm = num_integer::lcm(denom_lcm, r.denom().clone());
        numer_gcd = num_integer::gcd(numer_gcd, r.numer().clone());
    }
    let scale = crate::scalar::Rational::new(denom_lcm, numer_gcd);
    let mut out = p.scale(&Scalar::Rat(scale.abs()));
    let (_, lc) = leading_term(&out).unwrap();
    if matches!(&lc, Scalar::Rat(r) if r < &crate::scalar::rat_int(0)) {
        out = out.neg();
    }
    out
}

/// Reduced Groebner basis (normalized, fully interreduced, sorted by
/// leading term). Pairs are processed by ascending lcm degree.
pub fn groebner_basis(gens: &[BiPoly]) -> Vec<BiPoly> {
    let mut basis: Vec<BiPoly> =
        gens.iter().filter(|p| !p.is_zero()).map(primitive_part).collect();
    let lcm_deg = |basis: &[BiPoly], i: usize, j: usize| -> u32 {
        let (ei, _) = leading_term(&basis[i]).unwrap();
        let (ej, _) = leading_term(&basis[j]).unwrap();
        let l = exp_lcm(ei, ej);
        l.0 + l.1
    };
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut pairs: BinaryHeap<(Reverse<u32>, usize, usize)> = BinaryHeap::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((Reverse(lcm_deg(&basis, j, i)), j, i));
        }
    }
    while let Some((_, i, j)) = pairs.pop() {
        let (ei, _) = leading_term(&basis[i]).unwrap();
        let (ej, _) = leading_term(&basis[j]).unwrap();
        // coprime leading terms reduce to zero; skip
        if exp_lcm(ei, ej) == (ei.0 + ej.0, ei.1 + ej.1) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            let r = primitive_part(&r);
            for k in 0..basis.len() {
                pairs.push((Reverse(lcm_deg_with(&basis[k], &r)), k, basis.len()));
            }
            basis.push(r);
        }
    }
    // minimize: drop elements whose leading term another element divides
    // (ties keep the earliest), then reduce tails to a fixpoint. Tail
    // reduction cannot drop an element: its leading term is untouched.
    let mut minimal: Vec<BiPoly> = Vec::new();
    'outer: for i in 0..basis.len() {
        let (ei, _) = leading_term(&basis[i]).unwrap();
        for (j, other) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let (ej, _) = leading_term(other).unwrap();
            if divides(ej, ei) && (ej != ei || j < i) {
                continue 'outer;
            }
        }
        minimal.push(basis[i].clone());
    }
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<BiPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = normal_form(&minimal[i], &others);
            if r != minimal[i] {
                assert!(!r.is_zero(), "tail reduction keeps the leading term");
                minimal[i] = primitive_part(&r);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    minimal.sort_by(|a, b| grlex_cmp(leading_term(a).unwrap().0, leading_term(b).unwrap().0));
    minimal
}

fn lcm_deg_with(a: &BiPoly, b: &BiPoly) -> u32 {
    let (ea, _) = leading_term(a).unwrap();
    let (eb, _) = leading_term(b).unwrap();
    let l = exp_lcm(ea, eb);
    l.0 + l.1
}

/// Monomials outside the leading-term ideal, sorted by grlex; None when the
/// quotient is infinite dimensional.
pub fn standard_monomials(gb: &[BiPoly]) -> Option<Vec<Exp>> {
    if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Some(vec![]); // the whole ring: ideal is (1)
    }
    let lts: Vec<Exp> = gb.iter().filter_map(|g| leading_term(g).map(|(e, _)| e)).collect();
    // finite iff some pure powers X^a and Y^b appear among the leading terms
    let xbound = lts.iter().filter(|e| e.1 == 0).map(|e| e.0).min()?;
    let ybound = lts.iter().filter(|e| e.0 == 0).map(|e| e.1).min()?;
    let mut out = Vec::new();
    for i in 0..xbound {
        for j in 0..ybound {
            let e = (i, j);
            if !lts.iter().any(|lt| divides(*lt, e)) {
                out.push(e);
            }
        }
    }
    out.sort_by(|&a, &b| grlex_cmp(a, b));
    Some(out)
}

/// Dimension of the quotient algebra, when finite.
pub fn quotient_dimension(gens: &[BiPoly]) -> Option<usize> {
    let gb = groebner_basis(gens);
    standard_monomials(&gb).map(|m| m.len())
}

/// Matrix of multiplication by X (or Y) on the standard-monomial basis of a
/// zero-dimensional quotient; column j holds the coordinates of x * m_j.
pub fn multiplication_matrix(gb: &[BiPoly], basis: &[Exp], by_x: bool) -> Vec<Vec<Scalar>> {
    let n = basis.len();
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for (j, &e) in basis.iter().enumerate() {
        let shifted = if by_x { (e.0 + 1, e.1) } else { (e.0, e.1 + 1) };
        let reduced = normal_form(&BiPoly::monomial(shifted, Scalar::one()), gb);
        for (&re, c) in reduced.terms() {
            let i = basis
                .iter()
                .position(|&b| b == re)
                .expect("normal form lies in the standard monomial span");
            m[i][j] = c.clone();
        }
    }
    m
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
    fn henon_fixed_ideal_has_dimension_two() {
        // (Y - X, X + Y^2 - Y): quotient basis {1, X}
        let g1 = y().sub(&x());
        let g2 = x().add(&y().pow(2)).sub(&y());
        let gb = groebner_basis(&[g1, g2]);
        let basis = standard_monomials(&gb).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(quotient_dimension(&[y().sub(&x()), x().add(&y().pow(2)).sub(&y())]), Some(2));
    }

    #[test]
    fn maximal_ideal_has_dimension_one() {
        assert_eq!(quotient_dimension(&[x(), y()]), Some(1));
    }

    #[test]
    fn positive_dimensional_detected() {
        assert_eq!(quotient_dimension(&[y().sub(&x())]), None);
    }

    #[test]
    fn unit_ideal() {
        assert_eq!(quotient_dimension(&[x(), y(), BiPoly::int(1)]), Some(0));
    }

    #[test]
    fn multiplication_matrix_henon() {
        let g1 = y().sub(&x());
        let g2 = x().add(&y().pow(2)).sub(&y());
        let gb = groebner_basis(&[g1, g2]);
        let basis = standard_monomials(&gb).unwrap();
        let m = multiplication_matrix(&gb, &basis, true);
        // eigenvalues of mult-by-X are the X-coordinates of the fixed points:
        // char poly must be X^2 (double root at 0)
        let cp = crate::linalg::char_poly(&m);
        assert_eq!(cp, crate::upoly::UniPoly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn groebner_contains_input_ideal() {
        let g1 = x().pow(2).add(&y());
        let g2 = x().mul(&y()).sub(&BiPoly::int(1));
        let gb = groebner_basis(&[g1.clone(), g2.clone()]);
        assert!(normal_form(&g1, &gb).is_zero());
        assert!(normal_form(&g2, &gb).is_zero());
        let combo = g1.mul(&y().pow(3)).sub(&g2.mul(&x()));
        assert!(normal_form(&combo, &gb).is_zero());
    }
}
