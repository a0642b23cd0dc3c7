//! Constructive diagonalization of semisimple automorphisms and the
//! conjugacy decision with explicit, composition-verified conjugators.

use crate::endo::TriangularMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::upoly::UniPoly;
use crate::word::Automorphism;

/// A diagonalization f = conjugator o (aX, bY) o conjugator^{-1}, with
/// deg conjugator <= deg f.
#[derive(Clone, Debug)]
pub struct DiagonalForm {
    pub a: Scalar,
    pub b: Scalar,
    pub conjugator: Automorphism,
}

impl DiagonalForm {
    pub fn diagonal_endo(&self) -> crate::endo::PlaneEndo {
        TriangularMap::diagonal(self.a.clone(), self.b.clone()).to_endo()
    }

    /// Unordered pseudo-eigenvalue data of the diagonal part.
    pub fn trace(&self) -> Scalar {
        &self.a + &self.b
    }

    pub fn jac(&self) -> Scalar {
        &self.a * &self.b
    }
}

/// Diagonalize a triangular map: first remove the translation by
/// conjugating with (X, Y + c/(b-1)) — possible unless b = 1, in which
/// case c must already vanish — then remove p by the unique triangular
/// (X + q(Y), Y) with q(bY) - a q(Y) = p(Y). The obstruction is the
/// resonance a = b^k against a nonzero coefficient p_k.
pub fn diagonalize_triangular(t: &TriangularMap) -> Result<DiagonalForm> {
    let one = Scalar::one();
    let (shift_inv, centered) = if t.b == one {
        if !t.c.is_zero() {
            return Err(Error::NotSemisimple(
                "translation cannot be removed: b = 1 and c != 0".into(),
            ));
        }
        (None, t.clone())
    } else {
        let e = &t.c / &(&t.b - &one);
        // l = (X, Y + e); l o t o l^{-1} = (aX + p(Y - e), bY)
        let shifted_p = t.p.compose(&UniPoly::new(vec![-&e, one.clone()]).with_var("Y"));
        let centered = TriangularMap::new(t.a.clone(), shifted_p, t.b.clone(), Scalar::zero());
        let l_inv = TriangularMap::new(one.clone(), UniPoly::zero(), one.clone(), -&e);
        (Some(l_inv), centered)
    };

    let mut q = Vec::with_capacity(centered.p.coeffs().len());
    for (k, pk) in centered.p.coeffs().iter().enumerate() {
        if pk.is_zero() {
            q.push(Scalar::zero());
            continue;
        }
        let denom = &centered.b.pow(k as i64) - &centered.a;
        if denom.is_zero() {
            return Err(Error::NotSemisimple(format!(
                "resonance: a = b^{k} while the Y^{k} coefficient of p is nonzero"
            )));
        }
        q.push(pk / &denom);
    }
    let chi = TriangularMap::new(one.clone(), UniPoly::new(q), one, Scalar::zero());
    let psi_t = match shift_inv {
        Some(l_inv) => l_inv.compose(&chi),
        None => chi,
    };
    let conjugator = Automorphism::triangular(psi_t);
    let form = DiagonalForm { a: t.a.clone(), b: t.b.clone(), conjugator };
    verify_diagonalization(&form, &t.to_endo());
    Ok(form)
}

fn verify_diagonalization(form: &DiagonalForm, target: &crate::endo::PlaneEndo) {
    let recomposed = form
        .conjugator
        .endo()
        .compose(&form.diagonal_endo())
        .compose(form.conjugator.inverse().endo());
    assert_eq!(&recomposed, target, "diagonalization failed to verify");
}

/// Diagonalize a semisimple automorphism: triangularize, then apply the
/// triangular step; the conjugator satisfies deg psi <= deg f.
pub fn diagonalize(f: &Automorphism) -> Result<DiagonalForm> {
    let (phi, t) = crate::classify::triangularize(f).map_err(|e| match e {
        Error::NotTriangularizable => Error::NotSemisimple("not triangularizable".into()),
        other => other,
    })?;
    let inner = diagonalize_triangular(&t)?;
    let conjugator = phi.compose(&inner.conjugator);
    assert!(
        conjugator.degree() <= f.degree(),
        "diagonalizer degree bound violated: {} > {}",
        conjugator.degree(),
        f.degree()
    );
    let form = DiagonalForm { a: inner.a, b: inner.b, conjugator };
    verify_diagonalization(&form, f.endo());
    Ok(form)
}

/// Decide conjugacy of two semisimple automorphisms. They are conjugate
/// iff their unordered pseudo-eigenvalue pairs coincide (tested through
/// the rational pair (trace, Jacobian)); a positive answer carries a
/// composition-verified conjugator psi with f = psi o g o psi^{-1}.
pub fn conjugacy_test_semisimple(
    f: &Automorphism,
    g: &Automorphism,
) -> Result<Option<Automorphism>> {
    let df = diagonalize(f)?;
    let dg = diagonalize(g)?;
    if df.trace() != dg.trace() || df.jac() != dg.jac() {
        return Ok(None);
    }
    // match the diagonal orderings; identity when a = b
    let sigma = if df.a == dg.a {
        Automorphism::identity()
    } else {
        debug_assert_eq!(df.a, dg.b);
        Automorphism::affine(crate::endo::AffineMap::swap())
    };
    let psi = df.conjugator.compose(&sigma).compose(&dg.conjugator.inverse());
    let recomposed = psi.endo().compose(g.endo()).compose(psi.inverse().endo());
    assert_eq!(&recomposed, f.endo(), "conjugator failed to verify");
    Ok(Some(psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::parse_endo;
    use crate::scalar::rat;

    fn aut(s: &str) -> Automorphism {
        Automorphism::from_endo(&parse_endo(s).unwrap()).unwrap()
    }

    fn tri(s: &str) -> TriangularMap {
        TriangularMap::from_endo(&parse_endo(s).unwrap()).unwrap()
    }

    #[test]
    fn triangular_step_kills_cubic() {
        let t = tri("(2*X + Y^3, 3*Y)");
        let d = diagonalize_triangular(&t).unwrap();
        assert_eq!(d.a, Scalar::int(2));
        assert_eq!(d.b, Scalar::int(3));
        // chi = (X + (1/25) Y^3, Y) since 1/(3^3 - 2) = 1/25
        assert_eq!(
            d.conjugator.endo(),
            &parse_endo("(X + 1/25*Y^3, Y)").unwrap()
        );
    }

    #[test]
    fn triangular_step_kills_translation() {
        let t = tri("(2*X, 3*Y + 5)");
        let d = diagonalize_triangular(&t).unwrap();
        assert_eq!((d.a, d.b), (Scalar::int(2), Scalar::int(3)));
        // conjugator (X, Y - 5/2): psi o (2X,3Y) o psi^{-1} = (2X, 3Y+5)
        assert_eq!(
            d.conjugator.endo(),
            &parse_endo("(X, Y - 5/2)").unwrap()
        );
    }

    #[test]
    fn resonance_rejected() {
        // (X + Y^2, Y): a = 1 = b^2 with p_2 != 0
        let t = tri("(X + Y^2, Y)");
        assert!(matches!(diagonalize_triangular(&t), Err(Error::NotSemisimple(_))));
        // b = 1 with c != 0
        let t = tri("(2*X, Y + 1)");
        assert!(matches!(diagonalize_triangular(&t), Err(Error::NotSemisimple(_))));
    }

    #[test]
    fn diagonalize_conjugated() {
        let f = aut("(2*X, 3*Y + X^2)");
        let d = diagonalize(&f).unwrap();
        let mut pair = [d.a.clone(), d.b.clone()];
        pair.sort();
        assert_eq!(pair, [Scalar::int(2), Scalar::int(3)]);
        assert!(d.conjugator.degree() <= f.degree());
    }

    #[test]
    fn diagonalize_trivial_and_failing() {
        let d = diagonalize(&aut("(2*X, 3*Y)")).unwrap();
        assert!(d.conjugator.is_identity());
        assert!(matches!(diagonalize(&aut("(X + Y^2, Y)")), Err(Error::NotSemisimple(_))));
        assert!(matches!(diagonalize(&aut("(Y, X + Y^2)")), Err(Error::NotSemisimple(_))));
    }

    #[test]
    fn diagonalize_rotation_over_gaussian_field() {
        let d = diagonalize(&aut("(-Y, X)")).unwrap();
        assert!(!d.a.is_rational());
        assert_eq!(&d.a * &d.b, Scalar::one());
        assert_eq!(&d.a + &d.b, Scalar::zero());
        assert_eq!(d.conjugator.degree(), 1);
    }

    #[test]
    fn conjugacy_positive_pair() {
        let f = aut("(2*X + Y^3, 3*Y)");
        let g = aut("(2*X, 3*Y + X^2)");
        let psi = conjugacy_test_semisimple(&f, &g).unwrap().unwrap();
        let back = psi.endo().compose(g.endo()).compose(psi.inverse().endo());
        assert_eq!(&back, f.endo());
    }

    #[test]
    fn conjugacy_needs_swap() {
        let f = aut("(2*X, 3*Y)");
        let g = aut("(3*X, 2*Y)");
        let psi = conjugacy_test_semisimple(&f, &g).unwrap().unwrap();
        assert_eq!(psi.endo(), &crate::endo::PlaneEndo::swap());
    }

    #[test]
    fn conjugacy_negative() {
        let f = aut("(2*X, 3*Y)");
        let g = aut("(2*X, 5*Y)");
        assert!(conjugacy_test_semisimple(&f, &g).unwrap().is_none());
    }

    #[test]
    fn conjugacy_symmetric() {
        let f = aut("(2*X + Y^3, 3*Y)");
        let g = aut("(2*X, 3*Y + X^2)");
        assert!(conjugacy_test_semisimple(&f, &g).unwrap().is_some());
        assert!(conjugacy_test_semisimple(&g, &f).unwrap().is_some());
    }

    #[test]
    fn diagonalize_recovers_constructed_pair() {
        // f = phi o (a, b)-diagonal o phi^{-1} recovers {a, b}
        let phi = aut("(X + Y^2, Y)");
        let diag = aut("(5*X, -2*Y)");
        let f = phi.conjugate(&diag);
        let d = diagonalize(&f).unwrap();
        let mut got = [d.a.clone(), d.b.clone()];
        got.sort();
        let mut want = [Scalar::int(5), Scalar::int(-2)];
        want.sort();
        assert_eq!(got, want);
        assert!(d.conjugator.degree() <= f.degree());
    }

    #[test]
    fn rational_scalars_in_diagonal() {
        let t = TriangularMap::new(
            Scalar::Rat(rat(1, 2)),
            UniPoly::from_ints(&[3, 0, 1]),
            Scalar::int(2),
            Scalar::int(1),
        );
        let d = diagonalize_triangular(&t).unwrap();
        assert_eq!(d.a, Scalar::ratio(1, 2));
        assert_eq!(d.b, Scalar::int(2));
    }
}
