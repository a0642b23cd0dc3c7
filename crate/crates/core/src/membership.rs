//! Effective ideal membership at bounded degree: explicit multiplier
//! certificates for fixed-point coordinates, with the doubly exponential
//! degree bound K = d + (sd)^(2^n) guaranteeing their existence.

use crate::bipoly::{BiPoly, Degree};
use crate::classify::{fixed_locus, FixedLocus};
use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::solve;
use crate::scalar::Scalar;
use crate::word::Automorphism;
use num_bigint::BigUint;

/// target = sum multipliers[i] * generators[i], exactly, with
/// deg multipliers[i] <= bound.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub target: BiPoly,
    pub generators: Vec<BiPoly>,
    pub multipliers: Vec<BiPoly>,
    pub bound: BigUint,
}

impl MembershipCertificate {
    /// Re-expand and compare; the certificate is only as good as this check.
    pub fn verify(&self) -> bool {
        let mut acc = BiPoly::zero();
        for (l, g) in self.multipliers.iter().zip(self.generators.iter()) {
            acc = acc.add(&l.mul(g));
        }
        if acc != self.target {
            return false;
        }
        self.multipliers.iter().all(|l| match l.degree() {
            Degree::NegInf => true,
            Degree::Finite(d) => BigUint::from(d) <= self.bound,
        })
    }
}

/// K = d + (sd)^(2^n): multipliers of degree <= K suffice for any
/// membership among polynomials of degree <= d in n variables with s
/// generators. The tower is computed by squaring n times, so the result
/// is exact for any n.
pub fn hermann_bound(n: u32, d: u64, s: u64) -> BigUint {
    let mut power = BigUint::from(s) * BigUint::from(d);
    for _ in 0..n {
        power = &power * &power;
    }
    BigUint::from(d) + power
}

/// Size cap for the membership solver, overridable through the CLI's
/// PLANEAUT_MAX_UNKNOWNS environment variable.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub max_unknowns: usize,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig { max_unknowns: 10_000 }
    }
}

fn monomials_of_degree_at_most(d: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for i in 0..=d {
        for j in 0..=(d - i) {
            v.push((i, j));
        }
    }
    v.sort();
    v
}

/// Search multipliers of degree 0, 1, 2, ... up to `bound`, returning the
/// first exact solution. Membership itself is decided first on a Groebner
/// basis, so a non-member returns None without walking the bound.
pub fn ideal_membership_bounded(
    target: &BiPoly,
    gens: &[BiPoly],
    bound: &BigUint,
    config: &SolverConfig,
) -> Result<Option<MembershipCertificate>> {
    if gens.is_empty() {
        return Ok(None);
    }
    let gb = groebner::groebner_basis(gens);
    if !groebner::normal_form(target, &gb).is_zero() {
        return Ok(None);
    }
    let max_gen_deg = gens
        .iter()
        .map(|g| g.degree().finite().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let target_deg = target.degree().finite().unwrap_or(0);
    let mut deg_limit: u32 = 0;
    loop {
        if BigUint::from(deg_limit) > *bound {
            return Ok(None);
        }
        let mult_monomials = monomials_of_degree_at_most(deg_limit);
        let unknowns = gens.len() * mult_monomials.len();
        if unknowns > config.max_unknowns {
            return Err(Error::BoundTooLarge { unknowns, cap: config.max_unknowns });
        }
        let eq_deg = target_deg.max(deg_limit + max_gen_deg);
        let eq_monomials = monomials_of_degree_at_most(eq_deg);
        let eq_index = |e: (u32, u32)| -> usize {
            eq_monomials.binary_search(&e).expect("equation monomial in range")
        };
        // rows: one per equation monomial; columns: (generator, multiplier monomial)
        let mut rows = vec![vec![Scalar::zero(); unknowns]; eq_monomials.len()];
        for (gi, g) in gens.iter().enumerate() {
            for (mi, &(a, b)) in mult_monomials.iter().enumerate() {
                let col = gi * mult_monomials.len() + mi;
                for (&(i, j), c) in g.terms() {
                    rows[eq_index((i + a, j + b))][col] = c.clone();
                }
            }
        }
        let rhs: Vec<Scalar> = eq_monomials.iter().map(|&e| target.coeff(e)).collect();
        if let Some(x) = solve(&rows, &rhs, unknowns) {
            let multipliers: Vec<BiPoly> = (0..gens.len())
                .map(|gi| {
                    BiPoly::from_terms(mult_monomials.iter().enumerate().map(|(mi, &e)| {
                        (e, x[gi * mult_monomials.len() + mi].clone())
                    }))
                })
                .collect();
            let cert = MembershipCertificate {
                target: target.clone(),
                generators: gens.to_vec(),
                multipliers,
                bound: bound.clone(),
            };
            assert!(cert.verify(), "membership certificate failed to re-expand");
            return Ok(Some(cert));
        }
        deg_limit += 1;
    }
}

/// Certificates expressing X - alpha and Y - beta in the fixed-point ideal
/// (f1 - X, f2 - Y), with multipliers within the Hermann bound
/// K_m = m + (2m)^4 for m = deg f. Requires a unique fixed point of
/// multiplicity one.
pub fn express_fixed_point(
    f: &Automorphism,
    config: &SolverConfig,
) -> Result<(MembershipCertificate, MembershipCertificate)> {
    let xi = match fixed_locus(f) {
        FixedLocus::SimplePoint(p) => p,
        _ => return Err(Error::NotInS),
    };
    let m = f.degree() as u64;
    let bound = hermann_bound(2, m, 2);
    let gens = vec![f.endo().f1.sub(&BiPoly::x()), f.endo().f2.sub(&BiPoly::y())];
    let tx = BiPoly::x().sub(&BiPoly::constant(xi.x.clone()));
    let ty = BiPoly::y().sub(&BiPoly::constant(xi.y.clone()));
    let cx = ideal_membership_bounded(&tx, &gens, &bound, config)?
        .expect("X - alpha lies in the maximal fixed-point ideal");
    let cy = ideal_membership_bounded(&ty, &gens, &bound, config)?
        .expect("Y - beta lies in the maximal fixed-point ideal");
    Ok((cx, cy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::parse_endo;

    fn aut(s: &str) -> Automorphism {
        Automorphism::from_endo(&parse_endo(s).unwrap()).unwrap()
    }

    fn poly(s: &str) -> BiPoly {
        // parse as the first component of an endo
        parse_endo(&format!("({s}, Y)")).unwrap().f1
    }

    #[test]
    fn hermann_bound_values() {
        assert_eq!(hermann_bound(2, 1, 2), BigUint::from(17u32));
        assert_eq!(hermann_bound(2, 2, 3), BigUint::from(1298u32));
        assert_eq!(hermann_bound(1, 1, 1), BigUint::from(2u32));
    }

    #[test]
    fn membership_simple() {
        // X^2 in (X) with multiplier X
        let cert = ideal_membership_bounded(
            &poly("X^2"),
            &[BiPoly::x()],
            &BigUint::from(1u32),
            &SolverConfig::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(cert.multipliers, vec![BiPoly::x()]);
        assert!(cert.verify());
    }

    #[test]
    fn membership_henon_style() {
        // X = 1*(X + Y^3) + (-Y^2/2)*(2Y)
        let gens = vec![poly("X + Y^3"), poly("2*Y")];
        let cert = ideal_membership_bounded(
            &BiPoly::x(),
            &gens,
            &BigUint::from(2u32),
            &SolverConfig::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(cert.multipliers[0], BiPoly::int(1));
        assert_eq!(cert.multipliers[1], poly("-1/2*Y^2"));
    }

    #[test]
    fn membership_negative() {
        // 1 is not in (X, Y)
        let got = ideal_membership_bounded(
            &BiPoly::int(1),
            &[BiPoly::x(), BiPoly::y()],
            &BigUint::from(1_000_000u64),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn solver_cap_converts_to_error() {
        // member, but the certificate search is capped too tightly
        let config = SolverConfig { max_unknowns: 1 };
        let got = ideal_membership_bounded(
            &poly("X^2"),
            &[BiPoly::x(), BiPoly::y()],
            &BigUint::from(50u32),
            &config,
        );
        assert!(matches!(got, Err(Error::BoundTooLarge { .. })));
    }

    #[test]
    fn fixed_point_certificates() {
        let f = aut("(2*X + Y^3, 3*Y)");
        let (cx, cy) = express_fixed_point(&f, &SolverConfig::default()).unwrap();
        // X = 1*(X + Y^3) + (-Y^2/2)*(2Y), Y = 0 + (1/2)*(2Y)
        assert_eq!(cx.target, BiPoly::x());
        assert_eq!(cx.multipliers[0], BiPoly::int(1));
        assert_eq!(cx.multipliers[1], poly("-1/2*Y^2"));
        assert_eq!(cy.multipliers[0], BiPoly::zero());
        assert_eq!(cy.multipliers[1], poly("1/2"));
        assert!(cx.verify() && cy.verify());
    }

    #[test]
    fn fixed_point_certificates_diagonal() {
        let f = aut("(2*X, 3*Y)");
        let (cx, cy) = express_fixed_point(&f, &SolverConfig::default()).unwrap();
        assert_eq!(cx.multipliers[0], poly("1"));
        assert_eq!(cy.multipliers[1], poly("1/2"));
    }

    #[test]
    fn fixed_point_not_in_s() {
        assert!(matches!(
            express_fixed_point(&aut("(X + Y^2, Y)"), &SolverConfig::default()),
            Err(Error::NotInS)
        ));
    }

    #[test]
    fn certificate_agrees_with_fixed_locus_off_origin() {
        // conjugate (2X, 3Y) by a translation: fixed point (1, -2)
        let shift = aut("(X + 1, Y - 2)");
        let f = shift.conjugate(&aut("(2*X, 3*Y)"));
        let (cx, _cy) = express_fixed_point(&f, &SolverConfig::default()).unwrap();
        match fixed_locus(&f) {
            FixedLocus::SimplePoint(p) => {
                assert_eq!(cx.target, BiPoly::x().sub(&BiPoly::constant(p.x)));
            }
            other => panic!("expected point, got {other:?}"),
        }
        assert!(cx.verify());
    }
}
