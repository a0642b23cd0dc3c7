//! Dense univariate polynomials over `Scalar`, with the gcd / squarefree /
//! quadratic-root machinery the classification layer relies on.

use crate::error::{Error, Result};

use crate::scalar::{common_disc, rational_fraction_string, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients stored lowest degree first; the leading coefficient of a
/// nonzero polynomial is nonzero. The indeterminate label is display-only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
    pub var: &'static str,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> UniPoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs, var: "T" }
    }

    pub fn with_var(mut self, var: &'static str) -> UniPoly {
        self.var = var;
        self
    }

    pub fn zero() -> UniPoly {
        UniPoly::new(vec![])
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> UniPoly {
        UniPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&c| Scalar::int(c)).collect())
    }

    /// The monomial c * T^n.
    pub fn monomial(c: Scalar, n: usize) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = c;
        UniPoly::new(coeffs)
    }

    /// T - r.
    pub fn linear_root(r: &Scalar) -> UniPoly {
        UniPoly::new(vec![-r, Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        self.coeffs.get(n).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn common_disc(&self) -> Result<Option<BigInt>> {
        common_disc(self.coeffs.iter())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        UniPoly::new(out).with_var(self.var)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &other.coeff(i));
        }
        UniPoly::new(out).with_var(self.var)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect()).with_var(self.var)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero().with_var(self.var);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out).with_var(self.var)
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect()).with_var(self.var)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one().with_var(self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let q = &top * &lead_inv;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = &rem[idx] - &(&q * b);
            }
            quot[shift] = q;
            rem.pop();
        }
        (
            UniPoly::new(quot).with_var(self.var),
            UniPoly::new(rem).with_var(self.var),
        )
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero().with_var(self.var);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &Scalar::int(i as i64) * c)
            .collect();
        UniPoly::new(out).with_var(self.var)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Substitute T -> u(T).
    pub fn compose(&self, u: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero().with_var(u.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(u).add(&UniPoly::constant(c.clone()));
        }
        acc
    }
}

/// Rescale by a positive rational to a primitive integer form; identity
/// on quadratic-extension coefficients apart from a monic rescale. Used
/// to keep Euclidean remainders from exploding.
fn primitive_rescale(p: &UniPoly) -> UniPoly {
    use num_traits::{One, Signed as _, Zero};
    if p.is_zero() {
        return p.clone();
    }
    if !p.coeffs.iter().all(Scalar::is_rational) {
        return p.monic();
    }
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for c in &p.coeffs {
        let r = c.as_rational().unwrap();
        denom_lcm = num_integer::lcm(denom_lcm, r.denom().clone());
        numer_gcd = num_integer::gcd(numer_gcd, r.numer().clone());
    }
    p.scale(&Scalar::Rat(Rational::new(denom_lcm, numer_gcd).abs()))
}

/// Monic gcd over the common coefficient field.
pub fn upoly_gcd(p: &UniPoly, q: &UniPoly) -> Result<UniPoly> {
    common_disc(p.coeffs.iter().chain(q.coeffs.iter()))?;
    let mut a = primitive_rescale(p);
    let mut b = primitive_rescale(q);
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = primitive_rescale(&r);
    }
    Ok(a.monic())
}

/// True iff p has no repeated roots, i.e. gcd(p, p') is constant.
pub fn is_squarefree(p: &UniPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = upoly_gcd(p, &p.derivative())?;
    Ok(g.degree() == Some(0))
}

/// Roots of a monic rational quadratic T^2 + p T + q, exact.
///
/// Returns a rational pair when the discriminant is a square and a
/// conjugate pair in Q(sqrt(D)) otherwise, D the squarefree core of the
/// discriminant.
pub fn quadratic_roots(poly: &UniPoly) -> Result<(Scalar, Scalar)> {
    if poly.degree() != Some(2) {
        return Err(Error::BadInput("quadratic_roots needs degree 2".into()));
    }
    if !poly.is_monic() {
        return Err(Error::BadInput("quadratic_roots needs a monic input".into()));
    }
    let (c0, c1) = match (poly.coeff(0), poly.coeff(1)) {
        (Scalar::Rat(c0), Scalar::Rat(c1)) => (c0, c1),
        _ => return Err(Error::BadInput("quadratic_roots needs rational coefficients".into())),
    };
    let half = crate::scalar::rat(1, 2);
    let disc = &c1 * &c1 - Rational::from_integer(BigInt::from(4)) * &c0;
    let mid = Scalar::Rat(-&c1 * &half);
    let root = Scalar::sqrt_rational(&disc); // sqrt(disc), rational or b*sqrt(D)
    let halfroot = &root * &Scalar::Rat(half);
    Ok((&mid + &halfroot, &mid - &halfroot))
}

/// Rational roots with multiplicities. Candidates are found modulo a
/// prime on the squarefree part, Hensel-lifted, and rationally
/// reconstructed; every candidate is verified by exact evaluation, so the
/// modular machinery cannot introduce a wrong root, and squarefreeness
/// mod p (checked) guarantees none is missed. This avoids enumerating the
/// divisors of large smooth constant terms.
pub fn rational_roots(p: &UniPoly) -> Vec<(Rational, usize)> {
    if p.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut work = p.clone();
    // strip the root at 0
    let mut zero_mult = 0;
    while !work.is_zero() && work.coeff(0).is_zero() {
        work = work.div_exact(&UniPoly::monomial(Scalar::one(), 1));
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rational::zero(), zero_mult));
    }
    if work.degree().unwrap_or(0) == 0 {
        return out;
    }
    // clear denominators
    let mut denom_lcm = BigInt::one();
    for c in work.coeffs() {
        let r = c.as_rational().expect("rational_roots needs rational coefficients");
        denom_lcm = num_integer::lcm(denom_lcm, r.denom().clone());
    }
    let ints: Vec<BigInt> = work
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            (r * Rational::from_integer(denom_lcm.clone())).to_integer()
        })
        .collect();
    // squarefree part, as integers
    let g = upoly_gcd(&work, &work.derivative()).expect("rational field");
    let squarefree = work.div_exact(&g);
    for cand in rational_roots_squarefree(&squarefree, &ints) {
        let s = Scalar::Rat(cand.clone());
        let mut mult = 0;
        let lin = UniPoly::linear_root(&s);
        loop {
            let (q, r) = work.div_rem(&lin);
            if r.is_zero() {
                work = q;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            out.push((cand, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Rational roots of a squarefree rational polynomial; `original_ints` is
/// an integer form of the full polynomial supplying the numerator and
/// denominator divisibility bounds for reconstruction.
fn rational_roots_squarefree(sf: &UniPoly, original_ints: &[BigInt]) -> Vec<Rational> {
    use crate::numtheory::{is_probable_prime, rational_reconstruct, roots_mod_p};
    use num_traits::ToPrimitive;
    let deg = match sf.degree() {
        None | Some(0) => return vec![],
        Some(d) => d,
    };
    // integer form of the squarefree part
    let mut denom_lcm = BigInt::one();
    for c in sf.coeffs() {
        denom_lcm = num_integer::lcm(denom_lcm, c.as_rational().unwrap().denom().clone());
    }
    let ints: Vec<BigInt> = sf
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    // any rational root a/b has a | a0 and b | an of the original
    let a0 = original_ints.iter().find(|c| !c.is_zero()).unwrap().magnitude();
    let an = original_ints.last().unwrap().magnitude();
    let bound = BigInt::from(a0.max(an).clone());
    let target = BigInt::from(2) * &bound * &bound + 1;

    let mut prime: u64 = 65537;
    'primes: loop {
        while !is_probable_prime(&prime.into()) {
            prime += 2;
        }
        let p_big = BigInt::from(prime);
        // p must preserve the degree and squarefreeness
        let red: Vec<u64> = ints
            .iter()
            .map(|c| {
                use num_integer::Integer;
                c.mod_floor(&p_big).to_u64().unwrap()
            })
            .collect();
        if red[deg] == 0 {
            prime += 2;
            continue;
        }
        let deriv: Vec<u64> = red
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| ((k as u128 * c as u128) % prime as u128) as u64)
            .collect();
        let residues = roots_mod_p(&red, prime);
        for &r in &residues {
            // squarefree mod p at the root: the derivative must not vanish
            let mut dv: u64 = 0;
            for &c in deriv.iter().rev() {
                dv = ((dv as u128 * r as u128 + c as u128) % prime as u128) as u64;
            }
            if dv == 0 {
                prime += 2;
                continue 'primes;
            }
        }
        // Hensel-lift each simple root until the modulus covers the bound
        let mut found = Vec::new();
        for &r in &residues {
            let mut modulus = p_big.clone();
            let mut root = BigInt::from(r);
            while modulus < target {
                modulus = &modulus * &modulus;
                // Newton step: root -= f(root) / f'(root)  (mod modulus)
                let f_val = eval_int(&ints, &root, &modulus);
                let d_val = eval_int_derivative(&ints, &root, &modulus);
                use num_integer::Integer;
                let inv = mod_inverse(&d_val, &modulus).expect("derivative unit mod p^k");
                root = (&root - f_val * inv).mod_floor(&modulus);
            }
            if let Some((num, den)) = rational_reconstruct(&root, &modulus) {
                if !den.is_zero() {
                    let cand = Rational::new(num, den);
                    if sf.eval(&Scalar::Rat(cand.clone())).is_zero() && !found.contains(&cand) {
                        found.push(cand);
                    }
                }
            }
        }
        return found;
    }
}

fn eval_int(coeffs: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    use num_integer::Integer;
    let mut acc = BigInt::from(0);
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(modulus);
    }
    acc
}

fn eval_int_derivative(coeffs: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    use num_integer::Integer;
    let mut acc = BigInt::from(0);
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = (acc * x + c * BigInt::from(k)).mod_floor(modulus);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    use num_integer::Integer;
    let e = a.extended_gcd(m);
    if e.gcd != BigInt::from(1) {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Roots of a polynomial over Q(sqrt(D)) that lie in the field itself.
/// Handles degree 1 and 2 directly (the only cases the callers need);
/// higher degrees are reduced by peeling linear factors found over Q first.
pub fn roots_in_field(p: &UniPoly) -> Result<Vec<Scalar>> {
    let mut out = Vec::new();
    let mut work = p.monic();
    // peel rational-coefficient linear factors when all coefficients are rational
    if work.coeffs().iter().all(Scalar::is_rational) {
        for (r, mult) in rational_roots(&work) {
            let s = Scalar::Rat(r);
            for _ in 0..mult {
                work = work.div_exact(&UniPoly::linear_root(&s));
                out.push(s.clone());
            }
        }
    }
    match work.degree() {
        None | Some(0) => Ok(out),
        Some(1) => {
            out.push(-&work.coeff(0));
            Ok(out)
        }
        Some(2) => {
            // T^2 + pT + q over the field; root = (-p +- sqrt(p^2-4q))/2
            let b = work.coeff(1);
            let c = work.coeff(0);
            let disc = &(&b * &b) - &(&Scalar::int(4) * &c);
            if let Some(sq) = field_sqrt(&disc)? {
                let half = Scalar::ratio(1, 2);
                out.push(&(&(-&b) + &sq) * &half);
                out.push(&(&(-&b) - &sq) * &half);
            }
            Ok(out)
        }
        Some(d) => {
            if work.coeffs().iter().all(Scalar::is_rational) {
                // no rational roots remain and we do not factor further
                Ok(out)
            } else {
                Err(Error::UnsupportedExtension(format!(
                    "cannot extract roots of a degree-{d} polynomial over a quadratic field"
                )))
            }
        }
    }
}

/// Square root of a scalar inside Q or its own quadratic field, if one exists.
fn field_sqrt(s: &Scalar) -> Result<Option<Scalar>> {
    match s {
        Scalar::Rat(r) => {
            if r.is_zero() {
                return Ok(Some(Scalar::zero()));
            }
            let root = Scalar::sqrt_rational(r);
            Ok(root.is_rational().then_some(root))
        }
        Scalar::Quad(q) => {
            // want (x + y sqrt(d))^2 = a + b sqrt(d):
            // x^2 + d y^2 = a, 2xy = b; so x^2 solves z^2 - a z + d b^2/4 = 0.
            let a = Rational::from(q.a.clone());
            let b = q.b.clone();
            let d = Rational::from_integer(q.d.clone());
            let quarter = crate::scalar::rat(1, 4);
            let quad = UniPoly::new(vec![
                Scalar::Rat(&d * &b * &b * &quarter),
                Scalar::Rat(-a),
                Scalar::one(),
            ]);
            let (r1, r2) = quadratic_roots(&quad)?;
            for z in [r1, r2] {
                if let Scalar::Rat(z) = z {
                    let x = Scalar::sqrt_rational(&z);
                    if let Scalar::Rat(x) = x {
                        if x.is_zero() {
                            continue;
                        }
                        let y = &b / (Rational::from_integer(BigInt::from(2)) * &x);
                        let cand = Scalar::quad(q.d.clone(), x, y);
                        if &(&cand * &cand) == s {
                            return Ok(Some(cand));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

fn fmt_coeff(c: &Scalar) -> String {
    match c {
        Scalar::Rat(_) => format!("{c}"),
        Scalar::Quad(_) => format!("({c})"),
    }
}

impl fmt::Display for UniPoly {
    /// Descending powers, explicit `*` and `^`, omitted unit coefficients:
    /// the canonical form used in reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c {
                Scalar::Rat(r) if r.is_negative() => (true, -c),
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
            if !unit || i == 0 {
                write!(f, "{}", fmt_coeff(&mag))?;
            }
            if i > 0 {
                if !unit {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.var)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Serialize rational coefficients lowest-first as "num/den" strings.
pub fn coeff_strings(p: &UniPoly) -> Vec<String> {
    p.coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => rational_fraction_string(r),
            Scalar::Quad(q) => format!(
                "[{}, {}, {}]",
                rational_fraction_string(&q.a),
                rational_fraction_string(&q.b),
                q.d
            ),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn t() -> UniPoly {
        UniPoly::monomial(Scalar::one(), 1)
    }

    fn lin(r: i64) -> UniPoly {
        UniPoly::linear_root(&Scalar::int(r))
    }

    #[test]
    fn gcd_shared_factor() {
        // gcd(T^2-1, T-1) = T-1
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let q = UniPoly::from_ints(&[-1, 1]);
        assert_eq!(upoly_gcd(&p, &q).unwrap(), q);
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(upoly_gcd(&lin(2), &lin(3)).unwrap(), UniPoly::one());
    }

    #[test]
    fn gcd_with_multiplicity() {
        // gcd((T-1)^2 (T-2), (T-1)(T-3)) = T-1, checked by division
        let p = lin(1).mul(&lin(1)).mul(&lin(2));
        let q = lin(1).mul(&lin(3));
        let g = upoly_gcd(&p, &q).unwrap();
        assert_eq!(g, lin(1));
        assert!(p.div_rem(&g).1.is_zero());
        assert!(q.div_rem(&g).1.is_zero());
    }

    #[test]
    fn gcd_incompatible_fields() {
        let s2 = Scalar::quad(2.into(), rat_int(0), rat_int(1));
        let s3 = Scalar::quad(3.into(), rat_int(0), rat_int(1));
        let p = UniPoly::linear_root(&s2);
        let q = UniPoly::linear_root(&s3);
        assert!(matches!(upoly_gcd(&p, &q), Err(Error::IncompatibleField { .. })));
    }

    #[test]
    fn squarefree_checks() {
        let p = lin(2).mul(&lin(3)).mul(&lin(27));
        assert!(is_squarefree(&p).unwrap());
        let q = lin(1).mul(&lin(1));
        assert!(!is_squarefree(&q).unwrap());
        assert!(is_squarefree(&lin(1)).unwrap());
        assert!(matches!(is_squarefree(&UniPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn quadratic_roots_rational() {
        // T^2 - 5T + 6 -> {2, 3}
        let p = UniPoly::from_ints(&[6, -5, 1]);
        let (r, s) = quadratic_roots(&p).unwrap();
        let mut pair = [r, s];
        pair.sort();
        assert_eq!(pair, [Scalar::int(2), Scalar::int(3)]);
    }

    #[test]
    fn quadratic_roots_gaussian() {
        // T^2 + 1 -> +-sqrt(-1)
        let p = UniPoly::from_ints(&[1, 0, 1]);
        let (r, s) = quadratic_roots(&p).unwrap();
        assert_eq!(r.disc(), Some(&BigInt::from(-1)));
        assert_eq!(&r + &s, Scalar::zero());
        assert_eq!(&r * &s, Scalar::one());
    }

    #[test]
    fn quadratic_roots_real_quadratic() {
        // T^2 - 2T - 1 -> 1 +- sqrt(2); verify by expansion
        let p = UniPoly::from_ints(&[-1, -2, 1]);
        let (r, s) = quadratic_roots(&p).unwrap();
        assert_eq!(&r + &s, Scalar::int(2));
        assert_eq!(&r * &s, Scalar::int(-1));
        assert_eq!(r.disc(), Some(&BigInt::from(2)));
    }

    #[test]
    fn quadratic_roots_bad_input() {
        assert!(quadratic_roots(&lin(1)).is_err());
        let nonmonic = UniPoly::from_ints(&[1, 0, 2]);
        assert!(quadratic_roots(&nonmonic).is_err());
    }

    #[test]
    fn vieta_on_random_quadratics() {
        // root pair satisfies r+s = -p1 and r*s = p0, exactly
        for (p0, p1) in [(6, -5), (1, 0), (-1, -2), (7, 3), (-12, 1)] {
            let p = UniPoly::from_ints(&[p0, p1, 1]);
            let (r, s) = quadratic_roots(&p).unwrap();
            assert_eq!(&r + &s, Scalar::int(-p1));
            assert_eq!(&r * &s, Scalar::int(p0));
        }
    }

    #[test]
    fn division_round_trip() {
        let p = lin(1).mul(&lin(2)).mul(&lin(3)).add(&UniPoly::from_ints(&[5]));
        let d = lin(7);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), p);
    }

    #[test]
    fn rational_roots_basic() {
        // 2(T-1/2)(T+3)T = 2T^3 + 5T^2 - 3T
        let p = UniPoly::from_ints(&[0, -3, 5, 2]);
        let roots = rational_roots(&p);
        assert_eq!(
            roots,
            vec![
                (rat_int(-3), 1),
                (Rational::zero(), 1),
                (crate::scalar::rat(1, 2), 1)
            ]
        );
    }

    #[test]
    fn display_canonical() {
        let p = UniPoly::from_ints(&[-162, 141, -32, 1]);
        assert_eq!(p.to_string(), "T^3 - 32*T^2 + 141*T - 162");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(t().to_string(), "T");
    }

    #[test]
    fn roots_in_quad_field() {
        // (T - sqrt(2))(T + sqrt(2)) = T^2 - 2 over Q(sqrt 2)
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let s2 = Scalar::quad(2.into(), rat_int(0), rat_int(1));
        let shifted = p.compose(&UniPoly::new(vec![s2.clone(), Scalar::one()]));
        // shifted has roots sqrt2 - sqrt2 = ... just check original:
        let roots = roots_in_field(&p).unwrap();
        assert!(roots.is_empty()); // rational coefficients, irrational roots: not extracted over Q
        let over_field = UniPoly::linear_root(&s2).mul(&UniPoly::linear_root(&(-&s2)));
        assert_eq!(over_field, p);
        let _ = shifted;
        // but a linear factor over the field is found
        let q = UniPoly::linear_root(&s2);
        assert_eq!(roots_in_field(&q).unwrap(), vec![s2]);
    }
}
