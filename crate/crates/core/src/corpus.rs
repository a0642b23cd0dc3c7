//! Deterministic random automorphisms for batch classification and the
//! verification suites.
//!
//! Two shapes are drawn: plain alternating words (usually not locally
//! finite), built from origin-fixing factors and optionally conjugated by
//! a small translation so that the reduced form always has a fixed point
//! within a degree-2 extension of Q; and conjugates of triangular maps,
//! which populate the locally finite classes (diagonal, shifted, unipotent,
//! resonant, generic).

use crate::endo::{AffineMap, Mat2, TriangularMap};
use crate::scalar::Scalar;
use crate::upoly::UniPoly;
use crate::word::{Automorphism, Factor, FactorWord};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct CorpusProfile {
    /// Longest factor word drawn.
    pub max_factors: usize,
    /// Largest degree of a triangular factor.
    pub max_tri_degree: u32,
    /// Coefficients are integers in [-max_height, max_height].
    pub max_height: i64,
}

impl Default for CorpusProfile {
    fn default() -> CorpusProfile {
        CorpusProfile { max_factors: 6, max_tri_degree: 3, max_height: 3 }
    }
}

pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(rng: &mut ChaCha8Rng, h: i64) -> Scalar {
    Scalar::int(rng.gen_range(-h..=h))
}

fn nonzero_int(rng: &mut ChaCha8Rng, h: i64) -> Scalar {
    loop {
        let s = int(rng, h);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A triangular map of degree between 2 and the profile cap; optionally
/// with zero translation and p(0) = 0 so the origin stays fixed.
fn strict_triangular(rng: &mut ChaCha8Rng, p: &CorpusProfile, fix_origin: bool) -> TriangularMap {
    let deg = rng.gen_range(2..=p.max_tri_degree.max(2)) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k == 0 && fix_origin {
            continue;
        }
        *c = int(rng, p.max_height);
    }
    coeffs[deg] = nonzero_int(rng, p.max_height);
    let c = if fix_origin { Scalar::zero() } else { int(rng, p.max_height) };
    TriangularMap::new(
        nonzero_int(rng, p.max_height),
        UniPoly::new(coeffs),
        nonzero_int(rng, p.max_height),
        c,
    )
}

/// An invertible affine map whose linear part is not upper triangular.
fn strict_affine(rng: &mut ChaCha8Rng, p: &CorpusProfile, fix_origin: bool) -> AffineMap {
    loop {
        let m = Mat2 {
            a: int(rng, p.max_height),
            b: int(rng, p.max_height),
            c: nonzero_int(rng, p.max_height),
            d: int(rng, p.max_height),
        };
        if m.det().is_zero() {
            continue;
        }
        let t = if fix_origin {
            (Scalar::zero(), Scalar::zero())
        } else {
            (int(rng, p.max_height), int(rng, p.max_height))
        };
        return AffineMap::new(m, t);
    }
}

fn any_affine(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> AffineMap {
    loop {
        let m = Mat2 {
            a: int(rng, p.max_height),
            b: int(rng, p.max_height),
            c: int(rng, p.max_height),
            d: int(rng, p.max_height),
        };
        if m.det().is_zero() {
            continue;
        }
        return AffineMap::new(m, (int(rng, p.max_height), int(rng, p.max_height)));
    }
}

/// A random triangular map (any degree >= 1), used by the spectral suites.
pub fn random_triangular(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> TriangularMap {
    let deg = rng.gen_range(0..=p.max_tri_degree) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for c in coeffs.iter_mut() {
        *c = int(rng, p.max_height);
    }
    if deg > 0 {
        coeffs[deg] = nonzero_int(rng, p.max_height);
    }
    TriangularMap::new(
        nonzero_int(rng, p.max_height),
        UniPoly::new(coeffs),
        nonzero_int(rng, p.max_height),
        int(rng, p.max_height),
    )
}

/// An alternating word of origin-fixing strict factors, possibly
/// conjugated by a small translation afterwards. Words of length >= 2
/// are almost always not locally finite.
fn random_word(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> Automorphism {
    let len = rng.gen_range(1..=p.max_factors.max(1));
    let mut affine_turn = rng.gen_bool(0.5);
    let mut factors = Vec::with_capacity(len);
    for _ in 0..len {
        factors.push(if affine_turn {
            Factor::Affine(strict_affine(rng, p, true))
        } else {
            Factor::Triangular(strict_triangular(rng, p, true))
        });
        affine_turn = !affine_turn;
    }
    let word = Automorphism::from_word(FactorWord::new(factors));
    if rng.gen_bool(0.5) {
        let shift = Automorphism::affine(AffineMap::translation((
            int(rng, p.max_height),
            int(rng, p.max_height),
        )));
        shift.conjugate(&word)
    } else {
        word
    }
}

/// A triangular flavor covering the classification cases, conjugated by a
/// modest automorphism whose shape keeps the composite degree desk-sized.
fn random_lf_shaped(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> Automorphism {
    let one = Scalar::one();
    // the conjugator: affine only (degree 1), or affine + one quadratic
    // triangular factor (degree 2)
    let quadratic_conj = rng.gen_bool(0.4);
    let conj = if quadratic_conj {
        let small = CorpusProfile { max_tri_degree: 2, ..p.clone() };
        let mut factors = vec![Factor::Triangular(strict_triangular(rng, &small, false))];
        if rng.gen_bool(0.5) {
            factors.insert(0, Factor::Affine(strict_affine(rng, p, false)));
        }
        Automorphism::from_word(FactorWord::new(factors))
    } else {
        Automorphism::affine(any_affine(rng, p))
    };
    // the triangular core; cap its degree when the conjugator is quadratic
    let t_deg_cap = if quadratic_conj { 2 } else { p.max_tri_degree };
    let core_profile = CorpusProfile { max_tri_degree: t_deg_cap, ..p.clone() };
    let t = match rng.gen_range(0..5) {
        0 => TriangularMap::diagonal(
            nonzero_int(rng, p.max_height),
            nonzero_int(rng, p.max_height),
        ),
        1 => {
            // shifted: (aX + p(Y), bY + c) with b = 1 possible
            let mut t = random_triangular(rng, &core_profile);
            t.c = nonzero_int(rng, p.max_height);
            t
        }
        2 => {
            // unipotent: (X + p(Y), Y)
            let deg = rng.gen_range(1..=t_deg_cap) as usize;
            let mut coeffs = vec![Scalar::zero(); deg + 1];
            for c in coeffs.iter_mut() {
                *c = int(rng, p.max_height);
            }
            coeffs[deg] = nonzero_int(rng, p.max_height);
            TriangularMap::new(one.clone(), UniPoly::new(coeffs), one.clone(), Scalar::zero())
        }
        3 => {
            // resonant: a = b^k with p_k != 0, never semisimple
            let b = nonzero_int(rng, p.max_height);
            let k = rng.gen_range(2..=t_deg_cap.max(2)) as usize;
            let a = b.pow(k as i64);
            let mut coeffs = vec![Scalar::zero(); k + 1];
            coeffs[k] = nonzero_int(rng, p.max_height);
            TriangularMap::new(a, UniPoly::new(coeffs), b, Scalar::zero())
        }
        _ => random_triangular(rng, &core_profile),
    };
    conj.conjugate(&Automorphism::triangular(t))
}

/// One random automorphism from the mixed distribution.
pub fn random_automorphism(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> Automorphism {
    if rng.gen_bool(0.4) {
        random_lf_shaped(rng, p)
    } else {
        random_word(rng, p)
    }
}

/// The deterministic corpus: `count` draws from `seed`.
pub fn generate(seed: u64, count: usize, p: &CorpusProfile) -> Vec<Automorphism> {
    let mut rng = corpus_rng(seed);
    (0..count).map(|_| random_automorphism(&mut rng, p)).collect()
}

/// A semisimple automorphism built from a known diagonal seed, returned
/// with its pair.
pub fn random_semisimple(
    rng: &mut ChaCha8Rng,
    p: &CorpusProfile,
) -> (Automorphism, Scalar, Scalar) {
    let a = nonzero_int(rng, p.max_height);
    let b = if rng.gen_bool(0.2) { a.clone() } else { nonzero_int(rng, p.max_height) };
    let diag = Automorphism::triangular(TriangularMap::diagonal(a.clone(), b.clone()));
    let conj = if rng.gen_bool(0.5) {
        let small = CorpusProfile { max_tri_degree: 2, ..p.clone() };
        let mut factors = vec![Factor::Triangular(strict_triangular(rng, &small, false))];
        if rng.gen_bool(0.5) {
            factors.insert(0, Factor::Affine(strict_affine(rng, p, false)));
        }
        Automorphism::from_word(FactorWord::new(factors))
    } else {
        Automorphism::affine(any_affine(rng, p))
    };
    (conj.conjugate(&diag), a, b)
}

/// An element with a unique multiplicity-one fixed point, of degree <= 3:
/// a triangular map with both scaling factors != 1, conjugated by an
/// affine map.
pub fn random_s_element(rng: &mut ChaCha8Rng, p: &CorpusProfile) -> Automorphism {
    let not_one = |rng: &mut ChaCha8Rng| loop {
        let s = nonzero_int(rng, p.max_height);
        if !s.is_one() {
            return s;
        }
    };
    let a = not_one(rng);
    let b = not_one(rng);
    let deg = rng.gen_range(0..=p.max_tri_degree.min(3)) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for c in coeffs.iter_mut() {
        *c = int(rng, p.max_height);
    }
    if deg > 0 {
        coeffs[deg] = nonzero_int(rng, p.max_height);
    }
    let t = TriangularMap::new(a, UniPoly::new(coeffs), b, int(rng, p.max_height));
    let conj = Automorphism::affine(any_affine(rng, p));
    conj.conjugate(&Automorphism::triangular(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let p = CorpusProfile::default();
        let a = generate(1, 12, &p);
        let b = generate(1, 12, &p);
        assert_eq!(a, b);
        let c = generate(2, 12, &p);
        assert_ne!(a, c);
    }

    #[test]
    fn mixed_classes_present() {
        let p = CorpusProfile::default();
        let corpus = generate(1, 60, &p);
        let lf = corpus.iter().filter(|f| crate::classify::is_lf(f)).count();
        assert!(lf >= 10, "corpus should contain LF elements, got {lf}");
        assert!(corpus.len() - lf >= 10, "corpus should contain non-LF elements");
        let ss = corpus.iter().filter(|f| crate::classify::is_semisimple(f)).count();
        assert!(ss >= 3, "corpus should contain semisimple elements, got {ss}");
        let unip = corpus.iter().filter(|f| crate::classify::is_unipotent(f)).count();
        assert!(unip >= 1, "corpus should contain unipotent elements");
    }

    #[test]
    fn s_elements_are_in_s() {
        let p = CorpusProfile::default();
        let mut rng = corpus_rng(7);
        for _ in 0..10 {
            let f = random_s_element(&mut rng, &p);
            assert!(f.degree() <= 3);
            assert!(crate::classify::in_s(&f));
        }
    }

    #[test]
    fn semisimple_seeds_recovered() {
        let p = CorpusProfile::default();
        let mut rng = corpus_rng(11);
        for _ in 0..10 {
            let (f, a, b) = random_semisimple(&mut rng, &p);
            let d = crate::normalform::diagonalize(&f).unwrap();
            let mut got = [d.a, d.b];
            got.sort();
            let mut want = [a, b];
            want.sort();
            assert_eq!(got, want);
        }
    }
}
