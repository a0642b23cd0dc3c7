//! Integer factorization helpers: squarefree decomposition for quadratic
//! discriminants and divisor enumeration for rational root finding.
//!
//! Sizes here are "desk scale" (coefficients of small automorphism words),
//! so trial division plus Brent's variant of Pollard rho is plenty.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const BOUND: usize = 20_000;
        let mut sieve = vec![true; BOUND];
        let mut primes = Vec::new();
        for p in 2..BOUND {
            if sieve[p] {
                primes.push(p as u64);
                let mut m = p * p;
                while m < BOUND {
                    sieve[m] = false;
                    m += p;
                }
            }
        }
        primes
    })
}

/// Deterministic Miller-Rabin for the sizes we meet (the fixed base set is
/// proven correct below 3.3 * 10^24; larger inputs only occur as cofactors
/// of rho, where a false positive would merely coarsen a divisor list).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // Brent's cycle detection; deterministic restart schedule.
    let one = BigUint::one();
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    for c in 1u64..64 {
        let cc = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cc) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        let mut count = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if !d.is_one() && d != *n {
            return d;
        }
    }
    // give up: report n itself (treated as prime by the caller)
    n.clone()
}

/// Factor a positive integer. Unfactorable cofactors (never seen at desk
/// scale) are recorded as if prime, which only coarsens divisor lists.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let p = BigUint::from(p);
        if &p * &p > rest {
            break;
        }
        while (&rest % &p).is_zero() {
            rest /= &p;
            *out.entry(p.clone()).or_insert(0) += 1;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&m);
        if d == m || d.is_one() {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        stack.push(&m / &d);
        stack.push(d);
    }
    out
}

/// Write n = s^2 * d with d squarefree (sign of d = sign of n).
/// Returns (s, d); for n = 0 returns (0, 0).
pub fn squarefree_decompose(n: &BigInt) -> (BigUint, BigInt) {
    if n.is_zero() {
        return (BigUint::zero(), BigInt::zero());
    }
    let mag = n.magnitude().clone();
    // Fast path: perfect square.
    let root = mag.sqrt();
    if &root * &root == mag {
        return (root, if n.sign() == num_bigint::Sign::Minus { -BigInt::one() } else { BigInt::one() });
    }
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    for (p, e) in factorize(&mag) {
        if e >= 2 {
            s *= p.pow(e / 2);
        }
        if e % 2 == 1 {
            d *= p;
        }
    }
    let mut d = BigInt::from(d);
    if n.sign() == num_bigint::Sign::Minus {
        d = -d;
    }
    (s, d)
}

/// Roots of an integer polynomial modulo a prime p (coefficients given
/// lowest first, already reduced mod p), by scanning all residues.
pub fn roots_mod_p(coeffs: &[u64], p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for r in 0..p {
        let mut acc: u64 = 0;
        for &c in coeffs.iter().rev() {
            acc = ((acc as u128 * r as u128 + c as u128) % p as u128) as u64;
        }
        if acc == 0 {
            out.push(r);
        }
    }
    out
}

/// Rational reconstruction: the unique num/den with x*den = num (mod m),
/// |num|, den <= sqrt(m/2), if one exists (Wang's algorithm).
pub fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / 2u8).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.magnitude() > bound.magnitude() {
        return None;
    }
    if t1.sign() == num_bigint::Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// All positive divisors, ascending. Used by the rational root search.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return vec![];
    }
    let mut out = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let snapshot = out.clone();
        let mut power = BigUint::one();
        for _ in 0..e {
            power *= &p;
            for d in &snapshot {
                out.push(d * &power);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_probable_prime(&BigUint::from(2u32)));
        assert!(is_probable_prime(&BigUint::from(97u32)));
        assert!(!is_probable_prime(&BigUint::from(1u32)));
        assert!(!is_probable_prime(&BigUint::from(91u32)));
    }

    #[test]
    fn factor_mixed() {
        let n = BigUint::from(2u32).pow(5) * BigUint::from(3u32).pow(2) * BigUint::from(1_000_003u32);
        let f = factorize(&n);
        assert_eq!(f.get(&BigUint::from(2u32)), Some(&5));
        assert_eq!(f.get(&BigUint::from(3u32)), Some(&2));
        assert_eq!(f.get(&BigUint::from(1_000_003u32)), Some(&1));
    }

    #[test]
    fn squarefree_parts() {
        let (s, d) = squarefree_decompose(&BigInt::from(50));
        assert_eq!((s, d), (BigUint::from(5u32), BigInt::from(2)));
        let (s, d) = squarefree_decompose(&BigInt::from(-4));
        assert_eq!((s, d), (BigUint::from(2u32), BigInt::from(-1)));
        let (s, d) = squarefree_decompose(&BigInt::from(1));
        assert_eq!((s, d), (BigUint::from(1u32), BigInt::from(1)));
    }

    #[test]
    fn divisor_lists() {
        let d = divisors(&BigUint::from(12u32));
        let want: Vec<BigUint> = [1u32, 2, 3, 4, 6, 12].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(d, want);
    }
}
