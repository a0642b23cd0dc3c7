//! Exact dense linear algebra over `Scalar` (a field in context: Q or one
//! quadratic extension). Small systems only.

use crate::scalar::Scalar;
use crate::upoly::UniPoly;

/// One solution of A x = b by Gaussian elimination, free variables set to
/// zero; None if inconsistent. `a` is row-major, rows.len() x cols.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], cols: usize) -> Option<Vec<Scalar>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv();
        for j in col..=cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=cols {
                    let delta = &factor * &m[rank][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // inconsistent if a zero row has nonzero rhs
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Scalar::zero(); cols];
    for (col, p) in pivot_of_col.iter().enumerate() {
        if let Some(r) = p {
            x[col] = m[*r][cols].clone();
        }
    }
    Some(x)
}

/// Outcome of inserting a vector into a `RowSpace`.
pub enum Insert {
    Independent,
    /// v_n = -sum_{j<n} coeffs[j] * v_j; coeffs has length n+1 with
    /// coeffs[n] = 1, expressing the first linear dependence.
    Dependent(Vec<Scalar>),
}

/// Incremental row space with dependence tracking: each inserted vector is
/// reduced against the stored echelon rows while recording its expression
/// in terms of the original insertion sequence.
pub struct RowSpace {
    dim: usize,
    inserted: usize,
    rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)>, // (pivot col, reduced row, expression)
}

impl RowSpace {
    pub fn new(dim: usize) -> RowSpace {
        RowSpace { dim, inserted: 0, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, v: Vec<Scalar>) -> Insert {
        assert_eq!(v.len(), self.dim);
        let mut r = v;
        let mut expr = vec![Scalar::zero(); self.inserted + 1];
        expr[self.inserted] = Scalar::one();
        for (pc, row, rexpr) in &self.rows {
            if r[*pc].is_zero() {
                continue;
            }
            let c = r[*pc].clone();
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    let delta = &c * &row[j];
                    r[j] = &r[j] - &delta;
                }
            }
            for (j, e) in rexpr.iter().enumerate() {
                if !e.is_zero() {
                    let delta = &c * e;
                    expr[j] = &expr[j] - &delta;
                }
            }
        }
        self.inserted += 1;
        match r.iter().position(|c| !c.is_zero()) {
            None => Insert::Dependent(expr),
            Some(pc) => {
                let inv = r[pc].inv();
                for c in r.iter_mut() {
                    *c = &*c * &inv;
                }
                for e in expr.iter_mut() {
                    *e = &*e * &inv;
                }
                self.rows.push((pc, r, expr));
                Insert::Independent
            }
        }
    }
}

/// Characteristic polynomial of a square matrix by the Faddeev-LeVerrier
/// recurrence (exact; divisions are by integers only).
pub fn char_poly(m: &[Vec<Scalar>]) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut aux: Vec<Vec<Scalar>> = m.to_vec();
    for k in 1..=n {
        if k > 1 {
            // aux = m * (aux + c_{n-k+1} I)
            let mut shifted = aux.clone();
            for i in 0..n {
                shifted[i][i] = &shifted[i][i] + &coeffs[n - k + 1];
            }
            let mut next = vec![vec![Scalar::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Scalar::zero();
                    for l in 0..n {
                        if !m[i][l].is_zero() && !shifted[l][j].is_zero() {
                            acc = &acc + &(&m[i][l] * &shifted[l][j]);
                        }
                    }
                    next[i][j] = acc;
                }
            }
            aux = next;
        }
        let mut tr = Scalar::zero();
        for i in 0..n {
            tr = &tr + &aux[i][i];
        }
        coeffs[n - k] = &tr * &Scalar::ratio(-1, k as i64);
    }
    UniPoly::new(coeffs)
}

/// Minimal polynomial of a square matrix: the lcm of the per-vector
/// minimal polynomials over the standard basis; shares its root set with
/// the characteristic polynomial at a fraction of the cost.
pub fn matrix_min_poly(m: &[Vec<Scalar>]) -> UniPoly {
    let n = m.len();
    let mut mu = UniPoly::one();
    for start in 0..n {
        let mut rs = RowSpace::new(n);
        let mut v = vec![Scalar::zero(); n];
        v[start] = Scalar::one();
        loop {
            match rs.insert(v.clone()) {
                Insert::Independent => {
                    let mut next = vec![Scalar::zero(); n];
                    for (i, row) in m.iter().enumerate() {
                        let mut acc = Scalar::zero();
                        for (j, x) in v.iter().enumerate() {
                            if !row[j].is_zero() && !x.is_zero() {
                                acc = &acc + &(&row[j] * x);
                            }
                        }
                        next[i] = acc;
                    }
                    v = next;
                }
                Insert::Dependent(coeffs) => {
                    let local = UniPoly::new(coeffs);
                    let g = crate::upoly::upoly_gcd(&mu, &local).expect("common field");
                    mu = mu.mul(&local.div_exact(&g)).monic();
                    break;
                }
            }
        }
        if mu.degree() == Some(n) {
            break;
        }
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x - y = 1 -> (2, 1)
        let a = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        let x = solve(&a, &[s(3), s(1)], 2).unwrap();
        assert_eq!(x, vec![s(2), s(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        assert!(solve(&a, &[s(1), s(3)], 2).is_none());
    }

    #[test]
    fn solve_underdetermined_free_vars_zero() {
        let a = vec![vec![s(1), s(1)]];
        let x = solve(&a, &[s(5)], 2).unwrap();
        assert_eq!(x, vec![s(5), s(0)]);
    }

    #[test]
    fn rowspace_dependence() {
        let mut rs = RowSpace::new(3);
        assert!(matches!(rs.insert(vec![s(1), s(0), s(1)]), Insert::Independent));
        assert!(matches!(rs.insert(vec![s(0), s(1), s(1)]), Insert::Independent));
        // v2 = v0 + 2 v1
        match rs.insert(vec![s(1), s(2), s(3)]) {
            Insert::Dependent(e) => {
                assert_eq!(e, vec![s(-1), s(-2), s(1)]);
            }
            _ => panic!("expected dependence"),
        }
    }

    #[test]
    fn matrix_min_poly_examples() {
        // diagonal(2, 2): min poly T - 2, char poly (T-2)^2
        let m = vec![vec![s(2), s(0)], vec![s(0), s(2)]];
        assert_eq!(matrix_min_poly(&m), UniPoly::from_ints(&[-2, 1]));
        // Jordan block: (T-1)^2
        let m = vec![vec![s(1), s(1)], vec![s(0), s(1)]];
        assert_eq!(matrix_min_poly(&m), UniPoly::from_ints(&[1, -2, 1]));
        // distinct eigenvalues: agrees with char poly
        let m = vec![vec![s(2), s(1)], vec![s(0), s(3)]];
        assert_eq!(matrix_min_poly(&m), char_poly(&m));
    }

    #[test]
    fn char_poly_2x2() {
        // [[2, 1], [0, 3]] -> (T-2)(T-3) = T^2 - 5T + 6
        let m = vec![vec![s(2), s(1)], vec![s(0), s(3)]];
        assert_eq!(char_poly(&m), UniPoly::from_ints(&[6, -5, 1]));
    }

    #[test]
    fn char_poly_3x3_companion() {
        // companion of T^3 - 2T + 5
        let m = vec![
            vec![s(0), s(0), s(-5)],
            vec![s(1), s(0), s(2)],
            vec![s(0), s(1), s(0)],
        ];
        assert_eq!(char_poly(&m), UniPoly::from_ints(&[5, -2, 0, 1]));
    }
}
