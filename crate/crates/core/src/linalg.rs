//! Exact Gaussian elimination over any field (rationals, Gaussian rationals).

use std::ops::Neg;

use num_traits::Num;

pub trait Field: Clone + Num + Neg<Output = Self> {}

impl<T: Clone + Num + Neg<Output = T>> Field for T {}

/// Reduces `rows` in place to reduced row echelon form, choosing pivots only
/// among the first `pivot_cols` columns. Returns the pivot columns in order;
/// pivot row `k` holds pivot column `pivots[k]`.
pub fn rref_limited<T: Field>(rows: &mut [Vec<T>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (x, p) in other.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref<T: Field>(rows: &mut [Vec<T>]) -> Vec<usize> {
    let n = rows.first().map_or(0, Vec::len);
    rref_limited(rows, n)
}

pub fn rank<T: Field>(rows: &[Vec<T>]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : M x = 0}` for an `ncols`-column matrix given by rows.
/// Each basis vector has a 1 at its free column and zeros at the other free
/// columns.
pub fn nullspace<T: Field>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[k][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn mat_vec<T: Field>(rows: &[Vec<T>], v: &[T]) -> Vec<T> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace_of_singular_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn empty_matrix_has_full_nullspace() {
        let a: Vec<Vec<Rational>> = vec![];
        assert_eq!(nullspace(&a, 3).len(), 3);
        assert_eq!(rank(&a), 0);
    }

    #[test]
    fn limited_pivots_leave_tail_columns_alone() {
        let mut a = m(&[&[1, 1, 5], &[2, 2, 7]]);
        let piv = rref_limited(&mut a, 2);
        assert_eq!(piv, vec![0]);
        assert!(a[1][0].is_zero() && a[1][1].is_zero());
        assert_eq!(a[1][2], rat(7) - rat(10));
    }
}
