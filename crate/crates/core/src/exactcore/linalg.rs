//! Exact row reduction over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Reduced row echelon form of a list of row vectors.
///
/// Returns the nonzero rows of the reduced form together with their pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][c].clone();
        if !pivot.is_one() {
            for x in a[r].iter_mut() {
                *x /= &pivot;
            }
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..ncols {
                let d = &f * &a[r][k];
                a[i][k] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Canonical basis (reduced echelon rows) of the span of `rows`.
pub fn span_basis(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    rref(rows).0
}

/// Solves `Σ coeffs[i]·vectors[i] = target`, returning one solution if the system is consistent.
///
/// Free variables are set to zero.
pub fn solve_combination(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let dim = target.len();
    let k = vectors.len();
    // augmented system: dim equations in k unknowns
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&rows);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (row, &p) in red.iter().zip(&pivots) {
        sol[p] = row[k].clone();
    }
    Some(sol)
}

pub fn in_span(vectors: &[Vec<Rational>], target: &[Rational]) -> bool {
    target.iter().all(Zero::is_zero) || solve_combination(vectors, target).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[v(&[0, 0])]), 0);
    }

    #[test]
    fn rref_is_canonical() {
        let (a, p) = rref(&[v(&[2, 4]), v(&[1, 3])]);
        assert_eq!(a, vec![v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(p, vec![0, 1]);
        let (b, _) = rref(&[v(&[3, 6, 0]), v(&[1, 2, 0])]);
        assert_eq!(b, vec![v(&[1, 2, 0])]);
    }

    #[test]
    fn combination_solutions() {
        let basis = [v(&[1, 1]), v(&[1, -1])];
        let sol = solve_combination(&basis, &v(&[2, 0])).unwrap();
        assert_eq!(sol, vec![int(1), int(1)]);
        let sol = solve_combination(&basis, &v(&[1, 0])).unwrap();
        assert_eq!(sol, vec![frac(1, 2), frac(1, 2)]);
        assert!(solve_combination(&[v(&[1, 0])], &v(&[0, 1])).is_none());
        assert!(in_span(&[], &v(&[0, 0])));
    }
}
