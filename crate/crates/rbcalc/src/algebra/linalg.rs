//! Exact rank computation over the rationals.

use num_traits::Zero;

use crate::algebra::rational::Rational;

/// Rank of a dense rational matrix by fraction-exact Gaussian elimination.
/// Rows may have differing meaning to the caller; only the row span matters.
pub fn matrix_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, p);
        let inv = Rational::from_integer(1.into()) / rows[rank][col].clone();
        for c in col..ncols {
            let v = rows[rank][c].clone() * inv.clone();
            rows[rank][c] = v;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let delta = rows[rank][c].clone() * f.clone();
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}
