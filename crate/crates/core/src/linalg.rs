//! Gaussian elimination over ℚ.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{ v : A v = 0 }`.
pub fn nullspace(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[row][ncols].clone();
    }
    Some(x)
}
