//! Gaussian elimination over a [`Field`].

use super::{Field, FieldElement};

/// Determinant of a square matrix given by rows.
pub fn determinant(field: Field, mut rows: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = rows.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return field.zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let inv = rows[col][col].inv().unwrap();
        det = &det * &rows[col][col];
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..n {
                let v = &rows[r][c] - &(&factor * &rows[col][c]);
                rows[r][c] = v;
            }
        }
    }
    det
}

/// A basis of the right kernel `{v : A v = 0}` of a matrix with `ncols` columns.
pub fn nullspace(field: Field, mut rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv().unwrap();
        for k in 0..ncols {
            rows[r][k] = &rows[r][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in 0..ncols {
                    let v = &rows[i][k] - &(&factor * &rows[r][k]);
                    rows[i][k] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][f];
            }
            v
        })
        .collect()
}
