//! Exact Gaussian elimination over a field.

use crate::scalar::Field;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<K: Field>(m: &mut [Vec<K>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            *x = x.clone() * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let v = m[i][j].clone() - f.clone() * &m[row][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<K: Field>(m: &[Vec<K>], ncols: usize) -> Vec<Vec<K>> {
    let mut a: Vec<Vec<K>> = m.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![K::zero(); ncols];
        v[free] = K::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m x = b`, if consistent.
pub fn solve<K: Field>(m: &[Vec<K>], b: &[K]) -> Option<Vec<K>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<K>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![K::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][ncols].clone();
    }
    Some(x)
}
