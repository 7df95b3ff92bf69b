//! Dense linear algebra over GF(q) symbols.

use crate::gf::{SmallField, Symbol};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(f: &SmallField, rows: &mut [Vec<Symbol>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= f.mul(factor, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &SmallField, rows: &[Vec<Symbol>]) -> usize {
    let mut work = rows.to_vec();
    row_reduce(f, &mut work).len()
}

/// Rank of a short list of 4-vectors.
pub fn rank4(f: &SmallField, vecs: &[[Symbol; 4]]) -> usize {
    let mut rows: Vec<Vec<Symbol>> = vecs.iter().map(|v| v.to_vec()).collect();
    row_reduce(f, &mut rows).len()
}

/// Basis of {x : A x = 0}.
pub fn null_space(f: &SmallField, rows: &[Vec<Symbol>], ncols: usize) -> Vec<Vec<Symbol>> {
    let mut work = rows.to_vec();
    let pivots = row_reduce(f, &mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                // char 2: -a = a
                v[pc] = work[r][fc];
            }
            v
        })
        .collect()
}

/// 4x4 matrix acting on column vectors.
pub type Mat4 = [[Symbol; 4]; 4];

pub fn mat4_identity() -> Mat4 {
    let mut m = [[0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

#[inline]
pub fn mat4_apply(f: &SmallField, m: &Mat4, v: &[Symbol; 4]) -> [Symbol; 4] {
    let mut out = [0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = f.mul(row[0], v[0]) ^ f.mul(row[1], v[1]) ^ f.mul(row[2], v[2]) ^ f.mul(row[3], v[3]);
    }
    out
}

pub fn mat4_mul(f: &SmallField, a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).fold(0, |acc, k| acc ^ f.mul(a[i][k], b[k][j]));
        }
    }
    out
}

/// Matrix whose columns are the given vectors.
pub fn mat4_from_columns(cols: &[[Symbol; 4]; 4]) -> Mat4 {
    let mut m = [[0; 4]; 4];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..4 {
            m[i][j] = c[i];
        }
    }
    m
}

pub fn mat4_inverse(f: &SmallField, m: &Mat4) -> Option<Mat4> {
    let mut aug: Vec<Vec<Symbol>> = (0..4)
        .map(|i| {
            let mut row = m[i].to_vec();
            row.extend((0..4).map(|j| (i == j) as Symbol));
            row
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots != [0, 1, 2, 3] {
        return None;
    }
    let mut inv = [[0; 4]; 4];
    for i in 0..4 {
        inv[i].copy_from_slice(&aug[i][4..]);
    }
    Some(inv)
}
