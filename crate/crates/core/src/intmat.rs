//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Matrices are small (rank at most a handful), so everything is a plain
//! `Vec<Vec<i64>>` in row-major order and the algorithms are the textbook
//! elimination loops with unimodular transforms tracked alongside.

use num_integer::Integer;

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn vec_mat(v: &[i64], m: &Matrix) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

/// Extended gcd: returns `(g, x, y)` with `g = a*x + b*y` and `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `h = u * a` in row echelon form:
/// pivots move strictly right, are positive, and entries above a pivot lie in
/// `[0, pivot)`. Zero rows are at the bottom.
pub fn hnf(a: &Matrix) -> (Matrix, Matrix) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Fold every lower entry of this column into the pivot row.
        for r in pivot_row + 1..rows {
            if h[r][col] == 0 {
                continue;
            }
            let (p, q) = (h[pivot_row][col], h[r][col]);
            let (g, x, y) = ext_gcd(p, q);
            let (s, t) = (p / g, q / g);
            combine_rows(&mut h, pivot_row, r, x, y, -t, s);
            combine_rows(&mut u, pivot_row, r, x, y, -t, s);
        }
        if h[pivot_row][col] == 0 {
            continue;
        }
        if h[pivot_row][col] < 0 {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        let piv = h[pivot_row][col];
        for r in 0..pivot_row {
            let q = Integer::div_floor(&h[r][col], &piv);
            if q != 0 {
                sub_row(&mut h, r, pivot_row, q);
                sub_row(&mut u, r, pivot_row, q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// `(row_i, row_j) <- (x*row_i + y*row_j, z*row_i + w*row_j)`; the 2x2 block
/// must have determinant +-1.
fn combine_rows(m: &mut Matrix, i: usize, j: usize, x: i64, y: i64, z: i64, w: i64) {
    for c in 0..m[i].len() {
        let (a, b) = (m[i][c], m[j][c]);
        m[i][c] = x * a + y * b;
        m[j][c] = z * a + w * b;
    }
}

fn negate_row(m: &mut Matrix, i: usize) {
    for v in &mut m[i] {
        *v = -*v;
    }
}

/// `row_i -= q * row_j`
fn sub_row(m: &mut Matrix, i: usize, j: usize, q: i64) {
    for c in 0..m[i].len() {
        m[i][c] -= q * m[j][c];
    }
}

/// Smith normal form with column transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | ...` (zeros, if any, last).
    pub diagonal: Vec<i64>,
    /// Unimodular column transform `q` with `p * a * q = diag`.
    pub col: Matrix,
    /// Inverse of `col`.
    pub col_inv: Matrix,
}

pub fn smith(a: &Matrix) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut q = identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if m[r][c] != 0
                        && best.map_or(true, |(br, bc)| m[r][c].abs() < m[br][bc].abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish_smith(m, q, n);
            };
            m.swap(t, br);
            swap_cols(&mut m, t, bc);
            swap_cols(&mut q, t, bc);
            let piv = m[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                let f = Integer::div_floor(&m[r][t], &piv);
                if f != 0 {
                    sub_row(&mut m, r, t, f);
                }
                if m[r][t] != 0 {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let f = Integer::div_floor(&m[t][c], &piv);
                if f != 0 {
                    for row in m.iter_mut() {
                        row[c] -= f * row[t];
                    }
                    for row in q.iter_mut() {
                        row[c] -= f * row[t];
                    }
                }
                if m[t][c] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: pull in a row holding an entry the pivot misses.
            let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % piv != 0));
            match offender {
                Some(r) => {
                    for c in 0..cols {
                        m[t][c] += m[r][c];
                    }
                }
                None => break,
            }
        }
    }
    finish_smith(m, q, n)
}

fn finish_smith(mut m: Matrix, mut q: Matrix, n: usize) -> Smith {
    for t in 0..n {
        if m[t][t] < 0 {
            m[t][t] = -m[t][t];
            for row in q.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let col_inv = inverse_unimodular(&q).expect("column transform is unimodular");
    Smith {
        diagonal: (0..n).map(|t| m[t][t]).collect(),
        col: q,
        col_inv,
    }
}

fn swap_cols(m: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Inverse of a unimodular square matrix via Hermite reduction of `[m | I]`.
pub fn inverse_unimodular(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let (h, u) = hnf(m);
    // u * m = h, with h upper triangular; unimodular m gives h = I.
    for i in 0..n {
        for j in 0..n {
            if h[i][j] != i64::from(i == j) {
                return None;
            }
        }
    }
    Some(u)
}

/// Absolute determinant of a square integer matrix.
pub fn abs_det(m: &Matrix) -> i64 {
    let (h, _) = hnf(m);
    (0..m.len()).map(|i| h[i][i]).product::<i64>().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(a: &Matrix) -> Vec<i64> {
        smith(a).diagonal
    }

    #[test]
    fn hnf_is_echelon_and_unimodular() {
        let a = vec![vec![4, 6, 2], vec![2, 8, 4], vec![6, 2, 10]];
        let (h, u) = hnf(&a);
        assert_eq!(mat_mul(&u, &a), h);
        assert_eq!(abs_det(&u), 1);
        for i in 0..3 {
            assert!(h[i][i] > 0);
            for j in 0..i {
                assert_eq!(h[i][j], 0);
                assert!(h[j][i] >= 0 && h[j][i] < h[i][i]);
            }
        }
    }

    #[test]
    fn smith_of_known_matrices() {
        assert_eq!(diag_of(&vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag_of(&vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(diag_of(&vec![vec![4, 0], vec![0, 2]]), vec![2, 4]);
        assert_eq!(diag_of(&vec![vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn smith_column_transform_inverts() {
        let a = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        let s = smith(&a);
        assert_eq!(mat_mul(&s.col, &s.col_inv), identity(3));
        let prod: i64 = s.diagonal.iter().product();
        assert_eq!(prod, abs_det(&a));
    }
}
