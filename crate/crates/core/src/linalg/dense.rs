use alloc::vec::Vec;

/// Determinant of a row-major `n x n` matrix by LU with partial pivoting.
pub fn determinant(n: usize, entries: &[f64]) -> f64 {
    debug_assert_eq!(entries.len(), n * n);
    let mut a: Vec<f64> = entries.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .unwrap_or(col);
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for j in col + 1..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
            }
        }
    }
    det
}

/// Determinant of the submatrix with rows `rows` and columns `cols` of a
/// row-major `order x order` matrix.
pub fn principal_minor(order: usize, entries: &[f64], rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    let mut sub = Vec::with_capacity(k * k);
    for &i in rows {
        for &j in cols {
            sub.push(entries[i * order + j]);
        }
    }
    determinant(k, &sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(2, &[2.0, 1.0, 1.0, 2.0]), 3.0);
        assert_eq!(determinant(1, &[5.0]), 5.0);
        assert_eq!(determinant(0, &[]), 1.0);
        let d = determinant(3, &[0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 4.0, -3.0, 8.0]);
        assert!((d - -2.0).abs() < 1e-12);
        assert_eq!(principal_minor(2, &[2.0, 1.0, 1.0, 2.0], &[1], &[1]), 2.0);
    }
}
