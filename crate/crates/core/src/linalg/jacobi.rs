//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Rotations are skipped once `|a_pq| <= eps * sqrt(|a_pp a_qq|)`, which gives
//! eigenvalues with small relative error on well-scaled positive definite
//! matrices.

use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

const REL_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues of a symmetric row-major `n x n` matrix.
pub fn eigenvalues(n: usize, entries: &[f64]) -> Vec<f64> {
    run(n, entries, false).0
}

/// Ascending eigenvalues and matching unit eigenvectors; eigenvector `k`
/// occupies `vectors[k * n .. (k + 1) * n]`.
pub fn eigen(n: usize, entries: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (values, vectors) = run(n, entries, true);
    (values, vectors.unwrap_or_default())
}

fn run(n: usize, entries: &[f64], want_vectors: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    assert_eq!(entries.len(), n * n, "matrix is not {n}x{n}");
    let mut a = entries.to_vec();
    // symmetrize from the lower triangle so tiny input asymmetry cannot stall
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    let frob = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let floor = frob * 1e-300_f64.max(f64::MIN_POSITIVE);
    let mut v = want_vectors.then(|| {
        let mut id = alloc::vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    });

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= floor || apq.abs() <= REL_EPS * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    // columns of v are eigenvectors: V <- V J
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        let mut out = Vec::with_capacity(n * n);
        for &col in &order {
            out.extend((0..n).map(|k| v[k * n + col]));
        }
        out
    });
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let ev = eigenvalues(2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((ev[0] - 1.0).abs() < 1e-15);
        assert!((ev[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn vectors_diagonalize() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 1.0];
        let (vals, vecs) = eigen(3, &a);
        for k in 0..3 {
            let x = &vecs[k * 3..k * 3 + 3];
            for i in 0..3 {
                let ax: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
                assert!((ax - vals[k] * x[i]).abs() < 1e-12);
            }
        }
        let trace: f64 = vals.iter().sum();
        assert!((trace - 8.0).abs() < 1e-13);
    }

    #[test]
    fn indefinite_with_zero_diagonal() {
        let ev = eigenvalues(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }
}
