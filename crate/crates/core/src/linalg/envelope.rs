//! Envelope (skyline) Cholesky factorization with reverse Cuthill-McKee
//! ordering, for the sparse SPD blocks that arise from P1 stiffness matrices.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    /// first stored column of each (permuted) row
    first: Vec<usize>,
    /// offset of row `i` in `data`; row `i` holds columns `first[i]..=i`
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors the principal submatrix of `matrix` on `indices` (in the given
    /// order; the solve interface uses positions within `indices`).
    pub fn factor_submatrix(matrix: &CsrMatrix, indices: &[usize]) -> Result<Self> {
        let n = indices.len();
        let mut local = alloc::vec![usize::MAX; matrix.dim()];
        for (pos, &g) in indices.iter().enumerate() {
            local[g] = pos;
        }
        let mut adj: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
        for &g in indices {
            adj.push(
                matrix
                    .row(g)
                    .filter(|&(j, _)| local[j] != usize::MAX)
                    .map(|(j, v)| (local[j], v))
                    .collect(),
            );
        }
        let perm = reverse_cuthill_mckee(&adj);
        let mut inv = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }

        let mut first: Vec<usize> = (0..n).collect();
        for (old, row) in adj.iter().enumerate() {
            let i = inv[old];
            for &(j_old, _) in row {
                let j = inv[j_old];
                if j < first[i] {
                    first[i] = j;
                }
            }
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for i in 0..n {
            offset.push(total);
            total += i - first[i] + 1;
        }
        offset.push(total);
        let mut data = alloc::vec![0.0; total];
        for (old, row) in adj.iter().enumerate() {
            let i = inv[old];
            for &(j_old, v) in row {
                let j = inv[j_old];
                if j <= i {
                    data[offset[i] + j - first[i]] += v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let start = fi.max(fj);
                let mut s = data[offset[i] + j - fi];
                for k in start..j {
                    s -= data[offset[i] + k - fi] * data[offset[j] + k - fj];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::SingularInterior(alloc::format!(
                            "nonpositive pivot {s:e} at position {i} of {n}"
                        )));
                    }
                    data[offset[i] + i - fi] = s.sqrt();
                } else {
                    data[offset[i] + j - fi] = s / data[offset[j] + j - fj];
                }
            }
        }
        Ok(EnvelopeCholesky {
            n,
            perm,
            first,
            offset,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn l(&self, i: usize, j: usize) -> f64 {
        self.data[self.offset[i] + j - self.first[i]]
    }

    /// Solves `A x = b` where positions follow the `indices` used to factor.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let mut s = y[i];
            for k in self.first[i]..i {
                s -= self.l(i, k) * y[k];
            }
            y[i] = s / self.l(i, i);
        }
        for i in (0..n).rev() {
            y[i] /= self.l(i, i);
            let yi = y[i];
            for k in self.first[i]..i {
                y[k] -= self.l(i, k) * yi;
            }
        }
        let mut x = alloc::vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

/// Reverse Cuthill-McKee ordering, one BFS per connected component, each
/// started from a pseudo-peripheral vertex. Returns `perm[new] = old`.
fn reverse_cuthill_mckee(adj: &[Vec<(usize, f64)>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(|r| r.len()).collect();
    let mut visited = alloc::vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (degree[v], v));
    for &seed in &seeds {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(adj, &degree, seed);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adj[v]
                .iter()
                .map(|&(j, _)| j)
                .filter(|&j| !visited[j])
                .collect();
            nbrs.sort_by_key(|&j| (degree[j], j));
            nbrs.dedup();
            for j in nbrs {
                if !visited[j] {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(adj: &[Vec<(usize, f64)>], degree: &[usize], seed: usize) -> usize {
    let mut current = seed;
    let mut ecc = 0usize;
    for _ in 0..8 {
        let (far, depth) = farthest(adj, degree, current);
        if depth <= ecc {
            break;
        }
        ecc = depth;
        current = far;
    }
    current
}

/// BFS from `start`: a minimum-degree vertex of the last level and the depth.
fn farthest(adj: &[Vec<(usize, f64)>], degree: &[usize], start: usize) -> (usize, usize) {
    let mut level = alloc::vec![usize::MAX; adj.len()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut best = (start, 0usize);
    while let Some(v) = queue.pop_front() {
        let lv = level[v];
        if lv > best.1 || (lv == best.1 && degree[v] < degree[best.0]) {
            best = (v, lv);
        }
        for &(j, _) in &adj[v] {
            if level[j] == usize::MAX {
                level[j] = lv + 1;
                queue.push_back(j);
            }
        }
    }
    best
}
