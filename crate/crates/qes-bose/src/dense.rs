//! Small dense symmetric eigensolver and a real cubic solver.
//!
//! Invariant-subspace blocks are small by construction (dimension cap 512),
//! so a cyclic Jacobi iteration is the right tool: simple, deterministic,
//! and accurate to a few ulps for every eigenvalue. The brute-force oracle
//! deliberately uses a different algorithm (tridiagonalization + QL via
//! nalgebra) so the two verification routes do not share solver code.

use crate::error::{QesError, Result};

/// Dense symmetric matrix in row-major storage.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_rows(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        SymmetricMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest |S_ij - S_ji|; zero for an exactly symmetric matrix.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// First non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|x| !x.is_finite())
            .map(|i| (i / self.dim, i % self.dim))
    }

    fn dump(&self) -> String {
        let show = self.dim.min(12);
        let mut out = String::new();
        for i in 0..show {
            let row: Vec<String> = (0..show)
                .map(|j| format!("{:+.6e}", self.get(i, j)))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if show < self.dim {
            out.push_str(&format!("… ({}x{} total)\n", self.dim, self.dim));
        }
        out
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues (ascending) and the matching orthonormal
/// eigenvectors as columns of a row-major `dim × dim` buffer. Vector signs
/// are fixed by making each vector's largest-magnitude component positive,
/// so results are bit-reproducible run to run.
pub fn jacobi_eigen(matrix: &SymmetricMatrix, max_sweeps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = matrix.dim;
    let mut a = matrix.data.clone();
    // force exact symmetry of the working copy; the caller's matrix keeps
    // its independently computed triangles for the hermiticity checks
    for i in 0..n {
        for j in (i + 1)..n {
            let mean = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = mean;
            a[j * n + i] = mean;
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n > 1 {
        let scale = matrix.frobenius_norm().max(f64::MIN_POSITIVE);
        let target = scale * 1e-15;
        let mut converged = false;
        for _sweep in 0..max_sweeps {
            let off: f64 = {
                let mut s = 0.0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        s += a[i * n + j] * a[i * n + j];
                    }
                }
                (2.0 * s).sqrt()
            };
            if off <= target {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    // an entry negligible against both diagonals cannot move
                    // any eigenvalue at f64 precision: zero it outright so
                    // the off-diagonal norm actually shrinks
                    if apq.abs() <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) * 1e-2
                        && apq.abs() <= target
                    {
                        a[p * n + q] = 0.0;
                        a[q * n + p] = 0.0;
                        continue;
                    }
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    // update the p/q rows and columns
                    for i in 0..n {
                        if i != p && i != q {
                            let aip = a[i * n + p];
                            let aiq = a[i * n + q];
                            let new_ip = aip - s * (aiq + tau * aip);
                            let new_iq = aiq + s * (aip - tau * aiq);
                            a[i * n + p] = new_ip;
                            a[p * n + i] = new_ip;
                            a[i * n + q] = new_iq;
                            a[q * n + i] = new_iq;
                        }
                    }
                    a[p * n + p] = app - t * apq;
                    a[q * n + q] = aqq + t * apq;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for i in 0..n {
                        let vip = v[i * n + p];
                        let viq = v[i * n + q];
                        v[i * n + p] = vip - s * (viq + tau * vip);
                        v[i * n + q] = viq + s * (vip - tau * viq);
                    }
                }
            }
        }
        if !converged {
            // re-check once more after the last sweep
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
            if (2.0 * s).sqrt() > target {
                return Err(QesError::NoConvergence {
                    sweeps: max_sweeps,
                    dim: n,
                    dump: matrix.dump(),
                });
            }
        }
    }

    // sort ascending, permute vectors, fix signs
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0f64; n * n];
    for (dst, &src) in order.iter().enumerate() {
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        for i in 0..n {
            let x = v[i * n + src].abs();
            if x > best_abs {
                best_abs = x;
                best = i;
            }
        }
        let flip = if v[best * n + src] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[i * n + dst] = flip * v[i * n + src];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Real roots of `x³ + a2·x² + a1·x + a0`, sorted ascending.
///
/// Intended for characteristic polynomials of (similar-to-)symmetric 3×3
/// matrices, whose roots are all real; near-degenerate inputs are handled
/// by clamping the trigonometric argument.
pub fn solve_cubic_real(a2: f64, a1: f64, a0: f64) -> [f64; 3] {
    let shift = -a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let mut roots = if p >= 0.0 {
        // real roots coincide up to rounding noise
        let t = (-q).cbrt();
        [t + shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        let mut r = [0.0f64; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            *slot = m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift;
        }
        r
    };
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(s: &SymmetricMatrix, lambda: f64, vec: &[f64]) -> f64 {
        let n = s.dim();
        let mut worst = 0.0f64;
        let mut acc = 0.0f64;
        for i in 0..n {
            let sum: f64 = vec.iter().enumerate().map(|(j, v)| s.get(i, j) * v).sum();
            acc += (sum - lambda * vec[i]).powi(2);
        }
        worst = worst.max(acc.sqrt());
        worst
    }

    #[test]
    fn jacobi_on_known_matrix() {
        // [[0, -2√2], [-2√2, 2]] has eigenvalues {-2, 4}
        let t = -2.0 * 2f64.sqrt();
        let m = SymmetricMatrix::from_rows(2, vec![0.0, t, t, 2.0]);
        let (vals, vecs) = jacobi_eigen(&m, 64).unwrap();
        assert!((vals[0] + 2.0).abs() < 1e-14);
        assert!((vals[1] - 4.0).abs() < 1e-14);
        for (idx, &val) in vals.iter().enumerate() {
            let col: Vec<f64> = (0..2).map(|i| vecs[i * 2 + idx]).collect();
            assert!(residual(&m, val, &col) < 1e-13);
        }
    }

    #[test]
    fn jacobi_diagonal_is_exact() {
        let m = SymmetricMatrix::from_rows(3, vec![0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 4.0]);
        let (vals, _) = jacobi_eigen(&m, 64).unwrap();
        assert_eq!(vals, vec![0.0, 2.0, 4.0]);
    }

    #[test]
    fn jacobi_random_orthogonality() {
        // deterministic pseudo-random symmetric fill
        let n = 12;
        let mut m = SymmetricMatrix::zeros(n);
        let mut x = 0.5f64;
        for i in 0..n {
            for j in 0..=i {
                x = (x * 997.0 + 0.1234).fract();
                let v = 2.0 * x - 1.0;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let (vals, vecs) = jacobi_eigen(&m, 64).unwrap();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // columns orthonormal
        for c1 in 0..n {
            for c2 in 0..n {
                let dot: f64 = (0..n).map(|i| vecs[i * n + c1] * vecs[i * n + c2]).sum();
                let expect = if c1 == c2 { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12, "({c1},{c2}) dot {dot}");
            }
        }
        let norm = m.frobenius_norm();
        for (idx, &val) in vals.iter().enumerate() {
            let col: Vec<f64> = (0..n).map(|i| vecs[i * n + idx]).collect();
            assert!(residual(&m, val, &col) <= 1e-13 * norm);
        }
    }

    #[test]
    fn cubic_roots() {
        let r = solve_cubic_real(-8.0, 17.0, -10.0); // (x-1)(x-2)(x-5)
        assert!((r[0] - 1.0).abs() < 1e-12);
        assert!((r[1] - 2.0).abs() < 1e-12);
        assert!((r[2] - 5.0).abs() < 1e-12);
        let r = solve_cubic_real(-9.0, 27.0, -27.0); // (x-3)^3
        for x in r {
            assert!((x - 3.0).abs() < 1e-5);
        }
        let r = solve_cubic_real(0.0, -1.0, 0.0); // x(x-1)(x+1)
        assert!((r[0] + 1.0).abs() < 1e-12 && r[1].abs() < 1e-12 && (r[2] - 1.0).abs() < 1e-12);
    }
}
