//! Small dense eigensolvers used by the geometry fingerprints and the MIC
//! engine: cyclic Jacobi for complex Hermitian matrices, and normal-matrix
//! diagonalization for unitaries through their Hermitian and skew parts.
//! Matrices here are tiny (dimension <= ~600), so robustness and
//! determinism matter more than speed.

use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix (row-major, `n x n`).
/// Returns eigenvalues ascending and matching orthonormal eigenvectors as
/// column-major `n x n` data: component `i` of eigenvector `k` is
/// `vectors[k * n + i]`.
pub(crate) fn hermitian_eig(n: usize, matrix: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        v[k * n + k] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                // phase factor turning the block real, then a real Givens
                let phase = apq / r; // e^{i phi}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotation columns: col_p' = c*col_p - s*conj(phase)*col_q
                //                   col_q' = s*col_p + c*conj(phase)*col_q
                let pc = phase.conj();
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * pc * s;
                    a[k * n + q] = akp * s + akq * pc * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                for k in 0..n {
                    let vkp = v[p * n + k];
                    let vkq = v[q * n + k];
                    v[p * n + k] = vkp * c - vkq * pc * s;
                    v[q * n + k] = vkp * s + vkq * pc * c;
                }
            }
        }
    }
    // v is stored with eigenvector k occupying row k of the v buffer; read
    // off eigenvalues and sort ascending for determinism
    let mut order: Vec<usize> = (0..n).collect();
    let eigvals: Vec<f64> = (0..n).map(|k| a[k * n + k].re).collect();
    order.sort_by(|&x, &y| {
        eigvals[x].partial_cmp(&eigvals[y]).unwrap().then(x.cmp(&y))
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (slot, &k) in order.iter().enumerate() {
        values.push(eigvals[k]);
        vectors[slot * n..(slot + 1) * n].copy_from_slice(&v[k * n..(k + 1) * n]);
    }
    (values, vectors)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub(crate) fn symmetric_eigenvalues(n: usize, matrix: &[f64]) -> Vec<f64> {
    let complex: Vec<Complex64> = matrix.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    hermitian_eig(n, &complex).0
}

/// Eigendecomposition of a unitary (normal) matrix via its commuting
/// Hermitian and skew-Hermitian parts. Returns unit-circle eigenvalues and
/// orthonormal eigenvectors (column-major as in [`hermitian_eig`]).
pub(crate) fn unitary_eig(n: usize, u: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    assert_eq!(u.len(), n * n);
    let mut h1 = vec![Complex64::new(0.0, 0.0); n * n];
    let mut h2 = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let uij = u[i * n + j];
            let uji_c = u[j * n + i].conj();
            h1[i * n + j] = (uij + uji_c) * 0.5;
            h2[i * n + j] = (uij - uji_c) * Complex64::new(0.0, -0.5);
        }
    }
    let (w1, v1) = hermitian_eig(n, &h1);
    // split each eigenvalue cluster of H1 by diagonalizing H2 inside it
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    let mut values = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (w1[end] - w1[start]).abs() <= 1e-8 {
            end += 1;
        }
        let m = end - start;
        if m == 1 {
            let col = &v1[start * n..(start + 1) * n];
            let lam2 = rayleigh(n, &h2, col);
            values.push(Complex64::new(w1[start], lam2));
            vectors[start * n..(start + 1) * n].copy_from_slice(col);
        } else {
            // restriction B = Q^H H2 Q on the cluster
            let mut b = vec![Complex64::new(0.0, 0.0); m * m];
            for x in 0..m {
                let qx = &v1[(start + x) * n..(start + x + 1) * n];
                for y in 0..m {
                    let qy = &v1[(start + y) * n..(start + y + 1) * n];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let mut h2qy = Complex64::new(0.0, 0.0);
                        for j in 0..n {
                            h2qy += h2[i * n + j] * qy[j];
                        }
                        acc += qx[i].conj() * h2qy;
                    }
                    b[x * m + y] = acc;
                }
            }
            let (w2, v2) = hermitian_eig(m, &b);
            for y in 0..m {
                values.push(Complex64::new(w1[start], w2[y]));
                for i in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..m {
                        acc += v1[(start + x) * n + i] * v2[y * m + x];
                    }
                    vectors[(start + y) * n + i] = acc;
                }
            }
        }
        start = end;
    }
    (values, vectors)
}

fn rayleigh(n: usize, matrix: &[Complex64], vec: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut mv = Complex64::new(0.0, 0.0);
        for j in 0..n {
            mv += matrix[i * n + j] * vec[j];
        }
        acc += vec[i].conj() * mv;
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(n: usize, m: &[Complex64], lam: &[f64], v: &[Complex64]) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                let mut mv = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    mv += m[i * n + j] * v[k * n + j];
                }
                worst = worst.max((mv - v[k * n + i] * lam[k]).norm());
            }
        }
        worst
    }

    #[test]
    fn two_by_two_hermitian() {
        // [[0, -i], [i, 0]] has eigenvalues -1, 1
        let m = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let (w, v) = hermitian_eig(2, &m);
        assert!((w[0] + 1.0).abs() < 1e-12);
        assert!((w[1] - 1.0).abs() < 1e-12);
        assert!(residual(2, &m, &w, &v) < 1e-12);
    }

    #[test]
    fn random_hermitian_diagonalizes() {
        // deterministic pseudo-random Hermitian matrix
        let n = 12;
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        let mut state = 0x12345678u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for i in 0..n {
            for j in i..n {
                if i == j {
                    m[i * n + i] = Complex64::new(rnd(), 0.0);
                } else {
                    let z = Complex64::new(rnd(), rnd());
                    m[i * n + j] = z;
                    m[j * n + i] = z.conj();
                }
            }
        }
        let (w, v) = hermitian_eig(n, &m);
        assert!(residual(n, &m, &w, &v) < 1e-10);
        // orthonormality
        for a in 0..n {
            for b in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    dot += v[a * n + i].conj() * v[b * n + i];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot.norm() - target).abs() < 1e-10);
            }
        }
        // ascending
        for k in 1..n {
            assert!(w[k] >= w[k - 1] - 1e-12);
        }
    }

    #[test]
    fn unitary_eig_on_a_permutation_matrix() {
        // 4-cycle permutation matrix: eigenvalues are the 4th roots of unity
        let n = 4;
        let mut u = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            u[((j + 1) % n) * n + j] = Complex64::new(1.0, 0.0);
        }
        let (vals, vecs) = unitary_eig(n, &u);
        for k in 0..n {
            assert!((vals[k].norm() - 1.0).abs() < 1e-10);
            // residual against U
            for i in 0..n {
                let mut uv = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    uv += u[i * n + j] * vecs[k * n + j];
                }
                assert!((uv - vecs[k * n + i] * vals[k]).norm() < 1e-10);
            }
        }
    }
}
