//! Small dense kernels used across the crate: symmetric tridiagonal
//! eigensolvers (implicit-shift QL), polynomial least squares and Bessel
//! coefficients for Chebyshev propagation.

/// Eigen-decomposition of a symmetric tridiagonal matrix while accumulating
/// an arbitrary set of rows of the orthogonal transform. `diag` and
/// `offdiag` (length n-1, coupling i and i+1) are consumed; returns the
/// unsorted eigenvalues, with `rows` rotated in place so that
/// `rows[r][m]` = (row r of Z)_m, Z the eigenvector matrix.
pub fn tridiag_ql(mut diag: Vec<f64>, offdiag: &[f64], rows: &mut [Vec<f64>]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n.max(1));
    if n <= 1 {
        return diag;
    }
    let mut e = vec![0.0f64; n];
    e[..n - 1].copy_from_slice(offdiag);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 64, "tridiagonal QL failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for row in rows.iter_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    diag
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiag_eigenvalues(diag: Vec<f64>, offdiag: &[f64]) -> Vec<f64> {
    let mut vals = tridiag_ql(diag, offdiag, &mut []);
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigenvalues plus the squared first-row weights |<e_row|E_m>|^2,
/// sorted ascending by eigenvalue.
pub fn tridiag_eigen_weights(
    diag: Vec<f64>,
    offdiag: &[f64],
    row: usize,
) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut z = vec![0.0; n];
    z[row] = 1.0;
    let mut rows = [z];
    let vals = tridiag_ql(diag, offdiag, &mut rows);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let energies: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let weights: Vec<f64> = idx.iter().map(|&i| rows[0][i] * rows[0][i]).collect();
    (energies, weights)
}

/// Full eigen-decomposition of a symmetric tridiagonal matrix; columns of
/// the returned matrix are eigenvectors, sorted ascending.
pub fn tridiag_eigen_full(diag: Vec<f64>, offdiag: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut z = vec![0.0; n];
            z[r] = 1.0;
            z
        })
        .collect();
    let vals = tridiag_ql(diag, offdiag, &mut rows);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let energies: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let vectors: Vec<Vec<f64>> = idx
        .iter()
        .map(|&m| (0..n).map(|r| rows[r][m]).collect())
        .collect();
    (energies, vectors)
}

/// Least squares fit y ~ sum_j c_j phi_j(x) for a small number of basis
/// functions, via normal equations with partial pivoting.
pub fn least_squares(design: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = design[0].len();
    let mut ata = vec![vec![0.0f64; m]; m];
    let mut atb = vec![0.0f64; m];
    for (row, &yi) in design.iter().zip(y) {
        for i in 0..m {
            for j in 0..m {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * yi;
        }
    }
    solve_dense(&mut ata, &mut atb);
    atb
}

/// In-place Gaussian elimination with partial pivoting; `b` becomes x.
pub fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        assert!(d.abs() > 1e-300, "singular design matrix");
        for r in col + 1..n {
            let f = a[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut v = b[col];
        for c in col + 1..n {
            v -= a[col][c] * b[c];
        }
        b[col] = v / a[col][col];
    }
}

/// Bessel functions J_0..J_kmax at x, by Miller's downward recurrence.
/// Accurate to roughly machine precision for the magnitudes that matter in
/// Chebyshev propagation.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; kmax + 1];
        out[0] = 1.0;
        return out;
    }
    let start = kmax + 20 + (x.abs() as usize) + (x.abs().cbrt() as usize) * 12;
    let mut jp = 0.0f64;
    let mut j = 1e-300f64;
    let mut out = vec![0.0; kmax + 1];
    // normalization J_0 + 2 sum_{even k >= 2} J_k = 1, accumulated over the
    // whole downward sweep
    let mut norm = 0.0f64;
    for k in (0..=start).rev() {
        let jm = 2.0 * (k as f64 + 1.0) / x * j - jp;
        jp = j;
        j = jm;
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        if k <= kmax {
            out[k] = j;
        }
        if j.abs() > 1e250 {
            jp /= 1e250;
            j /= 1e250;
            norm /= 1e250;
            for v in out.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    if norm == 0.0 {
        norm = 1.0;
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
    (mean, var.sqrt())
}

/// Spearman rank correlation.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0;
            for &t in &idx[i..=j] {
                r[t] = avg;
            }
            i = j + 1;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let (mx, sx) = mean_std(&rx);
    let (my, sy) = mean_std(&ry);
    if sx == 0.0 || sy == 0.0 {
        return 0.0;
    }
    let cov = rx
        .iter()
        .zip(&ry)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / rx.len() as f64;
    cov / (sx * sy)
}
