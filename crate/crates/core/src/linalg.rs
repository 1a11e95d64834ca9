//! Dense helpers shared by the Temperley-Lieb realization and the norm checkers.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Largest dimension for which operator norms go through a full SVD.
pub const SVD_LIMIT: usize = 600;

/// Row-major flattening of `m`, matching Kronecker index order `(row, col) -> row * ncols + col`.
pub fn vec_rowmajor(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.transpose().iter().copied())
}

/// Inverse of [`vec_rowmajor`].
pub fn unvec_rowmajor(v: &[f64], rows: usize, cols: usize) -> DMatrix<f64> {
    assert_eq!(v.len(), rows * cols);
    DMatrix::from_row_slice(rows, cols, v)
}

fn householder_reflectors(a: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let (m, r) = a.shape();
    assert!(r <= m, "more columns than rows");
    let mut w = a.clone();
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let x = w.view((j, j), (m - j, 1)).clone_owned();
        let norm = x.norm();
        let mut v = DVector::from_column_slice(x.as_slice());
        if norm == 0.0 {
            v.fill(0.0);
            v[0] = 1.0;
            out.push(v);
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = v.norm();
        v /= vn;
        if j + 1 < r {
            let mut sub = w.view_mut((j, j + 1), (m - j, r - j - 1));
            let t = sub.tr_mul(&v);
            sub.ger(-2.0, &v, &t, 1.0);
        }
        out.push(v);
    }
    out
}

fn apply_reflectors(refl: &[DVector<f64>], out: &mut DMatrix<f64>) {
    let (m, c) = out.shape();
    for j in (0..refl.len()).rev() {
        let v = &refl[j];
        let mut sub = out.view_mut((j, 0), (m - j, c));
        let t = sub.tr_mul(v);
        sub.ger(-2.0, v, &t, 1.0);
    }
}

/// Orthonormal basis of the orthogonal complement of the column space of `a`
/// (assumed of full column rank), via Householder QR.
pub fn orthonormal_complement(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, r) = a.shape();
    let refl = householder_reflectors(a);
    let mut out = DMatrix::zeros(m, m - r);
    for c in 0..m - r {
        out[(r + c, c)] = 1.0;
    }
    apply_reflectors(&refl, &mut out);
    out
}

/// Orthonormal basis of the column space of `a` (full column rank).
pub fn orthonormal_range(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, r) = a.shape();
    let refl = householder_reflectors(a);
    let mut out = DMatrix::zeros(m, r);
    for c in 0..r {
        out[(c, c)] = 1.0;
    }
    apply_reflectors(&refl, &mut out);
    out
}

/// Largest singular value of a dense matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if r.max(c) <= SVD_LIMIT {
        return m.singular_values().max();
    }
    let (small, big) = if r <= c { (r, false) } else { (c, true) };
    let gram = if big { m.tr_mul(m) } else { m * m.transpose() };
    if small <= SVD_LIMIT {
        return nalgebra::SymmetricEigen::new(gram)
            .eigenvalues
            .max()
            .max(0.0)
            .sqrt();
    }
    let start = DMatrix::from_element(small, 1, 1.0);
    let (s, _, _) = top_singular(|x| &gram * x, |y| &gram * y, start, 1e-12, 5000);
    s.sqrt()
}

/// Power iteration for the top singular triple of a linear map given as a
/// forward/adjoint pair on matrix-shaped vectors. Returns `(sigma, x, y)` with
/// `x` unit, `y = fwd(x) / sigma`.
pub fn top_singular<F, G>(
    fwd: F,
    adj: G,
    start: DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> (f64, DMatrix<f64>, DMatrix<f64>)
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
    G: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    let mut x = start;
    let n0 = x.norm();
    if n0 == 0.0 {
        x.fill(1.0);
    }
    x /= x.norm();
    let mut y = fwd(&x);
    let mut sigma = y.norm();
    for _ in 0..max_iter {
        if sigma == 0.0 {
            break;
        }
        let mut xn = adj(&y);
        let nx = xn.norm();
        if nx == 0.0 {
            break;
        }
        xn /= nx;
        let yn = fwd(&xn);
        let sn = yn.norm();
        let done = (sn - sigma).abs() <= tol * sn.max(f64::MIN_POSITIVE);
        x = xn;
        y = yn;
        sigma = sn;
        if done {
            break;
        }
    }
    if sigma > 0.0 {
        y /= sigma;
    }
    (sigma, x, y)
}

/// Top eigenpair of a symmetric positive operator on matrix-shaped vectors by restarted Lanczos
/// with full reorthogonalization, started at `start`. Stops when the Ritz residual is at most
/// `√tol` relative to the Ritz value, so that the eigenvalue itself is accurate to about `tol`. Returns `(lambda, unit eigenvector, operator applications)`.
pub fn lanczos_top<F>(
    op: F,
    start: &DMatrix<f64>,
    tol: f64,
    max_apply: usize,
    krylov: usize,
) -> (f64, DMatrix<f64>, usize)
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    let (rows, cols) = start.shape();
    let mut x = start.clone();
    if x.norm() == 0.0 {
        x.fill(1.0);
    }
    x /= x.norm();
    let mut applied = 0usize;
    loop {
        let mut basis: Vec<DMatrix<f64>> = vec![x.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut best = (0.0, DVector::from_element(1, 1.0));
        let mut converged = false;
        for j in 0..krylov {
            let mut w = op(&basis[j]);
            applied += 1;
            let a = frob_dot(&w, &basis[j]);
            alpha.push(a);
            for v in &basis {
                let c = frob_dot(&w, v);
                w -= v * c;
            }
            for v in &basis {
                let c = frob_dot(&w, v);
                w -= v * c;
            }
            let b = w.norm();
            let t = DMatrix::from_fn(j + 1, j + 1, |r, c| {
                if r == c {
                    alpha[r]
                } else if r == c + 1 {
                    beta[c]
                } else if c == r + 1 {
                    beta[r]
                } else {
                    0.0
                }
            });
            let eig = nalgebra::SymmetricEigen::new(t);
            let top = eig.eigenvalues.imax();
            let theta = eig.eigenvalues[top];
            best = (theta, eig.eigenvectors.column(top).clone_owned());
            // residual of the Ritz pair; the eigenvalue error is of order its square
            let residual = b * best.1[j].abs();
            let scale = theta.abs().max(f64::MIN_POSITIVE);
            if residual <= tol.sqrt() * scale || b <= 1e-14 * scale {
                converged = true;
                break;
            }
            if applied >= max_apply {
                break;
            }
            beta.push(b);
            basis.push(w / b);
        }
        let mut ritz = DMatrix::zeros(rows, cols);
        for (c, v) in best.1.iter().zip(&basis) {
            ritz += v * *c;
        }
        let nr = ritz.norm();
        x = ritz / nr;
        if converged || applied >= max_apply {
            return (best.0, x, applied);
        }
    }
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `aᵀ b` through the blocked product; `tr_mul` takes a much slower dot-product path.
pub fn tmul(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.transpose() * b
}

/// Frobenius inner product.
pub fn frob_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Relative deviation of a square matrix from the nearest multiple of the identity,
/// returned together with that multiple.
pub fn scalar_deviation(g: &DMatrix<f64>) -> (f64, f64) {
    let n = g.nrows();
    let c = g.trace() / n as f64;
    let mut dev = g.clone();
    for i in 0..n {
        dev[(i, i)] -= c;
    }
    (
        dev.norm() / (c.abs() * (n as f64).sqrt()).max(f64::MIN_POSITIVE),
        c,
    )
}
