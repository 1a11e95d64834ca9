use nalgebra::DMatrix;

use crate::error::{QgrdError, Result};
use crate::linalg::{orthonormal_complement, tmul};

/// Limits on the size of Temperley-Lieb objects built by this module.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TlBudget {
    /// Largest number of strands for a reduced isometry `H_n -> H_{n-1} ⊗ C^N`.
    pub max_strands: usize,
    /// Cap on the ambient dimension `N^n` of dense Jones-Wenzl projectors.
    pub max_ambient: usize,
    /// Cap on the side of any dense reduced matrix.
    pub max_dimension: usize,
}

impl Default for TlBudget {
    fn default() -> Self {
        TlBudget {
            max_strands: 8,
            max_ambient: 2187,
            max_dimension: 4000,
        }
    }
}

/// Dimensions `m_0..=m_n` of the irreducibles of `A_o(N)` with `Q = I`, as integers.
pub fn ao_dims(strand_dim: usize, n: usize) -> Vec<usize> {
    let mut dims = vec![1usize];
    if n >= 1 {
        dims.push(strand_dim);
    }
    for j in 2..=n {
        dims.push(strand_dim * dims[j - 1] - dims[j - 2]);
    }
    dims
}

/// Same recursion in floating point, with the `m_{-1} = 0` convention exposed as `dim(-1)`.
pub fn ao_dim_f64(strand_dim: usize, n: i64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    for _ in 0..n {
        let next = strand_dim as f64 * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Reduced realization of the irreducibles `H_n ⊂ (C^N)^{⊗n}` of `A_o(N)`.
///
/// Each `H_n` carries an orthonormal basis defined recursively: `right[n]` is the
/// isometry `H_n -> H_{n-1} ⊗ C^N` onto the complement of the cup-image of
/// `H_{n-2}`, and `left[n]` the induced isometry `H_n -> C^N ⊗ H_{n-1}`.
/// Nothing of ambient size is stored.
#[derive(Debug, Clone)]
pub struct JwCache {
    strand_dim: usize,
    n_max: usize,
    dims: Vec<usize>,
    right: Vec<DMatrix<f64>>,
    left: Vec<DMatrix<f64>>,
}

impl JwCache {
    pub fn build(strand_dim: usize, n_max: usize, budget: &TlBudget) -> Result<Self> {
        if strand_dim < 3 {
            return Err(QgrdError::InvalidParameter(format!(
                "N = {strand_dim} must be at least 3"
            )));
        }
        if n_max > budget.max_strands {
            return Err(QgrdError::Budget(format!(
                "{n_max} strands requested, budget allows {}",
                budget.max_strands
            )));
        }
        let dims = ao_dims(strand_dim, n_max);
        if n_max >= 1 && dims[n_max - 1] * strand_dim > budget.max_dimension {
            return Err(QgrdError::Budget(format!(
                "isometry side {} exceeds {}",
                dims[n_max - 1] * strand_dim,
                budget.max_dimension
            )));
        }
        let mut right = vec![DMatrix::identity(1, 1)];
        let mut left = vec![DMatrix::identity(1, 1)];
        if n_max >= 1 {
            right.push(DMatrix::identity(strand_dim, strand_dim));
            left.push(DMatrix::identity(strand_dim, strand_dim));
        }
        for n in 2..=n_max {
            let u = Self::next_right(strand_dim, &dims, &right[n - 1], n)?;
            let k = Self::next_left(strand_dim, &dims, &left[n - 1], &right[n - 1], &u, n);
            right.push(u);
            left.push(k);
        }
        Ok(JwCache {
            strand_dim,
            n_max,
            dims,
            right,
            left,
        })
    }

    // Cup image of H_{n-2} in H_{n-1} ⊗ C^N: W[(i, w), j] = U_{n-1}[(j, w), i].
    fn next_right(
        nn: usize,
        dims: &[usize],
        prev: &DMatrix<f64>,
        n: usize,
    ) -> Result<DMatrix<f64>> {
        let (m1, m2) = (dims[n - 1], dims[n - 2]);
        let w = DMatrix::from_fn(m1 * nn, m2, |row, j| {
            let (i, s) = (row / nn, row % nn);
            prev[(j * nn + s, i)]
        });
        let u = orthonormal_complement(&w);
        if u.ncols() != dims[n] {
            return Err(QgrdError::Consistency(format!(
                "H_{n} has {} basis vectors, expected {}",
                u.ncols(),
                dims[n]
            )));
        }
        Ok(u)
    }

    // K_n = (I ⊗ U_{n-1}^T)(K_{n-1} ⊗ I) U_n.
    fn next_left(
        nn: usize,
        dims: &[usize],
        kprev: &DMatrix<f64>,
        uprev: &DMatrix<f64>,
        u: &DMatrix<f64>,
        n: usize,
    ) -> DMatrix<f64> {
        let (m, m1, m2) = (dims[n], dims[n - 1], dims[n - 2]);
        let ucat = DMatrix::from_fn(m1, m * nn, |i, col| u[(i * nn + col % nn, col / nn)]);
        let x = kprev * ucat;
        let mut out = DMatrix::zeros(nn * m1, m);
        for v in 0..nn {
            let z = DMatrix::from_fn(m2 * nn, m, |row, c| {
                x[(v * m2 + row / nn, c * nn + row % nn)]
            });
            out.rows_mut(v * m1, m1).copy_from(&tmul(uprev, &z));
        }
        out
    }

    /// Reassembles a cache from stored isometries, checking their shapes against the dimension recursion.
    pub fn from_parts(
        strand_dim: usize,
        right: Vec<DMatrix<f64>>,
        left: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if right.is_empty() || right.len() != left.len() {
            return Err(QgrdError::Format(
                "isometry lists are empty or of unequal length".into(),
            ));
        }
        let n_max = right.len() - 1;
        let dims = ao_dims(strand_dim, n_max);
        for n in 0..=n_max {
            let prev = if n == 0 { 1 } else { dims[n - 1] * strand_dim };
            if right[n].shape() != (prev, dims[n]) || left[n].shape() != (prev, dims[n]) {
                return Err(QgrdError::Format(format!(
                    "isometry {n} has the wrong shape"
                )));
            }
        }
        Ok(JwCache {
            strand_dim,
            n_max,
            dims,
            right,
            left,
        })
    }

    pub fn strand_dim(&self) -> usize {
        self.strand_dim
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `U_n : H_n -> H_{n-1} ⊗ C^N`.
    pub fn right_isometry(&self, n: usize) -> &DMatrix<f64> {
        &self.right[n]
    }

    /// `K_n : H_n -> C^N ⊗ H_{n-1}`.
    pub fn left_isometry(&self, n: usize) -> &DMatrix<f64> {
        &self.left[n]
    }

    /// Ambient isometry `V_n : H_n -> (C^N)^{⊗n}`; only for small `n`.
    pub fn ambient_isometry(&self, n: usize, budget: &TlBudget) -> Result<DMatrix<f64>> {
        let amb = self.strand_dim.pow(n as u32);
        if amb > budget.max_ambient {
            return Err(QgrdError::Budget(format!(
                "ambient dimension {amb} exceeds {}",
                budget.max_ambient
            )));
        }
        let mut v = DMatrix::identity(1, 1);
        for j in 1..=n {
            let id = DMatrix::<f64>::identity(self.strand_dim, self.strand_dim);
            v = v.kronecker(&id) * &self.right[j];
        }
        Ok(v)
    }

    /// Peels `q` strands off the right: `H_k -> H_{k-q} ⊗ (C^N)^{⊗q}`,
    /// rows indexed by `x * N^q + w` with `w` read in base `N`, first strand most significant.
    pub fn right_peel(&self, k: usize, q: usize) -> DMatrix<f64> {
        assert!(q <= k && k <= self.n_max);
        if q == 0 {
            return DMatrix::identity(self.dims[k], self.dims[k]);
        }
        let nn = self.strand_dim;
        let inner = self.right_peel(k - 1, q - 1);
        let u = &self.right[k];
        let (m, m1) = (self.dims[k], self.dims[k - 1]);
        let ucat = DMatrix::from_fn(m1, m * nn, |i, col| u[(i * nn + col % nn, col / nn)]);
        let prod = inner * ucat;
        let rows = prod.nrows();
        DMatrix::from_fn(rows * nn, m, |row, c| prod[(row / nn, c * nn + row % nn)])
    }

    /// Peels `q` strands off the left: `H_n -> (C^N)^{⊗q} ⊗ H_{n-q}`,
    /// rows indexed by `w * m_{n-q} + y`.
    pub fn left_peel(&self, n: usize, q: usize) -> DMatrix<f64> {
        assert!(q <= n && n <= self.n_max);
        if q == 0 {
            return DMatrix::identity(self.dims[n], self.dims[n]);
        }
        let nn = self.strand_dim;
        let inner = self.left_peel(n - 1, q - 1);
        let k1 = &self.left[n];
        let m1 = self.dims[n - 1];
        let block = inner.nrows();
        let mut out = DMatrix::zeros(nn * block, self.dims[n]);
        for v in 0..nn {
            out.rows_mut(v * block, block)
                .copy_from(&(&inner * k1.rows(v * m1, m1)));
        }
        out
    }

    /// [`Self::left_peel`] with the strand word of each row block reversed, so that
    /// block `w` of the result pairs with block `w` of [`Self::right_peel`] under the
    /// nested cups `t^q = Σ_w e_w ⊗ e_{rev w}`.
    pub fn left_peel_reversed(&self, n: usize, q: usize) -> DMatrix<f64> {
        let k = self.left_peel(n, q);
        let mj = self.dims[n - q];
        let nq = self.strand_dim.pow(q as u32);
        let mut out = DMatrix::zeros(k.nrows(), k.ncols());
        for w in 0..nq {
            let r = reverse_word(w, self.strand_dim, q);
            out.rows_mut(w * mj, mj).copy_from(&k.rows(r * mj, mj));
        }
        out
    }
}

/// Reverses the base-`base` digits of `w` read as a word of length `len`.
pub fn reverse_word(mut w: usize, base: usize, len: usize) -> usize {
    let mut r = 0;
    for _ in 0..len {
        r = r * base + w % base;
        w /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_follow_recursion() {
        assert_eq!(ao_dims(3, 8), vec![1, 3, 8, 21, 55, 144, 377, 987, 2584]);
        assert_eq!(ao_dim_f64(3, -1), 0.0);
        assert_eq!(ao_dim_f64(3, 4), 55.0);
    }

    #[test]
    fn isometries_are_orthonormal() {
        let c = JwCache::build(3, 5, &TlBudget::default()).unwrap();
        for n in 1..=5 {
            let u = c.right_isometry(n);
            let k = c.left_isometry(n);
            let id = DMatrix::identity(c.dim(n), c.dim(n));
            assert!((tmul(u, u) - &id).norm() < 1e-10);
            assert!((tmul(k, k) - &id).norm() < 1e-10);
        }
    }

    #[test]
    fn reverse_word_digits() {
        assert_eq!(reverse_word(0b011, 2, 3), 0b110);
        assert_eq!(reverse_word(5, 3, 2), 7);
    }
}
