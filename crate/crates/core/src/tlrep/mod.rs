//! Temperley-Lieb realization of the irreducibles of `A_o(N)` with `Q = I`:
//! Jones-Wenzl projectors, nested cup embeddings and isotypic projectors, all in
//! reduced coordinates. Real matrices suffice because the duality vector is real.

mod cache;
mod dump;
mod sector;

pub use cache::{ao_dim_f64, ao_dims, reverse_word, JwCache, TlBudget};
pub use dump::{load_cache, save_cache, DUMP_VERSION};
pub use sector::{
    contract_pair, contract_pair_adj_first, contract_pair_adj_second, EmbedT, InnerTop, Sector,
};

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QgrdError, Result};

/// Jones-Wenzl projector `P_n` on `(C^N)^{⊗n}` by the Wenzl recursion
/// `P_{n+1} = P_n⊗1 − (m_{n−1}/m_n)(P_n⊗1)(1⊗…⊗tt*)(P_n⊗1)` with the unnormalized cup `t = Σ e_i⊗e_i`.
pub fn jw_projector(strand_dim: usize, n: usize, budget: &TlBudget) -> Result<DMatrix<f64>> {
    strand_dim
        .checked_pow(n as u32)
        .filter(|&a| a <= budget.max_ambient)
        .ok_or_else(|| {
            QgrdError::Budget(format!(
                "N^n = {strand_dim}^{n} exceeds {}",
                budget.max_ambient
            ))
        })?;
    if n == 0 {
        return Ok(DMatrix::identity(1, 1));
    }
    let nn = strand_dim;
    let id = DMatrix::<f64>::identity(nn, nn);
    let cupcap = cup_cap(nn);
    let mut p = id.clone();
    for j in 1..n {
        let lifted = p.kronecker(&id);
        let e =
            DMatrix::<f64>::identity(nn.pow(j as u32 - 1), nn.pow(j as u32 - 1)).kronecker(&cupcap);
        let coeff = ao_dim_f64(nn, j as i64 - 1) / ao_dim_f64(nn, j as i64);
        let pe = &lifted * e * &lifted;
        p = lifted - pe * coeff;
    }
    Ok(p)
}

/// `tt*` on two strands.
pub fn cup_cap(strand_dim: usize) -> DMatrix<f64> {
    let t = cup(strand_dim);
    &t * t.transpose()
}

/// The cup `t = Σ e_i ⊗ e_i` as a column vector in `C^N ⊗ C^N`.
pub fn cup(strand_dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(strand_dim * strand_dim, 1, |r, _| {
        if r / strand_dim == r % strand_dim {
            1.0
        } else {
            0.0
        }
    })
}

/// Isotypic projector `δ(p_l)` on reduced `H_k ⊗ H_n`.
pub fn isotypic_projector(
    cache: &JwCache,
    k: usize,
    n: usize,
    l: usize,
    tol: f64,
) -> Result<DMatrix<f64>> {
    let s = Sector::new(cache, k, n, l)?;
    if s.scalar_deviation() > tol {
        return Err(QgrdError::Consistency(format!(
            "S*S deviates from a scalar by {:.3e} on ({k}, {l}, {n})",
            s.scalar_deviation()
        )));
    }
    let dense = s.dense();
    Ok(&dense * dense.transpose() / s.scale())
}

/// Measured and predicted squared norm of `(P_{p+1}⊗P_{p'+1}) t₁` on the `l` sector of `H_p ⊗ H_p'`.
/// The measured value is the largest ratio over a few random sector vectors.
pub fn morphism_norm_check(cache: &JwCache, p: usize, pp: usize, l: usize) -> Result<(f64, f64)> {
    let q = admissible_q(p, l, pp)?;
    if p.max(pp) + 1 > cache.n_max() {
        return Err(QgrdError::Budget(format!(
            "needs {} strands, cache holds {}",
            p.max(pp) + 1,
            cache.n_max()
        )));
    }
    let nn = cache.strand_dim();
    let m = |j: i64| ao_dim_f64(nn, j);
    let (pi, ppi, qi) = (p as i64, pp as i64, q as i64);
    let formula = m(pi + 1) / m(pi) * (1.0 - m(pi - qi) * m(ppi - qi - 1) / (m(pi + 1) * m(ppi)));

    let t = EmbedT::new(cache, p + 1, pp + 1, 1)?;
    let mut rng =
        ChaCha8Rng::seed_from_u64(0x5eed ^ ((p as u64) << 16) ^ ((pp as u64) << 8) ^ l as u64);
    let mut measured = 0.0f64;
    for _ in 0..3 {
        let v = sector_vector(cache, p, pp, l, &mut rng)?;
        let tv = t.apply(&v);
        measured = measured.max(tv.norm_squared() / v.norm_squared());
    }
    Ok((measured, formula))
}

/// A random vector of the `l` sector of `H_k ⊗ H_n`, as an `m_k × m_n` matrix.
pub fn sector_vector<R: Rng>(
    cache: &JwCache,
    k: usize,
    n: usize,
    l: usize,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let q = admissible_q(k, l, n)?;
    let (i, j) = (k - q, n - q);
    let g = DMatrix::from_fn(cache.dim(i), cache.dim(j), |_, _| rng.random::<f64>() - 0.5);
    let top = top_projection(cache, i, j, &g)?;
    EmbedT::new(cache, k, n, q).map(|e| e.apply(&top))
}

/// Orthogonal projection of `x ∈ H_i ⊗ H_j` onto its top sector `H_{i+j}`,
/// computed as `x − A G⁻¹ Aᵀ x` with `A` the single-cup embedding of `H_{i−1} ⊗ H_{j−1}`.
pub fn top_projection(
    cache: &JwCache,
    i: usize,
    j: usize,
    x: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    if i == 0 || j == 0 {
        return Ok(x.clone());
    }
    let a = EmbedT::new(cache, i, j, 1)?;
    let g = a.gram();
    let rhs = crate::linalg::vec_rowmajor(&a.adjoint(x));
    let sol = g
        .cholesky()
        .ok_or_else(|| QgrdError::Consistency("cup embedding is not injective".into()))?
        .solve(&rhs);
    let back = crate::linalg::unvec_rowmajor(sol.as_slice(), cache.dim(i - 1), cache.dim(j - 1));
    Ok(x - a.apply(&back))
}

/// Returns `q = (k + n − l)/2` for an admissible triple.
pub fn admissible_q(k: usize, l: usize, n: usize) -> Result<usize> {
    let ok = l + k.min(n) * 2 >= k + n && l <= k + n && (k + n - l).is_multiple_of(2);
    if ok {
        Ok((k + n - l) / 2)
    } else {
        Err(QgrdError::Inadmissible { k, l, n })
    }
}

/// Twisted Hilbert-Schmidt norm `√Tr(F x*x)` with `F` diagonal in the block basis.
pub fn hs_norm(x: &DMatrix<f64>, f_eigs: &[f64]) -> Result<f64> {
    if x.nrows() != f_eigs.len() || x.ncols() != f_eigs.len() {
        return Err(QgrdError::Shape(format!(
            "{}x{} block against {} eigenvalues",
            x.nrows(),
            x.ncols(),
            f_eigs.len()
        )));
    }
    let s: f64 = (0..x.ncols())
        .map(|c| f_eigs[c] * x.column(c).norm_squared())
        .sum();
    Ok(s.sqrt())
}
