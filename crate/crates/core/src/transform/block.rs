use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::techao::{TechAoMap, TechAoOutcome, TechAoSearch};
use crate::error::{QgrdError, Result};
use crate::fusion::{modular_norm, FusionRing, IrrLabel};
use crate::grouporacle::{block_conv_matrix, Ball, Kernel};
use crate::length::LengthSpec;
use crate::linalg::{gaussian_matrix, lanczos_top, SVD_LIMIT};
use crate::tlrep::{admissible_q, hs_norm, JwCache, Sector};

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Finitely many matrix blocks `a_α ∈ L(H_α)` of an element of the function algebra.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlockElement {
    blocks: BTreeMap<IrrLabel, DMatrix<f64>>,
}

impl BlockElement {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a block, checking that it is square of side `dim H_α`.
    pub fn insert(&mut self, ring: &dyn FusionRing, label: IrrLabel, block: DMatrix<f64>) -> Result<()> {
        let d = ring.classical_dim(&label)?;
        let ok = block.is_square() && d == block.nrows().into();
        if !ok {
            return Err(QgrdError::Shape(format!(
                "{}x{} block for {label} of dimension {d}",
                block.nrows(),
                block.ncols()
            )));
        }
        self.blocks.insert(label, block);
        Ok(())
    }

    pub fn get(&self, label: &IrrLabel) -> Option<&DMatrix<f64>> {
        self.blocks.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrLabel, &DMatrix<f64>)> {
        self.blocks.iter()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `m_α Tr(F a_α* a_α)` for each block.
    fn contributions<'a>(&'a self, ring: &'a dyn FusionRing) -> impl Iterator<Item = Result<(&'a IrrLabel, f64)>> + 'a {
        self.blocks.iter().map(move |(label, a)| {
            let f: Vec<f64> = ring.modular_eigenvalues(label)?.iter().map(to_f64).collect();
            let hs = hs_norm(a, &f)?;
            Ok((label, to_f64(&ring.qdim(label)?) * hs * hs))
        })
    }

    /// GNS norm `‖a‖₂ = (Σ m_α Tr(F a_α* a_α))^{1/2}`.
    pub fn l2_norm(&self, ring: &dyn FusionRing) -> Result<f64> {
        let mut s = 0.0;
        for c in self.contributions(ring) {
            s += c?.1;
        }
        Ok(s.sqrt())
    }
}

/// `‖a‖_{2,s} = ‖(1 + L)^s a‖₂` with the exact length values of `spec`.
pub fn sobolev_norm(a: &BlockElement, s: f64, spec: &LengthSpec, ring: &dyn FusionRing) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(QgrdError::InvalidParameter(format!("Sobolev exponent {s}")));
    }
    let mut total = 0.0;
    for c in a.contributions(ring) {
        let (label, w) = c?;
        let len = spec.value(label).ok_or_else(|| {
            QgrdError::InvalidParameter(format!("{label} lies outside the length table"))
        })?;
        total += (1.0 + len).powf(2.0 * s) * w;
    }
    Ok(total.sqrt())
}

/// Convolution into the `l` sector of `H_k ⊗ H_n` for `A_o(N)`:
/// `Conv(x) = (m_k m_n / m_l) S_iso* x S_iso`.
pub struct ConvSector {
    pub k: usize,
    pub n: usize,
    pub l: usize,
    /// `m_k m_n / m_l`.
    pub factor: f64,
    pub sector: Sector,
    iso: DMatrix<f64>,
}

impl ConvSector {
    pub fn new(cache: &JwCache, k: usize, n: usize, l: usize) -> Result<Self> {
        let sector = Sector::new(cache, k, n, l)?;
        let iso = sector.isometry();
        let factor = cache.dim(k) as f64 * cache.dim(n) as f64 / cache.dim(l) as f64;
        Ok(ConvSector { k, n, l, factor, sector, iso })
    }

    /// `S_iso`, `(m_k m_n) × m_l`.
    pub fn isometry(&self) -> &DMatrix<f64> {
        &self.iso
    }

    /// `p_l Conv(x)` for an operator `x` on `H_k ⊗ H_n`.
    pub fn conv(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let d = self.iso.nrows();
        if x.shape() != (d, d) {
            return Err(QgrdError::Shape(format!("{:?} operator on a space of dimension {d}", x.shape())));
        }
        Ok(self.iso.tr_mul(&(x * &self.iso)) * self.factor)
    }

    /// `p_l Conv(u vᵀ)` for `x = u vᵀ` given by `d × r` factors.
    pub fn conv_factored(&self, u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
        self.iso.tr_mul(u) * self.iso.tr_mul(v).transpose() * self.factor
    }
}

/// `conv_block` for `A_o(N)`: `(m_k m_n / m_l) S_iso* (b ⊗ a) S_iso`.
pub fn conv_block(cache: &JwCache, b: &DMatrix<f64>, a: &DMatrix<f64>, l: usize) -> Result<DMatrix<f64>> {
    let k = dim_index(cache, b)?;
    let n = dim_index(cache, a)?;
    ConvSector::new(cache, k, n, l)?.conv(&b.kronecker(a))
}

/// The `n` with `dim H_n` equal to the side of a square block.
fn dim_index(cache: &JwCache, x: &DMatrix<f64>) -> Result<usize> {
    let pos = cache.dims().iter().position(|&d| d == x.nrows());
    match pos {
        Some(n) if x.is_square() => Ok(n),
        _ => Err(QgrdError::Shape(format!("{}x{} is not a block of the cached irreducibles", x.nrows(), x.ncols()))),
    }
}

/// Largest singular value of `b ↦ p_l Conv(b ⊗ a)` from `(L(H_k), ‖·‖₂)` to `(L(H_l), ‖·‖₂)`
/// for `A_o(N)`, with `a ∈ L(H_n)`. Zero off the triple set. Small maps are diagonalized
/// exactly; larger ones go through Lanczos with relative accuracy `tol`.
pub fn fourier_block_norm_ao(cache: &JwCache, n: usize, a: &DMatrix<f64>, k: usize, l: usize, tol: f64) -> Result<f64> {
    if admissible_q(k, l, n).is_err() {
        return Ok(0.0);
    }
    if a.shape() != (cache.dim(n), cache.dim(n)) {
        return Err(QgrdError::Shape(format!("{:?} block on H_{n}", a.shape())));
    }
    let map = TechAoMap::new(cache, k, l, n)?;
    let scale = Sector::new(cache, k, n, l)?.scale();
    let op = map.b_operator(a);
    let mk = cache.dim(k);
    let lambda = if mk * mk <= SVD_LIMIT {
        // the Gram operator as an explicit matrix, column by column
        let mut gram = DMatrix::zeros(mk * mk, mk * mk);
        for c in 0..mk * mk {
            let mut e = DMatrix::zeros(mk, mk);
            e[(c % mk, c / mk)] = 1.0;
            gram.column_mut(c).copy_from_slice(op(&e).as_slice());
        }
        let gram = (&gram + gram.transpose()) * 0.5;
        SymmetricEigen::new(gram).eigenvalues.max()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf0f0 ^ ((k as u64) << 8) ^ l as u64);
        let start = gaussian_matrix(mk, mk, &mut rng);
        lanczos_top(|x| op(x), &start, tol, 5000, 32).0
    };
    let (mk, mn, ml) = (cache.dim(k) as f64, cache.dim(n) as f64, cache.dim(l) as f64);
    Ok(mk.sqrt() * mn / (ml.sqrt() * scale) * lambda.max(0.0).sqrt())
}

/// Block norm `‖p_l λ(a) p_k‖` for a kernel on the sphere `S_n` of the free-group oracle.
pub fn fourier_block_norm_free(ball: &Ball, n: u32, a: &Kernel, k: u32, l: u32) -> Result<f64> {
    let m = block_conv_matrix(ball, a, n, k, l)?;
    Ok(if m.is_zero() { 0.0 } else { m.operator_norm() })
}

/// Alternating maximization of the compressed tensor ratio of a sector of `A_o(N)`.
pub fn tech_ao_ratio(cache: &JwCache, k: usize, l: usize, n: usize, search: &TechAoSearch, seed: u64) -> Result<TechAoOutcome> {
    if k.max(n) > cache.n_max() || l > cache.n_max() {
        return Err(QgrdError::Budget(format!(
            "({k}, {l}, {n}) needs {} strands, cache holds {}",
            k.max(n).max(l),
            cache.n_max()
        )));
    }
    Ok(TechAoMap::new(cache, k, l, n)?.maximize(search, seed))
}

/// `max ‖p_α F‖` over the bucket `n`: the ratio attained by the test pair `b = p_ξ`, `a = p̄_ξ`.
pub fn necessary_condition_ratio(ring: &dyn FusionRing, n: u32) -> Result<BigRational> {
    let mut best = BigRational::one();
    for label in ring.enumerate_irreps(n + 1)? {
        if ring.bucket(&label)? == n {
            let m = modular_norm(ring, &label)?;
            if m > best {
                best = m;
            }
        }
    }
    Ok(best)
}
