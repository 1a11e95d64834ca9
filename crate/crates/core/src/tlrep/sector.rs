use nalgebra::{Cholesky, DMatrix, Dyn};

use super::admissible_q;
use super::cache::JwCache;
use crate::error::{QgrdError, Result};
use crate::linalg::{orthonormal_complement, scalar_deviation, tmul, unvec_rowmajor, vec_rowmajor};

/// Reduced matrix of `(P_k ⊗ P_n)(1 ⊗ t^q ⊗ 1) : H_{k−q} ⊗ H_{n−q} -> H_k ⊗ H_n`,
/// kept in factored form. Vectors of a two-factor space are `rows × cols` matrices.
#[derive(Debug, Clone)]
pub struct EmbedT {
    pub k: usize,
    pub n: usize,
    pub q: usize,
    pub mi: usize,
    pub mj: usize,
    pub mk: usize,
    pub mn: usize,
    pub nq: usize,
    /// Right peel of `H_k`, rows `(x, w)`; `None` when `q = 0`.
    jpeel: Option<DMatrix<f64>>,
    /// Reversed left peel of `H_n`, rows `(w, y)`; `None` when `q = 0`.
    kpeel: Option<DMatrix<f64>>,
}

impl EmbedT {
    pub fn new(cache: &JwCache, k: usize, n: usize, q: usize) -> Result<Self> {
        if q > k.min(n) {
            return Err(QgrdError::InvalidParameter(format!(
                "q = {q} exceeds min({k}, {n})"
            )));
        }
        if k.max(n) > cache.n_max() {
            return Err(QgrdError::Budget(format!(
                "needs {} strands, cache holds {}",
                k.max(n),
                cache.n_max()
            )));
        }
        let (jpeel, kpeel) = if q == 0 {
            (None, None)
        } else {
            (
                Some(cache.right_peel(k, q)),
                Some(cache.left_peel_reversed(n, q)),
            )
        };
        Ok(EmbedT {
            k,
            n,
            q,
            mi: cache.dim(k - q),
            mj: cache.dim(n - q),
            mk: cache.dim(k),
            mn: cache.dim(n),
            nq: cache.strand_dim().pow(q as u32),
            jpeel,
            kpeel,
        })
    }

    pub fn right_peel(&self) -> Option<&DMatrix<f64>> {
        self.jpeel.as_ref()
    }

    pub fn left_peel(&self) -> Option<&DMatrix<f64>> {
        self.kpeel.as_ref()
    }

    /// `x` is `m_{k−q} × m_{n−q}`; returns `m_k × m_n`.
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let (Some(j), Some(kp)) = (&self.jpeel, &self.kpeel) else {
            return x.clone();
        };
        let (mi, mj, nq) = (self.mi, self.mj, self.nq);
        let mut mk = DMatrix::zeros(mi * nq, self.mn);
        for w in 0..nq {
            let p = x * kp.rows(w * mj, mj);
            for r in 0..mi {
                mk.row_mut(r * nq + w).copy_from(&p.row(r));
            }
        }
        tmul(j, &mk)
    }

    /// Adjoint of [`Self::apply`].
    pub fn adjoint(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let (Some(j), Some(kp)) = (&self.jpeel, &self.kpeel) else {
            return y.clone();
        };
        let (mi, mj, nq) = (self.mi, self.mj, self.nq);
        let r = j * y;
        let mut out = DMatrix::zeros(mi, mj);
        for w in 0..nq {
            let rw = DMatrix::from_fn(mi, self.mn, |x, c| r[(x * nq + w, c)]);
            out += rw * kp.rows(w * mj, mj).transpose();
        }
        out
    }

    /// Dense `(m_k m_n) × (m_{k−q} m_{n−q})` matrix in row-major pair indices.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let (mi, mj) = (self.mi, self.mj);
        let mut out = DMatrix::zeros(self.mk * self.mn, mi * mj);
        let (Some(j), Some(kp)) = (&self.jpeel, &self.kpeel) else {
            out.fill_with_identity();
            return out;
        };
        let nq = self.nq;
        for x in 0..mi {
            let jx = DMatrix::from_fn(nq, self.mk, |w, c| j[(x * nq + w, c)]);
            for y in 0..mj {
                let ky = DMatrix::from_fn(nq, self.mn, |w, c| kp[(w * mj + y, c)]);
                let col = tmul(&jx, &ky);
                out.column_mut(x * mj + y).copy_from(&vec_rowmajor(&col));
            }
        }
        out
    }

    /// `AᵀA` on the inner space, as a dense matrix in row-major pair indices.
    pub fn gram(&self) -> DMatrix<f64> {
        match (&self.jpeel, &self.kpeel) {
            (Some(j), Some(kp)) => {
                let bp = j * j.transpose();
                let ap = kp * kp.transpose();
                contract_pair(&bp, &ap, self.mi, self.mj, self.nq)
            }
            _ => DMatrix::identity(self.mi * self.mj, self.mi * self.mj),
        }
    }

    /// `Aᵀ (b ⊗ a) A` on the inner space.
    pub fn compress(&self, b: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
        match (&self.jpeel, &self.kpeel) {
            (Some(j), Some(kp)) => {
                let bp = j * b * j.transpose();
                let ap = kp * a * kp.transpose();
                contract_pair(&bp, &ap, self.mi, self.mj, self.nq)
            }
            _ => b.kronecker(a),
        }
    }
}

/// `Y[(x,y),(x',y')] = Σ_{w,w'} bp[(x,w),(x',w')] · ap[(w,y),(w',y')]`.
pub fn contract_pair(
    bp: &DMatrix<f64>,
    ap: &DMatrix<f64>,
    mi: usize,
    mj: usize,
    nq: usize,
) -> DMatrix<f64> {
    let bt = DMatrix::from_fn(mi * mi, nq * nq, |r, c| {
        bp[((r / mi) * nq + c / nq, (r % mi) * nq + c % nq)]
    });
    let at = DMatrix::from_fn(nq * nq, mj * mj, |r, c| {
        ap[((r / nq) * mj + c / mj, (r % nq) * mj + c % mj)]
    });
    let ym = bt * at;
    DMatrix::from_fn(mi * mj, mi * mj, |r, c| {
        ym[((r / mj) * mi + c / mj, (r % mj) * mj + c % mj)]
    })
}

/// Adjoint of [`contract_pair`] in its second argument.
pub fn contract_pair_adj_second(
    bp: &DMatrix<f64>,
    z: &DMatrix<f64>,
    mi: usize,
    mj: usize,
    nq: usize,
) -> DMatrix<f64> {
    let bt = DMatrix::from_fn(mi * mi, nq * nq, |r, c| {
        bp[((r / mi) * nq + c / nq, (r % mi) * nq + c % nq)]
    });
    let zm = DMatrix::from_fn(mi * mi, mj * mj, |r, c| {
        z[((r / mi) * mj + c / mj, (r % mi) * mj + c % mj)]
    });
    let at = tmul(&bt, &zm);
    DMatrix::from_fn(nq * mj, nq * mj, |r, c| {
        at[((r / mj) * nq + c / mj, (r % mj) * mj + c % mj)]
    })
}

/// Adjoint of [`contract_pair`] in its first argument.
pub fn contract_pair_adj_first(
    ap: &DMatrix<f64>,
    z: &DMatrix<f64>,
    mi: usize,
    mj: usize,
    nq: usize,
) -> DMatrix<f64> {
    let at = DMatrix::from_fn(nq * nq, mj * mj, |r, c| {
        ap[((r / nq) * mj + c / mj, (r % nq) * mj + c % mj)]
    });
    let zm = DMatrix::from_fn(mi * mi, mj * mj, |r, c| {
        z[((r / mi) * mj + c / mj, (r % mi) * mj + c % mj)]
    });
    let bt = zm * at.transpose();
    DMatrix::from_fn(mi * nq, mi * nq, |r, c| {
        bt[((r / nq) * mi + c / nq, (r % nq) * nq + c % nq)]
    })
}

/// How the top sector `H_{i+j}` of the inner space `H_i ⊗ H_j` is represented.
#[derive(Debug, Clone)]
pub enum InnerTop {
    /// One factor is trivial: the whole inner space is the sector.
    Whole,
    /// Explicit orthonormal basis, `(m_i m_j) × m_{i+j}`.
    Basis(DMatrix<f64>),
    /// Complement of the single-cup image `A` of `H_{i−1} ⊗ H_{j−1}`.
    Complement {
        cup: Box<EmbedT>,
        gram: Cholesky<f64, Dyn>,
    },
}

/// The `l` sector of `H_k ⊗ H_n`: `S = embed_t(k, n, q) ∘ ι` with `ι` the top sector of the inner space.
#[derive(Debug, Clone)]
pub struct Sector {
    pub k: usize,
    pub n: usize,
    pub l: usize,
    pub q: usize,
    pub embed: EmbedT,
    pub inner: InnerTop,
    ml: usize,
    scale: f64,
    deviation: f64,
}

/// Inner spaces up to this dimension get an explicit top-sector basis.
pub const EXPLICIT_INNER_LIMIT: usize = 1200;

impl Sector {
    pub fn new(cache: &JwCache, k: usize, n: usize, l: usize) -> Result<Self> {
        let q = admissible_q(k, l, n)?;
        let embed = EmbedT::new(cache, k, n, q)?;
        let (i, j) = (k - q, n - q);
        let d = cache.dim(i) * cache.dim(j);
        let ml = cache.dim(l);
        let inner = if i == 0 || j == 0 {
            InnerTop::Whole
        } else {
            let cup = EmbedT::new(cache, i, j, 1)?;
            if d <= EXPLICIT_INNER_LIMIT {
                let basis = orthonormal_complement(&cup.to_dense());
                if basis.ncols() != ml {
                    return Err(QgrdError::Consistency(format!(
                        "top sector of H_{i} ⊗ H_{j} has dimension {}, expected {ml}",
                        basis.ncols()
                    )));
                }
                InnerTop::Basis(basis)
            } else {
                let gram = cup.gram().cholesky().ok_or_else(|| {
                    QgrdError::Consistency("cup embedding is not injective".into())
                })?;
                InnerTop::Complement {
                    cup: Box::new(cup),
                    gram,
                }
            }
        };
        let mut s = Sector {
            k,
            n,
            l,
            q,
            embed,
            inner,
            ml,
            scale: 1.0,
            deviation: 0.0,
        };
        s.measure_scale();
        Ok(s)
    }

    fn measure_scale(&mut self) {
        let (scale, dev) = match &self.inner {
            InnerTop::Complement { cup, gram } => {
                // S*S is scalar, so one top vector of the inner space gives the scale
                let x = DMatrix::from_fn(self.embed.mi, self.embed.mj, |r, c| {
                    ((r * 7919 + c * 104_729) % 1009) as f64 / 1009.0 - 0.5
                });
                let low = gram.solve(&vec_rowmajor(&cup.adjoint(&x)));
                let top = &x - cup.apply(&unvec_rowmajor(low.as_slice(), cup.mi, cup.mj));
                (self.embed.apply(&top).norm_squared() / top.norm_squared(), 0.0)
            }
            _ => {
                let s = self.dense();
                let (dev, c) = scalar_deviation(&tmul(&s, &s));
                (c, dev)
            }
        };
        self.scale = scale;
        self.deviation = dev;
    }

    pub fn dim(&self) -> usize {
        self.ml
    }

    /// The scalar `c` with `SᵀS = c·1`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Relative deviation of `SᵀS` from `c·1`.
    pub fn scalar_deviation(&self) -> f64 {
        self.deviation
    }

    /// Dense `S`, `(m_k m_n) × m_l`. Not available for complement-represented sectors.
    pub fn dense(&self) -> DMatrix<f64> {
        match &self.inner {
            InnerTop::Whole => self.embed.to_dense(),
            InnerTop::Basis(iota) if self.q == 0 => iota.clone(),
            InnerTop::Basis(iota) => self.embed.to_dense() * iota,
            InnerTop::Complement { .. } => panic!("dense basis of a complement-represented sector"),
        }
    }

    /// Normalized isometric intertwiner `S/√c : H_l → H_k ⊗ H_n`, `(m_k m_n) × m_l`.
    pub fn isometry(&self) -> DMatrix<f64> {
        let s = match &self.inner {
            InnerTop::Complement { cup, .. } => {
                let iota = orthonormal_complement(&cup.to_dense());
                if self.q == 0 {
                    iota
                } else {
                    self.embed.to_dense() * iota
                }
            }
            _ => self.dense(),
        };
        s / self.scale.sqrt()
    }

    /// Orthogonal projection `δ(p_l) v` of `v ∈ H_k ⊗ H_n` (an `m_k × m_n` matrix).
    pub fn project(&self, v: &DMatrix<f64>) -> DMatrix<f64> {
        let inner = self.embed.adjoint(v);
        let (mi, mj) = (self.embed.mi, self.embed.mj);
        let top = match &self.inner {
            InnerTop::Whole => inner,
            InnerTop::Basis(iota) => {
                let c = iota.transpose() * vec_rowmajor(&inner);
                unvec_rowmajor((iota * c).as_slice(), mi, mj)
            }
            InnerTop::Complement { cup, gram } => {
                let low = gram.solve(&vec_rowmajor(&cup.adjoint(&inner)));
                inner.clone() - cup.apply(&unvec_rowmajor(low.as_slice(), cup.mi, cup.mj))
            }
        };
        self.embed.apply(&top) / self.scale
    }
}
