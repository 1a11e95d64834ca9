use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QgrdError, Result};
use crate::linalg::{
    frob_dot, gaussian_matrix, lanczos_top, orthonormal_complement, orthonormal_range, tmul,
};
use crate::tlrep::{
    admissible_q, contract_pair, contract_pair_adj_first, contract_pair_adj_second, EmbedT, JwCache,
};

type MatrixMap<'s> = Box<dyn Fn(&DMatrix<f64>) -> DMatrix<f64> + 's>;

/// Inner spaces up to this dimension get an explicit projector onto their top sector.
const EXPLICIT_TOP_LIMIT: usize = 1200;
const KRYLOV_DIM: usize = 24;
const INITIAL_INNER_TOL: f64 = 1e-4;
const INNER_TOL_FACTOR: f64 = 1e-2;

/// Settings of the alternating maximizer.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TechAoSearch {
    pub restarts: usize,
    pub sweeps: usize,
    /// Relative change of the ratio between sweeps that ends a restart.
    pub sweep_tol: f64,
    /// Relative change of the top Ritz value that ends an inner eigen-solve.
    pub power_tol: f64,
    pub power_max_iter: usize,
}

impl Default for TechAoSearch {
    fn default() -> Self {
        TechAoSearch {
            restarts: 64,
            sweeps: 20,
            sweep_tol: 1e-10,
            power_tol: 1e-10,
            power_max_iter: 500,
        }
    }
}

/// Result of one maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct TechAoOutcome {
    pub ratio: f64,
    pub restart: usize,
    pub evaluations: usize,
    pub b: DMatrix<f64>,
    pub a: DMatrix<f64>,
}

// Projection of the inner space H_i ⊗ H_j onto its top sector.
enum TopProj {
    Whole,
    // orthonormal basis of the sector
    Basis(DMatrix<f64>),
    // orthonormal basis of the complement of the sector
    Complement(DMatrix<f64>),
}

impl TopProj {
    // P Y P for a square Y on the inner space.
    fn sandwich(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            TopProj::Whole => y.clone(),
            TopProj::Basis(s) => {
                let core = tmul(s, &(y * s));
                s * core * s.transpose()
            }
            TopProj::Complement(c) => {
                let cty = tmul(c, y);
                let yc = y * c;
                let ctyc = &cty * c;
                let mut out = y - c * cty - yc * c.transpose();
                out += c * ctyc * c.transpose();
                out
            }
        }
    }
}

enum Model {
    // ||P A_q^T (b ⊗ a) A_q P||, with A_q in factored form.
    Compressed { embed: EmbedT, top: TopProj },
    // q = 0 and a large tensor space: ||P (b ⊗ a) P|| expanded around the single-cup embedding A.
    Lower { cup: EmbedT, ginv: DMatrix<f64> },
}

/// The bilinear map `(b, a) ↦ ι* t_q* (b ⊗ a) t_q ι` of a sector `(k, l, n)`, whose Hilbert-Schmidt
/// norm relative to `‖b‖‖a‖` is the ratio bounded by one for `A_o(N)`.
pub struct TechAoMap {
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub q: usize,
    mk: usize,
    mn: usize,
    model: Model,
}

fn peel_in(p: Option<&DMatrix<f64>>, x: &DMatrix<f64>) -> DMatrix<f64> {
    match p {
        Some(p) => p * x * p.transpose(),
        None => x.clone(),
    }
}

fn peel_out(p: Option<&DMatrix<f64>>, x: &DMatrix<f64>) -> DMatrix<f64> {
    match p {
        Some(p) => tmul(p, &(x * p)),
        None => x.clone(),
    }
}

impl TechAoMap {
    pub fn new(cache: &JwCache, k: usize, l: usize, n: usize) -> Result<Self> {
        let q = admissible_q(k, l, n)?;
        let (i, j) = (k - q, n - q);
        let d = cache.dim(i) * cache.dim(j);
        let model = if i == 0 || j == 0 {
            Model::Compressed {
                embed: EmbedT::new(cache, k, n, q)?,
                top: TopProj::Whole,
            }
        } else if d <= EXPLICIT_TOP_LIMIT {
            let cup = EmbedT::new(cache, i, j, 1)?.to_dense();
            let top = if cache.dim(l) <= cup.ncols() {
                TopProj::Basis(orthonormal_complement(&cup))
            } else {
                TopProj::Complement(orthonormal_range(&cup))
            };
            Model::Compressed {
                embed: EmbedT::new(cache, k, n, q)?,
                top,
            }
        } else if q == 0 {
            return Self::top_expanded(cache, k, n);
        } else {
            return Err(QgrdError::Budget(format!(
                "inner space of dimension {d} for ({k}, {l}, {n})"
            )));
        };
        Ok(TechAoMap {
            k,
            l,
            n,
            q,
            mk: cache.dim(k),
            mn: cache.dim(n),
            model,
        })
    }

    /// The top sector `(k, k + n, n)` evaluated through the single-cup embedding of
    /// `H_{k−1} ⊗ H_{n−1}`, never forming `b ⊗ a`.
    pub fn top_expanded(cache: &JwCache, k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(QgrdError::InvalidParameter(
                "expanded form needs k, n ≥ 1".into(),
            ));
        }
        let cup = EmbedT::new(cache, k, n, 1)?;
        let ginv = cup
            .gram()
            .try_inverse()
            .ok_or_else(|| QgrdError::Consistency("cup embedding is not injective".into()))?;
        let model = Model::Lower { cup, ginv };
        Ok(TechAoMap {
            k,
            l: k + n,
            n,
            q: 0,
            mk: cache.dim(k),
            mn: cache.dim(n),
            model,
        })
    }

    /// `‖ι* t_q* (b ⊗ a) t_q ι‖_HS²`.
    pub fn value_squared(&self, b: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
        let op = self.a_operator(b);
        frob_dot(a, &op(a))
    }

    /// Ratio `‖ι* t_q* (b ⊗ a) t_q ι‖_HS / (‖b‖ ‖a‖)`.
    pub fn ratio(&self, b: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
        self.value_squared(b, a).max(0.0).sqrt() / (b.norm() * a.norm())
    }

    /// For fixed `b`, the positive operator `a ↦ L_b* L_b a` with `L_b a = ι* t_q* (b ⊗ a) t_q ι`.
    pub fn a_operator<'s>(
        &'s self,
        b: &DMatrix<f64>,
    ) -> MatrixMap<'s> {
        match &self.model {
            Model::Compressed { embed, top } => {
                let (mi, mj, nq) = (embed.mi, embed.mj, embed.nq);
                let bp = peel_in(embed.right_peel(), b);
                Box::new(move |a| {
                    let ap = peel_in(embed.left_peel(), a);
                    let w = top.sandwich(&contract_pair(&bp, &ap, mi, mj, nq));
                    peel_out(
                        embed.left_peel(),
                        &contract_pair_adj_second(&bp, &w, mi, mj, nq),
                    )
                })
            }
            Model::Lower { cup, ginv } => {
                let (mi, mj, nq) = (cup.mi, cup.mj, cup.nq);
                let j = cup.right_peel().expect("cup has a peel");
                let kp = cup.left_peel().expect("cup has a peel");
                let bp = j * b * j.transpose();
                let bb = j * (b * b.transpose()) * j.transpose();
                let btb = j * (tmul(b, b)) * j.transpose();
                let m = tmul(kp, &(contract_pair_adj_second(&bb, ginv, mi, mj, nq) * kp));
                let mprime = tmul(
                    kp,
                    &(contract_pair_adj_second(&btb, ginv, mi, mj, nq) * kp),
                );
                let bnorm2 = b.norm_squared();
                Box::new(move |a| {
                    let ap = kp * a * kp.transpose();
                    let phi = contract_pair(&bp, &ap, mi, mj, nq);
                    let z = ginv * phi * ginv;
                    let back = tmul(kp, &(contract_pair_adj_second(&bp, &z, mi, mj, nq) * kp));
                    a * bnorm2 - &m * a - a * &mprime + back
                })
            }
        }
    }

    /// For fixed `a`, the positive operator `b ↦ L_a* L_a b`.
    pub fn b_operator<'s>(
        &'s self,
        a: &DMatrix<f64>,
    ) -> MatrixMap<'s> {
        match &self.model {
            Model::Compressed { embed, top } => {
                let (mi, mj, nq) = (embed.mi, embed.mj, embed.nq);
                let ap = peel_in(embed.left_peel(), a);
                Box::new(move |b| {
                    let bp = peel_in(embed.right_peel(), b);
                    let w = top.sandwich(&contract_pair(&bp, &ap, mi, mj, nq));
                    peel_out(
                        embed.right_peel(),
                        &contract_pair_adj_first(&ap, &w, mi, mj, nq),
                    )
                })
            }
            Model::Lower { cup, ginv } => {
                let (mi, mj, nq) = (cup.mi, cup.mj, cup.nq);
                let j = cup.right_peel().expect("cup has a peel");
                let kp = cup.left_peel().expect("cup has a peel");
                let ap = kp * a * kp.transpose();
                let aa = kp * (a * a.transpose()) * kp.transpose();
                let ata = kp * (tmul(a, a)) * kp.transpose();
                let m = tmul(j, &(contract_pair_adj_first(&aa, ginv, mi, mj, nq) * j));
                let mprime = tmul(j, &(contract_pair_adj_first(&ata, ginv, mi, mj, nq) * j));
                let anorm2 = a.norm_squared();
                Box::new(move |b| {
                    let bp = j * b * j.transpose();
                    let phi = contract_pair(&bp, &ap, mi, mj, nq);
                    let z = ginv * phi * ginv;
                    let back = tmul(j, &(contract_pair_adj_first(&ap, &z, mi, mj, nq) * j));
                    b * anorm2 - &m * b - b * &mprime + back
                })
            }
        }
    }

    /// Alternating maximization with random restarts; returns the best ratio found.
    pub fn maximize(&self, search: &TechAoSearch, seed: u64) -> TechAoOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<TechAoOutcome> = None;
        let mut evaluations = 0usize;
        if self.k == 0 || self.n == 0 {
            // one side is the scalars and the map is an isometry
            let mut b = gaussian_matrix(self.mk, self.mk, &mut rng);
            let mut a = gaussian_matrix(self.mn, self.mn, &mut rng);
            b /= b.norm();
            a /= a.norm();
            return TechAoOutcome { ratio: self.ratio(&b, &a), restart: 0, evaluations: 1, b, a };
        }
        for restart in 0..search.restarts {
            let mut b = gaussian_matrix(self.mk, self.mk, &mut rng);
            let mut a = gaussian_matrix(self.mn, self.mn, &mut rng);
            b /= b.norm();
            a /= a.norm();
            let mut ratio = self.ratio(&b, &a);
            // Inner solves start loose and tighten with the sweep-to-sweep change.
            let mut inner_tol = INITIAL_INNER_TOL.max(search.power_tol);
            for _ in 0..search.sweeps {
                let (_, na, ea) = top_eigen(self.a_operator(&b), a, inner_tol, search);
                a = na;
                let (lam, nb, eb) = top_eigen(self.b_operator(&a), b, inner_tol, search);
                b = nb;
                evaluations += ea + eb;
                let next = lam.max(0.0).sqrt();
                let change = (next - ratio).abs() / next.max(f64::MIN_POSITIVE);
                ratio = next;
                if change <= search.sweep_tol && inner_tol <= search.power_tol {
                    break;
                }
                inner_tol = (change * INNER_TOL_FACTOR)
                    .min(inner_tol)
                    .max(search.power_tol);
            }
            if best.as_ref().is_none_or(|o| ratio > o.ratio) {
                best = Some(TechAoOutcome {
                    ratio,
                    restart,
                    evaluations: 0,
                    b: b.clone(),
                    a: a.clone(),
                });
            }
        }
        let mut out = best.expect("at least one restart");
        out.evaluations = evaluations;
        out
    }
}

/// Best ratio found on one sector.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TechAoRecord {
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub ratio: f64,
    pub evaluations: usize,
    pub seed: u64,
}

/// Maximized ratios over all admissible sectors with `k + n ≤ max_sum`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TechAoGrid {
    pub strand_dim: usize,
    pub max_sum: usize,
    pub search: TechAoSearch,
    pub records: Vec<TechAoRecord>,
    /// False when the deadline stopped the sweep early.
    pub complete: bool,
}

impl TechAoGrid {
    pub fn max_ratio(&self) -> f64 {
        self.records.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }
}

/// Admissible `(k, l, n)` with `k + n ≤ max_sum`, smallest `k + n` first.
pub fn admissible_triples(max_sum: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for sum in 0..=max_sum {
        for k in 0..=sum {
            let n = sum - k;
            for l in (k.abs_diff(n)..=sum).step_by(2) {
                out.push((k, l, n));
            }
        }
    }
    out
}

/// Per-sector seed derived from the run seed.
pub fn triple_seed(seed: u64, k: usize, l: usize, n: usize) -> u64 {
    seed ^ ((k as u64) << 40) ^ ((l as u64) << 20) ^ n as u64
}

/// Runs [`TechAoMap::maximize`] on every admissible sector with `k + n ≤ max_sum`.
/// Sectors not started before `deadline` are skipped and the grid is marked incomplete.
pub fn tech_ao_grid(
    cache: &JwCache,
    max_sum: usize,
    search: &TechAoSearch,
    seed: u64,
    deadline: Option<std::time::Instant>,
) -> Result<TechAoGrid> {
    if max_sum > cache.n_max() {
        return Err(QgrdError::Budget(format!(
            "k + n ≤ {max_sum} needs {max_sum} strands, cache holds {}",
            cache.n_max()
        )));
    }
    let mut records = Vec::new();
    let mut complete = true;
    for (k, l, n) in admissible_triples(max_sum) {
        if deadline.is_some_and(|d| std::time::Instant::now() >= d) {
            complete = false;
            break;
        }
        let s = triple_seed(seed, k, l, n);
        let out = TechAoMap::new(cache, k, l, n)?.maximize(search, s);
        records.push(TechAoRecord { k, l, n, ratio: out.ratio, evaluations: out.evaluations, seed: s });
    }
    Ok(TechAoGrid { strand_dim: cache.strand_dim(), max_sum, search: *search, records, complete })
}

fn top_eigen(
    op: MatrixMap<'_>,
    x: DMatrix<f64>,
    tol: f64,
    search: &TechAoSearch,
) -> (f64, DMatrix<f64>, usize) {
    lanczos_top(op, &x, tol, search.power_max_iter, KRYLOV_DIM)
}
