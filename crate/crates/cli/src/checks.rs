//! Invariant checkers run by `verify`, looked up by name in a [`CheckRegistry`].

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use qgrd::fusion::{FusionRing, IrrLabel};
use qgrd::grouporacle::{enumerate_ball, haagerup_check, Ball, Kernel};
use qgrd::length::{
    classify_growth, growth_profile, permutation_failures, triangle_violations, triple_set, GrowthBound, GrowthClass,
    LengthSpec,
};
use qgrd::linalg::gaussian_matrix;
use qgrd::rdcheck::{nonunimodular_obstruction, verify_au_bijection};
use qgrd::tlrep::{jw_projector, morphism_norm_check, JwCache, Sector};
use qgrd::transform::{
    admissible_triples, banach_submult_check, derivation_norm_check, laff_inequality_check, rd_constant, tech_ao_grid,
    triple_string, CheckRow, ConvSector, InequalityCheck, TechAoSearch, INEQUALITY_SLACK,
};
use qgrd::{QgrdError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;

/// Operators on `H_k ⊗ H_n` above this dimension are sampled as rank-`LOW_RANK` products.
pub const DENSE_CONV_LIMIT: usize = 300;
pub const LOW_RANK: usize = 6;

/// Shared inputs of one `verify` run.
pub struct CheckContext<'a> {
    pub ring: &'a dyn FusionRing,
    pub config: &'a RunConfig,
    pub seed: u64,
    cache: OnceLock<std::result::Result<JwCache, QgrdError>>,
}

impl<'a> CheckContext<'a> {
    pub fn new(ring: &'a dyn FusionRing, config: &'a RunConfig, seed: u64) -> Self {
        CheckContext { ring, config, seed, cache: OnceLock::new() }
    }

    /// Strands needed by the `A_o` checkers: the budget, and five for the morphism norms.
    fn strands(&self) -> usize {
        self.config.budget.max_strands.max(5)
    }

    /// Jones-Wenzl cache of the ring's `A_o(N)`, built on first use.
    pub fn cache(&self) -> Result<&JwCache> {
        self.cache
            .get_or_init(|| {
                let n = strand_dim(self.ring)?;
                JwCache::build(n, self.strands(), &self.config.budget.tl(self.strands()))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn tol(&self, value: f64) -> f64 {
        self.config.tolerance_or(value)
    }

    fn upper(&self, check: &str, triple: String, measured: f64, bound: f64, tolerance: f64) -> CheckRow {
        let (family, parameters) = (self.ring.family(), self.ring.describe());
        CheckRow::upper(check, family, &parameters, triple, measured, bound, self.tol(tolerance), self.seed)
    }

    fn close(&self, check: &str, triple: String, measured: f64, bound: f64, tolerance: f64) -> CheckRow {
        let (family, parameters) = (self.ring.family(), self.ring.describe());
        CheckRow::close(check, family, &parameters, triple, measured, bound, self.tol(tolerance), self.seed)
    }

    /// Row for an inequality check: the worst `lhs` against its `rhs`.
    fn inequality(&self, check: &str, triple: String, worst: InequalityCheck) -> CheckRow {
        self.upper(check, triple, worst.lhs, worst.rhs, INEQUALITY_SLACK)
    }

    /// Failing row standing in for a checker that could not run.
    pub fn failure(&self, check: &str, err: &QgrdError) -> CheckRow {
        let mut row = self.upper(check, format!("error: {err}"), f64::NAN, 0.0, 0.0);
        row.ok = false;
        row
    }
}

fn strand_dim(ring: &dyn FusionRing) -> Result<usize> {
    let d = ring.classical_dim(&IrrLabel::Spin(1))?;
    (&d).try_into().map_err(|_| QgrdError::Budget(format!("N = {d}")))
}

/// Worst case of a family of inequality checks, by `lhs − rhs`.
fn worst(checks: impl IntoIterator<Item = InequalityCheck>) -> Option<InequalityCheck> {
    checks.into_iter().max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs)))
}

pub trait Checker: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn applies_to(&self, family: &str) -> bool;
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>>;
}

/// Name-keyed checkers, kept in registration order.
#[derive(Default)]
pub struct CheckRegistry {
    checkers: Vec<Box<dyn Checker>>,
}

impl CheckRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, checker: Box<dyn Checker>) {
        self.checkers.retain(|c| c.name() != checker.name());
        self.checkers.push(checker);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Checker> {
        self.checkers.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Checker> {
        self.checkers.iter().map(|c| c.as_ref())
    }

    /// The checkers to run: `names` in registry order, or every applicable one when empty.
    pub fn select(&self, family: &str, names: &[String]) -> std::result::Result<Vec<&dyn Checker>, String> {
        if let Some(unknown) = names.iter().find(|n| self.get(n).is_none()) {
            return Err(format!("unknown check {unknown:?}"));
        }
        Ok(self
            .iter()
            .filter(|c| c.applies_to(family))
            .filter(|c| names.is_empty() || names.iter().any(|n| n == c.name()))
            .collect())
    }

    /// Runs `checkers` on `threads` workers. Rows come back in the order of `checkers`.
    pub fn run_all(&self, checkers: &[&dyn Checker], ctx: &CheckContext, threads: usize) -> Vec<CheckRow> {
        let slots: Vec<Mutex<Vec<CheckRow>>> = checkers.iter().map(|_| Mutex::new(Vec::new())).collect();
        let next = AtomicUsize::new(0);
        let work = || loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(c) = checkers.get(i) else { break };
            let start = Instant::now();
            let mut rows = c.run(ctx).unwrap_or_else(|e| vec![ctx.failure(c.name(), &e)]);
            if ctx.config.output.timings {
                let ms = start.elapsed().as_millis() as u64;
                rows.iter_mut().for_each(|r| r.runtime_ms = Some(ms));
            }
            *slots[i].lock().expect("poisoned slot") = rows;
        };
        std::thread::scope(|s| {
            for _ in 1..threads.max(1) {
                s.spawn(work);
            }
            work();
        });
        slots.into_iter().flat_map(|m| m.into_inner().expect("poisoned slot")).collect()
    }
}

/// Registry with every built-in checker.
pub fn default_checks() -> CheckRegistry {
    let mut r = CheckRegistry::new();
    r.register(Box::new(AoDimensions));
    r.register(Box::new(JwProjectors));
    r.register(Box::new(MorphismNorms));
    r.register(Box::new(SectorScalars));
    r.register(Box::new(ConvNorms));
    r.register(Box::new(TechAo));
    r.register(Box::new(Triangles));
    r.register(Box::new(Modular));
    r.register(Box::new(Growth));
    r.register(Box::new(AuBijection));
    r.register(Box::new(SphereCounts));
    r.register(Box::new(Haagerup));
    r.register(Box::new(Laff));
    r.register(Box::new(Banach));
    r.register(Box::new(Derivation));
    r
}

const ORTHOGONAL: &str = "orthogonal-free";
const FREE: &str = "free-group";

struct AoDimensions;

impl Checker for AoDimensions {
    fn name(&self) -> &'static str {
        "ao-dims"
    }
    fn summary(&self) -> &'static str {
        "dimension recursion against the closed form r^n (1 - s^(n+1)) / (1 - s), n <= 20"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let nn = strand_dim(ctx.ring)? as f64;
        let r = (nn + (nn * nn - 4.0).sqrt()) / 2.0;
        let s = 1.0 / (r * r);
        let mut err = 0.0f64;
        for n in 0..=20u32 {
            let m = ctx.ring.classical_dim(&IrrLabel::Spin(n))?.to_f64().unwrap_or(f64::INFINITY);
            let closed = r.powi(n as i32) * (1.0 - s.powi(n as i32 + 1)) / (1.0 - s);
            err = err.max((m - closed).abs() / m.max(1.0));
        }
        Ok(vec![ctx.upper(self.name(), "n<=20".into(), err, 0.0, 1e-9)])
    }
}

struct JwProjectors;

impl Checker for JwProjectors {
    fn name(&self) -> &'static str {
        "jw-projector"
    }
    fn summary(&self) -> &'static str {
        "Jones-Wenzl projectors are idempotent, self-adjoint and have trace m_n, n <= 5"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let cache = ctx.cache()?;
        let budget = ctx.config.budget.tl(ctx.strands());
        let mut rows = Vec::new();
        for n in 0..=5.min(ctx.config.budget.max_strands) {
            let p = match jw_projector(cache.strand_dim(), n, &budget) {
                Ok(p) => p,
                Err(QgrdError::Budget(_)) => break,
                Err(e) => return Err(e),
            };
            let label = format!("n={n}");
            rows.push(ctx.upper("jw-idempotent", label.clone(), (&p * &p - &p).amax(), 0.0, 1e-10));
            rows.push(ctx.upper("jw-self-adjoint", label.clone(), (&p - p.transpose()).amax(), 0.0, 1e-10));
            rows.push(ctx.close("jw-trace", label, p.trace(), cache.dim(n) as f64, 1e-8));
        }
        Ok(rows)
    }
}

struct MorphismNorms;

impl Checker for MorphismNorms {
    fn name(&self) -> &'static str {
        "morphism-norm"
    }
    fn summary(&self) -> &'static str {
        "squared norm of the single-cup morphism on each sector against the quantum-dimension quotient, p, p' <= 4"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let cache = ctx.cache()?;
        let mut rows = Vec::new();
        for p in 0..=4usize {
            for pp in 0..=4usize {
                for l in (p.abs_diff(pp)..=p + pp).step_by(2) {
                    let (measured, formula) = morphism_norm_check(cache, p, pp, l)?;
                    rows.push(ctx.close(self.name(), triple_string(p, l, pp), measured, formula, 1e-6));
                }
            }
        }
        Ok(rows)
    }
}

struct SectorScalars;

impl Checker for SectorScalars {
    fn name(&self) -> &'static str {
        "sector-scalar"
    }
    fn summary(&self) -> &'static str {
        "intertwiners S of every sector satisfy S^T S = c 1"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let cache = ctx.cache()?;
        admissible_triples(ctx.config.budget.max_strands)
            .into_iter()
            .map(|(k, l, n)| {
                let s = Sector::new(cache, k, n, l)?;
                Ok(ctx.upper(self.name(), triple_string(k, l, n), s.scalar_deviation(), 0.0, 1e-8))
            })
            .collect()
    }
}

struct ConvNorms;

impl Checker for ConvNorms {
    fn name(&self) -> &'static str {
        "conv-norm"
    }
    fn summary(&self) -> &'static str {
        "||p_l Conv(x)||_2 = sqrt(m_k m_n / m_l) ||d x d||_2 on random operators x"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let cache = ctx.cache()?;
        let mut rows = Vec::new();
        for (k, l, n) in admissible_triples(ctx.config.budget.max_strands) {
            let mut rng = ChaCha8Rng::seed_from_u64(qgrd::transform::triple_seed(ctx.seed, k, l, n));
            let conv = ConvSector::new(cache, k, n, l)?;
            let gap = (0..ctx.config.verify.samples)
                .map(|_| conv_norm_gap(cache, &conv, &mut rng))
                .fold(0.0, f64::max);
            rows.push(ctx.upper(self.name(), triple_string(k, l, n), gap, 0.0, 1e-8));
        }
        Ok(rows)
    }
}

/// Relative gap of the convolution norm identity on one random operator.
pub fn conv_norm_gap(cache: &JwCache, conv: &ConvSector, rng: &mut ChaCha8Rng) -> f64 {
    let (k, n, l) = (conv.k, conv.n, conv.l);
    let (mk, mn, ml) = (cache.dim(k), cache.dim(n), cache.dim(l));
    let d = mk * mn;
    // δ(p_l) on each column, a vector of H_k ⊗ H_n stored row-major
    let project_cols = |m: &DMatrix<f64>| {
        let mut out = m.clone();
        for j in 0..m.ncols() {
            let v = DMatrix::from_row_slice(mk, mn, m.column(j).as_slice());
            out.column_mut(j).copy_from_slice(conv.sector.project(&v).transpose().as_slice());
        }
        out
    };
    let (lhs, dxd) = if d <= DENSE_CONV_LIMIT {
        let x = gaussian_matrix(d, d, rng);
        let lhs = conv.conv(&x).expect("operator of the sector's shape").norm();
        (lhs, project_cols(&project_cols(&x).transpose()).transpose().norm())
    } else {
        let u = gaussian_matrix(d, LOW_RANK, rng);
        let v = gaussian_matrix(d, LOW_RANK, rng);
        let lhs = conv.conv_factored(&u, &v).norm();
        let (pu, pv) = (project_cols(&u), project_cols(&v));
        let gram = (pu.transpose() * &pu).component_mul(&(pv.transpose() * &pv));
        (lhs, gram.sum().max(0.0).sqrt())
    };
    let (mk, mn, ml) = (mk as f64, mn as f64, ml as f64);
    let lhs = ml.sqrt() * lhs;
    let rhs = (mk * mn / ml).sqrt() * (mk * mn).sqrt() * dxd;
    (lhs - rhs).abs() / rhs.max(1.0)
}

struct TechAo;

impl Checker for TechAo {
    fn name(&self) -> &'static str {
        "tech-ao"
    }
    fn summary(&self) -> &'static str {
        "alternating search of the compressed tensor ratio stays <= 1 and reaches 1 on trivial sectors"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == ORTHOGONAL
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let cache = ctx.cache()?;
        let v = &ctx.config.verify;
        let search = TechAoSearch { restarts: v.tech_ao_restarts, ..Default::default() };
        let max_sum = v.tech_ao_max_sum.min(ctx.config.budget.max_strands);
        let grid = tech_ao_grid(cache, max_sum, &search, ctx.seed, None)?;
        let mut rows = Vec::new();
        for r in &grid.records {
            let triple = triple_string(r.k, r.l, r.n);
            rows.push(ctx.upper(self.name(), triple.clone(), r.ratio, 1.0, 1e-6));
            if r.l == 0 || r.k == 0 || r.n == 0 {
                rows.push(ctx.close("tech-ao-trivial", triple, r.ratio, 1.0, 1e-8));
            }
        }
        Ok(rows)
    }
}

struct Triangles;

impl Checker for Triangles {
    fn name(&self) -> &'static str {
        "triangle"
    }
    fn summary(&self) -> &'static str {
        "triple sets are permutation stable and satisfy |k-l|-2 <= n <= k+l+2 (exactly for groups, A_o, A_u)"
    }
    fn applies_to(&self, _family: &str) -> bool {
        true
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let radius = ctx.config.verify.triangle_radius;
        let spec = LengthSpec::natural(ctx.ring, radius)?;
        let ts = triple_set(ctx.ring, &spec)?;
        let label = format!("R={radius}");
        let count = |v: Vec<(u32, u32, u32)>| v.len() as f64;
        let mut rows = vec![
            ctx.upper("triangle-permutation", label.clone(), count(permutation_failures(&ts)), 0.0, 0.0),
            ctx.upper("triangle-slack-2", label.clone(), count(triangle_violations(&ts, 2)), 0.0, 0.0),
        ];
        if matches!(ctx.ring.family(), FREE | ORTHOGONAL | "unitary-free") {
            rows.push(ctx.upper("triangle-exact", label, count(triangle_violations(&ts, 0)), 0.0, 0.0));
        }
        Ok(rows)
    }
}

struct Modular;

impl Checker for Modular {
    fn name(&self) -> &'static str {
        "modular"
    }
    fn summary(&self) -> &'static str {
        "bucket maxima of ||p_a F|| follow an exact power law; rate 1/q for SU_q(2), 1 otherwise"
    }
    fn applies_to(&self, _family: &str) -> bool {
        true
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let n_max = ctx.config.verify.modular_max;
        let m = nonunimodular_obstruction(ctx.ring, n_max)?;
        let label = format!("n<={n_max}");
        let rate = m.rate.to_f64().unwrap_or(f64::NAN);
        let law = if m.exact_power_law { 0.0 } else { 1.0 };
        let expected = match (&ctx.ring.family(), ctx.config.family_params()) {
            (&"suq2", Ok(p)) => {
                let q = qgrd::fusion::parse_rational(p.q.as_deref().unwrap_or("1"))?;
                1.0 / q.to_f64().unwrap_or(f64::NAN)
            }
            _ => 1.0,
        };
        Ok(vec![
            ctx.upper("modular-power-law", label.clone(), law, 0.0, 0.0),
            ctx.close("modular-rate", label, rate, expected, 1e-12),
        ])
    }
}

struct Growth;

impl Checker for Growth {
    fn name(&self) -> &'static str {
        "growth-certificate"
    }
    fn summary(&self) -> &'static str {
        "polynomial profile with h_n <= C^2 (2+n)^(2s) on every complete bucket"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == "compact-lie"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let spec = ctx.config.length_spec(ctx.ring).map_err(|e| QgrdError::InvalidParameter(e.to_string()))?;
        let profile = growth_profile(ctx.ring, &spec)?;
        let fit = classify_growth(&profile, ctx.config.growth.theta)?;
        let GrowthClass::Polynomial { degree } = fit.class else {
            return Err(QgrdError::NotPolynomial);
        };
        let bound = GrowthBound::fit(&profile, degree);
        let c2 = bound.c_squared.to_f64().unwrap_or(f64::INFINITY);
        let worst = profile
            .buckets
            .iter()
            .filter(|b| b.n <= profile.complete_through)
            .map(|b| b.weight.to_f64().unwrap_or(f64::INFINITY) / (c2 * (2.0 + b.n as f64).powi(degree as i32)))
            .fold(0.0, f64::max);
        let label = format!("R={},s={}", spec.radius(), degree as f64 / 2.0);
        let verified = if bound.holds(&profile) { 0.0 } else { 1.0 };
        Ok(vec![
            ctx.upper("growth-ratio", label.clone(), worst, 1.0, 1e-12),
            ctx.upper("growth-exact", label, verified, 0.0, 0.0),
        ])
    }
}

struct AuBijection;

impl Checker for AuBijection {
    fn name(&self) -> &'static str {
        "au-bijection"
    }
    fn summary(&self) -> &'static str {
        "factorizations of A_u constituents are injective and rebuild their triples"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == "unitary-free"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let len = ctx.config.verify.au_max_length;
        verify_au_bijection(ctx.ring, len)?;
        Ok(vec![ctx.upper(self.name(), format!("len<={len}"), 0.0, 0.0, 0.0)])
    }
}

fn oracle_ball(ctx: &CheckContext, radius: u32) -> Result<Ball> {
    let g = ctx.ring.generators().len() as u32 / 2;
    enumerate_ball(g, radius, ctx.config.budget.max_labels)
}

struct SphereCounts;

impl Checker for SphereCounts {
    fn name(&self) -> &'static str {
        "sphere-counts"
    }
    fn summary(&self) -> &'static str {
        "|S_n| = 2g (2g-1)^(n-1) on the oracle ball"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == FREE
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let ball = oracle_ball(ctx, ctx.config.verify.oracle_radius)?;
        let g = ball.generators() as f64;
        Ok((1..=ball.radius())
            .map(|n| {
                let want = 2.0 * g * (2.0 * g - 1.0).powi(n as i32 - 1);
                ctx.close(self.name(), format!("n={n}"), ball.sphere(n).len() as f64, want, 0.0)
            })
            .collect())
    }
}

struct Haagerup;

impl Checker for Haagerup {
    fn name(&self) -> &'static str {
        "haagerup"
    }
    fn summary(&self) -> &'static str {
        "||p_l lambda(a) p_k|| <= ||a||_2 for kernels on S_n, and the sphere-1 indicator value at (1,2)"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == FREE
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let r = ctx.config.verify.oracle_radius;
        let ball = oracle_ball(ctx, r)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut rows = Vec::new();
        for n in 0..=r {
            for k in 0..=r {
                for l in 0..=r {
                    let rep = haagerup_check(&ball, n, k, l, ctx.config.blocks.trials, &mut rng)?;
                    rows.push(ctx.upper(self.name(), triple_string(k, l, n), rep.max_ratio, 1.0, 1e-12));
                }
            }
        }
        if r >= 2 {
            let rep = haagerup_check(&ball, 1, 1, 2, 0, &mut rng)?;
            let g = ball.generators() as f64;
            let want = ((2.0 * g - 1.0) / (2.0 * g)).sqrt();
            rows.push(ctx.close("haagerup-indicator", triple_string(1, 2, 1), rep.indicator_ratio, want, 1e-12));
        }
        Ok(rows)
    }
}

struct Laff;

impl Checker for Laff {
    fn name(&self) -> &'static str {
        "laff"
    }
    fn summary(&self) -> &'static str {
        "Sobolev product inequality for m = 2, 3 positive kernels in ball 2, s, t in {0,1,2}"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == FREE
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let ball = oracle_ball(ctx, 2)?;
        let mut rows = Vec::new();
        for m in 2..=3usize {
            for s in 0..=2 {
                for t in 0..=2 {
                    let checks = (0..ctx.config.verify.kernel_seeds)
                        .map(|i| {
                            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(i));
                            let ks: Vec<Kernel> =
                                (0..m).map(|_| Kernel::random(ball.sub_ball(2), 5, false, &mut rng)).collect();
                            laff_inequality_check(&ks, s, t)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(w) = worst(checks) {
                        rows.push(ctx.inequality(self.name(), format!("m={m},s={s},t={t}"), w));
                    }
                }
            }
        }
        Ok(rows)
    }
}

struct Banach;

impl Checker for Banach {
    fn name(&self) -> &'static str {
        "banach"
    }
    fn summary(&self) -> &'static str {
        "||ab||_{2,t} <= 2^(t+3) C ||a||_{2,t} ||b||_{2,t} for signed kernels in ball 3, C from measured block norms"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == FREE
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let ball = oracle_ball(ctx, 3)?;
        // block bound measured on the same ball
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut block_bound = 0.0f64;
        for n in 0..=3 {
            for k in 0..=3 {
                for l in 0..=3 {
                    block_bound = block_bound.max(haagerup_check(&ball, n, k, l, 20, &mut rng)?.max_ratio);
                }
            }
        }
        let mut rows = Vec::new();
        for t in 1..=2 {
            let c = rd_constant(block_bound, t, 6);
            let checks = (0..ctx.config.verify.kernel_seeds).map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(i));
                let a = Kernel::random(ball.sub_ball(3), 9, true, &mut rng);
                let b = Kernel::random(ball.sub_ball(3), 9, true, &mut rng);
                banach_submult_check(&a, &b, t, c)
            });
            if let Some(w) = worst(checks) {
                rows.push(ctx.inequality(self.name(), format!("t={t}"), w));
            }
        }
        Ok(rows)
    }
}

struct Derivation;

impl Checker for Derivation {
    fn name(&self) -> &'static str {
        "derivation"
    }
    fn summary(&self) -> &'static str {
        "||D^k(F a)|| <= 2 ||F(L^k a)|| for positive kernels on S_2, truncated to the oracle ball"
    }
    fn applies_to(&self, family: &str) -> bool {
        family == FREE
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<CheckRow>> {
        let r = ctx.config.verify.oracle_radius;
        let ball = oracle_ball(ctx, r)?;
        let r_in = r.saturating_sub(2);
        let mut rows = Vec::new();
        for k in 1..=2 {
            let checks = (0..ctx.config.verify.kernel_seeds)
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(i));
                    let a = Kernel::random(ball.sphere(2), 6, false, &mut rng);
                    derivation_norm_check(&ball, &a, k, r_in)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(w) = worst(checks) {
                rows.push(ctx.inequality(self.name(), format!("k={k},r_in={r_in}"), w));
            }
        }
        Ok(rows)
    }
}
