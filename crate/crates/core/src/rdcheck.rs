//! Decision pipeline: modular obstruction, growth certification and the `A_o` / `A_u`
//! theorems, assembled into a verdict that carries its numeric evidence.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QgrdError, Result};
use crate::fusion::{au_factorization, au_rebuild, FusionRing, IrrLabel};
use crate::grouporacle::{enumerate_ball, haagerup_check, HaagerupReport};
use crate::length::{
    check_triangle_bounds, classify_growth, growth_profile, rational_string, triple_set, GrowthBound, GrowthClass,
    GrowthFit, GrowthProfile, LengthSpec,
};
use crate::tlrep::{JwCache, TlBudget};
use crate::transform::{necessary_condition_ratio, tech_ao_grid, TechAoGrid, TechAoSearch};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const VERDICT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    CertifiedRD,
    RefutedRD,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    PolynomialGrowth,
    NonUnimodular,
    TheoremAO,
    TheoremAU,
    BlockNormEvidence,
}

/// `‖p_n F‖` for `n = 0..=n_max` and the fitted geometric rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularObstruction {
    /// Exact values as `p/q` strings.
    pub norms: Vec<String>,
    #[serde(with = "rational_string")]
    pub rate: BigRational,
    /// True when `‖p_n F‖ = λⁿ` holds exactly for every listed `n`.
    pub exact_power_law: bool,
}

impl ModularObstruction {
    pub fn is_unimodular(&self) -> bool {
        self.norms.iter().all(|s| s == "1")
    }
}

/// Modular sequence `‖p_n F‖` and its rate `λ = ‖p_1 F‖`.
pub fn nonunimodular_obstruction(ring: &dyn FusionRing, n_max: u32) -> Result<ModularObstruction> {
    let mut norms = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        norms.push(necessary_condition_ratio(ring, n)?);
    }
    let rate = norms.get(1).cloned().unwrap_or_else(BigRational::one);
    let exact_power_law = norms.iter().enumerate().all(|(n, v)| *v == rate.pow(n as i32));
    Ok(ModularObstruction { norms: norms.iter().map(|v| v.to_string()).collect(), rate, exact_power_law })
}

/// `h_n ≤ C² (2+n)^{2s}` verified on every complete bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub s: f64,
    pub c: f64,
    pub bound: GrowthBound,
    pub buckets_checked: u32,
}

/// Certificate for a polynomially growing profile.
pub fn growth_certificate(ring: &dyn FusionRing, spec: &LengthSpec, theta: f64) -> Result<GrowthCertificate> {
    let profile = growth_profile(ring, spec)?;
    let fit = classify_growth(&profile, theta)?;
    certificate_from(&profile, &fit)
}

fn certificate_from(profile: &GrowthProfile, fit: &GrowthFit) -> Result<GrowthCertificate> {
    let GrowthClass::Polynomial { degree } = fit.class else {
        return Err(QgrdError::NotPolynomial);
    };
    let bound = GrowthBound::fit(profile, degree);
    if !bound.holds(profile) {
        return Err(QgrdError::Consistency("fitted growth bound fails on the profile".into()));
    }
    let c = bound.c_squared.to_f64().unwrap_or(f64::INFINITY).sqrt();
    Ok(GrowthCertificate { s: degree as f64 / 2.0, c, bound, buckets_checked: profile.buckets.len() as u32 })
}

/// Growth data attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEvidence {
    pub profile: GrowthProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<GrowthFit>,
}

/// Combinatorial evidence for `A_u(N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuEvidence {
    pub max_length: usize,
    /// Constituent triples `(α, β, γ)` whose factorization was rebuilt and found distinct.
    pub factorizations: usize,
    pub triangle_bounds_hold: bool,
}

/// Checks that `(α, β, γ) ↦ (τ, α′, β′)` is a bijection onto its image for all words of length
/// at most `max_length`, returning the number of triples.
pub fn verify_au_bijection(ring: &dyn FusionRing, max_length: usize) -> Result<usize> {
    let words = ring.enumerate_irreps(max_length as u32)?;
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for alpha in &words {
        for beta in &words {
            for gamma in ring.fuse(beta, alpha)?.labels() {
                let (IrrLabel::MonoidWord(a), IrrLabel::MonoidWord(b), IrrLabel::MonoidWord(g)) = (alpha, beta, gamma)
                else {
                    return Err(QgrdError::ForeignLabel { label: alpha.to_string(), family: ring.describe() });
                };
                let f = au_factorization(a, b, g)?;
                if au_rebuild(&f) != (a.clone(), b.clone(), g.clone()) || !seen.insert(f) {
                    return Err(QgrdError::Consistency(format!("factorization of {gamma} in {beta} ⊗ {alpha}")));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Raw numbers behind a verdict. Absent parts are omitted from the JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularObstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GrowthCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tech_ao: Option<TechAoGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<AuEvidence>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub block_norms: Vec<HaagerupReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdVerdict {
    pub schema_version: u32,
    pub outcome: Outcome,
    pub criterion: Option<Criterion>,
    pub family: String,
    pub parameters: String,
    pub radius: u32,
    pub evidence: Evidence,
    /// Why earlier stages of the pipeline did not decide.
    pub reasons: Vec<String>,
    pub tool_version: String,
    pub seed: u64,
}

/// Knobs of [`diagnose`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnoseOptions {
    /// Threshold of the growth classifier.
    pub theta: f64,
    /// Largest `n` of the modular sequence.
    pub modular_max: u32,
    /// Sectors `k + n ≤ tech_ao_max_sum` of the `A_o` evidence grid; zero skips it.
    pub tech_ao_max_sum: usize,
    pub tech_ao_search: TechAoSearch,
    pub tech_ao_tolerance: f64,
    /// Word length of the `A_u` bijection check.
    pub au_max_length: usize,
    /// Spheres `n, k, l ≤ block_norm_max` of the free-group block table.
    pub block_norm_max: u32,
    pub block_norm_trials: usize,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            theta: 0.05,
            modular_max: 10,
            tech_ao_max_sum: 4,
            tech_ao_search: TechAoSearch { restarts: 8, ..Default::default() },
            tech_ao_tolerance: 1e-6,
            au_max_length: 4,
            block_norm_max: 3,
            block_norm_trials: 20,
        }
    }
}

/// Runs the decision order: modular obstruction, polynomial growth, the `A_o` and `A_u`
/// theorems, and otherwise a block-norm table.
pub fn diagnose(ring: &dyn FusionRing, spec: &LengthSpec, options: &DiagnoseOptions, seed: u64) -> RdVerdict {
    let mut verdict = RdVerdict {
        schema_version: VERDICT_SCHEMA_VERSION,
        outcome: Outcome::Indeterminate,
        criterion: None,
        family: ring.family().to_string(),
        parameters: ring.describe(),
        radius: spec.radius(),
        evidence: Evidence::default(),
        reasons: Vec::new(),
        tool_version: TOOL_VERSION.to_string(),
        seed,
    };
    let decide = |v: &mut RdVerdict, outcome, criterion| {
        v.outcome = outcome;
        v.criterion = Some(criterion);
    };

    let n_max = options.modular_max.min(spec.complete_through());
    match nonunimodular_obstruction(ring, n_max) {
        Ok(m) => {
            let refuted = !m.is_unimodular();
            verdict.evidence.modular = Some(m);
            if refuted {
                decide(&mut verdict, Outcome::RefutedRD, Criterion::NonUnimodular);
                return verdict;
            }
        }
        Err(e) => verdict.reasons.push(format!("modular data: {e}")),
    }

    match growth_profile(ring, spec) {
        Ok(profile) => {
            let fit = classify_growth(&profile, options.theta);
            let cert = fit.as_ref().map_err(Clone::clone).and_then(|f| certificate_from(&profile, f));
            verdict.evidence.growth = Some(GrowthEvidence { profile, fit: fit.as_ref().ok().cloned() });
            match cert {
                Ok(c) => {
                    verdict.evidence.certificate = Some(c);
                    decide(&mut verdict, Outcome::CertifiedRD, Criterion::PolynomialGrowth);
                    return verdict;
                }
                Err(e) => verdict.reasons.push(format!("growth: {e}")),
            }
        }
        Err(e) => verdict.reasons.push(format!("growth profile: {e}")),
    }

    match ring.family() {
        "orthogonal-free" => match orthogonal_evidence(ring, options, seed) {
            Ok(Some(grid)) if grid.max_ratio() > 1.0 + options.tech_ao_tolerance => {
                verdict.reasons.push(format!("tech_ao grid reached {}", grid.max_ratio()));
                verdict.evidence.tech_ao = Some(grid);
            }
            Ok(grid) => {
                verdict.evidence.tech_ao = grid;
                decide(&mut verdict, Outcome::CertifiedRD, Criterion::TheoremAO);
            }
            Err(e) => {
                verdict.reasons.push(format!("tech_ao evidence: {e}"));
                decide(&mut verdict, Outcome::CertifiedRD, Criterion::TheoremAO);
            }
        },
        "unitary-free" => {
            let bij = verify_au_bijection(ring, options.au_max_length);
            let tri = triple_set(ring, spec).map(|t| check_triangle_bounds(&t));
            match (bij, tri) {
                (Ok(factorizations), Ok(triangle_bounds_hold)) => {
                    verdict.evidence.unitary =
                        Some(AuEvidence { max_length: options.au_max_length, factorizations, triangle_bounds_hold });
                    if triangle_bounds_hold {
                        decide(&mut verdict, Outcome::CertifiedRD, Criterion::TheoremAU);
                    } else {
                        verdict.reasons.push("triangle bounds fail on the triple set".into());
                    }
                }
                (Err(e), _) | (_, Err(e)) => verdict.reasons.push(format!("A_u combinatorics: {e}")),
            }
        }
        "free-group" => {
            let g = ring.generators().len() as u32 / 2;
            match block_table(g, options, seed) {
                Ok(rows) => verdict.evidence.block_norms = rows,
                Err(e) => verdict.reasons.push(format!("block norms: {e}")),
            }
            verdict.criterion = Some(Criterion::BlockNormEvidence);
        }
        _ => verdict.reasons.push("no criterion applies to this family".into()),
    }
    verdict
}

fn orthogonal_evidence(ring: &dyn FusionRing, options: &DiagnoseOptions, seed: u64) -> Result<Option<TechAoGrid>> {
    if options.tech_ao_max_sum == 0 {
        return Ok(None);
    }
    let n = ring.classical_dim(&IrrLabel::Spin(1))?;
    let n: usize = (&n).try_into().map_err(|_| QgrdError::Budget(format!("N = {n}")))?;
    let cache = JwCache::build(n, options.tech_ao_max_sum, &TlBudget::default())?;
    tech_ao_grid(&cache, options.tech_ao_max_sum, &options.tech_ao_search, seed, None).map(Some)
}

fn block_table(g: u32, options: &DiagnoseOptions, seed: u64) -> Result<Vec<HaagerupReport>> {
    let r = options.block_norm_max;
    let ball = enumerate_ball(g, r, 200_000)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for n in 0..=r {
        for k in 0..=r {
            for l in 0..=r {
                if k.abs_diff(l) <= n && n <= k + l && (k + l + n) % 2 == 0 {
                    rows.push(haagerup_check(&ball, n, k, l, options.block_norm_trials, &mut rng)?);
                }
            }
        }
    }
    Ok(rows)
}
