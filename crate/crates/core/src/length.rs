//! Central lengths on enumerated balls, growth profiles, triple sets and length domination.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QgrdError, Result};
use crate::fusion::{FusionRing, IrrLabel};

const LENGTH_TOL: f64 = 1e-12;

/// Length values on a finite set of irreducibles, with their spectral buckets `⌊l⌋`.
#[derive(Debug, Clone)]
pub struct LengthSpec {
    labels: Vec<IrrLabel>,
    values: Vec<f64>,
    buckets: Vec<u32>,
    index: HashMap<IrrLabel, usize>,
    radius: u32,
}

impl LengthSpec {
    /// Builds a spec from `(label, value, bucket)` entries covering the ball of `radius`.
    pub fn from_entries(entries: Vec<(IrrLabel, f64, u32)>, radius: u32) -> Self {
        let mut labels = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut buckets = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (l, v, b) in entries {
            index.insert(l.clone(), labels.len());
            labels.push(l);
            values.push(v);
            buckets.push(b);
        }
        LengthSpec { labels, values, buckets, index, radius }
    }

    /// The ring's own length (word length or Euclidean norm) on its ball of `radius`.
    pub fn natural(ring: &dyn FusionRing, radius: u32) -> Result<Self> {
        let mut entries = Vec::new();
        for l in ring.enumerate_irreps(radius)? {
            let v = ring.natural_length(&l)?;
            let b = ring.bucket(&l)?;
            entries.push((l, v, b));
        }
        Ok(Self::from_entries(entries, radius))
    }

    /// Applies `f` to the natural length on the ball of `radius`; buckets are `⌊f(l)⌋`.
    pub fn transformed(ring: &dyn FusionRing, radius: u32, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut entries = Vec::new();
        for l in ring.enumerate_irreps(radius)? {
            let v = f(ring.natural_length(&l)?);
            entries.push((l, v, v.floor().max(0.0) as u32));
        }
        Ok(Self::from_entries(entries, radius))
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[IrrLabel] {
        &self.labels
    }

    pub fn value(&self, label: &IrrLabel) -> Option<f64> {
        self.index.get(label).map(|&i| self.values[i])
    }

    pub fn bucket(&self, label: &IrrLabel) -> Option<u32> {
        self.index.get(label).map(|&i| self.buckets[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrLabel, f64, u32)> {
        self.labels.iter().zip(&self.values).zip(&self.buckets).map(|((l, v), b)| (l, *v, *b))
    }

    /// Overrides one value, keeping the bucket consistent.
    pub fn set(&mut self, label: &IrrLabel, value: f64) {
        if let Some(&i) = self.index.get(label) {
            self.values[i] = value;
            self.buckets[i] = value.floor().max(0.0) as u32;
        }
    }

    /// Largest bucket all of whose members lie in the ball: `R` for integer-valued lengths, else `R - 1`.
    pub fn complete_through(&self) -> u32 {
        if self.values.iter().all(|v| v.fract() == 0.0) {
            self.radius
        } else {
            self.radius.saturating_sub(1)
        }
    }
}

/// Word length for the generating set `generators`, by breadth-first search over iterated fusion.
pub fn word_length_table(ring: &dyn FusionRing, generators: &[IrrLabel], radius: u32, max_labels: usize) -> Result<LengthSpec> {
    if !ring.supports_fusion() {
        return Err(QgrdError::FusionUnsupported(ring.describe()));
    }
    for g in generators {
        ring.check(g)?;
        if *g == ring.unit() {
            return Err(QgrdError::InvalidParameter("generating set contains the unit".into()));
        }
        if !generators.contains(&ring.conjugate(g)?) {
            return Err(QgrdError::GeneratorsNotSelfConjugate);
        }
    }
    let mut entries = vec![(ring.unit(), 0.0, 0)];
    let mut seen: HashMap<IrrLabel, u32> = HashMap::from([(ring.unit(), 0)]);
    let mut sphere = vec![ring.unit()];
    for k in 1..=radius {
        let mut next = Vec::new();
        for s in &sphere {
            for g in generators {
                for (c, _) in ring.fuse(s, g)?.0 {
                    if !seen.contains_key(&c) {
                        seen.insert(c.clone(), k);
                        next.push(c);
                    }
                }
            }
        }
        if seen.len() > max_labels {
            return Err(QgrdError::Budget(format!("ball of radius {k} holds more than {max_labels} labels")));
        }
        entries.extend(next.iter().map(|c| (c.clone(), k as f64, k)));
        sphere = next;
    }
    Ok(LengthSpec::from_entries(entries, radius))
}

/// A failed length axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

fn violation(axiom: &str, detail: String) -> Violation {
    Violation { axiom: axiom.into(), detail }
}

/// Checks positivity, `l(1) = 0`, `l(ᾱ) = l(α)` and subadditivity over all fusion triples inside the spec.
pub fn validate_length(spec: &LengthSpec, ring: &dyn FusionRing) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    match spec.value(&ring.unit()) {
        Some(v) if v.abs() <= LENGTH_TOL => {}
        Some(v) => out.push(violation("unit", format!("unit length nonzero: {v}"))),
        None => out.push(violation("unit", "unit missing from the ball".into())),
    }
    for (a, v, _) in spec.iter() {
        if v.is_nan() || v < 0.0 {
            out.push(violation("positivity", format!("l({a}) = {v}")));
        }
        if let Some(w) = spec.value(&ring.conjugate(a)?) {
            if (v - w).abs() > LENGTH_TOL * v.abs().max(1.0) {
                out.push(violation("conjugation", format!("l({a}) = {v} but l(conjugate) = {w}")));
            }
        }
    }
    for (a, va, _) in spec.iter() {
        for (b, vb, _) in spec.iter() {
            for (c, _) in ring.constituents(b, a)?.0 {
                if let Some(vc) = spec.value(&c) {
                    if vc > va + vb + LENGTH_TOL * (va + vb).max(1.0) {
                        out.push(violation("subadditivity", format!("l({c}) = {vc} > l({b}) + l({a}) = {}", va + vb)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Per-bucket growth data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketStats {
    pub n: u32,
    /// `h_n = Σ m_α²` over the bucket, as `p/q`.
    #[serde(with = "rational_string")]
    pub weight: BigRational,
    pub count: u64,
    /// Largest quantum dimension in the bucket, as `p/q`.
    #[serde(with = "rational_string")]
    pub max_dim: BigRational,
}

/// Growth data on a ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub radius: u32,
    /// Buckets `0..=complete_through` are fully inside the ball.
    pub complete_through: u32,
    pub buckets: Vec<BucketStats>,
}

impl GrowthProfile {
    pub fn weights_f64(&self) -> Vec<f64> {
        self.buckets.iter().map(|b| b.weight.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    pub fn total_count(&self) -> u64 {
        self.buckets.iter().map(|b| b.count).sum()
    }
}

pub(crate) mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::fusion::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Exact `h_n`, `s_n`, `M_n` for buckets `0..=R`.
pub fn growth_profile(ring: &dyn FusionRing, spec: &LengthSpec) -> Result<GrowthProfile> {
    let r = spec.radius();
    let mut buckets: Vec<BucketStats> = (0..=r)
        .map(|n| BucketStats { n, weight: BigRational::zero(), count: 0, max_dim: BigRational::zero() })
        .collect();
    for (a, _, b) in spec.iter() {
        let Some(slot) = buckets.get_mut(b as usize) else { continue };
        let m = ring.qdim(a)?;
        slot.weight += &m * &m;
        slot.count += 1;
        if m > slot.max_dim {
            slot.max_dim = m;
        }
    }
    Ok(GrowthProfile { radius: r, complete_through: spec.complete_through(), buckets })
}

/// Outcome of [`classify_growth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GrowthClass {
    Polynomial { degree: u32 },
    Exponential { ratio: f64 },
    Indeterminate,
}

/// The numbers behind a classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub class: GrowthClass,
    /// Log-log slope of `h_n` against `n + 1` on the lower window.
    pub lower_slope: f64,
    /// Log-log slope on the upper window.
    pub upper_slope: f64,
    /// Geometric mean of `h_{n+1} / h_n` on the upper window.
    pub mean_ratio: f64,
    /// Geometric mean ratio after removing the lower-window power law.
    pub excess_ratio: f64,
    pub window: (u32, u32),
    pub threshold: f64,
}

/// Smallest radius [`classify_growth`] accepts.
pub const MIN_CLASSIFY_RADIUS: u32 = 12;

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Finite-sample growth rule on the complete buckets `0..=C`.
///
/// A power law `h_n ≈ c (n+1)^d` is fitted on `[C/4, C/2]` and divided out of the
/// consecutive ratios on the upper half `[C/2, C]`. The geometric mean `ε` of what
/// remains is `1 + o(1)` for polynomial growth and stays bounded away from one for
/// exponential growth. `ε ≤ 1 + θ` gives `Polynomial` with the upper-window slope
/// rounded; `ε ≥ 1 + 3θ` gives `Exponential` with the plain mean ratio.
pub fn classify_growth(profile: &GrowthProfile, theta: f64) -> Result<GrowthFit> {
    let c = profile.complete_through;
    if c < MIN_CLASSIFY_RADIUS {
        return Err(QgrdError::InsufficientRadius { radius: c, needed: MIN_CLASSIFY_RADIUS });
    }
    let h = profile.weights_f64();
    let window = (c / 2, c);
    if h[1..=c as usize].iter().all(|&x| x == 0.0) {
        return Ok(GrowthFit {
            class: GrowthClass::Polynomial { degree: 0 },
            lower_slope: 0.0,
            upper_slope: 0.0,
            mean_ratio: 1.0,
            excess_ratio: 1.0,
            window,
            threshold: theta,
        });
    }
    let pts = |lo: u32, hi: u32| -> Vec<(f64, f64)> {
        (lo..=hi).filter(|&n| h[n as usize] > 0.0).map(|n| (((n + 1) as f64).ln(), h[n as usize].ln())).collect()
    };
    let lower = pts(c / 4, c / 2);
    let upper = pts(c / 2, c);
    if lower.len() < 2 || upper.len() < 2 || (c / 2..c).any(|n| h[n as usize] == 0.0) {
        return Ok(GrowthFit {
            class: GrowthClass::Indeterminate,
            lower_slope: f64::NAN,
            upper_slope: f64::NAN,
            mean_ratio: f64::NAN,
            excess_ratio: f64::NAN,
            window,
            threshold: theta,
        });
    }
    let lower_slope = slope(&lower);
    let upper_slope = slope(&upper);
    let steps = (c - c / 2) as f64;
    let mut log_ratio = 0.0;
    let mut log_excess = 0.0;
    for n in c / 2..c {
        let lr = (h[n as usize + 1] / h[n as usize]).ln();
        log_ratio += lr;
        log_excess += lr - lower_slope * ((n + 2) as f64 / (n + 1) as f64).ln();
    }
    let mean_ratio = (log_ratio / steps).exp();
    let excess_ratio = (log_excess / steps).exp();
    let class = if excess_ratio <= 1.0 + theta {
        GrowthClass::Polynomial { degree: upper_slope.round().max(0.0) as u32 }
    } else if excess_ratio >= 1.0 + 3.0 * theta {
        GrowthClass::Exponential { ratio: mean_ratio }
    } else {
        GrowthClass::Indeterminate
    };
    Ok(GrowthFit { class, lower_slope, upper_slope, mean_ratio, excess_ratio, window, threshold: theta })
}

/// Bucket triples `(k, l, n)` such that bucket `n` meets `p_k ⊗ p_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSet {
    /// Largest bucket index covered.
    pub radius: u32,
    pub triples: BTreeSet<(u32, u32, u32)>,
}

impl TripleSet {
    pub fn contains(&self, k: u32, l: u32, n: u32) -> bool {
        self.triples.contains(&(k, l, n))
    }
}

/// Triples with `k, l, n` among the complete buckets of `spec`, from the ring's constituents.
pub fn triple_set(ring: &dyn FusionRing, spec: &LengthSpec) -> Result<TripleSet> {
    let c = spec.complete_through();
    let inner: Vec<(&IrrLabel, u32)> = spec.iter().filter(|e| e.2 <= c).map(|e| (e.0, e.2)).collect();
    let mut triples = BTreeSet::new();
    for &(b, k) in &inner {
        for &(a, l) in &inner {
            let mut seen = BTreeSet::new();
            for (g, _) in ring.constituents(b, a)?.0 {
                if let Some(n) = spec.bucket(&g) {
                    if n <= c && seen.insert(n) {
                        triples.insert((k, l, n));
                    }
                }
            }
        }
    }
    Ok(TripleSet { radius: c, triples })
}

fn permutations((k, l, n): (u32, u32, u32)) -> [(u32, u32, u32); 6] {
    [(k, l, n), (k, n, l), (l, k, n), (l, n, k), (n, k, l), (n, l, k)]
}

/// Triples violating `|k-l| - slack ≤ n ≤ k + l + slack`.
pub fn triangle_violations(ts: &TripleSet, slack: u32) -> Vec<(u32, u32, u32)> {
    ts.triples
        .iter()
        .copied()
        .filter(|&(k, l, n)| n + slack < k.abs_diff(l) || n > k + l + slack)
        .collect()
}

/// Triples whose permutations are not all present.
pub fn permutation_failures(ts: &TripleSet) -> Vec<(u32, u32, u32)> {
    ts.triples.iter().copied().filter(|&t| permutations(t).iter().any(|p| !ts.triples.contains(p))).collect()
}

/// Two-sided bound `|k-l| - 2 ≤ n ≤ k+l+2` together with permutation stability.
pub fn check_triangle_bounds(ts: &TripleSet) -> bool {
    triangle_violations(ts, 2).is_empty() && permutation_failures(ts).is_empty()
}

/// Estimate of the domination constant `ε` in `L_0 ≥ ε L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationEstimate {
    /// `min l_0(α) / l(α)` over the ball.
    pub epsilon: f64,
    pub argmin: Option<IrrLabel>,
    /// `1 / C` with `C = max { l(β) : l_0(β) ≤ 1 }`.
    pub proof_bound: f64,
}

/// Measures how well the word length `word` dominates `other` on their common ball.
pub fn dominate_epsilon(word: &LengthSpec, other: &LengthSpec) -> Result<DominationEstimate> {
    let mut epsilon = f64::INFINITY;
    let mut argmin = None;
    let mut c: f64 = 0.0;
    for (a, l0, _) in word.iter() {
        let Some(l) = other.value(a) else { continue };
        if l0 <= 1.0 {
            c = c.max(l);
        }
        if l == 0.0 {
            if l0 > 0.0 {
                return Err(QgrdError::DominationImpossible(format!("length vanishes at {a}")));
            }
            continue;
        }
        let r = l0 / l;
        if r < epsilon {
            epsilon = r;
            argmin = Some(a.clone());
        }
    }
    let proof_bound = if c > 0.0 { 1.0 / c } else { f64::INFINITY };
    Ok(DominationEstimate { epsilon, argmin, proof_bound })
}

/// `h_n ≤ C² (2+n)^{2s}` data for a polynomially growing profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub degree: u32,
    #[serde(with = "rational_string")]
    pub c_squared: BigRational,
}

impl GrowthBound {
    /// Smallest `C² ≥ 1` with `h_n ≤ C² (2+n)^d` on every bucket.
    pub fn fit(profile: &GrowthProfile, degree: u32) -> Self {
        let mut c2 = BigRational::from_integer(BigInt::from(1));
        for b in &profile.buckets {
            let base = BigRational::from_integer(BigInt::from(2 + b.n).pow(degree));
            let r = &b.weight / base;
            if r > c2 {
                c2 = r;
            }
        }
        GrowthBound { degree, c_squared: c2 }
    }

    pub fn holds(&self, profile: &GrowthProfile) -> bool {
        profile
            .buckets
            .iter()
            .all(|b| b.weight <= &self.c_squared * BigRational::from_integer(BigInt::from(2 + b.n).pow(self.degree)))
    }
}
