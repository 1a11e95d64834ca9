#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, FusionOutcome, FusionRing, IrrLabel};
use crate::error::{QgrdError, Result};

/// Root system of a compact connected semisimple Lie group, in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RootData {
    pub name: String,
    /// `A[i][j] = 2(α_i, α_j) / (α_j, α_j)`; row `i` is `α_i` in weight coordinates.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub positive_roots_simple: Vec<Vec<i64>>,
    /// Positive roots in weight coordinates, same order.
    pub positive_roots: Vec<Vec<i64>>,
    /// Half-lengths `(α_i, α_i) / 2` of the simple roots, shortest equal to one.
    pub root_norms: Vec<BigRational>,
    /// Gram matrix of the fundamental weights, scaled so that `(ω_1, ω_1) = 1`.
    pub gram: Vec<Vec<BigRational>>,
}

impl RootData {
    pub fn from_cartan(name: &str, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let r = cartan.len();
        let bad = |m: &str| QgrdError::InvalidParameter(format!("Cartan matrix of {name}: {m}"));
        if r == 0 || cartan.iter().any(|row| row.len() != r) {
            return Err(bad("not square"));
        }
        for i in 0..r {
            for j in 0..r {
                let (a, b) = (cartan[i][j], cartan[j][i]);
                if i == j && a != 2 || i != j && (a > 0 || (a == 0) != (b == 0)) {
                    return Err(bad("not a generalized Cartan matrix"));
                }
            }
        }
        let root_norms = symmetrizer(&cartan).ok_or_else(|| bad("not symmetrizable"))?;
        let inv = invert(&cartan).ok_or_else(|| bad("singular"))?;
        let mut gram = vec![vec![BigRational::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                gram[i][j] = &inv[i][j] * &root_norms[j];
            }
        }
        let scale = gram[0][0].clone();
        if !scale.is_positive() {
            return Err(bad("not of finite type"));
        }
        for row in gram.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x / &scale;
            }
        }
        if !positive_definite(&gram) {
            return Err(bad("not of finite type"));
        }
        let positive_roots_simple = positive_roots(&cartan).ok_or_else(|| bad("infinite root system"))?;
        let positive_roots = positive_roots_simple.iter().map(|c| simple_to_weight(&cartan, c)).collect();
        Ok(RootData {
            name: name.to_string(),
            cartan,
            positive_roots_simple,
            positive_roots,
            root_norms,
            gram,
        })
    }

    /// Parses `SU(n)`, `SO(n)`, `Sp(2n)`, `G2` or a Cartan type such as `A2`, `B3`, `C2`, `D4`.
    pub fn named(group: &str) -> Result<Self> {
        let g = group.trim();
        let bad = || QgrdError::InvalidParameter(format!("unknown group {g:?}"));
        let paren = |prefix: &str| -> Option<usize> { g.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok() };
        let (kind, rank) = if let Some(n) = paren("SU(") {
            ('A', n.checked_sub(1).ok_or_else(bad)?)
        } else if let Some(n) = paren("SO(") {
            if n % 2 == 1 {
                ('B', n / 2)
            } else {
                ('D', n / 2)
            }
        } else if let Some(n) = paren("Sp(") {
            if n % 2 != 0 {
                return Err(bad());
            }
            ('C', n / 2)
        } else {
            let mut cs = g.chars();
            let kind = cs.next().ok_or_else(bad)?;
            (kind, cs.as_str().parse().map_err(|_| bad())?)
        };
        let cartan = cartan_matrix(kind, rank).ok_or_else(bad)?;
        Self::from_cartan(g, cartan)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// `ρ` in weight coordinates: all ones.
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank()]
    }

    /// `(λ, α)` for `λ` in weight coordinates and `α` in simple-root coordinates, unscaled.
    fn pair(&self, weight: &[i64], root_simple: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for k in 0..self.rank() {
            s += &self.root_norms[k] * rat(weight[k] * root_simple[k]);
        }
        s
    }

    /// `(λ, μ)` with the scaled Gram matrix.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if a[i] != 0 && b[j] != 0 {
                    s += &self.gram[i][j] * rat(a[i] * b[j]);
                }
            }
        }
        s
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        w.len() == self.rank() && w.iter().all(|&x| x >= 0)
    }

    /// Weyl's product formula `Π (λ+ρ, α) / (ρ, α)` over positive roots.
    pub fn weyl_dimension(&self, lambda: &[i64]) -> Result<BigInt> {
        if !self.is_dominant(lambda) {
            return Err(QgrdError::NotDominant(format!("{lambda:?}")));
        }
        let rho = self.rho();
        let shifted: Vec<i64> = lambda.iter().map(|x| x + 1).collect();
        let mut d = BigRational::one();
        for a in &self.positive_roots_simple {
            d *= self.pair(&shifted, a) / self.pair(&rho, a);
        }
        if !d.is_integer() {
            return Err(QgrdError::Consistency(format!("Weyl formula gave {d}")));
        }
        Ok(d.to_integer())
    }

    fn reflect(&self, w: &mut [i64], i: usize) {
        let c = w[i];
        for (x, a) in w.iter_mut().zip(&self.cartan[i]) {
            *x -= c * a;
        }
    }

    /// Dominant representative of the Weyl orbit, with the parity of the number of reflections used.
    pub fn dominant_rep(&self, w: &[i64]) -> (Vec<i64>, bool) {
        let mut v = w.to_vec();
        let mut odd = false;
        while let Some(i) = v.iter().position(|&x| x < 0) {
            self.reflect(&mut v, i);
            odd = !odd;
        }
        (v, odd)
    }

    pub fn orbit(&self, w: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::from([w.to_vec()]);
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                if v[i] != 0 {
                    let mut u = v.clone();
                    self.reflect(&mut u, i);
                    if seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Multiplicities of the dominant weights of `V(λ)` by Freudenthal's formula.
    pub fn dominant_multiplicities(&self, lambda: &[i64]) -> Result<BTreeMap<Vec<i64>, u64>> {
        if !self.is_dominant(lambda) {
            return Err(QgrdError::NotDominant(format!("{lambda:?}")));
        }
        // Dominant weights below λ, reached by subtracting positive roots, with their depth.
        let mut depth: HashMap<Vec<i64>, i64> = HashMap::from([(lambda.to_vec(), 0)]);
        let mut queue = VecDeque::from([lambda.to_vec()]);
        while let Some(mu) = queue.pop_front() {
            let h = depth[&mu];
            for (a, a_simple) in self.positive_roots.iter().zip(&self.positive_roots_simple) {
                let nu: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x - y).collect();
                if self.is_dominant(&nu) && !depth.contains_key(&nu) {
                    depth.insert(nu.clone(), h + a_simple.iter().sum::<i64>());
                    queue.push_back(nu);
                }
            }
        }
        let mut order: Vec<(i64, Vec<i64>)> = depth.into_iter().map(|(w, h)| (h, w)).collect();
        order.sort();
        let shift = |w: &[i64]| -> Vec<i64> { w.iter().map(|x| x + 1).collect() };
        let top = self.inner(&shift(lambda), &shift(lambda));
        let mut mult: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        mult.insert(lambda.to_vec(), 1);
        for (_, mu) in order.into_iter().skip(1) {
            let denom = &top - self.inner(&shift(&mu), &shift(&mu));
            let mut sum = BigRational::zero();
            for a in &self.positive_roots {
                let mut nu = mu.clone();
                loop {
                    for (x, y) in nu.iter_mut().zip(a) {
                        *x += y;
                    }
                    let m = match mult.get(&self.dominant_rep(&nu).0) {
                        Some(&m) => m,
                        None => break,
                    };
                    sum += self.inner(&nu, a) * rat(m as i64);
                }
            }
            let m = sum * rat(2) / denom;
            if !m.is_integer() || m.is_negative() {
                return Err(QgrdError::Consistency(format!("Freudenthal multiplicity {m} at {mu:?}")));
            }
            let m = m.to_integer().to_u64().unwrap_or(0);
            if m > 0 {
                mult.insert(mu, m);
            }
        }
        Ok(mult)
    }

    /// All weights of `V(λ)` with multiplicities.
    pub fn weights(&self, lambda: &[i64]) -> Result<Vec<(Vec<i64>, u64)>> {
        let mut out = Vec::new();
        for (mu, m) in self.dominant_multiplicities(lambda)? {
            out.extend(self.orbit(&mu).into_iter().map(|w| (w, m)));
        }
        Ok(out)
    }

    /// Decomposition of `V(λ) ⊗ V(μ)` by the Brauer-Klimyk rule.
    pub fn tensor_decompose(&self, lambda: &[i64], mu: &[i64]) -> Result<BTreeMap<Vec<i64>, u64>> {
        if !self.is_dominant(mu) {
            return Err(QgrdError::NotDominant(format!("{mu:?}")));
        }
        let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (nu, m) in self.weights(lambda)? {
            let x: Vec<i64> = nu.iter().zip(mu).map(|(a, b)| a + b + 1).collect();
            let (y, odd) = self.dominant_rep(&x);
            if y.contains(&0) {
                continue;
            }
            let key: Vec<i64> = y.iter().map(|v| v - 1).collect();
            *acc.entry(key).or_insert(0) += if odd { -(m as i64) } else { m as i64 };
        }
        let mut out = BTreeMap::new();
        for (k, v) in acc {
            if v < 0 {
                return Err(QgrdError::Consistency(format!("negative multiplicity at {k:?}")));
            }
            if v > 0 {
                out.insert(k, v as u64);
            }
        }
        Ok(out)
    }
}

fn cartan_matrix(kind: char, rank: usize) -> Option<Vec<Vec<i64>>> {
    let min_rank = match kind {
        'A' | 'B' | 'C' => 1,
        'D' => 3,
        'G' => 2,
        _ => return None,
    };
    if rank < min_rank || kind == 'G' && rank != 2 {
        return None;
    }
    let mut a = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
        if i + 1 < rank {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match kind {
        'B' if rank >= 2 => a[rank - 2][rank - 1] = -2,
        'C' if rank >= 2 => a[rank - 1][rank - 2] = -2,
        'D' => {
            a[rank - 2][rank - 1] = 0;
            a[rank - 1][rank - 2] = 0;
            a[rank - 3][rank - 1] = -1;
            a[rank - 1][rank - 3] = -1;
        }
        'G' => a[1][0] = -3,
        _ => {}
    }
    Some(a)
}

/// `d_i` with `A[i][j] d_j = A[j][i] d_i`, the minimum scaled to one.
fn symmetrizer(a: &[Vec<i64>]) -> Option<Vec<BigRational>> {
    let r = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(BigRational::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if i != j && a[i][j] != 0 {
                    let dj = d[i].clone().unwrap() * rat(a[j][i]) / rat(a[i][j]);
                    match &d[j] {
                        Some(x) if *x != dj => return None,
                        Some(_) => {}
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    let min = d.iter().min().cloned()?;
    Some(d.into_iter().map(|x| x / &min).collect())
}

fn invert(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let r = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<BigRational> = row.iter().map(|&x| rat(x)).collect();
            v.extend((0..r).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            v
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..r {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[r..].to_vec()).collect())
}

// Sylvester's criterion.
fn positive_definite(g: &[Vec<BigRational>]) -> bool {
    let r = g.len();
    let mut m = g.to_vec();
    for c in 0..r {
        if !m[c][c].is_positive() {
            return false;
        }
        for i in c + 1..r {
            let f = &m[i][c] / &m[c][c];
            for j in c..r {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    true
}

fn simple_to_weight(a: &[Vec<i64>], c: &[i64]) -> Vec<i64> {
    (0..a.len()).map(|j| (0..a.len()).map(|k| c[k] * a[k][j]).sum()).collect()
}

/// Positive roots by root strings, level by level in height.
fn positive_roots(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let r = a.len();
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut level: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut out = Vec::new();
    while !level.is_empty() {
        if out.len() > 10_000 {
            return None;
        }
        level.sort();
        for b in &level {
            all.insert(b.clone());
        }
        let mut next = BTreeSet::new();
        for b in &level {
            let w = simple_to_weight(a, b);
            for i in 0..r {
                let mut p = 0;
                let mut down = b.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - w[i] > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        out.append(&mut level);
        level = next.into_iter().collect();
    }
    Some(out)
}

/// Dual of a compact connected semisimple Lie group; irreducibles are dominant weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactLieDual {
    pub roots: RootData,
    /// Largest box the enumeration may scan.
    pub max_box: u128,
}

impl CompactLieDual {
    pub fn new(roots: RootData) -> Self {
        CompactLieDual { roots, max_box: 5_000_000 }
    }

    fn weight(&self, label: &IrrLabel) -> Result<Vec<i64>> {
        self.check(label)?;
        match label {
            IrrLabel::Weight(w) => Ok(w.iter().map(|&x| x as i64).collect()),
            _ => unreachable!(),
        }
    }

    fn label(w: &[i64]) -> IrrLabel {
        IrrLabel::Weight(w.iter().map(|&x| x as u32).collect())
    }

    /// Exact `‖λ‖²`.
    pub fn norm_squared(&self, label: &IrrLabel) -> Result<BigRational> {
        let w = self.weight(label)?;
        Ok(self.roots.inner(&w, &w))
    }

    /// `V(λ) ⊗ V(μ)` decomposed by the Brauer-Klimyk rule.
    pub fn decompose(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        let (b, a) = (self.weight(beta)?, self.weight(alpha)?);
        // Expand the smaller representation into weights.
        let (small, large) = if self.roots.weyl_dimension(&b)? <= self.roots.weyl_dimension(&a)? { (b, a) } else { (a, b) };
        let d = self.roots.tensor_decompose(&small, &large)?;
        Ok(FusionOutcome(d.into_iter().map(|(w, m)| (Self::label(&w), m)).collect()))
    }
}

fn floor_sqrt(x: &BigRational) -> u32 {
    let (p, q) = (x.numer(), x.denom());
    let s = (p * q).sqrt() / q;
    s.to_u32().unwrap_or(u32::MAX)
}

impl FusionRing for CompactLieDual {
    fn family(&self) -> &str {
        "compact-lie"
    }

    fn describe(&self) -> String {
        format!("compact-lie({})", self.roots.name)
    }

    fn contains(&self, label: &IrrLabel) -> bool {
        matches!(label, IrrLabel::Weight(w) if w.len() == self.roots.rank())
    }

    fn unit(&self) -> IrrLabel {
        IrrLabel::Weight(vec![0; self.roots.rank()])
    }

    fn fuse(&self, _beta: &IrrLabel, _alpha: &IrrLabel) -> Result<FusionOutcome> {
        Err(QgrdError::FusionUnsupported(self.describe()))
    }

    fn constituents(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        self.decompose(beta, alpha)
    }

    fn supports_fusion(&self) -> bool {
        false
    }

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel> {
        let w: Vec<i64> = self.weight(label)?.iter().map(|x| -x).collect();
        Ok(Self::label(&self.roots.dominant_rep(&w).0))
    }

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt> {
        self.roots.weyl_dimension(&self.weight(label)?)
    }

    fn qdim(&self, label: &IrrLabel) -> Result<BigRational> {
        Ok(BigRational::from_integer(self.classical_dim(label)?))
    }

    fn generators(&self) -> Vec<IrrLabel> {
        let r = self.roots.rank();
        let mut out: BTreeSet<IrrLabel> = BTreeSet::new();
        for i in 0..r {
            let mut w = vec![0u32; r];
            w[i] = 1;
            let l = IrrLabel::Weight(w);
            out.insert(self.conjugate(&l).expect("fundamental weight"));
            out.insert(l);
        }
        out.into_iter().collect()
    }

    /// Box scan `λ_i ≤ R / ‖ω_i‖`, kept when `‖λ‖ ≤ R`; sorted by norm, then lexicographically.
    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>> {
        let r = self.roots.rank();
        let r2 = rat(radius as i64 * radius as i64);
        let bounds: Vec<i64> = (0..r).map(|i| floor_sqrt(&(&r2 / &self.roots.gram[i][i])) as i64).collect();
        let size: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
        if size > self.max_box {
            return Err(QgrdError::Budget(format!("weight box of {size} points at radius {radius}")));
        }
        let mut out = Vec::new();
        let mut w = vec![0i64; r];
        loop {
            let n2 = self.roots.inner(&w, &w);
            if n2 <= r2 {
                out.push((n2, Self::label(&w)));
            }
            let mut i = 0;
            while i < r && w[i] == bounds[i] {
                w[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            w[i] += 1;
        }
        out.sort();
        Ok(out.into_iter().map(|(_, l)| l).collect())
    }

    fn natural_length(&self, label: &IrrLabel) -> Result<f64> {
        Ok(self.norm_squared(label)?.to_f64().unwrap_or(f64::INFINITY).sqrt())
    }

    fn bucket(&self, label: &IrrLabel) -> Result<u32> {
        Ok(floor_sqrt(&self.norm_squared(label)?))
    }
}
