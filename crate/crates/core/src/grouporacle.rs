//! Exact model of the dual of a free group `F_g`: Cayley balls, finitely supported kernels,
//! convolution blocks and the commutator with the word-length operator.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{QgrdError, Result};
use crate::fusion::{invert_word, reduce_word, FreeGroupDual, FusionRing, IrrLabel};
use crate::linalg::spectral_norm;

/// Default generator count and radius of the oracle.
pub const DEFAULT_GENERATORS: u32 = 2;
pub const DEFAULT_RADIUS: u32 = 5;

/// Reduced words of length at most `radius`, grouped into spheres.
#[derive(Debug, Clone)]
pub struct Ball {
    g: u32,
    radius: u32,
    words: Vec<Vec<i32>>,
    spheres: Vec<Range<usize>>,
    index: HashMap<Vec<i32>, usize>,
}

/// Enumerates the ball of radius `radius` in `F_g`, refusing more than `max_words` words.
pub fn enumerate_ball(g: u32, radius: u32, max_words: usize) -> Result<Ball> {
    let mut dual = FreeGroupDual::new(g)?;
    dual.max_ball = max_words;
    let words: Vec<Vec<i32>> = dual
        .enumerate_irreps(radius)?
        .into_iter()
        .map(|l| match l {
            IrrLabel::FreeWord(w) => w,
            _ => unreachable!(),
        })
        .collect();
    let mut spheres = Vec::with_capacity(radius as usize + 1);
    let mut start = 0;
    for n in 0..=radius as usize {
        let end = words[start..]
            .iter()
            .position(|w| w.len() > n)
            .map_or(words.len(), |p| start + p);
        spheres.push(start..end);
        start = end;
    }
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    Ok(Ball { g, radius, words, spheres, index })
}

impl Ball {
    pub fn generators(&self) -> u32 {
        self.g
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<i32>] {
        &self.words
    }

    pub fn sphere(&self, n: u32) -> &[Vec<i32>] {
        &self.words[self.spheres[n as usize].clone()]
    }

    pub fn sphere_range(&self, n: u32) -> Range<usize> {
        self.spheres[n as usize].clone()
    }

    /// Words of length at most `r`.
    pub fn sub_ball(&self, r: u32) -> &[Vec<i32>] {
        &self.words[..self.spheres[r.min(self.radius) as usize].end]
    }

    pub fn index_of(&self, w: &[i32]) -> Option<usize> {
        self.index.get(w).copied()
    }

    fn need(&self, r: u32) -> Result<()> {
        if r > self.radius {
            return Err(QgrdError::InsufficientRadius { radius: self.radius, needed: r });
        }
        Ok(())
    }
}

/// Finitely supported function on `F_g` with exact rational values. Zero values are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Kernel {
    values: BTreeMap<Vec<i32>, BigRational>,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Kernel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(w: &[i32]) -> Self {
        let mut k = Kernel::new();
        k.add(w, int(1));
        k
    }

    /// Indicator of a set of words.
    pub fn indicator<'a>(words: impl IntoIterator<Item = &'a Vec<i32>>) -> Self {
        let mut k = Kernel::new();
        for w in words {
            k.insert(w, int(1));
        }
        k
    }

    /// Sets the value at the reduction of `w`.
    pub fn insert(&mut self, w: &[i32], v: BigRational) {
        let w = reduce_word(w);
        if v.is_zero() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
    }

    /// Adds `v` to the value at the reduction of `w`.
    pub fn add(&mut self, w: &[i32], v: BigRational) {
        let w = reduce_word(w);
        let next = self.values.get(&w).cloned().unwrap_or_else(BigRational::zero) + v;
        if next.is_zero() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, next);
        }
    }

    pub fn get(&self, w: &[i32]) -> BigRational {
        self.values.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i32>, &BigRational)> {
        self.values.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest word length in the support, zero for the empty kernel.
    pub fn support_length(&self) -> u32 {
        self.values.keys().map(|w| w.len() as u32).max().unwrap_or(0)
    }

    pub fn is_positive(&self) -> bool {
        self.values.values().all(|v| v.is_positive())
    }

    /// True when every support word has length exactly `n`.
    pub fn on_sphere(&self, n: u32) -> bool {
        self.values.keys().all(|w| w.len() as u32 == n)
    }

    pub fn l2_squared(&self) -> BigRational {
        self.sobolev_squared(0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0)
    }

    /// `Σ (1 + |w|)^{2s} a(w)²`.
    pub fn sobolev_squared(&self, s: u32) -> BigRational {
        self.values
            .iter()
            .map(|(w, v)| int(1 + w.len() as i64).pow(2 * s as i32) * v * v)
            .sum()
    }

    /// `‖(1 + L)^s a‖₂`.
    pub fn sobolev_norm(&self, s: u32) -> f64 {
        self.sobolev_squared(s).to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// `(shift + L)^t a`: multiplies `a(w)` by `(shift + |w|)^t`.
    pub fn length_weighted(&self, shift: u32, t: u32) -> Kernel {
        let mut out = Kernel::new();
        for (w, v) in &self.values {
            out.insert(w, int(shift as i64 + w.len() as i64).pow(t as i32) * v);
        }
        out
    }

    /// `(a * b)(w) = Σ_{uv = w} a(u) b(v)`, so that `λ(a)λ(b) = λ(a * b)`.
    pub fn convolve(&self, other: &Kernel) -> Kernel {
        let mut out = Kernel::new();
        for (u, x) in &self.values {
            for (v, y) in &other.values {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add(&w, x * y);
            }
        }
        out
    }

    /// Values drawn uniformly from `-max..=max` (or `0..=max` when not signed) on every word of `words`.
    pub fn random<R: Rng>(words: &[Vec<i32>], max: i64, signed: bool, rng: &mut R) -> Kernel {
        let lo = if signed { -max } else { 0 };
        let mut k = Kernel::new();
        for w in words {
            k.insert(w, int(rng.random_range(lo..=max)));
        }
        k
    }
}

/// Dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn scaled(&self, c: &BigRational) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(QgrdError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(k, c);
                    if !y.is_zero() {
                        out.data[r * other.cols + c] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.shape() != other.shape() {
            return Err(QgrdError::Shape(format!("{:?} plus {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// `M*M`.
    pub fn gram(&self) -> ExactMatrix {
        self.transpose().mul(self).expect("shapes agree")
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).to_f64().unwrap_or(f64::NAN))
    }

    /// Operator norm; exact entries, floating-point singular values.
    pub fn operator_norm(&self) -> f64 {
        spectral_norm(&self.to_f64())
    }
}

/// `M[w_l, w_k] = a(w_l w_k⁻¹)` over `S_l × S_k`, for any kernel.
pub fn block_matrix(ball: &Ball, a: &Kernel, k: u32, l: u32) -> Result<ExactMatrix> {
    ball.need(k.max(l))?;
    let (rows, cols) = (ball.sphere_range(l), ball.sphere_range(k));
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (c, wk) in ball.sphere(k).iter().enumerate() {
        for (s, v) in a.iter() {
            let mut w = s.clone();
            w.extend_from_slice(wk);
            let w = reduce_word(&w);
            if w.len() as u32 == l {
                let r = ball.index_of(&w).expect("sphere word in ball") - rows.start;
                m.data[r * m.cols + c] += v;
            }
        }
    }
    Ok(m)
}

/// The block `p_l λ(a) p_k` of a kernel supported on the sphere `S_n`.
pub fn block_conv_matrix(ball: &Ball, a: &Kernel, n: u32, k: u32, l: u32) -> Result<ExactMatrix> {
    if !a.on_sphere(n) {
        return Err(QgrdError::SupportOutsideSphere(n as usize));
    }
    block_matrix(ball, a, k, l)
}

/// Result of [`haagerup_check`].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HaagerupReport {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    /// `‖p_l λ(1_{S_n}) p_k‖ / ‖1_{S_n}‖₂`.
    pub indicator_ratio: f64,
    /// Largest ratio over the random kernels and the indicator.
    pub max_ratio: f64,
    pub trials: usize,
}

/// Largest `‖p_l λ(a) p_k‖ / ‖a‖₂` over `trials` random signed kernels on `S_n` and the sphere indicator.
pub fn haagerup_check<R: Rng>(ball: &Ball, n: u32, k: u32, l: u32, trials: usize, rng: &mut R) -> Result<HaagerupReport> {
    ball.need(n.max(k).max(l))?;
    let ratio = |a: &Kernel| -> Result<f64> {
        let m = block_conv_matrix(ball, a, n, k, l)?;
        let norm = a.l2_norm();
        Ok(if norm == 0.0 || m.is_zero() { 0.0 } else { m.operator_norm() / norm })
    };
    let indicator_ratio = ratio(&Kernel::indicator(ball.sphere(n)))?;
    let mut max_ratio = indicator_ratio;
    for _ in 0..trials {
        let a = Kernel::random(ball.sphere(n), 9, true, rng);
        max_ratio = max_ratio.max(ratio(&a)?);
    }
    Ok(HaagerupReport { n, k, l, indicator_ratio, max_ratio, trials })
}

fn checked_margin(ball: &Ball, a: &Kernel, r_in: u32) -> Result<()> {
    let needed = r_in + a.support_length();
    if needed > ball.radius {
        return Err(QgrdError::Margin(format!(
            "inputs in ball {r_in} and support length {} need radius {needed}, ball has {}",
            a.support_length(),
            ball.radius
        )));
    }
    Ok(())
}

fn truncated<F>(ball: &Ball, a: &Kernel, r_in: u32, entry: F) -> Result<ExactMatrix>
where
    F: Fn(&BigRational, usize, usize) -> BigRational,
{
    checked_margin(ball, a, r_in)?;
    let cols = ball.sub_ball(r_in).len();
    let mut m = ExactMatrix::zeros(ball.len(), cols);
    for (c, w) in ball.sub_ball(r_in).iter().enumerate() {
        for (s, v) in a.iter() {
            let mut x = s.clone();
            x.extend_from_slice(w);
            let x = reduce_word(&x);
            let r = ball.index_of(&x).expect("margin keeps products in the ball");
            let e = entry(v, x.len(), w.len());
            m.data[r * cols + c] += e;
        }
    }
    Ok(m)
}

/// `λ(a)` from `ℓ²(ball R_in)` into `ℓ²(ball R)`: entry `(w′, w)` is `a(w′w⁻¹)`.
pub fn conv_matrix(ball: &Ball, a: &Kernel, r_in: u32) -> Result<ExactMatrix> {
    truncated(ball, a, r_in, |v, _, _| v.clone())
}

/// `D^k(λ(a))` with `D = [L, ·]`: entry `(w′, w)` is `a(w′w⁻¹)(l(w′) − l(w))^k`.
pub fn derivation_power(ball: &Ball, a: &Kernel, r_in: u32, k: u32) -> Result<ExactMatrix> {
    truncated(ball, a, r_in, |v, lw2, lw| int(lw2 as i64 - lw as i64).pow(k as i32) * v)
}

/// `[L, λ(a)]` on the truncation, see [`derivation_power`].
pub fn derivation_matrix(ball: &Ball, a: &Kernel, r_in: u32) -> Result<ExactMatrix> {
    derivation_power(ball, a, r_in, 1)
}

/// Diagonal word-length operator on the first `count` words of the ball.
pub fn length_diagonal(ball: &Ball, count: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(count, count);
    for (i, w) in ball.words()[..count].iter().enumerate() {
        m.set(i, i, int(w.len() as i64));
    }
    m
}

/// Inverse of a word, reduced.
pub fn word_inverse(w: &[i32]) -> Vec<i32> {
    reduce_word(&invert_word(w))
}
