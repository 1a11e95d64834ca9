use serde::Serialize;

use crate::error::{QgrdError, Result};
use crate::grouporacle::{conv_matrix, derivation_power, Ball, Kernel};

/// Slack added to the right-hand side before comparing.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// Both sides of a checked inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, ok: lhs <= rhs + INEQUALITY_SLACK }
    }
}

fn product(kernels: &[Kernel]) -> Kernel {
    let mut it = kernels.iter();
    let first = it.next().cloned().unwrap_or_else(|| Kernel::delta(&[]));
    it.fold(first, |acc, k| acc.convolve(k))
}

/// `‖F(a₁)⋯F(a_m)‖_{2,s+t} ≤ m^t Σᵢ ‖F(a₁)⋯F((1+L)^t aᵢ)⋯F(a_m)‖_{2,s}` for positive kernels,
/// computed exactly on products of convolution kernels.
pub fn laff_inequality_check(kernels: &[Kernel], s: u32, t: u32) -> Result<InequalityCheck> {
    if kernels.is_empty() {
        return Err(QgrdError::InvalidParameter("no kernels".into()));
    }
    if !kernels.iter().all(Kernel::is_positive) {
        return Err(QgrdError::NonPositiveKernel);
    }
    let lhs = product(kernels).sobolev_norm(s + t);
    let mut sum = 0.0;
    for i in 0..kernels.len() {
        let mut factors = kernels.to_vec();
        factors[i] = factors[i].length_weighted(1, t);
        sum += product(&factors).sobolev_norm(s);
    }
    let m = kernels.len() as f64;
    Ok(InequalityCheck::new(lhs, m.powi(t as i32) * sum))
}

/// RD constant at exponent `t` implied by a block bound `P` on spheres up to `radius`:
/// `(Σ_{n ≤ radius} ((2n+5) P)² (1+n)^{−2t})^{1/2}`.
pub fn rd_constant(block_bound: f64, t: u32, radius: u32) -> f64 {
    (0..=radius)
        .map(|n| {
            let n = n as f64;
            ((2.0 * n + 5.0) * block_bound).powi(2) * (1.0 + n).powi(-2 * t as i32)
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖â b̂‖_{2,t} ≤ 2^{t+3} C ‖â‖_{2,t} ‖b̂‖_{2,t}` with `âb̂ = F(a * b)`.
pub fn banach_submult_check(a: &Kernel, b: &Kernel, t: u32, c: f64) -> InequalityCheck {
    let lhs = a.convolve(b).sobolev_norm(t);
    let rhs = 2f64.powi(t as i32 + 3) * c * a.sobolev_norm(t) * b.sobolev_norm(t);
    InequalityCheck::new(lhs, rhs)
}

/// `‖D^k(F a)‖ ≤ 2 ‖F(L^k a)‖` on the truncation from ball `r_in` into the whole ball.
pub fn derivation_norm_check(ball: &Ball, a: &Kernel, k: u32, r_in: u32) -> Result<InequalityCheck> {
    let lhs = derivation_power(ball, a, r_in, k)?.operator_norm();
    let rhs = 2.0 * conv_matrix(ball, &a.length_weighted(0, k), r_in)?.operator_norm();
    Ok(InequalityCheck::new(lhs, rhs))
}
