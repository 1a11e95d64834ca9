use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{FusionOutcome, FusionRing, IrrLabel};
use crate::error::{QgrdError, Result};

/// `|k-n|, |k-n|+2, …, k+n`, each once.
fn spin_fusion(k: u32, n: u32) -> FusionOutcome {
    let lo = k.abs_diff(n);
    FusionOutcome((lo..=k + n).step_by(2).map(|l| (IrrLabel::Spin(l), 1)).collect())
}

fn spin(ring: &dyn FusionRing, label: &IrrLabel) -> Result<u32> {
    ring.check(label)?;
    match label {
        IrrLabel::Spin(n) => Ok(*n),
        _ => unreachable!(),
    }
}

/// Dual of `A_o(N)` with `Q = I_N`: SU(2) fusion rules, dimensions `m_{n+1} = N m_n - m_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalFree {
    pub strand_dim: u32,
}

impl OrthogonalFree {
    pub fn new(strand_dim: u32) -> Result<Self> {
        if strand_dim < 3 {
            return Err(QgrdError::InvalidParameter(format!("N = {strand_dim} must be at least 3")));
        }
        Ok(OrthogonalFree { strand_dim })
    }

    /// `m_0, …, m_n` from the recursion, starting at `m_0 = 1`, `m_1 = N`.
    pub fn dims(&self, n: u32) -> Vec<BigInt> {
        let nn = BigInt::from(self.strand_dim);
        let mut out = vec![BigInt::one()];
        if n >= 1 {
            out.push(nn.clone());
        }
        for j in 2..=n as usize {
            let next = &nn * &out[j - 1] - &out[j - 2];
            out.push(next);
        }
        out
    }

    /// `m_n` with the convention `m_{-1} = 0`.
    pub fn dim_signed(&self, n: i64) -> BigInt {
        if n < 0 {
            BigInt::zero()
        } else {
            self.dims(n as u32).pop().unwrap()
        }
    }
}

impl FusionRing for OrthogonalFree {
    fn family(&self) -> &str {
        "orthogonal-free"
    }

    fn describe(&self) -> String {
        format!("orthogonal-free(N={})", self.strand_dim)
    }

    fn contains(&self, label: &IrrLabel) -> bool {
        matches!(label, IrrLabel::Spin(_))
    }

    fn unit(&self) -> IrrLabel {
        IrrLabel::Spin(0)
    }

    fn fuse(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        Ok(spin_fusion(spin(self, beta)?, spin(self, alpha)?))
    }

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel> {
        self.check(label)?;
        Ok(label.clone())
    }

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt> {
        Ok(self.dim_signed(spin(self, label)? as i64))
    }

    fn qdim(&self, label: &IrrLabel) -> Result<BigRational> {
        Ok(BigRational::from_integer(self.classical_dim(label)?))
    }

    fn generators(&self) -> Vec<IrrLabel> {
        vec![IrrLabel::Spin(1)]
    }

    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>> {
        Ok((0..=radius).map(IrrLabel::Spin).collect())
    }

    fn natural_length(&self, label: &IrrLabel) -> Result<f64> {
        Ok(spin(self, label)? as f64)
    }
}

/// Dual of `SU_q(2)` for rational `0 < q < 1`: SU(2) fusion rules, `p_n F` with spectrum `q^{-n}, q^{-n+2}, …, q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUq2Dual {
    pub q: BigRational,
}

impl SUq2Dual {
    pub fn new(q: BigRational) -> Result<Self> {
        if q <= BigRational::zero() || q >= BigRational::one() {
            return Err(QgrdError::InvalidParameter(format!("q = {q} must lie strictly between 0 and 1")));
        }
        Ok(SUq2Dual { q })
    }

    fn qpow(&self, e: i64) -> BigRational {
        if e >= 0 {
            Pow::pow(&self.q, e as u64)
        } else {
            Pow::pow(&self.q.recip(), e.unsigned_abs())
        }
    }
}

impl FusionRing for SUq2Dual {
    fn family(&self) -> &str {
        "suq2"
    }

    fn describe(&self) -> String {
        format!("suq2(q={})", self.q)
    }

    fn contains(&self, label: &IrrLabel) -> bool {
        matches!(label, IrrLabel::Spin(_))
    }

    fn unit(&self) -> IrrLabel {
        IrrLabel::Spin(0)
    }

    fn fuse(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        Ok(spin_fusion(spin(self, beta)?, spin(self, alpha)?))
    }

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel> {
        self.check(label)?;
        Ok(label.clone())
    }

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt> {
        Ok(BigInt::from(spin(self, label)?) + 1)
    }

    /// The q-integer `[n+1]_q`.
    fn qdim(&self, label: &IrrLabel) -> Result<BigRational> {
        Ok(self.modular_eigenvalues(label)?.into_iter().sum())
    }

    fn modular_eigenvalues(&self, label: &IrrLabel) -> Result<Vec<BigRational>> {
        let n = spin(self, label)? as i64;
        Ok((0..=n).map(|j| self.qpow(n - 2 * j)).collect())
    }

    fn is_unimodular(&self) -> bool {
        false
    }

    fn generators(&self) -> Vec<IrrLabel> {
        vec![IrrLabel::Spin(1)]
    }

    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>> {
        Ok((0..=radius).map(IrrLabel::Spin).collect())
    }

    fn natural_length(&self, label: &IrrLabel) -> Result<f64> {
        Ok(spin(self, label)? as f64)
    }
}
