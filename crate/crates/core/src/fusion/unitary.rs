use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{FusionOutcome, FusionRing, IrrLabel};
use crate::error::{QgrdError, Result};

/// Letter of the free monoid labelling irreducibles of `A_u(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AuLetter {
    U,
    Ubar,
}

impl AuLetter {
    pub fn bar(self) -> Self {
        match self {
            AuLetter::U => AuLetter::Ubar,
            AuLetter::Ubar => AuLetter::U,
        }
    }
}

/// Reverses a word and swaps its letters.
pub fn conjugate_word(w: &[AuLetter]) -> Vec<AuLetter> {
    w.iter().rev().map(|l| l.bar()).collect()
}

/// Constituents of `β ⊗ α`, as the number `i` of cancelled letter pairs.
fn cancellations(beta: &[AuLetter], alpha: &[AuLetter]) -> usize {
    let mut i = 0;
    while i < beta.len().min(alpha.len()) && beta[beta.len() - 1 - i] == alpha[i].bar() {
        i += 1;
    }
    i
}

fn glue(beta: &[AuLetter], alpha: &[AuLetter], i: usize) -> Vec<AuLetter> {
    let mut w = beta[..beta.len() - i].to_vec();
    w.extend_from_slice(&alpha[i..]);
    w
}

/// Dual of `A_u(N)` with `Q = I_N`: irreducibles are words in `U`, `Ū`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryFree {
    pub strand_dim: u32,
    /// Largest word length `enumerate_irreps` may produce.
    pub max_radius: u32,
}

impl UnitaryFree {
    /// `N ≥ 2`; `N = 2` is kept for the small combinatorial examples.
    pub fn new(strand_dim: u32) -> Result<Self> {
        if strand_dim < 2 {
            return Err(QgrdError::InvalidParameter(format!("N = {strand_dim} must be at least 2")));
        }
        Ok(UnitaryFree { strand_dim, max_radius: 20 })
    }

    fn word<'a>(&self, label: &'a IrrLabel) -> Result<&'a [AuLetter]> {
        self.check(label)?;
        match label {
            IrrLabel::MonoidWord(w) => Ok(w),
            _ => unreachable!(),
        }
    }

    /// `d(vx) = N d(v) - [last(v) = x̄] d(v minus its last letter)`.
    pub fn word_dim(&self, w: &[AuLetter]) -> BigInt {
        let nn = BigInt::from(self.strand_dim);
        // d[j] is the dimension of the prefix of length j.
        let mut d = vec![BigInt::one()];
        for j in 0..w.len() {
            let mut next = &nn * &d[j];
            if j >= 1 && w[j - 1] == w[j].bar() {
                next -= &d[j - 1];
            }
            d.push(next);
        }
        d.pop().unwrap()
    }
}

impl FusionRing for UnitaryFree {
    fn family(&self) -> &str {
        "unitary-free"
    }

    fn describe(&self) -> String {
        format!("unitary-free(N={})", self.strand_dim)
    }

    fn contains(&self, label: &IrrLabel) -> bool {
        matches!(label, IrrLabel::MonoidWord(_))
    }

    fn unit(&self) -> IrrLabel {
        IrrLabel::MonoidWord(Vec::new())
    }

    fn fuse(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        let (b, a) = (self.word(beta)?, self.word(alpha)?);
        let c = cancellations(b, a);
        Ok(FusionOutcome((0..=c).map(|i| (IrrLabel::MonoidWord(glue(b, a, i)), 1)).collect()))
    }

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel> {
        Ok(IrrLabel::MonoidWord(conjugate_word(self.word(label)?)))
    }

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt> {
        Ok(self.word_dim(self.word(label)?))
    }

    fn qdim(&self, label: &IrrLabel) -> Result<BigRational> {
        Ok(BigRational::from_integer(self.classical_dim(label)?))
    }

    fn generators(&self) -> Vec<IrrLabel> {
        vec![IrrLabel::MonoidWord(vec![AuLetter::U]), IrrLabel::MonoidWord(vec![AuLetter::Ubar])]
    }

    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>> {
        if radius > self.max_radius {
            return Err(QgrdError::Budget(format!("radius {radius} exceeds {}", self.max_radius)));
        }
        let mut out = vec![Vec::new()];
        let mut start = 0;
        for _ in 0..radius {
            let end = out.len();
            for i in start..end {
                for l in [AuLetter::U, AuLetter::Ubar] {
                    let mut w = out[i].clone();
                    w.push(l);
                    out.push(w);
                }
            }
            start = end;
        }
        Ok(out.into_iter().map(IrrLabel::MonoidWord).collect())
    }

    fn natural_length(&self, label: &IrrLabel) -> Result<f64> {
        Ok(self.word(label)?.len() as f64)
    }
}

/// Decomposition `α = τα′`, `β = β′τ̄`, `γ = β′α′` of a constituent `γ ⊂ β ⊗ α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuFactorization {
    pub tau: Vec<AuLetter>,
    pub alpha_rest: Vec<AuLetter>,
    pub beta_rest: Vec<AuLetter>,
}

/// The unique factorization of `γ ⊂ β ⊗ α` through `l(τ) = (l(α) + l(β) - l(γ)) / 2` cancelled letters.
pub fn au_factorization(alpha: &[AuLetter], beta: &[AuLetter], gamma: &[AuLetter]) -> Result<AuFactorization> {
    let (n, k, l) = (alpha.len(), beta.len(), gamma.len());
    if (n + k) < l || (n + k - l) % 2 != 0 {
        return Err(QgrdError::Parity(format!("lengths {k} + {n} and {l} differ by an odd or negative amount")));
    }
    let q = (n + k - l) / 2;
    let show = || IrrLabel::MonoidWord(gamma.to_vec()).to_string();
    if q > cancellations(beta, alpha) || glue(beta, alpha, q) != gamma {
        return Err(QgrdError::NotConstituent(show()));
    }
    Ok(AuFactorization { tau: alpha[..q].to_vec(), alpha_rest: alpha[q..].to_vec(), beta_rest: beta[..k - q].to_vec() })
}

/// Inverse of [`au_factorization`]: returns `(α, β, γ)`.
pub fn au_rebuild(f: &AuFactorization) -> (Vec<AuLetter>, Vec<AuLetter>, Vec<AuLetter>) {
    let mut alpha = f.tau.clone();
    alpha.extend_from_slice(&f.alpha_rest);
    let mut beta = f.beta_rest.clone();
    beta.extend(conjugate_word(&f.tau));
    let mut gamma = f.beta_rest.clone();
    gamma.extend_from_slice(&f.alpha_rest);
    (alpha, beta, gamma)
}

#[cfg(test)]
mod tests {
    use super::AuLetter::{Ubar as B, U};
    use super::*;

    #[test]
    fn dimensions_follow_the_letter_recursion() {
        let r = UnitaryFree::new(3).unwrap();
        assert_eq!(r.word_dim(&[]), BigInt::from(1));
        assert_eq!(r.word_dim(&[U, B]), BigInt::from(8));
        assert_eq!(r.word_dim(&[U, U]), BigInt::from(9));
        assert_eq!(r.word_dim(&[U, B, U]), BigInt::from(21));
    }

    #[test]
    fn factorization_of_a_full_cancellation() {
        let f = au_factorization(&[U], &[B], &[]).unwrap();
        assert_eq!(f.tau, vec![U]);
        assert!(au_factorization(&[U], &[U], &[]).is_err());
        assert!(matches!(au_factorization(&[U], &[B], &[U]), Err(QgrdError::Parity(_))));
    }
}
