use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{FusionOutcome, FusionRing, IrrLabel};
use crate::error::{QgrdError, Result};

/// Free reduction of a word with letters `±i`.
pub fn reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

/// Dual of the free group `F_g`: one-dimensional irreducibles indexed by reduced words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeGroupDual {
    pub generators: u32,
    /// Largest ball size `enumerate_irreps` may produce.
    pub max_ball: usize,
}

impl FreeGroupDual {
    pub fn new(generators: u32) -> Result<Self> {
        if generators == 0 || generators > 26 {
            return Err(QgrdError::InvalidParameter(format!("g = {generators} must lie in 1..=26")));
        }
        Ok(FreeGroupDual { generators, max_ball: 2_000_000 })
    }

    fn word<'a>(&self, label: &'a IrrLabel) -> Result<&'a [i32]> {
        self.check(label)?;
        match label {
            IrrLabel::FreeWord(w) => Ok(w),
            _ => unreachable!(),
        }
    }

    /// Number of reduced words of length at most `radius`.
    pub fn ball_size(&self, radius: u32) -> u128 {
        let s = 2 * self.generators as u128;
        let mut total = 1u128;
        let mut sphere = 1u128;
        for n in 1..=radius {
            sphere = if n == 1 { s } else { sphere.saturating_mul(s - 1) };
            total = total.saturating_add(sphere);
        }
        total
    }
}

impl FusionRing for FreeGroupDual {
    fn family(&self) -> &str {
        "free-group"
    }

    fn describe(&self) -> String {
        format!("free-group(g={})", self.generators)
    }

    fn contains(&self, label: &IrrLabel) -> bool {
        match label {
            IrrLabel::FreeWord(w) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() <= self.generators) && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    fn unit(&self) -> IrrLabel {
        IrrLabel::FreeWord(Vec::new())
    }

    fn fuse(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        let mut w = self.word(beta)?.to_vec();
        w.extend_from_slice(self.word(alpha)?);
        Ok(FusionOutcome(vec![(IrrLabel::FreeWord(reduce(&w)), 1)]))
    }

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel> {
        Ok(IrrLabel::FreeWord(inverse(self.word(label)?)))
    }

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt> {
        self.check(label)?;
        Ok(BigInt::one())
    }

    fn qdim(&self, label: &IrrLabel) -> Result<BigRational> {
        self.check(label)?;
        Ok(BigRational::one())
    }

    fn generators(&self) -> Vec<IrrLabel> {
        (1..=self.generators as i32).flat_map(|i| [IrrLabel::FreeWord(vec![i]), IrrLabel::FreeWord(vec![-i])]).collect()
    }

    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>> {
        let size = self.ball_size(radius);
        if size > self.max_ball as u128 {
            return Err(QgrdError::Budget(format!("ball of radius {radius} has {size} words")));
        }
        let mut out = vec![Vec::new()];
        let mut sphere: Vec<Vec<i32>> = vec![Vec::new()];
        let g = self.generators as i32;
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &sphere {
                for l in (1..=g).flat_map(|i| [i, -i]) {
                    if w.last() != Some(&-l) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            sphere = next;
        }
        Ok(out.into_iter().map(IrrLabel::FreeWord).collect())
    }

    fn natural_length(&self, label: &IrrLabel) -> Result<f64> {
        Ok(self.word(label)?.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        assert_eq!(reduce(&[1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(inverse(&[1, -2]), vec![2, -1]);
    }

    #[test]
    fn ball_counts() {
        let f = FreeGroupDual::new(2).unwrap();
        assert_eq!(f.enumerate_irreps(1).unwrap().len(), 5);
        assert_eq!(f.ball_size(5), 485);
        assert_eq!(f.enumerate_irreps(5).unwrap().len(), 485);
        let z = FreeGroupDual::new(1).unwrap();
        assert_eq!(z.enumerate_irreps(3).unwrap().len(), 7);
    }
}
