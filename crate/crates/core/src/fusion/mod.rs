//! Fusion rings of discrete quantum groups: labels, fusion multiplicities, conjugation,
//! dimensions and modular data for the built-in families.

mod free;
mod lie;
mod registry;
mod su2;
mod unitary;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QgrdError, Result};

pub use free::{inverse as invert_word, reduce as reduce_word, FreeGroupDual};
pub use lie::{CompactLieDual, RootData};
pub use registry::{default_registry, FamilyParams, FamilyProvider, FamilyRegistry};
pub use su2::{OrthogonalFree, SUq2Dual};
pub use unitary::{au_factorization, au_rebuild, AuFactorization, AuLetter, UnitaryFree};

/// Label of an irreducible object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrLabel {
    /// `α_n` of an SU(2)-type family.
    Spin(u32),
    /// Reduced word in a free group; letter `±i` is the `i`-th generator or its inverse.
    FreeWord(Vec<i32>),
    /// Word in the free monoid on `U`, `Ū`.
    MonoidWord(Vec<AuLetter>),
    /// Dominant weight in fundamental-weight coordinates.
    Weight(Vec<u32>),
}

impl IrrLabel {
    pub fn kind(&self) -> &'static str {
        match self {
            IrrLabel::Spin(_) => "spin",
            IrrLabel::FreeWord(_) => "free-word",
            IrrLabel::MonoidWord(_) => "monoid-word",
            IrrLabel::Weight(_) => "weight",
        }
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::Spin(n) => write!(f, "{n}"),
            IrrLabel::FreeWord(w) if w.is_empty() => write!(f, "e"),
            IrrLabel::FreeWord(w) => {
                for &l in w {
                    let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                    if l > 0 {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "{}", c.to_ascii_uppercase())?;
                    }
                }
                Ok(())
            }
            IrrLabel::MonoidWord(w) if w.is_empty() => write!(f, "1"),
            IrrLabel::MonoidWord(w) => {
                for l in w {
                    write!(f, "{}", if *l == AuLetter::U { "U" } else { "Ū" })?;
                }
                Ok(())
            }
            IrrLabel::Weight(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Parses a label of the given kind: `7`, `aB` (capital = inverse), `UŪU` (or `Uu`), `(1,0)`.
pub fn parse_label(kind: &str, text: &str) -> Result<IrrLabel> {
    let text = text.trim();
    let bad = || QgrdError::Format(format!("cannot parse {text:?} as a {kind} label"));
    match kind {
        "spin" => text.parse().map(IrrLabel::Spin).map_err(|_| bad()),
        "free-word" => {
            if text == "e" {
                return Ok(IrrLabel::FreeWord(Vec::new()));
            }
            let mut w = Vec::new();
            for c in text.chars() {
                if !c.is_ascii_alphabetic() {
                    return Err(bad());
                }
                let idx = (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
                w.push(if c.is_ascii_lowercase() { idx } else { -idx });
            }
            Ok(IrrLabel::FreeWord(free::reduce(&w)))
        }
        "monoid-word" => {
            if text == "1" {
                return Ok(IrrLabel::MonoidWord(Vec::new()));
            }
            text.chars()
                .map(|c| match c {
                    'U' => Ok(AuLetter::U),
                    'Ū' | 'u' => Ok(AuLetter::Ubar),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()
                .map(IrrLabel::MonoidWord)
        }
        "weight" => {
            let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            inner
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(IrrLabel::Weight)
        }
        _ => Err(bad()),
    }
}

/// Decomposition of a tensor product: distinct labels with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionOutcome(pub Vec<(IrrLabel, u64)>);

impl FusionOutcome {
    pub fn multiplicity(&self, label: &IrrLabel) -> u64 {
        self.0.iter().find(|(l, _)| l == label).map_or(0, |(_, m)| *m)
    }

    pub fn labels(&self) -> impl Iterator<Item = &IrrLabel> {
        self.0.iter().map(|(l, _)| l)
    }

    /// `Σ mult · qdim(γ)`.
    pub fn total_qdim(&self, ring: &dyn FusionRing) -> Result<BigRational> {
        let mut s = BigRational::zero();
        for (l, m) in &self.0 {
            s += ring.qdim(l)? * BigRational::from_integer(BigInt::from(*m));
        }
        Ok(s)
    }
}

/// A fusion ring with known modular data.
pub trait FusionRing: Send + Sync {
    /// Registry key of the family.
    fn family(&self) -> &str;

    /// Family with its parameters, e.g. `orthogonal-free(N=3)`.
    fn describe(&self) -> String;

    fn contains(&self, label: &IrrLabel) -> bool;

    fn unit(&self) -> IrrLabel;

    /// Decomposition of `β ⊗ α`.
    fn fuse(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome>;

    fn conjugate(&self, label: &IrrLabel) -> Result<IrrLabel>;

    fn classical_dim(&self, label: &IrrLabel) -> Result<BigInt>;

    /// Quantum dimension `m_α = Tr p_α F`.
    fn qdim(&self, label: &IrrLabel) -> Result<BigRational>;

    /// Sorted eigenvalues of `p_α F`.
    fn modular_eigenvalues(&self, label: &IrrLabel) -> Result<Vec<BigRational>> {
        self.check(label)?;
        let d = self.classical_dim(label)?;
        let n: usize = (&d).try_into().map_err(|_| QgrdError::Budget(format!("dimension {d}")))?;
        Ok(vec![BigRational::one(); n])
    }

    fn is_unimodular(&self) -> bool {
        true
    }

    /// Default conjugation-closed generating set.
    fn generators(&self) -> Vec<IrrLabel>;

    /// All irreducibles of natural length at most `radius`, in a deterministic order.
    fn enumerate_irreps(&self, radius: u32) -> Result<Vec<IrrLabel>>;

    /// Natural length (word length or Euclidean norm) of a label.
    fn natural_length(&self, label: &IrrLabel) -> Result<f64>;

    fn supports_fusion(&self) -> bool {
        true
    }

    /// Decomposition of `β ⊗ α` for triple sets; defaults to [`FusionRing::fuse`].
    fn constituents(&self, beta: &IrrLabel, alpha: &IrrLabel) -> Result<FusionOutcome> {
        self.fuse(beta, alpha)
    }

    /// Spectral bucket `⌊l(α)⌋` of the natural length.
    fn bucket(&self, label: &IrrLabel) -> Result<u32> {
        Ok(self.natural_length(label)?.floor() as u32)
    }

    fn check(&self, label: &IrrLabel) -> Result<()> {
        if self.contains(label) {
            Ok(())
        } else {
            Err(QgrdError::ForeignLabel { label: label.to_string(), family: self.describe() })
        }
    }
}

/// One row of modular data.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularRow {
    pub label: IrrLabel,
    pub eigenvalues: Vec<BigRational>,
    pub unimodular: bool,
}

pub fn modular_row(ring: &dyn FusionRing, label: &IrrLabel) -> Result<ModularRow> {
    let eigenvalues = ring.modular_eigenvalues(label)?;
    let unimodular = eigenvalues.iter().all(|e| e.is_one());
    Ok(ModularRow { label: label.clone(), eigenvalues, unimodular })
}

/// Largest eigenvalue of `p_α F`, i.e. `‖p_α F‖`.
pub fn modular_norm(ring: &dyn FusionRing, label: &IrrLabel) -> Result<BigRational> {
    let e = ring.modular_eigenvalues(label)?;
    Ok(e.into_iter().max().unwrap_or_else(BigRational::one))
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || QgrdError::Format(format!("cannot parse {text:?} as a rational"));
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => text.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_roundtrip_through_text() {
        for (kind, text) in [("spin", "4"), ("free-word", "aB"), ("free-word", "e"), ("monoid-word", "UŪU"), ("weight", "(1,0)")] {
            let l = parse_label(kind, text).unwrap();
            assert_eq!(l.to_string(), text);
            assert_eq!(l.kind(), kind);
        }
        assert_eq!(parse_label("free-word", "aAb").unwrap(), IrrLabel::FreeWord(vec![2]));
        assert!(parse_label("weight", "1,0").is_err());
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert!(parse_rational("1/0").is_err());
    }
}
