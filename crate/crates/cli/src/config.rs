//! Run configuration read from a TOML file and overridden by command-line flags.

use std::path::{Path, PathBuf};

use qgrd::fusion::{default_registry, parse_label, FamilyParams, FusionRing, IrrLabel};
use qgrd::length::{word_length_table, LengthSpec};
use qgrd::rdcheck::DiagnoseOptions;
use qgrd::tlrep::TlBudget;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthKind {
    /// Word length or Euclidean norm built into the family.
    Natural,
    /// Word length with respect to `generators`.
    Word,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LengthConfig {
    pub kind: LengthKind,
    /// Generating set for `kind = "word"`, as label strings; empty means the family default.
    pub generators: Vec<String>,
}

impl Default for LengthConfig {
    fn default() -> Self {
        LengthConfig { kind: LengthKind::Natural, generators: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    /// Largest `k + n` of the triples visited by `verify` and `blocks` for `orthogonal-free`.
    pub max_strands: usize,
    /// Cap on the side of any dense reduced matrix.
    pub max_dimension: usize,
    /// Cap on `N^n` for dense Jones-Wenzl projectors.
    pub max_ambient: usize,
    /// Cap on the number of labels of an enumerated ball.
    pub max_labels: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let tl = TlBudget::default();
        BudgetConfig {
            max_strands: tl.max_strands,
            max_dimension: tl.max_dimension,
            max_ambient: tl.max_ambient,
            max_labels: 2_000_000,
        }
    }
}

impl BudgetConfig {
    /// Temperley-Lieb budget able to hold `strands` strands.
    pub fn tl(&self, strands: usize) -> TlBudget {
        TlBudget { max_strands: strands, max_dimension: self.max_dimension, max_ambient: self.max_ambient }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Fill the `runtime_ms` column. Makes reports differ between runs.
    pub timings: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("qgrd-out"), timings: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthConfig {
    /// Threshold of the growth classifier.
    pub theta: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { theta: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlocksConfig {
    /// Spheres `n, k, l ≤ max_sphere` of the free-group grid.
    pub max_sphere: u32,
    /// Random kernels per free-group triple.
    pub trials: usize,
    /// Restarts of the alternating search per `orthogonal-free` triple.
    pub restarts: usize,
}

impl Default for BlocksConfig {
    fn default() -> Self {
        BlocksConfig { max_sphere: 4, trials: 200, restarts: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Checkers to run; empty runs every checker that applies to the family.
    pub checks: Vec<String>,
    /// Random tensors per triple in the convolution-norm check.
    pub samples: usize,
    /// Largest `k + n` of the alternating search; capped by `budget.max_strands`.
    pub tech_ao_max_sum: usize,
    pub tech_ao_restarts: usize,
    /// Seeds per parameter combination of the free-group inequalities.
    pub kernel_seeds: u64,
    /// Radius of the free-group oracle ball.
    pub oracle_radius: u32,
    /// Word length of the exhaustive `A_u` factorization check.
    pub au_max_length: usize,
    /// Radius of the triple sets in the triangle check.
    pub triangle_radius: u32,
    /// Largest bucket of the modular sequence.
    pub modular_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            checks: Vec::new(),
            samples: 50,
            tech_ao_max_sum: 6,
            tech_ao_restarts: 4,
            kernel_seeds: 100,
            oracle_radius: 4,
            au_max_length: 4,
            triangle_radius: 6,
            modular_max: 10,
        }
    }
}

/// Everything a command needs. Every field has a default; see `qgrd families`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    /// Overrides of the family defaults.
    pub params: FamilyParams,
    pub radius: u32,
    /// Required by every randomized command.
    pub seed: Option<u64>,
    /// Replaces the built-in tolerance of every check when set.
    pub tolerance: Option<f64>,
    /// Worker threads of `verify`; results are reduced in registry order.
    pub threads: usize,
    pub length: LengthConfig,
    pub budget: BudgetConfig,
    pub output: OutputConfig,
    pub growth: GrowthConfig,
    pub rd_check: DiagnoseOptions,
    pub blocks: BlocksConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: "orthogonal-free".into(),
            params: FamilyParams::default(),
            radius: 12,
            seed: None,
            tolerance: None,
            threads: 1,
            length: LengthConfig::default(),
            budget: BudgetConfig::default(),
            output: OutputConfig::default(),
            growth: GrowthConfig::default(),
            rd_check: DiagnoseOptions::default(),
            blocks: BlocksConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if self.radius == 0 {
            return bad("radius must be positive");
        }
        if self.budget.max_strands == 0 || self.budget.max_dimension == 0 || self.budget.max_labels == 0 {
            return bad("budgets must be positive");
        }
        if self.threads == 0 {
            return bad("threads must be positive");
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return bad("tolerance must be a non-negative number");
            }
        }
        Ok(())
    }

    pub fn require_seed(&self, command: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Config(format!("{command} is randomized and needs a seed")))
    }

    /// Family defaults with the configured overrides applied.
    pub fn family_params(&self) -> Result<FamilyParams, CliError> {
        let registry = default_registry();
        let provider = registry
            .provider(&self.family)
            .ok_or_else(|| CliError::Config(format!("unknown family {:?}", self.family)))?;
        let mut p = provider.defaults();
        let o = &self.params;
        p.g = o.g.or(p.g);
        p.n = o.n.or(p.n);
        p.q = o.q.clone().or(p.q);
        p.group = o.group.clone().or(p.group);
        Ok(p)
    }

    pub fn ring(&self) -> Result<Box<dyn FusionRing>, CliError> {
        Ok(default_registry().create(&self.family, &self.family_params()?)?)
    }

    pub fn length_spec(&self, ring: &dyn FusionRing) -> Result<LengthSpec, CliError> {
        match self.length.kind {
            LengthKind::Natural => Ok(LengthSpec::natural(ring, self.radius)?),
            LengthKind::Word => {
                let generators = self.generators(ring)?;
                Ok(word_length_table(ring, &generators, self.radius, self.budget.max_labels)?)
            }
        }
    }

    fn generators(&self, ring: &dyn FusionRing) -> Result<Vec<IrrLabel>, CliError> {
        let defaults = ring.generators();
        if self.length.generators.is_empty() {
            return Ok(defaults);
        }
        let kind = defaults.first().map(IrrLabel::kind).unwrap_or("spin");
        Ok(self.length.generators.iter().map(|g| parse_label(kind, g)).collect::<Result<_, _>>()?)
    }

    /// `value` unless a global tolerance override is configured.
    pub fn tolerance_or(&self, value: f64) -> f64 {
        self.tolerance.unwrap_or(value)
    }
}
