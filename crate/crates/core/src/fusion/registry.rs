use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{parse_rational, CompactLieDual, FreeGroupDual, FusionRing, OrthogonalFree, RootData, SUq2Dual, UnitaryFree};
use crate::error::{QgrdError, Result};

/// Parameters of a family instance, as read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    /// Number of free generators.
    pub g: Option<u32>,
    /// Matrix size `N`.
    pub n: Option<u32>,
    /// Deformation parameter as `p/q`.
    pub q: Option<String>,
    /// Group name such as `SU(3)`.
    pub group: Option<String>,
}

/// Builds fusion rings of one family.
pub trait FamilyProvider: Send + Sync {
    fn name(&self) -> &str;
    /// One-line summary including the defaults.
    fn summary(&self) -> String;
    fn defaults(&self) -> FamilyParams;
    fn create(&self, params: &FamilyParams) -> Result<Box<dyn FusionRing>>;
}

fn missing(family: &str, key: &str) -> QgrdError {
    QgrdError::InvalidParameter(format!("family {family} needs parameter {key}"))
}

struct FreeGroupProvider;
struct OrthogonalProvider;
struct SUq2Provider;
struct UnitaryProvider;
struct LieProvider;

impl FamilyProvider for FreeGroupProvider {
    fn name(&self) -> &str {
        "free-group"
    }
    fn summary(&self) -> String {
        "dual of the free group F_g; parameter g (default 2)".into()
    }
    fn defaults(&self) -> FamilyParams {
        FamilyParams { g: Some(2), ..Default::default() }
    }
    fn create(&self, p: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        Ok(Box::new(FreeGroupDual::new(p.g.ok_or_else(|| missing(self.name(), "g"))?)?))
    }
}

impl FamilyProvider for OrthogonalProvider {
    fn name(&self) -> &str {
        "orthogonal-free"
    }
    fn summary(&self) -> String {
        "dual of A_o(N) with Q = I; parameter n = N >= 3 (default 3)".into()
    }
    fn defaults(&self) -> FamilyParams {
        FamilyParams { n: Some(3), ..Default::default() }
    }
    fn create(&self, p: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        Ok(Box::new(OrthogonalFree::new(p.n.ok_or_else(|| missing(self.name(), "n"))?)?))
    }
}

impl FamilyProvider for SUq2Provider {
    fn name(&self) -> &str {
        "suq2"
    }
    fn summary(&self) -> String {
        "dual of SU_q(2); parameter q rational in (0,1) (default 1/2)".into()
    }
    fn defaults(&self) -> FamilyParams {
        FamilyParams { q: Some("1/2".into()), ..Default::default() }
    }
    fn create(&self, p: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        let q = p.q.as_deref().ok_or_else(|| missing(self.name(), "q"))?;
        Ok(Box::new(SUq2Dual::new(parse_rational(q)?)?))
    }
}

impl FamilyProvider for UnitaryProvider {
    fn name(&self) -> &str {
        "unitary-free"
    }
    fn summary(&self) -> String {
        "dual of A_u(N) with Q = I; parameter n = N >= 2 (default 3)".into()
    }
    fn defaults(&self) -> FamilyParams {
        FamilyParams { n: Some(3), ..Default::default() }
    }
    fn create(&self, p: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        Ok(Box::new(UnitaryFree::new(p.n.ok_or_else(|| missing(self.name(), "n"))?)?))
    }
}

impl FamilyProvider for LieProvider {
    fn name(&self) -> &str {
        "compact-lie"
    }
    fn summary(&self) -> String {
        "dual of a compact connected Lie group; parameter group, e.g. SU(3) (default SU(2))".into()
    }
    fn defaults(&self) -> FamilyParams {
        FamilyParams { group: Some("SU(2)".into()), ..Default::default() }
    }
    fn create(&self, p: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        let g = p.group.as_deref().ok_or_else(|| missing(self.name(), "group"))?;
        Ok(Box::new(CompactLieDual::new(RootData::named(g)?)))
    }
}

/// Name-keyed collection of family providers.
#[derive(Default)]
pub struct FamilyRegistry {
    providers: BTreeMap<String, Box<dyn FamilyProvider>>,
}

impl FamilyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, provider: Box<dyn FamilyProvider>) {
        self.providers.insert(provider.name().to_string(), provider);
    }

    pub fn provider(&self, name: &str) -> Option<&dyn FamilyProvider> {
        self.providers.get(name).map(|p| p.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.providers.keys().map(|k| k.as_str())
    }

    pub fn providers(&self) -> impl Iterator<Item = &dyn FamilyProvider> {
        self.providers.values().map(|p| p.as_ref())
    }

    pub fn create(&self, name: &str, params: &FamilyParams) -> Result<Box<dyn FusionRing>> {
        let p = self
            .providers
            .get(name)
            .ok_or_else(|| QgrdError::InvalidParameter(format!("unknown family {name:?}")))?;
        p.create(params)
    }
}

/// Registry holding the five built-in families.
pub fn default_registry() -> FamilyRegistry {
    let mut r = FamilyRegistry::new();
    r.register(Box::new(FreeGroupProvider));
    r.register(Box::new(OrthogonalProvider));
    r.register(Box::new(SUq2Provider));
    r.register(Box::new(UnitaryProvider));
    r.register(Box::new(LieProvider));
    r
}
