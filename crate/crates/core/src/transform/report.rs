use serde::{Deserialize, Serialize};

/// Version of the column layout of [`CheckRow`].
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// One checker result. Column order is fixed; `runtime_ms` is left empty unless timings are requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub family: String,
    pub parameters: String,
    pub triple: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub ok: bool,
    pub seed: u64,
    pub runtime_ms: Option<u64>,
}

impl CheckRow {
    /// Row for `measured ≤ bound + tolerance`.
    #[allow(clippy::too_many_arguments)]
    pub fn upper(check: &str, family: &str, parameters: &str, triple: String, measured: f64, bound: f64, tolerance: f64, seed: u64) -> Self {
        CheckRow {
            check: check.into(),
            family: family.into(),
            parameters: parameters.into(),
            triple,
            measured,
            bound,
            tolerance,
            ok: measured <= bound + tolerance,
            seed,
            runtime_ms: None,
        }
    }

    /// Row for `|measured − bound| ≤ tolerance`.
    #[allow(clippy::too_many_arguments)]
    pub fn close(check: &str, family: &str, parameters: &str, triple: String, measured: f64, bound: f64, tolerance: f64, seed: u64) -> Self {
        let mut row = Self::upper(check, family, parameters, triple, measured, bound, tolerance, seed);
        row.ok = (measured - bound).abs() <= tolerance;
        row
    }
}

/// `(k,l,n)` as written in reports.
pub fn triple_string(k: impl std::fmt::Display, l: impl std::fmt::Display, n: impl std::fmt::Display) -> String {
    format!("({k},{l},{n})")
}
