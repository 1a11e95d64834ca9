//! Blockwise convolution and Fourier operators, Sobolev norms, and the rapid-decay and
//! Banach-algebra inequalities as executable checks.

mod block;
mod inequalities;
mod report;
mod techao;

pub use block::{
    conv_block, fourier_block_norm_ao, fourier_block_norm_free, necessary_condition_ratio, sobolev_norm,
    tech_ao_ratio, BlockElement, ConvSector,
};
pub use inequalities::{
    banach_submult_check, derivation_norm_check, laff_inequality_check, rd_constant, InequalityCheck,
    INEQUALITY_SLACK,
};
pub use report::{triple_string, CheckRow, CSV_SCHEMA_VERSION};
pub use techao::{
    admissible_triples, tech_ao_grid, triple_seed, TechAoGrid, TechAoMap, TechAoOutcome, TechAoRecord, TechAoSearch,
};
