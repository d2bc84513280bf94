//! Non-lattice processes: longest common subsequence, exact bin packing,
//! branching random walk first births, and the fractional Brownian motion
//! counterexample.

mod bin_packing;
mod brw;
mod fbm;
mod lcs;

pub use bin_packing::{bin_pack_min, bin_packing_block, bin_packing_sizes, MAX_BIN_ITEMS};
pub use brw::{
    brw_first_birth, brw_first_birth_from, brw_individual, BrwOutcome, BrwSpec, MAX_BRW_GENERATIONS,
};
pub use fbm::{fbm_counterexample_blocks, fbm_origin_values, FbmGenerator, FbmSpec};
pub use lcs::{lcs_block, lcs_length, lcs_prefix_values, SymbolSource};
