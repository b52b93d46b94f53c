//! The `Gamma` family of parameters.

mod block;
mod kernel;
mod oracle;
mod search;
mod star;

pub use block::{
    diagonal_excess, diagonally_increasing_check, g_w, gamma, gamma_block_exact, gamma_tilde,
    max_g_w, GammaReport, GammaTildeReport, GammaValue, DI_TOL, EXACT_PERMUTATION_LIMIT,
};
pub use oracle::gamma_grid_oracle;
pub use star::{
    gamma_star, gamma_star_fixed, gamma_star_order, gamma_star_with_starts, GammaStarReport,
    SearchOptions, EXACT_ORDER_LIMIT, EXACT_SUBSET_LIMIT,
};

pub(crate) use star::next_permutation;
