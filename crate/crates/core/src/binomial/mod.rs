//! Single-probability statistics: interval constructions, special functions,
//! sample-complexity solvers and exact coverage.

mod ci;
mod complexity;
mod coverage;
pub mod special;

pub use ci::{
    bennett_ci, bennett_trivial_variance_halfwidth, clopper_pearson_ci, hoeffding_ci,
    hoeffding_halfwidth, l1_ball_radius, scenario_ci, wilson_cc_ci, wilson_limit_ratio, Ci,
    CiError, CiMethod, SampleCounts,
};
pub use complexity::{
    ratio_cell, ratio_csv, ratio_grid, required_n_at_phat, worst_case_n, RatioCell, RATIO_HEADER,
};
pub use coverage::{
    exact_coverage, min_coverage, uniform_grid, CoverageMinimum, CoverageTable, MAX_ENUMERATION,
};
pub use special::{inverse_regularized_beta, normal_quantile, regularized_incomplete_beta};

/// Decimal rendering with 12 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
