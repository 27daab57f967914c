//! Central table of numeric tolerances and Monte-Carlo acceptance thresholds.
//!
//! Every check in the crate reads its thresholds from [`tolerances`]. The CLI
//! may install an override loaded from JSON (see `IDLAB_TOLERANCE_TABLE`).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Smallest coefficient still accepted as "nonnegative".
    pub nonneg_coeff: f64,
    /// Nonnegativity slack for the self-decomposability ratio series.
    pub sd_ratio_nonneg: f64,
    /// p_0 at or below this is treated as zero mass at the origin.
    pub zero_at_origin: f64,
    /// Tail mass below this allows a finite-support claim.
    pub finite_tail: f64,
    /// Support threshold used when profiling a pmf for finiteness.
    pub support_threshold: f64,
    /// Per-coefficient error allowed when rebuilding a law from its decomposition.
    pub recombination: f64,
    /// Base tolerance for the D-type PGF comparison (tail bounds are added).
    pub same_dtype: f64,
    /// Exact-identity tolerance for the discrete stability check.
    pub stability_identity: f64,
    /// Final distance required of a domain-of-attraction sequence.
    pub attraction_final: f64,
    /// Absolute noise allowed when judging a distance sequence monotone.
    pub attraction_slack: f64,
    pub scaled_count_final_ks: f64,
    pub transfer_final_ks: f64,
    pub extreme_ks: f64,
    pub extreme_identity: f64,
    pub negative_control_ks: f64,
    /// Allowed increase between consecutive KS values in a convergence run.
    pub monotone_slack: f64,
    /// Multiple of the CLT standard error accepted by moment/LT checks.
    pub mc_sigma: f64,
    /// Multiple of the binomial standard error accepted per pmf bin.
    pub pmf_sigma: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            nonneg_coeff: 1e-12,
            sd_ratio_nonneg: 1e-10,
            zero_at_origin: 1e-14,
            finite_tail: 1e-14,
            support_threshold: 1e-14,
            recombination: 1e-9,
            same_dtype: 1e-8,
            stability_identity: 1e-12,
            attraction_final: 0.01,
            attraction_slack: 1e-12,
            scaled_count_final_ks: 0.02,
            transfer_final_ks: 0.03,
            extreme_ks: 0.02,
            extreme_identity: 1e-12,
            negative_control_ks: 0.1,
            monotone_slack: 0.005,
            mc_sigma: 3.0,
            pmf_sigma: 4.0,
        }
    }
}

static INSTALLED: OnceLock<Tolerances> = OnceLock::new();

/// The active tolerance table: the installed override, or the defaults.
pub fn tolerances() -> &'static Tolerances {
    INSTALLED.get_or_init(Tolerances::default)
}

/// Install an override. Fails (returning the table back) if a table is
/// already active.
pub fn install(table: Tolerances) -> Result<(), Tolerances> {
    INSTALLED.set(table)
}
