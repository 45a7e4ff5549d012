//! Numerical tolerances shared by every module.

/// Default tolerances used throughout the crate.
///
/// `eq` governs operator equality and Hermiticity, `psd` governs positivity of
/// Choi states and the clamp window for tiny negative eigenvalues, and
/// `completeness` bounds the deviation of `Σ K†K` from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eq: f64,
    pub psd: f64,
    pub completeness: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eq: 1e-10,
        psd: 1e-9,
        completeness: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Robustness values below `1 + FREE_ROBUSTNESS_TOL` are treated as free.
pub const FREE_ROBUSTNESS_TOL: f64 = 1e-6;

/// Mana values below this are treated as zero.
pub const MANA_ZERO_TOL: f64 = 1e-9;
