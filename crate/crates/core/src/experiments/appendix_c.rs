use serde::Serialize;

use crate::error::Result;
use crate::qswitch::EffectiveDepolarizingSwitch;

use super::config::SweepConfig;

/// Worst case over the grid for one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalitySummary {
    pub d: usize,
    pub points: usize,
    /// `max_p [p_plus − (2p − p²)]`.
    pub max_gap: f64,
    pub argmax_p: f64,
    /// Largest absolute residual of the factored identity.
    pub max_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub per_dimension: Vec<InequalitySummary>,
    pub max_gap: f64,
    pub max_identity_residual: f64,
}

impl InequalityReport {
    /// The switched noise is strictly weaker than sequential noise everywhere
    /// on the grid and the identity holds to `identity_tol`.
    pub fn holds(&self, identity_tol: f64) -> bool {
        self.max_gap < 0.0 && self.max_identity_residual <= identity_tol
    }
}

pub fn run_appendix_c(config: &SweepConfig) -> Result<InequalityReport> {
    config.validate()?;
    let points = config.grid.points();
    let mut per_dimension = Vec::with_capacity(config.dims.len());
    for &d in &config.dims {
        let mut summary = InequalitySummary {
            d,
            points: points.len(),
            max_gap: f64::NEG_INFINITY,
            argmax_p: f64::NAN,
            max_identity_residual: 0.0,
        };
        for &p in &points {
            let e = EffectiveDepolarizingSwitch::new(d, p)?;
            let gap = e.gap_to_sequential();
            if gap > summary.max_gap {
                summary.max_gap = gap;
                summary.argmax_p = p;
            }
            summary.max_identity_residual = summary
                .max_identity_residual
                .max(e.identity_residual().abs());
        }
        log::info!(
            "d={d}: max gap {:.6e} at p={}, identity residual {:.3e}",
            summary.max_gap,
            summary.argmax_p,
            summary.max_identity_residual
        );
        per_dimension.push(summary);
    }
    let max_gap = per_dimension
        .iter()
        .map(|s| s.max_gap)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_identity_residual = per_dimension
        .iter()
        .map(|s| s.max_identity_residual)
        .fold(0.0, f64::max);
    Ok(InequalityReport {
        per_dimension,
        max_gap,
        max_identity_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{Experiment, Grid};

    #[test]
    fn small_grid_holds() {
        let mut cfg = SweepConfig::new(Experiment::AppendixCInequality);
        cfg.grid = Grid::new(0.01, 1.0, 0.01).unwrap();
        let report = run_appendix_c(&cfg).unwrap();
        assert_eq!(report.per_dimension.len(), 4);
        assert!(report.holds(1e-12));
        // the gap closes as p → 0, so the worst point is the smallest p
        assert!((report.per_dimension[0].argmax_p - 0.01).abs() < 1e-12);
    }

    #[test]
    fn large_dimension_endpoint() {
        let e = EffectiveDepolarizingSwitch::new(1000, 1.0).unwrap();
        assert!((e.gap_to_sequential() - (e.p_plus - 1.0)).abs() < 1e-15);
        assert!(e.gap_to_sequential() < 0.0);
    }
}
