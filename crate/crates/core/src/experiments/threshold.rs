use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::QutritKrausVariant;

use super::config::SweepTolerances;
use super::measures::{Measure, Resources};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub measure: Measure,
    /// Midpoint of the final bracket.
    pub threshold: f64,
    /// Final interval; its endpoints straddle the change of the predicate.
    pub bracket: (f64, f64),
    /// Whether the measure is free above the threshold (`true`) or below.
    pub free_above: bool,
    pub evaluations: usize,
}

/// True when `measure` at `p` sits at its floor within the configured slack.
pub fn is_free(
    measure: Measure,
    p: f64,
    tol: &SweepTolerances,
    res: &Resources,
    qutrit: QutritKrausVariant,
) -> Result<bool> {
    let v = measure.evaluate(p, res, qutrit)?;
    let slack = if measure.is_mana() {
        tol.mana_tol
    } else {
        tol.lp_tol
    };
    Ok(v <= measure.floor() + slack)
}

/// Bisects on the predicate "measure is at its floor" until the bracket is
/// narrower than `threshold_tol`. The predicate must differ at the two
/// endpoints of `bracket`.
pub fn find_threshold(
    measure: Measure,
    bracket: (f64, f64),
    tol: &SweepTolerances,
    res: &Resources,
    qutrit: QutritKrausVariant,
) -> Result<Threshold> {
    tol.validate()?;
    let (mut lo, mut hi) = bracket;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "empty bracket [{lo}, {hi}]"
        )));
    }
    let free_lo = is_free(measure, lo, tol, res, qutrit)?;
    let free_hi = is_free(measure, hi, tol, res, qutrit)?;
    let mut evaluations = 2;
    if free_lo == free_hi {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > tol.threshold_tol {
        let mid = 0.5 * (lo + hi);
        if is_free(measure, mid, tol, res, qutrit)? == free_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        evaluations += 1;
    }
    let threshold = 0.5 * (lo + hi);
    log::info!(
        "{measure} threshold {threshold:.6} in [{lo:.6}, {hi:.6}] after {evaluations} evaluations"
    );
    Ok(Threshold {
        measure,
        threshold,
        bracket: (lo, hi),
        free_above: free_hi,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_sign_change_is_an_error() {
        let res = Resources::new().unwrap();
        let tol = SweepTolerances::default();
        let err = find_threshold(
            Measure::ExampleChannelRobustness,
            (0.5, 1.0),
            &tol,
            &res,
            QutritKrausVariant::Corrected,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
        assert!(find_threshold(
            Measure::ExampleChannelRobustness,
            (0.5, 0.5),
            &tol,
            &res,
            QutritKrausVariant::Corrected
        )
        .is_err());
    }

    #[test]
    fn cspo_onset() {
        let res = Resources::new().unwrap();
        let tol = SweepTolerances::default();
        let t = find_threshold(
            Measure::ExampleChannelRobustness,
            (0.0, 1.0),
            &tol,
            &res,
            QutritKrausVariant::Corrected,
        )
        .unwrap();
        assert!(t.free_above);
        assert!(
            (t.threshold - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-3,
            "{t:?}"
        );
        assert!(t.bracket.1 - t.bracket.0 <= tol.threshold_tol);
    }
}
