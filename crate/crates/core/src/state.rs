//! Density operators, normalized or not, and control-qubit measurement.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::operator::{Operator, C64};
use crate::tolerance::Tolerances;

/// A positive semidefinite operator.
///
/// Normalized states carry `normalized == true`. Post-selected branch states
/// (for example the target after a control measurement) keep their weight as
/// the trace and are flagged unnormalized until [`DensityOperator::normalize`]
/// is called.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: Operator,
    trace: f64,
    normalized: bool,
}

impl DensityOperator {
    /// Validates a trace-one state.
    pub fn new(op: Operator) -> Result<Self> {
        let state = Self::unnormalized(op)?;
        if (state.trace - 1.0).abs() > Tolerances::DEFAULT.eq {
            return Err(Error::NotNormalized { trace: state.trace });
        }
        Ok(Self {
            normalized: true,
            ..state
        })
    }

    /// Validates a positive operator of arbitrary non-negative trace.
    ///
    /// Eigenvalues in `[-eq, 0)` are accepted (and treated as zero); anything
    /// more negative is rejected.
    pub fn unnormalized(op: Operator) -> Result<Self> {
        let tol = Tolerances::DEFAULT.eq;
        if !op.is_square() {
            return Err(Error::dims(
                "DensityOperator",
                "square operator",
                format!("{}x{}", op.rows(), op.cols()),
            ));
        }
        let evs = op.hermitian_eigenvalues(tol)?;
        let min = evs.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let trace = op.trace().re;
        Ok(Self {
            op,
            trace,
            normalized: false,
        })
    }

    pub fn pure(amplitudes: &[C64]) -> Self {
        Self {
            op: Operator::pure_projector(amplitudes),
            trace: 1.0,
            normalized: true,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            op: Operator::identity(d).scale_real(1.0 / d as f64),
            trace: 1.0,
            normalized: true,
        }
    }

    pub fn basis(d: usize, i: usize) -> Self {
        Self {
            op: Operator::ket_bra(d, i, i),
            trace: 1.0,
            normalized: true,
        }
    }

    /// `|+⟩ = (|0⟩ + … + |d-1⟩)/√d`.
    pub fn plus(d: usize) -> Self {
        Self::pure(&vec![C64::new(1.0, 0.0); d])
    }

    /// `|−⟩ = (|0⟩ − |1⟩)/√2`.
    pub fn qubit_minus() -> Self {
        Self::pure(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)])
    }

    /// Single-qubit state with Bloch vector `(x, y, z)`, `|r| ≤ 1`.
    pub fn qubit_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if x * x + y * y + z * z > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            )));
        }
        let op = Operator::from_rows(&[
            [C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
            [C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
        ]);
        Self::new(op)
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_op(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescales to unit trace and returns the factor `1/trace` that was
    /// applied.
    pub fn normalize(&self) -> Result<(DensityOperator, f64)> {
        if self.normalized {
            return Ok((self.clone(), 1.0));
        }
        if self.trace <= Tolerances::DEFAULT.eq {
            return Err(Error::ZeroTrace { trace: self.trace });
        }
        let factor = 1.0 / self.trace;
        log::info!(
            "renormalizing state of trace {:.12e} by factor {:.12e}",
            self.trace,
            factor
        );
        Ok((
            DensityOperator {
                op: self.op.scale_real(factor),
                trace: 1.0,
                normalized: true,
            },
            factor,
        ))
    }

    /// Builds a state without validation. Callers guarantee positivity.
    pub(crate) fn from_trusted(op: Operator, normalized: bool) -> Self {
        let trace = op.trace().re;
        Self {
            op,
            trace,
            normalized,
        }
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            op: self.op.tensor(&other.op),
            trace: self.trace * other.trace,
            normalized: self.normalized && other.normalized,
        }
    }
}

/// Outcome of measuring a control qubit in the Fourier basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourierOutcome {
    Plus,
    Minus,
}

impl FourierOutcome {
    pub fn amplitudes(self) -> [C64; 2] {
        let s = FRAC_1_SQRT_2;
        match self {
            FourierOutcome::Plus => [C64::new(s, 0.0), C64::new(s, 0.0)],
            FourierOutcome::Minus => [C64::new(s, 0.0), C64::new(-s, 0.0)],
        }
    }
}

/// Projects the qubit factor at `position` of a multipartite state onto
/// `|±⟩` and returns the unnormalized post-measurement state of the remaining
/// factors together with its trace (the outcome probability for a normalized
/// input).
pub fn measure_control(
    state: &DensityOperator,
    dims: &[usize],
    position: usize,
    outcome: FourierOutcome,
) -> Result<(DensityOperator, f64)> {
    let total: usize = dims.iter().product();
    if total != state.dim() {
        return Err(Error::dims("measure_control", total, state.dim()));
    }
    if position >= dims.len() {
        return Err(Error::InvalidArgument(format!(
            "control position {position} out of range for {} factors",
            dims.len()
        )));
    }
    if dims[position] != 2 {
        return Err(Error::dims(
            "measure_control (control qubit)",
            2,
            dims[position],
        ));
    }
    let bra = Operator::bra(&outcome.amplitudes());
    let factors: Vec<Operator> = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if i == position {
                bra.clone()
            } else {
                Operator::identity(d)
            }
        })
        .collect();
    let projector = Operator::tensor_all(factors.iter());
    let out = projector.conjugate(state.op());
    let post = DensityOperator::from_trusted(out, false);
    let prob = post.trace();
    Ok((post, prob))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_and_non_normalized() {
        let neg = Operator::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(matches!(
            DensityOperator::new(neg),
            Err(Error::NotPositive { .. })
        ));
        let half = Operator::diagonal(&[C64::new(0.5, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(
            DensityOperator::new(half.clone()),
            Err(Error::NotNormalized { .. })
        ));
        let un = DensityOperator::unnormalized(half).unwrap();
        assert!(!un.is_normalized());
        let (n, factor) = un.normalize().unwrap();
        assert!(n.is_normalized());
        assert!((factor - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let op = Operator::diagonal(&[C64::new(1.0 + 5e-11, 0.0), C64::new(-5e-11, 0.0)]);
        assert!(DensityOperator::new(op).is_ok());
    }

    #[test]
    fn zero_trace_cannot_be_normalized() {
        let z = DensityOperator::unnormalized(Operator::zeros(2, 2)).unwrap();
        assert!(matches!(z.normalize(), Err(Error::ZeroTrace { .. })));
    }

    #[test]
    fn measure_plus_control() {
        let rho = DensityOperator::qubit_bloch(0.3, -0.2, 0.5).unwrap();
        let joint = DensityOperator::plus(2).tensor(&rho);
        let (post, prob) = measure_control(&joint, &[2, 2], 0, FourierOutcome::Plus).unwrap();
        assert!((prob - 1.0).abs() < 1e-12);
        assert!(post.op().approx_eq(rho.op(), 1e-12));
        let (post, prob) = measure_control(&joint, &[2, 2], 0, FourierOutcome::Minus).unwrap();
        assert!(prob.abs() < 1e-12);
        assert!(post.op().approx_eq(&Operator::zeros(2, 2), 1e-12));
    }

    #[test]
    fn measure_minus_control_orthogonal() {
        let rho = DensityOperator::basis(3, 1);
        let joint = DensityOperator::qubit_minus().tensor(&rho);
        let (post, prob) = measure_control(&joint, &[2, 3], 0, FourierOutcome::Plus).unwrap();
        assert!(prob.abs() < 1e-12);
        assert!(post.op().frobenius_norm() < 1e-12);
    }

    #[test]
    fn measure_control_in_second_slot() {
        let rho = DensityOperator::basis(3, 2);
        let joint = rho.tensor(&DensityOperator::plus(2));
        let (post, prob) = measure_control(&joint, &[3, 2], 1, FourierOutcome::Plus).unwrap();
        assert!((prob - 1.0).abs() < 1e-12);
        assert!(post.op().approx_eq(rho.op(), 1e-12));
    }

    #[test]
    fn measure_control_errors() {
        let joint = DensityOperator::maximally_mixed(6);
        assert!(measure_control(&joint, &[2, 2], 0, FourierOutcome::Plus).is_err());
        assert!(measure_control(&joint, &[2, 3], 2, FourierOutcome::Plus).is_err());
        assert!(measure_control(&joint, &[2, 3], 1, FourierOutcome::Plus).is_err());
    }
}
