//! Robustness of magic for qubit states and channels.
//!
//! Both quantities are ℓ1 programs over stabilizer projectors written in the
//! normalized Pauli basis:
//!
//! * state robustness `R(ρ) = min { ‖q‖₁ : Σ q_i s_i = ρ }` with free `q`;
//! * channel robustness `R_*(N) = min { Σa + Σb : Σ a_i s_i − Σ b_i s_i = J_N }`
//!   with `a, b ≥ 0` over two-qubit stabilizer Choi atoms and the extra
//!   condition that the negative part has a maximally mixed input marginal,
//!   `Tr_out Σ b_i s_i = (Σ b_i) I/2`. With `Tr J_N = 1` the positive part then
//!   has marginal `(1 + p) I/2` automatically, both parts are (scaled)
//!   Choi states of stabilizer-preserving channels, and the objective is
//!   `1 + 2p` with `p = Σ b_i`.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::lp::{solve_l1, AffineL1Problem, L1Solution};
use crate::pauli::PauliBasis;
use crate::stabilizer::{ChoiAtom, StabilizerDictionary};
use crate::state::DensityOperator;

/// Robustness of magic of a qubit state over the pure stabilizer states in
/// `dict`. Unnormalized inputs are renormalized first.
pub fn rom_state(rho: &DensityOperator, dict: &StabilizerDictionary) -> Result<L1Solution> {
    rom_state_with_factor(rho, dict).map(|(sol, _)| sol)
}

/// As [`rom_state`], also returning the renormalization factor applied to
/// the input (1 for normalized states).
pub fn rom_state_with_factor(
    rho: &DensityOperator,
    dict: &StabilizerDictionary,
) -> Result<(L1Solution, f64)> {
    if rho.dim() != dict.dim() {
        return Err(Error::dims("rom_state", dict.dim(), rho.dim()));
    }
    let (state, factor) = rho.normalize()?;
    let problem = state_problem(&state, dict)?;
    let sol = solve_l1(&problem)?.into_result("state robustness")?;
    log::info!(
        "state robustness {:.12} (renormalization factor {:.12e}, {} simplex iterations)",
        sol.value,
        factor,
        sol.iterations
    );
    Ok((sol, factor))
}

/// The ℓ1 program behind [`rom_state`] for a normalized state.
pub fn state_problem(
    rho: &DensityOperator,
    dict: &StabilizerDictionary,
) -> Result<AffineL1Problem> {
    let basis = PauliBasis::new(dict.n_qubits());
    let atoms = dict
        .projectors()
        .iter()
        .map(|p| basis.vectorize(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(AffineL1Problem {
        atoms,
        target: basis.vectorize(rho.op())?,
        extra_equalities: vec![],
        sign_split: true,
    })
}

/// Channel robustness of magic of a single-qubit channel.
///
/// The returned coefficients list the positive-part weights `a_i` followed by
/// the negative-part weights `b_i`, one per atom.
pub fn channel_robustness(ch: &KrausChannel, atoms: &[ChoiAtom]) -> Result<L1Solution> {
    let problem = channel_problem(ch, atoms)?;
    let sol = solve_l1(&problem)?.into_result("channel robustness")?;
    log::info!(
        "channel robustness {:.12} ({} simplex iterations)",
        sol.value,
        sol.iterations
    );
    Ok(sol)
}

/// Total weight `p = Σ b_i` of the negative part of a channel decomposition.
pub fn negative_weight(sol: &L1Solution) -> f64 {
    let half = sol.coefficients.len() / 2;
    sol.coefficients[half..].iter().sum()
}

/// The ℓ1 program behind [`channel_robustness`].
pub fn channel_problem(ch: &KrausChannel, atoms: &[ChoiAtom]) -> Result<AffineL1Problem> {
    if ch.d_in() != 2 || ch.d_out() != 2 {
        return Err(Error::InvalidArgument(format!(
            "channel robustness is implemented for qubit channels, got {}→{}",
            ch.d_in(),
            ch.d_out()
        )));
    }
    if atoms.is_empty() || atoms[0].projector.rows() != 4 {
        return Err(Error::InvalidArgument(
            "channel robustness needs two-qubit Choi atoms".into(),
        ));
    }
    let choi = ch.choi()?;
    let joint = PauliBasis::new(2);
    let single = PauliBasis::new(1);

    let atom_vectors = atoms
        .iter()
        .map(|a| joint.vectorize(&a.projector))
        .collect::<Result<Vec<_>>>()?;
    // non-identity Pauli components of each marginal
    let marginal_vectors = atoms
        .iter()
        .map(|a| single.vectorize(&a.marginal).map(|v| v[1..].to_vec()))
        .collect::<Result<Vec<_>>>()?;

    let n = atoms.len();
    let mut columns = Vec::with_capacity(2 * n);
    columns.extend(atom_vectors.iter().cloned());
    columns.extend(atom_vectors.iter().map(|v| v.iter().map(|x| -x).collect()));

    let extra_equalities = (0..marginal_vectors[0].len())
        .map(|k| {
            let mut row = vec![0.0; 2 * n];
            for (i, m) in marginal_vectors.iter().enumerate() {
                row[n + i] = m[k];
            }
            (row, 0.0)
        })
        .collect();

    Ok(AffineL1Problem {
        atoms: columns,
        target: joint.vectorize(choi.op())?,
        extra_equalities,
        sign_split: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::operator::Operator;
    use crate::stabilizer::cspo_choi_atoms;
    use std::f64::consts::SQRT_2;

    #[test]
    fn stabilizer_states_have_unit_robustness() {
        let dict = StabilizerDictionary::enumerate(1).unwrap();
        for p in dict.projectors() {
            let rho = DensityOperator::new(p.clone()).unwrap();
            let sol = rom_state(&rho, &dict).unwrap();
            assert!((sol.value - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn t_state_robustness_is_sqrt2() {
        let dict = StabilizerDictionary::enumerate(1).unwrap();
        let t_plus =
            DensityOperator::new(gates::t_gate().conjugate(DensityOperator::plus(2).op())).unwrap();
        let sol = rom_state(&t_plus, &dict).unwrap();
        assert!((sol.value - SQRT_2).abs() < 1e-9, "{}", sol.value);
        assert!(sol.duality_gap < 1e-8);
    }

    #[test]
    fn unnormalized_state_reports_factor() {
        let dict = StabilizerDictionary::enumerate(1).unwrap();
        let half =
            DensityOperator::unnormalized(DensityOperator::basis(2, 1).op().scale_real(0.25))
                .unwrap();
        let (sol, factor) = rom_state_with_factor(&half, &dict).unwrap();
        assert!((factor - 4.0).abs() < 1e-12);
        assert!((sol.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rom_dimension_mismatch() {
        let dict = StabilizerDictionary::enumerate(1).unwrap();
        assert!(rom_state(&DensityOperator::maximally_mixed(4), &dict).is_err());
    }

    #[test]
    fn clifford_channels_are_free() {
        let atoms = cspo_choi_atoms(&StabilizerDictionary::enumerate(2).unwrap()).unwrap();
        for u in [gates::hadamard(), gates::phase_s(), Operator::identity(2)] {
            let sol = channel_robustness(&KrausChannel::unitary(u).unwrap(), &atoms).unwrap();
            assert!((sol.value - 1.0).abs() < 1e-9);
            assert!(negative_weight(&sol).abs() < 1e-9);
        }
    }

    #[test]
    fn t_channel_is_magic() {
        let atoms = cspo_choi_atoms(&StabilizerDictionary::enumerate(2).unwrap()).unwrap();
        let sol =
            channel_robustness(&KrausChannel::unitary(gates::t_gate()).unwrap(), &atoms).unwrap();
        assert!((sol.value - SQRT_2).abs() < 1e-9, "{}", sol.value);
        assert!((sol.value - 1.0 - 2.0 * negative_weight(&sol)).abs() < 1e-9);
    }

    #[test]
    fn channel_robustness_rejects_qutrits() {
        let atoms = cspo_choi_atoms(&StabilizerDictionary::enumerate(2).unwrap()).unwrap();
        assert!(channel_robustness(&KrausChannel::identity(3), &atoms).is_err());
    }
}
