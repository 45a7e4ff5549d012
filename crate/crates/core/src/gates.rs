//! Standard gate matrices for qubits and qudits.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::operator::{phase, Operator, C64, I, ONE, ZERO};

pub fn pauli_x() -> Operator {
    Operator::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> Operator {
    Operator::from_rows(&[[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> Operator {
    Operator::diagonal(&[ONE, -ONE])
}

pub fn hadamard() -> Operator {
    Operator::from_real_rows(&[
        [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ])
}

pub fn phase_s() -> Operator {
    Operator::diagonal(&[ONE, I])
}

/// `diag(1, e^{iπ/4})`.
pub fn t_gate() -> Operator {
    Operator::diagonal(&[ONE, phase(PI / 4.0)])
}

/// Embeds a single-qubit gate on `wire` of an `n`-qubit register
/// (wire 0 is the leftmost tensor factor).
pub fn on_wire(gate: &Operator, wire: usize, n: usize) -> Operator {
    let id = Operator::identity(2);
    let factors: Vec<&Operator> = (0..n).map(|w| if w == wire { gate } else { &id }).collect();
    Operator::tensor_all(factors)
}

/// CNOT with the given control and target wires on `n` qubits.
pub fn cnot(control: usize, target: usize, n: usize) -> Operator {
    assert!(control != target && control < n && target < n);
    let d = 1 << n;
    let bit = |i: usize, w: usize| (i >> (n - 1 - w)) & 1;
    Operator::from_fn(d, d, |r, c| {
        let mapped = if bit(c, control) == 1 {
            c ^ (1 << (n - 1 - target))
        } else {
            c
        };
        if r == mapped {
            ONE
        } else {
            ZERO
        }
    })
}

/// `ω = e^{2πi/d}`.
pub fn root_of_unity(d: usize) -> C64 {
    phase(2.0 * PI / d as f64)
}

/// Shift `X|j⟩ = |j ⊕ 1⟩`.
pub fn shift(d: usize) -> Operator {
    Operator::from_fn(d, d, |r, c| if r == (c + 1) % d { ONE } else { ZERO })
}

/// Boost `Z|j⟩ = ω^j |j⟩`.
pub fn boost(d: usize) -> Operator {
    let w = root_of_unity(d);
    Operator::diagonal(&(0..d).map(|j| w.powu(j as u32)).collect::<Vec<_>>())
}

/// Qudit Fourier gate `(1/√d) Σ ω^{jk} |j⟩⟨k|`.
pub fn qudit_hadamard(d: usize) -> Operator {
    let w = root_of_unity(d);
    let s = 1.0 / (d as f64).sqrt();
    Operator::from_fn(d, d, |j, k| w.powu(((j * k) % d) as u32) * s)
}

/// Qutrit phase gate `diag(1, 1, ω)`.
pub fn qutrit_s() -> Operator {
    Operator::diagonal(&[ONE, ONE, root_of_unity(3)])
}

/// Qutrit T gate `diag(ζ, 1, ζ⁻¹)` with `ζ = e^{2πi/9}`.
pub fn qutrit_t() -> Operator {
    let zeta = root_of_unity(9);
    Operator::diagonal(&[zeta, ONE, zeta.conj()])
}

/// `d²` mutually orthogonal unitaries with `U_0 = I`: the Pauli matrices for
/// `d = 2`, clock-and-shift products `Z^a X^b` otherwise.
pub fn unitary_basis(d: usize) -> Vec<Operator> {
    if d == 2 {
        return vec![Operator::identity(2), pauli_x(), pauli_y(), pauli_z()];
    }
    let z = boost(d);
    let x = shift(d);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            out.push(z.pow(a).matmul(&x.pow(b)));
        }
    }
    out
}
