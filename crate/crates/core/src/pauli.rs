//! Pauli strings and the real vectorization of Hermitian operators.

use std::fmt;

use crate::error::{Error, Result};
use crate::gates;
use crate::operator::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Symplectic bits `(x, z)`; `Y` is `(1, 1)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn matrix(self) -> Operator {
        match self {
            Pauli::I => Operator::identity(2),
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    pub fn matrix(&self) -> Operator {
        let mats: Vec<Operator> = self.0.iter().map(|p| p.matrix()).collect();
        Operator::tensor_all(mats.iter())
    }

    /// All `4^n` strings, lexicographic in `I < X < Y < Z`.
    pub fn all(n: usize) -> Vec<PauliString> {
        let mut out = vec![PauliString(Vec::with_capacity(n))];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s| {
                    Pauli::ALL.iter().map(move |&p| {
                        let mut v = s.0.clone();
                        v.push(p);
                        PauliString(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// Orthonormal basis `{P/√(2^n)}` of Hermitian operators on `n` qubits.
///
/// The map `H ↦ (Tr(P_k H)/√(2^n))_k` is an isometry from Hermitian
/// operators with the Hilbert-Schmidt inner product to `ℝ^{4^n}`.
#[derive(Debug, Clone)]
pub struct PauliBasis {
    n_qubits: usize,
    strings: Vec<PauliString>,
    matrices: Vec<Operator>,
    scale: f64,
}

impl PauliBasis {
    pub fn new(n_qubits: usize) -> Self {
        let strings = PauliString::all(n_qubits);
        let matrices = strings.iter().map(PauliString::matrix).collect();
        Self {
            n_qubits,
            strings,
            matrices,
            scale: 1.0 / ((1usize << n_qubits) as f64).sqrt(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    /// Real coordinates of a Hermitian operator; imaginary parts of
    /// `Tr(P H)` are discarded.
    pub fn vectorize(&self, h: &Operator) -> Result<Vec<f64>> {
        let d = 1usize << self.n_qubits;
        if !h.is_square() || h.rows() != d {
            return Err(Error::dims("PauliBasis::vectorize", d, h.rows()));
        }
        Ok(self
            .matrices
            .iter()
            .map(|p| p.trace_product(h).re * self.scale)
            .collect())
    }

    pub fn devectorize(&self, v: &[f64]) -> Operator {
        let d = 1usize << self.n_qubits;
        self.matrices
            .iter()
            .zip(v)
            .fold(Operator::zeros(d, d), |acc, (p, &c)| {
                &acc + &p.scale_real(c * self.scale)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::C64;

    #[test]
    fn counts_and_order() {
        let all = PauliString::all(2);
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].to_string(), "II");
        assert_eq!(all[1].to_string(), "IX");
        assert_eq!(all[15].to_string(), "ZZ");
    }

    #[test]
    fn vectorization_is_isometric() {
        let basis = PauliBasis::new(1);
        let a = Operator::from_rows(&[
            [C64::new(0.7, 0.0), C64::new(0.1, -0.2)],
            [C64::new(0.1, 0.2), C64::new(0.3, 0.0)],
        ]);
        let b = Operator::from_rows(&[
            [C64::new(-1.0, 0.0), C64::new(0.0, 0.5)],
            [C64::new(0.0, -0.5), C64::new(2.0, 0.0)],
        ]);
        let va = basis.vectorize(&a).unwrap();
        let vb = basis.vectorize(&b).unwrap();
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        assert!((dot - a.inner(&b).re).abs() < 1e-12);
        assert!(basis.devectorize(&va).approx_eq(&a, 1e-12));
    }
}
