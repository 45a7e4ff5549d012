//! Pure stabilizer states of one and two qubits.
//!
//! States are generated as the orbit of `|0…0⟩⟨0…0|` under `H` and `S` on
//! every wire and `CNOT` on every ordered wire pair, stored only as
//! projectors. Each state is labelled by the reduced row-echelon generators
//! of its stabilizer group, e.g. `+XX +ZZ` for the Bell state.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates;
use crate::operator::Operator;
use crate::pauli::{Pauli, PauliString};
use crate::robustness;
use crate::state::DensityOperator;

pub const MAX_QUBITS: usize = 2;

#[derive(Debug, Clone)]
pub struct StabilizerDictionary {
    n_qubits: usize,
    projectors: Vec<Operator>,
    labels: Vec<String>,
}

/// `2^n ∏_{k=1..n} (2^k + 1)`.
pub fn stabilizer_count(n: usize) -> usize {
    (1..=n).fold(1usize << n, |acc, k| acc * ((1usize << k) + 1))
}

impl StabilizerDictionary {
    pub fn enumerate(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "stabilizer enumeration supports 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let generators = clifford_generators(n_qubits);
        let d = 1usize << n_qubits;

        let mut found: Vec<Operator> = vec![Operator::ket_bra(d, 0, 0)];
        let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        index.entry(hash_key(&found[0])).or_default().push(0);
        let mut queue = VecDeque::from([0usize]);

        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let image = g.conjugate(&found[i]);
                let bucket = index.entry(hash_key(&image)).or_default();
                if bucket.iter().any(|&j| found[j].approx_eq(&image, 1e-8)) {
                    continue;
                }
                bucket.push(found.len());
                queue.push_back(found.len());
                found.push(image);
            }
        }

        let mut entries: Vec<(String, Operator)> = found
            .into_iter()
            .map(|p| (stabilizer_label(&p, n_qubits), p))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let (labels, projectors) = entries.into_iter().unzip();
        Ok(Self {
            n_qubits,
            projectors,
            labels,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the dictionary member equal to `op` within `tol`.
    pub fn position(&self, op: &Operator, tol: f64) -> Option<usize> {
        self.projectors.iter().position(|p| p.approx_eq(op, tol))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry<'a> {
            label: &'a str,
            entries: Vec<[f64; 2]>,
        }
        #[derive(Serialize)]
        struct Export<'a> {
            n_qubits: usize,
            dim: usize,
            states: Vec<Entry<'a>>,
        }
        let export = Export {
            n_qubits: self.n_qubits,
            dim: self.dim(),
            states: self
                .labels
                .iter()
                .zip(&self.projectors)
                .map(|(label, p)| Entry {
                    label,
                    entries: p.entries().iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&export).expect("dictionary serializes")
    }
}

/// `H`, `S` on each wire and `CNOT` on each ordered pair.
pub fn clifford_generators(n_qubits: usize) -> Vec<Operator> {
    let mut gens = Vec::new();
    for w in 0..n_qubits {
        gens.push(gates::on_wire(&gates::hadamard(), w, n_qubits));
        gens.push(gates::on_wire(&gates::phase_s(), w, n_qubits));
    }
    for c in 0..n_qubits {
        for t in 0..n_qubits {
            if c != t {
                gens.push(gates::cnot(c, t, n_qubits));
            }
        }
    }
    gens
}

fn hash_key(op: &Operator) -> Vec<i64> {
    op.entries()
        .iter()
        .flat_map(|z| [(z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64])
        .collect()
}

/// Canonical generator label of the stabilizer group of a pure stabilizer
/// projector: the group's symplectic vectors in reduced row-echelon form,
/// each prefixed with the sign of its expectation value.
pub fn stabilizer_label(projector: &Operator, n_qubits: usize) -> String {
    // group elements: Pauli strings with expectation ±1
    let mut rows: Vec<Vec<bool>> = PauliString::all(n_qubits)
        .into_iter()
        .filter(|s| !s.is_identity())
        .filter(|s| (s.matrix().trace_product(projector).re.abs() - 1.0).abs() < 1e-6)
        .map(|s| to_symplectic(&s))
        .collect();
    let width = 2 * n_qubits;
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows.iter()
        .map(|bits| {
            let s = from_symplectic(bits, n_qubits);
            let e = s.matrix().trace_product(projector).re;
            format!("{}{}", if e > 0.0 { '+' } else { '-' }, s)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn to_symplectic(s: &PauliString) -> Vec<bool> {
    let n = s.0.len();
    let mut v = vec![false; 2 * n];
    for (w, p) in s.0.iter().enumerate() {
        let (x, z) = p.bits();
        v[w] = x;
        v[n + w] = z;
    }
    v
}

fn from_symplectic(v: &[bool], n: usize) -> PauliString {
    PauliString((0..n).map(|w| Pauli::from_bits(v[w], v[n + w])).collect())
}

/// A pure stabilizer projector on reference ⊗ output together with its
/// reduced state on the reference factor.
#[derive(Debug, Clone)]
pub struct ChoiAtom {
    pub projector: Operator,
    pub marginal: Operator,
}

/// Two-qubit stabilizer projectors viewed as single-qubit Choi-space atoms,
/// each paired with its partial trace over the output (second) factor.
pub fn cspo_choi_atoms(dict_2n: &StabilizerDictionary) -> Result<Vec<ChoiAtom>> {
    if !dict_2n.n_qubits().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Choi atoms need an even qubit count, got {}",
            dict_2n.n_qubits()
        )));
    }
    let half = 1usize << (dict_2n.n_qubits() / 2);
    dict_2n
        .projectors()
        .iter()
        .map(|p| {
            Ok(ChoiAtom {
                projector: p.clone(),
                marginal: p.partial_trace(&[half, half], &[0])?,
            })
        })
        .collect()
}

/// True iff the robustness of magic of `rho` is at most `1 + tol`.
pub fn is_stabilizer_state(
    rho: &DensityOperator,
    dict: &StabilizerDictionary,
    tol: f64,
) -> Result<bool> {
    let sol = robustness::rom_state(rho, dict)?;
    Ok(sol.value <= 1.0 + tol)
}
