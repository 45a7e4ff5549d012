//! Random inputs and independent reference computations for the integration
//! tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use magic_switch::channel::KrausChannel;
use magic_switch::gates;
use magic_switch::operator::{Operator, C64};
use magic_switch::state::DensityOperator;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Operator {
    Operator::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Mixed state `G G† / Tr(G G†)` for a random square `G`.
pub fn random_state(d: usize, rng: &mut impl Rng) -> DensityOperator {
    let g = random_matrix(d, d, rng);
    let gg = g.matmul(&g.dagger());
    let tr = gg.trace().re;
    DensityOperator::new(gg.scale_real(1.0 / tr)).unwrap()
}

pub fn random_amplitudes(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v = random_matrix(d, 1, rng);
    let norm = v.frobenius_norm();
    v.entries().iter().map(|z| z / norm).collect()
}

pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityOperator {
    DensityOperator::pure(&random_amplitudes(d, rng))
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> Operator {
    let g = random_matrix(d, d, rng);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Kraus set `G_i S^{-1/2}` with `S = Σ G_i† G_i`.
pub fn random_channel(d: usize, n_kraus: usize, rng: &mut impl Rng) -> KrausChannel {
    let gs: Vec<Operator> = (0..n_kraus).map(|_| random_matrix(d, d, rng)).collect();
    let s = gs
        .iter()
        .fold(Operator::zeros(d, d), |acc, g| &acc + &g.dagger().matmul(g));
    let (vals, vecs) = s.hermitian_eigen(1e-9).unwrap();
    let inv_sqrt = Operator::diagonal(
        &vals
            .iter()
            .map(|l| C64::new(1.0 / l.sqrt(), 0.0))
            .collect::<Vec<_>>(),
    );
    let s_inv_sqrt = vecs.matmul(&inv_sqrt).matmul(&vecs.dagger());
    KrausChannel::new_complete(gs.iter().map(|g| g.matmul(&s_inv_sqrt)).collect()).unwrap()
}

/// Product of `len` random single-qubit Clifford generators.
pub fn random_qubit_clifford(len: usize, rng: &mut impl Rng) -> Operator {
    let gens = [gates::hadamard(), gates::phase_s()];
    (0..len).fold(Operator::identity(2), |acc, _| {
        gens[rng.random_range(0..2)].matmul(&acc)
    })
}

/// Minimal ℓ1 norm of `x` with `A x = target`, by solving every square
/// subsystem over `target.len()` atoms. An optimal basic solution uses at
/// most that many atoms, so the minimum over nonsingular bases is the LP
/// optimum when the atoms span the space.
pub fn brute_force_l1(atoms: &[Vec<f64>], target: &[f64]) -> f64 {
    let m = target.len();
    let mut best = f64::INFINITY;
    for subset in combinations(atoms.len(), m) {
        let a = DMatrix::from_fn(m, m, |r, c| atoms[subset[c]][r]);
        if a.determinant().abs() < 1e-9 {
            continue;
        }
        if let Some(x) = a.lu().solve(&DVector::from_column_slice(target)) {
            best = best.min(x.iter().map(|v| v.abs()).sum());
        }
    }
    best
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// `(id ⊗ N)` on a reference qubit and the channel's input.
pub fn extend_with_identity(ch: &KrausChannel) -> KrausChannel {
    let id = Operator::identity(2);
    KrausChannel::new(ch.kraus().iter().map(|k| id.tensor(k)).collect()).unwrap()
}

/// Branch outputs of the switch from the `α_ij = K_i K_j |ψ⟩` expansion for
/// a channel switched with itself, control `|+⟩` and pure target `ψ`.
#[allow(clippy::needless_range_loop)]
pub fn alpha_expansion(kraus: &[Operator], psi: &[C64]) -> (Operator, Operator) {
    let ket = Operator::ket(psi);
    let n = kraus.len();
    let alpha: Vec<Vec<Operator>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| kraus[i].matmul(&kraus[j]).matmul(&ket))
                .collect()
        })
        .collect();
    let d = psi.len();
    let mut plus = Operator::zeros(d, d);
    let mut minus = Operator::zeros(d, d);
    for i in 0..n {
        plus = &plus + &alpha[i][i].matmul(&alpha[i][i].dagger());
        for j in 0..n {
            if i == j {
                continue;
            }
            let same = alpha[i][j].matmul(&alpha[i][j].dagger());
            let cross = alpha[i][j].matmul(&alpha[j][i].dagger());
            plus = &plus + &(&same + &cross).scale_real(0.5);
            minus = &minus + &(&same - &cross).scale_real(0.5);
        }
    }
    (plus, minus)
}
