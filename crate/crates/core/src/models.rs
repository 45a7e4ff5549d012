//! Noisy channels used by the experiments.

use serde::Serialize;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::gates;
use crate::operator::{Operator, C64, ONE};

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "noise parameter {p} outside [0, 1]"
        )))
    }
}

/// Qubit channel mixing two stabilizer-preserving Kraus operators with the
/// unitary `TH`:
/// `K0 = √(p/2)(|0⟩⟨0| + |0⟩⟨1|)`, `K1 = √(p/2)(|1⟩⟨1| − |1⟩⟨0|)`,
/// `K2 = √(1−p) TH`.
pub fn qubit_example_channel(p: f64) -> Result<KrausChannel> {
    check_p(p)?;
    let s = (p / 2.0).sqrt();
    let k0 = Operator::from_real_rows(&[[s, s], [0.0, 0.0]]);
    let k1 = Operator::from_real_rows(&[[0.0, 0.0], [-s, s]]);
    let k2 = gates::t_gate()
        .matmul(&gates::hadamard())
        .scale_real((1.0 - p).sqrt());
    KrausChannel::new_complete(vec![k0, k1, k2])
}

/// Which third Kraus operator to use for the qutrit channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QutritKrausVariant {
    /// `K2 ∝ |2⟩⟨0| + ω²|1⟩⟨1| + ω|1⟩⟨2|`, which is not trace preserving.
    Printed,
    /// `K2 ∝ |2⟩⟨0| + ω²|2⟩⟨1| + ω|2⟩⟨2|`.
    Corrected,
}

impl QutritKrausVariant {
    pub fn name(self) -> &'static str {
        match self {
            QutritKrausVariant::Printed => "printed",
            QutritKrausVariant::Corrected => "corrected",
        }
    }
}

/// Qutrit analogue of [`qubit_example_channel`] with
/// `K0 = √(p/3) ζ(|0⟩⟨0| + |0⟩⟨1| + |0⟩⟨2|)`,
/// `K1 = √(p/3)(|1⟩⟨0| + ω|1⟩⟨1| + ω²|1⟩⟨2|)`, `K2` per `variant`, and
/// `K3 = √(1−p) TH`.
///
/// The printed variant is returned without a completeness check so that its
/// deviation can be reported; use [`KrausChannel::completeness_deviation`].
pub fn qutrit_example_channel(p: f64, variant: QutritKrausVariant) -> Result<KrausChannel> {
    check_p(p)?;
    let w = gates::root_of_unity(3);
    let zeta = gates::root_of_unity(9);
    let s = (p / 3.0).sqrt();
    let row_op = |entries: &[(usize, usize, C64)]| {
        let mut m = Operator::zeros(3, 3);
        for &(r, c, v) in entries {
            m = &m + &Operator::ket_bra(3, r, c).scale(v);
        }
        m
    };
    let k0 = row_op(&[(0, 0, ONE), (0, 1, ONE), (0, 2, ONE)]).scale(zeta * s);
    let k1 = row_op(&[(1, 0, ONE), (1, 1, w), (1, 2, w * w)]).scale(C64::new(s, 0.0));
    let k2 = match variant {
        QutritKrausVariant::Printed => row_op(&[(2, 0, ONE), (1, 1, w * w), (1, 2, w)]),
        QutritKrausVariant::Corrected => row_op(&[(2, 0, ONE), (2, 1, w * w), (2, 2, w)]),
    }
    .scale(zeta * s);
    let k3 = gates::qutrit_t()
        .matmul(&gates::qudit_hadamard(3))
        .scale_real((1.0 - p).sqrt());
    let ch = KrausChannel::new(vec![k0, k1, k2, k3])?;
    if variant == QutritKrausVariant::Corrected {
        ch.validate()?;
    }
    Ok(ch)
}

/// `D_p ∘ D_p ∘ T` on a qubit.
pub fn two_depolarized_t(p: f64) -> Result<KrausChannel> {
    check_p(p)?;
    let dp = KrausChannel::depolarizing(2, p)?;
    let t = KrausChannel::unitary(gates::t_gate())?;
    dp.compose(&dp)?.compose(&t)
}
