//! Quantum SWITCH of two channels with a control qubit.
//!
//! The control is always the first tensor factor. For Kraus sets `{E_i}` of
//! `a` and `{F_j}` of `b`, the switch has Kraus operators
//! `W_ij = |0⟩⟨0| ⊗ E_i F_j + |1⟩⟨1| ⊗ F_j E_i`, so control `|0⟩` applies
//! `a ∘ b` (b first). Building with `swapped = true` exchanges the two
//! branches.

use crate::channel::{KrausChannel, WeightedChannel};
use crate::error::{Error, Result};
use crate::gates;
use crate::operator::Operator;
use crate::state::{measure_control, DensityOperator, FourierOutcome};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct SwitchedChannel {
    inner_a: KrausChannel,
    inner_b: KrausChannel,
    kraus: Vec<Operator>,
    swapped: bool,
}

/// Switch of `a` and `b` in the default branch order.
pub fn build_switch(a: &KrausChannel, b: &KrausChannel) -> Result<SwitchedChannel> {
    build_switch_ordered(a, b, false)
}

/// Switch of `a` and `b`; with `swapped` the control `|0⟩` branch applies
/// `b ∘ a` instead of `a ∘ b`.
pub fn build_switch_ordered(
    a: &KrausChannel,
    b: &KrausChannel,
    swapped: bool,
) -> Result<SwitchedChannel> {
    let d = a.d_in();
    if a.d_out() != d {
        return Err(Error::dims(
            "switch (channel a must be square)",
            d,
            a.d_out(),
        ));
    }
    if b.d_in() != d || b.d_out() != d {
        return Err(Error::dims("switch (channel b)", d, b.d_in()));
    }
    a.validate()?;
    b.validate()?;

    let p0 = Operator::ket_bra(2, 0, 0);
    let p1 = Operator::ket_bra(2, 1, 1);
    let mut kraus = Vec::with_capacity(a.kraus().len() * b.kraus().len());
    for e in a.kraus() {
        for f in b.kraus() {
            let ef = e.matmul(f);
            let fe = f.matmul(e);
            let (first, second) = if swapped { (fe, ef) } else { (ef, fe) };
            kraus.push(&p0.tensor(&first) + &p1.tensor(&second));
        }
    }
    let sw = SwitchedChannel {
        inner_a: a.clone(),
        inner_b: b.clone(),
        kraus,
        swapped,
    };
    let deviation = sw.as_channel()?.completeness_deviation();
    if deviation > Tolerances::DEFAULT.completeness {
        return Err(Error::IncompleteChannel { deviation });
    }
    Ok(sw)
}

impl SwitchedChannel {
    /// Target dimension.
    pub fn d(&self) -> usize {
        self.inner_a.d_in()
    }

    pub fn inner_a(&self) -> &KrausChannel {
        &self.inner_a
    }

    pub fn inner_b(&self) -> &KrausChannel {
        &self.inner_b
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    /// The `W_ij`, indexed `i * |b| + j`.
    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    /// The switch as a channel on control ⊗ target.
    pub fn as_channel(&self) -> Result<KrausChannel> {
        KrausChannel::new(self.kraus.clone())
    }

    pub fn apply(
        &self,
        control: &DensityOperator,
        target: &DensityOperator,
    ) -> Result<DensityOperator> {
        if control.dim() != 2 {
            return Err(Error::dims("switch control", 2, control.dim()));
        }
        if target.dim() != self.d() {
            return Err(Error::dims("switch target", self.d(), target.dim()));
        }
        self.as_channel()?.apply(&control.tensor(target))
    }
}

/// Unnormalized target states after measuring the control in `{|+⟩, |−⟩}`.
#[derive(Debug, Clone)]
pub struct ConditionalOutputs {
    pub plus: DensityOperator,
    pub minus: DensityOperator,
    pub prob_plus: f64,
    pub prob_minus: f64,
}

pub fn conditional_outputs(
    sw: &SwitchedChannel,
    target: &DensityOperator,
    control: &DensityOperator,
) -> Result<ConditionalOutputs> {
    let out = sw.apply(control, target)?;
    let dims = [2, sw.d()];
    let (plus, prob_plus) = measure_control(&out, &dims, 0, FourierOutcome::Plus)?;
    let (minus, prob_minus) = measure_control(&out, &dims, 0, FourierOutcome::Minus)?;
    Ok(ConditionalOutputs {
        plus,
        minus,
        prob_plus,
        prob_minus,
    })
}

/// Effective parameters of the switch of two depolarizing channels `D_p`
/// with control `|+⟩`: outcome `±` leaves `weight_± · D_{p_±}` on the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDepolarizingSwitch {
    pub d: usize,
    pub p: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    pub weight_plus: f64,
    pub weight_minus: f64,
}

impl EffectiveDepolarizingSwitch {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "depolarizing strength {p} outside [0, 1]"
            )));
        }
        let d2 = (d * d) as f64;
        let denom = 2.0 * d2 - (d2 - 1.0) * p * p;
        Ok(Self {
            d,
            p,
            p_plus: d2 * (4.0 * p - 3.0 * p * p) / denom,
            p_minus: d2 / (d2 - 1.0),
            weight_plus: denom / (2.0 * d2),
            weight_minus: (d2 - 1.0) * p * p / (2.0 * d2),
        })
    }

    /// `p_plus − (2p − p²)`: the gain over two depolarizers in a fixed order.
    pub fn gap_to_sequential(&self) -> f64 {
        let p = self.p;
        self.p_plus - (2.0 * p - p * p)
    }

    /// `(2d² − (d²−1)p²)(2p − p² − p_plus) − p²(d² − (d²−1)p(2−p))`, zero
    /// in exact arithmetic.
    pub fn identity_residual(&self) -> f64 {
        let p = self.p;
        let d2 = (self.d * self.d) as f64;
        let lhs = (2.0 * d2 - (d2 - 1.0) * p * p) * (2.0 * p - p * p - self.p_plus);
        let rhs = p * p * (d2 - (d2 - 1.0) * p * (2.0 - p));
        lhs - rhs
    }

    pub fn plus_branch(&self) -> Result<WeightedChannel> {
        Ok(WeightedChannel {
            weight: self.weight_plus,
            channel: KrausChannel::depolarizing(self.d, self.p_plus)?,
        })
    }

    pub fn minus_branch(&self) -> Result<WeightedChannel> {
        Ok(WeightedChannel {
            weight: self.weight_minus,
            channel: KrausChannel::depolarizing(self.d, self.p_minus)?,
        })
    }
}

/// Closed-form branch outputs `(weight_+ D_{p_+}(ρ), weight_− D_{p_−}(ρ))`
/// of the switched pair of `D_p`, both unnormalized.
pub fn depolarizing_switch_closed_form(
    d: usize,
    p: f64,
    rho: &DensityOperator,
) -> Result<(DensityOperator, DensityOperator)> {
    if rho.dim() != d {
        return Err(Error::dims("depolarizing switch", d, rho.dim()));
    }
    let eff = EffectiveDepolarizingSwitch::new(d, p)?;
    let branch = |q: f64, w: f64| {
        let mixed = Operator::identity(d).scale_real(rho.trace() / d as f64);
        let op = &rho.op().scale_real(w * (1.0 - q)) + &mixed.scale_real(w * q);
        DensityOperator::from_trusted(op, false)
    };
    Ok((
        branch(eff.p_plus, eff.weight_plus),
        branch(eff.p_minus, eff.weight_minus),
    ))
}

/// The switched noise composed with a qubit T gate, `QS_{±,p} ∘ T`, as
/// weighted trace-preserving channels.
pub fn effective_t_channels(p: f64) -> Result<(WeightedChannel, WeightedChannel)> {
    let eff = EffectiveDepolarizingSwitch::new(2, p)?;
    let t = KrausChannel::unitary(gates::t_gate())?;
    let compose = |w: WeightedChannel| -> Result<WeightedChannel> {
        Ok(WeightedChannel {
            weight: w.weight,
            channel: w.channel.compose(&t)?,
        })
    };
    Ok((compose(eff.plus_branch()?)?, compose(eff.minus_branch()?)?))
}
