//! Discrete phase space for odd prime dimension.
//!
//! Points `u = (a1, a2) ∈ Z_d × Z_d` carry Heisenberg-Weyl operators
//! `T_u = τ^{−a1·a2} Z^{a1} X^{a2}` with `τ = e^{(d+1)πi/d}`, and phase-point
//! operators `A_0 = (1/d) Σ_u T_u`, `A_u = T_u A_0 T_u†`. Wigner functions are
//! `W_ρ(u) = Tr[A_u ρ]/d`; mana is the natural log of their ℓ1 norm.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::gates;
use crate::operator::{phase, Operator, C64};
use crate::state::DensityOperator;
use crate::tolerance::MANA_ZERO_TOL;

/// A phase-space point `(a1, a2)`.
pub type PhasePoint = (usize, usize);

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

#[derive(Debug, Clone)]
pub struct PhaseSpaceFrame {
    d: usize,
    boost: Operator,
    shift: Operator,
    tau: C64,
    heisenberg_weyl: Vec<Operator>,
    phase_points: Vec<Operator>,
}

impl PhaseSpaceFrame {
    pub fn new(d: usize) -> Result<Self> {
        if d.is_multiple_of(2) || !is_prime(d) {
            return Err(Error::InvalidArgument(format!(
                "phase-space frames need an odd prime dimension, got {d}"
            )));
        }
        let boost = gates::boost(d);
        let shift = gates::shift(d);
        let tau = phase((d as f64 + 1.0) * std::f64::consts::PI / d as f64);
        let mut heisenberg_weyl = Vec::with_capacity(d * d);
        for a1 in 0..d {
            for a2 in 0..d {
                // τ has order d, so the exponent can be reduced mod d
                let exponent = (d - (a1 * a2) % d) % d;
                let t = boost
                    .pow(a1)
                    .matmul(&shift.pow(a2))
                    .scale(tau.powu(exponent as u32));
                heisenberg_weyl.push(t);
            }
        }
        let a0 = heisenberg_weyl
            .iter()
            .fold(Operator::zeros(d, d), |acc, t| &acc + t)
            .scale_real(1.0 / d as f64);
        let phase_points = heisenberg_weyl.iter().map(|t| t.conjugate(&a0)).collect();
        Ok(Self {
            d,
            boost,
            shift,
            tau,
            heisenberg_weyl,
            phase_points,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn boost(&self) -> &Operator {
        &self.boost
    }

    pub fn shift(&self) -> &Operator {
        &self.shift
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn n_points(&self) -> usize {
        self.d * self.d
    }

    pub fn index(&self, u: PhasePoint) -> usize {
        (u.0 % self.d) * self.d + (u.1 % self.d)
    }

    pub fn point(&self, index: usize) -> PhasePoint {
        (index / self.d, index % self.d)
    }

    pub fn heisenberg_weyl(&self, u: PhasePoint) -> &Operator {
        &self.heisenberg_weyl[self.index(u)]
    }

    pub fn phase_point(&self, u: PhasePoint) -> &Operator {
        &self.phase_points[self.index(u)]
    }

    /// Phase-point operators in index order (`a1·d + a2`).
    pub fn phase_points(&self) -> &[Operator] {
        &self.phase_points
    }

    /// Wigner function `Tr[A_u X]/d` of any operator, indexed like
    /// [`PhaseSpaceFrame::phase_points`]. Imaginary parts are discarded.
    pub fn wigner_of_operator(&self, x: &Operator) -> Result<WignerFunction> {
        if !x.is_square() || x.rows() != self.d {
            return Err(Error::dims("wigner", self.d, x.rows()));
        }
        let values = self
            .phase_points
            .iter()
            .map(|a| a.trace_product(x).re / self.d as f64)
            .collect();
        Ok(WignerFunction { d: self.d, values })
    }
}

/// Real values over `Z_d × Z_d`, indexed by `a1·d + a2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerFunction {
    d: usize,
    values: Vec<f64>,
}

impl WignerFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, u: PhasePoint) -> f64 {
        self.values[(u.0 % self.d) * self.d + u.1 % self.d]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Discrete Wigner function of a normalized state.
pub fn wigner_of_state(rho: &DensityOperator, frame: &PhaseSpaceFrame) -> Result<WignerFunction> {
    if !rho.is_normalized() {
        return Err(Error::NotNormalized { trace: rho.trace() });
    }
    frame.wigner_of_operator(rho.op())
}

/// Mana `ln Σ_u |W_ρ(u)|`; unnormalized inputs are renormalized first.
pub fn mana_state(rho: &DensityOperator, frame: &PhaseSpaceFrame) -> Result<f64> {
    let (state, _) = rho.normalize()?;
    let w = wigner_of_state(&state, frame)?;
    Ok(w.l1_norm().ln().max(0.0))
}

/// `W_N(v|u)` for `v` over the output frame and `u` over the input frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelWigner {
    n_in: usize,
    n_out: usize,
    /// row-major in `u`: `values[u * n_out + v]`
    values: Vec<f64>,
}

impl ChannelWigner {
    pub fn get(&self, v: usize, u: usize) -> f64 {
        self.values[u * self.n_out + v]
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Values `W(·|u)` for one input point.
    pub fn row(&self, u: usize) -> &[f64] {
        &self.values[u * self.n_out..(u + 1) * self.n_out]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &ChannelWigner) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_frames(
    ch: &KrausChannel,
    frame_in: &PhaseSpaceFrame,
    frame_out: &PhaseSpaceFrame,
) -> Result<()> {
    if ch.d_in() != frame_in.d() {
        return Err(Error::dims("channel Wigner input", frame_in.d(), ch.d_in()));
    }
    if ch.d_out() != frame_out.d() {
        return Err(Error::dims(
            "channel Wigner output",
            frame_out.d(),
            ch.d_out(),
        ));
    }
    Ok(())
}

/// `W_N(v|u) = (1/d_B) Tr[A_B^v N(A_A^u)]`.
pub fn wigner_of_channel(
    ch: &KrausChannel,
    frame_in: &PhaseSpaceFrame,
    frame_out: &PhaseSpaceFrame,
) -> Result<ChannelWigner> {
    check_frames(ch, frame_in, frame_out)?;
    let d_out = frame_out.d() as f64;
    let mut values = Vec::with_capacity(frame_in.n_points() * frame_out.n_points());
    for a_u in frame_in.phase_points() {
        let image = ch.apply_operator(a_u)?;
        values.extend(
            frame_out
                .phase_points()
                .iter()
                .map(|a_v| a_v.trace_product(&image).re / d_out),
        );
    }
    Ok(ChannelWigner {
        n_in: frame_in.n_points(),
        n_out: frame_out.n_points(),
        values,
    })
}

/// Same quantity evaluated on the Choi state,
/// `W_N(v|u) = (d_A/d_B) Tr[((A_A^u)ᵀ ⊗ A_B^v) J_N]`, where the factor `d_A`
/// undoes the `1/d_A` normalization of `J_N`.
pub fn wigner_of_channel_via_choi(
    ch: &KrausChannel,
    frame_in: &PhaseSpaceFrame,
    frame_out: &PhaseSpaceFrame,
) -> Result<ChannelWigner> {
    check_frames(ch, frame_in, frame_out)?;
    let choi = ch.choi()?;
    let scale = frame_in.d() as f64 / frame_out.d() as f64;
    let mut values = Vec::with_capacity(frame_in.n_points() * frame_out.n_points());
    for a_u in frame_in.phase_points() {
        let a_t = a_u.transpose();
        for a_v in frame_out.phase_points() {
            values.push(a_t.tensor(a_v).trace_product(choi.op()).re * scale);
        }
    }
    Ok(ChannelWigner {
        n_in: frame_in.n_points(),
        n_out: frame_out.n_points(),
        values,
    })
}

/// Mana of a channel, `ln max_u Σ_v |W_N(v|u)|`.
pub fn mana_channel(ch: &KrausChannel, frame: &PhaseSpaceFrame) -> Result<f64> {
    let w = wigner_of_channel(ch, frame, frame)?;
    let best = (0..w.n_in())
        .map(|u| w.row(u).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(best.ln().max(0.0))
}

/// CPWP test on the Choi-state Wigner function. Returns the verdict and the
/// most negative value found.
pub fn is_cpwp(ch: &KrausChannel, frame: &PhaseSpaceFrame, tol: f64) -> Result<(bool, f64)> {
    let w = wigner_of_channel_via_choi(ch, frame, frame)?;
    let min = w.min();
    Ok((min >= -tol, min))
}

/// Mana below [`MANA_ZERO_TOL`] counts as zero.
pub fn is_zero_mana(m: f64) -> bool {
    m < MANA_ZERO_TOL
}
