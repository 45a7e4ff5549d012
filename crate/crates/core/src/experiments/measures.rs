//! Point evaluations shared by sweeps and the threshold finder.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::{KrausChannel, WeightedChannel};
use crate::error::{Error, Result};
use crate::models::{self, QutritKrausVariant};
use crate::qswitch::{self, ConditionalOutputs};
use crate::robustness;
use crate::stabilizer::{cspo_choi_atoms, ChoiAtom, StabilizerDictionary};
use crate::state::DensityOperator;
use crate::wigner::{self, PhaseSpaceFrame};

/// Branch probabilities below this are treated as an outcome that never occurs.
pub const ZERO_WEIGHT_TOL: f64 = 1e-12;

/// Read-only data every evaluation needs: the one-qubit stabilizer states,
/// the two-qubit Choi atoms and the qutrit phase-space frame.
#[derive(Debug, Clone)]
pub struct Resources {
    pub dict1: StabilizerDictionary,
    pub atoms: Vec<ChoiAtom>,
    pub frame3: PhaseSpaceFrame,
}

impl Resources {
    pub fn new() -> Result<Self> {
        Ok(Self {
            dict1: StabilizerDictionary::enumerate(1)?,
            atoms: cspo_choi_atoms(&StabilizerDictionary::enumerate(2)?)?,
            frame3: PhaseSpaceFrame::new(3)?,
        })
    }
}

/// Switch of a channel with itself, target `target`, control `|+⟩`.
pub fn self_switch_outputs(
    ch: &KrausChannel,
    target: &DensityOperator,
) -> Result<ConditionalOutputs> {
    let sw = qswitch::build_switch(ch, ch)?;
    qswitch::conditional_outputs(&sw, target, &DensityOperator::plus(2))
}

pub fn qubit_example_outputs(p: f64) -> Result<ConditionalOutputs> {
    self_switch_outputs(
        &models::qubit_example_channel(p)?,
        &DensityOperator::plus(2),
    )
}

pub fn qutrit_example_outputs(p: f64, variant: QutritKrausVariant) -> Result<ConditionalOutputs> {
    self_switch_outputs(
        &models::qutrit_example_channel(p, variant)?,
        &DensityOperator::plus(3),
    )
}

fn check_weight(prob: f64) -> Result<()> {
    if prob < ZERO_WEIGHT_TOL {
        Err(Error::ZeroTrace { trace: prob })
    } else {
        Ok(())
    }
}

/// Robustness of the renormalized branch state.
pub fn branch_rom(branch: &DensityOperator, prob: f64, res: &Resources) -> Result<f64> {
    check_weight(prob)?;
    Ok(robustness::rom_state(branch, &res.dict1)?.value)
}

/// Mana of the renormalized branch state.
pub fn branch_mana(branch: &DensityOperator, prob: f64, res: &Resources) -> Result<f64> {
    check_weight(prob)?;
    wigner::mana_state(branch, &res.frame3)
}

pub fn channel_rom(ch: &KrausChannel, res: &Resources) -> Result<f64> {
    Ok(robustness::channel_robustness(ch, &res.atoms)?.value)
}

/// Channel robustness of a weighted branch after dividing out its weight.
pub fn weighted_channel_rom(branch: &WeightedChannel, res: &Resources) -> Result<f64> {
    log::info!(
        "normalizing branch channel of weight {:.12e} by factor {:.12e}",
        branch.weight,
        if branch.weight > 0.0 {
            1.0 / branch.weight
        } else {
            f64::INFINITY
        }
    );
    channel_rom(&branch.channel, res)
}

/// A scalar quantity of one noise parameter whose free region starts where
/// it drops to its floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `R_*` of the qubit example channel.
    ExampleChannelRobustness,
    /// `R` of the renormalized `+` branch of the switched qubit example.
    ExampleRomPlus,
    /// `R` of the renormalized `−` branch of the switched qubit example.
    ExampleRomMinus,
    /// `R_*(D_p ∘ D_p ∘ T)`.
    SequentialTRobustness,
    /// `R_*` of the normalized switched `+` branch composed with `T`.
    SwitchPlusTRobustness,
    /// `R_*` of the normalized switched `−` branch composed with `T`.
    SwitchMinusTRobustness,
    /// Mana of the qutrit example channel.
    QutritChannelMana,
    /// Mana of the renormalized `+` branch of the switched qutrit example.
    QutritManaPlus,
    /// Mana of the renormalized `−` branch of the switched qutrit example.
    QutritManaMinus,
}

impl Measure {
    pub const ALL: [Measure; 9] = [
        Measure::ExampleChannelRobustness,
        Measure::ExampleRomPlus,
        Measure::ExampleRomMinus,
        Measure::SequentialTRobustness,
        Measure::SwitchPlusTRobustness,
        Measure::SwitchMinusTRobustness,
        Measure::QutritChannelMana,
        Measure::QutritManaPlus,
        Measure::QutritManaMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::ExampleChannelRobustness => "channel_robustness",
            Measure::ExampleRomPlus => "rom_plus",
            Measure::ExampleRomMinus => "rom_minus",
            Measure::SequentialTRobustness => "robustness_sequential_t",
            Measure::SwitchPlusTRobustness => "robustness_switch_plus_t",
            Measure::SwitchMinusTRobustness => "robustness_switch_minus_t",
            Measure::QutritChannelMana => "mana_channel",
            Measure::QutritManaPlus => "mana_plus",
            Measure::QutritManaMinus => "mana_minus",
        }
    }

    /// Value the measure takes on free objects.
    pub fn floor(self) -> f64 {
        if self.is_mana() {
            0.0
        } else {
            1.0
        }
    }

    pub fn is_mana(self) -> bool {
        matches!(
            self,
            Measure::QutritChannelMana | Measure::QutritManaPlus | Measure::QutritManaMinus
        )
    }

    /// Bracket on which the measure changes between magic and free exactly
    /// once. The `+` branch measures become magic after the channel itself
    /// turns free, so their brackets start above that point.
    pub fn default_bracket(self) -> (f64, f64) {
        match self {
            Measure::ExampleRomPlus => (0.45, 1.0),
            Measure::QutritManaPlus => (0.6, 1.0),
            Measure::SequentialTRobustness | Measure::SwitchPlusTRobustness => (0.0, 0.45),
            _ => (0.0, 1.0),
        }
    }

    pub fn evaluate(self, p: f64, res: &Resources, qutrit: QutritKrausVariant) -> Result<f64> {
        match self {
            Measure::ExampleChannelRobustness => {
                channel_rom(&models::qubit_example_channel(p)?, res)
            }
            Measure::ExampleRomPlus => {
                let out = qubit_example_outputs(p)?;
                branch_rom(&out.plus, out.prob_plus, res)
            }
            Measure::ExampleRomMinus => {
                let out = qubit_example_outputs(p)?;
                branch_rom(&out.minus, out.prob_minus, res)
            }
            Measure::SequentialTRobustness => channel_rom(&models::two_depolarized_t(p)?, res),
            Measure::SwitchPlusTRobustness => {
                weighted_channel_rom(&qswitch::effective_t_channels(p)?.0, res)
            }
            Measure::SwitchMinusTRobustness => {
                weighted_channel_rom(&qswitch::effective_t_channels(p)?.1, res)
            }
            Measure::QutritChannelMana => {
                wigner::mana_channel(&models::qutrit_example_channel(p, qutrit)?, &res.frame3)
            }
            Measure::QutritManaPlus => {
                let out = qutrit_example_outputs(p, qutrit)?;
                branch_mana(&out.plus, out.prob_plus, res)
            }
            Measure::QutritManaMinus => {
                let out = qutrit_example_outputs(p, qutrit)?;
                branch_mana(&out.minus, out.prob_minus, res)
            }
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Measure::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown measure '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("bogus".parse::<Measure>().is_err());
    }

    #[test]
    fn zero_weight_branch_is_reported() {
        let res = Resources::new().unwrap();
        let err = Measure::ExampleRomMinus
            .evaluate(0.0, &res, QutritKrausVariant::Corrected)
            .unwrap_err();
        assert!(matches!(err, Error::ZeroTrace { .. }));
    }
}
