use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models;
use crate::qswitch::{self, EffectiveDepolarizingSwitch};

use super::config::{Experiment, SweepConfig, SweepTolerances};
use super::measures::{self, Resources};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueStatus {
    Ok,
    /// The measured branch has probability zero, so its normalized state
    /// does not exist.
    ZeroWeight,
    Infeasible,
    NumericalFailure,
    /// Computed, but outside the range a valid result can take.
    Invalid,
    Error,
}

impl ValueStatus {
    pub fn name(self) -> &'static str {
        match self {
            ValueStatus::Ok => "ok",
            ValueStatus::ZeroWeight => "zero_weight",
            ValueStatus::Infeasible => "infeasible",
            ValueStatus::NumericalFailure => "numerical_failure",
            ValueStatus::Invalid => "invalid",
            ValueStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measured {
    pub value: Option<f64>,
    pub status: ValueStatus,
}

impl Measured {
    pub fn ok(value: f64) -> Self {
        Self {
            value: Some(value),
            status: ValueStatus::Ok,
        }
    }

    pub fn from_result(r: Result<f64>, what: &str, p: f64) -> Self {
        match r {
            Ok(v) => Measured::ok(v),
            Err(e) => {
                let status = match e {
                    Error::ZeroTrace { .. } => ValueStatus::ZeroWeight,
                    Error::Infeasible(_) => ValueStatus::Infeasible,
                    Error::NumericalFailure(_) => ValueStatus::NumericalFailure,
                    _ => ValueStatus::Error,
                };
                if status == ValueStatus::ZeroWeight {
                    log::info!("{what} at p={p}: branch has zero weight");
                } else {
                    log::warn!("{what} at p={p}: {e}");
                }
                Self {
                    value: None,
                    status,
                }
            }
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == ValueStatus::Ok
    }
}

/// Floor a quantity must respect, used when re-validating rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Robustness,
    Mana,
    Probability,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub values: Vec<(&'static str, Measured)>,
}

impl SweepRow {
    pub fn get(&self, name: &str) -> Option<&Measured> {
        self.values.iter().find(|(n, _)| *n == name).map(|(_, m)| m)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(|m| m.value)
    }
}

struct RowBuilder {
    p: f64,
    values: Vec<(&'static str, Measured)>,
    kinds: Vec<Kind>,
}

impl RowBuilder {
    fn new(p: f64) -> Self {
        Self {
            p,
            values: Vec::new(),
            kinds: Vec::new(),
        }
    }

    fn push(&mut self, name: &'static str, kind: Kind, r: Result<f64>) {
        self.values
            .push((name, Measured::from_result(r, name, self.p)));
        self.kinds.push(kind);
    }

    /// Marks values outside their admissible range, and probability pairs
    /// that do not sum to one, as invalid.
    fn finish(mut self, tol: &SweepTolerances) -> SweepRow {
        let mut probs = Vec::new();
        for ((name, m), kind) in self.values.iter_mut().zip(&self.kinds) {
            let Some(v) = m.value else { continue };
            let ok = v.is_finite()
                && match kind {
                    Kind::Robustness => v >= 1.0 - tol.lp_tol,
                    Kind::Mana => v >= -tol.mana_tol,
                    Kind::Probability => (-1e-12..=1.0 + 1e-12).contains(&v),
                    Kind::Plain => true,
                };
            if *kind == Kind::Probability {
                probs.push(v);
            }
            if !ok {
                log::warn!("{name} at p={} out of range: {v}", self.p);
                m.status = ValueStatus::Invalid;
            }
        }
        if probs.len() == 2 && (probs[0] + probs[1] - 1.0).abs() > 1e-9 {
            log::warn!(
                "branch probabilities at p={} sum to {}",
                self.p,
                probs[0] + probs[1]
            );
            for ((_, m), kind) in self.values.iter_mut().zip(&self.kinds) {
                if *kind == Kind::Probability {
                    m.status = ValueStatus::Invalid;
                }
            }
        }
        SweepRow {
            p: self.p,
            values: self.values,
        }
    }
}

/// Evaluates `f` on every grid point, in parallel, keeping grid order.
fn sweep<F>(config: &SweepConfig, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(f64) -> SweepRow + Sync + Send,
{
    config.validate()?;
    let points = config.grid.points();
    let run = || points.par_iter().map(|&p| f(p)).collect::<Vec<_>>();
    match config.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

/// Qubit example: `R_*(N_p)`, the robustness of both renormalized switch
/// outputs for target and control `|+⟩`, and the outcome probabilities.
pub fn run_fig2(config: &SweepConfig, res: &Resources) -> Result<Vec<SweepRow>> {
    sweep(config, |p| {
        let mut row = RowBuilder::new(p);
        row.push(
            "channel_robustness",
            Kind::Robustness,
            models::qubit_example_channel(p).and_then(|ch| measures::channel_rom(&ch, res)),
        );
        match measures::qubit_example_outputs(p) {
            Ok(out) => {
                row.push(
                    "rom_plus",
                    Kind::Robustness,
                    measures::branch_rom(&out.plus, out.prob_plus, res),
                );
                row.push(
                    "rom_minus",
                    Kind::Robustness,
                    measures::branch_rom(&out.minus, out.prob_minus, res),
                );
                row.push("prob_plus", Kind::Probability, Ok(out.prob_plus));
                row.push("prob_minus", Kind::Probability, Ok(out.prob_minus));
            }
            Err(e) => {
                for (name, kind) in [
                    ("rom_plus", Kind::Robustness),
                    ("rom_minus", Kind::Robustness),
                    ("prob_plus", Kind::Probability),
                    ("prob_minus", Kind::Probability),
                ] {
                    row.push(name, kind, Err(e.clone()));
                }
            }
        }
        row.finish(&config.tolerances)
    })
}

/// T gate under depolarizing noise: `R_*(D_p ∘ D_p ∘ T)` against the two
/// normalized switched branches composed with `T`.
pub fn run_fig3(config: &SweepConfig, res: &Resources) -> Result<Vec<SweepRow>> {
    sweep(config, |p| {
        let mut row = RowBuilder::new(p);
        row.push(
            "robustness_sequential_t",
            Kind::Robustness,
            models::two_depolarized_t(p).and_then(|ch| measures::channel_rom(&ch, res)),
        );
        match qswitch::effective_t_channels(p) {
            Ok((plus, minus)) => {
                row.push(
                    "robustness_switch_plus_t",
                    Kind::Robustness,
                    measures::weighted_channel_rom(&plus, res),
                );
                row.push(
                    "robustness_switch_minus_t",
                    Kind::Robustness,
                    measures::weighted_channel_rom(&minus, res),
                );
                row.push("weight_plus", Kind::Probability, Ok(plus.weight));
                row.push("weight_minus", Kind::Probability, Ok(minus.weight));
            }
            Err(e) => {
                for (name, kind) in [
                    ("robustness_switch_plus_t", Kind::Robustness),
                    ("robustness_switch_minus_t", Kind::Robustness),
                    ("weight_plus", Kind::Probability),
                    ("weight_minus", Kind::Probability),
                ] {
                    row.push(name, kind, Err(e.clone()));
                }
            }
        }
        let eff = EffectiveDepolarizingSwitch::new(2, p);
        row.push("p_plus", Kind::Plain, eff.map(|e| e.p_plus));
        row.finish(&config.tolerances)
    })
}

/// Qutrit example: mana of the channel and of both renormalized switch
/// outputs for target `(|0⟩+|1⟩+|2⟩)/√3` and control `|+⟩`.
pub fn run_figs1(config: &SweepConfig, res: &Resources) -> Result<Vec<SweepRow>> {
    let variant = config.qutrit_kraus;
    log::info!("qutrit example uses the {} Kraus set", variant.name());
    sweep(config, |p| {
        let mut row = RowBuilder::new(p);
        row.push(
            "mana_channel",
            Kind::Mana,
            models::qutrit_example_channel(p, variant)
                .and_then(|ch| crate::wigner::mana_channel(&ch, &res.frame3)),
        );
        match measures::qutrit_example_outputs(p, variant) {
            Ok(out) => {
                row.push(
                    "mana_plus",
                    Kind::Mana,
                    measures::branch_mana(&out.plus, out.prob_plus, res),
                );
                row.push(
                    "mana_minus",
                    Kind::Mana,
                    measures::branch_mana(&out.minus, out.prob_minus, res),
                );
                row.push("prob_plus", Kind::Probability, Ok(out.prob_plus));
                row.push("prob_minus", Kind::Probability, Ok(out.prob_minus));
            }
            Err(e) => {
                for (name, kind) in [
                    ("mana_plus", Kind::Mana),
                    ("mana_minus", Kind::Mana),
                    ("prob_plus", Kind::Probability),
                    ("prob_minus", Kind::Probability),
                ] {
                    row.push(name, kind, Err(e.clone()));
                }
            }
        }
        row.finish(&config.tolerances)
    })
}

/// Runs the sweep named by `config.experiment`. The inequality check
/// produces a report instead; see [`super::run_appendix_c`].
pub fn run(config: &SweepConfig, res: &Resources) -> Result<Vec<SweepRow>> {
    match config.experiment {
        Experiment::Fig2QubitExample => run_fig2(config, res),
        Experiment::Fig3DepolarizedT => run_fig3(config, res),
        Experiment::FigS1QutritExample => run_figs1(config, res),
        Experiment::AppendixCInequality => Err(Error::InvalidArgument(
            "the inequality check produces a report, not sweep rows".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::Grid;

    #[test]
    fn fig2_small_grid() {
        let res = Resources::new().unwrap();
        let mut cfg = SweepConfig::new(Experiment::Fig2QubitExample);
        cfg.grid = Grid::new(0.0, 0.5, 0.25).unwrap();
        cfg.jobs = Some(2);
        let rows = run_fig2(&cfg, &res).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows[0].get("rom_minus").unwrap().status,
            ValueStatus::ZeroWeight
        );
        assert!(rows[0].value("channel_robustness").unwrap() > 1.1);
        let last = &rows[2];
        assert!((last.value("channel_robustness").unwrap() - 1.0).abs() < 1e-6);
        assert!(last.value("rom_plus").unwrap() > 1.0 + 1e-6);
        assert!((last.value("rom_minus").unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn validation_marks_bad_values() {
        let tol = SweepTolerances::default();
        let mut row = RowBuilder::new(0.5);
        row.push("r", Kind::Robustness, Ok(0.5));
        row.push("m", Kind::Mana, Ok(0.1));
        row.push("a", Kind::Probability, Ok(0.7));
        row.push("b", Kind::Probability, Ok(0.7));
        let row = row.finish(&tol);
        assert_eq!(row.get("r").unwrap().status, ValueStatus::Invalid);
        assert_eq!(row.get("m").unwrap().status, ValueStatus::Ok);
        assert_eq!(row.get("a").unwrap().status, ValueStatus::Invalid);
    }

    #[test]
    fn printed_qutrit_set_is_flagged() {
        let res = Resources::new().unwrap();
        let mut cfg = SweepConfig::new(Experiment::FigS1QutritExample);
        cfg.grid = Grid::new(0.5, 0.6, 0.1).unwrap();
        cfg.qutrit_kraus = crate::models::QutritKrausVariant::Printed;
        let rows = run_figs1(&cfg, &res).unwrap();
        assert_eq!(rows[0].get("mana_plus").unwrap().status, ValueStatus::Error);
    }
}
