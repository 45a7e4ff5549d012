use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::QutritKrausVariant;
use crate::tolerance::{FREE_ROBUSTNESS_TOL, MANA_ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Fig2QubitExample,
    Fig3DepolarizedT,
    FigS1QutritExample,
    AppendixCInequality,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2QubitExample => "fig2_qubit_example",
            Experiment::Fig3DepolarizedT => "fig3_depolarized_T",
            Experiment::FigS1QutritExample => "figS1_qutrit_example",
            Experiment::AppendixCInequality => "appendixC_inequality",
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Experiment::Fig2QubitExample => Grid::new(0.0, 1.0, 0.01),
            Experiment::Fig3DepolarizedT => Grid::new(0.0, 0.45, 0.005),
            Experiment::FigS1QutritExample => Grid::new(0.01, 1.0, 0.01),
            Experiment::AppendixCInequality => Grid::new(1e-4, 1.0, 1e-4),
        }
        .expect("default grids are valid")
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2_qubit_example" | "fig2" => Ok(Experiment::Fig2QubitExample),
            "fig3_depolarized_t" | "fig3" => Ok(Experiment::Fig3DepolarizedT),
            "figs1_qutrit_example" | "figs1" => Ok(Experiment::FigS1QutritExample),
            "appendixc_inequality" | "appendix-c" | "appendixc" => {
                Ok(Experiment::AppendixCInequality)
            }
            _ => Err(Error::InvalidArgument(format!("unknown experiment '{s}'"))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evenly spaced parameter values `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if !(0.0 <= start && start < stop && stop <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid needs 0 <= start < stop <= 1, got start={start} stop={stop}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive, got {step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Number of points. The endpoint is included when it lies on the grid
    /// up to rounding.
    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| (self.start + k as f64 * self.step).min(self.stop))
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:step`, e.g. `0:1:0.01`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "grid '{s}' is not start:stop:step"
            )));
        }
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad grid value '{x}': {e}")))
        };
        Grid::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepTolerances {
    /// Slack on robustness floors: a value below `1 + lp_tol` counts as free.
    pub lp_tol: f64,
    /// Width of the final bisection bracket.
    pub threshold_tol: f64,
    /// Mana below this counts as zero.
    pub mana_tol: f64,
}

pub const MIN_THRESHOLD_TOL: f64 = 1e-4;

impl Default for SweepTolerances {
    fn default() -> Self {
        Self {
            lp_tol: FREE_ROBUSTNESS_TOL,
            threshold_tol: MIN_THRESHOLD_TOL,
            mana_tol: MANA_ZERO_TOL,
        }
    }
}

impl SweepTolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.lp_tol > 0.0 && self.mana_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.threshold_tol < MIN_THRESHOLD_TOL {
            return Err(Error::InvalidArgument(format!(
                "threshold_tol must be at least {MIN_THRESHOLD_TOL}, got {}",
                self.threshold_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidArgument(format!(
                "unknown output format '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub grid: Grid,
    pub tolerances: SweepTolerances,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub qutrit_kraus: QutritKrausVariant,
    /// Dimensions checked by the switched-versus-sequential inequality.
    pub dims: Vec<usize>,
}

impl SweepConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            grid: experiment.default_grid(),
            tolerances: SweepTolerances::default(),
            output_path: None,
            format: OutputFormat::default(),
            jobs: None,
            qutrit_kraus: QutritKrausVariant::Corrected,
            dims: vec![2, 3, 5, 10],
        }
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.grid.start, self.grid.stop, self.grid.step)?;
        self.tolerances.validate()?;
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be at least 1".into()));
        }
        if self.dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidArgument(
                "dimensions must be at least 2".into(),
            ));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys: `experiment`,
    /// `grid` (`start:stop:step`) or `grid.start`/`grid.stop`/`grid.step`,
    /// `lp_tol`, `threshold_tol`, `mana_tol`, `output_path`, `format`,
    /// `jobs`, `qutrit_kraus`, `dims` (comma separated).
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("line {}: expected key = value", n + 1))
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let experiment = pairs
            .iter()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| Error::InvalidArgument("config is missing 'experiment'".into()))?
            .1
            .parse::<Experiment>()?;
        let mut cfg = SweepConfig::new(experiment);
        let (mut start, mut stop, mut step) = (cfg.grid.start, cfg.grid.stop, cfg.grid.step);
        let float = |k: &str, v: &str| {
            v.parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("{k}: {e}")))
        };
        for (k, v) in &pairs {
            match k.as_str() {
                "experiment" => {}
                "grid" => {
                    let g: Grid = v.parse()?;
                    (start, stop, step) = (g.start, g.stop, g.step);
                }
                "grid.start" => start = float(k, v)?,
                "grid.stop" => stop = float(k, v)?,
                "grid.step" => step = float(k, v)?,
                "lp_tol" => cfg.tolerances.lp_tol = float(k, v)?,
                "threshold_tol" => cfg.tolerances.threshold_tol = float(k, v)?,
                "mana_tol" => cfg.tolerances.mana_tol = float(k, v)?,
                "output_path" => cfg.output_path = Some(PathBuf::from(v)),
                "format" => cfg.format = v.parse()?,
                "jobs" => {
                    cfg.jobs = Some(
                        v.parse()
                            .map_err(|e| Error::InvalidArgument(format!("jobs: {e}")))?,
                    )
                }
                "qutrit_kraus" => {
                    cfg.qutrit_kraus = match v.as_str() {
                        "printed" => QutritKrausVariant::Printed,
                        "corrected" => QutritKrausVariant::Corrected,
                        _ => {
                            return Err(Error::InvalidArgument(format!(
                                "unknown qutrit_kraus '{v}'"
                            )))
                        }
                    }
                }
                "dims" => {
                    cfg.dims = v
                        .split(',')
                        .map(|x| {
                            x.trim()
                                .parse()
                                .map_err(|e| Error::InvalidArgument(format!("dims: {e}")))
                        })
                        .collect::<Result<_>>()?
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown config key '{other}'"
                    )))
                }
            }
        }
        cfg.grid = Grid::new(start, stop, step)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_sizes() {
        assert_eq!(Experiment::Fig2QubitExample.default_grid().len(), 101);
        assert_eq!(Experiment::Fig3DepolarizedT.default_grid().len(), 91);
        assert_eq!(Experiment::FigS1QutritExample.default_grid().len(), 100);
        assert_eq!(Experiment::AppendixCInequality.default_grid().len(), 10_000);
        let pts = Experiment::Fig3DepolarizedT.default_grid().points();
        assert_eq!(pts[0], 0.0);
        assert!((pts[90] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.5, 0.5, 0.1).is_err());
        assert!(Grid::new(-0.1, 0.5, 0.1).is_err());
        assert!(Grid::new(0.0, 1.5, 0.1).is_err());
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
        let g: Grid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn parse_config_file() {
        let text = "# sweep\nexperiment = fig3_depolarized_T\ngrid = 0:0.2:0.05\nlp_tol = 1e-7\nformat = json\njobs = 2\n";
        let cfg = SweepConfig::parse(text).unwrap();
        assert_eq!(cfg.experiment, Experiment::Fig3DepolarizedT);
        assert_eq!(cfg.grid.len(), 5);
        assert_eq!(cfg.tolerances.lp_tol, 1e-7);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.jobs, Some(2));
    }

    #[test]
    fn config_errors() {
        assert!(SweepConfig::parse("grid = 0:1:0.1").is_err());
        assert!(SweepConfig::parse("experiment = fig2\nthreshold_tol = 1e-6").is_err());
        assert!(SweepConfig::parse("experiment = fig2\ncolour = red").is_err());
        assert!(SweepConfig::parse("experiment = fig2\njobs = 0").is_err());
        assert!(SweepConfig::parse("experiment = fig2\nno equals sign").is_err());
    }
}
