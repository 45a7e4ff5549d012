//! Parameter sweeps, threshold search and data export for the switched
//! channel experiments.

mod appendix_c;
mod config;
mod measures;
mod output;
mod sweep;
mod threshold;

pub use appendix_c::{run_appendix_c, InequalityReport, InequalitySummary};
pub use config::{Experiment, Grid, OutputFormat, SweepConfig, SweepTolerances, MIN_THRESHOLD_TOL};
pub use measures::{
    branch_mana, branch_rom, channel_rom, qubit_example_outputs, qutrit_example_outputs,
    self_switch_outputs, weighted_channel_rom, Measure, Resources, ZERO_WEIGHT_TOL,
};
pub use output::{format_float, render_report, render_rows, rows_to_csv, rows_to_json};
pub use sweep::{run, run_fig2, run_fig3, run_figs1, Measured, SweepRow, ValueStatus};
pub use threshold::{find_threshold, is_free, Threshold};
