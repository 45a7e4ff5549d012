//! ℓ1-norm minimization over affine constraints.
//!
//! An [`AffineL1Problem`] asks for coefficients `q` minimizing `Σ|q_i|`
//! subject to `Σ q_i a_i = t` plus optional extra equalities. Free variables
//! are split into non-negative pairs and the program goes to the embedded
//! simplex in [`simplex`].

pub mod simplex;

use std::fmt::Write as _;

use crate::error::{Error, Result};

use self::simplex::{SimplexOutcome, StandardForm};

pub const DEFAULT_MAX_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineL1Problem {
    /// One real vector per atom, all of the target's length.
    pub atoms: Vec<Vec<f64>>,
    pub target: Vec<f64>,
    /// `(coefficient per atom, rhs)` rows appended to the reconstruction rows.
    pub extra_equalities: Vec<(Vec<f64>, f64)>,
    /// When true each coefficient is free (split as `q⁺ − q⁻`); otherwise
    /// coefficients are constrained non-negative.
    pub sign_split: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Solution {
    /// Minimal `Σ|q_i|`; `NaN` unless optimal.
    pub value: f64,
    pub coefficients: Vec<f64>,
    pub status: LpStatus,
    /// Largest absolute violation over all equality rows.
    pub residual: f64,
    pub duality_gap: f64,
    pub iterations: usize,
}

impl L1Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn failed(status: LpStatus, n_atoms: usize, iterations: usize) -> Self {
        Self {
            value: f64::NAN,
            coefficients: vec![0.0; n_atoms],
            status,
            residual: f64::NAN,
            duality_gap: f64::NAN,
            iterations,
        }
    }

    /// Converts non-optimal outcomes into errors.
    pub fn into_result(self, context: &str) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible(context.to_string())),
            LpStatus::NumericalFailure => Err(Error::NumericalFailure(format!(
                "{context} (after {} iterations)",
                self.iterations
            ))),
        }
    }
}

impl AffineL1Problem {
    pub fn validate(&self) -> Result<()> {
        let len = self.target.len();
        if self.atoms.is_empty() {
            return Err(Error::InvalidArgument("ℓ1 problem has no atoms".into()));
        }
        for a in &self.atoms {
            if a.len() != len {
                return Err(Error::dims("AffineL1Problem atom", len, a.len()));
            }
        }
        for (row, _) in &self.extra_equalities {
            if row.len() != self.atoms.len() {
                return Err(Error::dims(
                    "AffineL1Problem extra equality",
                    self.atoms.len(),
                    row.len(),
                ));
            }
        }
        let finite = self.target.iter().all(|x| x.is_finite())
            && self.atoms.iter().flatten().all(|x| x.is_finite())
            && self
                .extra_equalities
                .iter()
                .all(|(r, b)| b.is_finite() && r.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::InvalidArgument(
                "ℓ1 problem data must be finite".into(),
            ));
        }
        Ok(())
    }

    fn n_variables(&self) -> usize {
        self.atoms.len() * if self.sign_split { 2 } else { 1 }
    }

    fn standard_form(&self) -> StandardForm {
        let n_atoms = self.atoms.len();
        let n = self.n_variables();
        let column = |row: &dyn Fn(usize) -> f64| -> Vec<f64> {
            let mut out = Vec::with_capacity(n);
            for i in 0..n_atoms {
                out.push(row(i));
            }
            if self.sign_split {
                for i in 0..n_atoms {
                    out.push(-row(i));
                }
            }
            out
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..self.target.len() {
            a.push(column(&|i| self.atoms[i][k]));
            b.push(self.target[k]);
        }
        for (coeffs, rhs) in &self.extra_equalities {
            a.push(column(&|i| coeffs[i]));
            b.push(*rhs);
        }
        StandardForm {
            a,
            b,
            c: vec![1.0; n],
        }
    }

    fn residual(&self, q: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.target.len() {
            let s: f64 = self.atoms.iter().zip(q).map(|(a, q)| a[k] * q).sum();
            worst = worst.max((s - self.target[k]).abs());
        }
        for (coeffs, rhs) in &self.extra_equalities {
            let s: f64 = coeffs.iter().zip(q).map(|(c, q)| c * q).sum();
            worst = worst.max((s - rhs).abs());
        }
        worst
    }

    /// Writes the split program in CPLEX LP text format.
    pub fn to_lp_format(&self) -> String {
        let sf = self.standard_form();
        let n_atoms = self.atoms.len();
        let name = |j: usize| {
            if self.sign_split {
                if j < n_atoms {
                    format!("qp{j}")
                } else {
                    format!("qm{}", j - n_atoms)
                }
            } else {
                format!("q{j}")
            }
        };
        let mut out = String::new();
        out.push_str("\\ l1 minimization\nMinimize\n obj:");
        for j in 0..sf.c.len() {
            let _ = write!(out, " + {}", name(j));
        }
        out.push_str("\nSubject To\n");
        for (i, (row, rhs)) in sf.a.iter().zip(&sf.b).enumerate() {
            let _ = write!(out, " c{i}:");
            let mut any = false;
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    let _ = write!(
                        out,
                        " {} {:.17e} {}",
                        if v < 0.0 { '-' } else { '+' },
                        v.abs(),
                        name(j)
                    );
                    any = true;
                }
            }
            if !any {
                let _ = write!(out, " 0 {}", name(0));
            }
            let _ = writeln!(out, " = {:.17e}", rhs);
        }
        out.push_str("Bounds\n");
        for j in 0..sf.c.len() {
            let _ = writeln!(out, " {} >= 0", name(j));
        }
        out.push_str("End\n");
        out
    }
}

/// Solves `min Σ|q_i|` with the embedded simplex.
pub fn solve_l1(problem: &AffineL1Problem) -> Result<L1Solution> {
    solve_l1_with_limit(problem, DEFAULT_MAX_ITERATIONS)
}

pub fn solve_l1_with_limit(problem: &AffineL1Problem, max_iter: usize) -> Result<L1Solution> {
    problem.validate()?;
    let n_atoms = problem.atoms.len();
    let sf = problem.standard_form();
    let sol = match simplex::solve(&sf, max_iter) {
        SimplexOutcome::Optimal(s) => s,
        SimplexOutcome::Infeasible {
            phase_one_objective,
        } => {
            log::info!("ℓ1 program infeasible (phase-one objective {phase_one_objective:.3e})");
            return Ok(L1Solution::failed(LpStatus::Infeasible, n_atoms, 0));
        }
        // costs are all one, so the program is bounded below by zero
        SimplexOutcome::Unbounded => {
            return Ok(L1Solution::failed(LpStatus::NumericalFailure, n_atoms, 0));
        }
        SimplexOutcome::IterationLimit { iterations } => {
            log::warn!("ℓ1 program hit the iteration limit ({iterations})");
            return Ok(L1Solution::failed(
                LpStatus::NumericalFailure,
                n_atoms,
                iterations,
            ));
        }
    };
    let coefficients: Vec<f64> = if problem.sign_split {
        (0..n_atoms)
            .map(|i| sol.x[i] - sol.x[n_atoms + i])
            .collect()
    } else {
        sol.x.clone()
    };
    let residual = problem.residual(&coefficients);
    let status = if residual < 1e-7 && sol.dual_infeasibility < 1e-7 {
        LpStatus::Optimal
    } else {
        log::warn!(
            "ℓ1 solution rejected: residual {residual:.3e}, dual infeasibility {:.3e}",
            sol.dual_infeasibility
        );
        LpStatus::NumericalFailure
    };
    log::debug!(
        "ℓ1 program solved: value {:.12}, {} iterations, gap {:.2e}",
        sol.objective,
        sol.iterations,
        sol.duality_gap
    );
    Ok(L1Solution {
        value: if status == LpStatus::Optimal {
            sol.objective
        } else {
            f64::NAN
        },
        coefficients,
        status,
        residual,
        duality_gap: sol.duality_gap,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: usize, n: usize) -> Vec<f64> {
        (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn target_equal_to_atom() {
        let p = AffineL1Problem {
            atoms: vec![
                vec![1.0, 0.5, 0.0],
                vec![0.0, 1.0, 1.0],
                vec![1.0, 1.0, 1.0],
            ],
            target: vec![0.0, 1.0, 1.0],
            extra_equalities: vec![],
            sign_split: true,
        };
        let s = solve_l1(&p).unwrap();
        assert!(s.is_optimal());
        assert!((s.value - 1.0).abs() < 1e-12);
        let nonzero = s.coefficients.iter().filter(|c| c.abs() > 1e-12).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn convex_combination() {
        let p = AffineL1Problem {
            atoms: vec![unit(0, 2), unit(1, 2), vec![1.0, -1.0]],
            target: vec![0.5, 0.5],
            extra_equalities: vec![],
            sign_split: true,
        };
        let s = solve_l1(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.duality_gap < 1e-10);
    }

    #[test]
    fn negative_coefficients_when_free() {
        let p = AffineL1Problem {
            atoms: vec![vec![1.0, 1.0], vec![1.0, 0.0]],
            target: vec![0.0, 1.0],
            extra_equalities: vec![],
            sign_split: true,
        };
        let s = solve_l1(&p).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((s.coefficients[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        let p = AffineL1Problem {
            atoms: vec![vec![1.0, 0.0]],
            target: vec![1.0, 1.0],
            extra_equalities: vec![],
            sign_split: false,
        };
        let s = solve_l1(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.clone().into_result("test").is_err());
    }

    #[test]
    fn extra_equalities_apply() {
        // q0 + q1 = 1 (target) and q1 = 0.25 (extra)
        let p = AffineL1Problem {
            atoms: vec![vec![1.0], vec![1.0]],
            target: vec![1.0],
            extra_equalities: vec![(vec![0.0, 1.0], 0.25)],
            sign_split: false,
        };
        let s = solve_l1(&p).unwrap();
        assert!((s.coefficients[1] - 0.25).abs() < 1e-12);
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_problem_is_an_error() {
        let p = AffineL1Problem {
            atoms: vec![vec![1.0], vec![1.0, 2.0]],
            target: vec![1.0],
            extra_equalities: vec![],
            sign_split: true,
        };
        assert!(solve_l1(&p).is_err());
    }

    #[test]
    fn lp_format_dump() {
        let p = AffineL1Problem {
            atoms: vec![vec![1.0, 0.0], vec![0.0, -2.0]],
            target: vec![0.5, 1.0],
            extra_equalities: vec![],
            sign_split: true,
        };
        let text = p.to_lp_format();
        assert!(text.starts_with("\\ l1 minimization\nMinimize"));
        assert!(text.contains("Subject To"));
        assert!(text.contains(
            " c1: - 2.00000000000000000e0 qp1 + 2.00000000000000000e0 qm1 = 1.00000000000000000e0"
        ));
        assert!(text.trim_end().ends_with("End"));
    }
}
