//! Dense two-phase primal simplex for `min cᵀx s.t. Ax = b, x ≥ 0`.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving variable on ratio ties), so the method terminates on degenerate
//! problems and is deterministic for a fixed column order. Problems here have
//! at most a few hundred columns and a few dozen rows; the tableau is dense.

/// Below this magnitude a tableau entry is not used as a pivot.
const PIVOT_EPS: f64 = 1e-11;
/// Reduced costs above `-COST_EPS` count as non-negative.
const COST_EPS: f64 = 1e-10;
/// Phase-one objective above this means the constraints are inconsistent.
const FEASIBILITY_EPS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct StandardForm {
    /// Row-major `m × n` constraint matrix.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexOutcome {
    Optimal(SimplexSolution),
    Infeasible { phase_one_objective: f64 },
    Unbounded,
    IterationLimit { iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual multipliers for the (sign-normalized) equality rows.
    pub dual: Vec<f64>,
    /// `|cᵀx − bᵀy|`.
    pub duality_gap: f64,
    /// Most negative reduced cost `c − Aᵀy`, clamped at zero.
    pub dual_infeasibility: f64,
    pub iterations: usize,
}

struct Tableau {
    m: usize,
    /// structural columns; artificial columns follow at `n..n + m`
    n: usize,
    t: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.n + self.m;
        let p = self.t[row][col];
        for j in 0..width {
            self.t[row][j] /= p;
        }
        self.rhs[row] /= p;
        let pivot_row = self.t[row].clone();
        let pivot_rhs = self.rhs[row];
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = self.t[r][col];
            if f == 0.0 {
                continue;
            }
            for (x, &y) in self.t[r].iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
            self.t[r][col] = 0.0;
            self.rhs[r] -= f * pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j − c_Bᵀ B⁻¹ A_j` for the first `cols` columns.
    fn reduced_costs(&self, cost: &[f64], cols: usize) -> Vec<f64> {
        let mut r: Vec<f64> = cost[..cols].to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = cost[bi];
            if cb == 0.0 {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate() {
                *rj -= cb * self.t[i][j];
            }
        }
        r
    }

    /// Runs Bland-rule iterations over columns `< cols`. Returns
    /// `Ok(iterations)` at optimality, `Err(None)` if unbounded and
    /// `Err(Some(iterations))` on hitting the limit.
    fn optimize(
        &mut self,
        cost: &[f64],
        cols: usize,
        max_iter: usize,
        iterations: &mut usize,
    ) -> std::result::Result<(), Option<usize>> {
        loop {
            if *iterations >= max_iter {
                return Err(Some(*iterations));
            }
            let r = self.reduced_costs(cost, cols);
            let Some(enter) = (0..cols).find(|&j| r[j] < -COST_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.t[i][enter];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs[i].max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-14
                            || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])
                        {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Err(None);
            };
            self.pivot(row, enter);
            *iterations += 1;
        }
    }
}

pub fn solve(problem: &StandardForm, max_iter: usize) -> SimplexOutcome {
    let m = problem.b.len();
    let n = problem.c.len();
    debug_assert_eq!(problem.a.len(), m);

    // rows with negative rhs are negated so artificials start feasible
    let mut a = problem.a.clone();
    let mut b = problem.b.clone();
    for i in 0..m {
        if b[i] < 0.0 {
            b[i] = -b[i];
            for x in a[i].iter_mut() {
                *x = -*x;
            }
        }
    }

    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut full = row.clone();
        full.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
        t.push(full);
    }
    let mut tab = Tableau {
        m,
        n,
        t,
        rhs: b.clone(),
        basis: (n..n + m).collect(),
    };

    let mut iterations = 0;
    let mut phase_one_cost = vec![0.0; n + m];
    for c in phase_one_cost[n..].iter_mut() {
        *c = 1.0;
    }
    match tab.optimize(&phase_one_cost, n + m, max_iter, &mut iterations) {
        Ok(()) => {}
        Err(Some(it)) => return SimplexOutcome::IterationLimit { iterations: it },
        // phase one is bounded below by zero
        Err(None) => unreachable!("phase one cannot be unbounded"),
    }
    let phase_one_objective: f64 = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&bi, _)| bi >= n)
        .map(|(_, &v)| v)
        .sum();
    if phase_one_objective > FEASIBILITY_EPS * (1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max))
    {
        return SimplexOutcome::Infeasible {
            phase_one_objective,
        };
    }

    // drive remaining artificials out of the basis; rows where that is
    // impossible are redundant and keep a zero-valued artificial
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[i][j].abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    let mut cost = problem.c.clone();
    cost.extend(std::iter::repeat_n(0.0, m));
    match tab.optimize(&cost, n, max_iter, &mut iterations) {
        Ok(()) => {}
        Err(Some(it)) => return SimplexOutcome::IterationLimit { iterations: it },
        Err(None) => return SimplexOutcome::Unbounded,
    }

    let mut x = vec![0.0; n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            x[bi] = tab.rhs[i].max(0.0);
        }
    }
    let objective: f64 = problem.c.iter().zip(&x).map(|(c, x)| c * x).sum();

    // y = c_Bᵀ B⁻¹; the artificial block of the tableau holds B⁻¹
    let dual: Vec<f64> = (0..m)
        .map(|k| {
            tab.basis
                .iter()
                .enumerate()
                .map(|(i, &bi)| cost[bi] * tab.t[i][n + k])
                .sum()
        })
        .collect();
    let dual_objective: f64 = b.iter().zip(&dual).map(|(b, y)| b * y).sum();
    let dual_infeasibility = (0..n)
        .map(|j| problem.c[j] - (0..m).map(|i| a[i][j] * dual[i]).sum::<f64>())
        .fold(0.0f64, |acc, r| acc.max(-r));

    SimplexOutcome::Optimal(SimplexSolution {
        x,
        objective,
        dual,
        duality_gap: (objective - dual_objective).abs(),
        dual_infeasibility,
        iterations,
    })
}
