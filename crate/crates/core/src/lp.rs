//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Solves `maximize c·x  s.t.  A x <= b, x >= 0` for the handful of rows that
//! show up at desk scale (Chebyshev centers, support functions of polytopes,
//! feasibility certificates). Right-hand sides may be negative; phase one then
//! drives the artificial variables out of the basis.

use crate::error::Error;

const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

struct Tableau {
    // m constraint rows followed by the objective row; last column is the rhs.
    cells: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col];
        for v in self.cells[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.cells[row].clone();
        for (r, line) in self.cells.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != 0.0 {
                for (v, pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations on the objective row (last row) over the
    /// columns `allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<bool, Error> {
        let m = self.basis.len();
        let rc = self.rhs_col();
        for _ in 0..MAX_PIVOTS {
            // Bland: smallest index with a negative objective-row entry
            // (the row stores -reduced cost).
            let entering = (0..allowed).find(|&j| self.cells[m][j] < -PIVOT_TOL);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = self.cells[r][col];
                if a > PIVOT_TOL {
                    let ratio = self.cells[r][rc] / a;
                    match best {
                        None => best = Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio - 1e-14
                                || (ratio <= bratio + 1e-14 && self.basis[r] < self.basis[br])
                            {
                                best = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((row, _)) => self.pivot(row, col),
            }
        }
        Err(Error::NonConvergence {
            iterations: MAX_PIVOTS,
            residual: f64::NAN,
        })
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            rows,
            rhs,
        }
    }

    pub fn solve(&self) -> Result<LpOutcome, Error> {
        let n = self.objective.len();
        let m = self.rows.len();
        let negative: Vec<usize> = (0..m).filter(|&i| self.rhs[i] < 0.0).collect();
        let k = negative.len();
        // columns: x (n) | slack (m) | artificial (k)
        let width = n + m + k;
        let mut cells = vec![vec![0.0; width + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut art = 0;
        for i in 0..m {
            let sign = if self.rhs[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                cells[i][j] = sign * self.rows[i][j];
            }
            cells[i][n + i] = sign;
            cells[i][width] = sign * self.rhs[i];
            if sign < 0.0 {
                cells[i][n + m + art] = 1.0;
                basis[i] = n + m + art;
                art += 1;
            } else {
                basis[i] = n + i;
            }
        }
        let mut tab = Tableau {
            cells,
            basis,
            width,
        };

        if k > 0 {
            // phase one: maximize -sum(artificial)
            for j in 0..=width {
                let mut s = 0.0;
                for &i in &negative {
                    s += tab.cells[i][j];
                }
                tab.cells[m][j] = if (n + m..n + m + k).contains(&j) {
                    0.0
                } else {
                    -s
                };
            }
            tab.optimize(width)?;
            let scale = 1.0 + self.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if tab.cells[m][width] < -1e-9 * scale {
                return Ok(LpOutcome::Infeasible);
            }
            // drive remaining artificial variables out of the basis
            let mut r = 0;
            while r < tab.basis.len() {
                if tab.basis[r] >= n + m {
                    if let Some(col) = (0..n + m).find(|&j| tab.cells[r][j].abs() > PIVOT_TOL) {
                        tab.pivot(r, col);
                        r += 1;
                    } else {
                        tab.cells.remove(r);
                        tab.basis.remove(r);
                    }
                } else {
                    r += 1;
                }
            }
            let rows = tab.basis.len();
            for line in tab.cells.iter_mut() {
                line.drain(n + m..n + m + k);
            }
            tab.width = n + m;
            let w = tab.width;
            // phase two objective row
            for j in 0..=w {
                tab.cells[rows][j] = 0.0;
            }
            for j in 0..n {
                tab.cells[rows][j] = -self.objective[j];
            }
            for r in 0..rows {
                let b = tab.basis[r];
                let cb = if b < n { self.objective[b] } else { 0.0 };
                if cb != 0.0 {
                    for j in 0..=w {
                        tab.cells[rows][j] += cb * tab.cells[r][j];
                    }
                }
            }
        } else {
            for j in 0..n {
                tab.cells[m][j] = -self.objective[j];
            }
        }

        let w = tab.width;
        if !tab.optimize(w)? {
            return Ok(LpOutcome::Unbounded);
        }
        let rows = tab.basis.len();
        let mut x = vec![0.0; n];
        for r in 0..rows {
            if tab.basis[r] < n {
                x[tab.basis[r]] = tab.cells[r][w];
            }
        }
        let value = crate::linalg::dot(&self.objective, &x);
        Ok(LpOutcome::Optimal { x, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(lp: &LinearProgram) -> (Vec<f64>, f64) {
        match lp.solve().unwrap() {
            LpOutcome::Optimal { x, value } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
        let lp = LinearProgram::new(
            vec![3.0, 5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![4.0, 12.0, 18.0],
        );
        let (x, v) = optimal(&lp);
        assert!((v - 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // max -x, x >= 2 written as -x <= -2
        let lp = LinearProgram::new(vec![-1.0], vec![vec![-1.0]], vec![-2.0]);
        let (x, v) = optimal(&lp);
        assert!((x[0] - 2.0).abs() < 1e-9);
        assert!((v + 2.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, -2.0]);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
        let lp = LinearProgram::new(vec![1.0, 0.0], vec![vec![0.0, 1.0]], vec![1.0]);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example (Beale) terminates under Bland's rule
        let lp = LinearProgram::new(
            vec![0.75, -150.0, 0.02, -6.0],
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        );
        let (_, v) = optimal(&lp);
        assert!((v - 0.05).abs() < 1e-9);
    }
}
