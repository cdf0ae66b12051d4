use serde::Serialize;

/// `ε_0 = 1`, `ε_i = ε_{i-1} / 2^i`, stopped at the first `ε_{k*} < tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementSchedule {
    pub eps: Vec<f64>,
}

impl RefinementSchedule {
    pub fn new(tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        let mut eps = vec![1.0];
        let mut i = 1;
        while *eps.last().unwrap() >= tol {
            let next = eps.last().unwrap() / 2f64.powi(i);
            eps.push(next);
            i += 1;
        }
        RefinementSchedule { eps }
    }

    /// `k*`, the index of the last level.
    pub fn stop(&self) -> usize {
        self.eps.len() - 1
    }

    /// `2 Σ_{i>=k} ε_i`, the uniform distance from `y_k` to the limit.
    pub fn tail(&self, k: usize) -> f64 {
        2.0 * self.eps[k..].iter().sum::<f64>()
    }
}
