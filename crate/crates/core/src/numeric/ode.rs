//! Fixed-step classical Runge–Kutta integration.

use crate::error::{Error, Result};

/// Sampled solution of an ODE: strictly increasing parameters with one state per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(params: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        if params.is_empty() || params.len() != states.len() {
            return Err(Error::InvalidParameter(format!(
                "trajectory needs matching non-empty params/states ({} vs {})",
                params.len(),
                states.len()
            )));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "trajectory parameters must be strictly increasing".into(),
            ));
        }
        let dim = states[0].len();
        if states.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidParameter("trajectory state dimension varies".into()));
        }
        Ok(Self { params, states })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn first(&self) -> (f64, &[f64]) {
        (self.params[0], &self.states[0])
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let n = self.params.len() - 1;
        (self.params[n], &self.states[n])
    }

    /// Node at or immediately before `t` (clamped to the ends).
    pub fn node_before(&self, t: f64) -> usize {
        let k = self.params.partition_point(|&p| p <= t);
        k.saturating_sub(1).min(self.params.len() - 1)
    }

    /// State at arbitrary `t` inside the span: one RK4 sub-step of length
    /// `t - t_k` from the preceding node. Smooth within each cell and as
    /// accurate as the stored solution.
    pub fn dense<F>(&self, field: &F, t: f64) -> Vec<f64>
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let k = self.node_before(t);
        let dt = t - self.params[k];
        if dt == 0.0 {
            return self.states[k].clone();
        }
        let mut out = self.states[k].clone();
        rk4_step(field, self.params[k], &self.states[k], dt, &mut out);
        out
    }
}

/// One classical RK4 step of length `h` from `(t, y)`, written to `out`.
pub fn rk4_step<F>(field: &F, t: f64, y: &[f64], h: f64, out: &mut [f64])
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    field(t, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    field(t + 0.5 * h, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    field(t + 0.5 * h, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    field(t + h, &tmp, &mut k4);
    for i in 0..n {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Integrates `state' = field(t, state)` from `t0` to `t1` with steps of at
/// most `h`; the step is shrunk so the last node lands exactly on `t1`.
///
/// Backward spans (`t1 < t0`) are integrated backward and returned in
/// increasing parameter order.
pub fn rk4<F>(field: F, t0: f64, state0: &[f64], t1: f64, h: f64) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    if t0 == t1 {
        return Trajectory::new(vec![t0], vec![state0.to_vec()]);
    }
    let span = t1 - t0;
    let steps = (span.abs() / h).ceil().max(1.0) as usize;
    let dt = span / steps as f64;

    let mut params = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    params.push(t0);
    states.push(state0.to_vec());
    let mut next = vec![0.0; state0.len()];
    for i in 0..steps {
        let t = t0 + i as f64 * dt;
        rk4_step(&field, t, &states[i], dt, &mut next);
        states.push(next.clone());
        params.push(if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * dt });
    }
    if span < 0.0 {
        params.reverse();
        states.reverse();
    }
    Trajectory::new(params, states)
}
