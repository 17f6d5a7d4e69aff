//! Quadrature, finite differences and fixed-step ODE integration.

mod fd;
mod ode;
mod quadrature;

pub use fd::{
    check_stencil, diff1, diff1_in, diff1_richardson, diff2, diff2_in, diff2_richardson,
    richardson4, DEFAULT_H, DEFAULT_H2,
};
pub use ode::{rk4, rk4_step, Trajectory};
pub use quadrature::{cumulative, gauss_kronrod15, integrate, Antiderivative, DEFAULT_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default RK4 step.
pub const DEFAULT_RK4_STEP: f64 = 1e-3;

/// `n` equally spaced samples of `[start, stop]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(start: f64, stop: f64, n: usize) -> Result<Self> {
        if !(start < stop) || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs start < stop and n >= 2, got [{start}, {stop}] with n = {n}"
            )));
        }
        Ok(Self { start, stop, n })
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.stop
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = Grid1D::new(0.1, 0.7, 7).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes[0], 0.1);
        assert_eq!(nodes[6], 0.7);
        assert!(Grid1D::new(1.0, 1.0, 3).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }
}
