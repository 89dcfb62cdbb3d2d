use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// An odd degree `ℓ ≥ 3` with `ε = exp(2πi/ℓ)` and a table of its powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootContext {
    pub ell: usize,
    pub eps: C64,
    /// `ε^k` for `k = 0..2ℓ`.
    pub eps_powers: Vec<C64>,
}

pub fn primitive_root(ell: usize) -> Result<RootContext> {
    RootContext::new(ell)
}

impl RootContext {
    pub fn new(ell: usize) -> Result<Self> {
        if ell < 3 || ell % 2 == 0 {
            return Err(Error::InvalidDegree(ell));
        }
        let eps_powers: Vec<C64> = (0..2 * ell)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * (k % ell) as f64 / ell as f64))
            .collect();
        Ok(Self { ell, eps: eps_powers[1], eps_powers })
    }

    /// `ε^k` for any integer `k`, read from the table.
    pub fn pow(&self, k: i64) -> C64 {
        self.eps_powers[k.rem_euclid(self.ell as i64) as usize]
    }

    /// Principal `ℓ`-th root.
    pub fn root(&self, z: C64) -> C64 {
        z.powf(1.0 / self.ell as f64)
    }

    /// The exponent `k ∈ 0..ℓ` minimizing `|ε^k − w|`, with the mismatch.
    pub fn nearest_power(&self, w: C64) -> (usize, f64) {
        (0..self.ell)
            .map(|k| (k, (self.eps_powers[k] - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("ell >= 3")
    }
}
