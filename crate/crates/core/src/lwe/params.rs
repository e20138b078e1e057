use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// LWE parameter set.
///
/// Only `n` and `alpha` drive the simulation. The remaining fields describe
/// the key-switching and ring parameters of a real bootstrapping deployment
/// and are carried for reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LweParams {
    pub n: usize,
    pub alpha: f64,
    pub ks_base: u32,
    pub ks_levels: u32,
    pub ring_degree: usize,
    pub ring_stddev: f64,
    pub bk_base: u32,
    pub bk_levels: u32,
}

impl LweParams {
    /// The 110-bit parameter set used for multi-key linear regression.
    pub fn standard() -> Self {
        LweParams {
            n: 560,
            alpha: 3.05e-5,
            ks_base: 1 << 2,
            ks_levels: 8,
            ring_degree: 1024,
            ring_stddev: 3.72e-9,
            bk_base: 1 << 9,
            bk_levels: 3,
        }
    }

    /// Same metadata, different dimension and noise; used by tests.
    pub fn with_dimension(n: usize, alpha: f64) -> Result<Self> {
        let p = LweParams {
            n,
            alpha,
            ..Self::standard()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("LWE dimension must be at least 1".into()));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::InvalidParams(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        Ok(())
    }

    /// Variance of one fresh encryption.
    pub fn fresh_variance(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// Hex SHA-256 of the canonical JSON form; ties bundles to a parameter set.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("params serialize");
        hex::encode(Sha256::digest(&canonical))
    }
}

impl Default for LweParams {
    fn default() -> Self {
        Self::standard()
    }
}
