use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the verification pipelines.
///
/// Relative thresholds are scaled by the magnitude of the operands at each
/// call site; the verdict thresholds (`det_*`, `wave`, `pde`, `sfr_*`) are
/// absolute residual bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub null: f64,
    pub herm: f64,
    pub annihilate: f64,
    /// Rank-one test for gradient factorization, relative to `|M|^2`.
    pub factor: f64,
    /// Kernel membership, relative to `|grad f| |v|`.
    pub kernel: f64,
    /// Proportionality test for branch classification.
    pub branch: f64,
    pub grad_floor: f64,
    pub det_analytic: f64,
    pub det_fd: f64,
    pub wave: f64,
    pub pde: f64,
    pub sfr_fd: f64,
    pub sfr_analytic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            null: 1e-9,
            herm: 1e-9,
            annihilate: 1e-9,
            factor: 1e-6,
            kernel: 1e-8,
            branch: 1e-6,
            grad_floor: 1e-12,
            det_analytic: 1e-9,
            det_fd: 1e-6,
            wave: 1e-6,
            pde: 1e-5,
            sfr_fd: 1e-5,
            sfr_analytic: 1e-9,
        }
    }
}

impl Tolerances {
    /// Override every verdict threshold with a single value.
    pub fn with_verdict_tol(mut self, tol: f64) -> Self {
        self.det_analytic = tol;
        self.det_fd = tol;
        self.wave = tol;
        self.pde = tol;
        self.sfr_fd = tol;
        self.sfr_analytic = tol;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.null,
            self.herm,
            self.annihilate,
            self.factor,
            self.kernel,
            self.branch,
            self.grad_floor,
            self.det_analytic,
            self.det_fd,
            self.wave,
            self.pde,
            self.sfr_fd,
            self.sfr_analytic,
        ];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(crate::Error::Invalid("tolerances must be positive".into()))
        }
    }
}
