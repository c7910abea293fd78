//! Rectilinear sample grids and order-preserving parallel evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spinor::MinkVec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        AxisSpec { min, max, count }
    }

    fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Tensor grid over `(t, x1, x2, x3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t: AxisSpec,
    pub x1: AxisSpec,
    pub x2: AxisSpec,
    pub x3: AxisSpec,
}

impl GridSpec {
    pub fn new(t: AxisSpec, x1: AxisSpec, x2: AxisSpec, x3: AxisSpec) -> Self {
        GridSpec { t, x1, x2, x3 }
    }

    /// Same `count` on every axis over the box `[lo, hi]`.
    pub fn uniform(lo: [f64; 4], hi: [f64; 4], count: usize) -> Self {
        let a = |k: usize| AxisSpec::new(lo[k], hi[k], count);
        GridSpec::new(a(0), a(1), a(2), a(3))
    }

    pub fn axes(&self) -> [AxisSpec; 4] {
        [self.t, self.x1, self.x2, self.x3]
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic order, `t` slowest and `x3` fastest.
    pub fn points(&self) -> Vec<MinkVec> {
        let [a, b, c, d] = self.axes();
        let mut out = Vec::with_capacity(self.len());
        for i in 0..a.count {
            for j in 0..b.count {
                for k in 0..c.count {
                    for l in 0..d.count {
                        out.push(MinkVec::new(a.value(i), b.value(j), c.value(k), d.value(l)));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self, finite_differences: bool) -> Result<()> {
        for a in self.axes() {
            if a.count == 0 || !a.min.is_finite() || !a.max.is_finite() || a.max < a.min {
                return Err(Error::Invalid(format!("bad grid axis {a:?}")));
            }
            if finite_differences && a.count < 3 {
                return Err(Error::Invalid(
                    "finite-difference runs need at least 3 points per axis".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Map `f` over `items` on a worker pool; results keep input order.
///
/// `threads = None` uses rayon's default width.
pub fn par_map<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match threads {
        Some(1) => items.iter().map(f).collect(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(f).collect(),
        },
        None => items.par_iter().map(f).collect(),
    }
}
