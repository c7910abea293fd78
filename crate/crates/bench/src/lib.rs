//! Fixed inputs shared by the benchmarks, so that timings are comparable
//! between runs.

use nullwave_core::builtins::builtin;
use nullwave_core::{AxisSpec, Complex64, GridSpec, MinkVec, Twistor};

/// The default grid of a built-in, thinned to `count` points per axis.
pub fn builtin_grid(name: &str, count: usize) -> GridSpec {
    let g = builtin(name).expect("known builtin").grid;
    let thin = |a: AxisSpec| AxisSpec::new(a.min, a.max, count);
    GridSpec::new(thin(g.t), thin(g.x1), thin(g.x2), thin(g.x3))
}

/// `n` points spread over the box around `(0, 0, 1, 0)` used by the Kerr
/// and surface built-ins.
pub fn sample_points(n: usize) -> Vec<MinkVec> {
    (0..n)
        .map(|k| {
            let s = (k as f64 + 0.5) / n as f64;
            let w = |f: f64| 0.2 * (std::f64::consts::TAU * f * s).sin();
            MinkVec::new(w(1.0), w(2.0), 1.0 + w(3.0), w(5.0))
        })
        .collect()
}

/// `n` twistors on the null hypersurface.
pub fn null_twistors(n: usize) -> Vec<Twistor> {
    (0..n)
        .map(|k| {
            let a = k as f64 * 0.37;
            let c = |p: f64| Complex64::from_polar(1.0 + 0.5 * (a * p).cos(), a * p);
            let mut x = Twistor([c(1.0), c(1.3), c(1.7), c(2.1)]);
            let s = (x.0[0] * x.0[2].conj() + x.0[1] * x.0[3].conj()).re;
            x.0[2] -= x.0[0] * (s / x.0[0].norm_sqr());
            x
        })
        .collect()
}
