//! Twistorial surfaces `(z, w) -> [a, b, c, d]`, the incidence system and
//! the wave solutions it generates.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::incidence_forms;
use crate::fields::{Domain, ScalarField, Vec4};
use crate::spinor::{MinkVec, I, ZERO};
use crate::{Error, Result};

type C = Complex64;

/// Complex polynomial in `(z, w)`; `coeffs[i][j]` multiplies `z^i w^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    pub coeffs: Vec<Vec<C>>,
}

impl BiPoly {
    pub fn new(coeffs: Vec<Vec<C>>) -> Self {
        BiPoly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        BiPoly::new(vec![vec![c]])
    }

    pub fn z() -> Self {
        BiPoly::new(vec![vec![ZERO], vec![C::new(1.0, 0.0)]])
    }

    pub fn w() -> Self {
        BiPoly::new(vec![vec![ZERO, C::new(1.0, 0.0)]])
    }

    /// Single term `c z^i w^j`.
    pub fn monomial(c: C, i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![]; i + 1];
        coeffs[i] = vec![ZERO; j + 1];
        coeffs[i][j] = c;
        BiPoly::new(coeffs)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let rows = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![vec![]; rows];
        for (i, row) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).map(Vec::as_slice).unwrap_or(&[]);
            let b = o.coeffs.get(i).map(Vec::as_slice).unwrap_or(&[]);
            *row = (0..a.len().max(b.len()))
                .map(|j| a.get(j).copied().unwrap_or(ZERO) + b.get(j).copied().unwrap_or(ZERO))
                .collect();
        }
        BiPoly::new(out)
    }

    pub fn eval(&self, z: C, w: C) -> C {
        // Horner in z over Horner-in-w rows.
        self.coeffs
            .iter()
            .rev()
            .fold(ZERO, |acc, row| acc * z + row.iter().rev().fold(ZERO, |r, c| r * w + c))
    }

    pub fn dz(&self) -> BiPoly {
        BiPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|c| c * i as f64).collect())
                .collect(),
        )
    }

    pub fn dw(&self) -> BiPoly {
        BiPoly::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect())
                .collect(),
        )
    }

    /// Total degree of the nonzero terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, c)| (i, j, *c)))
            .filter(|t| t.2 != ZERO)
    }

    fn is(&self, other: &BiPoly) -> bool {
        let d = self.add(&BiPoly::new(
            other.coeffs.iter().map(|r| r.iter().map(|c| -c).collect()).collect(),
        ));
        let empty = d.terms().next().is_none();
        empty
    }
}

/// Holomorphic chart into twistor space with its first derivatives.
pub trait SurfaceChart: Send + Sync {
    fn eval(&self, z: C, w: C) -> [C; 4];

    /// `[d/dz, d/dw]` of the four slots.
    fn jacobian(&self, z: C, w: C) -> [[C; 4]; 2];

    /// `h[i][j]` = second derivative in parameters `i`, `j` (0 = z,
    /// 1 = w). Defaults to central differences of the Jacobian.
    fn second(&self, z: C, w: C) -> [[[C; 4]; 2]; 2] {
        let h = 1e-5 * (1.0 + z.norm().max(w.norm()));
        let d = |dz: C, dw: C| {
            let p = self.jacobian(z + dz, w + dw);
            let m = self.jacobian(z - dz, w - dw);
            [0, 1].map(|j| [0, 1, 2, 3].map(|k| (p[j][k] - m[j][k]) / (2.0 * h)))
        };
        [d(C::new(h, 0.0), ZERO), d(ZERO, C::new(h, 0.0))]
    }
}

/// Polynomial twistorial surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorSurface {
    pub slots: [BiPoly; 4],
    pub degree: usize,
    pub normal_form: bool,
    derivs: [[BiPoly; 4]; 2],
    second: [[[BiPoly; 4]; 2]; 2],
}

impl TwistorSurface {
    pub fn new(slots: [BiPoly; 4]) -> Self {
        let degree = slots.iter().filter_map(BiPoly::degree).max().unwrap_or(0);
        let normal_form = slots[2].is(&BiPoly::z()) && slots[3].is(&BiPoly::constant(C::new(1.0, 0.0)));
        let derivs = [slots.clone().map(|p| p.dz()), slots.clone().map(|p| p.dw())];
        let second = [0, 1].map(|i| [derivs[i].clone().map(|p| p.dz()), derivs[i].clone().map(|p| p.dw())]);
        TwistorSurface {
            slots,
            degree,
            normal_form,
            derivs,
            second,
        }
    }

    /// `[a, b, z, 1]`.
    pub fn normal(a: BiPoly, b: BiPoly) -> Self {
        TwistorSurface::new([a, b, BiPoly::z(), BiPoly::constant(C::new(1.0, 0.0))])
    }
}

impl SurfaceChart for TwistorSurface {
    fn eval(&self, z: C, w: C) -> [C; 4] {
        [0, 1, 2, 3].map(|k| self.slots[k].eval(z, w))
    }

    fn jacobian(&self, z: C, w: C) -> [[C; 4]; 2] {
        [0, 1].map(|d| [0, 1, 2, 3].map(|k| self.derivs[d][k].eval(z, w)))
    }

    fn second(&self, z: C, w: C) -> [[[C; 4]; 2]; 2] {
        [0, 1].map(|i| [0, 1].map(|j| [0, 1, 2, 3].map(|k| self.second[i][j][k].eval(z, w))))
    }
}

/// JSON form of a polynomial surface: per slot, `coeffs[i][j] = [re, im]`
/// for the term `z^i w^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub slots: [Vec<Vec<[f64; 2]>>; 4],
    /// Upper bound on the total degree of every slot.
    #[serde(default)]
    pub degree: Option<usize>,
    /// Asserts `c = z`, `d = 1`; checked on load.
    #[serde(default)]
    pub normal_form: bool,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<TwistorSurface> {
        let slots = self.slots.clone().map(|s| {
            BiPoly::new(
                s.iter()
                    .map(|row| row.iter().map(|[re, im]| C::new(*re, *im)).collect())
                    .collect(),
            )
        });
        if slots
            .iter()
            .flat_map(|p| p.coeffs.iter().flatten())
            .any(|c| !c.is_finite())
        {
            return Err(Error::Invalid("non-finite surface coefficient".into()));
        }
        let s = TwistorSurface::new(slots);
        if let Some(d) = self.degree {
            if s.degree > d {
                return Err(Error::Invalid(format!("surface degree {} exceeds bound {d}", s.degree)));
            }
        }
        if self.normal_form && !s.normal_form {
            return Err(Error::Invalid("surface is not in normal form [a, b, z, 1]".into()));
        }
        Ok(s)
    }

    pub fn from_surface(s: &TwistorSurface) -> Self {
        SurfaceSpec {
            slots: s.slots.clone().map(|p| {
                p.coeffs
                    .iter()
                    .map(|r| r.iter().map(|c| [c.re, c.im]).collect())
                    .collect()
            }),
            degree: Some(s.degree),
            normal_form: s.normal_form,
        }
    }
}

type ChartFn = dyn Fn(C, C) -> [C; 4] + Send + Sync;

/// Chart given by a holomorphic closure; derivatives by complex central
/// differences.
pub struct FnChart {
    f: Box<ChartFn>,
    step: f64,
}

impl FnChart {
    pub fn new(f: impl Fn(C, C) -> [C; 4] + Send + Sync + 'static) -> Self {
        FnChart {
            f: Box::new(f),
            step: 1e-6,
        }
    }
}

impl SurfaceChart for FnChart {
    fn eval(&self, z: C, w: C) -> [C; 4] {
        (self.f)(z, w)
    }

    fn jacobian(&self, z: C, w: C) -> [[C; 4]; 2] {
        let h = self.step * (1.0 + z.norm().max(w.norm()));
        let d = |dz: C, dw: C| {
            let p = (self.f)(z + dz, w + dw);
            let m = (self.f)(z - dz, w - dw);
            [0, 1, 2, 3].map(|k| (p[k] - m[k]) / (2.0 * h))
        };
        [d(C::new(h, 0.0), ZERO), d(ZERO, C::new(h, 0.0))]
    }
}

/// Largest 2x2 minor of the 2x4 Jacobian over the product of its row
/// norms. Zero means rank below two.
pub fn regularity(s: &dyn SurfaceChart, z: C, w: C) -> f64 {
    let j = s.jacobian(z, w);
    let n = |r: &[C; 4]| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let scale = n(&j[0]) * n(&j[1]);
    if scale == 0.0 {
        return 0.0;
    }
    let mut m = 0.0_f64;
    for a in 0..4 {
        for b in a + 1..4 {
            m = m.max((j[0][a] * j[1][b] - j[0][b] * j[1][a]).norm());
        }
    }
    m / scale
}

/// True when `d/dw (c/d)` vanishes within `tol` at every sample.
pub fn check_prop_condition(s: &dyn SurfaceChart, samples: &[(C, C)], tol: f64) -> Result<bool> {
    for &(z, w) in samples {
        let x = s.eval(z, w);
        let j = s.jacobian(z, w);
        if x[3].norm() <= 1e-14 * (1.0 + x[2].norm()) {
            return Err(Error::EtaDenominatorZero);
        }
        let dw = (j[1][2] * x[3] - x[2] * j[1][3]) / (x[3] * x[3]);
        if dw.norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Newton limits for the incidence solve and chart inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonConfig {
    pub max_iter: usize,
    pub tol: f64,
    /// `|{r,s}|` below this (relative to the Jacobian scale) is singular.
    pub bracket_tol: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            max_iter: 50,
            tol: 1e-12,
            bracket_tol: 1e-10,
        }
    }
}

/// Deterministic seed set: the caller's seed, then `z = w = a + bi` for
/// `a, b` in `-2..=2`.
fn seeds(first: Option<(C, C)>) -> Vec<(C, C)> {
    let mut out: Vec<(C, C)> = first.into_iter().collect();
    for a in -2..=2 {
        for b in -2..=2 {
            let c = C::new(a as f64, b as f64);
            out.push((c, c));
        }
    }
    out
}

/// Solve a 2x2 complex system `j d = -f`; `None` when singular.
fn newton_step(j: [[C; 2]; 2], f: [C; 2]) -> Option<[C; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = j.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-300 || det.norm() <= 1e-15 * scale * scale {
        return None;
    }
    Some([
        -(j[1][1] * f[0] - j[0][1] * f[1]) / det,
        -(-j[1][0] * f[0] + j[0][0] * f[1]) / det,
    ])
}

/// Plain Newton from one seed; returns the converged point.
fn newton2<F>(f: F, seed: (C, C), cfg: &NewtonConfig) -> Option<(C, C)>
where
    F: Fn(C, C) -> ([C; 2], [[C; 2]; 2]),
{
    let (mut z, mut w) = seed;
    for _ in 0..cfg.max_iter {
        let (r, j) = f(z, w);
        if !(r[0].is_finite() && r[1].is_finite()) {
            return None;
        }
        if r[0].norm() <= cfg.tol && r[1].norm() <= cfg.tol {
            return Some((z, w));
        }
        let d = newton_step(j, r)?;
        z += d[0];
        w += d[1];
    }
    let (r, _) = f(z, w);
    (r[0].norm() <= cfg.tol && r[1].norm() <= cfg.tol).then_some((z, w))
}

/// Converged chart parameters of the incidence system at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidenceRoot {
    pub z: C,
    pub w: C,
    /// 0 for the caller seed, otherwise 1 + lattice index.
    pub seed_index: usize,
    /// `{r,s} = r_z s_w - s_z r_w`.
    pub bracket: C,
}

/// `(r, s)` and their `(z, w)` Jacobian on the surface.
fn incidence_system(s: &dyn SurfaceChart, x: &MinkVec, z: C, w: C) -> ([C; 2], [[C; 2]; 2]) {
    let (u, v, q) = x.light_cone();
    let p = s.eval(z, w);
    let jac = s.jacobian(z, w);
    let r = incidence_forms(&p, x);
    let dr = |d: usize| jac[d][2] * u + q * jac[d][3] + I * jac[d][0];
    let ds = |d: usize| q.conj() * jac[d][2] + jac[d][3] * v + I * jac[d][1];
    (r, [[dr(0), dr(1)], [ds(0), ds(1)]])
}

fn bracket_is_singular(j: &[[C; 2]; 2], cfg: &NewtonConfig) -> (C, bool) {
    let det = j[0][0] * j[1][1] - j[1][0] * j[0][1];
    let scale = j.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    (det, det.norm() <= cfg.bracket_tol * scale * scale)
}

/// Solve `r = s = 0` for the chart parameters at `x`.
///
/// The first seed whose Newton iteration converges wins; if its bracket
/// `{r,s}` vanishes the point is reported as `SingularBracket`.
pub fn solve_incidence(
    s: &dyn SurfaceChart,
    x: &MinkVec,
    seed: Option<(C, C)>,
    cfg: &NewtonConfig,
) -> Result<IncidenceRoot> {
    let has_seed = seed.is_some();
    for (k, sd) in seeds(seed).into_iter().enumerate() {
        if let Some((z, w)) = newton2(|z, w| incidence_system(s, x, z, w), sd, cfg) {
            let (_, j) = incidence_system(s, x, z, w);
            let (bracket, singular) = bracket_is_singular(&j, cfg);
            if singular {
                return Err(Error::SingularBracket);
            }
            let seed_index = if has_seed { k } else { k + 1 };
            return Ok(IncidenceRoot {
                z,
                w,
                seed_index,
                bracket,
            });
        }
    }
    Err(Error::NewtonDiverged)
}

/// `(dz/du, dz/dv, dz/dq, dz/dqbar)` of the implicit solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidencePartials {
    pub z_u: C,
    pub z_v: C,
    pub z_q: C,
    pub z_qbar: C,
}

impl IncidencePartials {
    /// `z_u z_v - z_q z_qbar`, which vanishes for every surface.
    pub fn product_identity(&self) -> C {
        self.z_u * self.z_v - self.z_q * self.z_qbar
    }

    /// Partials in `(t, x1, x2, x3)`.
    pub fn to_gradient(&self) -> Vec4 {
        [
            self.z_u + self.z_v,
            self.z_u - self.z_v,
            self.z_q + self.z_qbar,
            I * (self.z_q - self.z_qbar),
        ]
    }
}

pub fn incidence_partials(s: &dyn SurfaceChart, z: C, w: C, x: &MinkVec) -> Result<IncidencePartials> {
    let (_, j) = incidence_system(s, x, z, w);
    let (b, singular) = bracket_is_singular(&j, &NewtonConfig::default());
    if singular {
        return Err(Error::SingularBracket);
    }
    let p = s.eval(z, w);
    let (e0, e1) = (p[2], p[3]);
    let (r_w, s_w) = (j[0][1], j[1][1]);
    Ok(IncidencePartials {
        z_u: -s_w * e0 / b,
        z_v: r_w * e1 / b,
        z_q: -s_w * e1 / b,
        z_qbar: r_w * e0 / b,
    })
}

/// Light-cone coordinates `(u, v, q, qbar)` to `(t, x1, x2, x3)`:
/// `d_a = sum_p LC[a][p] d_p`.
const LC: [[C; 4]; 4] = {
    const O: C = C::new(1.0, 0.0);
    const Z: C = C::new(0.0, 0.0);
    const M: C = C::new(-1.0, 0.0);
    const J: C = C::new(0.0, 1.0);
    const NJ: C = C::new(0.0, -1.0);
    [[O, O, Z, Z], [O, M, Z, Z], [Z, Z, O, O], [Z, Z, J, NJ]]
};

/// Second partials `h[k][a] = d_k d_a z` of the implicit solution in
/// `(t, x1, x2, x3)`.
///
/// Differentiates `J y_p + F_p = 0` once more, where `y = (z, w)`, `F =
/// (r, s)` and `p` runs over `(u, v, q, qbar)`.
pub fn incidence_hessian(s: &dyn SurfaceChart, z: C, w: C, x: &MinkVec) -> Result<[Vec4; 4]> {
    let (u, v, q) = x.light_cone();
    let qb = q.conj();
    let (_, j) = incidence_system(s, x, z, w);
    let (det, singular) = bracket_is_singular(&j, &NewtonConfig::default());
    if singular {
        return Err(Error::SingularBracket);
    }
    let solve = |b: [C; 2]| {
        [
            (j[1][1] * b[0] - j[0][1] * b[1]) / det,
            (-j[1][0] * b[0] + j[0][0] * b[1]) / det,
        ]
    };
    let jac = s.jacobian(z, w);
    let sec = s.second(z, w);
    // dF_i/dp for p = u, v, q, qbar as (slot, row): r_u = c, s_v = d, r_q = d, s_qbar = c.
    const FP: [(usize, usize); 4] = [(2, 0), (3, 1), (3, 0), (2, 1)];
    let x4 = s.eval(z, w);
    let fp = |p: usize| {
        let (slot, row) = FP[p];
        let mut f = [ZERO; 2];
        f[row] = x4[slot];
        f
    };
    // d/dy_k of F_p
    let fpy = |p: usize, k: usize| {
        let (slot, row) = FP[p];
        let mut f = [ZERO; 2];
        f[row] = jac[k][slot];
        f
    };
    // d^2 F_i / dy_j dy_k
    let fyy = |j: usize, k: usize| {
        let d = &sec[j][k];
        [u * d[2] + q * d[3] + I * d[0], qb * d[2] + v * d[3] + I * d[1]]
    };
    let yp: Vec<[C; 2]> = (0..4).map(|p| solve(fp(p).map(|c| -c))).collect();
    let mut zpp = [[ZERO; 4]; 4];
    for p in 0..4 {
        for pp in 0..4 {
            // d/dp' (J y_p + F_p) = Jy_{pp'} + [sum_k F_yy(., k) y_{p',k} + F_{y p'}] y_p + F_{p y} y_{p'}
            let mut rhs = [ZERO; 2];
            for jj in 0..2 {
                for k in 0..2 {
                    let f = fyy(jj, k);
                    for i in 0..2 {
                        rhs[i] += f[i] * yp[pp][k] * yp[p][jj];
                    }
                }
                let a = fpy(pp, jj);
                let b = fpy(p, jj);
                for i in 0..2 {
                    rhs[i] += a[i] * yp[p][jj] + b[i] * yp[pp][jj];
                }
            }
            zpp[p][pp] = solve(rhs.map(|c| -c))[0];
        }
    }
    let mut h = [[ZERO; 4]; 4];
    for k in 0..4 {
        for a in 0..4 {
            for p in 0..4 {
                for pp in 0..4 {
                    h[k][a] += LC[k][p] * LC[a][pp] * zpp[p][pp];
                }
            }
        }
    }
    Ok(h)
}

/// A surface re-parameterized as `[a~, b~, z~, 1]` near a base point.
pub struct NormalChart {
    surface: Arc<dyn SurfaceChart>,
    /// Slot supplying the second coordinate: 0 (`a/d`) or 1 (`b/d`).
    pub second: usize,
    pub base: (C, C),
    cfg: NewtonConfig,
}

fn psi_and_jacobian(s: &dyn SurfaceChart, second: usize, z: C, w: C) -> ([C; 2], [[C; 2]; 2]) {
    let x = s.eval(z, w);
    let j = s.jacobian(z, w);
    let d = x[3];
    let quot = |k: usize, dd: usize| (j[dd][k] * d - x[k] * j[dd][3]) / (d * d);
    (
        [x[2] / d, x[second] / d],
        [[quot(2, 0), quot(2, 1)], [quot(second, 0), quot(second, 1)]],
    )
}

/// Local re-parameterization to normal form:
/// `z~ = c/d` and `w~ = a/d` (or `b/d` when that minor vanishes).
pub fn normalize_chart(s: Arc<dyn SurfaceChart>, base: (C, C)) -> Result<NormalChart> {
    let x = s.eval(base.0, base.1);
    if x[3].norm() <= 1e-14 {
        return Err(Error::EtaDenominatorZero);
    }
    let minor = |second: usize| {
        let (_, j) = psi_and_jacobian(s.as_ref(), second, base.0, base.1);
        let scale = j.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        let det = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).norm();
        scale > 0.0 && det > 1e-10 * scale * scale
    };
    let second = if minor(0) {
        0
    } else if minor(1) {
        1
    } else {
        return Err(Error::SingularChart);
    };
    Ok(NormalChart {
        surface: s,
        second,
        base,
        cfg: NewtonConfig::default(),
    })
}

impl NormalChart {
    /// Original parameters `(z, w)` mapping to `(z~, w~)`.
    pub fn invert(&self, zt: C, wt: C) -> Result<(C, C)> {
        let f = |z: C, w: C| {
            let (p, j) = psi_and_jacobian(self.surface.as_ref(), self.second, z, w);
            ([p[0] - zt, p[1] - wt], j)
        };
        newton2(f, self.base, &self.cfg).ok_or(Error::NewtonDiverged)
    }

    /// Twistor with third slot `z~` and fourth slot 1.
    pub fn eval(&self, zt: C, wt: C) -> Result<[C; 4]> {
        let (z, w) = self.invert(zt, wt)?;
        let x = self.surface.eval(z, w);
        Ok(x.map(|c| c / x[3]))
    }
}

impl SurfaceChart for NormalChart {
    fn eval(&self, zt: C, wt: C) -> [C; 4] {
        NormalChart::eval(self, zt, wt).unwrap_or([C::new(f64::NAN, f64::NAN); 4])
    }

    fn jacobian(&self, zt: C, wt: C) -> [[C; 4]; 2] {
        let h = 1e-6 * (1.0 + zt.norm().max(wt.norm()));
        let d = |dz: C, dw: C| {
            let p = SurfaceChart::eval(self, zt + dz, wt + dw);
            let m = SurfaceChart::eval(self, zt - dz, wt - dw);
            [0, 1, 2, 3].map(|k| (p[k] - m[k]) / (2.0 * h))
        };
        [d(C::new(h, 0.0), ZERO), d(ZERO, C::new(h, 0.0))]
    }
}

/// The first chart parameter `z(x)` of a surface as a scalar field.
///
/// Every point is solved from the same seed set, so values do not depend
/// on evaluation order.
#[derive(Clone)]
pub struct SurfaceField {
    pub surface: Arc<dyn SurfaceChart>,
    pub seed: Option<(C, C)>,
    pub domain: Domain,
    pub cfg: NewtonConfig,
    pub label: String,
}

impl SurfaceField {
    pub fn new(surface: Arc<dyn SurfaceChart>, label: impl Into<String>) -> Self {
        SurfaceField {
            surface,
            seed: None,
            domain: Domain::unbounded(),
            cfg: NewtonConfig::default(),
            label: label.into(),
        }
    }

    pub fn with_seed(mut self, seed: (C, C)) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn solve(&self, x: &MinkVec) -> Result<IncidenceRoot> {
        self.domain.check(x, 0.0)?;
        solve_incidence(self.surface.as_ref(), x, self.seed, &self.cfg)
    }
}

impl ScalarField for SurfaceField {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn evaluate(&self, x: &MinkVec) -> Result<C> {
        self.solve(x).map(|r| r.z)
    }

    fn analytic_gradient(&self, x: &MinkVec) -> Option<Result<Vec4>> {
        Some(
            self.solve(x)
                .and_then(|r| incidence_partials(self.surface.as_ref(), r.z, r.w, x))
                .map(|p| p.to_gradient()),
        )
    }

    fn analytic_hessian(&self, x: &MinkVec) -> Option<Result<[Vec4; 4]>> {
        Some(
            self.solve(x)
                .and_then(|r| incidence_hessian(self.surface.as_ref(), r.z, r.w, x)),
        )
    }

    fn has_analytic_gradient(&self) -> bool {
        true
    }

    fn has_analytic_hessian(&self) -> bool {
        true
    }
}
