//! Complex scalar fields on Minkowski domains and their spinor derivatives.

pub(crate) mod diff;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spinor::{nabla_matrix, nabla_to_partials, MinkVec, Role, SpinMat, Spinor, ZERO};
use crate::{Error, Result};

pub type Vec4 = [Complex64; 4];

/// Axis-aligned box in `(t, x1, x2, x3)`; infinite bounds are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Domain {
    pub fn unbounded() -> Self {
        Domain {
            lo: [f64::NEG_INFINITY; 4],
            hi: [f64::INFINITY; 4],
        }
    }

    pub fn new(lo: [f64; 4], hi: [f64; 4]) -> Self {
        Domain { lo, hi }
    }

    pub fn contains(&self, x: &MinkVec) -> bool {
        self.contains_with_margin(x, 0.0)
    }

    /// True when the box `x +- margin` (per axis) lies in the domain.
    pub fn contains_with_margin(&self, x: &MinkVec, margin: f64) -> bool {
        x.to_array()
            .iter()
            .enumerate()
            .all(|(a, c)| c - margin >= self.lo[a] && c + margin <= self.hi[a])
    }

    pub fn check(&self, x: &MinkVec, margin: f64) -> Result<()> {
        if self.contains_with_margin(x, margin) {
            Ok(())
        } else {
            Err(Error::OutOfDomain)
        }
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::unbounded()
    }
}

/// Differentiation scheme.
///
/// `Analytic` uses analytic derivatives where a field provides them and
/// falls back to central differences otherwise. `Central(h)` forces
/// finite differences; `None` selects the default step
/// `1e-4 max(1, |x|_inf)` for first derivatives. Nested and second
/// derivatives use ten times the first-derivative step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Scheme {
    #[default]
    Analytic,
    Central(Option<f64>),
}

impl Scheme {
    pub fn fd() -> Self {
        Scheme::Central(None)
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Scheme::Analytic)
    }

    pub fn first_step(&self, x: &MinkVec) -> f64 {
        match self {
            Scheme::Central(Some(h)) => *h,
            _ => 1e-4 * x.max_abs().max(1.0),
        }
    }

    pub fn outer_step(&self, x: &MinkVec) -> f64 {
        match self {
            Scheme::Central(Some(h)) => 10.0 * h,
            _ => 1e-3 * x.max_abs().max(1.0),
        }
    }
}

/// Complex scalar field on a Minkowski domain.
///
/// Implementations must be re-entrant: `evaluate` is called concurrently
/// from grid workers and must be deterministic.
pub trait ScalarField: Send + Sync {
    fn label(&self) -> &str;

    fn domain(&self) -> Domain {
        Domain::unbounded()
    }

    fn evaluate(&self, x: &MinkVec) -> Result<Complex64>;

    /// `(d_t f, d_1 f, d_2 f, d_3 f)`.
    fn analytic_gradient(&self, _x: &MinkVec) -> Option<Result<Vec4>> {
        None
    }

    /// `h[k][a] = d_k d_a f`.
    fn analytic_hessian(&self, _x: &MinkVec) -> Option<Result<[Vec4; 4]>> {
        None
    }

    fn has_analytic_gradient(&self) -> bool {
        false
    }

    fn has_analytic_hessian(&self) -> bool {
        false
    }
}

type ValueFn = dyn Fn(&MinkVec) -> Complex64 + Send + Sync;
type GradFn = dyn Fn(&MinkVec) -> Vec4 + Send + Sync;
type HessFn = dyn Fn(&MinkVec) -> [Vec4; 4] + Send + Sync;

/// Scalar field backed by closures.
pub struct FnField {
    label: String,
    domain: Domain,
    value: Box<ValueFn>,
    gradient: Option<Box<GradFn>>,
    hessian: Option<Box<HessFn>>,
}

impl FnField {
    pub fn new(label: impl Into<String>, f: impl Fn(&MinkVec) -> Complex64 + Send + Sync + 'static) -> Self {
        FnField {
            label: label.into(),
            domain: Domain::unbounded(),
            value: Box::new(f),
            gradient: None,
            hessian: None,
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&MinkVec) -> Vec4 + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(&MinkVec) -> [Vec4; 4] + Send + Sync + 'static) -> Self {
        self.hessian = Some(Box::new(h));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

impl ScalarField for FnField {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn evaluate(&self, x: &MinkVec) -> Result<Complex64> {
        self.domain.check(x, 0.0)?;
        Ok((self.value)(x))
    }

    fn analytic_gradient(&self, x: &MinkVec) -> Option<Result<Vec4>> {
        let g = self.gradient.as_ref()?;
        Some(self.domain.check(x, 0.0).map(|_| g(x)))
    }

    fn analytic_hessian(&self, x: &MinkVec) -> Option<Result<[Vec4; 4]>> {
        let h = self.hessian.as_ref()?;
        Some(self.domain.check(x, 0.0).map(|_| h(x)))
    }

    fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    fn has_analytic_hessian(&self) -> bool {
        self.hessian.is_some()
    }
}

/// Coordinate partials of `f` at `x`.
pub fn partials(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<Vec4> {
    if scheme.is_analytic() {
        if let Some(g) = f.analytic_gradient(x) {
            return g;
        }
    }
    let h = scheme.first_step(x);
    f.domain().check(x, h)?;
    diff::scalar_partials(|y| f.evaluate(y), x, h)
}

/// True when `partials` under `scheme` is itself a finite-difference
/// estimate.
fn gradient_is_fd(f: &dyn ScalarField, scheme: Scheme) -> bool {
    !(scheme.is_analytic() && f.has_analytic_gradient())
}

/// Second partials `h[k][a] = d_k d_a f`.
pub fn hessian(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<[Vec4; 4]> {
    if scheme.is_analytic() {
        if let Some(h) = f.analytic_hessian(x) {
            return h;
        }
    }
    let step = if gradient_is_fd(f, scheme) {
        scheme.outer_step(x)
    } else {
        scheme.first_step(x)
    };
    let reach = step
        + if gradient_is_fd(f, scheme) {
            scheme.first_step(x) * 1.5
        } else {
            0.0
        };
    f.domain().check(x, reach)?;
    diff::partials(|y| partials(f, y, scheme), x, step)
}

/// `grad_{AA'} f` as a gradient-role [`SpinMat`].
pub fn spinor_gradient(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<SpinMat> {
    partials(f, x, scheme).map(|p| nabla_matrix(&p))
}

/// `det grad_{AA'} f = (1/2) [(d0 f)^2 - (d1 f)^2 - (d2 f)^2 - (d3 f)^2]`.
pub fn semiconformality_residual(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<Complex64> {
    spinor_gradient(f, x, scheme).map(|g| g.det())
}

/// `d0^2 f - d1^2 f - d2^2 f - d3^2 f`.
pub fn wave_residual(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<Complex64> {
    let d = if scheme.is_analytic() && f.has_analytic_hessian() {
        let h = f.analytic_hessian(x).expect("advertised hessian")?;
        [h[0][0], h[1][1], h[2][2], h[3][3]]
    } else if scheme.is_analytic() && f.has_analytic_gradient() {
        hessian_diagonal_from_gradient(f, x, scheme)?
    } else {
        let h = scheme.outer_step(x);
        f.domain().check(x, 2.0 * h)?;
        diff::second_diagonal(|y| f.evaluate(y), x, h)?
    };
    Ok(d[0] - d[1] - d[2] - d[3])
}

fn hessian_diagonal_from_gradient(f: &dyn ScalarField, x: &MinkVec, scheme: Scheme) -> Result<Vec4> {
    let h = scheme.first_step(x);
    f.domain().check(x, h)?;
    let j = diff::partials(|y| partials(f, y, scheme), x, h)?;
    Ok([j[0][0], j[1][1], j[2][2], j[3][3]])
}

/// Factor a rank-one gradient as `M_{AA'} = xi_A eta_{A'}`.
///
/// The largest column carries the direction of `xi`, which is normalized to
/// unit length with its largest component real and positive; `eta` absorbs
/// the magnitude.
pub fn factorize_gradient(m: &SpinMat, factor_tol: f64) -> Result<(Spinor, Spinor)> {
    let n = m.norm();
    if n == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let det = m.det().norm();
    if det > factor_tol * n * n {
        return Err(Error::NotRankOne { det });
    }
    let col_norm = |j: usize| m.m[0][j].norm_sqr() + m.m[1][j].norm_sqr();
    let j = if col_norm(0) >= col_norm(1) { 0 } else { 1 };
    let col = m.column(j);
    let xi = Spinor::lower_unprimed(col[0], col[1]).gauge_normalized();
    let eta = |k: usize| xi.c[0].conj() * m.m[0][k] + xi.c[1].conj() * m.m[1][k];
    Ok((xi, Spinor::lower_primed(eta(0), eta(1))))
}

type SpinorFn = dyn Fn(&MinkVec) -> Result<Spinor> + Send + Sync;
type JetFn = dyn Fn(&MinkVec) -> Result<[SpinMat; 4]> + Send + Sync;

/// A pair of spinor fields `xi` (unprimed) and `eta` (primed).
///
/// The closures may return either index position; residuals are computed on
/// the raised product `xi^A eta^{A'}`, which is independent of the gauge
/// `(xi, eta) -> (c xi, eta / c)`.
#[derive(Clone)]
pub struct SpinorFieldPair {
    xi: Arc<SpinorFn>,
    eta: Arc<SpinorFn>,
    jet: Option<Arc<JetFn>>,
    domain: Domain,
    nested: bool,
    pub gauge: String,
}

impl SpinorFieldPair {
    pub fn new(
        xi: impl Fn(&MinkVec) -> Result<Spinor> + Send + Sync + 'static,
        eta: impl Fn(&MinkVec) -> Result<Spinor> + Send + Sync + 'static,
    ) -> Self {
        SpinorFieldPair {
            xi: Arc::new(xi),
            eta: Arc::new(eta),
            jet: None,
            domain: Domain::unbounded(),
            nested: false,
            gauge: "unspecified".into(),
        }
    }

    /// Analytic derivatives `d_k (xi^A eta^{A'})`.
    pub fn with_jet(mut self, jet: impl Fn(&MinkVec) -> Result<[SpinMat; 4]> + Send + Sync + 'static) -> Self {
        self.jet = Some(Arc::new(jet));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_gauge(mut self, gauge: impl Into<String>) -> Self {
        self.gauge = gauge.into();
        self
    }

    /// Mark the pair as carrying finite-difference values, so that its own
    /// derivatives use the wider nested step.
    pub fn nested(mut self, nested: bool) -> Self {
        self.nested = nested;
        self
    }

    pub fn xi(&self, x: &MinkVec) -> Result<Spinor> {
        (self.xi)(x)
    }

    pub fn eta(&self, x: &MinkVec) -> Result<Spinor> {
        (self.eta)(x)
    }

    /// `xi^A eta^{A'}` with both indices up.
    pub fn product(&self, x: &MinkVec) -> Result<SpinMat> {
        let xi = self.xi(x)?;
        let eta = self.eta(x)?;
        if xi.variance.is_primed() || !eta.variance.is_primed() {
            return Err(Error::VarianceMismatch {
                expected: "unprimed xi and primed eta",
                found: "mismatched pair",
            });
        }
        Ok(SpinMat::outer(&xi.to_upper(), &eta.to_upper(), Role::Direction))
    }

    /// `d_k (xi^A eta^{A'})` for `k = 0..3`.
    pub fn product_jet(&self, x: &MinkVec, scheme: Scheme) -> Result<[SpinMat; 4]> {
        if scheme.is_analytic() {
            if let Some(jet) = &self.jet {
                return jet(x);
            }
        }
        let h = if self.nested {
            scheme.outer_step(x)
        } else {
            scheme.first_step(x)
        };
        self.domain.check(x, h)?;
        let flat = |y: &MinkVec| self.product(y).map(|p| flatten(&p));
        let d = diff::partials(flat, x, h)?;
        Ok(d.map(|row| unflatten(&row, Role::Direction)))
    }

    /// Pair induced by a semi-conformal field: `grad_{AA'} f = xi_A eta_{A'}`.
    pub fn from_field(f: Arc<dyn ScalarField>, scheme: Scheme, factor_tol: f64) -> Self {
        let fd = gradient_is_fd(f.as_ref(), scheme);
        let fx = Arc::clone(&f);
        let fe = Arc::clone(&f);
        let xi = move |x: &MinkVec| {
            let g = spinor_gradient(fx.as_ref(), x, scheme)?;
            factorize_gradient(&g, factor_tol).map(|p| p.0)
        };
        let eta = move |x: &MinkVec| {
            let g = spinor_gradient(fe.as_ref(), x, scheme)?;
            factorize_gradient(&g, factor_tol).map(|p| p.1)
        };
        let mut pair = SpinorFieldPair::new(xi, eta)
            .with_domain(f.domain())
            .with_gauge("unit xi, largest component real positive")
            .nested(fd);
        if scheme.is_analytic() && f.has_analytic_hessian() {
            let fh = Arc::clone(&f);
            pair = pair.with_jet(move |x: &MinkVec| {
                let h = fh.analytic_hessian(x).expect("advertised hessian")?;
                Ok(h.map(|row| nabla_matrix(&row).eps_dual().with_role(Role::Direction)))
            });
        }
        pair
    }
}

fn flatten(m: &SpinMat) -> Vec4 {
    [m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]]
}

fn unflatten(v: &Vec4, role: Role) -> SpinMat {
    SpinMat::new([[v[0], v[1]], [v[2], v[3]]], role)
}

/// Apply `grad_{AA'}` to a quantity whose coordinate partials are given.
fn nabla_entry(partials: &Vec4, a: usize, ap: usize) -> Complex64 {
    nabla_matrix(partials).m[a][ap]
}

/// The eight component equations of
/// `grad_{AA'} xi^B eta^{A'} = 0` and `grad_{AA'} xi^A eta^{B'} = 0`, in
/// the order `(A,B) = (0,0),(0,1),(1,0),(1,1)` followed by
/// `(A',B') = (0,0),(0,1),(1,0),(1,1)`.
pub fn spinor_pde_residuals(pair: &SpinorFieldPair, x: &MinkVec, scheme: Scheme) -> Result<[Complex64; 8]> {
    let jet = pair.product_jet(x, scheme)?;
    // d[b][bp] = coordinate partials of P^{b bp}
    let d = |b: usize, bp: usize| -> Vec4 { [jet[0].m[b][bp], jet[1].m[b][bp], jet[2].m[b][bp], jet[3].m[b][bp]] };
    let mut out = [ZERO; 8];
    for a in 0..2 {
        for b in 0..2 {
            out[2 * a + b] = (0..2).map(|ap| nabla_entry(&d(b, ap), a, ap)).sum();
        }
    }
    for ap in 0..2 {
        for bp in 0..2 {
            out[4 + 2 * ap + bp] = (0..2).map(|a| nabla_entry(&d(a, bp), a, ap)).sum();
        }
    }
    Ok(out)
}

/// Exterior derivative and divergence of a one-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closedness {
    /// `(d1v0 - d0v1, d2v0 - d0v2, d3v0 - d0v3, d2v1 - d1v2, d3v1 - d1v3, d3v2 - d2v3)`
    pub curl: [Complex64; 6],
    /// `d0v0 - d1v1 - d2v2 - d3v3`
    pub div: Complex64,
}

impl Closedness {
    pub fn max_abs(&self) -> f64 {
        self.curl.iter().map(|c| c.norm()).fold(self.div.norm(), f64::max)
    }
}

/// Spinor form `v^{AA'}` of the one-form with coefficients `theta_a`.
///
/// For `theta = df` this is `grad^{AA'} f`.
pub fn one_form_to_spinmat(theta: &Vec4) -> SpinMat {
    nabla_matrix(theta).eps_dual().with_role(Role::Direction)
}

/// One-form coefficients of a spinor field `v^{AA'}`.
pub fn spinmat_to_one_form(v: &SpinMat) -> Vec4 {
    nabla_to_partials(&v.eps_dual())
}

/// Curl and divergence of the one-form carried by the spinor field `v`.
pub fn closedness_check<F>(v: F, x: &MinkVec, h: f64) -> Result<Closedness>
where
    F: Fn(&MinkVec) -> Result<SpinMat>,
{
    let d = diff::partials(|y| v(y).map(|m| spinmat_to_one_form(&m)), x, h)?;
    // d[a][i] = d_a theta_i
    let curl = [
        d[1][0] - d[0][1],
        d[2][0] - d[0][2],
        d[3][0] - d[0][3],
        d[2][1] - d[1][2],
        d[3][1] - d[1][3],
        d[3][2] - d[2][3],
    ];
    let div = d[0][0] - d[1][1] - d[2][2] - d[3][3];
    Ok(Closedness { curl, div })
}
