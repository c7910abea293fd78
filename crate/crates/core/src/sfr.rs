//! Direction ratios, shear-free conditions, kernel-direction branches and
//! the grid verifier tying them together.
//!
//! A direction ratio `xi = xi^0 / xi^1` lives on the Riemann sphere. It is
//! stored in one of two charts: `Direct` holds `xi` itself when `|xi| <= 1`,
//! `Reciprocal` holds `1 / xi` otherwise. Every residual is written
//! against the homogeneous pair `p` of the active chart, `(xi, 1)` or
//! `(1, alpha)`, and the signed coordinate gradient
//! `W = +grad xi` or `W = -grad alpha`. Substituting `xi = 1/alpha` and
//! clearing denominators turns the direct-chart equations into exactly this
//! form, so one formula serves both charts.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::{
    diff, factorize_gradient, partials, semiconformality_residual, spinor_gradient, spinor_pde_residuals,
    wave_residual, Domain, ScalarField, Scheme, SpinorFieldPair, Vec4,
};
use crate::grid::{par_map, GridSpec};
use crate::report::{aggregate, PointRecord, ResidualReport, Verdict, SCHEMA_VERSION};
use crate::spinor::{contract_full, nabla_matrix, null_decompose, vec_to_spinmat, MinkVec, Role, SpinMat, Spinor};
use crate::{Error, Result, Tolerances};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    Direct,
    Reciprocal,
}

impl Chart {
    fn sign(self) -> f64 {
        match self {
            Chart::Direct => 1.0,
            Chart::Reciprocal => -1.0,
        }
    }
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionRatio {
    pub chart: Chart,
    /// `xi` in the direct chart, `1 / xi` in the reciprocal chart.
    pub coord: C,
}

impl DirectionRatio {
    /// Ratio `p0 / p1` of a homogeneous pair.
    pub fn from_pair(p0: C, p1: C) -> Result<Self> {
        if p0.norm() == 0.0 && p1.norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(if p0.norm() <= p1.norm() {
            DirectionRatio {
                chart: Chart::Direct,
                coord: p0 / p1,
            }
        } else {
            DirectionRatio {
                chart: Chart::Reciprocal,
                coord: p1 / p0,
            }
        })
    }

    pub fn finite(v: C) -> Self {
        DirectionRatio::from_pair(v, C::new(1.0, 0.0)).expect("nonzero pair")
    }

    pub fn infinity() -> Self {
        DirectionRatio {
            chart: Chart::Reciprocal,
            coord: C::new(0.0, 0.0),
        }
    }

    /// `None` at infinity.
    pub fn value(&self) -> Option<C> {
        match self.chart {
            Chart::Direct => Some(self.coord),
            Chart::Reciprocal if self.coord.norm() == 0.0 => None,
            Chart::Reciprocal => Some(self.coord.inv()),
        }
    }

    pub fn reciprocal(&self) -> Self {
        let [a, b] = self.homogeneous();
        DirectionRatio::from_pair(b, a).expect("nonzero pair")
    }

    /// Coordinate of this point in `chart`; fails at the chart's pole.
    pub fn coord_in(&self, chart: Chart) -> Result<C> {
        if chart == self.chart {
            Ok(self.coord)
        } else if self.coord.norm() == 0.0 {
            Err(Error::ChartBreakdown)
        } else {
            Ok(self.coord.inv())
        }
    }

    /// `(xi, 1)` or `(1, alpha)`.
    pub fn homogeneous(&self) -> [C; 2] {
        let one = C::new(1.0, 0.0);
        match self.chart {
            Chart::Direct => [self.coord, one],
            Chart::Reciprocal => [one, self.coord],
        }
    }
}

/// A direction-ratio field on a Minkowski domain.
pub trait RatioField: Send + Sync {
    fn ratio(&self, x: &MinkVec) -> Result<DirectionRatio>;

    fn domain(&self) -> Domain {
        Domain::unbounded()
    }

    /// Analytic partials of the chart coordinate, when known.
    fn coord_gradient(&self, _x: &MinkVec, _chart: Chart) -> Option<Result<Vec4>> {
        None
    }

    /// True when `ratio` itself carries finite-difference error, so that
    /// differentiating it needs the wider nested step.
    fn nested(&self) -> bool {
        false
    }
}

type PairFn = dyn Fn(&MinkVec) -> Result<[C; 2]> + Send + Sync;
type RatioGradFn = dyn Fn(&MinkVec) -> Vec4 + Send + Sync;

/// Ratio field given by a homogeneous pair `(p0, p1)`.
pub struct FnRatio {
    pair: Box<PairFn>,
    gradient: Option<Box<RatioGradFn>>,
    domain: Domain,
}

impl FnRatio {
    pub fn from_pair(p: impl Fn(&MinkVec) -> Result<[C; 2]> + Send + Sync + 'static) -> Self {
        FnRatio {
            pair: Box::new(p),
            gradient: None,
            domain: Domain::unbounded(),
        }
    }

    /// Finite ratio `xi(x)`.
    pub fn finite(f: impl Fn(&MinkVec) -> C + Send + Sync + 'static) -> Self {
        FnRatio::from_pair(move |x| Ok([f(x), C::new(1.0, 0.0)]))
    }

    pub fn constant(r: DirectionRatio) -> Self {
        let h = r.homogeneous();
        FnRatio::from_pair(move |_| Ok(h))
    }

    /// Analytic partials of the ratio value `xi`.
    pub fn with_gradient(mut self, g: impl Fn(&MinkVec) -> Vec4 + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

impl RatioField for FnRatio {
    fn ratio(&self, x: &MinkVec) -> Result<DirectionRatio> {
        self.domain.check(x, 0.0)?;
        let [a, b] = (self.pair)(x)?;
        DirectionRatio::from_pair(a, b)
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn coord_gradient(&self, x: &MinkVec, chart: Chart) -> Option<Result<Vec4>> {
        let g = self.gradient.as_ref()?;
        Some((|| {
            let r = self.ratio(x)?;
            let d = g(x);
            match chart {
                Chart::Direct => Ok(d),
                Chart::Reciprocal => {
                    let v = r.value().ok_or(Error::ChartBreakdown)?;
                    // d(1/xi) = -d xi / xi^2
                    Ok(d.map(|c| -c / (v * v)))
                }
            }
        })())
    }
}

/// Which spinor factor of the gradient a ratio is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factor {
    Xi,
    Eta,
}

/// Direction ratio `xi^0/xi^1` or `eta^{0'}/eta^{1'}` of the factors of
/// `grad_{AA'} f = xi_A eta_{A'}`.
#[derive(Clone)]
pub struct GradientRatio {
    pub field: Arc<dyn ScalarField>,
    pub factor: Factor,
    pub scheme: Scheme,
}

impl GradientRatio {
    pub fn new(field: Arc<dyn ScalarField>, factor: Factor, scheme: Scheme) -> Self {
        GradientRatio { field, factor, scheme }
    }

    /// Raised pair from the dominant column (xi) or row (eta) of `g`.
    fn pair_of(&self, g: &SpinMat, pick: usize) -> [C; 2] {
        match self.factor {
            Factor::Xi => [g.m[1][pick], -g.m[0][pick]],
            Factor::Eta => [g.m[pick][1], -g.m[pick][0]],
        }
    }

    fn pick(&self, g: &SpinMat) -> usize {
        let w = |k: usize| match self.factor {
            Factor::Xi => g.m[0][k].norm_sqr() + g.m[1][k].norm_sqr(),
            Factor::Eta => g.m[k][0].norm_sqr() + g.m[k][1].norm_sqr(),
        };
        if w(0) >= w(1) {
            0
        } else {
            1
        }
    }
}

impl RatioField for GradientRatio {
    fn ratio(&self, x: &MinkVec) -> Result<DirectionRatio> {
        let g = spinor_gradient(self.field.as_ref(), x, self.scheme)?;
        let [a, b] = self.pair_of(&g, self.pick(&g));
        DirectionRatio::from_pair(a, b).map_err(|_| Error::ZeroGradient)
    }

    fn domain(&self) -> Domain {
        self.field.domain()
    }

    fn coord_gradient(&self, x: &MinkVec, chart: Chart) -> Option<Result<Vec4>> {
        if !(self.field.has_analytic_gradient() && self.field.has_analytic_hessian()) {
            return None;
        }
        Some((|| {
            let g = nabla_matrix(&partials(self.field.as_ref(), x, Scheme::Analytic)?);
            let h = self.field.analytic_hessian(x).expect("advertised hessian")?;
            let k = self.pick(&g);
            let p = self.pair_of(&g, k);
            let (num, den) = match chart {
                Chart::Direct => (0, 1),
                Chart::Reciprocal => (1, 0),
            };
            if p[den].norm() == 0.0 {
                return Err(Error::ChartBreakdown);
            }
            let mut out = [C::new(0.0, 0.0); 4];
            for (a, o) in out.iter_mut().enumerate() {
                let dp = self.pair_of(&nabla_matrix(&h[a]), k);
                *o = (dp[num] * p[den] - p[num] * dp[den]) / (p[den] * p[den]);
            }
            Ok(out)
        })())
    }

    fn nested(&self) -> bool {
        !(self.scheme.is_analytic() && self.field.has_analytic_gradient())
    }
}

/// Partials of the chart coordinate of `r` in `chart`.
pub fn ratio_gradient(r: &dyn RatioField, x: &MinkVec, chart: Chart, scheme: Scheme) -> Result<Vec4> {
    if scheme.is_analytic() {
        if let Some(g) = r.coord_gradient(x, chart) {
            return g;
        }
    }
    let h = if r.nested() {
        scheme.outer_step(x)
    } else {
        scheme.first_step(x)
    };
    r.domain().check(x, h)?;
    diff::scalar_partials(|y| r.ratio(y)?.coord_in(chart), x, h)
}

/// Homogeneous pair and signed `grad` of the chart coordinate at `x`.
fn chart_jet(r: &dyn RatioField, x: &MinkVec, scheme: Scheme) -> Result<([C; 2], SpinMat)> {
    let d = r.ratio(x)?;
    let g = ratio_gradient(r, x, d.chart, scheme)?;
    let w = nabla_matrix(&g).scale(C::new(d.chart.sign(), 0.0));
    Ok((d.homogeneous(), w))
}

/// `xi grad_{0A'} xi + grad_{1A'} xi` for `A' = 0, 1`.
pub fn sfr_residual(xi: &dyn RatioField, x: &MinkVec, scheme: Scheme) -> Result<[C; 2]> {
    let (p, w) = chart_jet(xi, x, scheme)?;
    Ok([0, 1].map(|ap| p[0] * w.m[0][ap] + p[1] * w.m[1][ap]))
}

/// `eta grad_{A0'} eta + grad_{A1'} eta` for `A = 0, 1`.
pub fn eta_sfr_residual(eta: &dyn RatioField, x: &MinkVec, scheme: Scheme) -> Result<[C; 2]> {
    let (p, w) = chart_jet(eta, x, scheme)?;
    Ok([0, 1].map(|a| p[0] * w.m[a][0] + p[1] * w.m[a][1]))
}

/// The four mixed ratio equations, in order
/// `eta grad_{00'} xi + grad_{01'} xi`, `eta grad_{10'} xi + grad_{11'} xi`,
/// `xi grad_{00'} eta + grad_{10'} eta`, `xi grad_{01'} eta + grad_{11'} eta`.
pub fn direction_pde_residuals(
    xi: &dyn RatioField,
    eta: &dyn RatioField,
    x: &MinkVec,
    scheme: Scheme,
) -> Result<[C; 4]> {
    let (px, wx) = chart_jet(xi, x, scheme)?;
    let (pe, we) = chart_jet(eta, x, scheme)?;
    Ok([
        pe[0] * wx.m[0][0] + pe[1] * wx.m[0][1],
        pe[0] * wx.m[1][0] + pe[1] * wx.m[1][1],
        px[0] * we.m[0][0] + px[1] * we.m[1][0],
        px[0] * we.m[0][1] + px[1] * we.m[1][1],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    XiBranch,
    EtaBranch,
    Coincident,
    NotInKernel,
}

/// Outcome of matching a null kernel direction `v = lambda rho rhobar`
/// against `xi^A` and `conj(eta^{A'})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchClassification {
    pub branch: Branch,
    /// `rho = factor * xi^A` (or `* etabar^A`); `None` off the kernel.
    pub factor: Option<C>,
    /// `|df(v)| / (|grad f| |v|)`.
    pub kernel_residual: f64,
    pub xi_defect: f64,
    pub eta_defect: f64,
}

/// Largest defect still attributed to the nearer branch.
const BRANCH_GIVE_UP: f64 = 1e-3;

fn best_factor(rho: &Spinor, s: &Spinor) -> C {
    let n = s.c[0].norm_sqr() + s.c[1].norm_sqr();
    (rho.c[0] * s.c[0].conj() + rho.c[1] * s.c[1].conj()) / n
}

/// Branch of a null direction `v` at `x`.
pub fn classify_kernel_direction(
    f: &dyn ScalarField,
    x: &MinkVec,
    v: &MinkVec,
    scheme: Scheme,
    tol: &Tolerances,
) -> Result<BranchClassification> {
    let (_, rho) = null_decompose(v, tol.null)?;
    let g = spinor_gradient(f, x, scheme)?;
    let gn = g.norm();
    if gn <= tol.grad_floor {
        return Err(Error::ZeroGradient);
    }
    let vm = vec_to_spinmat(v);
    let kernel_residual = contract_full(&g, &vm).norm() / (gn * vm.norm());
    if kernel_residual > tol.kernel {
        return Ok(BranchClassification {
            branch: Branch::NotInKernel,
            factor: None,
            kernel_residual,
            xi_defect: f64::NAN,
            eta_defect: f64::NAN,
        });
    }
    let (xi, eta) = factorize_gradient(&g, tol.factor)?;
    let xi_up = xi.to_upper();
    let eta_bar = eta.to_upper().conj();
    let xi_defect = rho.proportionality_defect(&xi_up);
    let eta_defect = rho.proportionality_defect(&eta_bar);
    let (branch, against) = if xi_defect <= tol.branch && eta_defect <= tol.branch {
        (Branch::Coincident, xi_up)
    } else if xi_defect <= eta_defect {
        (Branch::XiBranch, xi_up)
    } else {
        (Branch::EtaBranch, eta_bar)
    };
    if xi_defect.min(eta_defect) > BRANCH_GIVE_UP {
        return Err(Error::Invalid(format!(
            "kernel direction matches neither factor (defects {xi_defect:e}, {eta_defect:e})"
        )));
    }
    Ok(BranchClassification {
        branch,
        factor: Some(best_factor(&rho, &against)),
        kernel_residual,
        xi_defect,
        eta_defect,
    })
}

/// Settings for [`verify_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    pub scheme: Scheme,
    pub tol: Tolerances,
    /// Worker cap; `None` uses the default pool.
    pub threads: Option<usize>,
}

fn scheme_name(s: Scheme) -> String {
    match s {
        Scheme::Analytic => "analytic".into(),
        Scheme::Central(None) => "central".into(),
        Scheme::Central(Some(h)) => format!("central(h={h})"),
    }
}

fn max2(r: [C; 2]) -> f64 {
    r[0].norm().max(r[1].norm())
}

struct PointContext {
    field: Arc<dyn ScalarField>,
    pair: SpinorFieldPair,
    xi: GradientRatio,
    eta: GradientRatio,
    opts: VerifyOptions,
}

fn kernel_of(g: &SpinMat, v: &SpinMat) -> f64 {
    let d = g.norm() * v.norm();
    if d == 0.0 {
        0.0
    } else {
        contract_full(g, v).norm() / d
    }
}

impl PointContext {
    fn record(&self, x: &MinkVec) -> PointRecord {
        let mut rec = PointRecord::empty(x.to_array(), "ok");
        let scheme = self.opts.scheme;
        let f = self.field.as_ref();
        let stage = |rec: &mut PointRecord, e: Error| {
            if rec.status == "ok" {
                rec.status = e.tag().to_string();
            }
        };
        let g = match spinor_gradient(f, x, scheme) {
            Ok(g) => g,
            Err(e) => {
                stage(&mut rec, e);
                return rec;
            }
        };
        match semiconformality_residual(f, x, scheme) {
            Ok(d) => rec.det = Some(d.norm()),
            Err(e) => stage(&mut rec, e),
        }
        match wave_residual(f, x, scheme) {
            Ok(w) => rec.wave = Some(w.norm()),
            Err(e) => stage(&mut rec, e),
        }
        if g.norm() < self.opts.tol.grad_floor {
            rec.status = "low_gradient".into();
            return rec;
        }
        match spinor_pde_residuals(&self.pair, x, scheme) {
            Ok(p) => rec.pde = Some(p.map(|c| c.norm())),
            Err(e) => stage(&mut rec, e),
        }
        match sfr_residual(&self.xi, x, scheme) {
            Ok(r) => rec.sfr_xi = Some(max2(r)),
            Err(e) => stage(&mut rec, e),
        }
        match eta_sfr_residual(&self.eta, x, scheme) {
            Ok(r) => rec.sfr_eta = Some(max2(r)),
            Err(e) => stage(&mut rec, e),
        }
        match factorize_gradient(&g, self.opts.tol.factor) {
            Ok((xi, eta)) => {
                let xu = xi.to_upper();
                let eb = eta.to_upper().conj();
                let vxi = SpinMat::outer(&xu, &xu.conj(), Role::Direction);
                let veta = SpinMat::outer(&eb, &eta.to_upper(), Role::Direction);
                rec.kernel_xi = Some(kernel_of(&g, &vxi));
                rec.kernel_eta = Some(kernel_of(&g, &veta));
                rec.coincident = Some(xu.proportionality_defect(&eb) <= self.opts.tol.branch);
            }
            Err(e) => stage(&mut rec, e),
        }
        rec
    }
}

/// Verify the null-solution equations and the shear-free branch property of
/// `f` over a grid.
///
/// Points where `|grad f|` falls below the gradient floor are reported with
/// status `low_gradient` and excluded from the verdict.
pub fn verify_grid(field: Arc<dyn ScalarField>, grid: &GridSpec, opts: VerifyOptions) -> Result<ResidualReport> {
    opts.tol.validate()?;
    grid.validate(!opts.scheme.is_analytic() || !field.has_analytic_gradient())?;
    let scheme = opts.scheme;
    let ctx = PointContext {
        pair: SpinorFieldPair::from_field(Arc::clone(&field), scheme, opts.tol.factor),
        xi: GradientRatio::new(Arc::clone(&field), Factor::Xi, scheme),
        eta: GradientRatio::new(Arc::clone(&field), Factor::Eta, scheme),
        field: Arc::clone(&field),
        opts,
    };
    let points = grid.points();
    let records = par_map(&points, opts.threads, |x| ctx.record(x));

    let analytic_grad = scheme.is_analytic() && field.has_analytic_gradient();
    let analytic_hess = analytic_grad && field.has_analytic_hessian();
    let det_tol = if analytic_grad {
        opts.tol.det_analytic
    } else {
        opts.tol.det_fd
    };
    let sfr_tol = if analytic_hess {
        opts.tol.sfr_analytic
    } else {
        opts.tol.sfr_fd
    };

    let ok: Vec<&PointRecord> = records.iter().filter(|r| r.is_ok()).collect();
    let low = records.iter().filter(|r| r.status == "low_gradient").count();
    let failed: Vec<&PointRecord> = records
        .iter()
        .filter(|r| !r.is_ok() && r.status != "low_gradient")
        .collect();
    let numeric_failure = failed.iter().any(|r| is_numeric_tag(&r.status));
    let within = |v: Option<f64>, t: f64| v.is_some_and(|v| v <= t);
    let det_wave_ok = records
        .iter()
        .filter(|r| r.status == "ok" || r.status == "low_gradient")
        .all(|r| within(r.det, det_tol) && within(r.wave, opts.tol.wave));
    let null_solution = failed.is_empty() && !ok.is_empty() && det_wave_ok;
    let spinor_equations = !ok.is_empty() && ok.iter().all(|r| within(r.pde_max(), opts.tol.pde));
    let branch_max = |sel: fn(&PointRecord) -> Option<f64>| -> Option<f64> {
        ok.iter().map(|r| sel(r).unwrap_or(f64::INFINITY)).reduce(f64::max)
    };
    let xi_branch_max = branch_max(|r| r.sfr_xi);
    let eta_branch_max = branch_max(|r| r.sfr_eta);
    let at_least_one_sfr = failed.is_empty()
        && [xi_branch_max, eta_branch_max]
            .iter()
            .any(|m| m.is_some_and(|m| m <= sfr_tol));
    let verdict = Verdict {
        null_solution,
        spinor_equations,
        at_least_one_sfr,
        xi_branch_max,
        eta_branch_max,
        sfr_tol,
        low_gradient_points: low,
        error_points: failed.len(),
        numeric_failure,
        pass: null_solution && at_least_one_sfr,
    };
    Ok(ResidualReport {
        schema: SCHEMA_VERSION,
        label: field.label().to_string(),
        scheme: scheme_name(scheme),
        aggregate: aggregate(&records),
        points: records,
        verdict,
    })
}

fn is_numeric_tag(tag: &str) -> bool {
    matches!(
        tag,
        "newton_diverged"
            | "singular_bracket"
            | "no_root_found"
            | "singular_denominator"
            | "singular_chart"
            | "chart_breakdown"
            | "pole"
            | "zero_h"
            | "eta_denominator_zero"
            | "degenerate_equation"
    )
}

/// Spinor pair built from a shear-free ratio `xi`:
/// `xi^A = (xi, 1)`, `eta^{A'} = (-grad_{01'} xi, grad_{00'} xi)`.
///
/// `samples` are the points at which the shear-free condition and
/// non-constancy are checked before the pair is returned. The ratio must be
/// finite there.
pub fn sfr_to_solution(
    xi: Arc<dyn RatioField>,
    samples: &[MinkVec],
    scheme: Scheme,
    sfr_tol: f64,
) -> Result<SpinorFieldPair> {
    let mut moving = false;
    let mut worst = 0.0_f64;
    for x in samples {
        let g = ratio_gradient(xi.as_ref(), x, Chart::Direct, scheme)?;
        let scale = 1.0 + xi.ratio(x)?.value().ok_or(Error::ChartBreakdown)?.norm();
        if g.iter().any(|c| c.norm() > sfr_tol * scale) {
            moving = true;
        }
        worst = worst.max(max2(sfr_residual(xi.as_ref(), x, scheme)?));
    }
    if !moving {
        return Err(Error::DegenerateConstantRatio);
    }
    if worst > sfr_tol {
        return Err(Error::NotSfr { residual: worst });
    }
    let nested = xi.nested() || !scheme.is_analytic() || xi.coord_gradient(&samples[0], Chart::Direct).is_none();
    let domain = xi.domain();
    let rx = Arc::clone(&xi);
    let re = Arc::clone(&xi);
    let one = C::new(1.0, 0.0);
    let xi_fn = move |x: &MinkVec| {
        let v = rx.ratio(x)?.value().ok_or(Error::ChartBreakdown)?;
        Ok(Spinor::upper_unprimed(v, one))
    };
    let eta_fn = move |x: &MinkVec| {
        let w = nabla_matrix(&ratio_gradient(re.as_ref(), x, Chart::Direct, scheme)?);
        Ok(Spinor::upper_primed(-w.m[0][1], w.m[0][0]))
    };
    Ok(SpinorFieldPair::new(xi_fn, eta_fn)
        .with_domain(domain)
        .with_gauge("xi^1 = 1")
        .nested(nested))
}
