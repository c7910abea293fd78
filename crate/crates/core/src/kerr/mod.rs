//! Null solutions from meromorphic data `(f, g, h)`.
//!
//! The triple defines a null complex 4-vector
//!
//! ```text
//! xi(z) = ( -i (1 - F) / 2h,  i (1 + F) / 2h,  -f / h,  -g / h ),   F = f^2 + g^2
//! ```
//!
//! with `xi_1^2 = xi_2^2 + xi_3^2 + xi_4^2`, and a solution `z(x)` is any
//! root of `xi(z) . x = 1` where the dot pairs `xi_1` with `t`.

pub mod rational;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::{Domain, ScalarField, Vec4};
use crate::spinor::{MinkVec, Spinor, I, ZERO};
use crate::{Error, Result};
use rational::{Poly, RationalFn, RationalSpec};

type C = Complex64;

/// Meromorphic data driving the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicTriple {
    pub f: RationalFn,
    pub g: RationalFn,
    pub h: RationalFn,
    xi: [RationalFn; 4],
    dxi: [RationalFn; 4],
    ddxi: [RationalFn; 4],
}

/// JSON form `{f: {num, den}, g: ..., h: ...}` with `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub f: RationalSpec,
    pub g: RationalSpec,
    pub h: RationalSpec,
}

impl TripleSpec {
    pub fn build(&self) -> Result<MeromorphicTriple> {
        MeromorphicTriple::new(self.f.build()?, self.g.build()?, self.h.build()?)
    }
}

impl MeromorphicTriple {
    pub fn new(f: RationalFn, g: RationalFn, h: RationalFn) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroH);
        }
        let one = RationalFn::constant(C::new(1.0, 0.0));
        let big_f = f.mul(&f).add(&g.mul(&g));
        let inv_2h = h.recip()?.scale(C::new(0.5, 0.0));
        let xi = [
            one.add(&big_f.scale(-C::new(1.0, 0.0))).mul(&inv_2h).scale(-I),
            one.add(&big_f).mul(&inv_2h).scale(I),
            f.mul(&inv_2h).scale(C::new(-2.0, 0.0)),
            g.mul(&inv_2h).scale(C::new(-2.0, 0.0)),
        ];
        let dxi = xi.clone().map(|r| r.derivative());
        let ddxi = dxi.clone().map(|r| r.derivative());
        Ok(MeromorphicTriple { f, g, h, xi, dxi, ddxi })
    }

    /// `f = z, g = 0, h = 1`.
    pub fn basic() -> Self {
        MeromorphicTriple::new(
            RationalFn::z(),
            RationalFn::constant(ZERO),
            RationalFn::constant(C::new(1.0, 0.0)),
        )
        .expect("valid triple")
    }

    pub fn to_spec(&self) -> TripleSpec {
        TripleSpec {
            f: RationalSpec::from_fn(&self.f),
            g: RationalSpec::from_fn(&self.g),
            h: RationalSpec::from_fn(&self.h),
        }
    }

    fn check_regular(&self, z: C) -> Result<()> {
        let h = self.h.eval(z)?;
        self.f.eval(z)?;
        self.g.eval(z)?;
        if h.norm() <= 1e-14 {
            return Err(Error::ZeroH);
        }
        Ok(())
    }

    fn eval4(&self, r: &[RationalFn; 4], z: C) -> Result<[C; 4]> {
        self.check_regular(z)?;
        Ok([r[0].eval(z)?, r[1].eval(z)?, r[2].eval(z)?, r[3].eval(z)?])
    }

    pub fn xi_prime(&self, z: C) -> Result<[C; 4]> {
        self.eval4(&self.dxi, z)
    }

    pub fn xi_second(&self, z: C) -> Result<[C; 4]> {
        self.eval4(&self.ddxi, z)
    }

    /// `xi(z) . x - 1` as a single rational function of `z`.
    fn equation(&self, x: &MinkVec) -> RationalFn {
        let xs = x.to_array();
        self.xi
            .iter()
            .zip(xs)
            .fold(RationalFn::constant(-C::new(1.0, 0.0)), |acc, (r, c)| {
                acc.add(&r.scale(C::new(c, 0.0)))
            })
    }
}

/// `xi(z)` for the triple.
pub fn weierstrass_xi(t: &MeromorphicTriple, z: C) -> Result<[C; 4]> {
    let h = t.h.eval(z)?;
    if h.norm() <= 1e-14 {
        return Err(Error::ZeroH);
    }
    let f = t.f.eval(z)?;
    let g = t.g.eval(z)?;
    let big_f = f * f + g * g;
    let one = C::new(1.0, 0.0);
    Ok([
        -I * (one - big_f) / (2.0 * h),
        I * (one + big_f) / (2.0 * h),
        -f / h,
        -g / h,
    ])
}

fn dot(a: &[C; 4], x: &MinkVec) -> C {
    a[0] * x.t + a[1] * x.x1 + a[2] * x.x2 + a[3] * x.x3
}

/// A root of `xi(z) . x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrRoot {
    pub z: C,
    /// Which root was taken: the position in magnitude order for closed-form
    /// solves, or the seed index for Newton solves.
    pub branch: usize,
}

/// Lattice of Newton seeds `a + bi`, `a, b` in `-2..=2`.
fn seed_lattice() -> Vec<C> {
    (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| C::new(a as f64, b as f64)))
        .collect()
}

/// Both roots of `a z^2 + b z + c` in magnitude order.
fn quadratic_roots(a: C, b: C, c: C) -> [C; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let s = if (b.conj() * disc).re >= 0.0 {
        b + disc
    } else {
        b - disc
    };
    let q = -0.5 * s;
    let mut r = if q.norm() == 0.0 { [ZERO, ZERO] } else { [q / a, c / q] };
    if r[1].norm() < r[0].norm() {
        r.swap(0, 1);
    }
    r
}

fn newton1(p: &Poly, dp: &Poly, z0: C, iters: usize) -> Option<C> {
    let mut z = z0;
    let scale = p.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for _ in 0..iters {
        let v = p.eval(z);
        if v.norm() <= 1e-14 * scale {
            return Some(z);
        }
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            return None;
        }
        z -= v / d;
        if !z.is_finite() {
            return None;
        }
    }
    (p.eval(z).norm() <= 1e-10 * scale * (1.0 + z.norm()).powi(p.0.len() as i32)).then_some(z)
}

/// Solve `xi(z) . x = 1`.
///
/// Degree one and two equations use closed forms; the default root is the
/// one of smallest magnitude, and a seed selects the root nearest to it.
/// Higher degrees run Newton from the seed and then the seed lattice.
pub fn kerr_solve(t: &MeromorphicTriple, x: &MinkVec, seed: Option<C>) -> Result<KerrRoot> {
    let eq = t.equation(x);
    let n = &eq.num;
    let root = match n.degree() {
        None | Some(0) => return Err(Error::DegenerateEquation),
        Some(1) => KerrRoot {
            z: -n.0[0] / n.0[1],
            branch: 0,
        },
        Some(2) => {
            let r = quadratic_roots(n.0[2], n.0[1], n.0[0]);
            let k = match seed {
                Some(s) if (r[1] - s).norm() < (r[0] - s).norm() => 1,
                _ => 0,
            };
            KerrRoot { z: r[k], branch: k }
        }
        Some(_) => {
            let dn = n.derivative();
            let mut found = None;
            for (k, s) in seed.into_iter().chain(seed_lattice()).enumerate() {
                if let Some(z) = newton1(n, &dn, s, 60) {
                    found = Some(KerrRoot { z, branch: k });
                    break;
                }
            }
            found.ok_or(Error::NoRootFound)?
        }
    };
    polish(t, x, root)
}

/// A few Newton steps on the uncleared equation; confirms the root.
fn polish(t: &MeromorphicTriple, x: &MinkVec, mut root: KerrRoot) -> Result<KerrRoot> {
    for _ in 0..3 {
        let xi = weierstrass_xi(t, root.z)?;
        let r = dot(&xi, x) - 1.0;
        if r.norm() <= 1e-15 {
            break;
        }
        let d = dot(&t.xi_prime(root.z)?, x);
        if d.norm() == 0.0 {
            break;
        }
        let step = r / d;
        if !step.is_finite() {
            break;
        }
        root.z -= step;
    }
    let r = (dot(&weierstrass_xi(t, root.z)?, x) - 1.0).norm();
    if r > 1e-10 {
        return Err(Error::NoRootFound);
    }
    Ok(root)
}

/// `xi'(z) . x`, the derivative of the implicit equation in `z`.
fn denominator(t: &MeromorphicTriple, z: C, x: &MinkVec) -> Result<C> {
    let d = dot(&t.xi_prime(z)?, x);
    if d.norm() <= 1e-13 {
        return Err(Error::SingularDenominator);
    }
    Ok(d)
}

/// `d z / d x_j = -xi_j / (xi' . x)`.
pub fn kerr_gradient(t: &MeromorphicTriple, z: C, x: &MinkVec) -> Result<Vec4> {
    let d = denominator(t, z, x)?;
    Ok(weierstrass_xi(t, z)?.map(|c| -c / d))
}

/// `h[k][j] = d_k d_j z`.
pub fn kerr_hessian(t: &MeromorphicTriple, z: C, x: &MinkVec) -> Result<[Vec4; 4]> {
    let d = denominator(t, z, x)?;
    let xi = weierstrass_xi(t, z)?;
    let xp = t.xi_prime(z)?;
    let xpp = t.xi_second(z)?;
    let grad = xi.map(|c| -c / d);
    let dd = dot(&xpp, x);
    let mut h = [[ZERO; 4]; 4];
    for k in 0..4 {
        for j in 0..4 {
            // d_k D = xi'' . x z_k + xi'_k
            let dk = dd * grad[k] + xp[k];
            h[k][j] = -(xp[j] * grad[k] * d - xi[j] * dk) / (d * d);
        }
    }
    Ok(h)
}

/// `xi_A = kappa (f - i g, i)`, `eta_{A'} = kappa (-i f + g, 1)` with
/// `kappa = (sqrt(2) h (xi' . x))^(-1/2)` on the principal branch.
pub fn kerr_spinors(t: &MeromorphicTriple, z: C, x: &MinkVec) -> Result<(Spinor, Spinor)> {
    let d = denominator(t, z, x)?;
    let f = t.f.eval(z)?;
    let g = t.g.eval(z)?;
    let h = t.h.eval(z)?;
    let k2 = std::f64::consts::SQRT_2 * h * d;
    if k2.norm() <= 1e-13 {
        return Err(Error::SingularDenominator);
    }
    let kappa = k2.sqrt().inv();
    Ok((
        Spinor::lower_unprimed(kappa * (f - I * g), kappa * I),
        Spinor::lower_primed(kappa * (-I * f + g), kappa),
    ))
}

/// Roots along a sequence of points, each seeded by its predecessor.
pub fn kerr_path(t: &MeromorphicTriple, xs: &[MinkVec], seed: Option<C>) -> Result<Vec<KerrRoot>> {
    let mut out = Vec::with_capacity(xs.len());
    let mut s = seed;
    for x in xs {
        let r = kerr_solve(t, x, s)?;
        s = Some(r.z);
        out.push(r);
    }
    Ok(out)
}

/// The implicit solution `z(x)` as a scalar field.
///
/// Each point is solved independently from the same seed so that values do
/// not depend on evaluation order.
#[derive(Debug, Clone)]
pub struct KerrField {
    pub triple: MeromorphicTriple,
    pub seed: Option<C>,
    pub domain: Domain,
    pub label: String,
}

impl KerrField {
    pub fn new(triple: MeromorphicTriple, label: impl Into<String>) -> Self {
        KerrField {
            triple,
            seed: None,
            domain: Domain::unbounded(),
            label: label.into(),
        }
    }

    pub fn with_seed(mut self, seed: Option<C>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn solve(&self, x: &MinkVec) -> Result<KerrRoot> {
        self.domain.check(x, 0.0)?;
        kerr_solve(&self.triple, x, self.seed)
    }

    /// `xi_A, eta_{A'}` at `x`.
    pub fn spinors(&self, x: &MinkVec) -> Result<(Spinor, Spinor)> {
        let z = self.solve(x)?.z;
        kerr_spinors(&self.triple, z, x)
    }
}

impl ScalarField for KerrField {
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
        Some(self.solve(x).and_then(|r| kerr_gradient(&self.triple, r.z, x)))
    }

    fn analytic_hessian(&self, x: &MinkVec) -> Option<Result<[Vec4; 4]>> {
        Some(self.solve(x).and_then(|r| kerr_hessian(&self.triple, r.z, x)))
    }

    fn has_analytic_gradient(&self) -> bool {
        true
    }

    fn has_analytic_hessian(&self) -> bool {
        true
    }
}
