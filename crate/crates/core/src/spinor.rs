//! Two-component spinor algebra on Minkowski space.
//!
//! Index conventions: `eps = [[0, 1], [-1, 0]]`, indices are raised with
//! `xi^A = eps^{AB} xi_B` and lowered with `xi_B = xi^A eps_{AB}`, so that
//! `xi^0 = xi_1`, `xi^1 = -xi_0`. Primed indices follow the same rule.
//!
//! A real vector `(t, x1, x2, x3)` corresponds to the Hermitian matrix
//! `(1/sqrt 2) [[t + x1, x2 + i x3], [x2 - i x3, t - x1]]`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Point or vector of Minkowski space, signature `(-,+,+,+)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkVec {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkVec {
    pub const ZERO: MinkVec = MinkVec::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        MinkVec { t, x1, x2, x3 }
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        MinkVec::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.t, self.x1, self.x2, self.x3]
    }

    /// Unit vector along coordinate axis `a` (0 = t).
    pub fn axis(a: usize) -> Self {
        let mut c = [0.0; 4];
        c[a] = 1.0;
        MinkVec::from_array(c)
    }

    pub fn minkowski_norm(&self) -> f64 {
        -self.t * self.t + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.t * self.t + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.minkowski_norm().abs() <= tol * self.euclid_norm_sq().max(1.0)
    }

    /// Light-cone coordinates `(u, v, q)` with `u = t + x1`, `v = t - x1`,
    /// `q = x2 + i x3`.
    pub fn light_cone(&self) -> (f64, f64, Complex64) {
        (self.t + self.x1, self.t - self.x1, Complex64::new(self.x2, self.x3))
    }
}

impl Add for MinkVec {
    type Output = MinkVec;
    fn add(self, o: MinkVec) -> MinkVec {
        MinkVec::new(self.t + o.t, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for MinkVec {
    type Output = MinkVec;
    fn sub(self, o: MinkVec) -> MinkVec {
        MinkVec::new(self.t - o.t, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<f64> for MinkVec {
    type Output = MinkVec;
    fn mul(self, s: f64) -> MinkVec {
        MinkVec::new(self.t * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl fmt::Display for MinkVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.t, self.x1, self.x2, self.x3)
    }
}

/// Index position of a two-component spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    LowerUnprimed,
    UpperUnprimed,
    LowerPrimed,
    UpperPrimed,
}

impl Variance {
    pub fn is_upper(self) -> bool {
        matches!(self, Variance::UpperUnprimed | Variance::UpperPrimed)
    }

    pub fn is_primed(self) -> bool {
        matches!(self, Variance::LowerPrimed | Variance::UpperPrimed)
    }

    fn flipped(self) -> Variance {
        match self {
            Variance::LowerUnprimed => Variance::UpperUnprimed,
            Variance::UpperUnprimed => Variance::LowerUnprimed,
            Variance::LowerPrimed => Variance::UpperPrimed,
            Variance::UpperPrimed => Variance::LowerPrimed,
        }
    }

    /// Complex conjugation swaps primed and unprimed indices.
    fn conjugated(self) -> Variance {
        match self {
            Variance::LowerUnprimed => Variance::LowerPrimed,
            Variance::UpperUnprimed => Variance::UpperPrimed,
            Variance::LowerPrimed => Variance::LowerUnprimed,
            Variance::UpperPrimed => Variance::UpperUnprimed,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Variance::LowerUnprimed => "lower-unprimed",
            Variance::UpperUnprimed => "upper-unprimed",
            Variance::LowerPrimed => "lower-primed",
            Variance::UpperPrimed => "upper-primed",
        }
    }
}

/// A two-component spinor tagged with its index position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub c: [Complex64; 2],
    pub variance: Variance,
}

impl Spinor {
    pub const fn new(c0: Complex64, c1: Complex64, variance: Variance) -> Self {
        Spinor { c: [c0, c1], variance }
    }

    pub fn lower_unprimed(c0: Complex64, c1: Complex64) -> Self {
        Spinor::new(c0, c1, Variance::LowerUnprimed)
    }

    pub fn upper_unprimed(c0: Complex64, c1: Complex64) -> Self {
        Spinor::new(c0, c1, Variance::UpperUnprimed)
    }

    pub fn lower_primed(c0: Complex64, c1: Complex64) -> Self {
        Spinor::new(c0, c1, Variance::LowerPrimed)
    }

    pub fn upper_primed(c0: Complex64, c1: Complex64) -> Self {
        Spinor::new(c0, c1, Variance::UpperPrimed)
    }

    fn expect(&self, upper: bool) -> Result<()> {
        if self.variance.is_upper() == upper {
            Ok(())
        } else {
            Err(Error::VarianceMismatch {
                expected: if upper { "upper index" } else { "lower index" },
                found: self.variance.name(),
            })
        }
    }

    /// `xi^A = eps^{AB} xi_B`.
    pub fn raise(&self) -> Result<Spinor> {
        self.expect(false)?;
        Ok(Spinor::new(self.c[1], -self.c[0], self.variance.flipped()))
    }

    /// `xi_B = xi^A eps_{AB}`.
    pub fn lower(&self) -> Result<Spinor> {
        self.expect(true)?;
        Ok(Spinor::new(-self.c[1], self.c[0], self.variance.flipped()))
    }

    pub fn to_upper(&self) -> Spinor {
        if self.variance.is_upper() {
            *self
        } else {
            Spinor::new(self.c[1], -self.c[0], self.variance.flipped())
        }
    }

    pub fn to_lower(&self) -> Spinor {
        if self.variance.is_upper() {
            Spinor::new(-self.c[1], self.c[0], self.variance.flipped())
        } else {
            *self
        }
    }

    /// Componentwise complex conjugate; the result carries the opposite
    /// primedness (`conj(eta^{A'}) = etabar^A`).
    pub fn conj(&self) -> Spinor {
        Spinor::new(self.c[0].conj(), self.c[1].conj(), self.variance.conjugated())
    }

    /// `s_A t^A` (or `s^A t_A`); the two spinors must carry opposite index
    /// positions of the same primedness.
    pub fn contract(&self, other: &Spinor) -> Result<Complex64> {
        if self.variance.is_primed() != other.variance.is_primed()
            || self.variance.is_upper() == other.variance.is_upper()
        {
            return Err(Error::VarianceMismatch {
                expected: self.variance.flipped().name(),
                found: other.variance.name(),
            });
        }
        Ok(self.c[0] * other.c[0] + self.c[1] * other.c[1])
    }

    pub fn norm(&self) -> f64 {
        (self.c[0].norm_sqr() + self.c[1].norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Spinor {
        Spinor::new(self.c[0] * s, self.c[1] * s, self.variance)
    }

    /// Unit norm, largest-magnitude component real and positive.
    pub fn gauge_normalized(&self) -> Spinor {
        let n = self.norm();
        if n == 0.0 {
            return *self;
        }
        let k = if self.c[0].norm() >= self.c[1].norm() { 0 } else { 1 };
        let phase = self.c[k].conj() / self.c[k].norm();
        self.scale(phase / n)
    }

    /// Antisymmetric product `s0 t1 - s1 t0`, zero iff proportional.
    pub fn wedge(&self, other: &Spinor) -> Complex64 {
        self.c[0] * other.c[1] - self.c[1] * other.c[0]
    }

    /// Relative proportionality defect `|s ^ t| / (|s| |t|)`.
    pub fn proportionality_defect(&self, other: &Spinor) -> f64 {
        let d = self.norm() * other.norm();
        if d == 0.0 {
            f64::INFINITY
        } else {
            self.wedge(other).norm() / d
        }
    }
}

/// What a [`SpinMat`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// `x^{AA'}`
    Position,
    /// `grad_{AA'} f`
    Gradient,
    /// `v^{AA'}`
    Direction,
    Generic,
}

/// 2x2 complex matrix with one unprimed and one primed index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMat {
    pub m: [[Complex64; 2]; 2],
    pub role: Role,
}

impl SpinMat {
    pub const fn new(m: [[Complex64; 2]; 2], role: Role) -> Self {
        SpinMat { m, role }
    }

    pub fn zero(role: Role) -> Self {
        SpinMat::new([[ZERO; 2]; 2], role)
    }

    /// `a^A b^{A'}` (or with both indices down).
    pub fn outer(a: &Spinor, b: &Spinor, role: Role) -> Self {
        SpinMat::new(
            [[a.c[0] * b.c[0], a.c[0] * b.c[1]], [a.c[1] * b.c[0], a.c[1] * b.c[1]]],
            role,
        )
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn column(&self, j: usize) -> [Complex64; 2] {
        [self.m[0][j], self.m[1][j]]
    }

    pub fn row(&self, i: usize) -> [Complex64; 2] {
        self.m[i]
    }

    pub fn scale(&self, s: Complex64) -> SpinMat {
        let mut out = *self;
        for z in out.m.iter_mut().flatten() {
            *z *= s;
        }
        out
    }

    pub fn sub(&self, o: &SpinMat) -> SpinMat {
        let mut out = *self;
        for (a, b) in out.m.iter_mut().flatten().zip(o.m.iter().flatten()) {
            *a -= *b;
        }
        out
    }

    /// Frobenius norm of the anti-Hermitian part.
    pub fn anti_hermitian_residual(&self) -> f64 {
        let m = &self.m;
        let d0 = m[0][0].im;
        let d1 = m[1][1].im;
        let off = (m[0][1] - m[1][0].conj()) * 0.5;
        (d0 * d0 + d1 * d1 + 2.0 * off.norm_sqr()).sqrt()
    }

    /// Both indices moved with `eps`: `M^{AA'} <-> M_{AA'}`.
    ///
    /// The map is its own inverse, so it serves for raising and lowering.
    pub fn eps_dual(&self) -> SpinMat {
        let m = &self.m;
        SpinMat::new([[m[1][1], -m[1][0]], [-m[0][1], m[0][0]]], self.role)
    }

    pub fn with_role(mut self, role: Role) -> SpinMat {
        self.role = role;
        self
    }
}

/// `(t, x1, x2, x3) -> (1/sqrt 2) [[t+x1, x2+i x3], [x2-i x3, t-x1]]`.
pub fn vec_to_spinmat(v: &MinkVec) -> SpinMat {
    complex_vec_to_spinmat(&[
        Complex64::from(v.t),
        Complex64::from(v.x1),
        Complex64::from(v.x2),
        Complex64::from(v.x3),
    ])
    .with_role(Role::Position)
}

/// Complexified correspondence, used for complex-valued vector fields.
pub fn complex_vec_to_spinmat(c: &[Complex64; 4]) -> SpinMat {
    let s = FRAC_1_SQRT_2;
    SpinMat::new(
        [
            [(c[0] + c[1]) * s, (c[2] + I * c[3]) * s],
            [(c[2] - I * c[3]) * s, (c[0] - c[1]) * s],
        ],
        Role::Generic,
    )
}

/// Inverse of [`complex_vec_to_spinmat`].
pub fn spinmat_to_complex_vec(m: &SpinMat) -> [Complex64; 4] {
    let s = FRAC_1_SQRT_2;
    let m = &m.m;
    [
        (m[0][0] + m[1][1]) * s,
        (m[0][0] - m[1][1]) * s,
        (m[0][1] + m[1][0]) * s,
        (m[0][1] - m[1][0]) * (-I) * s,
    ]
}

/// Inverse correspondence for Hermitian matrices.
pub fn spinmat_to_vec(m: &SpinMat, herm_tol: f64) -> Result<MinkVec> {
    let residual = m.anti_hermitian_residual();
    if residual > herm_tol * m.norm().max(1.0) {
        return Err(Error::NonHermitian { residual });
    }
    let c = spinmat_to_complex_vec(m);
    Ok(MinkVec::new(c[0].re, c[1].re, c[2].re, c[3].re))
}

/// Spinor form of the derivative operator applied to a list of partials
/// `(d0 f, d1 f, d2 f, d3 f)`:
/// `(1/sqrt 2) [[d0+d1, d2-i d3], [d2+i d3, d0-d1]]`.
pub fn nabla_matrix(p: &[Complex64; 4]) -> SpinMat {
    let s = FRAC_1_SQRT_2;
    SpinMat::new(
        [
            [(p[0] + p[1]) * s, (p[2] - I * p[3]) * s],
            [(p[2] + I * p[3]) * s, (p[0] - p[1]) * s],
        ],
        Role::Gradient,
    )
}

/// Inverse of [`nabla_matrix`]: recovers the coordinate partials.
pub fn nabla_to_partials(g: &SpinMat) -> [Complex64; 4] {
    let s = FRAC_1_SQRT_2;
    let m = &g.m;
    [
        (m[0][0] + m[1][1]) * s,
        (m[0][0] - m[1][1]) * s,
        (m[0][1] + m[1][0]) * s,
        (m[1][0] - m[0][1]) * (-I) * s,
    ]
}

/// Factor a null vector as `v^{AA'} = lambda rho^A conj(rho^{A'})`.
///
/// `rho` has unit norm with its largest component real and positive; the
/// sign of `lambda` records time orientation.
pub fn null_decompose(v: &MinkVec, null_tol: f64) -> Result<(f64, Spinor)> {
    if v.euclid_norm_sq() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !v.is_null(null_tol) {
        return Err(Error::NotNull {
            norm: v.minkowski_norm(),
        });
    }
    let m = vec_to_spinmat(v);
    let j = if m.m[0][0].norm() >= m.m[1][1].norm() { 0 } else { 1 };
    let col = m.column(j);
    let rho = Spinor::upper_unprimed(col[0], col[1]).gauge_normalized();
    // trace(rho rho^dagger) = 1, so lambda is the trace of M.
    let lambda = (m.m[0][0] + m.m[1][1]).re;
    Ok((lambda, rho))
}

/// Given `xi_A` with `xi_A M^{AA'} = 0`, return `sigma^{A'}` such that
/// `M^{AA'} = xi^A sigma^{A'}`.
pub fn solve_annihilator(xi: &Spinor, m: &SpinMat, annihilate_tol: f64) -> Result<Spinor> {
    xi.expect(false)?;
    if xi.variance.is_primed() {
        return Err(Error::VarianceMismatch {
            expected: "lower-unprimed",
            found: xi.variance.name(),
        });
    }
    let xn = xi.norm();
    if xn == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mn = m.norm();
    if mn == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let contraction = [
        xi.c[0] * m.m[0][0] + xi.c[1] * m.m[1][0],
        xi.c[0] * m.m[0][1] + xi.c[1] * m.m[1][1],
    ];
    let residual = (contraction[0].norm_sqr() + contraction[1].norm_sqr()).sqrt();
    if residual > annihilate_tol * xn * mn {
        return Err(Error::NotAnnihilated { residual });
    }
    let up = xi.to_upper();
    let n2 = xn * xn;
    let sigma = |j: usize| (up.c[0].conj() * m.m[0][j] + up.c[1].conj() * m.m[1][j]) / n2;
    Ok(Spinor::upper_primed(sigma(0), sigma(1)))
}

/// Full contraction `G_{AA'} V^{AA'}`; for a gradient and a position-type
/// matrix this is the directional derivative `df(v)`.
pub fn contract_full(g: &SpinMat, v: &SpinMat) -> Complex64 {
    g.m.iter().flatten().zip(v.m.iter().flatten()).map(|(a, b)| a * b).sum()
}
