//! Twistors `X = (xi_0, xi_1, eta^{0'}, eta^{1'})`, their conjugates,
//! light rays, and the quaternionic picture of null twistors.

mod surface;

pub use surface::{
    check_prop_condition, incidence_hessian, incidence_partials, normalize_chart, regularity, solve_incidence, BiPoly,
    FnChart, IncidencePartials, IncidenceRoot, NewtonConfig, NormalChart, SurfaceChart, SurfaceField, SurfaceSpec,
    TwistorSurface,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

use crate::spinor::{MinkVec, I};
use crate::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twistor(pub [C; 4]);

/// `(rho^A, sigma_{A'})`, the target of conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualTwistor(pub [C; 4]);

fn swap_conj(x: &[C; 4]) -> [C; 4] {
    [x[2].conj(), x[3].conj(), x[0].conj(), x[1].conj()]
}

fn norm4(x: &[C; 4]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

impl Twistor {
    pub fn new(xi0: C, xi1: C, eta0: C, eta1: C) -> Self {
        Twistor([xi0, xi1, eta0, eta1])
    }

    pub fn xi(&self) -> [C; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn eta(&self) -> [C; 2] {
        [self.0[2], self.0[3]]
    }

    pub fn norm(&self) -> f64 {
        norm4(&self.0)
    }

    pub fn conj(&self) -> DualTwistor {
        DualTwistor(swap_conj(&self.0))
    }

    /// `X^a conj(L)_a`.
    pub fn inner(&self, l: &Twistor) -> C {
        self.0.iter().zip(l.conj().0).map(|(a, b)| a * b).sum()
    }

    /// Equality in projective space: every 2x2 cross product vanishes.
    pub fn proj_eq(&self, other: &Twistor, tol: f64) -> bool {
        let scale = self.norm() * other.norm();
        (0..4).all(|i| (i + 1..4).all(|j| (self.0[i] * other.0[j] - self.0[j] * other.0[i]).norm() <= tol * scale))
    }

    pub fn is_null(&self, tol: f64) -> Result<bool> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroTwistor);
        }
        Ok(self.inner(self).norm() <= tol * n * n)
    }

    /// `(r, s)` with `r = u eta0 + q eta1 + i xi0`, `s = qbar eta0 + v eta1 + i xi1`.
    pub fn incidence_residual(&self, x: &MinkVec) -> [C; 2] {
        incidence_forms(&self.0, x)
    }

    /// A point on the light ray of a null twistor and the ray's null
    /// direction, normalized to unit time component.
    pub fn ray_through(&self, tol: f64) -> Result<(MinkVec, MinkVec)> {
        let [xi0, xi1, e0, e1] = self.0;
        let n2 = e0.norm_sqr() + e1.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::EtaZero);
        }
        if !self.is_null(tol)? {
            return Err(Error::NotNull {
                norm: self.inner(self).re,
            });
        }
        // Hermitian P = [[u, q], [qbar, v]] with P eta = w := -i xi.
        let w = [-I * xi0, -I * xi1];
        let e = [e0, e1];
        let c = (w[0].conj() * e0 + w[1].conj() * e1).re;
        let p =
            |a: usize, b: usize| (w[a] * e[b].conj() + e[a] * w[b].conj()) / n2 - e[a] * e[b].conj() * (c / (n2 * n2));
        let point = MinkVec::new(
            0.5 * (p(0, 0).re + p(1, 1).re),
            0.5 * (p(0, 0).re - p(1, 1).re),
            p(0, 1).re,
            p(0, 1).im,
        );
        // Direction D = zeta zeta^dagger with zeta orthogonal to eta.
        let z = [e1.conj(), -e0.conj()];
        let d = |a: usize, b: usize| z[a] * z[b].conj();
        let t = 0.5 * (d(0, 0).re + d(1, 1).re);
        let dir = MinkVec::new(1.0, 0.5 * (d(0, 0).re - d(1, 1).re) / t, d(0, 1).re / t, d(0, 1).im / t);
        Ok((point, dir))
    }
}

pub(crate) fn incidence_forms(x4: &[C; 4], x: &MinkVec) -> [C; 2] {
    let (u, v, q) = x.light_cone();
    let [xi0, xi1, e0, e1] = *x4;
    [e0 * u + q * e1 + I * xi0, q.conj() * e0 + e1 * v + I * xi1]
}

impl DualTwistor {
    pub fn conj(&self) -> Twistor {
        Twistor(swap_conj(&self.0))
    }
}

/// `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// `a + b j` for complex `a`, `b`.
    pub fn from_complex_pair(a: C, b: C) -> Self {
        Quaternion::new(a.re, a.im, b.re, b.im)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// `[f, g, h, k] -> [f + g j, h + k j]`.
pub fn hopf(p: &[C; 4]) -> Result<[Quaternion; 2]> {
    if norm4(p) == 0.0 {
        return Err(Error::ZeroPoint);
    }
    Ok([
        Quaternion::from_complex_pair(p[0], p[1]),
        Quaternion::from_complex_pair(p[2], p[3]),
    ])
}

/// Membership in the null hypersurface, tested as
/// `Re(conj(q2) q1) = 0` on the Hopf image.
pub fn in_n5(p: &[C; 4], tol: f64) -> Result<bool> {
    let [q1, q2] = hopf(p)?;
    let s = 2.0 * (q2.conj() * q1).w;
    Ok(s.abs() <= tol * (q1.norm_sqr() + q2.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::ZERO;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn one() -> C {
        c(1.0, 0.0)
    }

    #[test]
    fn conjugation_examples() {
        let x = Twistor::new(one(), ZERO, ZERO, ZERO);
        assert_eq!(x.conj().0, [ZERO, ZERO, one(), ZERO]);
        let x = Twistor::new(ZERO, ZERO, one(), ZERO);
        assert_eq!(x.conj().0, [one(), ZERO, ZERO, ZERO]);
        let x = Twistor::new(I, ZERO, ZERO, ZERO);
        assert_eq!(x.conj().0, [ZERO, ZERO, -I, ZERO]);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn inner_and_nullity() {
        let a = Twistor::new(one(), ZERO, one(), ZERO);
        assert_eq!(a.inner(&a), c(2.0, 0.0));
        assert!(!a.is_null(1e-12).unwrap());
        let b = Twistor::new(I, ZERO, one(), ZERO);
        assert_eq!(b.inner(&b), ZERO);
        assert!(b.is_null(1e-12).unwrap());
        assert!(Twistor::new(c(3.0, 1.0), c(-2.0, 0.5), ZERO, ZERO)
            .is_null(1e-12)
            .unwrap());
        assert_eq!(
            Twistor::new(ZERO, ZERO, ZERO, ZERO).is_null(1e-12),
            Err(Error::ZeroTwistor)
        );
    }

    #[test]
    fn projective_equality() {
        let a = Twistor::new(one(), I, c(2.0, 0.0), ZERO);
        let s = c(0.3, -1.7);
        let b = Twistor(a.0.map(|z| z * s));
        assert!(a.proj_eq(&b, 1e-12));
        assert!(!a.proj_eq(&Twistor::new(one(), ZERO, ZERO, ZERO), 1e-12));
    }

    #[test]
    fn incidence_examples() {
        let x = Twistor::new(ZERO, ZERO, c(0.4, 2.0), c(-1.0, 3.0));
        assert_eq!(x.incidence_residual(&MinkVec::ZERO), [ZERO, ZERO]);
        let x = Twistor::new(c(0.0, 2.0), ZERO, one(), one());
        assert_eq!(x.incidence_residual(&MinkVec::new(0.0, 1.0, 1.0, 0.0)), [ZERO, ZERO]);
        let x = Twistor::new(one(), ZERO, ZERO, one());
        assert_eq!(x.incidence_residual(&MinkVec::ZERO), [I, ZERO]);
    }

    #[test]
    fn rays() {
        let x = Twistor::new(ZERO, ZERO, one(), ZERO);
        let (p, d) = x.ray_through(1e-12).unwrap();
        assert_eq!(x.incidence_residual(&p), [ZERO, ZERO]);
        assert_eq!(d, MinkVec::new(1.0, -1.0, 0.0, 0.0));

        let x = Twistor::new(c(0.0, 2.0), ZERO, one(), one());
        let (p, d) = x.ray_through(1e-12).unwrap();
        assert!((d - MinkVec::new(1.0, 0.0, -1.0, 0.0)).max_abs() < 1e-15);
        for s in [-2.0, -1.0, 1.0, 2.0, 3.0] {
            let r = x.incidence_residual(&(p + d * s));
            assert!(r[0].norm() < 1e-12 && r[1].norm() < 1e-12);
        }
        // The hand-checked point lies on the same ray.
        let r = x.incidence_residual(&MinkVec::new(0.0, 1.0, 1.0, 0.0));
        assert_eq!(r, [ZERO, ZERO]);

        assert_eq!(
            Twistor::new(one(), ZERO, ZERO, ZERO).ray_through(1e-12),
            Err(Error::EtaZero)
        );
        assert!(matches!(
            Twistor::new(one(), ZERO, one(), ZERO).ray_through(1e-12),
            Err(Error::NotNull { .. })
        ));
    }

    #[test]
    fn hopf_examples() {
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let unit = Quaternion::new(1.0, 0.0, 0.0, 0.0);
        let zero = Quaternion::new(0.0, 0.0, 0.0, 0.0);
        assert_eq!(hopf(&[one(), ZERO, ZERO, one()]).unwrap(), [unit, j]);
        assert_eq!(hopf(&[ZERO, one(), ZERO, ZERO]).unwrap(), [j, zero]);
        assert_eq!(hopf(&[one(), ZERO, one(), ZERO]).unwrap(), [unit, unit]);
        assert_eq!(hopf(&[ZERO; 4]), Err(Error::ZeroPoint));
    }

    #[test]
    fn quaternion_units() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn n5_examples() {
        assert!(in_n5(&[I, ZERO, one(), ZERO], 1e-12).unwrap());
        assert!(!in_n5(&[one(), ZERO, one(), ZERO], 1e-12).unwrap());
        assert!(in_n5(&[c(1.0, 2.0), c(-3.0, 0.1), ZERO, ZERO], 1e-12).unwrap());
    }
}
