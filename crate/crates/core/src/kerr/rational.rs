//! Complex polynomials and rational functions of one variable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spinor::ZERO;
use crate::{Error, Result};

type C = Complex64;

/// Relative threshold below which coefficients count as zero during
/// normalization and common-factor cancellation.
pub const COEFF_TOL: f64 = 1e-12;

/// Polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub Vec<C>);

impl Poly {
    pub fn new(c: Vec<C>) -> Self {
        Poly(c).trimmed(0.0)
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(C::new(1.0, 0.0))
    }

    /// The identity `z`.
    pub fn z() -> Self {
        Poly::new(vec![ZERO, C::new(1.0, 0.0)])
    }

    fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop trailing coefficients with `|c| <= rel * max|c|`.
    fn trimmed(mut self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        while self.0.last().is_some_and(|c| c.norm() <= cut) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> C {
        self.0.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: C) -> C {
        self.0.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(ZERO) + o.0.get(k).copied().unwrap_or(ZERO))
                .collect(),
        )
    }

    pub fn scale(&self, s: C) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut q = vec![ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] / lead;
            q[k] = c;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= c * dc;
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor, with remainders below `rel` times
    /// the operand scale treated as zero.
    pub fn gcd(&self, o: &Poly, rel: f64) -> Poly {
        let scale = self.max_abs().max(o.max_abs());
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            let r = if r.max_abs() <= rel * scale {
                Poly::default()
            } else {
                r.trimmed(rel)
            };
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Poly::one();
        }
        a.scale(a.leading().inv())
    }
}

/// `num / den` with a monic denominator and common factors removed.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let (mut num, mut den) = (num, den);
        let g = num.gcd(&den, COEFF_TOL);
        if g.degree().unwrap_or(0) > 0 {
            num = num.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        let lead = den.leading().inv();
        Ok(RationalFn {
            num: num.scale(lead).trimmed(COEFF_TOL),
            den: den.scale(lead),
        })
    }

    pub fn poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: C) -> Self {
        RationalFn::poly(Poly::constant(c))
    }

    pub fn z() -> Self {
        RationalFn::poly(Poly::z())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: C) -> Result<C> {
        let d = self.den.eval(z);
        let n = self.num.eval(z);
        if d.norm() <= 1e-14 * (1.0 + n.norm()) || !d.is_finite() {
            return Err(Error::PoleAt(z));
        }
        Ok(n / d)
    }

    pub fn derivative(&self) -> RationalFn {
        // (n' d - n d') / d^2, renormalized.
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFn::new(n, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        if self.den == o.den {
            return RationalFn::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RationalFn::new(n, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn scale(&self, s: C) -> RationalFn {
        RationalFn {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::Invalid("reciprocal of zero".into()));
        }
        RationalFn::new(self.den.clone(), self.num.clone())
    }
}

/// JSON form: ascending coefficient lists of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalSpec {
    pub num: Vec<[f64; 2]>,
    #[serde(default = "unit_den")]
    pub den: Vec<[f64; 2]>,
}

fn unit_den() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

impl RationalSpec {
    pub fn build(&self) -> Result<RationalFn> {
        let conv = |v: &[[f64; 2]]| -> Result<Poly> {
            if v.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("non-finite coefficient".into()));
            }
            Ok(Poly::new(v.iter().map(|[re, im]| C::new(*re, *im)).collect()))
        };
        RationalFn::new(conv(&self.num)?, conv(&self.den)?)
    }

    pub fn from_fn(r: &RationalFn) -> Self {
        let conv = |p: &Poly| p.0.iter().map(|c| [c.re, c.im]).collect();
        RationalSpec {
            num: conv(&r.num),
            den: conv(&r.den),
        }
    }
}
