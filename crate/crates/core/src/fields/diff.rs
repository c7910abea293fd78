//! Central-difference stencils over Minkowski coordinates.

use num_complex::Complex64;

use crate::spinor::{MinkVec, ZERO};
use crate::Result;

/// Second-order central differences of a vector-valued map.
///
/// Returns `out[a][i] = d_a f_i`.
pub(crate) fn partials<const N: usize, F>(f: F, x: &MinkVec, h: f64) -> Result<[[Complex64; N]; 4]>
where
    F: Fn(&MinkVec) -> Result<[Complex64; N]>,
{
    let mut out = [[ZERO; N]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        let e = MinkVec::axis(a) * h;
        let plus = f(&(*x + e))?;
        let minus = f(&(*x - e))?;
        for i in 0..N {
            row[i] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// Pure second derivatives `d_a d_a f` from the three-point stencil.
pub(crate) fn second_diagonal<F>(f: F, x: &MinkVec, h: f64) -> Result<[Complex64; 4]>
where
    F: Fn(&MinkVec) -> Result<Complex64>,
{
    let center = f(x)?;
    let mut out = [ZERO; 4];
    for (a, o) in out.iter_mut().enumerate() {
        let e = MinkVec::axis(a) * h;
        let plus = f(&(*x + e))?;
        let minus = f(&(*x - e))?;
        *o = (plus - center * 2.0 + minus) / (h * h);
    }
    Ok(out)
}

pub(crate) fn scalar_partials<F>(f: F, x: &MinkVec, h: f64) -> Result<[Complex64; 4]>
where
    F: Fn(&MinkVec) -> Result<Complex64>,
{
    let p = partials(|y| f(y).map(|v| [v]), x, h)?;
    Ok([p[0][0], p[1][0], p[2][0], p[3][0]])
}
