//! Named fields with stable grids, used by the CLI and the test suites.
//!
//! | name            | field                                   | null solution |
//! |-----------------|-----------------------------------------|---------------|
//! | `u`             | `t - x1`                                | yes           |
//! | `q`             | `x2 + i x3`                             | yes           |
//! | `t`             | `t`                                     | no            |
//! | `kerr-basic`    | Kerr data `f = z, g = 0, h = 1`         | yes           |
//! | `surface-basic` | surface `[w, 0, z, 1]`, `z = -v / qbar` | yes           |
//! | `surface-bad`   | surface `[z, 0, w, 1]`                  | no (not harmonic) |

use std::sync::Arc;

use num_complex::Complex64;

use crate::fields::{Domain, FnField, ScalarField, Vec4};
use crate::grid::{AxisSpec, GridSpec};
use crate::kerr::{KerrField, MeromorphicTriple};
use crate::spinor::{MinkVec, ZERO};
use crate::twistor::{BiPoly, SurfaceField, TwistorSurface};

type C = Complex64;

pub const NAMES: [&str; 6] = ["u", "q", "t", "kerr-basic", "surface-basic", "surface-bad"];

/// Built-ins that solve both null-solution equations.
pub const NULL_SOLUTIONS: [&str; 4] = ["u", "q", "kerr-basic", "surface-basic"];

#[derive(Clone)]
pub struct Builtin {
    pub name: &'static str,
    pub field: Arc<dyn ScalarField>,
    /// Default sample grid, inside the domain with room for FD stencils.
    pub grid: GridSpec,
    pub null_solution: bool,
}

fn linear(label: &'static str, grad: Vec4) -> FnField {
    FnField::new(label, move |x: &MinkVec| {
        grad[0] * x.t + grad[1] * x.x1 + grad[2] * x.x2 + grad[3] * x.x3
    })
    .with_gradient(move |_| grad)
    .with_hessian(|_| [[ZERO; 4]; 4])
}

fn unit_grid() -> GridSpec {
    GridSpec::uniform([-1.0; 4], [1.0; 4], 5)
}

pub fn kerr_domain() -> Domain {
    Domain::new([-0.25, -0.25, 0.75, -0.25], [0.25, 0.25, 1.25, 0.25])
}

pub fn surface_domain() -> Domain {
    let inf = f64::INFINITY;
    Domain::new([-inf, -inf, 0.5, -inf], [inf, inf, 1.5, inf])
}

/// `[w, 0, z, 1]`
pub fn basic_surface() -> TwistorSurface {
    TwistorSurface::normal(BiPoly::w(), BiPoly::default())
}

/// `[z, 0, w, 1]`, which violates the normal-form condition.
pub fn bad_surface() -> TwistorSurface {
    TwistorSurface::new([
        BiPoly::z(),
        BiPoly::default(),
        BiPoly::w(),
        BiPoly::constant(C::new(1.0, 0.0)),
    ])
}

fn surface_grid() -> GridSpec {
    GridSpec::new(
        AxisSpec::new(-0.5, 0.5, 5),
        AxisSpec::new(-0.5, 0.5, 5),
        AxisSpec::new(0.7, 1.3, 5),
        AxisSpec::new(-0.5, 0.5, 5),
    )
}

pub fn builtin(name: &str) -> Option<Builtin> {
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let (name, field, grid, null_solution): (&'static str, Arc<dyn ScalarField>, GridSpec, bool) = match name {
        "u" => ("u", Arc::new(linear("u", [one, -one, ZERO, ZERO])), unit_grid(), true),
        "q" => ("q", Arc::new(linear("q", [ZERO, ZERO, one, i])), unit_grid(), true),
        "t" => ("t", Arc::new(linear("t", [one, ZERO, ZERO, ZERO])), unit_grid(), false),
        "kerr-basic" => (
            "kerr-basic",
            Arc::new(KerrField::new(MeromorphicTriple::basic(), "kerr-basic").with_domain(kerr_domain())),
            GridSpec::new(
                AxisSpec::new(-0.2, 0.2, 5),
                AxisSpec::new(-0.2, 0.2, 5),
                AxisSpec::new(0.8, 1.2, 5),
                AxisSpec::new(-0.2, 0.2, 5),
            ),
            true,
        ),
        "surface-basic" => (
            "surface-basic",
            Arc::new(SurfaceField::new(Arc::new(basic_surface()), "surface-basic").with_domain(surface_domain())),
            surface_grid(),
            true,
        ),
        "surface-bad" => (
            "surface-bad",
            Arc::new(SurfaceField::new(Arc::new(bad_surface()), "surface-bad").with_domain(surface_domain())),
            surface_grid(),
            false,
        ),
        _ => return None,
    };
    Some(Builtin {
        name,
        field,
        grid,
        null_solution,
    })
}
