use std::fmt::Write as _;

use serde::Serialize;

use nullwave_core::fields::{partials, semiconformality_residual, wave_residual};
use nullwave_core::grid::par_map;
use nullwave_core::sfr::{classify_kernel_direction, verify_grid};
use nullwave_core::{Error, MinkVec, VerifyOptions};

use crate::config::{Format, Resolved};
use crate::{CliError, Outcome};

fn grid_of(r: &Resolved) -> Result<nullwave_core::GridSpec, CliError> {
    r.grid
        .ok_or_else(|| CliError::Config("a grid is required for this source".into()))
}

pub fn verify(r: &Resolved, threads: Option<usize>) -> Result<(String, Outcome), CliError> {
    let grid = grid_of(r)?;
    let opts = VerifyOptions {
        scheme: r.scheme,
        tol: r.tol,
        threads,
    };
    let report = verify_grid(r.field.clone(), &grid, opts).map_err(|e| CliError::Config(e.to_string()))?;
    let v = &report.verdict;
    eprintln!(
        "{}: {} points, null solution {}, shear-free branch {}, errors {}",
        report.label,
        report.points.len(),
        v.null_solution,
        v.at_least_one_sfr,
        v.error_points
    );
    let outcome = if v.numeric_failure {
        Outcome::Numeric
    } else if v.pass {
        Outcome::Pass
    } else {
        Outcome::Verdict
    };
    let body = match r.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json() + "\n",
    };
    Ok((body, outcome))
}

#[derive(Serialize)]
struct ClassifyOutput {
    schema: u32,
    branch: Option<nullwave_core::Branch>,
    factor: Option<[f64; 2]>,
    kernel_residual: Option<f64>,
    xi_defect: Option<f64>,
    eta_defect: Option<f64>,
    error: Option<String>,
}

pub fn classify(r: &Resolved) -> Result<(String, Outcome), CliError> {
    let (Some(x), Some(v)) = (r.point, r.direction) else {
        return Err(CliError::Config("classify needs point and direction".into()));
    };
    let finite = |f: f64| f.is_finite().then_some(f);
    let (out, outcome) = match classify_kernel_direction(r.field.as_ref(), &x, &v, r.scheme, &r.tol) {
        Ok(c) => (
            ClassifyOutput {
                schema: 1,
                branch: Some(c.branch),
                factor: c.factor.map(|f| [f.re, f.im]),
                kernel_residual: Some(c.kernel_residual),
                xi_defect: finite(c.xi_defect),
                eta_defect: finite(c.eta_defect),
                error: None,
            },
            Outcome::Pass,
        ),
        Err(e) => {
            eprintln!("classify: {e}");
            let outcome = if e.is_numeric() {
                Outcome::Numeric
            } else {
                Outcome::Verdict
            };
            (
                ClassifyOutput {
                    schema: 1,
                    branch: None,
                    factor: None,
                    kernel_residual: None,
                    xi_defect: None,
                    eta_defect: None,
                    error: Some(e.tag().into()),
                },
                outcome,
            )
        }
    };
    let body = serde_json::to_string(&out).expect("plain data serializes") + "\n";
    Ok((body, outcome))
}

#[derive(Debug, Clone, Serialize)]
struct Sample {
    x: [f64; 4],
    singular: bool,
    status: String,
    z: Option<[f64; 2]>,
    grad: Option<[[f64; 2]; 4]>,
    det: Option<f64>,
    wave: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct GenerateSummary {
    points: usize,
    singular: usize,
    passing: usize,
    fraction: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct GenerateReport<'a> {
    schema: u32,
    label: &'a str,
    points: &'a [Sample],
    summary: GenerateSummary,
}

/// Smallest fraction of non-singular points that must pass.
const GENERATE_QUORUM: f64 = 0.95;

fn sample(r: &Resolved, x: &MinkVec) -> Sample {
    let f = r.field.as_ref();
    let mut s = Sample {
        x: x.to_array(),
        singular: false,
        status: "ok".into(),
        z: None,
        grad: None,
        det: None,
        wave: None,
        pass: false,
    };
    let fail = |s: &mut Sample, e: Error| {
        s.singular = e.is_numeric();
        s.status = e.tag().into();
    };
    match f.evaluate(x) {
        Ok(z) => s.z = Some([z.re, z.im]),
        Err(e) => {
            fail(&mut s, e);
            return s;
        }
    }
    let step = (|| {
        let g = partials(f, x, r.scheme)?;
        let det = semiconformality_residual(f, x, r.scheme)?.norm();
        let wave = wave_residual(f, x, r.scheme)?.norm();
        Ok::<_, Error>((g, det, wave))
    })();
    match step {
        Ok((g, det, wave)) => {
            s.grad = Some(g.map(|c| [c.re, c.im]));
            s.det = Some(det);
            s.wave = Some(wave);
            let analytic = r.scheme.is_analytic() && f.has_analytic_gradient();
            let det_tol = if analytic { r.tol.det_analytic } else { r.tol.det_fd };
            s.pass = det <= det_tol && wave <= r.tol.wave;
        }
        Err(e) => fail(&mut s, e),
    }
    s
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn samples_csv(rows: &[Sample]) -> String {
    let mut out = String::from("t,x1,x2,x3,singular,status,z_re,z_im");
    for a in ["t", "x1", "x2", "x3"] {
        let _ = write!(out, ",dz_{a}_re,dz_{a}_im");
    }
    out.push_str(",det,wave,pass\n");
    for s in rows {
        let [t, x1, x2, x3] = s.x;
        let _ = write!(out, "{t},{x1},{x2},{x3},{},{}", s.singular, s.status);
        let z = s.z.map_or([None, None], |[a, b]| [Some(a), Some(b)]);
        let _ = write!(out, ",{},{}", cell(z[0]), cell(z[1]));
        for k in 0..4 {
            let g = s.grad.map(|g| g[k]);
            let _ = write!(out, ",{},{}", cell(g.map(|c| c[0])), cell(g.map(|c| c[1])));
        }
        let _ = writeln!(out, ",{},{},{}", cell(s.det), cell(s.wave), s.pass);
    }
    out
}

pub fn generate(r: &Resolved, threads: Option<usize>) -> Result<(String, Outcome), CliError> {
    if !r.generator {
        return Err(CliError::Config("generate needs a kerr or surface source".into()));
    }
    let grid = grid_of(r)?;
    grid.validate(!r.scheme.is_analytic())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let points = grid.points();
    let rows = par_map(&points, threads, |x| sample(r, x));
    let singular = rows.iter().filter(|s| s.singular).count();
    let regular = rows.len() - singular;
    let passing = rows.iter().filter(|s| s.pass).count();
    let fraction = (regular > 0).then(|| passing as f64 / regular as f64);
    let pass = fraction.is_some_and(|f| f >= GENERATE_QUORUM);
    eprintln!(
        "{}: {} points, {singular} singular, {passing} of {regular} pass",
        r.field.label(),
        rows.len()
    );
    let outcome = match fraction {
        None => Outcome::Numeric,
        Some(_) if pass => Outcome::Pass,
        Some(_) => Outcome::Verdict,
    };
    let body = match r.format {
        Format::Csv => samples_csv(&rows),
        Format::Json => {
            let rep = GenerateReport {
                schema: 1,
                label: r.field.label(),
                points: &rows,
                summary: GenerateSummary {
                    points: rows.len(),
                    singular,
                    passing,
                    fraction,
                    pass,
                },
            };
            serde_json::to_string_pretty(&rep).expect("plain data serializes") + "\n"
        }
    };
    Ok((body, outcome))
}
