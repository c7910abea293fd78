//! Run configuration read from JSON.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use nullwave_core::builtins::{builtin, NAMES};
use nullwave_core::kerr::{KerrField, TripleSpec};
use nullwave_core::twistor::{SurfaceField, SurfaceSpec};
use nullwave_core::{AxisSpec, Complex64, Domain, GridSpec, MinkVec, ScalarField, Scheme, Tolerances};

use crate::CliError;

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    #[default]
    Analytic,
    Fd,
}

/// Where the field comes from. Exactly one of `builtin`, `kerr`, `surface`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub builtin: Option<String>,
    pub kerr: Option<TripleSpec>,
    pub surface: Option<SurfaceSpec>,
    /// Kerr: `[re, im]`. Surface: `[[z_re, z_im], [w_re, w_im]]`.
    pub seed: Option<serde_json::Value>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t: [f64; 3],
    pub x1: [f64; 3],
    pub x2: [f64; 3],
    pub x3: [f64; 3],
}

impl GridConfig {
    fn to_spec(self) -> Result<GridSpec, CliError> {
        let axis = |name: &str, [min, max, count]: [f64; 3]| {
            if count < 1.0 || count.fract() != 0.0 || !min.is_finite() || !max.is_finite() || min > max {
                return Err(CliError::Config(format!(
                    "grid axis {name}: expected [min, max, count]"
                )));
            }
            Ok(AxisSpec::new(min, max, count as usize))
        };
        Ok(GridSpec::new(
            axis("t", self.t)?,
            axis("x1", self.x1)?,
            axis("x2", self.x2)?,
            axis("x3", self.x3)?,
        ))
    }
}

/// Optional box restricting a generated field.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub source: SourceSpec,
    pub grid: Option<GridConfig>,
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub scheme: SchemeName,
    pub h: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub point: Option<[f64; 4]>,
    pub direction: Option<[f64; 4]>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Everything a command needs, after validation and CLI overrides.
pub struct Resolved {
    pub field: Arc<dyn ScalarField>,
    /// True when the source is a Kerr or twistor generator.
    pub generator: bool,
    pub grid: Option<GridSpec>,
    pub scheme: Scheme,
    pub tol: Tolerances,
    pub point: Option<MinkVec>,
    pub direction: Option<MinkVec>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub h: Option<f64>,
    pub tol: Option<f64>,
}

pub fn load(path: &Path, o: &Overrides) -> Result<Resolved, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    resolve(cfg, o)
}

fn complex(v: &serde_json::Value) -> Option<Complex64> {
    let [re, im]: [f64; 2] = serde_json::from_value(v.clone()).ok()?;
    Some(Complex64::new(re, im))
}

/// Field, whether it comes from a generator, and its default grid.
type Built = (Arc<dyn ScalarField>, bool, Option<GridSpec>);

fn build_field(src: &SourceSpec, domain: Option<Domain>) -> Result<Built, CliError> {
    let chosen = [src.builtin.is_some(), src.kerr.is_some(), src.surface.is_some()];
    if chosen.iter().filter(|c| **c).count() != 1 {
        return Err(CliError::Config(
            "source needs exactly one of builtin, kerr, surface".into(),
        ));
    }
    let bad_seed = || CliError::Config("malformed seed".into());
    if let Some(name) = &src.builtin {
        let b = builtin(name)
            .ok_or_else(|| CliError::Config(format!("unknown builtin {name:?}; expected one of {NAMES:?}")))?;
        if src.seed.is_some() || domain.is_some() {
            return Err(CliError::Config("seed and domain do not apply to builtins".into()));
        }
        let generator = name.starts_with("kerr") || name.starts_with("surface");
        return Ok((b.field, generator, Some(b.grid)));
    }
    let domain = domain.unwrap_or_else(Domain::unbounded);
    if let Some(spec) = &src.kerr {
        let triple = spec.build().map_err(|e| CliError::Config(format!("kerr: {e}")))?;
        let seed = src.seed.as_ref().map(|v| complex(v).ok_or_else(bad_seed)).transpose()?;
        let label = src.label.clone().unwrap_or_else(|| "kerr".into());
        let f = KerrField::new(triple, label).with_seed(seed).with_domain(domain);
        return Ok((Arc::new(f), true, None));
    }
    let spec = src.surface.as_ref().expect("one source is set");
    let surface = spec.build().map_err(|e| CliError::Config(format!("surface: {e}")))?;
    let label = src.label.clone().unwrap_or_else(|| "surface".into());
    let mut f = SurfaceField::new(Arc::new(surface), label).with_domain(domain);
    if let Some(v) = &src.seed {
        let pair: [serde_json::Value; 2] = serde_json::from_value(v.clone()).map_err(|_| bad_seed())?;
        f = f.with_seed((
            complex(&pair[0]).ok_or_else(bad_seed)?,
            complex(&pair[1]).ok_or_else(bad_seed)?,
        ));
    }
    Ok((Arc::new(f), true, None))
}

pub fn resolve(cfg: RunConfig, o: &Overrides) -> Result<Resolved, CliError> {
    if cfg.schema != CONFIG_SCHEMA {
        return Err(CliError::Config(format!("unsupported schema {}", cfg.schema)));
    }
    let domain = cfg
        .domain
        .map(|d| {
            if d.lo.iter().zip(&d.hi).all(|(a, b)| a < b) {
                Ok(Domain::new(d.lo, d.hi))
            } else {
                Err(CliError::Config("domain needs lo < hi on every axis".into()))
            }
        })
        .transpose()?;
    let (field, generator, default_grid) = build_field(&cfg.source, domain)?;
    let grid = match cfg.grid {
        Some(g) => Some(g.to_spec()?),
        None => default_grid,
    };

    let h = o.h.or(cfg.h);
    if let Some(h) = h {
        if !(h.is_finite() && h > 0.0) {
            return Err(CliError::Config("h must be positive".into()));
        }
    }
    let scheme = match (cfg.scheme, h) {
        (SchemeName::Analytic, None) => Scheme::Analytic,
        // an explicit step only makes sense for differences
        (_, Some(h)) => Scheme::Central(Some(h)),
        (SchemeName::Fd, None) => Scheme::fd(),
    };
    let mut tol = cfg.tolerances;
    if let Some(t) = o.tol {
        tol = tol.with_verdict_tol(t);
    }
    tol.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let out = o.out.clone().or(cfg.out);
    let by_ext = out
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| (e == "json").then_some(Format::Json));
    let format = o.format.or(cfg.format).or(by_ext).unwrap_or(Format::Csv);

    Ok(Resolved {
        field,
        generator,
        grid,
        scheme,
        tol,
        point: cfg.point.map(MinkVec::from_array),
        direction: cfg.direction.map(MinkVec::from_array),
        out,
        format,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Resolved, CliError> {
        resolve(
            serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?,
            &Overrides::default(),
        )
    }

    #[test]
    fn builtin_with_defaults() {
        let r = parse(r#"{"schema": 1, "source": {"builtin": "q"}}"#).unwrap();
        assert_eq!(r.scheme, Scheme::Analytic);
        assert_eq!(r.format, Format::Csv);
        assert_eq!(r.grid.unwrap().len(), 625);
        assert!(!r.generator);
    }

    #[test]
    fn step_forces_differences() {
        let r = parse(r#"{"schema": 1, "source": {"builtin": "u"}, "h": 1e-5, "out": "r.json"}"#).unwrap();
        assert_eq!(r.scheme, Scheme::Central(Some(1e-5)));
        assert_eq!(r.format, Format::Json);
    }

    #[test]
    fn rejects_bad_input() {
        for s in [
            r#"{"schema": 2, "source": {"builtin": "q"}}"#,
            r#"{"schema": 1, "source": {"builtin": "nope"}}"#,
            r#"{"schema": 1, "source": {}}"#,
            r#"{"schema": 1, "source": {"builtin": "q"}, "h": -1}"#,
            r#"{"schema": 1, "source": {"builtin": "q"}, "tolerances": {"wave": 0}}"#,
            r#"{"schema": 1, "source": {"builtin": "q"}, "grid": {"t": [0, 1, 2.5], "x1": [0, 1, 3], "x2": [0, 1, 3], "x3": [0, 1, 3]}}"#,
            r#"{"schema": 1, "source": {"kerr": {"f": {"num": [[0, 0], [1, 0]]}, "g": {"num": []}, "h": {"num": []}}}}"#,
        ] {
            assert!(matches!(parse(s), Err(CliError::Config(_))), "{s}");
        }
    }

    #[test]
    fn generator_sources() {
        let k = parse(
            r#"{"schema": 1, "source": {"kerr": {"f": {"num": [[0, 0], [1, 0]]}, "g": {"num": []}, "h": {"num": [[1, 0]]}}, "seed": [-1, 0]},
                "grid": {"t": [0, 0, 1], "x1": [0, 0, 1], "x2": [1, 1, 1], "x3": [0, 0, 1]}}"#,
        )
        .unwrap();
        assert!(k.generator);
        let z = k.field.evaluate(&MinkVec::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        assert!((z + 1.0).norm() < 1e-12);
        let s = parse(
            r#"{"schema": 1, "source": {"surface": {"slots": [[[[0, 0], [1, 0]]], [], [[[0, 0]], [[1, 0]]], [[[1, 0]]]], "normal_form": true}},
                "domain": {"lo": [-1, -1, 0.5, -1], "hi": [1, 1, 1.5, 1]}}"#,
        )
        .unwrap();
        assert!(s.generator && s.grid.is_none());
    }
}
