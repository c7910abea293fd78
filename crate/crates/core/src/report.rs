//! Per-point residual records and their CSV / JSON forms.
//!
//! CSV column order is fixed: coordinates, status, then residual
//! magnitudes. Missing values (skipped or failed points) are empty cells in
//! CSV and `null` in JSON.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Residual magnitudes at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: [f64; 4],
    /// `ok`, `low_gradient`, or an error tag.
    pub status: String,
    pub det: Option<f64>,
    pub wave: Option<f64>,
    pub pde: Option<[f64; 8]>,
    pub sfr_xi: Option<f64>,
    pub sfr_eta: Option<f64>,
    pub kernel_xi: Option<f64>,
    pub kernel_eta: Option<f64>,
    pub coincident: Option<bool>,
}

impl PointRecord {
    pub fn empty(x: [f64; 4], status: impl Into<String>) -> Self {
        PointRecord {
            x,
            status: status.into(),
            det: None,
            wave: None,
            pde: None,
            sfr_xi: None,
            sfr_eta: None,
            kernel_xi: None,
            kernel_eta: None,
            coincident: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn pde_max(&self) -> Option<f64> {
        self.pde.map(|p| p.iter().copied().fold(0.0, f64::max))
    }

    /// Numeric columns in CSV order (after coordinates and status).
    fn numeric(&self) -> Vec<Option<f64>> {
        let mut v = vec![self.det, self.wave];
        match self.pde {
            Some(p) => v.extend(p.iter().map(|x| Some(*x))),
            None => v.extend(std::iter::repeat_n(None, 8)),
        }
        v.extend([self.sfr_xi, self.sfr_eta, self.kernel_xi, self.kernel_eta]);
        v
    }
}

pub const NUMERIC_COLUMNS: [&str; 14] = [
    "det",
    "wave",
    "pde1",
    "pde2",
    "pde3",
    "pde4",
    "pde5",
    "pde6",
    "pde7",
    "pde8",
    "sfr_xi",
    "sfr_eta",
    "kernel_xi",
    "kernel_eta",
];

pub fn csv_header() -> String {
    let mut cols = vec!["t", "x1", "x2", "x3", "status"];
    cols.extend(NUMERIC_COLUMNS);
    cols.push("coincident");
    cols.join(",")
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub column: String,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub count: usize,
}

/// Column-wise max and mean over the records that carry a value.
pub fn aggregate(records: &[PointRecord]) -> Vec<ColumnStats> {
    let rows: Vec<Vec<Option<f64>>> = records.iter().map(|r| r.numeric()).collect();
    NUMERIC_COLUMNS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let vals: Vec<f64> = rows.iter().filter_map(|r| r[k]).collect();
            let count = vals.len();
            let max = vals.iter().copied().reduce(f64::max);
            let mean = (count > 0).then(|| vals.iter().sum::<f64>() / count as f64);
            ColumnStats {
                column: name.to_string(),
                max,
                mean,
                count,
            }
        })
        .collect()
}

/// Overall outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub null_solution: bool,
    pub spinor_equations: bool,
    pub at_least_one_sfr: bool,
    pub xi_branch_max: Option<f64>,
    pub eta_branch_max: Option<f64>,
    pub sfr_tol: f64,
    pub low_gradient_points: usize,
    pub error_points: usize,
    pub numeric_failure: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema: u32,
    pub label: String,
    pub scheme: String,
    pub points: Vec<PointRecord>,
    pub aggregate: Vec<ColumnStats>,
    pub verdict: Verdict,
}

impl ResidualReport {
    pub fn to_csv(&self) -> String {
        let mut out = csv_header();
        out.push('\n');
        for r in &self.points {
            let mut cells: Vec<String> = r.x.iter().map(|c| c.to_string()).collect();
            cells.push(r.status.clone());
            cells.extend(r.numeric().into_iter().map(cell));
            cells.push(r.coincident.map(|b| b.to_string()).unwrap_or_default());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn column(&self, name: &str) -> Option<&ColumnStats> {
        self.aggregate.iter().find(|c| c.column == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(det: f64, wave: Option<f64>) -> PointRecord {
        let mut r = PointRecord::empty([0.0, 1.0, 2.0, 3.0], "ok");
        r.det = Some(det);
        r.wave = wave;
        r
    }

    #[test]
    fn aggregates_match_records() {
        let records = vec![rec(1.0, Some(2.0)), rec(3.0, None), rec(2.0, Some(4.0))];
        let agg = aggregate(&records);
        assert_eq!(agg[0].max, Some(3.0));
        assert_eq!(agg[0].mean, Some(2.0));
        assert_eq!(agg[1].count, 2);
        assert_eq!(agg[1].mean, Some(3.0));
        assert_eq!(agg[2].max, None);
    }

    #[test]
    fn csv_rows_have_fixed_width() {
        let report = ResidualReport {
            schema: SCHEMA_VERSION,
            label: "x".into(),
            scheme: "analytic".into(),
            points: vec![rec(0.5, Some(0.0))],
            aggregate: vec![],
            verdict: Verdict {
                null_solution: false,
                spinor_equations: false,
                at_least_one_sfr: false,
                xi_branch_max: None,
                eta_branch_max: None,
                sfr_tol: 1e-5,
                low_gradient_points: 0,
                error_points: 0,
                numeric_failure: false,
                pass: false,
            },
        };
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        let width = lines[0].split(',').count();
        assert_eq!(width, 20);
        assert_eq!(lines[1].split(',').count(), width);
        assert!(lines[1].starts_with("0,1,2,3,ok,0.5,0,"));
    }
}
