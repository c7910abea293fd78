use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the spinor, field, twistor and Kerr layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (anti-Hermitian part {residual:e})")]
    NonHermitian { residual: f64 },
    #[error("spinor variance mismatch: expected {expected}, found {found}")]
    VarianceMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("vector is not null (Minkowski norm {norm:e})")]
    NotNull { norm: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("spinor does not annihilate the matrix (contraction {residual:e})")]
    NotAnnihilated { residual: f64 },
    #[error("point lies outside the field domain (or its stencil does)")]
    OutOfDomain,
    #[error("matrix is not rank one (|det| = {det:e})")]
    NotRankOne { det: f64 },
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("gradient vanishes")]
    ZeroGradient,
    #[error("direction ratio degenerates in both charts")]
    ChartBreakdown,
    #[error("ratio field is not shear-free (residual {residual:e})")]
    NotSfr { residual: f64 },
    #[error("ratio field is constant; the induced solution is degenerate")]
    DegenerateConstantRatio,
    #[error("zero twistor")]
    ZeroTwistor,
    #[error("twistor has vanishing primed part")]
    EtaZero,
    #[error("zero point in projective space")]
    ZeroPoint,
    #[error("eta^1' vanishes at a sample point")]
    EtaDenominatorZero,
    #[error("surface chart is singular at the base point")]
    SingularChart,
    #[error("Newton iteration failed to converge from every seed")]
    NewtonDiverged,
    #[error("incidence bracket {{r,s}} vanishes at the solution")]
    SingularBracket,
    #[error("pole at z = {0}")]
    PoleAt(Complex64),
    #[error("h vanishes at the evaluation point")]
    ZeroH,
    #[error("no root of the implicit equation was found")]
    NoRootFound,
    #[error("implicit equation does not depend on z")]
    DegenerateEquation,
    #[error("singular denominator in implicit differentiation")]
    SingularDenominator,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures of an iterative or implicit numerical step, as
    /// opposed to malformed input or a failed mathematical check.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NewtonDiverged
                | Error::SingularBracket
                | Error::NoRootFound
                | Error::SingularDenominator
                | Error::SingularChart
                | Error::ChartBreakdown
                | Error::PoleAt(_)
                | Error::ZeroH
                | Error::EtaDenominatorZero
                | Error::DegenerateEquation
        )
    }

    /// Short stable tag used in report status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::NonHermitian { .. } => "non_hermitian",
            Error::VarianceMismatch { .. } => "variance_mismatch",
            Error::NotNull { .. } => "not_null",
            Error::ZeroVector => "zero_vector",
            Error::NotAnnihilated { .. } => "not_annihilated",
            Error::OutOfDomain => "out_of_domain",
            Error::NotRankOne { .. } => "not_rank_one",
            Error::ZeroMatrix => "zero_matrix",
            Error::ZeroGradient => "zero_gradient",
            Error::ChartBreakdown => "chart_breakdown",
            Error::NotSfr { .. } => "not_sfr",
            Error::DegenerateConstantRatio => "degenerate_constant_ratio",
            Error::ZeroTwistor => "zero_twistor",
            Error::EtaZero => "eta_zero",
            Error::ZeroPoint => "zero_point",
            Error::EtaDenominatorZero => "eta_denominator_zero",
            Error::SingularChart => "singular_chart",
            Error::NewtonDiverged => "newton_diverged",
            Error::SingularBracket => "singular_bracket",
            Error::PoleAt(_) => "pole",
            Error::ZeroH => "zero_h",
            Error::NoRootFound => "no_root_found",
            Error::DegenerateEquation => "degenerate_equation",
            Error::SingularDenominator => "singular_denominator",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
