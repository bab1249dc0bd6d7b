use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    InvalidSignature { plus: usize, minus: usize },
    NotInGroup { residual: f64 },
    NotOnQuadric { residual: f64 },
    InvalidSphere(&'static str),
    DegenerateContactElement(&'static str),
    SingularMoebius,
    CoincidentPoints,
    UnsupportedG(usize),
    InvalidMultiplicities { g: usize, m1: u32, m2: u32 },
    OutOfRange { name: &'static str, value: f64 },
    InvalidGaps(&'static str),
    InvalidPolygon(&'static str),
    RepeatedCurvatures,
    InconsistentData(&'static str),
    NormalizationFailed { iterations: usize, residual: f64 },
    CertificateFailed { name: &'static str, value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidSignature { plus, minus } => {
                write!(f, "invalid signature ({plus}, {minus})")
            }
            Error::NotInGroup { residual } => {
                write!(f, "matrix does not preserve the form (residual {residual:e})")
            }
            Error::NotOnQuadric { residual } => {
                write!(f, "vector is not null (residual {residual:e})")
            }
            Error::InvalidSphere(why) => write!(f, "invalid sphere: {why}"),
            Error::DegenerateContactElement(why) => write!(f, "degenerate contact element: {why}"),
            Error::SingularMoebius => write!(f, "singular Möbius coefficients (ad - bc = 0)"),
            Error::CoincidentPoints => write!(f, "cross ratio of coincident points"),
            Error::UnsupportedG(g) => write!(f, "unsupported number of principal curvatures g = {g}"),
            Error::InvalidMultiplicities { g, m1, m2 } => {
                write!(f, "multiplicities ({m1}, {m2}) are not admissible for g = {g}")
            }
            Error::OutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::InvalidGaps(why) => write!(f, "invalid angle gaps: {why}"),
            Error::InvalidPolygon(why) => write!(f, "invalid polygon: {why}"),
            Error::RepeatedCurvatures => write!(f, "principal curvatures must be strictly decreasing"),
            Error::InconsistentData(why) => write!(f, "inconsistent data: {why}"),
            Error::NormalizationFailed { iterations, residual } => write!(
                f,
                "conformal normalization did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::CertificateFailed { name, value } => {
                write!(f, "sign certificate `{name}` violated (value {value})")
            }
        }
    }
}

impl core::error::Error for Error {}
