use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A number that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// A parameter is outside its admissible range.
    InvalidParameter(&'static str),
    ZeroWavevector {
        index: usize,
    },
    AmplitudeMismatch {
        a: f64,
        b: f64,
    },
    EmptyInput,
    TooManyTerms {
        n: usize,
        max: usize,
    },
    /// The coefficient enumeration of an independence check is too large.
    SearchTooLarge {
        half_size: u128,
        max: u128,
    },
    EmptySide,
    InvalidPartition,
    GridTooLarge {
        cells_per_axis: f64,
        max: f64,
    },
    /// The window does not fit on the sampled grid or uses another step.
    WindowMismatch,
    NoConvergence {
        last_step: f64,
        last_certified: usize,
    },
    CollinearVectors {
        first: usize,
        second: usize,
    },
    DegenerateCase,
    NoCircleFound {
        m_max: u64,
    },
    /// Wavevectors of a torus mode do not all share the same squared norm.
    NormMismatch {
        expected: u64,
        found: u64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite(what) => write!(f, "{what} must be finite"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ZeroWavevector { index } => write!(f, "wavevector {index} is zero"),
            Error::AmplitudeMismatch { a, b } => {
                write!(f, "pair collapse needs equal amplitudes, got {a} and {b}")
            }
            Error::EmptyInput => write!(f, "input is empty"),
            Error::TooManyTerms { n, max } => write!(f, "{n} terms exceed the exact search bound {max}"),
            Error::SearchTooLarge { half_size, max } => write!(
                f,
                "coefficient enumeration of {half_size} half-vectors exceeds {max}; lower the search height"
            ),
            Error::EmptySide => write!(f, "both sides of the bipartition must be nonempty"),
            Error::InvalidPartition => write!(f, "index sets must be disjoint and cover every amplitude"),
            Error::GridTooLarge { cells_per_axis, max } => {
                write!(f, "grid needs {cells_per_axis:.0} cells per axis, limit is {max:.0}")
            }
            Error::WindowMismatch => write!(f, "window is not covered by the sampled grid"),
            Error::NoConvergence { last_step, last_certified } => write!(
                f,
                "certified count still changing at step {last_step} (last count {last_certified}); margin too tight for the geometry"
            ),
            Error::CollinearVectors { first, second } => {
                write!(f, "wavevectors {first} and {second} are collinear")
            }
            Error::DegenerateCase => write!(f, "degenerate triple: (|λ'| - 1/2) = (1/2 - |μ'|)"),
            Error::NoCircleFound { m_max } => write!(f, "no suitable lattice circle with m <= {m_max}"),
            Error::NormMismatch { expected, found } => {
                write!(f, "wavevector squared norm {found} differs from {expected}")
            }
        }
    }
}

impl core::error::Error for Error {}
