use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates the operation's precondition.
    Domain(String),
    /// The binomial tail bound for digit-sum classes needs a ratio below one.
    TailRatio { base: u64, k: u64, digits: u32 },
    /// A block word whose `b_w(0)` is undefined cannot anchor the `k = 0` class.
    UnsupportedClass(String),
    /// The polynomial root finder failed to certify isolated roots.
    RootFinder { iterations: usize, detail: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::TailRatio { base, k, digits } => write!(
                f,
                "tail bound needs J > k/(b-1) + 1: got b = {base}, k = {k}, J = {digits}; \
                 increase N = b^J - 1"
            ),
            Error::UnsupportedClass(msg) => write!(f, "unsupported class: {msg}"),
            Error::RootFinder { iterations, detail } => {
                write!(f, "root finder failed after {iterations} iterations: {detail}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
