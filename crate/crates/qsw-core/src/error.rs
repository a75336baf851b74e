use alloc::string::String;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("graph is disconnected: vertex {vertex} is not reachable from vertex {root}")]
    Disconnected { root: usize, vertex: usize },
    #[error("{what} needs {needed} but the configured cap is {cap}")]
    OverCap {
        what: &'static str,
        needed: u64,
        cap: u64,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("points {0:?} are cocircular; enable perturbation to break the tie")]
    Cocircular([usize; 4]),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::Error::Input(alloc::format!($($arg)*)) };
}
macro_rules! dim_err {
    ($($arg:tt)*) => { $crate::Error::Dimension(alloc::format!($($arg)*)) };
}
macro_rules! invariant_err {
    ($($arg:tt)*) => { $crate::Error::Invariant(alloc::format!($($arg)*)) };
}
pub(crate) use {dim_err, input_err, invariant_err};
