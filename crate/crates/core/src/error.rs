use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the library. Mathematical violations found by a check
/// are never errors; they are reported in the check's return value.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("n must be at least {min}, got {n}")]
    NTooSmall { n: u64, min: u64 },

    #[error("{n} is not prime")]
    NotPrime { n: u64 },

    #[error("p = 2 is excluded here; the identities need an odd prime")]
    EvenPrime,

    #[error("p = {p} exceeds the cap {cap}: the check builds a table of p+2 rows mod p, which is O(p^2) work; raise the cap to run it anyway")]
    CapExceeded { p: u64, cap: u64 },

    #[error("polynomial must be monic with at least one coefficient")]
    NotMonic,

    #[error("exponent factor r must be at least 1")]
    ZeroExponentFactor,

    #[error("the k-set must contain 0; the left-factorial residue anchors every other check")]
    MissingZeroK,

    #[error("scan range must start at 3 or above, got {lo}")]
    RangeBelowThree { lo: u64 },

    #[error("checkpoint {path} covers [{lo}, {hi}) with k-set {ks:?}, which does not match this scan")]
    CheckpointMismatch {
        path: PathBuf,
        lo: u64,
        hi: u64,
        ks: Vec<u32>,
    },

    #[error("malformed checkpoint {path}: {detail}")]
    CheckpointFormat { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
