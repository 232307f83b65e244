use thiserror::Error;

/// Which Case-2 sampling requirement a rejected `W` violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub enum WCondition {
    /// `|W| ≥ √n / log n`.
    Size,
    /// `|S(W)| ≤ 16√n / log n`.
    HeavySet,
    /// `s(u, W, v) ≤ 8√n / log⁴ n` for all `u, v ∈ I`.
    Multiplicity,
}

#[derive(Debug, Error)]
pub enum Error {
    /// An element or parameter outside the ground set `[1, n]`.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Every resample of `W` failed at least one requirement.
    #[error("W-failure after {attempts} attempts; last sample violated {failed:?}")]
    WFailure {
        attempts: u32,
        failed: Vec<WCondition>,
    },

    /// Replaying a certificate did not reproduce a consistent run.
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    /// Exhaustive search refused because `n` is above the configured cap.
    #[error("n = {n} exceeds the configured cap {cap} for {what}")]
    CapExceeded { what: &'static str, n: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
