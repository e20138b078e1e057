use thiserror::Error;

use crate::lwe::PartyId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("torus constant with denominator {den} is not exactly representable")]
    InexactTorusConstant { den: u128 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no secret key for party {0}")]
    MissingKey(PartyId),

    #[error("ciphertext party {party} is not part of the target roster")]
    PartyNotInRoster { party: PartyId },

    #[error("ciphertexts are encrypted under different party rosters")]
    RosterMismatch,

    #[error("ciphertext dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("noise budget exceeded: variance {variance:e} leaves no decoding margin")]
    NoiseBudgetExceeded { variance: f64 },

    #[error("integer width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("unsupported width {0}")]
    UnsupportedWidth(usize),

    #[error("value {value} does not fit in {width} bits two's complement")]
    OutOfRange { value: i64, width: usize },

    #[error("duplicate party id {0}")]
    DuplicateParty(PartyId),

    #[error("malformed encoding: {0}")]
    Decode(String),

    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
