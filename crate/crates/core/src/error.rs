use alloc::string::String;

/// Failures raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("unknown {kind} `{name}`")]
    UnknownReference { kind: &'static str, name: String },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("electrical extraction {extracted:.4} W exceeds absorbed solar power {absorbed:.4} W")]
    ExcessExtraction { extracted: f64, absorbed: f64 },

    #[error("temperature step of {delta:.2} K exceeds the {limit} K per-step guard; reduce dt")]
    StepTooLarge { delta: f64, limit: f64 },

    #[error("node `{node}` did not reach a periodic orbit after {orbits} orbits (last deviation {deviation:.3} K)")]
    NoConvergence {
        node: String,
        orbits: usize,
        deviation: f64,
    },

    #[error("frequency {frequency} Hz outside [{low}, {high}] Hz")]
    OutsideRange { frequency: f64, low: f64, high: f64 },

    #[error("series too short: need {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("frequency grids differ")]
    GridMismatch,

    #[error("no resonance peak satisfies the detection criteria")]
    NoPeak,

    #[error("singular system: {0}")]
    Singular(&'static str),

    #[error("no bending stress develops for this load case")]
    ZeroStress,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: f64) -> Error {
    Error::OutOfRange { what, value }
}
