use thiserror::Error;

/// Failures raised by configuration, evaluation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("relay index {index} is out of range for {count} relays")]
    RelayIndex { index: usize, count: usize },

    #[error("{count} relays exceeds the subset enumeration cap of {cap}")]
    TooManyRelays { count: usize, cap: usize },

    #[error("numerical cancellation in {scheme}: raw outage {raw:e} is not reliable")]
    Cancellation { scheme: String, raw: f64 },

    #[error("non-finite intermediate value while evaluating {context}")]
    NonFinite { context: &'static str },

    #[error("trial count {0} is too large")]
    TrialOverflow(u64),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Cancellation { .. } | Error::NonFinite { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
