use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported channel: {0}")]
    UnsupportedChannel(String),

    #[error("decoder requires K = 1, got K = {0}")]
    WrongK(u64),

    #[error(
        "enumeration too large: {subsets} candidate subsets exceed the guardrail of {limit} \
         (pass force to override)"
    )]
    EnumerationTooLarge { subsets: u128, limit: u128 },

    #[error("degenerate channel: I^({j}) = {info:e} nats carries no information")]
    DegenerateChannel { j: u64, info: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed record: {0}")]
    Record(String),

    #[error("output failed: {0}")]
    Output(String),
}

pub(crate) fn domain(name: &'static str, value: f64, domain_str: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain: domain_str,
    }
}
