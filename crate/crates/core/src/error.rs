use thiserror::Error;

use crate::model::{ClientId, PairId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("client count must be at least 2, got n={0}")]
    TooFewClients(usize),

    #[error("privileged subset size must satisfy 1 <= k <= n, got n={n} k={k}")]
    InvalidSubset { n: usize, k: usize },

    #[error("client index {index} is outside 1..={n}")]
    ClientOutOfRange { index: usize, n: usize },

    #[error("a pair needs two distinct clients, got {0} twice")]
    DegeneratePair(usize),

    #[error("coding vector has no operands")]
    EmptyVector,

    #[error("coding vector lists {0} more than once")]
    RepeatedOperand(PairId),

    #[error("{sender} cannot encode {pair}: it only holds pairs it is an endpoint of")]
    SenderLacksOperand { sender: ClientId, pair: PairId },

    #[error("payload width must be at least 1 bit")]
    ZeroWidth,

    #[error("payload width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("no payload stored for {0}")]
    MissingPayload(PairId),

    #[error("payload store for {client} must cover exactly its {expected} local pairs")]
    LocalStoreMismatch { client: ClientId, expected: usize },

    #[error("the uncoded baseline is only defined for k >= 2")]
    BaselineUndefined,

    #[error("plan has {actual} entries but the instance has {expected} clients")]
    PlanLength { expected: usize, actual: usize },

    #[error("n={n} is beyond the exhaustive search bound n <= {max}")]
    TooLargeForOracle { n: usize, max: usize },

    #[error("schedule gives {client} {actual} packets, the plan says {expected}")]
    ScheduleMismatch {
        client: ClientId,
        expected: usize,
        actual: usize,
    },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}
