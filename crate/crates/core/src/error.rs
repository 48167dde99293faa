use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors produced by validation and numerical routines in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A contact event failed a structural check (self-loop, empty interval, ...).
    InvalidEvent(String),
    /// A node id was referenced but is not in the roster.
    UnknownNode(String),
    /// A node id was registered twice under different samples.
    DuplicateNode(String),
    /// Two containers that must align have different lengths.
    DimensionMismatch { expected: usize, found: usize },
    /// Attribute exists but does not have the requested type.
    AttributeType { attr: String, expected: &'static str },
    /// Attribute not present in the panel.
    UnknownAttribute(String),
    /// Categorical level not observed for the attribute.
    UnknownLevel { attr: String, level: String },
    /// Sample id not present in the roster.
    UnknownSample(String),
    /// Every value of an attribute is missing, so nothing can be computed.
    AllMissing(String),
    /// log(x + offset) requested where x + offset <= 0.
    LogDomain { value: f64, offset: f64 },
    /// Scale item outside the allowed range.
    ScaleItemRange { index: usize, value: f64 },
    /// Scale received the wrong number of items.
    ScaleItemCount { expected: usize, found: usize },
    /// A quantity that must have positive variance is constant.
    ZeroVariance(String),
    /// Too few observations for the requested statistic.
    InsufficientData(String),
    /// No dyads survive listwise deletion.
    EmptySelection,
    /// Operation requires a symmetric matrix.
    NotSymmetric(String),
    /// Design matrix is rank deficient; the named columns are collinear.
    RankDeficient(Vec<String>),
    /// Mapping is not a bijection on node indices.
    InvalidPermutation,
    /// Normalization window must be positive.
    InvalidWindow,
    /// Model specification failed validation.
    InvalidSpec(String),
    /// More than the tolerated share of permutation replicates failed.
    FailedReplicates { failed: u32, total: u32 },
    /// Dependent matrix has masked within-sample cells; relabeling needs complete blocks.
    IncompleteDependent(String),
    /// A term expression could not be parsed.
    TermSyntax { expr: String, reason: String },
    /// Synthetic generator configuration is inconsistent.
    InvalidConfig(String),
    /// A computation produced a non-finite value.
    NonFinite(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidEvent(msg) => write!(f, "invalid contact event: {msg}"),
            Error::UnknownNode(id) => write!(f, "unknown node id '{id}'"),
            Error::DuplicateNode(id) => {
                write!(f, "node id '{id}' appears in more than one sample")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::AttributeType { attr, expected } => {
                write!(f, "attribute '{attr}' is not {expected}")
            }
            Error::UnknownAttribute(attr) => write!(f, "unknown attribute '{attr}'"),
            Error::UnknownLevel { attr, level } => {
                write!(f, "attribute '{attr}' has no level '{level}'")
            }
            Error::UnknownSample(id) => write!(f, "unknown sample id '{id}'"),
            Error::AllMissing(attr) => {
                write!(f, "attribute '{attr}' has no non-missing values")
            }
            Error::LogDomain { value, offset } => {
                write!(f, "log transform undefined: {value} + {offset} <= 0")
            }
            Error::ScaleItemRange { index, value } => {
                write!(f, "scale item {index} out of range: {value}")
            }
            Error::ScaleItemCount { expected, found } => {
                write!(f, "scale expects {expected} items, got {found}")
            }
            Error::ZeroVariance(what) => write!(f, "zero variance in {what}"),
            Error::InsufficientData(what) => write!(f, "insufficient data: {what}"),
            Error::EmptySelection => write!(f, "no dyads left after listwise deletion"),
            Error::NotSymmetric(label) => {
                write!(f, "matrix '{label}' is not symmetric")
            }
            Error::RankDeficient(terms) => {
                write!(f, "design is rank deficient; collinear columns: ")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Error::InvalidPermutation => write!(f, "mapping is not a permutation"),
            Error::InvalidWindow => write!(f, "normalization window must be positive"),
            Error::InvalidSpec(msg) => write!(f, "invalid model spec: {msg}"),
            Error::FailedReplicates { failed, total } => {
                write!(f, "{failed} of {total} permutation replicates failed")
            }
            Error::IncompleteDependent(label) => write!(
                f,
                "dependent matrix '{label}' has masked within-sample cells"
            ),
            Error::TermSyntax { expr, reason } => {
                write!(f, "cannot parse term '{expr}': {reason}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid generator config: {msg}"),
            Error::NonFinite(context) => write!(f, "non-finite value in {context}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
