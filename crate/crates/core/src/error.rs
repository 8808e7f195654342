use thiserror::Error;

use crate::fixedpoint::QFormat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Q-format: width {width}, frac {frac}")]
    InvalidFormat { width: u32, frac: u32 },

    #[error("raw value {raw} does not fit {fmt}")]
    RawOutOfRange { raw: i128, fmt: QFormat },

    #[error("result format would be {width} bits wide (limit is 128)")]
    FormatTooWide { width: u32 },

    #[error("fraction bits differ: {left} vs {right}")]
    FracMismatch { left: u32, right: u32 },

    #[error("format mismatch: expected {expected}, found {found}")]
    FormatMismatch { expected: QFormat, found: QFormat },

    #[error("cannot quantize non-finite value {0}")]
    NonFinite(f64),

    #[error("invalid slice parameters: {0}")]
    InvalidSliceParams(String),

    #[error("word width {width} does not match slicing layout (expected {expected})")]
    SliceWidthMismatch { width: u32, expected: u32 },

    #[error("block {index} holds {value}, outside [{min}, {max}]")]
    BlockOutOfRange {
        index: usize,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid pipeline configuration: {0}")]
    InvalidPipeline(String),
}

pub type Result<T> = std::result::Result<T, Error>;
