//! Digit-slicing: splitting a fixed-point word into `b` blocks of `p` bits.
//!
//! Two layouts are supported:
//!
//! * [`SliceAlgorithm::A1`] for `p·b`-bit words. Blocks are stored least
//!   significant first; block `k` carries weight `2^(p·k)` and only the top
//!   block is signed.
//! * [`SliceAlgorithm::A2`] for `p·(b-1) + 1`-bit words. Block 0 holds just
//!   the sign (as the integer `0` or `-1`) and the remaining blocks are
//!   unsigned `p`-bit groups of the fraction, most significant first.
//!
//! Both are exact: unslicing a sliced word returns the original raw value.

use serde::{Deserialize, Serialize};

use crate::complex::ComplexFx;
use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, QFormat, MAX_WIDTH};

pub const MAX_BLOCK_BITS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SliceAlgorithm {
    #[default]
    A1,
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceParams {
    p: u32,
    b: u32,
    algorithm: SliceAlgorithm,
}

impl SliceParams {
    pub fn new(p: u32, b: u32, algorithm: SliceAlgorithm) -> Result<Self> {
        if !(2..=MAX_BLOCK_BITS).contains(&p) {
            return Err(Error::InvalidSliceParams(format!(
                "block width p = {p} must lie in 2..={MAX_BLOCK_BITS}"
            )));
        }
        if b < 2 {
            return Err(Error::InvalidSliceParams(format!(
                "block count b = {b} must be at least 2"
            )));
        }
        let params = Self { p, b, algorithm };
        if params.word_width() > MAX_WIDTH as u64 {
            return Err(Error::InvalidSliceParams(format!(
                "{} blocks of {} bits exceed {} bits",
                b, p, MAX_WIDTH
            )));
        }
        Ok(params)
    }

    /// Four 4-bit blocks, first algorithm: the 16-bit datapath layout.
    pub fn default_a1() -> Self {
        Self {
            p: 4,
            b: 4,
            algorithm: SliceAlgorithm::A1,
        }
    }

    pub const fn p(&self) -> u32 {
        self.p
    }

    pub const fn b(&self) -> u32 {
        self.b
    }

    pub const fn algorithm(&self) -> SliceAlgorithm {
        self.algorithm
    }

    /// Width of the words this layout slices.
    pub const fn word_width(&self) -> u64 {
        let (p, b) = (self.p as u64, self.b as u64);
        match self.algorithm {
            SliceAlgorithm::A1 => p * b,
            SliceAlgorithm::A2 => p * (b - 1) + 1,
        }
    }

    /// Inclusive range allowed for block `k`.
    pub fn block_range(&self, k: usize) -> (i64, i64) {
        let full = (1i64 << self.p) - 1;
        let half = 1i64 << (self.p - 1);
        match self.algorithm {
            SliceAlgorithm::A1 if k + 1 == self.b as usize => (-half, half - 1),
            SliceAlgorithm::A1 => (0, full),
            SliceAlgorithm::A2 if k == 0 => (-1, 0),
            SliceAlgorithm::A2 => (0, full),
        }
    }

    fn check_width(&self, fmt: QFormat, algorithm: SliceAlgorithm) -> Result<()> {
        if self.algorithm != algorithm {
            return Err(Error::InvalidSliceParams(format!(
                "parameters are for {:?}, not {:?}",
                self.algorithm, algorithm
            )));
        }
        if fmt.width() as u64 != self.word_width() {
            return Err(Error::SliceWidthMismatch {
                width: fmt.width(),
                expected: self.word_width() as u32,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlicedWord {
    blocks: Vec<i64>,
    params: SliceParams,
    src_fmt: QFormat,
}

impl SlicedWord {
    /// Validates block count and every block's range.
    pub fn new(blocks: Vec<i64>, params: SliceParams, src_fmt: QFormat) -> Result<Self> {
        if blocks.len() != params.b as usize {
            return Err(Error::LengthMismatch {
                expected: params.b as usize,
                found: blocks.len(),
            });
        }
        if src_fmt.width() as u64 != params.word_width() {
            return Err(Error::SliceWidthMismatch {
                width: src_fmt.width(),
                expected: params.word_width() as u32,
            });
        }
        for (index, &value) in blocks.iter().enumerate() {
            let (min, max) = params.block_range(index);
            if value < min || value > max {
                return Err(Error::BlockOutOfRange {
                    index,
                    value,
                    min,
                    max,
                });
            }
        }
        Ok(Self {
            blocks,
            params,
            src_fmt,
        })
    }

    pub fn blocks(&self) -> &[i64] {
        &self.blocks
    }

    pub const fn params(&self) -> SliceParams {
        self.params
    }

    pub const fn src_fmt(&self) -> QFormat {
        self.src_fmt
    }

    /// Binary weight exponent of block `k` relative to the raw LSB.
    pub fn weight_exponent(&self, k: usize) -> u32 {
        let p = self.params.p;
        match self.params.algorithm {
            SliceAlgorithm::A1 => p * k as u32,
            SliceAlgorithm::A2 => p * (self.params.b - 1 - k as u32),
        }
    }

    /// Rebuilds the word; dispatches on the slicing algorithm.
    pub fn unslice(&self) -> Result<FxWord> {
        let raw = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, &v)| (v as i128) << self.weight_exponent(k))
            .sum();
        FxWord::new(raw, self.src_fmt)
    }
}

/// Unsigned `p`-bit code of block `k` (least significant first).
#[inline]
pub(crate) fn block_code(raw: i128, p: u32, k: u32) -> u32 {
    (((raw as u128) >> (p * k)) & ((1u128 << p) - 1)) as u32
}

/// Interprets a `p`-bit code as two's complement.
#[inline]
pub(crate) fn sign_extend(code: u32, p: u32) -> i64 {
    let shift = 64 - p;
    ((code as i64) << shift) >> shift
}

pub fn slice_a1(x: &FxWord, params: SliceParams) -> Result<SlicedWord> {
    params.check_width(x.fmt(), SliceAlgorithm::A1)?;
    let (p, b) = (params.p, params.b);
    let blocks = (0..b)
        .map(|k| {
            let code = block_code(x.raw(), p, k);
            if k + 1 == b {
                sign_extend(code, p)
            } else {
                code as i64
            }
        })
        .collect();
    Ok(SlicedWord {
        blocks,
        params,
        src_fmt: x.fmt(),
    })
}

pub fn unslice_a1(s: &SlicedWord) -> Result<FxWord> {
    if s.params.algorithm != SliceAlgorithm::A1 {
        return Err(Error::InvalidSliceParams("expected an A1 sliced word".into()));
    }
    SlicedWord::new(s.blocks.clone(), s.params, s.src_fmt)?.unslice()
}

pub fn slice_a2(x: &FxWord, params: SliceParams) -> Result<SlicedWord> {
    params.check_width(x.fmt(), SliceAlgorithm::A2)?;
    let (p, b) = (params.p, params.b);
    let sign = if x.raw() < 0 { -1 } else { 0 };
    let blocks = std::iter::once(sign)
        .chain((1..b).map(|k| block_code(x.raw(), p, b - 1 - k) as i64))
        .collect();
    Ok(SlicedWord {
        blocks,
        params,
        src_fmt: x.fmt(),
    })
}

pub fn unslice_a2(s: &SlicedWord) -> Result<FxWord> {
    if s.params.algorithm != SliceAlgorithm::A2 {
        return Err(Error::InvalidSliceParams("expected an A2 sliced word".into()));
    }
    SlicedWord::new(s.blocks.clone(), s.params, s.src_fmt)?.unslice()
}

/// Slices with whichever algorithm `params` names.
pub fn slice(x: &FxWord, params: SliceParams) -> Result<SlicedWord> {
    match params.algorithm {
        SliceAlgorithm::A1 => slice_a1(x, params),
        SliceAlgorithm::A2 => slice_a2(x, params),
    }
}

/// Real and imaginary parts are sliced independently.
pub fn slice_complex(z: &ComplexFx, params: SliceParams) -> Result<(SlicedWord, SlicedWord)> {
    Ok((slice(&z.re(), params)?, slice(&z.im(), params)?))
}
