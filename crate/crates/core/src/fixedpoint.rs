//! Two's-complement fixed-point scalars with explicit Q-format metadata.
//!
//! Raw values are carried as `i128`. Every operation either produces an exact
//! result in a grown format or applies an explicit rounding/overflow policy,
//! so nothing wraps silently.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest word a [`QFormat`] may describe.
pub const MAX_WIDTH: u32 = 128;

/// `width`-bit two's-complement integer scaled by `2^-frac`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQFormat")]
pub struct QFormat {
    width: u32,
    frac: u32,
}

#[derive(Deserialize)]
struct RawQFormat {
    width: u32,
    frac: u32,
}

impl TryFrom<RawQFormat> for QFormat {
    type Error = Error;

    fn try_from(r: RawQFormat) -> Result<Self> {
        QFormat::new(r.width, r.frac)
    }
}

impl QFormat {
    pub fn new(width: u32, frac: u32) -> Result<Self> {
        if !(2..=MAX_WIDTH).contains(&width) || frac > width - 1 {
            return Err(Error::InvalidFormat { width, frac });
        }
        Ok(Self { width, frac })
    }

    /// Fraction-only format `Q(width, width - 1)`, values in [-1, 1).
    pub fn fractional(width: u32) -> Result<Self> {
        Self::new(width, width.saturating_sub(1))
    }

    /// The 16-bit datapath default, Q(16,15).
    pub const fn q15() -> Self {
        Self {
            width: 16,
            frac: 15,
        }
    }

    pub const fn width(&self) -> u32 {
        self.width
    }

    pub const fn frac(&self) -> u32 {
        self.frac
    }

    pub const fn min_raw(&self) -> i128 {
        if self.width == 128 {
            i128::MIN
        } else {
            -(1i128 << (self.width - 1))
        }
    }

    pub const fn max_raw(&self) -> i128 {
        if self.width == 128 {
            i128::MAX
        } else {
            (1i128 << (self.width - 1)) - 1
        }
    }

    pub const fn contains(&self, raw: i128) -> bool {
        raw >= self.min_raw() && raw <= self.max_raw()
    }

    /// Weight of one least-significant bit.
    pub fn lsb(&self) -> f64 {
        pow2(-(self.frac as i32))
    }
}

impl fmt::Display for QFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({},{})", self.width, self.frac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rounding {
    /// Round half to even.
    #[default]
    NearestEven,
    /// Drop low bits (round toward negative infinity).
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overflow {
    #[default]
    Saturate,
    Wrap,
}

/// A fixed-point value. The raw integer always lies inside the format's range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxWord {
    raw: i128,
    fmt: QFormat,
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

impl FxWord {
    pub fn new(raw: i128, fmt: QFormat) -> Result<Self> {
        if !fmt.contains(raw) {
            return Err(Error::RawOutOfRange { raw, fmt });
        }
        Ok(Self { raw, fmt })
    }

    pub fn zero(fmt: QFormat) -> Self {
        Self { raw: 0, fmt }
    }

    /// Quantizes `r` onto `fmt`. Out-of-range values saturate to the nearest
    /// endpoint, so real 1.0 in a fraction-only format becomes the max raw.
    pub fn from_real(r: f64, fmt: QFormat, rounding: Rounding) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::NonFinite(r));
        }
        let scaled = r * pow2(fmt.frac as i32);
        let rounded = match rounding {
            Rounding::NearestEven => scaled.round_ties_even(),
            Rounding::Truncate => scaled.floor(),
        };
        let limit = pow2(fmt.width as i32 - 1);
        let raw = if rounded >= limit {
            fmt.max_raw()
        } else if rounded < -limit {
            fmt.min_raw()
        } else {
            rounded as i128
        };
        Ok(Self { raw, fmt })
    }

    /// `raw * 2^-frac`; exact while the raw value fits a double's mantissa.
    pub fn to_real(&self) -> f64 {
        self.raw as f64 * pow2(-(self.fmt.frac as i32))
    }

    pub const fn raw(&self) -> i128 {
        self.raw
    }

    pub const fn fmt(&self) -> QFormat {
        self.fmt
    }

    /// Exact product in `Q(wa + wb, fa + fb)`.
    pub fn mul_full(&self, other: &FxWord) -> Result<FxWord> {
        let width = self.fmt.width + other.fmt.width;
        if width > MAX_WIDTH {
            return Err(Error::FormatTooWide { width });
        }
        let fmt = QFormat::new(width, self.fmt.frac + other.fmt.frac)?;
        Ok(FxWord {
            raw: self.raw * other.raw,
            fmt,
        })
    }

    pub fn add(&self, other: &FxWord) -> Result<FxWord> {
        let fmt = self.grown_format(other)?;
        Ok(FxWord {
            raw: self.raw + other.raw,
            fmt,
        })
    }

    pub fn sub(&self, other: &FxWord) -> Result<FxWord> {
        let fmt = self.grown_format(other)?;
        Ok(FxWord {
            raw: self.raw - other.raw,
            fmt,
        })
    }

    fn grown_format(&self, other: &FxWord) -> Result<QFormat> {
        if self.fmt.frac != other.fmt.frac {
            return Err(Error::FracMismatch {
                left: self.fmt.frac,
                right: other.fmt.frac,
            });
        }
        let width = self.fmt.width.max(other.fmt.width) + 1;
        if width > MAX_WIDTH {
            return Err(Error::FormatTooWide { width });
        }
        QFormat::new(width, self.fmt.frac)
    }

    pub fn neg(&self) -> Result<FxWord> {
        FxWord::zero(self.fmt).sub(self)
    }

    /// Re-expresses the value with `frac` fraction bits without loss; the
    /// integer part keeps its width. `frac` must not be below the current one.
    pub fn align_frac(&self, frac: u32) -> Result<FxWord> {
        if frac < self.fmt.frac {
            return Err(Error::FracMismatch {
                left: self.fmt.frac,
                right: frac,
            });
        }
        let shift = frac - self.fmt.frac;
        let width = self.fmt.width + shift;
        if width > MAX_WIDTH {
            return Err(Error::FormatTooWide { width });
        }
        Ok(FxWord {
            raw: self.raw << shift,
            fmt: QFormat::new(width, frac)?,
        })
    }

    /// Exact division by two: same raw bits, one more fraction bit.
    pub fn halve(&self) -> Result<FxWord> {
        let width = self.fmt.width + 1;
        if width > MAX_WIDTH {
            return Err(Error::FormatTooWide { width });
        }
        Ok(FxWord {
            raw: self.raw,
            fmt: QFormat::new(width, self.fmt.frac + 1)?,
        })
    }

    /// Rounds to `fmt.frac` fraction bits, then fits `fmt.width` under the
    /// overflow policy.
    pub fn requantize(&self, fmt: QFormat, overflow: Overflow, rounding: Rounding) -> FxWord {
        let (value, exceeded) = if fmt.frac <= self.fmt.frac {
            let s = self.fmt.frac - fmt.frac;
            (shift_right_round(self.raw, s, rounding), false)
        } else {
            let s = fmt.frac - self.fmt.frac;
            shift_left_checked(self.raw, s)
        };
        let raw = match overflow {
            Overflow::Saturate => {
                if exceeded {
                    if self.raw < 0 {
                        fmt.min_raw()
                    } else {
                        fmt.max_raw()
                    }
                } else {
                    value.clamp(fmt.min_raw(), fmt.max_raw())
                }
            }
            Overflow::Wrap => wrap_to_width(value, fmt.width),
        };
        FxWord { raw, fmt }
    }
}

impl fmt::Display for FxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} raw {})", self.to_real(), self.fmt, self.raw)
    }
}

/// `raw / 2^s` rounded per `rounding`.
pub(crate) fn shift_right_round(raw: i128, s: u32, rounding: Rounding) -> i128 {
    if s == 0 {
        return raw;
    }
    if s >= 128 {
        return match rounding {
            Rounding::Truncate => {
                if raw < 0 {
                    -1
                } else {
                    0
                }
            }
            // |raw| <= 2^127 <= half an output LSB
            Rounding::NearestEven => 0,
        };
    }
    let floor = raw >> s;
    match rounding {
        Rounding::Truncate => floor,
        Rounding::NearestEven => {
            let mask = (1u128 << s) - 1;
            let rem = (raw as u128) & mask;
            let half = 1u128 << (s - 1);
            if rem > half || (rem == half && floor & 1 == 1) {
                floor + 1
            } else {
                floor
            }
        }
    }
}

/// Returns the low 128 bits of `raw << s` and whether the true value was lost.
fn shift_left_checked(raw: i128, s: u32) -> (i128, bool) {
    if s >= 128 {
        return (0, raw != 0);
    }
    let shifted = raw.wrapping_shl(s);
    (shifted, (shifted >> s) != raw)
}

pub(crate) fn wrap_to_width(raw: i128, width: u32) -> i128 {
    if width >= 128 {
        raw
    } else {
        let k = 128 - width;
        raw.wrapping_shl(k) >> k
    }
}
