use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, QFormat, Rounding};

/// Complex fixed-point sample; both parts share one format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComplexFx {
    re: FxWord,
    im: FxWord,
}

impl ComplexFx {
    pub fn new(re: FxWord, im: FxWord) -> Result<Self> {
        if re.fmt() != im.fmt() {
            return Err(Error::FormatMismatch {
                expected: re.fmt(),
                found: im.fmt(),
            });
        }
        Ok(Self { re, im })
    }

    pub fn from_raw(re: i128, im: i128, fmt: QFormat) -> Result<Self> {
        Ok(Self {
            re: FxWord::new(re, fmt)?,
            im: FxWord::new(im, fmt)?,
        })
    }

    pub fn zero(fmt: QFormat) -> Self {
        Self {
            re: FxWord::zero(fmt),
            im: FxWord::zero(fmt),
        }
    }

    pub fn from_c64(z: Complex64, fmt: QFormat, rounding: Rounding) -> Result<Self> {
        Ok(Self {
            re: FxWord::from_real(z.re, fmt, rounding)?,
            im: FxWord::from_real(z.im, fmt, rounding)?,
        })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_real(), self.im.to_real())
    }

    pub const fn re(&self) -> FxWord {
        self.re
    }

    pub const fn im(&self) -> FxWord {
        self.im
    }

    pub const fn fmt(&self) -> QFormat {
        self.re.fmt()
    }
}

impl fmt::Display for ComplexFx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re.raw(), self.im.raw())
    }
}
