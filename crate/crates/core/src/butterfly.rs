//! Radix-2 DIT butterfly, `X = A + W·B`, `Y = A − W·B`, with the twiddle
//! written as `W = Wr − j·Wi`:
//!
//! ```text
//! Re(WB) = Wr·Br + Wi·Bi        Im(WB) = Wr·Bi − Wi·Br
//! ```
//!
//! Two implementations share one full-precision datapath shape and one
//! output quantization site, so they agree bit for bit:
//! [`butterfly_conventional`] uses four multiplies, [`butterfly_ds`] uses
//! two constant-multiplier ROM banks, each looked up twice.

use serde::{Deserialize, Serialize};

pub use crate::complex::ComplexFx;
use crate::digit_slicing::SliceParams;
use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, Overflow, QFormat, Rounding};
use crate::scml::ScmlTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageShift {
    None,
    /// Divide both outputs by two.
    #[default]
    Half,
}

/// How full-precision butterfly outputs return to a storage format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RequantPolicy {
    pub out_fmt: QFormat,
    pub rounding: Rounding,
    pub overflow: Overflow,
    pub stage_shift: StageShift,
}

impl RequantPolicy {
    /// Back to `fmt`, truncating, saturating, halving each stage.
    pub fn for_format(fmt: QFormat) -> Self {
        Self {
            out_fmt: fmt,
            rounding: Rounding::Truncate,
            overflow: Overflow::Saturate,
            stage_shift: StageShift::Half,
        }
    }

    pub fn apply(&self, x: &FxWord) -> Result<FxWord> {
        let scaled = match self.stage_shift {
            StageShift::None => *x,
            StageShift::Half => x.halve()?,
        };
        Ok(scaled.requantize(self.out_fmt, self.overflow, self.rounding))
    }

    pub fn apply_complex(&self, z: &ComplexFx) -> Result<ComplexFx> {
        ComplexFx::new(self.apply(&z.re())?, self.apply(&z.im())?)
    }

    fn apply_outputs(&self, (x, y): (ComplexFx, ComplexFx)) -> Result<(ComplexFx, ComplexFx)> {
        if self.out_fmt.width() > x.fmt().width() {
            return Err(Error::InvalidFormat {
                width: self.out_fmt.width(),
                frac: self.out_fmt.frac(),
            });
        }
        Ok((self.apply_complex(&x)?, self.apply_complex(&y)?))
    }
}

/// A twiddle constant together with its two ROM banks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwiddleTables {
    wr: FxWord,
    wi: FxWord,
    wr_table: ScmlTable,
    wi_table: ScmlTable,
}

impl TwiddleTables {
    pub fn new(wr: FxWord, wi: FxWord, params: SliceParams) -> Result<Self> {
        if wr.fmt() != wi.fmt() {
            return Err(Error::FormatMismatch {
                expected: wr.fmt(),
                found: wi.fmt(),
            });
        }
        Ok(Self {
            wr,
            wi,
            wr_table: ScmlTable::build(wr, params)?,
            wi_table: ScmlTable::build(wi, params)?,
        })
    }

    pub const fn wr(&self) -> FxWord {
        self.wr
    }

    pub const fn wi(&self) -> FxWord {
        self.wi
    }

    pub fn wr_table(&self) -> &ScmlTable {
        &self.wr_table
    }

    pub fn wi_table(&self) -> &ScmlTable {
        &self.wi_table
    }

    pub fn params(&self) -> SliceParams {
        self.wr_table.params()
    }
}

/// The four real partial products of `W·B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialProducts {
    /// Wr·Br
    pub rr: FxWord,
    /// Wi·Bi
    pub ii: FxWord,
    /// Wr·Bi
    pub ri: FxWord,
    /// Wi·Br
    pub ir: FxWord,
}

impl PartialProducts {
    pub fn conventional(b: &ComplexFx, wr: &FxWord, wi: &FxWord) -> Result<Self> {
        Ok(Self {
            rr: wr.mul_full(&b.re())?,
            ii: wi.mul_full(&b.im())?,
            ri: wr.mul_full(&b.im())?,
            ir: wi.mul_full(&b.re())?,
        })
    }

    pub fn digit_slicing(b: &ComplexFx, t: &TwiddleTables) -> Result<Self> {
        Ok(Self {
            rr: t.wr_table.mul(&b.re())?,
            ii: t.wi_table.mul(&b.im())?,
            ri: t.wr_table.mul(&b.im())?,
            ir: t.wi_table.mul(&b.re())?,
        })
    }

    /// `W·B` under `W = Wr − j·Wi`.
    pub fn product(&self) -> Result<ComplexFx> {
        ComplexFx::new(self.rr.add(&self.ii)?, self.ri.sub(&self.ir)?)
    }
}

/// Full-precision `(A + WB, A − WB)` from the partial products.
pub fn combine(a: &ComplexFx, products: &PartialProducts) -> Result<(ComplexFx, ComplexFx)> {
    let wb = products.product()?;
    let frac = wb.fmt().frac();
    let ar = a.re().align_frac(frac)?;
    let ai = a.im().align_frac(frac)?;
    let x = ComplexFx::new(ar.add(&wb.re())?, ai.add(&wb.im())?)?;
    let y = ComplexFx::new(ar.sub(&wb.re())?, ai.sub(&wb.im())?)?;
    Ok((x, y))
}

fn check_inputs(a: &ComplexFx, b: &ComplexFx) -> Result<()> {
    if a.fmt() != b.fmt() {
        return Err(Error::FormatMismatch {
            expected: a.fmt(),
            found: b.fmt(),
        });
    }
    Ok(())
}

/// Unquantized conventional butterfly.
pub fn butterfly_conventional_full(
    a: &ComplexFx,
    b: &ComplexFx,
    w: (FxWord, FxWord),
) -> Result<(ComplexFx, ComplexFx)> {
    check_inputs(a, b)?;
    if w.0.fmt() != w.1.fmt() {
        return Err(Error::FormatMismatch {
            expected: w.0.fmt(),
            found: w.1.fmt(),
        });
    }
    combine(a, &PartialProducts::conventional(b, &w.0, &w.1)?)
}

pub fn butterfly_conventional(
    a: &ComplexFx,
    b: &ComplexFx,
    w: (FxWord, FxWord),
    q: &RequantPolicy,
) -> Result<(ComplexFx, ComplexFx)> {
    q.apply_outputs(butterfly_conventional_full(a, b, w)?)
}

/// Unquantized digit-slicing butterfly.
pub fn butterfly_ds_full(
    a: &ComplexFx,
    b: &ComplexFx,
    t: &TwiddleTables,
) -> Result<(ComplexFx, ComplexFx)> {
    check_inputs(a, b)?;
    combine(a, &PartialProducts::digit_slicing(b, t)?)
}

pub fn butterfly_ds(
    a: &ComplexFx,
    b: &ComplexFx,
    t: &TwiddleTables,
    q: &RequantPolicy,
) -> Result<(ComplexFx, ComplexFx)> {
    q.apply_outputs(butterfly_ds_full(a, b, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q15() -> QFormat {
        QFormat::q15()
    }

    fn cfx(re: i128, im: i128) -> ComplexFx {
        ComplexFx::from_raw(re, im, q15()).unwrap()
    }

    fn unit_twiddle() -> (FxWord, FxWord) {
        (
            FxWord::new(q15().max_raw(), q15()).unwrap(),
            FxWord::zero(q15()),
        )
    }

    #[test]
    fn unit_twiddle_with_zero_a_gives_plus_minus_b() {
        let w = unit_twiddle();
        let t = TwiddleTables::new(w.0, w.1, SliceParams::default_a1()).unwrap();
        let q = RequantPolicy {
            stage_shift: StageShift::None,
            ..RequantPolicy::for_format(q15())
        };
        let b = cfx(12345, -20000);
        let (x, y) = butterfly_conventional(&ComplexFx::zero(q15()), &b, w, &q).unwrap();
        // (1 - 2^-15)·B truncated: one LSB below B for positive parts
        assert_eq!(x.re().raw(), 12344);
        assert_eq!(x.im().raw(), -20000);
        assert_eq!((x.re().raw(), x.im().raw()), (-y.re().raw() - 1, -y.im().raw() - 1));
        let (xf, yf) = butterfly_conventional_full(&ComplexFx::zero(q15()), &b, w).unwrap();
        assert_eq!(xf.re().raw(), -yf.re().raw());
        assert_eq!(xf.im().raw(), -yf.im().raw());
        assert_eq!(butterfly_ds(&ComplexFx::zero(q15()), &b, &t, &q).unwrap(), (x, y));
    }

    #[test]
    fn zero_b_passes_a() {
        let w = (FxWord::new(23170, q15()).unwrap(), FxWord::new(-23170, q15()).unwrap());
        let t = TwiddleTables::new(w.0, w.1, SliceParams::default_a1()).unwrap();
        let q = RequantPolicy {
            stage_shift: StageShift::None,
            ..RequantPolicy::for_format(q15())
        };
        let a = cfx(-32768, 32767);
        let b = ComplexFx::zero(q15());
        let (x, y) = butterfly_conventional(&a, &b, w, &q).unwrap();
        assert_eq!((x, y), (a, a));
        assert_eq!(butterfly_ds(&a, &b, &t, &q).unwrap(), (a, a));
    }

    #[test]
    fn half_shift_saturating_stays_in_range() {
        let w = (FxWord::new(23170, q15()).unwrap(), FxWord::new(23170, q15()).unwrap());
        let q = RequantPolicy::for_format(q15());
        let a = cfx(32767, 32767);
        let b = cfx(32767, 32767);
        let (x, y) = butterfly_conventional(&a, &b, w, &q).unwrap();
        assert_eq!(x.re().raw(), 32767); // (1 + 1.414) / 2 saturates
        assert!(y.re().raw() < 0);
    }

    #[test]
    fn format_mismatch_rejected() {
        let w = unit_twiddle();
        let a = ComplexFx::zero(QFormat::new(16, 14).unwrap());
        let q = RequantPolicy::for_format(q15());
        assert!(matches!(
            butterfly_conventional(&a, &cfx(0, 0), w, &q),
            Err(Error::FormatMismatch { .. })
        ));
        let t = TwiddleTables::new(w.0, w.1, SliceParams::default_a1()).unwrap();
        let a8 = ComplexFx::zero(QFormat::new(8, 7).unwrap());
        assert!(butterfly_ds(&a8, &a8, &t, &q).is_err());
        let w_bad = (w.0, FxWord::zero(QFormat::new(8, 7).unwrap()));
        assert!(TwiddleTables::new(w_bad.0, w_bad.1, SliceParams::default_a1()).is_err());
    }
}
