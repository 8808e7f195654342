//! N-point radix-2 decimation-in-time FFT built from the fixed-point
//! butterflies, plus the double-precision DFT used as ground truth.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::butterfly::{
    butterfly_conventional, butterfly_ds, ComplexFx, RequantPolicy, StageShift, TwiddleTables,
};
use crate::digit_slicing::SliceParams;
use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, QFormat, Rounding};

pub const MAX_FFT_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FftImpl {
    Conventional,
    #[default]
    DigitSlicing,
}

/// Precomputed schedule for one transform size and arithmetic setup.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    fmt: QFormat,
    slice: SliceParams,
    twiddles: Vec<(FxWord, FxWord)>,
    tables: Vec<TwiddleTables>,
    requant: RequantPolicy,
    imp: FftImpl,
}

impl FftPlan {
    /// Twiddles use the fraction-only format of the datapath width.
    pub fn new(
        n: usize,
        fmt: QFormat,
        slice: SliceParams,
        requant: RequantPolicy,
        imp: FftImpl,
    ) -> Result<Self> {
        Self::with_twiddle_format(n, fmt, QFormat::fractional(fmt.width())?, slice, requant, imp)
    }

    pub fn with_twiddle_format(
        n: usize,
        fmt: QFormat,
        twiddle_fmt: QFormat,
        slice: SliceParams,
        requant: RequantPolicy,
        imp: FftImpl,
    ) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() || n > MAX_FFT_SIZE {
            return Err(Error::NotPowerOfTwo(n));
        }
        if requant.out_fmt != fmt {
            return Err(Error::FormatMismatch {
                expected: fmt,
                found: requant.out_fmt,
            });
        }
        if imp == FftImpl::DigitSlicing && fmt.width() as u64 != slice.word_width() {
            return Err(Error::SliceWidthMismatch {
                width: fmt.width(),
                expected: slice.word_width() as u32,
            });
        }
        let twiddles = (0..n / 2)
            .map(|k| twiddle(k, n, twiddle_fmt))
            .collect::<Result<Vec<_>>>()?;
        let tables = match imp {
            FftImpl::Conventional => Vec::new(),
            FftImpl::DigitSlicing => twiddles
                .iter()
                .map(|&(wr, wi)| TwiddleTables::new(wr, wi, slice))
                .collect::<Result<_>>()?,
        };
        Ok(Self {
            n,
            fmt,
            slice,
            twiddles,
            tables,
            requant,
            imp,
        })
    }

    pub const fn n(&self) -> usize {
        self.n
    }

    pub const fn fmt(&self) -> QFormat {
        self.fmt
    }

    pub const fn slice(&self) -> SliceParams {
        self.slice
    }

    pub const fn requant(&self) -> RequantPolicy {
        self.requant
    }

    pub const fn imp(&self) -> FftImpl {
        self.imp
    }

    pub fn stages(&self) -> u32 {
        self.n.trailing_zeros()
    }

    /// `(wr, wi)` for every `k` in `0..n/2`, with `W = wr − j·wi`.
    pub fn twiddles(&self) -> &[(FxWord, FxWord)] {
        &self.twiddles
    }

    /// ROM banks per twiddle; empty for the conventional implementation.
    pub fn tables(&self) -> &[TwiddleTables] {
        &self.tables
    }

    pub fn table_count(&self) -> usize {
        self.tables.len() * 2
    }

    /// Overall gain applied by the per-stage shifts.
    pub fn cumulative_scale(&self) -> f64 {
        match self.requant.stage_shift {
            StageShift::None => 1.0,
            StageShift::Half => 0.5f64.powi(self.stages() as i32),
        }
    }

    fn butterfly(&self, k: usize, a: &ComplexFx, b: &ComplexFx) -> Result<(ComplexFx, ComplexFx)> {
        match self.imp {
            FftImpl::Conventional => butterfly_conventional(a, b, self.twiddles[k], &self.requant),
            FftImpl::DigitSlicing => butterfly_ds(a, b, &self.tables[k], &self.requant),
        }
    }
}

/// Quantized `(cos 2πk/n, sin 2πk/n)`; 1.0 saturates to the max raw.
pub fn twiddle(k: usize, n: usize, fmt: QFormat) -> Result<(FxWord, FxWord)> {
    let theta = 2.0 * PI * k as f64 / n as f64;
    let (s, c) = match (4 * k) % n {
        0 => match (4 * k) / n {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        },
        _ => theta.sin_cos(),
    };
    Ok((
        FxWord::from_real(c, fmt, Rounding::NearestEven)?,
        FxWord::from_real(s, fmt, Rounding::NearestEven)?,
    ))
}

pub fn bit_reverse_index(i: usize, log2n: u32) -> usize {
    if log2n == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - log2n)
    }
}

pub fn bit_reverse_permute<T: Clone>(v: &[T]) -> Result<Vec<T>> {
    if !v.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(v.len()));
    }
    let bits = v.len().trailing_zeros();
    Ok((0..v.len())
        .map(|i| v[bit_reverse_index(i, bits)].clone())
        .collect())
}

/// Runs the transform: bit-reversed input, then `log2 n` in-place stages.
pub fn fft_execute(plan: &FftPlan, x: &[ComplexFx]) -> Result<Vec<ComplexFx>> {
    if x.len() != plan.n {
        return Err(Error::LengthMismatch {
            expected: plan.n,
            found: x.len(),
        });
    }
    if let Some(bad) = x.iter().find(|z| z.fmt() != plan.fmt) {
        return Err(Error::FormatMismatch {
            expected: plan.fmt,
            found: bad.fmt(),
        });
    }
    let mut v = bit_reverse_permute(x)?;
    let n = plan.n;
    let mut span = 1;
    while span < n {
        let stride = n / (2 * span);
        for start in (0..n).step_by(2 * span) {
            for j in 0..span {
                let (top, bottom) = (start + j, start + j + span);
                let (xo, yo) = plan.butterfly(j * stride, &v[top], &v[bottom])?;
                v[top] = xo;
                v[bottom] = yo;
            }
        }
        span *= 2;
    }
    Ok(v)
}

/// Direct `O(n²)` evaluation of `X(k) = Σ x(n)·e^{−j2πkn/N}`.
pub fn dft_reference(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, &v)| {
                    let idx = (k * t) % n;
                    let theta = -2.0 * PI * idx as f64 / n as f64;
                    v * Complex64::from_polar(1.0, theta)
                })
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMetrics {
    /// Largest per-component absolute error.
    pub max_abs_error: f64,
    /// Root-mean-square of the complex error magnitude.
    pub rms_error: f64,
    /// `+inf` when the error energy is zero.
    pub snr_db: f64,
}

/// Compares a fixed-point spectrum with a double-precision one; the reference
/// is first multiplied by the plan's cumulative stage scaling.
pub fn fft_error_report(
    fixed_out: &[ComplexFx],
    ref_out: &[Complex64],
    plan: &FftPlan,
) -> Result<ErrorMetrics> {
    error_metrics(fixed_out, ref_out, plan.cumulative_scale())
}

pub fn error_metrics(fixed_out: &[ComplexFx], ref_out: &[Complex64], scale: f64) -> Result<ErrorMetrics> {
    if fixed_out.len() != ref_out.len() {
        return Err(Error::LengthMismatch {
            expected: ref_out.len(),
            found: fixed_out.len(),
        });
    }
    if fixed_out.is_empty() {
        return Err(Error::Empty("spectrum"));
    }
    let mut max_abs = 0.0f64;
    let mut err_energy = 0.0;
    let mut sig_energy = 0.0;
    for (f, r) in fixed_out.iter().zip(ref_out) {
        let r = r * scale;
        let e = f.to_c64() - r;
        max_abs = max_abs.max(e.re.abs()).max(e.im.abs());
        err_energy += e.norm_sqr();
        sig_energy += r.norm_sqr();
    }
    let snr_db = if err_energy == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (sig_energy / err_energy).log10()
    };
    Ok(ErrorMetrics {
        max_abs_error: max_abs,
        rms_error: (err_energy / fixed_out.len() as f64).sqrt(),
        snr_db,
    })
}
