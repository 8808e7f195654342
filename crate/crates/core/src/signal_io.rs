//! Signal files: CSV (`re,im` reals per line), JSON (`[[re, im], ...]`) and
//! raw hex (`RRRR IIII`, two's complement, one sample per line).

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::complex::ComplexFx;
use crate::error::{Error, Result};
use crate::fixedpoint::QFormat;

/// Two's-complement hex of `raw` at `width` bits, zero-padded to
/// `ceil(width / 4)` upper-case digits.
pub fn hex_word(raw: i128, width: u32) -> String {
    let digits = width.div_ceil(4) as usize;
    let bits = raw as u128;
    let masked = if width >= 128 {
        bits
    } else {
        bits & ((1u128 << width) - 1)
    };
    format!("{masked:0digits$X}")
}

/// Inverse of [`hex_word`]: sign-extends from `width` bits.
pub fn parse_hex_word(s: &str, width: u32) -> Option<i128> {
    if s.is_empty() || s.len() > width.div_ceil(4) as usize {
        return None;
    }
    let v = u128::from_str_radix(s, 16).ok()?;
    if width < 128 && v >> width != 0 {
        return None;
    }
    let shift = 128 - width;
    Some(((v << shift) as i128) >> shift)
}

pub fn read_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("{s:?}: {e}"),
            })
        };
        match fields.as_slice() {
            ["re", "im"] if out.is_empty() => continue,
            [re] => out.push(Complex64::new(parse(re)?, 0.0)),
            [re, im] => out.push(Complex64::new(parse(re)?, parse(im)?)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "expected `re,im`".into(),
                })
            }
        }
    }
    Ok(out)
}

pub fn write_csv(samples: &[Complex64]) -> String {
    let mut out = String::new();
    for z in samples {
        let _ = writeln!(out, "{},{}", z.re, z.im);
    }
    out
}

pub fn read_json(text: &str) -> Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

pub fn write_json(samples: &[Complex64]) -> String {
    let pairs: Vec<[f64; 2]> = samples.iter().map(|z| [z.re, z.im]).collect();
    let mut s = serde_json::to_string(&pairs).expect("finite floats serialize");
    s.push('\n');
    s
}

pub fn write_hex(samples: &[ComplexFx]) -> String {
    let mut out = String::new();
    for z in samples {
        let w = z.fmt().width();
        let _ = writeln!(out, "{} {}", hex_word(z.re().raw(), w), hex_word(z.im().raw(), w));
    }
    out
}

pub fn read_hex(text: &str, fmt: QFormat) -> Result<Vec<ComplexFx>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(err("expected `RRRR IIII`"));
        }
        let re = parse_hex_word(f[0], fmt.width()).ok_or_else(|| err("bad hex word"))?;
        let im = parse_hex_word(f[1], fmt.width()).ok_or_else(|| err("bad hex word"))?;
        out.push(ComplexFx::from_raw(re, im, fmt)?);
    }
    Ok(out)
}
