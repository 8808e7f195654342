//! Single-constant multiplier-less multiplication.
//!
//! For a known constant `C` and a `p·b`-bit input sliced into `b` blocks, ROM
//! `k` stores `C · decode(k, s)` for every `p`-bit code `s`. A product is then
//! `b` lookups followed by a shift-add tree; no multiplier is involved.
//!
//! The adder tree combines neighbouring partials level by level. At level `l`
//! the lower partial of a pair is shifted by `p·2^l` relative to the upper
//! one, so its low `p·2^l` bits never meet a non-zero addend: they are passed
//! straight through and only the remaining high bits go through the adder.

use std::fmt::Write as _;

use crate::digit_slicing::{block_code, sign_extend, SliceAlgorithm, SliceParams};
use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, QFormat, MAX_WIDTH};

/// Largest block width for which ROMs are built (2^16 entries per ROM).
pub const MAX_ROM_ADDRESS_BITS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScmlTable {
    constant: FxWord,
    params: SliceParams,
    roms: Vec<Vec<i128>>,
    entry_width: u32,
}

/// Number of adder-tree levels needed to reduce `b` partials to one.
pub fn adder_tree_levels(b: u32) -> u32 {
    b.next_power_of_two().trailing_zeros()
}

impl ScmlTable {
    /// Fills every ROM entry with the exact product `C.raw · decode(k, s)`.
    pub fn build(constant: FxWord, params: SliceParams) -> Result<Self> {
        if params.algorithm() != SliceAlgorithm::A1 {
            return Err(Error::InvalidSliceParams(
                "constant-multiplier tables use the first slicing algorithm".into(),
            ));
        }
        let (p, b) = (params.p(), params.b());
        if p > MAX_ROM_ADDRESS_BITS {
            return Err(Error::InvalidSliceParams(format!(
                "ROM address width {p} exceeds {MAX_ROM_ADDRESS_BITS}"
            )));
        }
        let out_width = constant.fmt().width() as u64 + params.word_width();
        if out_width > MAX_WIDTH as u64 {
            return Err(Error::FormatTooWide {
                width: out_width as u32,
            });
        }
        let c = constant.raw();
        let roms = (0..b)
            .map(|k| {
                (0..1u32 << p)
                    .map(|s| c * decode(k, s, params) as i128)
                    .collect()
            })
            .collect();
        Ok(Self {
            constant,
            params,
            roms,
            entry_width: constant.fmt().width() + p,
        })
    }

    pub const fn constant(&self) -> FxWord {
        self.constant
    }

    pub const fn params(&self) -> SliceParams {
        self.params
    }

    pub fn roms(&self) -> &[Vec<i128>] {
        &self.roms
    }

    /// Signed bit width of each ROM word.
    pub const fn entry_width(&self) -> u32 {
        self.entry_width
    }

    pub fn rom_bits(&self) -> u64 {
        self.params.b() as u64 * (1u64 << self.params.p()) * self.entry_width as u64
    }

    /// Format of products of this constant with a `Q(p·b, x_frac)` input.
    pub fn product_format(&self, x_frac: u32) -> Result<QFormat> {
        QFormat::new(
            self.constant.fmt().width() + self.params.word_width() as u32,
            self.constant.fmt().frac() + x_frac,
        )
    }

    fn check_input(&self, x: &FxWord) -> Result<()> {
        let expected = self.params.word_width() as u32;
        if x.fmt().width() != expected {
            return Err(Error::SliceWidthMismatch {
                width: x.fmt().width(),
                expected,
            });
        }
        Ok(())
    }

    /// ROM outputs for input `x`, one per block, least significant first.
    pub fn lookup(&self, x: &FxWord) -> Result<Vec<i128>> {
        self.check_input(x)?;
        let p = self.params.p();
        Ok(self
            .roms
            .iter()
            .enumerate()
            .map(|(k, rom)| rom[block_code(x.raw(), p, k as u32) as usize])
            .collect())
    }

    /// `C · x` by lookup and shift-add; bit-identical to a full multiply.
    pub fn mul(&self, x: &FxWord) -> Result<FxWord> {
        self.check_input(x)?;
        let p = self.params.p();
        let raw = self
            .roms
            .iter()
            .enumerate()
            .map(|(k, rom)| {
                let k = k as u32;
                rom[block_code(x.raw(), p, k) as usize] << (p * k)
            })
            .sum();
        FxWord::new(raw, self.product_format(x.fmt().frac())?)
    }

    /// Same product as [`ScmlTable::mul`], evaluated through the balanced
    /// adder tree with low-bit pass-through, recording every level.
    pub fn mul_staged(&self, x: &FxWord) -> Result<(FxWord, StageTrace)> {
        let p = self.params.p();
        let codes: Vec<u32> = (0..self.params.b())
            .map(|k| block_code(x.raw(), p, k))
            .collect();
        let rom_outputs = self.lookup(x)?;
        let mut partials = rom_outputs.clone();
        let mut levels = Vec::new();
        let mut shift = p;
        while partials.len() > 1 {
            let level = combine_level(&partials, shift);
            partials = level.partials.clone();
            levels.push(level);
            shift *= 2;
        }
        let result = FxWord::new(partials[0], self.product_format(x.fmt().frac())?)?;
        Ok((
            result,
            StageTrace {
                codes,
                rom_outputs,
                levels,
                result,
            },
        ))
    }

    /// Text dump: header `p b entry_width constant_raw`, then `k s value`
    /// for every entry, `k` outer and `s` inner, both ascending.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.params.p(),
            self.params.b(),
            self.entry_width,
            self.constant.raw()
        );
        for (k, rom) in self.roms.iter().enumerate() {
            for (s, v) in rom.iter().enumerate() {
                let _ = writeln!(out, "{k} {s} {v}");
            }
        }
        out
    }
}

/// Arithmetic value of code `s` in block `k`: unsigned below the top block,
/// two's complement in it.
pub fn decode(k: u32, s: u32, params: SliceParams) -> i64 {
    if k + 1 == params.b() {
        sign_extend(s, params.p())
    } else {
        s as i64
    }
}

/// One adder-tree level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderLevel {
    /// Relative shift between the two members of each pair.
    pub shift: u32,
    /// Low `shift` bits of each pair's lower partial, forwarded unadded.
    pub passthrough: Vec<u128>,
    /// High part `(lower >> shift) + upper` computed by each adder.
    pub adder_outputs: Vec<i128>,
    /// Partials handed to the next level.
    pub partials: Vec<i128>,
}

/// Record of a staged SCML evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageTrace {
    pub codes: Vec<u32>,
    pub rom_outputs: Vec<i128>,
    pub levels: Vec<AdderLevel>,
    pub result: FxWord,
}

/// Combines neighbouring partials `(2i, 2i+1)` as `lower + (upper << shift)`.
/// An unpaired trailing partial moves up unchanged.
pub fn combine_level(partials: &[i128], shift: u32) -> AdderLevel {
    let mask = (1u128 << shift) - 1;
    let mut passthrough = Vec::with_capacity(partials.len() / 2);
    let mut adder_outputs = Vec::with_capacity(partials.len() / 2);
    let mut next = Vec::with_capacity(partials.len().div_ceil(2));
    for pair in partials.chunks(2) {
        match *pair {
            [lower, upper] => {
                let low = (lower as u128) & mask;
                let high = (lower >> shift) + upper;
                passthrough.push(low);
                adder_outputs.push(high);
                next.push((high << shift) | low as i128);
            }
            [single] => next.push(single),
            _ => unreachable!(),
        }
    }
    AdderLevel {
        shift,
        passthrough,
        adder_outputs,
        partials: next,
    }
}

/// Parsed form of [`ScmlTable::dump`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDump {
    pub p: u32,
    pub b: u32,
    pub entry_width: u32,
    pub constant_raw: i128,
    pub roms: Vec<Vec<i128>>,
}

pub fn parse_dump(text: &str) -> Result<TableDump> {
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, msg: &str| Error::Parse {
        line: line + 1,
        msg: msg.to_string(),
    };
    let (_, header) = lines.next().ok_or(Error::Empty("table dump"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 {
        return Err(parse_err(0, "header needs 4 fields"));
    }
    let num = |s: &str, line| s.parse::<i128>().map_err(|e| parse_err(line, &e.to_string()));
    let p = num(h[0], 0)? as u32;
    let b = num(h[1], 0)? as u32;
    let entry_width = num(h[2], 0)? as u32;
    let constant_raw = num(h[3], 0)?;
    if !(1..=MAX_ROM_ADDRESS_BITS).contains(&p) || b == 0 {
        return Err(parse_err(0, "bad p or b"));
    }
    let mut roms = vec![Vec::with_capacity(1 << p); b as usize];
    for (i, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(i, "expected `k s value`"));
        }
        let (k, s, v) = (num(f[0], i)?, num(f[1], i)?, num(f[2], i)?);
        let rom = roms
            .get_mut(k as usize)
            .ok_or_else(|| parse_err(i, "ROM index out of range"))?;
        if s != rom.len() as i128 {
            return Err(parse_err(i, "entries out of order"));
        }
        rom.push(v);
    }
    if roms.iter().any(|r| r.len() != 1 << p) {
        return Err(parse_err(0, "incomplete table"));
    }
    Ok(TableDump {
        p,
        b,
        entry_width,
        constant_raw,
        roms,
    })
}
