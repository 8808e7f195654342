//! Verilog emission for the constant multiplier and the butterfly, ROM
//! initialization files, and self-checking testbenches driven by golden
//! vectors from the bit-exact model.
//!
//! Output is byte-deterministic: `\n` line endings, fixed ordering, no
//! timestamps. Register placement follows [`crate::pipeline::PipelineConfig::standard`].

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::butterfly::{butterfly_ds, butterfly_ds_full, ComplexFx, RequantPolicy, StageShift, TwiddleTables};
use crate::error::{Error, Result};
use crate::fixedpoint::{wrap_to_width, FxWord, Overflow, QFormat, Rounding};
use crate::pipeline::PipelineConfig;
use crate::scml::{adder_tree_levels, ScmlTable};
use crate::signal_io::{hex_word, parse_hex_word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFile {
    pub name: String,
    pub contents: String,
}

/// A set of generated files. The first file is the primary text (RTL or
/// testbench).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub files: Vec<EmittedFile>,
}

impl Emission {
    pub fn primary(&self) -> &EmittedFile {
        &self.files[0]
    }

    pub fn file(&self, name: &str) -> Option<&EmittedFile> {
        self.files.iter().find(|f| f.name == name)
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files
            .iter()
            .map(|f| {
                let path = dir.join(&f.name);
                std::fs::write(&path, &f.contents)?;
                Ok(path)
            })
            .collect()
    }

    fn extend(&mut self, other: Emission) {
        self.files.extend(other.files);
    }
}

pub fn check_identifier(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidIdentifier(name.to_string()))
    }
}

/// ROM file name for bank `k` of module `module_name`.
pub fn rom_file_name(module_name: &str, k: usize) -> String {
    format!("{module_name}_rom{k}.hex")
}

/// One ROM word per line, two's complement, `ceil(entry_width / 4)` digits.
pub fn rom_init_text(rom: &[i128], entry_width: u32) -> String {
    let mut s = String::with_capacity(rom.len() * (entry_width as usize / 4 + 2));
    for &v in rom {
        s.push_str(&hex_word(v, entry_width));
        s.push('\n');
    }
    s
}

pub fn parse_rom_init(text: &str, entry_width: u32) -> Result<Vec<i128>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            parse_hex_word(l.trim(), entry_width).ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("bad ROM word {l:?}"),
            })
        })
        .collect()
}

/// Clock cycles from input to output of an emitted constant multiplier.
pub fn scml_latency(t: &ScmlTable) -> usize {
    1 + adder_tree_levels(t.params().b()) as usize
}

fn scml_output_width(t: &ScmlTable) -> u32 {
    t.constant().fmt().width() + t.params().word_width() as u32
}

/// Emits a pipelined constant multiplier: a ROM stage followed by one
/// register per adder-tree level, with low-bit pass-through at each level.
pub fn emit_scml(t: &ScmlTable, module_name: &str) -> Result<Emission> {
    check_identifier(module_name)?;
    let (p, b) = (t.params().p(), t.params().b());
    let xw = t.params().word_width() as u32;
    let w = scml_output_width(t);
    let ew = t.entry_width();
    let c = t.constant();
    let mut v = String::new();
    let _ = writeln!(v, "// Single-constant multiplier-less multiplier generated by dsfft.");
    let _ = writeln!(
        v,
        "// constant raw {} in {}, {} blocks of {} bits, latency {} cycles.",
        c.raw(),
        c.fmt(),
        b,
        p,
        scml_latency(t)
    );
    let _ = writeln!(v, "module {module_name} (");
    let _ = writeln!(v, "    input  wire                clk,");
    let _ = writeln!(v, "    input  wire signed [{}:0] x,", xw - 1);
    let _ = writeln!(v, "    output wire signed [{}:0] y", w - 1);
    let _ = writeln!(v, ");");
    v.push('\n');
    for k in 0..b {
        let _ = writeln!(v, "    reg signed [{}:0] rom{k} [0:{}];", ew - 1, (1u32 << p) - 1);
    }
    let _ = writeln!(v, "    initial begin");
    for k in 0..b as usize {
        let _ = writeln!(v, "        $readmemh(\"{}\", rom{k});", rom_file_name(module_name, k));
    }
    let _ = writeln!(v, "    end");
    v.push('\n');

    let _ = writeln!(v, "    // stage 1: slice and ROM lookup");
    let names: Vec<String> = (0..b).map(|k| format!("s1_{k}")).collect();
    let _ = writeln!(v, "    reg signed [{}:0] {};", w - 1, names.join(", "));
    let _ = writeln!(v, "    always @(posedge clk) begin");
    for k in 0..b {
        let _ = writeln!(
            v,
            "        s1_{k} <= rom{k}[x[{}:{}]];",
            p * k + p - 1,
            p * k
        );
    }
    let _ = writeln!(v, "    end");

    let mut current = names;
    let mut shift = p;
    let mut stage = 1;
    while current.len() > 1 {
        stage += 1;
        let next: Vec<String> = (0..current.len().div_ceil(2))
            .map(|i| format!("s{stage}_{i}"))
            .collect();
        v.push('\n');
        let _ = writeln!(
            v,
            "    // stage {stage}: adder level {}, low {shift} bits pass through",
            stage - 1
        );
        let _ = writeln!(v, "    reg signed [{}:0] {};", w - 1, next.join(", "));
        let _ = writeln!(v, "    always @(posedge clk) begin");
        for (i, pair) in current.chunks(2).enumerate() {
            match pair {
                [lo, hi] => {
                    let _ = writeln!(
                        v,
                        "        {} <= {{({lo} >>> {shift}) + {hi}, {lo}[{}:0]}};",
                        next[i],
                        shift - 1
                    );
                }
                [single] => {
                    let _ = writeln!(v, "        {} <= {single};", next[i]);
                }
                _ => unreachable!(),
            }
        }
        let _ = writeln!(v, "    end");
        current = next;
        shift *= 2;
    }
    v.push('\n');
    let _ = writeln!(v, "    assign y = {};", current[0]);
    let _ = writeln!(v, "endmodule");

    let mut files = vec![EmittedFile {
        name: format!("{module_name}.v"),
        contents: v,
    }];
    for (k, rom) in t.roms().iter().enumerate() {
        files.push(EmittedFile {
            name: rom_file_name(module_name, k),
            contents: rom_init_text(rom, ew),
        });
    }
    Ok(Emission { files })
}

/// Cycles from input to output of an emitted butterfly; equals the depth of
/// the standard pipeline.
pub fn butterfly_latency(t: &TwiddleTables) -> usize {
    PipelineConfig::standard(t.params()).depth()
}

fn signed_literal(value: i128, width: u32) -> String {
    if value < 0 {
        format!("-{width}'sd{}", value.unsigned_abs())
    } else {
        format!("{width}'sd{value}")
    }
}

/// Names of the `(wr, wi)` multiplier submodules used by a butterfly.
pub fn butterfly_submodules(module_name: &str) -> (String, String) {
    (format!("{module_name}_wr"), format!("{module_name}_wi"))
}

/// Emits the butterfly: four constant-multiplier instances sharing two ROM
/// banks, `A` delayed to match, the complex add/sub stage and a requantize
/// stage. `in_fmt` is the format of `A` and `B`.
pub fn emit_butterfly(
    t: &TwiddleTables,
    in_fmt: QFormat,
    q: &RequantPolicy,
    module_name: &str,
) -> Result<Emission> {
    check_identifier(module_name)?;
    let xw = t.params().word_width() as u32;
    if in_fmt.width() != xw {
        return Err(Error::SliceWidthMismatch {
            width: in_fmt.width(),
            expected: xw,
        });
    }
    // Formats come straight from the model.
    let zero = ComplexFx::zero(in_fmt);
    let (full, _) = butterfly_ds_full(&zero, &zero, t)?;
    let full_fmt = full.fmt();
    let prod_fmt = t.wr_table().product_format(in_fmt.frac())?;
    let out = q.out_fmt;
    if out.width() > full_fmt.width() {
        return Err(Error::InvalidFormat {
            width: out.width(),
            frac: out.frac(),
        });
    }
    let (wr_name, wi_name) = butterfly_submodules(module_name);
    let lat = scml_latency(t.wr_table());
    let iw = in_fmt.width();
    let pw = prod_fmt.width();
    let fw = full_fmt.width();
    let align = prod_fmt.frac() - in_fmt.frac();

    let eff_frac = full_fmt.frac() + u32::from(q.stage_shift == StageShift::Half);
    let s = eff_frac as i64 - out.frac() as i64;
    let rw = fw + if s < 0 { (-s) as u32 } else { 0 };

    let mut v = String::new();
    let _ = writeln!(v, "// Digit-slicing multiplier-less radix-2 butterfly generated by dsfft.");
    let _ = writeln!(
        v,
        "// W = Wr - jWi with Wr raw {}, Wi raw {} in {}; inputs {}, outputs {}.",
        t.wr().raw(),
        t.wi().raw(),
        t.wr().fmt(),
        in_fmt,
        out
    );
    let _ = writeln!(
        v,
        "// requant: {:?}, {:?}, stage shift {:?}; latency {} cycles.",
        q.rounding,
        q.overflow,
        q.stage_shift,
        butterfly_latency(t)
    );
    let _ = writeln!(v, "module {module_name} (");
    let _ = writeln!(v, "    input  wire                clk,");
    for port in ["ar", "ai", "br", "bi"] {
        let _ = writeln!(v, "    input  wire signed [{}:0] {port},", iw - 1);
    }
    let outs = ["xr", "xi", "yr", "yi"];
    for (i, port) in outs.iter().enumerate() {
        let sep = if i + 1 == outs.len() { "" } else { "," };
        let _ = writeln!(v, "    output wire signed [{}:0] {port}{sep}", out.width() - 1);
    }
    let _ = writeln!(v, ");");
    v.push('\n');

    let _ = writeln!(v, "    // stages 1-{lat}: constant multipliers, two ROM banks each read twice");
    let _ = writeln!(v, "    wire signed [{}:0] p_rr, p_ii, p_ri, p_ir;", pw - 1);
    let _ = writeln!(v, "    {wr_name} u_rr (.clk(clk), .x(br), .y(p_rr));");
    let _ = writeln!(v, "    {wi_name} u_ii (.clk(clk), .x(bi), .y(p_ii));");
    let _ = writeln!(v, "    {wr_name} u_ri (.clk(clk), .x(bi), .y(p_ri));");
    let _ = writeln!(v, "    {wi_name} u_ir (.clk(clk), .x(br), .y(p_ir));");
    v.push('\n');

    let _ = writeln!(v, "    // A delayed by {lat} cycles");
    for d in 1..=lat {
        let _ = writeln!(v, "    reg signed [{}:0] ar_d{d}, ai_d{d};", iw - 1);
    }
    let _ = writeln!(v, "    always @(posedge clk) begin");
    let _ = writeln!(v, "        ar_d1 <= ar;");
    let _ = writeln!(v, "        ai_d1 <= ai;");
    for d in 2..=lat {
        let _ = writeln!(v, "        ar_d{d} <= ar_d{};", d - 1);
        let _ = writeln!(v, "        ai_d{d} <= ai_d{};", d - 1);
    }
    let _ = writeln!(v, "    end");
    v.push('\n');

    let st_add = lat + 1;
    let _ = writeln!(v, "    // stage {st_add}: X = A + WB, Y = A - WB at full precision");
    let _ = writeln!(v, "    wire signed [{}:0] a_re = ar_d{lat} <<< {align};", fw - 1);
    let _ = writeln!(v, "    wire signed [{}:0] a_im = ai_d{lat} <<< {align};", fw - 1);
    let _ = writeln!(v, "    wire signed [{}:0] wb_re = p_rr + p_ii;", fw - 1);
    let _ = writeln!(v, "    wire signed [{}:0] wb_im = p_ri - p_ir;", fw - 1);
    let _ = writeln!(v, "    reg signed [{}:0] f_xr, f_xi, f_yr, f_yi;", fw - 1);
    let _ = writeln!(v, "    always @(posedge clk) begin");
    let _ = writeln!(v, "        f_xr <= a_re + wb_re;");
    let _ = writeln!(v, "        f_xi <= a_im + wb_im;");
    let _ = writeln!(v, "        f_yr <= a_re - wb_re;");
    let _ = writeln!(v, "        f_yi <= a_im - wb_im;");
    let _ = writeln!(v, "    end");
    v.push('\n');

    let st_q = st_add + 1;
    let _ = writeln!(v, "    // stage {st_q}: requantize {full_fmt} -> {out}");
    for sig in outs {
        emit_requant(&mut v, sig, &format!("f_{sig}"), q, s, rw, out.width());
    }
    let _ = writeln!(v, "    reg signed [{}:0] {};", out.width() - 1, outs.map(|o| format!("q_{o}")).join(", "));
    let _ = writeln!(v, "    always @(posedge clk) begin");
    for sig in outs {
        let _ = writeln!(v, "        q_{sig} <= {sig}_n;");
    }
    let _ = writeln!(v, "    end");
    v.push('\n');
    for sig in outs {
        let _ = writeln!(v, "    assign {sig} = q_{sig};");
    }
    let _ = writeln!(v, "endmodule");

    let wr = emit_scml(t.wr_table(), &wr_name)?;
    let wi = emit_scml(t.wi_table(), &wi_name)?;
    let mut rtl = v;
    for sub in [&wr, &wi] {
        rtl.push('\n');
        rtl.push_str(&sub.primary().contents);
    }
    let mut em = Emission {
        files: vec![EmittedFile {
            name: format!("{module_name}.v"),
            contents: rtl,
        }],
    };
    for sub in [wr, wi] {
        em.extend(Emission {
            files: sub.files.into_iter().skip(1).collect(),
        });
    }
    Ok(em)
}

/// Combinational requantization of `src` into wire `{sig}_n`.
/// `s` is the right shift from the effective input scale to the output.
fn emit_requant(v: &mut String, sig: &str, src: &str, q: &RequantPolicy, s: i64, rw: u32, ow: u32) {
    let top = rw - 1;
    if s > 0 {
        let s = s as u32;
        let _ = writeln!(v, "    wire signed [{top}:0] {sig}_fl = {src} >>> {s};");
        match q.rounding {
            Rounding::Truncate => {
                let _ = writeln!(v, "    wire signed [{top}:0] {sig}_rd = {sig}_fl;");
            }
            Rounding::NearestEven => {
                let half = 1u128 << (s - 1);
                let _ = writeln!(v, "    wire [{}:0] {sig}_rem = {src}[{}:0];", s - 1, s - 1);
                let _ = writeln!(
                    v,
                    "    wire signed [{top}:0] {sig}_rd = ({sig}_rem > {s}'d{half} || ({sig}_rem == {s}'d{half} && {sig}_fl[0])) ? {sig}_fl + 1 : {sig}_fl;"
                );
            }
        }
    } else {
        let _ = writeln!(v, "    wire signed [{top}:0] {sig}_rd = {src} <<< {};", -s);
    }
    match q.overflow {
        Overflow::Saturate => {
            let fmt = QFormat::new(ow, 0).expect("output width already validated");
            let (max, min) = (fmt.max_raw(), fmt.min_raw());
            let _ = writeln!(
                v,
                "    wire signed [{}:0] {sig}_n = ({sig}_rd > {}) ? {} : ({sig}_rd < {}) ? {} : {sig}_rd[{}:0];",
                ow - 1,
                signed_literal(max, rw),
                signed_literal(max, ow),
                signed_literal(min, rw),
                signed_literal(min, ow),
                ow - 1
            );
        }
        Overflow::Wrap => {
            let _ = writeln!(v, "    wire signed [{}:0] {sig}_n = {sig}_rd[{}:0];", ow - 1, ow - 1);
        }
    }
}

/// Port list and timing of a device under test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestbenchPorts {
    pub inputs: Vec<(String, u32)>,
    pub outputs: Vec<(String, u32)>,
    pub depth: usize,
}

impl TestbenchPorts {
    pub fn scml(t: &ScmlTable) -> Self {
        Self {
            inputs: vec![("x".into(), t.params().word_width() as u32)],
            outputs: vec![("y".into(), scml_output_width(t))],
            depth: scml_latency(t),
        }
    }

    pub fn butterfly(t: &TwiddleTables, q: &RequantPolicy) -> Self {
        let iw = t.params().word_width() as u32;
        let ow = q.out_fmt.width();
        Self {
            inputs: ["ar", "ai", "br", "bi"].iter().map(|s| (s.to_string(), iw)).collect(),
            outputs: ["xr", "xi", "yr", "yi"].iter().map(|s| (s.to_string(), ow)).collect(),
            depth: butterfly_latency(t),
        }
    }

    /// Width of every hex token in the golden file.
    pub fn token_width(&self) -> u32 {
        self.inputs
            .iter()
            .chain(&self.outputs)
            .map(|(_, w)| *w)
            .max()
            .unwrap_or(1)
    }

    fn tokens_per_vector(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }
}

/// Inputs and expected outputs of one cycle, as raw integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenVector {
    pub inputs: Vec<i128>,
    pub expected: Vec<i128>,
}

pub fn golden_file_name(module_name: &str) -> String {
    format!("{module_name}_golden.hex")
}

/// One vector per line: input tokens then expected-output tokens, each a
/// two's-complement hex word of [`TestbenchPorts::token_width`] bits.
pub fn golden_text(vectors: &[GoldenVector], ports: &TestbenchPorts) -> String {
    let tw = ports.token_width();
    let mut s = String::new();
    for vec in vectors {
        let words: Vec<String> = vec
            .inputs
            .iter()
            .chain(&vec.expected)
            .map(|&x| hex_word(x, tw))
            .collect();
        s.push_str(&words.join(" "));
        s.push('\n');
    }
    s
}

/// Emits `<name>_tb.v` and `<name>_golden.hex`. The testbench applies one
/// vector per cycle, compares each output `depth` cycles later and prints
/// `PASS <n> FAIL <m>`.
pub fn emit_testbench(
    module_name: &str,
    vectors: &[GoldenVector],
    ports: &TestbenchPorts,
) -> Result<Emission> {
    check_identifier(module_name)?;
    if vectors.is_empty() {
        return Err(Error::Empty("golden vector set"));
    }
    for v in vectors {
        if v.inputs.len() != ports.inputs.len() || v.expected.len() != ports.outputs.len() {
            return Err(Error::LengthMismatch {
                expected: ports.tokens_per_vector(),
                found: v.inputs.len() + v.expected.len(),
            });
        }
    }
    let n = vectors.len();
    let tw = ports.token_width();
    let toks = ports.tokens_per_vector();
    let depth = ports.depth;
    let golden = golden_file_name(module_name);
    let mut t = String::new();
    let _ = writeln!(t, "// Self-checking testbench for {module_name} generated by dsfft.");
    let _ = writeln!(t, "`timescale 1ns / 1ps");
    let _ = writeln!(t, "module {module_name}_tb;");
    let _ = writeln!(t, "    localparam N = {n};");
    let _ = writeln!(t, "    localparam DEPTH = {depth};");
    let _ = writeln!(t, "    localparam TOKS = {toks};");
    v_line(&mut t, "");
    let _ = writeln!(t, "    reg clk = 1'b0;");
    let _ = writeln!(t, "    always #5 clk = ~clk;");
    let _ = writeln!(t, "    reg [{}:0] golden [0:{}];", tw - 1, n * toks - 1);
    for (name, w) in &ports.inputs {
        let _ = writeln!(t, "    reg signed [{}:0] {name};", w - 1);
    }
    for (name, w) in &ports.outputs {
        let _ = writeln!(t, "    wire signed [{}:0] {name};", w - 1);
    }
    let conns: Vec<String> = std::iter::once("clk".to_string())
        .chain(ports.inputs.iter().chain(&ports.outputs).map(|(n, _)| n.clone()))
        .map(|n| format!(".{n}({n})"))
        .collect();
    let _ = writeln!(t, "    {module_name} dut ({});", conns.join(", "));
    v_line(&mut t, "");
    let _ = writeln!(t, "    integer cyc, i, errors, checked;");
    let _ = writeln!(t, "    initial begin");
    let _ = writeln!(t, "        $readmemh(\"{golden}\", golden);");
    let _ = writeln!(t, "        errors = 0;");
    let _ = writeln!(t, "        checked = 0;");
    for (name, _) in &ports.inputs {
        let _ = writeln!(t, "        {name} = 0;");
    }
    let _ = writeln!(t, "        for (cyc = 0; cyc < N + DEPTH; cyc = cyc + 1) begin");
    let _ = writeln!(t, "            if (cyc < N) begin");
    for (j, (name, w)) in ports.inputs.iter().enumerate() {
        let _ = writeln!(t, "                {name} = golden[cyc * TOKS + {j}][{}:0];", w - 1);
    }
    let _ = writeln!(t, "            end");
    let _ = writeln!(t, "            if (cyc >= DEPTH) begin");
    let _ = writeln!(t, "                i = cyc - DEPTH;");
    let base = ports.inputs.len();
    let conds: Vec<String> = ports
        .outputs
        .iter()
        .enumerate()
        .map(|(j, (name, w))| format!("{name} !== golden[i * TOKS + {}][{}:0]", base + j, w - 1))
        .collect();
    let _ = writeln!(t, "                if ({}) begin", conds.join(" || "));
    let _ = writeln!(t, "                    errors = errors + 1;");
    let fmt_args: Vec<String> = ports.outputs.iter().map(|(n, _)| format!("{n}=%h")).collect();
    let vals: Vec<&str> = ports.outputs.iter().map(|(n, _)| n.as_str()).collect();
    let _ = writeln!(
        t,
        "                    $display(\"MISMATCH vector %0d: {}\", i, {});",
        fmt_args.join(" "),
        vals.join(", ")
    );
    let _ = writeln!(t, "                end");
    let _ = writeln!(t, "                checked = checked + 1;");
    let _ = writeln!(t, "            end");
    let _ = writeln!(t, "            @(posedge clk);");
    let _ = writeln!(t, "            #1;");
    let _ = writeln!(t, "        end");
    let _ = writeln!(t, "        $display(\"PASS %0d FAIL %0d\", checked - errors, errors);");
    let _ = writeln!(t, "        $finish;");
    let _ = writeln!(t, "    end");
    let _ = writeln!(t, "endmodule");

    Ok(Emission {
        files: vec![
            EmittedFile {
                name: format!("{module_name}_tb.v"),
                contents: t,
            },
            EmittedFile {
                name: golden,
                contents: golden_text(vectors, ports),
            },
        ],
    })
}

fn v_line(s: &mut String, line: &str) {
    s.push_str(line);
    s.push('\n');
}

pub fn scml_vectors(t: &ScmlTable, xs: &[FxWord]) -> Result<Vec<GoldenVector>> {
    xs.iter()
        .map(|x| {
            Ok(GoldenVector {
                inputs: vec![x.raw()],
                expected: vec![t.mul(x)?.raw()],
            })
        })
        .collect()
}

pub fn butterfly_vectors(
    t: &TwiddleTables,
    q: &RequantPolicy,
    inputs: &[(ComplexFx, ComplexFx)],
) -> Result<Vec<GoldenVector>> {
    inputs
        .iter()
        .map(|(a, b)| {
            let (x, y) = butterfly_ds(a, b, t, q)?;
            Ok(GoldenVector {
                inputs: vec![a.re().raw(), a.im().raw(), b.re().raw(), b.im().raw()],
                expected: vec![x.re().raw(), x.im().raw(), y.re().raw(), y.im().raw()],
            })
        })
        .collect()
}

/// Outcome of replaying a golden file against the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCheck {
    pub vectors: usize,
    /// Zero-based indices of vectors whose expected outputs disagree.
    pub mismatches: Vec<usize>,
}

/// Software counterpart of the emitted testbench: reads each golden line,
/// recomputes the outputs with `model` and counts disagreements.
pub fn check_golden<F>(text: &str, ports: &TestbenchPorts, model: F) -> Result<GoldenCheck>
where
    F: Fn(&[i128]) -> Result<Vec<i128>>,
{
    let tw = ports.token_width();
    let mut mismatches = Vec::new();
    let mut count = 0;
    for (i, line) in text.lines().enumerate() {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != ports.tokens_per_vector() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected {} hex words", ports.tokens_per_vector()),
            });
        }
        let mut vals = Vec::with_capacity(words.len());
        for (word, (_, w)) in words.iter().zip(ports.inputs.iter().chain(&ports.outputs)) {
            let v = parse_hex_word(word, tw).ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("bad hex word {word:?}"),
            })?;
            vals.push(wrap_to_width(v, *w));
        }
        let (inputs, expected) = vals.split_at(ports.inputs.len());
        if model(inputs)? != expected {
            mismatches.push(count);
        }
        count += 1;
    }
    Ok(GoldenCheck {
        vectors: count,
        mismatches,
    })
}

pub fn scml_model(t: &ScmlTable) -> impl Fn(&[i128]) -> Result<Vec<i128>> + '_ {
    move |inp| {
        let fmt = QFormat::new(t.params().word_width() as u32, 0)?;
        let x = FxWord::new(inp[0], fmt)?;
        Ok(vec![t.mul(&x)?.raw()])
    }
}

pub fn butterfly_model<'a>(
    t: &'a TwiddleTables,
    in_fmt: QFormat,
    q: &'a RequantPolicy,
) -> impl Fn(&[i128]) -> Result<Vec<i128>> + 'a {
    move |inp| {
        let a = ComplexFx::from_raw(inp[0], inp[1], in_fmt)?;
        let b = ComplexFx::from_raw(inp[2], inp[3], in_fmt)?;
        let (x, y) = butterfly_ds(&a, &b, t, q)?;
        Ok(vec![x.re().raw(), x.im().raw(), y.re().raw(), y.im().raw()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digit_slicing::SliceParams;

    fn table(raw: i128) -> ScmlTable {
        ScmlTable::build(FxWord::new(raw, QFormat::q15()).unwrap(), SliceParams::default_a1()).unwrap()
    }

    #[test]
    fn identifiers() {
        for ok in ["a", "_x", "scml_0", "Bfly9"] {
            assert!(check_identifier(ok).is_ok());
        }
        for bad in ["", "9a", "a-b", "a b", "é"] {
            assert!(check_identifier(bad).is_err());
        }
        assert!(emit_scml(&table(1), "1bad").is_err());
    }

    #[test]
    fn scml_file_tree() {
        let e = emit_scml(&table(-23170), "mul").unwrap();
        let names: Vec<&str> = e.files.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["mul.v", "mul_rom0.hex", "mul_rom1.hex", "mul_rom2.hex", "mul_rom3.hex"]);
        let rtl = &e.primary().contents;
        assert!(rtl.contains("input  wire signed [15:0] x,"));
        assert!(rtl.contains("output wire signed [31:0] y"));
        assert!(rtl.contains("s2_0 <= {(s1_0 >>> 4) + s1_1, s1_0[3:0]};"));
        assert!(rtl.contains("s3_0 <= {(s2_0 >>> 8) + s2_1, s2_0[7:0]};"));
        assert!(rtl.contains("assign y = s3_0;"));
        for f in &e.files[1..] {
            assert_eq!(f.contents.lines().count(), 16);
            assert!(f.contents.lines().all(|l| l.len() == 5));
        }
    }

    #[test]
    fn zero_constant_roms_are_zero() {
        let e = emit_scml(&table(0), "z").unwrap();
        for f in &e.files[1..] {
            assert!(f.contents.lines().all(|l| l == "00000"));
        }
    }

    #[test]
    fn testbench_requires_vectors() {
        let t = table(5);
        let ports = TestbenchPorts::scml(&t);
        assert!(emit_testbench("m", &[], &ports).is_err());
        let bad = vec![GoldenVector {
            inputs: vec![],
            expected: vec![0],
        }];
        assert!(emit_testbench("m", &bad, &ports).is_err());
    }

    #[test]
    fn literals() {
        assert_eq!(signed_literal(32767, 34), "34'sd32767");
        assert_eq!(signed_literal(-32768, 16), "-16'sd32768");
    }

    #[test]
    fn butterfly_requant_variants_emit() {
        let fmt = QFormat::q15();
        let t = TwiddleTables::new(
            FxWord::new(30274, fmt).unwrap(),
            FxWord::new(12540, fmt).unwrap(),
            SliceParams::default_a1(),
        )
        .unwrap();
        for (rounding, overflow, stage_shift) in [
            (Rounding::Truncate, Overflow::Saturate, StageShift::Half),
            (Rounding::NearestEven, Overflow::Wrap, StageShift::None),
        ] {
            let q = RequantPolicy {
                out_fmt: fmt,
                rounding,
                overflow,
                stage_shift,
            };
            let e = emit_butterfly(&t, fmt, &q, "bf").unwrap();
            let rtl = &e.primary().contents;
            assert!(rtl.contains("module bf ("));
            assert!(rtl.contains("module bf_wr ("));
            assert!(rtl.contains("module bf_wi ("));
            if rounding == Rounding::NearestEven {
                assert!(rtl.contains("xr_rem"));
            }
        }
        let q = RequantPolicy::for_format(fmt);
        assert!(emit_butterfly(&t, QFormat::new(12, 11).unwrap(), &q, "bf").is_err());
    }
}
