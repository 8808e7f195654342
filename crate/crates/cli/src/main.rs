mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsfft::butterfly::StageShift;
use dsfft::digit_slicing::slice;
use dsfft::fft::{fft_error_report, twiddle};
use dsfft::hdl::{
    butterfly_model, butterfly_vectors, check_golden, emit_butterfly, emit_scml, emit_testbench,
    golden_file_name, scml_model, scml_vectors, TestbenchPorts,
};
use dsfft::pipeline::{
    estimate_cost_with, outputs_to_csv, simulate_stream, CostReport, Design, PipelineConfig,
};
use dsfft::signal_io;
use dsfft::{
    butterfly_ds, dft_reference, fft_execute, ComplexFx, FftImpl, FftPlan, FxWord, Overflow,
    QFormat, RequantPolicy, Rounding, ScmlTable, SliceAlgorithm, SliceParams, TwiddleTables,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use config::{pick, Config};

/// Digit-slicing multiplier-less FFT toolkit.
#[derive(Debug, Parser)]
#[command(name = "dsfft", version)]
struct Cli {
    /// JSON file of defaults; explicit flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Slice a value into blocks and check the reconstruction.
    Slice(SliceArgs),
    /// Dump the ROM contents of a constant multiplier.
    Table(TableArgs),
    /// Run a fixed-point FFT over a signal file.
    Fft(FftArgs),
    /// Stream butterflies through the cycle-level pipeline model.
    Sim(SimArgs),
    /// Emit Verilog, ROM init files, testbench and golden vectors.
    Hdlgen(HdlArgs),
    /// Print the structural cost report as JSON.
    Cost(CostArgs),
}

#[derive(Debug, Args)]
struct FormatArgs {
    /// Word width in bits [default: 16]
    #[arg(short = 'w', long)]
    width: Option<u32>,
    /// Fraction bits [default: width - 1]
    #[arg(short = 'f', long)]
    frac: Option<u32>,
    /// Bits per block [default: 4]
    #[arg(short = 'p', long)]
    p: Option<u32>,
    /// Number of blocks [default: derived from width and p]
    #[arg(short = 'b', long)]
    b: Option<u32>,
}

#[derive(Debug, Args)]
struct RequantArgs {
    /// Per-stage output scaling [default: half]
    #[arg(long, value_enum)]
    scaling: Option<Scaling>,
    /// Output rounding [default: truncate]
    #[arg(long, value_enum)]
    rounding: Option<RoundingArg>,
    /// Output overflow handling [default: saturate]
    #[arg(long, value_enum)]
    overflow: Option<OverflowArg>,
}

#[derive(Debug, Args)]
struct TwiddleArgs {
    /// Twiddle index k of W_n^k [default: 1]
    #[arg(short = 'k', long)]
    twiddle: Option<usize>,
    /// Transform size n of W_n^k [default: 8]
    #[arg(short = 'n', long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct SliceArgs {
    /// Real value to slice
    #[arg(short = 'v', long, allow_hyphen_values = true, required_unless_present = "all")]
    value: Option<f64>,
    /// Slice every word of the format instead of one value
    #[arg(long, conflicts_with = "value")]
    all: bool,
    /// Slicing algorithm: 1 (blocks LSB first, top block signed) or 2 (sign block then unsigned blocks) [default: 1]
    #[arg(short = 'a', long, value_parser = clap::value_parser!(u8).range(1..=2))]
    algorithm: Option<u8>,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Constant value; defaults to the real part of the twiddle
    #[arg(short = 'c', long, allow_hyphen_values = true)]
    constant: Option<f64>,
    #[command(flatten)]
    twiddle: TwiddleArgs,
    /// Use the imaginary (sine) twiddle component
    #[arg(long)]
    imag: bool,
    #[command(flatten)]
    fmt: FormatArgs,
    /// Output file [default: stdout]
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImplArg {
    Ds,
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scaling {
    Half,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoundingArg {
    Truncate,
    NearestEven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OverflowArg {
    Saturate,
    Wrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignalFormat {
    Csv,
    Json,
    Hex,
}

#[derive(Debug, Args)]
struct FftArgs {
    /// Input signal (.csv, .json or .hex)
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Output spectrum [default: CSV on stdout]
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Transform size; must equal the input length [default: input length]
    #[arg(short = 'n', long)]
    n: Option<usize>,
    /// Butterfly implementation [default: ds]
    #[arg(long = "impl", value_enum)]
    implementation: Option<ImplArg>,
    /// Input file format [default: from extension]
    #[arg(long, value_enum)]
    input_format: Option<SignalFormat>,
    /// Output file format [default: from extension]
    #[arg(long, value_enum)]
    output_format: Option<SignalFormat>,
    /// Also run the other implementation and the double-precision DFT
    #[arg(long)]
    compare: bool,
    #[command(flatten)]
    fmt: FormatArgs,
    #[command(flatten)]
    requant: RequantArgs,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Pipeline depth [default: one stage per operation]
    #[arg(short = 'd', long)]
    depth: Option<usize>,
    /// Number of random butterflies to stream [default: 16]
    #[arg(long)]
    count: Option<usize>,
    /// Random seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    twiddle: TwiddleArgs,
    #[command(flatten)]
    fmt: FormatArgs,
    #[command(flatten)]
    requant: RequantArgs,
    /// CSV of cycle-stamped outputs [default: stdout]
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Butterfly,
    Scml,
}

#[derive(Debug, Args)]
struct HdlArgs {
    /// What to emit
    #[arg(long, value_enum, default_value = "butterfly")]
    kind: Kind,
    /// Constant for a multiplier; defaults to the real part of the twiddle
    #[arg(short = 'c', long, allow_hyphen_values = true)]
    constant: Option<f64>,
    #[command(flatten)]
    twiddle: TwiddleArgs,
    /// Top module name
    #[arg(long, default_value = "dsfft_top")]
    name: String,
    /// Output directory
    #[arg(long = "out", short = 'O')]
    outdir: PathBuf,
    /// Golden vectors to generate [default: 1000]
    #[arg(long)]
    count: Option<usize>,
    /// Random seed for the golden vectors [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    fmt: FormatArgs,
    #[command(flatten)]
    requant: RequantArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Ds,
    Conventional,
    Both,
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Design to cost
    #[arg(long, value_enum, default_value = "ds")]
    design: DesignArg,
    /// Distinct twiddle constants stored [default: 1]
    #[arg(short = 'n', long)]
    constants: Option<u64>,
    #[command(flatten)]
    fmt: FormatArgs,
}

/// Why a command did not succeed.
enum Failure {
    /// The command ran but a check it performs did not hold.
    Verification(String),
    /// Bad flags, unreadable input or any other error.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Usage(e)
    }
}

impl From<dsfft::Error> for Failure {
    fn from(e: dsfft::Error) -> Self {
        Self::Usage(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = Config::load(cli.config.as_deref())
        .map_err(Failure::Usage)
        .and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, cfg: &Config) -> Outcome {
    match command {
        Command::Slice(a) => cmd_slice(a, cfg),
        Command::Table(a) => cmd_table(a, cfg),
        Command::Fft(a) => cmd_fft(a, cfg),
        Command::Sim(a) => cmd_sim(a, cfg),
        Command::Hdlgen(a) => cmd_hdlgen(a, cfg),
        Command::Cost(a) => cmd_cost(a, cfg),
    }
}

fn algorithm(n: u8) -> SliceAlgorithm {
    if n == 2 {
        SliceAlgorithm::A2
    } else {
        SliceAlgorithm::A1
    }
}

/// Resolves the word format and slicing parameters. When `b` is not given
/// it is derived from the width; when it is, the two must agree.
fn resolve_format(a: &FormatArgs, cfg: &Config, alg: SliceAlgorithm) -> anyhow::Result<(QFormat, SliceParams)> {
    let width = pick(a.width, &cfg.width, 16);
    let frac = pick(a.frac, &cfg.frac, width.saturating_sub(1));
    let fmt = QFormat::new(width, frac)?;
    let p = pick(a.p, &cfg.p, 4);
    if p == 0 {
        bail!("p must be positive");
    }
    let derived = match alg {
        SliceAlgorithm::A1 => width / p,
        SliceAlgorithm::A2 => (width.saturating_sub(1)) / p + 1,
    };
    let b = pick(a.b, &cfg.b, derived);
    let params = SliceParams::new(p, b, alg)?;
    if params.word_width() != width as u64 {
        bail!(
            "p = {p}, b = {b} slices {} bits but the format is {width} bits wide",
            params.word_width()
        );
    }
    Ok((fmt, params))
}

fn resolve_requant(a: &RequantArgs, cfg: &Config, fmt: QFormat) -> anyhow::Result<RequantPolicy> {
    let scaling = match a.scaling {
        Some(s) => s,
        None => parse_enum(&cfg.scaling, Scaling::Half)?,
    };
    let rounding = match a.rounding {
        Some(r) => r,
        None => parse_enum(&cfg.rounding, RoundingArg::Truncate)?,
    };
    let overflow = match a.overflow {
        Some(o) => o,
        None => parse_enum(&cfg.overflow, OverflowArg::Saturate)?,
    };
    Ok(RequantPolicy {
        out_fmt: fmt,
        rounding: match rounding {
            RoundingArg::Truncate => Rounding::Truncate,
            RoundingArg::NearestEven => Rounding::NearestEven,
        },
        overflow: match overflow {
            OverflowArg::Saturate => Overflow::Saturate,
            OverflowArg::Wrap => Overflow::Wrap,
        },
        stage_shift: match scaling {
            Scaling::Half => StageShift::Half,
            Scaling::None => StageShift::None,
        },
    })
}

fn parse_enum<T: ValueEnum>(value: &Option<String>, default: T) -> anyhow::Result<T> {
    match value {
        None => Ok(default),
        Some(s) => T::from_str(s, true).map_err(|e| anyhow!("config value {s:?}: {e}")),
    }
}

fn resolve_twiddle(a: &TwiddleArgs, cfg: &Config, fmt: QFormat) -> anyhow::Result<(FxWord, FxWord)> {
    let n = pick(a.n, &cfg.n, 8);
    let k = pick(a.twiddle, &cfg.twiddle, 1);
    if !n.is_power_of_two() || n < 2 {
        bail!("n = {n} is not a power of two of at least 2");
    }
    if k >= n / 2 {
        bail!("twiddle index {k} out of range for n = {n} (0..{})", n / 2);
    }
    Ok(twiddle(k, n, QFormat::fractional(fmt.width())?)?)
}

/// Writes to stdout; a reader that has gone away is not an error.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing to stdout: {e}");
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out(text);
            Ok(())
        }
    }
}

fn cmd_slice(a: SliceArgs, cfg: &Config) -> Outcome {
    let alg = algorithm(pick(a.algorithm, &cfg.algorithm, 1));
    let (fmt, params) = resolve_format(&a.fmt, cfg, alg)?;
    if a.all {
        let mut bad = 0u64;
        for raw in fmt.min_raw()..=fmt.max_raw() {
            let x = FxWord::new(raw, fmt)?;
            if slice(&x, params)?.unslice()? != x {
                bad += 1;
            }
        }
        let total = 1u128 << fmt.width();
        out(&format!("{total} words of {fmt}, {bad} roundtrip failures\n"));
        return if bad == 0 {
            Ok(())
        } else {
            Err(Failure::Verification(format!("{bad} words did not roundtrip")))
        };
    }
    let value = a.value.expect("clap requires a value without --all");
    let x = FxWord::from_real(value, fmt, Rounding::NearestEven)?;
    if x.to_real() != value {
        eprintln!("note: {value} is not representable in {fmt}; using {}", x.to_real());
    }
    let s = slice(&x, params)?;
    let mut text = String::new();
    let _ = writeln!(text, "value {} in {fmt}, raw {}", x.to_real(), x.raw());
    let _ = writeln!(
        text,
        "algorithm {}, p = {}, b = {}",
        if alg == SliceAlgorithm::A1 { 1 } else { 2 },
        params.p(),
        params.b()
    );
    let mut terms = Vec::new();
    for (k, &v) in s.blocks().iter().enumerate() {
        let e = s.weight_exponent(k);
        let _ = writeln!(text, "block {k}: {v:>4}  weight 2^{e}");
        terms.push(format!("{v}*2^{e}"));
    }
    let back = s.unslice()?;
    let _ = writeln!(text, "blocks: {}", s.blocks().iter().map(i64::to_string).collect::<Vec<_>>().join(", "));
    let _ = writeln!(
        text,
        "reconstruction: ({}) * 2^-{} = {} (raw {})",
        terms.join(" + "),
        fmt.frac(),
        back.to_real(),
        back.raw()
    );
    if back == x {
        let _ = writeln!(text, "roundtrip: exact");
    }
    out(&text);
    if back == x {
        Ok(())
    } else {
        Err(Failure::Verification(format!("reconstructed raw {} != {}", back.raw(), x.raw())))
    }
}

fn table_constant(
    constant: Option<f64>,
    tw: &TwiddleArgs,
    imag: bool,
    cfg: &Config,
    fmt: QFormat,
) -> anyhow::Result<FxWord> {
    let cfmt = QFormat::fractional(fmt.width())?;
    match constant {
        Some(c) => Ok(FxWord::from_real(c, cfmt, Rounding::NearestEven)?),
        None => {
            let (wr, wi) = resolve_twiddle(tw, cfg, fmt)?;
            Ok(if imag { wi } else { wr })
        }
    }
}

fn cmd_table(a: TableArgs, cfg: &Config) -> Outcome {
    let (fmt, params) = resolve_format(&a.fmt, cfg, SliceAlgorithm::A1)?;
    let c = table_constant(a.constant, &a.twiddle, a.imag, cfg, fmt)?;
    let t = ScmlTable::build(c, params)?;
    write_or_print(a.output.as_deref(), &t.dump())?;
    Ok(())
}

fn signal_format(explicit: Option<SignalFormat>, path: &Path) -> anyhow::Result<SignalFormat> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(SignalFormat::Csv),
        Some("json") => Ok(SignalFormat::Json),
        Some("hex") => Ok(SignalFormat::Hex),
        _ => bail!("cannot tell the format of {}; pass it explicitly", path.display()),
    }
}

fn cmd_fft(a: FftArgs, cfg: &Config) -> Outcome {
    let (fmt, params) = resolve_format(&a.fmt, cfg, SliceAlgorithm::A1)?;
    let policy = resolve_requant(&a.requant, cfg, fmt)?;
    let imp = match a.implementation {
        Some(i) => i,
        None => parse_enum(&cfg.implementation, ImplArg::Ds)?,
    };
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let x: Vec<ComplexFx> = match signal_format(a.input_format, &a.input)? {
        SignalFormat::Hex => signal_io::read_hex(&text, fmt)?,
        SignalFormat::Csv => quantize(&signal_io::read_csv(&text)?, fmt)?,
        SignalFormat::Json => quantize(&signal_io::read_json(&text)?, fmt)?,
    };
    let n = pick(a.n, &cfg.n, x.len());
    if n != x.len() {
        return Err(anyhow!("input has {} samples but n = {n}", x.len()).into());
    }
    let to_impl = |i: ImplArg| match i {
        ImplArg::Ds => FftImpl::DigitSlicing,
        ImplArg::Conventional => FftImpl::Conventional,
    };
    let plan = FftPlan::new(n, fmt, params, policy, to_impl(imp))?;
    let y = fft_execute(&plan, &x)?;

    let rendered = match a.output.as_deref() {
        Some(p) => match signal_format(a.output_format, p)? {
            SignalFormat::Hex => signal_io::write_hex(&y),
            SignalFormat::Csv => signal_io::write_csv(&to_c64(&y)),
            SignalFormat::Json => signal_io::write_json(&to_c64(&y)),
        },
        None => match a.output_format.unwrap_or(SignalFormat::Csv) {
            SignalFormat::Hex => signal_io::write_hex(&y),
            SignalFormat::Csv => signal_io::write_csv(&to_c64(&y)),
            SignalFormat::Json => signal_io::write_json(&to_c64(&y)),
        },
    };
    write_or_print(a.output.as_deref(), &rendered)?;

    if !a.compare {
        return Ok(());
    }
    let other_imp = if imp == ImplArg::Ds { ImplArg::Conventional } else { ImplArg::Ds };
    let other = FftPlan::new(n, fmt, params, policy, to_impl(other_imp))?;
    let y_other = fft_execute(&other, &x)?;
    let reference = dft_reference(&to_c64(&x));
    let m = fft_error_report(&y, &reference, &plan)?;
    let matched = y == y_other;
    let mut report = String::new();
    let _ = writeln!(report, "n: {n}");
    let _ = writeln!(report, "scale: {}", plan.cumulative_scale());
    let _ = writeln!(report, "max_abs_error: {:.6e}", m.max_abs_error);
    let _ = writeln!(report, "rms_error: {:.6e}", m.rms_error);
    let _ = writeln!(report, "snr_db: {:.2}", m.snr_db);
    let _ = writeln!(report, "implementations: {}", if matched { "MATCH" } else { "MISMATCH" });
    if a.output.is_some() {
        out(&report);
    } else {
        eprint!("{report}");
    }
    if matched {
        Ok(())
    } else {
        Err(Failure::Verification("implementations disagree".into()))
    }
}

fn quantize(v: &[Complex64], fmt: QFormat) -> anyhow::Result<Vec<ComplexFx>> {
    v.iter()
        .map(|&z| Ok(ComplexFx::from_c64(z, fmt, Rounding::NearestEven)?))
        .collect()
}

fn to_c64(v: &[ComplexFx]) -> Vec<Complex64> {
    v.iter().map(ComplexFx::to_c64).collect()
}

fn random_pairs(rng: &mut ChaCha8Rng, count: usize, fmt: QFormat) -> anyhow::Result<Vec<(ComplexFx, ComplexFx)>> {
    let word = |rng: &mut ChaCha8Rng| rng.random_range(fmt.min_raw()..=fmt.max_raw());
    (0..count)
        .map(|_| {
            let a = ComplexFx::from_raw(word(rng), word(rng), fmt)?;
            let b = ComplexFx::from_raw(word(rng), word(rng), fmt)?;
            Ok((a, b))
        })
        .collect()
}

fn cmd_sim(a: SimArgs, cfg: &Config) -> Outcome {
    let (fmt, params) = resolve_format(&a.fmt, cfg, SliceAlgorithm::A1)?;
    let policy = resolve_requant(&a.requant, cfg, fmt)?;
    let (wr, wi) = resolve_twiddle(&a.twiddle, cfg, fmt)?;
    let t = TwiddleTables::new(wr, wi, params)?;
    let pipeline = match a.depth.or(cfg.depth) {
        Some(d) => PipelineConfig::with_depth(params, d)?,
        None => PipelineConfig::standard(params),
    };
    let count = pick(a.count, &cfg.count, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(pick(a.seed, &cfg.seed, 1));
    let inputs = random_pairs(&mut rng, count, fmt)?;
    let out = simulate_stream(&pipeline, &t, &policy, &inputs)?;
    write_or_print(a.output.as_deref(), &outputs_to_csv(&out))?;
    let stages: Vec<String> = pipeline.stages().iter().map(|s| s.name()).collect();
    eprintln!(
        "depth {}, II {}, stages: {}",
        pipeline.depth(),
        pipeline.initiation_interval(),
        stages.join(" | ")
    );
    for (i, (o, (a_in, b_in))) in out.iter().zip(&inputs).enumerate() {
        if o.cycle != (pipeline.depth() + i) as u64 {
            return Err(Failure::Verification(format!("output {i} appeared at cycle {}", o.cycle)));
        }
        if (o.x, o.y) != butterfly_ds(a_in, b_in, &t, &policy)? {
            return Err(Failure::Verification(format!("output {i} differs from the butterfly model")));
        }
    }
    Ok(())
}

fn cmd_hdlgen(a: HdlArgs, cfg: &Config) -> Outcome {
    let (fmt, params) = resolve_format(&a.fmt, cfg, SliceAlgorithm::A1)?;
    let policy = resolve_requant(&a.requant, cfg, fmt)?;
    let count = pick(a.count, &cfg.count, 1000);
    if count == 0 {
        return Err(anyhow!("at least one golden vector is needed").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(pick(a.seed, &cfg.seed, 1));
    let (rtl, tb, check) = match a.kind {
        Kind::Butterfly => {
            let (wr, wi) = resolve_twiddle(&a.twiddle, cfg, fmt)?;
            let t = TwiddleTables::new(wr, wi, params)?;
            let rtl = emit_butterfly(&t, fmt, &policy, &a.name)?;
            let ports = TestbenchPorts::butterfly(&t, &policy);
            let vectors = butterfly_vectors(&t, &policy, &random_pairs(&mut rng, count, fmt)?)?;
            let tb = emit_testbench(&a.name, &vectors, &ports)?;
            let golden = &tb.file(&golden_file_name(&a.name)).expect("testbench has golden file").contents;
            let check = check_golden(golden, &ports, butterfly_model(&t, fmt, &policy))?;
            (rtl, tb, check)
        }
        Kind::Scml => {
            let c = table_constant(a.constant, &a.twiddle, false, cfg, fmt)?;
            let t = ScmlTable::build(c, params)?;
            let rtl = emit_scml(&t, &a.name)?;
            let ports = TestbenchPorts::scml(&t);
            let xs = (0..count)
                .map(|_| FxWord::new(rng.random_range(fmt.min_raw()..=fmt.max_raw()), fmt))
                .collect::<Result<Vec<_>, _>>()?;
            let tb = emit_testbench(&a.name, &scml_vectors(&t, &xs)?, &ports)?;
            let golden = &tb.file(&golden_file_name(&a.name)).expect("testbench has golden file").contents;
            let check = check_golden(golden, &ports, scml_model(&t))?;
            (rtl, tb, check)
        }
    };
    for em in [&rtl, &tb] {
        for path in em
            .write_to(&a.outdir)
            .with_context(|| format!("writing to {}", a.outdir.display()))?
        {
            out(&format!("{}\n", path.display()));
        }
    }
    if check.mismatches.is_empty() {
        eprintln!("golden vectors: {} checked against the model, 0 mismatches", check.vectors);
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} of {} golden vectors disagree with the model",
            check.mismatches.len(),
            check.vectors
        )))
    }
}

#[derive(Serialize)]
struct BothReports {
    digit_slicing: CostReport,
    conventional: CostReport,
}

fn cmd_cost(a: CostArgs, cfg: &Config) -> Outcome {
    let (fmt, params) = resolve_format(&a.fmt, cfg, SliceAlgorithm::A1)?;
    let n = pick(a.constants, &cfg.constants, 1);
    let weights = cfg.weights.unwrap_or_default();
    let report = |d| estimate_cost_with(d, fmt, params, n, &weights);
    let json = match a.design {
        DesignArg::Ds => report(Design::DigitSlicing).to_json(),
        DesignArg::Conventional => report(Design::Conventional).to_json(),
        DesignArg::Both => {
            let both = BothReports {
                digit_slicing: report(Design::DigitSlicing),
                conventional: report(Design::Conventional),
            };
            serde_json::to_string_pretty(&both).context("serializing cost report")?
        }
    };
    out(&format!("{json}\n"));
    Ok(())
}
