//! Cycle-level model of the pipelined digit-slicing butterfly and a
//! closed-form structural cost model.
//!
//! The datapath is a fixed sequence of operations: slice the `B` inputs and
//! read the ROMs, reduce the four partial-product trees level by level, form
//! `A ± WB`, and requantize. A [`PipelineConfig`] cuts that sequence into
//! register stages. One new input pair is accepted every cycle.

use serde::{Deserialize, Serialize};

use crate::butterfly::{combine, ComplexFx, PartialProducts, RequantPolicy, TwiddleTables};
use crate::digit_slicing::SliceParams;
use crate::error::{Error, Result};
use crate::fixedpoint::{FxWord, QFormat};
use crate::scml::{adder_tree_levels, combine_level, AdderLevel, ScmlTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StageOp {
    SliceRomLookup,
    /// Adder-tree level, starting at 1.
    PartialAdd(u32),
    ButterflyAddSub,
    Requant,
}

/// One register stage and the combinational operations in front of it.
/// A stage with no operations is a plain retiming register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub ops: Vec<StageOp>,
}

impl Stage {
    pub fn name(&self) -> String {
        if self.ops.is_empty() {
            return "retime".into();
        }
        self.ops
            .iter()
            .map(|op| match op {
                StageOp::SliceRomLookup => "slice+rom_lookup".to_string(),
                StageOp::PartialAdd(l) => format!("partial_add({l})"),
                StageOp::ButterflyAddSub => "butterfly_addsub".to_string(),
                StageOp::Requant => "requant".to_string(),
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    stages: Vec<Stage>,
    levels: u32,
}

/// Datapath operations in order for `b` blocks.
pub fn datapath_ops(b: u32) -> Vec<StageOp> {
    let mut ops = vec![StageOp::SliceRomLookup];
    ops.extend((1..=adder_tree_levels(b)).map(StageOp::PartialAdd));
    ops.push(StageOp::ButterflyAddSub);
    ops.push(StageOp::Requant);
    ops
}

impl PipelineConfig {
    /// One register per operation: `1 + ceil(log2 b) + 1 + 1` stages.
    pub fn standard(slice: SliceParams) -> Self {
        Self {
            stages: datapath_ops(slice.b())
                .into_iter()
                .map(|op| Stage { ops: vec![op] })
                .collect(),
            levels: adder_tree_levels(slice.b()),
        }
    }

    /// Spreads the operations over `depth` stages. Shallower pipelines fuse
    /// neighbouring operations (earlier stages take the extra ones); deeper
    /// ones append retiming registers at the output.
    pub fn with_depth(slice: SliceParams, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidPipeline("depth must be at least 1".into()));
        }
        let ops = datapath_ops(slice.b());
        let mut stages = Vec::with_capacity(depth);
        if depth >= ops.len() {
            stages.extend(ops.into_iter().map(|op| Stage { ops: vec![op] }));
            stages.resize(depth, Stage { ops: Vec::new() });
        } else {
            let (per, extra) = (ops.len() / depth, ops.len() % depth);
            let mut it = ops.into_iter();
            for i in 0..depth {
                let take = per + usize::from(i < extra);
                stages.push(Stage {
                    ops: it.by_ref().take(take).collect(),
                });
            }
        }
        Self::from_stages(slice, stages)
    }

    /// Checks that the stages carry exactly the datapath operations, in order.
    pub fn from_stages(slice: SliceParams, stages: Vec<Stage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidPipeline("no stages".into()));
        }
        let flat: Vec<StageOp> = stages.iter().flat_map(|s| s.ops.iter().copied()).collect();
        if flat != datapath_ops(slice.b()) {
            return Err(Error::InvalidPipeline(format!(
                "operations {flat:?} do not match the datapath for b = {}",
                slice.b()
            )));
        }
        Ok(Self {
            stages,
            levels: adder_tree_levels(slice.b()),
        })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Cycles between accepted inputs.
    pub const fn initiation_interval(&self) -> usize {
        1
    }
}

/// Per-product adder-tree record of one butterfly evaluation, in the order
/// `Wr·Br, Wi·Bi, Wr·Bi, Wi·Br`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProductTraces {
    pub rom_outputs: [Vec<i128>; 4],
    pub levels: [Vec<AdderLevel>; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamOutput {
    pub cycle: u64,
    pub index: usize,
    pub x: ComplexFx,
    pub y: ComplexFx,
}

#[derive(Debug, Clone)]
struct Token {
    index: usize,
    a: ComplexFx,
    b: ComplexFx,
    partials: Option<[Vec<i128>; 4]>,
    full: Option<(ComplexFx, ComplexFx)>,
    out: Option<(ComplexFx, ComplexFx)>,
    trace: ProductTraces,
}

/// Register-level simulator. Each [`Simulator::tick`] is one clock cycle.
pub struct Simulator<'a> {
    cfg: &'a PipelineConfig,
    tables: &'a TwiddleTables,
    q: &'a RequantPolicy,
    regs: Vec<Option<Token>>,
    cycle: u64,
    accepted: usize,
    tracing: bool,
}

impl<'a> Simulator<'a> {
    pub fn new(cfg: &'a PipelineConfig, tables: &'a TwiddleTables, q: &'a RequantPolicy) -> Result<Self> {
        if adder_tree_levels(tables.params().b()) != cfg.levels {
            return Err(Error::InvalidPipeline(
                "configuration was built for a different block count".into(),
            ));
        }
        Ok(Self {
            cfg,
            tables,
            q,
            regs: vec![None; cfg.depth()],
            cycle: 0,
            accepted: 0,
            tracing: true,
        })
    }

    /// Turns recording of ROM outputs and adder levels on or off; traces of
    /// untraced tokens come back empty.
    pub fn with_tracing(mut self, on: bool) -> Self {
        self.tracing = on;
        self
    }

    pub const fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn in_flight(&self) -> usize {
        self.regs.iter().filter(|r| r.is_some()).count()
    }

    /// Advances one cycle: the last register is observed as this cycle's
    /// output, every register captures its predecessor through that stage's
    /// logic, and the first captures `input`.
    pub fn tick(
        &mut self,
        input: Option<(ComplexFx, ComplexFx)>,
    ) -> Result<Option<(StreamOutput, ProductTraces)>> {
        let depth = self.regs.len();
        let emitted = match self.regs[depth - 1].take() {
            Some(tok) => {
                let (x, y) = tok
                    .out
                    .ok_or_else(|| Error::InvalidPipeline("token left the pipeline unfinished".into()))?;
                Some((
                    StreamOutput {
                        cycle: self.cycle,
                        index: tok.index,
                        x,
                        y,
                    },
                    tok.trace,
                ))
            }
            None => None,
        };
        for i in (1..depth).rev() {
            self.regs[i] = match self.regs[i - 1].take() {
                Some(tok) => Some(self.run_stage(i, tok)?),
                None => None,
            };
        }
        self.regs[0] = match input {
            Some((a, b)) => {
                let tok = Token {
                    index: self.accepted,
                    a,
                    b,
                    partials: None,
                    full: None,
                    out: None,
                    trace: ProductTraces::default(),
                };
                self.accepted += 1;
                Some(self.run_stage(0, tok)?)
            }
            None => None,
        };
        self.cycle += 1;
        Ok(emitted)
    }

    fn run_stage(&self, stage: usize, mut tok: Token) -> Result<Token> {
        for op in &self.cfg.stages[stage].ops {
            match *op {
                StageOp::SliceRomLookup => {
                    let (wr, wi) = (self.tables.wr_table(), self.tables.wi_table());
                    let lookups: [(&ScmlTable, FxWord); 4] = [
                        (wr, tok.b.re()),
                        (wi, tok.b.im()),
                        (wr, tok.b.im()),
                        (wi, tok.b.re()),
                    ];
                    let mut roms: [Vec<i128>; 4] = Default::default();
                    for (slot, (t, x)) in roms.iter_mut().zip(lookups) {
                        *slot = t.lookup(&x)?;
                    }
                    if self.tracing {
                        tok.trace.rom_outputs = roms.clone();
                    }
                    tok.partials = Some(roms);
                }
                StageOp::PartialAdd(level) => {
                    let shift = self.tables.params().p() << (level - 1);
                    let partials = tok.partials.as_mut().expect("ROM stage precedes adder levels");
                    for (slot, trace) in partials.iter_mut().zip(tok.trace.levels.iter_mut()) {
                        let combined = combine_level(slot, shift);
                        *slot = combined.partials.clone();
                        if self.tracing {
                            trace.push(combined);
                        }
                    }
                }
                StageOp::ButterflyAddSub => {
                    let partials = tok.partials.as_ref().expect("adder tree precedes add/sub");
                    let x_frac = tok.b.fmt().frac();
                    let word = |t: &ScmlTable, v: &[i128]| -> Result<FxWord> {
                        FxWord::new(v[0], t.product_format(x_frac)?)
                    };
                    let (wr, wi) = (self.tables.wr_table(), self.tables.wi_table());
                    let products = PartialProducts {
                        rr: word(wr, &partials[0])?,
                        ii: word(wi, &partials[1])?,
                        ri: word(wr, &partials[2])?,
                        ir: word(wi, &partials[3])?,
                    };
                    if tok.a.fmt() != tok.b.fmt() {
                        return Err(Error::FormatMismatch {
                            expected: tok.a.fmt(),
                            found: tok.b.fmt(),
                        });
                    }
                    tok.full = Some(combine(&tok.a, &products)?);
                }
                StageOp::Requant => {
                    let (x, y) = tok.full.expect("add/sub precedes requant");
                    tok.out = Some((self.q.apply_complex(&x)?, self.q.apply_complex(&y)?));
                }
            }
        }
        Ok(tok)
    }
}

/// Streams `inputs` through the pipeline, one per cycle starting at cycle 0,
/// and returns every output stamped with the cycle it appears.
pub fn simulate_stream(
    cfg: &PipelineConfig,
    t: &TwiddleTables,
    q: &RequantPolicy,
    inputs: &[(ComplexFx, ComplexFx)],
) -> Result<Vec<StreamOutput>> {
    Ok(run_stream(Simulator::new(cfg, t, q)?.with_tracing(false), inputs)?
        .into_iter()
        .map(|(o, _)| o)
        .collect())
}

pub fn simulate_stream_traced(
    cfg: &PipelineConfig,
    t: &TwiddleTables,
    q: &RequantPolicy,
    inputs: &[(ComplexFx, ComplexFx)],
) -> Result<Vec<(StreamOutput, ProductTraces)>> {
    run_stream(Simulator::new(cfg, t, q)?, inputs)
}

fn run_stream(
    mut sim: Simulator<'_>,
    inputs: &[(ComplexFx, ComplexFx)],
) -> Result<Vec<(StreamOutput, ProductTraces)>> {
    if inputs.is_empty() {
        return Err(Error::Empty("input stream"));
    }
    let mut outputs = Vec::with_capacity(inputs.len());
    let mut feed = inputs.iter().copied();
    while outputs.len() < inputs.len() {
        if let Some(out) = sim.tick(feed.next())? {
            outputs.push(out);
        }
    }
    Ok(outputs)
}

/// `cycle,xr,xi,yr,yi` with raw decimal values, header first.
pub fn outputs_to_csv(outputs: &[StreamOutput]) -> String {
    let mut s = String::from("cycle,xr,xi,yr,yi\n");
    for o in outputs {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            o.cycle,
            o.x.re().raw(),
            o.x.im().raw(),
            o.y.re().raw(),
            o.y.im().raw()
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Design {
    Conventional,
    DigitSlicing,
}

/// Weights of the gate proxy. These are a transparent model, not a
/// calibration against any vendor's gate counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub rom_bit: u64,
    pub adder_bit: u64,
    pub register_bit: u64,
    /// Per square bit of a `width × width` multiplier.
    pub multiplier_bit2: u64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            rom_bit: 1,
            adder_bit: 6,
            register_bit: 4,
            multiplier_bit2: 6,
        }
    }
}

/// Structural cost of one butterfly. Serializes with keys in field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub rom_bits: u64,
    pub adder_count: u64,
    pub multiplier_count: u64,
    pub register_bits: u64,
    pub pipeline_depth: u64,
    pub gate_proxy: u64,
}

impl CostReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain integers serialize")
    }
}

pub fn estimate_cost(design: Design, fmt: QFormat, slice: SliceParams, n_constants: u64) -> CostReport {
    estimate_cost_with(design, fmt, slice, n_constants, &CostWeights::default())
}

/// Closed-form counts for one butterfly.
///
/// * Digit slicing: two ROM banks per twiddle (`n_constants` twiddles), each
///   `b · 2^p` words of `width + p` bits; `4·(b−1)` tree adders plus 6 for
///   the complex combine; one register stage per datapath operation.
/// * Conventional: four `width × width` multipliers, 2 + 4 adders, no ROM,
///   a single output register stage.
///
/// Every register stage holds four real words at the product width, and
/// every adder is costed at the product width.
pub fn estimate_cost_with(
    design: Design,
    fmt: QFormat,
    slice: SliceParams,
    n_constants: u64,
    w: &CostWeights,
) -> CostReport {
    let width = fmt.width() as u64;
    let product_width = 2 * width;
    let (rom_bits, adder_count, multiplier_count, depth) = match design {
        Design::DigitSlicing => {
            let (p, b) = (slice.p() as u64, slice.b() as u64);
            let entry_width = width + p;
            let per_table = b * (1u64 << p) * entry_width;
            let depth = datapath_ops(slice.b()).len() as u64;
            (n_constants * 2 * per_table, 4 * (b - 1) + 6, 0, depth)
        }
        Design::Conventional => (0, 2 + 4, 4, 1),
    };
    let register_bits = depth * 4 * product_width;
    let gate_proxy = rom_bits * w.rom_bit
        + adder_count * product_width * w.adder_bit
        + register_bits * w.register_bit
        + multiplier_count * width * width * w.multiplier_bit2;
    CostReport {
        rom_bits,
        adder_count,
        multiplier_count,
        register_bits,
        pipeline_depth: depth,
        gate_proxy,
    }
}
