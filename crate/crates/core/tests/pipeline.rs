mod common;

use common::*;
use dsfft::butterfly::butterfly_ds;
use dsfft::fft::twiddle;
use dsfft::pipeline::{
    estimate_cost, outputs_to_csv, simulate_stream, simulate_stream_traced, Design, PipelineConfig,
    Simulator, Stage, StageOp,
};
use dsfft::{ComplexFx, QFormat, RequantPolicy, SliceAlgorithm, SliceParams, TwiddleTables};

fn setup(k: usize, n: usize, params: SliceParams) -> (TwiddleTables, RequantPolicy) {
    let fmt = QFormat::q15();
    let (wr, wi) = twiddle(k, n, fmt).unwrap();
    (TwiddleTables::new(wr, wi, params).unwrap(), RequantPolicy::for_format(fmt))
}

fn stream(len: usize, seed: u64) -> Vec<(ComplexFx, ComplexFx)> {
    let mut rng = rng(seed);
    let fmt = QFormat::q15();
    (0..len)
        .map(|_| (random_complex(&mut rng, fmt), random_complex(&mut rng, fmt)))
        .collect()
}

#[test]
fn standard_depth_follows_tree_height() {
    for (p, b, depth) in [(4, 4, 5), (2, 8, 6), (8, 2, 4), (3, 5, 6), (4, 3, 5)] {
        let cfg = PipelineConfig::standard(SliceParams::new(p, b, SliceAlgorithm::A1).unwrap());
        assert_eq!(cfg.depth(), depth);
        assert_eq!(cfg.initiation_interval(), 1);
    }
    let cfg = PipelineConfig::standard(SliceParams::default_a1());
    let names: Vec<String> = cfg.stages().iter().map(Stage::name).collect();
    assert_eq!(
        names,
        ["slice+rom_lookup", "partial_add(1)", "partial_add(2)", "butterfly_addsub", "requant"]
    );
}

#[test]
fn outputs_arrive_in_order_one_per_cycle() {
    let params = SliceParams::default_a1();
    let (t, q) = setup(5, 64, params);
    let inputs = stream(300, 61);
    for depth in 1..=10 {
        let cfg = PipelineConfig::with_depth(params, depth).unwrap();
        let out = simulate_stream(&cfg, &t, &q, &inputs).unwrap();
        assert_eq!(out.len(), inputs.len());
        for (i, (o, (a, b))) in out.iter().zip(&inputs).enumerate() {
            assert_eq!(o.index, i);
            assert_eq!(o.cycle, (depth + i) as u64);
            assert_eq!((o.x, o.y), butterfly_ds(a, b, &t, &q).unwrap());
        }
    }
}

#[test]
fn bubbles_delay_but_do_not_reorder() {
    let params = SliceParams::default_a1();
    let (t, q) = setup(1, 8, params);
    let cfg = PipelineConfig::standard(params);
    let mut sim = Simulator::new(&cfg, &t, &q).unwrap();
    let inputs = stream(20, 62);
    let mut fed = Vec::new();
    let mut seen = Vec::new();
    for cycle in 0..70u64 {
        let input = if cycle % 3 == 1 && fed.len() < inputs.len() {
            fed.push(cycle);
            Some(inputs[fed.len() - 1])
        } else {
            None
        };
        if let Some((o, _)) = sim.tick(input).unwrap() {
            seen.push(o);
        }
    }
    assert_eq!(seen.len(), inputs.len());
    for (i, o) in seen.iter().enumerate() {
        assert_eq!(o.cycle, fed[i] + cfg.depth() as u64);
        let (a, b) = inputs[i];
        assert_eq!((o.x, o.y), butterfly_ds(&a, &b, &t, &q).unwrap());
    }
    assert_eq!(sim.in_flight(), 0);
}

#[test]
fn traces_match_staged_products() {
    for (p, b) in [(4, 4), (2, 8), (3, 5)] {
        let params = SliceParams::new(p, b, SliceAlgorithm::A1).unwrap();
        let w = params.word_width() as u32;
        let fmt = q(w, w - 1);
        let (wr, wi) = twiddle(3, 32, fmt).unwrap();
        let t = TwiddleTables::new(wr, wi, params).unwrap();
        let pol = RequantPolicy::for_format(fmt);
        let mut rng = rng(63);
        let inputs: Vec<_> = (0..200)
            .map(|_| (random_complex(&mut rng, fmt), random_complex(&mut rng, fmt)))
            .collect();
        for depth in [1, 3, PipelineConfig::standard(params).depth()] {
            let cfg = PipelineConfig::with_depth(params, depth).unwrap();
            for ((_, trace), (_, bw)) in simulate_stream_traced(&cfg, &t, &pol, &inputs).unwrap().iter().zip(&inputs) {
                let pairs = [
                    (t.wr_table(), bw.re()),
                    (t.wi_table(), bw.im()),
                    (t.wr_table(), bw.im()),
                    (t.wi_table(), bw.re()),
                ];
                for (j, (table, x)) in pairs.iter().enumerate() {
                    let (_, staged) = table.mul_staged(x).unwrap();
                    assert_eq!(trace.rom_outputs[j], staged.rom_outputs);
                    assert_eq!(trace.levels[j], staged.levels);
                }
            }
        }
    }
}

#[test]
fn bad_configurations_are_rejected() {
    let params = SliceParams::default_a1();
    assert!(PipelineConfig::with_depth(params, 0).is_err());
    let swapped = vec![
        Stage { ops: vec![StageOp::SliceRomLookup] },
        Stage { ops: vec![StageOp::PartialAdd(2), StageOp::PartialAdd(1)] },
        Stage { ops: vec![StageOp::ButterflyAddSub, StageOp::Requant] },
    ];
    assert!(PipelineConfig::from_stages(params, swapped).is_err());
    let ok = vec![
        Stage { ops: vec![] },
        Stage { ops: vec![StageOp::SliceRomLookup, StageOp::PartialAdd(1)] },
        Stage { ops: vec![StageOp::PartialAdd(2), StageOp::ButterflyAddSub, StageOp::Requant] },
    ];
    assert_eq!(PipelineConfig::from_stages(params, ok).unwrap().depth(), 3);
    let other = PipelineConfig::standard(SliceParams::new(2, 8, SliceAlgorithm::A1).unwrap());
    let (t, q) = setup(1, 8, params);
    assert!(Simulator::new(&other, &t, &q).is_err());
    assert!(simulate_stream(&PipelineConfig::standard(params), &t, &q, &[]).is_err());
}

#[test]
fn csv_has_header_and_one_row_per_output() {
    let params = SliceParams::default_a1();
    let (t, q) = setup(0, 2, params);
    let out = simulate_stream(&PipelineConfig::standard(params), &t, &q, &stream(7, 64)).unwrap();
    let csv = outputs_to_csv(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "cycle,xr,xi,yr,yi");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("5,"));
}

#[test]
fn cost_model_closed_forms() {
    let fmt = QFormat::q15();
    for (p, b) in [(4, 4), (2, 8), (8, 2)] {
        let s = SliceParams::new(p, b, SliceAlgorithm::A1).unwrap();
        let ds = estimate_cost(Design::DigitSlicing, fmt, s, 3);
        assert_eq!(ds.rom_bits, 3 * 2 * b as u64 * (1 << p) * (16 + p as u64));
        assert_eq!(ds.multiplier_count, 0);
        assert_eq!(ds.pipeline_depth, PipelineConfig::standard(s).depth() as u64);
        assert_eq!(ds.register_bits, ds.pipeline_depth * 4 * 32);
        let conv = estimate_cost(Design::Conventional, fmt, s, 3);
        assert_eq!((conv.rom_bits, conv.multiplier_count, conv.adder_count), (0, 4, 6));
        assert!(ds.register_bits > conv.register_bits);
        assert_eq!(ds, estimate_cost(Design::DigitSlicing, fmt, s, 3));
    }
    assert_eq!(estimate_cost(Design::DigitSlicing, fmt, SliceParams::default_a1(), 1).rom_bits, 2560);
}
