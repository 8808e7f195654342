mod common;

use common::*;
use dsfft::digit_slicing::{slice, slice_a1, slice_a2, unslice_a1, unslice_a2};
use dsfft::{FxWord, QFormat, SliceAlgorithm, SliceParams, SlicedWord};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

/// Two's-complement bit string of `raw` at `width`, MSB first.
fn bits(raw: i128, width: u32) -> Vec<u8> {
    (0..width).rev().map(|i| ((raw >> i) & 1) as u8).collect()
}

fn unsigned(bits: &[u8]) -> i64 {
    bits.iter().fold(0, |acc, &b| acc * 2 + b as i64)
}

fn signed(bits: &[u8]) -> i64 {
    let u = unsigned(bits);
    if bits[0] == 1 { u - (1 << bits.len()) } else { u }
}

/// Blocks read directly off the bit string.
fn oracle_blocks(raw: i128, params: SliceParams) -> Vec<i64> {
    let (p, b) = (params.p() as usize, params.b() as usize);
    let s = bits(raw, params.word_width() as u32);
    match params.algorithm() {
        SliceAlgorithm::A1 => (0..b)
            .map(|k| {
                let chunk = &s[s.len() - p * (k + 1)..s.len() - p * k];
                if k + 1 == b { signed(chunk) } else { unsigned(chunk) }
            })
            .collect(),
        SliceAlgorithm::A2 => std::iter::once(-(s[0] as i64))
            .chain((1..b).map(|k| unsigned(&s[1 + p * (k - 1)..1 + p * k])))
            .collect(),
    }
}

fn reconstruct(blocks: &[i64], sw: &SlicedWord) -> BigInt {
    blocks
        .iter()
        .enumerate()
        .map(|(k, &v)| BigInt::from(v) << sw.weight_exponent(k))
        .sum()
}

fn exhaustive(fmt: QFormat, params: SliceParams) {
    for raw in fmt.min_raw()..=fmt.max_raw() {
        let x = FxWord::new(raw, fmt).unwrap();
        let s = slice(&x, params).unwrap();
        assert_eq!(s.blocks(), oracle_blocks(raw, params).as_slice(), "raw {raw}");
        assert_eq!(reconstruct(s.blocks(), &s), big(raw));
        assert_eq!(s.unslice().unwrap(), x);
        for (k, &v) in s.blocks().iter().enumerate() {
            let (lo, hi) = params.block_range(k);
            assert!(lo <= v && v <= hi);
        }
    }
}

#[test]
fn a1_q8_blocks_match_bitfields() {
    exhaustive(q(8, 7), SliceParams::new(4, 2, SliceAlgorithm::A1).unwrap());
    exhaustive(q(8, 7), SliceParams::new(2, 4, SliceAlgorithm::A1).unwrap());
}

#[test]
fn a1_q16_roundtrip_is_exhaustive_identity() {
    exhaustive(QFormat::q15(), SliceParams::default_a1());
}

#[test]
fn a2_q9_roundtrip_is_exhaustive_identity() {
    exhaustive(q(9, 8), SliceParams::new(4, 3, SliceAlgorithm::A2).unwrap());
    exhaustive(q(13, 12), SliceParams::new(3, 5, SliceAlgorithm::A2).unwrap());
}

#[test]
fn worked_examples() {
    let a1 = SliceParams::new(4, 2, SliceAlgorithm::A1).unwrap();
    let x = FxWord::from_real(-0.65625, q(8, 7), Default::default()).unwrap();
    let s = slice_a1(&x, a1).unwrap();
    assert_eq!(s.blocks(), &[12, -6]);
    assert_eq!(unslice_a1(&s).unwrap().raw(), -84);

    let a2 = SliceParams::new(4, 3, SliceAlgorithm::A2).unwrap();
    let y = FxWord::from_real(-0.328125, q(9, 8), Default::default()).unwrap();
    let s = slice_a2(&y, a2).unwrap();
    assert_eq!(s.blocks(), &[-1, 10, 12]);
    assert_eq!(unslice_a2(&s).unwrap(), y);
    assert_eq!(unslice_a2(&s).unwrap().to_real(), -0.328125);
}

#[test]
fn random_wide_words_roundtrip() {
    let mut rng = rng(21);
    for _ in 0..20_000 {
        let alg = if rng.random_bool(0.5) { SliceAlgorithm::A1 } else { SliceAlgorithm::A2 };
        let p = rng.random_range(2..=12);
        let b = rng.random_range(2..=(120 / p).max(2));
        let params = SliceParams::new(p, b, alg).unwrap();
        let w = params.word_width() as u32;
        let fmt = q(w, rng.random_range(0..w));
        let x = random_word(&mut rng, fmt);
        let s = slice(&x, params).unwrap();
        assert_eq!(s.blocks(), oracle_blocks(x.raw(), params).as_slice());
        assert_eq!(s.unslice().unwrap(), x);
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let a1 = SliceParams::default_a1();
    let x = FxWord::new(3, q(12, 11)).unwrap();
    assert!(slice(&x, a1).is_err());
    assert!(SlicedWord::new(vec![0, 0, 0], a1, QFormat::q15()).is_err());
    assert!(SlicedWord::new(vec![16, 0, 0, 0], a1, QFormat::q15()).is_err());
    assert!(SlicedWord::new(vec![0, 0, 0, 8], a1, QFormat::q15()).is_err());
    assert!(SlicedWord::new(vec![0, 0, 0, -8], a1, QFormat::q15()).is_ok());
    let a2 = SliceParams::new(4, 3, SliceAlgorithm::A2).unwrap();
    assert!(SlicedWord::new(vec![1, 0, 0], a2, q(9, 8)).is_err());
    assert!(slice_a2(&FxWord::new(0, q(9, 8)).unwrap(), a1).is_err());
}

proptest! {
    #[test]
    fn a1_blocks_stay_in_range_and_reconstruct(raw in -(1i128 << 63)..(1i128 << 63), p in 2u32..=16) {
        let b = 64 / p;
        let params = SliceParams::new(p, b, SliceAlgorithm::A1).unwrap();
        let w = params.word_width() as u32;
        let fmt = q(w, w - 1);
        let raw = raw.clamp(fmt.min_raw(), fmt.max_raw());
        let s = slice(&FxWord::new(raw, fmt).unwrap(), params).unwrap();
        for (k, &v) in s.blocks().iter().enumerate() {
            let (lo, hi) = params.block_range(k);
            prop_assert!(lo <= v && v <= hi);
        }
        prop_assert_eq!(reconstruct(s.blocks(), &s), big(raw));
    }

    #[test]
    fn slicing_is_linear_modulo_word(a in any::<i16>(), b in any::<i16>()) {
        let params = SliceParams::default_a1();
        let fmt = QFormat::q15();
        let sa = slice(&FxWord::new(a as i128, fmt).unwrap(), params).unwrap();
        let sb = slice(&FxWord::new(b as i128, fmt).unwrap(), params).unwrap();
        let sum: BigInt = reconstruct(sa.blocks(), &sa) + reconstruct(sb.blocks(), &sb);
        prop_assert_eq!(sum, big(a as i128 + b as i128));
    }
}
