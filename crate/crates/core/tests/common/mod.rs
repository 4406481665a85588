//! Seeded random inputs shared by the property and acceptance suites.
#![allow(dead_code)]

pub mod laws;
pub mod oracle;

use qmanifold::algebra::{int, monomials, rat};
use qmanifold::{BerezinVolume, Chart, GradedElem, Parity, VectorField};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// A chart of superdimension at most `max_even|max_odd`, at least one coordinate.
pub fn chart(rng: &mut ChaCha8Rng, max_even: usize, max_odd: usize) -> Chart {
    loop {
        let p = rng.gen_range(0..=max_even);
        let q = rng.gen_range(0..=max_odd);
        if p + q == 0 {
            continue;
        }
        let even: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
        let odd: Vec<String> = (1..=q).map(|i| format!("t{i}")).collect();
        let e: Vec<&str> = even.iter().map(|s| s.as_str()).collect();
        let o: Vec<&str> = odd.iter().map(|s| s.as_str()).collect();
        return Chart::from_names(&e, &o, 6).unwrap();
    }
}

/// A homogeneous element with up to `terms` monomials of even degree at most `max_even`.
pub fn elem(rng: &mut ChaCha8Rng, chart: &Chart, p: Parity, max_even: u32, terms: usize) -> GradedElem {
    let pool: Vec<Vec<u8>> = monomials(chart.dim(), chart.odd_mask(), max_even, max_even + chart.dim() as u32)
        .into_iter()
        .filter(|m| (m.odd_count() % 2 == 1) == p.is_odd())
        .map(|m| m.exps().to_vec())
        .collect();
    let mut picks = Vec::new();
    for _ in 0..terms {
        if let Some(m) = pool.choose(rng).cloned() {
            let den = rng.gen_range(1..=3);
            picks.push((m, rat(rng.gen_range(-4..=4), den)));
        }
    }
    GradedElem::from_terms(chart, picks)
}

/// An element with zero constant term.
pub fn reduced(rng: &mut ChaCha8Rng, chart: &Chart, p: Parity, max_even: u32, terms: usize) -> GradedElem {
    let e = elem(rng, chart, p, max_even, terms);
    &e - &GradedElem::constant(chart, e.constant_term())
}

pub fn field(rng: &mut ChaCha8Rng, chart: &Chart, p: Parity, max_even: u32) -> VectorField {
    let comps = (0..chart.dim())
        .map(|a| {
            let want = p + chart.parity(a);
            elem(rng, chart, want, max_even, 2)
        })
        .collect();
    VectorField::new(chart, p, comps).unwrap()
}

pub fn volume(rng: &mut ChaCha8Rng, chart: &Chart) -> BerezinVolume {
    let scale = int(rng.gen_range(1..=5));
    BerezinVolume::new(chart, scale, reduced(rng, chart, Parity::Even, 2, 3)).unwrap()
}
