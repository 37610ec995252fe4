#![no_main]

use libfuzzer_sys::fuzz_target;
use qmonogamy::{classical_mi, markov_deviation, shannon_entropy, JointPMF};

// Up to four alphabet sizes from the first byte, then one f64 per outcome.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let vars = 1 + (sel % 4) as usize;
    let dims: Vec<usize> = (0..vars)
        .map(|i| 1 + ((sel >> (2 + i)) & 1) as usize + 1)
        .collect();
    let total: usize = dims.iter().product();
    let probs: Vec<f64> = rest
        .chunks_exact(8)
        .take(total)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if probs.len() < total {
        return;
    }
    let Ok(p) = JointPMF::new(dims, probs) else {
        return;
    };
    let all: Vec<usize> = (0..vars).collect();
    let h = shannon_entropy(&p, &all).unwrap();
    assert!(h.is_finite() && h >= -1e-12);
    if vars >= 2 {
        assert!(classical_mi(&p, &[0], &[1]).unwrap() >= -1e-9);
    }
    assert!(markov_deviation(&p).is_finite());
});
