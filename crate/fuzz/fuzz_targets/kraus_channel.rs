#![no_main]

use libfuzzer_sys::fuzz_target;
use qmonogamy::{ComplexMatrix, DensityMatrix, KrausChannel, C64};

// Header bytes: input dim, output dim, operator count; then f64 real/imaginary pairs.
fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let d_in = 2 + (data[0] % 2) as usize;
    let d_out = 2 + (data[1] % 2) as usize;
    let count = 1 + (data[2] % 4) as usize;
    let words: Vec<f64> = data[3..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let per_op = 2 * d_in * d_out;
    if words.len() < per_op * count {
        return;
    }
    let mut ops = Vec::new();
    for k in 0..count {
        let w = &words[k * per_op..(k + 1) * per_op];
        let entries = w.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
        match ComplexMatrix::new(d_out, d_in, entries) {
            Ok(m) => ops.push(m),
            Err(_) => return,
        }
    }
    if let Ok(ch) = KrausChannel::new(ops) {
        let out = ch
            .apply(&DensityMatrix::maximally_mixed(d_in).unwrap())
            .unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-8);
    }
});
