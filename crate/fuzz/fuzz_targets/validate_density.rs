#![no_main]

use libfuzzer_sys::fuzz_target;
use qmonogamy::{validate_density, ComplexMatrix, DimSignature, C64};

// First byte picks the dimension (2..=4); the rest are little-endian f64 pairs.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let d = 2 + (sel % 3) as usize;
    let words: Vec<f64> = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if words.len() < 2 * d * d {
        return;
    }
    let entries = words
        .chunks_exact(2)
        .take(d * d)
        .map(|p| C64::new(p[0], p[1]))
        .collect();
    let Ok(m) = ComplexMatrix::new(d, d, entries) else {
        return;
    };
    if let Ok(rho) = validate_density(m, DimSignature::single(d).unwrap()) {
        let tr = rho.matrix().trace();
        assert!((tr.re - 1.0).abs() < 1e-9 && tr.im.abs() < 1e-9);
        assert!(rho.matrix().hermitian_deviation() == 0.0);
        assert!(rho.eigenvalues().iter().all(|l| *l > -1e-9));
    }
});
