//! Entropic functionals in bits.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::state::{purify, DensityMatrix, Purification};
use crate::tensor::{hermitian_eigenvalues, ComplexMatrix, DimSignature};

/// An information quantity in bits (log base 2).
pub type Bits = f64;

/// Eigenvalues below this contribute nothing to an entropy.
pub const EIGEN_CLIP: f64 = 1e-12;
/// Shared tolerance for "≥ 0" assertions on entropic quantities.
pub const EPSILON: f64 = 1e-9;

/// `-sum p log2 p` over a spectrum, skipping entries below [`EIGEN_CLIP`].
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Bits {
    -eigenvalues
        .iter()
        .filter(|&&l| l > EIGEN_CLIP)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// Von Neumann entropy of a raw Hermitian matrix.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<Bits> {
    Ok(entropy_of_spectrum(&hermitian_eigenvalues(m)?))
}

/// Von Neumann entropy `-Tr rho log2 rho`.
pub fn von_neumann(rho: &DensityMatrix) -> Bits {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Entropy of the reduced state on `subsystems`; zero for the empty set.
pub fn subsystem_entropy(rho: &DensityMatrix, subsystems: &[usize]) -> Result<Bits> {
    if subsystems.is_empty() {
        return Ok(0.0);
    }
    Ok(von_neumann(&rho.partial_trace(subsystems)?))
}

fn check_disjoint(sets: &[&[usize]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.iter().any(|x| b.contains(x)) {
                return Err(Error::OverlappingSubsystems);
            }
        }
    }
    Ok(())
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut v: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `I(A:B) = H(A) + H(B) - H(AB)`.
pub fn mutual_information(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<Bits> {
    check_disjoint(&[a, b])?;
    Ok(subsystem_entropy(rho, a)? + subsystem_entropy(rho, b)?
        - subsystem_entropy(rho, &union(&[a, b]))?)
}

/// `I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)`.
pub fn conditional_mutual_information(
    rho: &DensityMatrix,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<Bits> {
    check_disjoint(&[a, b, c])?;
    Ok(
        subsystem_entropy(rho, &union(&[a, c]))? + subsystem_entropy(rho, &union(&[b, c]))?
            - subsystem_entropy(rho, &union(&[a, b, c]))?
            - subsystem_entropy(rho, c)?,
    )
}

/// `H(A|B) = H(AB) - H(B)`.
pub fn conditional_entropy(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<Bits> {
    check_disjoint(&[a, b])?;
    Ok(subsystem_entropy(rho, &union(&[a, b]))? - subsystem_entropy(rho, b)?)
}

/// `I_c = H(Lambda(rho)) - H((id_R (x) Lambda)(psi))` using the given purification.
pub fn coherent_information_with(p: &Purification, ch: &KrausChannel) -> Result<Bits> {
    // Merge reference and system factors so the channel sees a single subsystem.
    let rdim = p.reference_dims.total();
    let sig = DimSignature::new(vec![rdim, p.pure.sig().total() / rdim])?;
    let joint = p.pure.density().with_signature(sig)?;
    coherent_from_joint(&joint, ch)
}

fn coherent_from_joint(joint: &DensityMatrix, ch: &KrausChannel) -> Result<Bits> {
    let out = ch.apply_to_subsystem(joint, 1)?;
    Ok(subsystem_entropy(&out, &[1])? - von_neumann(&out))
}

/// Coherent information of `rho` through `ch`, via the canonical purification.
pub fn coherent_information(rho: &DensityMatrix, ch: &KrausChannel) -> Result<Bits> {
    if rho.dim() != ch.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} for channel input {}",
            rho.dim(),
            ch.d_in()
        )));
    }
    coherent_information_with(&purify(rho), ch)
}

/// `I_c(rho_r : rho_s)`: coherent information of `rho_r` through `Lambda_{s-1} o ... o Lambda_r`.
///
/// States are 1-based: `rho_1` is `rho1`, `rho_{i+1} = Lambda_i(rho_i)`, and
/// `1 <= r < s <= chain.len() + 1`. The channels are applied one after another to
/// the purified state rather than composed.
pub fn chain_coherent_information(
    rho1: &DensityMatrix,
    chain: &[KrausChannel],
    r: usize,
    s: usize,
) -> Result<Bits> {
    let states = chain.len() + 1;
    if r < 1 || r >= s || s > states {
        return Err(Error::InvalidChainIndex { r, s, states });
    }
    let mut rho = rho1.clone();
    for ch in &chain[..r - 1] {
        rho = ch.apply(&rho)?;
    }
    let p = purify(&rho);
    let rdim = p.reference_dims.total();
    let sig = DimSignature::new(vec![rdim, rho.dim()])?;
    let mut joint = p.pure.density().with_signature(sig)?;
    for ch in &chain[r - 1..s - 1] {
        joint = ch.apply_to_subsystem(&joint, 1)?;
    }
    Ok(subsystem_entropy(&joint, &[1])? - von_neumann(&joint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{random_kraus_channel, random_unitary};
    use crate::state::{maximally_entangled, random_density, validate_density};

    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann(&DensityMatrix::basis(2, 1).unwrap()).abs() < 1e-12);
        assert!((von_neumann(&DensityMatrix::maximally_mixed(2).unwrap()) - 1.0).abs() < 1e-12);
        let r = validate_density(
            ComplexMatrix::from_diag(&[2. / 3., 1. / 3.]),
            DimSignature::single(2).unwrap(),
        )
        .unwrap();
        assert!((von_neumann(&r) - (3f64.log2() - 2. / 3.)).abs() < 1e-12);
        assert!((von_neumann(&r) - h2(1. / 3.)).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(3, 3, 2).unwrap();
        assert!(mutual_information(&a.kron(&b), &[0], &[1]).unwrap().abs() < 1e-12);
        let bell = maximally_entangled(2).unwrap().density();
        assert!((mutual_information(&bell, &[0], &[1]).unwrap() - 2.0).abs() < 1e-12);
        let cc = validate_density(
            ComplexMatrix::from_diag(&[0.5, 0., 0., 0.5]),
            DimSignature::new(vec![2, 2]).unwrap(),
        )
        .unwrap();
        assert!((mutual_information(&cc, &[0], &[1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            mutual_information(&cc, &[0], &[0, 1]),
            Err(Error::OverlappingSubsystems)
        ));
    }

    #[test]
    fn cmi_examples() {
        let abc = random_density(2, 2, 1)
            .unwrap()
            .kron(&random_density(2, 2, 2).unwrap())
            .kron(&random_density(2, 2, 3).unwrap());
        assert!(
            conditional_mutual_information(&abc, &[0], &[1], &[2])
                .unwrap()
                .abs()
                < 1e-12
        );
        let bell_c = maximally_entangled(2)
            .unwrap()
            .density()
            .kron(&random_density(3, 3, 4).unwrap());
        assert!(
            (conditional_mutual_information(&bell_c, &[0], &[1], &[2]).unwrap() - 2.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn coherent_information_examples() {
        let rho = random_density(3, 3, 7).unwrap();
        let h = von_neumann(&rho);
        assert!(
            (coherent_information(&rho, &KrausChannel::identity(3)).unwrap() - h).abs() < 1e-10
        );
        let u = KrausChannel::unitary(random_unitary(3, 2)).unwrap();
        assert!((coherent_information(&rho, &u).unwrap() - h).abs() < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let dep = KrausChannel::fully_depolarizing(2);
        assert!((coherent_information(&mixed, &dep).unwrap() + 1.0).abs() < 1e-10);
        assert!(coherent_information(&mixed, &KrausChannel::identity(3)).is_err());
    }

    #[test]
    fn chain_examples() {
        let rho = random_density(2, 2, 3).unwrap();
        let h = von_neumann(&rho);
        let v = chain_coherent_information(&rho, &[KrausChannel::identity(2)], 1, 2).unwrap();
        assert!((v - h).abs() < 1e-10);
        let chain: Vec<KrausChannel> = (0..3)
            .map(|i| KrausChannel::unitary(random_unitary(2, i)).unwrap())
            .collect();
        for r in 1..4 {
            for s in r + 1..=4 {
                assert!(
                    (chain_coherent_information(&rho, &chain, r, s).unwrap() - h).abs() < 1e-10
                );
            }
        }
        assert!(matches!(
            chain_coherent_information(&rho, &chain, 2, 2),
            Err(Error::InvalidChainIndex { .. })
        ));
        assert!(chain_coherent_information(&rho, &chain, 1, 5).is_err());
    }

    #[test]
    fn chain_matches_composed_channel() {
        let rho = random_density(2, 2, 5).unwrap();
        let chain: Vec<KrausChannel> = (0..3)
            .map(|i| random_kraus_channel(2, 2, 2, 40 + i).unwrap())
            .collect();
        let composed = crate::channel::compose(&chain[2], &chain[1]).unwrap();
        let rho2 = chain[0].apply(&rho).unwrap();
        let direct = coherent_information(&rho2, &composed).unwrap();
        assert!((chain_coherent_information(&rho, &chain, 2, 4).unwrap() - direct).abs() < 1e-10);
    }
}
