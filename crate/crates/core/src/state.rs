//! Density matrices, pure states and purification.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{
    self, hermitian_eig, hermitian_eigenvalues, kron, kron_vec, ComplexMatrix, DimSignature, C64,
    ZERO,
};

/// Tolerance for Hermiticity, trace and positivity checks on density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Norm tolerance for pure states.
pub const PURE_NORM_TOL: f64 = 1e-12;

/// A Hermitian, positive semidefinite, unit-trace operator with its subsystem layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    sig: DimSignature,
}

/// Checks that `m` is a density operator over `sig`.
pub fn validate_density(m: ComplexMatrix, sig: DimSignature) -> Result<DensityMatrix> {
    sig.check_matrix(&m)?;
    let deviation = m.hermitian_deviation();
    if deviation > DENSITY_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    let tr = m.trace().re;
    if (tr - 1.0).abs() > DENSITY_TOL {
        return Err(Error::NotUnitTrace { trace: tr });
    }
    let min_eigenvalue = hermitian_eigenvalues(&m)?.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -DENSITY_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix {
        matrix: m.hermitize(),
        sig,
    })
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, sig: DimSignature) -> Result<Self> {
        validate_density(m, sig)
    }

    /// Wraps the output of a structurally valid operation (partial trace, CPTP map)
    /// without re-running the eigenvalue check.
    pub(crate) fn from_trusted(m: ComplexMatrix, sig: DimSignature) -> Self {
        debug_assert_eq!(m.rows(), sig.total());
        Self {
            matrix: m.hermitize(),
            sig,
        }
    }

    /// `I/d` on a single subsystem.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        let sig = DimSignature::single(d)?;
        Ok(Self::from_trusted(
            ComplexMatrix::from_diag(&vec![1.0 / d as f64; d]),
            sig,
        ))
    }

    /// `|i><i|` on a single subsystem of dimension `d`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, len: d });
        }
        let mut diag = vec![0.0; d];
        diag[i] = 1.0;
        Ok(Self::from_trusted(
            ComplexMatrix::from_diag(&diag),
            DimSignature::single(d)?,
        ))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn sig(&self) -> &DimSignature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian")
    }

    /// Reduced state on the listed subsystems (kept in original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let sig = self.sig.select(keep)?;
        let m = tensor::partial_trace(&self.matrix, &self.sig, keep)?;
        Ok(Self::from_trusted(m, sig))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_trusted(
            kron(&self.matrix, &other.matrix),
            self.sig.concat(&other.sig),
        )
    }

    /// Output subsystem `i` is input subsystem `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (m, sig) = tensor::permute_subsystems(&self.matrix, &self.sig, perm)?;
        Ok(Self::from_trusted(m, sig))
    }

    /// Same matrix viewed with a different factorization of the same total dimension.
    pub fn with_signature(&self, sig: DimSignature) -> Result<Self> {
        sig.check_matrix(&self.matrix)?;
        Ok(Self {
            matrix: self.matrix.clone(),
            sig,
        })
    }

    /// `U rho U^dagger`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        self.sig.check_matrix(u)?;
        Ok(Self::from_trusted(
            u.conjugate(&self.matrix),
            self.sig.clone(),
        ))
    }
}

/// A unit-norm state vector with its subsystem layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    vector: Vec<C64>,
    sig: DimSignature,
}

impl PureState {
    pub fn new(vector: Vec<C64>, sig: DimSignature) -> Result<Self> {
        if vector.len() != sig.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for signature {:?}",
                vector.len(),
                sig.dims()
            )));
        }
        if vector
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { vector, sig })
    }

    /// Normalizes `vector` before validating; fails only on a zero or non-finite vector.
    pub fn normalized(vector: Vec<C64>, sig: DimSignature) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(vector.into_iter().map(|z| z / norm).collect(), sig)
    }

    /// Computational-basis ket `|i>` on a single subsystem.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, len: d });
        }
        let mut v = vec![ZERO; d];
        v[i] = C64::new(1.0, 0.0);
        Self::new(v, DimSignature::single(d)?)
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    pub fn sig(&self) -> &DimSignature {
        &self.sig
    }

    pub fn into_vector(self) -> Vec<C64> {
        self.vector
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(
            ComplexMatrix::outer(&self.vector, &self.vector),
            self.sig.clone(),
        )
    }

    /// Reduced density operator on `keep`, computed without forming the full projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let sig = self.sig.select(keep)?;
        let m = tensor::reduce_vector(&self.vector, &self.sig, keep)?;
        Ok(DensityMatrix::from_trusted(m, sig))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            vector: kron_vec(&self.vector, &other.vector),
            sig: self.sig.concat(&other.sig),
        }
    }

    /// Applies `op` to the listed subsystems. `op` must be unitary on those targets
    /// for the result to stay normalized.
    pub fn apply(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let v = tensor::apply_to_vector(op, &self.sig, targets, &self.vector)?;
        Self::normalized(v, self.sig.clone())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// A pure state over `R (x) S` whose `S` marginal is a given density matrix.
///
/// The reference occupies the leading subsystems of `pure`.
#[derive(Clone, Debug, PartialEq)]
pub struct Purification {
    pub pure: PureState,
    pub reference_dims: DimSignature,
}

impl Purification {
    /// Indices of the system subsystems within `pure`.
    pub fn system_indices(&self) -> Vec<usize> {
        (self.reference_dims.len()..self.pure.sig().len()).collect()
    }

    pub fn reference_indices(&self) -> Vec<usize> {
        (0..self.reference_dims.len()).collect()
    }

    /// The purified state, recovered by tracing the reference.
    pub fn system_state(&self) -> DensityMatrix {
        self.pure
            .reduced(&self.system_indices())
            .expect("indices in range")
    }
}

/// Canonical purification `sum_x sqrt(lambda_x) |x>_R |v_x>_S` with a reference of
/// the same signature as `rho`.
pub fn purify(rho: &DensityMatrix) -> Purification {
    let d = rho.dim();
    let spec = hermitian_eig(rho.matrix()).expect("density matrix is Hermitian");
    let mut v = vec![ZERO; d * d];
    for (x, &lambda) in spec.eigenvalues.iter().enumerate() {
        let amp = lambda.max(0.0).sqrt();
        if amp == 0.0 {
            continue;
        }
        for s in 0..d {
            v[x * d + s] = spec.eigenvectors[(s, x)] * amp;
        }
    }
    let sig = rho.sig().concat(rho.sig());
    Purification {
        pure: PureState::normalized(v, sig).expect("purification of a unit-trace state"),
        reference_dims: rho.sig().clone(),
    }
}

/// `(1/sqrt(d)) sum_i |ii>` on two subsystems of dimension `d`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    let sig = DimSignature::new(vec![d, d])?;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    PureState::normalized(v, sig)
}

/// Random density matrix `G G^dagger / Tr(G G^dagger)` with `G` a complex Gaussian `d x rank` matrix.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_on(DimSignature::single(d)?, rank, seed)
}

/// As [`random_density`], over an arbitrary signature.
pub fn random_density_on(sig: DimSignature, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let d = sig.total();
    if rank == 0 || rank > d {
        return Err(Error::OutOfRange(format!("rank {rank} not in 1..={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, d, rank);
    let gg = g.matmul(&g.dagger());
    let tr = gg.trace().re;
    Ok(DensityMatrix::from_trusted(gg.scale_real(1.0 / tr), sig))
}

/// Haar-random pure state over `sig`.
pub fn random_pure(sig: DimSignature, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, sig.total(), 1);
    PureState::normalized(g.into_vec(), sig)
}

pub(crate) fn gaussian_matrix<R: rand::Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    ComplexMatrix::from_vec_unchecked(rows, cols, data)
}

/// `(|1,0,0> + |0,1,0> + |0,0,1>) / sqrt(3)` over qubits `R, S, E`.
pub fn example_initial_state() -> PureState {
    let a = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut v = vec![ZERO; 8];
    for i in [4, 2, 1] {
        v[i] = a;
    }
    PureState::normalized(v, DimSignature::new(vec![2, 2, 2]).expect("qubits")).expect("unit norm")
}
