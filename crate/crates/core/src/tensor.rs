//! Dense complex linear algebra over multipartite Hilbert spaces.
//!
//! Subsystem ordering is big-endian: the leftmost factor of a tensor product is
//! the most significant digit of the computational-basis index. With dims
//! `[2, 2, 2]` the ket `|1,0,0>` is basis index 4.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity threshold accepted by [`hermitian_eig`] before symmetrization.
pub const EIG_HERMITIAN_TOL: f64 = 1e-8;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real entries (row-major).
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// The outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        let mut data = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                data.push(x * y.conj());
            }
        }
        Self {
            rows: a.len(),
            cols: b.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (k, a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `self * m * self^dagger`.
    pub fn conjugate(&self, m: &Self) -> Self {
        self.matmul(m).matmul(&self.dagger())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-abs entrywise distance. Panics if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m^dagger|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitize(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in r..self.cols {
                let avg = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                out[(r, c)] = avg;
                out[(c, r)] = avg.conj();
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Ordered subsystem dimensions of a multipartite space, leftmost most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct DimSignature {
    dims: Vec<usize>,
}

impl DimSignature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSignature("no subsystems".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSignature(format!(
                "subsystem dimension {d} < 2"
            )));
        }
        Ok(Self { dims })
    }

    /// A single subsystem of dimension `d`.
    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim(&self, index: usize) -> usize {
        self.dims[index]
    }

    /// Signature of the subsystems listed in `keep` (sorted, deduplicated).
    pub fn select(&self, keep: &[usize]) -> Result<Self> {
        let keep = self.normalize_indices(keep)?;
        Self::new(keep.iter().map(|&i| self.dims[i]).collect())
    }

    /// Signature with `other` appended on the right.
    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims }
    }

    /// Signature with subsystem `index` replaced by dimension `d`.
    pub fn with_dim(&self, index: usize, d: usize) -> Result<Self> {
        if index >= self.dims.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.dims.len(),
            });
        }
        let mut dims = self.dims.clone();
        dims[index] = d;
        Self::new(dims)
    }

    pub(crate) fn normalize_indices(&self, idx: &[usize]) -> Result<Vec<usize>> {
        let mut v = idx.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&i| i >= self.dims.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.dims.len(),
            });
        }
        Ok(v)
    }

    pub(crate) fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "signature {:?} has dimension {}, matrix is {}x{}",
                self.dims,
                self.total(),
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

/// Splits every basis index of `dims` into (kept index, traced index).
fn split_indices(dims: &[usize], keep: &[usize]) -> Vec<(usize, usize)> {
    let total: usize = dims.iter().product();
    let n = dims.len();
    let mut is_kept = vec![false; n];
    for &k in keep {
        is_kept[k] = true;
    }
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let (mut k, mut t) = (0usize, 0usize);
        for (pos, &d) in digits.iter().enumerate() {
            if is_kept[pos] {
                k = k * dims[pos] + d;
            } else {
                t = t * dims[pos] + d;
            }
        }
        out.push((k, t));
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    out
}

/// Kronecker product, left argument most significant.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Traces out every subsystem not listed in `keep`.
///
/// Kept subsystems stay in their original relative order. An empty `keep`
/// yields the 1x1 matrix holding the full trace.
pub fn partial_trace(
    m: &ComplexMatrix,
    sig: &DimSignature,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    sig.check_matrix(m)?;
    let keep = sig.normalize_indices(keep)?;
    let dk: usize = keep.iter().map(|&i| sig.dims[i]).product();
    let dt = sig.total() / dk;
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dt];
    for (full, (k, t)) in split_indices(&sig.dims, &keep).into_iter().enumerate() {
        groups[t].push((k, full));
    }
    let mut out = ComplexMatrix::zeros(dk, dk);
    for group in &groups {
        for &(k1, i1) in group {
            for &(k2, i2) in group {
                out[(k1, k2)] += m[(i1, i2)];
            }
        }
    }
    Ok(out)
}

/// Reduced density operator `Tr_rest |v><v|` of a state vector, computed as `M M^dagger`.
pub fn reduce_vector(v: &[C64], sig: &DimSignature, keep: &[usize]) -> Result<ComplexMatrix> {
    if v.len() != sig.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for signature {:?}",
            v.len(),
            sig.dims
        )));
    }
    let keep = sig.normalize_indices(keep)?;
    let dk: usize = keep.iter().map(|&i| sig.dims[i]).product();
    let dt = sig.total() / dk;
    let mut mat = vec![ZERO; dk * dt];
    for (full, (k, t)) in split_indices(&sig.dims, &keep).into_iter().enumerate() {
        mat[k * dt + t] = v[full];
    }
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        let ra = &mat[a * dt..(a + 1) * dt];
        for b in a..dk {
            let rb = &mat[b * dt..(b + 1) * dt];
            let s: C64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
            out[(a, b)] = s;
            out[(b, a)] = s.conj();
        }
    }
    Ok(out)
}

/// Reorders subsystems: output subsystem `i` is input subsystem `perm[i]`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    sig: &DimSignature,
    perm: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    sig.check_matrix(m)?;
    let n = sig.len();
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidPermutation(n));
    }
    let new_sig = DimSignature::new(perm.iter().map(|&p| sig.dims[p]).collect())?;
    let map = permutation_map(sig, perm);
    let total = sig.total();
    let mut out = ComplexMatrix::zeros(total, total);
    for (r, &or) in map.iter().enumerate() {
        for (c, &oc) in map.iter().enumerate() {
            out[(r, c)] = m[(or, oc)];
        }
    }
    Ok((out, new_sig))
}

/// For every basis index of the permuted space, the matching index of the original.
fn permutation_map(sig: &DimSignature, perm: &[usize]) -> Vec<usize> {
    let n = sig.len();
    let new_dims: Vec<usize> = perm.iter().map(|&p| sig.dims[p]).collect();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sig.dims[i + 1];
    }
    let total = sig.total();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        out.push(digits.iter().zip(perm).map(|(&d, &p)| d * strides[p]).sum());
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < new_dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    out
}

/// Applies `op` to the listed subsystems of a state vector, identity elsewhere.
///
/// `op` is square over the targets in the listed order (first target most significant).
pub fn apply_to_vector(
    op: &ComplexMatrix,
    sig: &DimSignature,
    targets: &[usize],
    v: &[C64],
) -> Result<Vec<C64>> {
    if v.len() != sig.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for signature {:?}",
            v.len(),
            sig.dims
        )));
    }
    let mut seen = vec![false; sig.len()];
    for &t in targets {
        if t >= sig.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                len: sig.len(),
            });
        }
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::OverlappingSubsystems);
        }
    }
    let dt: usize = targets.iter().map(|&t| sig.dims[t]).product();
    if !op.is_square() || op.rows() != dt {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} on targets of dimension {dt}",
            op.rows(),
            op.cols()
        )));
    }
    // Bring targets to the front, act, then restore.
    let mut perm: Vec<usize> = targets.to_vec();
    perm.extend((0..sig.len()).filter(|i| !seen[*i]));
    let map = permutation_map(sig, &perm);
    let rest = sig.total() / dt;
    let mut out = vec![ZERO; v.len()];
    for r in 0..rest {
        for a in 0..dt {
            let mut acc = ZERO;
            for b in 0..dt {
                let x = op[(a, b)];
                if x.re != 0.0 || x.im != 0.0 {
                    acc += x * v[map[b * rest + r]];
                }
            }
            out[map[a * rest + r]] = acc;
        }
    }
    Ok(out)
}

/// The Hermitian conjugate.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.dagger()
}

/// True iff `max |m^dagger m - I| <= tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    unitary_deviation(m) <= tol
}

pub(crate) fn unitary_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    m.dagger()
        .matmul(m)
        .max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diag(&self.eigenvalues);
        self.eigenvectors.conjugate(&d)
    }

    pub fn eigenvector(&self, i: usize) -> Vec<C64> {
        let v = &self.eigenvectors;
        (0..v.rows()).map(|r| v[(r, i)]).collect()
    }
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn check_hermitian_input(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > EIG_HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(m.hermitize())
}

/// Hermitian eigendecomposition; the input is symmetrized first.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let h = check_hermitian_input(m)?;
    let n = h.rows();
    let eig = to_nalgebra(&h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, col)] = eig.eigenvectors[(r, src)];
        }
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors: vecs,
    })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = check_hermitian_input(m)?;
    let mut ev: Vec<f64> = to_nalgebra(&h)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}
