//! Completely positive maps in Kraus, Stinespring and Choi form, plus the link product.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{gaussian_matrix, maximally_entangled, DensityMatrix, PureState};
use crate::tensor::{
    hermitian_eig, permute_subsystems, unitary_deviation, ComplexMatrix, DimSignature, C64, ZERO,
};

/// Trace-preservation tolerance for channels.
pub const TP_TOL: f64 = 1e-10;
/// Unitarity tolerance for dilations.
pub const UNITARY_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are dropped when extracting Kraus operators.
pub const CHOI_RANK_CUTOFF: f64 = 1e-12;

/// A completely positive map `rho -> sum_k K rho K^dagger`, not necessarily trace preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausMap {
    ops: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausMap {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty)?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if let Some(k) = ops.iter().find(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {}x{} in a {d_out}x{d_in} set",
                k.rows(),
                k.cols()
            )));
        }
        Ok(Self { ops, d_in, d_out })
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `max |sum K^dagger K - I|`.
    pub fn tp_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.d_in, self.d_in);
        for k in &self.ops {
            acc = &acc + &k.dagger().matmul(k);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    /// `max |A(I_in) - I_out| = max |sum K K^dagger - I|`.
    pub fn unital_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.ops {
            acc = &acc + &k.matmul(&k.dagger());
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.d_out))
    }

    /// Applies the map to a raw `d_in x d_in` operator.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.d_in || m.cols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "map input dimension {}, operator is {}x{}",
                self.d_in,
                m.rows(),
                m.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.ops {
            out = &out + &k.conjugate(m);
        }
        Ok(out)
    }

    /// Applies the map to subsystem `target` of an operator over `sig`; returns the
    /// output operator and its signature.
    pub fn apply_to_subsystem_matrix(
        &self,
        m: &ComplexMatrix,
        sig: &DimSignature,
        target: usize,
    ) -> Result<(ComplexMatrix, DimSignature)> {
        sig.check_matrix(m)?;
        if target >= sig.len() {
            return Err(Error::IndexOutOfRange {
                index: target,
                len: sig.len(),
            });
        }
        if sig.dim(target) != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "subsystem {target} has dimension {}, map expects {}",
                sig.dim(target),
                self.d_in
            )));
        }
        let left: usize = sig.dims()[..target].iter().product();
        let right: usize = sig.dims()[target + 1..].iter().product();
        let (di, dout) = (self.d_in, self.d_out);
        let n_in = left * di * right;
        let n_out = left * dout * right;
        let mut out = ComplexMatrix::zeros(n_out, n_out);
        for k in &self.ops {
            // Left action (I (x) K (x) I) M, then right action by its adjoint.
            let mut t = ComplexMatrix::zeros(n_out, n_in);
            for l in 0..left {
                for a in 0..dout {
                    for r in 0..right {
                        let row = (l * dout + a) * right + r;
                        for i in 0..di {
                            let kv = k[(a, i)];
                            if kv.re == 0.0 && kv.im == 0.0 {
                                continue;
                            }
                            let src = (l * di + i) * right + r;
                            for c in 0..n_in {
                                t[(row, c)] += kv * m[(src, c)];
                            }
                        }
                    }
                }
            }
            for row in 0..n_out {
                for l in 0..left {
                    for a in 0..dout {
                        for r in 0..right {
                            let col = (l * dout + a) * right + r;
                            let mut acc = ZERO;
                            for i in 0..di {
                                let kv = k[(a, i)];
                                if kv.re != 0.0 || kv.im != 0.0 {
                                    acc += t[(row, (l * di + i) * right + r)] * kv.conj();
                                }
                            }
                            out[(row, col)] += acc;
                        }
                    }
                }
            }
        }
        Ok((out, sig.with_dim(target, dout)?))
    }

    /// Map with Kraus operators `{L_j K_i}`: `earlier` first, then `self`.
    pub fn after(&self, earlier: &KrausMap) -> Result<KrausMap> {
        if earlier.d_out != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "composing a map with input {} after one with output {}",
                self.d_in, earlier.d_out
            )));
        }
        let ops = self
            .ops
            .iter()
            .flat_map(|l| earlier.ops.iter().map(move |k| l.matmul(k)))
            .collect();
        KrausMap::new(ops)
    }

    /// `(A (x) id)(Phi)` with `Phi = sum_ij |ii><jj|` unnormalized; output over `d_out (x) d_in`.
    pub fn input_side_choi(&self) -> ComplexMatrix {
        let (di, dout) = (self.d_in, self.d_out);
        let n = dout * di;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.ops {
            // (K (x) I) sum_i |i>|i> = sum_i K|i> (x) |i>
            let mut v = vec![ZERO; n];
            for i in 0..di {
                for a in 0..dout {
                    v[a * di + i] = k[(a, i)];
                }
            }
            out = &out + &ComplexMatrix::outer(&v, &v);
        }
        out
    }

    /// `(id (x) A)(Phi)` with `Phi = sum_ij |ii><jj|` unnormalized; output over `d_in (x) d_out`.
    pub fn output_side_choi(&self) -> ComplexMatrix {
        let (di, dout) = (self.d_in, self.d_out);
        let n = di * dout;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.ops {
            let mut v = vec![ZERO; n];
            for i in 0..di {
                for a in 0..dout {
                    v[i * dout + a] = k[(a, i)];
                }
            }
            out = &out + &ComplexMatrix::outer(&v, &v);
        }
        out
    }
}

/// A trace-preserving [`KrausMap`].
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    map: KrausMap,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::from_map(KrausMap::new(ops)?)
    }

    pub fn from_map(map: KrausMap) -> Result<Self> {
        let deviation = map.tp_deviation();
        if deviation > TP_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { map })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            map: KrausMap {
                ops: vec![ComplexMatrix::identity(d)],
                d_in: d,
                d_out: d,
            },
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let deviation = unitary_deviation(&u);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let d = u.rows();
        Ok(Self {
            map: KrausMap {
                ops: vec![u],
                d_in: d,
                d_out: d,
            },
        })
    }

    /// `rho -> Tr(rho) I/d`, with Kraus operators `|i><j| / sqrt(d)`.
    pub fn fully_depolarizing(d: usize) -> Self {
        let s = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        let mut ops = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = ComplexMatrix::zeros(d, d);
                k[(i, j)] = s;
                ops.push(k);
            }
        }
        Self {
            map: KrausMap {
                ops,
                d_in: d,
                d_out: d,
            },
        }
    }

    pub fn as_map(&self) -> &KrausMap {
        &self.map
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.map.ops
    }

    pub fn d_in(&self) -> usize {
        self.map.d_in
    }

    pub fn d_out(&self) -> usize {
        self.map.d_out
    }

    /// `sum_k K rho K^dagger`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.map.apply_matrix(rho.matrix())?;
        let sig = if self.d_in() == self.d_out() {
            rho.sig().clone()
        } else {
            DimSignature::single(self.d_out())?
        };
        Ok(DensityMatrix::from_trusted(out, sig))
    }

    /// `(id (x) Lambda (x) id)(rho)` with the channel on subsystem `target`.
    pub fn apply_to_subsystem(&self, rho: &DensityMatrix, target: usize) -> Result<DensityMatrix> {
        let (m, sig) = self
            .map
            .apply_to_subsystem_matrix(rho.matrix(), rho.sig(), target)?;
        Ok(DensityMatrix::from_trusted(m, sig))
    }
}

/// `later o earlier`, with Kraus set `{L_j K_i}`.
pub fn compose(later: &KrausChannel, earlier: &KrausChannel) -> Result<KrausChannel> {
    Ok(KrausChannel {
        map: later.map.after(&earlier.map)?,
    })
}

/// A unitary `U : S_in (x) F -> S_out (x) E` with ancilla state on `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringDilation {
    unitary: ComplexMatrix,
    ancilla: PureState,
    d_in: usize,
    d_out: usize,
    d_env: usize,
}

impl StinespringDilation {
    pub fn new(
        unitary: ComplexMatrix,
        ancilla: PureState,
        d_in: usize,
        d_out: usize,
        d_env: usize,
    ) -> Result<Self> {
        let d_f = ancilla.vector().len();
        if d_in * d_f != d_out * d_env {
            return Err(Error::InfeasibleDims(format!(
                "{d_in}*{d_f} != {d_out}*{d_env}"
            )));
        }
        if unitary.rows() != d_in * d_f || !unitary.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "dilation unitary is {}x{}, expected {}",
                unitary.rows(),
                unitary.cols(),
                d_in * d_f
            )));
        }
        let deviation = unitary_deviation(&unitary);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            unitary,
            ancilla,
            d_in,
            d_out,
            d_env,
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ancilla(&self) -> &PureState {
        &self.ancilla
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_env(&self) -> usize {
        self.d_env
    }

    pub fn d_ancilla(&self) -> usize {
        self.ancilla.vector().len()
    }

    /// `V = U (I (x) |phi>)`, a `(d_out d_env) x d_in` isometry.
    pub fn isometry(&self) -> ComplexMatrix {
        let df = self.d_ancilla();
        let phi = self.ancilla.vector();
        let rows = self.d_out * self.d_env;
        let mut v = ComplexMatrix::zeros(rows, self.d_in);
        for r in 0..rows {
            for i in 0..self.d_in {
                v[(r, i)] = (0..df)
                    .map(|f| self.unitary[(r, i * df + f)] * phi[f])
                    .sum();
            }
        }
        v
    }

    /// `Tr_E[U (rho (x) phi) U^dagger]`, evaluated directly.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let joint = rho.kron(&self.ancilla.density());
        let evolved = self.unitary.conjugate(joint.matrix());
        let sig = DimSignature::new(vec![self.d_out, self.d_env])?;
        let m = crate::tensor::partial_trace(&evolved, &sig, &[0])?;
        Ok(DensityMatrix::from_trusted(
            m,
            DimSignature::single(self.d_out)?,
        ))
    }
}

/// Kraus operators `K_e = (I (x) <e|) U (I (x) |phi>)`.
pub fn dilation_to_kraus(d: &StinespringDilation) -> KrausChannel {
    let v = d.isometry();
    let ops = (0..d.d_env)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(d.d_out, d.d_in);
            for a in 0..d.d_out {
                for i in 0..d.d_in {
                    k[(a, i)] = v[(a * d.d_env + e, i)];
                }
            }
            k
        })
        .collect();
    KrausChannel {
        map: KrausMap {
            ops,
            d_in: d.d_in,
            d_out: d.d_out,
        },
    }
}

/// Normalized Choi state `(id (x) Lambda)(Psi+)` over `R_in (x) S_out`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiState {
    pub state: DensityMatrix,
    pub d_in: usize,
    pub d_out: usize,
}

impl ChoiState {
    /// The unnormalized Choi operator `d_in * C`.
    pub fn unnormalized(&self) -> ComplexMatrix {
        self.state.matrix().scale_real(self.d_in as f64)
    }

    /// `max |Tr_out C - I/d_in|`.
    pub fn marginal_deviation(&self) -> f64 {
        let m = self.state.partial_trace(&[0]).expect("two subsystems");
        m.matrix().max_abs_diff(&ComplexMatrix::from_diag(&vec![
            1.0 / self.d_in as f64;
            self.d_in
        ]))
    }
}

/// The normalized Choi state of a channel.
pub fn choi_of(ch: &KrausChannel) -> ChoiState {
    let (di, dout) = (ch.d_in(), ch.d_out());
    let m = ch.map.output_side_choi().scale_real(1.0 / di as f64);
    let sig = DimSignature::new(vec![di, dout]).expect("channel dimensions are at least 2");
    ChoiState {
        state: DensityMatrix::from_trusted(m, sig),
        d_in: di,
        d_out: dout,
    }
}

/// Kraus operators of a (possibly non-trace-preserving) CP map from its unnormalized
/// Choi operator `J = sum_ij |i><j| (x) A(|i><j|)` over `d_in (x) d_out`.
pub fn choi_operator_to_kraus(j: &ComplexMatrix, d_in: usize, d_out: usize) -> Result<KrausMap> {
    if !j.is_square() || j.rows() != d_in * d_out {
        return Err(Error::DimensionMismatch(format!(
            "Choi operator {}x{} for {d_in}->{d_out}",
            j.rows(),
            j.cols()
        )));
    }
    let spec = hermitian_eig(j)?;
    let min_eigenvalue = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -1e-9 * j.max_abs().max(1.0) {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let mut ops = Vec::new();
    for (x, &lambda) in spec.eigenvalues.iter().enumerate() {
        if lambda < CHOI_RANK_CUTOFF {
            continue;
        }
        let s = lambda.sqrt();
        let mut k = ComplexMatrix::zeros(d_out, d_in);
        for i in 0..d_in {
            for a in 0..d_out {
                k[(a, i)] = spec.eigenvectors[(i * d_out + a, x)] * s;
            }
        }
        ops.push(k);
    }
    if ops.is_empty() {
        // The zero map.
        ops.push(ComplexMatrix::zeros(d_out, d_in));
    }
    KrausMap::new(ops)
}

/// Kraus operators recovered from a normalized Choi state.
pub fn choi_to_kraus(choi: &ChoiState) -> Result<KrausChannel> {
    KrausChannel::from_map(choi_operator_to_kraus(
        &choi.unnormalized(),
        choi.d_in,
        choi.d_out,
    )?)
}

/// The Hilbert-Schmidt adjoint `X -> sum_k K^dagger X K`, a unital CP map.
///
/// In the computational basis `(A (x) id)(Phi)` equals the full transpose of
/// `(id (x) A^dagger)(Phi)`; for real Kraus operators the transpose is trivial.
pub fn adjoint_channel(ch: &KrausChannel) -> KrausMap {
    KrausMap {
        ops: ch.kraus_ops().iter().map(ComplexMatrix::dagger).collect(),
        d_in: ch.d_out(),
        d_out: ch.d_in(),
    }
}

/// An operator over named ports, each with a dimension; ports are ordered as tensor factors.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelledOperator {
    pub matrix: ComplexMatrix,
    pub ports: Vec<(String, usize)>,
}

impl LabelledOperator {
    pub fn new(matrix: ComplexMatrix, ports: Vec<(String, usize)>) -> Result<Self> {
        let sig = DimSignature::new(ports.iter().map(|p| p.1).collect())?;
        sig.check_matrix(&matrix)?;
        for (i, (name, _)) in ports.iter().enumerate() {
            if ports[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::PortMismatch(format!("duplicate port {name}")));
            }
        }
        Ok(Self { matrix, ports })
    }

    pub fn sig(&self) -> DimSignature {
        DimSignature::new(self.ports.iter().map(|p| p.1).collect())
            .expect("validated on construction")
    }

    pub fn port_names(&self) -> Vec<&str> {
        self.ports.iter().map(|p| p.0.as_str()).collect()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.ports.iter().position(|p| p.0 == name)
    }

    /// Reorders ports to the given name order.
    pub fn reorder(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.ports.len() {
            return Err(Error::PortMismatch(format!(
                "expected {} port names",
                self.ports.len()
            )));
        }
        let perm = names
            .iter()
            .map(|n| {
                self.position(n)
                    .ok_or_else(|| Error::PortMismatch(format!("unknown port {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let (matrix, _) = permute_subsystems(&self.matrix, &self.sig(), &perm)?;
        let ports = perm.iter().map(|&p| self.ports[p].clone()).collect();
        Ok(Self { matrix, ports })
    }
}

/// Link product: matrix product (with partial transpose) over shared ports, tensor
/// product over the rest. Output ports are `a`'s free ports then `b`'s free ports.
///
/// `C[(xa,xb),(ya,yb)] = sum_{s,t} A[(xa,t),(ya,s)] B[(t,xb),(s,yb)]`.
pub fn link_product(a: &LabelledOperator, b: &LabelledOperator) -> Result<LabelledOperator> {
    let shared: Vec<&(String, usize)> = a
        .ports
        .iter()
        .filter(|p| b.position(&p.0).is_some())
        .collect();
    for (name, d) in &shared {
        let db = b.ports[b.position(name).expect("shared")].1;
        if db != *d {
            return Err(Error::PortMismatch(format!(
                "port {name} has dimension {d} and {db}"
            )));
        }
    }
    let is_shared = |n: &str| shared.iter().any(|p| p.0 == n);
    let a_free: Vec<&(String, usize)> = a.ports.iter().filter(|p| !is_shared(&p.0)).collect();
    let b_free: Vec<&(String, usize)> = b.ports.iter().filter(|p| !is_shared(&p.0)).collect();

    let names = |v: &[&(String, usize)]| v.iter().map(|p| p.0.clone()).collect::<Vec<String>>();
    let mut a_order = names(&a_free);
    a_order.extend(names(&shared));
    let mut b_order = names(&shared);
    b_order.extend(names(&b_free));
    let ap = a.reorder(&a_order.iter().map(String::as_str).collect::<Vec<_>>())?;
    let bp = b.reorder(&b_order.iter().map(String::as_str).collect::<Vec<_>>())?;

    let dxa: usize = a_free.iter().map(|p| p.1).product();
    let dxb: usize = b_free.iter().map(|p| p.1).product();
    let dsh: usize = shared.iter().map(|p| p.1).product();
    let n = dxa * dxb;
    let mut c = ComplexMatrix::zeros(n, n);
    for xa in 0..dxa {
        for ya in 0..dxa {
            for t in 0..dsh {
                for s in 0..dsh {
                    let av = ap.matrix[(xa * dsh + t, ya * dsh + s)];
                    if av.re == 0.0 && av.im == 0.0 {
                        continue;
                    }
                    for xb in 0..dxb {
                        for yb in 0..dxb {
                            c[(xa * dxb + xb, ya * dxb + yb)] +=
                                av * bp.matrix[(t * dxb + xb, s * dxb + yb)];
                        }
                    }
                }
            }
        }
    }
    let ports: Vec<(String, usize)> = a_free.into_iter().chain(b_free).cloned().collect();
    if ports.is_empty() {
        // Fully contracted: a scalar.
        return Ok(LabelledOperator { matrix: c, ports });
    }
    LabelledOperator::new(c, ports)
}

/// Haar-random unitary of dimension `n` (Gram-Schmidt on a complex Gaussian matrix;
/// the positive diagonal of the implied `R` fixes the phases).
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with(&mut rng, n)
}

pub(crate) fn random_unitary_with<R: rand::Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        if let Some(q) = gram_schmidt_columns(&g) {
            return q;
        }
    }
}

fn gram_schmidt_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(g.cols());
    for c in 0..g.cols() {
        let mut v: Vec<C64> = (0..n).map(|r| g[(r, c)]).collect();
        // Two passes for numerical orthogonality.
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut q = ComplexMatrix::zeros(n, g.cols());
    for (c, col) in cols.iter().enumerate() {
        for r in 0..n {
            q[(r, c)] = col[r];
        }
    }
    Some(q)
}

/// Random dilation `S_in (x) F -> S_out (x) E` with `d_F = d_out d_env / d_in` and ancilla `|0>`.
pub fn random_channel(
    d_in: usize,
    d_out: usize,
    d_env: usize,
    seed: u64,
) -> Result<StinespringDilation> {
    let prod = d_out * d_env;
    if d_in == 0 || d_out < 2 || d_env == 0 || !prod.is_multiple_of(d_in) || prod / d_in < 2 {
        return Err(Error::InfeasibleDims(format!(
            "d_in={d_in}, d_out={d_out}, d_env={d_env} admits no ancilla of dimension >= 2"
        )));
    }
    let d_f = prod / d_in;
    let u = random_unitary(prod, seed);
    StinespringDilation::new(u, PureState::basis(d_f, 0)?, d_in, d_out, d_env)
}

/// Convenience: random channel in Kraus form.
pub fn random_kraus_channel(
    d_in: usize,
    d_out: usize,
    d_env: usize,
    seed: u64,
) -> Result<KrausChannel> {
    Ok(dilation_to_kraus(&random_channel(
        d_in, d_out, d_env, seed,
    )?))
}

/// Normalized `Psi+` on `d (x) d` as a density matrix.
pub fn max_entangled_density(d: usize) -> Result<DensityMatrix> {
    Ok(maximally_entangled(d)?.density())
}
