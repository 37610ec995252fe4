//! Multitime processes on a system coupled to a persistent environment.
//!
//! A [`SystemEnvCircuit`] evolves `R0 (x) S (x) E` by unitaries on `S (x) E`; between
//! steps an experimenter may intervene on `S`. The process tensor is the Choi state
//! obtained by swapping the system at every slot for half of a maximally entangled
//! pair. Its ports are ordered `R0, S1, R1, S2, ..., R_{k-1}, S_k`: `S_j` is the system
//! emitted at slot `j` and `R_j` the reference of the pair fed back in.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    dilation_to_kraus, random_channel, KrausChannel, KrausMap, StinespringDilation, UNITARY_TOL,
};
use crate::classical::JointPMF;
use crate::error::{Error, Result};
use crate::info::{mutual_information, subsystem_entropy, Bits};
use crate::state::{maximally_entangled, purify, random_density, DensityMatrix, PureState};
use crate::tensor::{
    apply_to_vector, kron, partial_trace, reduce_vector, unitary_deviation, ComplexMatrix,
    DimSignature, C64, ZERO,
};
use crate::witness::{MarkovChainProcess, WitnessReport};

/// Largest number of amplitudes a circuit simulation may allocate.
pub const AMPLITUDE_BUDGET: usize = 1 << 14;

/// A pure initial state on `R0 (x) S (x) E` and step unitaries on `S (x) E`.
#[derive(Clone, Debug)]
pub struct SystemEnvCircuit {
    initial: PureState,
    steps: Vec<ComplexMatrix>,
    d_r0: usize,
    d_s: usize,
    d_e: usize,
}

impl SystemEnvCircuit {
    pub fn new(initial: PureState, steps: Vec<ComplexMatrix>) -> Result<Self> {
        let dims = initial.sig().dims();
        if dims.len() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "initial state must be over R0, S, E; found {} subsystems",
                dims.len()
            )));
        }
        let (d_r0, d_s, d_e) = (dims[0], dims[1], dims[2]);
        for u in &steps {
            if !u.is_square() || u.rows() != d_s * d_e {
                return Err(Error::DimensionMismatch(format!(
                    "step unitary is {}x{}, expected {}",
                    u.rows(),
                    u.cols(),
                    d_s * d_e
                )));
            }
            let deviation = unitary_deviation(u);
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self {
            initial,
            steps,
            d_r0,
            d_s,
            d_e,
        })
    }

    /// Circuit whose environment is a fresh ancilla per step, so the induced process
    /// is Markovian. The initial state is the canonical purification of `rho1`
    /// (reference `R0`) times the ancillas; step `i` acts on `S` and ancilla `i`.
    pub fn markov(rho1: &DensityMatrix, dilations: &[StinespringDilation]) -> Result<Self> {
        let d_s = rho1.dim();
        if dilations.is_empty() {
            return Err(Error::WrongLength {
                expected: "at least one dilation".into(),
                found: 0,
            });
        }
        for d in dilations {
            if d.d_in() != d_s || d.d_out() != d_s || d.d_env() != d.d_ancilla() {
                return Err(Error::DimensionMismatch(format!(
                    "dilation {}->{} with ancilla {} and environment {} on a system of dimension {d_s}",
                    d.d_in(),
                    d.d_out(),
                    d.d_ancilla(),
                    d.d_env()
                )));
            }
        }
        let env_dims: Vec<usize> = dilations.iter().map(|d| d.d_ancilla()).collect();
        let d_e: usize = env_dims.iter().product();
        if d_s * d_s * d_e > AMPLITUDE_BUDGET {
            return Err(Error::BudgetExceeded {
                amplitudes: d_s * d_s * d_e,
                budget: AMPLITUDE_BUDGET,
            });
        }
        let mut v = purify(rho1).pure.into_vector();
        for d in dilations {
            v = crate::tensor::kron_vec(&v, d.ancilla().vector());
        }
        let initial = PureState::normalized(v, DimSignature::new(vec![d_s, d_s, d_e])?)?;
        let mut se = vec![d_s];
        se.extend(&env_dims);
        let se_sig = DimSignature::new(se)?;
        let steps = dilations
            .iter()
            .enumerate()
            .map(|(i, d)| embed_operator(d.unitary(), &se_sig, &[0, i + 1]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(initial, steps)
    }

    /// Random Markov circuit on a system of dimension `d` with `steps` fresh environments
    /// of dimension `d`, together with the chain of channels it induces.
    pub fn random_markov(d: usize, steps: usize, seed: u64) -> Result<(Self, MarkovChainProcess)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = || rand::Rng::random::<u64>(&mut rng);
        let rho1 = random_density(d, d, next())?;
        let dilations = (0..steps)
            .map(|_| random_channel(d, d, d, next()))
            .collect::<Result<Vec<_>>>()?;
        let chain = MarkovChainProcess::new(
            rho1.clone(),
            dilations.iter().map(dilation_to_kraus).collect(),
        )?;
        Ok((Self::markov(&rho1, &dilations)?, chain))
    }

    pub fn initial(&self) -> &PureState {
        &self.initial
    }

    pub fn step_unitaries(&self) -> &[ComplexMatrix] {
        &self.steps
    }

    pub fn d_r0(&self) -> usize {
        self.d_r0
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    /// Number of intervention slots the circuit supports (one more than its steps).
    pub fn slots(&self) -> usize {
        self.steps.len() + 1
    }

    /// Direct density-matrix simulation: intervention `j` acts on `S` before step `j`.
    ///
    /// With `k` interventions, the first `k - 1` are applied and step `k - 1` run; the
    /// last is applied and the resulting (unnormalized) system operator returned,
    /// tracing `R0` and `E`.
    pub fn run(&self, interventions: &[KrausMap]) -> Result<ComplexMatrix> {
        let k = interventions.len();
        if k == 0 || k > self.slots() {
            return Err(Error::WrongLength {
                expected: format!("1..={} interventions", self.slots()),
                found: k,
            });
        }
        let sig = self.initial.sig().clone();
        let mut rho = self.initial.density().into_matrix();
        let id_r = ComplexMatrix::identity(self.d_r0);
        for (j, a) in interventions.iter().enumerate() {
            check_intervention(a, self.d_s, j + 1 == k)?;
            let (m, out_sig) = a.apply_to_subsystem_matrix(&rho, &sig, 1)?;
            if j + 1 == k {
                return partial_trace(&m, &out_sig, &[1]);
            }
            rho = kron(&id_r, &self.steps[j]).conjugate(&m);
        }
        unreachable!("loop returns on the last intervention")
    }
}

fn check_intervention(a: &KrausMap, d_s: usize, last: bool) -> Result<()> {
    if a.d_in() != d_s || (!last && a.d_out() != d_s) {
        return Err(Error::PortMismatch(format!(
            "intervention {}->{} on a system of dimension {d_s}",
            a.d_in(),
            a.d_out()
        )));
    }
    Ok(())
}

/// The full matrix of `op` acting on `targets` of `sig`, identity elsewhere.
pub fn embed_operator(
    op: &ComplexMatrix,
    sig: &DimSignature,
    targets: &[usize],
) -> Result<ComplexMatrix> {
    let n = sig.total();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut e = vec![ZERO; n];
    for c in 0..n {
        e[c] = C64::new(1.0, 0.0);
        let col = apply_to_vector(op, sig, targets, &e)?;
        e[c] = ZERO;
        for (r, z) in col.into_iter().enumerate() {
            out[(r, c)] = z;
        }
    }
    Ok(out)
}

/// A pure state over a growing list of registers.
struct Registers {
    dims: Vec<usize>,
    vec: Vec<C64>,
}

impl Registers {
    fn new(p: &PureState) -> Self {
        Self {
            dims: p.sig().dims().to_vec(),
            vec: p.vector().to_vec(),
        }
    }

    fn sig(&self) -> DimSignature {
        DimSignature::new(self.dims.clone()).expect("register dims are at least 2")
    }

    fn append(&mut self, p: &PureState) -> Result<()> {
        let amplitudes = self.vec.len() * p.vector().len();
        if amplitudes > AMPLITUDE_BUDGET {
            return Err(Error::BudgetExceeded {
                amplitudes,
                budget: AMPLITUDE_BUDGET,
            });
        }
        self.vec = crate::tensor::kron_vec(&self.vec, p.vector());
        self.dims.extend_from_slice(p.sig().dims());
        Ok(())
    }

    fn apply(&mut self, op: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        self.vec = apply_to_vector(op, &self.sig(), targets, &self.vec)?;
        Ok(())
    }

    fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let sig = self.sig();
        let m = reduce_vector(&self.vec, &sig, keep)?;
        Ok(DensityMatrix::from_trusted(m, sig.select(keep)?))
    }
}

/// Choi state of a multitime process over labelled ports.
#[derive(Clone, Debug)]
pub struct ProcessTensor {
    choi: DensityMatrix,
    ports: Vec<(String, usize)>,
    slots: usize,
}

/// Port index of `R_j` (`R0` is port 0).
fn r_port(j: usize) -> usize {
    2 * j
}

/// Port index of `S_j`, 1-based.
fn s_port(j: usize) -> usize {
    2 * j - 1
}

/// Builds the `k`-slot process tensor: at each slot `j < k` the emitted system `S_j`
/// stays in place and a fresh pair `(R_j, S'_j)` is appended, `S'_j` feeding step `j`.
pub fn build_process_tensor(c: &SystemEnvCircuit, k: usize) -> Result<ProcessTensor> {
    if k == 0 || k > c.slots() {
        return Err(Error::OutOfRange(format!(
            "{k} slots for a circuit supporting {}",
            c.slots()
        )));
    }
    let amplitudes = c.initial.vector().len() * (c.d_s * c.d_s).pow((k - 1) as u32);
    if amplitudes > AMPLITUDE_BUDGET {
        return Err(Error::BudgetExceeded {
            amplitudes,
            budget: AMPLITUDE_BUDGET,
        });
    }
    let mut reg = Registers::new(&c.initial);
    let pair = maximally_entangled(c.d_s)?;
    let e = 2;
    for step in &c.steps[..k - 1] {
        reg.append(&pair)?;
        let live = reg.dims.len() - 1;
        reg.apply(step, &[live, e])?;
    }
    // Register order is R0, S1, E, R1, S2, ..., so dropping E leaves port order.
    let keep: Vec<usize> = (0..reg.dims.len()).filter(|&i| i != e).collect();
    let choi = reg.reduced(&keep)?;
    let mut ports = vec![("R0".to_string(), c.d_r0), ("S1".to_string(), c.d_s)];
    for j in 1..k {
        ports.push((format!("R{j}"), c.d_s));
        ports.push((format!("S{}", j + 1), c.d_s));
    }
    Ok(ProcessTensor {
        choi,
        ports,
        slots: k,
    })
}

/// An operator over a subset of the original ports, tracked by port index.
struct Partial {
    m: ComplexMatrix,
    ports: Vec<usize>,
    dims: Vec<usize>,
}

impl Partial {
    fn sig(&self) -> DimSignature {
        DimSignature::new(self.dims.clone()).expect("port dims are at least 2")
    }

    fn pos(&self, port: usize) -> usize {
        self.ports
            .iter()
            .position(|&p| p == port)
            .expect("port still open")
    }

    fn trace_out(&mut self, ports: &[usize]) -> Result<()> {
        let keep: Vec<usize> = (0..self.ports.len())
            .filter(|&i| !ports.contains(&self.ports[i]))
            .collect();
        if keep.is_empty() {
            self.m = ComplexMatrix::from_vec_unchecked(1, 1, vec![self.m.trace()]);
            self.ports.clear();
            self.dims.clear();
            return Ok(());
        }
        self.m = partial_trace(&self.m, &self.sig(), &keep)?;
        self.ports = keep.iter().map(|&i| self.ports[i]).collect();
        self.dims = keep.iter().map(|&i| self.dims[i]).collect();
        Ok(())
    }

    fn apply(&mut self, a: &KrausMap, port: usize) -> Result<()> {
        let pos = self.pos(port);
        let (m, sig) = a.apply_to_subsystem_matrix(&self.m, &self.sig(), pos)?;
        self.m = m;
        self.dims = sig.dims().to_vec();
        Ok(())
    }

    /// `d <Phi| M |Phi>` on the pair `(a, b)` with `Phi = sum_i |ii>`; feeds what was
    /// applied at `a` into the process through `b`.
    fn link(&mut self, a: usize, b: usize) -> Result<()> {
        let (pa, pb) = (self.pos(a), self.pos(b));
        let d = self.dims[pa];
        if self.dims[pb] != d {
            return Err(Error::PortMismatch(format!(
                "linking ports of dimension {d} and {}",
                self.dims[pb]
            )));
        }
        let mut perm = vec![pa, pb];
        perm.extend((0..self.ports.len()).filter(|&i| i != pa && i != pb));
        let (p, _) = crate::tensor::permute_subsystems(&self.m, &self.sig(), &perm)?;
        let rest_ports: Vec<usize> = perm[2..].iter().map(|&i| self.ports[i]).collect();
        let rest_dims: Vec<usize> = perm[2..].iter().map(|&i| self.dims[i]).collect();
        let nr: usize = rest_dims.iter().product();
        let mut out = ComplexMatrix::zeros(nr, nr);
        let scale = d as f64;
        for i in 0..d {
            for i2 in 0..d {
                let (ro, co) = ((i * d + i) * nr, (i2 * d + i2) * nr);
                for r in 0..nr {
                    for c in 0..nr {
                        out[(r, c)] += p[(ro + r, co + c)] * scale;
                    }
                }
            }
        }
        self.m = out;
        self.ports = rest_ports;
        self.dims = rest_dims;
        Ok(())
    }
}

impl ProcessTensor {
    pub fn choi(&self) -> &DensityMatrix {
        &self.choi
    }

    pub fn ports(&self) -> &[(String, usize)] {
        &self.ports
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Index of the named port.
    pub fn port_index(&self, name: &str) -> Option<usize> {
        self.ports.iter().position(|p| p.0 == name)
    }

    fn partial(&self) -> Partial {
        Partial {
            m: self.choi.matrix().clone(),
            ports: (0..self.ports.len()).collect(),
            dims: self.ports.iter().map(|p| p.1).collect(),
        }
    }

    fn d_s(&self) -> usize {
        self.ports[1].1
    }

    /// Applies interventions at slots `1..=interventions.len()`, each fed forward except
    /// when it is the final slot.
    fn contract_prefix(&self, interventions: &[KrausMap], w: &mut Partial) -> Result<()> {
        for (j0, a) in interventions.iter().enumerate() {
            let j = j0 + 1;
            check_intervention(a, self.d_s(), false)?;
            w.apply(a, s_port(j))?;
            w.link(s_port(j), r_port(j))?;
        }
        Ok(())
    }

    /// Probability `Tr[Upsilon A^T]` of a sequence of CP maps, one per slot.
    pub fn contract_probability(&self, interventions: &[KrausMap]) -> Result<f64> {
        if interventions.len() != self.slots {
            return Err(Error::PortMismatch(format!(
                "{} interventions for {} slots",
                interventions.len(),
                self.slots
            )));
        }
        let mut w = self.partial();
        self.contract_prefix(&interventions[..self.slots - 1], &mut w)?;
        let last = &interventions[self.slots - 1];
        check_intervention(last, self.d_s(), true)?;
        w.apply(last, s_port(self.slots))?;
        Ok(w.m.trace().re)
    }

    /// Contracts the first `k - 1` slots and leaves `S_k` open; returns the probability
    /// of the sequence and the normalized conditional state of `S_k`.
    pub fn contract_open(&self, interventions: &[KrausMap]) -> Result<(f64, DensityMatrix)> {
        if interventions.len() + 1 != self.slots {
            return Err(Error::PortMismatch(format!(
                "{} interventions leave {} slots open",
                interventions.len(),
                self.slots - interventions.len()
            )));
        }
        let mut w = self.partial();
        self.contract_prefix(interventions, &mut w)?;
        w.trace_out(&[0])?;
        let p = w.m.trace().re;
        if p <= 1e-14 {
            return Err(Error::OutOfRange(format!("sequence has probability {p:e}")));
        }
        let sig = DimSignature::single(self.d_s())?;
        Ok((p, DensityMatrix::from_trusted(w.m.scale_real(1.0 / p), sig)))
    }

    /// Outcome distribution of one instrument per slot.
    pub fn joint_distribution(&self, instruments: &[Instrument]) -> Result<JointPMF> {
        if instruments.len() != self.slots {
            return Err(Error::PortMismatch(format!(
                "{} instruments for {} slots",
                instruments.len(),
                self.slots
            )));
        }
        let dims: Vec<usize> = instruments.iter().map(|i| i.elements.len()).collect();
        let mut probs = Vec::with_capacity(dims.iter().product());
        self.outcome_tree(instruments, 1, self.partial(), &mut probs)?;
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        JointPMF::new(dims, probs.into_iter().map(|p| p / total).collect())
    }

    fn outcome_tree(
        &self,
        instruments: &[Instrument],
        slot: usize,
        w: Partial,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        for a in &instruments[slot - 1].elements {
            let mut branch = Partial {
                m: w.m.clone(),
                ports: w.ports.clone(),
                dims: w.dims.clone(),
            };
            branch.apply(a, s_port(slot))?;
            if slot == self.slots {
                out.push(branch.m.trace().re);
            } else {
                check_intervention(a, self.d_s(), false)?;
                branch.link(s_port(slot), r_port(slot))?;
                self.outcome_tree(instruments, slot + 1, branch, out)?;
            }
        }
        Ok(())
    }

    /// Reduced state on the listed ports, in port order.
    pub fn port_marginal(&self, ports: &[usize]) -> Result<DensityMatrix> {
        self.choi.partial_trace(ports)
    }

    /// `I(R_y : S_x)` on the marginal of the Choi state.
    pub fn port_mutual_information(&self, y: usize, x: usize) -> Result<Bits> {
        if y == 0 || y >= self.slots || x == 0 || x > self.slots {
            return Err(Error::OutOfRange(format!(
                "ports R{y}, S{x} for {} slots",
                self.slots
            )));
        }
        mutual_information(&self.choi, &[r_port(y)], &[s_port(x)])
    }

    /// Largest `I(R_y : S_x)` over `y >= x`; zero for a causal process.
    pub fn causality_violation(&self) -> Result<Bits> {
        let mut worst: f64 = 0.0;
        for x in 1..self.slots {
            for y in x..self.slots {
                worst = worst.max(self.port_mutual_information(y, x)?);
            }
        }
        Ok(worst)
    }
}

/// Max-abs distance between the Choi state and the product of its per-step marginals
/// `rho(R0,S1) (x) L(R1,S2) (x) ... (x) L(R_{k-1},S_k)`.
pub fn markov_factorization_gap(pt: &ProcessTensor) -> Result<f64> {
    let mut product = pt.port_marginal(&[0, 1])?.into_matrix();
    for j in 1..pt.slots {
        let l = pt.port_marginal(&[r_port(j), s_port(j + 1)])?;
        product = kron(&product, l.matrix());
    }
    Ok(product.max_abs_diff(pt.choi.matrix()))
}

/// `I(R_a : S_b)` after discarding `S_a`, feeding slots `j < b, j != a` through their
/// interventions and tracing everything later than `S_b`.
fn dpi_pair_information(
    pt: &ProcessTensor,
    interventions: &[KrausChannel],
    a: usize,
    b: usize,
) -> Result<Bits> {
    let mut w = pt.partial();
    let later: Vec<usize> = (s_port(b) + 1..pt.ports.len()).collect();
    w.trace_out(&later)?;
    for j in 1..b {
        if j != a {
            w.apply(interventions[j - 1].as_map(), s_port(j))?;
            w.link(s_port(j), r_port(j))?;
        }
    }
    w.trace_out(&[0, s_port(a)])?;
    let sig = w.sig();
    let tr = w.m.trace().re;
    let state = DensityMatrix::from_trusted(w.m.scale_real(1.0 / tr), sig);
    let (ra, sb) = (w.pos(r_port(a)), w.pos(s_port(b)));
    mutual_information(&state, &[ra], &[sb])
}

/// The six distinct Choi-state data-processing gaps of a four-slot tensor; `interventions`
/// are the CPTP maps at slots 1..3.
pub fn choi_dpi_witnesses(
    pt: &ProcessTensor,
    interventions: &[KrausChannel],
) -> Result<WitnessReport> {
    if pt.slots != 4 {
        return Err(Error::PortMismatch(format!(
            "expected 4 slots, found {}",
            pt.slots
        )));
    }
    if interventions.len() != 3 {
        return Err(Error::WrongLength {
            expected: "3 interventions".into(),
            found: interventions.len(),
        });
    }
    let i = |a, b| dpi_pair_information(pt, interventions, a, b);
    let (r1s2, r1s3, r1s4) = (i(1, 2)?, i(1, 3)?, i(1, 4)?);
    let (r2s3, r2s4, r3s4) = (i(2, 3)?, i(2, 4)?, i(3, 4)?);
    let entries = vec![
        ("I(R1:S2)-I(R1:S3)".to_string(), r1s2 - r1s3),
        ("I(R1:S3)-I(R1:S4)".to_string(), r1s3 - r1s4),
        ("I(R2:S3)-I(R2:S4)".to_string(), r2s3 - r2s4),
        ("I(R2:S3)-I(R1:S3)".to_string(), r2s3 - r1s3),
        ("I(R3:S4)-I(R2:S4)".to_string(), r3s4 - r2s4),
        ("I(R2:S4)-I(R1:S4)".to_string(), r2s4 - r1s4),
    ];
    Ok(WitnessReport::new(entries, crate::info::EPSILON))
}

/// A collection of CP maps summing to a trace-preserving map.
#[derive(Clone, Debug)]
pub struct Instrument {
    pub elements: Vec<KrausMap>,
}

impl Instrument {
    pub fn new(elements: Vec<KrausMap>) -> Result<Self> {
        let first = elements.first().ok_or(Error::Empty)?;
        let d = first.d_in();
        let mut acc = ComplexMatrix::zeros(d, d);
        for e in &elements {
            if e.d_in() != d {
                return Err(Error::DimensionMismatch(
                    "instrument elements differ in input dimension".into(),
                ));
            }
            for k in e.kraus_ops() {
                acc = &acc + &k.dagger().matmul(k);
            }
        }
        let deviation = acc.max_abs_diff(&ComplexMatrix::identity(d));
        if deviation > crate::channel::TP_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { elements })
    }

    /// Rank-one projective measurement `{|i><i|}` in the computational basis.
    pub fn computational_basis(d: usize) -> Self {
        let elements = (0..d)
            .map(|i| {
                let mut p = ComplexMatrix::zeros(d, d);
                p[(i, i)] = C64::new(1.0, 0.0);
                KrausMap::new(vec![p]).expect("non-empty")
            })
            .collect();
        Self { elements }
    }
}

/// Which entropy combination defines the interventional coherent information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoherentKind {
    /// `H(S_j R_j) - H(S_j R_j S_k)`
    Q1,
    /// `H(S_k) - H(S_j R_j S_k)`
    Q2,
    /// `H(S_j S_k) - H(S_j R_j S_k)`
    Q3,
}

impl CoherentKind {
    pub const ALL: [CoherentKind; 3] = [CoherentKind::Q1, CoherentKind::Q2, CoherentKind::Q3];
}

impl fmt::Display for CoherentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoherentKind::Q1 => "q1",
            CoherentKind::Q2 => "q2",
            CoherentKind::Q3 => "q3",
        })
    }
}

/// Joint state of `(S_j, R_j, S_k)` when the system at slot `j` is set aside and
/// replaced by a purification of its own reduced state; other slots are left alone.
pub fn purification_intervention_state(
    c: &SystemEnvCircuit,
    j: usize,
    k: usize,
) -> Result<DensityMatrix> {
    if j < 1 || j >= k || k > c.slots() {
        return Err(Error::OutOfRange(format!(
            "slots j={j}, k={k} for a circuit with {} slots",
            c.slots()
        )));
    }
    let mut reg = Registers::new(&c.initial);
    let (mut live, e) = (1usize, 2usize);
    for step in &c.steps[..j - 1] {
        reg.apply(step, &[live, e])?;
    }
    let s_j = live;
    let rho_j = reg.reduced(&[s_j])?;
    reg.append(&purify(&rho_j).pure)?;
    let r_j = reg.dims.len() - 2;
    live = reg.dims.len() - 1;
    for step in &c.steps[j - 1..k - 1] {
        reg.apply(step, &[live, e])?;
    }
    // Keep order S_j, R_j, S_k.
    let joint = reg.reduced(&[s_j, r_j, live])?;
    Ok(joint)
}

/// Interventional coherent information between slots `j < k`.
pub fn multitime_coherent_info(
    c: &SystemEnvCircuit,
    kind: CoherentKind,
    j: usize,
    k: usize,
) -> Result<Bits> {
    let st = purification_intervention_state(c, j, k)?;
    let all = crate::info::von_neumann(&st);
    let first = match kind {
        CoherentKind::Q1 => subsystem_entropy(&st, &[0, 1])?,
        CoherentKind::Q2 => subsystem_entropy(&st, &[2])?,
        CoherentKind::Q3 => subsystem_entropy(&st, &[0, 2])?,
    };
    Ok(first - all)
}

/// `I(1;4) + I(2;3) - I(1;3) - I(2;4)` with interventional coherent informations.
pub fn mqmmi_witness(c: &SystemEnvCircuit, kind: CoherentKind) -> Result<Bits> {
    if c.slots() < 4 {
        return Err(Error::WrongLength {
            expected: "at least 3 steps".into(),
            found: c.steps.len(),
        });
    }
    let i = |j, k| multitime_coherent_info(c, kind, j, k);
    Ok(i(1, 4)? + i(2, 3)? - i(1, 3)? - i(2, 4)?)
}
