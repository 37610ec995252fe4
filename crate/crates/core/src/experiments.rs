//! The one-parameter example circuit, parameter sweeps, and randomized verification.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{
    adjoint_channel, dilation_to_kraus, random_kraus_channel, KrausChannel, StinespringDilation,
};
use crate::classical::{cmmi_gap, joint_from_chain, random_chain};
use crate::error::{Error, Result};
use crate::info::{conditional_mutual_information, subsystem_entropy, von_neumann, Bits, EPSILON};
use crate::proctensor::{mqmmi_witness, CoherentKind, SystemEnvCircuit};
use crate::state::{
    example_initial_state, random_density, random_density_on, DensityMatrix, PureState,
};
use crate::tensor::{ComplexMatrix, DimSignature};
use crate::witness::{
    conjecture_minimum, cqmi_monotonicity_gap, extra_dpi_witnesses, m4_from_table, m6_witnesses,
    m8_witnesses, mi_dpi_gap, permutations, qdpi_from_table, MarkovChainProcess, WitnessReport,
};

/// A closed grid of `lambda` values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSweepConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub step: f64,
    pub seed: u64,
}

impl Default for LambdaSweepConfig {
    fn default() -> Self {
        Self {
            lambda_min: 0.0,
            lambda_max: 1.0,
            step: 0.01,
            seed: 0,
        }
    }
}

impl LambdaSweepConfig {
    pub fn new(lambda_min: f64, lambda_max: f64, step: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            lambda_min,
            lambda_max,
            step,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if !in_unit(self.lambda_min)
            || !in_unit(self.lambda_max)
            || self.lambda_min > self.lambda_max
        {
            return Err(Error::OutOfRange(format!(
                "lambda range [{}, {}] must satisfy 0 <= min <= max <= 1",
                self.lambda_min, self.lambda_max
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "step {} must be positive",
                self.step
            )));
        }
        Ok(())
    }

    /// Grid points `min + i * step` up to `max`, rounded to 12 decimals.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.lambda_max - self.lambda_min) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let x = self.lambda_min + i as f64 * self.step;
                ((x * 1e12).round() / 1e12).min(self.lambda_max)
            })
            .collect()
    }
}

/// Named witness values at one `lambda`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub values: Vec<(String, Bits)>,
}

impl SweepRow {
    fn new(lambda: f64, values: &[(&str, Bits)]) -> Self {
        Self {
            lambda,
            values: values.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<Bits> {
        self.values.iter().find(|(n, _)| n == name).map(|e| e.1)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange(format!("lambda {lambda} not in [0, 1]")));
    }
    Ok(())
}

/// The two-qubit interaction on `S (x) E`:
/// rows `(0, -a, b, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, b, a, 0)` with `a = sqrt(1 - lambda)`, `b = sqrt(lambda)`.
pub fn u_lambda(lambda: f64) -> Result<ComplexMatrix> {
    check_lambda(lambda)?;
    let (a, b) = ((1.0 - lambda).sqrt(), lambda.sqrt());
    ComplexMatrix::from_real(
        4,
        4,
        &[0., -a, b, 0., 1., 0., 0., 0., 0., 0., 0., 1., 0., b, a, 0.],
    )
}

fn gamma_pure(lambda: f64) -> Result<Vec<PureState>> {
    let u = u_lambda(lambda)?;
    let mut out = vec![example_initial_state()];
    for _ in 0..3 {
        let next = out.last().expect("non-empty").apply(&u, &[1, 2])?;
        out.push(next);
    }
    Ok(out)
}

/// `gamma_1 .. gamma_4` over `R (x) S (x) E`: the initial state and three applications
/// of `I_R (x) U_lambda`.
pub fn gamma_sequence(lambda: f64) -> Result<Vec<DensityMatrix>> {
    Ok(gamma_pure(lambda)?.iter().map(PureState::density).collect())
}

/// Entropy bookkeeping on the `R, S, E` states.
struct GammaEntropies {
    s: Vec<Bits>,
    rs: Vec<Bits>,
    rse: Vec<Bits>,
}

impl GammaEntropies {
    fn new(lambda: f64) -> Result<Self> {
        let g = gamma_pure(lambda)?;
        let mut e = Self {
            s: vec![],
            rs: vec![],
            rse: vec![],
        };
        for psi in &g {
            e.s.push(von_neumann(&psi.reduced(&[1])?));
            e.rs.push(von_neumann(&psi.reduced(&[0, 1])?));
            e.rse.push(von_neumann(&psi.density()));
        }
        Ok(e)
    }

    /// `[H(S) - H(R,S)]` on `gamma_i` (1-based).
    fn s_minus_rs(&self, i: usize) -> Bits {
        self.s[i - 1] - self.rs[i - 1]
    }

    /// `[H(S) - H(R,S,E)]` on `gamma_i` (1-based).
    fn s_minus_rse(&self, i: usize) -> Bits {
        self.s[i - 1] - self.rse[i - 1]
    }
}

/// DP1..DP4 and M4 on the non-Markovian example, in entropy form.
///
/// The monogamy term is `[H(R,S,E) - H(R,S)]_4 + [H(R,S) - H(R,S,E)]_3`, which is the
/// coherent-information combination `I(1:4) + I(2:3) - I(1:3) - I(2:4)` written out.
pub fn nonmarkov_witness_row(lambda: f64) -> Result<SweepRow> {
    let h = GammaEntropies::new(lambda)?;
    let m4 = (h.rse[3] - h.rs[3]) + (h.rs[2] - h.rse[2]);
    Ok(SweepRow::new(
        lambda,
        &[
            ("DP1", h.s_minus_rs(2) - h.s_minus_rs(3)),
            ("DP2", h.s_minus_rs(2) - h.s_minus_rs(4)),
            ("DP3", h.s_minus_rs(3) - h.s_minus_rs(4)),
            ("DP4", h.s_minus_rse(3) - h.s_minus_rse(4)),
            ("M4", m4),
        ],
    ))
}

/// Markov reference: `rho = I/2` (purified by `Psi+`) through two copies of the channel
/// dilated by `U_lambda` with ancilla `|0>`.
pub fn markov_reference_process(lambda: f64) -> Result<MarkovChainProcess> {
    let dil = StinespringDilation::new(u_lambda(lambda)?, PureState::basis(2, 0)?, 2, 2, 2)?;
    let ch = dilation_to_kraus(&dil);
    MarkovChainProcess::new(DensityMatrix::maximally_mixed(2)?, vec![ch.clone(), ch])
}

/// DP5 on the Markov reference, and DP5..DP7 on the non-Markovian example.
pub fn extra_dpi_row(lambda: f64) -> Result<SweepRow> {
    let reference = extra_dpi_witnesses(&markov_reference_process(lambda)?)?;
    let h = GammaEntropies::new(lambda)?;
    Ok(SweepRow::new(
        lambda,
        &[
            (
                "DP5_markov",
                reference.get("DP5").expect("three-state report has DP5"),
            ),
            ("DP5", h.s_minus_rse(3) - h.s_minus_rs(3)),
            ("DP6", h.s_minus_rse(3) - h.s_minus_rs(4)),
            ("DP7", h.s_minus_rse(4) - h.s_minus_rs(4)),
        ],
    ))
}

/// The example as a system-environment circuit with three `U_lambda` steps.
pub fn example_circuit(lambda: f64) -> Result<SystemEnvCircuit> {
    SystemEnvCircuit::new(example_initial_state(), vec![u_lambda(lambda)?; 3])
}

/// The three interventional monogamy witnesses on the example circuit.
pub fn mqmmi_row(lambda: f64) -> Result<SweepRow> {
    let c = example_circuit(lambda)?;
    Ok(SweepRow::new(
        lambda,
        &[
            ("M4_q1", mqmmi_witness(&c, CoherentKind::Q1)?),
            ("M4_q2", mqmmi_witness(&c, CoherentKind::Q2)?),
            ("M4_q3", mqmmi_witness(&c, CoherentKind::Q3)?),
        ],
    ))
}

/// Which family of example witnesses a sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweepKind {
    Qmmi,
    Mqmmi,
    DpiExtra,
}

impl SweepKind {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            SweepKind::Qmmi => &["DP1", "DP2", "DP3", "DP4", "M4"],
            SweepKind::Mqmmi => &["M4_q1", "M4_q2", "M4_q3"],
            SweepKind::DpiExtra => &["DP5_markov", "DP5", "DP6", "DP7"],
        }
    }

    pub fn row(self, lambda: f64) -> Result<SweepRow> {
        match self {
            SweepKind::Qmmi => nonmarkov_witness_row(lambda),
            SweepKind::Mqmmi => mqmmi_row(lambda),
            SweepKind::DpiExtra => extra_dpi_row(lambda),
        }
    }
}

/// Evaluates a sweep over the grid in parallel; rows come back in grid order.
pub fn sweep(kind: SweepKind, cfg: &LambdaSweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.grid().into_par_iter().map(|l| kind.row(l)).collect()
}

/// Outcome of one verification check across all samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Smallest gap, or largest deviation when `is_deviation`.
    pub value: f64,
    pub threshold: f64,
    pub is_deviation: bool,
    /// Sample seed attaining `value`.
    pub worst_seed: u64,
    /// Whether this check is a theorem (counts toward pass/fail) or only reported.
    pub asserted: bool,
    pub passed: bool,
}

impl CheckResult {
    fn gap(name: &str, samples: &[(u64, f64)], threshold: f64, asserted: bool) -> Self {
        let (worst_seed, value) =
            samples.iter().copied().fold(
                (0, f64::INFINITY),
                |best, s| if s.1 < best.1 { s } else { best },
            );
        Self {
            name: name.to_string(),
            value,
            threshold,
            is_deviation: false,
            worst_seed,
            asserted,
            passed: !asserted || value >= -threshold,
        }
    }

    fn deviation(name: &str, samples: &[(u64, f64)], threshold: f64) -> Self {
        let (worst_seed, value) =
            samples
                .iter()
                .copied()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, s| if s.1 > best.1 { s } else { best },
                );
        Self {
            name: name.to_string(),
            value,
            threshold,
            is_deviation: true,
            worst_seed,
            asserted: true,
            passed: value <= threshold,
        }
    }
}

/// Verification run parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Chain length: 4, 6 or 8 states.
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
}

/// All checks of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifySummary {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Appends further checks and recomputes the overall verdict.
    pub fn extend(&mut self, checks: Vec<CheckResult>) {
        self.checks.extend(checks);
        self.passed = self.checks.iter().all(|c| c.passed);
    }
}

/// Per-sample seed for check family `tag`.
fn sample_seed(seed: u64, tag: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ (tag << 56)
}

/// Environment dimension for sample `i`: alternates between 2 and 4.
fn sample_env(i: usize) -> usize {
    if i.is_multiple_of(2) {
        2
    } else {
        4
    }
}

fn collect_named(per_sample: &[(u64, WitnessReport)]) -> Vec<(String, Vec<(u64, f64)>)> {
    let Some((_, first)) = per_sample.first() else {
        return Vec::new();
    };
    first
        .entries
        .iter()
        .map(|(name, _)| {
            let vals = per_sample
                .iter()
                .map(|(s, r)| (*s, r.get(name).expect("same entries")))
                .collect();
            (name.clone(), vals)
        })
        .collect()
}

/// Minimum of every chain witness over `samples` random Markov processes of length
/// `steps` on a qubit. Proven inequalities are asserted; the extra data-processing
/// candidates and the pairing-conjecture minimum are reported only.
pub fn random_markov_verify(steps: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    if ![4, 6, 8].contains(&steps) {
        return Err(Error::OutOfRange(format!(
            "steps {steps} not in {{4, 6, 8}}"
        )));
    }
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive".into()));
    }
    let per_sample: Vec<(u64, WitnessReport, WitnessReport, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, 1, i);
            let p = MarkovChainProcess::random(steps, 2, sample_env(i), s)?;
            let t = p.coherent_table()?;
            let (proven, extra) = match steps {
                4 => {
                    let mut r = qdpi_from_table(&t);
                    r = r.merge(WitnessReport::new(
                        vec![("M4".into(), m4_from_table(&t))],
                        EPSILON,
                    ));
                    (r, extra_dpi_witnesses(&p)?)
                }
                6 => (m6_witnesses(&p)?, WitnessReport::new(vec![], EPSILON)),
                _ => (m8_witnesses(&p)?, WitnessReport::new(vec![], EPSILON)),
            };
            let (conj, _) = conjecture_minimum(&p)?;
            Ok((s, proven, extra, conj))
        })
        .collect::<Result<Vec<_>>>()?;

    let proven: Vec<(u64, WitnessReport)> = per_sample.iter().map(|x| (x.0, x.1.clone())).collect();
    let extra: Vec<(u64, WitnessReport)> = per_sample.iter().map(|x| (x.0, x.2.clone())).collect();
    let conj: Vec<(u64, f64)> = per_sample.iter().map(|x| (x.0, x.3)).collect();
    let mut out: Vec<CheckResult> = collect_named(&proven)
        .iter()
        .map(|(n, v)| CheckResult::gap(n, v, EPSILON, true))
        .collect();
    out.extend(
        collect_named(&extra)
            .iter()
            .map(|(n, v)| CheckResult::gap(n, v, EPSILON, false)),
    );
    out.push(CheckResult::gap(
        "pairing_conjecture_min",
        &conj,
        EPSILON,
        false,
    ));
    Ok(out)
}

/// Largest entrywise gap between `(A (x) id)(Phi)` and the transpose of
/// `(id (x) A^dagger)(Phi)`, and the unitality deviation of `A^dagger`.
pub fn adjoint_identity_deviation(seed: u64, d_env: usize) -> Result<(f64, f64)> {
    let ch = random_kraus_channel(2, 2, d_env, seed)?;
    let adj = adjoint_channel(&ch);
    let lhs = ch.as_map().input_side_choi();
    let rhs = adj.output_side_choi().transpose();
    Ok((lhs.max_abs_diff(&rhs), adj.unital_deviation()))
}

/// Full randomized verification: chain witnesses, strong subadditivity, the adjoint
/// identity, conditional and plain mutual-information monotonicity, and the classical
/// pairing inequality over all permutations.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let mut checks = random_markov_verify(cfg.steps, cfg.samples, cfg.seed)?;
    let tri_sig = DimSignature::new(vec![2, 2, 2])?;
    let bi_sig = DimSignature::new(vec![2, 2])?;
    let n_half = cfg.steps / 2;
    let perms = permutations(n_half);

    type Sample = (u64, f64, f64, f64, f64, f64, f64);
    let rows: Vec<Sample> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| -> Result<Sample> {
            let s = sample_seed(cfg.seed, 2, i);
            let rank = 1 + i % 8;
            let tri = random_density_on(tri_sig.clone(), rank, s)?;
            let ssa = conditional_mutual_information(&tri, &[0], &[1], &[2])?;
            let ch = random_kraus_channel(2, 2, sample_env(i), s ^ 0x5555)?;
            let cqmi = cqmi_monotonicity_gap(&tri, &ch)?;
            let bi = random_density_on(bi_sig.clone(), 1 + i % 4, s ^ 0xAAAA)?;
            let mi = mi_dpi_gap(&bi, &ch)?;
            let (adj_dev, unital_dev) = adjoint_identity_deviation(s ^ 0x3333, sample_env(i))?;
            let pmf = joint_from_chain(&random_chain(cfg.steps, 2, s ^ 0x7777)?);
            let mut cmmi = f64::INFINITY;
            // The identity pairing has a zero gap by construction.
            for f in perms.iter().skip(1) {
                cmmi = cmmi.min(cmmi_gap(&pmf, f)?);
            }
            Ok((s, ssa, cqmi, mi, adj_dev, unital_dev, cmmi))
        })
        .collect::<Result<Vec<_>>>()?;

    let col = |k: usize| -> Vec<(u64, f64)> {
        rows.iter()
            .map(|r| (r.0, [r.1, r.2, r.3, r.4, r.5, r.6][k]))
            .collect()
    };
    checks.push(CheckResult::gap("ssa_min", &col(0), EPSILON, true));
    checks.push(CheckResult::gap(
        "cqmi_monotonicity_min",
        &col(1),
        EPSILON,
        true,
    ));
    checks.push(CheckResult::gap("mi_dpi_min", &col(2), EPSILON, true));
    checks.push(CheckResult::deviation(
        "adjoint_identity_max_deviation",
        &col(3),
        1e-12,
    ));
    checks.push(CheckResult::deviation(
        "adjoint_unitality_max_deviation",
        &col(4),
        1e-10,
    ));
    checks.push(CheckResult::gap("classical_cmmi_min", &col(5), 1e-12, true));
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifySummary {
        steps: cfg.steps,
        samples: cfg.samples,
        seed: cfg.seed,
        checks,
        passed,
    })
}

/// `H(S)` of `gamma_1`, which does not depend on `lambda`.
pub fn initial_system_entropy() -> Result<Bits> {
    let g = gamma_sequence(0.0)?;
    subsystem_entropy(&g[0], &[1])
}

/// Checks that involve one fixed, caller-supplied channel: the chain inequalities on three
/// copies of it (when input and output dimensions agree), monotonicity under it, and the
/// adjoint identity.
pub fn channel_checks(ch: &KrausChannel, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be positive".into()));
    }
    let (d_in, d_out) = (ch.d_in(), ch.d_out());
    let tri_sig = DimSignature::new(vec![2, d_in, 2])?;
    let bi_sig = DimSignature::new(vec![2, d_in])?;
    type Sample = (u64, Option<f64>, f64, f64);
    let rows: Vec<Sample> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Sample> {
            let s = sample_seed(seed, 3, i);
            let chain_min = if d_in == d_out {
                let p =
                    MarkovChainProcess::new(random_density(d_in, d_in, s)?, vec![ch.clone(); 3])?;
                let t = p.coherent_table()?;
                let q = qdpi_from_table(&t);
                Some(q.min().expect("four entries").min(m4_from_table(&t)))
            } else {
                None
            };
            let tri = random_density_on(tri_sig.clone(), 1 + i % (4 * d_in), s ^ 0x1111)?;
            let bi = random_density_on(bi_sig.clone(), 1 + i % (2 * d_in), s ^ 0x2222)?;
            Ok((
                s,
                chain_min,
                cqmi_monotonicity_gap(&tri, ch)?,
                mi_dpi_gap(&bi, ch)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    if d_in == d_out {
        let chain: Vec<(u64, f64)> = rows
            .iter()
            .map(|r| (r.0, r.1.expect("square channel")))
            .collect();
        out.push(CheckResult::gap("channel_chain_min", &chain, EPSILON, true));
    }
    let col = |f: fn(&Sample) -> f64| rows.iter().map(|r| (r.0, f(r))).collect::<Vec<_>>();
    out.push(CheckResult::gap(
        "channel_cqmi_monotonicity_min",
        &col(|r| r.2),
        EPSILON,
        true,
    ));
    out.push(CheckResult::gap(
        "channel_mi_dpi_min",
        &col(|r| r.3),
        EPSILON,
        true,
    ));
    let adj = adjoint_channel(ch);
    let dev = ch
        .as_map()
        .input_side_choi()
        .max_abs_diff(&adj.output_side_choi().transpose());
    out.push(CheckResult::deviation(
        "channel_adjoint_identity_deviation",
        &[(seed, dev)],
        1e-12,
    ));
    out.push(CheckResult::deviation(
        "channel_adjoint_unitality_deviation",
        &[(seed, adj.unital_deviation())],
        1e-10,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{is_unitary, partial_trace};

    #[test]
    fn u_lambda_layout() {
        let u0 = u_lambda(0.0).unwrap();
        let want0 = ComplexMatrix::from_real(
            4,
            4,
            &[
                0., -1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        )
        .unwrap();
        assert_eq!(u0, want0);
        let u1 = u_lambda(1.0).unwrap();
        let want1 = ComplexMatrix::from_real(
            4,
            4,
            &[
                0., 0., 1., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0., 1., 0., 0.,
            ],
        )
        .unwrap();
        assert_eq!(u1, want1);
        let u = u_lambda(0.37).unwrap();
        assert!(
            u.dagger()
                .matmul(&u)
                .max_abs_diff(&ComplexMatrix::identity(4))
                < 1e-12
        );
        for i in 0..=100 {
            assert!(is_unitary(&u_lambda(i as f64 / 100.0).unwrap(), 1e-12));
        }
        assert!(u_lambda(1.5).is_err());
    }

    #[test]
    fn gamma_states() {
        for l in [0.0, 0.3, 1.0] {
            let g = gamma_sequence(l).unwrap();
            assert_eq!(g.len(), 4);
            for gi in &g {
                assert!((gi.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(von_neumann(gi).abs() < 1e-9);
            }
            let s = partial_trace(g[0].matrix(), g[0].sig(), &[1]).unwrap();
            assert!(s.max_abs_diff(&ComplexMatrix::from_diag(&[2. / 3., 1. / 3.])) < 1e-14);
        }
        assert!((initial_system_entropy().unwrap() - 0.918_295_834_054_489_6).abs() < 1e-12);
    }

    #[test]
    fn entropy_form_matches_chain_form_on_terms() {
        // DP1..DP3 use only [H(S) - H(R,S)] differences; check one against direct entropies.
        let l = 0.2;
        let g = gamma_sequence(l).unwrap();
        let t = |i: usize| {
            subsystem_entropy(&g[i], &[1]).unwrap() - subsystem_entropy(&g[i], &[0, 1]).unwrap()
        };
        let row = nonmarkov_witness_row(l).unwrap();
        assert!((row.get("DP1").unwrap() - (t(1) - t(2))).abs() < 1e-12);
    }

    #[test]
    fn grid_arithmetic() {
        let g = LambdaSweepConfig::default().grid();
        assert_eq!(g.len(), 101);
        assert_eq!(g[10], 0.1);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(LambdaSweepConfig::new(0.5, 0.4, 0.01, 0).is_err());
        assert!(LambdaSweepConfig::new(0.0, 1.0, 0.0, 0).is_err());
        assert_eq!(
            LambdaSweepConfig::new(0.2, 0.2, 0.1, 0).unwrap().grid(),
            vec![0.2]
        );
    }

    #[test]
    fn example_regions_spot_checks() {
        let r = nonmarkov_witness_row(0.1).unwrap();
        assert!(r.get("M4").unwrap() < -EPSILON);
        for dp in ["DP1", "DP2", "DP3", "DP4"] {
            assert!(r.get(dp).unwrap() >= -EPSILON, "{dp}");
        }
        let r = nonmarkov_witness_row(0.9).unwrap();
        assert!(r.get("M4").unwrap() >= -EPSILON);
        let r = extra_dpi_row(0.5).unwrap();
        assert!(r.values.iter().all(|(_, v)| *v >= -EPSILON));
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let cfg = LambdaSweepConfig::new(0.0, 0.1, 0.05, 0).unwrap();
        let a = sweep(SweepKind::Qmmi, &cfg).unwrap();
        let b = sweep(SweepKind::Qmmi, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.iter().map(|r| r.lambda).collect::<Vec<_>>(),
            vec![0.0, 0.05, 0.1]
        );
    }

    #[test]
    fn user_channel_checks() {
        let ch = random_kraus_channel(2, 2, 4, 3).unwrap();
        let checks = channel_checks(&ch, 6, 0).unwrap();
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let wide = random_kraus_channel(2, 3, 4, 3).unwrap();
        let checks = channel_checks(&wide, 4, 0).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn small_verify_passes() {
        let s = verify(&VerifyConfig {
            steps: 4,
            samples: 8,
            seed: 1,
        })
        .unwrap();
        assert!(s.passed, "{:?}", s.failures().collect::<Vec<_>>());
        assert!(s.check("M4").is_some());
        assert!(random_markov_verify(5, 1, 0).is_err());
    }
}
