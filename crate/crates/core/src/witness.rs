//! Inequality gaps on chains of quantum channels.
//!
//! A chain is `rho_1 -> rho_2 -> ... -> rho_n` with `rho_{i+1} = Lambda_i(rho_i)`.
//! `I(r:s)` below is the chain coherent information: the coherent information of
//! `rho_r` through `Lambda_{s-1} o ... o Lambda_r`, with 1-based state indices.

use serde::Serialize;

use crate::channel::{random_kraus_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::info::{
    conditional_mutual_information, mutual_information, subsystem_entropy, von_neumann, Bits,
    EPSILON,
};
use crate::state::{purify, random_density, DensityMatrix};
use crate::tensor::DimSignature;

/// An initial state and the channels that advance it.
#[derive(Clone, Debug)]
pub struct MarkovChainProcess {
    initial: DensityMatrix,
    channels: Vec<KrausChannel>,
}

impl MarkovChainProcess {
    pub fn new(initial: DensityMatrix, channels: Vec<KrausChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::WrongLength {
                expected: "at least one channel".into(),
                found: 0,
            });
        }
        let mut d = initial.dim();
        for (i, ch) in channels.iter().enumerate() {
            if ch.d_in() != d {
                return Err(Error::DimensionMismatch(format!(
                    "channel {} expects input {}, state has dimension {d}",
                    i + 1,
                    ch.d_in()
                )));
            }
            d = ch.d_out();
        }
        Ok(Self { initial, channels })
    }

    /// Random chain of `states` states: full-rank initial state on `d` and channels
    /// from fresh random dilations with environment dimension `d_env`.
    pub fn random(states: usize, d: usize, d_env: usize, seed: u64) -> Result<Self> {
        if states < 2 {
            return Err(Error::WrongLength {
                expected: "at least 2 states".into(),
                found: states,
            });
        }
        let base = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let initial = random_density(d, d, base)?;
        let channels = (1..states as u64)
            .map(|i| random_kraus_channel(d, d, d_env, base.wrapping_add(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(initial, channels)
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn channels(&self) -> &[KrausChannel] {
        &self.channels
    }

    /// Number of states `n` (one more than the number of channels).
    pub fn len(&self) -> usize {
        self.channels.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `rho_i`, 1-based.
    pub fn state(&self, i: usize) -> Result<DensityMatrix> {
        if i < 1 || i > self.len() {
            return Err(Error::OutOfRange(format!(
                "state index {i} not in 1..={}",
                self.len()
            )));
        }
        let mut rho = self.initial.clone();
        for ch in &self.channels[..i - 1] {
            rho = ch.apply(&rho)?;
        }
        Ok(rho)
    }

    /// Every `I(r:s)` for `1 <= r < s <= n`, purifying each `rho_r` once.
    #[allow(clippy::needless_range_loop)]
    pub fn coherent_table(&self) -> Result<CoherentTable> {
        let n = self.len();
        let mut values = vec![vec![f64::NAN; n + 1]; n + 1];
        let mut rho = self.initial.clone();
        for r in 1..n {
            let p = purify(&rho);
            let rdim = p.reference_dims.total();
            let mut joint = p
                .pure
                .density()
                .with_signature(DimSignature::new(vec![rdim, rho.dim()])?)?;
            for s in r + 1..=n {
                joint = self.channels[s - 2].apply_to_subsystem(&joint, 1)?;
                values[r][s] = subsystem_entropy(&joint, &[1])? - von_neumann(&joint);
            }
            rho = self.channels[r - 1].apply(&rho)?;
        }
        Ok(CoherentTable { n, values })
    }

    fn require_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::WrongLength {
                expected: format!("{n} states"),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Chain coherent informations `I(r:s)` of a process.
#[derive(Clone, Debug)]
pub struct CoherentTable {
    n: usize,
    values: Vec<Vec<f64>>,
}

impl CoherentTable {
    pub fn states(&self) -> usize {
        self.n
    }

    /// `I(r:s)`; panics unless `1 <= r < s <= n`.
    pub fn get(&self, r: usize, s: usize) -> Bits {
        assert!(
            r >= 1 && r < s && s <= self.n,
            "invalid chain pair ({r}, {s}) for {} states",
            self.n
        );
        self.values[r][s]
    }

    fn sum(&self, pairs: &[(usize, usize)]) -> Bits {
        pairs.iter().map(|&(r, s)| self.get(r, s)).sum()
    }
}

/// Named inequality gaps; an entry is violated when it falls below `-tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub entries: Vec<(String, Bits)>,
    pub tolerance: f64,
    pub violated: Vec<String>,
}

impl WitnessReport {
    pub fn new(entries: Vec<(String, Bits)>, tolerance: f64) -> Self {
        let violated = entries
            .iter()
            .filter(|(_, v)| *v < -tolerance)
            .map(|(n, _)| n.clone())
            .collect();
        Self {
            entries,
            tolerance,
            violated,
        }
    }

    fn from_pairs(entries: &[(&str, Bits)]) -> Self {
        Self::new(
            entries.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            EPSILON,
        )
    }

    pub fn get(&self, name: &str) -> Option<Bits> {
        self.entries.iter().find(|(n, _)| n == name).map(|e| e.1)
    }

    pub fn min(&self) -> Option<Bits> {
        self.entries.iter().map(|e| e.1).reduce(f64::min)
    }

    pub fn is_violated(&self) -> bool {
        !self.violated.is_empty()
    }

    /// Same entries judged against another tolerance.
    pub fn rethreshold(&self, tolerance: f64) -> Self {
        Self::new(self.entries.clone(), tolerance)
    }

    pub fn merge(mut self, other: WitnessReport) -> Self {
        self.entries.extend(other.entries);
        Self::new(self.entries, self.tolerance)
    }
}

pub(crate) fn qdpi_from_table(t: &CoherentTable) -> WitnessReport {
    WitnessReport::from_pairs(&[
        ("DP1", t.get(1, 2) - t.get(1, 3)),
        ("DP2", t.get(1, 2) - t.get(1, 4)),
        ("DP3", t.get(1, 3) - t.get(1, 4)),
        ("DP4", t.get(2, 3) - t.get(2, 4)),
    ])
}

pub(crate) fn m4_from_table(t: &CoherentTable) -> Bits {
    t.get(1, 4) + t.get(2, 3) - t.get(1, 3) - t.get(2, 4)
}

/// DP1..DP4: coherent information decreases as later channels are appended.
pub fn qdpi_witnesses(p: &MarkovChainProcess) -> Result<WitnessReport> {
    p.require_len(4)?;
    Ok(qdpi_from_table(&p.coherent_table()?))
}

/// `M4 = I(1:4) + I(2:3) - I(1:3) - I(2:4)`.
pub fn m4_witness(p: &MarkovChainProcess) -> Result<Bits> {
    p.require_len(4)?;
    Ok(m4_from_table(&p.coherent_table()?))
}

/// `DP5 = I(2:3) - I(1:3)`, defined on three or more states.
pub fn dp5(p: &MarkovChainProcess) -> Result<Bits> {
    if p.len() < 3 {
        return Err(Error::WrongLength {
            expected: "at least 3 states".into(),
            found: p.len(),
        });
    }
    let t = p.coherent_table()?;
    Ok(t.get(2, 3) - t.get(1, 3))
}

/// DP5..DP9 on a four-state chain; a three-state chain yields DP5 alone.
pub fn extra_dpi_witnesses(p: &MarkovChainProcess) -> Result<WitnessReport> {
    let t = p.coherent_table()?;
    match p.len() {
        3 => Ok(WitnessReport::from_pairs(&[(
            "DP5",
            t.get(2, 3) - t.get(1, 3),
        )])),
        4 => Ok(WitnessReport::from_pairs(&[
            ("DP5", t.get(2, 3) - t.get(1, 3)),
            ("DP6", t.get(2, 3) - t.get(1, 4)),
            ("DP7", t.get(2, 4) - t.get(1, 4)),
            ("DP8", t.get(3, 4) - t.get(1, 4)),
            ("DP9", t.get(3, 4) - t.get(2, 4)),
        ])),
        n => Err(Error::WrongLength {
            expected: "3 or 4 states".into(),
            found: n,
        }),
    }
}

const M6_LHS: [(usize, usize); 3] = [(1, 6), (2, 5), (3, 4)];
const M6_RHS: [(&str, [(usize, usize); 3]); 2] = [
    ("M6a", [(1, 4), (2, 6), (3, 5)]),
    ("M6b", [(1, 5), (2, 4), (3, 6)]),
];

const M8_LHS: [(usize, usize); 4] = [(1, 8), (2, 7), (3, 6), (4, 5)];
const M8_RHS: [(&str, [(usize, usize); 4]); 7] = [
    ("M8a", [(1, 5), (2, 8), (3, 7), (4, 6)]),
    ("M8b", [(1, 7), (2, 5), (3, 8), (4, 6)]),
    ("M8c", [(1, 6), (2, 8), (3, 5), (4, 7)]),
    ("M8d", [(1, 5), (2, 6), (3, 8), (4, 7)]),
    ("M8e", [(1, 7), (2, 6), (3, 5), (4, 8)]),
    ("M8f", [(1, 6), (2, 5), (3, 7), (4, 8)]),
    ("M8g", [(1, 5), (2, 6), (3, 7), (4, 8)]),
];

/// The two six-state monogamy gaps.
pub fn m6_witnesses(p: &MarkovChainProcess) -> Result<WitnessReport> {
    p.require_len(6)?;
    let t = p.coherent_table()?;
    let lhs = t.sum(&M6_LHS);
    let entries: Vec<(&str, Bits)> = M6_RHS
        .iter()
        .map(|(n, rhs)| (*n, lhs - t.sum(rhs)))
        .collect();
    Ok(WitnessReport::from_pairs(&entries))
}

/// The seven eight-state monogamy gaps.
pub fn m8_witnesses(p: &MarkovChainProcess) -> Result<WitnessReport> {
    p.require_len(8)?;
    let t = p.coherent_table()?;
    let lhs = t.sum(&M8_LHS);
    let entries: Vec<(&str, Bits)> = M8_RHS
        .iter()
        .map(|(n, rhs)| (*n, lhs - t.sum(rhs)))
        .collect();
    Ok(WitnessReport::from_pairs(&entries))
}

/// Largest half-length accepted by the pairing conjecture enumerator.
pub const MAX_CONJECTURE_HALF: usize = 5;

fn check_permutation(f: &[usize]) -> Result<()> {
    let n = f.len();
    let mut seen = vec![false; n];
    for &x in f {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

fn conjecture_half(p: &MarkovChainProcess) -> Result<usize> {
    let len = p.len();
    if !len.is_multiple_of(2) || len / 2 > MAX_CONJECTURE_HALF {
        return Err(Error::WrongLength {
            expected: format!(
                "an even number of states, at most {}",
                2 * MAX_CONJECTURE_HALF
            ),
            found: len,
        });
    }
    Ok(len / 2)
}

pub(crate) fn conjecture_gap_from_table(t: &CoherentTable, f: &[usize]) -> Bits {
    let n = f.len();
    // Earlier half counts backward from the midpoint, later half forward.
    let early = |i: usize| n - i;
    let late = |j: usize| n + 1 + j;
    let matched: Bits = (0..n).map(|i| t.get(early(i), late(i))).sum();
    let permuted: Bits = (0..n).map(|i| t.get(early(i), late(f[i]))).sum();
    matched - permuted
}

/// Gap between the nested pairing and a re-pairing `f` on a chain of `2n` states.
///
/// `f` is a 0-based permutation of `0..n`. Pair `i` joins state `n - i` with state
/// `n + 1 + i`; the re-pairing joins state `n - i` with state `n + 1 + f[i]`.
pub fn monogamy_conjecture_gap(p: &MarkovChainProcess, f: &[usize]) -> Result<Bits> {
    let n = conjecture_half(p)?;
    if f.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    check_permutation(f)?;
    Ok(conjecture_gap_from_table(&p.coherent_table()?, f))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// The smallest conjecture gap over every non-identity permutation (the identity gap is
/// zero by construction), with the minimizing permutation.
pub fn conjecture_minimum(p: &MarkovChainProcess) -> Result<(Bits, Vec<usize>)> {
    let n = conjecture_half(p)?;
    let t = p.coherent_table()?;
    let mut best = (f64::INFINITY, Vec::new());
    for f in permutations(n).into_iter().skip(1) {
        let g = conjecture_gap_from_table(&t, &f);
        if g < best.0 {
            best = (g, f);
        }
    }
    Ok(best)
}

fn require_parts(rho: &DensityMatrix, parts: usize) -> Result<()> {
    if rho.sig().len() != parts {
        return Err(Error::DimensionMismatch(format!(
            "expected a {parts}-partite state, found {} subsystems",
            rho.sig().len()
        )));
    }
    Ok(())
}

/// `I(A:B|C) - I(A:D|C)` where `D` is the output of `ch` applied to `B`; `rho` is over `A (x) B (x) C`.
pub fn cqmi_monotonicity_gap(rho: &DensityMatrix, ch: &KrausChannel) -> Result<Bits> {
    require_parts(rho, 3)?;
    let before = conditional_mutual_information(rho, &[0], &[1], &[2])?;
    let out = ch.apply_to_subsystem(rho, 1)?;
    Ok(before - conditional_mutual_information(&out, &[0], &[1], &[2])?)
}

/// `I(A:B) - I(A:C)` where `C` is the output of `ch` applied to `B`; `rho` is over `A (x) B`.
pub fn mi_dpi_gap(rho: &DensityMatrix, ch: &KrausChannel) -> Result<Bits> {
    require_parts(rho, 2)?;
    let before = mutual_information(rho, &[0], &[1])?;
    let out = ch.apply_to_subsystem(rho, 1)?;
    Ok(before - mutual_information(&out, &[0], &[1])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_unitary;
    use crate::info::{chain_coherent_information, coherent_information};
    use crate::state::maximally_entangled;

    fn unitary_chain(states: usize, seed: u64) -> MarkovChainProcess {
        let chans = (0..states as u64 - 1)
            .map(|i| KrausChannel::unitary(random_unitary(2, seed + i)).unwrap())
            .collect();
        MarkovChainProcess::new(random_density(2, 2, seed).unwrap(), chans).unwrap()
    }

    #[test]
    fn dp5_fails_for_pure_input_and_depolarizing_steps() {
        // I(1:3) vanishes for a pure input, while I(2:3) = 1 - 2 for a maximally mixed
        // qubit sent through a fully depolarizing channel.
        let dep = KrausChannel::fully_depolarizing(2);
        let p =
            MarkovChainProcess::new(DensityMatrix::basis(2, 0).unwrap(), vec![dep.clone(), dep])
                .unwrap();
        assert!((dp5(&p).unwrap() + 1.0).abs() < 1e-9);
        let r = extra_dpi_witnesses(&p).unwrap();
        assert!(r.is_violated());
    }

    #[test]
    fn conjecture_minimum_skips_identity() {
        let p = MarkovChainProcess::random(4, 2, 2, 21).unwrap();
        let (min, f) = conjecture_minimum(&p).unwrap();
        assert_eq!(f, vec![1, 0]);
        assert!((min - m4_witness(&p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn table_matches_direct_chain_values() {
        let p = MarkovChainProcess::random(4, 2, 2, 3).unwrap();
        let t = p.coherent_table().unwrap();
        for r in 1..4 {
            for s in r + 1..=4 {
                let direct = chain_coherent_information(p.initial(), p.channels(), r, s).unwrap();
                assert!((t.get(r, s) - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unitary_chains_saturate_everything() {
        let p = unitary_chain(4, 1);
        for (_, v) in qdpi_witnesses(&p).unwrap().entries {
            assert!(v.abs() < 1e-9);
        }
        assert!(m4_witness(&p).unwrap().abs() < 1e-9);
        for (_, v) in extra_dpi_witnesses(&p).unwrap().entries {
            assert!(v.abs() < 1e-9);
        }
        for (_, v) in m6_witnesses(&unitary_chain(6, 2)).unwrap().entries {
            assert!(v.abs() < 1e-9);
        }
        for (_, v) in m8_witnesses(&unitary_chain(8, 3)).unwrap().entries {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn depolarizing_second_step() {
        let rho = random_density(2, 2, 4).unwrap();
        let l1 = random_kraus_channel(2, 2, 2, 5).unwrap();
        let dep = KrausChannel::fully_depolarizing(2);
        let l3 = random_kraus_channel(2, 2, 2, 6).unwrap();
        let p = MarkovChainProcess::new(rho.clone(), vec![l1.clone(), dep, l3]).unwrap();
        let r = qdpi_witnesses(&p).unwrap();
        // After full depolarization the output is I/2 and the joint state is rho_R (x) I/2,
        // so I(1:3) = 1 - (H(rho_1) + 1) = -H(rho_1).
        let want = coherent_information(&rho, &l1).unwrap() + von_neumann(&rho);
        assert!((r.get("DP1").unwrap() - want).abs() < 1e-9);
        assert!(!r.is_violated());
    }

    #[test]
    fn wrong_lengths_are_rejected() {
        let p = MarkovChainProcess::random(5, 2, 2, 0).unwrap();
        assert!(matches!(qdpi_witnesses(&p), Err(Error::WrongLength { .. })));
        assert!(m6_witnesses(&p).is_err());
        assert!(monogamy_conjecture_gap(&p, &[0, 1]).is_err());
        let p4 = MarkovChainProcess::random(4, 2, 2, 0).unwrap();
        assert!(matches!(
            monogamy_conjecture_gap(&p4, &[0, 0]),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn conjecture_gap_reduces_to_named_witnesses() {
        let p4 = MarkovChainProcess::random(4, 2, 2, 9).unwrap();
        assert_eq!(monogamy_conjecture_gap(&p4, &[0, 1]).unwrap(), 0.0);
        assert!(
            (monogamy_conjecture_gap(&p4, &[1, 0]).unwrap() - m4_witness(&p4).unwrap()).abs()
                < 1e-12
        );
        let p6 = MarkovChainProcess::random(6, 2, 2, 10).unwrap();
        let m6 = m6_witnesses(&p6).unwrap();
        assert!(
            (monogamy_conjecture_gap(&p6, &[1, 2, 0]).unwrap() - m6.get("M6a").unwrap()).abs()
                < 1e-12
        );
        assert!(
            (monogamy_conjecture_gap(&p6, &[2, 0, 1]).unwrap() - m6.get("M6b").unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(2), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn bipartite_gaps() {
        let rho = random_density(4, 4, 2)
            .unwrap()
            .with_signature(DimSignature::new(vec![2, 2]).unwrap())
            .unwrap();
        assert!(mi_dpi_gap(&rho, &KrausChannel::identity(2)).unwrap().abs() < 1e-12);
        let mi = mutual_information(&rho, &[0], &[1]).unwrap();
        assert!(
            (mi_dpi_gap(&rho, &KrausChannel::fully_depolarizing(2)).unwrap() - mi).abs() < 1e-12
        );

        let abc = maximally_entangled(2)
            .unwrap()
            .density()
            .kron(&random_density(2, 2, 1).unwrap());
        assert!(
            cqmi_monotonicity_gap(&abc, &KrausChannel::identity(2))
                .unwrap()
                .abs()
                < 1e-12
        );
        let cmi = conditional_mutual_information(&abc, &[0], &[1], &[2]).unwrap();
        assert!(
            (cqmi_monotonicity_gap(&abc, &KrausChannel::fully_depolarizing(2)).unwrap() - cmi)
                .abs()
                < 1e-12
        );
        assert!(cqmi_monotonicity_gap(&rho, &KrausChannel::identity(2)).is_err());
    }

    #[test]
    fn report_thresholds() {
        let r = WitnessReport::new(vec![("a".into(), -1e-8), ("b".into(), 0.5)], 1e-9);
        assert_eq!(r.violated, vec!["a".to_string()]);
        assert!(!r.rethreshold(1e-7).is_violated());
        assert_eq!(r.min(), Some(-1e-8));
    }
}
