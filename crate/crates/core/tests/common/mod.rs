//! Reference computations shared by the integration suites.
//!
//! The chain oracle keeps one global pure vector over `R, S, E1, ..., E_{n-1}`, where each
//! step applies the channel's Kraus isometry `|psi> -> sum_k K_k |psi> (x) |k>` and keeps
//! the new environment register. Every entropy comes from a reduced state of that vector,
//! so nothing here goes through the library's sequential coherent-information path.

#![allow(dead_code)]

use qmonogamy::tensor::hermitian_eigenvalues;
use qmonogamy::{ComplexMatrix, MarkovChainProcess, C64};

pub struct DilatedChain {
    vec: Vec<C64>,
    dims: Vec<usize>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}

impl DilatedChain {
    pub fn new(p: &MarkovChainProcess) -> Self {
        let rho = p.initial().matrix();
        let d = rho.rows();
        let spec = qmonogamy::hermitian_eig(rho).unwrap();
        // sum_x sqrt(l_x) |x>_R |v_x>_S
        let mut vec = vec![C64::new(0.0, 0.0); d * d];
        for x in 0..d {
            let l = spec.eigenvalues[x].max(0.0).sqrt();
            let v = spec.eigenvector(x);
            for s in 0..d {
                vec[x * d + s] = v[s] * l;
            }
        }
        let mut chain = Self {
            vec,
            dims: vec![d, d],
        };
        for ch in p.channels() {
            chain.step(ch.kraus_ops());
        }
        chain
    }

    fn step(&mut self, kraus: &[ComplexMatrix]) {
        let d_out = kraus[0].rows();
        let k = kraus.len();
        let old_dims = self.dims.clone();
        let mut new_dims = old_dims.clone();
        new_dims[1] = d_out;
        new_dims.push(k);
        let total: usize = new_dims.iter().product();
        let old_strides = strides(&old_dims);
        let mut out = vec![C64::new(0.0, 0.0); total];
        for (idx, slot) in out.iter_mut().enumerate() {
            let dg = digits(idx, &new_dims);
            let (s_new, kk) = (dg[1], dg[dg.len() - 1]);
            let mut base = 0;
            for i in 0..old_dims.len() {
                if i != 1 {
                    base += dg[i] * old_strides[i];
                }
            }
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..old_dims[1] {
                acc += kraus[kk][(s_new, s)] * self.vec[base + s * old_strides[1]];
            }
            *slot = acc;
        }
        self.vec = out;
        self.dims = new_dims;
    }

    /// Register index of environment `E_i` (1-based).
    pub fn env(i: usize) -> usize {
        1 + i
    }

    fn offsets(&self, regs: &[usize]) -> Vec<usize> {
        let st = strides(&self.dims);
        let dims: Vec<usize> = regs.iter().map(|&i| self.dims[i]).collect();
        let total: usize = dims.iter().product();
        (0..total)
            .map(|a| {
                let d = digits(a, &dims);
                regs.iter().zip(d).map(|(&i, x)| x * st[i]).sum()
            })
            .collect()
    }

    pub fn reduced(&self, keep: &[usize]) -> ComplexMatrix {
        let rest: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        let (ko, ro) = (self.offsets(keep), self.offsets(&rest));
        let mut rho = ComplexMatrix::zeros(ko.len(), ko.len());
        for (i, &a) in ko.iter().enumerate() {
            for (j, &b) in ko.iter().enumerate().skip(i) {
                let v: C64 = ro
                    .iter()
                    .map(|&r| self.vec[a + r] * self.vec[b + r].conj())
                    .sum();
                rho[(i, j)] = v;
                rho[(j, i)] = v.conj();
            }
        }
        rho
    }

    pub fn entropy(&self, regs: &[usize]) -> f64 {
        // The global vector is pure, so either side of the cut has the same spectrum.
        let rest: Vec<usize> = (0..self.dims.len()).filter(|i| !regs.contains(i)).collect();
        let size = |x: &[usize]| x.iter().map(|&i| self.dims[i]).product::<usize>();
        let side = if size(&rest) < size(regs) {
            rest
        } else {
            regs.to_vec()
        };
        if side.is_empty() {
            return 0.0;
        }
        hermitian_eigenvalues(&self.reduced(&side))
            .unwrap()
            .into_iter()
            .filter(|&l| l > 1e-14)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// `I(A:B|C)` over environment labels (1-based).
    pub fn env_cmi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let m = |x: &[usize]| x.iter().map(|&i| Self::env(i)).collect::<Vec<_>>();
        let (a, b, c) = (m(a), m(b), m(c));
        let join = |x: &[usize], y: &[usize]| [x, y].concat();
        self.entropy(&join(&a, &c)) + self.entropy(&join(&b, &c))
            - self.entropy(&join(&join(&a, &b), &c))
            - self.entropy(&c)
    }

    /// `I(r:last)`: with the reference `R E_1 .. E_{r-1}` purifying the `r`-th state,
    /// this is `H(S) - H(R E_1 .. E_{r-1} S)` on the final vector.
    pub fn coherent_from(&self, r: usize) -> f64 {
        let mut refs: Vec<usize> = vec![0];
        refs.extend((1..r).map(Self::env));
        refs.push(1);
        self.entropy(&[1]) - self.entropy(&refs)
    }

    pub fn env_conditional_entropy(&self, a: &[usize], b: &[usize]) -> f64 {
        let m = |x: &[usize]| x.iter().map(|&i| Self::env(i)).collect::<Vec<_>>();
        let (a, b) = (m(a), m(b));
        self.entropy(&[a, b.clone()].concat()) - self.entropy(&b)
    }
}

/// The chain cut after its `states`-th state.
pub fn prefix(p: &MarkovChainProcess, states: usize) -> MarkovChainProcess {
    MarkovChainProcess::new(p.initial().clone(), p.channels()[..states - 1].to_vec()).unwrap()
}

/// `I(r:s)` from the dilated oracle.
pub fn oracle_coherent(p: &MarkovChainProcess, r: usize, s: usize) -> f64 {
    DilatedChain::new(&prefix(p, s)).coherent_from(r)
}

type Term = (&'static [usize], &'static [usize], &'static [usize]);

/// Sums of conditional mutual informations between environments that equal each
/// monogamy gap on a Markov chain.
pub fn certificate_terms(name: &str) -> Vec<Term> {
    const MID6: &[usize] = &[2, 3, 4];
    const MID8: &[usize] = &[2, 3, 4, 5, 6];
    let base8: Term = (&[1], &[7], MID8);
    match name {
        "M4" => vec![(&[1], &[3], &[2])],
        "M6a" => vec![(&[1], &[5], MID6), (&[1, 2], &[4], &[3])],
        "M6b" => vec![(&[1], &[5], MID6), (&[2], &[4, 5], &[3])],
        "M8a" => vec![base8, (&[1, 2], &[6], &[3, 4, 5]), (&[1, 2, 3], &[5], &[4])],
        "M8b" => vec![base8, (&[2], &[6, 7], &[3, 4, 5]), (&[2, 3], &[5], &[4])],
        "M8c" => vec![base8, (&[1, 2], &[6], &[3, 4, 5]), (&[3], &[5, 6], &[4])],
        "M8d" => vec![
            base8,
            (&[2], &[6, 7], &[3, 4, 5]),
            (&[1, 2, 3], &[5, 6], &[4]),
        ],
        "M8e" => vec![base8, (&[2], &[6, 7], &[3, 4, 5]), (&[3], &[5, 6, 7], &[4])],
        "M8f" => vec![
            base8,
            (&[1, 2], &[6], &[3, 4, 5]),
            (&[2, 3], &[5, 6, 7], &[4]),
        ],
        "M8g" => vec![
            base8,
            (&[1, 2, 3], &[5, 6], &[4]),
            (&[2], &[6, 7], &[3, 4, 5]),
            (&[3], &[7], &[4, 5, 6]),
        ],
        other => panic!("no certificate for {other}"),
    }
}

pub fn certificate(chain: &DilatedChain, name: &str) -> f64 {
    certificate_terms(name)
        .into_iter()
        .map(|(a, b, c)| chain.env_cmi(a, b, c))
        .sum()
}
