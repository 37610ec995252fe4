//! Joint probability mass functions, Shannon measures and classical Markov chains.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::info::Bits;

/// Sum-to-one tolerance for probability vectors.
pub const PMF_TOL: f64 = 1e-12;

/// A joint pmf over variables with the given alphabet sizes, stored row-major
/// (the first variable is the most significant index).
#[derive(Clone, Debug, PartialEq)]
pub struct JointPMF {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointPMF {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidPmf(format!("alphabet sizes {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if probs.len() != total {
            return Err(Error::InvalidPmf(format!(
                "{} probabilities for {total} outcomes",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -1e-15) {
            return Err(Error::InvalidPmf(format!("entry {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PMF_TOL {
            return Err(Error::InvalidPmf(format!("sums to {sum}")));
        }
        Ok(Self { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_vars(&self) -> usize {
        self.dims.len()
    }

    /// Marginal over `vars` (sorted ascending, deduplicated); an empty set gives the
    /// trivial one-outcome pmf.
    pub fn marginal(&self, vars: &[usize]) -> Result<Vec<f64>> {
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        if let Some(&v) = vars.iter().find(|&&v| v >= self.dims.len()) {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: self.dims.len(),
            });
        }
        let out_len: usize = vars.iter().map(|&v| self.dims[v]).product();
        let mut out = vec![0.0; out_len];
        let n = self.dims.len();
        let mut digits = vec![0usize; n];
        for &p in &self.probs {
            let idx = vars
                .iter()
                .fold(0, |acc, &v| acc * self.dims[v] + digits[v]);
            out[idx] += p;
            for pos in (0..n).rev() {
                digits[pos] += 1;
                if digits[pos] < self.dims[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
        Ok(out)
    }
}

fn entropy_of(p: &[f64]) -> Bits {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Shannon entropy (bits) of the marginal over `vars`.
pub fn shannon_entropy(p: &JointPMF, vars: &[usize]) -> Result<Bits> {
    Ok(entropy_of(&p.marginal(vars)?))
}

fn disjoint(sets: &[&[usize]]) -> Result<Vec<usize>> {
    let mut all: Vec<usize> = Vec::new();
    for s in sets {
        for x in *s {
            if all.contains(x) {
                return Err(Error::OverlappingSubsystems);
            }
            all.push(*x);
        }
    }
    Ok(all)
}

/// `I(A:B) = H(A) + H(B) - H(AB)`.
pub fn classical_mi(p: &JointPMF, a: &[usize], b: &[usize]) -> Result<Bits> {
    let ab = disjoint(&[a, b])?;
    Ok(shannon_entropy(p, a)? + shannon_entropy(p, b)? - shannon_entropy(p, &ab)?)
}

/// `I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)`.
pub fn classical_cmi(p: &JointPMF, a: &[usize], b: &[usize], c: &[usize]) -> Result<Bits> {
    let abc = disjoint(&[a, b, c])?;
    let ac = disjoint(&[a, c])?;
    let bc = disjoint(&[b, c])?;
    Ok(shannon_entropy(p, &ac)? + shannon_entropy(p, &bc)?
        - shannon_entropy(p, &abc)?
        - shannon_entropy(p, c)?)
}

/// True iff `H(X_i | X_{i-1}) - H(X_i | X_{i-1}, ..., X_1) <= tol` for every `i`.
/// Pmfs over fewer than three variables are trivially Markov.
pub fn is_markov(p: &JointPMF, tol: f64) -> bool {
    markov_deviation(p) <= tol
}

/// Largest conditional-entropy gap `I(X_i : X_1..X_{i-2} | X_{i-1})` over `i`.
pub fn markov_deviation(p: &JointPMF) -> Bits {
    (2..p.num_vars())
        .map(|i| {
            let past: Vec<usize> = (0..i - 1).collect();
            classical_cmi(p, &[i], &past, &[i - 1]).expect("disjoint by construction")
        })
        .fold(0.0, f64::max)
}

/// An initial pmf and column-stochastic transitions `T[new][old] = p(x_{i+1} = new | x_i = old)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalChain {
    initial: Vec<f64>,
    transitions: Vec<Vec<Vec<f64>>>,
}

impl ClassicalChain {
    pub fn new(initial: Vec<f64>, transitions: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        JointPMF::new(vec![initial.len()], initial.clone())?;
        let mut d = initial.len();
        for (k, t) in transitions.iter().enumerate() {
            if t.is_empty() || t.iter().any(|row| row.len() != d) {
                return Err(Error::DimensionMismatch(format!(
                    "transition {} must have {d} columns",
                    k + 1
                )));
            }
            for col in 0..d {
                let sum: f64 = t.iter().map(|row| row[col]).sum();
                if t.iter().any(|row| row[col].is_nan() || row[col] < 0.0)
                    || (sum - 1.0).abs() > PMF_TOL
                {
                    return Err(Error::InvalidPmf(format!(
                        "column {col} of transition {} sums to {sum}",
                        k + 1
                    )));
                }
            }
            d = t.len();
        }
        Ok(Self {
            initial,
            transitions,
        })
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn transitions(&self) -> &[Vec<Vec<f64>>] {
        &self.transitions
    }

    pub fn num_vars(&self) -> usize {
        self.transitions.len() + 1
    }
}

/// `p(x_1, ..., x_n) = p(x_1) prod p(x_{i+1} | x_i)`.
pub fn joint_from_chain(c: &ClassicalChain) -> JointPMF {
    let mut dims = vec![c.initial.len()];
    let mut probs = c.initial.clone();
    for t in &c.transitions {
        let (d_old, d_new) = (*dims.last().expect("non-empty"), t.len());
        let mut next = Vec::with_capacity(probs.len() * d_new);
        for (idx, &p) in probs.iter().enumerate() {
            let old = idx % d_old;
            for row in t {
                next.push(p * row[old]);
            }
        }
        dims.push(d_new);
        probs = next;
    }
    JointPMF { dims, probs }
}

fn dirichlet_uniform(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Random chain of `vars` variables over a common alphabet; the initial pmf and every
/// transition column are uniform on the simplex.
pub fn random_chain(vars: usize, alphabet: usize, seed: u64) -> Result<ClassicalChain> {
    if vars == 0 || alphabet == 0 {
        return Err(Error::OutOfRange(format!(
            "vars={vars}, alphabet={alphabet}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = dirichlet_uniform(&mut rng, alphabet);
    let transitions = (1..vars)
        .map(|_| {
            let cols: Vec<Vec<f64>> = (0..alphabet)
                .map(|_| dirichlet_uniform(&mut rng, alphabet))
                .collect();
            (0..alphabet)
                .map(|new| cols.iter().map(|c| c[new]).collect())
                .collect()
        })
        .collect();
    ClassicalChain::new(initial, transitions)
}

/// `sum_i I(X_i:Y_i) - sum_i I(X_i:Y_f(i))` over `2n` variables.
///
/// `f` is a 0-based permutation of `0..n`. `X_i` (0-based `i`) is variable `n - 1 - i`
/// and `Y_j` is variable `n + j`, so `X` counts backward from the midpoint.
pub fn cmmi_gap(p: &JointPMF, f: &[usize]) -> Result<Bits> {
    let vars = p.num_vars();
    if !vars.is_multiple_of(2) {
        return Err(Error::WrongLength {
            expected: "an even number of variables".into(),
            found: vars,
        });
    }
    let n = vars / 2;
    let mut seen = vec![false; n];
    if f.len() != n
        || f.iter()
            .any(|&x| x >= n || std::mem::replace(&mut seen[x], true))
    {
        return Err(Error::InvalidPermutation(n));
    }
    let x = |i: usize| n - 1 - i;
    let y = |j: usize| n + j;
    let mut gap = 0.0;
    for (i, &fi) in f.iter().enumerate() {
        gap += classical_mi(p, &[x(i)], &[y(i)])?;
        gap -= classical_mi(p, &[x(i)], &[y(fi)])?;
    }
    Ok(gap)
}
