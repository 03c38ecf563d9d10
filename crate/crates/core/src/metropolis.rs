//! The unlumped Metropolis chain on permutations (small n only) and the
//! spectral formula for multi-step probabilities of its cycle-type lumping.

use std::fmt;

use num_traits::{One, Zero};

use crate::chain::{chain_step_distribution, k_chain};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::measure::Level;
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{binomial2, ensure_chain_alpha, factorial, pow, Residual, Scalar};
use crate::stein::w_raw;
use crate::theta::ThetaTable;

pub const MAX_TOY_DEGREE: usize = 5;

/// A permutation of {1..n} in one-line notation, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from disjoint cycles written one-based.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                map[x - 1] = cyc[(k + 1) % cyc.len()] - 1;
            }
        }
        Perm(map)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_multiset(self.cycles().iter().map(Vec::len).collect())
    }

    /// `x·(i j)`: apply the transposition first, then `x`.
    pub fn times_transposition(&self, i: usize, j: usize) -> Perm {
        let mut out = self.0.clone();
        out.swap(i, j);
        Perm(out)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation without fixed points, `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// All permutations of {1..n} in lexicographic one-line order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(Perm(prefix.clone()));
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

#[derive(Debug, Clone)]
pub struct PermChain {
    pub states: Vec<Perm>,
    pub matrix: RatMatrix,
}

impl PermChain {
    pub fn position(&self, x: &Perm) -> Option<usize> {
        self.states.iter().position(|s| s == x)
    }
}

/// Metropolis chain for π(x) ∝ α^{−c(x)} with a uniform random transposition
/// proposal, applying the acceptance rule case by case.
pub fn t_chain_toy(n: usize, alpha: &Scalar) -> Result<PermChain> {
    if n > MAX_TOY_DEGREE {
        return Err(Error::DegreeTooLarge {
            n,
            max: MAX_TOY_DEGREE,
        });
    }
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    ensure_chain_alpha(alpha)?;
    let states = all_perms(n);
    let total = binomial2(n);
    let mut matrix = RatMatrix::zeros(states.len(), states.len());
    for (a, x) in states.iter().enumerate() {
        let cx = x.cycle_count();
        let mut hold = Scalar::zero();
        for i in 0..n {
            for j in i + 1..n {
                let y = x.times_transposition(i, j);
                let b = states.binary_search(&y).expect("permutation of n");
                if y.cycle_count() < cx {
                    matrix[(a, b)] += total.recip();
                } else {
                    let accept = alpha.recip();
                    hold += (Scalar::one() - &accept) / &total;
                    matrix[(a, b)] += accept / &total;
                }
            }
        }
        matrix[(a, a)] += hold;
    }
    Ok(PermChain { states, matrix })
}

/// Sums each row of the permutation chain over cycle-type classes. Fails with
/// a witness if two permutations of one class give different lumped rows.
pub fn lump_by_cycle_type(chain: &PermChain) -> Result<RatMatrix> {
    let n = chain.states.first().map_or(0, Perm::degree);
    let index = PartitionIndex::new(n);
    let class: Vec<usize> = chain
        .states
        .iter()
        .map(|x| index.position(&x.cycle_type()).expect("size n"))
        .collect();
    let mut out: Vec<Option<Vec<Scalar>>> = vec![None; index.len()];
    for (a, &ca) in class.iter().enumerate() {
        let mut row = vec![Scalar::zero(); index.len()];
        for (b, &cb) in class.iter().enumerate() {
            row[cb] += &chain.matrix[(a, b)];
        }
        match &out[ca] {
            None => out[ca] = Some(row),
            Some(prev) if *prev == row => {}
            Some(_) => {
                return Err(Error::MalformedTable(format!(
                    "rows of class {} disagree at {}",
                    index.get(ca),
                    chain.states[a]
                )))
            }
        }
    }
    Ok(RatMatrix::from_rows(
        out.into_iter()
            .map(|r| r.expect("every class occurs"))
            .collect(),
    ))
}

/// Right-hand side of the spectral formula: the chance of reaching μ from
/// (1^n) in r steps equals
/// α^n n! Σ_ρ θ^ρ_μ / (c_ρ c'_ρ) · ((αn(ρ') − n(ρ)) / (αC(n,2)))^r.
pub fn hanlon_spectral(theta: &ThetaTable, r: usize) -> Result<Vec<Scalar>> {
    let n = theta.degree();
    let alpha = theta.alpha();
    let level = Level::new(n, alpha)?;
    let pi = level.measure();
    let scale = alpha * binomial2(n);
    let eig: Vec<Scalar> = level
        .index
        .partitions()
        .iter()
        .map(|rho| pow(&(w_raw(rho, alpha) / &scale), r))
        .collect();
    Ok((0..level.len())
        .map(|mu| {
            (0..level.len())
                .map(|rho| &pi[rho] * theta.at(rho, mu) * &eig[rho])
                .sum()
        })
        .collect())
}

/// Compares r-step probabilities of the lumped chain from (1^n) with
/// [`hanlon_spectral`] for every target μ.
pub fn hanlon_identity_check(
    n: usize,
    alpha: &Scalar,
    r: usize,
    theta: &ThetaTable,
) -> Result<Residual> {
    theta.ensure_matches(n, alpha)?;
    let k = k_chain(n, alpha)?;
    let lhs = chain_step_distribution(&k, &Partition::column(n), r)?;
    let rhs = hanlon_spectral(theta, r)?;
    let mut res = Residual::new();
    for (i, mu) in theta.index().partitions().iter().enumerate() {
        res.record(&lhs.probs[i], &rhs[i], || format!("mu = {mu}, r = {r}"));
    }
    Ok(res)
}

/// Size of the conjugacy class of cycle type μ.
pub fn class_size(mu: &Partition) -> Scalar {
    Scalar::from_integer(factorial(mu.size())) / Scalar::from_integer(mu.z_stat())
}
