//! Exact transition matrices on partitions of `n`: the down-up chain M, the
//! θ-defined chain L and the lumped Metropolis chain K.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hook::{dim_alpha, psi_prime, psi_prime_at};
use crate::io::{matrix_from_csv, matrix_to_csv};
use crate::linalg::RatMatrix;
use crate::measure::{jack_measure, DistOverPartitions, Level};
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{binomial2, ensure_chain_alpha, factorial, pow, powi, uint, Residual, Scalar};
use crate::theta::{standard_shape, ThetaTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    M,
    L,
    K,
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChainKind::M => "M",
            ChainKind::L => "L",
            ChainKind::K => "K",
        };
        f.write_str(s)
    }
}

impl FromStr for ChainKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "M" | "m" => Ok(ChainKind::M),
            "L" | "l" => Ok(ChainKind::L),
            "K" | "k" => Ok(ChainKind::K),
            other => Err(format!("unknown chain kind {other:?}, expected M, L or K")),
        }
    }
}

type SparseRow = Vec<(usize, Scalar)>;

/// Square transition matrix over the partitions of `n` in canonical order,
/// stored by rows with zero entries omitted.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    alpha: Scalar,
    kind: ChainKind,
    index: PartitionIndex,
    rows: Vec<SparseRow>,
}

impl PartialEq for TransitionMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.alpha == other.alpha
            && self.kind == other.kind
            && self.rows == other.rows
    }
}

impl TransitionMatrix {
    fn from_rows(
        n: usize,
        alpha: &Scalar,
        kind: ChainKind,
        rows: Vec<BTreeMap<usize, Scalar>>,
    ) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        TransitionMatrix {
            n,
            alpha: alpha.clone(),
            kind,
            index: PartitionIndex::new(n),
            rows,
        }
    }

    pub fn from_dense(n: usize, alpha: &Scalar, kind: ChainKind, m: &RatMatrix) -> Result<Self> {
        let index = PartitionIndex::new(n);
        if m.rows() != index.len() || m.cols() != index.len() {
            return Err(Error::MalformedTable(format!(
                "{}x{} matrix for {} partitions of {n}",
                m.rows(),
                m.cols(),
                index.len()
            )));
        }
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().cloned().enumerate().collect())
            .collect();
        Ok(Self::from_rows(n, alpha, kind, rows))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn index(&self) -> &PartitionIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.rows[i]
    }

    pub fn at(&self, i: usize, j: usize) -> Scalar {
        self.rows[i]
            .binary_search_by_key(&j, |(k, _)| *k)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn get(&self, from: &Partition, to: &Partition) -> Scalar {
        match (self.index.position(from), self.index.position(to)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => Scalar::zero(),
        }
    }

    pub fn to_dense(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.len(), self.len());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }

    /// `(T f)(λ) = Σ_ρ T(λ, ρ) f(ρ)`.
    pub fn apply(&self, f: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(j, v)| v * &f[*j]).sum())
            .collect()
    }

    /// `(v T)(ρ) = Σ_λ v(λ) T(λ, ρ)`.
    pub fn left_apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (j, t) in row {
                out[*j] += &v[i] * t;
            }
        }
        out
    }

    pub fn check_row_sums(&self) -> Residual {
        let mut res = Residual::new();
        let one = Scalar::one();
        for (i, row) in self.rows.iter().enumerate() {
            let s: Scalar = row.iter().map(|(_, v)| v).sum();
            res.record(&s, &one, || format!("row {}", self.index.get(i)));
        }
        res
    }

    /// `w(λ) T(λ,ρ) = w(ρ) T(ρ,λ)` over all pairs.
    pub fn check_detailed_balance(&self, weights: &[Scalar]) -> Residual {
        let mut res = Residual::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let lhs = &weights[i] * self.at(i, j);
                let rhs = &weights[j] * self.at(j, i);
                res.record(&lhs, &rhs, || {
                    format!("({}, {})", self.index.get(i), self.index.get(j))
                });
            }
        }
        res
    }

    /// `w T = w`.
    pub fn check_stationary(&self, weights: &[Scalar]) -> Residual {
        let mut res = Residual::new();
        for (j, (got, want)) in self.left_apply(weights).iter().zip(weights).enumerate() {
            res.record(got, want, || format!("column {}", self.index.get(j)));
        }
        res
    }

    /// First negative entry, skipping the diagonal unless asked.
    pub fn first_negative(&self, include_diagonal: bool) -> Option<(Partition, Partition, Scalar)> {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                if (include_diagonal || i != *j) && v.is_negative() {
                    return Some((
                        self.index.get(i).clone(),
                        self.index.get(*j).clone(),
                        v.clone(),
                    ));
                }
            }
        }
        None
    }

    /// Smallest diagonal entry with the partition where it occurs.
    pub fn min_diagonal(&self) -> Option<(Partition, Scalar)> {
        (0..self.len())
            .map(|i| (self.index.get(i).clone(), self.at(i, i)))
            .min_by(|a, b| a.1.cmp(&b.1))
    }

    pub fn to_csv(&self) -> String {
        matrix_to_csv("from\\to", self.index.partitions(), |i, j| self.at(i, j))
    }

    pub fn from_csv(text: &str, alpha: &Scalar, kind: ChainKind) -> Result<Self> {
        let (labels, m) = matrix_from_csv(text)?;
        let n = labels.first().map_or(0, Partition::size);
        if labels.as_slice() != PartitionIndex::new(n).partitions() {
            return Err(Error::MalformedTable(
                "labels are not the partitions of n in canonical order".into(),
            ));
        }
        Self::from_dense(n, alpha, kind, &m)
    }
}

fn require_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    Ok(())
}

/// M(λ,ρ) = c'_λ/(αn c_ρ) Σ_τ ψ'_{λ/τ} ψ'_{ρ/τ} c_τ/c'_τ, the sum running over
/// partitions τ of n−1 contained in both.
pub fn m_chain(n: usize, alpha: &Scalar) -> Result<TransitionMatrix> {
    ensure_chain_alpha(alpha)?;
    require_degree(n)?;
    let top = Level::new(n, alpha)?;
    let below = Level::new(n - 1, alpha)?;
    let an = alpha * uint(n);
    let rows = top
        .index
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, lambda)| {
            let mut acc = BTreeMap::new();
            for (r, tau) in lambda.removable() {
                let t = below.pos(&tau);
                let down = psi_prime_at(lambda, r, lambda.part(r), alpha) * &below.c[t]
                    / &below.c_prime[t];
                for (r2, rho) in tau.addable() {
                    let j = top.pos(&rho);
                    let w = &down * psi_prime_at(&rho, r2, rho.part(r2), alpha) / &top.c[j];
                    *acc.entry(j).or_insert_with(Scalar::zero) += w;
                }
            }
            let pre = &top.c_prime[i] / &an;
            acc.into_iter().map(|(j, v)| (j, v * &pre)).collect()
        })
        .collect();
    Ok(TransitionMatrix::from_rows(n, alpha, ChainKind::M, rows))
}

/// Probability of removing a box from λ to reach τ: ψ'_{λ/τ} dim(τ)/dim(λ).
pub fn down_probability(lambda: &Partition, tau: &Partition, alpha: &Scalar) -> Result<Scalar> {
    Ok(psi_prime(lambda, tau, alpha)? * dim_alpha(tau, alpha)? / dim_alpha(lambda, alpha)?)
}

/// Probability of adding a box to τ to reach ρ, written through the measures
/// at both levels: ψ'_{ρ/τ} π(ρ) dim(τ) / (π(τ) dim(ρ)).
pub fn up_probability_via_measure(
    tau: &Partition,
    rho: &Partition,
    alpha: &Scalar,
) -> Result<Scalar> {
    Ok(
        psi_prime(rho, tau, alpha)? * jack_measure(rho, alpha)? * dim_alpha(tau, alpha)?
            / (jack_measure(tau, alpha)? * dim_alpha(rho, alpha)?),
    )
}

/// M built as an explicit down step followed by an up step. Shares no code
/// with [`m_chain`] beyond ψ'.
pub fn m_chain_down_up(n: usize, alpha: &Scalar) -> Result<TransitionMatrix> {
    ensure_chain_alpha(alpha)?;
    require_degree(n)?;
    let index = PartitionIndex::new(n);
    let mut rows = Vec::with_capacity(index.len());
    for lambda in index.partitions() {
        let mut acc = BTreeMap::new();
        for (_, tau) in lambda.removable() {
            let down = down_probability(lambda, &tau, alpha)?;
            for (_, rho) in tau.addable() {
                let up = up_probability_via_measure(&tau, &rho, alpha)?;
                *acc.entry(index.position(&rho).expect("size n"))
                    .or_insert_with(Scalar::zero) += &down * up;
            }
        }
        rows.push(acc);
    }
    Ok(TransitionMatrix::from_rows(n, alpha, ChainKind::M, rows))
}

/// L(λ,ρ) = (c_ρ c'_ρ α^n n!)^{-1} Σ_μ z_μ² α^{2l(μ)} θ^λ_μ θ^ρ_μ θ^{(n−1,1)}_μ.
pub fn l_chain(n: usize, alpha: &Scalar, theta: &ThetaTable) -> Result<TransitionMatrix> {
    ensure_chain_alpha(alpha)?;
    require_degree(n)?;
    theta.ensure_matches(n, alpha)?;
    let level = Level::new(n, alpha)?;
    let parts = level.index.partitions();
    let std = level.pos(&standard_shape(n));
    let weights: Vec<Scalar> = parts
        .iter()
        .enumerate()
        .map(|(k, mu)| {
            let z = Scalar::from_integer(mu.z_stat());
            &z * &z * pow(alpha, 2 * mu.length()) * theta.at(std, k)
        })
        .collect();
    let scale = pow(alpha, n) * Scalar::from_integer(factorial(n));
    let rows = (0..parts.len())
        .map(|i| {
            let wi: Vec<Scalar> = weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * theta.at(i, k))
                .collect();
            (0..parts.len())
                .map(|j| {
                    let s: Scalar = wi.iter().enumerate().map(|(k, w)| w * theta.at(j, k)).sum();
                    (j, s / (&level.c[j] * &level.c_prime[j] * &scale))
                })
                .collect()
        })
        .collect();
    Ok(TransitionMatrix::from_rows(n, alpha, ChainKind::L, rows))
}

/// Cycle-type lumping of the Metropolis chain for π(x) ∝ α^{−c(x)} driven by
/// uniform random transpositions. Entries come from counting transpositions:
/// joining cycles of lengths a and b has a·b choices, splitting a c-cycle into
/// lengths k and c−k has c choices (c/2 when k = c−k). Splits are accepted
/// with probability 1/α; the rejected mass stays put.
pub fn k_chain(n: usize, alpha: &Scalar) -> Result<TransitionMatrix> {
    ensure_chain_alpha(alpha)?;
    require_degree(n)?;
    let index = PartitionIndex::new(n);
    let total = binomial2(n);
    let split_total = alpha * &total;
    let rows = index
        .partitions()
        .iter()
        .map(|mu| {
            let parts = mu.parts();
            let mut acc = BTreeMap::new();
            let mut add = |nu: Partition, w: Scalar| {
                *acc.entry(index.position(&nu).expect("size n"))
                    .or_insert_with(Scalar::zero) += w;
            };
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    let mut next: Vec<usize> = parts.to_vec();
                    next[i] += next[j];
                    next.remove(j);
                    add(
                        Partition::from_multiset(next),
                        uint(parts[i] * parts[j]) / &total,
                    );
                }
            }
            for (i, &c) in parts.iter().enumerate() {
                for k in 1..=c / 2 {
                    let choices = if 2 * k == c {
                        uint(c) / uint(2)
                    } else {
                        uint(c)
                    };
                    let mut next = parts.to_vec();
                    next[i] = k;
                    next.push(c - k);
                    add(Partition::from_multiset(next), choices / &split_total);
                }
            }
            let same_cycle = uint(mu.conjugate().n_stat());
            add(
                mu.clone(),
                (alpha - Scalar::one()) * same_cycle / &split_total,
            );
            acc
        })
        .collect();
    Ok(TransitionMatrix::from_rows(n, alpha, ChainKind::K, rows))
}

/// Stationary law of [`k_chain`]: proportional to (n!/z_μ)·α^{−l(μ)}.
pub fn k_stationary(n: usize, alpha: &Scalar) -> Vec<Scalar> {
    let nf = Scalar::from_integer(factorial(n));
    let w: Vec<Scalar> = PartitionIndex::new(n)
        .partitions()
        .iter()
        .map(|mu| &nf / Scalar::from_integer(mu.z_stat()) * powi(alpha, -(mu.length() as i64)))
        .collect();
    let s: Scalar = w.iter().sum();
    w.into_iter().map(|x| x / &s).collect()
}

/// Law after `r` steps from `start`, by repeated exact vector-matrix products.
pub fn chain_step_distribution(
    t: &TransitionMatrix,
    start: &Partition,
    r: usize,
) -> Result<DistOverPartitions> {
    if start.size() != t.degree() {
        return Err(Error::SizeMismatch(
            start.clone(),
            Partition::row(t.degree()),
        ));
    }
    let mut dist = DistOverPartitions::point_mass(t.degree(), t.alpha(), start);
    for _ in 0..r {
        dist.probs = t.left_apply(&dist.probs);
    }
    Ok(dist)
}
