//! Exact sequential sampling of Jack-distributed partitions by growing the
//! diagram one box at a time, and the one-step exchangeable pair.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::chain::down_probability;
use crate::error::{Error, Result};
use crate::hook::{c_product, psi_prime_at};
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{ensure_chain_alpha, ensure_positive, to_f64, Residual, Scalar};

/// ∅ = λ⁽⁰⁾ ⊂ λ⁽¹⁾ ⊂ … ⊂ λ⁽ⁿ⁾, one box at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPath {
    shapes: Vec<Partition>,
}

impl GrowthPath {
    pub fn new(shapes: Vec<Partition>) -> Result<Self> {
        if shapes.first() != Some(&Partition::empty()) {
            return Err(Error::MalformedTable(
                "growth path must start at the empty partition".into(),
            ));
        }
        for w in shapes.windows(2) {
            if w[1].removed_cell(&w[0]).is_none() {
                return Err(Error::NotSingleBoxSkew {
                    outer: w[1].clone(),
                    inner: w[0].clone(),
                });
            }
        }
        Ok(GrowthPath { shapes })
    }

    pub fn shapes(&self) -> &[Partition] {
        &self.shapes
    }

    pub fn last(&self) -> &Partition {
        self.shapes.last().expect("path is never empty")
    }
}

/// Exact up-step law out of τ: ρ = τ + box with probability ψ'_{ρ/τ} c_τ/c_ρ.
pub fn up_probabilities(tau: &Partition, alpha: &Scalar) -> Result<Vec<(Partition, Scalar)>> {
    let c_tau = c_product(tau, alpha)?;
    tau.addable()
        .into_iter()
        .map(|(r, rho)| {
            let p = psi_prime_at(&rho, r, rho.part(r), alpha) * &c_tau / c_product(&rho, alpha)?;
            Ok((rho, p))
        })
        .collect()
}

/// Checks that the up-step law out of every partition of size ≤ `max_size`
/// sums to one.
pub fn check_up_sums(max_size: usize, alpha: &Scalar) -> Result<Residual> {
    let one = Scalar::one();
    let mut res = Residual::new();
    for k in 0..=max_size {
        for tau in PartitionIndex::new(k).partitions() {
            let s: Scalar = up_probabilities(tau, alpha)?
                .into_iter()
                .map(|(_, p)| p)
                .sum();
            res.record(&s, &one, || format!("out of {tau}"));
        }
    }
    Ok(res)
}

type Cumulative = Vec<(Partition, f64)>;

/// Caches step laws as cumulative floating-point tables. Probabilities are
/// exact until the final conversion.
#[derive(Debug, Clone)]
pub struct GrowthSampler {
    alpha: Scalar,
    up: HashMap<Partition, Cumulative>,
    down: HashMap<Partition, Cumulative>,
}

fn cumulative(entries: Vec<(Partition, Scalar)>) -> Cumulative {
    let mut acc = Scalar::zero();
    entries
        .into_iter()
        .map(|(p, q)| {
            acc += q;
            (p, to_f64(&acc))
        })
        .collect()
}

fn draw<R: Rng + ?Sized>(table: &Cumulative, rng: &mut R) -> Partition {
    let u: f64 = rng.random();
    table
        .iter()
        .find(|(_, c)| u < *c)
        .unwrap_or_else(|| table.last().expect("nonempty step law"))
        .0
        .clone()
}

impl GrowthSampler {
    pub fn new(alpha: &Scalar) -> Result<Self> {
        ensure_positive(alpha)?;
        Ok(GrowthSampler {
            alpha: alpha.clone(),
            up: HashMap::new(),
            down: HashMap::new(),
        })
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    fn up_table(&mut self, tau: &Partition) -> &Cumulative {
        let alpha = &self.alpha;
        self.up.entry(tau.clone()).or_insert_with(|| {
            cumulative(up_probabilities(tau, alpha).expect("alpha checked at construction"))
        })
    }

    fn down_table(&mut self, lambda: &Partition) -> &Cumulative {
        let alpha = &self.alpha;
        self.down.entry(lambda.clone()).or_insert_with(|| {
            cumulative(
                lambda
                    .removable()
                    .into_iter()
                    .map(|(_, tau)| {
                        let p = down_probability(lambda, &tau, alpha).expect("alpha checked");
                        (tau, p)
                    })
                    .collect(),
            )
        })
    }

    pub fn step_up<R: Rng + ?Sized>(&mut self, tau: &Partition, rng: &mut R) -> Partition {
        let table = self.up_table(tau);
        draw(table, rng)
    }

    pub fn step_down<R: Rng + ?Sized>(&mut self, lambda: &Partition, rng: &mut R) -> Partition {
        let table = self.down_table(lambda);
        draw(table, rng)
    }

    pub fn grow<R: Rng + ?Sized>(&mut self, n: usize, rng: &mut R) -> GrowthPath {
        let mut shapes = Vec::with_capacity(n + 1);
        shapes.push(Partition::empty());
        for _ in 0..n {
            let next = self.step_up(shapes.last().expect("nonempty"), rng);
            shapes.push(next);
        }
        GrowthPath { shapes }
    }

    /// One step of the down-up chain from λ.
    pub fn step_down_up<R: Rng + ?Sized>(&mut self, lambda: &Partition, rng: &mut R) -> Partition {
        let tau = self.step_down(lambda, rng);
        self.step_up(&tau, rng)
    }
}

pub fn grow_sample<R: Rng + ?Sized>(n: usize, alpha: &Scalar, rng: &mut R) -> Result<GrowthPath> {
    Ok(GrowthSampler::new(alpha)?.grow(n, rng))
}

/// λ from the Jack measure, λ* one down-up step away from it.
pub fn exchangeable_pair_sample<R: Rng + ?Sized>(
    n: usize,
    alpha: &Scalar,
    rng: &mut R,
) -> Result<(Partition, Partition)> {
    ensure_chain_alpha(alpha)?;
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    let mut s = GrowthSampler::new(alpha)?;
    let lambda = s.grow(n, rng).last().clone();
    let star = s.step_down_up(&lambda, rng);
    Ok((lambda, star))
}
