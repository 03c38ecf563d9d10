//! Homogeneous symmetric functions in the power-sum basis.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{int, pow, Scalar};

/// Σ_μ f_μ p_μ over partitions μ of a fixed degree. Absent keys are zero.
#[derive(Clone, PartialEq)]
pub struct PowerSumExpr {
    degree: usize,
    coeffs: BTreeMap<Partition, Scalar>,
}

impl PowerSumExpr {
    pub fn zero(degree: usize) -> Self {
        PowerSumExpr {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The single power sum p_μ.
    pub fn power_sum(mu: &Partition) -> Self {
        let mut e = Self::zero(mu.size());
        e.coeffs.insert(mu.clone(), Scalar::one());
        e
    }

    /// Builds an expression from (μ, coefficient) pairs; all μ must have size
    /// `degree`.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Partition, Scalar)>,
    ) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (mu, c) in terms {
            if mu.size() != degree {
                return Err(Error::DegreeMismatch(degree, mu.size()));
            }
            e.add_term(mu, c);
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, mu: &Partition) -> Scalar {
        self.coeffs.get(mu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, mu: Partition, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(mu) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.degree);
        for (mu, c) in &self.coeffs {
            out.add_term(mu.clone(), c * s);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (mu, c) in &other.coeffs {
            out.add_term(mu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(&int(-1)))
    }

    /// Multiplication by p_1.
    pub fn times_p1(&self) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (mu, c) in &self.coeffs {
            let mut parts = mu.parts().to_vec();
            parts.push(1);
            out.add_term(Partition::from_multiset(parts), c.clone());
        }
        out
    }

    /// Coefficients as a dense vector in canonical order of `index`.
    pub fn to_dense(&self, index: &PartitionIndex) -> Vec<Scalar> {
        index.partitions().iter().map(|mu| self.coeff(mu)).collect()
    }

    pub fn from_dense(index: &PartitionIndex, v: &[Scalar]) -> Self {
        let mut e = Self::zero(index.degree());
        for (mu, c) in index.partitions().iter().zip(v) {
            e.add_term(mu.clone(), c.clone());
        }
        e
    }
}

impl fmt::Debug for PowerSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 (degree {})", self.degree);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(mu, c)| format!("{c}·p{mu}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// ⟨p_μ, p_μ⟩_α = z_μ α^{l(μ)}.
pub fn power_sum_norm(mu: &Partition, alpha: &Scalar) -> Scalar {
    Scalar::from_integer(mu.z_stat()) * pow(alpha, mu.length())
}

/// ⟨f, g⟩_α = Σ_μ f_μ g_μ z_μ α^{l(μ)}.
pub fn alpha_inner(f: &PowerSumExpr, g: &PowerSumExpr, alpha: &Scalar) -> Result<Scalar> {
    if f.degree != g.degree {
        return Err(Error::DegreeMismatch(f.degree, g.degree));
    }
    crate::scalar::ensure_positive(alpha)?;
    let mut acc = Scalar::zero();
    for (mu, a) in &f.coeffs {
        if let Some(b) = g.coeffs.get(mu) {
            acc += a * b * power_sum_norm(mu, alpha);
        }
    }
    Ok(acc)
}

/// p_1^⊥ = α ∂/∂p_1, the adjoint of multiplication by p_1 under ⟨·,·⟩_α.
///
/// A degree-0 input is annihilated and yields the zero expression of degree 0.
pub fn p1_perp(f: &PowerSumExpr, alpha: &Scalar) -> PowerSumExpr {
    if f.degree == 0 {
        return PowerSumExpr::zero(0);
    }
    let mut out = PowerSumExpr::zero(f.degree - 1);
    for (mu, c) in &f.coeffs {
        let m1 = mu.multiplicity(1);
        if m1 == 0 {
            continue;
        }
        let mut parts = mu.parts().to_vec();
        parts.pop();
        out.add_term(Partition::from_sorted(parts), c * alpha * int(m1 as i64));
    }
    out
}

/// Row μ holds the monomial expansion of p_μ: entry (μ, λ) is the
/// coefficient of m_λ. Rows and columns are in canonical order.
pub fn p_to_m_expansion(n: usize) -> RatMatrix {
    let index = PartitionIndex::new(n);
    let mut out = RatMatrix::zeros(index.len(), index.len());
    for (i, mu) in index.partitions().iter().enumerate() {
        // m-expansion built by multiplying in one power sum at a time
        let mut current: BTreeMap<Partition, Scalar> = BTreeMap::new();
        current.insert(Partition::empty(), Scalar::one());
        for &k in mu.parts() {
            current = monomial_times_power_sum(&current, k);
        }
        for (lambda, c) in current {
            let j = index.position(&lambda).expect("same degree");
            out[(i, j)] = c;
        }
    }
    out
}

/// (Σ c_λ m_λ) · p_k in the monomial basis. Raising a part a (a = 0 meaning a
/// new part) to a + k gives ν, with coefficient m_{a+k}(ν).
fn monomial_times_power_sum(
    expr: &BTreeMap<Partition, Scalar>,
    k: usize,
) -> BTreeMap<Partition, Scalar> {
    let mut out: BTreeMap<Partition, Scalar> = BTreeMap::new();
    for (lambda, c) in expr {
        let mut seen = Vec::new();
        let mut candidates: Vec<usize> = lambda.parts().to_vec();
        candidates.push(0);
        for a in candidates {
            if seen.contains(&a) {
                continue;
            }
            seen.push(a);
            let mut parts = lambda.parts().to_vec();
            if a == 0 {
                parts.push(k);
            } else {
                let pos = parts.iter().position(|&p| p == a).expect("part present");
                parts[pos] += k;
            }
            let nu = Partition::from_multiset(parts);
            let mult = nu.multiplicity(a + k);
            *out.entry(nu).or_insert_with(Scalar::zero) += c * int(mult as i64);
        }
    }
    out
}

/// Expansion of each monomial symmetric function m_λ in power sums.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialToPowerSum {
    pub n: usize,
    /// Entry (λ, μ) is the coefficient of p_μ in m_λ.
    pub matrix: RatMatrix,
}

impl MonomialToPowerSum {
    pub fn monomial(&self, index: &PartitionIndex, lambda: &Partition) -> PowerSumExpr {
        let i = index
            .position(lambda)
            .expect("partition of the table degree");
        PowerSumExpr::from_dense(index, self.matrix.row(i))
    }
}

pub fn m_to_p_expansion(n: usize) -> Result<MonomialToPowerSum> {
    let matrix = p_to_m_expansion(n).inverse()?;
    Ok(MonomialToPowerSum { n, matrix })
}
