//! The statistic W_α, its exchangeable pair under one M_α step, and the exact
//! ingredients of the Stein bound on the Kolmogorov distance to the normal.
//!
//! Everything is computed on the raw value αn(λ') − n(λ). Division by the
//! normalizer √(αC(n,2)) only happens when a float is reported.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::chain::{chain_step_distribution, k_chain, l_chain, m_chain, TransitionMatrix};
use crate::error::{Error, Result};
use crate::io::{json_exact, json_real};
use crate::measure::Level;
use crate::normal::normal_cdf;
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{
    binomial2, ensure_chain_alpha, ensure_positive, pow, powi, to_f64, uint, Residual, Scalar,
};
use crate::theta::{standard_shape, ThetaTable};

/// αn(λ') − n(λ).
pub fn w_raw(lambda: &Partition, alpha: &Scalar) -> Scalar {
    alpha * uint(lambda.conjugate().n_stat()) - uint(lambda.n_stat())
}

/// αC(n,2), the square of the normalizer.
pub fn w_scale(n: usize, alpha: &Scalar) -> Scalar {
    alpha * binomial2(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WValue {
    pub raw: Scalar,
    pub normalized: f64,
}

fn require_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::DegreeTooSmall { n, min });
    }
    Ok(())
}

fn normalize(raw: &Scalar, scale: &Scalar) -> f64 {
    to_f64(raw) / to_f64(scale).sqrt()
}

pub fn w_statistic(lambda: &Partition, alpha: &Scalar) -> Result<WValue> {
    ensure_positive(alpha)?;
    require_degree(lambda.size(), 2)?;
    let raw = w_raw(lambda, alpha);
    let normalized = normalize(&raw, &w_scale(lambda.size(), alpha));
    Ok(WValue { raw, normalized })
}

/// Jack measure on partitions of n together with the raw statistic.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    pub n: usize,
    pub alpha: Scalar,
    pub index: PartitionIndex,
    pub probs: Vec<Scalar>,
    pub raw: Vec<Scalar>,
}

impl ExactLaw {
    pub fn new(n: usize, alpha: &Scalar) -> Result<Self> {
        require_degree(n, 2)?;
        let level = Level::new(n, alpha)?;
        let probs = level.measure();
        let raw = level
            .index
            .partitions()
            .iter()
            .map(|l| w_raw(l, alpha))
            .collect();
        Ok(ExactLaw {
            n,
            alpha: alpha.clone(),
            index: level.index,
            probs,
            raw,
        })
    }

    pub fn scale(&self) -> Scalar {
        w_scale(self.n, &self.alpha)
    }

    /// Distinct raw values in increasing order with their probabilities.
    pub fn atoms(&self) -> Vec<(Scalar, Scalar)> {
        let mut m: BTreeMap<Scalar, Scalar> = BTreeMap::new();
        for (w, p) in self.raw.iter().zip(&self.probs) {
            *m.entry(w.clone()).or_insert_with(Scalar::zero) += p;
        }
        m.into_iter().collect()
    }

    /// E[raw^r].
    pub fn raw_moment(&self, r: usize) -> Scalar {
        self.raw
            .iter()
            .zip(&self.probs)
            .map(|(w, p)| p * pow(w, r))
            .sum()
    }
}

/// Σ_ρ M(λ,ρ) raw(ρ) against (1 − 2/n) raw(λ) for every λ.
pub fn conditional_mean_eigencheck(n: usize, alpha: &Scalar) -> Result<Residual> {
    let law = ExactLaw::new(n, alpha)?;
    let m = m_chain(n, alpha)?;
    Ok(eigen_residual(
        &m,
        &law.raw,
        &(Scalar::one() - uint(2) / uint(n)),
    ))
}

fn eigen_residual(t: &TransitionMatrix, f: &[Scalar], eigenvalue: &Scalar) -> Residual {
    let mut res = Residual::new();
    for (i, got) in t.apply(f).iter().enumerate() {
        res.record(got, &(eigenvalue * &f[i]), || {
            format!("{} chain at {}", t.kind(), t.index().get(i))
        });
    }
    res
}

/// Eigenvalues of λ ↦ θ^λ_ν under L and M.
pub fn theta_eigenvalues(nu: &Partition, theta: &ThetaTable) -> (Scalar, Scalar) {
    let n = nu.size();
    let alpha = theta.alpha();
    let e_l = Scalar::from_integer(nu.z_stat()) * theta.get(&standard_shape(n), nu)
        / (powi(alpha, (n - nu.length()) as i64)
            * Scalar::from_integer(crate::scalar::factorial(n)));
    let k = alpha * uint(n - 1);
    let e_m = Scalar::one() + &k / (&k + Scalar::one()) * (&e_l - Scalar::one());
    (e_l, e_m)
}

/// Both eigenrelations for the column θ^·_ν.
pub fn general_eigencheck(nu: &Partition, theta: &ThetaTable) -> Result<Residual> {
    let n = nu.size();
    let alpha = theta.alpha().clone();
    let col = theta
        .index()
        .position(nu)
        .ok_or_else(|| Error::SizeMismatch(nu.clone(), Partition::row(theta.degree())))?;
    let f: Vec<Scalar> = (0..theta.index().len())
        .map(|i| theta.at(i, col).clone())
        .collect();
    let (e_l, e_m) = theta_eigenvalues(nu, theta);
    let mut res = eigen_residual(&l_chain(n, &alpha, theta)?, &f, &e_l);
    res.merge(eigen_residual(&m_chain(n, &alpha)?, &f, &e_m));
    Ok(res)
}

/// The r-th moment of W/√(αC(n,2)) two ways. Odd moments of W itself carry
/// an irrational factor, so both sides are kept in this rescaled form.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub alpha: Scalar,
    pub r: usize,
    /// r-step return probability of the lumped Metropolis chain at (1^n).
    pub via_chain: Scalar,
    /// Σ_λ π(λ) (raw(λ)/(αC(n,2)))^r.
    pub direct: Scalar,
}

impl MomentReport {
    pub fn agrees(&self) -> bool {
        self.via_chain == self.direct
    }

    /// (E W^r)², exact for every r.
    pub fn w_moment_squared(&self) -> Scalar {
        pow(&w_scale(self.n, &self.alpha), self.r) * &self.via_chain * &self.via_chain
    }

    pub fn w_moment(&self) -> f64 {
        to_f64(&self.via_chain) * to_f64(&w_scale(self.n, &self.alpha)).powf(self.r as f64 / 2.0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alpha": json_exact(&self.alpha),
            "r": self.r,
            "via_chain": json_exact(&self.via_chain),
            "direct": json_exact(&self.direct),
            "w_moment": json_real(self.w_moment()),
        })
    }
}

pub fn moments(n: usize, alpha: &Scalar, r: usize) -> Result<MomentReport> {
    ensure_chain_alpha(alpha)?;
    let law = ExactLaw::new(n, alpha)?;
    let k = k_chain(n, alpha)?;
    let start = Partition::column(n);
    let via_chain = chain_step_distribution(&k, &start, r)?.prob(&start);
    let s = law.scale();
    let direct = law
        .raw
        .iter()
        .zip(&law.probs)
        .map(|(w, p)| p * pow(&(w / &s), r))
        .sum();
    Ok(MomentReport {
        n,
        alpha: alpha.clone(),
        r,
        via_chain,
        direct,
    })
}

fn hook_with_ones(head: &[usize], n: usize) -> Partition {
    let mut parts = head.to_vec();
    parts.extend(std::iter::repeat_n(1, n - head.iter().sum::<usize>()));
    Partition::from_multiset(parts)
}

/// Closed form for E^λ(W')², the second moment after one L step:
/// 1 + θ_{(2,1^{n−2})}·4(α−1)(αC(n−1,2)−1)/D + θ_{(3,1^{n−3})}·6(α(n−1)(n−3)−3)/D
///   + θ_{(2²,1^{n−4})}·4(α(n−1)(n−4)−4)/D with D = α²n²(n−1)².
pub fn conditional_second_moment(lambda: &Partition, theta: &ThetaTable) -> Result<Scalar> {
    let n = lambda.size();
    require_degree(n, 4)?;
    let a = theta.alpha();
    let one = Scalar::one();
    let nn = uint(n);
    let d = a * a * &nn * &nn * (&nn - &one) * (&nn - &one);
    let t2 = theta.get(lambda, &hook_with_ones(&[2], n));
    let t3 = theta.get(lambda, &hook_with_ones(&[3], n));
    let t22 = theta.get(lambda, &hook_with_ones(&[2, 2], n));
    Ok(one.clone()
        + t2 * uint(4) * (a - &one) * (a * binomial2(n - 1) - &one) / &d
        + t3 * uint(6) * (a * uint((n - 1) * (n - 3)) - uint(3)) / &d
        + t22 * uint(4) * (a * uint((n - 1) * (n - 4)) - uint(4)) / &d)
}

/// Σ_ρ L(λ,ρ) raw(ρ)²/(αC(n,2)).
pub fn conditional_second_moment_direct(lambda: &Partition, l: &TransitionMatrix) -> Scalar {
    let i = l
        .index()
        .position(lambda)
        .expect("partition of the chain's degree");
    let s = w_scale(l.degree(), l.alpha());
    l.row(i)
        .iter()
        .map(|(j, p)| {
            let w = w_raw(l.index().get(*j), l.alpha());
            p * &w * &w
        })
        .sum::<Scalar>()
        / s
}

/// Per-λ conditional moments of raw(λ*) − raw(λ) under one M step.
#[derive(Debug, Clone)]
struct PairMoments {
    square: Vec<Scalar>,
    abs_cube: Vec<Scalar>,
}

fn pair_moments(law: &ExactLaw, m: &TransitionMatrix) -> PairMoments {
    let mut square = Vec::with_capacity(law.raw.len());
    let mut abs_cube = Vec::with_capacity(law.raw.len());
    for (i, w) in law.raw.iter().enumerate() {
        let (mut s2, mut s3) = (Scalar::zero(), Scalar::zero());
        for (j, p) in m.row(i) {
            let d = &law.raw[*j] - w;
            let d2 = &d * &d;
            s3 += p * &d2 * d.abs();
            s2 += p * d2;
        }
        square.push(s2);
        abs_cube.push(s3);
    }
    PairMoments { square, abs_cube }
}

/// E(−1 + (n/4)·E^λ(W*−W)²)².
fn term1_conditioned_on_lambda(law: &ExactLaw, pm: &PairMoments) -> Scalar {
    let c = uint(law.n) / uint(4) / law.scale();
    law.probs
        .iter()
        .zip(&pm.square)
        .map(|(p, d2)| {
            let x = &c * d2 - Scalar::one();
            p * &x * x
        })
        .sum()
}

/// Same with the inner expectation conditioned on the value of W only.
fn term1_conditioned_on_w(law: &ExactLaw, pm: &PairMoments) -> Scalar {
    let mut groups: BTreeMap<&Scalar, (Scalar, Scalar)> = BTreeMap::new();
    for ((w, p), d2) in law.raw.iter().zip(&law.probs).zip(&pm.square) {
        let e = groups
            .entry(w)
            .or_insert_with(|| (Scalar::zero(), Scalar::zero()));
        e.0 += p;
        e.1 += p * d2;
    }
    let c = uint(law.n) / uint(4) / law.scale();
    groups
        .values()
        .map(|(p, pd2)| {
            let x = &c * pd2 / p - Scalar::one();
            p * &x * x
        })
        .sum()
}

/// (3αn + 2α² − 10α + 2)/(4αn(n−1)).
pub fn term1_formula(n: usize, alpha: &Scalar) -> Scalar {
    let nn = uint(n);
    (uint(3) * alpha * &nn + uint(2) * alpha * alpha - uint(10) * alpha + uint(2))
        / (uint(4) * alpha * &nn * (&nn - Scalar::one()))
}

/// (direct, closed form) for E(−1 + (n/4)E^λ(W*−W)²)².
pub fn stein_error_term1(n: usize, alpha: &Scalar) -> Result<(Scalar, Scalar)> {
    ensure_chain_alpha(alpha)?;
    require_degree(n, 5)?;
    let law = ExactLaw::new(n, alpha)?;
    let pm = pair_moments(&law, &m_chain(n, alpha)?);
    Ok((
        term1_conditioned_on_lambda(&law, &pm),
        term1_formula(n, alpha),
    ))
}

/// E|raw* − raw|³ exactly. Divide by (αC(n,2))^{3/2} for E|W*−W|³.
pub fn stein_error_term3(n: usize, alpha: &Scalar) -> Result<Scalar> {
    ensure_chain_alpha(alpha)?;
    let law = ExactLaw::new(n, alpha)?;
    let pm = pair_moments(&law, &m_chain(n, alpha)?);
    Ok(law.probs.iter().zip(&pm.abs_cube).map(|(p, c)| p * c).sum())
}

pub fn term3_normalized(raw_term: &Scalar, n: usize, alpha: &Scalar) -> f64 {
    to_f64(raw_term) / to_f64(&w_scale(n, alpha)).powf(1.5)
}

/// Every realized M move satisfies |raw* − raw| ≤ α(λ₁+1) + λ'₁ + 1.
/// Returns the first violating pair, if any.
pub fn move_bound_violation(n: usize, alpha: &Scalar) -> Result<Option<(Partition, Partition)>> {
    let m = m_chain(n, alpha)?;
    for (i, lambda) in m.index().partitions().iter().enumerate() {
        let bound = alpha * uint(lambda.part(1) + 1) + uint(lambda.length() + 1);
        let w = w_raw(lambda, alpha);
        for (j, _) in m.row(i) {
            let rho = m.index().get(*j);
            if (w_raw(rho, alpha) - &w).abs() > bound {
                return Ok(Some((lambda.clone(), rho.clone())));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub n: usize,
    pub alpha: Scalar,
    /// 2e√(n/α)
    pub row_threshold: f64,
    /// P(λ₁ ≥ row_threshold)
    pub row_tail: Scalar,
    /// αn²/4^{row_threshold}
    pub row_bound: f64,
    /// 2e√(αn)
    pub column_threshold: f64,
    /// P(λ'₁ ≥ column_threshold)
    pub column_tail: Scalar,
    /// n²/(α 4^{column_threshold})
    pub column_bound: f64,
}

impl TailReport {
    pub fn holds(&self) -> bool {
        to_f64(&self.row_tail) <= self.row_bound && to_f64(&self.column_tail) <= self.column_bound
    }
}

/// Smallest integer k with k ≥ t.
fn integer_threshold(t: f64) -> usize {
    t.ceil() as usize
}

pub fn tail_bound_check(n: usize, alpha: &Scalar) -> Result<TailReport> {
    ensure_positive(alpha)?;
    let level = Level::new(n, alpha)?;
    let probs = level.measure();
    let a = to_f64(alpha);
    let nf = n as f64;
    let e = std::f64::consts::E;
    let row_threshold = 2.0 * e * (nf / a).sqrt();
    let column_threshold = 2.0 * e * (nf * a).sqrt();
    let (rk, ck) = (
        integer_threshold(row_threshold),
        integer_threshold(column_threshold),
    );
    let mut row_tail = Scalar::zero();
    let mut column_tail = Scalar::zero();
    for (l, p) in level.index.partitions().iter().zip(&probs) {
        if l.part(1) >= rk {
            row_tail += p;
        }
        if l.length() >= ck {
            column_tail += p;
        }
    }
    Ok(TailReport {
        n,
        alpha: alpha.clone(),
        row_threshold,
        row_tail,
        row_bound: a * nf * nf / 4f64.powf(row_threshold),
        column_threshold,
        column_tail,
        column_bound: nf * nf / (a * 4f64.powf(column_threshold)),
    })
}

/// sup_x |P(W ≤ x) − Φ(x)| for the exact law of W.
pub fn kolmogorov_from_law(law: &ExactLaw) -> Result<f64> {
    let s = law.scale();
    let mut below = Scalar::zero();
    let mut dist: f64 = 0.0;
    for (w, p) in law.atoms() {
        let phi = normal_cdf(normalize(&w, &s))?;
        let left = to_f64(&below);
        below += p;
        let right = to_f64(&below);
        dist = dist.max((left - phi).abs()).max((right - phi).abs());
    }
    Ok(dist)
}

pub fn kolmogorov_distance(n: usize, alpha: &Scalar) -> Result<f64> {
    kolmogorov_from_law(&ExactLaw::new(n, alpha)?)
}

/// Law of W at α against the law of −W at 1/α, compared through the exact
/// signed squares raw·|raw|/(αC(n,2)).
pub fn w_duality_check(n: usize, alpha: &Scalar) -> Result<Residual> {
    let signed = |law: &ExactLaw, flip: bool| {
        let s = law.scale();
        let mut m: BTreeMap<Scalar, Scalar> = BTreeMap::new();
        for (w, p) in law.atoms() {
            let mut key = &w * w.abs() / &s;
            if flip {
                key = -key;
            }
            *m.entry(key).or_insert_with(Scalar::zero) += p;
        }
        m
    };
    let here = signed(&ExactLaw::new(n, alpha)?, false);
    let there = signed(&ExactLaw::new(n, &alpha.recip())?, true);
    let mut res = Residual::new();
    let zero = Scalar::zero();
    for key in here.keys().chain(there.keys()) {
        let a = here.get(key).unwrap_or(&zero);
        let b = there.get(key).unwrap_or(&zero);
        res.record(a, b, || format!("signed square {key}"));
    }
    Ok(res)
}

/// Ingredients and value of the Stein bound with τ = 2/n:
/// 2√(E[1 − (n/4)E^W(W*−W)²]²) + (2π)^{−1/4}√((n/2)E|W*−W|³).
#[derive(Debug, Clone, PartialEq)]
pub struct SteinReport {
    pub n: usize,
    pub alpha: Scalar,
    pub tau: Scalar,
    /// Inner expectation conditioned on λ.
    pub term1_lambda: Scalar,
    /// Inner expectation conditioned on W.
    pub term1_w: Scalar,
    pub term1_formula: Scalar,
    /// E|raw* − raw|³.
    pub term3_raw: Scalar,
    pub term3: f64,
    pub bound: f64,
    pub bound_lambda: f64,
    pub kolmogorov: f64,
}

impl SteinReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alpha": json_exact(&self.alpha),
            "tau": json_exact(&self.tau),
            "term1_lambda": json_exact(&self.term1_lambda),
            "term1_w": json_exact(&self.term1_w),
            "term1_formula": json_exact(&self.term1_formula),
            "term3_raw": json_exact(&self.term3_raw),
            "term3": json_real(self.term3),
            "bound": json_real(self.bound),
            "bound_lambda": json_real(self.bound_lambda),
            "kolmogorov": json_real(self.kolmogorov),
        })
    }
}

fn assemble(n: usize, term1: &Scalar, term3: f64) -> f64 {
    let c = (2.0 * std::f64::consts::PI).powf(-0.25);
    2.0 * to_f64(term1).sqrt() + c * (n as f64 / 2.0 * term3).sqrt()
}

pub fn stein_upper_bound(n: usize, alpha: &Scalar) -> Result<SteinReport> {
    ensure_chain_alpha(alpha)?;
    let law = ExactLaw::new(n, alpha)?;
    let pm = pair_moments(&law, &m_chain(n, alpha)?);
    let term1_lambda = term1_conditioned_on_lambda(&law, &pm);
    let term1_w = term1_conditioned_on_w(&law, &pm);
    let term3_raw: Scalar = law.probs.iter().zip(&pm.abs_cube).map(|(p, c)| p * c).sum();
    let term3 = term3_normalized(&term3_raw, n, alpha);
    Ok(SteinReport {
        n,
        alpha: alpha.clone(),
        tau: uint(2) / uint(n),
        bound: assemble(n, &term1_w, term3),
        bound_lambda: assemble(n, &term1_lambda, term3),
        term1_formula: term1_formula(n, alpha),
        term1_lambda,
        term1_w,
        term3_raw,
        term3,
        kolmogorov: kolmogorov_from_law(&law)?,
    })
}

/// One line of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub alpha: Scalar,
    pub quantity: String,
    pub exact: Option<Scalar>,
    pub float: f64,
}

/// Columns n, alpha, quantity, exact, float. Missing exact values are blank.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "alpha", "quantity", "exact", "float"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.alpha.to_string(),
            r.quantity.clone(),
            r.exact
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default(),
            json_real(r.float).to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
