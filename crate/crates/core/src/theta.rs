//! Power-sum coefficients θ^λ_μ(α) of the Jack polynomials J_λ^{(α)}.
//!
//! The table is built by Gram-Schmidt orthogonalization of the monomial
//! symmetric functions, taken in increasing dominance order (the reverse of
//! the canonical order), under the α-inner product ⟨p_μ, p_ν⟩ = δ z_μ α^{l(μ)}.
//! The orthogonal family is unitriangular in the monomial basis, which pins it
//! down as the Jack P family; each member is then rescaled so that its
//! p_{(1^n)} coefficient is 1, which is the J normalization.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hook::{c_pair, psi_prime_at};
use crate::linalg::RatMatrix;
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{ensure_positive, factorial, int, pow, Residual, Scalar};
use crate::symfunc::{m_to_p_expansion, p1_perp, power_sum_norm, PowerSumExpr};

#[derive(Debug, Clone)]
pub struct ThetaTable {
    n: usize,
    alpha: Scalar,
    index: PartitionIndex,
    /// Row λ, column μ, both in canonical order.
    values: RatMatrix,
}

impl PartialEq for ThetaTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.alpha == other.alpha && self.values == other.values
    }
}

impl ThetaTable {
    /// Wraps an arbitrary matrix of values; used for imported tables and for
    /// exercising the checks on tampered data.
    pub fn from_values(n: usize, alpha: Scalar, values: RatMatrix) -> Result<Self> {
        let index = PartitionIndex::new(n);
        if values.rows() != index.len() || values.cols() != index.len() {
            return Err(Error::MalformedTable(format!(
                "expected {0}x{0} values for degree {n}",
                index.len()
            )));
        }
        Ok(ThetaTable {
            n,
            alpha,
            index,
            values,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn index(&self) -> &PartitionIndex {
        &self.index
    }

    pub fn values(&self) -> &RatMatrix {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut RatMatrix {
        &mut self.values
    }

    /// θ^λ_μ(α). Panics if either partition has the wrong size.
    pub fn get(&self, lambda: &Partition, mu: &Partition) -> &Scalar {
        let i = self.pos(lambda);
        let j = self.pos(mu);
        &self.values[(i, j)]
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.values[(i, j)]
    }

    fn pos(&self, p: &Partition) -> usize {
        self.index
            .position(p)
            .unwrap_or_else(|| panic!("{p} is not a partition of {}", self.n))
    }

    /// J_λ^{(α)} as a power-sum expression.
    pub fn jack(&self, lambda: &Partition) -> PowerSumExpr {
        PowerSumExpr::from_dense(&self.index, self.values.row(self.pos(lambda)))
    }

    pub fn ensure_matches(&self, n: usize, alpha: &Scalar) -> Result<()> {
        if self.n != n || &self.alpha != alpha {
            return Err(Error::ThetaMismatch {
                expected: n,
                got: self.n,
                alpha: alpha.to_string(),
            });
        }
        Ok(())
    }
}

pub fn jack_theta_table(n: usize, alpha: &Scalar) -> Result<ThetaTable> {
    ensure_positive(alpha)?;
    let index = PartitionIndex::new(n);
    let size = index.len();
    let weights: Vec<Scalar> = index
        .partitions()
        .iter()
        .map(|mu| power_sum_norm(mu, alpha))
        .collect();
    let inner = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..size {
            if !a[k].is_zero() && !b[k].is_zero() {
                acc += &a[k] * &b[k] * &weights[k];
            }
        }
        acc
    };

    let monomials = m_to_p_expansion(n.max(1))?;
    let mono_row = |i: usize| -> Vec<Scalar> {
        if n == 0 {
            vec![Scalar::one()]
        } else {
            monomials.matrix.row(i).to_vec()
        }
    };

    // orthogonal[i] and its squared norm, filled from the bottom of the order up
    let mut orthogonal: Vec<Option<(Vec<Scalar>, Scalar)>> = vec![None; size];
    for i in (0..size).rev() {
        let m = mono_row(i);
        let mut v = m.clone();
        for (u, norm) in orthogonal.iter().flatten() {
            let coef = inner(&m, u) / norm;
            if coef.is_zero() {
                continue;
            }
            for k in 0..size {
                if !u[k].is_zero() {
                    v[k] -= &coef * &u[k];
                }
            }
        }
        let norm = inner(&v, &v);
        if norm.is_zero() {
            return Err(Error::DegenerateGramSchmidt(index.get(i).clone()));
        }
        orthogonal[i] = Some((v, norm));
    }

    let mut values = RatMatrix::zeros(size, size);
    let last = size - 1; // (1^n)
    for (i, slot) in orthogonal.into_iter().enumerate() {
        let (v, _) = slot.expect("every row orthogonalized");
        let lead = v[last].clone();
        if lead.is_zero() {
            return Err(Error::DegenerateGramSchmidt(index.get(i).clone()));
        }
        for (k, x) in v.into_iter().enumerate() {
            values[(i, k)] = x / &lead;
        }
    }
    Ok(ThetaTable {
        n,
        alpha: alpha.clone(),
        index,
        values,
    })
}

/// Σ_μ z_μ α^{l(μ)} θ^ρ_μ θ^λ_μ against δ_{ρλ} c_ρ c'_ρ, over all pairs.
pub fn check_row_orthogonality(table: &ThetaTable) -> Residual {
    let idx = &table.index;
    let a = &table.alpha;
    let weights: Vec<Scalar> = idx
        .partitions()
        .iter()
        .map(|mu| power_sum_norm(mu, a))
        .collect();
    let mut res = Residual::new();
    for (i, rho) in idx.partitions().iter().enumerate() {
        for (j, lambda) in idx.partitions().iter().enumerate().skip(i) {
            let mut lhs = Scalar::zero();
            for (k, w) in weights.iter().enumerate() {
                lhs += w * table.at(i, k) * table.at(j, k);
            }
            let rhs = if i == j {
                let (c, cp) = c_pair(rho, a);
                c * cp
            } else {
                Scalar::zero()
            };
            res.record(&lhs, &rhs, || format!("rows ({rho}, {lambda})"));
        }
    }
    res
}

/// Σ_ρ θ^ρ_μ θ^ρ_ν / (c_ρ c'_ρ) against δ_{μν} / (z_μ α^{l(μ)}).
pub fn check_column_orthogonality(table: &ThetaTable) -> Residual {
    let idx = &table.index;
    let a = &table.alpha;
    let inv_cc: Vec<Scalar> = idx
        .partitions()
        .iter()
        .map(|rho| {
            let (c, cp) = c_pair(rho, a);
            (c * cp).recip()
        })
        .collect();
    let mut res = Residual::new();
    for (i, mu) in idx.partitions().iter().enumerate() {
        for (j, nu) in idx.partitions().iter().enumerate().skip(i) {
            let mut lhs = Scalar::zero();
            for (r, w) in inv_cc.iter().enumerate() {
                lhs += w * table.at(r, i) * table.at(r, j);
            }
            let rhs = if i == j {
                power_sum_norm(mu, a).recip()
            } else {
                Scalar::zero()
            };
            res.record(&lhs, &rhs, || format!("columns ({mu}, {nu})"));
        }
    }
    res
}

/// Closed forms for the (1^n) column, the (n) row, the (2,1^{n-2}) column
/// and the (n-1,1) row.
pub fn check_special_values(table: &ThetaTable) -> Residual {
    let n = table.n;
    let a = &table.alpha;
    let idx = &table.index;
    let mut res = Residual::new();
    if n == 0 {
        res.record(table.at(0, 0), &Scalar::one(), || "[] row".into());
        return res;
    }
    let nfact = Scalar::from_integer(factorial(n));
    let column = Partition::column(n);
    for lambda in idx.partitions() {
        res.record(table.get(lambda, &column), &Scalar::one(), || {
            format!("theta^{lambda}_(1^n)")
        });
    }
    let row = Partition::row(n);
    for mu in idx.partitions() {
        let expect = &nfact / Scalar::from_integer(mu.z_stat()) * pow(a, n - mu.length());
        res.record(table.get(&row, mu), &expect, || format!("theta^(n)_{mu}"));
    }
    if n >= 2 {
        let transposition = Partition::hook(n, 2);
        for lambda in idx.partitions() {
            let expect = int(lambda.conjugate().n_stat() as i64) * a - int(lambda.n_stat() as i64);
            res.record(table.get(lambda, &transposition), &expect, || {
                format!("theta^{lambda}_(2,1^(n-2))")
            });
        }
        let standard = standard_shape(n);
        for mu in idx.partitions() {
            let expect = theta_standard_closed_form(n, mu, a);
            res.record(table.get(&standard, mu), &expect, || {
                format!("theta^(n-1,1)_{mu}")
            });
        }
    }
    res
}

/// (n-1, 1).
pub fn standard_shape(n: usize) -> Partition {
    Partition::new(vec![n - 1, 1]).expect("n >= 2")
}

/// θ^{(n-1,1)}_μ = α^{n-l(μ)} n!/z_μ · ((α(n-1)+1) m_1(μ) - n) / (α n (n-1)).
pub fn theta_standard_closed_form(n: usize, mu: &Partition, alpha: &Scalar) -> Scalar {
    let nn = int(n as i64);
    let n1 = int(n as i64 - 1);
    pow(alpha, n - mu.length()) * Scalar::from_integer(factorial(n))
        / Scalar::from_integer(mu.z_stat())
        * ((alpha * &n1 + int(1)) * int(mu.multiplicity(1) as i64) - &nn)
        / (alpha * &nn * &n1)
}

/// Checks p_1^⊥ J_λ = Σ_τ c'_λ ψ'_{λ/τ} / c'_τ J_τ for every λ ⊢ n. The left
/// side differentiates the degree-n table; the right side combines rows of an
/// independently built degree-(n-1) table with the branching weights.
pub fn verify_p1perp_pieri(n: usize, alpha: &Scalar) -> Result<Residual> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    let upper = jack_theta_table(n, alpha)?;
    let lower = jack_theta_table(n - 1, alpha)?;
    Ok(pieri_residual(&upper, &lower))
}

pub fn pieri_residual(upper: &ThetaTable, lower: &ThetaTable) -> Residual {
    let alpha = &upper.alpha;
    let mut res = Residual::new();
    for lambda in upper.index.partitions() {
        let lhs = p1_perp(&upper.jack(lambda), alpha);
        let (_, cp_lambda) = c_pair(lambda, alpha);
        let mut rhs = PowerSumExpr::zero(upper.n - 1);
        for (row, tau) in lambda.removable() {
            let col = lambda.part(row);
            let (_, cp_tau) = c_pair(&tau, alpha);
            let weight = &cp_lambda * psi_prime_at(lambda, row, col, alpha) / cp_tau;
            rhs = rhs
                .plus(&lower.jack(&tau).scaled(&weight))
                .expect("same degree");
        }
        for mu in lower.index.partitions() {
            res.record(&lhs.coeff(mu), &rhs.coeff(mu), || {
                format!("p1perp J_{lambda} at p_{mu}")
            });
        }
    }
    res
}

pub fn to_csv(table: &ThetaTable) -> String {
    crate::io::matrix_to_csv("lambda\\mu", table.index.partitions(), |i, j| {
        table.at(i, j).clone()
    })
}

pub fn from_csv(text: &str, alpha: &Scalar) -> Result<ThetaTable> {
    let (labels, values) = crate::io::matrix_from_csv(text)?;
    let n = labels.first().map_or(0, Partition::size);
    let table = ThetaTable::from_values(n, alpha.clone(), values)?;
    if table.index.partitions() != labels.as_slice() {
        return Err(Error::MalformedTable(
            "labels are not in canonical order".into(),
        ));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::symfunc::{alpha_inner, p_to_m_expansion};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn alphas() -> Vec<Scalar> {
        vec![int(1), ratio(3, 2), int(2), int(3)]
    }

    #[test]
    fn degree_two_table() {
        // J_(2) = p_1^2 + α p_2, J_(1,1) = p_1^2 - p_2
        let a = ratio(5, 2);
        let t = jack_theta_table(2, &a).unwrap();
        assert_eq!(t.get(&p("[2]"), &p("[2]")), &a);
        assert_eq!(t.get(&p("[2]"), &p("[1,1]")), &int(1));
        assert_eq!(t.get(&p("[1,1]"), &p("[2]")), &int(-1));
        assert_eq!(t.get(&p("[1,1]"), &p("[1,1]")), &int(1));
    }

    #[test]
    fn schur_degree_three() {
        // s_(2,1) = (p_1^3 - p_3)/3, normalized to p_1^3 coefficient 1
        let t = jack_theta_table(3, &int(1)).unwrap();
        assert_eq!(t.get(&p("[2,1]"), &p("[3]")), &int(-1));
        assert_eq!(t.get(&p("[2,1]"), &p("[2,1]")), &int(0));
    }

    #[test]
    fn special_values_and_orthogonality() {
        for n in 1..=6 {
            for a in alphas() {
                let t = jack_theta_table(n, &a).unwrap();
                assert!(check_special_values(&t).is_exact(), "n={n} a={a}");
                assert!(check_row_orthogonality(&t).is_exact(), "n={n} a={a}");
                assert!(check_column_orthogonality(&t).is_exact(), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn jack_norms() {
        for n in 1..=6 {
            for a in [int(1), int(2), ratio(5, 2)] {
                let t = jack_theta_table(n, &a).unwrap();
                for lambda in t.index().partitions() {
                    let j = t.jack(lambda);
                    let (c, cp) = c_pair(lambda, &a);
                    assert_eq!(alpha_inner(&j, &j, &a).unwrap(), c * cp);
                }
            }
        }
    }

    #[test]
    fn monomial_unitriangular() {
        for n in 1..=7 {
            let a = ratio(3, 2);
            let t = jack_theta_table(n, &a).unwrap();
            let pm = p_to_m_expansion(n);
            let m = t.values() * &pm;
            let idx = t.index();
            for i in 0..idx.len() {
                let lead = m[(i, i)].clone();
                assert!(!lead.is_zero());
                for j in 0..idx.len() {
                    let dominated = idx.get(j).dominance_cmp(idx.get(i)).unwrap()
                        == crate::partition::Dominance::LessOrEqual;
                    if !dominated {
                        assert!(m[(i, j)].is_zero(), "J_{} has m_{}", idx.get(i), idx.get(j));
                    }
                }
            }
        }
    }

    #[test]
    fn pieri_small() {
        assert!(verify_p1perp_pieri(2, &ratio(7, 3)).unwrap().is_exact());
        assert!(verify_p1perp_pieri(3, &int(2)).unwrap().is_exact());
        assert!(verify_p1perp_pieri(5, &int(1)).unwrap().is_exact());
        assert!(verify_p1perp_pieri(1, &int(1)).is_err());
    }

    #[test]
    fn tampering_is_detected() {
        let mut t = jack_theta_table(4, &int(2)).unwrap();
        t.values_mut()[(1, 2)] += int(1);
        let r = check_row_orthogonality(&t);
        assert!(!r.is_exact());
        assert!(r.witness.unwrap().contains("[3,1]"));
    }

    #[test]
    fn csv_roundtrip() {
        let a = ratio(3, 2);
        let t = jack_theta_table(4, &a).unwrap();
        let text = to_csv(&t);
        assert!(text.starts_with("lambda\\mu,[4],\"[3,1]\""));
        assert_eq!(from_csv(&text, &a).unwrap(), t);
    }

    #[test]
    fn degree_zero() {
        let t = jack_theta_table(0, &int(2)).unwrap();
        assert_eq!(t.at(0, 0), &int(1));
    }
}
