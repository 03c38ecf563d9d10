//! Alpha-deformed hook products and the single-box branching weight.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{ensure_positive, factorial, pow, Scalar};

/// Π over cells of (α·arm + leg + 1) computed as an integer product over the
/// common denominator q^|λ| for α = p/q.
fn deformed_product(lambda: &Partition, alpha: &Scalar, primed: bool) -> Scalar {
    let (p, q) = (alpha.numer(), alpha.denom());
    let mut num = BigInt::one();
    for s in lambda.cell_stats() {
        let a = BigInt::from(s.arm);
        let l = BigInt::from(s.leg);
        num *= if primed {
            p * (a + 1) + q * l
        } else {
            p * a + q * (l + 1)
        };
    }
    Scalar::new(num, num_traits::pow(q.clone(), lambda.size()))
}

/// c_λ(α) = Π_s (α a(s) + l(s) + 1).
pub fn c_product(lambda: &Partition, alpha: &Scalar) -> Result<Scalar> {
    ensure_positive(alpha)?;
    Ok(deformed_product(lambda, alpha, false))
}

/// c'_λ(α) = Π_s (α a(s) + l(s) + α).
pub fn c_prime_product(lambda: &Partition, alpha: &Scalar) -> Result<Scalar> {
    ensure_positive(alpha)?;
    Ok(deformed_product(lambda, alpha, true))
}

/// Both products at once; positivity of α is the caller's responsibility.
pub(crate) fn c_pair(lambda: &Partition, alpha: &Scalar) -> (Scalar, Scalar) {
    (
        deformed_product(lambda, alpha, false),
        deformed_product(lambda, alpha, true),
    )
}

/// ψ'_{λ/τ}(α) for τ ⊂ λ differing by one cell.
///
/// The product runs over cells of λ in the column of the removed cell but not
/// in its row, i.e. the cells strictly above it. For those cells the arm is
/// the same in λ and τ and the leg drops by one in τ.
pub fn psi_prime(lambda: &Partition, tau: &Partition, alpha: &Scalar) -> Result<Scalar> {
    ensure_positive(alpha)?;
    let (row, col) = lambda
        .removed_cell(tau)
        .ok_or_else(|| Error::NotSingleBoxSkew {
            outer: lambda.clone(),
            inner: tau.clone(),
        })?;
    Ok(psi_prime_at(lambda, row, col, alpha))
}

pub(crate) fn psi_prime_at(lambda: &Partition, row: usize, col: usize, alpha: &Scalar) -> Scalar {
    let (p, q) = (alpha.numer(), alpha.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..row {
        let a = BigInt::from(lambda.part(i) - col);
        let l_tau = BigInt::from(row - 1 - i);
        let l_lam = &l_tau + 1;
        // (αa + l_λ + 1)(αa + l_τ + α) / ((αa + l_λ + α)(αa + l_τ + 1)), scaled by q.
        num *= (p * &a + q * (&l_lam + 1)) * (p * (&a + 1) + q * &l_tau);
        den *= (p * (&a + 1) + q * &l_lam) * (p * &a + q * (&l_tau + 1));
    }
    debug_assert!(!den.is_zero());
    Scalar::new(num, den)
}

/// dim_α(λ) = n! α^n / c'_λ(α). At α = 1 this is the number of standard
/// Young tableaux of shape λ.
pub fn dim_alpha(lambda: &Partition, alpha: &Scalar) -> Result<Scalar> {
    let cp = c_prime_product(lambda, alpha)?;
    let n = lambda.size();
    Ok(Scalar::from_integer(factorial(n)) * pow(alpha, n) / cp)
}
