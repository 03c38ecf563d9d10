//! One-shot verification suite: every exact identity the library relies on,
//! run over a grid of degrees and parameters, plus literal n = 3 fixtures.

use serde_json::{json, Value};

use crate::chain::{
    chain_step_distribution, k_chain, k_stationary, l_chain, m_chain, TransitionMatrix,
};
use crate::error::{Error, Result};
use crate::measure::{jack_distribution, jack_measure};
use crate::metropolis::{hanlon_identity_check, t_chain_toy, Perm};
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{binomial2, int, ratio, uint, Residual, Scalar};
use crate::stein::{
    conditional_mean_eigencheck, conditional_second_moment, conditional_second_moment_direct,
    general_eigencheck, moments, stein_error_term1, tail_bound_check, w_duality_check, w_scale,
};
use crate::theta::{
    check_column_orthogonality, check_row_orthogonality, check_special_values, jack_theta_table,
    pieri_residual, ThetaTable,
};

pub const DEFAULT_EXACT_CAP: usize = 8;

/// Largest step count for the spectral return-probability check.
const SPECTRAL_STEPS: usize = 5;
/// Largest moment order compared.
const MOMENT_ORDER: usize = 6;

/// {1, 3/2, 2, 3}.
pub fn default_alphas() -> Vec<Scalar> {
    vec![int(1), ratio(3, 2), int(2), int(3)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    /// `None` iff the check passed.
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn from_residual(name: String, r: &Residual) -> Self {
        let witness = (!r.is_exact()).then(|| r.to_string());
        CheckOutcome { name, witness }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifySuiteResult {
    pub checks: Vec<CheckOutcome>,
}

impl VerifySuiteResult {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed())
    }

    fn residual(&mut self, name: String, r: &Residual) {
        self.checks.push(CheckOutcome::from_residual(name, r));
    }

    fn flag(&mut self, name: String, witness: Option<String>) {
        self.checks.push(CheckOutcome { name, witness });
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| {
                    json!({
                        "check": c.name,
                        "status": if c.passed() { "pass" } else { "fail" },
                        "witness": c.witness.clone().unwrap_or_default(),
                    })
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "status", "witness"])
            .expect("in-memory write");
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            w.write_record([c.name.as_str(), status, c.witness.as_deref().unwrap_or("")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match &c.witness {
                None => out.push_str(&format!("pass  {}\n", c.name)),
                Some(w) => out.push_str(&format!("FAIL  {}: {w}\n", c.name)),
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

/// Orthogonality of rows and columns and the closed-form special values.
/// Takes the table as given so a corrupted table can be fed in.
pub fn theta_checks(table: &ThetaTable) -> Vec<CheckOutcome> {
    let ctx = format!("n={} alpha={}", table.degree(), table.alpha());
    vec![
        CheckOutcome::from_residual(
            format!("theta row orthogonality {ctx}"),
            &check_row_orthogonality(table),
        ),
        CheckOutcome::from_residual(
            format!("theta column orthogonality {ctx}"),
            &check_column_orthogonality(table),
        ),
        CheckOutcome::from_residual(
            format!("theta special values {ctx}"),
            &check_special_values(table),
        ),
    ]
}

fn p(s: &str) -> Partition {
    s.parse().expect("fixture partition")
}

fn fixture_residual(t: &TransitionMatrix, rows: &[(&str, [Scalar; 3])]) -> Residual {
    let cols = [p("[3]"), p("[2,1]"), p("[1,1,1]")];
    let mut r = Residual::new();
    for (row, vals) in rows {
        for (c, v) in cols.iter().zip(vals) {
            r.record(&t.get(&p(row), c), v, || format!("({row}, {c})"));
        }
    }
    r
}

/// The down-up chain at n = 3 as rational functions of α.
pub fn m_fixture(a: &Scalar) -> Vec<(&'static str, [Scalar; 3])> {
    let one = int(1);
    let two = int(2);
    let three = int(3);
    vec![
        (
            "[3]",
            [
                &one / (&two * a + &one),
                &two * a / (&two * a + &one),
                int(0),
            ],
        ),
        (
            "[2,1]",
            [
                (a + &two) / (&three * (a + &one) * (&two * a + &one)),
                &two * (a * a + int(7) * a + &one) / (&three * (a + &two) * (&two * a + &one)),
                a * (&two * a + &one) / (&three * (a + &one) * (a + &two)),
            ],
        ),
        ("[1,1,1]", [int(0), &two / (a + &two), a / (a + &two)]),
    ]
}

/// The θ-defined chain at n = 3.
pub fn l_fixture(a: &Scalar) -> Vec<(&'static str, [Scalar; 3])> {
    let one = int(1);
    let two = int(2);
    vec![
        ("[3]", [int(0), int(1), int(0)]),
        (
            "[2,1]",
            [
                (a + &two) / (int(6) * a * (a + &one)),
                (&two * a * a + int(11) * a - int(4)) / (int(6) * a * (a + &two)),
                (&two * a + &one) * (&two * a + &one) / (int(6) * (a + &one) * (a + &two)),
            ],
        ),
        (
            "[1,1,1]",
            [
                int(0),
                (&two * a + &one) / (a * (a + &two)),
                (a * a - &one) / (a * (a + &two)),
            ],
        ),
    ]
}

/// The lumped Metropolis chain at n = 3.
pub fn k_fixture(a: &Scalar) -> Vec<(&'static str, [Scalar; 3])> {
    let one = int(1);
    vec![
        ("[3]", [&one - a.recip(), a.recip(), int(0)]),
        (
            "[2,1]",
            [ratio(2, 3), (a - &one) / (int(3) * a), &one / (int(3) * a)],
        ),
        ("[1,1,1]", [int(0), int(1), int(0)]),
    ]
}

/// The permutation chain at n = 3, rows and columns in the order
/// id, (12), (13), (23), (123), (132).
pub fn t_fixture(a: &Scalar) -> (Vec<Perm>, Vec<Vec<Scalar>>) {
    let order = vec![
        Perm::identity(3),
        Perm::from_cycles(3, &[&[1, 2]]),
        Perm::from_cycles(3, &[&[1, 3]]),
        Perm::from_cycles(3, &[&[2, 3]]),
        Perm::from_cycles(3, &[&[1, 2, 3]]),
        Perm::from_cycles(3, &[&[1, 3, 2]]),
    ];
    let z = int(0);
    let t = ratio(1, 3);
    let s = (int(3) * a).recip();
    let h = (a - int(1)) / (int(3) * a);
    let c = int(1) - a.recip();
    let rows = vec![
        vec![
            z.clone(),
            t.clone(),
            t.clone(),
            t.clone(),
            z.clone(),
            z.clone(),
        ],
        vec![
            s.clone(),
            h.clone(),
            z.clone(),
            z.clone(),
            t.clone(),
            t.clone(),
        ],
        vec![
            s.clone(),
            z.clone(),
            h.clone(),
            z.clone(),
            t.clone(),
            t.clone(),
        ],
        vec![
            s.clone(),
            z.clone(),
            z.clone(),
            h.clone(),
            t.clone(),
            t.clone(),
        ],
        vec![
            z.clone(),
            s.clone(),
            s.clone(),
            s.clone(),
            c.clone(),
            z.clone(),
        ],
        vec![z.clone(), s.clone(), s.clone(), s, z, c],
    ];
    (order, rows)
}

fn fixture_checks(a: &Scalar, out: &mut VerifySuiteResult) -> Result<()> {
    let th = jack_theta_table(3, a)?;
    out.residual(
        format!("n=3 down-up fixture alpha={a}"),
        &fixture_residual(&m_chain(3, a)?, &m_fixture(a)),
    );
    out.residual(
        format!("n=3 theta-chain fixture alpha={a}"),
        &fixture_residual(&l_chain(3, a, &th)?, &l_fixture(a)),
    );
    out.residual(
        format!("n=3 lumped Metropolis fixture alpha={a}"),
        &fixture_residual(&k_chain(3, a)?, &k_fixture(a)),
    );
    let t = t_chain_toy(3, a)?;
    let (order, rows) = t_fixture(a);
    let mut r = Residual::new();
    for (x, row) in order.iter().zip(&rows) {
        for (y, v) in order.iter().zip(row) {
            let (i, j) = (
                t.position(x).expect("perm of 3"),
                t.position(y).expect("perm of 3"),
            );
            r.record(&t.matrix[(i, j)], v, || format!("({x}, {y})"));
        }
    }
    out.residual(format!("n=3 permutation chain fixture alpha={a}"), &r);
    Ok(())
}

/// Two- and three-step laws of the lumped chain started at (1^n), n ≥ 4.
fn step_formula_residual(n: usize, a: &Scalar) -> Result<Residual> {
    let k = k_chain(n, a)?;
    let col = Partition::column(n);
    let d2 = chain_step_distribution(&k, &col, 2)?;
    let d3 = chain_step_distribution(&k, &col, 3)?;
    let nn = uint(n);
    let c2 = binomial2(n);
    let one = int(1);
    let with_ones = |head: &[usize]| {
        let mut v = head.to_vec();
        v.extend(std::iter::repeat_n(1, n - head.iter().sum::<usize>()));
        Partition::new(v).expect("valid shape")
    };
    let mut r = Residual::new();
    r.record(&d2.prob(&col), &(a * &c2).recip(), || {
        "two steps to (1^n)".into()
    });
    r.record(
        &d2.prob(&with_ones(&[2])),
        &((a - &one) / (a * &c2)),
        || "two steps to (2,1^(n-2))".into(),
    );
    r.record(
        &d2.prob(&with_ones(&[3])),
        &(int(4) * (&nn - int(2)) / (&nn * (&nn - &one))),
        || "two steps to (3,1^(n-3))".into(),
    );
    r.record(
        &d2.prob(&with_ones(&[2, 2])),
        &((&nn - int(2)) * (&nn - int(3)) / (&nn * (&nn - &one))),
        || "two steps to (2,2,1^(n-4))".into(),
    );
    let three = int(2) * (int(3) * a * &nn * &nn + a * &nn + int(2) * a * a - int(16) * a + int(2))
        / (a * a * &nn * &nn * (&nn - &one) * (&nn - &one));
    r.record(&d3.prob(&with_ones(&[2])), &three, || {
        "three steps to (2,1^(n-2))".into()
    });
    Ok(r)
}

/// Runs the whole suite for degrees up to `max_n` and each α. Refuses
/// degrees above `cap`.
pub fn run_suite(max_n: usize, alphas: &[Scalar], cap: usize) -> Result<VerifySuiteResult> {
    if max_n > cap {
        return Err(Error::DegreeTooLarge { n: max_n, max: cap });
    }
    let mut out = VerifySuiteResult::default();
    for a in alphas {
        let chains = *a >= int(1);
        let mut lower: Option<ThetaTable> = None;
        for n in 0..=max_n {
            let ctx = format!("n={n} alpha={a}");
            let th = jack_theta_table(n, a)?;
            out.checks.extend(theta_checks(&th));
            if let Some(lo) = &lower {
                out.residual(
                    format!("p1-adjoint Pieri rule {ctx}"),
                    &pieri_residual(&th, lo),
                );
            }
            let dist = jack_distribution(n, a)?;
            let mut total = Residual::new();
            total.record(&dist.total(), &int(1), || "total mass".into());
            out.residual(format!("measure total mass {ctx}"), &total);
            let mut dual = Residual::new();
            for lambda in PartitionIndex::new(n).partitions() {
                dual.record(
                    &jack_measure(lambda, a)?,
                    &jack_measure(&lambda.conjugate(), &a.recip())?,
                    || lambda.to_string(),
                );
            }
            out.residual(format!("measure conjugation duality {ctx}"), &dual);

            if n >= 1 {
                let t = tail_bound_check(n, a)?;
                out.flag(
                    format!("first row and column tail bounds {ctx}"),
                    (!t.holds()).then(|| {
                        format!(
                            "row tail {} vs {}, column tail {} vs {}",
                            t.row_tail, t.row_bound, t.column_tail, t.column_bound
                        )
                    }),
                );
            }
            if n >= 2 {
                out.residual(format!("W sign duality {ctx}"), &w_duality_check(n, a)?);
            }
            if n >= 2 && chains {
                chain_checks(n, a, &th, &mut out)?;
            }
            lower = Some(th);
        }
        if chains && max_n >= 3 {
            fixture_checks(a, &mut out)?;
        }
    }
    Ok(out)
}

fn chain_checks(n: usize, a: &Scalar, th: &ThetaTable, out: &mut VerifySuiteResult) -> Result<()> {
    let ctx = format!("n={n} alpha={a}");
    let pi = jack_distribution(n, a)?.probs;
    let m = m_chain(n, a)?;
    let l = l_chain(n, a, th)?;
    let k = k_chain(n, a)?;
    for t in [&m, &l, &k] {
        out.residual(format!("{} row sums {ctx}", t.kind()), &t.check_row_sums());
        out.flag(
            format!("{} nonnegative off the diagonal {ctx}", t.kind()),
            t.first_negative(false)
                .map(|(x, y, v)| format!("({x}, {y}) = {v}")),
        );
    }
    out.residual(
        format!("M reversible for the Jack measure {ctx}"),
        &m.check_detailed_balance(&pi),
    );
    out.residual(
        format!("M stationary for the Jack measure {ctx}"),
        &m.check_stationary(&pi),
    );
    out.residual(
        format!("L reversible for the Jack measure {ctx}"),
        &l.check_detailed_balance(&pi),
    );
    out.residual(
        format!("K reversible for its cycle-count law {ctx}"),
        &k.check_detailed_balance(&k_stationary(n, a)),
    );

    let scale = a * uint(n - 1);
    let mut ratio_res = Residual::new();
    for i in 0..m.len() {
        for j in (0..m.len()).filter(|&j| j != i) {
            ratio_res.record(
                &(l.at(i, j) * &scale),
                &(m.at(i, j) * (&scale + int(1))),
                || format!("({}, {})", m.index().get(i), m.index().get(j)),
            );
        }
    }
    out.residual(
        format!("L off-diagonal is a multiple of M {ctx}"),
        &ratio_res,
    );

    let mut spectral = Residual::new();
    for r in 0..=SPECTRAL_STEPS {
        spectral.merge(hanlon_identity_check(n, a, r, th)?);
    }
    out.residual(
        format!("K return probabilities match the theta spectral sum {ctx}"),
        &spectral,
    );

    out.residual(
        format!("M conditional mean of W {ctx}"),
        &conditional_mean_eigencheck(n, a)?,
    );
    let mut eig = Residual::new();
    for nu in th.index().partitions() {
        eig.merge(general_eigencheck(nu, th)?);
    }
    out.residual(
        format!("theta columns are L and M eigenvectors {ctx}"),
        &eig,
    );

    let mut mom = Residual::new();
    for r in 0..=MOMENT_ORDER {
        let rep = moments(n, a, r)?;
        mom.record(&rep.via_chain, &rep.direct, || format!("r={r}"));
    }
    mom.record(&moments(n, a, 1)?.w_moment_squared(), &int(0), || {
        "E W".into()
    });
    mom.record(&moments(n, a, 2)?.w_moment_squared(), &int(1), || {
        "E W^2".into()
    });
    let third = (a - int(1)) * (a - int(1)) / w_scale(n, a);
    mom.record(&moments(n, a, 3)?.w_moment_squared(), &third, || {
        "(E W^3)^2".into()
    });
    out.residual(format!("moments from return probabilities {ctx}"), &mom);

    if n >= 4 {
        let mut second = Residual::new();
        for lambda in th.index().partitions() {
            second.record(
                &conditional_second_moment(lambda, th)?,
                &conditional_second_moment_direct(lambda, &l),
                || lambda.to_string(),
            );
        }
        out.residual(
            format!("conditional second moment closed form {ctx}"),
            &second,
        );
        out.residual(
            format!("K two- and three-step laws from (1^n) {ctx}"),
            &step_formula_residual(n, a)?,
        );
    }
    if n >= 5 {
        let (direct, formula) = stein_error_term1(n, a)?;
        let mut t1 = Residual::new();
        t1.record(&direct, &formula, || "term1".into());
        out.residual(format!("Stein variance term closed form {ctx}"), &t1);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let res = run_suite(5, &default_alphas(), DEFAULT_EXACT_CAP).unwrap();
        let bad: Vec<_> = res.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(res.checks.len() > 100);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            run_suite(9, &default_alphas(), DEFAULT_EXACT_CAP),
            Err(Error::DegreeTooLarge { n: 9, max: 8 })
        ));
    }

    #[test]
    fn corrupted_theta_names_a_pair() {
        let mut th = jack_theta_table(4, &int(2)).unwrap();
        th.values_mut()[(1, 2)] += int(1);
        let checks = theta_checks(&th);
        let row = &checks[0];
        assert!(!row.passed());
        let w = row.witness.as_deref().unwrap();
        assert!(w.contains("rows ([4], [3,1])"), "{w}");
    }

    #[test]
    fn below_one_skips_chains() {
        let res = run_suite(4, &[ratio(1, 2)], DEFAULT_EXACT_CAP).unwrap();
        assert!(res.all_passed());
        assert!(res.checks.iter().all(|c| !c.name.starts_with("M ")));
    }

    #[test]
    fn report_formats() {
        let mut r = VerifySuiteResult::default();
        r.flag("a".into(), None);
        r.flag("b, c".into(), Some("x".into()));
        assert!(!r.all_passed());
        assert_eq!(
            r.to_csv(),
            "check,status,witness\na,pass,\n\"b, c\",fail,x\n"
        );
        assert_eq!(r.to_json()[1]["status"], "fail");
        assert!(r.to_pretty().ends_with("2 checks, 1 failed\n"));
    }
}
