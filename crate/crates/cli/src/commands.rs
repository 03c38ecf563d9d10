use std::collections::BTreeMap;

use jackstein::chain::{
    chain_step_distribution, k_chain, l_chain, m_chain, ChainKind, TransitionMatrix,
};
use jackstein::io::{json_exact, json_real};
use jackstein::measure::{jack_distribution, DistOverPartitions};
use jackstein::partition::Partition;
use jackstein::sampler::GrowthSampler;
use jackstein::scalar::{int, to_f64, Scalar};
use jackstein::stein::{stein_upper_bound, w_statistic, ExactLaw};
use jackstein::theta::{self, jack_theta_table};
use jackstein::verify::{default_alphas, run_suite};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::CliError;
use crate::table::{self, real};
use crate::Format;

/// Largest degree for which the sample report includes the exact law.
const EXACT_LAW_MAX_N: usize = 25;
/// Bins with fewer expected counts are pooled before the chi-square test.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub alpha: Scalar,
    pub seed: u64,
    pub samples: u64,
    pub format: Format,
}

fn require_chain_alpha(alpha: &Scalar) -> Result<(), CliError> {
    if *alpha < int(1) {
        return Err(CliError::ChainAlpha(alpha.to_string()));
    }
    Ok(())
}

fn distribution_output(dist: &DistOverPartitions, format: Format, header: Value) -> String {
    let parts = dist.partitions();
    match format {
        Format::Json => {
            let rows: Vec<Value> = parts
                .iter()
                .zip(&dist.probs)
                .map(|(l, q)| json!({"partition": l.label(), "exact": json_exact(q), "float": json_real(to_f64(q))}))
                .collect();
            let mut obj = header;
            obj["rows"] = Value::Array(rows);
            obj["total"] = json_exact(&dist.total());
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("serializable")
            )
        }
        Format::Csv | Format::Pretty => {
            let mut rows: Vec<Vec<String>> = parts
                .iter()
                .zip(&dist.probs)
                .map(|(l, q)| vec![l.label(), q.to_string(), real(to_f64(q))])
                .collect();
            let total = dist.total();
            rows.push(vec![
                "total".into(),
                total.to_string(),
                real(to_f64(&total)),
            ]);
            let header = ["partition", "exact", "float"];
            if format == Format::Csv {
                table::csv(&header, &rows)
            } else {
                table::pretty(&header, &rows)
            }
        }
    }
}

pub fn measure(cfg: &RunConfig) -> Result<String, CliError> {
    let dist = jack_distribution(cfg.n, &cfg.alpha)?;
    let header = json!({"n": cfg.n, "alpha": json_exact(&cfg.alpha)});
    Ok(distribution_output(&dist, cfg.format, header))
}

fn build_chain(n: usize, alpha: &Scalar, kind: ChainKind) -> Result<TransitionMatrix, CliError> {
    Ok(match kind {
        ChainKind::M => m_chain(n, alpha)?,
        ChainKind::L => l_chain(n, alpha, &jack_theta_table(n, alpha)?)?,
        ChainKind::K => k_chain(n, alpha)?,
    })
}

fn matrix_output(t: &TransitionMatrix, format: Format) -> String {
    let labels: Vec<String> = t
        .index()
        .partitions()
        .iter()
        .map(Partition::label)
        .collect();
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => {
            let rows: Vec<Value> = (0..t.len())
                .map(|i| Value::Array((0..t.len()).map(|j| json_exact(&t.at(i, j))).collect()))
                .collect();
            let obj = json!({
                "kind": t.kind().to_string(),
                "n": t.degree(),
                "alpha": json_exact(t.alpha()),
                "states": labels,
                "matrix": rows,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("serializable")
            )
        }
        Format::Pretty => {
            let mut header = vec!["from\\to"];
            header.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = (0..t.len())
                .map(|i| {
                    let mut r = vec![labels[i].clone()];
                    r.extend((0..t.len()).map(|j| t.at(i, j).to_string()));
                    r
                })
                .collect();
            table::pretty(&header, &rows)
        }
    }
}

pub fn chain(
    cfg: &RunConfig,
    kind: ChainKind,
    steps: Option<usize>,
    start: Option<Partition>,
) -> Result<String, CliError> {
    require_chain_alpha(&cfg.alpha)?;
    let t = build_chain(cfg.n, &cfg.alpha, kind)?;
    match steps {
        None => Ok(matrix_output(&t, cfg.format)),
        Some(r) => {
            let start = start.unwrap_or_else(|| Partition::column(cfg.n));
            let dist = chain_step_distribution(&t, &start, r)?;
            let header = json!({
                "kind": kind.to_string(),
                "n": cfg.n,
                "alpha": json_exact(&cfg.alpha),
                "start": start.label(),
                "steps": r,
            });
            Ok(distribution_output(&dist, cfg.format, header))
        }
    }
}

struct ChiSquare {
    statistic: f64,
    df: usize,
    p_value: f64,
}

/// Pools atoms with small expected counts into one bin, in atom order.
fn chi_square(observed: &[u64], expected_prob: &[f64], total: u64) -> Option<ChiSquare> {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0, 0.0);
    for (&o, &q) in observed.iter().zip(expected_prob) {
        let e = q * total as f64;
        if e < MIN_EXPECTED {
            pool.0 += o as f64;
            pool.1 += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    if pool.1 > 0.0 {
        bins.push(pool);
    }
    if bins.len() < 2 {
        return None;
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let df = bins.len() - 1;
    let p_value = 1.0 - ChiSquared::new(df as f64).ok()?.cdf(statistic);
    Some(ChiSquare {
        statistic,
        df,
        p_value,
    })
}

pub fn sample(cfg: &RunConfig) -> Result<String, CliError> {
    let (n, alpha) = (cfg.n, &cfg.alpha);
    let mut sampler = GrowthSampler::new(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let with_pairs = n >= 2 && *alpha >= int(1);
    let mut counts: BTreeMap<Scalar, (f64, u64)> = BTreeMap::new();
    let (mut s1, mut s2, mut s3, mut pair_sq) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.samples {
        let lambda = sampler.grow(n, &mut rng).last().clone();
        let w = w_statistic(&lambda, alpha)?;
        let x = w.normalized;
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        counts.entry(w.raw).or_insert((x, 0)).1 += 1;
        if with_pairs {
            let star = sampler.step_down_up(&lambda, &mut rng);
            let d = w_statistic(&star, alpha)?.normalized - x;
            pair_sq += d * d;
        }
    }
    let m = cfg.samples as f64;
    let mean = s1 / m;
    let variance = if cfg.samples > 1 {
        (s2 - m * mean * mean) / (m - 1.0)
    } else {
        0.0
    };
    let third = s3 / m;

    let law = if n <= EXACT_LAW_MAX_N {
        Some(ExactLaw::new(n, alpha)?)
    } else {
        None
    };
    let exact: Option<BTreeMap<Scalar, Scalar>> =
        law.as_ref().map(|l| l.atoms().into_iter().collect());
    let chi = exact.as_ref().map(|ex| {
        let observed: Vec<u64> = ex
            .keys()
            .map(|k| counts.get(k).map_or(0, |c| c.1))
            .collect();
        let q: Vec<f64> = ex.values().map(to_f64).collect();
        chi_square(&observed, &q, cfg.samples)
    });
    let chi = chi.flatten();

    let hist: Vec<(String, f64, u64, Option<Scalar>)> = counts
        .iter()
        .map(|(raw, (x, c))| {
            (
                raw.to_string(),
                *x,
                *c,
                exact.as_ref().and_then(|e| e.get(raw).cloned()),
            )
        })
        .collect();

    let mut summary: Vec<(&str, String)> = vec![
        ("n", n.to_string()),
        ("alpha", alpha.to_string()),
        ("seed", cfg.seed.to_string()),
        ("samples", cfg.samples.to_string()),
        ("mean", real(mean)),
        ("variance", real(variance)),
        ("third_moment", real(third)),
    ];
    if with_pairs {
        summary.push(("pair_mean_square_step", real(pair_sq / m)));
        summary.push(("pair_mean_square_step_exact", real(4.0 / n as f64)));
    }
    if let Some(c) = &chi {
        summary.push(("chi_square", real(c.statistic)));
        summary.push(("chi_square_df", c.df.to_string()));
        summary.push(("chi_square_p_value", real(c.p_value)));
    }

    let hist_header = ["w_raw", "w", "count", "frequency", "exact_probability"];
    let hist_rows: Vec<Vec<String>> = hist
        .iter()
        .map(|(raw, x, c, e)| {
            vec![
                raw.clone(),
                real(*x),
                c.to_string(),
                real(*c as f64 / m),
                e.as_ref().map(ToString::to_string).unwrap_or_default(),
            ]
        })
        .collect();

    Ok(match cfg.format {
        Format::Csv => table::csv(&hist_header, &hist_rows),
        Format::Pretty => {
            let rows: Vec<Vec<String>> = summary
                .iter()
                .map(|(k, v)| vec![k.to_string(), v.clone()])
                .collect();
            format!(
                "{}\n{}",
                table::pretty(&["quantity", "value"], &rows),
                table::pretty(&hist_header, &hist_rows)
            )
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in &summary {
                obj.insert(k.to_string(), Value::String(v.clone()));
            }
            let h: Vec<Value> = hist
                .iter()
                .map(|(raw, x, c, e)| {
                    json!({
                        "w_raw": raw,
                        "w": json_real(*x),
                        "count": c,
                        "exact_probability": e.as_ref().map(json_exact).unwrap_or(Value::Null),
                    })
                })
                .collect();
            obj.insert("histogram".into(), Value::Array(h));
            format!(
                "{}\n",
                serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
            )
        }
    })
}

pub fn clt(cfg: &RunConfig, n_list: &[usize]) -> Result<String, CliError> {
    require_chain_alpha(&cfg.alpha)?;
    if let Some(&bad) = n_list.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!(
            "clt needs every n >= 2, got {bad}"
        )));
    }
    let header = [
        "n",
        "distance",
        "bound",
        "distance*n^(1/4)",
        "bound*n^(1/4)",
    ];
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &n in n_list {
        let rep = stein_upper_bound(n, &cfg.alpha)?;
        let q = (n as f64).powf(0.25);
        rows.push(vec![
            n.to_string(),
            real(rep.kolmogorov),
            real(rep.bound),
            real(rep.kolmogorov * q),
            real(rep.bound * q),
        ]);
        records.push(json!({
            "n": n,
            "distance": json_real(rep.kolmogorov),
            "bound": json_real(rep.bound),
            "distance_n14": json_real(rep.kolmogorov * q),
            "bound_n14": json_real(rep.bound * q),
        }));
    }
    Ok(match cfg.format {
        Format::Csv => table::csv(&header, &rows),
        Format::Pretty => table::pretty(&header, &rows),
        Format::Json => {
            let obj = json!({"alpha": json_exact(&cfg.alpha), "rows": records});
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("serializable")
            )
        }
    })
}

pub fn verify(cfg: &RunConfig, cap: usize, single_alpha: bool) -> Result<(String, bool), CliError> {
    let alphas = if single_alpha {
        vec![cfg.alpha.clone()]
    } else {
        default_alphas()
    };
    let res = run_suite(cfg.n, &alphas, cap)?;
    let text = match cfg.format {
        Format::Csv => res.to_csv(),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&res.to_json()).expect("serializable")
        ),
        Format::Pretty => res.to_pretty(),
    };
    Ok((text, res.all_passed()))
}

pub fn theta(cfg: &RunConfig) -> Result<String, CliError> {
    let th = jack_theta_table(cfg.n, &cfg.alpha)?;
    let labels: Vec<String> = th
        .index()
        .partitions()
        .iter()
        .map(Partition::label)
        .collect();
    Ok(match cfg.format {
        Format::Csv => theta::to_csv(&th),
        Format::Json => {
            let rows: Vec<Value> = (0..labels.len())
                .map(|i| Value::Array((0..labels.len()).map(|j| json_exact(th.at(i, j))).collect()))
                .collect();
            let obj = json!({"n": cfg.n, "alpha": json_exact(&cfg.alpha), "partitions": labels, "theta": rows});
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("serializable")
            )
        }
        Format::Pretty => {
            let mut header = vec!["lambda\\mu"];
            header.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = (0..labels.len())
                .map(|i| {
                    let mut r = vec![labels[i].clone()];
                    r.extend((0..labels.len()).map(|j| th.at(i, j).to_string()));
                    r
                })
                .collect();
            table::pretty(&header, &rows)
        }
    })
}
