//! The Jack_α measure π_α(λ) = α^n n! / (c_λ(α) c'_λ(α)).

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hook::c_pair;
use crate::partition::{Partition, PartitionIndex};
use crate::scalar::{ensure_positive, factorial, parse_scalar, pow, Scalar};

pub fn jack_measure(lambda: &Partition, alpha: &Scalar) -> Result<Scalar> {
    ensure_positive(alpha)?;
    let (c, cp) = c_pair(lambda, alpha);
    Ok(numerator(lambda.size(), alpha) / (c * cp))
}

fn numerator(n: usize, alpha: &Scalar) -> Scalar {
    pow(alpha, n) * Scalar::from_integer(factorial(n))
}

/// Partitions of one size with their hook products cached.
#[derive(Debug, Clone)]
pub struct Level {
    pub alpha: Scalar,
    pub index: PartitionIndex,
    pub c: Vec<Scalar>,
    pub c_prime: Vec<Scalar>,
}

impl Level {
    pub fn new(n: usize, alpha: &Scalar) -> Result<Self> {
        ensure_positive(alpha)?;
        let index = PartitionIndex::new(n);
        let (c, c_prime) = index.partitions().iter().map(|l| c_pair(l, alpha)).unzip();
        Ok(Level {
            alpha: alpha.clone(),
            index,
            c,
            c_prime,
        })
    }

    pub fn degree(&self) -> usize {
        self.index.degree()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn pos(&self, p: &Partition) -> usize {
        self.index
            .position(p)
            .unwrap_or_else(|| panic!("{p} is not a partition of {}", self.degree()))
    }

    pub fn measure(&self) -> Vec<Scalar> {
        let num = numerator(self.degree(), &self.alpha);
        self.c
            .iter()
            .zip(&self.c_prime)
            .map(|(c, cp)| &num / (c * cp))
            .collect()
    }
}

/// An exact probability vector over the partitions of `n` in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistOverPartitions {
    pub n: usize,
    pub alpha: Scalar,
    pub probs: Vec<Scalar>,
}

impl DistOverPartitions {
    pub fn point_mass(n: usize, alpha: &Scalar, at: &Partition) -> Self {
        let index = PartitionIndex::new(n);
        let mut probs = vec![Scalar::zero(); index.len()];
        probs[index.position(at).expect("partition of n")] = Scalar::one();
        DistOverPartitions {
            n,
            alpha: alpha.clone(),
            probs,
        }
    }

    pub fn partitions(&self) -> Vec<Partition> {
        crate::partition::enumerate_partitions(self.n)
    }

    pub fn total(&self) -> Scalar {
        self.probs.iter().sum()
    }

    pub fn prob(&self, lambda: &Partition) -> Scalar {
        self.partitions()
            .iter()
            .position(|p| p == lambda)
            .map(|i| self.probs[i].clone())
            .unwrap_or_else(Scalar::zero)
    }

    /// Probability of the set of partitions satisfying `pred`.
    pub fn prob_where(&self, pred: impl Fn(&Partition) -> bool) -> Scalar {
        self.partitions()
            .iter()
            .zip(&self.probs)
            .filter(|(p, _)| pred(p))
            .map(|(_, q)| q.clone())
            .sum()
    }

    /// `{"[3]": "1/6", ...}` in canonical order.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (p, q) in self.partitions().iter().zip(&self.probs) {
            map.insert(p.label(), Value::String(q.to_string()));
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value, alpha: &Scalar) -> Result<Self> {
        let bad = |m: &str| Error::MalformedTable(m.to_string());
        let map = value
            .as_object()
            .ok_or_else(|| bad("expected a JSON object"))?;
        let mut entries = Vec::with_capacity(map.len());
        for (k, v) in map {
            let p: Partition = k.parse()?;
            let q = parse_scalar(
                v.as_str()
                    .ok_or_else(|| bad("probabilities must be strings"))?,
            )?;
            entries.push((p, q));
        }
        let n = entries.first().map_or(0, |(p, _)| p.size());
        let index = PartitionIndex::new(n);
        let mut probs = vec![Scalar::zero(); index.len()];
        for (p, q) in entries {
            let i = index
                .position(&p)
                .ok_or_else(|| bad("mixed partition sizes"))?;
            probs[i] = q;
        }
        Ok(DistOverPartitions {
            n,
            alpha: alpha.clone(),
            probs,
        })
    }
}

pub fn jack_distribution(n: usize, alpha: &Scalar) -> Result<DistOverPartitions> {
    let level = Level::new(n, alpha)?;
    Ok(DistOverPartitions {
        n,
        alpha: alpha.clone(),
        probs: level.measure(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_shape_32() {
        // 60α² / ((2α+2)(3α+1)(α+2)(2α+1)(α+1))
        for a in [int(1), int(2), ratio(3, 2), ratio(2, 7)] {
            let one = int(1);
            let two = int(2);
            let expect = int(60) * &a * &a
                / ((&two * &a + &two)
                    * (int(3) * &a + &one)
                    * (&a + &two)
                    * (&two * &a + &one)
                    * (&a + &one));
            assert_eq!(jack_measure(&p("[3,2]"), &a).unwrap(), expect);
        }
        assert_eq!(jack_measure(&p("[3,2]"), &int(1)).unwrap(), ratio(5, 24));
        assert_eq!(jack_measure(&p("[3,2]"), &int(2)).unwrap(), ratio(2, 21));
        assert_eq!(jack_measure(&p("[1]"), &ratio(4, 9)).unwrap(), int(1));
        assert!(jack_measure(&p("[1]"), &int(0)).is_err());
    }

    #[test]
    fn plancherel_three() {
        let d = jack_distribution(3, &int(1)).unwrap();
        assert_eq!(d.probs, vec![ratio(1, 6), ratio(2, 3), ratio(1, 6)]);
    }

    #[test]
    fn total_mass_is_one() {
        for n in 0..=10 {
            for a in [int(1), ratio(3, 2), int(2), int(3), ratio(1, 3)] {
                assert_eq!(jack_distribution(n, &a).unwrap().total(), int(1));
            }
        }
    }

    #[test]
    fn conjugation_duality() {
        for n in 1..=8 {
            for a in [ratio(3, 2), int(2), int(3)] {
                let d = jack_distribution(n, &a).unwrap();
                let dual = jack_distribution(n, &a.recip()).unwrap();
                for l in d.partitions() {
                    assert_eq!(d.prob(&l), dual.prob(&l.conjugate()));
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let d = jack_distribution(4, &ratio(3, 2)).unwrap();
        let v = d.to_json();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys[0], "[4]");
        assert_eq!(keys[4], "[1,1,1,1]");
        assert_eq!(DistOverPartitions::from_json(&v, &ratio(3, 2)).unwrap(), d);
    }
}
