//! Majority-vote inference over the synthesized neurons, with coherence χ and
//! refusal below χ₀.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabelMap, LearningSet};
use crate::error::{Error, Result};
use crate::features::FeaturePool;
use crate::synthesis::Neuron;

/// Refusal threshold χ₀, held as an exact decimal fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chi0(Ratio<u64>);

impl Chi0 {
    pub const DEFAULT: Chi0 = Chi0(Ratio::new_raw(4, 5));

    /// Parses a plain decimal such as `0.8` or `1`; must lie in [0.5, 1].
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("chi0 must be a decimal in [0.5, 1], got {text:?}"));
        let text = text.trim();
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        let value = Ratio::new(num, den);
        if value < Ratio::new(1, 2) || value > Ratio::from_integer(1) {
            return Err(bad());
        }
        Ok(Chi0(value))
    }

    /// Uses the shortest decimal that round-trips `value`, so 0.8 means 4/5.
    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Config(format!("chi0 must be finite, got {value}")));
        }
        Self::parse(&format!("{value}"))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn accepts(self, chi: Ratio<u64>) -> bool {
        chi >= self.0
    }
}

impl Default for Chi0 {
    fn default() -> Self {
        Chi0::DEFAULT
    }
}

impl fmt::Display for Chi0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (*self.0.numer(), *self.0.denom());
        let int = num / den;
        let mut rem = num % den;
        if rem == 0 {
            return write!(f, "{int}");
        }
        write!(f, "{int}.")?;
        // Denominator divides a power of ten, so the expansion terminates.
        let mut digits = 0;
        while rem != 0 && digits < 19 {
            rem *= 10;
            write!(f, "{}", rem / den)?;
            rem %= den;
            digits += 1;
        }
        Ok(())
    }
}

impl FromStr for Chi0 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Chi0::parse(s)
    }
}

impl Serialize for Chi0 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Chi0 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Chi0::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Class(bool),
    Refused,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    /// Weight behind the majority outcome (n₁); half the total on a tie.
    pub votes_for: u64,
    /// Total weight N.
    pub total: u64,
    /// Output of every member neuron.
    pub votes: Vec<bool>,
}

impl Verdict {
    /// χ = n₁ / N, reduced.
    pub fn chi(&self) -> Ratio<u64> {
        Ratio::new(self.votes_for, self.total)
    }

    pub fn chi_f64(&self) -> f64 {
        self.votes_for as f64 / self.total as f64
    }

    /// Unreduced `n₁/N`, e.g. `4/5`.
    pub fn chi_text(&self) -> String {
        format!("{}/{}", self.votes_for, self.total)
    }

    pub fn is_refused(&self) -> bool {
        self.decision == Decision::Refused
    }
}

/// The deployable classifier: equal-error neurons voting over a shared pool.
#[derive(Debug, Clone, PartialEq)]
pub struct Collective {
    pub neurons: Vec<Neuron>,
    pub pool: FeaturePool,
    pub chi0: Chi0,
    pub label_map: LabelMap,
    pub variable_names: Vec<String>,
    /// Vote weight per neuron; uniform unless set explicitly.
    pub weights: Vec<u64>,
}

impl Collective {
    pub fn new(
        neurons: Vec<Neuron>,
        pool: FeaturePool,
        chi0: Chi0,
        label_map: LabelMap,
        variable_names: Vec<String>,
    ) -> Result<Self> {
        let weights = vec![1; neurons.len()];
        let c = Collective {
            neurons,
            pool,
            chi0,
            label_map,
            variable_names,
            weights,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.neurons.first() else {
            return Err(Error::Model("collective has no neurons".into()));
        };
        if self.neurons.iter().any(|n| n.errors != first.errors) {
            return Err(Error::Model("collective members disagree on V".into()));
        }
        if self.weights.len() != self.neurons.len() || self.weights.contains(&0) {
            return Err(Error::Model("one positive weight per neuron required".into()));
        }
        let k = self.pool.len();
        if self.neurons.iter().any(|n| n.expr.max_leaf() >= k) {
            return Err(Error::Model("neuron refers to a feature outside the pool".into()));
        }
        let m = self.variable_names.len();
        if self
            .pool
            .features
            .iter()
            .any(|f| f.source.indices().iter().any(|&i| i >= m))
        {
            return Err(Error::Model("feature refers to an unknown variable".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    /// Shared error count V of the members on the learning set.
    pub fn errors(&self) -> usize {
        self.neurons[0].errors
    }

    pub fn with_chi0(mut self, chi0: Chi0) -> Self {
        self.chi0 = chi0;
        self
    }

    /// Votes on already-quantized pool inputs.
    pub fn classify_inputs(&self, inputs: &[bool]) -> Verdict {
        let votes: Vec<bool> = self.neurons.iter().map(|n| n.expr.eval(inputs)).collect();
        let total: u64 = self.weights.iter().sum();
        let ones: u64 = votes
            .iter()
            .zip(&self.weights)
            .filter(|(&v, _)| v)
            .map(|(_, &w)| w)
            .sum();
        let zeros = total - ones;
        let (majority, votes_for) = match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => (Some(true), ones),
            std::cmp::Ordering::Less => (Some(false), zeros),
            std::cmp::Ordering::Equal => (None, ones),
        };
        let decision = match majority {
            Some(class) if self.chi0.accepts(Ratio::new(votes_for, total)) => Decision::Class(class),
            _ => Decision::Refused,
        };
        Verdict {
            decision,
            votes_for,
            total,
            votes,
        }
    }

    pub fn classify(&self, x: &[f64]) -> Result<Verdict> {
        if x.len() != self.variable_names.len() {
            return Err(Error::WidthMismatch {
                expected: self.variable_names.len(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: 1,
                column: "input".into(),
            });
        }
        Ok(self.classify_inputs(&self.pool.quantize_row(x)))
    }

    /// χ for every one of the 2^k Boolean pool combinations; bit i of the row
    /// index is pool feature i.
    pub fn coherence_table(&self) -> Result<CoherenceTable> {
        let k = self.pool.len();
        if k > 20 {
            return Err(Error::TableTooLarge(k));
        }
        let rows: Vec<Verdict> = (0u32..1 << k)
            .map(|combo| {
                let inputs: Vec<bool> = (0..k).map(|bit| combo >> bit & 1 == 1).collect();
                self.classify_inputs(&inputs)
            })
            .collect();
        let refused = rows.iter().filter(|v| v.is_refused()).count();
        Ok(CoherenceTable {
            refused_fraction: refused as f64 / rows.len() as f64,
            rows,
        })
    }

    pub fn evaluate(&self, set: &LearningSet) -> Result<Metrics> {
        if set.m() != self.variable_names.len() {
            return Err(Error::WidthMismatch {
                expected: self.variable_names.len(),
                found: set.m(),
            });
        }
        let mut metrics = Metrics {
            n: set.n(),
            errors: 0,
            refusals: 0,
            class_errors: [0, 0],
            mean_chi: 0.0,
            chi0: self.chi0,
            misclassified_rows: Vec::new(),
            refused_rows: Vec::new(),
        };
        let mut chi_sum = 0.0;
        for (t, (row, &label)) in set.rows().iter().zip(set.labels()).enumerate() {
            let verdict = self.classify(row)?;
            chi_sum += verdict.chi_f64();
            match verdict.decision {
                Decision::Refused => {
                    metrics.refusals += 1;
                    metrics.refused_rows.push(t + 1);
                }
                Decision::Class(c) if c != label => {
                    metrics.errors += 1;
                    metrics.class_errors[label as usize] += 1;
                    metrics.misclassified_rows.push(t + 1);
                }
                Decision::Class(_) => {}
            }
        }
        if set.n() > 0 {
            metrics.mean_chi = chi_sum / set.n() as f64;
        }
        Ok(metrics)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceTable {
    pub rows: Vec<Verdict>,
    pub refused_fraction: f64,
}

/// Scores of a collective on labeled data. Errors count accepted decisions only.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub n: usize,
    pub errors: usize,
    pub refusals: usize,
    /// Errors on instances whose true class is 0 and 1.
    pub class_errors: [usize; 2],
    pub mean_chi: f64,
    pub chi0: Chi0,
    /// 1-based rows decided wrongly.
    pub misclassified_rows: Vec<usize>,
    /// 1-based rows refused.
    pub refused_rows: Vec<usize>,
}

impl Metrics {
    pub fn low_coherence(&self) -> bool {
        self.mean_chi < self.chi0.as_f64()
    }

    pub fn warning(&self) -> Option<String> {
        self.low_coherence().then(|| {
            format!(
                "mean chi {:.4} is below chi0 {}: add input variables or revise the learning set",
                self.mean_chi, self.chi0
            )
        })
    }

    pub fn to_json(&self, label_map: &LabelMap) -> serde_json::Value {
        let per_class: BTreeMap<&str, usize> = [false, true]
            .into_iter()
            .map(|c| (label_map.literal(c), self.class_errors[c as usize]))
            .collect();
        serde_json::json!({
            "n": self.n,
            "V_total": self.errors,
            "refusals": self.refusals,
            "per_class_errors": per_class,
            "mean_chi": self.mean_chi,
            "chi0": self.chi0.to_string(),
            "misclassified_rows": self.misclassified_rows,
            "refused_rows": self.refused_rows,
            "warning": self.warning(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Connective, Expr};
    use crate::quantization::{quantize, QuantizedFeature, Source};

    fn pool(k: usize) -> FeaturePool {
        let values = [0.0, 1.0];
        let cut = quantize(&values, &[false, true]);
        FeaturePool::new(
            (0..k)
                .map(|i| QuantizedFeature::from_cut(Source::single(i), &values, cut))
                .collect(),
        )
    }

    fn neuron(expr: Expr) -> Neuron {
        Neuron {
            layer: expr.depth(),
            expr,
            errors: 1,
            column: Vec::new(),
            criteria: None,
        }
    }

    fn collective(exprs: Vec<Expr>, k: usize) -> Collective {
        let names = (1..=k).map(|i| format!("x{i}")).collect();
        Collective::new(
            exprs.into_iter().map(neuron).collect(),
            pool(k),
            Chi0::DEFAULT,
            LabelMap::new("F", "M"),
            names,
        )
        .unwrap()
    }

    #[test]
    fn chi0_parsing() {
        assert_eq!(Chi0::parse("0.8").unwrap().ratio(), Ratio::new(4, 5));
        assert_eq!(Chi0::from_f64(0.81).unwrap().ratio(), Ratio::new(81, 100));
        assert_eq!(Chi0::parse("1").unwrap().to_string(), "1");
        assert_eq!(Chi0::parse("0.875").unwrap().to_string(), "0.875");
        for bad in ["0.4", "0.125", "1.01", "", ".", "abc", "-0.9", "0.8e1"] {
            assert!(Chi0::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn four_of_five_at_default_threshold() {
        // Five single-leaf voters; flipping one input changes exactly one vote.
        let c = collective((0..5).map(Expr::Leaf).collect(), 5);
        let verdict = c.classify_inputs(&[true, true, true, true, false]);
        assert_eq!(verdict.decision, Decision::Class(true));
        assert_eq!(verdict.chi(), Ratio::new(4, 5));
        assert_eq!(verdict.chi_text(), "4/5");
        let strict = c.clone().with_chi0(Chi0::parse("0.81").unwrap());
        assert!(strict.classify_inputs(&[true, true, true, true, false]).is_refused());
    }

    #[test]
    fn single_voter_always_coherent() {
        let c = collective(vec![Expr::gate(Connective::And, Expr::Leaf(0), Expr::Leaf(1))], 2);
        let v = c.classify(&[1.0, 0.0]).unwrap();
        assert_eq!((v.decision, v.chi()), (Decision::Class(false), Ratio::from_integer(1)));
    }

    #[test]
    fn even_split_refuses() {
        let c = collective((0..4).map(Expr::Leaf).collect(), 4);
        let v = c.classify_inputs(&[true, false, true, false]);
        assert!(v.is_refused());
        assert_eq!(v.chi(), Ratio::new(1, 2));
        assert_eq!(v.votes_for + (v.total - v.votes_for), v.total);
    }

    #[test]
    fn dimension_mismatch() {
        let c = collective(vec![Expr::Leaf(0)], 2);
        assert!(matches!(c.classify(&[1.0]), Err(Error::WidthMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn unanimous_tables() {
        let single = collective(vec![Expr::gate(Connective::Or, Expr::Leaf(0), Expr::Leaf(1))], 2);
        let table = single.coherence_table().unwrap();
        assert_eq!(table.rows.len(), 4);
        assert!(table.rows.iter().all(|v| v.chi() == Ratio::from_integer(1)));

        let xor = Expr::gate(Connective::Xor, Expr::Leaf(0), Expr::Leaf(1));
        let triple = collective(vec![xor.clone(), xor.clone(), xor], 2);
        assert!(triple.coherence_table().unwrap().rows.iter().all(|v| v.chi() == Ratio::from_integer(1)));
        assert_eq!(triple.coherence_table().unwrap().refused_fraction, 0.0);
    }

    #[test]
    fn oversized_table() {
        let c = collective(vec![Expr::Leaf(0)], 21);
        assert!(matches!(c.coherence_table(), Err(Error::TableTooLarge(21))));
    }

    #[test]
    fn all_refused_batch() {
        let c = collective(vec![Expr::Leaf(0), Expr::Leaf(1)], 2);
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let set = LearningSet::for_evaluation(
            c.variable_names.clone(),
            "y",
            rows,
            vec![true, false, false],
            c.label_map.clone(),
        )
        .unwrap();
        let metrics = c.evaluate(&set).unwrap();
        assert_eq!((metrics.errors, metrics.refusals), (0, 3));
        assert!(metrics.warning().is_some());
    }

    #[test]
    fn validation_rejects_mixed_errors() {
        let mut c = collective(vec![Expr::Leaf(0), Expr::Leaf(1)], 2);
        c.neurons[1].errors = 2;
        assert!(c.validate().is_err());
    }
}
