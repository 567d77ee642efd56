//! Threshold quantization of quantitative variables into Boolean features.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::LearningSet;

/// Variable indices a feature reads: one index, or several multiplied together.
///
/// Indices are kept sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Source(Vec<usize>);

impl Source {
    pub fn single(index: usize) -> Self {
        Source(vec![index])
    }

    /// Product source; duplicates are dropped. Panics on an empty index list.
    pub fn product(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(!v.is_empty(), "a source needs at least one variable");
        Source(v)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Number of co-factors p.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_product(&self) -> bool {
        self.0.len() > 1
    }

    pub fn value(&self, row: &[f64]) -> f64 {
        self.0.iter().map(|&i| row[i]).product()
    }

    pub fn render(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|&i| names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1)))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Which side of the threshold outputs 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::AtLeast => Polarity::Below,
            Polarity::Below => Polarity::AtLeast,
        }
    }

    pub fn apply(self, value: f64, threshold: f64) -> bool {
        match self {
            Polarity::AtLeast => value >= threshold,
            Polarity::Below => value < threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::AtLeast => ">=",
            Polarity::Below => "<",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Outcome of a threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub threshold: f64,
    pub polarity: Polarity,
    pub errors: usize,
    /// All values were identical; the cut is a constant predictor.
    pub constant: bool,
}

struct Candidate {
    threshold: f64,
    gap: f64,
    polarity: Polarity,
    errors: usize,
}

impl Candidate {
    /// Lower is better: errors, then wider gap, then smaller threshold, then `>=`.
    fn rank(&self, other: &Candidate) -> Ordering {
        self.errors
            .cmp(&other.errors)
            .then_with(|| other.gap.total_cmp(&self.gap))
            .then_with(|| self.threshold.total_cmp(&other.threshold))
            .then_with(|| (self.polarity == Polarity::Below).cmp(&(other.polarity == Polarity::Below)))
    }
}

/// Finds the threshold and polarity with the fewest errors against `labels`.
///
/// Thresholds are tried at midpoints between consecutive distinct values; ties
/// go to the wider gap, then the smaller threshold, then the `>=` polarity.
/// When every value is the same there is no midpoint and the cut sits at that
/// value, predicting the majority class for all instances.
pub fn quantize(values: &[f64], labels: &[bool]) -> Cut {
    assert_eq!(values.len(), labels.len());
    assert!(!values.is_empty());
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let ones_total = labels.iter().filter(|&&l| l).count();
    let zeros_total = n - ones_total;

    let mut best: Option<Candidate> = None;
    let (mut zeros_below, mut ones_below) = (0usize, 0usize);
    for w in 0..n - 1 {
        let t = order[w];
        if labels[t] {
            ones_below += 1;
        } else {
            zeros_below += 1;
        }
        let (lo, hi) = (values[t], values[order[w + 1]]);
        if lo == hi {
            continue;
        }
        let mut threshold = lo + (hi - lo) / 2.0;
        if threshold <= lo || threshold > hi {
            threshold = hi;
        }
        let at_least = ones_below + (zeros_total - zeros_below);
        for (polarity, errors) in [(Polarity::AtLeast, at_least), (Polarity::Below, n - at_least)] {
            let candidate = Candidate {
                threshold,
                gap: hi - lo,
                polarity,
                errors,
            };
            if best.as_ref().is_none_or(|b| candidate.rank(b) == Ordering::Less) {
                best = Some(candidate);
            }
        }
    }

    match best {
        Some(best) => Cut {
            threshold: best.threshold,
            polarity: best.polarity,
            errors: best.errors,
            constant: false,
        },
        None => {
            let (polarity, errors) = if ones_total >= zeros_total {
                (Polarity::AtLeast, zeros_total)
            } else {
                (Polarity::Below, ones_total)
            };
            Cut {
                threshold: values[0],
                polarity,
                errors,
                constant: true,
            }
        }
    }
}

/// A Boolean feature: a source variable (or product) cut at a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedFeature {
    pub source: Source,
    pub threshold: f64,
    pub polarity: Polarity,
    /// Errors V on the learning set.
    pub errors: usize,
    /// Outputs on the learning set, one per instance.
    pub column: Vec<bool>,
    pub constant: bool,
}

impl QuantizedFeature {
    pub fn from_cut(source: Source, values: &[f64], cut: Cut) -> Self {
        let column = values
            .iter()
            .map(|&v| cut.polarity.apply(v, cut.threshold))
            .collect();
        QuantizedFeature {
            source,
            threshold: cut.threshold,
            polarity: cut.polarity,
            errors: cut.errors,
            column,
            constant: cut.constant,
        }
    }

    /// Output on a fresh row of raw variable values.
    pub fn evaluate(&self, row: &[f64]) -> bool {
        self.polarity.apply(self.source.value(row), self.threshold)
    }

    /// Literal such as `(x1*x2 >= 101.5)`, or its complement when `negated`.
    pub fn literal(&self, names: &[String], negated: bool) -> String {
        let polarity = if negated { self.polarity.flip() } else { self.polarity };
        format!("({} {} {})", self.source.render(names), polarity, self.threshold)
    }
}

/// Values of `source` for every instance: the column itself, or the
/// elementwise product of the named columns.
pub fn source_values(set: &LearningSet, source: &Source) -> Vec<f64> {
    set.rows().iter().map(|row| source.value(row)).collect()
}

pub fn quantize_source(set: &LearningSet, source: Source) -> QuantizedFeature {
    let values = source_values(set, &source);
    let cut = quantize(&values, set.labels());
    QuantizedFeature::from_cut(source, &values, cut)
}

/// Errors of a fixed cut on arbitrary values; used by oracles and tests.
pub fn cut_errors(values: &[f64], labels: &[bool], threshold: f64, polarity: Polarity) -> usize {
    values
        .iter()
        .zip(labels)
        .filter(|(&v, &l)| polarity.apply(v, threshold) != l)
        .count()
}
