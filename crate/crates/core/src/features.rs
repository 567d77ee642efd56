//! Generalized product variables and the feature pool handed to synthesis.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::dataset::LearningSet;
use crate::error::{Error, Result};
use crate::quantization::{quantize_source, QuantizedFeature, Source};

/// Quantized product of p ≥ 2 variables plus the errors of each factor alone.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedFeature {
    pub feature: QuantizedFeature,
    pub factor_errors: BTreeMap<usize, usize>,
}

impl GeneralizedFeature {
    pub fn p(&self) -> usize {
        self.feature.source.arity()
    }
}

/// A product is admitted only when it beats every one of its factors.
pub fn admit_generalized(candidate: &GeneralizedFeature) -> bool {
    candidate
        .factor_errors
        .values()
        .min()
        .is_some_and(|&best| candidate.feature.errors < best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductSearch {
    pub admitted: Vec<GeneralizedFeature>,
    /// Number of product sources quantized.
    pub quantize_calls: usize,
}

/// Enumerates product subsets of size 2..=`max_p` in order of size, then
/// lexicographically, and keeps those admitted by [`admit_generalized`].
///
/// With `prune`, supersets of an admitted subset are skipped so that each
/// admitted product has the fewest co-factors possible.
pub fn search_products(
    set: &LearningSet,
    base: &[QuantizedFeature],
    max_p: usize,
    prune: bool,
) -> Result<ProductSearch> {
    let m = set.m();
    if base.len() != m {
        return Err(Error::Config(format!(
            "product search needs one base feature per variable ({m}), got {}",
            base.len()
        )));
    }
    if max_p < 2 || max_p > m {
        return Err(Error::Config(format!("max_p must lie in 2..={m}, got {max_p}")));
    }

    let mut admitted: Vec<GeneralizedFeature> = Vec::new();
    let mut quantize_calls = 0;
    for p in 2..=max_p {
        for subset in (0..m).combinations(p) {
            if prune
                && admitted
                    .iter()
                    .any(|a| a.feature.source.indices().iter().all(|i| subset.contains(i)))
            {
                continue;
            }
            quantize_calls += 1;
            let factor_errors = subset.iter().map(|&i| (i, base[i].errors)).collect();
            let candidate = GeneralizedFeature {
                feature: quantize_source(set, Source::product(subset)),
                factor_errors,
            };
            if admit_generalized(&candidate) {
                admitted.push(candidate);
            }
        }
    }
    Ok(ProductSearch {
        admitted,
        quantize_calls,
    })
}

/// Boolean features available as neuron inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePool {
    pub features: Vec<QuantizedFeature>,
    /// Variables that are a factor of more than one admitted product.
    pub overlapping_factors: Vec<usize>,
}

impl FeaturePool {
    pub fn new(features: Vec<QuantizedFeature>) -> Self {
        FeaturePool {
            features,
            overlapping_factors: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Quantizes a raw row into the pool's Boolean inputs.
    pub fn quantize_row(&self, row: &[f64]) -> Vec<bool> {
        self.features.iter().map(|f| f.evaluate(row)).collect()
    }

    pub fn min_errors(&self) -> Option<usize> {
        self.features.iter().map(|f| f.errors).min()
    }
}

/// Replaces the factors of each admitted product with the product itself.
///
/// Products come first (ascending p, then lexicographic source), followed by
/// the singletons that no admitted product covers.
pub fn substitute(base: &[QuantizedFeature], admitted: &[GeneralizedFeature]) -> FeaturePool {
    let mut products: Vec<&GeneralizedFeature> = admitted.iter().collect();
    products.sort_by(|a, b| {
        a.p()
            .cmp(&b.p())
            .then_with(|| a.feature.source.indices().cmp(b.feature.source.indices()))
    });

    let mut use_count: BTreeMap<usize, usize> = BTreeMap::new();
    for g in &products {
        for &i in g.feature.source.indices() {
            *use_count.entry(i).or_default() += 1;
        }
    }
    let covered: BTreeSet<usize> = use_count.keys().copied().collect();

    let mut features: Vec<QuantizedFeature> = products.iter().map(|g| g.feature.clone()).collect();
    let mut singles: Vec<&QuantizedFeature> = base
        .iter()
        .filter(|f| !f.source.indices().iter().any(|i| covered.contains(i)))
        .collect();
    singles.sort_by(|a, b| a.source.cmp(&b.source));
    features.extend(singles.into_iter().cloned());

    FeaturePool {
        features,
        overlapping_factors: use_count
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// Single-variable features for every variable of `set`, in index order.
pub fn base_features(set: &LearningSet) -> Vec<QuantizedFeature> {
    (0..set.m()).map(|i| quantize_source(set, Source::single(i))).collect()
}
