//! Layered growth of 2-input Boolean neurons.
//!
//! Layer 0 is the feature pool itself. Layer 1 pairs every two pool features
//! through each connective; layer r > 1 extends each surviving neuron of layer
//! r − 1 with one more pool feature. In the default mode a candidate is admitted
//! when it makes strictly fewer errors than both of its operands, and growth
//! stops once the best neuron is error-free or no admitted neuron beats the
//! previous layer's best. The split mode instead scores candidates by
//! unbiasedness plus regularity over two halves of the data and stops when the
//! best score no longer improves by more than δ.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::collective::{Chi0, Collective};
use crate::dataset::{contradiction_bound, split_even, LearningSet, SplitPair};
use crate::error::{Error, Result};
use crate::features::{base_features, search_products, substitute, FeaturePool};
use crate::logic::{Connective, Expr};
use crate::quantization::{quantize, QuantizedFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Error-count admission and stopping.
    #[default]
    Statement1,
    /// Unbiasedness + regularity over an A/B split with the δ stopping rule.
    Split,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Statement1 => "statement1",
            Mode::Split => "split",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthesisConfig {
    pub mode: Mode,
    pub delta: u32,
    pub f_ratio: f64,
    pub max_layers: usize,
    /// Largest product arity; `None` means min(m, 4). Values below 2 turn the
    /// product search off, values above m are clamped.
    pub max_p: Option<usize>,
    /// Skip supersets of admitted products.
    pub prune_products: bool,
    pub chi0: f64,
    pub seed: u64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            mode: Mode::Statement1,
            delta: 0,
            f_ratio: 0.4,
            max_layers: 10,
            max_p: None,
            prune_products: true,
            chi0: 0.8,
            seed: 0,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_ratio > 0.0 && self.f_ratio <= 1.0) {
            return Err(Error::Config(format!("f_ratio must lie in (0, 1], got {}", self.f_ratio)));
        }
        if self.max_layers == 0 {
            return Err(Error::Config("max_layers must be at least 1".into()));
        }
        Chi0::from_f64(self.chi0)?;
        Ok(())
    }

    pub fn effective_max_p(&self, m: usize) -> usize {
        self.max_p.unwrap_or(4).min(m)
    }
}

/// Unbiasedness b_u, regularity Δ and their sum CR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCriteria {
    pub unbiasedness: usize,
    pub regularity: usize,
    pub cr: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neuron {
    pub expr: Expr,
    /// Layer r; equals the number of connective levels of `expr`.
    pub layer: usize,
    /// Errors V on the learning set.
    pub errors: usize,
    /// Outputs on the learning set.
    pub column: Vec<bool>,
    pub criteria: Option<SplitCriteria>,
}

impl Neuron {
    pub fn leaf_count(&self) -> usize {
        self.expr.leaves().len()
    }

    /// Score used for stopping: CR in split mode, V otherwise.
    fn score(&self) -> usize {
        self.criteria.map_or(self.errors, |c| c.cr)
    }
}

/// A neuron plus the operand error counts needed for admission.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub neuron: Neuron,
    /// V of the first operand: z_j, or the first pool feature at layer 1.
    pub parent_errors: usize,
    /// V of the added pool feature x_k.
    pub leaf_errors: usize,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateLayer {
    /// Number of operand pairings L_r.
    pub pairs: usize,
    pub candidates: Vec<Candidate>,
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn pool_columns(pool: &FeaturePool) -> Vec<&[bool]> {
    pool.features.iter().map(|f| f.column.as_slice()).collect()
}

/// Candidates of layer `r`: all pool pairs at r = 1, survivor × pool feature
/// afterwards, each through every connective.
///
/// Candidates whose column repeats a pool feature, a survivor or an earlier
/// candidate are dropped, keeping the one with fewer distinct leaves and then
/// the earlier one.
pub fn generate_candidates(
    pool: &FeaturePool,
    survivors: &[Neuron],
    r: usize,
    labels: &[bool],
) -> Result<CandidateLayer> {
    if pool.is_empty() {
        return Err(Error::NoFeatures);
    }
    assert!(r >= 1, "layer numbering starts at 1");
    assert!(r > 1 || survivors.is_empty(), "layer 1 is built from the pool alone");
    let columns = pool_columns(pool);

    let mut wirings: Vec<(Expr, usize, usize)> = Vec::new();
    let mut pairs = 0;
    if r == 1 {
        for (a, b) in (0..pool.len()).tuple_combinations() {
            pairs += 1;
            for op in Connective::ALL {
                wirings.push((
                    Expr::gate(op, Expr::Leaf(a), Expr::Leaf(b)),
                    pool.features[a].errors,
                    pool.features[b].errors,
                ));
            }
        }
    } else {
        for z in survivors {
            let used = z.expr.leaves();
            for k in (0..pool.len()).filter(|k| !used.contains(k)) {
                pairs += 1;
                for op in Connective::ALL {
                    wirings.push((
                        Expr::gate(op, z.expr.clone(), Expr::Leaf(k)),
                        z.errors,
                        pool.features[k].errors,
                    ));
                }
            }
        }
    }

    let mut known: HashMap<Vec<bool>, Option<usize>> = HashMap::new();
    for f in &pool.features {
        known.insert(f.column.clone(), None);
    }
    for z in survivors {
        known.insert(z.column.clone(), None);
    }
    let mut candidates: Vec<Option<Candidate>> = Vec::new();
    for (order, (expr, parent_errors, leaf_errors)) in wirings.into_iter().enumerate() {
        let column = expr.eval_columns(&columns);
        let errors = hamming(&column, labels);
        let candidate = Candidate {
            neuron: Neuron {
                layer: r,
                errors,
                column: column.clone(),
                criteria: None,
                expr,
            },
            parent_errors,
            leaf_errors,
            order,
        };
        match known.get(&column) {
            None => {
                known.insert(column, Some(candidates.len()));
                candidates.push(Some(candidate));
            }
            Some(None) => {}
            Some(&Some(slot)) => {
                let held = candidates[slot].as_ref().expect("slot holds a candidate");
                if candidate.neuron.leaf_count() < held.neuron.leaf_count() {
                    candidates[slot] = Some(candidate);
                }
            }
        }
    }
    Ok(CandidateLayer {
        pairs,
        candidates: candidates.into_iter().flatten().collect(),
    })
}

/// Exterior-addition admission: strictly fewer errors than both operands.
pub fn admit(candidate_errors: usize, parent_errors: usize, leaf_errors: usize) -> bool {
    candidate_errors < parent_errors.min(leaf_errors)
}

/// Default survivor cap: max(1, ⌈f_ratio · L_r⌉).
pub fn default_f_cap(f_ratio: f64, pairs: usize) -> usize {
    // The small slack keeps 0.4 · 10 at 4 despite binary rounding.
    ((f_ratio * pairs as f64 - 1e-9).ceil() as usize).max(1)
}

/// Keeps the `f_cap` best candidates by (score, leaf count, generation order).
///
/// The score is V, or CR when split criteria are present.
pub fn select_survivors(admitted: &[Candidate], f_cap: usize) -> Vec<Neuron> {
    let mut ranked: Vec<&Candidate> = admitted.iter().collect();
    ranked.sort_by_key(|c| (c.neuron.score(), c.neuron.errors, c.neuron.leaf_count(), c.order));
    ranked.into_iter().take(f_cap.max(1)).map(|c| c.neuron.clone()).collect()
}

/// Pool features re-fitted on each half of a split and evaluated on all data.
#[derive(Debug, Clone)]
pub struct SplitFits {
    columns_a: Vec<Vec<bool>>,
    columns_b: Vec<Vec<bool>>,
    labels: Vec<bool>,
}

impl SplitFits {
    pub fn new(set: &LearningSet, pool: &FeaturePool, split: &SplitPair) -> Result<Self> {
        let fit = |indices: &[usize], name: char| -> Result<Vec<Vec<bool>>> {
            let sub_labels: Vec<bool> = indices.iter().map(|&i| set.labels()[i]).collect();
            if sub_labels.iter().all(|&l| l == sub_labels[0]) {
                return Err(Error::DegenerateSplit(name));
            }
            Ok(pool
                .features
                .iter()
                .map(|f| {
                    let all: Vec<f64> = set.rows().iter().map(|row| f.source.value(row)).collect();
                    let sub: Vec<f64> = indices.iter().map(|&i| all[i]).collect();
                    let cut = quantize(&sub, &sub_labels);
                    QuantizedFeature::from_cut(f.source.clone(), &all, cut).column
                })
                .collect())
        };
        if split.subset_a.is_empty() || split.subset_b.is_empty() {
            return Err(Error::DegenerateSplit(if split.subset_a.is_empty() { 'A' } else { 'B' }));
        }
        Ok(SplitFits {
            columns_a: fit(&split.subset_a, 'A')?,
            columns_b: fit(&split.subset_b, 'B')?,
            labels: set.labels().to_vec(),
        })
    }

    /// The outputs f(W/A) and f(W/B) of `expr`.
    pub fn outputs(&self, expr: &Expr) -> (Vec<bool>, Vec<bool>) {
        let a: Vec<&[bool]> = self.columns_a.iter().map(Vec::as_slice).collect();
        let b: Vec<&[bool]> = self.columns_b.iter().map(Vec::as_slice).collect();
        (expr.eval_columns(&a), expr.eval_columns(&b))
    }

    pub fn criteria(&self, expr: &Expr) -> SplitCriteria {
        let (fa, fb) = self.outputs(expr);
        let unbiasedness = hamming(&fa, &fb);
        let regularity = hamming(&fa, &self.labels) + hamming(&fb, &self.labels);
        SplitCriteria {
            unbiasedness,
            regularity,
            cr: unbiasedness + regularity,
        }
    }
}

/// b_u and Δ of `expr` with every pool threshold re-fitted on A and on B.
pub fn split_criteria(expr: &Expr, split: &SplitPair, set: &LearningSet, pool: &FeaturePool) -> Result<SplitCriteria> {
    Ok(SplitFits::new(set, pool, split)?.criteria(expr))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopCause {
    #[serde(rename = "CR=0")]
    CrZero,
    #[serde(rename = "L_{r+1}=0")]
    NoAdmissions,
    #[serde(rename = "delta-rule")]
    DeltaRule,
    #[serde(rename = "layer-cap")]
    LayerCap,
}

impl StopCause {
    pub fn as_str(self) -> &'static str {
        match self {
            StopCause::CrZero => "CR=0",
            StopCause::NoAdmissions => "L_{r+1}=0",
            StopCause::DeltaRule => "delta-rule",
            StopCause::LayerCap => "layer-cap",
        }
    }
}

impl fmt::Display for StopCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One grown layer. Layer 0 describes the feature pool.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerTrace {
    pub r: usize,
    /// Operand pairings L_r.
    pub pairs: usize,
    /// Distinct candidate neurons after deduplication.
    pub candidates: usize,
    /// Candidates passing admission (all candidates in split mode).
    pub admitted: usize,
    /// Admitted candidates that beat the previous layer's best score.
    pub improving: usize,
    pub f_cap: usize,
    /// Best V among survivors; `None` when the layer was rejected.
    pub min_v: Option<usize>,
    /// Best CR among survivors in split mode.
    pub min_cr: Option<usize>,
    pub survivors: Vec<Neuron>,
    /// Admitted neurons sharing the layer's best score (uncapped).
    pub best: Vec<Neuron>,
    pub stop_cause: Option<StopCause>,
}

impl LayerTrace {
    fn score(&self) -> Option<usize> {
        self.min_cr.or(self.min_v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub mode: Mode,
    pub delta: u32,
    pub max_layers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopDecision {
    pub cause: StopCause,
    /// Layer whose neurons form the final model.
    pub keep_layer: usize,
}

/// Decides whether growth ends after the last trace in `history`.
pub fn should_stop(history: &[LayerTrace], rule: StopRule) -> Option<StopDecision> {
    let current = history.last()?;
    let r = current.r;
    let previous = history.len().checked_sub(2).map(|i| &history[i]);

    if r > 0 && (current.candidates == 0 || current.improving == 0 && rule.mode == Mode::Statement1) {
        return Some(StopDecision {
            cause: StopCause::NoAdmissions,
            keep_layer: previous.map_or(0, |p| p.r),
        });
    }
    let score = current.score()?;
    if let (Mode::Split, Some(prev)) = (rule.mode, previous) {
        if let Some(prev_score) = prev.score() {
            if prev_score <= score + rule.delta as usize {
                return Some(StopDecision {
                    cause: StopCause::DeltaRule,
                    keep_layer: prev.r,
                });
            }
        }
    }
    if score == 0 {
        return Some(StopDecision {
            cause: StopCause::CrZero,
            keep_layer: r,
        });
    }
    if r >= rule.max_layers {
        return Some(StopDecision {
            cause: StopCause::LayerCap,
            keep_layer: r,
        });
    }
    None
}

/// Serializable summary of one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub source: Vec<usize>,
    pub name: String,
    pub threshold: f64,
    pub polarity: String,
    pub errors: usize,
    pub constant: bool,
}

impl FeatureSummary {
    pub fn of(feature: &QuantizedFeature, names: &[String]) -> Self {
        FeatureSummary {
            source: feature.source.indices().to_vec(),
            name: feature.source.render(names),
            threshold: feature.threshold,
            polarity: feature.polarity.symbol().to_owned(),
            errors: feature.errors,
            constant: feature.constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSummary {
    pub r: usize,
    pub pairs: usize,
    pub candidates: usize,
    pub admitted: usize,
    pub improving: usize,
    pub f_cap: usize,
    pub survivors: usize,
    pub min_v: Option<usize>,
    pub min_cr: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_cause: Option<StopCause>,
}

impl From<&LayerTrace> for LayerSummary {
    fn from(t: &LayerTrace) -> Self {
        LayerSummary {
            r: t.r,
            pairs: t.pairs,
            candidates: t.candidates,
            admitted: t.admitted,
            improving: t.improving,
            f_cap: t.f_cap,
            survivors: t.survivors.len(),
            min_v: t.min_v,
            min_cr: t.min_cr,
            stop_cause: t.stop_cause,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSummary {
    pub feature: FeatureSummary,
    pub p: usize,
    pub factor_errors: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub base_features: Vec<FeatureSummary>,
    pub products_admitted: Vec<ProductSummary>,
    pub product_quantize_calls: usize,
    pub overlapping_factors: Vec<usize>,
    pub pool: Vec<FeatureSummary>,
    pub layers: Vec<LayerSummary>,
    pub stop_cause: StopCause,
    pub kept_layer: usize,
    pub final_errors: usize,
    pub collective_size: usize,
    pub contradiction_bound: usize,
    /// 1-based learning-set rows the collective gets wrong or refuses.
    pub doubtful_rows: Vec<usize>,
    pub warnings: Vec<String>,
}

impl SynthesisReport {
    /// Growth stalled with errors left; the run deserves exit code 3.
    pub fn stalled(&self) -> bool {
        self.stop_cause == StopCause::NoAdmissions && self.final_errors > 0
    }
}

/// Full outcome of [`synthesize`], including the per-layer neurons.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub collective: Collective,
    pub report: SynthesisReport,
    pub traces: Vec<LayerTrace>,
}

/// Builds the feature pool: single-variable cuts, then admitted products
/// substituted for their factors.
pub fn build_pool(set: &LearningSet, config: &SynthesisConfig) -> Result<(FeaturePool, Vec<QuantizedFeature>, Vec<ProductSummary>, usize)> {
    let base = base_features(set);
    let max_p = config.effective_max_p(set.m());
    if max_p < 2 {
        return Ok((FeaturePool::new(base.clone()), base, Vec::new(), 0));
    }
    let search = search_products(set, &base, max_p, config.prune_products)?;
    let names = set.variable_names();
    let products = search
        .admitted
        .iter()
        .map(|g| ProductSummary {
            feature: FeatureSummary::of(&g.feature, names),
            p: g.p(),
            factor_errors: g.factor_errors.iter().map(|(&i, &v)| (i, v)).collect(),
        })
        .collect();
    let pool = substitute(&base, &search.admitted);
    Ok((pool, base, products, search.quantize_calls))
}

/// Runs quantization, product search and layered growth on `set`.
pub fn synthesize(set: &LearningSet, config: &SynthesisConfig) -> Result<Synthesis> {
    config.validate()?;
    let chi0 = Chi0::from_f64(config.chi0)?;
    let (pool, base, products, product_calls) = build_pool(set, config)?;
    if pool.is_empty() {
        return Err(Error::NoFeatures);
    }
    let labels = set.labels();
    let fits = match config.mode {
        Mode::Split => Some(SplitFits::new(set, &pool, &split_even(set, config.seed)?)?),
        Mode::Statement1 => None,
    };
    let rule = StopRule {
        mode: config.mode,
        delta: config.delta,
        max_layers: config.max_layers,
    };

    let with_criteria = |mut neuron: Neuron| {
        if let Some(fits) = &fits {
            neuron.criteria = Some(fits.criteria(&neuron.expr));
        }
        neuron
    };

    let layer0: Vec<Candidate> = pool
        .features
        .iter()
        .enumerate()
        .map(|(i, f)| Candidate {
            neuron: with_criteria(Neuron {
                expr: Expr::Leaf(i),
                layer: 0,
                errors: f.errors,
                column: f.column.clone(),
                criteria: None,
            }),
            parent_errors: f.errors,
            leaf_errors: f.errors,
            order: i,
        })
        .collect();
    let mut history = vec![finish_layer(0, pool.len(), pool.len(), layer0, pool.len(), None, config.mode)];
    let mut decision = should_stop(&history, rule);

    while decision.is_none() {
        let r = history.len();
        let survivors: &[Neuron] = if r == 1 { &[] } else { &history[r - 1].survivors };
        let layer = generate_candidates(&pool, survivors, r, labels)?;
        let generated = layer.candidates.len();
        let admitted: Vec<Candidate> = layer
            .candidates
            .into_iter()
            .filter(|c| {
                config.mode == Mode::Split || admit(c.neuron.errors, c.parent_errors, c.leaf_errors)
            })
            .map(|mut c| {
                c.neuron = with_criteria(c.neuron);
                c
            })
            .collect();
        let f_cap = default_f_cap(config.f_ratio, layer.pairs);
        let bar = history[r - 1].score();
        history.push(finish_layer(r, layer.pairs, generated, admitted, f_cap, bar, config.mode));
        decision = should_stop(&history, rule);
    }
    let decision = decision.expect("loop exits on a decision");
    if let Some(last) = history.last_mut() {
        last.stop_cause = Some(decision.cause);
    }

    let kept = &history[decision.keep_layer];
    let members = collective_members(&kept.best);
    let collective = Collective::new(
        members,
        pool.clone(),
        chi0,
        set.label_map().clone(),
        set.variable_names().to_vec(),
    )?;

    let names = set.variable_names();
    let fit = collective.evaluate(set)?;
    let mut doubtful_rows: Vec<usize> = fit.misclassified_rows.iter().chain(&fit.refused_rows).copied().collect();
    doubtful_rows.sort_unstable();

    let mut warnings = Vec::new();
    for f in base.iter().filter(|f| f.constant) {
        warnings.push(format!("variable {} is constant on the learning set", f.source.render(names)));
    }
    if !pool.overlapping_factors.is_empty() {
        warnings.push(format!(
            "variables shared by several admitted products: {}",
            pool.overlapping_factors.iter().map(|&i| names[i].as_str()).join(", ")
        ));
    }
    let report = SynthesisReport {
        mode: config.mode,
        n: set.n(),
        m: set.m(),
        base_features: base.iter().map(|f| FeatureSummary::of(f, names)).collect(),
        products_admitted: products,
        product_quantize_calls: product_calls,
        overlapping_factors: pool.overlapping_factors.clone(),
        pool: pool.features.iter().map(|f| FeatureSummary::of(f, names)).collect(),
        layers: history.iter().map(LayerSummary::from).collect(),
        stop_cause: decision.cause,
        kept_layer: decision.keep_layer,
        final_errors: collective.errors(),
        collective_size: collective.len(),
        contradiction_bound: contradiction_bound(set, &pool.features),
        doubtful_rows,
        warnings,
    };
    let mut report = report;
    if report.stalled() {
        report.warnings.push(format!(
            "growth stalled with V = {}: add input variables or exclude doubtful rows {:?}",
            report.final_errors, report.doubtful_rows
        ));
    }
    if fit.low_coherence() {
        report.warnings.extend(fit.warning());
    }

    Ok(Synthesis {
        collective,
        report,
        traces: history,
    })
}

/// Members are the best-scoring neurons of the kept layer; in split mode ties
/// on CR are narrowed to the fewest errors so members share one V.
fn collective_members(best: &[Neuron]) -> Vec<Neuron> {
    let min_v = best.iter().map(|n| n.errors).min().unwrap_or(0);
    best.iter().filter(|n| n.errors == min_v).cloned().collect()
}

fn finish_layer(
    r: usize,
    pairs: usize,
    candidates: usize,
    admitted: Vec<Candidate>,
    f_cap: usize,
    bar: Option<usize>,
    mode: Mode,
) -> LayerTrace {
    let improving = admitted
        .iter()
        .filter(|c| bar.is_none_or(|b| c.neuron.score() < b))
        .count();
    // Split mode keeps every layer so the δ-rule can compare scores.
    let accepted = match mode {
        Mode::Statement1 => improving > 0,
        Mode::Split => !admitted.is_empty(),
    };
    let survivors = if accepted { select_survivors(&admitted, f_cap) } else { Vec::new() };
    let best_score = survivors.first().map(|n| n.score());
    let best = admitted
        .iter()
        .filter(|c| accepted && Some(c.neuron.score()) == best_score)
        .sorted_by_key(|c| (c.neuron.errors, c.neuron.leaf_count(), c.order))
        .map(|c| c.neuron.clone())
        .collect();
    let min_v = survivors.iter().map(|n| n.errors).min();
    let min_cr = survivors.iter().filter_map(|n| n.criteria.map(|c| c.cr)).min();
    LayerTrace {
        r,
        pairs,
        candidates,
        admitted: admitted.len(),
        improving,
        f_cap,
        min_v,
        min_cr,
        survivors,
        best,
        stop_cause: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabelMap;
    use crate::quantization::Source;

    fn boolean_set(rows: &[[u8; 2]], labels: &[u8]) -> LearningSet {
        LearningSet::new(
            vec!["a".into(), "b".into()],
            "y",
            rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect(),
            labels.iter().map(|&l| l == 1).collect(),
            LabelMap::new("0", "1"),
        )
        .unwrap()
    }

    /// Pool whose feature i reads bit i of the instance index.
    fn pool_of(m: usize, n: usize) -> FeaturePool {
        let labels: Vec<bool> = (0..n).map(|t| t % 3 == 0).collect();
        FeaturePool::new(
            (0..m)
                .map(|i| {
                    let values: Vec<f64> = (0..n).map(|t| (t >> i & 1) as f64).collect();
                    let mut f = QuantizedFeature::from_cut(Source::single(i), &values, quantize(&values, &labels));
                    f.column = values.iter().map(|&v| v == 1.0).collect();
                    f
                })
                .collect(),
        )
    }

    #[test]
    fn admission_examples() {
        assert!(admit(1, 2, 3));
        assert!(!admit(2, 2, 5));
        assert!(admit(0, 4, 1));
    }

    #[test]
    fn f_cap_defaults() {
        assert_eq!(default_f_cap(0.4, 10), 4);
        assert_eq!(default_f_cap(0.4, 1), 1);
        assert_eq!(default_f_cap(0.4, 0), 1);
        assert_eq!(default_f_cap(0.4, 15), 6);
        assert_eq!(default_f_cap(0.4, 5), 2);
    }

    #[test]
    fn first_layer_pairs() {
        let labels: Vec<bool> = (0..32).map(|i| i % 3 == 0).collect();
        let layer = generate_candidates(&pool_of(5, 32), &[], 1, &labels).unwrap();
        assert_eq!(layer.pairs, 10);
        let layer = generate_candidates(&pool_of(2, 32), &[], 1, &labels).unwrap();
        assert_eq!(layer.pairs, 1);
        assert!(layer.candidates.len() <= 10);
        assert!(matches!(
            generate_candidates(&FeaturePool::new(vec![]), &[], 1, &labels),
            Err(Error::NoFeatures)
        ));
    }

    #[test]
    fn later_layers_pair_survivors_with_pool() {
        let labels: Vec<bool> = (0..32).map(|i| i % 3 == 0).collect();
        let pool = pool_of(4, 32);
        let first = generate_candidates(&pool, &[], 1, &labels).unwrap();
        let survivors: Vec<Neuron> = first.candidates.iter().take(3).map(|c| c.neuron.clone()).collect();
        let second = generate_candidates(&pool, &survivors, 2, &labels).unwrap();
        assert!(second.pairs <= 12);
        assert_eq!(second.pairs, 3 * 2);
        for c in &second.candidates {
            assert_eq!(c.neuron.expr.depth(), 2);
            assert_eq!(c.neuron.leaf_count(), 3);
        }
        let mut columns: Vec<&Vec<bool>> = second.candidates.iter().map(|c| &c.neuron.column).collect();
        columns.extend(survivors.iter().map(|s| &s.column));
        let before = columns.len();
        columns.sort();
        columns.dedup();
        assert_eq!(columns.len(), before);
    }

    #[test]
    fn survivor_order() {
        let make = |errors: usize, leaves: usize, order: usize| {
            let mut expr = Expr::Leaf(0);
            for k in 1..leaves {
                expr = Expr::gate(Connective::And, expr, Expr::Leaf(k));
            }
            Candidate {
                neuron: Neuron {
                    layer: leaves - 1,
                    expr,
                    errors,
                    column: vec![],
                    criteria: None,
                },
                parent_errors: 9,
                leaf_errors: 9,
                order,
            }
        };
        let admitted = vec![make(1, 3, 0), make(1, 2, 1), make(0, 3, 2), make(1, 2, 3)];
        let picked: Vec<usize> = select_survivors(&admitted, 3).iter().map(|n| n.errors * 10 + n.leaf_count()).collect();
        assert_eq!(picked, vec![3, 12, 12]);
        assert_eq!(select_survivors(&admitted[..2], 5).len(), 2);
    }

    #[test]
    fn xor_is_found_in_one_layer() {
        let set = boolean_set(&[[0, 0], [0, 1], [1, 0], [1, 1]], &[0, 1, 1, 0]);
        // a·b quantizes better than either input and would replace both.
        let config = SynthesisConfig {
            max_p: Some(1),
            ..SynthesisConfig::default()
        };
        let out = synthesize(&set, &config).unwrap();
        assert_eq!(out.collective.errors(), 0);
        assert_eq!(out.report.kept_layer, 1);
        assert_eq!(out.report.stop_cause, StopCause::CrZero);
        assert_eq!(out.collective.neurons[0].expr, Expr::gate(Connective::Xor, Expr::Leaf(0), Expr::Leaf(1)));
    }

    #[test]
    fn stop_rules() {
        let trace = |r: usize, improving: usize, min_v: Option<usize>, min_cr: Option<usize>| LayerTrace {
            r,
            pairs: 1,
            candidates: 1,
            admitted: improving,
            improving,
            f_cap: 1,
            min_v,
            min_cr,
            survivors: vec![],
            best: vec![],
            stop_cause: None,
        };
        let s1 = StopRule {
            mode: Mode::Statement1,
            delta: 0,
            max_layers: 10,
        };
        let stop = should_stop(&[trace(0, 2, Some(3), None), trace(1, 1, Some(0), None)], s1).unwrap();
        assert_eq!((stop.cause, stop.keep_layer), (StopCause::CrZero, 1));
        let stop = should_stop(&[trace(0, 2, Some(2), None), trace(1, 0, None, None)], s1).unwrap();
        assert_eq!((stop.cause, stop.keep_layer), (StopCause::NoAdmissions, 0));
        assert!(should_stop(&[trace(0, 2, Some(2), None), trace(1, 3, Some(1), None)], s1).is_none());
        let capped = StopRule { max_layers: 1, ..s1 };
        let stop = should_stop(&[trace(0, 2, Some(2), None), trace(1, 3, Some(1), None)], capped).unwrap();
        assert_eq!(stop.cause, StopCause::LayerCap);

        let split = StopRule {
            mode: Mode::Split,
            delta: 0,
            max_layers: 10,
        };
        let mut history = vec![trace(1, 4, Some(2), Some(5))];
        assert!(should_stop(&history, split).is_none());
        history.push(trace(2, 4, Some(1), Some(3)));
        assert!(should_stop(&history, split).is_none());
        history.push(trace(3, 4, Some(1), Some(3)));
        let stop = should_stop(&history, split).unwrap();
        assert_eq!((stop.cause, stop.keep_layer), (StopCause::DeltaRule, 2));
        let loose = StopRule { delta: 2, ..split };
        assert_eq!(should_stop(&history[..2], loose).unwrap().keep_layer, 1);
    }

    #[test]
    fn split_criteria_identity_cases() {
        let rows: Vec<[u8; 2]> = (0..8).map(|i| [(i & 1) as u8, (i >> 1 & 1) as u8]).collect();
        let labels: Vec<u8> = rows.iter().map(|r| r[0] & r[1]).collect();
        let set = boolean_set(&rows, &labels);
        let pool = FeaturePool::new(base_features(&set));
        let split = SplitPair {
            subset_a: vec![0, 1, 2, 3],
            subset_b: vec![4, 5, 6, 7],
        };
        let and = Expr::gate(Connective::And, Expr::Leaf(0), Expr::Leaf(1));
        let c = split_criteria(&and, &split, &set, &pool).unwrap();
        assert_eq!((c.unbiasedness, c.regularity, c.cr), (0, 0, 0));

        let single = SplitPair {
            subset_a: vec![0, 1, 2, 4],
            subset_b: vec![3, 5, 6, 7],
        };
        assert!(matches!(split_criteria(&and, &single, &set, &pool), Err(Error::DegenerateSplit('A'))));
    }
}
