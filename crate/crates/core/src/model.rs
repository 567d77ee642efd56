//! JSON model persistence.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::collective::{Chi0, Collective};
use crate::dataset::LabelMap;
use crate::error::{Error, Result};
use crate::features::FeaturePool;
use crate::logic::Expr;
use crate::quantization::{Polarity, QuantizedFeature, Source};
use crate::synthesis::{Neuron, StopCause, Synthesis, SynthesisConfig};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub source: Vec<usize>,
    /// Shortest decimal that parses back to the exact threshold.
    pub threshold: String,
    pub polarity: Polarity,
    pub errors: usize,
    #[serde(default)]
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronEntry {
    pub expr: Expr,
    pub layer: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub stop_cause: StopCause,
    pub kept_layer: usize,
    pub final_errors: usize,
    pub collective_size: usize,
    pub contradiction_bound: usize,
    pub layers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub variables: Vec<String>,
    pub label_column: String,
    pub label_map: LabelMap,
    pub pool: Vec<PoolEntry>,
    pub neurons: Vec<NeuronEntry>,
    pub weights: Vec<u64>,
    pub chi0: Chi0,
    pub config: SynthesisConfig,
    pub report: Option<ReportSummary>,
}

/// A trained collective together with what is needed to score labeled data.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub collective: Collective,
    pub label_column: String,
    pub config: SynthesisConfig,
    pub summary: Option<ReportSummary>,
}

impl Model {
    pub fn from_synthesis(synthesis: &Synthesis, label_column: &str, config: &SynthesisConfig) -> Self {
        let r = &synthesis.report;
        Model {
            collective: synthesis.collective.clone(),
            label_column: label_column.to_owned(),
            config: config.clone(),
            summary: Some(ReportSummary {
                stop_cause: r.stop_cause,
                kept_layer: r.kept_layer,
                final_errors: r.final_errors,
                collective_size: r.collective_size,
                contradiction_bound: r.contradiction_bound,
                layers: r.layers.len(),
            }),
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let c = &self.collective;
        ModelFile {
            format_version: FORMAT_VERSION,
            variables: c.variable_names.clone(),
            label_column: self.label_column.clone(),
            label_map: c.label_map.clone(),
            pool: c
                .pool
                .features
                .iter()
                .map(|f| PoolEntry {
                    source: f.source.indices().to_vec(),
                    threshold: format!("{:?}", f.threshold),
                    polarity: f.polarity,
                    errors: f.errors,
                    constant: f.constant,
                })
                .collect(),
            neurons: c
                .neurons
                .iter()
                .map(|n| NeuronEntry {
                    expr: n.expr.clone(),
                    layer: n.layer,
                    errors: n.errors,
                })
                .collect(),
            weights: c.weights.clone(),
            chi0: c.chi0,
            config: self.config.clone(),
            report: self.summary.clone(),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        if file.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: file.format_version,
                expected: FORMAT_VERSION,
            });
        }
        let features = file
            .pool
            .into_iter()
            .map(|e| {
                if e.source.is_empty() {
                    return Err(Error::Model("pool feature without source variables".into()));
                }
                let threshold: f64 = e
                    .threshold
                    .parse()
                    .map_err(|_| Error::Model(format!("bad threshold {:?}", e.threshold)))?;
                if !threshold.is_finite() {
                    return Err(Error::Model(format!("bad threshold {:?}", e.threshold)));
                }
                Ok(QuantizedFeature {
                    source: Source::product(e.source),
                    threshold,
                    polarity: e.polarity,
                    errors: e.errors,
                    column: Vec::new(),
                    constant: e.constant,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let neurons = file
            .neurons
            .into_iter()
            .map(|e| {
                if e.expr.depth() != e.layer {
                    return Err(Error::Model(format!(
                        "neuron at layer {} has depth {}",
                        e.layer,
                        e.expr.depth()
                    )));
                }
                Ok(Neuron {
                    expr: e.expr,
                    layer: e.layer,
                    errors: e.errors,
                    column: Vec::new(),
                    criteria: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let collective = Collective {
            neurons,
            pool: FeaturePool::new(features),
            chi0: file.chi0,
            label_map: file.label_map,
            variable_names: file.variables,
            weights: file.weights,
        };
        collective.validate()?;
        Ok(Model {
            collective,
            label_column: file.label_column,
            config: file.config,
            summary: file.report,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Model("missing format_version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(Error::VersionMismatch {
                found: version.min(u64::from(u32::MAX)) as u32,
                expected: FORMAT_VERSION,
            });
        }
        let file: ModelFile = serde_json::from_value(value).map_err(|e| Error::Model(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn with_chi0(mut self, chi0: Chi0) -> Self {
        self.collective.chi0 = chi0;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LearningSet;
    use crate::synthesis::synthesize;

    fn trained() -> Model {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![(i as f64 * 0.37).sin() * 3.0, (i as f64 * 1.3).cos() / 7.0, i as f64 * 1e-9])
            .collect();
        let labels = (0..12).map(|i| (i * 7) % 5 < 2).collect();
        let set = LearningSet::new(
            vec!["a".into(), "b".into(), "c".into()],
            "y",
            rows,
            labels,
            LabelMap::new("no", "yes"),
        )
        .unwrap();
        let config = SynthesisConfig::default();
        Model::from_synthesis(&synthesize(&set, &config).unwrap(), "y", &config)
    }

    #[test]
    fn json_round_trip_is_exact() {
        let model = trained();
        let again = Model::from_json(&model.to_json()).unwrap();
        for (a, b) in model.collective.pool.features.iter().zip(&again.collective.pool.features) {
            assert_eq!(a.threshold.to_bits(), b.threshold.to_bits());
            assert_eq!(a.source, b.source);
        }
        assert_eq!(again.to_json(), model.to_json());
    }

    #[test]
    fn version_mismatch() {
        let json = trained().to_json().replace("\"format_version\": 1", "\"format_version\": 7");
        assert!(matches!(
            Model::from_json(&json),
            Err(Error::VersionMismatch { found: 7, expected: 1 })
        ));
    }

    #[test]
    fn rejects_inconsistent_layer() {
        let mut file = trained().to_file();
        file.neurons[0].layer += 1;
        assert!(Model::from_file(file).is_err());
    }
}
