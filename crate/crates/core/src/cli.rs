//! Command implementations behind the `logic-gmdh` binary.

use std::path::{Path, PathBuf};

use crate::collective::{Chi0, Decision};
use crate::dataset::{load_dataset, select_feature_columns, LearningSet, Table};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::rules::render_rules;
use crate::synthesis::{synthesize, Mode, SynthesisConfig, SynthesisReport};

/// Exit code for a synthesis that stalled with errors left.
pub const EXIT_STALLED: i32 = 3;

#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub mode: Option<Mode>,
    pub delta: Option<u32>,
    pub f_ratio: Option<f64>,
    pub max_layers: Option<usize>,
    pub max_p: Option<usize>,
    pub chi0: Option<f64>,
    pub seed: Option<u64>,
}

/// Reads an optional JSON config file and applies flag overrides on top.
pub fn resolve_config(file: Option<&Path>, flags: &ConfigOverrides) -> Result<SynthesisConfig> {
    let mut config = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
        }
        None => SynthesisConfig::default(),
    };
    if let Some(v) = flags.mode {
        config.mode = v;
    }
    if let Some(v) = flags.delta {
        config.delta = v;
    }
    if let Some(v) = flags.f_ratio {
        config.f_ratio = v;
    }
    if let Some(v) = flags.max_layers {
        config.max_layers = v;
    }
    if let Some(v) = flags.max_p {
        config.max_p = Some(v);
    }
    if let Some(v) = flags.chi0 {
        config.chi0 = v;
    }
    if let Some(v) = flags.seed {
        config.seed = v;
    }
    config.validate()?;
    Ok(config)
}

pub struct TrainOutcome {
    pub model: Model,
    pub report: SynthesisReport,
}

impl TrainOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.stalled() {
            EXIT_STALLED
        } else {
            0
        }
    }

    pub fn report_json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report serializes")
    }
}

pub fn train(data: &Path, label: &str, config: &SynthesisConfig, out: &Path) -> Result<TrainOutcome> {
    let set = load_dataset(data, label)?;
    let synthesis = synthesize(&set, config)?;
    let model = Model::from_synthesis(&synthesis, label, config);
    model.save(out)?;
    Ok(TrainOutcome {
        model,
        report: synthesis.report,
    })
}

fn load_model(path: &Path, chi0: Option<f64>) -> Result<Model> {
    let model = Model::load(path)?;
    Ok(match chi0 {
        Some(c) => model.with_chi0(Chi0::from_f64(c)?),
        None => model,
    })
}

pub struct Predictions {
    /// CSV text: input columns, then `decision`, `chi` and `chi_decimal`.
    pub csv: String,
    pub rows: usize,
    pub refused: usize,
    /// Disagreements with the label column, when the input carries one.
    pub mismatches: Option<usize>,
}

impl Predictions {
    pub fn summary(&self) -> String {
        let mut line = format!("{} rows, {} refused", self.rows, self.refused);
        if let Some(m) = self.mismatches {
            line.push_str(&format!(", {m} mismatches"));
        }
        line
    }
}

pub fn predict(model_path: &Path, data: &Path, chi0: Option<f64>) -> Result<Predictions> {
    let model = load_model(model_path, chi0)?;
    let c = &model.collective;
    let table = Table::read(data)?;
    let columns = select_feature_columns(&table, &c.variable_names, Some(&model.label_column))?;
    let rows = table.numeric_rows(&columns)?;
    let label_idx = table.column_index(&model.label_column);

    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = table.header.clone();
    header.extend(["decision", "chi", "chi_decimal"].map(String::from));
    writer.write_record(&header)?;
    let (mut refused, mut mismatches) = (0, 0);
    for (record, row) in table.records.iter().zip(&rows) {
        let verdict = c.classify(row)?;
        let decision = match verdict.decision {
            Decision::Class(class) => c.label_map.literal(class).to_owned(),
            Decision::Refused => {
                refused += 1;
                "REFUSED".to_owned()
            }
        };
        if let Some(li) = label_idx {
            if record[li] != decision {
                mismatches += 1;
            }
        }
        let mut out = record.clone();
        out.push(decision);
        out.push(verdict.chi_text());
        out.push(format!("{}", verdict.chi_f64()));
        writer.write_record(&out)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(Predictions {
        csv: String::from_utf8(bytes).expect("CSV output is UTF-8"),
        rows: rows.len(),
        refused,
        mismatches: label_idx.map(|_| mismatches),
    })
}

pub fn rules(model_path: &Path) -> Result<String> {
    Ok(render_rules(&Model::load(model_path)?.collective))
}

pub struct EvalOutcome {
    pub json: serde_json::Value,
    pub warning: Option<String>,
}

pub fn eval(model_path: &Path, data: &Path, chi0: Option<f64>) -> Result<EvalOutcome> {
    let model = load_model(model_path, chi0)?;
    let c = &model.collective;
    let table = Table::read(data)?;
    let set = LearningSet::from_table_for_model(&table, &model.label_column, &c.variable_names, &c.label_map)?;
    let metrics = c.evaluate(&set)?;
    Ok(EvalOutcome {
        json: metrics.to_json(&c.label_map),
        warning: metrics.warning(),
    })
}

/// Default output path for a model trained from `data`.
pub fn default_model_path(data: &Path) -> PathBuf {
    data.with_extension("model.json")
}
