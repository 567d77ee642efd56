//! Labeled learning data: CSV ingestion, validation, stratified A/B splits and
//! the contradiction lower bound.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantization::QuantizedFeature;

/// Original label literals. Index 0 is the literal seen first in the file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap(pub [String; 2]);

impl LabelMap {
    pub fn new(negative: impl Into<String>, positive: impl Into<String>) -> Self {
        LabelMap([negative.into(), positive.into()])
    }

    pub fn literal(&self, class: bool) -> &str {
        &self.0[class as usize]
    }

    pub fn class_of(&self, literal: &str) -> Option<bool> {
        if literal == self.0[0] {
            Some(false)
        } else if literal == self.0[1] {
            Some(true)
        } else {
            None
        }
    }
}

/// A parsed CSV file: header plus raw string records, no typing applied yet.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let mut file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut text = String::new();
        file.read_to_string(&mut text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        let mut records = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() == 1 && record.get(0) == Some("") {
                continue;
            }
            if record.len() != header.len() {
                return Err(Error::Ragged {
                    row: i + 1,
                    found: record.len(),
                    expected: header.len(),
                });
            }
            records.push(record.iter().map(str::to_owned).collect());
        }
        Ok(Table { header, records })
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses the given columns as finite reals, one row per record.
    pub fn numeric_rows(&self, columns: &[usize]) -> Result<Vec<Vec<f64>>> {
        self.records
            .iter()
            .enumerate()
            .map(|(row, record)| {
                columns
                    .iter()
                    .map(|&c| {
                        let cell = &record[c];
                        let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                            row: row + 1,
                            column: self.header[c].clone(),
                            value: cell.clone(),
                        })?;
                        if !value.is_finite() {
                            return Err(Error::NonFinite {
                                row: row + 1,
                                column: self.header[c].clone(),
                            });
                        }
                        Ok(value)
                    })
                    .collect()
            })
            .collect()
    }
}

/// n instances of m quantitative variables with a binary teacher label.
///
/// Immutable once built. Sets produced by [`LearningSet::new`] and
/// [`load_dataset`] always hold both classes and n ≥ 2; sets built with
/// [`LearningSet::for_evaluation`] only guarantee n ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningSet {
    variable_names: Vec<String>,
    label_column: String,
    rows: Vec<Vec<f64>>,
    labels: Vec<bool>,
    label_map: LabelMap,
}

impl LearningSet {
    pub fn new(
        variable_names: Vec<String>,
        label_column: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<bool>,
        label_map: LabelMap,
    ) -> Result<Self> {
        let set = Self::build(variable_names, label_column.into(), rows, labels, label_map, 2)?;
        if set.labels.iter().all(|&l| l == set.labels[0]) {
            return Err(Error::SingleClass(
                set.label_map.literal(set.labels[0]).to_owned(),
            ));
        }
        Ok(set)
    }

    /// Builds a set for scoring a trained model; a single class is allowed.
    pub fn for_evaluation(
        variable_names: Vec<String>,
        label_column: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<bool>,
        label_map: LabelMap,
    ) -> Result<Self> {
        Self::build(variable_names, label_column.into(), rows, labels, label_map, 1)
    }

    fn build(
        variable_names: Vec<String>,
        label_column: String,
        rows: Vec<Vec<f64>>,
        labels: Vec<bool>,
        label_map: LabelMap,
        min_rows: usize,
    ) -> Result<Self> {
        let m = variable_names.len();
        if m == 0 {
            return Err(Error::NoVariables);
        }
        if rows.len() < min_rows {
            return Err(Error::TooFewInstances {
                required: min_rows,
                found: rows.len(),
            });
        }
        if labels.len() != rows.len() {
            return Err(Error::Ragged {
                row: labels.len().min(rows.len()) + 1,
                found: labels.len(),
                expected: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Ragged {
                    row: i + 1,
                    found: row.len(),
                    expected: m,
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    row: i + 1,
                    column: variable_names[j].clone(),
                });
            }
        }
        Ok(LearningSet {
            variable_names,
            label_column,
            rows,
            labels,
            label_map,
        })
    }

    /// Learning set from a parsed table; labels are mapped by first occurrence.
    pub fn from_table(table: &Table, label_column: &str) -> Result<Self> {
        let label_idx = table
            .column_index(label_column)
            .ok_or_else(|| Error::MissingLabelColumn(label_column.to_owned()))?;
        let feature_cols: Vec<usize> = (0..table.header.len()).filter(|&c| c != label_idx).collect();
        if feature_cols.is_empty() {
            return Err(Error::NoVariables);
        }
        if table.records.len() < 2 {
            return Err(Error::TooFewInstances {
                required: 2,
                found: table.records.len(),
            });
        }
        let mut literals: Vec<String> = Vec::new();
        for record in &table.records {
            let lit = &record[label_idx];
            if !literals.contains(lit) {
                literals.push(lit.clone());
            }
        }
        if literals.len() > 2 {
            return Err(Error::TooManyClasses(literals));
        }
        if literals.len() < 2 {
            return Err(Error::SingleClass(literals.pop().unwrap_or_default()));
        }
        let label_map = LabelMap::new(literals[0].clone(), literals[1].clone());
        let labels = table
            .records
            .iter()
            .map(|r| r[label_idx] == literals[1])
            .collect();
        let rows = table.numeric_rows(&feature_cols)?;
        let names = feature_cols.iter().map(|&c| table.header[c].clone()).collect();
        Self::new(names, label_column, rows, labels, label_map)
    }

    /// Evaluation set whose columns and labels follow an existing model.
    pub fn from_table_for_model(
        table: &Table,
        label_column: &str,
        variable_names: &[String],
        label_map: &LabelMap,
    ) -> Result<Self> {
        let label_idx = table
            .column_index(label_column)
            .ok_or_else(|| Error::MissingLabelColumn(label_column.to_owned()))?;
        let columns = select_feature_columns(table, variable_names, Some(label_column))?;
        let labels = table
            .records
            .iter()
            .map(|r| {
                label_map.class_of(&r[label_idx]).ok_or_else(|| {
                    Error::UnknownLabel(r[label_idx].clone(), label_map.0[0].clone(), label_map.0[1].clone())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = table.numeric_rows(&columns)?;
        Self::for_evaluation(
            variable_names.to_vec(),
            label_column,
            rows,
            labels,
            label_map.clone(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.variable_names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Teacher vector Y°.
    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn label_map(&self) -> &LabelMap {
        &self.label_map
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l).count();
        [self.labels.len() - ones, ones]
    }

    /// Restriction to the given instance indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LearningSet {
        LearningSet {
            variable_names: self.variable_names.clone(),
            label_column: self.label_column.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            label_map: self.label_map.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let mut header = self.variable_names.clone();
        header.push(self.label_column.clone());
        writer.write_record(&header)?;
        for (row, &label) in self.rows.iter().zip(&self.labels) {
            let mut record: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            record.push(self.label_map.literal(label).to_owned());
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

/// Locates the model's variables in a table: by header name when every name is
/// present, otherwise positionally when the width (minus the label column) fits.
pub fn select_feature_columns(
    table: &Table,
    variable_names: &[String],
    label_column: Option<&str>,
) -> Result<Vec<usize>> {
    let by_name: Option<Vec<usize>> = variable_names.iter().map(|n| table.column_index(n)).collect();
    if let Some(cols) = by_name {
        return Ok(cols);
    }
    let candidates: Vec<usize> = (0..table.header.len())
        .filter(|&c| Some(table.header[c].as_str()) != label_column)
        .collect();
    if candidates.len() != variable_names.len() {
        return Err(Error::WidthMismatch {
            expected: variable_names.len(),
            found: candidates.len(),
        });
    }
    Ok(candidates)
}

pub fn load_dataset(path: &Path, label_column: &str) -> Result<LearningSet> {
    let table = Table::read(path)?;
    LearningSet::from_table(&table, label_column)
}

/// Two disjoint subsets covering every instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    pub subset_a: Vec<usize>,
    pub subset_b: Vec<usize>,
}

/// Stratified A/B split: each class is shuffled with `seed`, the classes are
/// concatenated and instances are dealt alternately to A and B.
///
/// A receives the extra instance when n is odd.
pub fn split_even(set: &LearningSet, seed: u64) -> Result<SplitPair> {
    let n = set.n();
    if n < 4 {
        return Err(Error::SplitTooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dealt = Vec::with_capacity(n);
    for class in [false, true] {
        let mut members: Vec<usize> = (0..n).filter(|&i| set.labels()[i] == class).collect();
        members.shuffle(&mut rng);
        dealt.extend(members);
    }
    let (mut subset_a, mut subset_b) = (Vec::new(), Vec::new());
    for (pos, idx) in dealt.into_iter().enumerate() {
        if pos % 2 == 0 {
            subset_a.push(idx);
        } else {
            subset_b.push(idx);
        }
    }
    subset_a.sort_unstable();
    subset_b.sort_unstable();
    Ok(SplitPair { subset_a, subset_b })
}

/// Fewest errors any Boolean function of `features` can make on `set`: the sum
/// over groups of identical quantized vectors of the minority label count.
pub fn contradiction_bound(set: &LearningSet, features: &[QuantizedFeature]) -> usize {
    contradiction_groups(set.labels(), features)
        .values()
        .map(|[zeros, ones]| (*zeros).min(*ones))
        .sum()
}

pub(crate) fn contradiction_groups(
    labels: &[bool],
    features: &[QuantizedFeature],
) -> BTreeMap<Vec<bool>, [usize; 2]> {
    let mut groups: BTreeMap<Vec<bool>, [usize; 2]> = BTreeMap::new();
    for (t, &label) in labels.iter().enumerate() {
        let key: Vec<bool> = features.iter().map(|f| f.column[t]).collect();
        groups.entry(key).or_default()[label as usize] += 1;
    }
    groups
}
