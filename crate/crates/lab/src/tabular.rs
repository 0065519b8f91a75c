//! Delimiter-separated tabular data to a labeled, normalized instance table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use llp_core::InstanceTable;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

fn default_missing() -> Vec<String> {
    vec![String::new(), "?".into()]
}

fn default_delimiter() -> char {
    ','
}

fn default_true() -> bool {
    true
}

/// How to read a file: which column is the target, which are categorical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSchema {
    pub target: String,
    /// Target values encoded as 1; everything else is 0.
    pub positive: Vec<String>,
    #[serde(default)]
    pub categorical: Vec<String>,
    /// Numeric feature columns; every remaining column when omitted.
    #[serde(default)]
    pub numeric: Option<Vec<String>>,
    #[serde(default)]
    pub ignore: Vec<String>,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    /// Field values treated as missing (after trimming).
    #[serde(default = "default_missing")]
    pub missing: Vec<String>,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Column names for files without a header row.
    #[serde(default)]
    pub columns: Option<Vec<String>>,
}

impl DatasetSchema {
    pub fn new(target: &str, positive: &[&str]) -> Self {
        Self {
            target: target.into(),
            positive: positive.iter().map(|s| s.to_string()).collect(),
            categorical: Vec::new(),
            numeric: None,
            ignore: Vec::new(),
            delimiter: default_delimiter(),
            missing: default_missing(),
            has_header: true,
            columns: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IngestionReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    /// File line numbers of dropped rows.
    pub dropped_lines: Vec<u64>,
    /// Pre-normalization statistics of numeric columns.
    pub numeric: Vec<ColumnStats>,
    /// Sorted categories of each categorical column.
    pub categories: BTreeMap<String, Vec<String>>,
    pub positives: usize,
    pub warnings: Vec<String>,
}

impl IngestionReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "rows_read: {}", self.rows_read).unwrap();
        writeln!(s, "rows_dropped: {}", self.rows_dropped).unwrap();
        writeln!(s, "rows_kept: {}", self.rows_read - self.rows_dropped).unwrap();
        writeln!(s, "positives: {}", self.positives).unwrap();
        for c in &self.numeric {
            writeln!(s, "column.{}: mean={:.6} std={:.6}", c.name, c.mean, c.std).unwrap();
        }
        for (name, cats) in &self.categories {
            writeln!(s, "categories.{name}: {}", cats.join(" | ")).unwrap();
        }
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabularData {
    pub table: InstanceTable,
    /// Names of the output coordinates (`col` or `col=category`).
    pub features: Vec<String>,
    pub report: IngestionReport,
}

enum Role {
    Target,
    Numeric,
    Categorical,
    Skip,
}

/// Reads `path` under `schema`: rows with a missing value are dropped and
/// counted, numeric columns are standardized to mean 0 and variance 1 on
/// the kept rows, categorical columns are one-hot encoded over their sorted
/// values.
pub fn load_tabular(path: &Path, schema: &DatasetSchema) -> Result<TabularData> {
    let file = std::fs::File::open(path).map_err(|e| LabError::io(path, e))?;
    read_tabular(file, schema)
}

pub fn read_tabular<R: std::io::Read>(input: R, schema: &DatasetSchema) -> Result<TabularData> {
    if !schema.delimiter.is_ascii() {
        return Err(LabError::Config(format!(
            "delimiter {:?} is not ASCII",
            schema.delimiter
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = match (&schema.columns, schema.has_header) {
        (Some(cols), _) => cols.clone(),
        (None, true) => reader
            .headers()
            .map_err(|e| LabError::Data(format!("header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect(),
        (None, false) => return Err(LabError::Config("a file without header needs `columns`".into())),
    };

    let position = |name: &str| header.iter().position(|h| h == name);
    let mut roles: Vec<Role> = header.iter().map(|_| Role::Skip).collect();
    let target = position(&schema.target)
        .ok_or_else(|| LabError::Data(format!("target column {:?} not in file", schema.target)))?;
    roles[target] = Role::Target;
    for name in schema
        .categorical
        .iter()
        .chain(schema.ignore.iter())
        .chain(schema.numeric.iter().flatten())
    {
        if position(name).is_none() {
            return Err(LabError::Data(format!("schema column {name:?} not in file")));
        }
    }
    for (i, name) in header.iter().enumerate() {
        if i == target || schema.ignore.contains(name) {
            continue;
        }
        roles[i] = if schema.categorical.contains(name) {
            Role::Categorical
        } else if schema.numeric.as_ref().map_or(true, |n| n.contains(name)) {
            Role::Numeric
        } else {
            Role::Skip
        };
    }

    let mut report = IngestionReport::default();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| LabError::Data(format!("parse error: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        report.rows_read += 1;
        if record.len() != header.len() {
            return Err(LabError::Data(format!(
                "line {line}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let used = |i: &usize| !matches!(roles[*i], Role::Skip);
        if (0..header.len())
            .filter(used)
            .any(|i| schema.missing.iter().any(|m| m == &record[i]))
        {
            report.rows_dropped += 1;
            report.dropped_lines.push(line);
            continue;
        }
        rows.push(record.iter().map(str::to_string).collect());
        lines.push(line);
    }
    if report.rows_read == 0 {
        report.warnings.push("file has no data rows".into());
    }

    // Column blocks in file order: numeric values or category lists.
    let mut features = Vec::new();
    let mut blocks: Vec<(usize, Option<Vec<String>>, f64, f64)> = Vec::new();
    for (i, role) in roles.iter().enumerate() {
        match role {
            Role::Numeric => {
                let mut values = Vec::with_capacity(rows.len());
                for (row, line) in rows.iter().zip(&lines) {
                    let v: f64 = row[i].parse().map_err(|_| {
                        LabError::Data(format!(
                            "line {line}: column {:?} value {:?} is not numeric",
                            header[i], row[i]
                        ))
                    })?;
                    if !v.is_finite() {
                        return Err(LabError::Data(format!(
                            "line {line}: column {:?} is not finite",
                            header[i]
                        )));
                    }
                    values.push(v);
                }
                let n = values.len().max(1) as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                let std = var.sqrt();
                if std == 0.0 && !rows.is_empty() {
                    report
                        .warnings
                        .push(format!("column {:?} is constant; centered only", header[i]));
                }
                report.numeric.push(ColumnStats {
                    name: header[i].clone(),
                    mean,
                    std,
                });
                features.push(header[i].clone());
                blocks.push((i, None, mean, std));
            }
            Role::Categorical => {
                let cats: Vec<String> = rows
                    .iter()
                    .map(|r| r[i].clone())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                features.extend(cats.iter().map(|c| format!("{}={c}", header[i])));
                report.categories.insert(header[i].clone(), cats.clone());
                blocks.push((i, Some(cats), 0.0, 1.0));
            }
            Role::Target | Role::Skip => {}
        }
    }

    let mut table = InstanceTable::with_capacity(features.len(), rows.len());
    let mut coords = Vec::with_capacity(features.len());
    for row in &rows {
        coords.clear();
        for (i, cats, mean, std) in &blocks {
            match cats {
                None => {
                    let v: f64 = row[*i].parse().expect("validated above");
                    coords.push(if *std > 0.0 { (v - mean) / std } else { v - mean });
                }
                Some(cats) => coords.extend(cats.iter().map(|c| if *c == row[*i] { 1.0 } else { 0.0 })),
            }
        }
        let label = schema.positive.iter().any(|p| p == &row[target]);
        report.positives += usize::from(label);
        table.push(&coords, Some(label))?;
    }
    Ok(TabularData {
        table,
        features,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_gives_empty_table() {
        let d = read_tabular("a,y\n".as_bytes(), &DatasetSchema::new("y", &["1"])).unwrap();
        assert!(d.table.is_empty());
        assert_eq!(d.report.warnings.len(), 1);
    }

    #[test]
    fn missing_rows_dropped_and_bad_rows_rejected() {
        let schema = DatasetSchema {
            categorical: vec!["c".into()],
            ..DatasetSchema::new("y", &["yes"])
        };
        let d = read_tabular("a,c,y\n1,u,yes\n?,v,no\n3,v,no\n".as_bytes(), &schema).unwrap();
        assert_eq!((d.report.rows_read, d.report.rows_dropped), (3, 1));
        assert_eq!(d.report.dropped_lines, vec![3]);
        assert_eq!(d.features, vec!["a", "c=u", "c=v"]);
        assert_eq!(d.table.coords(llp_core::InstanceId(0)), &[-1.0, 1.0, 0.0]);
        let e = read_tabular("a,c,y\nx,u,yes\n".as_bytes(), &schema)
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 2"), "{e}");
        assert!(read_tabular("a,y\n1\n".as_bytes(), &schema).is_err());
    }
}
