//! Typed mixed datasets, missingness masks, schema-driven CSV ingestion, and
//! the latent-column expansion used by the rank-probit likelihood.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell type of one observed variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Continuous,
    Count,
    Ordinal,
    Categorical,
}

impl VarKind {
    pub fn is_numeric(self) -> bool {
        matches!(self, VarKind::Continuous | VarKind::Count | VarKind::Ordinal)
    }
}

/// Declared schema for one variable.
///
/// `levels` is required for categorical and ordinal variables; its order
/// defines the level indices (and the total order for ordinals). Count
/// variables default to a lower support bound of zero unless overridden.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: VarKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<(f64, f64)>,
    /// Opt an ordinal variable into the diagonal-orthant probit expansion
    /// instead of the default rank treatment.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub as_orthant: bool,
}

impl ColumnSpec {
    pub fn continuous(name: &str) -> Self {
        ColumnSpec {
            name: name.to_string(),
            kind: VarKind::Continuous,
            levels: Vec::new(),
            support: None,
            as_orthant: false,
        }
    }

    pub fn count(name: &str) -> Self {
        ColumnSpec {
            name: name.to_string(),
            kind: VarKind::Count,
            levels: Vec::new(),
            support: None,
            as_orthant: false,
        }
    }

    pub fn categorical(name: &str, levels: &[&str]) -> Self {
        ColumnSpec {
            name: name.to_string(),
            kind: VarKind::Categorical,
            levels: levels.iter().map(|s| s.to_string()).collect(),
            support: None,
            as_orthant: false,
        }
    }

    pub fn ordinal(name: &str, levels: &[&str]) -> Self {
        ColumnSpec {
            name: name.to_string(),
            kind: VarKind::Ordinal,
            levels: levels.iter().map(|s| s.to_string()).collect(),
            support: None,
            as_orthant: false,
        }
    }

    pub fn with_support(mut self, lo: f64, hi: f64) -> Self {
        self.support = Some((lo, hi));
        self
    }

    pub fn with_orthant(mut self) -> Self {
        self.as_orthant = true;
        self
    }

    /// Whether this variable enters the latent model through rank constraints
    /// (numeric path) rather than orthant constraints.
    pub fn is_ranked(&self) -> bool {
        match self.kind {
            VarKind::Continuous | VarKind::Count => true,
            VarKind::Ordinal => !self.as_orthant,
            VarKind::Categorical => false,
        }
    }

    /// Effective numeric support bounds, applying the count default lo = 0.
    pub fn support_bounds(&self) -> (Option<f64>, Option<f64>) {
        let (lo, hi) = match self.support {
            Some((lo, hi)) => (Some(lo), Some(hi)),
            None => (None, None),
        };
        if self.kind == VarKind::Count && lo.is_none() {
            (Some(0.0), hi)
        } else {
            (lo, hi)
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            VarKind::Categorical | VarKind::Ordinal => {
                if self.levels.len() < 2 {
                    return Err(Error::Schema {
                        column: self.name.clone(),
                        row: None,
                        message: format!(
                            "{:?} variable needs at least 2 levels, got {}",
                            self.kind,
                            self.levels.len()
                        ),
                    });
                }
                let mut seen = std::collections::HashSet::new();
                for l in &self.levels {
                    if !seen.insert(l) {
                        return Err(Error::Schema {
                            column: self.name.clone(),
                            row: None,
                            message: format!("duplicate level '{l}'"),
                        });
                    }
                }
            }
            VarKind::Continuous | VarKind::Count => {
                if !self.levels.is_empty() {
                    return Err(Error::Schema {
                        column: self.name.clone(),
                        row: None,
                        message: "numeric variable must not declare levels".into(),
                    });
                }
            }
        }
        if let Some((lo, hi)) = self.support {
            if !(lo < hi) {
                return Err(Error::Schema {
                    column: self.name.clone(),
                    row: None,
                    message: format!("support bounds must satisfy lo < hi, got [{lo}, {hi}]"),
                });
            }
        }
        if self.as_orthant && self.kind != VarKind::Ordinal {
            return Err(Error::Schema {
                column: self.name.clone(),
                row: None,
                message: "as_orthant applies to ordinal variables only".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SchemaFile {
    columns: Vec<ColumnSpec>,
}

/// Parse and validate a JSON schema sidecar.
pub fn load_schema(path: &Path) -> Result<Vec<ColumnSpec>> {
    let text = std::fs::read_to_string(path)?;
    let file: SchemaFile = serde_json::from_str(&text)?;
    validate_schema(&file.columns)?;
    Ok(file.columns)
}

pub fn write_schema(schema: &[ColumnSpec], path: &Path) -> Result<()> {
    let file = SchemaFile {
        columns: schema.to_vec(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

fn validate_schema(schema: &[ColumnSpec]) -> Result<()> {
    if schema.is_empty() {
        return Err(Error::Format("schema declares no columns".into()));
    }
    let mut names = std::collections::HashSet::new();
    for spec in schema {
        spec.validate()?;
        if !names.insert(spec.name.clone()) {
            return Err(Error::Format(format!("duplicate column name '{}'", spec.name)));
        }
    }
    Ok(())
}

/// An n x p table of typed cells with a missingness mask.
///
/// Cells are stored column-major as `f64`: numeric values directly, level
/// indices for categorical/ordinal variables. A cell holds a value iff the
/// mask is false there.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDataset {
    schema: Vec<ColumnSpec>,
    n_rows: usize,
    /// values[j][i], NaN where masked
    values: Vec<Vec<f64>>,
    /// mask[j][i], true = missing
    mask: Vec<Vec<bool>>,
}

impl MixedDataset {
    /// Build a dataset from column-major cells. `None` marks a missing cell.
    pub fn from_columns(schema: Vec<ColumnSpec>, columns: Vec<Vec<Option<f64>>>) -> Result<Self> {
        validate_schema(&schema)?;
        if columns.len() != schema.len() {
            return Err(Error::Format(format!(
                "{} schema columns but {} data columns",
                schema.len(),
                columns.len()
            )));
        }
        let n_rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != n_rows) {
            return Err(Error::Format("ragged data columns".into()));
        }
        let mut values = vec![vec![f64::NAN; n_rows]; schema.len()];
        let mut mask = vec![vec![true; n_rows]; schema.len()];
        for (j, col) in columns.iter().enumerate() {
            for (i, cell) in col.iter().enumerate() {
                if let Some(v) = *cell {
                    check_cell(&schema[j], i, v)?;
                    values[j][i] = v;
                    mask[j][i] = false;
                }
            }
        }
        Ok(MixedDataset {
            schema,
            n_rows,
            values,
            mask,
        })
    }

    pub fn schema(&self) -> &[ColumnSpec] {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.schema.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|s| s.name == name)
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.mask[col][row]
    }

    pub fn value(&self, row: usize, col: usize) -> Option<f64> {
        if self.mask[col][row] {
            None
        } else {
            Some(self.values[col][row])
        }
    }

    /// Column as `Option<f64>` cells, missing = None.
    pub fn column(&self, col: usize) -> Vec<Option<f64>> {
        (0..self.n_rows).map(|i| self.value(i, col)).collect()
    }

    /// Observed values of a column, in row order.
    pub fn observed(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows).filter_map(|i| self.value(i, col)).collect()
    }

    pub fn missing_fraction(&self, col: usize) -> f64 {
        if self.n_rows == 0 {
            return 0.0;
        }
        let miss = self.mask[col].iter().filter(|&&m| m).count();
        miss as f64 / self.n_rows as f64
    }

    /// Rows with no missing cell.
    pub fn complete_rows(&self) -> Vec<usize> {
        (0..self.n_rows)
            .filter(|&i| (0..self.n_cols()).all(|j| !self.mask[j][i]))
            .collect()
    }

    /// Overwrite a missing cell with an imputed value; observed cells are
    /// immutable.
    pub fn fill(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if !self.mask[col][row] {
            return Err(Error::Domain(format!(
                "cell ({row}, {col}) is observed; refusing to overwrite"
            )));
        }
        check_cell(&self.schema[col], row, value)?;
        self.values[col][row] = value;
        self.mask[col][row] = false;
        Ok(())
    }

    pub fn any_missing(&self) -> bool {
        self.mask.iter().any(|col| col.iter().any(|&m| m))
    }
}

fn check_cell(spec: &ColumnSpec, row: usize, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Schema {
            column: spec.name.clone(),
            row: Some(row),
            message: format!("non-finite cell value {v}"),
        });
    }
    match spec.kind {
        VarKind::Categorical | VarKind::Ordinal => {
            let idx = v as usize;
            if v != idx as f64 || idx >= spec.levels.len() {
                return Err(Error::Schema {
                    column: spec.name.clone(),
                    row: Some(row),
                    message: format!("level index {v} invalid for {} levels", spec.levels.len()),
                });
            }
        }
        VarKind::Count => {
            if v.fract() != 0.0 {
                return Err(Error::Schema {
                    column: spec.name.clone(),
                    row: Some(row),
                    message: format!("count cell {v} is not an integer"),
                });
            }
            check_support(spec, row, v)?;
        }
        VarKind::Continuous => check_support(spec, row, v)?,
    }
    Ok(())
}

fn check_support(spec: &ColumnSpec, row: usize, v: f64) -> Result<()> {
    let (lo, hi) = spec.support_bounds();
    if lo.is_some_and(|lo| v < lo) || hi.is_some_and(|hi| v > hi) {
        return Err(Error::Schema {
            column: spec.name.clone(),
            row: Some(row),
            message: format!("value {v} outside declared support"),
        });
    }
    Ok(())
}

/// Load a CSV file against its JSON schema sidecar.
///
/// A cell is missing exactly when the token is empty or the literal "NA";
/// any other unparseable token is an error. Numeric parsing is
/// locale-independent (period decimal separator).
pub fn load_dataset(csv_path: &Path, schema_path: &Path) -> Result<MixedDataset> {
    let schema = load_schema(schema_path)?;
    load_dataset_with_schema(csv_path, schema)
}

pub fn load_dataset_with_schema(csv_path: &Path, schema: Vec<ColumnSpec>) -> Result<MixedDataset> {
    validate_schema(&schema)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(csv_path)?;

    let headers = reader.headers()?.clone();
    if headers.len() != schema.len() {
        return Err(Error::Format(format!(
            "header has {} columns, schema declares {}",
            headers.len(),
            schema.len()
        )));
    }
    for (h, spec) in headers.iter().zip(&schema) {
        if h != spec.name {
            return Err(Error::Format(format!(
                "header column '{h}' does not match schema column '{}'",
                spec.name
            )));
        }
    }

    let level_maps: Vec<HashMap<&str, usize>> = schema
        .iter()
        .map(|s| {
            s.levels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), i))
                .collect()
        })
        .collect();

    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); schema.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != schema.len() {
            return Err(Error::Format(format!(
                "row {} has {} fields, expected {}",
                row_idx,
                record.len(),
                schema.len()
            )));
        }
        for (j, token) in record.iter().enumerate() {
            let cell = parse_cell(&schema[j], &level_maps[j], token, row_idx)?;
            columns[j].push(cell);
        }
    }

    MixedDataset::from_columns(schema, columns)
}

fn parse_cell(
    spec: &ColumnSpec,
    levels: &HashMap<&str, usize>,
    token: &str,
    row: usize,
) -> Result<Option<f64>> {
    if token.is_empty() || token == "NA" {
        return Ok(None);
    }
    match spec.kind {
        VarKind::Categorical | VarKind::Ordinal => match levels.get(token) {
            Some(&idx) => Ok(Some(idx as f64)),
            None => Err(Error::Schema {
                column: spec.name.clone(),
                row: Some(row),
                message: format!("unknown level '{token}'"),
            }),
        },
        VarKind::Continuous | VarKind::Count => {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                column: spec.name.clone(),
                row,
                message: format!("'{token}' is not a number"),
            })?;
            Ok(Some(v))
        }
    }
}

/// Write a dataset back to CSV. Missing cells become empty fields; level
/// indices are written as their level strings. Round-trips through
/// [`load_dataset`] bit-exactly.
pub fn write_dataset(data: &MixedDataset, csv_path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(csv_path)?;
    writer.write_record(data.schema().iter().map(|s| s.name.as_str()))?;
    let mut record: Vec<String> = Vec::with_capacity(data.n_cols());
    for i in 0..data.n_rows() {
        record.clear();
        for (j, spec) in data.schema().iter().enumerate() {
            let field = match data.value(i, j) {
                None => String::new(),
                Some(v) => match spec.kind {
                    VarKind::Categorical | VarKind::Ordinal => spec.levels[v as usize].clone(),
                    VarKind::Continuous | VarKind::Count => format!("{v}"),
                },
            };
            record.push(field);
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// One latent column of the rank-probit expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatentColumn {
    /// Index of the source variable in the dataset schema.
    pub source: usize,
    /// For a k>=3 categorical source, the level this column indicates.
    pub level: Option<usize>,
    /// Whether the column carries orthant (sign) constraints rather than
    /// rank constraints.
    pub orthant: bool,
}

/// Mapping from p observed variables to p* latent columns.
///
/// Categorical variables with k >= 3 levels expand to k indicator columns;
/// binary variables and numeric variables contribute a single column. The
/// indicator matrix gamma records, for orthant columns, whether each
/// observed cell pins the latent sign (None where the source cell is
/// missing).
#[derive(Debug, Clone)]
pub struct AugmentedView {
    columns: Vec<LatentColumn>,
    /// gamma[latent_col][row]; empty for non-orthant columns
    gamma: Vec<Vec<Option<bool>>>,
    /// latent column indices per source variable
    var_columns: Vec<Vec<usize>>,
}

impl AugmentedView {
    pub fn p_star(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[LatentColumn] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &LatentColumn {
        &self.columns[j]
    }

    /// Indicator for an orthant column at a row; None when the source cell
    /// is missing. Panics if the column is not an orthant column.
    pub fn gamma(&self, latent_col: usize, row: usize) -> Option<bool> {
        self.gamma[latent_col][row]
    }

    /// Latent columns belonging to a source variable, in level order.
    pub fn columns_of(&self, var: usize) -> &[usize] {
        &self.var_columns[var]
    }
}

/// Expand a dataset into its latent-column view.
///
/// Deterministic and independent of row order: the columns follow schema
/// order, and categorical levels follow their declared order.
pub fn expand_rpl(data: &MixedDataset) -> AugmentedView {
    let n = data.n_rows();
    let mut columns = Vec::new();
    let mut gamma = Vec::new();
    let mut var_columns = Vec::new();

    for (v, spec) in data.schema().iter().enumerate() {
        let mut cols_here = Vec::new();
        if spec.is_ranked() {
            cols_here.push(columns.len());
            columns.push(LatentColumn {
                source: v,
                level: None,
                orthant: false,
            });
            gamma.push(Vec::new());
        } else if spec.levels.len() == 2 {
            // Binary: a single sign-coded column; the second listed level
            // is the positive orthant.
            cols_here.push(columns.len());
            columns.push(LatentColumn {
                source: v,
                level: None,
                orthant: true,
            });
            let g = (0..n)
                .map(|i| data.value(i, v).map(|val| val as usize == 1))
                .collect();
            gamma.push(g);
        } else {
            for m in 0..spec.levels.len() {
                cols_here.push(columns.len());
                columns.push(LatentColumn {
                    source: v,
                    level: Some(m),
                    orthant: true,
                });
                let g = (0..n)
                    .map(|i| data.value(i, v).map(|val| val as usize == m))
                    .collect();
                gamma.push(g);
            }
        }
        var_columns.push(cols_here);
    }

    AugmentedView {
        columns,
        gamma,
        var_columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn bmi_schema_json() -> &'static str {
        r#"{"columns":[
            {"name":"Age","kind":"count"},
            {"name":"BMI","kind":"continuous"},
            {"name":"FI","kind":"categorical","levels":["Low","Middle","High"]}
        ]}"#
    }

    #[test]
    fn empty_cell_sets_mask() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\n30,22.5,Low\n41,NA,High\n29,,Middle\n");
        let data = load_dataset(&csv, &schema).unwrap();
        assert_eq!(data.n_rows(), 3);
        let bmi = data.column_index("BMI").unwrap();
        assert!(!data.is_missing(0, bmi));
        assert!(data.is_missing(1, bmi));
        assert!(data.is_missing(2, bmi));
        assert_eq!(data.value(0, bmi), Some(22.5));
    }

    #[test]
    fn level_string_maps_to_index() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\n30,22.5,High\n");
        let data = load_dataset(&csv, &schema).unwrap();
        assert_eq!(data.value(0, 2), Some(2.0));
    }

    #[test]
    fn unknown_level_names_row_and_column() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\n30,22.5,Low\n31,23.0,Huge\n");
        let err = load_dataset(&csv, &schema).unwrap_err();
        match err {
            Error::Schema { column, row, .. } => {
                assert_eq!(column, "FI");
                assert_eq!(row, Some(1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_numeric_token_is_parse_error() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\nthirty,22.5,Low\n");
        assert!(matches!(
            load_dataset(&csv, &schema).unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn ragged_row_is_format_error() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\n30,22.5\n");
        assert!(matches!(
            load_dataset(&csv, &schema).unwrap_err(),
            Error::Format(_)
        ));
    }

    #[test]
    fn nhanes_style_schema_and_missing_fraction() {
        // 15 variables of the motivating survey's shape; the marijuana-use
        // column is ~43% missing in the real extract.
        let dir = tempdir().unwrap();
        let yn = |name: &str| {
            format!(
                r#"{{"name":"{name}","kind":"categorical","levels":["No","Yes"]}}"#
            )
        };
        let schema_text = format!(
            r#"{{"columns":[
                {{"name":"DMHNG","kind":"count","support":[0,30]}},
                {{"name":"Gender","kind":"categorical","levels":["Male","Female"]}},
                {{"name":"Age","kind":"count","support":[18,80]}},
                {{"name":"Race","kind":"categorical","levels":["White","Black","Hispanic","Other"]}},
                {{"name":"Education","kind":"ordinal","levels":["<HS","HS",">HS"]}},
                {{"name":"FamIncome","kind":"ordinal","levels":["Low","Middle","High"]}},
                {},{},{},{},{},{},{},{},
                {{"name":"BMI","kind":"continuous","support":[13.4,81.2]}}
            ]}}"#,
            yn("Uninsured"),
            yn("HeavyDrinker"),
            yn("UseNicotine"),
            yn("UsedMarijuana"),
            yn("UsedHardDrug"),
            yn("HasHighBP"),
            yn("HasHighChol"),
            yn("HasDiabetes"),
        );
        let schema = write_tmp(&dir, "s.json", &schema_text);
        let mut csv_text =
            String::from("DMHNG,Gender,Age,Race,Education,FamIncome,Uninsured,HeavyDrinker,UseNicotine,UsedMarijuana,UsedHardDrug,HasHighBP,HasHighChol,HasDiabetes,BMI\n");
        // 100 rows, 43 with UsedMarijuana missing
        for i in 0..100 {
            let mj = if i % 100 < 43 { "NA" } else { "Yes" };
            csv_text.push_str(&format!(
                "5,Male,{},White,HS,Low,No,No,No,{mj},No,No,No,No,27.1\n",
                20 + (i % 50)
            ));
        }
        let csv = write_tmp(&dir, "d.csv", &csv_text);
        let data = load_dataset(&csv, &schema).unwrap();
        assert_eq!(data.n_cols(), 15);
        let mj = data.column_index("UsedMarijuana").unwrap();
        assert!((data.missing_fraction(mj) - 0.43).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_preserves_values_and_mask() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(
            &dir,
            "d.csv",
            "Age,BMI,FI\n30,22.512345678912345,Low\n41,NA,High\n29,,Middle\n55,31.25,\n",
        );
        let data = load_dataset(&csv, &schema).unwrap();
        let out = dir.path().join("out.csv");
        write_dataset(&data, &out).unwrap();
        let again = load_dataset(&out, &schema).unwrap();
        assert_eq!(data, again);
    }

    #[test]
    fn count_cell_must_be_integer_and_in_support() {
        let dir = tempdir().unwrap();
        let schema = write_tmp(&dir, "s.json", bmi_schema_json());
        let csv = write_tmp(&dir, "d.csv", "Age,BMI,FI\n30.5,22.5,Low\n");
        assert!(matches!(
            load_dataset(&csv, &schema).unwrap_err(),
            Error::Schema { .. }
        ));
        // count default support_lo = 0
        let csv = write_tmp(&dir, "d2.csv", "Age,BMI,FI\n-3,22.5,Low\n");
        assert!(matches!(
            load_dataset(&csv, &schema).unwrap_err(),
            Error::Schema { .. }
        ));
    }

    #[test]
    fn expand_three_level_categorical() {
        let schema = vec![
            ColumnSpec::continuous("x"),
            ColumnSpec::continuous("y"),
            ColumnSpec::categorical("c", &["A", "B", "C"]),
        ];
        let columns = vec![
            vec![Some(1.0), Some(2.0)],
            vec![Some(3.0), Some(4.0)],
            vec![Some(1.0), None], // "B", missing
        ];
        let data = MixedDataset::from_columns(schema, columns).unwrap();
        let view = expand_rpl(&data);
        assert_eq!(view.p_star(), 5);
        // observed "B" -> indicator row (0, 1, 0)
        let c_cols = view.columns_of(2);
        assert_eq!(c_cols.len(), 3);
        let pattern: Vec<Option<bool>> = c_cols.iter().map(|&j| view.gamma(j, 0)).collect();
        assert_eq!(pattern, vec![Some(false), Some(true), Some(false)]);
        // missing cell leaves all indicators unset
        let missing: Vec<Option<bool>> = c_cols.iter().map(|&j| view.gamma(j, 1)).collect();
        assert_eq!(missing, vec![None, None, None]);
    }

    #[test]
    fn expand_binary_single_column() {
        let schema = vec![ColumnSpec::categorical("b", &["No", "Yes"])];
        let columns = vec![vec![Some(1.0), Some(0.0), None]];
        let data = MixedDataset::from_columns(schema, columns).unwrap();
        let view = expand_rpl(&data);
        assert_eq!(view.p_star(), 1);
        assert!(view.column(0).orthant);
        // "Yes" (second listed level) pins the positive orthant
        assert_eq!(view.gamma(0, 0), Some(true));
        assert_eq!(view.gamma(0, 1), Some(false));
        assert_eq!(view.gamma(0, 2), None);
    }

    #[test]
    fn observed_categorical_cells_have_exactly_one_indicator() {
        let schema = vec![ColumnSpec::categorical("c", &["A", "B", "C", "D"])];
        let columns = vec![vec![Some(0.0), Some(3.0), Some(2.0), None]];
        let data = MixedDataset::from_columns(schema, columns).unwrap();
        let view = expand_rpl(&data);
        for i in 0..3 {
            let ones: usize = view
                .columns_of(0)
                .iter()
                .filter(|&&j| view.gamma(j, i) == Some(true))
                .count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn ordinal_defaults_to_rank_path_and_orthant_flag_switches() {
        let ranked = vec![ColumnSpec::ordinal("o", &["a", "b", "c"])];
        let data =
            MixedDataset::from_columns(ranked, vec![vec![Some(0.0), Some(2.0)]]).unwrap();
        assert_eq!(expand_rpl(&data).p_star(), 1);
        assert!(!expand_rpl(&data).column(0).orthant);

        let orthant = vec![ColumnSpec::ordinal("o", &["a", "b", "c"]).with_orthant()];
        let data =
            MixedDataset::from_columns(orthant, vec![vec![Some(0.0), Some(2.0)]]).unwrap();
        assert_eq!(expand_rpl(&data).p_star(), 3);
        assert!(expand_rpl(&data).column(0).orthant);
    }

    #[test]
    fn expand_is_row_order_invariant_in_structure() {
        let schema = vec![
            ColumnSpec::continuous("x"),
            ColumnSpec::categorical("c", &["A", "B", "C"]),
        ];
        let data = MixedDataset::from_columns(
            schema.clone(),
            vec![vec![Some(1.0), Some(2.0)], vec![Some(0.0), Some(2.0)]],
        )
        .unwrap();
        let flipped = MixedDataset::from_columns(
            schema,
            vec![vec![Some(2.0), Some(1.0)], vec![Some(2.0), Some(0.0)]],
        )
        .unwrap();
        let a = expand_rpl(&data);
        let b = expand_rpl(&flipped);
        assert_eq!(a.columns(), b.columns());
        assert_eq!(a.gamma(1, 0), b.gamma(1, 1));
    }
}
