//! Dataset containers, CSV ingestion and fold splitting.
//!
//! Two tables feed every estimator: a jointly labeled [`SharedDataset`]
//! (covariates, human outcome, surrogate prediction and optionally the
//! labeling probability) and a surrogate-only [`SurrogateDataset`]. Rows of
//! the two tables are treated as disjoint draws from one population. Rows
//! are aligned by file position; the id column is carried as metadata only.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("required column \"{0}\" is missing")]
    MissingColumn(String),
    #[error("non-numeric value {value:?} at data row {row}, column \"{column}\"")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("non-finite value at data row {row}, column \"{column}\"")]
    NonFinite { row: usize, column: String },
    #[error("column \"{column}\" has length {len}, expected {expected}")]
    LengthMismatch {
        column: String,
        len: usize,
        expected: usize,
    },
    #[error("labeling probability pi = {value} at data row {row} is outside (0, 1]")]
    InvalidPi { row: usize, value: f64 },
    #[error("treatment column \"{column}\" holds {value} at data row {row}; only 0/1 allowed")]
    InvalidTreatment {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("{0} >= 1 required")]
    Empty(&'static str),
    #[error(
        "covariate schemas differ: only in shared {shared_only:?}, only in surrogate {surrogate_only:?}"
    )]
    SchemaMismatch {
        shared_only: Vec<String>,
        surrogate_only: Vec<String>,
    },
    #[error("fold count k = {k} invalid for n = {n} (need 2 <= k <= n)")]
    InvalidFolds { n: usize, k: usize },
}

/// How covariate columns are recognised in a header.
#[derive(Debug, Clone, PartialEq)]
pub enum CovariateSpec {
    /// Every column whose name starts with the prefix.
    Prefix(String),
    /// Exactly these columns, in this order.
    Names(Vec<String>),
}

/// Column-role map used during ingestion.
///
/// `id`, `z` and `pi` are optional roles: they are used when the header
/// contains them and ignored otherwise. The designated treatment column `z`
/// is always stored as one of the covariates.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub id: Option<String>,
    pub y: String,
    pub yhat: String,
    pub z: Option<String>,
    pub pi: Option<String>,
    pub covariates: CovariateSpec,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            id: Some("id".into()),
            y: "y".into(),
            yhat: "yhat".into(),
            z: Some("z".into()),
            pi: Some("pi".into()),
            covariates: CovariateSpec::Prefix("x_".into()),
        }
    }
}

/// Jointly labeled rows: covariates, human outcome `y`, surrogate
/// prediction `yhat` and an optional labeling probability `pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedDataset {
    row_ids: Vec<i64>,
    covariate_names: Vec<String>,
    columns: Vec<Vec<f64>>,
    z_index: Option<usize>,
    y: Vec<f64>,
    yhat: Vec<f64>,
    pi: Option<Vec<f64>>,
}

/// Surrogate-only rows: covariates and prediction `yhat`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateDataset {
    row_ids: Vec<i64>,
    covariate_names: Vec<String>,
    columns: Vec<Vec<f64>>,
    z_index: Option<usize>,
    yhat: Vec<f64>,
}

fn check_column(name: &str, values: &[f64], expected: usize) -> Result<(), DataError> {
    if values.len() != expected {
        return Err(DataError::LengthMismatch {
            column: name.to_string(),
            len: values.len(),
            expected,
        });
    }
    if let Some(row) = values.iter().position(|v| !v.is_finite()) {
        return Err(DataError::NonFinite {
            row: row + 1,
            column: name.to_string(),
        });
    }
    Ok(())
}

fn check_covariates(
    names: &[String],
    columns: &[Vec<f64>],
    z_index: Option<usize>,
    n: usize,
) -> Result<(), DataError> {
    if names.len() != columns.len() {
        return Err(DataError::LengthMismatch {
            column: "covariate names".into(),
            len: names.len(),
            expected: columns.len(),
        });
    }
    for (name, col) in names.iter().zip(columns) {
        check_column(name, col, n)?;
    }
    if let Some(j) = z_index {
        let col = columns.get(j).ok_or_else(|| DataError::MissingColumn(format!("z (index {j})")))?;
        if let Some(row) = col.iter().position(|&v| v != 0.0 && v != 1.0) {
            return Err(DataError::InvalidTreatment {
                row: row + 1,
                column: names[j].clone(),
                value: col[row],
            });
        }
    }
    Ok(())
}

fn default_ids(n: usize) -> Vec<i64> {
    (0..n as i64).collect()
}

impl SharedDataset {
    /// Validating constructor. `columns` are covariate columns; `z_index`
    /// designates one of them as the 0/1 treatment or persona indicator.
    pub fn new(
        row_ids: Option<Vec<i64>>,
        covariate_names: Vec<String>,
        columns: Vec<Vec<f64>>,
        z_index: Option<usize>,
        y: Vec<f64>,
        yhat: Vec<f64>,
        pi: Option<Vec<f64>>,
    ) -> Result<Self, DataError> {
        let n = y.len();
        if n == 0 {
            return Err(DataError::Empty("n"));
        }
        check_column("y", &y, n)?;
        check_column("yhat", &yhat, n)?;
        check_covariates(&covariate_names, &columns, z_index, n)?;
        if let Some(pi) = &pi {
            check_column("pi", pi, n)?;
            if let Some(row) = pi.iter().position(|&p| !(p > 0.0 && p <= 1.0)) {
                return Err(DataError::InvalidPi {
                    row: row + 1,
                    value: pi[row],
                });
            }
        }
        let row_ids = row_ids.unwrap_or_else(|| default_ids(n));
        if row_ids.len() != n {
            return Err(DataError::LengthMismatch {
                column: "id".into(),
                len: row_ids.len(),
                expected: n,
            });
        }
        Ok(Self {
            row_ids,
            covariate_names,
            columns,
            z_index,
            y,
            yhat,
            pi,
        })
    }

    /// Outcome/prediction pairs with no covariates.
    pub fn from_outcomes(y: Vec<f64>, yhat: Vec<f64>) -> Result<Self, DataError> {
        Self::new(None, Vec::new(), Vec::new(), None, y, yhat, None)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn row_ids(&self) -> &[i64] {
        &self.row_ids
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn yhat(&self) -> &[f64] {
        &self.yhat
    }

    pub fn pi(&self) -> Option<&[f64]> {
        self.pi.as_deref()
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn covariate(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn covariates(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn z_index(&self) -> Option<usize> {
        self.z_index
    }

    pub fn z(&self) -> Option<&[f64]> {
        self.z_index.map(|j| self.columns[j].as_slice())
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DataError> {
        let pick = |v: &[f64]| indices.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(
            Some(indices.iter().map(|&i| self.row_ids[i]).collect()),
            self.covariate_names.clone(),
            self.columns.iter().map(|c| pick(c)).collect(),
            self.z_index,
            pick(&self.y),
            pick(&self.yhat),
            self.pi.as_ref().map(|p| pick(p)),
        )
    }

    /// Writes the table as CSV using the names of `schema` for the role
    /// columns. Values are written in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, writer: W, schema: &Schema) -> Result<(), DataError> {
        let mut out = csv::Writer::from_writer(writer);
        let id_name = schema.id.clone().unwrap_or_else(|| "id".into());
        let mut header = vec![id_name];
        header.extend(self.covariate_names.iter().cloned());
        header.push(schema.y.clone());
        header.push(schema.yhat.clone());
        if self.pi.is_some() {
            header.push(schema.pi.clone().unwrap_or_else(|| "pi".into()));
        }
        out.write_record(&header)?;
        for i in 0..self.n() {
            let mut rec = vec![self.row_ids[i].to_string()];
            rec.extend(self.columns.iter().map(|c| c[i].to_string()));
            rec.push(self.y[i].to_string());
            rec.push(self.yhat[i].to_string());
            if let Some(pi) = &self.pi {
                rec.push(pi[i].to_string());
            }
            out.write_record(&rec)?;
        }
        out.flush().map_err(|source| DataError::Io {
            path: "<writer>".into(),
            source,
        })
    }
}

impl SurrogateDataset {
    pub fn new(
        row_ids: Option<Vec<i64>>,
        covariate_names: Vec<String>,
        columns: Vec<Vec<f64>>,
        z_index: Option<usize>,
        yhat: Vec<f64>,
    ) -> Result<Self, DataError> {
        let n = yhat.len();
        if n == 0 {
            return Err(DataError::Empty("N"));
        }
        check_column("yhat", &yhat, n)?;
        check_covariates(&covariate_names, &columns, z_index, n)?;
        let row_ids = row_ids.unwrap_or_else(|| default_ids(n));
        if row_ids.len() != n {
            return Err(DataError::LengthMismatch {
                column: "id".into(),
                len: row_ids.len(),
                expected: n,
            });
        }
        Ok(Self {
            row_ids,
            covariate_names,
            columns,
            z_index,
            yhat,
        })
    }

    pub fn from_predictions(yhat: Vec<f64>) -> Result<Self, DataError> {
        Self::new(None, Vec::new(), Vec::new(), None, yhat)
    }

    pub fn len(&self) -> usize {
        self.yhat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.yhat.is_empty()
    }

    pub fn row_ids(&self) -> &[i64] {
        &self.row_ids
    }

    pub fn yhat(&self) -> &[f64] {
        &self.yhat
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn covariate(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn covariates(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn z_index(&self) -> Option<usize> {
        self.z_index
    }

    pub fn z(&self) -> Option<&[f64]> {
        self.z_index.map(|j| self.columns[j].as_slice())
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self, DataError> {
        let pick = |v: &[f64]| indices.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(
            Some(indices.iter().map(|&i| self.row_ids[i]).collect()),
            self.covariate_names.clone(),
            self.columns.iter().map(|c| pick(c)).collect(),
            self.z_index,
            pick(&self.yhat),
        )
    }

    pub fn write_csv<W: Write>(&self, writer: W, schema: &Schema) -> Result<(), DataError> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec![schema.id.clone().unwrap_or_else(|| "id".into())];
        header.extend(self.covariate_names.iter().cloned());
        header.push(schema.yhat.clone());
        out.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = vec![self.row_ids[i].to_string()];
            rec.extend(self.columns.iter().map(|c| c[i].to_string()));
            rec.push(self.yhat[i].to_string());
            out.write_record(&rec)?;
        }
        out.flush().map_err(|source| DataError::Io {
            path: "<writer>".into(),
            source,
        })
    }
}

/// Errors unless both tables carry the same covariate columns in the same
/// order.
pub fn check_compatible(
    shared: &SharedDataset,
    surrogate: &SurrogateDataset,
) -> Result<(), DataError> {
    if shared.covariate_names == surrogate.covariate_names && shared.z_index == surrogate.z_index {
        return Ok(());
    }
    let a: BTreeSet<&String> = shared.covariate_names.iter().collect();
    let b: BTreeSet<&String> = surrogate.covariate_names.iter().collect();
    Err(DataError::SchemaMismatch {
        shared_only: a.difference(&b).map(|s| s.to_string()).collect(),
        surrogate_only: b.difference(&a).map(|s| s.to_string()).collect(),
    })
}

struct RawTable {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl RawTable {
    fn read<R: Read>(reader: R) -> Result<Self, DataError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr.records().collect::<Result<Vec<_>, _>>()?;
        Ok(Self { headers, rows })
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize, DataError> {
        self.position(name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))
    }

    fn numeric(&self, col: usize) -> Result<Vec<f64>, DataError> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                let cell = rec.get(col).unwrap_or("");
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    Ok(_) => Err(DataError::NonFinite {
                        row: i + 1,
                        column: self.headers[col].clone(),
                    }),
                    Err(_) => Err(DataError::NonNumeric {
                        row: i + 1,
                        column: self.headers[col].clone(),
                        value: cell.to_string(),
                    }),
                }
            })
            .collect()
    }

    fn ids(&self, col: usize) -> Result<Vec<i64>, DataError> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                let cell = rec.get(col).unwrap_or("");
                cell.parse::<i64>().map_err(|_| DataError::NonNumeric {
                    row: i + 1,
                    column: self.headers[col].clone(),
                    value: cell.to_string(),
                })
            })
            .collect()
    }

    /// Covariate columns in header order, with the designated z column
    /// included at its header position.
    fn covariates(
        &self,
        schema: &Schema,
    ) -> Result<(Vec<String>, Vec<Vec<f64>>, Option<usize>), DataError> {
        let z_name = schema.z.as_deref().filter(|z| self.position(z).is_some());
        let positions: Vec<usize> = match &schema.covariates {
            CovariateSpec::Prefix(prefix) => self
                .headers
                .iter()
                .enumerate()
                .filter(|(_, h)| h.starts_with(prefix.as_str()) || Some(h.as_str()) == z_name)
                .map(|(i, _)| i)
                .collect(),
            CovariateSpec::Names(names) => {
                let mut pos = names
                    .iter()
                    .map(|n| self.require(n))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(z) = z_name {
                    if !names.iter().any(|n| n == z) {
                        pos.push(self.require(z)?);
                    }
                }
                pos
            }
        };
        let names: Vec<String> = positions.iter().map(|&i| self.headers[i].clone()).collect();
        let z_index = z_name.and_then(|z| names.iter().position(|n| n == z));
        let columns = positions
            .iter()
            .map(|&i| self.numeric(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((names, columns, z_index))
    }
}

fn open(path: &Path) -> Result<File, DataError> {
    File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_shared<R: Read>(reader: R, schema: &Schema) -> Result<SharedDataset, DataError> {
    let table = RawTable::read(reader)?;
    let y_col = table.require(&schema.y)?;
    let yhat_col = table.require(&schema.yhat)?;
    if table.rows.is_empty() {
        return Err(DataError::Empty("n"));
    }
    let (names, columns, z_index) = table.covariates(schema)?;
    let ids = match schema.id.as_deref().and_then(|id| table.position(id)) {
        Some(col) => Some(table.ids(col)?),
        None => None,
    };
    let pi = match schema.pi.as_deref().and_then(|p| table.position(p)) {
        Some(col) => Some(table.numeric(col)?),
        None => None,
    };
    SharedDataset::new(
        ids,
        names,
        columns,
        z_index,
        table.numeric(y_col)?,
        table.numeric(yhat_col)?,
        pi,
    )
}

pub fn read_surrogate<R: Read>(reader: R, schema: &Schema) -> Result<SurrogateDataset, DataError> {
    let table = RawTable::read(reader)?;
    let yhat_col = table.require(&schema.yhat)?;
    if table.rows.is_empty() {
        return Err(DataError::Empty("N"));
    }
    let (names, columns, z_index) = table.covariates(schema)?;
    let ids = match schema.id.as_deref().and_then(|id| table.position(id)) {
        Some(col) => Some(table.ids(col)?),
        None => None,
    };
    SurrogateDataset::new(ids, names, columns, z_index, table.numeric(yhat_col)?)
}

pub fn load_shared(path: impl AsRef<Path>, schema: &Schema) -> Result<SharedDataset, DataError> {
    read_shared(open(path.as_ref())?, schema)
}

pub fn load_surrogate(
    path: impl AsRef<Path>,
    schema: &Schema,
) -> Result<SurrogateDataset, DataError> {
    read_surrogate(open(path.as_ref())?, schema)
}

/// Loads both tables and checks that their covariate schemas agree.
pub fn load_pair(
    shared: impl AsRef<Path>,
    surrogate: impl AsRef<Path>,
    schema: &Schema,
) -> Result<(SharedDataset, SurrogateDataset), DataError> {
    let s = load_shared(shared, schema)?;
    let u = load_surrogate(surrogate, schema)?;
    check_compatible(&s, &u)?;
    Ok((s, u))
}

/// Assignment of `n` rows to `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    fold_index: Vec<usize>,
    k: usize,
    seed: u64,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_index(&self) -> &[usize] {
        &self.fold_index
    }

    /// Rows assigned to `fold`, ascending.
    pub fn held_out(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_index.len())
            .filter(|&i| self.fold_index[i] == fold)
            .collect()
    }

    /// Rows not assigned to `fold`, ascending.
    pub fn training(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_index.len())
            .filter(|&i| self.fold_index[i] != fold)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.fold_index {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Balanced random fold assignment: a seeded shuffle of the rows dealt
/// round-robin into `k` folds, so fold sizes differ by at most one.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<FoldAssignment, DataError> {
    if k < 2 || k > n {
        return Err(DataError::InvalidFolds { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_index = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        fold_index[row] = pos % k;
    }
    Ok(FoldAssignment {
        fold_index,
        k,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shared_from(text: &str) -> Result<SharedDataset, DataError> {
        read_shared(text.as_bytes(), &Schema::default())
    }

    #[test]
    fn parses_small_shared_table() {
        let ds = shared_from("id,x_1,z,y,yhat\n1,0.5,0,1.0,1.2\n2,1.5,1,2.0,2.1\n3,2.5,1,3.0,2.7\n")
            .unwrap();
        assert_eq!(ds.n(), 3);
        assert_eq!(ds.k(), 2);
        assert_eq!(ds.covariate_names(), ["x_1", "z"]);
        assert_eq!(ds.z(), Some(&[0.0, 1.0, 1.0][..]));
        assert_eq!(ds.row_ids(), [1, 2, 3]);
        assert_eq!(ds.y(), [1.0, 2.0, 3.0]);
        assert!(ds.pi().is_none());
    }

    #[test]
    fn missing_yhat_names_the_column() {
        let err = shared_from("id,x_1,y\n1,0.5,1.0\n").unwrap_err();
        assert!(matches!(&err, DataError::MissingColumn(c) if c == "yhat"));
        assert!(err.to_string().contains("yhat"));
    }

    #[test]
    fn pi_zero_is_rejected() {
        let err = shared_from("y,yhat,pi\n1,1,0.5\n2,2,0\n").unwrap_err();
        assert!(matches!(err, DataError::InvalidPi { row: 2, .. }));
        assert!(err.to_string().contains("(0, 1]"));
    }

    #[test]
    fn non_numeric_cell_reports_row_and_column() {
        let err = shared_from("y,yhat\n1,1\n2,abc\n").unwrap_err();
        match err {
            DataError::NonNumeric { row, column, value } => {
                assert_eq!((row, column.as_str(), value.as_str()), (2, "yhat", "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_value_is_rejected_not_imputed() {
        assert!(matches!(
            shared_from("y,yhat\n1,1\n2,\n").unwrap_err(),
            DataError::NonNumeric { row: 2, .. }
        ));
    }

    #[test]
    fn non_binary_treatment_is_rejected() {
        assert!(matches!(
            shared_from("z,y,yhat\n0,1,1\n2,2,2\n").unwrap_err(),
            DataError::InvalidTreatment { row: 2, .. }
        ));
    }

    #[test]
    fn surrogate_parse_and_errors() {
        let text = "id,x_1,z,yhat\n".to_string()
            + &(0..6).map(|i| format!("{i},{i}.5,{},{}\n", i % 2, i)).collect::<String>();
        let u = read_surrogate(text.as_bytes(), &Schema::default()).unwrap();
        assert_eq!(u.len(), 6);

        let err = read_surrogate("id,x_1,yhat\n".as_bytes(), &Schema::default()).unwrap_err();
        assert!(err.to_string().contains("N >= 1 required"));

        let s = shared_from("x_1,z,y,yhat\n1,0,1,1\n").unwrap();
        let u2 = read_surrogate("x_2,z,yhat\n1,0,1\n".as_bytes(), &Schema::default()).unwrap();
        match check_compatible(&s, &u2).unwrap_err() {
            DataError::SchemaMismatch {
                shared_only,
                surrogate_only,
            } => {
                assert_eq!(shared_only, ["x_1"]);
                assert_eq!(surrogate_only, ["x_2"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        check_compatible(&s, &u).unwrap();
    }

    #[test]
    fn explicit_covariate_names() {
        let schema = Schema {
            covariates: CovariateSpec::Names(vec!["age".into()]),
            ..Schema::default()
        };
        let ds = read_shared("age,income,z,y,yhat\n30,1,1,1,1\n".as_bytes(), &schema).unwrap();
        assert_eq!(ds.covariate_names(), ["age", "z"]);
        assert_eq!(ds.z_index(), Some(1));
    }

    #[test]
    fn folds_are_deterministic_and_balanced() {
        let a = make_folds(10, 5, 7).unwrap();
        let b = make_folds(10, 5, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sizes(), vec![2; 5]);
        assert_ne!(a.fold_index(), make_folds(10, 5, 8).unwrap().fold_index());
        for f in 0..5 {
            assert_eq!(a.held_out(f).len() + a.training(f).len(), 10);
        }
    }

    #[test]
    fn fold_preconditions() {
        assert!(matches!(make_folds(3, 5, 0), Err(DataError::InvalidFolds { n: 3, k: 5 })));
        assert!(make_folds(10, 1, 0).is_err());
        assert!(make_folds(2, 2, 0).is_ok());
    }
}
