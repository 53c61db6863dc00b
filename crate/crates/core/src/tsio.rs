//! Time series data model and dataset ingestion (comma-separated rows and
//! the tab-separated UCR archive layout).

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Minimum number of observations accepted by the loaders and the mappings.
pub const MIN_LEN: usize = 2;

/// An ordered sequence of finite observations, indexed by sample number.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    values: Vec<f64>,
    label: Option<String>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "series {id:?}: non-finite value at index {pos}"
            )));
        }
        Ok(Self {
            id,
            values,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fails unless the series is long enough to be mapped into a graph.
    pub fn ensure_mappable(&self) -> Result<()> {
        if self.values.len() < MIN_LEN {
            return Err(Error::TooShort {
                id: self.id.clone(),
                len: self.values.len(),
                min: MIN_LEN,
            });
        }
        Ok(())
    }
}

/// An ordered collection of series with unique ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    has_labels: bool,
}

impl Dataset {
    /// Builds a dataset; it is labelled iff every series carries a label.
    pub fn new(series: Vec<TimeSeries>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(series.len());
        for s in &series {
            if !seen.insert(s.id()) {
                return Err(Error::Dataset(format!("duplicate series id {:?}", s.id())));
            }
        }
        let labelled = series.iter().filter(|s| s.label.is_some()).count();
        if labelled != 0 && labelled != series.len() {
            return Err(Error::Dataset(format!(
                "{labelled} of {} series carry a label; expected all or none",
                series.len()
            )));
        }
        let has_labels = !series.is_empty() && labelled == series.len();
        Ok(Self { series, has_labels })
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn has_labels(&self) -> bool {
        self.has_labels
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Labels in series order, when the dataset is labelled.
    pub fn labels(&self) -> Option<Vec<&str>> {
        self.has_labels
            .then(|| self.series.iter().filter_map(|s| s.label()).collect())
    }

    pub fn into_series(self) -> Vec<TimeSeries> {
        self.series
    }
}

/// Loads one series per row from a comma-separated file. With `label_column`
/// the first field of each row is the class label.
pub fn load_csv(path: impl AsRef<Path>, label_column: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_delimited(file, b',', label_column)
}

/// Loads a UCR/UEA archive file: tab-separated, class label in the first
/// column, trailing empty fields (padding of variable-length series) ignored.
pub fn load_ucr_tsv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_delimited(file, b'\t', true)
}

/// Parses delimited rows from any reader. Row and column numbers in errors
/// are 0-based; the column counts the label field when present.
pub fn parse_delimited<R: Read>(reader: R, delimiter: u8, label_column: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut series = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            row,
            column: 0,
            message: e.to_string(),
        })?;
        let mut fields: Vec<&str> = record.iter().map(str::trim).collect();
        while fields.last().is_some_and(|f| f.is_empty()) {
            fields.pop();
        }
        if fields.is_empty() {
            continue;
        }

        let (label, first_value) = if label_column {
            (Some(fields[0].to_string()), 1)
        } else {
            (None, 0)
        };

        let mut values = Vec::with_capacity(fields.len() - first_value);
        for (column, field) in fields.iter().enumerate().skip(first_value) {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                row,
                column,
                message: format!("cannot parse {field:?} as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: format!("non-finite value {field:?}"),
                });
            }
            values.push(v);
        }
        if values.len() < MIN_LEN {
            return Err(Error::Parse {
                row,
                column: fields.len().saturating_sub(1),
                message: format!(
                    "row has {} values, at least {MIN_LEN} required",
                    values.len()
                ),
            });
        }

        let mut ts = TimeSeries::new(format!("row{row}"), values)?;
        if let Some(label) = label {
            ts = ts.with_label(label);
        }
        series.push(ts);
    }
    Dataset::new(series)
}

/// Writes a dataset in the comma-separated layout read by [`load_csv`]
/// (label first when the dataset is labelled). Values use the shortest
/// representation that parses back to the same bits.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_csv_to(dataset, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn write_csv_to<W: Write>(dataset: &Dataset, out: &mut W) -> std::io::Result<()> {
    for s in dataset.series() {
        let mut first = true;
        if let Some(label) = s.label().filter(|_| dataset.has_labels()) {
            write!(out, "{label}")?;
            first = false;
        }
        for v in s.values() {
            if !first {
                out.write_all(b",")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}
