//! Tables, CSV/JSON rendering and atomic file writes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::value::RawValue;

/// Floats are written with 17 significant digits so they parse back exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(token: String) -> Box<RawValue> {
    RawValue::from_string(token).expect("generated JSON token is valid")
}

fn raw_float(x: f64) -> Box<RawValue> {
    if x.is_finite() {
        raw(fmt_float(x))
    } else {
        raw("null".into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Int(Vec<i64>),
    /// `None` renders as an empty CSV field and JSON `null`.
    Float(Vec<Option<f64>>),
}

impl Column {
    pub fn floats(values: impl IntoIterator<Item = f64>) -> Self {
        Column::Float(values.into_iter().map(Some).collect())
    }

    pub fn ints(values: impl IntoIterator<Item = usize>) -> Self {
        Column::Int(values.into_iter().map(|v| v as i64).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Int(v) => v.len(),
            Column::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Column::Int(v) => v[row].to_string(),
            Column::Float(v) => v[row].map(fmt_float).unwrap_or_default(),
        }
    }

    fn json(&self) -> Vec<Box<RawValue>> {
        match self {
            Column::Int(v) => v.iter().map(|i| raw(i.to_string())).collect(),
            Column::Float(v) => v.iter().map(|x| x.map_or_else(|| raw("null".into()), raw_float)).collect(),
        }
    }
}

/// Metadata value.
#[derive(Debug, Clone, PartialEq)]
pub enum Meta {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    List(Vec<f64>),
    Null,
}

impl Meta {
    fn json(&self) -> Box<RawValue> {
        match self {
            Meta::Num(x) => raw_float(*x),
            Meta::Int(i) => raw(i.to_string()),
            Meta::Text(s) => raw(serde_json::to_string(s).expect("string serializes")),
            Meta::Bool(b) => raw(b.to_string()),
            Meta::List(v) => {
                let items: Vec<String> = v.iter().map(|x| raw_float(*x).get().to_owned()).collect();
                raw(format!("[{}]", items.join(",")))
            }
            Meta::Null => raw("null".into()),
        }
    }
}

impl From<f64> for Meta {
    fn from(x: f64) -> Self {
        Meta::Num(x)
    }
}

impl From<Option<f64>> for Meta {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Meta::Null, Meta::Num)
    }
}

impl From<usize> for Meta {
    fn from(i: usize) -> Self {
        Meta::Int(i as i64)
    }
}

impl From<&str> for Meta {
    fn from(s: &str) -> Self {
        Meta::Text(s.to_owned())
    }
}

impl From<bool> for Meta {
    fn from(b: bool) -> Self {
        Meta::Bool(b)
    }
}

/// Named columns of equal length, in output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, Column)>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, column: Column) -> Self {
        if let Some((_, first)) = self.columns.first() {
            assert_eq!(first.len(), column.len(), "column {name} has a different length");
        }
        self.columns.push((name.to_owned(), column));
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in 0..self.rows() {
            let cells: Vec<String> = self.columns.iter().map(|(_, c)| c.cell(row)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, command: &str, metadata: &[(String, Meta)]) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            command: &'a str,
            metadata: Vec<MetaEntry<'a>>,
            columns: Vec<ColumnEntry<'a>>,
        }
        #[derive(Serialize)]
        struct MetaEntry<'a> {
            name: &'a str,
            value: Box<RawValue>,
        }
        #[derive(Serialize)]
        struct ColumnEntry<'a> {
            name: &'a str,
            values: Vec<Box<RawValue>>,
        }
        let doc = Doc {
            command,
            metadata: metadata.iter().map(|(n, v)| MetaEntry { name: n, value: v.json() }).collect(),
            columns: self.columns.iter().map(|(n, c)| ColumnEntry { name: n, values: c.json() }).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Reads the `columns` of a JSON document back as floats (`null` → NaN).
pub fn parse_json_columns(text: &str) -> serde_json::Result<Vec<(String, Vec<f64>)>> {
    let doc: serde_json::Value = serde_json::from_str(text)?;
    let mut out = Vec::new();
    for entry in doc["columns"].as_array().into_iter().flatten() {
        let name = entry["name"].as_str().unwrap_or_default().to_owned();
        let values = entry["values"].as_array().into_iter().flatten().map(|v| v.as_f64().unwrap_or(f64::NAN)).collect();
        out.push((name, values));
    }
    Ok(out)
}

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name =
        path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let t = Table::new().with("n", Column::ints([0, 1])).with("h", Column::Float(vec![None, Some(2.0)]));
        assert_eq!(t.to_csv(), "n,h\n0,\n1,2.0000000000000000e0\n");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let xs = [0.1, 1.0 / 3.0, -7.25e-9, 123456.789];
        let t = Table::new().with("n", Column::ints(0..4)).with("x", Column::floats(xs));
        let text = t.to_json("pn", &[("depth".into(), Meta::Num(45.0)), ("label".into(), "a\"b".into())]);
        let cols = parse_json_columns(&text).unwrap();
        assert_eq!(cols[1].0, "x");
        for (a, b) in cols[1].1.iter().zip(xs) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["metadata"][1]["value"], "a\"b");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
