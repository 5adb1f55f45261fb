//! Result tables with unit-annotated columns and a provenance block.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    /// `omega_c`, `1/omega_c`, `1` (dimensionless), `nats`, or `-` for text.
    pub unit: &'static str,
}

impl Column {
    pub const fn new(name: &'static str, unit: &'static str) -> Self {
        Column { name, unit }
    }

    pub fn header(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    Num(f64),
    Int(i64),
    Text(String),
}

impl CellValue {
    fn csv(&self) -> String {
        match self {
            CellValue::Num(x) => format_num(*x),
            CellValue::Int(i) => i.to_string(),
            CellValue::Text(t) => quote(t),
        }
    }

    fn json(&self) -> Value {
        match self {
            CellValue::Num(x) if x.is_finite() => json!(x),
            CellValue::Num(x) => json!(format_num(*x)),
            CellValue::Int(i) => json!(i),
            CellValue::Text(t) => json!(t),
        }
    }
}

/// Shortest round-trip representation; `nan`, `inf`, `-inf` spelled out.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

fn quote(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<CellValue>>,
    /// Ordered key/value provenance entries.
    pub provenance: Vec<(String, String)>,
    /// Kept apart so the rest of a file is reproducible byte for byte.
    pub timestamp: Option<String>,
}

impl ResultTable {
    pub fn new(columns: Vec<Column>) -> Self {
        ResultTable { columns, ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<CellValue>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.provenance.push((key.to_string(), value.into()));
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// `#`-prefixed provenance lines, the unit-suffixed header, then the rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut buf = String::new();
        for (k, v) in &self.provenance {
            writeln!(buf, "# {k}: {v}").unwrap();
        }
        if let Some(ts) = &self.timestamp {
            writeln!(buf, "# timestamp: {ts}").unwrap();
        }
        let header: Vec<String> = self.columns.iter().map(Column::header).collect();
        writeln!(buf, "{}", header.join(",")).unwrap();
        out.write_all(buf.as_bytes())?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(CellValue::csv).collect();
            out.write_all(line.join(",").as_bytes())?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut prov = Map::new();
        for (k, v) in &self.provenance {
            prov.insert(k.clone(), json!(v));
        }
        if let Some(ts) = &self.timestamp {
            prov.insert("timestamp".into(), json!(ts));
        }
        let columns: Vec<Value> =
            self.columns.iter().map(|c| json!({ "name": c.name, "unit": c.unit })).collect();
        let rows: Vec<Value> =
            self.rows.iter().map(|r| Value::Array(r.iter().map(CellValue::json).collect())).collect();
        json!({ "provenance": prov, "columns": columns, "rows": rows })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        out.write_all(b"\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(vec![Column::new("alpha", "1"), Column::new("E1", "omega_c")]);
        t.note("version", "0.1.0");
        t.push(vec![CellValue::Num(0.05), CellValue::Num(-0.0125)]);
        t.push(vec![CellValue::Num(0.1), CellValue::Num(f64::NAN)]);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "# version: 0.1.0\nalpha[1],E1[omega_c]\n0.05,-0.0125\n0.1,nan\n");
    }

    #[test]
    fn text_cells_are_quoted_when_needed() {
        assert_eq!(CellValue::Text("a,b".into()).csv(), "\"a,b\"");
        assert_eq!(CellValue::Text("ok".into()).csv(), "ok");
    }
}
