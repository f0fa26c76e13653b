//! Run records: one row/object per computed point, carrying the complete
//! resolution echo needed to reproduce the number bit-for-bit.
//!
//! CSV and JSON carry the same 17 fields under the same names. Floating
//! point values are printed with the shortest representation that parses
//! back to the identical bits, so emit → parse → emit is the identity.

use serde::{Deserialize, Serialize};

/// CSV header, fixed order.
pub const CSV_HEADER: &str =
    "mode,eta,gamma,state,sz,omega,mu,energy,S_vN,L,trunc_defect,residual,cond_S,R,nmax,lmax,Q";

/// One computed point. `s_vn`/`linear`/`trunc_defect` are `None` for
/// energy-only runs (`linear` also for triplet entropy runs).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub mode: String,
    pub eta: f64,
    pub gamma: f64,
    pub state: String,
    pub sz: i8,
    pub omega: u32,
    /// The μ actually used (scan result if the run scanned).
    pub mu: f64,
    pub energy: f64,
    #[serde(rename = "S_vN")]
    pub s_vn: Option<f64>,
    #[serde(rename = "L")]
    pub linear: Option<f64>,
    pub trunc_defect: Option<f64>,
    pub residual: f64,
    #[serde(rename = "cond_S")]
    pub cond_s: f64,
    #[serde(rename = "R")]
    pub r_cut: f64,
    pub nmax: usize,
    pub lmax: u32,
    #[serde(rename = "Q")]
    pub quad: usize,
    /// Wall-clock diagnostic; never serialized, so identical configurations
    /// produce identical records.
    #[serde(skip)]
    pub wall_ms: u128,
}

/// A failed sweep point, kept in the stream so a sweep is complete even
/// when individual points fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub gamma: f64,
    pub error: String,
}

/// A sweep stream element.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Ok(Box<RunRecord>),
    Err(ErrorEntry),
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.mode,
            fmt_f64(self.eta),
            fmt_f64(self.gamma),
            self.state,
            self.sz,
            self.omega,
            fmt_f64(self.mu),
            fmt_f64(self.energy),
            fmt_opt(self.s_vn),
            fmt_opt(self.linear),
            fmt_opt(self.trunc_defect),
            fmt_f64(self.residual),
            fmt_f64(self.cond_s),
            fmt_f64(self.r_cut),
            self.nmax,
            self.lmax,
            self.quad,
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self, String> {
        let cells: Vec<&str> = row.split(',').collect();
        let ncols = CSV_HEADER.split(',').count();
        if cells.len() != ncols {
            return Err(format!(
                "expected {ncols} columns, got {} in `{row}`",
                cells.len()
            ));
        }
        let f = |i: usize| -> Result<f64, String> {
            cells[i]
                .parse::<f64>()
                .map_err(|_| format!("column {}: `{}` is not a number", i + 1, cells[i]))
        };
        let opt = |i: usize| -> Result<Option<f64>, String> {
            if cells[i].is_empty() {
                Ok(None)
            } else {
                f(i).map(Some)
            }
        };
        Ok(RunRecord {
            mode: cells[0].to_string(),
            eta: f(1)?,
            gamma: f(2)?,
            state: cells[3].to_string(),
            sz: cells[4]
                .parse()
                .map_err(|_| format!("bad sz `{}`", cells[4]))?,
            omega: cells[5]
                .parse()
                .map_err(|_| format!("bad omega `{}`", cells[5]))?,
            mu: f(6)?,
            energy: f(7)?,
            s_vn: opt(8)?,
            linear: opt(9)?,
            trunc_defect: opt(10)?,
            residual: f(11)?,
            cond_s: f(12)?,
            r_cut: f(13)?,
            nmax: cells[14]
                .parse()
                .map_err(|_| format!("bad nmax `{}`", cells[14]))?,
            lmax: cells[15]
                .parse()
                .map_err(|_| format!("bad lmax `{}`", cells[15]))?,
            quad: cells[16]
                .parse()
                .map_err(|_| format!("bad Q `{}`", cells[16]))?,
            wall_ms: 0,
        })
    }
}

/// Render a stream of entries as a CSV document (header + rows; error
/// entries become `#`-comment lines so the data column count is uniform).
pub fn to_csv(entries: &[Entry]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in entries {
        match e {
            Entry::Ok(r) => {
                out.push_str(&r.to_csv_row());
                out.push('\n');
            }
            Entry::Err(err) => {
                out.push_str(&format!("# error gamma={}: {}\n", err.gamma, err.error));
            }
        }
    }
    out
}

/// Parse a CSV document produced by [`to_csv`].
pub fn from_csv(text: &str) -> Result<Vec<Entry>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => return Err(format!("unexpected header `{h}`")),
        None => return Err("empty document".into()),
    }
    let mut entries = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# error gamma=") {
            let (g, msg) = rest
                .split_once(": ")
                .ok_or_else(|| format!("malformed error line `{line}`"))?;
            entries.push(Entry::Err(ErrorEntry {
                gamma: g.parse().map_err(|_| format!("bad error gamma `{g}`"))?,
                error: msg.to_string(),
            }));
        } else {
            entries.push(Entry::Ok(Box::new(RunRecord::from_csv_row(line)?)));
        }
    }
    Ok(entries)
}

/// Render entries as JSON: a single object for one entry, an array
/// otherwise.
pub fn to_json(entries: &[Entry]) -> String {
    fn value(e: &Entry) -> serde_json::Value {
        match e {
            Entry::Ok(r) => serde_json::to_value(r).expect("record serializes"),
            Entry::Err(err) => serde_json::to_value(err).expect("error serializes"),
        }
    }
    let doc = if entries.len() == 1 {
        value(&entries[0])
    } else {
        serde_json::Value::Array(entries.iter().map(value).collect())
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// Parse a JSON document produced by [`to_json`].
pub fn from_json(text: &str) -> Result<Vec<Entry>, String> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let items: Vec<serde_json::Value> = match doc {
        serde_json::Value::Array(items) => items,
        obj @ serde_json::Value::Object(_) => vec![obj],
        other => return Err(format!("expected object or array, got {other}")),
    };
    items
        .into_iter()
        .map(|v| {
            if v.get("error").is_some() {
                serde_json::from_value::<ErrorEntry>(v)
                    .map(Entry::Err)
                    .map_err(|e| e.to_string())
            } else {
                serde_json::from_value::<RunRecord>(v)
                    .map(|r| Entry::Ok(Box::new(r)))
                    .map_err(|e| e.to_string())
            }
        })
        .collect()
}
