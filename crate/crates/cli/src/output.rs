//! Serialization helpers. JSON is pretty-printed with keys in struct order;
//! floats use the shortest representation that parses back to the same
//! value, in both JSON and CSV.

use std::fmt::Write;

use serde::Serialize;
use tvbound::{DiscreteDist, WitnessPair};

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports contain only finite numbers")
}

pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Cell for bool {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Cell for usize {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Cell for u64 {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Cell for &str {
    fn cell(&self) -> String {
        (*self).to_owned()
    }
}

impl<T: Cell> Cell for Option<T> {
    fn cell(&self) -> String {
        self.as_ref().map(Cell::cell).unwrap_or_default()
    }
}

pub fn csv_row(cells: &[&dyn Cell]) -> String {
    cells.iter().map(|c| c.cell()).collect::<Vec<_>>().join(",")
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = String>) -> String {
    let mut out = header.join(",");
    for row in rows {
        out.push('\n');
        out.push_str(&row);
    }
    out
}

fn dist_rows(out: &mut String, label: &str, d: &DiscreteDist) {
    for (x, p) in d.atoms() {
        let _ = write!(out, "\n{label},{x},{p}");
    }
}

/// One row per atom: `dist,x,prob`.
pub fn witness_csv(w: &WitnessPair) -> String {
    let mut out = String::from("dist,x,prob");
    dist_rows(&mut out, "p", &w.p_dist);
    dist_rows(&mut out, "q", &w.q_dist);
    out
}
