//! Rendering of the exceptional set below 5040 as a table, and comparison
//! against a stored copy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gronwall::truncate3;
use crate::robin::RobinRecord;

/// Published table, one row per r.
pub const GOLDEN_TABLE: &str = include_str!("../assets/table1.csv");

pub const COLUMNS: [&str; 8] = ["r", "sa", "factorization", "sigma", "sigma_over_r", "g", "p", "g_11r"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub r: String,
    pub sa: String,
    pub factorization: String,
    pub sigma: String,
    pub sigma_over_r: String,
    pub g: String,
    pub p: String,
    pub g_11r: String,
}

impl TableRow {
    pub fn cells(&self) -> [&str; 8] {
        [&self.r, &self.sa, &self.factorization, &self.sigma, &self.sigma_over_r, &self.g, &self.p, &self.g_11r]
    }
}

pub fn render_row(rec: &RobinRecord) -> Result<TableRow> {
    Ok(TableRow {
        r: rec.r.to_string(),
        sa: if rec.is_sa { "SA".into() } else { String::new() },
        factorization: rec.factorization.to_string(),
        sigma: rec.sigma.to_string(),
        sigma_over_r: rec.abundancy.truncate3(),
        g: truncate3(&rec.g)?,
        p: rec.p_witness.map(|p| p.to_string()).unwrap_or_default(),
        g_11r: truncate3(&rec.g_11r)?,
    })
}

pub fn render_rows(records: &[RobinRecord]) -> Result<Vec<TableRow>> {
    records.iter().map(render_row).collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Domain(format!("table csv: {e}"))
}

pub fn to_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("table csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    if header != COLUMNS {
        return Err(Error::Domain(format!("table header must be {}", COLUMNS.join(","))));
    }
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

pub fn golden_rows() -> Result<Vec<TableRow>> {
    parse_csv(GOLDEN_TABLE)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDiff {
    /// r of the row, or the row position when the row is missing on one side
    pub row: String,
    pub column: &'static str,
    pub expected: String,
    pub actual: String,
}

/// Cell-by-cell differences, rows matched by position.
pub fn diff(expected: &[TableRow], actual: &[TableRow]) -> Vec<CellDiff> {
    let mut out = Vec::new();
    for i in 0..expected.len().max(actual.len()) {
        match (expected.get(i), actual.get(i)) {
            (Some(e), Some(a)) => {
                for ((col, x), y) in COLUMNS.iter().zip(e.cells()).zip(a.cells()) {
                    if x != y {
                        out.push(CellDiff { row: e.r.clone(), column: col, expected: x.into(), actual: y.into() });
                    }
                }
            }
            (Some(e), None) => {
                out.push(CellDiff { row: e.r.clone(), column: "r", expected: e.r.clone(), actual: String::new() })
            }
            (None, Some(a)) => {
                out.push(CellDiff { row: a.r.clone(), column: "r", expected: String::new(), actual: a.r.clone() })
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::Ladder;
    use crate::robin::compute_r;

    #[test]
    fn golden_parses() {
        let rows = golden_rows().unwrap();
        assert_eq!(rows.len(), 26);
        assert_eq!(rows[1].g, "5.357");
        assert_eq!(rows[1].sa, "SA");
        assert_eq!(rows[0].p, "");
    }

    #[test]
    fn round_trip() {
        let rows = golden_rows().unwrap();
        assert_eq!(parse_csv(&to_csv(&rows).unwrap()).unwrap(), rows);
        assert_eq!(to_csv(&rows).unwrap(), GOLDEN_TABLE);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn computed_table_against_golden() {
        let rows = render_rows(&compute_r(&Ladder::default()).unwrap()).unwrap();
        let d = diff(&golden_rows().unwrap(), &rows);
        // every numeric column agrees; the only differences are p(r) cells where
        // a smaller prime than the listed one already satisfies G(r/p) > G(r)
        assert!(d.iter().all(|c| c.column == "p"), "{d:?}");
        let cells: Vec<(&str, &str, &str)> =
            d.iter().map(|c| (c.row.as_str(), c.expected.as_str(), c.actual.as_str())).collect();
        assert_eq!(
            cells,
            vec![
                ("20", "5", "2"),
                ("24", "3", "2"),
                ("48", "3", "2"),
                ("72", "3", "2"),
                ("180", "5", "3"),
                ("240", "5", "2"),
                ("360", "5", "2"),
                ("720", "3", "2"),
            ]
        );
    }

    #[test]
    fn diff_reports_missing_rows() {
        let rows = golden_rows().unwrap();
        let d = diff(&rows, &rows[..25]);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].row, "5040");
    }
}
