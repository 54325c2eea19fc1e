//! Verification rows and the JSON-lines report format.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One checked statement.  Failing rows always carry both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

impl Row {
    pub fn new(check: &str, params: Value, lhs: String, rhs: String) -> Row {
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        Row { check: check.to_string(), params, status, lhs, rhs }
    }

    pub fn flag(check: &str, params: Value, ok: bool) -> Row {
        Row::new(check, params, ok.to_string(), "true".into())
    }

    pub fn skipped(check: &str, params: Value, why: &str) -> Row {
        Row {
            check: check.to_string(),
            params,
            status: Status::Skipped,
            lhs: why.to_string(),
            rhs: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

pub fn summarize(rows: &[Row]) -> Summary {
    let mut s = Summary::default();
    for r in rows {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => {}
        }
    }
    s
}

/// Writes one JSON object per row followed by the `{"pass":..,"fail":..}` trailer.
pub fn emit_report<W: Write + ?Sized>(rows: &[Row], out: &mut W) -> Result<Summary> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    for r in rows {
        let line = serde_json::to_string(r).expect("rows serialize");
        writeln!(out, "{}", line).map_err(io)?;
    }
    let s = summarize(rows);
    writeln!(out, "{}", serde_json::to_string(&s).expect("summary serializes")).map_err(io)?;
    Ok(s)
}

pub fn parse_row(line: &str) -> Result<Row> {
    serde_json::from_str(line).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_report_is_trailer_only() {
        let mut buf = Vec::new();
        emit_report(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"pass\":0,\"fail\":0}\n");
    }

    #[test]
    fn rows_round_trip() {
        let r = Row::new("x", json!({"l": 1}), "1/27".into(), "1/27".into());
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(parse_row(&s).unwrap(), r);
        assert!(s.starts_with("{\"check\":\"x\",\"params\""));
        let bad = Row::new("x", json!({}), "1".into(), "2".into());
        assert_eq!(bad.status, Status::Fail);
        assert_ne!(bad.lhs, bad.rhs);
    }
}
