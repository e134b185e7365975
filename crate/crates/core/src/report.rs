//! Report envelopes, matrix text input and atomic output files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ajt::MatrixVerdict;
use crate::error::{Error, Result};
use crate::lemma::LemmaReport;
use crate::matrix::{MatrixFp, MatrixRepr};
use crate::scan::ScanReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable overriding the dense coefficient budget.
pub const BUDGET_ENV: &str = "AJT_MAX_COEFFS";

/// The shipped JSON schema for [`ReportEnvelope`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictPayload {
    pub matrix: MatrixFp,
    pub verdict: MatrixVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Verdict(VerdictPayload),
    Lemma(Box<LemmaReport>),
    Scan(ScanReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub config: serde_json::Value,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub payload: Payload,
    /// SHA-256 of the compact JSON encoding of `payload`.
    pub payload_sha256: String,
}

pub fn payload_sha256(payload: &Payload) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(payload)?)))
}

impl ReportEnvelope {
    pub fn new(command: &str, config: serde_json::Value, payload: Payload) -> Result<Self> {
        let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        Self::with_timestamp(command, config, payload, timestamp)
    }

    pub fn with_timestamp(
        command: &str,
        config: serde_json::Value,
        payload: Payload,
        timestamp: String,
    ) -> Result<Self> {
        Ok(ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config,
            timestamp,
            payload_sha256: payload_sha256(&payload)?,
            payload,
        })
    }

    pub fn checksum_ok(&self) -> bool {
        payload_sha256(&self.payload).is_ok_and(|h| h == self.payload_sha256)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses an envelope and rejects it if the checksum does not match.
    pub fn from_json(text: &str) -> Result<Self> {
        let env: ReportEnvelope = serde_json::from_str(text)?;
        if env.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                env.schema_version
            )));
        }
        if !env.checksum_ok() {
            return Err(Error::Parse("payload checksum mismatch".into()));
        }
        Ok(env)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json_pretty()?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Parses `1,1;1,2` style text: rows split on `;` or newlines, entries on
/// `,`, whitespace ignored, entries reduced mod p. The result may be
/// singular; callers decide whether that is an error.
pub fn parse_matrix(p: u32, text: &str) -> Result<MatrixFp> {
    let rows: Vec<Vec<i64>> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(',')
                .map(|e| {
                    let e = e.trim();
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("{e:?} is not an integer")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("no rows given".into()));
    }
    MatrixFp::from_rows(p, &rows)
}

/// Reads a matrix file: either `{"p": .., "rows": [[..]]}` JSON or the text
/// format, in which case `p` must be supplied.
pub fn read_matrix_file(path: &Path, p: Option<u32>) -> Result<MatrixFp> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let repr: MatrixRepr =
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(p) = p {
            if p != repr.p {
                return Err(Error::Parse(format!(
                    "file says p = {}, flag says p = {p}",
                    repr.p
                )));
            }
        }
        let rows: Vec<Vec<i64>> = repr
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        return MatrixFp::from_rows(repr.p, &rows);
    }
    let p = p.ok_or_else(|| Error::Parse("text matrix files need --p".into()))?;
    parse_matrix(p, &text)
}

/// Budget from [`BUDGET_ENV`], if set.
pub fn budget_from_env() -> Result<Option<usize>> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={v:?} is not a count"))),
        Err(_) => Ok(None),
    }
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
