//! Versioned on-disk spectrum format.
//!
//! ```text
//! # steklov-spectrum 1
//! # meta {"source":{...},"cutoff":100.0,"truth":[6.283185307179586],"seed":null}
//! 0.0000000000000000e0
//! 1.0000000000000000e0
//! ...
//! ```
//!
//! One value per line with 17 significant digits, so every `f64` survives a
//! round trip bit for bit.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::SortedSpectrum;
use crate::spectra::SourceSpec;

pub const MAGIC: &str = "steklov-spectrum";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub source: Option<SourceSpec>,
    pub cutoff: Option<f64>,
    /// Boundary lengths of the surface the spectrum came from, descending.
    pub truth: Option<Vec<f64>>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFile {
    pub meta: SpectrumMeta,
    pub values: SortedSpectrum,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

impl SpectrumFile {
    pub fn new(meta: SpectrumMeta, values: SortedSpectrum) -> Self {
        Self { meta, values }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(24 * (self.values.len() + 4));
        let meta = serde_json::to_string(&self.meta).expect("metadata is always serializable");
        writeln!(out, "# {MAGIC} {FORMAT_VERSION}").unwrap();
        writeln!(out, "# meta {meta}").unwrap();
        for v in self.values.values() {
            writeln!(out, "{v:.16e}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| format_err("empty file"))?;
        let version = header
            .trim()
            .strip_prefix("# ")
            .and_then(|h| h.strip_prefix(MAGIC))
            .ok_or_else(|| format_err(format!("missing '# {MAGIC} <version>' header")))?;
        let version: u32 = version
            .trim()
            .parse()
            .map_err(|_| format_err(format!("bad version '{}'", version.trim())))?;
        if version != FORMAT_VERSION {
            return Err(format_err(format!("unsupported format version {version}")));
        }

        let mut meta = None;
        let mut values = Vec::new();
        for (n, line) in lines {
            let line = line.trim();
            if let Some(json) = line.strip_prefix("# meta ") {
                if meta.is_some() {
                    return Err(format_err(format!("line {}: duplicate meta line", n + 1)));
                }
                meta =
                    Some(serde_json::from_str(json).map_err(|e| format_err(format!("line {}: bad meta: {e}", n + 1)))?);
            } else if line.starts_with('#') {
                continue;
            } else {
                let v: f64 = line
                    .parse()
                    .map_err(|_| format_err(format!("line {}: not a number: '{line}'", n + 1)))?;
                values.push(v);
            }
        }
        let meta = meta.ok_or_else(|| format_err("missing meta line"))?;
        let values = SortedSpectrum::new(values).map_err(|e| format_err(e.to_string()))?;
        Ok(Self { meta, values })
    }
}
