//! On-disk cache of enumerated correspondences, with a versioned, hashed header.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hecke::GraphRecord;

pub const FORMAT_VERSION: u32 = 1;
/// Read by the CLI when no cache directory flag is given.
pub const CACHE_DIR_ENV: &str = "DRINHIDA_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub q: u64,
    pub varpi: String,
    pub m: usize,
    pub content_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub header: CacheHeader,
    pub body: GraphRecord,
}

pub fn content_hash(body: &GraphRecord) -> Result<String> {
    let bytes = serde_json::to_vec(body)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl CacheRecord {
    pub fn new(q: u64, varpi: &str, m: usize, body: GraphRecord) -> Result<Self> {
        let content_hash = content_hash(&body)?;
        Ok(CacheRecord { header: CacheHeader { format_version: FORMAT_VERSION, q, varpi: varpi.to_string(), m, content_hash }, body })
    }

    pub fn verify(&self) -> Result<()> {
        if self.header.format_version != FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "format version {} is stale (current {FORMAT_VERSION})",
                self.header.format_version
            )));
        }
        let h = content_hash(&self.body)?;
        if h != self.header.content_hash {
            return Err(Error::Cache(format!("content hash mismatch: header {} body {h}", self.header.content_hash)));
        }
        Ok(())
    }
}

pub fn file_name(q: u64, varpi: &str, m: usize) -> String {
    let v: String = varpi.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("hecke-q{q}-{v}-m{m}.json")
}

pub fn save(dir: &Path, record: &CacheRecord) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(record.header.q, &record.header.varpi, record.header.m));
    fs::write(&path, serde_json::to_vec_pretty(record)?)?;
    Ok(path)
}

/// `Ok(None)` when no cache file exists; an error when it exists but fails verification.
pub fn load(dir: &Path, q: u64, varpi: &str, m: usize) -> Result<Option<CacheRecord>> {
    let path = dir.join(file_name(q, varpi, m));
    if !path.exists() {
        return Ok(None);
    }
    let record: CacheRecord = serde_json::from_slice(&fs::read(&path)?)?;
    record.verify()?;
    if (record.header.q, record.header.varpi.as_str(), record.header.m) != (q, varpi, m) {
        return Err(Error::Cache("header parameters do not match the file name".into()));
    }
    Ok(Some(record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::place::parse_place;
    use crate::hecke::{build_correspondence, enumerate_moduli};

    fn record() -> CacheRecord {
        let corr = build_correspondence(&enumerate_moduli(&parse_place(3, "T").unwrap(), 2).unwrap()).unwrap();
        CacheRecord::new(3, "T", 2, corr.record()).unwrap()
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let rec = record();
        let path = save(dir.path(), &rec).unwrap();
        let back = load(dir.path(), 3, "T", 2).unwrap().unwrap();
        assert_eq!(back, rec);
        assert_eq!(serde_json::to_vec(&back).unwrap(), serde_json::to_vec(&rec).unwrap());
        let text = fs::read_to_string(&path).unwrap().replacen("\"ordinary\": true", "\"ordinary\": false", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(load(dir.path(), 3, "T", 2), Err(Error::Cache(_))));
        let mut stale = rec.clone();
        stale.header.format_version = 0;
        assert!(stale.verify().is_err());
        assert!(load(dir.path(), 3, "T", 3).unwrap().is_none());
    }
}
