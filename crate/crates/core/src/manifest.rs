//! Run manifests: the command line of a run and digests of what it read and
//! wrote, enough to replay it and compare outputs byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, defaults included.
    pub args: Vec<String>,
    pub seed: u64,
    pub tool_version: String,
    /// Path to hex sha256.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&s)
    }

    /// Compares the recorded output digests with the files on disk.
    pub fn verify_outputs(&self) -> Result<()> {
        for (path, digest) in &self.outputs {
            let now = file_digest(Path::new(path))?;
            if &now != digest {
                return Err(Error::ReplayMismatch(format!("{path}: expected {digest}, got {now}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn detects_changed_output() {
        let dir = std::env::temp_dir().join(format!("cluster-lab-manifest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("out.json");
        std::fs::write(&out, "{}").unwrap();
        let key = out.to_string_lossy().into_owned();
        let m = RunManifest {
            command: "gen".into(),
            args: vec!["gen".into()],
            seed: 0,
            tool_version: "0".into(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::from([(key, file_digest(&out).unwrap())]),
        };
        m.verify_outputs().unwrap();
        assert_eq!(RunManifest::from_json(&m.to_json()).unwrap(), m);
        std::fs::write(&out, "{ }").unwrap();
        assert!(matches!(m.verify_outputs(), Err(Error::ReplayMismatch(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
