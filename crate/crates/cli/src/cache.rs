//! On-disk result cache keyed by the literal word (no braid normalization).

use std::fs;
use std::path::{Path, PathBuf};

use kh_core::homology::KhResult;
use kh_core::BraidWord;
use sha2::{Digest, Sha256};

use crate::{CliError, Result};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        Self { dir: dir.as_ref().to_path_buf() }
    }

    /// SHA-256 of strand count, letters and probe primes.
    pub fn key(word: &BraidWord, primes: &[u64]) -> String {
        let letters: Vec<String> = word.letters().iter().map(i32::to_string).collect();
        let primes: Vec<String> = primes.iter().map(u64::to_string).collect();
        let canonical = format!("kh-v1|{}|{}|{}", word.strands(), letters.join(","), primes.join(","));
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<KhResult>> {
        let path = self.path(key);
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|source| CliError::Cache { path, source }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(CliError::Io { path, source }),
        }
    }

    /// Writes through a temporary file so readers never see half an entry.
    pub fn store(&self, key: &str, result: &KhResult) -> Result<()> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let path = self.path(key);
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, result.to_json()).map_err(io(&tmp))?;
        fs::rename(&tmp, &path).map_err(io(&path))
    }
}
