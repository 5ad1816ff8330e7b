//! On-disk cache of spinor-partitioned genus tables, keyed by the SHA-256 of the reduced seed.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ternary_core::genus::{enumerate_genus, spinor_partition, SpinorPartition};
use ternary_core::{reduce, Result, TernaryForm};

pub const CACHE_ENV: &str = "TERNARY_CACHE_DIR";
const FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    format: u32,
    seed: TernaryForm,
    partition: SpinorPartition,
}

pub struct GenusCache {
    dir: Option<PathBuf>,
}

impl GenusCache {
    pub fn new(enabled: bool) -> Self {
        let dir = enabled.then(default_dir).flatten();
        GenusCache { dir }
    }

    /// The genus of `f` with its spinor partition, from disk when possible.
    pub fn partition(&self, f: &TernaryForm) -> Result<SpinorPartition> {
        let seed = reduce(f);
        let path = self
            .dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", key(&seed))));
        if let Some(p) = &path {
            if let Some(hit) = load(p, &seed) {
                return Ok(hit);
            }
        }
        let partition = spinor_partition(&enumerate_genus(&seed))?;
        if let Some(p) = &path {
            let _ = store(
                p,
                &Entry {
                    format: FORMAT,
                    seed,
                    partition: partition.clone(),
                },
            );
        }
        Ok(partition)
    }
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("ternary"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("ternary"))
}

pub fn key(seed: &TernaryForm) -> String {
    let digest = Sha256::digest(seed.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &PathBuf, seed: &TernaryForm) -> Option<SpinorPartition> {
    let text = fs::read_to_string(path).ok()?;
    let e: Entry = serde_json::from_str(&text).ok()?;
    (e.format == FORMAT && e.seed == *seed && e.partition.table.index_of_reduced(seed).is_some())
        .then_some(e.partition)
}

fn store(path: &PathBuf, entry: &Entry) -> std::io::Result<()> {
    let dir = path.parent().expect("cache files live in a directory");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serde_json::to_string(entry)?.as_bytes())?;
    tmp.persist(path)?;
    Ok(())
}
