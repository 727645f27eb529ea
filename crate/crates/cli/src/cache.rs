use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

static COMPUTED: AtomicU64 = AtomicU64::new(0);

/// How many commands have been computed rather than served from the cache,
/// process-wide.
pub fn compute_count() -> u64 {
    COMPUTED.load(Ordering::SeqCst)
}

pub(crate) fn record_compute() {
    COMPUTED.fetch_add(1, Ordering::SeqCst);
}

/// Rendered command outputs stored under `<dir>/results/<sha256>.out`.
#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: &Path) -> Self {
        ResultCache {
            dir: dir.join("results"),
        }
    }

    /// SHA-256 of the tool version and the canonical command description.
    pub fn key(canonical: &str) -> String {
        let mut h = Sha256::new();
        h.update(crate::TOOL_VERSION.as_bytes());
        h.update([0]);
        h.update(canonical.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        fs::read(self.path(key)).ok()
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn put(&self, key: &str, bytes: &[u8]) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(tmp, self.path(key))
    }
}
