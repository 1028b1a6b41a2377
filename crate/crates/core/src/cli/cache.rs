//! On-disk character cache. One file per `(family, rank, λ)`: a JSON header
//! line followed by `c₁ … c_n m` rows for the dominant weights.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::charcalc::{CharacterStore, DominantMultiplicities};
use crate::rootdata::{Family, GroupType, Weight};

pub const CACHE_ENV: &str = "SPINDLE_CACHE_DIR";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format: String,
    pub version: u32,
    pub family: Family,
    pub rank: usize,
    pub weight: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheEntry {
    pub header: CacheHeader,
    pub rows: DominantMultiplicities,
}

impl CacheEntry {
    pub fn new(group: GroupType, lambda: &Weight, rows: DominantMultiplicities) -> Self {
        CacheEntry {
            header: CacheHeader {
                format: "spindle-character".into(),
                version: FORMAT_VERSION,
                family: group.family,
                rank: group.rank,
                weight: lambda.0.clone(),
            },
            rows,
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string(&self.header).expect("header serializes");
        s.push('\n');
        for (w, m) in &self.rows {
            for c in &w.0 {
                s.push_str(&c.to_string());
                s.push(' ');
            }
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }

    /// `None` on any malformed line; callers then recompute.
    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let header: CacheHeader = serde_json::from_str(lines.next()?).ok()?;
        if header.version != FORMAT_VERSION || header.weight.len() != header.rank {
            return None;
        }
        let mut rows = DominantMultiplicities::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let nums: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse().ok())
                .collect::<Option<_>>()?;
            let (m, coords) = nums.split_last()?;
            if coords.len() != header.rank {
                return None;
            }
            rows.insert(Weight(coords.to_vec()), *m);
        }
        Some(CacheEntry { header, rows })
    }
}

pub fn slug(group: GroupType, lambda: &Weight) -> String {
    let coords: Vec<String> = lambda.0.iter().map(|c| c.to_string()).collect();
    format!("{}{}_{}.chr", group.family, group.rank, coords.join("-"))
}

/// `$SPINDLE_CACHE_DIR`, else the platform cache directory.
pub fn default_cache_dir() -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(d) if !d.is_empty() => Some(PathBuf::from(d)),
        _ => dirs::cache_dir().map(|d| d.join("spindle")),
    }
}

#[derive(Debug, Clone)]
pub struct DiskStore {
    dir: PathBuf,
}

impl DiskStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: GroupType, lambda: &Weight) -> PathBuf {
        self.dir.join(slug(group, lambda))
    }

    fn write_atomic(&self, path: &Path, body: &str) -> std::io::Result<()> {
        static SEQ: AtomicU64 = AtomicU64::new(0);
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

impl CharacterStore for DiskStore {
    fn load(&self, group: GroupType, lambda: &Weight) -> Option<DominantMultiplicities> {
        let text = fs::read_to_string(self.path_for(group, lambda)).ok()?;
        let entry = CacheEntry::parse(&text)?;
        let h = &entry.header;
        if h.family != group.family || h.rank != group.rank || h.weight != lambda.0 {
            log::warn!("cache entry for {group} {lambda} has a mismatched header; recomputing");
            return None;
        }
        Some(entry.rows)
    }

    fn store(&self, group: GroupType, lambda: &Weight, mults: &DominantMultiplicities) {
        let path = self.path_for(group, lambda);
        let body = CacheEntry::new(group, lambda, mults.clone()).render();
        if let Err(e) = self.write_atomic(&path, &body) {
            log::warn!("could not write {}: {e}", path.display());
        }
    }
}
