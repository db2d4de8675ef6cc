//! On-disk cache of enumerated trace histograms.
//!
//! One JSON document per `(family, n, r, q)`. An entry written under a
//! different modulus is treated as absent. Writes go to a temporary file in
//! the same directory followed by a rename, so a reader never observes a
//! partial document; there is a single writer per process by construction.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::classical::Family;
use crate::dcsum::TraceHistogram;
use crate::error::{Error, Result};
use crate::gf2r::FieldDescriptor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub n: u32,
    pub r_coset: u32,
    pub family: String,
    pub q: u32,
    pub modulus: u32,
    /// β bit pattern to count, both as decimal strings.
    pub histogram: BTreeMap<String, String>,
}

impl CacheEntry {
    pub fn new(n: u32, r_coset: u32, family: Family, histogram: &TraceHistogram) -> Self {
        let field = histogram.field();
        CacheEntry {
            n,
            r_coset,
            family: family.name().to_string(),
            q: field.order(),
            modulus: field.modulus(),
            histogram: histogram_map(histogram),
        }
    }

    /// Rebuilds the histogram over `field`. Fails if the entry was written
    /// for another field or is missing a β.
    pub fn to_histogram(&self, field: &FieldDescriptor) -> Result<TraceHistogram> {
        if self.q != field.order() || self.modulus != field.modulus() {
            return Err(Error::Cache(format!(
                "entry is for q = {} with modulus {:#x}, requested modulus {:#x}",
                self.q,
                self.modulus,
                field.modulus()
            )));
        }
        let counts = (0..field.order())
            .map(|b| {
                let raw = self
                    .histogram
                    .get(&b.to_string())
                    .ok_or_else(|| Error::Cache(format!("missing count for beta = {b}")))?;
                raw.parse::<BigUint>().map_err(|e| Error::Cache(format!("bad count {raw:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TraceHistogram::from_counts(*field, counts))
    }
}

pub fn histogram_map(histogram: &TraceHistogram) -> BTreeMap<String, String> {
    histogram.iter().map(|(b, c)| (b.bits().to_string(), c.to_string())).collect()
}

pub struct HistogramCache {
    dir: PathBuf,
}

impl HistogramCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        HistogramCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, family: Family, n: u32, r: u32, q: u32) -> PathBuf {
        self.dir.join(format!("hist-{}-n{n}-r{r}-q{q}.json", family.name()))
    }

    /// The cached histogram, or `None` when there is no usable entry
    /// (missing, unreadable, or written under another modulus).
    pub fn load(&self, family: Family, n: u32, r: u32, field: &FieldDescriptor) -> Option<TraceHistogram> {
        let text = fs::read_to_string(self.path(family, n, r, field.order())).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.n != n || entry.r_coset != r || entry.family != family.name() {
            return None;
        }
        entry.to_histogram(field).ok()
    }

    pub fn store(&self, family: Family, n: u32, r: u32, histogram: &TraceHistogram) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry::new(n, r, family, histogram);
        let path = self.path(family, n, r, entry.q);
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
