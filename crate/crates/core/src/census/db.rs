//! File-backed store of count records, one JSON object per line.
//!
//! The store is append-only from the caller's point of view: inserting a
//! record that is already present is a no-op, inserting one that disagrees
//! with a stored count is a hard error. Writes go to a temporary file that
//! is renamed over the original, so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{CountRecord, Engine};
use crate::error::{Error, Result};
use crate::strata::{Component, Stratum};

#[derive(Serialize, Deserialize)]
struct Line {
    stratum: String,
    n: usize,
    pairs: String,
    weighted_num: String,
    weighted_den: String,
    labeled_factor: u64,
    engine: Engine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component: Option<Component>,
    created_at: String,
}

fn bad(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::CacheConflict(format!("{}:{}: {}", path.display(), line, msg.into()))
}

impl Line {
    fn from_record(r: &CountRecord) -> Self {
        Line {
            stratum: r.stratum.to_string(),
            n: r.n,
            pairs: r.pairs.to_string(),
            weighted_num: r.weighted.numer().to_string(),
            weighted_den: r.weighted.denom().to_string(),
            labeled_factor: r.labeled_factor,
            engine: r.engine,
            component: r.component,
            created_at: r.created_at.clone(),
        }
    }

    fn into_record(self, path: &Path, line: usize) -> Result<CountRecord> {
        let stratum: Stratum = self
            .stratum
            .parse()
            .map_err(|e| bad(path, line, format!("stratum: {e}")))?;
        let int = |s: &str, what: &str| -> Result<BigInt> {
            s.parse()
                .map_err(|_| bad(path, line, format!("{what} is not an integer")))
        };
        let pairs = int(&self.pairs, "pairs")?;
        let num = int(&self.weighted_num, "weighted_num")?;
        let den = int(&self.weighted_den, "weighted_den")?;
        if den == BigInt::from(0) {
            return Err(bad(path, line, "zero denominator"));
        }
        let rec = CountRecord::new(&stratum, self.n, pairs, self.engine, self.component);
        if rec.weighted != BigRational::new(num, den) {
            return Err(bad(path, line, "weighted count disagrees with pairs/n!"));
        }
        if rec.labeled_factor != self.labeled_factor {
            return Err(bad(path, line, "labeled_factor disagrees with stratum"));
        }
        Ok(CountRecord {
            created_at: self.created_at,
            ..rec
        })
    }
}

/// Count records for one or more strata, persisted as JSON lines.
#[derive(Debug)]
pub struct CensusDB {
    path: PathBuf,
    records: Vec<CountRecord>,
}

impl CensusDB {
    /// Opens (or starts) the store at `path`, validating every line.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut db = CensusDB {
            path: path.clone(),
            records: Vec::new(),
        };
        if !path.exists() {
            return Ok(db);
        }
        let text = fs::read_to_string(&path)?;
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let line: Line =
                serde_json::from_str(raw).map_err(|e| bad(&path, i + 1, e.to_string()))?;
            let rec = line.into_record(&path, i + 1)?;
            if !db
                .admit(&rec)
                .map_err(|e| bad(&path, i + 1, e.to_string()))?
            {
                db.records.push(rec);
            }
        }
        Ok(db)
    }

    /// The store for `st` under a cache directory.
    pub fn for_stratum(dir: &Path, st: &Stratum) -> Result<Self> {
        let name = if st.is_degenerate() {
            "torus".to_string()
        } else {
            st.to_string().replace(',', "_")
        };
        Self::open(dir.join(format!("stratum-{name}.jsonl")))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn records(&self) -> &[CountRecord] {
        &self.records
    }

    /// `Ok(true)` if an identical count is already stored, `Ok(false)` if
    /// the record is new, an error if it contradicts a stored count. Counts
    /// from different engines for the same key must agree.
    fn admit(&self, rec: &CountRecord) -> Result<bool> {
        let mut dup = false;
        for r in &self.records {
            if r.stratum != rec.stratum || r.n != rec.n || r.component != rec.component {
                continue;
            }
            if r.pairs != rec.pairs {
                return Err(Error::CacheConflict(format!(
                    "H({}) N={}{}: {} count {} vs {} count {}",
                    rec.stratum,
                    rec.n,
                    rec.component.map(|c| format!(" {c}")).unwrap_or_default(),
                    r.engine,
                    r.pairs,
                    rec.engine,
                    rec.pairs
                )));
            }
            dup |= r.engine == rec.engine;
        }
        Ok(dup)
    }

    pub fn get(
        &self,
        st: &Stratum,
        n: usize,
        engine: Engine,
        component: Option<Component>,
    ) -> Option<&CountRecord> {
        self.records.iter().find(|r| {
            &r.stratum == st && r.n == n && r.engine == engine && r.component == component
        })
    }

    /// Any stored total count for `(st, n)`, whichever engine produced it.
    pub fn get_any(&self, st: &Stratum, n: usize) -> Option<&CountRecord> {
        self.records
            .iter()
            .find(|r| &r.stratum == st && r.n == n && r.component.is_none())
    }

    /// Adds records and rewrites the file atomically. Returns how many were
    /// new. Nothing is written if any record conflicts.
    pub fn insert_all(&mut self, recs: &[CountRecord]) -> Result<usize> {
        let mut added = 0;
        let before = self.records.len();
        for rec in recs {
            match self.admit(rec) {
                Ok(true) => {}
                Ok(false) => {
                    self.records.push(rec.clone());
                    added += 1;
                }
                Err(e) => {
                    self.records.truncate(before);
                    return Err(e);
                }
            }
        }
        if added > 0 {
            self.flush()?;
        }
        Ok(added)
    }

    pub fn insert(&mut self, rec: &CountRecord) -> Result<bool> {
        Ok(self.insert_all(std::slice::from_ref(rec))? == 1)
    }

    fn flush(&self) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp)?;
            for r in &self.records {
                serde_json::to_writer(&mut f, &Line::from_record(r))?;
                f.write_all(b"\n")?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}
