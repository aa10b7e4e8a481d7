//! JSON-lines stores: the oracle table of [`CountRecord`]s and the census
//! cache.
//!
//! Both files are append-only. A key is written once; writing it again with
//! the same value is a no-op and with a different value an error. Writers
//! take an exclusive lock on the file and re-read it before appending, so
//! concurrent processes never tear a line or overwrite each other.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chains::{sort_census, ChainComponent, PoincarePolynomial};
use crate::ffcount::CountRecord;
use crate::{Error, Result};

/// Bumping this invalidates every census cache written by older builds.
pub const CACHE_VERSION: &str = "cohiggs-census-1";

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

fn read_locked(file: &mut File, path: &Path) -> Result<String> {
    let mut s = String::new();
    file.seek(SeekFrom::Start(0)).map_err(|e| io_err(path, e))?;
    file.read_to_string(&mut s).map_err(|e| io_err(path, e))?;
    Ok(s)
}

fn open_locked(path: &Path) -> Result<File> {
    let file = OpenOptions::new()
        .read(true)
        .append(true)
        .create(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    file.lock().map_err(|e| io_err(path, e))?;
    Ok(file)
}

fn append_lines(file: &mut File, path: &Path, lines: &[String]) -> Result<()> {
    let mut buf = String::new();
    for l in lines {
        buf.push_str(l);
        buf.push('\n');
    }
    file.write_all(buf.as_bytes()).map_err(|e| io_err(path, e))?;
    file.flush().map_err(|e| io_err(path, e))
}

/// Oracle values keyed by component, as produced by `ffcount`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleTable {
    records: BTreeMap<String, CountRecord>,
}

impl OracleTable {
    pub fn new() -> Self {
        OracleTable::default()
    }

    pub fn from_records(records: impl IntoIterator<Item = CountRecord>) -> Result<Self> {
        let mut t = OracleTable::new();
        for r in records {
            t.insert(r)?;
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| io_err(path, e))?;
        let mut t = OracleTable::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| io_err(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CountRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Cache(format!("{}:{}: {e}", path.display(), n + 1)))?;
            t.insert(rec)?;
        }
        Ok(t)
    }

    /// Write-once insert; returns whether the record was new.
    pub fn insert(&mut self, rec: CountRecord) -> Result<bool> {
        match self.records.get(&rec.component) {
            Some(old) if *old == rec => Ok(false),
            Some(old) => Err(Error::Cache(format!(
                "conflicting oracle records for {}: {} vs {}",
                rec.component, old.poincare, rec.poincare
            ))),
            None => {
                self.records.insert(rec.component.clone(), rec);
                Ok(true)
            }
        }
    }

    pub fn get(&self, key: &str) -> Option<&PoincarePolynomial> {
        self.records.get(key).map(|r| &r.poincare)
    }

    pub fn record(&self, key: &str) -> Option<&CountRecord> {
        self.records.get(key)
    }

    pub fn records(&self) -> impl Iterator<Item = &CountRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends `rec` to the file unless an identical record is already there.
    /// Returns whether a line was written.
    pub fn append(path: &Path, rec: &CountRecord) -> Result<bool> {
        let mut file = open_locked(path)?;
        let mut table = OracleTable::new();
        for line in read_locked(&mut file, path)?.lines().filter(|l| !l.trim().is_empty()) {
            let old: CountRecord = serde_json::from_str(line).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            table.insert(old)?;
        }
        if !table.insert(rec.clone())? {
            return Ok(false);
        }
        let line = serde_json::to_string(rec).map_err(|e| Error::Cache(e.to_string()))?;
        append_lines(&mut file, path, &[line])?;
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Entry {
    Version { version: String },
    Component { r: i64, d: i64, component: ChainComponent },
    Complete { r: i64, d: i64, count: usize },
    Oracle { record: CountRecord },
}

impl Entry {
    fn key(&self) -> String {
        match self {
            Entry::Version { .. } => "version".into(),
            Entry::Component { r, d, component } => format!("component {r} {d} {}", component.key()),
            Entry::Complete { r, d, .. } => format!("complete {r} {d}"),
            Entry::Oracle { record } => format!("oracle {}", record.component),
        }
    }
}

/// Persistent census and oracle store, keyed by `(r, d, splittings)`.
#[derive(Debug)]
pub struct CensusCache {
    path: PathBuf,
    entries: BTreeMap<String, Entry>,
}

impl CensusCache {
    /// Opens or creates the cache. A file written under another
    /// [`CACHE_VERSION`] is discarded.
    pub fn open(path: &Path) -> Result<Self> {
        let mut file = open_locked(path)?;
        let text = read_locked(&mut file, path)?;
        let mut cache = CensusCache { path: path.to_path_buf(), entries: BTreeMap::new() };
        if !cache.absorb(&text)? {
            file.set_len(0).map_err(|e| io_err(path, e))?;
            cache.entries.clear();
        }
        if cache.entries.is_empty() {
            let header = Entry::Version { version: CACHE_VERSION.into() };
            append_lines(&mut file, path, &[serde_json::to_string(&header).expect("serializable")])?;
            cache.entries.insert(header.key(), header);
        }
        Ok(cache)
    }

    /// Parses a whole file. `Ok(false)` means it was written under another
    /// version (or is not a cache at all) and should be discarded.
    fn absorb(&mut self, text: &str) -> Result<bool> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let Some(first) = lines.next() else {
            return Ok(true);
        };
        match serde_json::from_str(first) {
            Ok(Entry::Version { version }) if version == CACHE_VERSION => {}
            _ => return Ok(false),
        }
        self.entries.insert("version".into(), Entry::Version { version: CACHE_VERSION.into() });
        for line in lines {
            let e: Entry = serde_json::from_str(line).map_err(|e| Error::Cache(e.to_string()))?;
            self.put(e)?;
        }
        Ok(true)
    }

    fn put(&mut self, e: Entry) -> Result<bool> {
        let key = e.key();
        match self.entries.get(&key) {
            Some(old) if *old == e => Ok(false),
            Some(_) => Err(Error::Cache(format!("conflicting cache entries for {key}"))),
            None => {
                self.entries.insert(key, e);
                Ok(true)
            }
        }
    }

    fn write(&mut self, new: Vec<Entry>) -> Result<()> {
        let mut file = open_locked(&self.path)?;
        let text = read_locked(&mut file, &self.path)?;
        if !self.absorb(&text)? {
            return Err(Error::Cache(format!("{} was replaced by another cache version", self.path.display())));
        }
        let mut lines = Vec::new();
        for e in new {
            let line = serde_json::to_string(&e).map_err(|e| Error::Cache(e.to_string()))?;
            if self.put(e)? {
                lines.push(line);
            }
        }
        append_lines(&mut file, &self.path, &lines)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// The stored census for `(r, d)`, if it was stored completely.
    pub fn census(&self, r: i64, d: i64) -> Option<Vec<ChainComponent>> {
        let count = match self.entries.get(&format!("complete {r} {d}")) {
            Some(Entry::Complete { count, .. }) => *count,
            _ => return None,
        };
        let prefix = format!("component {r} {d} ");
        let mut comps: Vec<ChainComponent> = self
            .entries
            .range(prefix.clone()..)
            .take_while(|(k, _)| k.starts_with(&prefix))
            .filter_map(|(_, e)| match e {
                Entry::Component { component, .. } => Some(component.clone()),
                _ => None,
            })
            .collect();
        sort_census(&mut comps);
        (comps.len() == count).then_some(comps)
    }

    pub fn store_census(&mut self, r: i64, d: i64, components: &[ChainComponent]) -> Result<()> {
        let mut new: Vec<Entry> =
            components.iter().map(|c| Entry::Component { r, d, component: c.clone() }).collect();
        new.push(Entry::Complete { r, d, count: components.len() });
        self.write(new)
    }

    pub fn store_record(&mut self, rec: &CountRecord) -> Result<()> {
        self.write(vec![Entry::Oracle { record: rec.clone() }])
    }

    pub fn oracle(&self) -> OracleTable {
        let recs = self.entries.values().filter_map(|e| match e {
            Entry::Oracle { record } => Some(record.clone()),
            _ => None,
        });
        OracleTable::from_records(recs).expect("entries are write-once")
    }
}
