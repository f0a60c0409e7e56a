//! On-disk cache of `kks{λ}` expansions.
//!
//! A plain text file: one header line, then one entry per line,
//!
//! ```text
//! kkschur-cache v1 k=4
//! 3,3<TAB>h3^2;-h2 h4;...
//! ```
//!
//! New entries are appended. Lines that fail to parse, or whose leading
//! term is not `h_λ` with coefficient one, are skipped with a warning and the
//! file is rewritten cleanly on the next sync.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::warn;

use crate::engine::ExpansionTable;
use crate::error::Result;
use crate::hring::HPolynomial;
use crate::partition::Partition;

const MAGIC: &str = "kkschur-cache";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug)]
pub struct CacheFile {
    path: PathBuf,
    k: usize,
    on_disk: HashSet<Partition>,
    rewrite: bool,
    skipped: usize,
}

fn header(k: usize) -> String {
    format!("{} v{} k={}", MAGIC, FORMAT_VERSION, k)
}

fn entry_line(lambda: &Partition, poly: &HPolynomial) -> String {
    format!("{}\t{}", lambda, poly.text_lines().join(";"))
}

fn parse_entry(line: &str) -> Option<(Partition, HPolynomial)> {
    let (shape, terms) = line.split_once('\t')?;
    let lambda: Partition = shape.trim().parse().ok()?;
    let poly = HPolynomial::parse_lines(terms.split(';')).ok()?;
    Some((lambda, poly))
}

impl CacheFile {
    /// Reads `path` (if it exists) into `table`.
    pub fn load(path: impl AsRef<Path>, table: &ExpansionTable) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let k = table.k();
        let mut cache = CacheFile { path, k, on_disk: HashSet::new(), rewrite: false, skipped: 0 };
        let file = match File::open(&cache.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                cache.rewrite = true;
                return Ok(cache);
            }
            Err(e) => return Err(e.into()),
        };
        let mut lines = BufReader::new(file).lines();
        match lines.next().transpose()? {
            Some(h) if h.trim_end() == header(k) => {}
            other => {
                warn!(
                    "cache {} has header {:?}, expected {:?}; it will be rewritten",
                    cache.path.display(),
                    other.unwrap_or_default(),
                    header(k)
                );
                cache.rewrite = true;
                return Ok(cache);
            }
        }
        for (n, line) in lines.enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    warn!("cache {}: unreadable line {}: {}", cache.path.display(), n + 2, e);
                    cache.skipped += 1;
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let accepted = match parse_entry(&line) {
                Some((lambda, poly)) => table.insert_preloaded(lambda.clone(), poly).then_some(lambda),
                None => None,
            };
            match accepted {
                Some(lambda) => {
                    cache.on_disk.insert(lambda);
                }
                None => {
                    warn!("cache {}: skipping corrupt entry on line {}", cache.path.display(), n + 2);
                    cache.skipped += 1;
                }
            }
        }
        if cache.skipped > 0 {
            cache.rewrite = true;
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Entries accepted from disk.
    pub fn loaded(&self) -> usize {
        self.on_disk.len()
    }

    /// Lines rejected while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Writes every table entry not yet on disk and returns how many were
    /// written.
    pub fn sync(&mut self, table: &ExpansionTable) -> Result<usize> {
        debug_assert_eq!(table.k(), self.k);
        let entries = table.entries();
        if self.rewrite {
            let tmp = self.path.with_extension("tmp");
            {
                let mut w = BufWriter::new(File::create(&tmp)?);
                writeln!(w, "{}", header(self.k))?;
                for (lambda, poly) in &entries {
                    writeln!(w, "{}", entry_line(lambda, poly))?;
                }
                w.flush()?;
            }
            fs::rename(&tmp, &self.path)?;
            self.on_disk = entries.iter().map(|(l, _)| l.clone()).collect();
            self.rewrite = false;
            return Ok(entries.len());
        }
        let fresh: Vec<_> = entries.iter().filter(|(l, _)| !self.on_disk.contains(l)).collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut w = BufWriter::new(OpenOptions::new().append(true).open(&self.path)?);
        for (lambda, poly) in &fresh {
            writeln!(w, "{}", entry_line(lambda, poly))?;
        }
        w.flush()?;
        for (lambda, _) in &fresh {
            self.on_disk.insert(lambda.clone());
        }
        Ok(fresh.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::LevelContext;

    fn table(k: usize) -> ExpansionTable {
        ExpansionTable::new(LevelContext::new(k).unwrap())
    }

    fn dump(t: &ExpansionTable) -> Vec<String> {
        t.entries().iter().map(|(l, p)| entry_line(l, p)).collect()
    }

    #[test]
    fn round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k3.cache");
        let first = table(3);
        first.ensure_size(6).unwrap();
        let mut c = CacheFile::load(&path, &first).unwrap();
        c.sync(&first).unwrap();

        let second = table(3);
        let c2 = CacheFile::load(&path, &second).unwrap();
        assert_eq!(c2.skipped(), 0);
        assert_eq!(c2.loaded(), first.entries().len());
        second.ensure_size(6).unwrap();
        assert_eq!(dump(&first), dump(&second));
        assert_eq!(second.stats(), (0, 0));
    }

    #[test]
    fn appends_only_new_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c");
        let t = table(2);
        t.ensure_size(3).unwrap();
        let mut c = CacheFile::load(&path, &t).unwrap();
        c.sync(&t).unwrap();
        assert_eq!(c.sync(&t).unwrap(), 0);
        t.ensure_size(5).unwrap();
        let before = fs::read_to_string(&path).unwrap();
        let written = c.sync(&t).unwrap();
        let after = fs::read_to_string(&path).unwrap();
        assert!(written > 0);
        assert!(after.starts_with(&before));
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c");
        fs::write(&path, format!("{}\n2\th2\n1,1\tgarbage\n", header(2))).unwrap();
        let t = table(2);
        let mut c = CacheFile::load(&path, &t).unwrap();
        assert_eq!((c.loaded(), c.skipped()), (1, 1));
        c.sync(&t).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(!text.contains("garbage"));
    }

    #[test]
    fn wrong_leading_term_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c");
        fs::write(&path, format!("{}\n2\t2 * h2\n", header(2))).unwrap();
        let c = CacheFile::load(&path, &table(2)).unwrap();
        assert_eq!((c.loaded(), c.skipped()), (0, 1));
    }

    #[test]
    fn level_mismatch_rewrites() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c");
        let t3 = table(3);
        t3.ensure_size(3).unwrap();
        CacheFile::load(&path, &t3).unwrap().sync(&t3).unwrap();
        let t2 = table(2);
        let mut c = CacheFile::load(&path, &t2).unwrap();
        assert_eq!(c.loaded(), 0);
        c.sync(&t2).unwrap();
        assert!(fs::read_to_string(&path).unwrap().starts_with(&header(2)));
    }
}
