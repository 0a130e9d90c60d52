use std::collections::HashSet;
use std::path::Path;
use std::sync::Mutex;

use crate::error::Error;
use crate::transport::{AppendLog, MessageType, Transcript};

use super::AuthTag;

/// Canonical bytes of a tag's `(e, w, s, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint(Vec<u8>);

impl Fingerprint {
    pub fn of(tag: &AuthTag) -> Self {
        Fingerprint(Transcript::new().push(&tag.e).push(&tag.w).push(&tag.serial).push(&tag.z).as_bytes().to_vec())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    AlreadyPresent,
}

#[derive(Debug, Default)]
struct Inner {
    seen: HashSet<Fingerprint>,
    log: Option<AppendLog>,
}

/// A verifier's table of spent tags. Inserts are atomic and, when backed by
/// a file, durable before `Inserted` is returned.
#[derive(Debug, Default)]
pub struct SpendLedger {
    inner: Mutex<Inner>,
}

impl SpendLedger {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, Error> {
        let (log, records) = AppendLog::open(path, MessageType::LedgerLog)?;
        let seen = records.into_iter().map(Fingerprint).collect();
        Ok(SpendLedger { inner: Mutex::new(Inner { seen, log: Some(log) }) })
    }

    pub fn insert_if_absent(&self, fp: &Fingerprint) -> Result<InsertOutcome, Error> {
        let mut inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        if inner.seen.contains(fp) {
            return Ok(InsertOutcome::AlreadyPresent);
        }
        if let Some(log) = &mut inner.log {
            log.append(fp.as_bytes())?;
        }
        inner.seen.insert(fp.clone());
        Ok(InsertOutcome::Inserted)
    }

    pub fn contains(&self, fp: &Fingerprint) -> bool {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).seen.contains(fp)
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of every fingerprint, in no particular order.
    pub fn fingerprints(&self) -> Vec<Fingerprint> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).seen.iter().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::{Arc, Barrier};

    fn fp(b: u8) -> Fingerprint {
        Fingerprint(vec![b; 8])
    }

    #[test]
    fn insert_semantics() {
        let l = SpendLedger::in_memory();
        assert_eq!(l.insert_if_absent(&fp(1)).unwrap(), InsertOutcome::Inserted);
        assert_eq!(l.insert_if_absent(&fp(1)).unwrap(), InsertOutcome::AlreadyPresent);
        assert_eq!(l.insert_if_absent(&fp(2)).unwrap(), InsertOutcome::Inserted);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn concurrent_inserts_admit_one() {
        let dir = tempfile::tempdir().unwrap();
        let l = Arc::new(SpendLedger::open(dir.path().join("ledger.V.log")).unwrap());
        let barrier = Arc::new(Barrier::new(16));
        let handles: Vec<_> = (0..16)
            .map(|_| {
                let (l, b) = (l.clone(), barrier.clone());
                std::thread::spawn(move || {
                    b.wait();
                    l.insert_if_absent(&fp(9)).unwrap()
                })
            })
            .collect();
        let wins = handles.into_iter().map(|h| h.join().unwrap()).filter(|o| *o == InsertOutcome::Inserted).count();
        assert_eq!(wins, 1);
    }

    #[test]
    fn file_replay_matches_memory() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.V1.log");
        let l = SpendLedger::open(&path).unwrap();
        for b in 0..10 {
            l.insert_if_absent(&fp(b)).unwrap();
        }
        l.insert_if_absent(&fp(3)).unwrap();
        let mut before = l.fingerprints();
        drop(l);
        let l = SpendLedger::open(&path).unwrap();
        let mut after = l.fingerprints();
        before.sort_by(|a, b| a.0.cmp(&b.0));
        after.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(before, after);
        assert_eq!(l.insert_if_absent(&fp(4)).unwrap(), InsertOutcome::AlreadyPresent);
    }

    #[cfg(unix)]
    #[test]
    fn storage_failure_is_not_already_present() {
        // /dev/full accepts opens but fails every write with ENOSPC.
        let full = Path::new("/dev/full");
        if !full.exists() {
            return;
        }
        let file = std::fs::OpenOptions::new().write(true).open(full).unwrap();
        let log = AppendLog::from_file_for_tests(file, full);
        let l = SpendLedger { inner: Mutex::new(Inner { seen: HashSet::new(), log: Some(log) }) };
        assert!(matches!(l.insert_if_absent(&fp(1)), Err(Error::Io(_))));
        assert!(!l.contains(&fp(1)));
    }
}
