use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Error;

use super::envelope::{peek_type, MessageType, ENVELOPE_HEADER_LEN, MAGIC, VERSION};

const CHECKSUM_LEN: usize = 8;

/// Append-only file of checksummed records behind an envelope header.
///
/// Record layout: `len: u32 BE || payload || SHA-256(payload)[..8]`.
/// A partially written final record (a crash before the append returned) is
/// discarded on open; a complete record with a bad checksum is an error.
#[derive(Debug)]
pub struct AppendLog {
    file: File,
    path: PathBuf,
}

fn checksum(payload: &[u8]) -> [u8; CHECKSUM_LEN] {
    Sha256::digest(payload)[..CHECKSUM_LEN].try_into().unwrap()
}

impl AppendLog {
    /// Opens (creating if needed) and replays the log.
    pub fn open(path: impl AsRef<Path>, kind: MessageType) -> Result<(Self, Vec<Vec<u8>>), Error> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(&path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        if bytes.is_empty() {
            let mut header = Vec::with_capacity(ENVELOPE_HEADER_LEN);
            header.extend_from_slice(MAGIC);
            header.extend_from_slice(&VERSION.to_be_bytes());
            header.push(kind as u8);
            file.write_all(&header)?;
            file.sync_data()?;
            return Ok((AppendLog { file, path }, Vec::new()));
        }

        let found = peek_type(&bytes)?;
        if found != kind {
            return Err(Error::WrongMessageType { expected: kind as u8, found: found as u8 });
        }

        let mut records = Vec::new();
        let mut pos = ENVELOPE_HEADER_LEN;
        let mut valid_end = pos;
        while pos < bytes.len() {
            if bytes.len() - pos < 4 {
                break;
            }
            let len = u32::from_be_bytes(bytes[pos..pos + 4].try_into().unwrap()) as usize;
            let end = pos + 4 + len + CHECKSUM_LEN;
            if end > bytes.len() {
                break;
            }
            let payload = &bytes[pos + 4..pos + 4 + len];
            if bytes[pos + 4 + len..end] != checksum(payload) {
                return Err(Error::CorruptLog { path: path.display().to_string(), offset: pos as u64 });
            }
            records.push(payload.to_vec());
            pos = end;
            valid_end = end;
        }
        if valid_end < bytes.len() {
            file.set_len(valid_end as u64)?;
            file.sync_data()?;
        }
        file.seek(SeekFrom::End(0))?;
        Ok((AppendLog { file, path }, records))
    }

    /// Appends one record and syncs it to disk before returning.
    pub fn append(&mut self, payload: &[u8]) -> Result<(), Error> {
        let mut rec = Vec::with_capacity(4 + payload.len() + CHECKSUM_LEN);
        rec.extend_from_slice(&(payload.len() as u32).to_be_bytes());
        rec.extend_from_slice(payload);
        rec.extend_from_slice(&checksum(payload));
        self.file.write_all(&rec)?;
        self.file.sync_data()?;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    #[cfg(test)]
    pub(crate) fn from_file_for_tests(file: File, path: &Path) -> Self {
        AppendLog { file, path: path.to_path_buf() }
    }
}
