use std::fs;
use std::path::{Path, PathBuf};

use asso::algebra::PublicParams;
use asso::protocol::{Registered, Registry};
use asso::transport::{decode_envelope, encode_envelope, peek_type, Decode, Encode, MessageType};
use asso::Error;
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

/// Base64 JSON wrapper around a binary envelope.
#[derive(Serialize, Deserialize)]
pub struct Armor {
    pub format: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub data: String,
}

pub const ARMOR_FORMAT: &str = "asso-armor-v1";

pub fn type_name(ty: MessageType) -> String {
    format!("{ty:?}")
}

pub fn armor(bytes: &[u8]) -> Result<String, Error> {
    let a = Armor { format: ARMOR_FORMAT.into(), ty: type_name(peek_type(bytes)?), data: STANDARD.encode(bytes) };
    Ok(serde_json::to_string_pretty(&a).expect("armor serializes") + "\n")
}

/// File bytes with any armor removed.
pub fn read_raw(path: &Path) -> Result<Vec<u8>, Error> {
    let bytes = fs::read(path)?;
    if bytes.first() != Some(&b'{') {
        return Ok(bytes);
    }
    let a: Armor = serde_json::from_slice(&bytes).map_err(|e| Error::Decode(format!("armor: {e}")))?;
    if a.format != ARMOR_FORMAT {
        return Err(Error::Decode(format!("armor format {:?}", a.format)));
    }
    STANDARD.decode(a.data.trim()).map_err(|e| Error::Decode(format!("armor: {e}")))
}

pub fn read<T: Decode>(path: &Path, ty: MessageType) -> Result<T, Error> {
    decode_envelope(ty, &read_raw(path)?)
}

pub struct Out {
    pub armor: bool,
}

impl Out {
    pub fn write<T: Encode + ?Sized>(&self, path: &Path, ty: MessageType, body: &T) -> Result<(), Error> {
        let bytes = encode_envelope(ty, body);
        if self.armor {
            fs::write(path, armor(&bytes)?)?;
        } else {
            fs::write(path, bytes)?;
        }
        Ok(())
    }
}

pub fn params(path: &Path) -> Result<PublicParams, Error> {
    read(path, MessageType::PublicParams)
}

pub fn keys(path: &Path) -> Result<Registered, Error> {
    read(path, MessageType::EntitySecret)
}

/// Opens an existing registry; a missing file is an error rather than a new registry.
pub fn registry(path: &Path) -> Result<Registry, Error> {
    if !path.exists() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("registry {} not found", path.display()),
        )));
    }
    Registry::open(path)
}

/// `dir/name.ext` next to `base`.
pub fn sibling(base: &Path, name: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new("")).join(name)
}

pub fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}
