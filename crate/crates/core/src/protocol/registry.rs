use std::collections::HashMap;
use std::path::Path;

use rand::{CryptoRng, RngCore};

use crate::algebra::{MasterSecret, PublicParams, G1, G2};
use crate::credentials::{ca_issue_credential, entity_keygen, verify_credential, Credential, EntityKeys, Role};
use crate::error::Error;
use crate::transport::{decode_exact, AppendLog, Decode, Encode, MessageType, Reader, Writer};

/// What the CA stores per registered entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryRecord {
    pub id: String,
    pub role: Role,
    pub public: G1,
    pub public_g2: Option<G2>,
    pub credential: Credential,
}

/// An entity's own view after registration: its keys and CA credential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registered {
    pub id: String,
    pub keys: EntityKeys,
    pub credential: Credential,
}

impl Registered {
    pub fn record(&self) -> RegistryRecord {
        RegistryRecord {
            id: self.id.clone(),
            role: self.keys.role(),
            public: *self.keys.public(),
            public_g2: self.keys.public_g2().copied(),
            credential: self.credential,
        }
    }
}

/// Identifier and key directory. Identifiers and public keys are both unique.
#[derive(Debug, Default)]
pub struct Registry {
    records: Vec<RegistryRecord>,
    by_id: HashMap<String, usize>,
    by_key: HashMap<Vec<u8>, usize>,
    log: Option<AppendLog>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Opens a persistent registry, replaying every stored record.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, Error> {
        let (log, raw) = AppendLog::open(path, MessageType::RegistryLog)?;
        let mut reg = Registry::new();
        for bytes in raw {
            reg.index(decode_exact(&bytes)?)?;
        }
        reg.log = Some(log);
        Ok(reg)
    }

    fn check_unique(&self, rec: &RegistryRecord) -> Result<(), Error> {
        if self.by_id.contains_key(&rec.id) {
            return Err(Error::DuplicateId(rec.id.clone()));
        }
        if let Some(&i) = self.by_key.get(&rec.public.encode_to_vec()) {
            return Err(Error::DuplicateKey(self.records[i].id.clone()));
        }
        Ok(())
    }

    fn index(&mut self, rec: RegistryRecord) -> Result<(), Error> {
        self.check_unique(&rec)?;
        let i = self.records.len();
        self.by_id.insert(rec.id.clone(), i);
        self.by_key.insert(rec.public.encode_to_vec(), i);
        self.records.push(rec);
        Ok(())
    }

    pub fn insert(&mut self, rec: RegistryRecord) -> Result<(), Error> {
        self.check_unique(&rec)?;
        if let Some(log) = &mut self.log {
            log.append(&rec.encode_to_vec())?;
        }
        self.index(rec)
    }

    pub fn get(&self, id: &str) -> Option<&RegistryRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn find_by_key(&self, public: &G1) -> Option<&RegistryRecord> {
        self.by_key.get(&public.encode_to_vec()).map(|&i| &self.records[i])
    }

    /// The first-registered entity holding `role`.
    pub fn first_with_role(&self, role: Role) -> Option<&RegistryRecord> {
        self.records.iter().find(|r| r.role == role)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RegistryRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Runs one registration: the entity generates keys, the CA issues a
/// credential, the entity checks it, and the CA records the entity.
pub fn register<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    msk: &MasterSecret,
    registry: &mut Registry,
    role: Role,
    id: &str,
    rng: &mut R,
) -> Result<Registered, Error> {
    if id.is_empty() {
        return Err(Error::InvalidIdentifier(id.to_string()));
    }
    if registry.get(id).is_some() {
        return Err(Error::DuplicateId(id.to_string()));
    }
    let keys = entity_keygen(pp, role, rng);
    let credential = ca_issue_credential(pp, msk, keys.public(), rng)?;
    if !verify_credential(pp, keys.public(), &credential) {
        return Err(Error::InvalidCredential);
    }
    let entity = Registered { id: id.to_string(), keys, credential };
    registry.insert(entity.record())?;
    Ok(entity)
}

impl Encode for RegistryRecord {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.id);
        w.field(&self.role);
        w.field(&self.public);
        w.field(&self.public_g2);
        w.field(&self.credential);
    }
}

impl Decode for RegistryRecord {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(RegistryRecord {
            id: r.field()?,
            role: r.field()?,
            public: r.field()?,
            public_g2: r.field()?,
            credential: r.field()?,
        })
    }
}

impl Encode for Registered {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.id);
        w.field(&self.keys);
        w.field(&self.credential);
    }
}

impl Decode for Registered {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Registered { id: r.field()?, keys: r.field()?, credential: r.field()? })
    }
}
