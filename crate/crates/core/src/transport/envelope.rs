use crate::error::Error;

use super::{decode_exact, Decode, Encode};

pub const MAGIC: &[u8; 4] = b"ASSO";
pub const VERSION: u16 = 1;
pub const ENVELOPE_HEADER_LEN: usize = 7;

/// One-byte tag naming the payload carried by an envelope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum MessageType {
    PublicParams = 0x01,
    MasterSecret = 0x02,
    EntitySecret = 0x03,
    PublicRecord = 0x04,
    TicketRequest = 0x05,
    Ticket = 0x06,
    UserTicket = 0x07,
    Showing = 0x08,
    TraceRequest = 0x09,
    RegistryLog = 0x0a,
    LedgerLog = 0x0b,
}

impl MessageType {
    pub const ALL: [MessageType; 11] = [
        MessageType::PublicParams,
        MessageType::MasterSecret,
        MessageType::EntitySecret,
        MessageType::PublicRecord,
        MessageType::TicketRequest,
        MessageType::Ticket,
        MessageType::UserTicket,
        MessageType::Showing,
        MessageType::TraceRequest,
        MessageType::RegistryLog,
        MessageType::LedgerLog,
    ];

    pub fn from_byte(b: u8) -> Result<Self, Error> {
        Self::ALL.into_iter().find(|t| *t as u8 == b).ok_or(Error::UnknownMessageType(b))
    }
}

pub fn encode_envelope<T: Encode + ?Sized>(ty: MessageType, body: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(64);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_be_bytes());
    out.push(ty as u8);
    out.extend_from_slice(&body.encode_to_vec());
    out
}

/// Reads the header, checking magic and version, and returns the message type.
pub fn peek_type(bytes: &[u8]) -> Result<MessageType, Error> {
    if bytes.len() < ENVELOPE_HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = u16::from_be_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    MessageType::from_byte(bytes[6])
}

pub fn decode_envelope<T: Decode>(expected: MessageType, bytes: &[u8]) -> Result<T, Error> {
    let ty = peek_type(bytes)?;
    if ty != expected {
        return Err(Error::WrongMessageType { expected: expected as u8, found: ty as u8 });
    }
    decode_exact(&bytes[ENVELOPE_HEADER_LEN..])
}
