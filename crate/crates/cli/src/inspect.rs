use std::path::Path;

use asso::algebra::{MasterSecret, PublicParams};
use asso::protocol::{
    AuthTag, Registered, Registry, RegistryRecord, Showing, SpendLedger, Ticket, TicketRequest, TraceRequest,
    UserTicket,
};
use asso::transport::{decode_envelope, peek_type, Encode, MessageType};
use asso::Error;
use serde_json::{json, Value};

use crate::files::{read_raw, type_name};

fn hx<T: Encode + ?Sized>(x: &T) -> String {
    hex::encode(x.encode_to_vec())
}

fn params(pp: &PublicParams) -> Value {
    json!({
        "curve": pp.curve.name(),
        "security_bits": pp.curve.security_bits(),
        "g": hx(&pp.g),
        "h": hx(&pp.h),
        "xi": hx(&pp.xi),
        "h_tilde": hx(&pp.h_tilde),
        "g2": hx(&pp.g2),
        "ca_public": hx(&pp.ca_public),
    })
}

fn record(r: &RegistryRecord) -> Value {
    json!({
        "id": r.id,
        "role": r.role.name(),
        "public": hx(&r.public),
        "public_g2": r.public_g2.as_ref().map(hx),
        "credential": { "e": hx(&r.credential.e), "r": hx(&r.credential.r), "sigma": hx(&r.credential.sigma) },
    })
}

fn tag(t: &AuthTag) -> Value {
    json!({
        "P": hx(&t.p),
        "Q": hx(&t.q),
        "E": hx(&t.ephemeral),
        "F": hx(&t.designated),
        "K": hx(&t.escrow),
        "text": t.text,
        "s": hx(&t.serial),
        "w": hx(&t.w),
        "e": hx(&t.e),
        "Z": hx(&t.z),
    })
}

fn ticket(t: &Ticket) -> Value {
    json!({
        "entries": t.entries.iter().map(|e| json!({ "D": hx(&e.locator), "tag": tag(&e.tag) })).collect::<Vec<_>>(),
        "closure": { "s": hx(&t.closure.serial), "w": hx(&t.closure.w), "e": hx(&t.closure.e), "Z": hx(&t.closure.z) },
        "C_U": hx(&t.c_u),
    })
}

fn showing(s: &Showing) -> Value {
    json!({
        "tag": tag(&s.tag),
        "proof": {
            "P'": hx(&s.proof.p_commit),
            "Q'": hx(&s.proof.q_commit),
            "c": hx(&s.proof.c),
            "x_hat": hx(&s.proof.x_hat),
            "z_hat": hx(&s.proof.z_hat),
        },
    })
}

fn body(ty: MessageType, path: &Path, bytes: &[u8]) -> Result<Value, Error> {
    Ok(match ty {
        MessageType::PublicParams => params(&decode_envelope(ty, bytes)?),
        MessageType::MasterSecret => {
            decode_envelope::<MasterSecret>(ty, bytes)?;
            json!({ "secret": "<redacted>" })
        }
        MessageType::EntitySecret => {
            let k: Registered = decode_envelope(ty, bytes)?;
            json!({ "secret": "<redacted>", "record": record(&k.record()) })
        }
        MessageType::PublicRecord => record(&decode_envelope(ty, bytes)?),
        MessageType::TicketRequest => {
            let r: TicketRequest = decode_envelope(ty, bytes)?;
            json!({
                "services": r.service_set.ids(),
                "pseudonyms": r.pseudonyms.iter().map(|p| json!({ "id": p.verifier_id, "P": hx(&p.p), "Q": hx(&p.q) })).collect::<Vec<_>>(),
                "proof_bytes": r.proof.encode_to_vec().len(),
            })
        }
        MessageType::Ticket => ticket(&decode_envelope(ty, bytes)?),
        MessageType::UserTicket => {
            let u: UserTicket = decode_envelope(ty, bytes)?;
            json!({ "services": u.service_set.ids(), "z_u": "<redacted>", "ticket": ticket(&u.ticket) })
        }
        MessageType::Showing => showing(&decode_envelope(ty, bytes)?),
        MessageType::TraceRequest => {
            let t: TraceRequest = decode_envelope(ty, bytes)?;
            json!({
                "showing": showing(&t.showing),
                "entries": t.entries.len(),
                "closure_s": hx(&t.closure.serial),
            })
        }
        MessageType::RegistryLog => {
            let reg = Registry::open(path)?;
            json!({ "records": reg.iter().map(record).collect::<Vec<_>>() })
        }
        MessageType::LedgerLog => {
            let ledger = SpendLedger::open(path)?;
            json!({
                "entries": ledger.len(),
                "fingerprints": ledger.fingerprints().iter().map(|f| hex::encode(f.as_bytes())).collect::<Vec<_>>(),
            })
        }
    })
}

/// JSON description of any envelope or log file.
pub fn describe(path: &Path) -> Result<Value, Error> {
    let bytes = read_raw(path)?;
    let ty = peek_type(&bytes)?;
    Ok(json!({
        "type": type_name(ty),
        "code": ty as u8,
        "bytes": bytes.len(),
        "body": body(ty, path, &bytes)?,
    }))
}
