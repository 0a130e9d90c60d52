//! Role state machines: registration, ticket issuing, tag validation with
//! double-spend detection, and central-verifier tracing.

mod issuing;
mod ledger;
mod registry;
mod showing;
mod trace;

pub use issuing::{
    check_ticket, issue_tag, issuer_issue_ticket, pseudonym_secret, tag_serial, ticket_serial,
    user_build_ticket_request, user_derive_pseudonyms, user_verify_ticket, TicketRequest,
};
pub use ledger::{Fingerprint, InsertOutcome, SpendLedger};
pub use registry::{register, Registered, Registry, RegistryRecord};
pub use showing::{user_show_tag, verifier_validate, RejectReason, Verdict};
pub use trace::{cv_trace, user_trace_request, TraceFailure, TraceReport, TraceRequest};

use std::collections::HashSet;

use crate::algebra::{h2, Scalar, G1};
use crate::credentials::ScalarSignature;
use crate::error::Error;
use crate::proofs::{Pi2Proof, PseudonymPair};
use crate::transport::{Decode, Encode, Reader, Transcript, Writer};

/// The ordered verifier list a user asks a ticket for; the central
/// verifier's identifier is always the final element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceSet(Vec<String>);

impl ServiceSet {
    /// Checks shape only: non-empty, no empty or duplicate identifiers.
    fn validated(ids: Vec<String>) -> Result<Self, Error> {
        if ids.is_empty() {
            return Err(Error::InvalidServiceSet("empty".into()));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if id.is_empty() {
                return Err(Error::InvalidServiceSet("empty identifier".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidServiceSet(format!("duplicate identifier {id}")));
            }
        }
        Ok(ServiceSet(ids))
    }

    /// `ids` must end with `central_id` and mention it nowhere else.
    pub fn new(ids: Vec<String>, central_id: &str) -> Result<Self, Error> {
        if ids.last().map(String::as_str) != Some(central_id) {
            return Err(Error::InvalidServiceSet(format!("must end with central verifier {central_id}")));
        }
        Self::validated(ids)
    }

    /// Appends `central_id` to a list of ordinary verifiers.
    pub fn with_central<I, S>(verifiers: I, central_id: &str) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids: Vec<String> = verifiers.into_iter().map(Into::into).collect();
        ids.push(central_id.to_string());
        Self::new(ids, central_id)
    }

    pub fn ids(&self) -> &[String] {
        &self.0
    }

    pub fn central_id(&self) -> &str {
        self.0.last().expect("service set is never empty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.iter().any(|x| x == id)
    }
}

/// One verifier-designated authentication tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthTag {
    pub p: G1,
    pub q: G1,
    /// `E = xi^d`
    pub ephemeral: G1,
    /// `F = Y_V^d`, checkable only with the designated verifier's secret.
    pub designated: G1,
    /// `K = Y_V · Y_CV^d`, lets the central verifier recover `Y_V`.
    pub escrow: G1,
    pub text: String,
    pub serial: Scalar,
    pub w: Scalar,
    pub e: Scalar,
    pub z: G1,
}

impl AuthTag {
    pub fn signature(&self) -> ScalarSignature {
        ScalarSignature { w: self.w, e: self.e, z: self.z }
    }

    /// The pseudonym pair this tag was issued against. The verifier identifier
    /// is not part of any showing transcript, so it is left empty.
    pub fn pseudonym(&self) -> PseudonymPair {
        PseudonymPair { verifier_id: String::new(), p: self.p, q: self.q }
    }
}

/// `(D_V, Tag_V)`: a tag plus the locator the user looks it up by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketEntry {
    pub locator: Scalar,
    pub tag: AuthTag,
}

/// The issuer's signature over all tag serials, in entry order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TicketClosure {
    pub serial: Scalar,
    pub w: Scalar,
    pub e: Scalar,
    pub z: G1,
}

impl TicketClosure {
    pub fn signature(&self) -> ScalarSignature {
        ScalarSignature { w: self.w, e: self.e, z: self.z }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ticket {
    pub entries: Vec<TicketEntry>,
    pub closure: TicketClosure,
    /// `C_U = xi^{t_u}`; kept by the user, never shown to verifiers.
    pub c_u: G1,
}

/// `D_V = H2(C_U || ID_V)`.
pub fn locator(c_u: &G1, verifier_id: &str) -> Scalar {
    h2(&Transcript::new().push(c_u).push(verifier_id))
}

/// Which check of the user's ticket verification failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TicketFailure {
    EntryCount,
    Locator(usize),
    Serial(usize),
    Signature(usize),
    ClosureSerial,
    ClosureSignature,
}

/// What the user keeps after issuing: the ticket and the secrets needed to show it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserTicket {
    pub service_set: ServiceSet,
    pub z_u: Scalar,
    pub ticket: Ticket,
}

/// A tag presented to one verifier together with a fresh showing proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Showing {
    pub tag: AuthTag,
    pub proof: Pi2Proof,
}

impl Encode for ServiceSet {
    fn encode(&self, w: &mut Writer) {
        self.0.encode(w)
    }
}

impl Decode for ServiceSet {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        ServiceSet::validated(Vec::<String>::decode(r)?).map_err(|e| Error::Decode(e.to_string()))
    }
}

impl Encode for AuthTag {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.p);
        w.field(&self.q);
        w.field(&self.ephemeral);
        w.field(&self.designated);
        w.field(&self.escrow);
        w.field(&self.text);
        w.field(&self.serial);
        w.field(&self.w);
        w.field(&self.e);
        w.field(&self.z);
    }
}

impl Decode for AuthTag {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(AuthTag {
            p: r.field()?,
            q: r.field()?,
            ephemeral: r.field()?,
            designated: r.field()?,
            escrow: r.field()?,
            text: r.field()?,
            serial: r.field()?,
            w: r.field()?,
            e: r.field()?,
            z: r.field()?,
        })
    }
}

impl Encode for TicketEntry {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.locator);
        w.field(&self.tag);
    }
}

impl Decode for TicketEntry {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(TicketEntry { locator: r.field()?, tag: r.field()? })
    }
}

impl Encode for TicketClosure {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.serial);
        w.field(&self.w);
        w.field(&self.e);
        w.field(&self.z);
    }
}

impl Decode for TicketClosure {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(TicketClosure { serial: r.field()?, w: r.field()?, e: r.field()?, z: r.field()? })
    }
}

impl Encode for Ticket {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.entries);
        w.field(&self.closure);
        w.field(&self.c_u);
    }
}

impl Decode for Ticket {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Ticket { entries: r.field()?, closure: r.field()?, c_u: r.field()? })
    }
}

impl Encode for UserTicket {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.service_set);
        w.field(&self.z_u);
        w.field(&self.ticket);
    }
}

impl Decode for UserTicket {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(UserTicket { service_set: r.field()?, z_u: r.field()?, ticket: r.field()? })
    }
}

impl Encode for Showing {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.tag);
        w.field(&self.proof);
    }
}

impl Decode for Showing {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Showing { tag: r.field()?, proof: r.field()? })
    }
}

/// Supplies the `Text` field of each tag.
pub trait TextPolicy {
    fn text_for(&self, verifier_id: &str) -> String;
}

/// The same text in every tag.
#[derive(Clone, Debug)]
pub struct FixedText(pub String);

impl TextPolicy for FixedText {
    fn text_for(&self, _: &str) -> String {
        self.0.clone()
    }
}

impl<F: Fn(&str) -> String> TextPolicy for F {
    fn text_for(&self, verifier_id: &str) -> String {
        self(verifier_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn service_set_rules() {
        let s = ServiceSet::with_central(["V1", "V2"], "CV").unwrap();
        assert_eq!(s.ids(), ["V1", "V2", "CV"]);
        assert_eq!(s.central_id(), "CV");
        assert!(ServiceSet::new(vec!["V1".into()], "CV").is_err());
        assert!(ServiceSet::with_central(["CV"], "CV").is_err());
        assert!(ServiceSet::with_central(["V1", "V1"], "CV").is_err());
        assert!(ServiceSet::with_central([""], "CV").is_err());
        assert!(ServiceSet::with_central(Vec::<String>::new(), "CV").is_ok());
    }
}
