use ff::Field;
use rand::{CryptoRng, RngCore};

use crate::algebra::{h1, PublicParams, Scalar, G1, G2};
use crate::credentials::{bbs_sign_scalar, bbs_verify_scalar, Credential, EntityKeys, Role};
use crate::error::Error;
use crate::proofs::{pi1_prove, pi1_verify, Pi1Proof, PseudonymPair};
use crate::transport::{Decode, Encode, Reader, Transcript, Writer};

use super::registry::Registry;
use super::{locator, AuthTag, ServiceSet, TextPolicy, Ticket, TicketClosure, TicketEntry, TicketFailure};

/// What the user sends the issuer: `J_U`, one pseudonym per entry, and the
/// issuing proof (which carries the blinded credential).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketRequest {
    pub service_set: ServiceSet,
    pub pseudonyms: Vec<PseudonymPair>,
    pub proof: Pi1Proof,
}

/// `z_v = H1(z_u || ID_V)`.
pub fn pseudonym_secret(z_u: &Scalar, verifier_id: &str) -> Scalar {
    h1(&Transcript::new().push(z_u).push(verifier_id))
}

/// One `(P_V, Q_V)` per identifier in `J_U` order, each with its `z_v`.
pub fn user_derive_pseudonyms(
    pp: &PublicParams,
    y_cv: &G1,
    x_u: &Scalar,
    z_u: &Scalar,
    service_set: &ServiceSet,
) -> Vec<(PseudonymPair, Scalar)> {
    let y_u = pp.xi * x_u;
    service_set
        .ids()
        .iter()
        .map(|id| {
            let z_v = pseudonym_secret(z_u, id);
            let pair = PseudonymPair { verifier_id: id.clone(), p: y_u + y_cv * z_v, q: pp.xi * z_v };
            (pair, z_v)
        })
        .collect()
}

/// Draws a fresh `z_u` and builds the request. Returns `z_u` alongside it.
pub fn user_build_ticket_request<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    y_cv: &G1,
    user: &EntityKeys,
    credential: &Credential,
    service_set: &ServiceSet,
    rng: &mut R,
) -> Result<(Scalar, TicketRequest), Error> {
    let z_u = Scalar::random(&mut *rng);
    let pseudonyms = user_derive_pseudonyms(pp, y_cv, user.secret(), &z_u, service_set);
    let proof = pi1_prove(pp, y_cv, user.secret(), credential, &pseudonyms, rng)?;
    let request = TicketRequest {
        service_set: service_set.clone(),
        pseudonyms: pseudonyms.into_iter().map(|(p, _)| p).collect(),
        proof,
    };
    Ok((z_u, request))
}

/// `s_V = H1(P || Q || E || F || K || Text)`.
pub fn tag_serial(p: &G1, q: &G1, e: &G1, f: &G1, k: &G1, text: &str) -> Scalar {
    h1(&Transcript::new().push(p).push(q).push(e).push(f).push(k).push(text))
}

/// `s_CV = H1(s_1 || ... || s_n)` over entry serials in ticket order.
pub fn ticket_serial(entries: &[TicketEntry]) -> Scalar {
    let mut t = Transcript::new();
    for entry in entries {
        t.append(&entry.tag.serial);
    }
    h1(&t)
}

/// Resolves every identifier in `J_U` to its registered key. The last one
/// must be a central verifier and the rest ordinary verifiers.
fn resolve_services(registry: &Registry, service_set: &ServiceSet) -> Result<Vec<G1>, Error> {
    let n = service_set.len();
    service_set
        .ids()
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let rec = registry.get(id).ok_or_else(|| Error::UnknownVerifier(id.clone()))?;
            let want = if i + 1 == n { Role::CentralVerifier } else { Role::Verifier };
            if rec.role != want {
                return Err(Error::InvalidServiceSet(format!("{id} is registered as {}", rec.role.name())));
            }
            Ok(rec.public)
        })
        .collect()
}

/// Builds and signs one tag for the verifier with key `y_v`, using `d` as
/// the tag's ephemeral exponent.
#[allow(clippy::too_many_arguments)]
pub fn issue_tag<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    issuer: &EntityKeys,
    y_v: &G1,
    y_cv: &G1,
    pair: &PseudonymPair,
    text: String,
    d: &Scalar,
    rng: &mut R,
) -> Result<AuthTag, Error> {
    let ephemeral = pp.xi * d;
    let designated = y_v * d;
    let escrow = y_v + y_cv * d;
    let serial = tag_serial(&pair.p, &pair.q, &ephemeral, &designated, &escrow, &text);
    let sig = bbs_sign_scalar(pp, issuer.secret(), &serial, rng)?;
    Ok(AuthTag { p: pair.p, q: pair.q, ephemeral, designated, escrow, text, serial, w: sig.w, e: sig.e, z: sig.z })
}

pub fn issuer_issue_ticket<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    issuer: &EntityKeys,
    registry: &Registry,
    request: &TicketRequest,
    text_policy: &dyn TextPolicy,
    rng: &mut R,
) -> Result<Ticket, Error> {
    if issuer.role() != Role::Issuer || issuer.public_g2().is_none() {
        return Err(Error::MissingG2Key(issuer.role()));
    }
    let ids = request.service_set.ids();
    if request.pseudonyms.len() != ids.len() || request.pseudonyms.iter().zip(ids).any(|(p, id)| &p.verifier_id != id) {
        return Err(Error::InvalidServiceSet("pseudonyms do not match the service set".into()));
    }
    let keys = resolve_services(registry, &request.service_set)?;
    let y_cv = *keys.last().expect("service set is never empty");
    pi1_verify(pp, &y_cv, &request.proof, &request.pseudonyms).map_err(Error::ProofRejected)?;

    let t_u = Scalar::random(&mut *rng);
    let c_u = pp.xi * t_u;

    let mut entries = Vec::with_capacity(ids.len());
    for ((id, y_v), pair) in ids.iter().zip(&keys).zip(&request.pseudonyms) {
        let d = Scalar::random(&mut *rng);
        let tag = issue_tag(pp, issuer, y_v, &y_cv, pair, text_policy.text_for(id), &d, rng)?;
        entries.push(TicketEntry { locator: locator(&c_u, id), tag });
    }

    let serial = ticket_serial(&entries);
    let sig = bbs_sign_scalar(pp, issuer.secret(), &serial, rng)?;
    Ok(Ticket { entries, closure: TicketClosure { serial, w: sig.w, e: sig.e, z: sig.z }, c_u })
}

/// Recomputes `s` from the tag's own fields.
pub(crate) fn serial_matches(tag: &AuthTag) -> bool {
    tag.serial == tag_serial(&tag.p, &tag.q, &tag.ephemeral, &tag.designated, &tag.escrow, &tag.text)
}

/// The user's acceptance checks, reporting the first failure.
pub fn check_ticket(
    pp: &PublicParams,
    ticket: &Ticket,
    service_set: &ServiceSet,
    issuer_g2: &G2,
) -> Result<(), TicketFailure> {
    if ticket.entries.len() != service_set.len() {
        return Err(TicketFailure::EntryCount);
    }
    for (i, (entry, id)) in ticket.entries.iter().zip(service_set.ids()).enumerate() {
        if entry.locator != locator(&ticket.c_u, id) {
            return Err(TicketFailure::Locator(i));
        }
        let t = &entry.tag;
        if !serial_matches(t) {
            return Err(TicketFailure::Serial(i));
        }
        if !bbs_verify_scalar(pp, issuer_g2, &t.serial, &t.signature()) {
            return Err(TicketFailure::Signature(i));
        }
    }
    if ticket.closure.serial != ticket_serial(&ticket.entries) {
        return Err(TicketFailure::ClosureSerial);
    }
    if !bbs_verify_scalar(pp, issuer_g2, &ticket.closure.serial, &ticket.closure.signature()) {
        return Err(TicketFailure::ClosureSignature);
    }
    Ok(())
}

pub fn user_verify_ticket(pp: &PublicParams, ticket: &Ticket, service_set: &ServiceSet, issuer_g2: &G2) -> bool {
    check_ticket(pp, ticket, service_set, issuer_g2).is_ok()
}

impl Encode for TicketRequest {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.service_set);
        w.field(&self.pseudonyms);
        w.field(&self.proof);
    }
}

impl Decode for TicketRequest {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(TicketRequest { service_set: r.field()?, pseudonyms: r.field()?, proof: r.field()? })
    }
}
