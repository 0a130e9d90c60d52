use rand::{CryptoRng, RngCore};

use crate::algebra::{PublicParams, Scalar, G1, G2};
use crate::credentials::{bbs_verify_scalar, EntityKeys, Role};
use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Writer};

use super::issuing::{serial_matches, ticket_serial};
use super::registry::Registry;
use super::showing::{check_showing, user_show_tag, RejectReason};
use super::{Showing, Ticket, TicketClosure, TicketEntry};

/// What a cooperating user hands the central verifier: the ticket without
/// `C_U`, and a showing of the central verifier's own tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRequest {
    pub showing: Showing,
    pub entries: Vec<TicketEntry>,
    pub closure: TicketClosure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub user_key: G1,
    /// The registered user holding `user_key`, if any.
    pub user_id: Option<String>,
    /// `(ID_V, Y_V)` per entry, in ticket order.
    pub services: Vec<(String, G1)>,
}

impl TraceReport {
    pub fn service_ids(&self) -> Vec<&str> {
        self.services.iter().map(|(id, _)| id.as_str()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFailure {
    NotCentralVerifier,
    NotContained,
    TagInvalid(RejectReason),
    UnknownVerifierKey(usize),
    EntrySerial(usize),
    EntrySignature(usize),
    InconsistentUser(usize),
    ClosureSerial,
    ClosureSignature,
}

pub fn user_trace_request<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    y_cv: &G1,
    ticket: &Ticket,
    z_u: &Scalar,
    x_u: &Scalar,
    central_id: &str,
    rng: &mut R,
) -> Result<TraceRequest, Error> {
    let showing = user_show_tag(pp, y_cv, ticket, z_u, x_u, central_id, rng)?;
    Ok(TraceRequest { showing, entries: ticket.entries.clone(), closure: ticket.closure })
}

/// Opens every tag with `x_cv`, recovering `Y_U` and each verifier's key.
pub fn cv_trace(
    pp: &PublicParams,
    cv: &EntityKeys,
    registry: &Registry,
    req: &TraceRequest,
    issuer_g2: &G2,
) -> Result<TraceReport, TraceFailure> {
    if cv.role() != Role::CentralVerifier {
        return Err(TraceFailure::NotCentralVerifier);
    }
    let x_cv = cv.secret();
    if !req.entries.iter().any(|e| e.tag == req.showing.tag) {
        return Err(TraceFailure::NotContained);
    }
    check_showing(pp, x_cv, &req.showing, issuer_g2, cv.public()).map_err(TraceFailure::TagInvalid)?;

    let mut user_key = None;
    let mut services = Vec::with_capacity(req.entries.len());
    for (i, entry) in req.entries.iter().enumerate() {
        let tag = &entry.tag;
        let y_u = tag.p - tag.q * x_cv;
        let y_v = tag.escrow - tag.ephemeral * x_cv;
        let rec = registry.find_by_key(&y_v).ok_or(TraceFailure::UnknownVerifierKey(i))?;
        if !serial_matches(tag) {
            return Err(TraceFailure::EntrySerial(i));
        }
        if !bbs_verify_scalar(pp, issuer_g2, &tag.serial, &tag.signature()) {
            return Err(TraceFailure::EntrySignature(i));
        }
        match user_key {
            None => user_key = Some(y_u),
            Some(k) if k != y_u => return Err(TraceFailure::InconsistentUser(i)),
            Some(_) => {}
        }
        services.push((rec.id.clone(), y_v));
    }

    if req.closure.serial != ticket_serial(&req.entries) {
        return Err(TraceFailure::ClosureSerial);
    }
    if !bbs_verify_scalar(pp, issuer_g2, &req.closure.serial, &req.closure.signature()) {
        return Err(TraceFailure::ClosureSignature);
    }

    let user_key = user_key.expect("containment implies at least one entry");
    let user_id = registry.find_by_key(&user_key).filter(|r| r.role == Role::User).map(|r| r.id.clone());
    Ok(TraceReport { user_key, user_id, services })
}

impl Encode for TraceRequest {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.showing);
        w.field(&self.entries);
        w.field(&self.closure);
    }
}

impl Decode for TraceRequest {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(TraceRequest { showing: r.field()?, entries: r.field()?, closure: r.field()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{seeded_rng, setup_params_seeded};
    use crate::protocol::{issuer_issue_ticket, register, user_build_ticket_request, FixedText, ServiceSet};
    use ff::Field;

    #[test]
    fn trace_recovers_user_and_services() {
        let (msk, pp) = setup_params_seeded(128, b"s0").unwrap();
        let mut rng = seeded_rng(b"trace");
        let mut reg = Registry::new();
        let issuer = register(&pp, &msk, &mut reg, Role::Issuer, "I", &mut rng).unwrap();
        let user = register(&pp, &msk, &mut reg, Role::User, "bob", &mut rng).unwrap();
        let cv = register(&pp, &msk, &mut reg, Role::CentralVerifier, "CV", &mut rng).unwrap();
        for id in ["V1", "V2", "V3"] {
            register(&pp, &msk, &mut reg, Role::Verifier, id, &mut rng).unwrap();
        }
        let set = ServiceSet::with_central(["V1", "V2", "V3"], "CV").unwrap();
        let y_cv = cv.keys.public();
        let y_i = issuer.keys.public_g2().unwrap();
        let issue = |rng: &mut _| {
            let (z_u, req) = user_build_ticket_request(&pp, y_cv, &user.keys, &user.credential, &set, rng).unwrap();
            (z_u, issuer_issue_ticket(&pp, &issuer.keys, &reg, &req, &FixedText("t".into()), rng).unwrap())
        };
        let (z_u, ticket) = issue(&mut rng);
        let req = user_trace_request(&pp, y_cv, &ticket, &z_u, user.keys.secret(), "CV", &mut rng).unwrap();
        let report = cv_trace(&pp, &cv.keys, &reg, &req, y_i).unwrap();
        assert_eq!(report.user_key, *user.keys.public());
        assert_eq!(report.user_id.as_deref(), Some("bob"));
        assert_eq!(report.service_ids(), ["V1", "V2", "V3", "CV"]);

        let mut bad = req.clone();
        bad.entries[1].tag.escrow += pp.xi;
        assert_eq!(cv_trace(&pp, &cv.keys, &reg, &bad, y_i), Err(TraceFailure::UnknownVerifierKey(1)));

        let (z2, other) = issue(&mut rng);
        let foreign = user_trace_request(&pp, y_cv, &other, &z2, user.keys.secret(), "CV", &mut rng).unwrap();
        let mixed = TraceRequest { showing: foreign.showing, ..req.clone() };
        assert_eq!(cv_trace(&pp, &cv.keys, &reg, &mixed, y_i), Err(TraceFailure::NotContained));

        let mut bad = req.clone();
        bad.closure.w += Scalar::ONE;
        assert_eq!(cv_trace(&pp, &cv.keys, &reg, &bad, y_i), Err(TraceFailure::ClosureSignature));

        let mut bad = req;
        bad.entries.swap(0, 1);
        assert_eq!(cv_trace(&pp, &cv.keys, &reg, &bad, y_i), Err(TraceFailure::ClosureSerial));
    }
}
