use rand::{CryptoRng, RngCore};

use crate::algebra::{PublicParams, Scalar, G1, G2};
use crate::credentials::{bbs_verify_scalar, EntityKeys};
use crate::error::Error;
use crate::proofs::{pi2_prove, pi2_verify};

use super::issuing::{pseudonym_secret, serial_matches};
use super::ledger::{Fingerprint, InsertOutcome, SpendLedger};
use super::{locator, AuthTag, Showing, Ticket};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    DoubleSpend,
    ProofFail,
    HashFail,
    NotDesignated,
    SigFail,
}

impl RejectReason {
    pub fn name(self) -> &'static str {
        match self {
            RejectReason::DoubleSpend => "DoubleSpend",
            RejectReason::ProofFail => "ProofFail",
            RejectReason::HashFail => "HashFail",
            RejectReason::NotDesignated => "NotDesignated",
            RejectReason::SigFail => "SigFail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

/// Looks up the entry for `target_id` by its locator and attaches a fresh
/// showing proof.
pub fn user_show_tag<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    y_cv: &G1,
    ticket: &Ticket,
    z_u: &Scalar,
    x_u: &Scalar,
    target_id: &str,
    rng: &mut R,
) -> Result<Showing, Error> {
    let d = locator(&ticket.c_u, target_id);
    let entry =
        ticket.entries.iter().find(|e| e.locator == d).ok_or_else(|| Error::TagNotFound(target_id.to_string()))?;
    let z_v = pseudonym_secret(z_u, target_id);
    let proof = pi2_prove(pp, y_cv, x_u, &z_v, &entry.tag.pseudonym(), rng);
    Ok(Showing { tag: entry.tag.clone(), proof })
}

/// Checks (1) to (4) with `x_v` as the designated secret.
pub(crate) fn check_showing(
    pp: &PublicParams,
    x_v: &Scalar,
    showing: &Showing,
    issuer_g2: &G2,
    y_cv: &G1,
) -> Result<(), RejectReason> {
    let tag: &AuthTag = &showing.tag;
    pi2_verify(pp, y_cv, &showing.proof, &tag.pseudonym()).map_err(|_| RejectReason::ProofFail)?;
    if !serial_matches(tag) {
        return Err(RejectReason::HashFail);
    }
    if tag.ephemeral * x_v != tag.designated {
        return Err(RejectReason::NotDesignated);
    }
    if !bbs_verify_scalar(pp, issuer_g2, &tag.serial, &tag.signature()) {
        return Err(RejectReason::SigFail);
    }
    Ok(())
}

/// Records the tag's fingerprint, then runs the four checks. A fingerprint
/// already in the ledger is rejected before any cryptographic work.
pub fn verifier_validate(
    pp: &PublicParams,
    verifier: &EntityKeys,
    ledger: &SpendLedger,
    showing: &Showing,
    issuer_g2: &G2,
    y_cv: &G1,
) -> Result<Verdict, Error> {
    if ledger.insert_if_absent(&Fingerprint::of(&showing.tag))? == InsertOutcome::AlreadyPresent {
        return Ok(Verdict::Reject(RejectReason::DoubleSpend));
    }
    Ok(match check_showing(pp, verifier.secret(), showing, issuer_g2, y_cv) {
        Ok(()) => Verdict::Accept,
        Err(reason) => Verdict::Reject(reason),
    })
}
