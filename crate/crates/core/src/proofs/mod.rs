//! Fiat–Shamir proofs: the issuing proof over a blinded credential and a
//! list of pseudonyms, and the showing proof of pseudonym ownership.

mod pi1;
mod pi2;
pub mod sigma;

pub use pi1::{blind_credential, pi1_prove, pi1_verify, BlindAux, BlindedCredential, Pi1Failure, Pi1Proof};
pub use pi2::{pi2_challenge, pi2_prove, pi2_verify, Pi2Failure, Pi2Proof};

use crate::algebra::G1;
use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Writer};

/// `(P, Q) = (Y_U · Y_CV^z, xi^z)` for one verifier in the service set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudonymPair {
    pub verifier_id: String,
    pub p: G1,
    pub q: G1,
}

/// A per-pseudonym commitment `(P', Q')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommitmentPair {
    pub p: G1,
    pub q: G1,
}

impl Encode for PseudonymPair {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.verifier_id);
        w.field(&self.p);
        w.field(&self.q);
    }
}

impl Decode for PseudonymPair {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(PseudonymPair { verifier_id: r.field()?, p: r.field()?, q: r.field()? })
    }
}

impl Encode for CommitmentPair {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.p);
        w.field(&self.q);
    }
}

impl Decode for CommitmentPair {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(CommitmentPair { p: r.field()?, q: r.field()? })
    }
}
