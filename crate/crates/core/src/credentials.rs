//! Per-role keys and BBS+ signatures.
//!
//! Two single-message BBS+ instantiations are used:
//! - CA credentials `sigma = (g · h^r · Y)^{1/(x_a + e)}` binding a public key `Y`,
//!   checked as `e(sigma, Y_A · g2^e) = e(g · h^r · Y, g2)`;
//! - issuer signatures on a scalar `s`, `Z = (g · h^w · h_tilde^s)^{1/(x_i + e)}`,
//!   checked against the issuer's G2 key.

use ff::Field;
use rand::{CryptoRng, RngCore};

use crate::algebra::{invert, pairing_eq, random_nonzero, MasterSecret, PublicParams, Scalar, G1, G2};
use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Writer};

const MAX_EXPONENT_RESAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Issuer,
    Verifier,
    User,
    CentralVerifier,
}

impl Role {
    pub fn as_byte(self) -> u8 {
        match self {
            Role::Issuer => 1,
            Role::Verifier => 2,
            Role::User => 3,
            Role::CentralVerifier => 4,
        }
    }

    pub fn from_byte(b: u8) -> Result<Self, Error> {
        Ok(match b {
            1 => Role::Issuer,
            2 => Role::Verifier,
            3 => Role::User,
            4 => Role::CentralVerifier,
            other => return Err(Error::Decode(format!("unknown role {other}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Issuer => "issuer",
            Role::Verifier => "verifier",
            Role::User => "user",
            Role::CentralVerifier => "central-verifier",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "issuer" => Ok(Role::Issuer),
            "verifier" => Ok(Role::Verifier),
            "user" => Ok(Role::User),
            "central-verifier" | "cv" => Ok(Role::CentralVerifier),
            other => Err(Error::Decode(format!("unknown role {other:?}"))),
        }
    }
}

/// A role's key pair: `Y = xi^x`, plus `Y~ = g2^x` for the issuer only.
#[derive(Clone, PartialEq, Eq)]
pub struct EntityKeys {
    role: Role,
    secret: Scalar,
    public: G1,
    public_g2: Option<G2>,
}

impl std::fmt::Debug for EntityKeys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EntityKeys")
            .field("role", &self.role)
            .field("public", &self.public)
            .field("public_g2", &self.public_g2)
            .finish_non_exhaustive()
    }
}

impl EntityKeys {
    pub fn from_secret(pp: &PublicParams, role: Role, secret: Scalar) -> Self {
        EntityKeys { role, secret, public: pp.xi * secret, public_g2: (role == Role::Issuer).then(|| pp.g2 * secret) }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn secret(&self) -> &Scalar {
        &self.secret
    }

    pub fn public(&self) -> &G1 {
        &self.public
    }

    pub fn public_g2(&self) -> Option<&G2> {
        self.public_g2.as_ref()
    }
}

pub fn entity_keygen<R: RngCore + CryptoRng>(pp: &PublicParams, role: Role, rng: &mut R) -> EntityKeys {
    EntityKeys::from_secret(pp, role, random_nonzero(rng))
}

/// A CA-issued credential `(e, r, sigma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Credential {
    pub e: Scalar,
    pub r: Scalar,
    pub sigma: G1,
}

/// `(base)^{1/(x + e)}` with `e` resampled until `x + e` is invertible.
fn sign_base<R: RngCore + ?Sized>(x: &Scalar, base: &G1, rng: &mut R) -> Result<(Scalar, G1), Error> {
    for _ in 0..MAX_EXPONENT_RESAMPLES {
        let e = Scalar::random(&mut *rng);
        if let Ok(inv) = invert(&(*x + e)) {
            return Ok((e, base * inv));
        }
    }
    Err(Error::DegenerateExponent)
}

pub fn ca_issue_credential<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    msk: &MasterSecret,
    public: &G1,
    rng: &mut R,
) -> Result<Credential, Error> {
    let r = Scalar::random(&mut *rng);
    let base = pp.g + pp.h * r + public;
    let (e, sigma) = sign_base(msk.scalar(), &base, rng)?;
    Ok(Credential { e, r, sigma })
}

pub fn verify_credential(pp: &PublicParams, public: &G1, cred: &Credential) -> bool {
    pairing_eq(&cred.sigma, &(pp.ca_public + pp.g2 * cred.e), &(pp.g + pp.h * cred.r + public), &pp.g2)
}

/// An issuer signature `(w, e, Z)` on one scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalarSignature {
    pub w: Scalar,
    pub e: Scalar,
    pub z: G1,
}

pub fn bbs_sign_scalar<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    signer_secret: &Scalar,
    s: &Scalar,
    rng: &mut R,
) -> Result<ScalarSignature, Error> {
    let w = Scalar::random(&mut *rng);
    let base = pp.g + pp.h * w + pp.h_tilde * s;
    let (e, z) = sign_base(signer_secret, &base, rng)?;
    Ok(ScalarSignature { w, e, z })
}

pub fn bbs_verify_scalar(pp: &PublicParams, signer_g2: &G2, s: &Scalar, sig: &ScalarSignature) -> bool {
    pairing_eq(&sig.z, &(signer_g2 + pp.g2 * sig.e), &(pp.g + pp.h * sig.w + pp.h_tilde * s), &pp.g2)
}

impl Encode for Role {
    fn encode(&self, w: &mut Writer) {
        w.raw(&[self.as_byte()]);
    }
}

impl Decode for Role {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Role::from_byte(r.take(1)?[0])
    }
}

impl Encode for EntityKeys {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.role);
        w.field(&self.secret);
        w.field(&self.public);
        w.field(&self.public_g2);
    }
}

impl Decode for EntityKeys {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let keys = EntityKeys { role: r.field()?, secret: r.field()?, public: r.field()?, public_g2: r.field()? };
        if (keys.role == Role::Issuer) != keys.public_g2.is_some() {
            return Err(Error::Decode("G2 key present iff role is issuer".into()));
        }
        Ok(keys)
    }
}

impl EntityKeys {
    /// Checks `Y = xi^x` (and `Y~ = g2^x`) against the parameters.
    pub fn is_consistent(&self, pp: &PublicParams) -> bool {
        *self == EntityKeys::from_secret(pp, self.role, self.secret)
    }
}

impl Encode for Credential {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.e);
        w.field(&self.r);
        w.field(&self.sigma);
    }
}

impl Decode for Credential {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Credential { e: r.field()?, r: r.field()?, sigma: r.field()? })
    }
}

impl Encode for ScalarSignature {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.w);
        w.field(&self.e);
        w.field(&self.z);
    }
}

impl Decode for ScalarSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(ScalarSignature { w: r.field()?, e: r.field()?, z: r.field()? })
    }
}
