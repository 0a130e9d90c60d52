//! Bilinear group plumbing over BLS12-381.
//!
//! Group elements are written additively, following the underlying curve
//! library: a multiplicative `g^a · h^b` becomes `g * a + h * b`.

use bls12_381::hash_to_curve::{ExpandMsgXmd, HashToCurve};
use bls12_381::{multi_miller_loop, G1Affine, G2Affine, G2Prepared};
use ff::Field;
use group::Group;
use rand::{CryptoRng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Transcript, Writer};

pub mod toy;

pub use bls12_381::{G1Projective as G1, G2Projective as G2, Gt, Scalar};

/// Tags fed to hash-to-curve when deriving the public generators.
pub const GENERATOR_TAGS: [&str; 5] = ["ASSO:g", "ASSO:h", "ASSO:xi", "ASSO:htilde", "ASSO:frakg"];

const GENERATOR_DST: &[u8] = b"ASSO-V01-CS01-with-BLS12381_XMD:SHA-256_SSWU_RO_";

/// Domain byte for the transcript / serial-number hash.
pub const H1_DOMAIN: u8 = 0x01;
/// Domain byte for the ticket-slot locator hash.
pub const H2_DOMAIN: u8 = 0x02;

/// Curves the parameter envelope can name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum CurveId {
    Bls12_381 = 1,
}

impl CurveId {
    pub fn from_byte(b: u8) -> Result<Self, Error> {
        match b {
            1 => Ok(CurveId::Bls12_381),
            other => Err(Error::Decode(format!("unknown curve id {other}"))),
        }
    }

    pub fn security_bits(self) -> u32 {
        match self {
            CurveId::Bls12_381 => 128,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveId::Bls12_381 => "BLS12-381",
        }
    }
}

/// Identifies the hash-to-scalar construction recorded in the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum HashSuite {
    /// SHAKE256 over `domain || payload`, 64 bytes reduced mod p.
    Shake256Wide = 1,
}

impl HashSuite {
    pub fn from_byte(b: u8) -> Result<Self, Error> {
        match b {
            1 => Ok(HashSuite::Shake256Wide),
            other => Err(Error::Decode(format!("unknown hash suite {other}"))),
        }
    }
}

/// The CA's master secret `x_a`.
#[derive(Clone, PartialEq, Eq)]
pub struct MasterSecret(pub(crate) Scalar);

impl MasterSecret {
    pub fn new(x: Scalar) -> Result<Self, Error> {
        if bool::from(x.is_zero()) {
            return Err(Error::ZeroScalar);
        }
        Ok(MasterSecret(x))
    }

    pub fn scalar(&self) -> &Scalar {
        &self.0
    }
}

impl std::fmt::Debug for MasterSecret {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("MasterSecret(..)")
    }
}

/// Public parameters shared by every role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicParams {
    pub curve: CurveId,
    pub hash_suite: HashSuite,
    pub g: G1,
    pub h: G1,
    pub xi: G1,
    pub h_tilde: G1,
    pub g2: G2,
    /// CA public key `Y_A = g2^{x_a}`.
    pub ca_public: G2,
}

/// Derive `[g, h, xi, h_tilde]` in G1 and the G2 generator from the fixed tags.
pub fn derive_generators() -> ([G1; 4], G2) {
    let g1 =
        |tag: &str| <G1 as HashToCurve<ExpandMsgXmd<sha2_09::Sha256>>>::hash_to_curve(tag.as_bytes(), GENERATOR_DST);
    let g2 =
        <G2 as HashToCurve<ExpandMsgXmd<sha2_09::Sha256>>>::hash_to_curve(GENERATOR_TAGS[4].as_bytes(), GENERATOR_DST);
    ([g1(GENERATOR_TAGS[0]), g1(GENERATOR_TAGS[1]), g1(GENERATOR_TAGS[2]), g1(GENERATOR_TAGS[3])], g2)
}

/// System set-up. Only the 128-bit BLS12-381 profile is available.
pub fn setup_params<R: RngCore + CryptoRng>(
    security_level: u32,
    rng: &mut R,
) -> Result<(MasterSecret, PublicParams), Error> {
    let curve = match security_level {
        128 => CurveId::Bls12_381,
        other => return Err(Error::UnsupportedSecurityLevel(other)),
    };
    let ([g, h, xi, h_tilde], g2) = derive_generators();
    let x_a = random_nonzero(rng);
    let pp = PublicParams { curve, hash_suite: HashSuite::Shake256Wide, g, h, xi, h_tilde, g2, ca_public: g2 * x_a };
    Ok((MasterSecret(x_a), pp))
}

/// Deterministic set-up for fixtures and tests; the seed is stretched with SHA-256.
pub fn setup_params_seeded(security_level: u32, seed: &[u8]) -> Result<(MasterSecret, PublicParams), Error> {
    setup_params(security_level, &mut seeded_rng(seed))
}

/// A ChaCha20 stream keyed by `SHA-256(seed)`.
pub fn seeded_rng(seed: &[u8]) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(Sha256::digest(seed).into())
}

pub fn random_nonzero<R: RngCore + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let s = Scalar::random(&mut *rng);
        if !bool::from(s.is_zero()) {
            return s;
        }
    }
}

pub fn invert(s: &Scalar) -> Result<Scalar, Error> {
    Option::from(s.invert()).ok_or(Error::ZeroScalar)
}

/// SHAKE256(domain || payload), 64 output bytes reduced mod p.
pub fn hash_to_scalar(domain: u8, payload: &[u8]) -> Scalar {
    let mut xof = Shake256::default();
    xof.update(&[domain]);
    xof.update(payload);
    let mut wide = [0u8; 64];
    xof.finalize_xof().read(&mut wide);
    Scalar::from_bytes_wide(&wide)
}

/// `H1` over a length-prefixed transcript.
pub fn h1(t: &Transcript) -> Scalar {
    hash_to_scalar(H1_DOMAIN, t.as_bytes())
}

/// `H2` over a length-prefixed transcript.
pub fn h2(t: &Transcript) -> Scalar {
    hash_to_scalar(H2_DOMAIN, t.as_bytes())
}

pub fn pairing(a: &G1, b: &G2) -> Gt {
    bls12_381::pairing(&G1Affine::from(a), &G2Affine::from(b))
}

/// Checks `e(a1, b1) = e(a2, b2)` with a single final exponentiation.
pub fn pairing_eq(a1: &G1, b1: &G2, a2: &G1, b2: &G2) -> bool {
    let a1 = G1Affine::from(a1);
    let na2 = G1Affine::from(-a2);
    let b1 = G2Prepared::from(G2Affine::from(b1));
    let b2 = G2Prepared::from(G2Affine::from(b2));
    bool::from(multi_miller_loop(&[(&a1, &b1), (&na2, &b2)]).final_exponentiation().is_identity())
}

impl Encode for PublicParams {
    fn encode(&self, w: &mut Writer) {
        w.field(&(self.curve as u8));
        w.field(&(self.hash_suite as u8));
        w.field(&self.g);
        w.field(&self.h);
        w.field(&self.xi);
        w.field(&self.h_tilde);
        w.field(&self.g2);
        w.field(&self.ca_public);
    }
}

impl Decode for PublicParams {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let curve = CurveId::from_byte(r.field()?)?;
        let hash_suite = HashSuite::from_byte(r.field()?)?;
        let pp = PublicParams {
            curve,
            hash_suite,
            g: r.field()?,
            h: r.field()?,
            xi: r.field()?,
            h_tilde: r.field()?,
            g2: r.field()?,
            ca_public: r.field()?,
        };
        let gens = [pp.g, pp.h, pp.xi, pp.h_tilde];
        if gens.iter().any(|p| bool::from(p.is_identity())) || bool::from(pp.g2.is_identity()) {
            return Err(Error::Decode("identity generator".into()));
        }
        Ok(pp)
    }
}

impl Encode for MasterSecret {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.0);
    }
}

impl Decode for MasterSecret {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        MasterSecret::new(r.field()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PublicParams {
        setup_params_seeded(128, b"s0").unwrap().1
    }

    #[test]
    fn generators_distinct_and_nontrivial() {
        let pp = params();
        let gens = [pp.g, pp.h, pp.xi, pp.h_tilde];
        for (i, a) in gens.iter().enumerate() {
            assert!(!bool::from(a.is_identity()));
            for b in &gens[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert_ne!(pairing(&pp.g, &pp.g2), Gt::identity());
    }

    #[test]
    fn generator_tags_fixture() {
        assert_eq!(GENERATOR_TAGS, ["ASSO:g", "ASSO:h", "ASSO:xi", "ASSO:htilde", "ASSO:frakg"]);
    }

    #[test]
    fn seeded_setup_is_deterministic() {
        let (a, pa) = setup_params_seeded(128, b"s0").unwrap();
        let (b, pb) = setup_params_seeded(128, b"s0").unwrap();
        assert_eq!(a, b);
        assert_eq!(pa.encode_to_vec(), pb.encode_to_vec());
        let (_, pc) = setup_params_seeded(128, b"s1").unwrap();
        assert_ne!(pa.ca_public, pc.ca_public);
        assert_eq!(pa.g, pc.g);
    }

    #[test]
    fn unsupported_levels_rejected() {
        for lvl in [16, 80, 160, 320] {
            assert!(matches!(
                setup_params_seeded(lvl, b"s0"),
                Err(Error::UnsupportedSecurityLevel(l)) if l == lvl
            ));
        }
    }

    #[test]
    fn bilinearity_samples() {
        let pp = params();
        let mut rng = seeded_rng(b"bilinear");
        let base = pairing(&pp.g, &pp.g2);
        for _ in 0..20 {
            let a = Scalar::random(&mut rng);
            let b = Scalar::random(&mut rng);
            assert_eq!(pairing(&(pp.g * a), &(pp.g2 * b)), base * (a * b));
            assert_eq!(pairing(&(pp.g * a), &pp.g2), pairing(&pp.g, &(pp.g2 * a)));
        }
        assert_eq!(pairing(&G1::identity(), &pp.g2), Gt::identity());
    }

    #[test]
    fn pairing_eq_matches_direct_comparison() {
        let pp = params();
        let mut rng = seeded_rng(b"peq");
        let x = Scalar::random(&mut rng);
        assert!(pairing_eq(&(pp.g * x), &pp.g2, &pp.g, &(pp.g2 * x)));
        assert!(!pairing_eq(&(pp.g * x), &pp.g2, &pp.h, &(pp.g2 * x)));
    }

    #[test]
    fn hash_domains_separate() {
        let mut rng = seeded_rng(b"hash");
        for _ in 0..100 {
            let mut m = vec![0u8; (rng.next_u32() % 64) as usize];
            rng.fill_bytes(&mut m);
            assert_ne!(hash_to_scalar(H1_DOMAIN, &m), hash_to_scalar(H2_DOMAIN, &m));
            assert_eq!(hash_to_scalar(H1_DOMAIN, &m), hash_to_scalar(H1_DOMAIN, &m));
        }
    }

    #[test]
    fn zero_inversion_is_error() {
        assert!(matches!(invert(&Scalar::ZERO), Err(Error::ZeroScalar)));
        assert_eq!(invert(&Scalar::from(7u64)).unwrap() * Scalar::from(7u64), Scalar::ONE);
        assert!(MasterSecret::new(Scalar::ZERO).is_err());
    }
}
