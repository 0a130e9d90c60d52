use ff::Field;
use rand::{CryptoRng, RngCore};

use crate::algebra::{h1, invert, pairing_eq, random_nonzero, PublicParams, Scalar, G1};
use crate::credentials::Credential;
use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Transcript, Writer};

use super::sigma::{respond, Curve, PseudonymCommitment, PseudonymResponse, PseudonymStatement};
use super::{CommitmentPair, PseudonymPair};

/// A re-randomised credential the issuer can check without learning `sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlindedCredential {
    /// `sigma^{v1}`
    pub sigma_bar: G1,
    /// `sigma_bar^{-e} · B^{v1}`, which equals `sigma_bar^{x_a}`
    pub sigma_tilde: G1,
    /// `B^{v1} · h^{-v2}`
    pub b_bar: G1,
}

/// Prover-side blinding values. Never serialized.
#[derive(Clone, Copy)]
pub struct BlindAux {
    pub v1: Scalar,
    pub v2: Scalar,
    pub v3: Scalar,
    pub v: Scalar,
}

/// `B = g · h^r · Y`, the value the CA signed.
fn credential_base(pp: &PublicParams, cred: &Credential, public: &G1) -> G1 {
    pp.g + pp.h * cred.r + public
}

pub fn blind_credential<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    cred: &Credential,
    public: &G1,
    rng: &mut R,
) -> (BlindedCredential, BlindAux) {
    let b = credential_base(pp, cred, public);
    let v1 = random_nonzero(rng);
    let v2 = Scalar::random(&mut *rng);
    let v3 = invert(&v1).expect("v1 is nonzero");
    let v = cred.r - v2 * v3;
    let sigma_bar = cred.sigma * v1;
    let blinded =
        BlindedCredential { sigma_bar, sigma_tilde: sigma_bar * (-cred.e) + b * v1, b_bar: b * v1 - pp.h * v2 };
    (blinded, BlindAux { v1, v2, v3, v })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1Proof {
    pub blinded: BlindedCredential,
    pub w1: G1,
    pub w2: G1,
    /// `(P'_V, Q'_V)` in service-set order.
    pub commitments: Vec<CommitmentPair>,
    pub c: Scalar,
    pub e_hat: Scalar,
    pub v2_hat: Scalar,
    pub v3_hat: Scalar,
    pub v_hat: Scalar,
    pub x_hat: Scalar,
    /// `z^_V` in service-set order.
    pub z_hats: Vec<Scalar>,
}

/// The first issuing-proof check that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi1Failure {
    /// Commitment or response counts disagree with the pseudonym list.
    Shape,
    Challenge,
    W1,
    W2,
    /// Pseudonym relation failed at this list index.
    Pseudonym(usize),
    /// `e(sigma_bar, Y_A) != e(sigma_tilde, g2)`, or `sigma_bar` is the identity.
    Pairing,
}

fn challenge(
    blinded: &BlindedCredential,
    w1: &G1,
    w2: &G1,
    pairs: &[PseudonymPair],
    commits: &[CommitmentPair],
) -> Scalar {
    let mut t =
        Transcript::new().push(&blinded.sigma_bar).push(&blinded.sigma_tilde).push(&blinded.b_bar).push(w1).push(w2);
    for (pair, cm) in pairs.iter().zip(commits) {
        t.append(&pair.p);
        t.append(&cm.p);
        t.append(&pair.q);
        t.append(&cm.q);
    }
    h1(&t)
}

fn statement(pp: &PublicParams, y_cv: &G1, pair: &PseudonymPair) -> PseudonymStatement<Curve> {
    PseudonymStatement { xi: pp.xi, y_cv: *y_cv, p: pair.p, q: pair.q }
}

/// Proves possession of a CA credential on `Y_U = xi^{x_u}` and that every
/// pseudonym opens to the same `Y_U`. `pseudonyms` carries each pair with its `z_v`.
pub fn pi1_prove<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    y_cv: &G1,
    x_u: &Scalar,
    cred: &Credential,
    pseudonyms: &[(PseudonymPair, Scalar)],
    rng: &mut R,
) -> Result<Pi1Proof, Error> {
    if pseudonyms.is_empty() {
        return Err(Error::InvalidServiceSet("no pseudonyms to prove".into()));
    }
    let y_u = pp.xi * x_u;
    let (blinded, aux) = blind_credential(pp, cred, &y_u, rng);

    let e_n = Scalar::random(&mut *rng);
    let v2_n = Scalar::random(&mut *rng);
    let v3_n = Scalar::random(&mut *rng);
    let v_n = Scalar::random(&mut *rng);
    let x_n = Scalar::random(&mut *rng);
    let z_ns: Vec<Scalar> = pseudonyms.iter().map(|_| Scalar::random(&mut *rng)).collect();

    let w1 = blinded.sigma_bar * (-e_n) + pp.h * v2_n;
    let w2 = blinded.b_bar * (-v3_n) + pp.xi * x_n + pp.h * v_n;
    let commitments: Vec<CommitmentPair> = pseudonyms
        .iter()
        .zip(&z_ns)
        .map(|((pair, _), z_n)| {
            let cm = statement(pp, y_cv, pair).commit(&x_n, z_n);
            CommitmentPair { p: cm.p, q: cm.q }
        })
        .collect();

    let pairs: Vec<PseudonymPair> = pseudonyms.iter().map(|(p, _)| p.clone()).collect();
    let c = challenge(&blinded, &w1, &w2, &pairs, &commitments);

    Ok(Pi1Proof {
        blinded,
        w1,
        w2,
        commitments,
        c,
        e_hat: respond(&e_n, &c, &cred.e),
        v2_hat: respond(&v2_n, &c, &aux.v2),
        v3_hat: respond(&v3_n, &c, &aux.v3),
        v_hat: respond(&v_n, &c, &aux.v),
        x_hat: respond(&x_n, &c, x_u),
        z_hats: pseudonyms.iter().zip(&z_ns).map(|((_, z), z_n)| respond(z_n, &c, z)).collect(),
    })
}

pub fn pi1_verify(
    pp: &PublicParams,
    y_cv: &G1,
    proof: &Pi1Proof,
    pseudonyms: &[PseudonymPair],
) -> Result<(), Pi1Failure> {
    let n = pseudonyms.len();
    if n == 0 || proof.commitments.len() != n || proof.z_hats.len() != n {
        return Err(Pi1Failure::Shape);
    }
    let bc = &proof.blinded;
    let c = proof.c;

    if challenge(bc, &proof.w1, &proof.w2, pseudonyms, &proof.commitments) != c {
        return Err(Pi1Failure::Challenge);
    }
    let w1 = bc.sigma_bar * (-proof.e_hat) + pp.h * proof.v2_hat + (bc.sigma_tilde - bc.b_bar) * c;
    if w1 != proof.w1 {
        return Err(Pi1Failure::W1);
    }
    let w2 = bc.b_bar * (-proof.v3_hat) + pp.xi * proof.x_hat + pp.h * proof.v_hat - pp.g * c;
    if w2 != proof.w2 {
        return Err(Pi1Failure::W2);
    }
    for (i, ((pair, cm), z_hat)) in pseudonyms.iter().zip(&proof.commitments).zip(&proof.z_hats).enumerate() {
        let ok = statement(pp, y_cv, pair).check(
            &PseudonymCommitment { p: cm.p, q: cm.q },
            &c,
            &PseudonymResponse { x: proof.x_hat, z: *z_hat },
        );
        if !ok {
            return Err(Pi1Failure::Pseudonym(i));
        }
    }
    if bool::from(bc.sigma_bar.is_identity()) || !pairing_eq(&bc.sigma_bar, &pp.ca_public, &bc.sigma_tilde, &pp.g2) {
        return Err(Pi1Failure::Pairing);
    }
    Ok(())
}

impl Encode for BlindedCredential {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.sigma_bar);
        w.field(&self.sigma_tilde);
        w.field(&self.b_bar);
    }
}

impl Decode for BlindedCredential {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(BlindedCredential { sigma_bar: r.field()?, sigma_tilde: r.field()?, b_bar: r.field()? })
    }
}

impl Encode for Pi1Proof {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.blinded);
        w.field(&self.w1);
        w.field(&self.w2);
        w.field(&self.commitments);
        w.field(&self.c);
        w.field(&self.e_hat);
        w.field(&self.v2_hat);
        w.field(&self.v3_hat);
        w.field(&self.v_hat);
        w.field(&self.x_hat);
        w.field(&self.z_hats);
    }
}

impl Decode for Pi1Proof {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Pi1Proof {
            blinded: r.field()?,
            w1: r.field()?,
            w2: r.field()?,
            commitments: r.field()?,
            c: r.field()?,
            e_hat: r.field()?,
            v2_hat: r.field()?,
            v3_hat: r.field()?,
            v_hat: r.field()?,
            x_hat: r.field()?,
            z_hats: r.field()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{pairing, seeded_rng, setup_params_seeded};
    use crate::credentials::{ca_issue_credential, entity_keygen, Role};

    struct Fixture {
        pp: PublicParams,
        y_cv: G1,
        x_u: Scalar,
        cred: Credential,
        pseudonyms: Vec<(PseudonymPair, Scalar)>,
    }

    fn fixture(seed: &[u8], n: usize) -> Fixture {
        let (msk, pp) = setup_params_seeded(128, b"s0").unwrap();
        let mut rng = seeded_rng(seed);
        let user = entity_keygen(&pp, Role::User, &mut rng);
        let cv = entity_keygen(&pp, Role::CentralVerifier, &mut rng);
        let cred = ca_issue_credential(&pp, &msk, user.public(), &mut rng).unwrap();
        let pseudonyms = (0..n)
            .map(|i| {
                let z = Scalar::random(&mut rng);
                let st = PseudonymStatement::<Curve>::from_witness(pp.xi, *cv.public(), user.secret(), &z);
                (PseudonymPair { verifier_id: format!("V{i}"), p: st.p, q: st.q }, z)
            })
            .collect();
        Fixture { y_cv: *cv.public(), x_u: *user.secret(), cred, pseudonyms, pp }
    }

    fn pairs(f: &Fixture) -> Vec<PseudonymPair> {
        f.pseudonyms.iter().map(|(p, _)| p.clone()).collect()
    }

    #[test]
    fn blinding_identities() {
        let f = fixture(b"blind", 1);
        let mut rng = seeded_rng(b"b");
        let y_u = f.pp.xi * f.x_u;
        let (bc, aux) = blind_credential(&f.pp, &f.cred, &y_u, &mut rng);
        assert_eq!(pairing(&bc.sigma_bar, &f.pp.ca_public), pairing(&bc.sigma_tilde, &f.pp.g2));
        assert_eq!(aux.v1 * aux.v3, Scalar::ONE);
        assert_eq!(aux.v, f.cred.r - aux.v2 * aux.v3);
        assert_eq!(bc.b_bar * (-aux.v3) + f.pp.xi * f.x_u + f.pp.h * aux.v, -f.pp.g);
        let (bc2, _) = blind_credential(&f.pp, &f.cred, &y_u, &mut rng);
        assert_ne!(bc.sigma_bar, bc2.sigma_bar);
    }

    #[test]
    fn honest_proof_verifies() {
        let f = fixture(b"honest", 3);
        let proof = pi1_prove(&f.pp, &f.y_cv, &f.x_u, &f.cred, &f.pseudonyms, &mut seeded_rng(b"p")).unwrap();
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &proof, &pairs(&f)), Ok(()));
        let other = pi1_prove(&f.pp, &f.y_cv, &f.x_u, &f.cred, &f.pseudonyms, &mut seeded_rng(b"q")).unwrap();
        assert_ne!(proof.c, other.c);
    }

    #[test]
    fn tampering_rejected() {
        let f = fixture(b"tamper", 2);
        let proof = pi1_prove(&f.pp, &f.y_cv, &f.x_u, &f.cred, &f.pseudonyms, &mut seeded_rng(b"p")).unwrap();
        let ps = pairs(&f);

        let mut bad = proof.clone();
        bad.x_hat += Scalar::ONE;
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &bad, &ps), Err(Pi1Failure::W2));

        let mut reordered = ps.clone();
        reordered.swap(0, 1);
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &proof, &reordered), Err(Pi1Failure::Challenge));

        let mut bad = proof.clone();
        bad.blinded.sigma_bar += f.pp.g;
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &bad, &ps), Err(Pi1Failure::Challenge));

        let mut bad = proof.clone();
        bad.z_hats[1] += Scalar::ONE;
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &bad, &ps), Err(Pi1Failure::Pseudonym(1)));

        let mut bad = proof.clone();
        bad.z_hats.pop();
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &bad, &ps), Err(Pi1Failure::Shape));
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &proof, &[]), Err(Pi1Failure::Shape));
    }

    #[test]
    fn pairing_check_catches_consistent_forgery() {
        // A prover who knows x_u but holds no credential can still satisfy the
        // Schnorr equations; only the pairing check stops it.
        let f = fixture(b"forge", 1);
        let mut rng = seeded_rng(b"forge-rng");
        let fake = Credential { sigma: f.cred.sigma + f.pp.g, ..f.cred };
        let proof = pi1_prove(&f.pp, &f.y_cv, &f.x_u, &fake, &f.pseudonyms, &mut rng).unwrap();
        assert_eq!(pi1_verify(&f.pp, &f.y_cv, &proof, &pairs(&f)), Err(Pi1Failure::Pairing));
    }

    #[test]
    fn empty_pseudonym_list_refused() {
        let f = fixture(b"empty", 0);
        assert!(pi1_prove(&f.pp, &f.y_cv, &f.x_u, &f.cred, &[], &mut seeded_rng(b"p")).is_err());
    }
}
