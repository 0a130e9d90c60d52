use rand::{CryptoRng, RngCore};

use crate::algebra::{h1, PublicParams, Scalar, G1};
use crate::error::Error;
use crate::transport::{Decode, Encode, Reader, Transcript, Writer};

use super::sigma::{Curve, PseudonymCommitment, PseudonymProver, PseudonymResponse, PseudonymStatement};
use super::PseudonymPair;

/// Showing proof: knowledge of `(x_u, z_v)` behind one pseudonym pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pi2Proof {
    pub p_commit: G1,
    pub q_commit: G1,
    pub c: Scalar,
    pub x_hat: Scalar,
    pub z_hat: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi2Failure {
    Challenge,
    Relation,
}

/// `c_v = H1(P || P' || Q || Q')`.
pub fn pi2_challenge(pair: &PseudonymPair, p_commit: &G1, q_commit: &G1) -> Scalar {
    h1(&Transcript::new().push(&pair.p).push(p_commit).push(&pair.q).push(q_commit))
}

fn statement(pp: &PublicParams, y_cv: &G1, pair: &PseudonymPair) -> PseudonymStatement<Curve> {
    PseudonymStatement { xi: pp.xi, y_cv: *y_cv, p: pair.p, q: pair.q }
}

pub fn pi2_prove<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    y_cv: &G1,
    x_u: &Scalar,
    z_v: &Scalar,
    pair: &PseudonymPair,
    rng: &mut R,
) -> Pi2Proof {
    let prover = PseudonymProver::new(&statement(pp, y_cv, pair), *x_u, *z_v, rng);
    let c = pi2_challenge(pair, &prover.commitment.p, &prover.commitment.q);
    let resp = prover.respond(&c);
    Pi2Proof { p_commit: prover.commitment.p, q_commit: prover.commitment.q, c, x_hat: resp.x, z_hat: resp.z }
}

pub fn pi2_verify(pp: &PublicParams, y_cv: &G1, proof: &Pi2Proof, pair: &PseudonymPair) -> Result<(), Pi2Failure> {
    if pi2_challenge(pair, &proof.p_commit, &proof.q_commit) != proof.c {
        return Err(Pi2Failure::Challenge);
    }
    let ok = statement(pp, y_cv, pair).check(
        &PseudonymCommitment { p: proof.p_commit, q: proof.q_commit },
        &proof.c,
        &PseudonymResponse { x: proof.x_hat, z: proof.z_hat },
    );
    if ok {
        Ok(())
    } else {
        Err(Pi2Failure::Relation)
    }
}

impl Encode for Pi2Proof {
    fn encode(&self, w: &mut Writer) {
        w.field(&self.p_commit);
        w.field(&self.q_commit);
        w.field(&self.c);
        w.field(&self.x_hat);
        w.field(&self.z_hat);
    }
}

impl Decode for Pi2Proof {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(Pi2Proof { p_commit: r.field()?, q_commit: r.field()?, c: r.field()?, x_hat: r.field()?, z_hat: r.field()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{seeded_rng, setup_params_seeded};
    use ff::Field;
    use group::Group;

    fn pair_for(pp: &PublicParams, y_cv: &G1, x: &Scalar, z: &Scalar) -> PseudonymPair {
        let st = PseudonymStatement::<Curve>::from_witness(pp.xi, *y_cv, x, z);
        PseudonymPair { verifier_id: "V".into(), p: st.p, q: st.q }
    }

    #[test]
    fn honest_and_cross_pair() {
        let (_, pp) = setup_params_seeded(128, b"s0").unwrap();
        let mut rng = seeded_rng(b"pi2");
        let y_cv = G1::random(&mut rng);
        let x = Scalar::random(&mut rng);
        let (za, zb) = (Scalar::random(&mut rng), Scalar::random(&mut rng));
        let a = pair_for(&pp, &y_cv, &x, &za);
        let b = pair_for(&pp, &y_cv, &x, &zb);
        let proof = pi2_prove(&pp, &y_cv, &x, &za, &a, &mut rng);
        assert_eq!(pi2_verify(&pp, &y_cv, &proof, &a), Ok(()));
        assert_eq!(pi2_verify(&pp, &y_cv, &proof, &b), Err(Pi2Failure::Challenge));
        let bad = Pi2Proof { z_hat: proof.z_hat + Scalar::ONE, ..proof };
        assert_eq!(pi2_verify(&pp, &y_cv, &bad, &a), Err(Pi2Failure::Relation));
        let bad = Pi2Proof { c: proof.c + Scalar::ONE, ..proof };
        assert_eq!(pi2_verify(&pp, &y_cv, &bad, &a), Err(Pi2Failure::Challenge));
    }

    #[test]
    fn wrong_witness_fails() {
        let (_, pp) = setup_params_seeded(128, b"s0").unwrap();
        let mut rng = seeded_rng(b"pi2w");
        let y_cv = G1::random(&mut rng);
        let x = Scalar::random(&mut rng);
        let z = Scalar::random(&mut rng);
        let pair = pair_for(&pp, &y_cv, &x, &z);
        let proof = pi2_prove(&pp, &y_cv, &(x + Scalar::ONE), &z, &pair, &mut rng);
        assert_eq!(pi2_verify(&pp, &y_cv, &proof, &pair), Err(Pi2Failure::Relation));
    }
}
