//! The pseudonym-ownership sigma protocol, generic over the group so it can
//! be exercised both on the real curve and on the toy group.
//!
//! Statement: `P = xi^x · Y^z` and `Q = xi^z` for the prover's `(x, z)`.

use ff::Field;
use rand::RngCore;

use crate::algebra::toy::{ToyElement, ToyScalar};
use crate::algebra::{Scalar, G1};

pub trait SchnorrGroup {
    type Scalar: Field;
    type Element: Copy + PartialEq + std::fmt::Debug;

    fn op(a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn exp(base: &Self::Element, k: &Self::Scalar) -> Self::Element;
}

/// G1 of BLS12-381.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve;

impl SchnorrGroup for Curve {
    type Scalar = Scalar;
    type Element = G1;

    fn op(a: &G1, b: &G1) -> G1 {
        a + b
    }

    fn exp(base: &G1, k: &Scalar) -> G1 {
        base * k
    }
}

/// The order-65521 toy group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Toy;

impl SchnorrGroup for Toy {
    type Scalar = ToyScalar;
    type Element = ToyElement;

    fn op(a: &ToyElement, b: &ToyElement) -> ToyElement {
        a.op(*b)
    }

    fn exp(base: &ToyElement, k: &ToyScalar) -> ToyElement {
        base.pow(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudonymStatement<G: SchnorrGroup> {
    pub xi: G::Element,
    pub y_cv: G::Element,
    pub p: G::Element,
    pub q: G::Element,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudonymCommitment<G: SchnorrGroup> {
    pub p: G::Element,
    pub q: G::Element,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudonymResponse<G: SchnorrGroup> {
    pub x: G::Scalar,
    pub z: G::Scalar,
}

impl<G: SchnorrGroup> PseudonymStatement<G> {
    pub fn from_witness(xi: G::Element, y_cv: G::Element, x: &G::Scalar, z: &G::Scalar) -> Self {
        PseudonymStatement { xi, y_cv, p: G::op(&G::exp(&xi, x), &G::exp(&y_cv, z)), q: G::exp(&xi, z) }
    }

    /// `(xi^{x'} Y^{z'}, xi^{z'})`. The `x'` nonce is shared across every
    /// pseudonym in the issuing proof, so it is passed in.
    pub fn commit(&self, x_nonce: &G::Scalar, z_nonce: &G::Scalar) -> PseudonymCommitment<G> {
        PseudonymCommitment {
            p: G::op(&G::exp(&self.xi, x_nonce), &G::exp(&self.y_cv, z_nonce)),
            q: G::exp(&self.xi, z_nonce),
        }
    }

    pub fn check(&self, t: &PseudonymCommitment<G>, c: &G::Scalar, r: &PseudonymResponse<G>) -> bool {
        let p = G::op(&G::op(&G::exp(&self.xi, &r.x), &G::exp(&self.y_cv, &r.z)), &G::exp(&self.p, c));
        let q = G::op(&G::exp(&self.xi, &r.z), &G::exp(&self.q, c));
        p == t.p && q == t.q
    }
}

/// `nonce - c · secret`.
pub fn respond<F: Field>(nonce: &F, c: &F, secret: &F) -> F {
    *nonce - *c * secret
}

/// Prover state between commitment and challenge.
pub struct PseudonymProver<G: SchnorrGroup> {
    x: G::Scalar,
    z: G::Scalar,
    x_nonce: G::Scalar,
    z_nonce: G::Scalar,
    pub commitment: PseudonymCommitment<G>,
}

impl<G: SchnorrGroup> PseudonymProver<G> {
    pub fn new<R: RngCore>(stmt: &PseudonymStatement<G>, x: G::Scalar, z: G::Scalar, rng: &mut R) -> Self {
        let x_nonce = G::Scalar::random(&mut *rng);
        let z_nonce = G::Scalar::random(&mut *rng);
        PseudonymProver { x, z, x_nonce, z_nonce, commitment: stmt.commit(&x_nonce, &z_nonce) }
    }

    /// Answers a challenge. Answering two distinct challenges for the same
    /// commitment leaks the witness; see [`extract`].
    pub fn respond(&self, c: &G::Scalar) -> PseudonymResponse<G> {
        PseudonymResponse { x: respond(&self.x_nonce, c, &self.x), z: respond(&self.z_nonce, c, &self.z) }
    }
}

/// Special-soundness extractor: from two accepting transcripts with a common
/// commitment and distinct challenges, recover `(x, z)`.
pub fn extract<F: Field>(c1: &F, r1: (&F, &F), c2: &F, r2: (&F, &F)) -> Option<(F, F)> {
    let dc: Option<F> = (*c2 - c1).invert().into();
    let dc = dc?;
    Some(((*r1.0 - r2.0) * dc, (*r1.1 - r2.1) * dc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::seeded_rng;
    use group::Group;

    #[test]
    fn completeness_on_curve_and_toy() {
        let mut rng = seeded_rng(b"sigma");
        let xi = G1::random(&mut rng);
        let y = G1::random(&mut rng);
        let (x, z) = (Scalar::random(&mut rng), Scalar::random(&mut rng));
        let st = PseudonymStatement::<Curve>::from_witness(xi, y, &x, &z);
        let pr = PseudonymProver::new(&st, x, z, &mut rng);
        let c = Scalar::random(&mut rng);
        assert!(st.check(&pr.commitment, &c, &pr.respond(&c)));
        assert!(!st.check(&pr.commitment, &(c + Scalar::ONE), &pr.respond(&c)));

        let g = ToyElement::generator();
        let y = g.pow(&ToyScalar::from(999u64));
        let (x, z) = (ToyScalar::from(31u64), ToyScalar::from(77u64));
        let st = PseudonymStatement::<Toy>::from_witness(g, y, &x, &z);
        let pr = PseudonymProver::new(&st, x, z, &mut rng);
        let c = ToyScalar::from(5u64);
        assert!(st.check(&pr.commitment, &c, &pr.respond(&c)));
    }

    #[test]
    fn extractor_recovers_witness() {
        let mut rng = seeded_rng(b"extract");
        let xi = G1::random(&mut rng);
        let y = G1::random(&mut rng);
        let (x, z) = (Scalar::random(&mut rng), Scalar::random(&mut rng));
        let st = PseudonymStatement::<Curve>::from_witness(xi, y, &x, &z);
        let pr = PseudonymProver::new(&st, x, z, &mut rng);
        let (c1, c2) = (Scalar::from(3u64), Scalar::from(11u64));
        let (r1, r2) = (pr.respond(&c1), pr.respond(&c2));
        let (ex, ez) = extract(&c1, (&r1.x, &r1.z), &c2, (&r2.x, &r2.z)).unwrap();
        assert_eq!((ex, ez), (x, z));
        assert!(extract(&c1, (&r1.x, &r1.z), &c1, (&r1.x, &r1.z)).is_none());
    }
}
