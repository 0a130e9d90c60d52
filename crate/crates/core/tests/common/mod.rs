#![allow(dead_code)]

use asso::algebra::{seeded_rng, setup_params_seeded, MasterSecret, PublicParams, Scalar, G1, G2};
use asso::credentials::Role;
use asso::protocol::{
    issuer_issue_ticket, register, user_build_ticket_request, FixedText, Registered, Registry, ServiceSet, Ticket,
    TicketRequest,
};
use rand_chacha::ChaCha20Rng;

pub struct World {
    pub msk: MasterSecret,
    pub pp: PublicParams,
    pub reg: Registry,
    pub issuer: Registered,
    pub user: Registered,
    pub cv: Registered,
    pub verifiers: Vec<Registered>,
    pub set: ServiceSet,
    pub rng: ChaCha20Rng,
}

pub struct Issued {
    pub z_u: Scalar,
    pub request: TicketRequest,
    pub ticket: Ticket,
}

impl World {
    /// CA set-up plus an issuer, one user, a central verifier and `n` verifiers `V1..Vn`.
    pub fn new(seed: &str, n: usize) -> Self {
        let (msk, pp) = setup_params_seeded(128, b"s0").unwrap();
        let mut rng = seeded_rng(seed.as_bytes());
        let mut reg = Registry::new();
        let issuer = register(&pp, &msk, &mut reg, Role::Issuer, "I", &mut rng).unwrap();
        let user = register(&pp, &msk, &mut reg, Role::User, "alice", &mut rng).unwrap();
        let cv = register(&pp, &msk, &mut reg, Role::CentralVerifier, "CV", &mut rng).unwrap();
        let verifiers: Vec<_> = (1..=n)
            .map(|i| register(&pp, &msk, &mut reg, Role::Verifier, &format!("V{i}"), &mut rng).unwrap())
            .collect();
        let set = ServiceSet::with_central(verifiers.iter().map(|v| v.id.clone()), "CV").unwrap();
        World { msk, pp, reg, issuer, user, cv, verifiers, set, rng }
    }

    pub fn y_cv(&self) -> G1 {
        *self.cv.keys.public()
    }

    pub fn y_i(&self) -> G2 {
        *self.issuer.keys.public_g2().unwrap()
    }

    pub fn x_u(&self) -> Scalar {
        *self.user.keys.secret()
    }

    pub fn issue(&mut self) -> Issued {
        self.issue_for(&self.user.clone())
    }

    pub fn issue_for(&mut self, user: &Registered) -> Issued {
        let (z_u, request) =
            user_build_ticket_request(&self.pp, &self.y_cv(), &user.keys, &user.credential, &self.set, &mut self.rng)
                .unwrap();
        let ticket = issuer_issue_ticket(
            &self.pp,
            &self.issuer.keys,
            &self.reg,
            &request,
            &FixedText("valid 24h".into()),
            &mut self.rng,
        )
        .unwrap();
        Issued { z_u, request, ticket }
    }

    pub fn verifier(&self, id: &str) -> &Registered {
        if id == self.cv.id {
            return &self.cv;
        }
        self.verifiers.iter().find(|v| v.id == id).unwrap()
    }
}
