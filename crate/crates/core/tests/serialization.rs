mod common;

use asso::algebra::{derive_generators, setup_params_seeded, GENERATOR_TAGS};
use asso::protocol::{user_show_tag, AuthTag, Showing, Ticket, TicketRequest, UserTicket};
use asso::transport::{decode_envelope, encode_envelope, Encode, MessageType};
use asso::{Error, PublicParams};
use bls12_381::hash_to_curve::{ExpandMsgXmd, HashToCurve};
use bls12_381::{G1Affine, G1Projective};
use common::World;
use ff::Field;
use proptest::prelude::*;
use std::sync::OnceLock;

/// RFC 9380 test vector for BLS12381G1_XMD:SHA-256_SSWU_RO_ with an empty
/// message. Only the x-coordinate is compared.
#[test]
fn hash_to_curve_matches_published_vector() {
    let dst = b"QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_";
    let p = <G1Projective as HashToCurve<ExpandMsgXmd<sha2_09::Sha256>>>::hash_to_curve(b"", dst);
    let x = "052926add2207b76ca4fa57a8734416c8dc95e24501772c814278700eed6d1e4e8cf62d9c09db0fac349612b759e79a1";
    assert_eq!(hex::encode(&G1Affine::from(p).to_uncompressed()[..48]), x);
}

#[test]
fn generator_tags_are_fixed() {
    assert_eq!(GENERATOR_TAGS, ["ASSO:g", "ASSO:h", "ASSO:xi", "ASSO:htilde", "ASSO:frakg"]);
    let (g1s, _) = derive_generators();
    let (_, pp) = setup_params_seeded(128, b"another seed").unwrap();
    assert_eq!([pp.g, pp.h, pp.xi, pp.h_tilde], g1s);
}

#[test]
fn every_tag_field_feeds_the_encoding() {
    let mut w = World::new("field-encoding", 1);
    let issued = w.issue();
    let tag = issued.ticket.entries[0].tag.clone();
    let base = tag.encode_to_vec();
    let g = w.pp.g;
    let one = asso::Scalar::ONE;
    let mutations: [fn(&mut AuthTag, asso::G1, asso::Scalar); 10] = [
        |t, g, _| t.p += g,
        |t, g, _| t.q += g,
        |t, g, _| t.ephemeral += g,
        |t, g, _| t.designated += g,
        |t, g, _| t.escrow += g,
        |t, _, _| t.text.push('!'),
        |t, _, o| t.serial += o,
        |t, _, o| t.w += o,
        |t, _, o| t.e += o,
        |t, g, _| t.z += g,
    ];
    for (i, m) in mutations.iter().enumerate() {
        let mut t = tag.clone();
        m(&mut t, g, one);
        assert_ne!(t.encode_to_vec(), base, "field {i}");
    }
}

#[test]
fn envelopes_reject_foreign_input() {
    let (_, pp) = setup_params_seeded(128, b"s0").unwrap();
    let good = encode_envelope(MessageType::PublicParams, &pp);
    assert_eq!(&good[..7], b"ASSO\x00\x01\x01");

    let mut bad = good.clone();
    bad[0] = b'X';
    assert!(matches!(decode_envelope::<PublicParams>(MessageType::PublicParams, &bad), Err(Error::BadMagic)));
    let mut bad = good.clone();
    bad[5] = 2;
    assert!(matches!(
        decode_envelope::<PublicParams>(MessageType::PublicParams, &bad),
        Err(Error::UnsupportedVersion(2))
    ));
    let mut bad = good.clone();
    bad[6] = 0x7f;
    assert!(matches!(
        decode_envelope::<PublicParams>(MessageType::PublicParams, &bad),
        Err(Error::UnknownMessageType(0x7f))
    ));
    assert!(matches!(
        decode_envelope::<Ticket>(MessageType::Ticket, &good),
        Err(Error::WrongMessageType { expected: 0x06, found: 0x01 })
    ));
    let mut bad = good.clone();
    bad.push(0);
    assert!(decode_envelope::<PublicParams>(MessageType::PublicParams, &bad).is_err());
    assert!(decode_envelope::<PublicParams>(MessageType::PublicParams, &good[..good.len() - 1]).is_err());
}

#[test]
fn encoding_is_deterministic() {
    let mut w = World::new("determinism", 2);
    let issued = w.issue();
    let ut = UserTicket { service_set: w.set.clone(), z_u: issued.z_u, ticket: issued.ticket.clone() };
    assert_eq!(ut.encode_to_vec(), ut.clone().encode_to_vec());
    let (pp, y_cv, x_u) = (w.pp.clone(), w.y_cv(), w.x_u());
    let s = user_show_tag(&pp, &y_cv, &issued.ticket, &issued.z_u, &x_u, "V1", &mut w.rng).unwrap();
    assert_eq!(s.encode_to_vec(), s.encode_to_vec());
}

fn sample_envelopes() -> &'static [(MessageType, Vec<u8>)] {
    static CORPUS: OnceLock<Vec<(MessageType, Vec<u8>)>> = OnceLock::new();
    CORPUS.get_or_init(build_corpus)
}

fn build_corpus() -> Vec<(MessageType, Vec<u8>)> {
    let mut w = World::new("fuzz-corpus", 1);
    let issued = w.issue();
    let (pp, y_cv, x_u) = (w.pp.clone(), w.y_cv(), w.x_u());
    let s = user_show_tag(&pp, &y_cv, &issued.ticket, &issued.z_u, &x_u, "V1", &mut w.rng).unwrap();
    vec![
        (MessageType::PublicParams, encode_envelope(MessageType::PublicParams, &pp)),
        (MessageType::TicketRequest, encode_envelope(MessageType::TicketRequest, &issued.request)),
        (MessageType::Ticket, encode_envelope(MessageType::Ticket, &issued.ticket)),
        (MessageType::Showing, encode_envelope(MessageType::Showing, &s)),
    ]
}

fn try_decode(ty: MessageType, bytes: &[u8]) -> bool {
    match ty {
        MessageType::PublicParams => decode_envelope::<PublicParams>(ty, bytes).is_ok(),
        MessageType::TicketRequest => decode_envelope::<TicketRequest>(ty, bytes).is_ok(),
        MessageType::Ticket => decode_envelope::<Ticket>(ty, bytes).is_ok(),
        MessageType::Showing => decode_envelope::<Showing>(ty, bytes).is_ok(),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn decoders_never_panic_on_noise(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
        for ty in [MessageType::PublicParams, MessageType::TicketRequest, MessageType::Ticket, MessageType::Showing] {
            let mut framed = b"ASSO\x00\x01".to_vec();
            framed.push(ty as u8);
            framed.extend_from_slice(&bytes);
            let _ = try_decode(ty, &framed);
        }
    }

    #[test]
    fn single_byte_corruption_never_panics(pick in any::<prop::sample::Index>(), at in any::<prop::sample::Index>(), flip in 1u8..=255) {
        let corpus = sample_envelopes();
        let (ty, bytes) = &corpus[pick.index(corpus.len())];
        let mut b = bytes.clone();
        let i = at.index(b.len());
        b[i] ^= flip;
        let _ = try_decode(*ty, &b);
    }
}
