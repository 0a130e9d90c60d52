//! Canonical binary encoding, envelopes and append-only record logs.
//!
//! Every value is a sequence of fields; each field is a 4-byte big-endian
//! length followed by the field's own canonical bytes. Hash inputs use the
//! same framing, so `H1(A||B||C)` hashes `len(A)||A||len(B)||B||len(C)||C`.

use bls12_381::{G1Affine, G2Affine};
use ff::PrimeField;

use crate::algebra::{Scalar, G1, G2};
use crate::error::Error;

mod envelope;
mod log;

pub use envelope::{decode_envelope, encode_envelope, peek_type, MessageType, ENVELOPE_HEADER_LEN, MAGIC, VERSION};
pub use log::AppendLog;

pub const SCALAR_LEN: usize = 32;
pub const G1_LEN: usize = 48;
pub const G2_LEN: usize = 96;

#[derive(Default, Debug, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn raw(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Appends `x` as a length-prefixed field.
    pub fn field<T: Encode + ?Sized>(&mut self, x: &T) {
        let at = self.buf.len();
        self.buf.extend_from_slice(&[0; 4]);
        x.encode(self);
        let len = (self.buf.len() - at - 4) as u32;
        self.buf[at..at + 4].copy_from_slice(&len.to_be_bytes());
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf }
    }

    pub fn remaining(&self) -> &'a [u8] {
        self.buf
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], Error> {
        if self.buf.len() < n {
            return Err(Error::Decode(format!("truncated: need {n} bytes, have {}", self.buf.len())));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub fn take_rest(&mut self) -> &'a [u8] {
        std::mem::take(&mut self.buf)
    }

    pub fn u32(&mut self) -> Result<u32, Error> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    /// Reads one length-prefixed field and decodes it, requiring the
    /// decoder to consume the field exactly.
    pub fn field<T: Decode>(&mut self) -> Result<T, Error> {
        let len = self.u32()? as usize;
        let body = self.take(len)?;
        decode_exact(body)
    }
}

/// Canonical encoding. Implementations write their fields in declaration order.
pub trait Encode {
    fn encode(&self, w: &mut Writer);

    fn encode_to_vec(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.into_bytes()
    }
}

pub trait Decode: Sized {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error>;
}

/// Decodes `bytes` as a single `T` with nothing left over.
pub fn decode_exact<T: Decode>(bytes: &[u8]) -> Result<T, Error> {
    let mut r = Reader::new(bytes);
    let v = T::decode(&mut r)?;
    if !r.is_empty() {
        return Err(Error::Decode(format!("{} trailing bytes", r.remaining().len())));
    }
    Ok(v)
}

/// Builder for hash inputs: each pushed value becomes one length-prefixed field.
#[derive(Default, Debug, Clone)]
pub struct Transcript(Writer);

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push<T: Encode + ?Sized>(mut self, x: &T) -> Self {
        self.0.field(x);
        self
    }

    pub fn append<T: Encode + ?Sized>(&mut self, x: &T) {
        self.0.field(x);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0.buf
    }
}

impl Encode for u8 {
    fn encode(&self, w: &mut Writer) {
        w.raw(&[*self]);
    }
}

impl Decode for u8 {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(r.take(1)?[0])
    }
}

impl Encode for u64 {
    fn encode(&self, w: &mut Writer) {
        w.raw(&self.to_be_bytes());
    }
}

impl Decode for u64 {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        Ok(u64::from_be_bytes(r.take(8)?.try_into().unwrap()))
    }
}

impl Encode for str {
    fn encode(&self, w: &mut Writer) {
        w.raw(self.as_bytes());
    }
}

impl Encode for String {
    fn encode(&self, w: &mut Writer) {
        self.as_str().encode(w)
    }
}

impl Decode for String {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        String::from_utf8(r.take_rest().to_vec()).map_err(|_| Error::Decode("invalid UTF-8".into()))
    }
}

/// Scalars are 32 bytes big-endian, strictly below the group order.
impl Encode for Scalar {
    fn encode(&self, w: &mut Writer) {
        let mut b = self.to_repr();
        b.reverse();
        w.raw(&b);
    }
}

impl Decode for Scalar {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let mut b: [u8; SCALAR_LEN] = r.take(SCALAR_LEN)?.try_into().unwrap();
        b.reverse();
        Option::from(Scalar::from_bytes(&b)).ok_or_else(|| Error::Decode("non-canonical scalar".into()))
    }
}

impl Encode for G1 {
    fn encode(&self, w: &mut Writer) {
        w.raw(&G1Affine::from(self).to_compressed());
    }
}

impl Decode for G1 {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let b: [u8; G1_LEN] = r.take(G1_LEN)?.try_into().unwrap();
        // from_compressed enforces canonical form, curve membership and subgroup membership
        Option::<G1Affine>::from(G1Affine::from_compressed(&b))
            .map(G1::from)
            .ok_or_else(|| Error::Decode("invalid G1 encoding".into()))
    }
}

impl Encode for G2 {
    fn encode(&self, w: &mut Writer) {
        w.raw(&G2Affine::from(self).to_compressed());
    }
}

impl Decode for G2 {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let b: [u8; G2_LEN] = r.take(G2_LEN)?.try_into().unwrap();
        Option::<G2Affine>::from(G2Affine::from_compressed(&b))
            .map(G2::from)
            .ok_or_else(|| Error::Decode("invalid G2 encoding".into()))
    }
}

/// Lists: a 4-byte count, then one field per element.
impl<T: Encode> Encode for Vec<T> {
    fn encode(&self, w: &mut Writer) {
        w.raw(&(self.len() as u32).to_be_bytes());
        for x in self {
            w.field(x);
        }
    }
}

impl<T: Decode> Decode for Vec<T> {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        let n = r.u32()? as usize;
        // each element costs at least its 4-byte prefix
        if n > r.remaining().len() / 4 {
            return Err(Error::Decode("list count exceeds payload".into()));
        }
        (0..n).map(|_| r.field()).collect()
    }
}

/// Options: a presence byte, then the value as a field when present.
impl<T: Encode> Encode for Option<T> {
    fn encode(&self, w: &mut Writer) {
        match self {
            None => w.raw(&[0]),
            Some(x) => {
                w.raw(&[1]);
                w.field(x);
            }
        }
    }
}

impl<T: Decode> Decode for Option<T> {
    fn decode(r: &mut Reader<'_>) -> Result<Self, Error> {
        match r.take(1)?[0] {
            0 => Ok(None),
            1 => Ok(Some(r.field()?)),
            b => Err(Error::Decode(format!("bad option tag {b}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::seeded_rng;
    use ff::Field;
    use group::Group;

    #[test]
    fn field_framing_is_length_prefixed() {
        let t = Transcript::new().push("ab").push(&7u8);
        assert_eq!(t.as_bytes(), &[0, 0, 0, 2, b'a', b'b', 0, 0, 0, 1, 7]);
    }

    #[test]
    fn concatenation_ambiguity_is_removed() {
        let a = Transcript::new().push("ab").push("c");
        let b = Transcript::new().push("a").push("bc");
        assert_ne!(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn scalar_big_endian() {
        let bytes = Scalar::from(258u64).encode_to_vec();
        assert_eq!(&bytes[30..], &[1, 2]);
        assert!(bytes[..30].iter().all(|b| *b == 0));
    }

    #[test]
    fn non_canonical_scalar_rejected() {
        assert!(decode_exact::<Scalar>(&[0xff; 32]).is_err());
        // p itself
        let mut p = (-Scalar::ONE).encode_to_vec();
        p[31] += 1;
        assert!(decode_exact::<Scalar>(&p).is_err());
    }

    #[test]
    fn invalid_points_rejected() {
        let mut rng = seeded_rng(b"pts");
        let p = G1::random(&mut rng);
        let mut b = p.encode_to_vec();
        assert_eq!(decode_exact::<G1>(&b).unwrap(), p);
        // clear the compression flag
        b[0] &= 0x7f;
        assert!(decode_exact::<G1>(&b).is_err());
        // x-coordinate above the field modulus
        assert!(decode_exact::<G1>(&[0x9f; 48]).is_err());
        assert!(decode_exact::<G2>(&[0x9f; 96]).is_err());
    }

    #[test]
    fn non_subgroup_point_rejected() {
        // Find x with a curve point y^2 = x^3 + 4 outside the r-torsion; the
        // cofactor of G1 is large so almost any such x works.
        use bls12_381::G1Affine;
        let mut found = false;
        for x in 1u8..=255 {
            let mut b = [0u8; 48];
            b[0] = 0x80;
            b[47] = x;
            let unchecked = Option::<G1Affine>::from(G1Affine::from_compressed_unchecked(&b));
            if let Some(pt) = unchecked {
                if !bool::from(pt.is_torsion_free()) {
                    assert!(decode_exact::<G1>(&b).is_err());
                    found = true;
                    break;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn list_and_option_roundtrip() {
        let v: Vec<String> = vec!["V1".into(), "".into(), "CV".into()];
        assert_eq!(decode_exact::<Vec<String>>(&v.encode_to_vec()).unwrap(), v);
        let o: Option<u8> = Some(3);
        assert_eq!(decode_exact::<Option<u8>>(&o.encode_to_vec()).unwrap(), o);
        assert_eq!(decode_exact::<Option<u8>>(&None::<u8>.encode_to_vec()).unwrap(), None);
        assert!(decode_exact::<Vec<String>>(&[0xff, 0xff, 0xff, 0xff]).is_err());
    }

    #[test]
    fn trailing_bytes_rejected() {
        let mut b = Scalar::ONE.encode_to_vec();
        b.push(0);
        assert!(decode_exact::<Scalar>(&b).is_err());
    }
}
