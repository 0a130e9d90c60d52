//! A deliberately tiny Schnorr group for extraction tests: the order-65521
//! subgroup of `Z_q^*` with `q = 10 * 65521 + 1 = 655211`. Discrete logs here
//! can be brute-forced, which gives tests an independent witness oracle.

use ff::PrimeField;

/// Scalars modulo the toy group order 65521.
#[derive(PrimeField)]
#[PrimeFieldModulus = "65521"]
#[PrimeFieldGenerator = "17"]
#[PrimeFieldReprEndianness = "little"]
pub struct ToyScalar([u64; 1]);

pub const TOY_ORDER: u64 = 65521;
pub const TOY_MODULUS: u64 = 655_211;

/// Element of the prime-order subgroup, stored as its residue mod `TOY_MODULUS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ToyElement(u64);

impl ToyElement {
    pub const IDENTITY: ToyElement = ToyElement(1);

    /// `2^10 mod q`, which has order exactly 65521.
    pub fn generator() -> Self {
        ToyElement(pow_mod(2, (TOY_MODULUS - 1) / TOY_ORDER, TOY_MODULUS))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn op(self, other: Self) -> Self {
        ToyElement(self.0 * other.0 % TOY_MODULUS)
    }

    pub fn pow(self, k: &ToyScalar) -> Self {
        ToyElement(pow_mod(self.0, toy_to_u64(k), TOY_MODULUS))
    }

    /// Brute-force discrete log base `base`; `None` if `self` is not a power of it.
    pub fn dlog(self, base: Self) -> Option<u64> {
        let mut acc = ToyElement::IDENTITY;
        for k in 0..TOY_ORDER {
            if acc == self {
                return Some(k);
            }
            acc = acc.op(base);
        }
        None
    }
}

pub fn toy_to_u64(k: &ToyScalar) -> u64 {
    let repr = k.to_repr();
    u64::from_le_bytes(repr.as_ref()[..8].try_into().unwrap())
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_has_prime_order() {
        let g = ToyElement::generator();
        assert_ne!(g, ToyElement::IDENTITY);
        assert_eq!(pow_mod(g.value(), TOY_ORDER, TOY_MODULUS), 1);
    }

    #[test]
    fn dlog_brute_force() {
        let g = ToyElement::generator();
        let x = ToyScalar::from(4242u64);
        assert_eq!(g.pow(&x).dlog(g), Some(4242));
        assert_eq!(toy_to_u64(&ToyScalar::from(70000u64)), 70000 - TOY_ORDER);
    }
}
