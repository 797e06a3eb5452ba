//! Arithmetic in GF(2^k) for 1 <= k <= 8.
//!
//! Elements are bit vectors of polynomial coefficients reduced modulo a fixed
//! irreducible polynomial per degree. Multiplication, inversion and square
//! roots are served from tables built once per field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least irreducible polynomial of each degree over GF(2), as bit masks
/// including the leading term. Index `k - 1`.
const REDUCTION_POLYNOMIALS: [u16; 8] = [
    0b10,          // x
    0b111,         // x^2 + x + 1
    0b1011,        // x^3 + x + 1
    0b1_0011,      // x^4 + x + 1
    0b10_0101,     // x^5 + x^2 + 1
    0b100_0011,    // x^6 + x + 1
    0b1000_0011,   // x^7 + x + 1
    0b1_0001_1011, // x^8 + x^4 + x^3 + x + 1
];

pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

#[derive(Clone)]
pub struct FiniteField {
    k: u32,
    poly: u16,
    mul: Vec<u8>,
    inv: Vec<u8>,
    sqrt: Vec<u8>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteField").field("k", &self.k).field("poly", &format_args!("{:#b}", self.poly)).finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
    }
}

impl Eq for FiniteField {}

/// Carry-less multiplication followed by reduction modulo `poly` of degree `k`.
fn mul_reduce(a: u8, b: u8, k: u32, poly: u16) -> u8 {
    let mut acc: u16 = 0;
    for i in 0..8 {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u16) << i;
        }
    }
    for bit in (k..16).rev() {
        if (acc >> bit) & 1 == 1 {
            acc ^= poly << (bit - k);
        }
    }
    acc as u8
}

impl FiniteField {
    /// GF(2^k) with the table-fixed reduction polynomial.
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&k) {
            return Err(Error::Config(format!("field degree k = {k} outside 1..={MAX_DEGREE}")));
        }
        let poly = REDUCTION_POLYNOMIALS[(k - 1) as usize];
        let q = 1usize << k;
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[a * q + b] = mul_reduce(a as u8, b as u8, k, poly);
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("nonzero element of a field has an inverse") as u8;
        }
        let mut sqrt = vec![0u8; q];
        for a in 0..q {
            sqrt[mul[a * q + a] as usize] = a as u8;
        }
        Ok(FiniteField { k, poly, mul, inv, sqrt })
    }

    /// The field with `q` elements, `q` a power of two.
    pub fn with_order(q: u32) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::Config(format!("q = {q} is not a power of 2 (only characteristic 2 is supported)")));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        1usize << self.k
    }

    pub fn reduction_polynomial(&self) -> u16 {
        self.poly
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(|x| FieldElement(x as u8))
    }

    /// Element from its bit value; fails if the value is not reduced.
    pub fn element(&self, bits: u8) -> Result<FieldElement> {
        if (bits as usize) < self.order() {
            Ok(FieldElement(bits))
        } else {
            Err(Error::Domain(format!("{bits} is not an element of GF({})", self.order())))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[((a.0 as usize) << self.k) | b.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    /// Inverse for callers that have already excluded zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.inv[a.0 as usize])
    }

    /// The unique `b` with `b^2 = a`. Equals `a^(2^(k-1))`.
    #[inline]
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.sqrt[a.0 as usize])
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}
