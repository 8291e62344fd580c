//! Arithmetic in GF(2^t), 3 <= t <= 16, via log/antilog tables.
//!
//! Reduction polynomials (bit i = coefficient of x^i):
//!
//! | t  | polynomial                  |
//! |----|-----------------------------|
//! | 3  | x^3 + x + 1                 |
//! | 4  | x^4 + x + 1                 |
//! | 5  | x^5 + x^2 + 1               |
//! | 6  | x^6 + x + 1                 |
//! | 7  | x^7 + x^3 + 1               |
//! | 8  | x^8 + x^4 + x^3 + x^2 + 1   |
//! | 9  | x^9 + x^4 + 1               |
//! | 10 | x^10 + x^3 + 1              |
//! | 11 | x^11 + x^2 + 1              |
//! | 12 | x^12 + x^6 + x^4 + x + 1    |
//! | 13 | x^13 + x^4 + x^3 + x + 1    |
//! | 14 | x^14 + x^10 + x^6 + x + 1   |
//! | 15 | x^15 + x + 1                |
//! | 16 | x^16 + x^12 + x^3 + x + 1   |
//!
//! All are primitive, so `x` (value 2) generates the multiplicative group.

use std::fmt;

use crate::error::{param, Error, Result};

pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 16;

const PRIMITIVE_POLYS: [u32; 14] = [
    0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
];

/// Reduction polynomial for a field degree.
pub fn primitive_poly(degree: u32) -> Result<u32> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
        return Err(param(format!(
            "field degree {degree} outside [{MIN_DEGREE}, {MAX_DEGREE}]"
        )));
    }
    Ok(PRIMITIVE_POLYS[(degree - MIN_DEGREE) as usize])
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    degree: u32,
    poly: u32,
    /// `exp[i] = α^i`, doubled so products of logs need no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GaloisField {
    pub fn new(degree: u32) -> Result<Self> {
        let poly = primitive_poly(degree)?;
        let size = 1usize << degree;
        let order = size - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; size];
        let mut x: u32 = 1;
        for i in 0..order {
            exp[i] = x as u16;
            // A repeated value before the cycle closes means `poly` is not
            // primitive; the table in this module is checked by tests.
            debug_assert!(i == 0 || x != 1);
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << degree) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(GaloisField {
            degree,
            poly,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^t`.
    pub fn size(&self) -> usize {
        1 << self.degree
    }

    /// Multiplicative order, `2^t - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value as usize >= self.size() {
            return Err(param(format!(
                "value {value} is not an element of GF(2^{})",
                self.degree
            )));
        }
        Ok(FieldElement(value as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size() as u32).map(|v| FieldElement(v as u16))
    }

    /// `α^i` for the primitive element `α = x`.
    pub fn alpha_pow(&self, i: usize) -> FieldElement {
        FieldElement(self.exp[i % self.order()])
    }

    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[s])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(self.order() - l) % self.order()]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % self.order() as u64)) % self.order() as u64) as usize])
    }
}
