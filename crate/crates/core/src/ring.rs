//! Finite local rings with residue field F2.
//!
//! Two families are built in: `Z/2^n` and `F2[x]/(x^n)`. Both have `2^n`
//! elements, and both admit an encoding as an `n`-bit word in which the
//! low bit is the residue class modulo the maximal ideal. Units are exactly
//! the odd encodings, which lets downstream tables index units by
//! `repr >> 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{GwError, Result};

/// Largest supported parameter. Elements are packed into a `u64`.
pub const MAX_PARAMETER: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `Z/2^n`.
    Z2k,
    /// `F2[x]/(x^n)`.
    Trunc2,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Z2k => "z2k",
            Family::Trunc2 => "trunc2",
        }
    }
}

impl FromStr for Family {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z2k" => Ok(Family::Z2k),
            "trunc2" => Ok(Family::Trunc2),
            other => Err(GwError::RingSpecParse {
                token: other.to_string(),
                reason: "family must be `z2k` or `trunc2`",
            }),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A ring of the form `Z/2^n` or `F2[x]/(x^n)`, `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpec {
    family: Family,
    n: u32,
}

impl RingSpec {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(GwError::RingSpecParse {
                token: "0".into(),
                reason: "parameter must be at least 1",
            });
        }
        if n > MAX_PARAMETER {
            return Err(GwError::RingSpecParse {
                token: n.to_string(),
                reason: "parameter too large",
            });
        }
        Ok(RingSpec { family, n })
    }

    pub fn z2k(n: u32) -> Self {
        Self::new(Family::Z2k, n).expect("invalid z2k parameter")
    }

    pub fn trunc2(n: u32) -> Self {
        Self::new(Family::Trunc2, n).expect("invalid trunc2 parameter")
    }

    /// Parses `z2k:<n>` or `trunc2:<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        let (family, param) = text.split_once(':').ok_or_else(|| GwError::RingSpecParse {
            token: text.to_string(),
            reason: "expected `<family>:<n>`",
        })?;
        let family: Family = family.parse()?;
        if param.is_empty() || !param.bytes().all(|b| b.is_ascii_digit()) {
            return Err(GwError::RingSpecParse {
                token: param.to_string(),
                reason: "parameter must be a decimal integer",
            });
        }
        let n: u32 = param.parse().map_err(|_| GwError::RingSpecParse {
            token: param.to_string(),
            reason: "parameter out of range",
        })?;
        Self::new(family, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameter(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn num_units(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.family {
            Family::Z2k => a.wrapping_add(b) & self.mask(),
            Family::Trunc2 => a ^ b,
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match self.family {
            Family::Z2k => a.wrapping_neg() & self.mask(),
            Family::Trunc2 => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.family {
            Family::Z2k => a.wrapping_mul(b) & self.mask(),
            Family::Trunc2 => {
                let mut acc = 0u64;
                let mut rest = b & self.mask();
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    acc ^= a << i;
                    rest &= rest - 1;
                }
                acc & self.mask()
            }
        }
    }

    #[inline]
    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        a & 1 == 1
    }

    /// Image in the residue field F2.
    #[inline]
    pub fn residue(&self, a: u64) -> u8 {
        (a & 1) as u8
    }

    /// Multiplicative inverse of a unit, by Newton iteration. Each step
    /// doubles the number of correct low-order digits.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(GwError::NonUnit(self.format(a)));
        }
        Ok(self.inv_unit(a))
    }

    /// Inverse of a value already known to be a unit.
    #[inline]
    pub fn inv_unit(&self, a: u64) -> u64 {
        debug_assert!(self.is_unit(a));
        match self.family {
            Family::Z2k => {
                // a * a == 1 mod 8 for odd a: three correct bits to start.
                let mut x = a;
                for _ in 0..5 {
                    x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
                }
                x & self.mask()
            }
            Family::Trunc2 => {
                // In characteristic 2 the Newton step x(2 - ax) is a * x^2.
                let mut x = 1u64;
                let mut precision = 1u32;
                while precision < self.n {
                    x = self.mul(a, self.square(x));
                    precision *= 2;
                }
                x
            }
        }
    }

    #[inline]
    pub fn one(&self) -> u64 {
        1
    }

    /// Reduces an encoding of a ring with a larger parameter in the same
    /// family. Both families reduce by keeping the low bits.
    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a & self.mask()
    }

    /// Whether the canonical quotient map `self -> target` exists.
    pub fn surjects_onto(&self, target: &RingSpec) -> bool {
        self.family == target.family && self.n >= target.n
    }

    pub fn units_raw(&self) -> impl Iterator<Item = u64> + Clone {
        (0..self.num_units()).map(|i| (i << 1) | 1)
    }

    pub fn ideal_raw(&self) -> impl Iterator<Item = u64> + Clone {
        (0..self.num_units()).map(|i| i << 1)
    }

    pub fn elements_raw(&self) -> impl Iterator<Item = u64> + Clone {
        0..self.size()
    }

    pub fn element(&self, repr: u64) -> Result<RingElement> {
        RingElement::new(*self, repr)
    }

    pub fn enumerate_elements(&self) -> Vec<RingElement> {
        self.elements_raw().map(|r| RingElement { spec: *self, repr: r }).collect()
    }

    pub fn enumerate_units(&self) -> Vec<RingElement> {
        self.units_raw().map(|r| RingElement { spec: *self, repr: r }).collect()
    }

    pub fn enumerate_maximal_ideal(&self) -> Vec<RingElement> {
        self.ideal_raw().map(|r| RingElement { spec: *self, repr: r }).collect()
    }

    /// Text form: decimal for `Z/2^n`, coefficient bits (constant first) for
    /// `F2[x]/(x^n)`.
    pub fn format(&self, a: u64) -> String {
        match self.family {
            Family::Z2k => a.to_string(),
            Family::Trunc2 => (0..self.n)
                .map(|i| if (a >> i) & 1 == 1 { '1' } else { '0' })
                .collect(),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        let err = |reason| GwError::ElementParse {
            spec: *self,
            token: text.to_string(),
            reason,
        };
        let repr = match self.family {
            Family::Z2k => {
                let v: u64 = text.parse().map_err(|_| err("expected a decimal integer"))?;
                if v >= self.size() {
                    return Err(err("out of range"));
                }
                v
            }
            Family::Trunc2 => {
                if text.is_empty() || text.len() > self.n as usize {
                    return Err(err("expected at most n coefficient bits"));
                }
                let mut v = 0u64;
                for (i, ch) in text.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' => v |= 1 << i,
                        _ => return Err(err("coefficients must be 0 or 1")),
                    }
                }
                v
            }
        };
        Ok(RingElement { spec: *self, repr })
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.n)
    }
}

impl FromStr for RingSpec {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        RingSpec::parse(s)
    }
}

/// An element of a [`RingSpec`] with its canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    spec: RingSpec,
    repr: u64,
}

impl RingElement {
    pub fn new(spec: RingSpec, repr: u64) -> Result<Self> {
        if repr > spec.mask() {
            return Err(GwError::ElementParse {
                spec,
                token: repr.to_string(),
                reason: "encoding out of range",
            });
        }
        Ok(RingElement { spec, repr })
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn repr(&self) -> u64 {
        self.repr
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.spec != other.spec {
            return Err(GwError::SpecMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(RingElement {
            spec: self.spec,
            repr: self.spec.add(self.repr, other.repr),
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(RingElement {
            spec: self.spec,
            repr: self.spec.sub(self.repr, other.repr),
        })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(RingElement {
            spec: self.spec,
            repr: self.spec.mul(self.repr, other.repr),
        })
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            spec: self.spec,
            repr: self.spec.neg(self.repr),
        }
    }

    pub fn inv(&self) -> Result<RingElement> {
        Ok(RingElement {
            spec: self.spec,
            repr: self.spec.inv(self.repr)?,
        })
    }

    pub fn is_unit(&self) -> bool {
        self.spec.is_unit(self.repr)
    }

    pub fn residue(&self) -> u8 {
        self.spec.residue(self.repr)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format(self.repr))
    }
}
