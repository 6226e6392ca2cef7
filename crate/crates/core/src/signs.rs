//! Sign distributions on `d·Δ₂`, their extension to the diamond and the
//! eight-element equivalence group acting on them.
//!
//! A distribution is packed into a `u128` whose bit `k` is the sign of the
//! `k`-th lattice point in lexicographic order (`1` stands for a negative
//! sign, matching the exponent in `(-1)^σ`).

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{self, check_degree, lex_index, point_count, reflection_parity, Point};

/// A map `σ: A(d) → Z/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignDistribution {
    degree: u32,
    bits: u128,
}

/// An element of the symmetry group: reflections in the axes (`g`) combined
/// with a global sign change (`ε`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// Reflect in the y-axis: `(x, y) ↦ (-x, y)`.
    pub flip_x: bool,
    /// Reflect in the x-axis: `(x, y) ↦ (x, -y)`.
    pub flip_y: bool,
    /// Change every sign.
    pub negate: bool,
}

impl GroupElement {
    /// All eight group elements, identity first.
    pub fn all() -> [GroupElement; 8] {
        let mut out = [GroupElement { flip_x: false, flip_y: false, negate: false }; 8];
        for (k, g) in out.iter_mut().enumerate() {
            g.flip_x = k & 1 != 0;
            g.flip_y = k & 2 != 0;
            g.negate = k & 4 != 0;
        }
        out
    }
}

/// Bit masks used by the group action for one degree.
#[derive(Debug, Clone, Copy)]
struct Masks {
    all: u128,
    odd_x: u128,
    odd_y: u128,
}

fn masks(degree: u32) -> Masks {
    let mut odd_x = 0u128;
    let mut odd_y = 0u128;
    for (k, (i, j)) in lattice::lattice_points(degree).into_iter().enumerate() {
        if i & 1 == 1 {
            odd_x |= 1 << k;
        }
        if j & 1 == 1 {
            odd_y |= 1 << k;
        }
    }
    Masks { all: full_mask(degree), odd_x, odd_y }
}

fn full_mask(degree: u32) -> u128 {
    let n = point_count(degree);
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Number of equivalence classes, `2^(|A(d)| - 3)`.
pub fn class_count(degree: u32) -> u128 {
    1u128 << (point_count(degree) - 3)
}

impl SignDistribution {
    /// Builds a distribution from packed bits; bits beyond `|A(d)|` are rejected.
    pub fn from_bits(degree: u32, bits: u128) -> Result<Self> {
        check_degree(degree)?;
        if bits & !full_mask(degree) != 0 {
            return Err(Error::Format(format!("sign bits exceed {} points", point_count(degree))));
        }
        Ok(SignDistribution { degree, bits })
    }

    /// All signs zero.
    pub fn zeros(degree: u32) -> Result<Self> {
        Self::from_bits(degree, 0)
    }

    /// The constant distribution `𝟙`.
    pub fn ones(degree: u32) -> Result<Self> {
        check_degree(degree)?;
        Ok(SignDistribution { degree, bits: full_mask(degree) })
    }

    /// Harnack distribution: `η(i, j) = (i + 1)(j + 1) mod 2`.
    pub fn harnack(degree: u32) -> Result<Self> {
        Self::from_fn(degree, |(i, j)| ((i + 1) * (j + 1)) & 1 == 1)
    }

    /// Builds a distribution from a predicate (true means sign bit `1`).
    pub fn from_fn(degree: u32, f: impl Fn(Point) -> bool) -> Result<Self> {
        check_degree(degree)?;
        let mut bits = 0u128;
        for (k, p) in lattice::lattice_points(degree).into_iter().enumerate() {
            if f(p) {
                bits |= 1 << k;
            }
        }
        Ok(SignDistribution { degree, bits })
    }

    /// Parses a string of `0`/`1` characters in lexicographic order;
    /// whitespace is ignored.
    pub fn parse(degree: u32, text: &str) -> Result<Self> {
        check_degree(degree)?;
        let mut bits = 0u128;
        let mut count = 0usize;
        let expected = point_count(degree);
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let bit = match ch {
                '0' => 0u128,
                '1' => 1u128,
                other => return Err(Error::SignCharacter(other)),
            };
            if count < expected {
                bits |= bit << count;
            }
            count += 1;
        }
        if count != expected {
            return Err(Error::SignLength { degree, found: count, expected });
        }
        Ok(SignDistribution { degree, bits })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// Sign bit of a point of `d·Δ₂`.
    pub fn get(&self, p: Point) -> Result<u8> {
        let k =
            lex_index(self.degree, p).ok_or(Error::PointOutsideTriangle { point: p, degree: self.degree })?;
        Ok(((self.bits >> k) & 1) as u8)
    }

    pub fn bit(&self, lex: usize) -> u8 {
        ((self.bits >> lex) & 1) as u8
    }

    /// Returns a copy with the sign of `p` set to `value`.
    pub fn with(&self, p: Point, value: bool) -> Result<Self> {
        let k =
            lex_index(self.degree, p).ok_or(Error::PointOutsideTriangle { point: p, degree: self.degree })?;
        let mut out = *self;
        if value {
            out.bits |= 1 << k;
        } else {
            out.bits &= !(1 << k);
        }
        Ok(out)
    }

    /// Returns a copy with the sign of `p` changed.
    pub fn toggled(&self, p: Point) -> Result<Self> {
        let k =
            lex_index(self.degree, p).ok_or(Error::PointOutsideTriangle { point: p, degree: self.degree })?;
        Ok(SignDistribution { degree: self.degree, bits: self.bits ^ (1 << k) })
    }

    /// Sign at a diamond point `(x, y)` with `|x| + |y| <= d`, obtained by
    /// reflecting: `σ(-i, j) = σ(i, j) + i`, `σ(i, -j) = σ(i, j) + j`.
    pub fn extended(&self, p: Point) -> Result<u8> {
        let base = self.get((p.0.abs(), p.1.abs()))?;
        Ok(base ^ reflection_parity(p))
    }

    /// Image under a group element: `σ'(u) = ε + σ(g(u))`.
    pub fn transform(&self, g: GroupElement) -> Self {
        let m = masks(self.degree);
        let mut bits = self.bits;
        if g.flip_x {
            bits ^= m.odd_x;
        }
        if g.flip_y {
            bits ^= m.odd_y;
        }
        if g.negate {
            bits ^= m.all;
        }
        SignDistribution { degree: self.degree, bits }
    }

    /// The eight members of the equivalence class (always pairwise distinct).
    pub fn orbit(&self) -> [SignDistribution; 8] {
        GroupElement::all().map(|g| self.transform(g))
    }

    fn anchor_bits(&self) -> (u8, u8, u8) {
        let d = self.degree as usize;
        (self.bit(0), self.bit(d + 1), self.bit(1))
    }

    /// The unique class member whose signs at `(0,0)`, `(1,0)` and `(0,1)`
    /// are all `1`.
    pub fn canonicalize(&self) -> Self {
        let (s00, s10, s01) = self.anchor_bits();
        let negate = s00 == 0;
        let e = negate as u8;
        let g = GroupElement { flip_x: (s10 ^ e) == 0, flip_y: (s01 ^ e) == 0, negate };
        self.transform(g)
    }

    pub fn is_canonical(&self) -> bool {
        self.anchor_bits() == (1, 1, 1)
    }

    /// The canonical representative with index `k`.  The three anchor bits
    /// are fixed to `1`; the binary digits of `k` fill the remaining
    /// positions in lexicographic order, most significant digit first.
    pub fn from_index(degree: u32, index: u128) -> Result<Self> {
        check_degree(degree)?;
        let count = class_count(degree);
        if index >= count {
            return Err(Error::ClassIndexOutOfRange { degree, index, count });
        }
        Ok(SignDistribution { degree, bits: index_to_bits(degree, index) })
    }

    /// Inverse of [`SignDistribution::from_index`] for canonical members.
    pub fn to_index(&self) -> u128 {
        let c = self.canonicalize();
        let d = self.degree;
        let free = point_count(d) as u32 - 3;
        let low_len = d - 1;
        let low = (c.bits >> 2) & ((1u128 << low_len) - 1);
        let high = c.bits >> (d + 2);
        let r = low | (high << low_len);
        reverse_low(r, free)
    }
}

fn reverse_low(value: u128, len: u32) -> u128 {
    if len == 0 {
        0
    } else {
        value.reverse_bits() >> (128 - len)
    }
}

/// Packed bits of the canonical representative with the given index.
#[inline]
pub fn index_to_bits(degree: u32, index: u128) -> u128 {
    let free = point_count(degree) as u32 - 3;
    let r = reverse_low(index, free);
    let low_len = degree - 1;
    let low = r & ((1u128 << low_len) - 1);
    let high = r >> low_len;
    0b11 | (1u128 << (degree + 1)) | (low << 2) | (high << (degree + 2))
}

impl fmt::Display for SignDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..point_count(self.degree) {
            f.write_str(if self.bit(k) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}
