//! The universal vertex representation: an `n`-bit word.
//!
//! Bit `i` is set exactly when coordinate `i + 1` of the ±1-vector is `-1`,
//! or equivalently when element `i + 1` belongs to the subset of `[n]`.
//! Orthogonality of two vectors is then a popcount of their XOR.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexWord {
    bits: u64,
    n: u8,
}

/// All-ones mask of width `n` (`n <= 64`).
#[inline]
pub fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl VertexWord {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::BadDimension(n));
        }
        if bits & !mask(n) != 0 {
            return Err(Error::WordOutOfRange { bits, n });
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Caller guarantees `1 <= n <= 64` and `bits < 2^n`.
    #[inline]
    pub(crate) fn new_unchecked(bits: u64, n: u32) -> Self {
        debug_assert!((1..=64).contains(&n) && bits & !mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    /// Builds the word of a subset given by 1-based elements.
    pub fn from_subset(elements: &[u32], n: u32) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::Unsupported(format!("element {e} not in [{n}]")));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(bits, n)
    }

    /// Builds a word from ±1 entries.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let n = signs.len() as u32;
        let mut bits = 0u64;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << i,
                _ => return Err(Error::Unsupported(format!("sign entry {s}"))),
            }
        }
        Self::new(bits, n)
    }

    pub fn signs(self) -> Vec<i8> {
        (0..self.n())
            .map(|i| if self.bits >> i & 1 == 1 { -1 } else { 1 })
            .collect()
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> u32 {
        u32::from(self.n)
    }

    /// Negation of the ±1-vector; the complementary subset.
    #[inline]
    pub fn complement(self) -> Self {
        Self {
            bits: self.bits ^ mask(self.n()),
            n: self.n,
        }
    }

    /// Number of `-1` entries.
    #[inline]
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_even(self) -> bool {
        self.weight() % 2 == 0
    }

    #[inline]
    pub fn contains(self, index: u32) -> bool {
        index < self.n() && self.bits >> index & 1 == 1
    }

    /// Coordinatewise sign product, i.e. XOR of words.
    pub fn product(self, other: Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        Ok(Self {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }

    pub fn distance(self, other: Self) -> Result<u32> {
        Ok(self.product(other)?.weight())
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.bits)
    }

    pub fn from_hex(s: &str, n: u32) -> Result<Self> {
        let valid = !s.is_empty()
            && s.len() <= 16
            && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !valid {
            return Err(Error::Unsupported(format!("bad hex word {s:?}")));
        }
        let bits = u64::from_str_radix(s, 16)
            .map_err(|_| Error::Unsupported(format!("bad hex word {s:?}")))?;
        Self::new(bits, n)
    }
}

impl fmt::Debug for VertexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}/{}", self.bits, self.n, width = self.n() as usize)
    }
}

impl fmt::Display for VertexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

impl Serialize for VertexWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Iterates over all `n`-bit words of weight `k` in increasing order
/// (Gosper's hack).
pub fn words_of_weight(n: u32, k: u32) -> impl Iterator<Item = u64> {
    let limit = mask(n);
    let first = if k > n { None } else { Some(mask(k)) };
    let mut next = first;
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 || k == n {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let s = (((r ^ cur) >> 2) / c) | r;
                (s & !limit == 0).then_some(s)
            }
        };
        Some(cur)
    })
}
