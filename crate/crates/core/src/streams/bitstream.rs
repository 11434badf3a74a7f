use std::fmt;

use crate::error::{Error, Result};
use crate::streams::UnaryValue;

const WORD: usize = 64;

/// A finite bit sequence, packed into 64-bit words. Bit `t` is the value on
/// the wire at clock cycle `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitStream {
    words: Vec<u64>,
    len: usize,
}

impl BitStream {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        Self::thermometer(len, len)
    }

    /// `ones` leading 1s followed by 0s.
    pub fn thermometer(ones: usize, len: usize) -> Self {
        let ones = ones.min(len);
        let mut s = Self::zeros(len);
        let full = ones / WORD;
        s.words[..full].fill(u64::MAX);
        let rem = ones % WORD;
        if rem > 0 {
            s.words[full] = (1u64 << rem) - 1;
        }
        s
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::zeros(len);
        for t in 0..len {
            if f(t) {
                s.words[t / WORD] |= 1 << (t % WORD);
            }
        }
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        Self::from_fn(bits.len(), |t| bits[t])
    }

    /// Parses a debug dump of `0`/`1` characters. Whitespace and `_` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (pos, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '_' => {}
                other => {
                    return Err(Error::param(format!(
                        "unexpected character {other:?} at offset {pos} in bit stream"
                    )))
                }
            }
        }
        Ok(Self::from_bits(bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, t: usize) -> bool {
        assert!(t < self.len, "bit {t} out of range for stream of length {}", self.len);
        self.words[t / WORD] >> (t % WORD) & 1 == 1
    }

    pub fn set(&mut self, t: usize, bit: bool) {
        assert!(t < self.len, "bit {t} out of range for stream of length {}", self.len);
        let mask = 1u64 << (t % WORD);
        if bit {
            self.words[t / WORD] |= mask;
        } else {
            self.words[t / WORD] &= !mask;
        }
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of 1s among the first `t` bits.
    pub fn prefix_popcount(&self, t: usize) -> u64 {
        let t = t.min(self.len);
        let full = t / WORD;
        let mut count: u64 = self.words[..full].iter().map(|w| w.count_ones() as u64).sum();
        let rem = t % WORD;
        if rem > 0 {
            count += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        count
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |t| self.get(t))
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> Self {
        let mut out = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.clear_tail();
        out
    }

    /// Per-bit `sel ? self : other`.
    pub fn select(sel: &Self, when_one: &Self, when_zero: &Self) -> Result<Self> {
        check_len(sel, when_one)?;
        check_len(sel, when_zero)?;
        let words = sel
            .words
            .iter()
            .zip(&when_one.words)
            .zip(&when_zero.words)
            .map(|((s, a), b)| (s & a) | (!s & b))
            .collect();
        Ok(Self {
            words,
            len: sel.len,
        })
    }

    /// First `t` bits.
    pub fn prefix(&self, t: usize) -> Self {
        let t = t.min(self.len);
        Self::from_fn(t, |i| self.get(i))
    }

    /// `popcount / len`, requiring a power-of-two length.
    pub fn measure(&self) -> Result<UnaryValue> {
        if !self.len.is_power_of_two() {
            return Err(Error::param(format!(
                "stream length {} is not a power of two",
                self.len
            )));
        }
        UnaryValue::new(self.popcount(), self.len.trailing_zeros())
    }

    /// True iff the bits never go from 0 back to 1.
    pub fn is_thermometer(&self) -> bool {
        let ones = self.popcount() as usize;
        self.prefix_popcount(ones) as usize == ones
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        check_len(self, other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self {
            words,
            len: self.len,
        })
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

fn check_len(a: &BitStream, b: &BitStream) -> Result<()> {
    if a.len != b.len {
        return Err(Error::param(format!(
            "stream lengths differ: {} vs {}",
            a.len, b.len
        )));
    }
    Ok(())
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream({self})")
    }
}
