//! Configurations of the puzzle: vectors in F₂ⁿ packed into 64-bit words.
//!
//! Bit `i` (0-based) holds the state of vertex `s_{i+1}`. The text form is a
//! bitstring whose leftmost character is the state of `s_1`.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    len: usize,
    words: Vec<u64>,
}

impl Config {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// The standard basis vector of vertex `s_vertex` (1-based).
    pub fn unit(len: usize, vertex: usize) -> Self {
        let mut c = Self::zeros(len);
        c.set(vertex - 1, true);
        c
    }

    /// Builds a configuration from the low `len` bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "from_u64 needs len <= 64");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let mut c = Self::zeros(len);
        if len > 0 {
            c.words[0] = bits & mask;
        }
        c
    }

    /// Packs the configuration into one word; `None` when `len > 64`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Parses a bitstring and checks that it has exactly `len` characters.
    pub fn parse_with_len(s: &str, len: usize) -> Result<Self> {
        let c: Config = s.parse()?;
        if c.len != len {
            return Err(Error::ConfigLength {
                got: c.len,
                expected: len,
            });
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Dot product over F₂.
    pub fn dot(&self, other: &Config) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// `|supp(self) ∩ supp(other)|`.
    pub fn dot_count(&self, other: &Config) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// 0-based indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }
}

impl BitXorAssign<&Config> for Config {
    fn bitxor_assign(&mut self, rhs: &Config) {
        debug_assert_eq!(self.len, rhs.len);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&Config> for &Config {
    type Output = Config;

    fn bitxor(self, rhs: &Config) -> Config {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut c = Config::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set(i, true),
                _ => return Err(Error::ConfigParse(s.to_string())),
            }
        }
        if c.len == 0 {
            return Err(Error::ConfigParse(s.to_string()));
        }
        Ok(c)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Config({self})")
    }
}

impl Serialize for Config {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Config {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_form_is_leftmost_first() {
        let c: Config = "10001".parse().unwrap();
        assert!(c.get(0) && c.get(4));
        assert_eq!(c.count_ones(), 2);
        assert_eq!(c.to_u64(), Some(0b10001));
        assert_eq!(c.to_string(), "10001");
    }

    #[test]
    fn hamming_weights() {
        for (s, w) in [("0000", 0), ("1100", 2), ("10001", 2)] {
            assert_eq!(s.parse::<Config>().unwrap().count_ones(), w);
        }
    }

    #[test]
    fn rejects_bad_strings() {
        assert!(matches!("10a1".parse::<Config>(), Err(Error::ConfigParse(_))));
        assert!(matches!("".parse::<Config>(), Err(Error::ConfigParse(_))));
        assert_eq!(
            Config::parse_with_len("101", 4),
            Err(Error::ConfigLength { got: 3, expected: 4 })
        );
    }

    #[test]
    fn multiword_ones() {
        let mut c = Config::zeros(130);
        for i in [0, 63, 64, 129] {
            c.set(i, true);
        }
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(c.to_u64(), None);
    }

    proptest! {
        #[test]
        fn string_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..150)) {
            let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let c: Config = s.parse().unwrap();
            prop_assert_eq!(c.to_string(), s);
            prop_assert_eq!(c.count_ones(), bits.iter().filter(|&&b| b).count());
        }
    }
}
