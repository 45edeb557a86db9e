//! Bit strings written and read most significant bit first.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Takes the first `len` bits of `bytes`.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len > bytes.len() * 8 {
            return Err(Error::MalformedBits(format!(
                "{len} bits requested from {} bytes",
                bytes.len()
            )));
        }
        let mut bytes = bytes[..len.div_ceil(8)].to_vec();
        if !len.is_multiple_of(8) {
            let last = bytes.len() - 1;
            bytes[last] &= 0xffu8 << (8 - len % 8);
        }
        Ok(BitString { bytes, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed bytes; unused low bits of the last byte are zero.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} of {}", self.len);
        self.bytes[i / 8] >> (7 - i % 8) & 1 == 1
    }

    pub fn push_bit(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 1 << (7 - self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit {width} bits");
        for i in (0..width).rev() {
            self.push_bit(value >> i & 1 == 1);
        }
    }

    pub fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push_bit(other.get(i));
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && (0..self.len).all(|i| self.get(i) == other.get(i))
    }
}

impl Ord for BitString {
    /// Lexicographic over bits, a proper prefix first.
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len);
        (0..common)
            .map(|i| self.get(i).cmp(&other.get(i)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len - self.pos
    }

    pub fn read(&mut self, width: u32) -> Result<u64> {
        if width as usize > self.remaining() {
            return Err(Error::MalformedBits(format!(
                "needed {width} bits, {} left",
                self.remaining()
            )));
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = v << 1 | u64::from(self.bits.get(self.pos));
            self.pos += 1;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_back() {
        let mut b = BitString::new();
        b.push(5, 3);
        b.push(0, 0);
        b.push(0x1ff, 9);
        assert_eq!(b.to_string(), "101111111111");
        let mut r = BitReader::new(&b);
        assert_eq!(r.read(3).unwrap(), 5);
        assert_eq!(r.read(9).unwrap(), 0x1ff);
        assert!(r.read(1).is_err());
    }

    #[test]
    fn bytes_round_trip() {
        let mut b = BitString::new();
        b.push(0b1011, 4);
        b.push(0b110, 3);
        let c = BitString::from_bytes(b.as_bytes(), b.len()).unwrap();
        assert_eq!(b, c);
        assert_eq!(b.as_bytes(), &[0b1011_1100]);
        assert!(BitString::from_bytes(&[0], 9).is_err());
        // stray low bits are cleared
        assert_eq!(BitString::from_bytes(&[0xff], 3).unwrap().as_bytes(), &[0xe0]);
    }

    #[test]
    fn order_and_prefix() {
        let mut a = BitString::new();
        a.push(0b10, 2);
        let mut b = a.clone();
        b.push(0, 1);
        let mut c = BitString::new();
        c.push(0b11, 2);
        assert!(a < b && b < c);
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(!a.is_prefix_of(&c));
    }
}
