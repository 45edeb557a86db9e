//! Lexicographic ranking of sequences whose positions are partitioned into
//! groups, each group being a fixed multiset of letters.
//!
//! A type class is the one-group case. A V-shell is the case where the group
//! of a position is its side-information letter and each group's multiset is
//! the conditional letter count for that side letter.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bigmath::multinomial;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct GroupedMultiset {
    groups: Vec<usize>,
    counts: Vec<Vec<u32>>,
    lens: Vec<u32>,
    size: u64,
}

impl GroupedMultiset {
    pub fn new(groups: Vec<usize>, counts: Vec<Vec<u32>>) -> Result<Self> {
        let mut lens = vec![0u32; counts.len()];
        for &g in &groups {
            *lens.get_mut(g).ok_or_else(|| {
                Error::TypeMismatch(format!("position group {g} has no letter counts"))
            })? += 1;
        }
        for (g, (c, &len)) in counts.iter().zip(&lens).enumerate() {
            let total: u32 = c.iter().sum();
            if total != len {
                return Err(Error::TypeMismatch(format!(
                    "group {g} has {len} positions but its counts sum to {total}"
                )));
            }
        }
        let size = counts
            .iter()
            .fold(BigUint::from(1u32), |acc, c| acc * multinomial(c));
        let size = size.to_u64().ok_or_else(|| Error::ConfigurationTooLarge {
            what: "index space",
            items: size.to_string(),
            cap: u64::MAX,
        })?;
        Ok(GroupedMultiset {
            groups,
            counts,
            lens,
            size,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn rank(&self, letters: &[usize]) -> Result<u64> {
        if letters.len() != self.groups.len() {
            return Err(Error::TypeMismatch(format!(
                "sequence of length {} for an index over {} positions",
                letters.len(),
                self.groups.len()
            )));
        }
        let mut rem = self.counts.clone();
        let mut lens = self.lens.clone();
        let mut total = u128::from(self.size);
        let mut rank = 0u128;
        for (&g, &x) in self.groups.iter().zip(letters) {
            let m = u128::from(lens[g]);
            let row = &mut rem[g];
            if x >= row.len() || row[x] == 0 {
                return Err(Error::TypeMismatch(
                    "sequence does not belong to this type class or shell".into(),
                ));
            }
            for &c in &row[..x] {
                rank += total * u128::from(c) / m;
            }
            total = total * u128::from(row[x]) / m;
            row[x] -= 1;
            lens[g] -= 1;
        }
        Ok(rank as u64)
    }

    pub fn unrank(&self, r: u64) -> Result<Vec<usize>> {
        if r >= self.size {
            return Err(Error::OutOfRange(format!("rank {r} >= size {}", self.size)));
        }
        let mut rem = self.counts.clone();
        let mut lens = self.lens.clone();
        let mut total = u128::from(self.size);
        let mut r = u128::from(r);
        let mut out = Vec::with_capacity(self.groups.len());
        for &g in &self.groups {
            let m = u128::from(lens[g]);
            let row = &mut rem[g];
            let mut chosen = None;
            for (b, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let block = total * u128::from(c) / m;
                if r < block {
                    chosen = Some(b);
                    total = block;
                    break;
                }
                r -= block;
            }
            let b = chosen.expect("rank below size always lands in a block");
            row[b] -= 1;
            lens[g] -= 1;
            out.push(b);
        }
        Ok(out)
    }
}
