//! V-shells: the completions of a decoder's side information that keep the
//! joint type fixed.
//!
//! A shell member is returned as a full letter tuple (side components and
//! demanded components together). With the side fixed, lexicographic order
//! over full tuples equals lexicographic order over the demanded part.

use num_bigint::BigUint;

use super::{GroupedMultiset, JointType, SequenceTuple};
use crate::bigmath::multinomial;
use crate::network::{DecoderView, SourceNetwork};
use crate::{Error, Result};

/// `|T_{V_j}(x^{S_j^c})|` for any side sequence of type `Q_j`, in closed form:
/// the product over side letters of the multinomial of the conditional counts.
pub fn shell_size(q: &JointType, sn: &SourceNetwork, j: usize) -> Result<BigUint> {
    let view = sn.view(j)?;
    check_type(q, sn)?;
    Ok(shell_counts(q, view)
        .iter()
        .fold(BigUint::from(1u32), |acc, c| acc * multinomial(c)))
}

pub(crate) fn shell_counts(q: &JointType, view: &DecoderView) -> Vec<Vec<u32>> {
    let ds = view.demand_alphabet.joint_size();
    (0..view.side_alphabet.joint_size())
        .map(|g| (0..ds).map(|d| q.count(view.joint(g, d))).collect())
        .collect()
}

fn check_type(q: &JointType, sn: &SourceNetwork) -> Result<()> {
    if q.joint_size() != sn.alphabet().joint_size() {
        return Err(Error::TypeMismatch(format!(
            "type over {} letters, alphabet has {}",
            q.joint_size(),
            sn.alphabet().joint_size()
        )));
    }
    Ok(())
}

/// Lexicographic index over one shell.
#[derive(Clone, Debug)]
pub struct ShellIndex<'a> {
    sn: &'a SourceNetwork,
    view: &'a DecoderView,
    side: Vec<usize>,
    index: GroupedMultiset,
}

impl<'a> ShellIndex<'a> {
    /// Fails with a type mismatch unless `side` has type `Q_j`.
    pub fn new(side: &SequenceTuple, q: &JointType, sn: &'a SourceNetwork, j: usize) -> Result<Self> {
        let view = sn.view(j)?;
        let side = side.to_joint(&view.side_alphabet)?;
        Self::from_side_letters(side, q, sn, j)
    }

    pub(crate) fn from_side_letters(
        side: Vec<usize>,
        q: &JointType,
        sn: &'a SourceNetwork,
        j: usize,
    ) -> Result<Self> {
        check_type(q, sn)?;
        let view = sn.view(j)?;
        if side.len() != q.n() {
            return Err(Error::TypeMismatch(format!(
                "side sequence of length {} for a type of length {}",
                side.len(),
                q.n()
            )));
        }
        let index = GroupedMultiset::new(side.clone(), shell_counts(q, view)).map_err(|e| {
            match e {
                Error::TypeMismatch(_) => Error::TypeMismatch(
                    "side information is not of the marginal type of Q".into(),
                ),
                other => other,
            }
        })?;
        Ok(ShellIndex {
            sn,
            view,
            side,
            index,
        })
    }

    pub fn size(&self) -> u64 {
        self.index.size()
    }

    pub fn rank(&self, x: &SequenceTuple) -> Result<u64> {
        let joint = x.to_joint(self.sn.alphabet())?;
        self.rank_joint(&joint)
    }

    pub fn unrank(&self, r: u64) -> Result<SequenceTuple> {
        Ok(SequenceTuple::from_joint(
            self.sn.alphabet(),
            &self.unrank_joint(r)?,
        ))
    }

    pub(crate) fn rank_joint(&self, joint: &[usize]) -> Result<u64> {
        if joint.len() != self.side.len() {
            return Err(Error::TypeMismatch("block length differs from the side".into()));
        }
        let mut demanded = Vec::with_capacity(joint.len());
        for (&a, &s) in joint.iter().zip(&self.side) {
            if self.view.side_of[a] != s {
                return Err(Error::TypeMismatch(
                    "tuple does not extend the side information".into(),
                ));
            }
            demanded.push(self.view.demand_of[a]);
        }
        self.index.rank(&demanded)
    }

    pub(crate) fn unrank_joint(&self, r: u64) -> Result<Vec<usize>> {
        let demanded = self.index.unrank(r)?;
        Ok(self
            .side
            .iter()
            .zip(demanded)
            .map(|(&s, d)| self.view.joint(s, d))
            .collect())
    }

    pub fn iter(&self) -> ShellIter<'a> {
        ShellIter {
            shell: self.clone(),
            next: 0,
        }
    }
}

/// Shell members in ascending lexicographic order.
#[derive(Clone, Debug)]
pub struct ShellIter<'a> {
    shell: ShellIndex<'a>,
    next: u64,
}

impl Iterator for ShellIter<'_> {
    type Item = SequenceTuple;

    fn next(&mut self) -> Option<SequenceTuple> {
        if self.next >= self.shell.size() {
            return None;
        }
        let x = self.shell.unrank(self.next).expect("rank within shell");
        self.next += 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.shell.size() - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate_shell<'a>(
    side: &SequenceTuple,
    q: &JointType,
    sn: &'a SourceNetwork,
    j: usize,
) -> Result<ShellIter<'a>> {
    Ok(ShellIndex::new(side, q, sn, j)?.iter())
}

pub fn rank_in_shell(
    x: &SequenceTuple,
    side: &SequenceTuple,
    q: &JointType,
    sn: &SourceNetwork,
    j: usize,
) -> Result<u64> {
    ShellIndex::new(side, q, sn, j)?.rank(x)
}

pub fn unrank_in_shell(
    r: u64,
    side: &SequenceTuple,
    q: &JointType,
    sn: &SourceNetwork,
    j: usize,
) -> Result<SequenceTuple> {
    ShellIndex::new(side, q, sn, j)?.unrank(r)
}
