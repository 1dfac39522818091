//! Odometer enumeration of digital sets, one lift per residue class.
//!
//! The space for `(q, m)` has `(q/m)^m` points. Class 0 is the most
//! significant digit of the odometer, so contiguous index ranges are
//! prefix-aligned shards.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{is_dilation_canonical, units, DigitalSet, Domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    None,
    /// Pin the class-0 element to 0. Sound only for translation-invariant
    /// statistics (`C₁`), not for `C₂`.
    FixZeroRep,
    /// Keep only dilation-canonical sets.
    DilationCanonical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationPlan {
    pub q: i64,
    pub m: i64,
    pub reduction: Reduction,
    /// `(index, total)`: this plan covers shard `index` of `total`.
    pub partition: (u64, u64),
}

impl EnumerationPlan {
    pub fn new(q: i64, m: i64, reduction: Reduction) -> Result<Self> {
        Domain::modular(q)?;
        if m < 2 {
            return Err(Error::DegenerateM(m));
        }
        if q % m != 0 {
            return Err(Error::MDoesNotDivideQ { q, m });
        }
        Ok(EnumerationPlan {
            q,
            m,
            reduction,
            partition: (0, 1),
        })
    }

    pub fn shard(mut self, index: u64, total: u64) -> Self {
        assert!(total >= 1 && index < total, "bad shard {index}/{total}");
        self.partition = (index, total);
        self
    }

    /// `(q/m)^m`, saturating.
    pub fn full_space_size(&self) -> u128 {
        space_size(self.q / self.m, self.m)
    }

    /// Points the odometer walks (before any canonical filtering), all shards.
    pub fn odometer_len(&self) -> u128 {
        match self.reduction {
            Reduction::FixZeroRep => space_size(self.q / self.m, self.m - 1),
            _ => self.full_space_size(),
        }
    }

    pub(crate) fn lifts(&self) -> Lifts {
        let mut lifts = Lifts::modular(self.q, self.m);
        if self.reduction == Reduction::FixZeroRep {
            lifts.choices[0] = vec![0];
        }
        lifts
    }

    pub(crate) fn range(&self) -> Range<u128> {
        shard_range(self.odometer_len(), self.partition.0, self.partition.1)
    }
}

pub(crate) fn space_size(base: i64, digits: i64) -> u128 {
    (base as u128)
        .checked_pow(digits as u32)
        .unwrap_or(u128::MAX)
}

/// Contiguous share `index` of `total` of `0..len`.
pub fn shard_range(len: u128, index: u64, total: u64) -> Range<u128> {
    let at = |i: u64| -> u128 {
        if i == total {
            return len;
        }
        // len * i / total without overflowing
        let (quot, rem) = (len / total as u128, len % total as u128);
        quot * i as u128 + rem * i as u128 / total as u128
    };
    at(index)..at(index + 1)
}

/// Candidate lifts for each residue class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lifts {
    pub domain: Domain,
    pub m: i64,
    pub choices: Vec<Vec<i64>>,
}

impl Lifts {
    pub fn modular(q: i64, m: i64) -> Self {
        Lifts {
            domain: Domain::Modular(q),
            m,
            choices: (0..m)
                .map(|r| (r..q).step_by(m as usize).collect())
                .collect(),
        }
    }

    /// Integer digits restricted to `[-w, w]`.
    pub fn integer_window(m: i64, w: i64) -> Self {
        Lifts {
            domain: Domain::Integers,
            m,
            choices: (0..m)
                .map(|r| (-w..=w).filter(|x| x.rem_euclid(m) == r).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> u128 {
        self.choices
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Calls `f` with residue-indexed lifts for each odometer index in `range`.
    pub fn for_each(&self, range: Range<u128>, mut f: impl FnMut(&[i64])) {
        if range.is_empty() || self.choices.iter().any(|c| c.is_empty()) {
            return;
        }
        let m = self.choices.len();
        let mut idx = vec![0usize; m];
        let mut rest = range.start;
        for r in (0..m).rev() {
            let n = self.choices[r].len() as u128;
            idx[r] = (rest % n) as usize;
            rest /= n;
        }
        let mut lifts: Vec<i64> = (0..m).map(|r| self.choices[r][idx[r]]).collect();
        let mut remaining = range.end - range.start;
        loop {
            f(&lifts);
            remaining -= 1;
            if remaining == 0 {
                return;
            }
            let mut r = m - 1;
            loop {
                idx[r] += 1;
                if idx[r] < self.choices[r].len() {
                    lifts[r] = self.choices[r][idx[r]];
                    break;
                }
                idx[r] = 0;
                lifts[r] = self.choices[r][0];
                r -= 1;
            }
        }
    }
}

/// Streams the digital sets of a plan in odometer order.
pub fn enumerate(plan: &EnumerationPlan) -> DigitalSets {
    let lifts = plan.lifts();
    let range = plan.range();
    DigitalSets {
        domain: lifts.domain,
        m: plan.m,
        idx: Vec::new(),
        next: range.start,
        end: range.end,
        filter_units: (plan.reduction == Reduction::DilationCanonical).then(|| units(plan.q)),
        lifts,
        scratch: Vec::new(),
    }
}

pub struct DigitalSets {
    lifts: Lifts,
    domain: Domain,
    m: i64,
    idx: Vec<usize>,
    next: u128,
    end: u128,
    filter_units: Option<Vec<i64>>,
    scratch: Vec<i64>,
}

impl DigitalSets {
    fn step(&mut self) -> Option<DigitalSet> {
        if self.next >= self.end {
            return None;
        }
        let choices = &self.lifts.choices;
        if self.idx.is_empty() {
            self.idx = vec![0; choices.len()];
            let mut rest = self.next;
            for r in (0..choices.len()).rev() {
                let n = choices[r].len() as u128;
                self.idx[r] = (rest % n) as usize;
                rest /= n;
            }
        } else {
            let mut r = choices.len() - 1;
            loop {
                self.idx[r] += 1;
                if self.idx[r] < choices[r].len() {
                    break;
                }
                self.idx[r] = 0;
                r -= 1;
            }
        }
        self.next += 1;
        let lifts: Vec<i64> = self
            .idx
            .iter()
            .enumerate()
            .map(|(r, &i)| choices[r][i])
            .collect();
        Some(DigitalSet::from_residue_lifts(self.domain, self.m, &lifts))
    }
}

impl Iterator for DigitalSets {
    type Item = DigitalSet;

    fn next(&mut self) -> Option<DigitalSet> {
        loop {
            let set = self.step()?;
            match (&self.filter_units, self.domain) {
                (Some(units), Domain::Modular(q)) => {
                    if is_dilation_canonical(&set, q, units, &mut self.scratch) {
                        return Some(set);
                    }
                }
                _ => return Some(set),
            }
        }
    }
}
