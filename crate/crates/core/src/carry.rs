//! Representation functions, layered sumsets, Pollard sums and carry
//! statistics.
//!
//! All counts are over ordered pairs. `C₂` is kept as an exact rational.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::ring::{add_mod, DigitalSet, Domain, ElementSet};

/// Above this modulus `rep_function` counts into a sparse map.
const DENSE_LIMIT: i64 = 1 << 20;

/// `r_{A+B}`: ordered-pair counts per sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetProfile {
    pub domain: Domain,
    /// `(x, r(x))` for every `x` with `r(x) ≥ 1`, sorted by `x`.
    #[serde(with = "count_pairs")]
    pub counts: BTreeMap<i64, u64>,
    pub total: u64,
}

mod count_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<i64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, u64)> = map.iter().map(|(&k, &v)| (k, v)).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, u64>, D::Error> {
        Ok(Vec::<(i64, u64)>::deserialize(d)?.into_iter().collect())
    }
}

impl SumsetProfile {
    pub fn get(&self, x: i64) -> u64 {
        self.counts
            .get(&self.domain.reduce(x))
            .copied()
            .unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// `|A +_i B| = #{x : r(x) ≥ i}`.
    pub fn layered_size(&self, i: u64) -> u64 {
        assert!(i >= 1, "layer index starts at 1");
        self.counts.values().filter(|&&r| r >= i).count() as u64
    }

    /// `Σ_x min(t, r(x))`.
    pub fn capped_sum(&self, t: u64) -> u64 {
        self.counts.values().map(|&r| r.min(t)).sum()
    }

    /// `Σ_{i=1}^{t} |A +_i B|`.
    pub fn layered_sum(&self, t: u64) -> u64 {
        let top = t.min(self.max_count());
        (1..=top).map(|i| self.layered_size(i)).sum()
    }

    /// Sum of `r` over each coset `x + mZ_q`, indexed by `x mod m`.
    pub fn coset_sums(&self, m: i64) -> Vec<u64> {
        let mut sums = vec![0; m as usize];
        for (&x, &r) in &self.counts {
            sums[x.rem_euclid(m) as usize] += r;
        }
        sums
    }
}

pub fn rep_function(a: &ElementSet, b: &ElementSet) -> Result<SumsetProfile> {
    let domain = a.domain();
    if domain != b.domain() {
        return Err(Error::DomainMismatch);
    }
    let total = (a.len() * b.len()) as u64;
    let counts = match domain {
        Domain::Modular(q) if q <= DENSE_LIMIT => {
            let mut dense = vec![0u64; q as usize];
            for &x in a.elements() {
                for &y in b.elements() {
                    dense[add_mod(x, y, q) as usize] += 1;
                }
            }
            dense
                .into_iter()
                .enumerate()
                .filter(|&(_, r)| r > 0)
                .map(|(x, r)| (x as i64, r))
                .collect()
        }
        _ => {
            let mut sparse = BTreeMap::new();
            for &x in a.elements() {
                for &y in b.elements() {
                    *sparse.entry(domain.add(x, y)).or_insert(0) += 1;
                }
            }
            sparse
        }
    };
    Ok(SumsetProfile {
        domain,
        counts,
        total,
    })
}

pub fn layered_size(profile: &SumsetProfile, i: u64) -> u64 {
    profile.layered_size(i)
}

/// `S(A, B, t)`, evaluated by both the capped sum and the layered sum.
pub fn pollard_sum(a: &ElementSet, b: &ElementSet, t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::BadT {
            t,
            max: (a.len().min(b.len())) as u64,
        });
    }
    let profile = rep_function(a, b)?;
    let capped = profile.capped_sum(t);
    assert_eq!(
        capped,
        profile.layered_sum(t),
        "the two forms of S(A,B,t) disagree"
    );
    Ok(capped)
}

/// `S(A, B, t)` over `Z_q` with a reusable dense scratch buffer of length `q`.
/// The buffer is left zeroed.
pub(crate) fn pollard_sum_mod(a: &[i64], b: &[i64], q: i64, t: u64, scratch: &mut Vec<u32>) -> u64 {
    if scratch.len() < q as usize {
        scratch.resize(q as usize, 0);
    }
    for &x in a {
        for &y in b {
            scratch[add_mod(x, y, q) as usize] += 1;
        }
    }
    let mut s = 0;
    for &x in a {
        for &y in b {
            let slot = &mut scratch[add_mod(x, y, q) as usize];
            if *slot > 0 {
                s += (*slot as u64).min(t);
                *slot = 0;
            }
        }
    }
    s
}

/// The carry `(a₁ + a₂ − a)/m`, where `a` is the digit of `a₁ + a₂`.
/// In `Z_q` the value lives in `Z_{q/m}` and is returned in `[0, q/m)`.
pub fn carry_of(a: &DigitalSet, a1: i64, a2: i64) -> i64 {
    let m = a.m();
    match a.domain() {
        Domain::Modular(q) => {
            let s = add_mod(a1, a2, q);
            let numerator = (s - a.digit_of(s)).rem_euclid(q);
            debug_assert_eq!(numerator % m, 0);
            numerator / m
        }
        Domain::Integers => {
            let s = a1 + a2;
            (s - a.digit_of(s)) / m
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryReport {
    pub carry_set: BTreeSet<i64>,
    /// Number of distinct carries.
    pub c1: usize,
    /// Ordered pairs whose sum is not a digit.
    pub carry_count: u64,
    /// `carry_count / m²`.
    #[serde(with = "exact")]
    pub c2: Rational,
}

pub fn carry_report(a: &DigitalSet) -> CarryReport {
    let digits = a.by_residue();
    let m = a.m() as usize;
    let mut carry_set = BTreeSet::new();
    let mut nonzero = 0u64;
    let mut outside = 0u64;
    for i in 0..m {
        for j in 0..m {
            let c = carry_of(a, digits[i], digits[j]);
            carry_set.insert(c);
            if c != 0 {
                nonzero += 1;
            }
            if !a.contains(a.domain().add(digits[i], digits[j])) {
                outside += 1;
            }
        }
    }
    assert_eq!(nonzero, outside, "carry zero iff the sum is a digit");
    let m2 = (m * m) as i128;
    CarryReport {
        c1: carry_set.len(),
        carry_set,
        carry_count: outside,
        c2: exact::ratio(outside as i128, m2),
    }
}

/// Carrying pairs for lifts indexed by residue (`lifts[r] ≡ r mod m`).
#[inline]
pub(crate) fn carry_count_lifts(lifts: &[i64], q: Option<i64>) -> u64 {
    let m = lifts.len();
    let mut count = 0u64;
    match q {
        Some(q) => {
            for i in 0..m {
                let x = lifts[i];
                let mut k = i;
                for &y in lifts {
                    let mut s = x + y;
                    if s >= q {
                        s -= q;
                    }
                    if s != lifts[k] {
                        count += 1;
                    }
                    k += 1;
                    if k == m {
                        k = 0;
                    }
                }
            }
        }
        None => {
            for i in 0..m {
                let x = lifts[i];
                let mut k = i;
                for &y in lifts {
                    if x + y != lifts[k] {
                        count += 1;
                    }
                    k += 1;
                    if k == m {
                        k = 0;
                    }
                }
            }
        }
    }
    count
}

/// Number of distinct carries for residue-indexed lifts.
pub(crate) fn distinct_carries_lifts(
    lifts: &[i64],
    q: Option<i64>,
    seen: &mut BTreeSet<i64>,
) -> usize {
    let m = lifts.len();
    seen.clear();
    for i in 0..m {
        for j in 0..m {
            let s = lifts[i] + lifts[j];
            let digit = lifts[(i + j) % m];
            let c = match q {
                Some(q) => (s - digit).rem_euclid(q) / m as i64,
                None => (s - digit) / m as i64,
            };
            seen.insert(c);
        }
    }
    seen.len()
}
