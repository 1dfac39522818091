//! Structural classes of extremal digital sets.

use std::fmt;

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::pollard::is_ap;
use crate::ring::{add_mod, mul_mod, units, DigitalSet, Domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IntervalVariant {
    /// `{0, 1, …, m−1}`
    ZeroToMMinus1,
    /// `{1, 2, …, m}`
    OneToM,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum StructureClass {
    /// `A = c·(−m/2, m/2]`
    SymmetricIntervalDilation {
        c: i64,
    },
    /// `c·A + d` is one of the two intervals.
    IntervalAffine {
        c: i64,
        d: i64,
        variant: IntervalVariant,
    },
    /// An arithmetic progression with canonical difference `d`.
    APSameDifference {
        d: i64,
    },
    Other,
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StructureClass::SymmetricIntervalDilation { c } => {
                write!(f, "SymmetricIntervalDilation({c})")
            }
            StructureClass::IntervalAffine { c, d, variant } => {
                let v = match variant {
                    IntervalVariant::ZeroToMMinus1 => "ZeroToM-1",
                    IntervalVariant::OneToM => "OneToM",
                };
                write!(f, "IntervalAffine(c={c}, d={d}, {v})")
            }
            StructureClass::APSameDifference { d } => write!(f, "APSameDifference({d})"),
            StructureClass::Other => f.write_str("Other"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Purpose {
    ForC1,
    ForC2,
}

/// `(−m/2, m/2]` as integers: `[−⌈m/2⌉+1, ⌊m/2⌋]`.
pub fn symmetric_interval(m: i64) -> Vec<i64> {
    (-(m - 1) / 2..=m / 2).collect()
}

pub fn interval(m: i64, variant: IntervalVariant) -> Vec<i64> {
    match variant {
        IntervalVariant::ZeroToMMinus1 => (0..m).collect(),
        IntervalVariant::OneToM => (1..=m).collect(),
    }
}

fn sorted_mod(xs: impl Iterator<Item = i64>, q: i64) -> Vec<i64> {
    let mut v: Vec<i64> = xs.map(|x| x.rem_euclid(q)).collect();
    v.sort_unstable();
    v
}

pub fn classify_structure(a: &DigitalSet, purpose: Purpose) -> StructureClass {
    let found = match (a.domain(), purpose) {
        (Domain::Modular(q), Purpose::ForC2) => modular_symmetric(a, q),
        (Domain::Modular(q), Purpose::ForC1) => modular_interval_affine(a, q),
        (Domain::Integers, Purpose::ForC2) => integer_symmetric(a),
        (Domain::Integers, Purpose::ForC1) => integer_interval_affine(a),
    };
    found.unwrap_or_else(|| match is_ap(a.as_set()) {
        Some(d) => StructureClass::APSameDifference { d },
        None => StructureClass::Other,
    })
}

fn modular_symmetric(a: &DigitalSet, q: i64) -> Option<StructureClass> {
    let base = symmetric_interval(a.m());
    units(q)
        .into_iter()
        .find(|&c| sorted_mod(base.iter().map(|&x| mul_mod(c, x, q)), q) == a.elements())
        .map(|c| StructureClass::SymmetricIntervalDilation { c })
}

fn modular_interval_affine(a: &DigitalSet, q: i64) -> Option<StructureClass> {
    let m = a.m();
    let mut image = Vec::with_capacity(m as usize);
    for c in units(q) {
        image.clear();
        image.extend(a.elements().iter().map(|&x| mul_mod(c, x, q)));
        let x0 = *image.iter().find(|x| *x % m == 0)?;
        for variant in [IntervalVariant::ZeroToMMinus1, IntervalVariant::OneToM] {
            // the class-0 element has to land on 0 or on m
            let anchor = match variant {
                IntervalVariant::ZeroToMMinus1 => 0,
                IntervalVariant::OneToM => m,
            };
            let d = (anchor - x0).rem_euclid(q);
            let shifted = sorted_mod(image.iter().map(|&x| add_mod(x, d, q)), q);
            if shifted == interval(m, variant) {
                return Some(StructureClass::IntervalAffine { c, d, variant });
            }
        }
    }
    None
}

/// Over `Z` the dilations are by integers coprime to `m`, signs included.
fn integer_symmetric(a: &DigitalSet) -> Option<StructureClass> {
    let m = a.m();
    let xs = a.elements();
    let step = xs[1] - xs[0];
    if gcd(step, m) != 1 {
        return None;
    }
    let base = symmetric_interval(m);
    [step, -step].into_iter().find_map(|c| {
        let mut image: Vec<i64> = base.iter().map(|&x| c * x).collect();
        image.sort_unstable();
        (image == xs).then_some(StructureClass::SymmetricIntervalDilation { c })
    })
}

/// Over `Z`: `c ∈ {1, −1}` and `d ∈ mZ`.
fn integer_interval_affine(a: &DigitalSet) -> Option<StructureClass> {
    let m = a.m();
    for c in [1, -1] {
        let mut image: Vec<i64> = a.elements().iter().map(|&x| c * x).collect();
        image.sort_unstable();
        for variant in [IntervalVariant::ZeroToMMinus1, IntervalVariant::OneToM] {
            let target = interval(m, variant);
            let d = target[0] - image[0];
            if d % m == 0 && image.iter().zip(&target).all(|(x, y)| x + d == *y) {
                return Some(StructureClass::IntervalAffine { c, d, variant });
            }
        }
    }
    None
}

/// Every dilation of the symmetric interval, as sorted tuples.
pub(crate) fn symmetric_orbit(q: i64, m: i64) -> Vec<Vec<i64>> {
    let base = symmetric_interval(m);
    let mut orbit: Vec<Vec<i64>> = units(q)
        .into_iter()
        .map(|c| sorted_mod(base.iter().map(|&x| mul_mod(c, x, q)), q))
        .collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Every `c·J + d` for both intervals `J`, units `c` and `d ∈ mZ_q`, as sorted tuples.
pub(crate) fn interval_affine_orbit(q: i64, m: i64) -> Vec<Vec<i64>> {
    let mut orbit = Vec::new();
    for variant in [IntervalVariant::ZeroToMMinus1, IntervalVariant::OneToM] {
        let base = interval(m, variant);
        for c in units(q) {
            for d in (0..q).step_by(m as usize) {
                orbit.push(sorted_mod(base.iter().map(|&x| mul_mod(c, x, q) + d), q));
            }
        }
    }
    orbit.sort();
    orbit.dedup();
    orbit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{dilate, translate};

    fn modular(q: i64, m: i64, xs: &[i64]) -> DigitalSet {
        DigitalSet::modular(q, m, xs.iter().copied()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let a = modular(25, 5, &[23, 24, 0, 1, 2]);
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: 1 }
        );
        let a = modular(9, 3, &[1, 2, 3]);
        assert_eq!(
            classify_structure(&a, Purpose::ForC1),
            StructureClass::IntervalAffine {
                c: 1,
                d: 0,
                variant: IntervalVariant::OneToM
            }
        );
        let a = modular(9, 3, &[0, 4, 8]);
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::APSameDifference { d: 4 }
        );
        // 2·{0,4,8} + 3 = {1,2,3} is found before 7·{0,4,8} = {0,1,2}
        assert_eq!(
            classify_structure(&a, Purpose::ForC1),
            StructureClass::IntervalAffine {
                c: 2,
                d: 3,
                variant: IntervalVariant::OneToM
            }
        );
    }

    #[test]
    fn even_m_intervals() {
        assert_eq!(symmetric_interval(4), vec![-1, 0, 1, 2]);
        assert_eq!(symmetric_interval(5), vec![-2, -1, 0, 1, 2]);
        let a = modular(8, 4, &[7, 0, 1, 2]);
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: 1 }
        );
        // [-2, 1] is the reflection
        let b = modular(8, 4, &[6, 7, 0, 1]);
        assert_eq!(
            classify_structure(&b, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: 7 }
        );
    }

    #[test]
    fn stable_under_symmetry() {
        let a = modular(25, 5, &[23, 24, 0, 1, 2]);
        let j = modular(25, 5, &[0, 1, 2, 3, 4]);
        for c in units(25) {
            let b = dilate(&a, c).unwrap();
            assert!(matches!(
                classify_structure(&b, Purpose::ForC2),
                StructureClass::SymmetricIntervalDilation { .. }
            ));
            // the symmetric interval is not a C₁ minimizer for m = 5
            assert!(!matches!(
                classify_structure(&b, Purpose::ForC1),
                StructureClass::IntervalAffine { .. }
            ));
            let b = dilate(&j, c).unwrap();
            for d in [0, 5, 10, 15, 20] {
                let e = translate(&b, d).unwrap().digital().unwrap();
                assert!(matches!(
                    classify_structure(&e, Purpose::ForC1),
                    StructureClass::IntervalAffine { .. }
                ));
            }
        }
    }

    #[test]
    fn orbits() {
        let orbit = symmetric_orbit(9, 3);
        assert_eq!(orbit, vec![vec![0, 1, 8], vec![0, 2, 7], vec![0, 4, 5]]);
        let affine = interval_affine_orbit(9, 3);
        assert!(affine.contains(&vec![0, 1, 2]));
        assert!(affine.contains(&vec![1, 2, 3]));
        for set in &affine {
            assert!(matches!(
                classify_structure(&modular(9, 3, set), Purpose::ForC1),
                StructureClass::IntervalAffine { .. }
            ));
        }
    }

    #[test]
    fn integer_classes() {
        let a = DigitalSet::integers(5, -2..=2).unwrap();
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: 1 }
        );
        let a = DigitalSet::integers(5, [-4, -2, 0, 2, 4]).unwrap();
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: 2 }
        );
        let a = DigitalSet::integers(4, [-2, -1, 0, 1]).unwrap();
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::SymmetricIntervalDilation { c: -1 }
        );
        let a = DigitalSet::integers(4, [4, 5, 6, 7]).unwrap();
        assert_eq!(
            classify_structure(&a, Purpose::ForC1),
            StructureClass::IntervalAffine {
                c: 1,
                d: -4,
                variant: IntervalVariant::ZeroToMMinus1
            }
        );
        assert_eq!(
            classify_structure(&a, Purpose::ForC2),
            StructureClass::APSameDifference { d: 1 }
        );
        let a = DigitalSet::integers(3, [0, 1, 5]).unwrap();
        assert_eq!(
            classify_structure(&a, Purpose::ForC1),
            StructureClass::Other
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            StructureClass::SymmetricIntervalDilation { c: 1 }.to_string(),
            "SymmetricIntervalDilation(1)"
        );
        assert_eq!(
            StructureClass::IntervalAffine {
                c: 1,
                d: 0,
                variant: IntervalVariant::OneToM
            }
            .to_string(),
            "IntervalAffine(c=1, d=0, OneToM)"
        );
    }
}
