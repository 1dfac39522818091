//! Chowla property, Pollard's inequality `S(A,B,t) ≥ t·min(q, |A|+|B|−t)`,
//! the classification of its equality cases, and arithmetic progressions.

use serde::{Deserialize, Serialize};

use crate::carry::rep_function;
use crate::error::{Error, Result};
use crate::ring::{add_mod, is_unit, Domain, ElementSet};

/// Every difference of distinct elements is a unit (mod q; `±1` over `Z`).
pub fn has_chowla(a: &ElementSet) -> bool {
    let xs = a.elements();
    match a.domain() {
        Domain::Modular(q) => xs
            .iter()
            .enumerate()
            .all(|(i, &x)| xs[i + 1..].iter().all(|&y| is_unit(y - x, q))),
        Domain::Integers => xs
            .iter()
            .enumerate()
            .all(|(i, &x)| xs[i + 1..].iter().all(|&y| (y - x).abs() == 1)),
    }
}

/// `t · min(q, nA + nB − t)`.
pub fn pollard_bound(q: u64, n_a: u64, n_b: u64, t: u64) -> Result<u64> {
    let max = n_a.min(n_b);
    if t < 1 || t > max {
        return Err(Error::BadT { t, max });
    }
    Ok(t * q.min(n_a + n_b - t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PollardCheck {
    pub s: u64,
    pub bound: u64,
    pub tight: bool,
    /// Whether `A` or `B` has the Chowla property.
    pub applicable: bool,
}

/// Computes `S` and the bound. Fails with `ChowlaViolation` (carrying the
/// computed values) when neither set is Chowla.
pub fn pollard_check(a: &ElementSet, b: &ElementSet, t: u64) -> Result<PollardCheck> {
    let q = match (a.domain(), b.domain()) {
        (Domain::Modular(q), Domain::Modular(r)) if q == r => q,
        (Domain::Modular(_), Domain::Modular(_)) => return Err(Error::DomainMismatch),
        _ => return Err(Error::NotModular),
    };
    let bound = pollard_bound(q as u64, a.len() as u64, b.len() as u64, t)?;
    let s = rep_function(a, b)?.capped_sum(t);
    let check = PollardCheck {
        s,
        bound,
        tight: s == bound,
        applicable: has_chowla(a) || has_chowla(b),
    };
    if !check.applicable {
        return Err(Error::ChowlaViolation(Box::new(check)));
    }
    Ok(check)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Condition {
    /// `|B| = t`
    #[serde(rename = "B_EQUALS_T")]
    BEqualsT,
    /// `|A| + |B| ≥ q + t`
    #[serde(rename = "SIZES_EXCEED_Q")]
    SizesExceedQ,
    /// `|A| = |B| = t + 1` and `B = g − A` (equivalently `A = g − B`).
    #[serde(rename = "REFLECTION")]
    Reflection { g: i64 },
    /// `A`, `B` arithmetic progressions with common difference `d`.
    #[serde(rename = "SAME_DIFF_APS")]
    SameDiffAps { d: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessClassification {
    #[serde(rename = "S")]
    pub s: u64,
    pub bound: u64,
    pub tight: bool,
    pub conditions: Vec<Condition>,
}

impl TightnessClassification {
    /// Tight with no explaining condition.
    pub fn unexplained(&self) -> bool {
        self.tight && self.conditions.is_empty()
    }
}

/// Smallest `g` with `B = g − A`, if any.
pub fn reflection_point(a: &ElementSet, b: &ElementSet) -> Option<i64> {
    let q = a.domain().modulus()?;
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let b0 = b.elements()[0];
    let mut found: Option<i64> = None;
    for &x in a.elements() {
        let g = add_mod(b0, x, q);
        if found.is_some_and(|f| f <= g) {
            continue;
        }
        if a.elements().iter().all(|&y| b.contains(g - y)) {
            found = Some(g);
        }
    }
    found
}

/// Checks every condition independently. Requires `2 ≤ t ≤ |B| ≤ |A|` and `B` Chowla.
pub fn classify_tightness(
    a: &ElementSet,
    b: &ElementSet,
    t: u64,
) -> Result<TightnessClassification> {
    let q = a.domain().modulus().ok_or(Error::NotModular)?;
    if b.domain() != a.domain() {
        return Err(Error::DomainMismatch);
    }
    let (na, nb) = (a.len() as u64, b.len() as u64);
    if !(2 <= t && t <= nb && nb <= na) {
        return Err(Error::HypothesesNotMet(format!(
            "need 2 <= t <= |B| <= |A|, got t={t}, |B|={nb}, |A|={na}"
        )));
    }
    if !has_chowla(b) {
        return Err(Error::HypothesesNotMet(
            "B lacks the Chowla property".into(),
        ));
    }
    let s = rep_function(a, b)?.capped_sum(t);
    let bound = pollard_bound(q as u64, na, nb, t)?;
    Ok(TightnessClassification {
        s,
        bound,
        tight: s == bound,
        conditions: conditions(a, b, t),
    })
}

pub(crate) fn conditions(a: &ElementSet, b: &ElementSet, t: u64) -> Vec<Condition> {
    let q = a.domain().modulus().expect("modular") as u64;
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let mut out = Vec::new();
    if nb == t {
        out.push(Condition::BEqualsT);
    }
    if na + nb >= q + t {
        out.push(Condition::SizesExceedQ);
    }
    if na == t + 1 && nb == t + 1 {
        if let Some(g) = reflection_point(a, b) {
            out.push(Condition::Reflection { g });
        }
    }
    if let Some(d) = common_difference(&ap_differences(a), &ap_differences(b)) {
        out.push(Condition::SameDiffAps { d });
    }
    out
}

/// Common differences under which a set is an arithmetic progression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApDifferences {
    /// Sets of size ≤ 1 are progressions of every difference.
    Any,
    /// Canonical differences, ascending; empty when not a progression.
    Some(Vec<i64>),
}

impl ApDifferences {
    pub fn is_ap(&self) -> bool {
        match self {
            ApDifferences::Any => true,
            ApDifferences::Some(ds) => !ds.is_empty(),
        }
    }
}

/// A shared difference of two progressions (`0` when both are trivial).
pub fn common_difference(a: &ApDifferences, b: &ApDifferences) -> Option<i64> {
    match (a, b) {
        (ApDifferences::Any, ApDifferences::Any) => Some(0),
        (ApDifferences::Any, ApDifferences::Some(ds))
        | (ApDifferences::Some(ds), ApDifferences::Any) => ds.first().copied(),
        (ApDifferences::Some(x), ApDifferences::Some(y)) => {
            x.iter().find(|d| y.contains(d)).copied()
        }
    }
}

fn is_ap_with(xs: &[i64], d: i64, q: i64) -> bool {
    let contains = |x: i64| xs.binary_search(&x).is_ok();
    let mut starts = xs.iter().filter(|&&x| !contains((x - d).rem_euclid(q)));
    match (starts.next(), starts.next()) {
        (Some(&s), None) => {
            let mut x = s;
            for _ in 1..xs.len() {
                x = add_mod(x, d, q);
                if x == s || !contains(x) {
                    return false;
                }
            }
            true
        }
        // closed under +d: a union of cosets of <d>, an AP only if a single coset
        (None, _) => xs.len() as i64 == q / num::integer::gcd(d, q),
        _ => false,
    }
}

/// All canonical differences `d` (representative in `[1, q/2]` over `Z_q`,
/// positive over `Z`) with `A = {a, a+d, …}`.
pub fn ap_differences(a: &ElementSet) -> ApDifferences {
    let xs = a.elements();
    if xs.len() <= 1 {
        return ApDifferences::Any;
    }
    match a.domain() {
        Domain::Integers => {
            let d = xs[1] - xs[0];
            let ok = xs.windows(2).all(|w| w[1] - w[0] == d);
            ApDifferences::Some(if ok { vec![d] } else { vec![] })
        }
        Domain::Modular(q) => {
            // a neighbour of xs[0] in the progression sits at xs[0] ± d
            let mut candidates: Vec<i64> = xs[1..]
                .iter()
                .map(|&x| {
                    let d = (x - xs[0]).rem_euclid(q);
                    d.min(q - d)
                })
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            ApDifferences::Some(
                candidates
                    .into_iter()
                    .filter(|&d| is_ap_with(xs, d, q))
                    .collect(),
            )
        }
    }
}

/// Canonical (smallest) common difference, `Some(0)` for sets of size ≤ 1.
pub fn is_ap(a: &ElementSet) -> Option<i64> {
    match ap_differences(a) {
        ApDifferences::Any => Some(0),
        ApDifferences::Some(ds) => ds.first().copied(),
    }
}

/// `max(0, L − |x|)`.
pub fn triangular_psi(len: u64, x: i64) -> u64 {
    len.saturating_sub(x.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zq(q: i64, xs: &[i64]) -> ElementSet {
        ElementSet::modular(q, xs.iter().copied()).unwrap()
    }

    #[test]
    fn chowla_examples() {
        assert!(has_chowla(&zq(9, &[0, 1, 2])));
        assert!(!has_chowla(&zq(9, &[0, 3])));
        for q in 2..20 {
            assert!(has_chowla(&zq(q, &[0, 1])));
        }
        assert!(has_chowla(&ElementSet::integers([4, 5])));
        assert!(!has_chowla(&ElementSet::integers([4, 6])));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(pollard_bound(9, 3, 3, 2), Ok(8));
        assert_eq!(pollard_bound(7, 3, 3, 2), Ok(8));
        assert_eq!(pollard_bound(5, 4, 4, 2), Ok(10));
        assert_eq!(pollard_bound(5, 4, 3, 4), Err(Error::BadT { t: 4, max: 3 }));
        assert_eq!(pollard_bound(5, 4, 3, 0), Err(Error::BadT { t: 0, max: 3 }));
    }

    #[test]
    fn check_examples() {
        let a = zq(9, &[0, 1, 2]);
        let c = pollard_check(&a, &a, 2).unwrap();
        assert_eq!((c.s, c.bound, c.tight), (8, 8, true));

        let c = pollard_check(&a, &zq(9, &[0, 1, 3]), 2).unwrap();
        assert_eq!((c.s, c.bound, c.tight), (9, 8, false));

        let c = pollard_check(&zq(7, &[0, 1, 3]), &zq(7, &[0, 4, 6]), 2).unwrap();
        assert_eq!((c.s, c.bound, c.tight), (8, 8, true));
    }

    #[test]
    fn check_flags_missing_chowla() {
        let a = zq(9, &[0, 3, 6]);
        match pollard_check(&a, &a, 2) {
            Err(Error::ChowlaViolation(check)) => {
                assert!(!check.applicable);
                // {0,3,6}+{0,3,6} = {0,3,6} with r=3 each
                assert_eq!((check.s, check.bound), (6, 8));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_examples() {
        // conditions derived by direct check of each definition
        let a = zq(9, &[0, 1, 2]);
        let c = classify_tightness(&a, &a, 2).unwrap();
        assert!(c.tight);
        assert_eq!(
            c.conditions,
            vec![
                Condition::Reflection { g: 2 },
                Condition::SameDiffAps { d: 1 }
            ]
        );

        let c = classify_tightness(&a, &a, 3).unwrap();
        assert_eq!((c.s, c.bound, c.tight), (9, 9, true));
        assert_eq!(
            c.conditions,
            vec![Condition::BEqualsT, Condition::SameDiffAps { d: 1 }]
        );

        let c = classify_tightness(&zq(7, &[0, 1, 3]), &zq(7, &[0, 4, 6]), 2).unwrap();
        assert!(c.tight);
        assert_eq!(c.conditions, vec![Condition::Reflection { g: 0 }]);
        assert!(!c.unexplained());
    }

    #[test]
    fn classify_rejects_bad_hypotheses() {
        let a = zq(9, &[0, 1, 2]);
        assert!(matches!(
            classify_tightness(&a, &a, 1),
            Err(Error::HypothesesNotMet(_))
        ));
        assert!(matches!(
            classify_tightness(&zq(9, &[0, 1]), &a, 2),
            Err(Error::HypothesesNotMet(_))
        ));
        let b = zq(9, &[0, 3, 4]);
        assert!(matches!(
            classify_tightness(&a, &b, 2),
            Err(Error::HypothesesNotMet(_))
        ));
    }

    #[test]
    fn condition_json_tags() {
        let tags: Vec<String> = [
            Condition::BEqualsT,
            Condition::SizesExceedQ,
            Condition::Reflection { g: 2 },
            Condition::SameDiffAps { d: 1 },
        ]
        .iter()
        .map(|c| serde_json::to_string(c).unwrap())
        .collect();
        assert_eq!(
            tags,
            [
                r#"{"tag":"B_EQUALS_T"}"#,
                r#"{"tag":"SIZES_EXCEED_Q"}"#,
                r#"{"tag":"REFLECTION","g":2}"#,
                r#"{"tag":"SAME_DIFF_APS","d":1}"#
            ]
        );
    }

    #[test]
    fn ap_examples() {
        assert_eq!(is_ap(&zq(9, &[0, 4, 8])), Some(4));
        assert_eq!(is_ap(&zq(9, &[0, 1, 3])), None);
        assert_eq!(is_ap(&zq(9, &[5])), Some(0));
        assert_eq!(is_ap(&ElementSet::integers([5])), Some(0));
        assert_eq!(is_ap(&zq(9, &[2, 7])), Some(4));
        assert_eq!(is_ap(&zq(10, &[0, 5])), Some(5));
        assert_eq!(is_ap(&ElementSet::integers([-1, 3, 7])), Some(4));
        assert_eq!(is_ap(&ElementSet::integers([-1, 3, 8])), None);
        // full coset of <3> in Z_9
        assert_eq!(is_ap(&zq(9, &[0, 3, 6])), Some(3));
        // coset of <2> in Z_10: differences 2 and 4 both generate it
        assert_eq!(
            ap_differences(&zq(10, &[0, 2, 4, 6, 8])),
            ApDifferences::Some(vec![2, 4])
        );
        // union of two cosets of <3> is not a progression
        assert_eq!(is_ap(&zq(9, &[0, 1, 3, 4, 6, 7])), None);
    }

    #[test]
    fn ap_brute_force_agreement() {
        let q = 10;
        for mask in 1u32..(1 << q) {
            let xs: Vec<i64> = (0..q).filter(|i| mask >> i & 1 == 1).collect();
            let set = zq(q, &xs);
            let mut brute = Vec::new();
            for d in 1..=q / 2 {
                let hit = xs.iter().any(|&s| {
                    let prog = ElementSet::new(
                        Domain::Modular(q),
                        (0..xs.len() as i64).map(|k| s + k * d),
                    );
                    prog == set
                });
                if hit {
                    brute.push(d);
                }
            }
            let got = ap_differences(&set);
            if xs.len() <= 1 {
                assert_eq!(got, ApDifferences::Any);
            } else {
                assert_eq!(got, ApDifferences::Some(brute), "{xs:?}");
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(triangular_psi(3, 0), 3);
        assert_eq!(triangular_psi(3, 3), 0);
        assert_eq!(triangular_psi(3, -3), 0);
        assert_eq!(triangular_psi(3, 2), 1);
        assert_eq!(triangular_psi(3, -7), 0);
    }
}
