//! Residue arithmetic, digital-set validation and the dilation/translation
//! actions used to reduce searches to orbit representatives.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where additions happen: in `Z_q` or in `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Modular(i64),
    Integers,
}

impl Domain {
    pub fn modular(q: i64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Domain::Modular(q))
    }

    pub fn modulus(&self) -> Option<i64> {
        match *self {
            Domain::Modular(q) => Some(q),
            Domain::Integers => None,
        }
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> i64 {
        match *self {
            Domain::Modular(q) => x.rem_euclid(q),
            Domain::Integers => x,
        }
    }

    #[inline]
    pub fn add(&self, x: i64, y: i64) -> i64 {
        match *self {
            Domain::Modular(q) => add_mod(x, y, q),
            Domain::Integers => x.checked_add(y).expect("integer digit sum overflows i64"),
        }
    }
}

#[inline]
pub fn add_mod(x: i64, y: i64, q: i64) -> i64 {
    ((x as i128 + y as i128).rem_euclid(q as i128)) as i64
}

#[inline]
pub fn mul_mod(x: i64, y: i64, q: i64) -> i64 {
    ((x as i128 * y as i128).rem_euclid(q as i128)) as i64
}

pub fn is_unit(c: i64, q: i64) -> bool {
    gcd(c.rem_euclid(q), q) == 1
}

/// All units of `Z_q` in increasing order.
pub fn units(q: i64) -> Vec<i64> {
    (1..q).filter(|&c| gcd(c, q) == 1).collect()
}

/// A finite set of elements of one domain, sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementSet {
    domain: Domain,
    elements: Vec<i64>,
}

impl ElementSet {
    /// Reduces into the domain, then sorts and deduplicates.
    pub fn new(domain: Domain, elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().map(|x| domain.reduce(x)).collect();
        elements.sort_unstable();
        elements.dedup();
        ElementSet { domain, elements }
    }

    pub fn modular(q: i64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        Ok(Self::new(Domain::modular(q)?, elements))
    }

    pub fn integers(elements: impl IntoIterator<Item = i64>) -> Self {
        Self::new(Domain::Integers, elements)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&self.domain.reduce(x)).is_ok()
    }
}

/// A complete residue system modulo `m`, either inside `Z_q` (`m | q`) or in `Z`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitalSet {
    set: ElementSet,
    m: i64,
    /// `by_residue[r]` is the element congruent to `r` mod `m`.
    by_residue: Vec<i64>,
}

pub fn validate_digital_set(
    elements: impl IntoIterator<Item = i64>,
    domain: Domain,
    m: i64,
) -> Result<DigitalSet> {
    if m < 2 {
        return Err(Error::DegenerateM(m));
    }
    if let Domain::Modular(q) = domain {
        if q < 2 {
            return Err(Error::InvalidModulus(q));
        }
        if q % m != 0 {
            return Err(Error::MDoesNotDivideQ { q, m });
        }
    }
    let set = ElementSet::new(domain, elements);
    if set.len() as i64 != m {
        return Err(Error::WrongCardinality {
            expected: m,
            got: set.len(),
        });
    }
    let mut by_residue = vec![None; m as usize];
    for &a in set.elements() {
        let r = a.rem_euclid(m) as usize;
        if by_residue[r].replace(a).is_some() {
            return Err(Error::NotCompleteResidueSystem {
                m,
                residue: r as i64,
            });
        }
    }
    let by_residue = by_residue
        .into_iter()
        .map(|a| a.expect("counted"))
        .collect();
    Ok(DigitalSet { set, m, by_residue })
}

impl DigitalSet {
    pub fn modular(q: i64, m: i64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        validate_digital_set(elements, Domain::modular(q)?, m)
    }

    pub fn integers(m: i64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        validate_digital_set(elements, Domain::Integers, m)
    }

    /// Builds from lifts indexed by residue class; `lifts[r] ≡ r (mod m)` is assumed.
    pub(crate) fn from_residue_lifts(domain: Domain, m: i64, lifts: &[i64]) -> Self {
        debug_assert_eq!(lifts.len() as i64, m);
        debug_assert!(lifts
            .iter()
            .enumerate()
            .all(|(r, a)| a.rem_euclid(m) == r as i64));
        let mut elements = lifts.to_vec();
        elements.sort_unstable();
        DigitalSet {
            set: ElementSet { domain, elements },
            m,
            by_residue: lifts.to_vec(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.set.domain
    }

    pub fn q(&self) -> Option<i64> {
        self.set.domain.modulus()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn elements(&self) -> &[i64] {
        self.set.elements()
    }

    pub fn as_set(&self) -> &ElementSet {
        &self.set
    }

    pub fn by_residue(&self) -> &[i64] {
        &self.by_residue
    }

    pub fn contains(&self, x: i64) -> bool {
        self.set.contains(x)
    }

    /// The unique element of the set congruent to `x` modulo `m`.
    #[inline]
    pub fn digit_of(&self, x: i64) -> i64 {
        self.by_residue[self.set.domain.reduce(x).rem_euclid(self.m) as usize]
    }
}

#[derive(Serialize, Deserialize)]
struct DigitalSetRepr {
    domain: Domain,
    m: i64,
    elements: Vec<i64>,
}

impl Serialize for DigitalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DigitalSetRepr {
            domain: self.domain(),
            m: self.m,
            elements: self.elements().to_vec(),
        }
        .serialize(s)
    }
}

/// Deserialization re-runs validation.
impl<'de> Deserialize<'de> for DigitalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DigitalSetRepr::deserialize(d)?;
        validate_digital_set(repr.elements, repr.domain, repr.m).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for DigitalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.domain() {
            Domain::Modular(q) => write!(f, "q={} m={} A=", q, self.m)?,
            Domain::Integers => write!(f, "Z m={} A=", self.m)?,
        }
        for (i, a) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses `q=<int> m=<int> A=<a,b,..>` or `Z m=<int> A=<..>`. Whitespace
/// around `=` and `,` is ignored.
impl FromStr for DigitalSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut squeezed = String::with_capacity(text.len());
        let mut pending_space = false;
        for ch in text.chars() {
            if ch.is_whitespace() {
                pending_space = true;
                continue;
            }
            if pending_space && !matches!(ch, '=' | ',') && !squeezed.ends_with(['=', ',']) {
                squeezed.push(' ');
            }
            pending_space = false;
            squeezed.push(ch);
        }

        let parse_int = |token: &str, value: &str| -> Result<i64> {
            value.parse().map_err(|_| Error::Parse {
                token: token.to_string(),
                reason: "expected an integer".into(),
            })
        };

        let mut q = None;
        let mut integers = false;
        let mut m = None;
        let mut elements = None;
        for token in squeezed.split(' ').filter(|t| !t.is_empty()) {
            if token == "Z" {
                integers = true;
                continue;
            }
            let Some((key, value)) = token.split_once('=') else {
                return Err(Error::Parse {
                    token: token.into(),
                    reason: "expected key=value".into(),
                });
            };
            match key {
                "q" => q = Some(parse_int(token, value)?),
                "m" => m = Some(parse_int(token, value)?),
                "A" => {
                    let mut list = Vec::new();
                    for item in value.split(',') {
                        list.push(parse_int(item, item)?);
                    }
                    elements = Some(list);
                }
                _ => {
                    return Err(Error::Parse {
                        token: token.into(),
                        reason: "unknown key".into(),
                    })
                }
            }
        }

        let domain = match (integers, q) {
            (true, None) => Domain::Integers,
            (false, Some(q)) => Domain::modular(q)?,
            (true, Some(_)) => {
                return Err(Error::Parse {
                    token: "Z".into(),
                    reason: "both Z and q= given".into(),
                })
            }
            (false, None) => return Err(Error::MissingParameter("q")),
        };
        let m = m.ok_or(Error::MissingParameter("m"))?;
        let elements = elements.ok_or(Error::MissingParameter("A"))?;
        if elements.len() as i64 != m {
            return Err(Error::WrongCardinality {
                expected: m,
                got: elements.len(),
            });
        }
        validate_digital_set(elements, domain, m)
    }
}

/// `{c·a mod q}`.
pub fn dilate(a: &DigitalSet, c: i64) -> Result<DigitalSet> {
    let q = a.q().ok_or(Error::NotModular)?;
    if !is_unit(c, q) {
        return Err(Error::NotAUnit { c, q });
    }
    let m = a.m();
    // c is a unit mod m too, so residue classes are permuted.
    let mut lifts = vec![0; m as usize];
    for &x in a.by_residue() {
        let y = mul_mod(c, x, q);
        lifts[y.rem_euclid(m) as usize] = y;
    }
    Ok(DigitalSet::from_residue_lifts(a.domain(), m, &lifts))
}

/// Result of shifting a digital set by `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub set: ElementSet,
    /// Whether `d ∈ mZ_q`, i.e. whether the shift stays inside the orbit.
    pub shift_in_mzq: bool,
    m: i64,
}

impl Translation {
    /// The translated set as a digital set, when the shift lies in `mZ_q`.
    pub fn digital(&self) -> Option<DigitalSet> {
        if !self.shift_in_mzq {
            return None;
        }
        validate_digital_set(
            self.set.elements().iter().copied(),
            self.set.domain(),
            self.m,
        )
        .ok()
    }
}

pub fn translate(a: &DigitalSet, d: i64) -> Result<Translation> {
    let q = a.q().ok_or(Error::NotModular)?;
    let d = d.rem_euclid(q);
    Ok(Translation {
        set: ElementSet::new(a.domain(), a.elements().iter().map(|&x| add_mod(x, d, q))),
        shift_in_mzq: d % a.m() == 0,
        m: a.m(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `A ~ cA` for units `c`.
    DilationOnly,
    /// `A ~ cA + d` for units `c` and `d ∈ mZ_q`.
    Affine,
}

fn sorted_image(a: &DigitalSet, c: i64, q: i64, out: &mut Vec<i64>) {
    out.clear();
    out.extend(a.elements().iter().map(|&x| mul_mod(c, x, q)));
    out.sort_unstable();
}

/// Lexicographically smallest sorted tuple in the orbit of `a`.
pub fn canonical_form(a: &DigitalSet, relation: Relation) -> Result<DigitalSet> {
    let q = a.q().ok_or(Error::NotModular)?;
    let key = canonical_key(a, q, relation, &units(q));
    validate_digital_set(key, a.domain(), a.m())
}

/// Canonical sorted tuple, given the unit list of `Z_q`.
pub(crate) fn canonical_key(a: &DigitalSet, q: i64, relation: Relation, units: &[i64]) -> Vec<i64> {
    let m = a.m();
    let mut best: Option<Vec<i64>> = None;
    let mut image = Vec::with_capacity(a.elements().len());
    for &c in units {
        sorted_image(a, c, q, &mut image);
        if relation == Relation::Affine {
            // Translating by -x0, x0 the class-0 element, is the only shift in
            // mZ_q that puts 0 into the set, and 0 leads every minimal tuple.
            let x0 = *image.iter().find(|x| *x % m == 0).expect("digital");
            for x in image.iter_mut() {
                *x = (*x - x0).rem_euclid(q);
            }
            image.sort_unstable();
        }
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
    }
    best.expect("1 is always a unit")
}

/// Whether `a` is its own dilation-canonical form.
pub(crate) fn is_dilation_canonical(
    a: &DigitalSet,
    q: i64,
    units: &[i64],
    scratch: &mut Vec<i64>,
) -> bool {
    let own = a.elements();
    for &c in units.iter().skip(1) {
        sorted_image(a, c, q, scratch);
        if scratch.as_slice() < own {
            return false;
        }
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs sorted by prime.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn factor_into(mut n: u64, out: &mut Vec<u64>) {
    for p in [2u64, 3, 5] {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
    }
    let mut p = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while p <= 1 << 16 && p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += steps[i];
        i = (i + 1) % steps.len();
    }
    if n == 1 {
        return;
    }
    if p * p > n || is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial divisor of an odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// `m = m' · p^α` with `p^α` the largest prime power dividing `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerDecomposition {
    pub m: i64,
    pub factors: Vec<(u64, u32)>,
    pub p: i64,
    pub alpha: u32,
    pub prime_power: i64,
    pub m_prime: i64,
    /// 1 for odd `m`, 0 for even `m`.
    pub delta_m: u8,
}

pub fn decompose(m: i64) -> Result<PrimePowerDecomposition> {
    if m < 2 {
        return Err(Error::DegenerateM(m));
    }
    let factors = factor(m as u64);
    let (p, alpha, prime_power) = factors
        .iter()
        .map(|&(p, e)| (p as i64, e, (p as i64).pow(e)))
        .max_by_key(|&(_, _, pp)| pp)
        .expect("m >= 2 has a prime factor");
    Ok(PrimePowerDecomposition {
        m,
        factors,
        p,
        alpha,
        prime_power,
        m_prime: m / prime_power,
        delta_m: (m % 2) as u8,
    })
}

/// Same prime support, and each exponent in `q` strictly larger than in `m`.
pub fn is_admissible(q: i64, m: i64) -> bool {
    if q < 2 || m < 2 {
        return false;
    }
    let fq = factor(q as u64);
    let fm = factor(m as u64);
    fq.len() == fm.len()
        && fq
            .iter()
            .zip(&fm)
            .all(|(&(pq, eq), &(pm, em))| pq == pm && eq > em)
}

/// Reduction `Z_Q → Z_{p^β}` onto the full `p`-part of `Q`.
pub fn project(a: &ElementSet, target: i64) -> Result<ElementSet> {
    let q = a.domain().modulus().ok_or(Error::NotModular)?;
    let bad = || Error::BadTarget { q, target };
    if target < 2 || q % target != 0 {
        return Err(bad());
    }
    let f = factor(target as u64);
    if f.len() != 1 {
        return Err(bad());
    }
    let p = f[0].0 as i64;
    if (q / target) % p == 0 {
        return Err(bad());
    }
    Ok(ElementSet::new(
        Domain::Modular(target),
        a.elements().iter().copied(),
    ))
}

/// Residues of a set modulo `m`, for diagnostics.
pub fn residues(a: &ElementSet, m: i64) -> BTreeSet<i64> {
    a.elements().iter().map(|x| x.rem_euclid(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9(elements: &[i64]) -> DigitalSet {
        DigitalSet::modular(9, 3, elements.iter().copied()).unwrap()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(36), vec![(2, 2), (3, 2)]);
        assert_eq!(factor(9), vec![(3, 2)]);
        assert_eq!(factor(1), vec![]);
        assert_eq!(
            factor(1_000_000_007 * 998_244_353),
            vec![(998_244_353, 1), (1_000_000_007, 1)]
        );
        assert_eq!(factor(1 << 40), vec![(2, 40)]);
    }

    #[test]
    fn factor_matches_trial_division() {
        for n in 1..5000u64 {
            let mut rest = n;
            let mut naive = Vec::new();
            let mut p = 2;
            while rest > 1 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                if e > 0 {
                    naive.push((p, e));
                }
                p += 1;
            }
            assert_eq!(factor(n), naive, "n={n}");
        }
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(6).unwrap();
        assert_eq!((d.p, d.alpha, d.m_prime, d.delta_m), (3, 1, 2, 0));
        let d = decompose(12).unwrap();
        assert_eq!((d.p, d.alpha, d.m_prime, d.delta_m), (2, 2, 3, 0));
        let d = decompose(9).unwrap();
        assert_eq!((d.p, d.alpha, d.m_prime, d.delta_m), (3, 2, 1, 1));
        assert_eq!(decompose(1), Err(Error::DegenerateM(1)));
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(9, 3));
        assert!(!is_admissible(12, 6));
        assert!(is_admissible(36, 6));
        assert!(!is_admissible(18, 3));
        assert!(!is_admissible(9, 9));
    }

    #[test]
    fn validation() {
        assert!(validate_digital_set([0, 1, 2], Domain::Modular(9), 3).is_ok());
        assert_eq!(
            validate_digital_set([0, 3, 6], Domain::Modular(9), 3),
            Err(Error::NotCompleteResidueSystem { m: 3, residue: 0 })
        );
        let a = validate_digital_set([8, 0, 1], Domain::Modular(9), 3).unwrap();
        assert_eq!(a.elements(), &[0, 1, 8]);
        assert_eq!(a.by_residue(), &[0, 1, 8]);
        assert_eq!(
            validate_digital_set([0, 1], Domain::Modular(9), 3),
            Err(Error::WrongCardinality {
                expected: 3,
                got: 2
            })
        );
        assert_eq!(
            validate_digital_set([0, 1], Domain::Modular(9), 2),
            Err(Error::MDoesNotDivideQ { q: 9, m: 2 })
        );
        assert_eq!(
            validate_digital_set([0], Domain::Integers, 1),
            Err(Error::DegenerateM(1))
        );
        assert!(DigitalSet::integers(3, [0, 1, 5]).is_ok());
        assert!(DigitalSet::integers(3, [-3, 1, 5]).is_ok());
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(dilate(&z9(&[8, 0, 1]), 2).unwrap().elements(), &[0, 2, 7]);
        let a = z9(&[8, 0, 1]);
        assert_eq!(dilate(&a, 1).unwrap(), a);
        assert_eq!(
            dilate(&z9(&[0, 1, 2]), 3),
            Err(Error::NotAUnit { c: 3, q: 9 })
        );
    }

    #[test]
    fn translate_examples() {
        let a = z9(&[0, 1, 2]);
        let t = translate(&a, 3).unwrap();
        assert_eq!(t.set.elements(), &[3, 4, 5]);
        assert!(t.shift_in_mzq);
        assert!(t.digital().is_some());

        let t = translate(&a, 1).unwrap();
        assert_eq!(t.set.elements(), &[1, 2, 3]);
        assert!(!t.shift_in_mzq);
        assert!(t.digital().is_none());
        // still a complete residue system, just not in the orbit
        assert_eq!(residues(&t.set, 3).len(), 3);

        let t = translate(&a, 0).unwrap();
        assert_eq!(t.digital().unwrap(), a);
    }

    #[test]
    fn canonical_examples() {
        let c = canonical_form(&z9(&[8, 0, 1]), Relation::DilationOnly).unwrap();
        assert_eq!(c.elements(), &[0, 1, 8]);
        let c = canonical_form(&z9(&[3, 4, 5]), Relation::Affine).unwrap();
        assert_eq!(c.elements(), &[0, 1, 2]);
        for rel in [Relation::DilationOnly, Relation::Affine] {
            assert_eq!(
                canonical_form(&z9(&[0, 1, 2]), rel).unwrap().elements(),
                &[0, 1, 2]
            );
        }
        assert_eq!(
            canonical_form(&DigitalSet::integers(2, [0, 1]).unwrap(), Relation::Affine),
            Err(Error::NotModular)
        );
    }

    #[test]
    fn dilation_orbit_of_zero_one_eight() {
        let orbit: BTreeSet<Vec<i64>> = units(9)
            .into_iter()
            .map(|c| dilate(&z9(&[8, 0, 1]), c).unwrap().elements().to_vec())
            .collect();
        let expected: BTreeSet<Vec<i64>> = [vec![0, 1, 8], vec![0, 2, 7], vec![0, 4, 5]]
            .into_iter()
            .collect();
        assert_eq!(orbit, expected);
    }

    #[test]
    fn project_examples() {
        let a = ElementSet::modular(9, [0, 1, 2]).unwrap();
        assert_eq!(project(&a, 9).unwrap().elements(), &[0, 1, 2]);
        let a = ElementSet::modular(18, [0, 10, 2]).unwrap();
        let p = project(&a, 9).unwrap();
        assert_eq!(p.elements(), &[0, 1, 2]);
        assert_eq!(p.domain(), Domain::Modular(9));
        let a = ElementSet::modular(18, [0, 1, 2]).unwrap();
        assert_eq!(project(&a, 3), Err(Error::BadTarget { q: 18, target: 3 }));
        assert_eq!(project(&a, 6), Err(Error::BadTarget { q: 18, target: 6 }));
    }

    #[test]
    fn literal_parsing() {
        let a: DigitalSet = "q=9 m=3 A=8,0,1".parse().unwrap();
        assert_eq!(a.elements(), &[0, 1, 8]);
        let b: DigitalSet = "  q = 9   m= 3 A = 8 , 0,1 ".parse().unwrap();
        assert_eq!(a, b);
        let z: DigitalSet = "Z m=3 A=0,1,5".parse().unwrap();
        assert_eq!(z.domain(), Domain::Integers);
        assert_eq!(z.to_string(), "Z m=3 A=0,1,5");
        assert_eq!(a.to_string(), "q=9 m=3 A=0,1,8");

        match "q=9 m=3 A=0,x,2".parse::<DigitalSet>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "x"),
            other => panic!("{other:?}"),
        }
        match "q=9 m=3 B=0".parse::<DigitalSet>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "B=0"),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            "q=9 m=3 A=0,0,1".parse::<DigitalSet>(),
            Err(Error::WrongCardinality {
                expected: 3,
                got: 2
            })
        );
        assert_eq!(
            "m=3 A=0,1,2".parse::<DigitalSet>(),
            Err(Error::MissingParameter("q"))
        );
    }

    #[test]
    fn serde_revalidates() {
        let a = z9(&[8, 0, 1]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"domain":{"modular":9},"m":3,"elements":[0,1,8]}"#);
        assert_eq!(serde_json::from_str::<DigitalSet>(&json).unwrap(), a);
        let bad = r#"{"domain":{"modular":9},"m":3,"elements":[0,3,8]}"#;
        assert!(serde_json::from_str::<DigitalSet>(bad).is_err());
        let z = DigitalSet::integers(3, [0, 1, 5]).unwrap();
        let json = serde_json::to_string(&z).unwrap();
        assert!(json.contains(r#""domain":"integers""#));
        assert_eq!(serde_json::from_str::<DigitalSet>(&json).unwrap(), z);
    }
}
