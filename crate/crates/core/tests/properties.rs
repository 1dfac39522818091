use std::collections::BTreeSet;

use carrylab::bounds::{alon_bound, mu, thm22_threshold, Side};
use carrylab::carry::{carry_report, pollard_sum, rep_function};
use carrylab::exact;
use carrylab::pollard::{is_ap, triangular_psi};
use carrylab::ring::{
    canonical_form, decompose, dilate, factor, is_prime, translate, units, DigitalSet, ElementSet,
    Relation,
};
use proptest::prelude::*;

const SHAPES: [(i64, i64); 8] = [
    (9, 3),
    (8, 4),
    (12, 6),
    (25, 5),
    (27, 9),
    (16, 4),
    (18, 6),
    (27, 3),
];

/// A digital set of `Z_q` built from one lift index per residue class.
fn digital_in(q: i64, m: i64) -> impl Strategy<Value = DigitalSet> {
    proptest::collection::vec(0..q / m, m as usize).prop_map(move |ks| {
        DigitalSet::modular(q, m, ks.iter().enumerate().map(|(r, k)| r as i64 + m * k)).unwrap()
    })
}

fn digital() -> impl Strategy<Value = DigitalSet> {
    (0..SHAPES.len()).prop_flat_map(|i| digital_in(SHAPES[i].0, SHAPES[i].1))
}

fn digital_pair() -> impl Strategy<Value = (DigitalSet, DigitalSet)> {
    (0..SHAPES.len()).prop_flat_map(|i| {
        let (q, m) = SHAPES[i];
        (digital_in(q, m), digital_in(q, m))
    })
}

fn unit_of(q: i64, pick: usize) -> i64 {
    let us = units(q);
    us[pick % us.len()]
}

fn subset(q: i64) -> impl Strategy<Value = ElementSet> {
    proptest::collection::btree_set(0..q, 1..=q as usize)
        .prop_map(move |xs| ElementSet::modular(q, xs).unwrap())
}

fn dilation_orbit(a: &DigitalSet) -> BTreeSet<Vec<i64>> {
    let q = a.q().unwrap();
    units(q)
        .into_iter()
        .map(|c| dilate(a, c).unwrap().elements().to_vec())
        .collect()
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(a in digital()) {
        for rel in [Relation::DilationOnly, Relation::Affine] {
            let c = canonical_form(&a, rel).unwrap();
            prop_assert_eq!(canonical_form(&c, rel).unwrap(), c);
        }
    }

    #[test]
    fn canonical_form_is_the_orbit_minimum(a in digital()) {
        let orbit = dilation_orbit(&a);
        let c = canonical_form(&a, Relation::DilationOnly).unwrap();
        prop_assert_eq!(c.elements(), orbit.iter().next().unwrap().as_slice());
        for x in &orbit {
            let b = DigitalSet::modular(a.q().unwrap(), a.m(), x.iter().copied()).unwrap();
            prop_assert_eq!(canonical_form(&b, Relation::DilationOnly).unwrap(), c.clone());
        }
    }

    #[test]
    fn affine_canonical_form_is_constant_on_orbits(a in digital(), pick in 0usize..64, k in 0i64..64) {
        let q = a.q().unwrap();
        let c = unit_of(q, pick);
        let d = (k * a.m()) % q;
        let image = translate(&dilate(&a, c).unwrap(), d).unwrap().digital().unwrap();
        prop_assert_eq!(
            canonical_form(&image, Relation::Affine).unwrap(),
            canonical_form(&a, Relation::Affine).unwrap()
        );
    }

    #[test]
    fn dilation_preserves_digitality(a in digital(), pick in 0usize..64) {
        let q = a.q().unwrap();
        let c = unit_of(q, pick);
        let image: Vec<i64> = a.elements().iter().map(|x| (c * x).rem_euclid(q)).collect();
        let residues: BTreeSet<i64> = image.iter().map(|x| x % a.m()).collect();
        prop_assert_eq!(residues.len() as i64, a.m());
        prop_assert!(dilate(&a, c).is_ok());
    }

    #[test]
    fn c2_is_dilation_invariant(a in digital(), pick in 0usize..64) {
        let c = unit_of(a.q().unwrap(), pick);
        prop_assert_eq!(carry_report(&dilate(&a, c).unwrap()).c2, carry_report(&a).c2);
    }

    #[test]
    fn c1_is_affine_invariant(a in digital(), pick in 0usize..64, k in 0i64..64) {
        let q = a.q().unwrap();
        let image = translate(&dilate(&a, unit_of(q, pick)).unwrap(), (k * a.m()) % q)
            .unwrap()
            .digital()
            .unwrap();
        prop_assert_eq!(carry_report(&image).c1, carry_report(&a).c1);
    }

    #[test]
    fn carry_count_matches_direct_membership(a in digital()) {
        let q = a.q().unwrap();
        let xs = a.elements();
        let direct = xs
            .iter()
            .flat_map(|x| xs.iter().map(move |y| (x + y) % q))
            .filter(|s| !xs.contains(s))
            .count() as u64;
        let r = carry_report(&a);
        prop_assert_eq!(r.carry_count, direct);
        prop_assert_eq!(r.c2, exact::ratio(direct as i128, (a.m() * a.m()) as i128));
        prop_assert_eq!(r.c1, r.carry_set.len());
        prop_assert_eq!(r.carry_set.contains(&0), direct < (a.m() * a.m()) as u64);
    }

    #[test]
    fn representation_counts_sum_to_product(a in subset(11), b in subset(11)) {
        let p = rep_function(&a, &b).unwrap();
        let total: u64 = (0..11).map(|x| p.get(x)).sum();
        prop_assert_eq!(total, (a.len() * b.len()) as u64);
    }

    #[test]
    fn coset_sums_of_digital_sets_equal_m((a, b) in digital_pair()) {
        let p = rep_function(a.as_set(), b.as_set()).unwrap();
        prop_assert!(p.coset_sums(a.m()).iter().all(|&s| s == a.m() as u64));
    }

    #[test]
    fn pollard_sum_is_monotone_and_concave(a in subset(12), b in subset(12)) {
        let max = a.len().min(b.len()) as u64;
        let s: Vec<u64> = (1..=max).map(|t| pollard_sum(&a, &b, t).unwrap()).collect();
        prop_assert!(s.windows(2).all(|w| w[0] <= w[1]));
        // increments |A +_t B| never grow
        let inc: Vec<u64> = std::iter::once(s[0]).chain(s.windows(2).map(|w| w[1] - w[0])).collect();
        prop_assert!(inc.windows(2).all(|w| w[0] >= w[1]));
        let p = rep_function(&a, &b).unwrap();
        for t in 1..=max {
            prop_assert_eq!(p.capped_sum(t), p.layered_sum(t));
        }
    }

    #[test]
    fn psi_matches_interval_sumset(len in 1u64..20, x in -25i64..25) {
        let a = ElementSet::integers(0..len as i64);
        let b = ElementSet::integers(-(len as i64 - 1)..=0);
        prop_assert_eq!(rep_function(&a, &b).unwrap().get(x), triangular_psi(len, x));
    }

    #[test]
    fn ap_status_is_dilation_and_translation_invariant(a in subset(13), c in 1i64..13, d in 0i64..13) {
        let image = ElementSet::modular(13, a.elements().iter().map(|x| c * x + d)).unwrap();
        prop_assert_eq!(is_ap(&a).is_some(), is_ap(&image).is_some());
    }

    #[test]
    fn is_ap_agrees_with_brute_force(a in subset(14)) {
        let xs: BTreeSet<i64> = a.elements().iter().copied().collect();
        let brute = (0..14).any(|s| {
            (1..14).any(|d| (0..xs.len() as i64).map(|i| (s + i * d) % 14).collect::<BTreeSet<_>>() == xs)
        });
        prop_assert_eq!(is_ap(&a).is_some(), brute || xs.len() <= 1);
    }

    #[test]
    fn decomposition_reassembles(m in 2i64..5000) {
        let d = decompose(m).unwrap();
        prop_assert_eq!(d.m_prime * d.prime_power, m);
        prop_assert_eq!(d.p.pow(d.alpha), d.prime_power);
        // brute force: the largest prime power dividing m
        let prime_power = |x: i64| {
            let p = (2..=x).find(|d| x % d == 0).unwrap();
            let mut y = x;
            while y % p == 0 {
                y /= p;
            }
            y == 1
        };
        let best = (2..=m).filter(|&x| m % x == 0 && prime_power(x)).max().unwrap();
        prop_assert_eq!(d.prime_power, best);
        let product: u64 = factor(m as u64).iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(product, m as u64);
    }
}

#[test]
fn mu_at_odd_primes_is_alon_bound() {
    for p in (3..=100).filter(|&p| is_prime(p as u64)) {
        assert_eq!(mu(p).unwrap().mu, alon_bound(p).unwrap(), "p={p}");
        assert_eq!(
            alon_bound(p).unwrap(),
            exact::ratio((p * p - 1) as i128, (4 * p * p) as i128)
        );
    }
}

#[test]
fn thm22_sides_differ_by_prime_power() {
    for p in [3i64, 5, 7, 11, 13] {
        for alpha in 1..=4 {
            let plus = thm22_threshold(p, alpha, Side::Plus).unwrap();
            let minus = thm22_threshold(p, alpha, Side::Minus).unwrap();
            let pa = p.pow(alpha) as u64;
            assert_eq!(plus.threshold - minus.threshold, pa);
            assert_eq!(plus.t - minus.t, 1);
        }
    }
}
