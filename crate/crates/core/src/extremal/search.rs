//! Minimization of `C₁` and `C₂` over the digital sets of `Z_q`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::carry::{carry_count_lifts, carry_report, distinct_carries_lifts};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::extremal::classify::{classify_structure, Purpose, StructureClass};
use crate::extremal::enumerate::{enumerate, EnumerationPlan, Lifts, Reduction};
use crate::ring::{
    canonical_key, is_admissible, units, validate_digital_set, DigitalSet, Domain, Relation,
};

/// Candidate evaluations allowed before an exhaustive search refuses to run.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Upper bound on witnesses kept per minimum; the smallest are kept.
pub const WITNESS_CAP: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    /// Distinct carries.
    C1,
    /// Carrying pairs over `m²`.
    C2,
}

impl Statistic {
    /// `C₁` is affine-invariant, `C₂` only dilation-invariant.
    pub fn relation(self) -> Relation {
        match self {
            Statistic::C1 => Relation::Affine,
            Statistic::C2 => Relation::DilationOnly,
        }
    }

    pub fn purpose(self) -> Purpose {
        match self {
            Statistic::C1 => Purpose::ForC1,
            Statistic::C2 => Purpose::ForC2,
        }
    }

    /// Fastest sound reduction for an exhaustive search.
    pub fn reduction(self) -> Reduction {
        match self {
            Statistic::C1 => Reduction::FixZeroRep,
            Statistic::C2 => Reduction::None,
        }
    }

    pub fn plan(self, q: i64, m: i64) -> Result<EnumerationPlan> {
        EnumerationPlan::new(q, m, self.reduction())
    }

    /// The statistic as an exact value: an integer for `C₁`, `count/m²` for `C₂`.
    pub fn value(self, count: u64, m: i64) -> Rational {
        match self {
            Statistic::C1 => exact::integer(count as i128),
            Statistic::C2 => exact::ratio(count as i128, (m as i128) * (m as i128)),
        }
    }

    fn of_set(self, a: &DigitalSet) -> u64 {
        let report = carry_report(a);
        match self {
            Statistic::C1 => report.c1 as u64,
            Statistic::C2 => report.carry_count,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
    HillClimb { restarts: u64, seed: u64 },
}

/// Running minimum over part of a search. `merge` is associative and commutative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchPartial {
    pub statistic: Statistic,
    /// Carry count (`C₂`) or distinct carries (`C₁`).
    pub min_count: Option<u64>,
    /// Examined candidates attaining the minimum.
    pub minimizers: u64,
    /// Canonical forms of minimizers, ascending, at most `WITNESS_CAP`.
    pub witnesses: Vec<Vec<i64>>,
    pub examined: u64,
}

impl SearchPartial {
    pub fn empty(statistic: Statistic) -> Self {
        SearchPartial {
            statistic,
            min_count: None,
            minimizers: 0,
            witnesses: Vec::new(),
            examined: 0,
        }
    }

    fn offer(&mut self, count: u64, key: impl FnOnce() -> Vec<i64>) {
        self.examined += 1;
        match self.min_count {
            Some(min) if count > min => return,
            Some(min) if count == min => self.minimizers += 1,
            _ => {
                self.min_count = Some(count);
                self.minimizers = 1;
                self.witnesses.clear();
            }
        }
        self.witnesses.push(key());
        if self.witnesses.len() > 2 * WITNESS_CAP {
            self.normalize();
        }
    }

    fn normalize(&mut self) {
        self.witnesses.sort_unstable();
        self.witnesses.dedup();
        self.witnesses.truncate(WITNESS_CAP);
    }

    pub fn merge(mut self, mut other: SearchPartial) -> SearchPartial {
        assert_eq!(
            self.statistic, other.statistic,
            "merging different statistics"
        );
        self.examined += other.examined;
        match (self.min_count, other.min_count) {
            (_, None) => {}
            (None, Some(_)) => {
                other.examined = self.examined;
                self = other;
            }
            (Some(a), Some(b)) if b < a => {
                other.examined = self.examined;
                self = other;
            }
            (Some(a), Some(b)) if a == b => {
                self.minimizers += other.minimizers;
                self.witnesses.append(&mut other.witnesses);
            }
            _ => {}
        }
        self.normalize();
        self
    }
}

/// Runs the shard of `plan` named by its partition.
pub fn search_shard(plan: &EnumerationPlan, statistic: Statistic) -> Result<SearchPartial> {
    if statistic == Statistic::C2 && plan.reduction == Reduction::FixZeroRep {
        return Err(Error::InvalidParameter(
            "pinning the class-0 digit changes C2; use no reduction or dilation-canonical".into(),
        ));
    }
    let q = plan.q;
    let relation = statistic.relation();
    let units = units(q);
    let mut partial = SearchPartial::empty(statistic);
    if plan.reduction == Reduction::DilationCanonical {
        for a in enumerate(plan) {
            let count = statistic.of_set(&a);
            partial.offer(count, || canonical_key(&a, q, relation, &units));
        }
    } else {
        let mut seen = BTreeSet::new();
        let domain = Domain::Modular(q);
        plan.lifts().for_each(plan.range(), |lifts| {
            let count = match statistic {
                Statistic::C1 => distinct_carries_lifts(lifts, Some(q), &mut seen) as u64,
                Statistic::C2 => carry_count_lifts(lifts, Some(q)),
            };
            partial.offer(count, || {
                let a = DigitalSet::from_residue_lifts(domain, plan.m, lifts);
                canonical_key(&a, q, relation, &units)
            });
        });
    }
    partial.normalize();
    Ok(partial)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub q: i64,
    pub m: i64,
    pub statistic: Statistic,
    pub mode: SearchMode,
    pub min_count: u64,
    #[serde(with = "exact")]
    pub min: Rational,
    /// Canonical under dilation (`C₂`) or the affine action (`C₁`).
    pub witnesses: Vec<DigitalSet>,
    pub witness_classes: Vec<StructureClass>,
    pub minimizers: u64,
    pub examined: u64,
    /// `(q/m)^m`.
    pub space_size: u128,
    /// Exhaustive results are exact global minima.
    pub certified: bool,
    pub admissible: bool,
}

impl SearchOutcome {
    /// Turns a merged partial into an outcome, re-checking every witness
    /// against the reported minimum from scratch.
    pub fn from_partial(q: i64, m: i64, mode: SearchMode, partial: SearchPartial) -> Result<Self> {
        let statistic = partial.statistic;
        let min_count = partial
            .min_count
            .ok_or_else(|| Error::InvalidParameter("nothing was examined".into()))?;
        let mut witnesses = Vec::with_capacity(partial.witnesses.len());
        for key in partial.witnesses {
            let a = validate_digital_set(key, Domain::modular(q)?, m)?;
            let recomputed = statistic.of_set(&a);
            if recomputed != min_count {
                return Err(Error::Revalidation(format!(
                    "{a}: statistic {recomputed}, reported minimum {min_count}"
                )));
            }
            witnesses.push(a);
        }
        let witness_classes = witnesses
            .iter()
            .map(|a| classify_structure(a, statistic.purpose()))
            .collect();
        Ok(SearchOutcome {
            q,
            m,
            statistic,
            mode,
            min_count,
            min: statistic.value(min_count, m),
            witnesses,
            witness_classes,
            minimizers: partial.minimizers,
            examined: partial.examined,
            space_size: EnumerationPlan::new(q, m, Reduction::None)?.full_space_size(),
            certified: mode == SearchMode::Exhaustive,
            admissible: is_admissible(q, m),
        })
    }
}

/// Checks the exhaustive space of `statistic` against `budget`.
pub fn exhaustive_plan(
    q: i64,
    m: i64,
    statistic: Statistic,
    budget: u64,
) -> Result<EnumerationPlan> {
    let plan = statistic.plan(q, m)?;
    let size = plan.odometer_len();
    if size > budget as u128 {
        return Err(Error::SpaceTooLarge { size, budget });
    }
    Ok(plan)
}

pub fn search(
    q: i64,
    m: i64,
    statistic: Statistic,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchOutcome> {
    let partial = match mode {
        SearchMode::Exhaustive => {
            search_shard(&exhaustive_plan(q, m, statistic, budget)?, statistic)?
        }
        SearchMode::Random { samples, seed } => {
            check_budget(samples, budget)?;
            random_search(q, m, statistic, samples, seed)?
        }
        SearchMode::HillClimb { restarts, seed } => {
            check_budget(restarts, budget)?;
            hill_climb(q, m, statistic, restarts, seed, budget)?
        }
    };
    SearchOutcome::from_partial(q, m, mode, partial)
}

pub fn min_c2(q: i64, m: i64, mode: SearchMode) -> Result<SearchOutcome> {
    search(q, m, Statistic::C2, mode, DEFAULT_BUDGET)
}

pub fn min_c1(q: i64, m: i64, mode: SearchMode) -> Result<SearchOutcome> {
    search(q, m, Statistic::C1, mode, DEFAULT_BUDGET)
}

fn check_budget(n: u64, budget: u64) -> Result<()> {
    if n > budget {
        return Err(Error::SpaceTooLarge {
            size: n as u128,
            budget,
        });
    }
    Ok(())
}

struct Evaluator {
    q: i64,
    m: i64,
    statistic: Statistic,
    units: Vec<i64>,
    seen: BTreeSet<i64>,
}

impl Evaluator {
    fn new(q: i64, m: i64, statistic: Statistic) -> Self {
        Evaluator {
            q,
            m,
            statistic,
            units: units(q),
            seen: BTreeSet::new(),
        }
    }

    fn count(&mut self, lifts: &[i64]) -> u64 {
        match self.statistic {
            Statistic::C1 => distinct_carries_lifts(lifts, Some(self.q), &mut self.seen) as u64,
            Statistic::C2 => carry_count_lifts(lifts, Some(self.q)),
        }
    }

    fn offer(&mut self, partial: &mut SearchPartial, lifts: &[i64]) -> u64 {
        let count = self.count(lifts);
        let (q, m, relation, units) = (self.q, self.m, self.statistic.relation(), &self.units);
        partial.offer(count, || {
            let a = DigitalSet::from_residue_lifts(Domain::Modular(q), m, lifts);
            canonical_key(&a, q, relation, units)
        });
        count
    }
}

fn random_lifts(rng: &mut ChaCha8Rng, choices: &[Vec<i64>], out: &mut Vec<i64>) {
    out.clear();
    out.extend(choices.iter().map(|c| c[rng.gen_range(0..c.len())]));
}

fn random_search(
    q: i64,
    m: i64,
    statistic: Statistic,
    samples: u64,
    seed: u64,
) -> Result<SearchPartial> {
    EnumerationPlan::new(q, m, Reduction::None)?;
    let choices = Lifts::modular(q, m).choices;
    let mut eval = Evaluator::new(q, m, statistic);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partial = SearchPartial::empty(statistic);
    let mut lifts = Vec::with_capacity(m as usize);
    for _ in 0..samples {
        random_lifts(&mut rng, &choices, &mut lifts);
        eval.offer(&mut partial, &lifts);
    }
    partial.normalize();
    Ok(partial)
}

/// Steepest descent over single-class lift changes from random starts.
/// Stops early once `budget` evaluations have been spent.
fn hill_climb(
    q: i64,
    m: i64,
    statistic: Statistic,
    restarts: u64,
    seed: u64,
    budget: u64,
) -> Result<SearchPartial> {
    EnumerationPlan::new(q, m, Reduction::None)?;
    let choices = Lifts::modular(q, m).choices;
    let mut eval = Evaluator::new(q, m, statistic);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partial = SearchPartial::empty(statistic);
    let mut current = Vec::with_capacity(m as usize);
    for _ in 0..restarts {
        random_lifts(&mut rng, &choices, &mut current);
        let mut best = eval.offer(&mut partial, &current);
        loop {
            let mut step: Option<(usize, i64, u64)> = None;
            let mut probe = current.clone();
            for (r, options) in choices.iter().enumerate() {
                for &x in options {
                    if x == current[r] || partial.examined >= budget {
                        continue;
                    }
                    probe[r] = x;
                    let count = eval.offer(&mut partial, &probe);
                    if count < step.map_or(best, |s| s.2) {
                        step = Some((r, x, count));
                    }
                }
                probe[r] = current[r];
            }
            match step {
                Some((r, x, count)) => {
                    current[r] = x;
                    best = count;
                }
                None => break,
            }
        }
    }
    partial.normalize();
    Ok(partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::ring::{canonical_form, dilate};

    fn modular(q: i64, m: i64, xs: &[i64]) -> DigitalSet {
        DigitalSet::modular(q, m, xs.iter().copied()).unwrap()
    }

    fn elements(outcome: &SearchOutcome) -> Vec<Vec<i64>> {
        outcome
            .witnesses
            .iter()
            .map(|a| a.elements().to_vec())
            .collect()
    }

    /// Minimum and minimizers straight from `carry_report` over the full space.
    fn brute(q: i64, m: i64, statistic: Statistic) -> (u64, BTreeSet<Vec<i64>>) {
        let plan = EnumerationPlan::new(q, m, Reduction::None).unwrap();
        let all: Vec<(u64, DigitalSet)> = enumerate(&plan)
            .map(|a| (statistic.of_set(&a), a))
            .collect();
        let min = all.iter().map(|x| x.0).min().unwrap();
        let keys = all
            .iter()
            .filter(|x| x.0 == min)
            .map(|x| {
                canonical_form(&x.1, statistic.relation())
                    .unwrap()
                    .elements()
                    .to_vec()
            })
            .collect();
        (min, keys)
    }

    #[test]
    fn min_c2_examples() {
        let z9 = min_c2(9, 3, SearchMode::Exhaustive).unwrap();
        assert_eq!(z9.min, ratio(2, 9));
        assert_eq!(elements(&z9), vec![vec![0, 1, 8]]);
        assert_eq!(z9.minimizers, 3);
        assert_eq!(z9.examined, 27);
        assert!(z9.certified && z9.admissible);

        let z4 = min_c2(4, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(z4.min, ratio(1, 4));
        assert_eq!(elements(&z4), vec![vec![0, 1]]);

        let z25 = min_c2(25, 5, SearchMode::Exhaustive).unwrap();
        assert_eq!(z25.min, ratio(6, 25));
        let expected =
            canonical_form(&modular(25, 5, &[23, 24, 0, 1, 2]), Relation::DilationOnly).unwrap();
        assert_eq!(z25.witnesses, vec![expected]);
        assert_eq!(z25.minimizers, 10);
        assert!(matches!(
            z25.witness_classes[0],
            StructureClass::SymmetricIntervalDilation { .. }
        ));
    }

    #[test]
    fn min_c1_examples() {
        let z9 = min_c1(9, 3, SearchMode::Exhaustive).unwrap();
        assert_eq!(z9.min, exact::integer(2));
        assert_eq!(z9.examined, 9);
        let classes: BTreeSet<Vec<i64>> = [[0, 1, 2], [1, 2, 3]]
            .iter()
            .map(|xs| {
                canonical_form(&modular(9, 3, xs), Relation::Affine)
                    .unwrap()
                    .elements()
                    .to_vec()
            })
            .collect();
        assert_eq!(elements(&z9).into_iter().collect::<BTreeSet<_>>(), classes);

        let z8 = min_c1(8, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(z8.min_count, 2);
        let z27 = min_c1(27, 3, SearchMode::Exhaustive).unwrap();
        assert_eq!(z27.min_count, 2);
    }

    #[test]
    fn agrees_with_brute_force() {
        for (q, m) in [(4, 2), (8, 2), (8, 4), (9, 3), (12, 6), (16, 4), (27, 3)] {
            for statistic in [Statistic::C1, Statistic::C2] {
                let (min, keys) = brute(q, m, statistic);
                let found =
                    search(q, m, statistic, SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap();
                assert_eq!(found.min_count, min, "q={q} m={m} {statistic:?}");
                assert_eq!(elements(&found).into_iter().collect::<BTreeSet<_>>(), keys);
            }
        }
    }

    #[test]
    fn dilation_canonical_plan_agrees() {
        let plan = EnumerationPlan::new(25, 5, Reduction::DilationCanonical).unwrap();
        let reduced = search_shard(&plan, Statistic::C2).unwrap();
        let full = search_shard(&Statistic::C2.plan(25, 5).unwrap(), Statistic::C2).unwrap();
        assert_eq!(reduced.min_count, full.min_count);
        assert_eq!(reduced.witnesses, full.witnesses);
        assert!(reduced.examined < full.examined);
    }

    #[test]
    fn sharding_is_invisible() {
        for statistic in [Statistic::C1, Statistic::C2] {
            let plan = statistic.plan(16, 4).unwrap();
            let whole = search_shard(&plan, statistic).unwrap();
            for total in [2, 3, 7, 64] {
                let parts: Vec<SearchPartial> = (0..total)
                    .map(|i| search_shard(&plan.shard(i, total), statistic).unwrap())
                    .collect();
                let forward = parts
                    .iter()
                    .cloned()
                    .fold(SearchPartial::empty(statistic), SearchPartial::merge);
                let backward = parts
                    .iter()
                    .rev()
                    .cloned()
                    .fold(SearchPartial::empty(statistic), SearchPartial::merge);
                assert_eq!(forward, whole);
                assert_eq!(backward, whole);
            }
        }
    }

    #[test]
    fn c2_refuses_pinned_plan() {
        let plan = EnumerationPlan::new(9, 3, Reduction::FixZeroRep).unwrap();
        assert!(matches!(
            search_shard(&plan, Statistic::C2),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn budget() {
        assert_eq!(
            search(25, 5, Statistic::C2, SearchMode::Exhaustive, 1000),
            Err(Error::SpaceTooLarge {
                size: 3125,
                budget: 1000
            })
        );
        // the pinned C1 space is 625
        assert!(search(25, 5, Statistic::C1, SearchMode::Exhaustive, 1000).is_ok());
    }

    #[test]
    fn sampled_modes() {
        let mode = SearchMode::Random {
            samples: 500,
            seed: 0,
        };
        let a = search(25, 5, Statistic::C2, mode, DEFAULT_BUDGET).unwrap();
        let b = search(25, 5, Statistic::C2, mode, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
        assert!(!a.certified);
        assert_eq!(a.examined, 500);
        assert!(a.min >= ratio(6, 25));

        let mode = SearchMode::HillClimb {
            restarts: 4,
            seed: 7,
        };
        let h = search(25, 5, Statistic::C2, mode, DEFAULT_BUDGET).unwrap();
        assert!(h.min >= ratio(6, 25));
        assert_eq!(
            h,
            search(25, 5, Statistic::C2, mode, DEFAULT_BUDGET).unwrap()
        );
        for w in &h.witnesses {
            for c in units(25) {
                assert_eq!(
                    carry_report(&dilate(w, c).unwrap()).carry_count,
                    h.min_count
                );
            }
        }
    }

    #[test]
    fn outcome_rejects_bad_witness() {
        let partial = SearchPartial {
            statistic: Statistic::C2,
            min_count: Some(1),
            minimizers: 1,
            witnesses: vec![vec![0, 1, 8]],
            examined: 1,
        };
        assert!(matches!(
            SearchOutcome::from_partial(9, 3, SearchMode::Exhaustive, partial),
            Err(Error::Revalidation(_))
        ));
    }
}
