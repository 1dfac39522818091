//! Exhaustive and sampled sweeps that check the bounds and equality
//! characterizations on every candidate of a finite family.
//!
//! A sweep is a numbered list of work units. Any split of `0..len` into
//! ranges, run in any order and merged, gives the same tally.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{interval_carry_count, mu, thm22_threshold, thm23_threshold, Side};
use crate::carry::{carry_count_lifts, carry_report, distinct_carries_lifts, pollard_sum_mod};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::extremal::classify::{
    classify_structure, interval, interval_affine_orbit, symmetric_interval, symmetric_orbit,
    IntervalVariant, Purpose,
};
use crate::extremal::enumerate::{shard_range, space_size, Lifts};
use crate::extremal::report::{
    Claim, Observed, SweepTally, VerificationReport, Witness, WitnessStat, REPORT_SCHEMA,
};
use crate::pollard::{
    ap_differences, common_difference, conditions, has_chowla, reflection_point, Condition,
};
use crate::ring::{
    canonical_key, is_admissible, is_prime, units, DigitalSet, Domain, ElementSet, Relation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// `S(A,B,t) ≥ t·min(q, |A|+|B|−t)` when `A` or `B` is Chowla.
    PollardChowla,
    /// Equality in the above forces one of four structural conditions.
    NazEquality,
    /// Odd `p`: thresholds at `t = (p^α ∓ 1)/2`, equality iff same-difference APs.
    Thm22,
    /// `p = 2`: threshold at `t = 2^{α−1}`, equality iff same-difference APs.
    Thm23,
    /// `C₁ ≥ 2`, with equality exactly on the affine orbit of the intervals.
    C1Structure,
    /// `C₂ ≥ μ(m)`.
    C2Mu,
    /// Integer digits in a window: `carry_count ≥ ⌊m²/4⌋` and `C₁ ≥ 2`.
    ZCase,
    /// `q = p^β, m = p^α`: carry count versus `⌊p^{2α}/4⌋`, minimizers versus
    /// the dilated symmetric interval.
    PrimePowerExtremal,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::PollardChowla,
        TheoremId::NazEquality,
        TheoremId::Thm22,
        TheoremId::Thm23,
        TheoremId::C1Structure,
        TheoremId::C2Mu,
        TheoremId::ZCase,
        TheoremId::PrimePowerExtremal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::PollardChowla => "pollard-chowla",
            TheoremId::NazEquality => "naz-equality",
            TheoremId::Thm22 => "thm22",
            TheoremId::Thm23 => "thm23",
            TheoremId::C1Structure => "c1-structure",
            TheoremId::C2Mu => "c2-mu",
            TheoremId::ZCase => "z-case",
            TheoremId::PrimePowerExtremal => "prime-power-extremal",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: Option<i64>,
    pub m: Option<i64>,
    pub p: Option<i64>,
    pub alpha: Option<u32>,
    pub beta: Option<u32>,
    /// Integer digits range over `[−window, window]`.
    pub window: Option<i64>,
    /// Sampled pairs; pair sweeps are exhaustive when absent.
    pub samples: Option<u64>,
    /// Forces an exhaustive pair sweep even when `samples` is given.
    pub exhaustive: bool,
}

fn need<T: Copy>(value: Option<T>, name: &'static str) -> Result<T> {
    value.ok_or(Error::MissingParameter(name))
}

fn within(size: u128, budget: u64) -> Result<()> {
    if size > budget as u128 {
        return Err(Error::SpaceTooLarge { size, budget });
    }
    Ok(())
}

fn checked_pow(p: i64, e: u32) -> Result<i64> {
    p.checked_pow(e)
        .filter(|&x| x < 1 << 31)
        .ok_or(Error::Overflow)
}

/// A sweep split into `len()` independent, numbered work units.
trait Sweep: Send + Sync {
    fn len(&self) -> u128;
    fn run(&self, range: Range<u128>, tally: &mut SweepTally);
    /// Checks that need the whole tally.
    fn finish(&self, _tally: &mut SweepTally, _observations: &mut Vec<String>) {}
}

/// A resolved sweep: run its shards, merge the tallies, then call `report`.
pub struct SweepPlan {
    pub id: TheoremId,
    pub params: Params,
    pub mode: String,
    pub seed: u64,
    sweep: Box<dyn Sweep>,
}

impl SweepPlan {
    /// Work units across all shards.
    pub fn len(&self) -> u128 {
        self.sweep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn run(&self, range: Range<u128>) -> SweepTally {
        let mut tally = SweepTally::default();
        self.sweep.run(range, &mut tally);
        tally.normalize();
        tally
    }

    pub fn run_shard(&self, index: u64, total: u64) -> SweepTally {
        self.run(shard_range(self.len(), index, total))
    }

    pub fn report(&self, mut tally: SweepTally, elapsed_ms: u64) -> VerificationReport {
        let mut observations = Vec::new();
        if self.mode == "window-complete" {
            observations.push(
                "digits restricted to a finite window; results hold within it only".to_string(),
            );
        }
        self.sweep.finish(&mut tally, &mut observations);
        tally.normalize();
        VerificationReport {
            schema: REPORT_SCHEMA.to_string(),
            theorem_id: self.id.to_string(),
            parameters: serde_json::to_value(&self.params).expect("params serialize"),
            mode: self.mode.clone(),
            candidates_examined: tally.examined,
            violation_count: tally.violation_count,
            violations: tally.violations,
            equality_count: tally.equality_count,
            equality_witnesses: tally.equalities,
            min_observed: tally
                .minima
                .into_iter()
                .map(|(label, track)| Observed {
                    label,
                    value: track.value,
                    count: track.count,
                    witnesses: track.witnesses,
                })
                .collect(),
            counters: tally.counters,
            observations,
            seed: self.seed,
            elapsed_ms,
        }
    }
}

/// Resolves parameters, checks the budget and builds the sweep.
pub fn plan_theorem(id: TheoremId, params: &Params, budget: u64, seed: u64) -> Result<SweepPlan> {
    let mut params = params.clone();
    let (mode, sweep): (&str, Box<dyn Sweep>) = match id {
        TheoremId::PollardChowla | TheoremId::NazEquality => {
            let q = need(params.q, "q")?;
            if !(2..=20).contains(&q) {
                return Err(Error::InvalidParameter(format!(
                    "subset sweeps need 2 <= q <= 20, got {q}"
                )));
            }
            let n = (1u128 << q) - 1;
            within(n * n, budget)?;
            (
                "exhaustive",
                Box::new(SubsetPairs::new(q, id == TheoremId::NazEquality)),
            )
        }
        TheoremId::Thm22 | TheoremId::Thm23 => {
            let p = if id == TheoremId::Thm23 {
                2
            } else {
                need(params.p, "p")?
            };
            params.p = Some(p);
            if id == TheoremId::Thm22 && (p < 3 || !is_prime(p as u64)) {
                return Err(Error::NotOddPrime(p));
            }
            let alpha = need(params.alpha, "alpha")?;
            let beta = need(params.beta, "beta")?;
            if alpha == 0 || beta <= alpha {
                return Err(Error::InvalidParameter(format!(
                    "need 1 <= alpha < beta, got {alpha}, {beta}"
                )));
            }
            let (q, m) = (checked_pow(p, beta)?, checked_pow(p, alpha)?);
            params.q = Some(q);
            params.m = Some(m);
            let checks = if id == TheoremId::Thm22 {
                vec![
                    thm22_threshold(p, alpha, Side::Minus)?,
                    thm22_threshold(p, alpha, Side::Plus)?,
                ]
                .into_iter()
                .map(|th| (th.t, th.threshold))
                .collect()
            } else {
                let th = thm23_threshold(alpha)?;
                vec![(th.t, th.threshold)]
            };
            let sets = space_size(q / m, m);
            let sampled = params.samples.is_some() && !params.exhaustive;
            let sweep = if sampled {
                let samples = params.samples.unwrap_or(0);
                let sweep = DigitalPairs::sampled(q, m, checks, samples, seed);
                within(sweep.len(), budget)?;
                sweep
            } else {
                within(sets.saturating_mul(sets), budget)?;
                DigitalPairs::exhaustive(q, m, checks)
            };
            (
                if sampled { "sampled" } else { "exhaustive" },
                Box::new(sweep),
            )
        }
        TheoremId::C2Mu | TheoremId::C1Structure => {
            let (q, m) = (need(params.q, "q")?, need(params.m, "m")?);
            Domain::modular(q)?;
            if m < 2 || q % m != 0 {
                return Err(Error::MDoesNotDivideQ { q, m });
            }
            let sweep: Box<dyn Sweep> = if id == TheoremId::C2Mu {
                within(space_size(q / m, m), budget)?;
                Box::new(C2MuSweep::new(q, m)?)
            } else {
                within(space_size(q / m, m - 1), budget)?;
                Box::new(C1StructureSweep::new(q, m))
            };
            ("exhaustive", sweep)
        }
        TheoremId::PrimePowerExtremal => {
            let p = need(params.p, "p")?;
            if !is_prime(p as u64) {
                return Err(Error::InvalidParameter(format!("{p} is not prime")));
            }
            let alpha = need(params.alpha, "alpha")?;
            let beta = need(params.beta, "beta")?;
            if alpha == 0 || beta <= alpha {
                return Err(Error::InvalidParameter(format!(
                    "need 1 <= alpha < beta, got {alpha}, {beta}"
                )));
            }
            let (q, m) = (checked_pow(p, beta)?, checked_pow(p, alpha)?);
            params.q = Some(q);
            params.m = Some(m);
            within(space_size(q / m, m), budget)?;
            ("exhaustive", Box::new(PrimePowerSweep::new(p, alpha, q, m)))
        }
        TheoremId::ZCase => {
            let m = need(params.m, "m")?;
            if m < 2 {
                return Err(Error::DegenerateM(m));
            }
            let w = params.window.unwrap_or(m);
            if w < m / 2 {
                return Err(Error::InvalidParameter(format!(
                    "window {w} cannot hold a complete residue system mod {m}"
                )));
            }
            params.window = Some(w);
            let lifts = Lifts::integer_window(m, w);
            within(lifts.len(), budget)?;
            ("window-complete", Box::new(IntegerWindowSweep { m, lifts }))
        }
    };
    Ok(SweepPlan {
        id,
        params,
        mode: mode.to_string(),
        seed,
        sweep,
    })
}

/// Runs a sweep start to finish on the calling thread.
pub fn verify_theorem(
    id: TheoremId,
    params: &Params,
    budget: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let plan = plan_theorem(id, params, budget, seed)?;
    let tally = plan.run(0..plan.len());
    Ok(plan.report(tally, start.elapsed().as_millis() as u64))
}

#[allow(clippy::too_many_arguments)]
fn witness(
    kind: &str,
    domain: Domain,
    m: Option<i64>,
    sets: Vec<Vec<i64>>,
    statistic: WitnessStat,
    value: Rational,
    bound: Rational,
    claim: Claim,
) -> Witness {
    Witness {
        kind: kind.to_string(),
        domain,
        m,
        sets,
        statistic,
        value,
        bound,
        claim,
        structure: None,
    }
}

fn int(x: u64) -> Rational {
    exact::integer(x as i128)
}

fn render_conditions(conds: &[Condition]) -> String {
    let parts: Vec<String> = conds
        .iter()
        .map(|c| match c {
            Condition::BEqualsT => "B_EQUALS_T".to_string(),
            Condition::SizesExceedQ => "SIZES_EXCEED_Q".to_string(),
            Condition::Reflection { g } => format!("REFLECTION(g={g})"),
            Condition::SameDiffAps { d } => format!("SAME_DIFF_APS(d={d})"),
        })
        .collect();
    parts.join(",")
}

/// All ordered pairs of nonempty subsets of `Z_q`.
struct SubsetPairs {
    q: i64,
    naz: bool,
    subsets: Vec<Vec<i64>>,
    chowla: Vec<bool>,
}

impl SubsetPairs {
    fn new(q: i64, naz: bool) -> Self {
        let subsets: Vec<Vec<i64>> = (1u64..1 << q)
            .map(|mask| (0..q).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        let chowla = subsets
            .iter()
            .map(|s| has_chowla(&ElementSet::new(Domain::Modular(q), s.iter().copied())))
            .collect();
        SubsetPairs {
            q,
            naz,
            subsets,
            chowla,
        }
    }

    fn pair(
        &self,
        a: usize,
        b: usize,
        tally: &mut SweepTally,
        counts: &mut [u32],
        reps: &mut Vec<u64>,
    ) {
        let (sa, sb) = (&self.subsets[a], &self.subsets[b]);
        let (na, nb) = (sa.len() as u64, sb.len() as u64);
        let applicable = if self.naz {
            nb <= na && nb >= 2 && self.chowla[b]
        } else {
            self.chowla[a] || self.chowla[b]
        };
        if !applicable {
            tally.bump("pairs_outside_hypotheses");
            return;
        }
        let q = self.q;
        reps.clear();
        for &x in sa {
            for &y in sb {
                counts[((x + y) % q) as usize] += 1;
            }
        }
        for c in counts.iter_mut() {
            if *c > 0 {
                reps.push(*c as u64);
                *c = 0;
            }
        }
        let t_min = if self.naz { 2 } else { 1 };
        let domain = Domain::Modular(q);
        let sets = || vec![sa.clone(), sb.clone()];
        for t in t_min..=na.min(nb) {
            tally.bump("cases");
            let s: u64 = reps.iter().map(|&r| r.min(t)).sum();
            let bound = t * (q as u64).min(na + nb - t);
            let stat = WitnessStat::PollardSum { t };
            if s < bound {
                tally.violation(witness(
                    "pollard",
                    domain,
                    None,
                    sets(),
                    stat,
                    int(s),
                    int(bound),
                    Claim::AtLeast,
                ));
                continue;
            }
            if s != bound {
                continue;
            }
            tally.bump("tight");
            let mut w = witness(
                "tight",
                domain,
                None,
                sets(),
                stat,
                int(s),
                int(bound),
                Claim::Equal,
            );
            if self.naz {
                let ea = ElementSet::new(domain, sa.iter().copied());
                let eb = ElementSet::new(domain, sb.iter().copied());
                let conds = conditions(&ea, &eb, t);
                if conds.is_empty() {
                    // outside the four conditions the inequality should be strict
                    tally.violation(witness(
                        "unexplained-equality",
                        domain,
                        None,
                        sets(),
                        stat,
                        int(s),
                        int(bound + 1),
                        Claim::AtLeast,
                    ));
                    continue;
                }
                for c in &conds {
                    tally.bump(match c {
                        Condition::BEqualsT => "condition_b_equals_t",
                        Condition::SizesExceedQ => "condition_sizes_exceed_q",
                        Condition::Reflection { .. } => "condition_reflection",
                        Condition::SameDiffAps { .. } => "condition_same_diff_aps",
                    });
                }
                w.structure = Some(render_conditions(&conds));
            }
            tally.equality(w);
        }
    }
}

impl Sweep for SubsetPairs {
    fn len(&self) -> u128 {
        let n = self.subsets.len() as u128;
        n * n
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let n = self.subsets.len() as u128;
        let mut counts = vec![0u32; self.q as usize];
        let mut reps = Vec::new();
        for k in range {
            tally.examined += 1;
            self.pair(
                (k / n) as usize,
                (k % n) as usize,
                tally,
                &mut counts,
                &mut reps,
            );
        }
    }
}

/// Lifts of the digital set with odometer index `index` (class 0 most significant).
fn decode(index: u128, q: i64, m: i64, out: &mut Vec<i64>) {
    let base = (q / m) as u128;
    out.clear();
    out.resize(m as usize, 0);
    let mut rest = index;
    for r in (0..m as usize).rev() {
        out[r] = r as i64 + (rest % base) as i64 * m;
        rest /= base;
    }
}

fn encode(set: &[i64], m: i64, q: i64) -> u128 {
    let base = (q / m) as u128;
    let mut lifts = vec![0; m as usize];
    for &x in set {
        lifts[x.rem_euclid(m) as usize] = x;
    }
    lifts
        .iter()
        .fold(0u128, |acc, &x| acc * base + (x / m) as u128)
}

fn sorted(lifts: &[i64]) -> Vec<i64> {
    let mut v = lifts.to_vec();
    v.sort_unstable();
    v
}

/// Ordered pairs of digital sets checked against `S(A,B,t) ≥ threshold`,
/// with equality required exactly on same-difference progression pairs.
struct DigitalPairs {
    q: i64,
    m: i64,
    checks: Vec<(u64, u64)>,
    sets: u128,
    sampling: Option<Sampling>,
}

struct Sampling {
    samples: u64,
    seed: u64,
    /// Every pair that can be tight: progressions sharing a difference, and
    /// reflected pairs when the set size is `t + 1`.
    ap_pairs: Vec<(u128, u128)>,
}

impl DigitalPairs {
    fn exhaustive(q: i64, m: i64, checks: Vec<(u64, u64)>) -> Self {
        DigitalPairs {
            q,
            m,
            checks,
            sets: space_size(q / m, m),
            sampling: None,
        }
    }

    fn sampled(q: i64, m: i64, checks: Vec<(u64, u64)>, samples: u64, seed: u64) -> Self {
        let domain = Domain::Modular(q);
        let mut by_difference: Vec<(i64, u128)> = Vec::new();
        let mut seen = BTreeSet::new();
        for d in 1..q {
            if num::integer::gcd(d, m) != 1 {
                continue;
            }
            for x0 in 0..q {
                let set: Vec<i64> = (0..m).map(|i| (x0 + i * d) % q).collect();
                let set = sorted(&set);
                if !seen.insert(set.clone()) {
                    continue;
                }
                if let crate::pollard::ApDifferences::Some(ds) =
                    ap_differences(&ElementSet::new(domain, set.iter().copied()))
                {
                    for d in ds {
                        by_difference.push((d, encode(&set, m, q)));
                    }
                }
            }
        }
        by_difference.sort_unstable();
        let mut ap_pairs = BTreeSet::new();
        for group in by_difference.chunk_by(|x, y| x.0 == y.0) {
            for a in group {
                for b in group {
                    ap_pairs.insert((a.1, b.1));
                }
            }
        }
        // with |A| = |B| = t + 1, reflected pairs B = g − A can also be tight
        if checks.iter().any(|&(t, _)| t + 1 == m as u64) {
            let mut lifts = Vec::new();
            for i in 0..space_size(q / m, m) {
                decode(i, q, m, &mut lifts);
                for g in 0..q {
                    let reflected: Vec<i64> =
                        lifts.iter().map(|&x| (g - x).rem_euclid(q)).collect();
                    ap_pairs.insert((i, encode(&reflected, m, q)));
                }
            }
        }
        DigitalPairs {
            q,
            m,
            checks,
            sets: space_size(q / m, m),
            sampling: Some(Sampling {
                samples,
                seed,
                ap_pairs: ap_pairs.into_iter().collect(),
            }),
        }
    }

    fn pair_at(&self, k: u128) -> (u128, u128) {
        match &self.sampling {
            None => (k / self.sets, k % self.sets),
            Some(s) => {
                if k < self.sets {
                    return (k, k);
                }
                let k = k - self.sets;
                if k < s.ap_pairs.len() as u128 {
                    return s.ap_pairs[k as usize];
                }
                let j = (k - s.ap_pairs.len() as u128) as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                rng.set_stream(j);
                (rng.gen_range(0..self.sets), rng.gen_range(0..self.sets))
            }
        }
    }
}

impl Sweep for DigitalPairs {
    fn len(&self) -> u128 {
        match &self.sampling {
            None => self.sets * self.sets,
            Some(s) => self.sets + s.ap_pairs.len() as u128 + s.samples as u128,
        }
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let (q, m) = (self.q, self.m);
        let domain = Domain::Modular(q);
        let (mut la, mut lb) = (Vec::new(), Vec::new());
        let mut scratch = Vec::new();
        for k in range {
            tally.examined += 1;
            let (i, j) = self.pair_at(k);
            decode(i, q, m, &mut la);
            decode(j, q, m, &mut lb);
            let (a, b) = (sorted(&la), sorted(&lb));
            let ea = ElementSet::new(domain, a.iter().copied());
            let eb = ElementSet::new(domain, b.iter().copied());
            let ap = common_difference(&ap_differences(&ea), &ap_differences(&eb));
            if ap.is_some() {
                tally.bump("ap_pairs");
            }
            let sets = || vec![a.clone(), b.clone()];
            for &(t, threshold) in &self.checks {
                let s = pollard_sum_mod(&a, &b, q, t, &mut scratch);
                let stat = WitnessStat::PollardSum { t };
                let label = format!("S(t={t})");
                let mk = |kind: &str, bound: u64, claim| {
                    witness(
                        kind,
                        domain,
                        Some(m),
                        sets(),
                        stat,
                        int(s),
                        int(bound),
                        claim,
                    )
                };
                if tally.min_value(&label).is_none_or(|v| int(s) <= *v) {
                    tally.observe_min(&label, int(s), || mk("minimum", threshold, Claim::AtLeast));
                }
                if s < threshold {
                    tally.violation(mk("below-threshold", threshold, Claim::AtLeast));
                } else if s == threshold {
                    match ap {
                        Some(d) => {
                            tally.bump(&format!("equality_t={t}"));
                            let mut w = mk("equality", threshold, Claim::Equal);
                            w.structure = Some(format!("SAME_DIFF_APS(d={d})"));
                            tally.equality(w);
                        }
                        // only progression pairs may meet the threshold
                        None => {
                            let mut w = mk("equality-without-ap", threshold + 1, Claim::AtLeast);
                            if t + 1 == m as u64 {
                                if let Some(g) = reflection_point(&ea, &eb) {
                                    tally.bump(&format!("equality_reflection_only_t={t}"));
                                    w.structure = Some(format!("REFLECTION(g={g})"));
                                }
                            }
                            tally.violation(w);
                        }
                    }
                } else if ap.is_some() {
                    tally.violation(mk("ap-without-equality", threshold, Claim::AtMost));
                }
            }
        }
    }
}

/// `(num, den)` of a small nonnegative rational.
fn small_ratio(r: &Rational) -> (i128, i128) {
    (
        r.numer().to_i128().expect("small numerator"),
        r.denom().to_i128().expect("small denominator"),
    )
}

/// Every digital set of `Z_q`, checked against `C₂ ≥ μ(m)`.
struct C2MuSweep {
    q: i64,
    m: i64,
    mu: Rational,
    units: Vec<i64>,
}

impl C2MuSweep {
    fn new(q: i64, m: i64) -> Result<Self> {
        Ok(C2MuSweep {
            q,
            m,
            mu: mu(m)?.mu,
            units: units(q),
        })
    }
}

impl Sweep for C2MuSweep {
    fn len(&self) -> u128 {
        space_size(self.q / self.m, self.m)
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let (q, m) = (self.q, self.m);
        let domain = Domain::Modular(q);
        let m2 = (m as i128) * (m as i128);
        let (num, den) = small_ratio(&self.mu);
        let mut best: Option<u64> = None;
        let make = |lifts: &[i64], count: u64, kind: &str, claim: Claim| {
            let raw = DigitalSet::from_residue_lifts(domain, m, lifts);
            let key = canonical_key(&raw, q, Relation::DilationOnly, &self.units);
            let a = DigitalSet::modular(q, m, key.iter().copied()).expect("digital");
            let mut w = witness(
                kind,
                domain,
                Some(m),
                vec![key],
                WitnessStat::CarryRatio,
                exact::ratio(count as i128, m2),
                self.mu.clone(),
                claim,
            );
            w.structure = Some(classify_structure(&a, Purpose::ForC2).to_string());
            w
        };
        Lifts::modular(q, m).for_each(range, |lifts| {
            tally.examined += 1;
            let count = carry_count_lifts(lifts, Some(q));
            // count/m² against num/den
            let lhs = count as i128 * den;
            let rhs = num * m2;
            if lhs < rhs {
                tally.violation(make(lifts, count, "below-mu", Claim::AtLeast));
            } else if lhs == rhs {
                tally.equality(make(lifts, count, "attains-mu", Claim::Equal));
            }
            if best.is_none_or(|b| count <= b) {
                best = Some(count);
                tally.observe_min("C2", exact::ratio(count as i128, m2), || {
                    make(lifts, count, "minimum", Claim::AtLeast)
                });
            }
        });
    }

    fn finish(&self, tally: &mut SweepTally, observations: &mut Vec<String>) {
        if !is_admissible(self.q, self.m) {
            observations.push(format!(
                "(q, m) = ({}, {}) is not admissible",
                self.q, self.m
            ));
        }
        if let Some(min) = tally.min_value("C2") {
            observations.push(format!(
                "min C2 = {} against mu({}) = {}",
                exact::render_human(min),
                self.m,
                exact::render_human(&self.mu)
            ));
        }
    }
}

/// Digital sets through 0, checked against `C₁ ≥ 2` with equality exactly
/// on `{cJ + d}` for the two intervals `J`.
struct C1StructureSweep {
    q: i64,
    m: i64,
    orbit: HashSet<Vec<i64>>,
    lifts: Lifts,
}

impl C1StructureSweep {
    fn new(q: i64, m: i64) -> Self {
        let mut lifts = Lifts::modular(q, m);
        lifts.choices[0] = vec![0];
        C1StructureSweep {
            q,
            m,
            orbit: interval_affine_orbit(q, m).into_iter().collect(),
            lifts,
        }
    }
}

impl Sweep for C1StructureSweep {
    fn len(&self) -> u128 {
        self.lifts.len()
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let (q, m) = (self.q, self.m);
        let domain = Domain::Modular(q);
        let mut seen = BTreeSet::new();
        let make = |set: Vec<i64>, c1: u64, kind: &str, bound: u64, claim| {
            let mut w = witness(
                kind,
                domain,
                Some(m),
                vec![set],
                WitnessStat::DistinctCarries,
                int(c1),
                int(bound),
                claim,
            );
            let a = DigitalSet::modular(q, m, w.sets[0].iter().copied()).expect("digital");
            w.structure = Some(classify_structure(&a, Purpose::ForC1).to_string());
            w
        };
        self.lifts.for_each(range, |lifts| {
            tally.examined += 1;
            let c1 = distinct_carries_lifts(lifts, Some(q), &mut seen) as u64;
            let set = sorted(lifts);
            let in_orbit = self.orbit.contains(&set);
            if in_orbit {
                tally.bump("interval_orbit_members");
            }
            if c1 < 2 {
                tally.violation(make(set.clone(), c1, "below-two", 2, Claim::AtLeast));
            } else if c1 == 2 && !in_orbit {
                // outside the orbit the claim is C1 ≥ 3
                tally.violation(make(
                    set.clone(),
                    c1,
                    "two-outside-interval-orbit",
                    3,
                    Claim::AtLeast,
                ));
            } else if c1 != 2 && in_orbit {
                tally.violation(make(
                    set.clone(),
                    c1,
                    "interval-orbit-above-two",
                    2,
                    Claim::AtMost,
                ));
            } else if c1 == 2 {
                tally.equality(make(set.clone(), c1, "two-carries", 2, Claim::Equal));
            }
            if tally.min_value("C1").is_none_or(|v| int(c1) <= *v) {
                tally.observe_min("C1", int(c1), || {
                    make(set, c1, "minimum", 2, Claim::AtLeast)
                });
            }
        });
    }
}

/// `q = p^β`, `m = p^α`: carry counts against `⌊p^{2α}/4⌋`, and minimizers
/// against the dilation orbit of the symmetric interval of size `p^α`.
struct PrimePowerSweep {
    p: i64,
    alpha: u32,
    q: i64,
    m: i64,
    floor: u64,
    orbit: HashSet<Vec<i64>>,
}

impl PrimePowerSweep {
    fn new(p: i64, alpha: u32, q: i64, m: i64) -> Self {
        PrimePowerSweep {
            p,
            alpha,
            q,
            m,
            floor: interval_carry_count(m as u64),
            orbit: symmetric_orbit(q, m).into_iter().collect(),
        }
    }
}

impl Sweep for PrimePowerSweep {
    fn len(&self) -> u128 {
        space_size(self.q / self.m, self.m)
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let (q, m) = (self.q, self.m);
        let domain = Domain::Modular(q);
        let mut best: Option<u64> = None;
        let make = |set: Vec<i64>, count: u64, kind: &str, bound: u64, claim| {
            let mut w = witness(
                kind,
                domain,
                Some(m),
                vec![set],
                WitnessStat::CarryCount,
                int(count),
                int(bound),
                claim,
            );
            let a = DigitalSet::modular(q, m, w.sets[0].iter().copied()).expect("digital");
            w.structure = Some(classify_structure(&a, Purpose::ForC2).to_string());
            w
        };
        Lifts::modular(q, m).for_each(range, |lifts| {
            tally.examined += 1;
            let count = carry_count_lifts(lifts, Some(q));
            if count < self.floor {
                tally.violation(make(
                    sorted(lifts),
                    count,
                    "below-floor",
                    self.floor,
                    Claim::AtLeast,
                ));
            } else if count == self.floor {
                tally.equality(make(
                    sorted(lifts),
                    count,
                    "attains-floor",
                    self.floor,
                    Claim::Equal,
                ));
            }
            if best.is_none_or(|b| count <= b) {
                best = Some(count);
                tally.observe_min("carry_count", int(count), || {
                    make(sorted(lifts), count, "minimum", self.floor, Claim::AtLeast)
                });
            }
        });
    }

    fn finish(&self, tally: &mut SweepTally, observations: &mut Vec<String>) {
        let Some(track) = tally.minima.get("carry_count").cloned() else {
            return;
        };
        let min = track.value.to_integer().to_u64().expect("count");
        let domain = Domain::Modular(self.q);
        let rep = symmetric_orbit(self.q, self.m).remove(0);
        let orbit_count = carry_report(
            &DigitalSet::modular(self.q, self.m, rep.iter().copied()).expect("digital"),
        )
        .carry_count;
        let mut found = Vec::new();
        for w in &track.witnesses {
            if !self.orbit.contains(&w.sets[0]) {
                // the claim is that every other set carries strictly more
                found.push(witness(
                    "minimizer-outside-orbit",
                    domain,
                    Some(self.m),
                    w.sets.clone(),
                    WitnessStat::CarryCount,
                    int(min),
                    int(min + 1),
                    Claim::AtLeast,
                ));
            }
        }
        if orbit_count != min {
            found.push(witness(
                "interval-not-minimal",
                domain,
                Some(self.m),
                vec![rep],
                WitnessStat::CarryCount,
                int(orbit_count),
                int(min),
                Claim::AtMost,
            ));
        }
        if track.witnesses.len() < track.count as usize {
            observations.push(
                "minimizer list truncated; orbit membership checked on the kept witnesses only"
                    .to_string(),
            );
        }
        for w in found {
            tally.violation(w);
        }
        let pa = self.p.pow(self.alpha) as u64;
        observations.push(format!(
            "min carry_count = {min}; floor(p^(2 alpha)/4) = {}; floor(p^alpha/4) = {}",
            self.floor,
            pa / 4
        ));
        observations.push(if min == self.floor {
            "the pair-count reading floor(p^(2 alpha)/4) is attained exactly".to_string()
        } else {
            format!(
                "the pair-count reading floor(p^(2 alpha)/4) is not attained (gap {})",
                min - self.floor
            )
        });
        observations.push(format!(
            "{} minimizers; the symmetric-interval orbit has {} members",
            track.count,
            self.orbit.len()
        ));
    }
}

/// Integer digit sets inside `[−W, W]`.
struct IntegerWindowSweep {
    m: i64,
    lifts: Lifts,
}

impl Sweep for IntegerWindowSweep {
    fn len(&self) -> u128 {
        self.lifts.len()
    }

    fn run(&self, range: Range<u128>, tally: &mut SweepTally) {
        let m = self.m;
        let floor = interval_carry_count(m as u64);
        let mut seen = BTreeSet::new();
        let make = |lifts: &[i64], stat, value: u64, kind: &str, bound: u64, claim, purpose| {
            let set = sorted(lifts);
            let a = DigitalSet::integers(m, set.iter().copied()).expect("digital");
            let mut w = witness(
                kind,
                Domain::Integers,
                Some(m),
                vec![set],
                stat,
                int(value),
                int(bound),
                claim,
            );
            w.structure = Some(classify_structure(&a, purpose).to_string());
            w
        };
        self.lifts.for_each(range, |lifts| {
            tally.examined += 1;
            let count = carry_count_lifts(lifts, None);
            let c1 = distinct_carries_lifts(lifts, None, &mut seen) as u64;
            let cc = WitnessStat::CarryCount;
            let dc = WitnessStat::DistinctCarries;
            if count < floor {
                tally.violation(make(
                    lifts,
                    cc,
                    count,
                    "below-floor",
                    floor,
                    Claim::AtLeast,
                    Purpose::ForC2,
                ));
            } else if count == floor {
                tally.equality(make(
                    lifts,
                    cc,
                    count,
                    "attains-floor",
                    floor,
                    Claim::Equal,
                    Purpose::ForC2,
                ));
            }
            if c1 < 2 {
                tally.violation(make(
                    lifts,
                    dc,
                    c1,
                    "below-two",
                    2,
                    Claim::AtLeast,
                    Purpose::ForC1,
                ));
            }
            if tally
                .min_value("carry_count")
                .is_none_or(|v| int(count) <= *v)
            {
                tally.observe_min("carry_count", int(count), || {
                    make(
                        lifts,
                        cc,
                        count,
                        "minimum",
                        floor,
                        Claim::AtLeast,
                        Purpose::ForC2,
                    )
                });
            }
            if tally.min_value("C1").is_none_or(|v| int(c1) <= *v) {
                tally.observe_min("C1", int(c1), || {
                    make(lifts, dc, c1, "minimum", 2, Claim::AtLeast, Purpose::ForC1)
                });
            }
        });
    }

    fn finish(&self, tally: &mut SweepTally, observations: &mut Vec<String>) {
        let m = self.m;
        let centred = DigitalSet::integers(m, symmetric_interval(m)).expect("digital");
        let low =
            DigitalSet::integers(m, interval(m, IntervalVariant::ZeroToMMinus1)).expect("digital");
        let checks = [
            (
                "carry_count",
                carry_report(&centred).carry_count,
                &centred,
                WitnessStat::CarryCount,
            ),
            (
                "C1",
                carry_report(&low).c1 as u64,
                &low,
                WitnessStat::DistinctCarries,
            ),
        ];
        for (label, value, set, stat) in checks {
            let Some(min) = tally.min_value(label).cloned() else {
                continue;
            };
            observations.push(format!(
                "min {label} = {}; {} gives {value}",
                exact::render(&min),
                set.elements()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            if int(value) != min {
                tally.violation(witness(
                    "interval-not-minimal",
                    Domain::Integers,
                    Some(m),
                    vec![set.elements().to_vec()],
                    stat,
                    int(value),
                    min,
                    Claim::AtMost,
                ));
            }
        }
    }
}
