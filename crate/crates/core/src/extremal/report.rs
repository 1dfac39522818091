//! Witnesses, mergeable sweep tallies and the serialized verification report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::carry::{carry_report, rep_function};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::ring::{validate_digital_set, Domain, ElementSet};

pub const REPORT_SCHEMA: &str = "carrylab-report/1";

/// Upper bound on witnesses kept per list; the smallest are kept.
pub const WITNESS_CAP: usize = 1024;

/// What a witness's `value` measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessStat {
    /// Ordered pairs whose sum is not a digit.
    CarryCount,
    /// `carry_count / m²`.
    CarryRatio,
    DistinctCarries,
    /// `S(A, B, t)` of the first two sets.
    PollardSum {
        t: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Equal,
    AtLeast,
    AtMost,
}

impl Claim {
    pub fn holds(self, value: &Rational, bound: &Rational) -> bool {
        match self {
            Claim::Equal => value == bound,
            Claim::AtLeast => value >= bound,
            Claim::AtMost => value <= bound,
        }
    }
}

/// One concrete instance: the sets, a statistic and the claim it was checked against.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub domain: Domain,
    /// Digit count when the sets are digital.
    pub m: Option<i64>,
    pub sets: Vec<Vec<i64>>,
    pub statistic: WitnessStat,
    #[serde(with = "exact")]
    pub value: Rational,
    #[serde(with = "exact")]
    pub bound: Rational,
    pub claim: Claim,
    pub structure: Option<String>,
}

impl Witness {
    /// The statistic evaluated from the stored sets alone.
    pub fn recompute(&self) -> Result<Rational> {
        let first = self
            .sets
            .first()
            .ok_or_else(|| Error::Revalidation(format!("{}: no sets", self.kind)))?;
        let digital = || {
            let m = self.m.ok_or(Error::MissingParameter("m"))?;
            validate_digital_set(first.iter().copied(), self.domain, m)
        };
        Ok(match self.statistic {
            WitnessStat::CarryCount => {
                exact::integer(carry_report(&digital()?).carry_count as i128)
            }
            WitnessStat::CarryRatio => carry_report(&digital()?).c2,
            WitnessStat::DistinctCarries => exact::integer(carry_report(&digital()?).c1 as i128),
            WitnessStat::PollardSum { t } => {
                let second = self
                    .sets
                    .get(1)
                    .ok_or_else(|| Error::Revalidation(format!("{}: needs two sets", self.kind)))?;
                let a = ElementSet::new(self.domain, first.iter().copied());
                let b = ElementSet::new(self.domain, second.iter().copied());
                exact::integer(rep_function(&a, &b)?.capped_sum(t) as i128)
            }
        })
    }

    pub fn holds(&self) -> bool {
        self.claim.holds(&self.value, &self.bound)
    }

    /// The stored value is what the sets produce, and the claim stands or
    /// fails as `expect_holds` says.
    pub fn revalidate(&self, expect_holds: bool) -> Result<()> {
        let fresh = self.recompute()?;
        if fresh != self.value {
            return Err(Error::Revalidation(format!(
                "{}: stored value {} but sets give {}",
                self.kind,
                exact::render(&self.value),
                exact::render(&fresh)
            )));
        }
        if self.holds() != expect_holds {
            return Err(Error::Revalidation(format!(
                "{}: {} {:?} {} is {}",
                self.kind,
                exact::render(&self.value),
                self.claim,
                exact::render(&self.bound),
                self.holds()
            )));
        }
        Ok(())
    }
}

fn normalize(list: &mut Vec<Witness>) {
    list.sort_unstable();
    list.dedup();
    list.truncate(WITNESS_CAP);
}

fn push_capped(list: &mut Vec<Witness>, w: Witness) {
    list.push(w);
    if list.len() > 2 * WITNESS_CAP {
        normalize(list);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinTrack {
    #[serde(with = "exact")]
    pub value: Rational,
    /// Candidates attaining the minimum.
    pub count: u64,
    pub witnesses: Vec<Witness>,
}

impl MinTrack {
    fn merge(self, other: MinTrack) -> MinTrack {
        match self.value.cmp(&other.value) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                let mut witnesses = self.witnesses;
                witnesses.extend(other.witnesses);
                normalize(&mut witnesses);
                MinTrack {
                    value: self.value,
                    count: self.count + other.count,
                    witnesses,
                }
            }
        }
    }
}

/// Partial results of a sweep. `merge` is associative and commutative, and
/// the merged value does not depend on how the sweep was sharded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTally {
    pub examined: u64,
    pub violation_count: u64,
    pub violations: Vec<Witness>,
    pub equality_count: u64,
    pub equalities: Vec<Witness>,
    pub minima: BTreeMap<String, MinTrack>,
    pub counters: BTreeMap<String, u64>,
}

impl SweepTally {
    pub fn violation(&mut self, w: Witness) {
        self.violation_count += 1;
        push_capped(&mut self.violations, w);
    }

    pub fn equality(&mut self, w: Witness) {
        self.equality_count += 1;
        push_capped(&mut self.equalities, w);
    }

    pub fn bump(&mut self, counter: &str) {
        *self.counters.entry(counter.to_string()).or_insert(0) += 1;
    }

    /// Current minimum under `label`, if any.
    pub fn min_value(&self, label: &str) -> Option<&Rational> {
        self.minima.get(label).map(|t| &t.value)
    }

    /// Records `value`; `witness` is built only when it ties or beats the minimum.
    pub fn observe_min(&mut self, label: &str, value: Rational, witness: impl FnOnce() -> Witness) {
        match self.minima.get_mut(label) {
            Some(track) if value > track.value => {}
            Some(track) if value == track.value => {
                track.count += 1;
                push_capped(&mut track.witnesses, witness());
            }
            _ => {
                self.minima.insert(
                    label.to_string(),
                    MinTrack {
                        value,
                        count: 1,
                        witnesses: vec![witness()],
                    },
                );
            }
        }
    }

    pub fn normalize(&mut self) {
        normalize(&mut self.violations);
        normalize(&mut self.equalities);
        for track in self.minima.values_mut() {
            normalize(&mut track.witnesses);
        }
    }

    pub fn merge(mut self, other: SweepTally) -> SweepTally {
        self.examined += other.examined;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.equality_count += other.equality_count;
        self.equalities.extend(other.equalities);
        for (label, track) in other.minima {
            let merged = match self.minima.remove(&label) {
                Some(mine) => mine.merge(track),
                None => track,
            };
            self.minima.insert(label, merged);
        }
        for (name, n) in other.counters {
            *self.counters.entry(name).or_insert(0) += n;
        }
        self.normalize();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observed {
    pub label: String,
    #[serde(with = "exact")]
    pub value: Rational,
    pub count: u64,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub theorem_id: String,
    pub parameters: serde_json::Value,
    /// `exhaustive`, `sampled` or `window-complete`.
    pub mode: String,
    pub candidates_examined: u64,
    pub violation_count: u64,
    pub violations: Vec<Witness>,
    pub equality_count: u64,
    pub equality_witnesses: Vec<Witness>,
    pub min_observed: Vec<Observed>,
    pub counters: BTreeMap<String, u64>,
    pub observations: Vec<String>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Parses a report and re-checks every witness: equality witnesses must
    /// meet their bound exactly and violations must fail their claim.
    pub fn from_json(text: &str) -> Result<Self> {
        let report: VerificationReport = serde_json::from_str(text).map_err(|e| Error::Parse {
            token: "report".into(),
            reason: e.to_string(),
        })?;
        if report.schema != REPORT_SCHEMA {
            return Err(Error::Parse {
                token: report.schema.clone(),
                reason: format!("expected schema {REPORT_SCHEMA}"),
            });
        }
        report.revalidate()?;
        Ok(report)
    }

    pub fn revalidate(&self) -> Result<()> {
        for w in &self.equality_witnesses {
            w.revalidate(true)?;
        }
        for w in &self.violations {
            w.revalidate(false)?;
        }
        for observed in &self.min_observed {
            for w in &observed.witnesses {
                if w.recompute()? != observed.value {
                    return Err(Error::Revalidation(format!(
                        "{}: witness does not attain the observed minimum",
                        observed.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Everything except the wall-clock time.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}
