//! Closed-form lower bounds, all exact.

use std::fmt::Write as _;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::ring::{decompose, is_prime, PrimePowerDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    OddP,
    EvenP,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub m: i64,
    pub decomposition: PrimePowerDecomposition,
    #[serde(with = "exact")]
    pub mu: Rational,
    pub regime: Regime,
}

/// Lower bound for `C₂` over digital sets of cardinality `m`:
/// `(1 − p^{−2α} − 2p^{−α} + δ_m·2/m)/4` for odd `p`, `1/4` for `p = 2`,
/// where `p^α` is the largest prime power dividing `m`.
pub fn mu(m: i64) -> Result<BoundSpec> {
    let decomposition = decompose(m)?;
    let quarter = exact::ratio(1, 4);
    if decomposition.p == 2 {
        return Ok(BoundSpec {
            m,
            decomposition,
            mu: quarter,
            regime: Regime::EvenP,
        });
    }
    let pa = exact::integer(decomposition.prime_power as i128);
    let inner = Rational::one() - (pa.clone() * pa.clone()).recip() - exact::integer(2) / pa
        + exact::ratio(2 * decomposition.delta_m as i128, m as i128);
    Ok(BoundSpec {
        m,
        decomposition,
        mu: inner * quarter,
        regime: Regime::OddP,
    })
}

fn require_odd_prime(p: i64) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `(p² − 1)/(4p²)`.
pub fn alon_bound(p: i64) -> Result<Rational> {
    require_odd_prime(p)?;
    let p = p as i128;
    Ok(exact::ratio(p * p - 1, 4 * p * p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

/// A cap `t` paired with the lower bound on `S(A, B, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub t: u64,
    pub threshold: u64,
}

fn prime_power(p: i64, alpha: u32) -> Result<u64> {
    (p as u64).checked_pow(alpha).ok_or(Error::Overflow)
}

/// For odd `p`: `t = (p^α ∓ 1)/2` and `S ≥ (3p^{2α} ∓ 2p^α − 1)/4`.
pub fn thm22_threshold(p: i64, alpha: u32, side: Side) -> Result<Threshold> {
    require_odd_prime(p)?;
    if alpha == 0 {
        return Err(Error::InvalidParameter("alpha must be at least 1".into()));
    }
    let pa = prime_power(p, alpha)? as u128;
    let three_sq = pa
        .checked_mul(pa)
        .and_then(|x| x.checked_mul(3))
        .ok_or(Error::Overflow)?;
    let (t, numerator) = match side {
        Side::Minus => (pa / 2, three_sq - 2 * pa - 1),
        Side::Plus => (pa.div_ceil(2), three_sq + 2 * pa - 1),
    };
    debug_assert_eq!(numerator % 4, 0);
    Ok(Threshold {
        t: t as u64,
        threshold: u64::try_from(numerator / 4).map_err(|_| Error::Overflow)?,
    })
}

/// For `p = 2`: `t = 2^{α−1}` and `S ≥ 2^{2α} − 2^{2α−2} = 3·4^{α−1}`.
pub fn thm23_threshold(alpha: u32) -> Result<Threshold> {
    if alpha == 0 {
        return Err(Error::InvalidParameter("alpha must be at least 1".into()));
    }
    let t = 1u64.checked_shl(alpha - 1).ok_or(Error::Overflow)?;
    let threshold = t
        .checked_mul(t)
        .and_then(|x| x.checked_mul(3))
        .ok_or(Error::Overflow)?;
    Ok(Threshold { t, threshold })
}

/// `⌊m²/4⌋`, the fewest carrying pairs of a digital set in `Z`.
pub fn interval_carry_count(m: u64) -> u64 {
    m * m / 4
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuRow {
    pub m: i64,
    pub p: i64,
    pub alpha: u32,
    #[serde(with = "exact")]
    pub mu: Rational,
    /// `⌊m²/4⌋ / m²`
    #[serde(with = "exact")]
    pub interval_ratio: Rational,
    /// `1/4 − μ(m)`
    #[serde(with = "exact")]
    pub gap: Rational,
}

pub fn mu_table(ms: &[i64]) -> Result<Vec<MuRow>> {
    ms.iter()
        .map(|&m| {
            let spec = mu(m)?;
            let m2 = (m as i128) * (m as i128);
            let gap = exact::ratio(1, 4) - spec.mu.clone();
            debug_assert!(gap >= Rational::zero());
            Ok(MuRow {
                m,
                p: spec.decomposition.p,
                alpha: spec.decomposition.alpha,
                interval_ratio: exact::ratio(m2 / 4, m2),
                gap,
                mu: spec.mu,
            })
        })
        .collect()
}

pub const MU_TABLE_HEADER: &str = "m,p,alpha,mu,interval_ratio,gap,mu_approx";

/// CSV with exact `num/den` columns and one approximate decimal column.
pub fn mu_table_csv(rows: &[MuRow]) -> String {
    let mut out = String::from(MU_TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.12}",
            r.m,
            r.p,
            r.alpha,
            exact::render(&r.mu),
            exact::render(&r.interval_ratio),
            exact::render(&r.gap),
            exact::approx(&r.mu)
        );
    }
    out
}
