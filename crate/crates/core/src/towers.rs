//! Homology growth along towers of covers.
//!
//! The doubling recurrence `n' >= 2n - 4(log2((n+2)/3) + 1)` and its
//! lower bound `2^i (1 + 24/i)`, mod-p homology growth over a computed
//! prefix, and multiplicativity of Euler characteristics.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{log2_enclosure, Decision, Enclosure, DEFAULT_BITS};
use crate::fpgroups::TowerLevel;
use crate::poly::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("n1 = {0} is below 50")]
    HypothesisViolated(u64),
    #[error("tower record is empty")]
    EmptyRecord,
    #[error("level {0}: degrees must increase and divide")]
    NotNested(usize),
    #[error("prime {0} not present in tower data")]
    MissingPrime(u64),
}

fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

/// Enclosure of 2n - 4(log2((n+2)/3) + 1).
pub fn recurrence_rhs(n: &BigInt) -> Enclosure {
    let l = log2_enclosure(&Q::new(n + 2, 3.into()), DEFAULT_BITS);
    let l1 = &l + &Enclosure::int(1);
    &Enclosure::exact(qi(n * 2)) - &l1.scale(&qi(4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceStep {
    pub step: usize,
    pub n: u64,
    pub next: u64,
    /// The recurrence is only meaningful once n >= 4.
    pub n_at_least_4: bool,
    pub holds: Decision,
}

pub fn recurrence_check(ns: &[u64]) -> Vec<RecurrenceStep> {
    ns.windows(2)
        .enumerate()
        .map(|(i, w)| {
            let rhs = recurrence_rhs(&BigInt::from(w[0]));
            let ok = w[0] >= 4;
            let holds = if ok { rhs.le(&qi(w[1])) } else { Decision::False };
            RecurrenceStep { step: i + 1, n: w[0], next: w[1], n_at_least_4: ok, holds }
        })
        .collect()
}

/// 2^i (1 + 24/i).
pub fn level_bound(i: usize) -> Q {
    qi(BigInt::one() << i) * (Q::one() + Q::new(24.into(), (i as i64).into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundLevel {
    pub i: usize,
    #[serde(with = "crate::ser::bigint")]
    pub n: BigInt,
    #[serde(with = "crate::ser::q")]
    pub bound: Q,
    pub holds: bool,
    /// The rounding up of the recurrence was decided without straddling.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub levels: Vec<BoundLevel>,
    #[serde(with = "crate::ser::q")]
    pub inf_ratio: Q,
    pub all_hold: bool,
}

/// Iterates the smallest sequence allowed by the recurrence and checks
/// the lower bound at every level. Where the enclosure straddles an
/// integer the smaller ceiling is used.
pub fn tower_lower_bound(n1: u64, depth: usize) -> Result<BoundReport, TowerError> {
    if n1 < 50 {
        return Err(TowerError::HypothesisViolated(n1));
    }
    let mut n = BigInt::from(n1);
    let mut certified = true;
    let mut levels = Vec::with_capacity(depth);
    for i in 1..=depth {
        let bound = level_bound(i);
        levels.push(BoundLevel { i, n: n.clone(), holds: qi(n.clone()) >= bound, bound, certified });
        let rhs = recurrence_rhs(&n);
        certified = rhs.ceil().is_some();
        n = rhs.lo.ceil().to_integer();
    }
    let inf_ratio = levels
        .iter()
        .map(|l| Q::new(l.n.clone(), BigInt::one() << l.i))
        .min()
        .unwrap_or_else(Q::zero);
    let all_hold = levels.iter().all(|l| l.holds);
    Ok(BoundReport { levels, inf_ratio, all_hold })
}

/// 24/i - (i+5)/2^(i-1) >= 24/(i+1), exactly.
pub fn auxiliary_inequality(i: usize) -> bool {
    assert!(i >= 1);
    let i_q = qi(i as i64);
    let lhs = qi(24) / &i_q - Q::new((i as i64 + 5).into(), BigInt::one() << (i - 1));
    lhs >= qi(24) / (i_q + Q::one())
}

/// Decides 2x - 4 log2 x < 2(x+1) - 4 log2(x+1) for each integer x in the
/// range; `None` if every step is certified increasing, else the first
/// failing or undecided x.
pub fn rhs_monotone_on(range: std::ops::RangeInclusive<u64>) -> Option<u64> {
    let f = |x: u64| {
        let l = log2_enclosure(&qi(x), DEFAULT_BITS).scale(&qi(4));
        &Enclosure::int(2 * x as i64) - &l
    };
    let mut prev = f(*range.start());
    for x in range.clone().skip(1) {
        let cur = f(x);
        if (&cur - &prev).is_positive() != Decision::True {
            return Some(x - 1);
        }
        prev = cur;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRecordLevel {
    pub degree: u64,
    pub d_p: u64,
    #[serde(default)]
    pub vertex_count: Option<u64>,
    #[serde(default)]
    pub chi_sing_minus: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRecord {
    pub levels: Vec<TowerRecordLevel>,
}

impl TowerRecord {
    /// Degrees strictly increase and each divides the next.
    pub fn check_nested(&self) -> Result<(), TowerError> {
        for (i, w) in self.levels.windows(2).enumerate() {
            if w[1].degree <= w[0].degree || w[1].degree % w[0].degree != 0 {
                return Err(TowerError::NotNested(i + 1));
            }
        }
        Ok(())
    }

    /// The record for prime p from cyclic tower output.
    pub fn from_cyclic_tower(levels: &[TowerLevel], p: u64) -> Result<Self, TowerError> {
        let levels = levels
            .iter()
            .map(|l| {
                let d = l.d_p.iter().find(|(q, _)| *q == p).ok_or(TowerError::MissingPrime(p))?.1;
                Ok(TowerRecordLevel { degree: l.index as u64, d_p: d as u64, vertex_count: None, chi_sing_minus: None })
            })
            .collect::<Result<_, _>>()?;
        Ok(TowerRecord { levels })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    #[serde(with = "crate::ser::q_vec")]
    pub quotients: Vec<Q>,
    #[serde(with = "crate::ser::q")]
    pub inf: Q,
    /// inf over the computed prefix exceeds the tolerance.
    pub positive: bool,
}

pub fn linear_growth_report(record: &TowerRecord, tolerance: &Q) -> Result<GrowthReport, TowerError> {
    if record.levels.is_empty() {
        return Err(TowerError::EmptyRecord);
    }
    let quotients: Vec<Q> = record.levels.iter().map(|l| Q::new(l.d_p.into(), l.degree.into())).collect();
    let inf = quotients.iter().min().unwrap().clone();
    let positive = &inf > tolerance;
    Ok(GrowthReport { quotients, inf, positive })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub holds: bool,
    /// First level (1-based) where chi differs from base_chi * degree.
    pub witness: Option<usize>,
}

pub fn euler_multiplicativity_check(base_chi: i64, levels: &[(u64, i64)]) -> EulerCheck {
    let witness = levels.iter().position(|&(d, chi)| (base_chi as i128) * (d as i128) != chi as i128).map(|i| i + 1);
    EulerCheck { holds: witness.is_none(), witness }
}

#[derive(Serialize)]
struct CsvRow {
    i: usize,
    n_i: String,
    bound_i: String,
    quotient_i: String,
}

/// Columns i, n_i, bound_i, quotient_i = n_i / 2^i.
pub fn to_csv(report: &BoundReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for l in &report.levels {
        let quot = Q::new(l.n.clone(), BigInt::one() << l.i);
        w.serialize(CsvRow { i: l.i, n_i: l.n.to_string(), bound_i: l.bound.to_string(), quotient_i: quot.to_string() })
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}
