//! Runs a corpus of worked examples, each with its expected values.

use kll_core::dyadic::Decision;
use kll_core::fpgroups::{self, Presentation, SubgroupTable};
use kll_core::numfield::NumberField;
use kll_core::quatalg::{self, ClozelStatus};
use kll_core::towers;
use kll_core::finquot::{self, FiniteMatrixGroup};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::ideal_json;
use crate::error::CliError;
use crate::input::parse_str;

pub const DEFAULT_CORPUS: &str = include_str!("../../../corpus/worked_examples.json");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub version: u32,
    pub examples: Vec<Example>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub name: String,
    pub check: Check,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauRow {
    n: u64,
    abs_norm: u64,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    /// Signature, the primes above `prime` of residue degree `residue_degree`,
    /// and optionally the Clozel verdict with those primes ramified.
    PrimeSplitting {
        poly: Vec<i64>,
        signature: [usize; 2],
        prime: u64,
        residue_degree: usize,
        count: usize,
        #[serde(default)]
        clozel: Option<String>,
    },
    /// Signature, and the polynomial discriminant is `core` times a square.
    DiscriminantSquare { poly: Vec<i64>, signature: [usize; 2], core: i64 },
    TauNorms { rows: Vec<TauRow> },
    /// tau_n is the given rational (the field is Q).
    TauValue { n: u64, value: i64 },
    /// The chained inequality is positive at d and not at d - 1.
    GsThreshold { d: u64 },
    TowerBound { n1: u64, depth: usize, auxiliary_up_to: usize },
    /// Standard generators in every PSL(2, q) slot generate a group of `order`.
    Surjectivity { factors: Vec<u64>, order: u64 },
    /// The subgroup of the given finite-index action is free of this rank.
    FreeKernel { presentation: Presentation, action: Vec<Vec<usize>>, free_rank: usize },
}

impl Check {
    fn kind(&self) -> &'static str {
        match self {
            Check::PrimeSplitting { .. } => "prime_splitting",
            Check::DiscriminantSquare { .. } => "discriminant_square",
            Check::TauNorms { .. } => "tau_norms",
            Check::TauValue { .. } => "tau_value",
            Check::GsThreshold { .. } => "gs_threshold",
            Check::TowerBound { .. } => "tower_bound",
            Check::Surjectivity { .. } => "surjectivity",
            Check::FreeKernel { .. } => "free_kernel",
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// (pass, detail); an Err is a named failure.
fn run_check(c: &Check) -> Result<(bool, Value), String> {
    let s = |e: &dyn std::fmt::Display| e.to_string();
    match c {
        Check::PrimeSplitting { poly, signature, prime, residue_degree, count, clozel } => {
            let k = NumberField::new(poly).map_err(|e| s(&e))?;
            let sig = k.signature();
            let hits: Vec<_> = k.split_prime(*prime).map_err(|e| s(&e))?.into_iter().filter(|p| p.f == *residue_degree).collect();
            let status = quatalg::clozel_hypothesis(&k, &hits);
            let status_name = match &status {
                ClozelStatus::Satisfied => "satisfied",
                ClozelStatus::Violated { .. } => "violated",
                ClozelStatus::Undecided => "undecided",
            };
            let clozel_ok = clozel.as_deref().is_none_or(|want| want == status_name);
            let pass = [sig.0, sig.1] == *signature && hits.len() == *count && clozel_ok;
            Ok((pass, json!({
                "signature": [sig.0, sig.1],
                "primes": hits.iter().map(ideal_json).collect::<Vec<_>>(),
                "clozel": serde_json::to_value(&status).unwrap(),
            })))
        }
        Check::DiscriminantSquare { poly, signature, core } => {
            let k = NumberField::new(poly).map_err(|e| s(&e))?;
            let sig = k.signature();
            let disc = k.poly_discriminant();
            let core = BigInt::from(*core);
            let square = !core.is_zero() && (&disc % &core).is_zero() && is_square(&(&disc / &core));
            Ok(([sig.0, sig.1] == *signature && square, json!({ "signature": [sig.0, sig.1], "discriminant": disc.to_string(), "core_times_square": square })))
        }
        Check::TauNorms { rows } => {
            let mut out = Vec::new();
            let mut pass = true;
            for r in rows {
                let norm = quatalg::tau_n_norm(r.n).map_err(|e| s(&e))?;
                let ok = norm.abs() == kll_core::poly::Q::from_integer(r.abs_norm.into());
                pass &= ok;
                out.push(json!({ "n": r.n, "norm": norm.to_string(), "expected": r.abs_norm, "pass": ok }));
            }
            Ok((pass, json!({ "rows": out })))
        }
        Check::TauValue { n, value } => {
            let t = quatalg::tau_n(*n).map_err(|e| s(&e))?;
            let got = t.tau.as_rational().filter(|_| t.field.degree() == 1);
            let pass = got.as_ref().is_some_and(|g| *g == kll_core::poly::Q::from_integer((*value).into()));
            Ok((pass, json!({ "tau": got.map(|g| g.to_string()) })))
        }
        Check::GsThreshold { d } => {
            if *d < 3 {
                return Err("d must be at least 3".into());
            }
            let at = fpgroups::gs_chained(*d);
            let below = fpgroups::gs_chained(d - 1);
            let pass = at.positive == Decision::True && below.positive == Decision::False;
            let enc = |g: &fpgroups::GsChained| json!({ "d": g.d, "value": serde_json::to_value(&g.value).unwrap(), "positive": serde_json::to_value(g.positive).unwrap() });
            Ok((pass, json!({ "at": enc(&at), "below": enc(&below) })))
        }
        Check::TowerBound { n1, depth, auxiliary_up_to } => {
            let r = towers::tower_lower_bound(*n1, *depth).map_err(|e| s(&e))?;
            let aux = (1..=*auxiliary_up_to).all(towers::auxiliary_inequality);
            Ok((r.all_hold && aux, json!({ "all_hold": r.all_hold, "auxiliary_holds": aux, "inf_ratio": r.inf_ratio.to_string() })))
        }
        Check::Surjectivity { factors, order } => {
            let fs = factors.iter().map(|&q| FiniteMatrixGroup::psl(q)).collect::<Result<Vec<_>, _>>().map_err(|e| s(&e))?;
            let std: Vec<[u32; 2]> = fs.iter().map(FiniteMatrixGroup::standard_generators).collect();
            let gens: Vec<Vec<u32>> = (0..2).map(|g| std.iter().map(|x| x[g]).collect()).collect();
            let r = finquot::product_surjectivity(&fs, &gens, finquot::DEFAULT_ORDER_CAP).map_err(|e| s(&e))?;
            Ok((r.order == *order, serde_json::to_value(r).unwrap()))
        }
        Check::FreeKernel { presentation, action, free_rank } => {
            let t = SubgroupTable::new(presentation.clone(), action.clone()).map_err(|e| s(&e))?;
            let sub = fpgroups::reidemeister_schreier(&t);
            let rank = fpgroups::free_rank(&sub);
            Ok((rank == Some(*free_rank), json!({ "index": t.index(), "schreier_generators": sub.num_gens(), "free_rank": rank })))
        }
    }
}

/// The report and the number of failed examples.
pub fn verify(source: &str, text: &str) -> Result<(Value, usize), CliError> {
    let corpus: Corpus = parse_str(source, text)?;
    if corpus.version != 1 {
        return Err(crate::error::pre(format!("unsupported corpus version {}", corpus.version)));
    }
    let mut results = Vec::new();
    let mut failed = 0;
    for ex in &corpus.examples {
        let (pass, detail) = match run_check(&ex.check) {
            Ok((p, d)) => (p, d),
            Err(e) => (false, json!({ "error": e })),
        };
        if !pass {
            failed += 1;
        }
        results.push(json!({ "name": ex.name, "kind": ex.check.kind(), "pass": pass, "detail": detail }));
    }
    let mut out = json!({ "examples": results, "passed": corpus.examples.len() - failed, "failed": failed });
    if corpus.examples.is_empty() {
        out["warning"] = "corpus is empty; nothing was checked".into();
    }
    Ok((out, failed))
}
