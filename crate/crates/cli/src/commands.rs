use std::path::PathBuf;

use clap::Args;
use kll_core::counting::{self, FiniteGroupCensus};
use kll_core::finquot::{self, FiniteMatrixGroup};
use kll_core::fp;
use kll_core::numfield::{NumFieldError, NumberField, PrimeIdeal};
use kll_core::orbifold::{self, OrbifoldData};
use kll_core::quatalg::{self, QuaternionAlgebra};
use kll_core::taugraphs::{self, CosetGraph};
use kll_core::towers::{self, TowerRecord};
use kll_core::traceorders;
use kll_core::trivalent::{self, SearchPath, TrivalentGraph};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{pre, CliError};
use crate::input::{self, element_json, matrix_json, parse_file, parse_str, ElemSpec, MatSpec, Scalar};

/// What a command produced: a JSON report or raw CSV text.
pub enum Report {
    Json(Value),
    Csv(String),
}

pub struct Ctx {
    pub input: Option<PathBuf>,
    pub budget: Option<u64>,
}

impl Ctx {
    fn read<T: serde::de::DeserializeOwned>(&self) -> Result<Option<T>, CliError> {
        self.input.as_deref().map(parse_file).transpose()
    }
}

fn to_value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn flag_json<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T, CliError> {
    parse_str(flag, text)
}

// field

const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Monic integer polynomial, constant term first, e.g. "[1,0,-2,-1,0,1]".
    #[arg(long)]
    poly: Option<String>,
    /// Rational primes to split.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Norms of the finite ramified primes fed to the Clozel check.
    #[arg(long = "ramified-norm")]
    ramified_norms: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldInput {
    poly: Vec<i64>,
    #[serde(default)]
    primes: Vec<u64>,
    #[serde(default)]
    ramified_norms: Vec<u64>,
}

pub fn ideal_json(p: &PrimeIdeal) -> Value {
    let mut v = to_value(p);
    v["norm"] = p.norm().to_string().into();
    v
}

fn prime_of_power(n: u64) -> Option<u64> {
    let f = fp::factorize(n);
    (f.len() == 1).then(|| f[0].0)
}

pub fn field(ctx: &Ctx, args: FieldArgs) -> Result<Report, CliError> {
    let inp = match ctx.read::<FieldInput>()? {
        Some(i) => i,
        None => {
            let poly = args.poly.as_deref().ok_or_else(|| pre("field needs --poly or --input"))?;
            FieldInput { poly: flag_json("--poly", poly)?, primes: args.primes, ramified_norms: args.ramified_norms }
        }
    };
    let k = NumberField::new(&inp.poly)?;
    let primes = if inp.primes.is_empty() { DEFAULT_PRIMES.to_vec() } else { inp.primes };
    let mut rows = Vec::new();
    for &p in &primes {
        match k.split_prime(p) {
            Ok(ids) => rows.push(json!({ "p": p, "ideals": ids.iter().map(ideal_json).collect::<Vec<_>>() })),
            Err(e @ NumFieldError::NonMonogenicPrime { .. }) => rows.push(json!({ "p": p, "ideals": null, "note": e.to_string() })),
            Err(e) => return Err(e.into()),
        }
    }
    let (r, s) = k.signature();
    let mut out = json!({
        "poly": inp.poly,
        "degree": k.degree(),
        "irreducibility": to_value(k.irreducibility()),
        "signature": [r, s],
        "discriminant": k.poly_discriminant().to_string(),
        "primes": rows,
    });
    if !inp.ramified_norms.is_empty() {
        let mut ram = Vec::new();
        for &n in &inp.ramified_norms {
            let p = prime_of_power(n).ok_or_else(|| pre(format!("{n} is not a prime power")))?;
            let found: Vec<PrimeIdeal> = k.split_prime(p)?.into_iter().filter(|i| i.norm() == n.into()).collect();
            if found.is_empty() {
                return Err(pre(format!("no prime of norm {n}")));
            }
            ram.extend(found);
        }
        out["clozel"] = json!({
            "ramified": ram.iter().map(ideal_json).collect::<Vec<_>>(),
            "result": to_value(quatalg::clozel_hypothesis(&k, &ram)),
        });
    }
    Ok(Report::Json(out))
}

// algebra

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// First entry: a rational ("-3/2") or power-basis coordinates ("[0,1]").
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Defining polynomial of the base field; Q when absent.
    #[arg(long)]
    field: Option<String>,
    /// Analyse the dihedral-type algebra with parameter n instead.
    #[arg(long)]
    dihedral: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraInput {
    #[serde(default)]
    field: Option<Vec<i64>>,
    a: ElemSpec,
    b: ElemSpec,
}

fn elem_flag(flag: &str, s: &str) -> Result<ElemSpec, CliError> {
    match serde_json::from_str::<ElemSpec>(s) {
        Ok(e) => Ok(e),
        Err(_) if !s.trim_start().starts_with('[') => Ok(ElemSpec::Scalar(Scalar::Str(s.to_string()))),
        Err(_) => flag_json(flag, s),
    }
}

pub fn algebra(ctx: &Ctx, args: AlgebraArgs) -> Result<Report, CliError> {
    if let Some(n) = args.dihedral {
        return Ok(Report::Json(to_value(quatalg::dihedral_ramification_analysis(n)?)));
    }
    let inp = match ctx.read::<AlgebraInput>()? {
        Some(i) => i,
        None => {
            let (a, b) = args.a.as_deref().zip(args.b.as_deref()).ok_or_else(|| pre("algebra needs --a and --b, --dihedral or --input"))?;
            let field = args.field.as_deref().map(|f| flag_json("--field", f)).transpose()?;
            AlgebraInput { field, a: elem_flag("--a", a)?, b: elem_flag("--b", b)? }
        }
    };
    let k = input::field(inp.field.as_deref())?;
    let alg = QuaternionAlgebra::new(inp.a.to_element(&k)?, inp.b.to_element(&k)?)?;
    let report = alg.ramification_report();
    Ok(Report::Json(json!({
        "field": inp.field,
        "a": element_json(&alg.a),
        "b": element_json(&alg.b),
        "ramified_finite": report.ramified_finite().iter().map(|f| f.p).collect::<Vec<_>>(),
        "report": to_value(&report),
    })))
}

// order

#[derive(Args, Debug)]
pub struct OrderArgs {
    /// Matrix as JSON, e.g. "[[1,1],[0,1]]"; entries may be coordinate lists.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    field: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderInput {
    #[serde(default)]
    field: Option<Vec<i64>>,
    a: MatSpec,
    b: MatSpec,
}

pub fn order(ctx: &Ctx, args: OrderArgs) -> Result<Report, CliError> {
    let inp = match ctx.read::<OrderInput>()? {
        Some(i) => i,
        None => {
            let (a, b) = args.a.as_deref().zip(args.b.as_deref()).ok_or_else(|| pre("order needs --a and --b or --input"))?;
            let field = args.field.as_deref().map(|f| flag_json("--field", f)).transpose()?;
            OrderInput { field, a: flag_json("--a", a)?, b: flag_json("--b", b)? }
        }
    };
    let k = input::field(inp.field.as_deref())?;
    let (a, b) = (input::to_mat(&inp.a, &k)?, input::to_mat(&inp.b, &k)?);
    let identities = traceorders::verify_trace_identities(&a, &b)?;
    let ord = traceorders::build_order(&a, &b)?;
    let structure: Vec<Vec<Vec<Value>>> =
        ord.structure.iter().map(|row| row.iter().map(|c| c.iter().map(element_json).collect()).collect()).collect();
    let j = traceorders::jorgensen_involution(&a, &b)?;
    Ok(Report::Json(json!({
        "field": inp.field,
        "trace_identities": identities,
        "order": {
            "basis": ["1", "a", "b", "ab"],
            "all_integral": ord.all_integral(),
            "structure": structure,
        },
        "discriminant": element_json(&traceorders::order_discriminant(&ord)),
        "jorgensen": {
            "tau": matrix_json(&j.tau),
            "trace_zero": j.trace_zero,
            "square_scalar": j.square_scalar,
            "inverts_a": j.inverts_a,
            "inverts_b": j.inverts_b,
            "holds": j.holds(),
        },
    })))
}

// orbifold

#[derive(Args, Debug)]
pub struct OrbifoldArgs {
    /// Primes p for the sing_p strata.
    #[arg(long = "prime", value_delimiter = ',', default_value = "2")]
    primes: Vec<u64>,
}

pub fn orbifold(ctx: &Ctx, args: OrbifoldArgs) -> Result<Report, CliError> {
    let data: OrbifoldData = ctx.read()?.ok_or_else(|| pre("orbifold needs --input"))?;
    let mut per_prime = Vec::new();
    for &p in &args.primes {
        if !fp::is_prime(p) {
            return Err(pre(format!("{p} is not a prime")));
        }
        let phi = orbifold::find_cyclic_cover_phi(&data, p).map(|(phi, component)| json!({ "phi": phi, "component": component }));
        per_prime.push(json!({
            "p": p,
            "stratification": to_value(orbifold::stratify(&data.locus, p)),
            "homology": to_value(orbifold::homology_lower_bound(&data, p)),
            "cyclic_cover_hypothesis": phi,
        }));
    }
    let deficit = match orbifold::presentation_deficit(&data) {
        Ok(d) => to_value(d),
        Err(orbifold::OrbifoldError::EmptyLocus) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(Report::Json(json!({ "primes": per_prime, "deficit": deficit })))
}

// graph

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// One of k4, theta, cube, petersen.
    #[arg(long)]
    named: Option<String>,
    /// Check every connected trivalent multigraph with at most this many vertices.
    #[arg(long)]
    all_up_to: Option<usize>,
}

const GRAPH_LIMIT: u64 = 12;

fn single_graph(g: &TrivalentGraph) -> Result<Value, CliError> {
    let cyc = trivalent::short_cycle(g)?;
    let sub = if g.b1() >= 2 { to_value(trivalent::b1_two_subgraph(g)?) } else { Value::Null };
    Ok(json!({
        "V": g.v,
        "b1": g.b1(),
        "girth": trivalent::girth(g),
        "short_cycle": to_value(cyc),
        "b1_two": sub,
    }))
}

pub fn graph(ctx: &Ctx, args: GraphArgs) -> Result<Report, CliError> {
    if let Some(max_v) = args.all_up_to {
        let limit = ctx.budget.unwrap_or(GRAPH_LIMIT);
        if max_v as u64 > limit {
            return Err(CliError::Budget(format!("{max_v} vertices exceeds the generation cap {limit}")));
        }
        let levels = trivalent::connected_trivalent_multigraphs(max_v);
        let mut counts = Vec::new();
        let (mut cyc_fail, mut sub_fail, mut fallbacks, mut checked) = (Vec::new(), Vec::new(), 0, 0);
        for level in &levels {
            if let Some(g0) = level.first() {
                counts.push(json!({ "V": g0.v, "classes": level.len() }));
            }
            for g in level {
                checked += 1;
                if !trivalent::short_cycle(g)?.holds.is_true() {
                    cyc_fail.push(to_value(g));
                }
                let s = trivalent::b1_two_subgraph(g)?;
                if s.path == SearchPath::Exhaustive {
                    fallbacks += 1;
                }
                if !s.holds.is_true() {
                    sub_fail.push(to_value(g));
                }
            }
        }
        return Ok(Report::Json(json!({
            "max_v": max_v,
            "classes": counts,
            "checked": checked,
            "short_cycle": { "all_hold": cyc_fail.is_empty(), "failures": cyc_fail },
            "b1_two": { "all_hold": sub_fail.is_empty(), "failures": sub_fail, "exhaustive_fallbacks": fallbacks },
        })));
    }
    let g = match (&args.named, ctx.read::<TrivalentGraph>()?) {
        (Some(name), _) => match name.as_str() {
            "k4" => TrivalentGraph::complete4(),
            "theta" => TrivalentGraph::theta(),
            "cube" => TrivalentGraph::cube(),
            "petersen" => TrivalentGraph::petersen(),
            other => return Err(pre(format!("unknown graph {other:?}"))),
        },
        (None, Some(g)) => g,
        (None, None) => return Err(pre("graph needs --input, --named or --all-up-to")),
    };
    g.validate()?;
    Ok(Report::Json(single_graph(&g)?))
}

// tower

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// First term of the tower (at least 50).
    #[arg(long)]
    n1: Option<u64>,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Check the recurrence on an explicit sequence, e.g. "[50,60,75]".
    #[arg(long)]
    sequence: Option<String>,
    /// Linear-growth threshold for a tower record given with --input.
    #[arg(long, default_value = "1/1000")]
    tolerance: String,
    /// Emit the bound table as CSV.
    #[arg(long)]
    csv: bool,
}

pub fn tower(ctx: &Ctx, args: TowerArgs) -> Result<Report, CliError> {
    if let Some(rec) = ctx.read::<TowerRecord>()? {
        rec.check_nested()?;
        let tol = Scalar::Str(args.tolerance.clone()).to_q()?;
        let growth = towers::linear_growth_report(&rec, &tol)?;
        let base = rec.levels.first().filter(|l| l.degree == 1).and_then(|l| l.chi_sing_minus);
        let chis: Option<Vec<(u64, i64)>> = rec.levels.iter().map(|l| l.chi_sing_minus.map(|c| (l.degree, c))).collect();
        let euler = base.zip(chis).map(|(b, c)| to_value(towers::euler_multiplicativity_check(b, &c)));
        return Ok(Report::Json(json!({ "growth": to_value(growth), "tolerance": tol.to_string(), "euler": euler })));
    }
    if let Some(seq) = &args.sequence {
        let ns: Vec<u64> = flag_json("--sequence", seq)?;
        let steps = towers::recurrence_check(&ns);
        let all = steps.iter().all(|s| s.holds.is_true());
        return Ok(Report::Json(json!({ "steps": to_value(steps), "all_hold": all })));
    }
    let n1 = args.n1.ok_or_else(|| pre("tower needs --n1, --sequence or --input"))?;
    let report = towers::tower_lower_bound(n1, args.depth)?;
    if args.csv {
        return Ok(Report::Csv(towers::to_csv(&report)));
    }
    let aux = (1..=args.depth).all(towers::auxiliary_inequality);
    let mut v = to_value(report);
    v["auxiliary_inequality"] = json!({ "up_to": args.depth, "holds": aux });
    Ok(Report::Json(v))
}

// quotient

#[derive(Args, Debug)]
pub struct QuotientArgs {
    /// PSL(2, q) factors generated slotwise by [[1,1],[0,1]] and [[1,0],[1,1]], e.g. "5,7".
    #[arg(long, value_delimiter = ',')]
    hall: Vec<u64>,
    /// PSL(2, q) factors each with a Klein four group, e.g. "5,7".
    #[arg(long, value_delimiter = ',')]
    klein_four: Vec<u64>,
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorSpec {
    q: u64,
    #[serde(default = "default_true")]
    projective: bool,
}

type IntMat = [[i64; 2]; 2];

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum QuotientInput {
    /// `generators[g][k]` is generator g in factor k.
    Surjectivity { factors: Vec<FactorSpec>, generators: Vec<Vec<IntMat>> },
    Normalizer { factors: Vec<FactorSpec>, a: Vec<IntMat>, b: Vec<IntMat> },
}

fn build_factors(specs: &[FactorSpec]) -> Result<Vec<FiniteMatrixGroup>, CliError> {
    specs.iter().map(|f| Ok(if f.projective { FiniteMatrixGroup::psl(f.q)? } else { FiniteMatrixGroup::sl(f.q)? })).collect()
}

fn slot(fs: &[FiniteMatrixGroup], k: usize, m: &IntMat) -> Result<u32, CliError> {
    fs.get(k)
        .ok_or_else(|| pre(format!("{} factors but a tuple has more entries", fs.len())))?
        .from_ints(*m)
        .ok_or_else(|| pre(format!("{m:?} does not have determinant 1 in factor {k}")))
}

fn cap(ctx: &Ctx) -> u64 {
    ctx.budget.unwrap_or(finquot::DEFAULT_ORDER_CAP)
}

fn normalizer_json(ctx: &Ctx, fs: &[FiniteMatrixGroup], a: &[u32], b: &[u32]) -> Result<Value, CliError> {
    let r = finquot::normalizer_quotient_order(fs, a, b)?;
    let product: u64 = fs.iter().map(|f| f.order() as u64).product();
    let cross = if product <= cap(ctx) {
        Some(finquot::normalizer_order_by_enumeration(fs, a, b, cap(ctx))? == r.normalizer_order)
    } else {
        None
    };
    let mut v = to_value(r);
    v["enumeration_agrees"] = json!(cross);
    Ok(v)
}

pub fn quotient(ctx: &Ctx, args: QuotientArgs) -> Result<Report, CliError> {
    if !args.hall.is_empty() {
        let fs = build_factors(&args.hall.iter().map(|&q| FactorSpec { q, projective: true }).collect::<Vec<_>>())?;
        let std: Vec<[u32; 2]> = fs.iter().map(FiniteMatrixGroup::standard_generators).collect();
        let gens: Vec<Vec<u32>> = (0..2).map(|g| std.iter().map(|s| s[g]).collect()).collect();
        return Ok(Report::Json(to_value(finquot::product_surjectivity(&fs, &gens, cap(ctx))?)));
    }
    if !args.klein_four.is_empty() {
        let fs = build_factors(&args.klein_four.iter().map(|&q| FactorSpec { q, projective: true }).collect::<Vec<_>>())?;
        let pairs = fs
            .iter()
            .map(|f| f.klein_four().ok_or_else(|| pre("factor has no Klein four subgroup")))
            .collect::<Result<Vec<_>, _>>()?;
        let (a, b): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
        return Ok(Report::Json(normalizer_json(ctx, &fs, &a, &b)?));
    }
    match ctx.read::<QuotientInput>()?.ok_or_else(|| pre("quotient needs --hall, --klein-four or --input"))? {
        QuotientInput::Surjectivity { factors, generators } => {
            let fs = build_factors(&factors)?;
            let gens = generators
                .iter()
                .map(|t| t.iter().enumerate().map(|(k, m)| slot(&fs, k, m)).collect())
                .collect::<Result<Vec<Vec<u32>>, _>>()?;
            Ok(Report::Json(to_value(finquot::product_surjectivity(&fs, &gens, cap(ctx))?)))
        }
        QuotientInput::Normalizer { factors, a, b } => {
            let fs = build_factors(&factors)?;
            let a = a.iter().enumerate().map(|(k, m)| slot(&fs, k, m)).collect::<Result<Vec<_>, _>>()?;
            let b = b.iter().enumerate().map(|(k, m)| slot(&fs, k, m)).collect::<Result<Vec<_>, _>>()?;
            Ok(Report::Json(normalizer_json(ctx, &fs, &a, &b)?))
        }
    }
}

// cheeger

#[derive(Args, Debug)]
pub struct CheegerArgs {
    /// Cycle graph on n vertices.
    #[arg(long)]
    cycle: Option<usize>,
    #[arg(long)]
    complete: Option<usize>,
    /// Coset graph of PSL(2, p) acting on the projective line.
    #[arg(long)]
    projective_line: Option<usize>,
    /// Add the spectral bounds to the report.
    #[arg(long)]
    spectral: bool,
    /// Family report over cycles with these lengths, inclusive, e.g. "3..24".
    #[arg(long)]
    family_cycles: Option<String>,
    /// Emit the family report as CSV.
    #[arg(long)]
    csv: bool,
}

pub fn cheeger(ctx: &Ctx, args: CheegerArgs) -> Result<Report, CliError> {
    if let Some(r) = &args.family_cycles {
        let graphs: Vec<CosetGraph> = input::parse_range(r)?.map(CosetGraph::cycle).collect();
        let rep = taugraphs::tau_family_report(&graphs)?;
        return Ok(if args.csv { Report::Csv(taugraphs::family_csv(&rep)) } else { Report::Json(to_value(rep)) });
    }
    let g = match (args.cycle, args.complete, args.projective_line, ctx.read::<CosetGraph>()?) {
        (Some(n), ..) if n >= 3 => CosetGraph::cycle(n),
        (Some(n), ..) => return Err(pre(format!("a cycle needs at least 3 vertices, got {n}"))),
        (_, Some(n), ..) if n >= 2 => CosetGraph::complete(n),
        (_, Some(n), ..) => return Err(pre(format!("a complete graph here needs at least 2 vertices, got {n}"))),
        (_, _, Some(p), _) if fp::is_prime(p as u64) => CosetGraph::projective_line(p),
        (_, _, Some(p), _) => return Err(pre(format!("{p} is not a prime"))),
        (_, _, _, Some(g)) => g,
        _ => return Err(pre("cheeger needs --cycle, --complete, --projective-line, --family-cycles or --input")),
    };
    g.validate()?;
    let h = taugraphs::cheeger_exact(&g)?;
    let mut out = json!({ "h": h.to_string() });
    if args.spectral {
        let b = taugraphs::cheeger_spectral_bounds(&g)?;
        out["sandwich"] = to_value(b.brackets(&h));
        out["spectral"] = to_value(b);
    }
    Ok(Report::Json(out))
}

// count

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Census SL(2, Z/m).
    #[arg(long)]
    modulus: Option<u32>,
    /// Census SL(2, F_q).
    #[arg(long)]
    field_order: Option<u64>,
    /// Use PSL instead of SL with --field-order.
    #[arg(long)]
    projective: bool,
    /// Include every subgroup with its generators.
    #[arg(long)]
    dump: bool,
}

fn census_json(c: &FiniteGroupCensus) -> Value {
    let d2 = counting::d2_abelianization(&c.group);
    let index_two = c.count_of_index(2);
    let formula = (1usize << d2) - 1;
    json!({
        "ring": to_value(c.group.ring().kind()),
        "projective": c.group.projective(),
        "order": c.order(),
        "subgroups": c.count(),
        "classes": c.classes,
        "rank": c.rank(),
        "counts_by_index": c.counts_by_index(),
        "d2": d2,
        "index_two": { "count": index_two, "formula": formula, "matches": index_two == formula },
        "rank_check": to_value(counting::rank_bound_check(c, 1)),
    })
}

pub fn count(ctx: &Ctx, args: CountArgs) -> Result<Report, CliError> {
    let group = match (args.modulus, args.field_order) {
        (Some(m), None) => FiniteMatrixGroup::sl_mod(m)?,
        (None, Some(q)) if args.projective => FiniteMatrixGroup::psl(q)?,
        (None, Some(q)) => FiniteMatrixGroup::sl(q)?,
        _ => return Err(pre("count needs exactly one of --modulus and --field-order")),
    };
    let budget = ctx.budget.map_or(counting::CENSUS_BUDGET, |b| b.min(usize::MAX as u64) as usize);
    let census = counting::subgroup_census_with(&group, budget)?;
    let mut out = census_json(&census);
    if census.modulus().is_some() {
        out["essential"] = to_value(counting::essential_subgroups(&census)?.1);
    }
    if args.dump {
        out["census"] = census.to_json();
    }
    Ok(Report::Json(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx { input: None, budget: None }
    }

    fn json_of(r: Report) -> Value {
        match r {
            Report::Json(v) => v,
            Report::Csv(_) => panic!("expected json"),
        }
    }

    #[test]
    fn cycle_six() {
        let args = CheegerArgs { cycle: Some(6), complete: None, projective_line: None, spectral: false, family_cycles: None, csv: false };
        assert_eq!(json_of(cheeger(&ctx(), args).unwrap()), json!({ "h": "2/3" }));
    }

    #[test]
    fn elem_flags() {
        assert!(matches!(elem_flag("--a", "-1").unwrap(), ElemSpec::Scalar(Scalar::Int(-1))));
        assert!(matches!(elem_flag("--a", "3/2").unwrap(), ElemSpec::Scalar(Scalar::Str(_))));
        assert!(matches!(elem_flag("--a", "[0,1]").unwrap(), ElemSpec::Coeffs(_)));
        assert!(matches!(elem_flag("--a", "[0,{}]"), Err(CliError::Schema { .. })));
    }

    #[test]
    fn count_budget() {
        let c = Ctx { input: None, budget: Some(10) };
        let args = CountArgs { modulus: Some(3), field_order: None, projective: false, dump: false };
        assert!(matches!(count(&c, args), Err(CliError::Budget(_))));
    }
}
