//! Verification suites shared by the `verify` subcommand and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet};

use prstrata::chains::{group_order, DEFAULT_CHAIN_BOUND};
use prstrata::deformation::{hodge_raise, invert_m1, laurent::LaurentVec, Certification, DEFAULT_SEARCH_BUDGET};
use prstrata::invariants::linear_label;
use prstrata::strata::{
    build_poset, census, claimed_table_e4, compare_tables, degree_fit, fiber_constancy, fiber_degrees,
    lattices_by_hodge, product_census, render_table, universal_checks, Census, DegreeFit, FiberReport, Layer,
    PosetOptions, PosetReport,
};
use prstrata::umodule::{monomial, Row};
use prstrata::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

/// One named pass/fail check with a short explanation.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let detail: String = detail.into();
        let mut d = detail.as_str();
        for tail in ["; problems: ", "; failures: ", "; violations: ", "; exceptions: ", "failures: "] {
            d = d.strip_suffix(tail).unwrap_or(d);
        }
        Check { name: name.into(), ok, detail: d.trim_end().replace('\n', "; ") }
    }

    fn error(name: impl Into<String>, err: &Error) -> Self {
        Check::new(name, false, format!("error: {err}"))
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "ok": self.ok, "detail": self.detail})
    }
}

/// The checks of one suite plus any data it produced.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), checks: vec![], data: json!({}) }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn push_result(&mut self, name: &str, r: Result<Check>) {
        self.checks.push(r.unwrap_or_else(|e| Check::error(name, &e)));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "ok": self.ok(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "data": self.data,
        })
    }
}

fn hp(i: usize, j: usize) -> HodgePair {
    HodgePair { i, j }
}

fn first_lines(v: &[String], n: usize) -> String {
    let mut s: Vec<String> = v.iter().take(n).cloned().collect();
    if v.len() > n {
        s.push(format!("... ({} total)", v.len()));
    }
    s.join("; ")
}

/// Hodge pairs of `<u^2 e1>`, `<u^2 e1, u^2 e2>` and `<u^2 e1, u e2>` inside `E_3`.
pub fn three_lattices() -> Result<Check> {
    let k = FieldCtx::prime(2)?;
    let m = |c, d| monomial(&k, 3, c, d);
    let cases: [(Vec<Row>, HodgePair); 3] =
        [(vec![m(0, 2)], hp(3, 2)), (vec![m(0, 2), m(1, 2)], hp(2, 2)), (vec![m(0, 2), m(1, 1)], hp(2, 1))];
    let mut got = vec![];
    let mut ok = true;
    for (gens, want) in cases {
        let h = hodge(&Subspace::u_span(&k, 3, &gens)?)?;
        ok &= h == want;
        got.push(h.to_string());
    }
    Ok(Check::new("hodge of the three N=3 lattices", ok, format!("got {}; expected (3,2), (2,2), (2,1)", got.join(", "))))
}

/// The lemma checks on the full census: vanishing `m_i` forces a `(1,1)`
/// Hodge drop, the converse fails somewhere, and `λ = (e,0) ⟺ T = ∅ ⟺ cyclic top`.
pub fn universal(e: usize, k: &FieldCtx) -> Result<Vec<Check>> {
    let u = universal_checks(e, k)?;
    let tag = format!("e={e} {}", k.describe());
    Ok(vec![
        Check::new(
            format!("vanishing m_i drops Hodge by (1,1) [{tag}]"),
            u.drop_failures.is_empty(),
            format!("{} vanishing cases over {} chains; failures: {}", u.vanishing_cases, u.chains, first_lines(&u.drop_failures, 3)),
        ),
        Check::new(
            format!("the converse fails on some chain [{tag}]"),
            !u.converse_counterexamples.is_empty(),
            format!("{} counterexamples; first: {}", u.converse_counterexamples.len(), first_lines(&u.converse_counterexamples, 1)),
        ),
        Check::new(
            format!("free top iff T empty iff cyclic top [{tag}]"),
            u.equivalence_failures.is_empty(),
            format!("failures: {}", first_lines(&u.equivalence_failures, 3)),
        ),
    ])
}

/// Raises every non-maximal chain and checks the generic label, the
/// specialization, the trace and the semicontinuity audit.
pub fn raise_totality(e: usize, k: &FieldCtx) -> Result<Check> {
    let chains = enumerate_chains(e, k)?;
    let outcomes: Vec<Option<String>> = chains
        .par_iter()
        .map(|c| -> Result<Option<String>> {
            let lam = hodge(c.top())?;
            if lam.j == 0 {
                return Ok(match hodge_raise(c) {
                    Err(Error::NotDeformable(_)) => None,
                    _ => Some(format!("{c:?}: maximal chain was not rejected")),
                });
            }
            let (fam, trace) = match hodge_raise(c) {
                Ok(x) => x,
                Err(err) => return Ok(Some(format!("{c:?}: {err}"))),
            };
            let g = fam.generic_label()?;
            let mut bad = vec![];
            if fam.specialize() != *c || fam.specialize().key() != c.key() {
                bad.push("specialization differs");
            }
            if !g.is_exact() || Some(g.label.lambda) != lam.raised() {
                bad.push("generic Hodge pair is not λ + (1,-1)");
            }
            if trace.check(&fam).is_err() {
                bad.push("trace inconsistent");
            }
            if !fam.semicontinuity_audit()?.ok {
                bad.push("audit failed");
            }
            Ok((!bad.is_empty()).then(|| format!("{c:?}: {}", bad.join(", "))))
        })
        .collect::<Result<_>>()?;
    let fails: Vec<String> = outcomes.into_iter().flatten().collect();
    let raised = chains.iter().filter(|c| hodge(c.top()).map_or(false, |l| l.j > 0)).count();
    Ok(Check::new(
        format!("hodge-raise is total and exact [e={e} {}]", k.describe()),
        fails.is_empty(),
        format!("{raised} chains raised; failures: {}", first_lines(&fails, 3)),
    ))
}

/// The worked example at `e = 3` over `F_2`: `k0 = 2`, `J = {1}` and the deformed generators
/// `u^2 e1 + t u e2` and `u e2 + t u e1 + t^2 e2`.
pub fn worked_example() -> Result<Check> {
    let k = FieldCtx::prime(2)?;
    let kt = k.rational_t();
    let m = |c, d| monomial(&k, 3, c, d);
    let c = PRChain::from_generators(&k, 3, &[vec![m(1, 2)], vec![m(1, 2), m(0, 2)], vec![m(1, 2), m(0, 2), m(1, 1)]])?;
    let (fam, tr) = hodge_raise(&c)?;
    let t = kt.t()?;
    let lv = |r: &Row| LaurentVec::from_row(&kt, 3, r);
    let d0 = lv(&m(0, 2)).add_scaled(&kt, &lv(&m(1, 1)), &t);
    let d1 = lv(&m(1, 1)).add_scaled(&kt, &lv(&m(0, 1)), &t).add_scaled(&kt, &lv(&m(1, 0)), &kt.mul(&t, &t));
    let generic = fam.generic_label()?.label.lambda;
    let ok = tr.k0 == 2 && tr.j == vec![1] && tr.deformed.len() == 2 && tr.deformed[0] == d0 && tr.deformed[1] == d1 && generic == hp(3, 0);
    Ok(Check::new(
        "worked example deformation pattern",
        ok,
        format!("k0 = {}, J = {:?}, generic λ = {generic}", tr.k0, tr.j),
    ))
}

/// Hodge pairs and labels are unchanged by random group elements.
pub fn random_invariance(e: usize, k: &FieldCtx, seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains = enumerate_chains(e, k)?;
    let mut fails = vec![];
    for _ in 0..samples {
        let c = &chains[rng.gen_range(0..chains.len())];
        let g = loop {
            let entries = [0, 1, 2, 3].map(|_| (0..e).map(|_| Scalar::Fin(rng.gen_range(0..k.q()))).collect::<Vec<_>>());
            if let Ok(g) = TruncatedGroupElement::new(k, e, entries) {
                break g;
            }
        };
        let gc = act(&g, c)?;
        let same = c.levels().iter().zip(gc.levels()).all(|(a, b)| hodge(a).ok() == hodge(b).ok())
            && linear_label(c.levels())? == linear_label(gc.levels())?;
        if !same {
            fails.push(format!("{c:?}"));
        }
    }
    Ok(Check::new(
        format!("Hodge pairs are group invariant [e={e} {} seed={seed}]", k.describe()),
        fails.is_empty(),
        format!("{samples} random translates; failures: {}", first_lines(&fails, 3)),
    ))
}

pub fn hodge_suite(e: usize, fields: &[FieldCtx], seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("hodge");
    r.push_result("hodge of the three N=3 lattices", three_lattices());
    r.push_result("worked example deformation pattern", worked_example());
    for k in fields {
        match universal(e, k) {
            Ok(cs) => cs.into_iter().for_each(|c| r.push(c)),
            Err(err) => r.push(Check::error(format!("universal checks [{}]", k.describe()), &err)),
        }
        for e2 in 2..=e {
            r.push_result("hodge-raise totality", raise_totality(e2, k));
        }
        r.push_result("group invariance", random_invariance(e, k, seed, 200));
    }
    r
}

/// Census invariants for one field.
pub fn census_check(c: &Census) -> Check {
    let v = c.invariant_violations();
    Check::new(
        format!("census totals and invariants [e={} q={}]", c.e, c.q()),
        v.is_empty() && c.total == c.expected_total(),
        format!("total {} of expected {}; violations: {}", c.total, c.expected_total(), first_lines(&v, 3)),
    )
}

pub fn hasse_suite(e: usize, fields: &[FieldCtx]) -> SuiteReport {
    let mut r = SuiteReport::new("hasse");
    let mut tables = vec![];
    let mut data = vec![];
    for k in fields {
        match census(e, k) {
            Ok(c) => {
                r.push(census_check(&c));
                let table = c.emptiness_table();
                if e == 4 {
                    let diff = compare_tables(&claimed_table_e4(), &table);
                    r.push(Check::new(
                        format!("nonempty (λ,T) match the stated e=4 table [q={}]", c.q()),
                        diff.is_empty(),
                        if diff.is_empty() { "exact match".to_string() } else { diff.describe() },
                    ));
                }
                data.push(json!({"q": c.q(), "table": render_table(&table), "census": c.to_json()}));
                tables.push((c.q(), table));
            }
            Err(err) => r.push(Check::error(format!("census [{}]", k.describe()), &err)),
        }
    }
    if tables.len() > 1 {
        let same = tables.windows(2).all(|w| w[0].1 == w[1].1);
        r.push(Check::new(
            "nonempty labels do not depend on q",
            same,
            tables.iter().map(|(q, t)| format!("q={q}: {}", render_table(t))).collect::<Vec<_>>().join(" | "),
        ));
    }
    r.data = json!({"censuses": data, "scope": "emptiness is stated over the tested fields"});
    r
}

/// Counts over the sample fields of `f(census)`.
fn sampled(censuses: &BTreeMap<u32, Census>, f: impl Fn(&Census) -> u64) -> BTreeMap<u32, u64> {
    censuses.iter().map(|(q, c)| (*q, f(c))).collect()
}

fn fit_check(name: String, counts: &BTreeMap<u32, u64>, expected: usize) -> (Check, Value) {
    match degree_fit(counts) {
        Ok(fit) => {
            let ok = fit.certifies_degree(expected);
            let detail = format!("{} (degree {}, expected {expected}{})", fit.render(), fit.degree, if fit.extra_roots { ", unstable" } else { "" });
            (Check::new(name.clone(), ok, detail), json!({"name": name, "counts": counts, "fit": fit_json(&fit), "expected": expected}))
        }
        Err(err) => (Check::error(name.clone(), &err), json!({"name": name, "error": err.to_string()})),
    }
}

fn fit_json(fit: &DegreeFit) -> Value {
    let mut v = fit.to_json();
    v["rendered"] = json!(fit.render());
    v["extra_roots"] = json!(fit.extra_roots);
    v
}

/// Degrees in `q` of chain, lattice and `T`-stratum counts.
pub fn dimensions_suite(e: usize, samples: &[u32]) -> SuiteReport {
    let mut r = SuiteReport::new("dimensions");
    let fields: Result<Vec<FieldCtx>> = samples.iter().map(|&q| FieldCtx::with_order(q)).collect();
    let fields = match fields {
        Ok(f) => f,
        Err(err) => {
            r.push(Check::error("sample fields", &err));
            return r;
        }
    };
    let censuses: Result<BTreeMap<u32, Census>> = fields.par_iter().map(|k| Ok((k.q(), census(e, k)?))).collect();
    let lattices: Result<BTreeMap<u32, BTreeMap<HodgePair, u64>>> = fields
        .par_iter()
        .map(|k| Ok((k.q(), lattices_by_hodge(e, k)?.into_iter().map(|(l, v)| (l, v.len() as u64)).collect())))
        .collect();
    let (censuses, lattices) = match (censuses, lattices) {
        (Ok(c), Ok(l)) => (c, l),
        (Err(err), _) | (_, Err(err)) => {
            r.push(Check::error("census over the sample fields", &err));
            return r;
        }
    };
    let poset = adm_poset(e);
    let mut fits = vec![];
    for lambda in &poset.elements {
        let (c, v) = fit_check(format!("chains with λ={lambda} have degree e-j"), &sampled(&censuses, |c| c.count_lambda(lambda)), poset.dim_x(lambda));
        r.push(c);
        fits.push(v);
        let counts: BTreeMap<u32, u64> = lattices.iter().map(|(q, m)| (*q, m.get(lambda).copied().unwrap_or(0))).collect();
        let (c, v) = fit_check(format!("lattices with λ={lambda} have degree e-2j"), &counts, poset.dim_gr(lambda));
        r.push(c);
        fits.push(v);
    }
    let ts: BTreeSet<BTreeSet<usize>> =
        censuses.values().flat_map(|c| c.counts.keys().map(|l| l.t.clone()).collect::<Vec<_>>()).collect();
    for t in ts {
        let name = format!("chains with T={} have degree e-|T|", prstrata::invariants::format_set(&t));
        let (c, v) = fit_check(name, &sampled(&censuses, |c| c.count_t(&t)), e - t.len());
        r.push(c);
        fits.push(v);
    }
    r.data = json!({"e": e, "samples": samples, "fits": fits});
    r
}

/// Fibre constancy per field, and the cross-`q` degree of the fibres over `samples`.
pub fn flatness_suite(e: usize, fields: &[FieldCtx], samples: &[u32]) -> SuiteReport {
    let mut r = SuiteReport::new("flatness");
    let mut data = vec![];
    for k in fields {
        match fiber_constancy(e, k) {
            Ok(rep) => {
                let free = rep.groups.get(&hp(e, 0)).and_then(|g| g.constant());
                r.push(Check::new(
                    format!("fibres are constant on Hodge classes [e={e} q={}]", rep.q),
                    rep.ok(),
                    format!("{} classes; exceptions: {}", rep.groups.len(), first_lines(&rep.exceptions, 3)),
                ));
                r.push(Check::new(
                    format!("fibre over a free lattice is one chain [e={e} q={}]", rep.q),
                    free == Some(1),
                    match free { Some(n) => format!("fibre size {n}"), None => "fibre size not constant".to_string() },
                ));
                data.push(rep.to_json());
            }
            Err(err) => r.push(Check::error(format!("fibres [{}]", k.describe()), &err)),
        }
    }
    let reports: Result<Vec<FiberReport>> =
        samples.par_iter().map(|&q| fiber_constancy(e, &FieldCtx::with_order(q)?)).collect();
    let mut degrees = vec![];
    match reports.and_then(|reps| fiber_degrees(&reps)) {
        Ok(ds) => {
            for d in ds {
                r.push(Check::new(
                    format!("fibre size over λ={} has degree (e-i+j)/2", d.lambda),
                    d.ok(),
                    format!("{} (degree {}, expected {})", d.fit.render(), d.fit.degree, d.expected),
                ));
                degrees.push(json!({"lambda": [d.lambda.i, d.lambda.j], "sizes": d.sizes, "fit": fit_json(&d.fit), "expected": d.expected}));
            }
        }
        Err(err) => r.push(Check::error("fibre degrees", &err)),
    }
    r.data = json!({"reports": data, "samples": samples, "degrees": degrees});
    r
}

/// The model seeding the m1 layer: the normal form with `m = 3`, `c = 1`
/// and the chain in `((2,2),{2,3,4})` with `ω^(1) = F^(1)`.
pub fn seed_model(k: &FieldCtx) -> Result<DieudonneModel> {
    Ok(ag_fixed_point_witness(3, &k.one(), k)?.model)
}

pub fn poset_check(rep: &PosetReport) -> Check {
    let recipes: BTreeMap<String, usize> =
        rep.edges.iter().flat_map(|e| e.recipes()).fold(BTreeMap::new(), |mut m, (k, v)| {
            *m.entry(k).or_insert(0) += v;
            m
        });
    let points: usize = rep.edges.iter().map(|e| e.points).sum();
    Check::new(
        format!("every covering edge is certified on every point [{} layer, e={} {}]", rep.layer.name(), rep.e, rep.field),
        rep.ok(),
        format!(
            "{} nodes, {} edges, {points} lower points; recipes {:?}; failures: {}",
            rep.nodes.len(),
            rep.edges.len(),
            recipes,
            first_lines(&rep.failures(), 3)
        ),
    )
}

pub fn closure_suite(e: usize, k: &FieldCtx, model: Option<DieudonneModel>) -> SuiteReport {
    let mut r = SuiteReport::new("closure");
    let mut layers = vec![Layer::Lambda, Layer::Linear];
    if e == 4 {
        layers.push(Layer::Refined);
    }
    let mut data = vec![];
    for layer in layers {
        let model = if layer == Layer::Refined {
            match model.clone().map(Ok).unwrap_or_else(|| seed_model(k)) {
                Ok(m) => Some(m),
                Err(err) => {
                    r.push(Check::error("seed model for the m1 layer", &err));
                    continue;
                }
            }
        } else {
            None
        };
        let opts = PosetOptions { layer, model, budget: DEFAULT_SEARCH_BUDGET };
        match build_poset(e, k, &opts) {
            Ok(rep) => {
                r.push(poset_check(&rep));
                data.push(json!({
                    "layer": layer.name(),
                    "ok": rep.ok(),
                    "nodes": rep.nodes.len(),
                    "edges": rep.edges.iter().map(|x| json!({
                        "lower": x.lower.code(),
                        "upper": x.upper.code(),
                        "points": x.points,
                        "certified": x.certified(),
                        "recipes": x.recipes(),
                    })).collect::<Vec<_>>(),
                }));
            }
            Err(err) => r.push(Check::error(format!("poset [{} layer]", layer.name()), &err)),
        }
    }
    r.data = json!({"layers": data, "order_scope": prstrata::strata::ORDER_SCOPE});
    r
}

/// The normal-form witness: image line `<c u^3 e2>`, label `((2,2),{2,3,4})`,
/// vanishing `m1`, and a group translate with `m1 != 0` visible modulo `t^2`.
pub fn witness_checks(w: &ModelWitness, claimed_line: bool) -> Vec<Check> {
    let k = w.chain.ctx();
    let mut out = vec![];
    if claimed_line {
        let line = Subspace::span(k, 4, &[monomial(k, 4, 1, 3)]);
        out.push(match line {
            Ok(l) => Check::new("image line is <u^3 e2>", w.f_one == l, format!("computed {:?}", w.f_one)),
            Err(err) => Check::error("image line is <u^3 e2>", &err),
        });
    }
    let want = prstrata::invariants::StratumLabel::new(hp(2, 2), [2, 3, 4]);
    out.push(Check::new("label is ((2,2),{2,3,4})", w.label.linear() == want, format!("computed {}", w.label)));
    out.push(Check::new("m1 vanishes on the witness", w.m1_vanishes, format!("ω^(1) = {:?}, F^(1) = {:?}", w.chain.levels()[0], w.f_one)));
    out.push(match invert_m1(&w.model, &w.chain) {
        Ok((fam, g)) => {
            let order = match &g.certification {
                Certification::Bounded(b) => b.m1_nonzero_order,
                Certification::Exact => None,
            };
            let linear_constant = fam.special_label().map(|l| l.linear()).ok() == Some(g.label.linear());
            let audit = fam.semicontinuity_audit().map(|a| a.ok).unwrap_or(false);
            Check::new(
                "translate keeps linear invariants and makes m1 nonzero mod t^2",
                linear_constant && g.label.m1 == M1::NonZero && order.map_or(false, |o| o <= 2) && audit,
                format!("generic {}, m1 nonzero from order {}", g.label, order.map_or("-".to_string(), |o| format!("t^{o}"))),
            )
        }
        Err(err) => Check::error("translate keeps linear invariants and makes m1 nonzero mod t^2", &err),
    });
    out
}

/// Orbits against the invariants `(hodge ω^(e), hodge ω^(2), blocks of ω^(e)/ω^(1))`.
pub fn orbit_report(e: usize, k: &FieldCtx) -> Result<(Check, Value)> {
    let os = orbits(e, k, DEFAULT_CHAIN_BOUND)?;
    let total: u64 = os.iter().map(|o| o.size as u64).sum();
    let g = group_order(e, k.q() as u64);
    let mut by_sig: BTreeMap<OrbitSignature, usize> = BTreeMap::new();
    let mut rows = vec![];
    for o in &os {
        let s = orbit_signature(&o.representative)?;
        *by_sig.entry(s.clone()).or_insert(0) += 1;
        rows.push(json!({"representative": o.representative.to_json(), "size": o.size, "signature": s.to_json()}));
    }
    let all_sigs: BTreeSet<OrbitSignature> =
        enumerate_chains(e, k)?.iter().map(orbit_signature).collect::<Result<_>>()?;
    let separated = by_sig.values().all(|&n| n == 1) && all_sigs.len() == os.len();
    let divides = os.iter().all(|o| g % o.size as u128 == 0);
    let ok = separated && divides && total == (k.q() as u64 + 1).pow(e as u32);
    let check = Check::new(
        format!("orbits are separated by their invariants [e={e} {}]", k.describe()),
        ok,
        format!("{} orbits, {} distinct signatures, sizes sum to {total}", os.len(), all_sigs.len()),
    );
    let data = json!({
        "e": e,
        "field": k.describe(),
        "group_order": g.to_string(),
        "orbit_count": os.len(),
        "signature_count": all_sigs.len(),
        "separated": separated,
        "orbits": rows,
    });
    Ok((check, data))
}

/// The product of the `e=2` and `e=3` censuses.
pub fn product_report(k: &FieldCtx) -> Result<(Check, Value)> {
    let a = census(2, k)?;
    let b = census(3, k)?;
    let p = product_census(&[a.clone(), b.clone()])?;
    let q = k.q() as u64;
    let mut problems = vec![];
    if p.total != (q + 1).pow(5) {
        problems.push(format!("total {}", p.total));
    }
    for (t, n) in &p.counts {
        if a.counts[&t[0]] * b.counts[&t[1]] != *n {
            problems.push(format!("count of {t:?}"));
        }
    }
    let pa = adm_poset(2);
    let pb = adm_poset(3);
    let prod = product_poset(&[pa.clone(), pb.clone()]);
    for x in p.lambda_counts().keys() {
        if p.dim(x) != pa.dim_x(&x[0]) + pb.dim_x(&x[1]) || p.dim(x) != prod.dim_x(x) {
            problems.push(format!("dimension of {x:?}"));
        }
        for y in p.lambda_counts().keys() {
            if p.le(x, y)? != (x[0].dominated_by(&y[0])? && x[1].dominated_by(&y[1])?) {
                problems.push(format!("order {x:?} vs {y:?}"));
            }
        }
    }
    let check = Check::new(
        format!("product of e=2 and e=3 censuses [{}]", k.describe()),
        problems.is_empty(),
        format!("total {} with {} tuple labels; problems: {}", p.total, p.counts.len(), first_lines(&problems, 3)),
    );
    Ok((check, p.to_json()))
}
