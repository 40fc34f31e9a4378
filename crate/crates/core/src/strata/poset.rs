//! The stratification poset: populated labels under the naive order, with
//! every covering edge certified point by point by one-parameter families.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::census::{classify, render_table, Classification, EmptinessTable};
use crate::chains::PRChain;
use crate::deformation::{
    hodge_raise, invert_m1, linear_recipe, pinned_recipe, search_witness, search_witness_with_model, Certification,
    FamilyChain, GenericLabel, LinearVariant, PinnedVariant,
};
use crate::dieudonne::DieudonneModel;
use crate::error::{Error, Result};
use crate::invariants::{StratumLabel, M1};
use crate::scalar::FieldCtx;

/// Which invariants the nodes carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    /// Hodge pair of the top level only.
    Lambda,
    /// `(λ, T)`.
    Linear,
    /// `(λ, T, m1)` with `m1` from a model; labels where the model leaves
    /// `m1` undefined stay as `(λ, T)` nodes.
    Refined,
}

impl Layer {
    pub fn name(&self) -> &'static str {
        match self {
            Layer::Lambda => "lambda",
            Layer::Linear => "linear",
            Layer::Refined => "refined",
        }
    }

    pub fn parse(s: &str) -> Result<Layer> {
        match s {
            "lambda" => Ok(Layer::Lambda),
            "linear" => Ok(Layer::Linear),
            "refined" => Ok(Layer::Refined),
            _ => Err(Error::Parse(format!("unknown layer {s:?}; expected lambda, linear or refined"))),
        }
    }
}

/// The order statement attached to every report.
pub const ORDER_SCOPE: &str = "lower bound (each lower stratum lies in the closure of the upper one) is certified \
     by a family through every point; upper bound (closures contain nothing outside the lower strata) is \
     structural, from semicontinuity of the invariants, and audited on every produced family";

#[derive(Clone, Debug)]
pub struct PosetNode {
    pub label: StratumLabel,
    pub count: usize,
}

/// The family certifying one point of the lower stratum.
#[derive(Clone, Debug)]
pub struct PointWitness {
    pub point: usize,
    pub chain: PRChain,
    pub recipe: String,
    pub generic: StratumLabel,
    pub certification: String,
    pub audit_ok: bool,
    pub audit: String,
}

#[derive(Clone, Debug)]
pub struct NotFoundEntry {
    pub point: usize,
    pub chain: PRChain,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct EdgeCertificate {
    pub lower: StratumLabel,
    pub upper: StratumLabel,
    pub points: usize,
    pub witnesses: Vec<PointWitness>,
    pub not_found: Vec<NotFoundEntry>,
}

impl EdgeCertificate {
    pub fn certified(&self) -> bool {
        self.not_found.is_empty() && self.witnesses.len() == self.points && self.witnesses.iter().all(|w| w.audit_ok)
    }

    /// Recipe name → number of points it certified.
    pub fn recipes(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for w in &self.witnesses {
            *out.entry(w.recipe.clone()).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PosetReport {
    pub e: usize,
    pub field: String,
    pub layer: Layer,
    pub model: Option<DieudonneModel>,
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<EdgeCertificate>,
    pub emptiness: EmptinessTable,
}

impl PosetReport {
    pub fn ok(&self) -> bool {
        self.edges.iter().all(|e| e.certified())
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.edges {
            for nf in &e.not_found {
                out.push(format!("{} -> {}: point {}: {}", e.lower, e.upper, nf.point, nf.reason));
            }
            for w in e.witnesses.iter().filter(|w| !w.audit_ok) {
                out.push(format!("{} -> {}: point {}: audit {}", e.lower, e.upper, w.point, w.audit));
            }
        }
        out
    }

    fn node_text(&self, l: &StratumLabel) -> String {
        match self.layer {
            Layer::Lambda => format!("λ={}", l.lambda),
            _ => l.display(),
        }
    }

    /// Hasse diagram, nodes in label order, edges from the special to the
    /// generic stratum; uncertified edges are dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph strata {{");
        let _ = writeln!(s, "  rankdir=BT;");
        let _ = writeln!(s, "  node [shape=box];");
        let ids: BTreeMap<&StratumLabel, usize> = self.nodes.iter().enumerate().map(|(i, n)| (&n.label, i)).collect();
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", self.node_text(&n.label));
        }
        for e in &self.edges {
            let style = if e.certified() { "" } else { " [style=dashed]" };
            let _ = writeln!(s, "  n{} -> n{}{style};", ids[&e.lower], ids[&e.upper]);
        }
        let _ = writeln!(s, "}}");
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e,
            "field": self.field,
            "layer": self.layer.name(),
            "model": self.model.as_ref().map(|m| m.to_json()),
            "order": "naive: λ ≤ λ', T ⊇ T', and m1' = 0 forces m1 = 0",
            "order_scope": ORDER_SCOPE,
            "ok": self.ok(),
            "nodes": self.nodes.iter().map(|n| json!({
                "label": n.label.to_json(),
                "text": self.node_text(&n.label),
                "points": n.count,
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "lower": e.lower.code(),
                "upper": e.upper.code(),
                "points": e.points,
                "certified": e.certified(),
                "recipes": e.recipes(),
                "witnesses": e.witnesses.iter().map(|w| json!({
                    "point": w.point,
                    "chain": w.chain.to_json(),
                    "recipe": w.recipe,
                    "generic": w.generic.code(),
                    "certification": w.certification,
                    "audit": w.audit,
                })).collect::<Vec<_>>(),
                "not_found": e.not_found.iter().map(|n| json!({
                    "point": n.point,
                    "chain": n.chain.to_json(),
                    "reason": n.reason,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "emptiness": self.emptiness.iter().map(|(l, ts)| json!({
                "lambda": [l.i, l.j],
                "nonempty_T": ts.iter().map(|t| t.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "emptiness_text": render_table(&self.emptiness),
            "emptiness_scope": "over the tested field",
        })
    }
}

/// Options for [`build_poset`].
#[derive(Clone, Debug)]
pub struct PosetOptions {
    pub layer: Layer,
    pub model: Option<DieudonneModel>,
    pub budget: usize,
}

fn node_key(label: &StratumLabel, layer: Layer) -> StratumLabel {
    match layer {
        Layer::Lambda => StratumLabel::new(label.lambda, []),
        Layer::Linear => label.linear(),
        Layer::Refined => label.clone(),
    }
}

fn node_lt(a: &StratumLabel, b: &StratumLabel, layer: Layer) -> Result<bool> {
    match layer {
        Layer::Lambda => Ok(a.lambda != b.lambda && a.lambda.dominated_by(&b.lambda)?),
        _ => a.lt(b),
    }
}

/// Classifies every chain and builds the report.
pub fn build_poset(e: usize, ctx: &FieldCtx, opts: &PosetOptions) -> Result<PosetReport> {
    if opts.layer == Layer::Refined {
        let m = opts.model.as_ref().ok_or_else(|| Error::Precondition("the refined layer needs a model".into()))?;
        if e != 4 || m.e() != 4 {
            return Err(Error::Precondition("the refined layer is built at e = 4".into()));
        }
    }
    let model = if opts.layer == Layer::Refined { opts.model.as_ref() } else { None };
    let cls = classify(e, ctx, model)?;
    build_poset_from(e, &ctx.describe(), &cls, opts)
}

/// Builds the report from classified points (an empty classification gives
/// an empty report).
pub fn build_poset_from(e: usize, field: &str, cls: &Classification, opts: &PosetOptions) -> Result<PosetReport> {
    let mut points: BTreeMap<StratumLabel, Vec<PRChain>> = BTreeMap::new();
    let mut emptiness = EmptinessTable::new();
    for (l, cs) in cls {
        emptiness.entry(l.lambda).or_default().insert(l.t.clone());
        points.entry(node_key(l, opts.layer)).or_default().extend(cs.iter().cloned());
    }
    for v in points.values_mut() {
        v.sort();
    }
    let labels: Vec<StratumLabel> = points.keys().cloned().collect();
    let mut covers = Vec::new();
    for a in &labels {
        for b in &labels {
            if !node_lt(a, b, opts.layer)? {
                continue;
            }
            let mut between = false;
            for c in &labels {
                if node_lt(a, c, opts.layer)? && node_lt(c, b, opts.layer)? {
                    between = true;
                    break;
                }
            }
            if !between {
                covers.push((a.clone(), b.clone()));
            }
        }
    }
    let model = if opts.layer == Layer::Refined { opts.model.clone() } else { None };
    let tasks: Vec<(usize, usize)> =
        covers.iter().enumerate().flat_map(|(k, (a, _))| (0..points[a].len()).map(move |i| (k, i))).collect();
    let results: Vec<std::result::Result<PointWitness, NotFoundEntry>> = tasks
        .par_iter()
        .map(|&(k, i)| {
            let (lower, upper) = &covers[k];
            let c = &points[lower][i];
            certify_point(c, lower, upper, opts.layer, model.as_ref(), opts.budget).map_or_else(
                |err| Err(NotFoundEntry { point: i, chain: c.clone(), reason: err.to_string() }),
                |(recipe, g, audit_ok, audit)| {
                    Ok(PointWitness {
                        point: i,
                        chain: c.clone(),
                        recipe,
                        generic: g.label,
                        certification: match g.certification {
                            Certification::Exact => "exact".into(),
                            Certification::Bounded(b) => format!("bounded mod t^{}", b.precision),
                        },
                        audit_ok,
                        audit,
                    })
                },
            )
        })
        .collect();
    let mut edges: Vec<EdgeCertificate> = covers
        .iter()
        .map(|(a, b)| EdgeCertificate {
            lower: a.clone(),
            upper: b.clone(),
            points: points[a].len(),
            witnesses: vec![],
            not_found: vec![],
        })
        .collect();
    for (&(k, _), r) in tasks.iter().zip(results) {
        match r {
            Ok(w) => edges[k].witnesses.push(w),
            Err(n) => edges[k].not_found.push(n),
        }
    }
    let nodes = points.iter().map(|(l, v)| PosetNode { label: l.clone(), count: v.len() }).collect();
    Ok(PosetReport { e, field: field.to_string(), layer: opts.layer, model, nodes, edges, emptiness })
}

type Certified = (String, GenericLabel, bool, String);

fn finish(fam: FamilyChain, goal: &StratumLabel, with_m1: bool) -> Result<Certified> {
    let g = fam.generic_label()?;
    let got = if with_m1 { g.label.clone() } else { g.label.linear() };
    if got != *goal {
        return Err(Error::Inconclusive(format!("{} reached {} instead of {goal}", fam.recipe(), g.label)));
    }
    let audit = fam.semicontinuity_audit()?;
    Ok((fam.recipe().to_string(), g, audit.ok, audit.detail))
}

/// The witness for one point: the named construction when one applies to
/// the edge, otherwise the deterministic search.
fn certify_point(
    c: &PRChain,
    lower: &StratumLabel,
    upper: &StratumLabel,
    layer: Layer,
    model: Option<&DieudonneModel>,
    budget: usize,
) -> Result<Certified> {
    if layer == Layer::Lambda {
        let (fam, _) = hodge_raise(c)?;
        let g = fam.generic_label()?;
        if g.label.lambda != upper.lambda {
            return Err(Error::Inconclusive(format!("generic Hodge pair {}", g.label.lambda)));
        }
        let audit = fam.semicontinuity_audit()?;
        return Ok((fam.recipe().to_string(), g, audit.ok, audit.detail));
    }
    let with_m1 = model.is_some() && lower.m1 != M1::Unknown && upper.m1 != M1::Unknown;
    let goal = if with_m1 { upper.clone() } else { upper.linear() };
    if let (true, Some(m)) = (with_m1, model) {
        if lower.linear() == upper.linear() {
            return finish(invert_m1(m, c)?.0, &goal, true);
        }
        if lower.m1 == M1::Zero && upper.m1 == M1::Zero {
            for v in [PinnedVariant::Collapse, PinnedVariant::Raise, PinnedVariant::MoveThird] {
                if v.accepts(lower) && v.target(lower) == goal {
                    return finish(pinned_recipe(m, c, v)?.0, &goal, true);
                }
            }
        }
        for v in [LinearVariant::CollapseToM3Only, LinearVariant::RaiseWithinM3] {
            if v.source() == lower.linear() && v.target() == upper.linear() {
                if let Ok(fam) = linear_recipe(c, v).and_then(|f| f.with_model(m)) {
                    if let Ok(done) = finish(fam, &goal, true) {
                        return Ok(done);
                    }
                }
            }
        }
        return finish(search_witness_with_model(c, &goal, Some(m), budget)?, &goal, true);
    }
    for v in [LinearVariant::CollapseToM3Only, LinearVariant::RaiseWithinM3] {
        if v.source() == lower.linear() && v.target() == goal {
            return finish(linear_recipe(c, v)?, &goal, false);
        }
    }
    if lower.lambda != upper.lambda {
        if let Ok((fam, _)) = hodge_raise(c) {
            if fam.generic_label()?.label.linear() == goal {
                return finish(fam, &goal, false);
            }
        }
    }
    finish(search_witness(c, &goal, budget)?, &goal, false)
}
