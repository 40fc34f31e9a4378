//! One-parameter families of chains over `K(t)` (exact) or `K[t]/t^N`
//! (truncated), their special and generic fibres, and the constructive
//! deformation recipes.

mod certify;
mod hodge_raise;
pub mod laurent;
mod linear;
mod pinned;
mod search;

use serde_json::{json, Value};

use crate::chains::{validate_levels, PRChain};
use crate::dieudonne::{m1_vanishes_levels, DieudonneModel};
use crate::error::{Error, Result};
use crate::invariants::{linear_label, stratum_label, StratumLabel, M1};
use crate::scalar::{FieldCtx, Kind, Scalar};
use crate::umodule::{left_kernel, row_from_json, row_specialize, row_to_json, Row, Subspace};

pub use certify::{nonempty_linear_labels, BoundCertificate};
pub use hodge_raise::{hodge_raise, DeformationTrace};
pub use linear::{linear_recipe, LinearVariant};
pub use pinned::{invert_m1, invert_m1_at, pinned_recipe, pinned_recipe_at, PinnedVariant};
pub use search::{search_witness, search_witness_with_model, DEFAULT_SEARCH_BUDGET};

/// Default precision of truncated families and its retry ceiling.
pub const DEFAULT_PRECISION: usize = 16;
pub const MAX_PRECISION: usize = 128;

const VECTOR_BOUND: u64 = 1 << 20;

/// Coefficient ring of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ExactRational,
    Truncated(usize),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::ExactRational => "exact_rational",
            Mode::Truncated(_) => "truncated",
        }
    }
}

/// Facts that hold along a family by construction. Each is re-verified on
/// the family before it is used as evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `u ω^(i) ⊆ ω^(i-2)` along the family.
    MiPinned(usize),
    /// `ω^(1) = F^(1)` along the family.
    M1Pinned,
    /// Level `i` is constant in `t`.
    LevelConstant(usize),
    /// The family is `g(t) · c` for a `t`-dependent element `g(t)` of `GL_2(K[t][u]/u^e)`.
    GroupTranslate,
}

impl Relation {
    pub fn describe(&self) -> String {
        match self {
            Relation::MiPinned(i) => format!("m_{i} = 0 by construction"),
            Relation::M1Pinned => "ω^(1) = F^(1) by construction".into(),
            Relation::LevelConstant(i) => format!("level {i} constant in t"),
            Relation::GroupTranslate => "group translate of a constant chain".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, index) = match self {
            Relation::MiPinned(i) => ("mi_pinned", Some(*i)),
            Relation::M1Pinned => ("m1_pinned", None),
            Relation::LevelConstant(i) => ("level_constant", Some(*i)),
            Relation::GroupTranslate => ("group_translate", None),
        };
        json!({"kind": kind, "index": index, "text": self.describe()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let index = || {
            v["index"].as_u64().map(|i| i as usize).ok_or_else(|| Error::Parse("relation is missing \"index\"".into()))
        };
        match v["kind"].as_str() {
            Some("mi_pinned") => Ok(Relation::MiPinned(index()?)),
            Some("m1_pinned") => Ok(Relation::M1Pinned),
            Some("level_constant") => Ok(Relation::LevelConstant(index()?)),
            Some("group_translate") => Ok(Relation::GroupTranslate),
            _ => Err(Error::Parse(format!("unknown relation {v}"))),
        }
    }
}

/// How a generic label was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Invariants computed over `K(t)`.
    Exact,
    /// Lower bounds modulo `t^N` pinned to a unique stratum.
    Bounded(BoundCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericLabel {
    pub label: StratumLabel,
    pub certification: Certification,
}

impl GenericLabel {
    pub fn is_exact(&self) -> bool {
        matches!(self.certification, Certification::Exact)
    }

    pub fn to_json(&self) -> Value {
        let cert = match &self.certification {
            Certification::Exact => json!({"kind": "exact"}),
            Certification::Bounded(b) => b.to_json(),
        };
        json!({"label": self.label.to_json(), "certification": cert})
    }
}

/// Outcome of the semicontinuity audit of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub special: StratumLabel,
    pub generic: StratumLabel,
    pub ok: bool,
    pub detail: String,
}

/// A one-parameter family of chains `ω̃^(1) ⊂ .. ⊂ ω̃^(e)`.
#[derive(Clone, Debug)]
pub struct FamilyChain {
    mode: Mode,
    base: FieldCtx,
    tctx: FieldCtx,
    e: usize,
    gens: Vec<Vec<Row>>,
    levels: Vec<Subspace>,
    special: PRChain,
    model: Option<DieudonneModel>,
    relations: Vec<Relation>,
    trace: Option<DeformationTrace>,
    recipe: String,
}

impl FamilyChain {
    /// A family over `K(t)` from generators of each level. Generators must
    /// have no pole at `t = 0` and their values at `t = 0` must span a chain.
    pub fn exact(base: &FieldCtx, e: usize, gens: Vec<Vec<Row>>) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::Precondition("families are built over a finite base field".into()));
        }
        Self::build(Mode::ExactRational, base, base.rational_t(), e, gens)
    }

    /// A family over `K[t]/t^n` from generators of each level.
    pub fn truncated(base: &FieldCtx, n: usize, e: usize, gens: Vec<Vec<Row>>) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::Precondition("families are built over a finite base field".into()));
        }
        let tctx = base.truncated_t(n)?;
        Self::build(Mode::Truncated(n), base, tctx, e, gens)
    }

    /// The constant family of a chain.
    pub fn constant(c: &PRChain) -> Result<Self> {
        let gens = c.levels().iter().map(|w| w.basis().to_vec()).collect();
        Self::exact(c.ctx(), c.e(), gens)
    }

    fn build(mode: Mode, base: &FieldCtx, tctx: FieldCtx, e: usize, gens: Vec<Vec<Row>>) -> Result<Self> {
        if gens.len() != e {
            return Err(Error::InvalidChain(format!("expected {e} levels, got {}", gens.len())));
        }
        let gens: Vec<Vec<Row>> = gens
            .into_iter()
            .map(|g| g.into_iter().map(|r| r.iter().map(|x| tctx.lift(x)).collect()).collect())
            .collect();
        for g in &gens {
            for r in g {
                if r.len() != 2 * e {
                    return Err(Error::DimensionMismatch(format!("vector of length {} in E_{e}", r.len())));
                }
                for x in r {
                    tctx.check(x)?;
                }
            }
        }
        let levels = gens.iter().map(|g| Subspace::span(&tctx, e, g)).collect::<Result<Vec<_>>>()?;
        let rep = validate_levels(e, &levels);
        if !rep.ok {
            return Err(Error::InvalidChain(format!("family level {}: {}", rep.level.unwrap(), rep.reason)));
        }
        let mut special_levels = Vec::with_capacity(e);
        for (i, g) in gens.iter().enumerate() {
            let rows = g.iter().map(|r| row_specialize(&tctx, r)).collect::<Result<Vec<_>>>()?;
            let w = Subspace::span(base, e, &rows)?;
            if w.dim() != i + 1 {
                return Err(Error::InvalidChain(format!(
                    "generators of level {} specialize to a space of dimension {}",
                    i + 1,
                    w.dim()
                )));
            }
            special_levels.push(w);
        }
        let special = PRChain::new(base, e, special_levels)?;
        Ok(FamilyChain {
            mode,
            base: base.clone(),
            tctx,
            e,
            gens,
            levels,
            special,
            model: None,
            relations: vec![],
            trace: None,
            recipe: String::new(),
        })
    }

    /// Attaches a `t`-constant model.
    pub fn with_model(mut self, model: &DieudonneModel) -> Result<Self> {
        if model.ctx() != &self.base || model.e() != self.e {
            return Err(Error::ContextMismatch);
        }
        self.model = Some(model.clone());
        Ok(self)
    }

    pub fn with_relations(mut self, relations: Vec<Relation>) -> Self {
        self.relations = relations;
        self
    }

    pub fn with_trace(mut self, trace: DeformationTrace) -> Self {
        self.trace = Some(trace);
        self
    }

    pub fn with_recipe(mut self, name: &str) -> Self {
        self.recipe = name.to_string();
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }
    pub fn tctx(&self) -> &FieldCtx {
        &self.tctx
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// Generators of each level as supplied.
    pub fn generators(&self) -> &[Vec<Row>] {
        &self.gens
    }
    /// `levels()[i-1] = ω̃^(i)` over the coefficient ring.
    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }
    pub fn model(&self) -> Option<&DieudonneModel> {
        self.model.as_ref()
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn trace(&self) -> Option<&DeformationTrace> {
        self.trace.as_ref()
    }
    pub fn recipe(&self) -> &str {
        &self.recipe
    }

    /// The chain at `t = 0`.
    pub fn specialize(&self) -> PRChain {
        self.special.clone()
    }

    fn model_t(&self) -> Result<Option<DieudonneModel>> {
        self.model.as_ref().map(|m| m.lift_to(&self.tctx)).transpose()
    }

    /// The label of the generic fibre: exact over `K(t)`, or a certified
    /// pinch of lower bounds modulo `t^N`.
    pub fn generic_label(&self) -> Result<GenericLabel> {
        match self.mode {
            Mode::ExactRational => {
                let mut label = linear_label(&self.levels)?;
                if let Some(m) = self.model_t()? {
                    label.m1 = match m1_vanishes_levels(&m, &self.levels) {
                        Ok(true) => M1::Zero,
                        Ok(false) => M1::NonZero,
                        Err(Error::DegenerateF(_)) => M1::Unknown,
                        Err(e) => return Err(e),
                    };
                }
                Ok(GenericLabel { label, certification: Certification::Exact })
            }
            Mode::Truncated(_) => certify::certify_truncated(self),
        }
    }

    /// The label of the special fibre, with `m1` when a model is attached.
    pub fn special_label(&self) -> Result<StratumLabel> {
        stratum_label(&self.special, self.model.as_ref())
    }

    /// Checks `hodge(special) <= hodge(generic)`, `T(special) ⊇ T(generic)`
    /// and that a vanishing generic `m1` forces a vanishing special `m1`.
    pub fn semicontinuity_audit(&self) -> Result<AuditReport> {
        let special = self.special_label()?;
        let generic = self.generic_label()?.label;
        let mut problems = Vec::new();
        if !special.lambda.dominated_by(&generic.lambda)? {
            problems.push(format!("special Hodge {} exceeds generic {}", special.lambda, generic.lambda));
        }
        if !special.t.is_superset(&generic.t) {
            problems.push("special T does not contain generic T".to_string());
        }
        if generic.m1 == M1::Zero && special.m1 == M1::NonZero {
            problems.push("m1 vanishes generically but not at t = 0".to_string());
        }
        Ok(AuditReport {
            ok: problems.is_empty(),
            detail: if problems.is_empty() { "ok".into() } else { problems.join("; ") },
            special,
            generic,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.base.descriptor_json();
        v["e"] = json!(self.e);
        v["mode"] = json!(self.mode.name());
        v["prec"] = match self.mode {
            Mode::ExactRational => Value::Null,
            Mode::Truncated(n) => json!(n),
        };
        v["levels"] = Value::Array(
            self.gens
                .iter()
                .map(|g| {
                    json!({
                        "N": self.e,
                        "generators": g.iter().map(|r| row_to_json(&self.tctx, self.e, r)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        );
        if !self.recipe.is_empty() {
            v["recipe"] = json!(self.recipe);
        }
        if let Some(m) = &self.model {
            v["model"] = m.to_json();
        }
        if !self.relations.is_empty() {
            v["relations"] = Value::Array(self.relations.iter().map(Relation::to_json).collect());
        }
        if let Some(t) = &self.trace {
            v["trace"] = t.to_json(&self.tctx);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let base = FieldCtx::from_descriptor_json(&strip_kind(v))?;
        let e = v["e"].as_u64().ok_or_else(|| Error::Parse("family is missing \"e\"".into()))? as usize;
        let mode = match v["mode"].as_str() {
            Some("exact_rational") => Mode::ExactRational,
            Some("truncated") => Mode::Truncated(
                v["prec"].as_u64().ok_or_else(|| Error::Parse("truncated family is missing \"prec\"".into()))? as usize,
            ),
            _ => return Err(Error::Parse("family \"mode\" must be exact_rational or truncated".into())),
        };
        let tctx = match mode {
            Mode::ExactRational => base.rational_t(),
            Mode::Truncated(n) => base.truncated_t(n)?,
        };
        let gens = v["levels"]
            .as_array()
            .ok_or_else(|| Error::Parse("family is missing \"levels\"".into()))?
            .iter()
            .map(|l| {
                l["generators"]
                    .as_array()
                    .ok_or_else(|| Error::Parse("family level is missing \"generators\"".into()))?
                    .iter()
                    .map(|r| row_from_json(&tctx, e, r))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fam = Self::build(mode, &base, tctx, e, gens)?;
        if !v["model"].is_null() {
            fam = fam.with_model(&DieudonneModel::from_json(&v["model"])?)?;
        }
        if let Some(r) = v["recipe"].as_str() {
            fam.recipe = r.to_string();
        }
        if let Some(rs) = v["relations"].as_array() {
            fam.relations = rs.iter().map(Relation::from_json).collect::<Result<_>>()?;
        }
        Ok(fam)
    }
}

fn strip_kind(v: &Value) -> Value {
    let mut d = v.clone();
    if let Some(o) = d.as_object_mut() {
        o.remove("kind");
        o.remove("prec");
    }
    d
}

/// Rescales rows over `K(t)` and recombines them until their values at
/// `t = 0` are independent; the span is unchanged and the result specializes
/// to the flat limit of the span.
pub fn saturate(tctx: &FieldCtx, rows: &[Row]) -> Result<Vec<Row>> {
    if tctx.kind() != Kind::RationalT {
        return Err(Error::Precondition("saturation works over K(t)".into()));
    }
    let base = tctx.base();
    let mut rows: Vec<Row> = rows.iter().filter(|r| r.iter().any(|x| !tctx.is_zero(x))).cloned().collect();
    let normalize = |r: &Row| -> Result<Row> {
        let v = r.iter().filter_map(|x| tctx.valuation(x)).min().unwrap_or(0);
        if v == 0 {
            return Ok(r.clone());
        }
        r.iter().map(|x| tctx.shift_t(x, -v)).collect()
    };
    let independent = Subspace::span(tctx, rows.first().map_or(1, |r| r.len() / 2), &rows)?.dim();
    if independent != rows.len() {
        return Err(Error::DimensionMismatch("saturation needs independent rows".into()));
    }
    let mut guard = 0usize;
    loop {
        rows = rows.iter().map(normalize).collect::<Result<_>>()?;
        let at0: Vec<Row> = rows.iter().map(|r| row_specialize(tctx, r)).collect::<Result<_>>()?;
        let ker = left_kernel(&base, &at0)?;
        let Some(rel) = ker.first() else { return Ok(rows) };
        let j = rel.iter().rposition(|c| !base.is_zero(c)).expect("nonzero relation");
        let cj = base.inv(&rel[j])?;
        let mut combo = vec![tctx.zero(); rows[j].len()];
        for (c, r) in rel.iter().zip(&rows) {
            if base.is_zero(c) {
                continue;
            }
            let f = tctx.lift(&base.mul(c, &cj));
            for (x, y) in combo.iter_mut().zip(r) {
                *x = tctx.add(x, &tctx.mul(&f, y));
            }
        }
        rows[j] = combo;
        guard += 1;
        if guard > 10_000 {
            return Err(Error::Inconclusive("saturation did not terminate".into()));
        }
    }
}

/// The flat limit at `t = 0` of a subspace over `K(t)`.
pub fn flat_limit(w: &Subspace) -> Result<Subspace> {
    let rows = saturate(w.ctx(), w.basis())?;
    let base = w.ctx().base();
    let sp = rows.iter().map(|r| row_specialize(w.ctx(), r)).collect::<Result<Vec<_>>>()?;
    Subspace::span(&base, w.n(), &sp)
}

/// Every vector of a subspace over a finite field, sorted by code.
pub(crate) fn all_vectors(w: &Subspace) -> Result<Vec<Row>> {
    let ctx = w.ctx();
    let q = ctx.q() as u64;
    let count = q.checked_pow(w.dim() as u32).unwrap_or(u64::MAX);
    if count > VECTOR_BOUND {
        return Err(Error::BoundExceeded { what: "subspace size", value: count as u128, bound: VECTOR_BOUND as u128 });
    }
    let mut out = Vec::with_capacity(count as usize);
    for mut code in 0..count {
        let mut v = vec![ctx.zero(); 2 * w.n()];
        for b in w.basis() {
            let c = Scalar::Fin((code % q) as u32);
            code /= q;
            if !ctx.is_zero(&c) {
                v = v.iter().zip(b).map(|(x, y)| ctx.add(x, &ctx.mul(&c, y))).collect();
            }
        }
        out.push(v);
    }
    out.sort_by_key(|v| v.iter().map(|x| if let Scalar::Fin(c) = x { *c } else { u32::MAX }).collect::<Vec<_>>());
    Ok(out)
}

/// Lifts a chain's level bases into a coefficient context.
pub(crate) fn lifted_bases(c: &PRChain, tctx: &FieldCtx) -> Vec<Vec<Row>> {
    c.levels().iter().map(|w| w.basis().iter().map(|r| crate::umodule::row_lift(tctx, r)).collect()).collect()
}


pub(crate) fn t_times(tctx: &FieldCtx, r: &[Scalar]) -> Result<Row> {
    let t = tctx.t()?;
    Ok(r.iter().map(|x| tctx.mul(&t, x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{enumerate_chains, standard_free_chain};
    use crate::umodule::{monomial, row_add};

    fn f2() -> FieldCtx {
        FieldCtx::prime(2).unwrap()
    }

    #[test]
    fn constant_family() {
        let k = f2();
        let c = standard_free_chain(&k, 3);
        let fam = FamilyChain::constant(&c).unwrap();
        assert_eq!(fam.specialize(), c);
        let g = fam.generic_label().unwrap();
        assert!(g.is_exact());
        assert_eq!(g.label, stratum_label(&c, None).unwrap());
        assert!(fam.semicontinuity_audit().unwrap().ok);
    }

    #[test]
    fn pole_at_zero_is_rejected() {
        let k = f2();
        let kt = k.rational_t();
        let tinv = kt.inv(&kt.t().unwrap()).unwrap();
        let extra: Row = monomial(&kt, 2, 1, 1).iter().map(|x| kt.mul(x, &tinv)).collect();
        let line = row_add(&kt, &monomial(&kt, 2, 0, 1), &extra);
        let gens = vec![vec![line], vec![monomial(&kt, 2, 0, 1), monomial(&kt, 2, 1, 1)]];
        assert_eq!(FamilyChain::exact(&k, 2, gens).unwrap_err(), Error::PoleAtZero);
    }

    #[test]
    fn saturation_gives_flat_limit() {
        let k = f2();
        let kt = k.rational_t();
        let t = kt.t().unwrap();
        let a = row_add(&kt, &monomial(&kt, 2, 0, 0), &t_times(&kt, &monomial(&kt, 2, 1, 0)).unwrap());
        let b = monomial(&kt, 2, 0, 0);
        let w = Subspace::span(&kt, 2, &[a, b]).unwrap();
        let lim = flat_limit(&w).unwrap();
        let expect = Subspace::span(&k, 2, &[monomial(&k, 2, 0, 0), monomial(&k, 2, 1, 0)]).unwrap();
        assert_eq!(lim, expect);
        let _ = t;
    }

    #[test]
    fn json_round_trip() {
        let k = f2();
        for c in enumerate_chains(2, &k).unwrap() {
            let fam = FamilyChain::constant(&c).unwrap();
            let back = FamilyChain::from_json(&fam.to_json()).unwrap();
            assert_eq!(back.levels(), fam.levels());
            assert_eq!(back.specialize(), c);
        }
    }
}
