//! Truncated mod-p Dieudonné models: a sigma-semilinear Frobenius on `E_e`,
//! the line `F^(1) = F((u^{-1} ω^(e-1))^(p))` and the vanishing of `m_1`,
//! which holds iff `ω^(1) = F^(1)`.

use serde_json::{json, Value};

use crate::chains::PRChain;
use crate::error::{Error, Result};
use crate::invariants::{level, stratum_label, HodgePair, StratumLabel};
use crate::scalar::{FieldCtx, Scalar};
use crate::umodule::{self, monomial, Row, Subspace};

/// Frobenius `F(v) = M · σ(v)`, where `σ` acts coefficientwise and `M` is a
/// 2×2 matrix over `K[u]/u^e` acting on column vectors `(v_1, v_2)^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DieudonneModel {
    ctx: FieldCtx,
    e: usize,
    m: [Vec<Scalar>; 4],
}

impl DieudonneModel {
    /// Entries `[[a, b], [c, d]]` as coefficient lists in `u`, low first.
    pub fn new(ctx: &FieldCtx, e: usize, entries: [Vec<Scalar>; 4]) -> Result<Self> {
        let m = entries.map(|mut p| {
            p.resize(e, ctx.zero());
            p.truncate(e);
            p
        });
        for p in &m {
            for x in p {
                ctx.check(x)?;
            }
        }
        Ok(DieudonneModel { ctx: ctx.clone(), e, m })
    }

    /// The normal form `[[u^m, c u^2], [u^2, 0]]`.
    pub fn normal_form(ctx: &FieldCtx, e: usize, m: usize, c: &Scalar) -> Result<Self> {
        let mono = |k: usize, x: Scalar| -> Vec<Scalar> {
            let mut p = vec![ctx.zero(); e];
            if k < e {
                p[k] = x;
            }
            p
        };
        Self::new(ctx, e, [mono(m, ctx.one()), mono(2, c.clone()), mono(2, ctx.one()), vec![]])
    }

    pub fn zero(ctx: &FieldCtx, e: usize) -> Self {
        Self::new(ctx, e, [vec![], vec![], vec![], vec![]]).expect("zero model")
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn entries(&self) -> &[Vec<Scalar>; 4] {
        &self.m
    }

    /// The same matrix viewed over a `t`-extension of its field.
    pub fn lift_to(&self, target: &FieldCtx) -> Result<Self> {
        if &self.ctx == target {
            return Ok(self.clone());
        }
        if !self.ctx.is_finite() || target.base() != self.ctx {
            return Err(Error::ContextMismatch);
        }
        let m = self.m.clone().map(|p| p.iter().map(|x| target.lift(x)).collect());
        Ok(DieudonneModel { ctx: target.clone(), e: self.e, m })
    }

    fn pmul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ctx = &self.ctx;
        let mut r = vec![ctx.zero(); self.e];
        for (i, x) in a.iter().enumerate() {
            if ctx.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.e - i) {
                r[i + j] = ctx.add(&r[i + j], &ctx.mul(x, y));
            }
        }
        r
    }

    /// `F(v)`.
    pub fn apply(&self, v: &[Scalar]) -> Row {
        let ctx = &self.ctx;
        let e = self.e;
        let s = umodule::row_frobenius(ctx, v);
        let (x, y) = s.split_at(e);
        let add = |p: Vec<Scalar>, q: Vec<Scalar>| -> Vec<Scalar> { p.iter().zip(&q).map(|(a, b)| ctx.add(a, b)).collect() };
        let first = add(self.pmul(&self.m[0], x), self.pmul(&self.m[1], y));
        let second = add(self.pmul(&self.m[2], x), self.pmul(&self.m[3], y));
        umodule::from_coords(ctx, e, &first, &second)
    }

    pub fn to_json(&self) -> Value {
        let ent = |p: &Vec<Scalar>| -> Value { Value::Array(p.iter().map(|x| self.ctx.to_json(x)).collect()) };
        let mut v = self.ctx.descriptor_json();
        v["e"] = json!(self.e);
        v["F"] = json!([[ent(&self.m[0]), ent(&self.m[1])], [ent(&self.m[2]), ent(&self.m[3])]]);
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ctx = FieldCtx::from_descriptor_json(v)?;
        let e = v["e"].as_u64().ok_or_else(|| Error::Parse("model is missing \"e\"".into()))? as usize;
        let entry = |r: usize, c: usize| -> Result<Vec<Scalar>> {
            v["F"][r][c]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("model entry F[{r}][{c}] missing")))?
                .iter()
                .map(|x| ctx.from_json(x))
                .collect()
        };
        Self::new(&ctx, e, [entry(0, 0)?, entry(0, 1)?, entry(1, 0)?, entry(1, 1)?])
    }
}

fn model_for(model: &DieudonneModel, levels: &[Subspace]) -> Result<DieudonneModel> {
    let ctx = levels[0].ctx();
    if model.e != levels.len() || levels[0].n() != model.e {
        return Err(Error::DimensionMismatch("model and chain have different e".into()));
    }
    model.lift_to(ctx)
}

/// `F^(1)` of a chain given by its levels (any coefficient context).
pub fn f_one_levels(model: &DieudonneModel, levels: &[Subspace]) -> Result<Subspace> {
    let m = model_for(model, levels)?;
    let e = levels.len();
    let w = level(levels, e - 1).u_preimage()?;
    let tw = w.frobenius_twist()?;
    match tw.map(|r| m.apply(r)) {
        Err(Error::NonUnitPivot) => Err(Error::DegenerateF("F^(1) is not a free direct summand".into())),
        other => other,
    }
}

pub fn f_one(model: &DieudonneModel, c: &PRChain) -> Result<Subspace> {
    f_one_levels(model, c.levels())
}

/// Whether `ω^(1) = F^(1)`; requires `F^(1)` to be a line.
pub fn m1_vanishes_levels(model: &DieudonneModel, levels: &[Subspace]) -> Result<bool> {
    let f1 = f_one_levels(model, levels)?;
    if f1.dim() != 1 {
        return Err(Error::DegenerateF(format!("dim F^(1) = {}, expected 1", f1.dim())));
    }
    Ok(f1 == levels[0])
}

pub fn m1_vanishes(model: &DieudonneModel, c: &PRChain) -> Result<bool> {
    m1_vanishes_levels(model, c.levels())
}

/// A model together with a chain and the data computed from it.
#[derive(Clone, Debug)]
pub struct ModelWitness {
    pub model: DieudonneModel,
    pub chain: PRChain,
    pub f_one: Subspace,
    pub label: StratumLabel,
    pub m1_vanishes: bool,
}

impl ModelWitness {
    fn build(model: DieudonneModel, chain: PRChain) -> Result<Self> {
        let f = f_one(&model, &chain)?;
        let m1 = f.dim() == 1 && f == chain.levels()[0];
        let label = stratum_label(&chain, Some(&model))?;
        Ok(ModelWitness { model, chain, f_one: f, label, m1_vanishes: m1 })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model.to_json(),
            "chain": self.chain.to_json(),
            "f_one": self.f_one.to_json(),
            "f_one_rendered": format!("{:?}", self.f_one),
            "label": self.label.to_json(),
            "m1_vanishes": self.m1_vanishes,
        })
    }
}

fn check_normal_form_args(m: usize, c: &Scalar, ctx: &FieldCtx) -> Result<()> {
    if m < 2 {
        return Err(Error::Precondition(format!("the normal form needs m >= 2, got {m}")));
    }
    if !ctx.is_finite() {
        return Err(Error::Precondition("the normal form is built over a finite field".into()));
    }
    ctx.check(c)?;
    if !ctx.is_unit(c) {
        return Err(Error::Precondition("c must be a unit".into()));
    }
    Ok(())
}

/// The e = 4 normal-form model `[[u^m, c u^2], [u^2, 0]]` with the chain
/// `<u^3 e2> ⊂ <u^3 e1, u^3 e2> ⊂ <u^3 e1, u^2 e2> ⊂ <u^2 e1, u^2 e2>`.
/// The returned record reports `F^(1)` and whether `m_1` vanishes as computed.
pub fn ag_witness(m: usize, c: &Scalar, ctx: &FieldCtx) -> Result<ModelWitness> {
    check_normal_form_args(m, c, ctx)?;
    let e = 4;
    let model = DieudonneModel::normal_form(ctx, e, m, c)?;
    let mo = |comp, deg| monomial(ctx, e, comp, deg);
    let chain = PRChain::from_module_generators(
        ctx,
        e,
        &[vec![mo(1, 3)], vec![mo(0, 3), mo(1, 3)], vec![mo(0, 3), mo(1, 2)], vec![mo(0, 2), mo(1, 2)]],
    )?;
    let w = ModelWitness::build(model, chain)?;
    let expected = StratumLabel::new(HodgePair { i: 2, j: 2 }, [2, 3, 4]);
    if w.label.linear() != expected {
        return Err(Error::InvalidChain(format!("normal-form chain has label {}", w.label)));
    }
    Ok(w)
}

/// The chains with label `((2,2), {2,3,4})` are `ω^(1) = <u^3 l>`,
/// `ω^(2) = E[u]`, `ω^(3) = u^{-1} ω^(1)`, `ω^(4) = E[u^2]` for a line `l`.
/// Returns the first one (lines ordered `(1, x)` by `x`, then `(0, 1)`) with
/// `ω^(1) = F^(1)` for the normal-form model.
pub fn ag_fixed_point_witness(m: usize, c: &Scalar, ctx: &FieldCtx) -> Result<ModelWitness> {
    check_normal_form_args(m, c, ctx)?;
    let e = 4;
    let model = DieudonneModel::normal_form(ctx, e, m, c)?;
    let mut dirs: Vec<(Scalar, Scalar)> = (0..ctx.q()).map(|x| (ctx.one(), Scalar::Fin(x))).collect();
    dirs.push((ctx.zero(), ctx.one()));
    let mut tried = 0;
    for (a, b) in dirs {
        tried += 1;
        let mut l = umodule::zero_row(ctx, e);
        l[umodule::index(e, 0, 3)] = a;
        l[umodule::index(e, 1, 3)] = b;
        let w1 = Subspace::span(ctx, e, &[l])?;
        let levels = vec![
            w1.clone(),
            Subspace::kernel_u_pow(ctx, e, 1),
            w1.u_preimage()?,
            Subspace::kernel_u_pow(ctx, e, 2),
        ];
        let chain = PRChain::new(ctx, e, levels)?;
        if let Ok(true) = m1_vanishes(&model, &chain) {
            return ModelWitness::build(model, chain);
        }
    }
    Err(Error::NotFound { tried })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semilinearity() {
        let k = FieldCtx::with_order(4).unwrap();
        let model = DieudonneModel::normal_form(&k, 4, 2, &Scalar::Fin(1)).unwrap();
        let c = Scalar::Fin(2);
        let v: Row = (0..8).map(|i| Scalar::Fin((i * 3 % 4) as u32)).collect();
        let lhs = model.apply(&umodule::row_scale(&k, &v, &c));
        let rhs = umodule::row_scale(&k, &model.apply(&v), &k.frobenius(&c));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_model_is_degenerate() {
        let k = FieldCtx::prime(2).unwrap();
        let w = ag_witness(2, &Scalar::Fin(1), &k).unwrap();
        let z = DieudonneModel::zero(&k, 4);
        assert_eq!(f_one(&z, &w.chain).unwrap().dim(), 0);
        assert!(matches!(m1_vanishes(&z, &w.chain), Err(Error::DegenerateF(_))));
    }

    #[test]
    fn normal_form_arguments() {
        let k = FieldCtx::prime(2).unwrap();
        assert!(matches!(ag_witness(1, &Scalar::Fin(1), &k), Err(Error::Precondition(_))));
        assert!(matches!(ag_witness(2, &Scalar::Fin(0), &k), Err(Error::Precondition(_))));
    }
}
