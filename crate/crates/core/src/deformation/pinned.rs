//! Truncated families that keep `ω^(1) = F^(1)` (so `m_1 = 0`) while moving
//! the linear invariants, and the translate that makes `m_1` nonzero.

use super::linear::aux_candidates;
use super::{lifted_bases, t_times, FamilyChain, GenericLabel, Relation, DEFAULT_PRECISION, MAX_PRECISION};
use crate::chains::PRChain;
use crate::dieudonne::{f_one_levels, m1_vanishes, DieudonneModel};
use crate::error::{Error, Result};
use crate::invariants::{linear_label, HodgePair, StratumLabel, M1};
use crate::scalar::{FieldCtx, Scalar};
use crate::umodule::{index, row_add, row_lift, solve_combination, u_mul, zero_row, Row, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinnedVariant {
    /// `((2,2),{2,3,4})`, `m_1 = 0` to generic `((2,2),{3})`, `m_1 = 0`.
    Collapse,
    /// `((2,2),{3})`, `m_1 = 0` to generic `((3,1),{3})`, `m_1 = 0`.
    Raise,
    /// `(λ, T)` with `{2,3} ⊆ T`, `m_1 = 0` to generic `(λ, T \ {3})`, `m_1 = 0`:
    /// `ω^(3) = E[u] ⊕ <v_3 + t w>` and `ω^(1)` re-pinned to `F^(1)`.
    MoveThird,
}

impl PinnedVariant {
    /// Whether the variant applies to a chain with linear label `source`.
    pub fn accepts(&self, source: &StratumLabel) -> bool {
        let s = source.linear();
        match self {
            PinnedVariant::Collapse => s == StratumLabel::new(HodgePair { i: 2, j: 2 }, [2, 3, 4]),
            PinnedVariant::Raise => s == StratumLabel::new(HodgePair { i: 2, j: 2 }, [3]),
            PinnedVariant::MoveThird => s.t.contains(&2) && s.t.contains(&3),
        }
    }

    /// The generic label the variant produces from `source`.
    pub fn target(&self, source: &StratumLabel) -> StratumLabel {
        match self {
            PinnedVariant::Collapse => StratumLabel::new(HodgePair { i: 2, j: 2 }, [3]).with_m1(M1::Zero),
            PinnedVariant::Raise => StratumLabel::new(HodgePair { i: 3, j: 1 }, [3]).with_m1(M1::Zero),
            PinnedVariant::MoveThird => {
                let mut t = source.t.clone();
                t.remove(&3);
                StratumLabel { lambda: source.lambda, t, m1: M1::Zero }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PinnedVariant::Collapse => "pinned-collapse",
            PinnedVariant::Raise => "pinned-raise",
            PinnedVariant::MoveThird => "pinned-move-third",
        }
    }
}

fn third_level(w1: &Subspace) -> Result<Subspace> {
    let w3 = w1.u_preimage()?;
    if w3.dim() != 3 {
        return Err(Error::Precondition(format!("u^{{-1}} ω^(1) has rank {}, expected 3", w3.dim())));
    }
    Ok(w3)
}

/// `u^{-1} v` for `v ∈ E[u^{n-1}]`, dropping the `u^0` coefficients.
fn u_div(k: &FieldCtx, n: usize, v: &[Scalar]) -> Row {
    let mut out = zero_row(k, n);
    for c in 0..2 {
        for d in 1..n {
            out[index(n, c, d - 1)] = v[index(n, c, d)].clone();
        }
    }
    out
}

/// The vector of `x` with the same pivot coordinates as `g`.
fn projection_lift(x: &Subspace, g: &[Scalar]) -> Row {
    let ctx = x.ctx();
    let mut out = vec![ctx.zero(); g.len()];
    for (b, &p) in x.basis().iter().zip(x.pivots()) {
        let c = &g[p];
        if ctx.is_zero(c) {
            continue;
        }
        out = out.iter().zip(b).map(|(s, y)| ctx.add(s, &ctx.mul(c, y))).collect();
    }
    out
}

fn check_pair(model: &DieudonneModel, c: &PRChain) -> Result<()> {
    if c.e() != 4 || model.e() != 4 {
        return Err(Error::Precondition("the model recipes need e = 4".into()));
    }
    if model.ctx() != c.ctx() {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// The recipe at precision `t^n`, built by iterating
/// `ω^(1) <- F^(1)(current chain)` to a fixed point modulo `t^n`.
pub fn pinned_recipe_at(model: &DieudonneModel, c: &PRChain, variant: PinnedVariant, n: usize) -> Result<FamilyChain> {
    check_pair(model, c)?;
    let label = linear_label(c.levels())?;
    if !variant.accepts(&label) {
        return Err(Error::Precondition(format!("{} does not apply to label {label}", variant.name())));
    }
    if !m1_vanishes(model, c)? {
        return Err(Error::Precondition(format!("{} needs m1 = 0", variant.name())));
    }
    let k = c.ctx();
    let e = 4;
    let r = k.truncated_t(n)?;
    let mr = model.lift_to(&r)?;
    let lift = |v: &Row| row_lift(&r, v);
    let v2 = c.level(2).complement_vector(&c.level(1)).expect("levels grow by one");
    let base_gens = lifted_bases(c, &r);
    let constant = |i: usize| Subspace::span(&r, e, &base_gens[i - 1]);
    let mut top_constant = variant == PinnedVariant::Collapse;
    let assemble: Box<dyn Fn(&Subspace) -> Result<Vec<Subspace>>> = match variant {
        PinnedVariant::Collapse => {
            let alpha = aux_candidates(&c.level(1).u_preimage()?, &Subspace::kernel_u_pow(k, e, 1))?
                .into_iter()
                .next()
                .ok_or_else(|| Error::NoValidAuxVector("u^{-1} ω^(1) lies in E[u]".into()))?;
            let g0 = row_add(&r, &lift(&v2), &t_times(&r, &lift(&alpha))?);
            let r = r.clone();
            Box::new(move |w1: &Subspace| {
                let w3 = third_level(w1)?;
                let w2 = w1.extend(&[projection_lift(&w3, &g0)])?;
                Ok(vec![w1.clone(), w2, w3, Subspace::kernel_u_pow(&r, e, 2)])
            })
        }
        PinnedVariant::Raise => {
            let v4 = c.level(4).complement_vector(&c.level(3)).expect("levels grow by one");
            let alpha = aux_candidates(&c.level(3).u_preimage()?, &Subspace::kernel_u_pow(k, e, 2))?
                .into_iter()
                .next()
                .ok_or_else(|| Error::NoValidAuxVector("u^{-1} ω^(3) lies in E[u^2]".into()))?;
            let g0 = lift(&v2);
            let h0 = row_add(&r, &lift(&v4), &t_times(&r, &lift(&alpha))?);
            Box::new(move |w1: &Subspace| {
                let w3 = third_level(w1)?;
                let w2 = w1.extend(&[projection_lift(&w3, &g0)])?;
                let w4 = w3.extend(&[projection_lift(&w3.u_preimage()?, &h0)])?;
                Ok(vec![w1.clone(), w2, w3, w4])
            })
        }
        PinnedVariant::MoveThird => {
            let v3 = c.level(3).complement_vector(&c.level(2)).expect("levels grow by one");
            let v4 = c.level(4).complement_vector(&c.level(3)).expect("levels grow by one");
            let w = aux_candidates(&Subspace::kernel_u_pow(k, e, 2), &c.level(1).u_preimage()?)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::NoValidAuxVector("E[u^2] lies in u^{-1} ω^(1)".into()))?;
            let w2 = constant(2)?;
            let w3 = w2.extend(&[row_add(&r, &lift(&v3), &t_times(&r, &lift(&w))?)])?;
            let top = constant(4)?;
            top_constant = top.contains(&w3)?;
            let w4 = if top_constant {
                top
            } else {
                let mut basis = c.level(2).basis().to_vec();
                basis.push(v3.clone());
                let a = solve_combination(k, &basis, &u_mul(k, e, &v4))?
                    .ok_or_else(|| Error::ContainmentViolated("u v_4 is outside ω^(3)".into()))?
                    .pop()
                    .expect("nonempty basis");
                let delta: Row = u_div(k, e, &w).iter().map(|x| k.mul(&a, x)).collect();
                w3.extend(&[row_add(&r, &lift(&v4), &t_times(&r, &lift(&delta))?)])?
            };
            Box::new(move |w1: &Subspace| Ok(vec![w1.clone(), w2.clone(), w3.clone(), w4.clone()]))
        }
    };
    let mut w1 = constant(1)?;
    let mut levels = None;
    for _ in 0..=n + 1 {
        let lv = assemble(&w1)?;
        let f1 = f_one_levels(&mr, &lv)?;
        if f1 == w1 {
            levels = Some(lv);
            break;
        }
        w1 = f1;
    }
    let levels = levels.ok_or_else(|| Error::Inconclusive("ω^(1) = F^(1) did not stabilize".into()))?;
    let gens = levels.iter().map(|w| w.basis().to_vec()).collect();
    let relations = match variant {
        PinnedVariant::Collapse => vec![Relation::M1Pinned, Relation::MiPinned(3), Relation::LevelConstant(4)],
        PinnedVariant::Raise => vec![Relation::M1Pinned, Relation::MiPinned(3)],
        PinnedVariant::MoveThird => {
            let mut rel = vec![Relation::M1Pinned, Relation::MiPinned(2), Relation::LevelConstant(2)];
            if top_constant {
                rel.push(Relation::LevelConstant(4));
                if label.t.contains(&4) {
                    rel.push(Relation::MiPinned(4));
                }
            }
            rel
        }
    };
    let fam = FamilyChain::truncated(k, n, e, gens)?
        .with_model(model)?
        .with_relations(relations)
        .with_recipe(variant.name());
    if fam.specialize() != *c {
        return Err(Error::Inconclusive(format!("{} does not specialize to its input", variant.name())));
    }
    Ok(fam)
}

fn with_retries(build: impl Fn(usize) -> Result<FamilyChain>) -> Result<(FamilyChain, GenericLabel)> {
    let mut n = DEFAULT_PRECISION;
    while n <= MAX_PRECISION {
        let fam = build(n)?;
        match fam.generic_label() {
            Ok(g) => return Ok((fam, g)),
            Err(Error::AllMinorsVanish(_)) => n *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive(format!("no certificate up to precision t^{MAX_PRECISION}")))
}

/// [`pinned_recipe_at`] with its certified generic label, doubling the
/// precision from `t^16` up to `t^128` while the certificate is ambiguous.
pub fn pinned_recipe(
    model: &DieudonneModel,
    c: &PRChain,
    variant: PinnedVariant,
) -> Result<(FamilyChain, GenericLabel)> {
    let (fam, g) = with_retries(|n| pinned_recipe_at(model, c, variant, n))?;
    let want = variant.target(&linear_label(c.levels())?);
    if g.label != want {
        return Err(Error::Inconclusive(format!("{} certified {} instead of {want}", variant.name(), g.label)));
    }
    Ok((fam, g))
}

/// The translate `(1 + tA) · c` over `K[t]/t^n`, `A` an elementary matrix
/// chosen so that `ω^(1)` moves at first order.
pub fn invert_m1_at(model: &DieudonneModel, c: &PRChain, n: usize) -> Result<FamilyChain> {
    check_pair(model, c)?;
    if !m1_vanishes(model, c)? {
        return Err(Error::Precondition("m1 is already nonzero".into()));
    }
    let k: &FieldCtx = c.ctx();
    let e = c.e();
    let r = k.truncated_t(n)?;
    let t = r.t()?;
    let line = &c.levels()[0].basis()[0];
    let second = (0..e).any(|d| !k.is_zero(&line[index(e, 1, d)]));
    let (from, to) = if second { (1, 0) } else { (0, 1) };
    let act = |v: &Row| -> Row {
        let mut out = v.clone();
        for d in 0..e {
            let add = r.mul(&t, &v[index(e, from, d)]);
            out[index(e, to, d)] = r.add(&out[index(e, to, d)], &add);
        }
        out
    };
    let gens: Vec<Vec<Row>> = lifted_bases(c, &r).iter().map(|g| g.iter().map(act).collect()).collect();
    let fam = FamilyChain::truncated(k, n, e, gens)?
        .with_model(model)?
        .with_relations(vec![Relation::GroupTranslate])
        .with_recipe("invert-m1");
    if fam.specialize() != *c {
        return Err(Error::Inconclusive("translate does not specialize to its input".into()));
    }
    Ok(fam)
}

/// [`invert_m1_at`] with its certificate: constant linear label and `m_1`
/// nonzero away from `t = 0`.
pub fn invert_m1(model: &DieudonneModel, c: &PRChain) -> Result<(FamilyChain, GenericLabel)> {
    let (fam, g) = with_retries(|n| invert_m1_at(model, c, n))?;
    if g.label.m1 != M1::NonZero {
        return Err(Error::Inconclusive("ω^(1) did not move off F^(1)".into()));
    }
    Ok((fam, g))
}
