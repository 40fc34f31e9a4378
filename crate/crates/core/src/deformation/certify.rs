//! Generic labels of truncated families: certified lower bounds modulo
//! `t^N`, narrowed to a single stratum using the nonempty strata and
//! semicontinuity.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{Certification, FamilyChain, GenericLabel, Mode, Relation};
use crate::chains::enumerate_chains;
use crate::dieudonne::f_one_levels;
use crate::error::{Error, Result};
use crate::invariants::{format_set, level, linear_label, HodgePair, StratumLabel, M1};
use crate::scalar::FieldCtx;
use crate::umodule::{row_is_zero, u_mul, u_pow_mul, Row, Subspace};

/// Evidence behind a bounded generic label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub precision: usize,
    pub hodge_lower_bound: HodgePair,
    /// Indices `i >= 2` with `m_i` certified nonzero.
    pub nonzero: BTreeSet<usize>,
    /// Indices `i >= 2` with `m_i = 0` by construction (verified).
    pub pinned: BTreeSet<usize>,
    pub top_constant: bool,
    pub group_translate: bool,
    /// Smallest `k` such that `ω^(1) ≠ F^(1)` is visible modulo `t^k`.
    pub m1_nonzero_order: Option<usize>,
    pub m1_pinned: bool,
    /// Nonempty strata ruled out, with the reason.
    pub excluded: Vec<(StratumLabel, String)>,
}

impl BoundCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "bounded",
            "precision": self.precision,
            "hodge_lower_bound": [self.hodge_lower_bound.i, self.hodge_lower_bound.j],
            "nonzero": self.nonzero.iter().collect::<Vec<_>>(),
            "pinned": self.pinned.iter().collect::<Vec<_>>(),
            "top_constant": self.top_constant,
            "group_translate": self.group_translate,
            "m1_nonzero_order": self.m1_nonzero_order,
            "m1_pinned": self.m1_pinned,
            "excluded": self.excluded.iter().map(|(l, r)| json!({"label": l.code(), "reason": r})).collect::<Vec<_>>(),
        })
    }
}

/// The linear labels `(λ, T)` realized by some chain over `ctx`.
pub fn nonempty_linear_labels(e: usize, ctx: &FieldCtx) -> Result<BTreeSet<StratumLabel>> {
    enumerate_chains(e, ctx)?.iter().map(|c| linear_label(c.levels())).collect()
}

/// Smallest `k` with some entry of `row` nonzero modulo `t^k`.
fn order_of(ctx: &FieldCtx, row: &[crate::scalar::Scalar]) -> Option<usize> {
    row.iter().filter_map(|x| ctx.valuation(x)).min().map(|v| v as usize + 1)
}

fn level_is_constant(w: &Subspace) -> bool {
    let ctx = w.ctx();
    w.basis().iter().all(|r| r.iter().all(|x| is_constant(ctx, x)))
}

fn is_constant(ctx: &FieldCtx, x: &crate::scalar::Scalar) -> bool {
    match ctx.coefficients(x) {
        Ok(c) => c.iter().skip(1).all(|&d| d == 0),
        Err(_) => false,
    }
}

pub(super) fn certify_truncated(fam: &FamilyChain) -> Result<GenericLabel> {
    let Mode::Truncated(n) = fam.mode() else {
        return Err(Error::Precondition("bounded certification applies to truncated families".into()));
    };
    let ctx = fam.tctx();
    let e = fam.e();
    let levels = fam.levels();
    let special = fam.special_label()?;
    let special_lin = special.linear();

    let top = &levels[e - 1];
    let mut s_lb = 0;
    for s in 1..=e {
        if top.basis().iter().any(|r| !row_is_zero(ctx, &u_pow_mul(ctx, e, r, s - 1))) {
            s_lb = s;
        }
    }
    let s_lb = s_lb.max(e.div_ceil(2));
    let hodge_lb = HodgePair { i: s_lb, j: e - s_lb };

    let mut nonzero = BTreeSet::new();
    for i in 2..=e {
        let low = level(levels, i - 2);
        let hit = levels[i - 1].basis().iter().any(|r| !row_is_zero(ctx, &low.reduce(&u_mul(ctx, e, r))));
        if hit {
            nonzero.insert(i);
        }
    }

    let mut pinned = BTreeSet::new();
    let mut top_constant = false;
    let mut group_translate = false;
    let mut m1_claim = false;
    for rel in fam.relations() {
        match rel {
            Relation::MiPinned(i) => {
                if *i < 2 || *i > e || nonzero.contains(i) {
                    return Err(Error::Inconclusive(format!("claimed relation {} fails", rel.describe())));
                }
                pinned.insert(*i);
            }
            Relation::LevelConstant(i) => {
                if *i == 0 || *i > e || !level_is_constant(&levels[i - 1]) {
                    return Err(Error::Inconclusive(format!("claimed relation {} fails", rel.describe())));
                }
                if *i == e {
                    top_constant = true;
                }
            }
            Relation::GroupTranslate => group_translate = true,
            Relation::M1Pinned => m1_claim = true,
        }
    }

    let (m1, m1_nonzero_order, m1_pinned) = match fam.model() {
        None => (M1::Unknown, None, false),
        Some(model) => {
            let mt = model.lift_to(ctx)?;
            match f_one_levels(&mt, levels) {
                Ok(f1) if f1.dim() == 1 => {
                    let residual: Vec<Row> = levels[0].basis().iter().map(|r| f1.reduce(r)).collect();
                    let order = residual.iter().filter_map(|r| order_of(ctx, r)).min();
                    match order {
                        Some(k) => (M1::NonZero, Some(k), false),
                        None if m1_claim => (M1::Zero, None, true),
                        None => (M1::Unknown, None, false),
                    }
                }
                Ok(_) | Err(Error::DegenerateF(_)) => {
                    if m1_claim {
                        return Err(Error::DegenerateF("F^(1) is not a line along the family".into()));
                    }
                    (M1::Unknown, None, false)
                }
                Err(err) => return Err(err),
            }
        }
    };
    if m1_claim && !m1_pinned {
        return Err(Error::Inconclusive("claimed relation ω^(1) = F^(1) fails".into()));
    }

    let mut cert = BoundCertificate {
        precision: n,
        hodge_lower_bound: hodge_lb,
        nonzero: nonzero.clone(),
        pinned: pinned.clone(),
        top_constant,
        group_translate,
        m1_nonzero_order,
        m1_pinned,
        excluded: vec![],
    };

    if group_translate {
        let label = special_lin.with_m1(m1);
        return Ok(GenericLabel { label, certification: Certification::Bounded(cert) });
    }

    let table = nonempty_linear_labels(e, fam.base())?;
    let floor = if special.lambda.i > hodge_lb.i { special.lambda } else { hodge_lb };
    let mut survivors = Vec::new();
    for cand in table {
        let reason = if !floor.dominated_by(&cand.lambda)? {
            Some(format!("λ below the certified lower bound {floor}"))
        } else if top_constant && cand.lambda != special.lambda {
            Some("top level is constant, so λ is fixed".to_string())
        } else if !special.t.is_superset(&cand.t) {
            Some(format!("T not inside the special T {}", format_set(&special.t)))
        } else if let Some(i) = cand.t.intersection(&nonzero).next() {
            Some(format!("m_{i} certified nonzero modulo t^{n}"))
        } else if let Some(i) = pinned.difference(&cand.t).next() {
            Some(format!("m_{i} vanishes by construction"))
        } else {
            None
        };
        match reason {
            Some(r) => cert.excluded.push((cand, r)),
            None => survivors.push(cand),
        }
    }
    if survivors.len() != 1 {
        return Err(Error::AllMinorsVanish(n));
    }
    let label = survivors.pop().unwrap().with_m1(m1);
    Ok(GenericLabel { label, certification: Certification::Bounded(cert) })
}
