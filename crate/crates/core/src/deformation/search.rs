//! Deterministic search for a rank-one first-order family from a chain into
//! a prescribed higher stratum.

use std::collections::BTreeMap;

use super::{saturate, t_times, FamilyChain};
use crate::chains::PRChain;
use crate::error::{Error, Result};
use crate::dieudonne::DieudonneModel;
use crate::invariants::{linear_label, stratum_label, StratumLabel, M1};
use crate::umodule::{index, row_add, row_is_zero, row_lift, row_scale, solve_combination, u_mul, zero_row, Row, Subspace};

pub const DEFAULT_SEARCH_BUDGET: usize = 20_000;

/// How a level above the perturbed one is propagated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    /// Keep the constant level, or append its constant complement generator.
    Lin,
    /// Divide the perturbation of lower generators by `u`.
    Div,
    /// Take the saturated `u`-preimage of the level two below.
    Pre,
}

const STEPS: [Step; 3] = [Step::Lin, Step::Div, Step::Pre];

fn step_sequences(len: usize) -> Vec<Vec<Step>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                STEPS.iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(*s);
                    q
                })
            })
            .collect();
    }
    out
}

/// `u^{-1}` of a row whose `u^0` coefficients vanish.
fn divide_by_u(ctx: &crate::scalar::FieldCtx, n: usize, v: &[crate::scalar::Scalar]) -> Option<Row> {
    if !ctx.is_zero(&v[index(n, 0, 0)]) || !ctx.is_zero(&v[index(n, 1, 0)]) {
        return None;
    }
    let mut r = zero_row(ctx, n);
    for c in 0..2 {
        for d in 1..n {
            r[index(n, c, d - 1)] = v[index(n, c, d)].clone();
        }
    }
    Some(r)
}

fn candidate(c: &PRChain, k: usize, w: &Row, steps: &[Step]) -> Result<Option<Vec<Vec<Row>>>> {
    let base = c.ctx();
    let e = c.e();
    let kt = base.rational_t();
    let full: Vec<Subspace> = (0..=e).map(|i| c.level(i)).collect();
    let vs: Vec<Row> = (0..=e)
        .map(|l| if l == 0 { zero_row(base, e) } else { full[l].complement_vector(&full[l - 1]).expect("levels grow") })
        .collect();
    let lift = |v: &Row| row_lift(&kt, v);
    let mut levels: Vec<Vec<Row>> = (1..k).map(|l| full[l].basis().iter().map(lift).collect()).collect();
    let delta_k = t_times(&kt, &lift(w))?;
    let vt = row_add(&kt, &lift(&vs[k]), &delta_k);
    let mut cur: Vec<Row> = full[k - 1].basis().iter().map(lift).collect();
    cur.push(vt);
    levels.push(cur.clone());
    let mut deltas: BTreeMap<usize, Row> = BTreeMap::new();
    deltas.insert(k, delta_k);
    for (idx, l) in (k + 1..=e).enumerate() {
        match steps[idx] {
            Step::Div => {
                let mut basis = full[k - 1].basis().to_vec();
                basis.extend((k..l).map(|m| vs[m].clone()));
                let Some(cs) = solve_combination(base, &basis, &u_mul(base, e, &vs[l]))? else {
                    return Ok(None);
                };
                let x = &cs[full[k - 1].dim()..];
                let mut d = zero_row(&kt, e);
                for (m, xm) in (k..l).zip(x) {
                    let Some(dm) = deltas.get(&m) else { continue };
                    if base.is_zero(xm) {
                        continue;
                    }
                    let Some(sh) = divide_by_u(&kt, e, dm) else { return Ok(None) };
                    d = row_add(&kt, &d, &row_scale(&kt, &sh, &kt.lift(xm)));
                }
                cur.push(row_add(&kt, &lift(&vs[l]), &d));
                deltas.insert(l, d);
            }
            Step::Pre => {
                let below = if l >= 3 { Subspace::span(&kt, e, &levels[l - 3])? } else { Subspace::zero(&kt, e) };
                let x = below.u_preimage()?;
                if x.dim() != l {
                    return Ok(None);
                }
                cur = saturate(&kt, x.basis())?;
                let sp: Vec<Row> = cur.iter().map(|r| crate::umodule::row_specialize(&kt, r)).collect::<Result<_>>()?;
                if Subspace::span(base, e, &sp)? != full[l] {
                    return Ok(None);
                }
            }
            Step::Lin => {
                let big = Subspace::span(&kt, e, &full[l].basis().iter().map(lift).collect::<Vec<_>>())?;
                let cur_s = Subspace::span(&kt, e, &cur)?;
                if big.contains(&cur_s)? {
                    cur = full[l].basis().iter().map(lift).collect();
                } else if cur_s.contains_vec(&u_mul(&kt, e, &lift(&vs[l]))) {
                    cur.push(lift(&vs[l]));
                } else {
                    return Ok(None);
                }
            }
        }
        levels.push(cur.clone());
    }
    Ok(Some(levels))
}

/// Searches perturbations `v_k -> v_k + t w` of one level generator, with
/// `w` running over a basis of `u^{-1} ω^(k-1)`, propagated upward in every
/// combination of the three propagation rules. Returns the first exact
/// family that specializes to `c` and has generic linear label `target`.
pub fn search_witness(c: &PRChain, target: &StratumLabel, budget: usize) -> Result<FamilyChain> {
    search_witness_with_model(c, target, None, budget)
}

/// [`search_witness`] with a `t`-constant model attached to every candidate;
/// when `target.m1` is known the generic `m1` must match it as well.
pub fn search_witness_with_model(
    c: &PRChain,
    target: &StratumLabel,
    model: Option<&DieudonneModel>,
    budget: usize,
) -> Result<FamilyChain> {
    let e = c.e();
    let start = match model {
        Some(m) => stratum_label(c, Some(m))?,
        None => linear_label(c.levels())?,
    };
    let check_m1 = model.is_some() && target.m1 != M1::Unknown;
    let goal = if check_m1 { target.clone() } else { target.linear() };
    let start = if check_m1 { start } else { start.linear() };
    if !start.lt(&goal)? {
        return Err(Error::IllOrderedTarget);
    }
    let mut tried = 0usize;
    for k in 1..=e {
        let pre = c.level(k - 1).u_preimage()?;
        for steps in step_sequences(e - k) {
            for w in pre.basis() {
                if row_is_zero(c.ctx(), w) {
                    continue;
                }
                if tried >= budget {
                    return Err(Error::NotFound { tried });
                }
                tried += 1;
                let Some(gens) = candidate(c, k, w, &steps)? else { continue };
                let Ok(mut fam) = FamilyChain::exact(c.ctx(), e, gens) else { continue };
                if fam.specialize() != *c {
                    continue;
                }
                if let Some(m) = model {
                    fam = fam.with_model(m)?;
                }
                let got = fam.generic_label()?.label;
                let got = if check_m1 { got } else { got.linear() };
                if got == goal {
                    return Ok(fam.with_recipe("search"));
                }
            }
        }
    }
    Err(Error::NotFound { tried })
}
