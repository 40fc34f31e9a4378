//! Constancy of the number of chains over each top lattice, per Hodge pair.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::census::lattices_by_hodge;
use super::fit::{degree_fit, DegreeFit};
use crate::chains::fiber_chains;
use crate::error::Result;
use crate::invariants::{adm_poset, HodgePair};
use crate::scalar::FieldCtx;

/// Fibre sizes over the lattices of one Hodge pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGroup {
    pub lattices: u64,
    /// Fibre size → number of lattices with that fibre size.
    pub sizes: BTreeMap<u64, u64>,
}

impl FiberGroup {
    pub fn constant(&self) -> Option<u64> {
        (self.sizes.len() == 1).then(|| *self.sizes.keys().next().unwrap())
    }
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub e: usize,
    pub q: u32,
    pub groups: BTreeMap<HodgePair, FiberGroup>,
    /// Nonconstant groups, and `(e,0)` fibres other than 1.
    pub exceptions: Vec<String>,
}

impl FiberReport {
    pub fn ok(&self) -> bool {
        self.exceptions.is_empty()
    }

    /// Rows `e, q, lambda, lattices, fiber` (fibre `*` when not constant).
    pub fn csv_rows(&self) -> Vec<[String; 5]> {
        self.groups
            .iter()
            .map(|(l, g)| {
                [
                    self.e.to_string(),
                    self.q.to_string(),
                    l.to_string(),
                    g.lattices.to_string(),
                    g.constant().map_or("*".to_string(), |c| c.to_string()),
                ]
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e,
            "q": self.q,
            "groups": self.groups.iter().map(|(l, g)| json!({
                "lambda": [l.i, l.j],
                "lattices": g.lattices,
                "fiber": g.constant(),
                "sizes": g.sizes.iter().map(|(s, n)| json!([s, n])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "exceptions": self.exceptions,
        })
    }
}

/// Enumerates every lattice (top of some chain) and the chains above it.
pub fn fiber_constancy(e: usize, ctx: &FieldCtx) -> Result<FiberReport> {
    let lattices = lattices_by_hodge(e, ctx)?;
    let mut groups = BTreeMap::new();
    let mut exceptions = Vec::new();
    for (lambda, ws) in lattices {
        let sizes: Vec<u64> = ws.par_iter().map(|w| fiber_chains(w, e).map(|v| v.len() as u64)).collect::<Result<_>>()?;
        let mut hist = BTreeMap::new();
        for s in sizes {
            *hist.entry(s).or_insert(0u64) += 1;
        }
        let g = FiberGroup { lattices: ws.len() as u64, sizes: hist };
        match g.constant() {
            None => exceptions.push(format!("λ = {lambda}: fibre sizes {:?}", g.sizes)),
            Some(c) if lambda == (HodgePair { i: e, j: 0 }) && c != 1 => {
                exceptions.push(format!("λ = {lambda}: fibre size {c}, expected 1"))
            }
            _ => {}
        }
        groups.insert(lambda, g);
    }
    Ok(FiberReport { e, q: ctx.q(), groups, exceptions })
}

/// Cross-`q` degree of the constant fibre size for each Hodge pair.
#[derive(Clone, Debug)]
pub struct FiberDegree {
    pub lambda: HodgePair,
    pub sizes: BTreeMap<u32, u64>,
    pub fit: DegreeFit,
    pub expected: usize,
}

impl FiberDegree {
    pub fn ok(&self) -> bool {
        self.fit.certifies_degree(self.expected)
    }
}

/// Fits the constant fibre size across the given reports (one per `q`)
/// against `(e - i + j) / 2`. Pairs with a nonconstant fibre are skipped.
pub fn fiber_degrees(reports: &[FiberReport]) -> Result<Vec<FiberDegree>> {
    let Some(first) = reports.first() else { return Ok(vec![]) };
    let poset = adm_poset(first.e);
    let mut out = Vec::new();
    for lambda in first.groups.keys() {
        let sizes: BTreeMap<u32, u64> =
            reports.iter().filter_map(|r| Some((r.q, r.groups.get(lambda)?.constant()?))).collect();
        if sizes.len() != reports.len() {
            continue;
        }
        out.push(FiberDegree { lambda: *lambda, fit: degree_fit(&sizes)?, sizes, expected: poset.dim_fiber(lambda) });
    }
    Ok(out)
}
