//! Products of censuses over several factors with a common base field.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::census::{same_field, Census};
use crate::error::{Error, Result};
use crate::invariants::{adm_poset, HodgePair, StratumLabel};
use crate::scalar::FieldCtx;

/// Counts over tuples of labels, one entry per factor.
#[derive(Clone, Debug)]
pub struct ProductCensus {
    pub es: Vec<usize>,
    pub ctx: FieldCtx,
    pub counts: BTreeMap<Vec<StratumLabel>, u64>,
    pub total: u64,
}

pub fn product_census(factors: &[Census]) -> Result<ProductCensus> {
    let first = factors.first().ok_or_else(|| Error::Precondition("a product needs at least one factor".into()))?;
    for f in factors {
        same_field(&first.ctx, &f.ctx)?;
    }
    let mut counts: BTreeMap<Vec<StratumLabel>, u64> = [(vec![], 1)].into_iter().collect();
    for f in factors {
        let mut next = BTreeMap::new();
        for (tuple, c) in &counts {
            for (l, d) in &f.counts {
                let mut t = tuple.clone();
                t.push(l.clone());
                next.insert(t, c * d);
            }
        }
        counts = next;
    }
    let total = counts.values().sum();
    Ok(ProductCensus { es: factors.iter().map(|f| f.e).collect(), ctx: first.ctx.clone(), counts, total })
}

impl ProductCensus {
    /// Counts aggregated over Hodge-pair tuples.
    pub fn lambda_counts(&self) -> BTreeMap<Vec<HodgePair>, u64> {
        let mut out = BTreeMap::new();
        for (t, c) in &self.counts {
            *out.entry(t.iter().map(|l| l.lambda).collect()).or_insert(0) += c;
        }
        out
    }

    /// Componentwise order on Hodge-pair tuples.
    pub fn le(&self, a: &[HodgePair], b: &[HodgePair]) -> Result<bool> {
        if a.len() != self.es.len() || b.len() != self.es.len() {
            return Err(Error::DimensionMismatch("tuple length differs from the number of factors".into()));
        }
        for (x, y) in a.iter().zip(b) {
            if !x.dominated_by(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sum of the factor dimensions `e - j`.
    pub fn dim(&self, a: &[HodgePair]) -> usize {
        self.es.iter().zip(a).map(|(&e, l)| adm_poset(e).dim_x(l)).sum()
    }

    /// Covering pairs of the componentwise order on populated tuples.
    pub fn covers(&self) -> Result<Vec<(Vec<HodgePair>, Vec<HodgePair>)>> {
        let nodes: Vec<Vec<HodgePair>> = self.lambda_counts().into_keys().collect();
        let mut out = Vec::new();
        for a in &nodes {
            for b in &nodes {
                if a == b || !self.le(a, b)? {
                    continue;
                }
                let mut between = false;
                for c in &nodes {
                    if c != a && c != b && self.le(a, c)? && self.le(c, b)? {
                        between = true;
                        break;
                    }
                }
                if !between {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.es,
            "q": self.ctx.q(),
            "total": self.total,
            "nodes": self.lambda_counts().iter().map(|(t, c)| json!({
                "lambda": t.iter().map(|l| [l.i, l.j]).collect::<Vec<_>>(),
                "count": c,
                "dim": self.dim(t),
            })).collect::<Vec<_>>(),
        })
    }
}
