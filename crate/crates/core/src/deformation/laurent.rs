//! Vectors of `K(t)((u))^2` with finitely many terms, used while dividing
//! deformed generators by `u`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{FieldCtx, Scalar};
use crate::umodule::{index, zero_row, Row};

/// A Laurent vector: coefficients keyed by `(coordinate, u-exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentVec {
    terms: BTreeMap<(usize, i64), Scalar>,
}

impl LaurentVec {
    pub fn zero() -> Self {
        LaurentVec { terms: BTreeMap::new() }
    }

    /// The Laurent vector of a row of `E_n`, lifted into `ctx`.
    pub fn from_row(ctx: &FieldCtx, n: usize, row: &[Scalar]) -> Self {
        let mut terms = BTreeMap::new();
        for comp in 0..2 {
            for deg in 0..n {
                let x = ctx.lift(&row[index(n, comp, deg)]);
                if !ctx.is_zero(&x) {
                    terms.insert((comp, deg as i64), x);
                }
            }
        }
        LaurentVec { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, ctx: &FieldCtx, comp: usize, deg: i64) -> Scalar {
        self.terms.get(&(comp, deg)).cloned().unwrap_or_else(|| ctx.zero())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, ctx: &FieldCtx, other: &LaurentVec, c: &Scalar) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let add = ctx.mul(v, c);
            let cur = terms.get(k).cloned().unwrap_or_else(|| ctx.zero());
            let s = ctx.add(&cur, &add);
            if ctx.is_zero(&s) {
                terms.remove(k);
            } else {
                terms.insert(*k, s);
            }
        }
        LaurentVec { terms }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &LaurentVec) -> Self {
        self.add_scaled(ctx, other, &ctx.one())
    }

    /// Multiplication by `u^s`.
    pub fn shift(&self, s: i64) -> Self {
        LaurentVec { terms: self.terms.iter().map(|(&(c, d), v)| ((c, d + s), v.clone())).collect() }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, d)| d).min()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, d)| d).max()
    }

    /// The image in `E_n`: terms of exponent `>= n` are dropped; a negative
    /// exponent means the vector left `Λ_0` and is reported.
    pub fn to_row(&self, ctx: &FieldCtx, n: usize) -> Result<Row> {
        let mut r = zero_row(ctx, n);
        for (&(c, d), v) in &self.terms {
            if d < 0 {
                return Err(Error::ContainmentViolated(format!("term u^{d} e{} outside Λ_0", c + 1)));
            }
            if (d as usize) < n {
                r[index(n, c, d as usize)] = v.clone();
            }
        }
        Ok(r)
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(c, d), v)| json!({"coord": c + 1, "u": d, "coef": ctx.to_json(v)}))
                .collect(),
        )
    }

    pub fn render(&self, ctx: &FieldCtx) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&(c, d), v)| {
                let coef = if ctx.is_one(v) { String::new() } else { format!("({})", ctx.render(v)) };
                format!("{coef}u^{d} e{}", c + 1)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
