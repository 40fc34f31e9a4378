//! Chains `ω^(1) ⊂ .. ⊂ ω^(e)` of u-stable subspaces of `E_e` with
//! `dim ω^(i) = i` and `u ω^(i) ⊆ ω^(i-1)`, their enumeration over finite
//! fields, the convolution presentation, the action of `GL_2(K[u]/u^e)`,
//! orbits and the fibres over a fixed top level.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{FieldCtx, Scalar};
use crate::umodule::{self, monomial, u_mul, Row, Subspace};

/// Default cap on the number of enumerated chains.
pub const DEFAULT_CHAIN_BOUND: u64 = 1_000_000;

/// Outcome of [`validate`]: the first failing level, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub level: Option<usize>,
    pub reason: String,
}

impl ValidationReport {
    fn pass() -> Self {
        ValidationReport { ok: true, level: None, reason: String::new() }
    }
    fn fail(level: usize, reason: impl Into<String>) -> Self {
        ValidationReport { ok: false, level: Some(level), reason: reason.into() }
    }
}

/// Checks dimensions, nesting and `u ω^(i) ⊆ ω^(i-1)` level by level.
pub fn validate_levels(e: usize, levels: &[Subspace]) -> ValidationReport {
    if levels.len() != e {
        return ValidationReport::fail(levels.len().min(e) + 1, format!("expected {e} levels, got {}", levels.len()));
    }
    for (idx, w) in levels.iter().enumerate() {
        let i = idx + 1;
        if w.n() != e {
            return ValidationReport::fail(i, format!("level lives in E_{} instead of E_{e}", w.n()));
        }
        if w.dim() != i {
            return ValidationReport::fail(i, format!("dimension {} instead of {i}", w.dim()));
        }
        let prev = if idx == 0 { None } else { Some(&levels[idx - 1]) };
        if let Some(p) = prev {
            if p.ctx() != w.ctx() {
                return ValidationReport::fail(i, "levels over different contexts");
            }
            if !w.contains(p).unwrap_or(false) {
                return ValidationReport::fail(i, "does not contain the previous level");
            }
        }
        for r in w.basis() {
            let ur = u_mul(w.ctx(), w.n(), r);
            let inside = match prev {
                None => umodule::row_is_zero(w.ctx(), &ur),
                Some(p) => p.contains_vec(&ur),
            };
            if !inside {
                return ValidationReport::fail(i, "u times the level is not inside the previous level");
            }
        }
    }
    ValidationReport::pass()
}

/// A valid chain over a field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PRChain {
    ctx: FieldCtx,
    e: usize,
    levels: Vec<Subspace>,
}

impl fmt::Debug for PRChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.levels.iter()).finish()
    }
}

impl PartialOrd for PRChain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PRChain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PRChain {
    pub fn new(ctx: &FieldCtx, e: usize, levels: Vec<Subspace>) -> Result<Self> {
        if !ctx.is_field() {
            return Err(Error::Precondition("chains live over fields; use a family for truncated rings".into()));
        }
        if levels.iter().any(|w| w.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        let rep = validate_levels(e, &levels);
        if !rep.ok {
            return Err(Error::InvalidChain(format!("level {}: {}", rep.level.unwrap(), rep.reason)));
        }
        Ok(PRChain { ctx: ctx.clone(), e, levels })
    }

    /// Builds a chain from generators of each level.
    pub fn from_generators(ctx: &FieldCtx, e: usize, gens: &[Vec<Row>]) -> Result<Self> {
        let levels = gens.iter().map(|g| Subspace::span(ctx, e, g)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, e, levels)
    }

    /// Builds a chain from `K[u]`-module generators of each level.
    pub fn from_module_generators(ctx: &FieldCtx, e: usize, gens: &[Vec<Row>]) -> Result<Self> {
        let levels = gens.iter().map(|g| Subspace::u_span(ctx, e, g)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, e, levels)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// `levels()[i-1] = ω^(i)`.
    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }
    /// `ω^(i)` for `0 <= i <= e`.
    pub fn level(&self, i: usize) -> Subspace {
        crate::invariants::level(&self.levels, i)
    }
    pub fn top(&self) -> &Subspace {
        &self.levels[self.e - 1]
    }

    pub fn key(&self) -> Vec<u32> {
        self.levels.iter().flat_map(|w| w.key()).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.ctx.descriptor_json();
        v["e"] = json!(self.e);
        v["levels"] = Value::Array(self.levels.iter().map(|w| w.to_json()).collect());
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ctx = FieldCtx::from_descriptor_json(v)?;
        let e = v["e"].as_u64().ok_or_else(|| Error::Parse("chain is missing \"e\"".into()))? as usize;
        let levels = v["levels"]
            .as_array()
            .ok_or_else(|| Error::Parse("chain is missing \"levels\"".into()))?
            .iter()
            .map(|w| Subspace::from_json(&ctx, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ctx, e, levels)
    }
}

pub fn validate(c: &PRChain) -> ValidationReport {
    validate_levels(c.e, &c.levels)
}

/// `ω^(i) = <u^{e-1} e1, .., u^{e-i} e1>`, the chain with free top level `K[u] e1`.
pub fn standard_free_chain(ctx: &FieldCtx, e: usize) -> PRChain {
    let gens: Vec<Vec<Row>> = (1..=e).map(|i| (1..=i).map(|k| monomial(ctx, e, 0, e - k)).collect()).collect();
    PRChain::from_generators(ctx, e, &gens).expect("standard chain is valid")
}

fn check_bound(e: usize, q: u32, bound: u64) -> Result<()> {
    let count = (q as u128 + 1).checked_pow(e as u32).unwrap_or(u128::MAX);
    if count > bound as u128 {
        return Err(Error::BoundExceeded { what: "chain count", value: count, bound: bound as u128 });
    }
    Ok(())
}

/// The lines of a 2-dimensional space spanned by `c1, c2`: `<c1 + x c2>` for
/// each field element `x`, then `<c2>`.
fn lines(ctx: &FieldCtx, c1: &Row, c2: &Row) -> Vec<Row> {
    let mut out: Vec<Row> = (0..ctx.q())
        .map(|x| umodule::row_add(ctx, c1, &umodule::row_scale(ctx, c2, &Scalar::Fin(x))))
        .collect();
    out.push(c2.clone());
    out
}

/// All chains over a finite field, sorted by canonical serialization.
pub fn enumerate_chains(e: usize, ctx: &FieldCtx) -> Result<Vec<PRChain>> {
    enumerate_chains_bounded(e, ctx, DEFAULT_CHAIN_BOUND)
}

pub fn enumerate_chains_bounded(e: usize, ctx: &FieldCtx, bound: u64) -> Result<Vec<PRChain>> {
    if !ctx.is_finite() {
        return Err(Error::Precondition("enumeration needs a finite field".into()));
    }
    if e == 0 {
        return Err(Error::Precondition("e must be positive".into()));
    }
    check_bound(e, ctx.q(), bound)?;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Subspace>> = vec![vec![]];
    while let Some(partial) = stack.pop() {
        if partial.len() == e {
            out.push(PRChain { ctx: ctx.clone(), e, levels: partial });
            continue;
        }
        let prev = partial.last().cloned().unwrap_or_else(|| Subspace::zero(ctx, e));
        let pre = prev.u_preimage()?;
        let comp = pre.complement_basis(&prev)?;
        debug_assert_eq!(comp.len(), 2);
        for line in lines(ctx, &comp[0], &comp[1]) {
            let mut next = partial.clone();
            next.push(prev.extend(&[line])?);
            stack.push(next);
        }
    }
    out.sort();
    Ok(out)
}

/// The convolution presentation `C_i = u^{-(e-i)} ω^(i)`: a descending chain
/// `E = C_0 ⊃ C_1 ⊃ .. ⊃ C_e` of u-stable subspaces of codimension one
/// each, with `u C_{i-1} ⊆ C_i`, ending at `C_e = ω^(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvChain {
    ctx: FieldCtx,
    e: usize,
    levels: Vec<Subspace>,
}

impl ConvChain {
    pub fn new(ctx: &FieldCtx, e: usize, levels: Vec<Subspace>) -> Result<Self> {
        if levels.len() != e {
            return Err(Error::InvalidChain(format!("expected {e} levels")));
        }
        let mut prev = Subspace::full(ctx, e);
        for (idx, c) in levels.iter().enumerate() {
            let i = idx + 1;
            if c.dim() != 2 * e - i || !prev.contains(c)? || !c.contains(&prev.u_image()?)? {
                return Err(Error::InvalidChain(format!("convolution level {i} is invalid")));
            }
            prev = c.clone();
        }
        Ok(ConvChain { ctx: ctx.clone(), e, levels })
    }

    /// `levels()[i-1] = C_i`.
    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    /// The lattice the convolution map sends this chain to.
    pub fn endpoint(&self) -> &Subspace {
        &self.levels[self.e - 1]
    }
}

pub fn conv_normalize(c: &PRChain) -> Result<ConvChain> {
    let e = c.e;
    let mut levels = Vec::with_capacity(e);
    for (idx, w) in c.levels.iter().enumerate() {
        let mut x = w.clone();
        for _ in 0..e - (idx + 1) {
            x = x.u_preimage()?;
        }
        levels.push(x);
    }
    ConvChain::new(&c.ctx, e, levels)
}

pub fn conv_denormalize(cc: &ConvChain) -> Result<PRChain> {
    let e = cc.e;
    let levels =
        cc.levels.iter().enumerate().map(|(idx, x)| x.u_pow_image(e - idx - 1)).collect::<Result<Vec<_>>>()?;
    PRChain::new(&cc.ctx, e, levels)
}

/// An element of `GL_2(K[u]/u^e)`; entries are coefficient lists of length `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGroupElement {
    ctx: FieldCtx,
    e: usize,
    m: [Vec<Scalar>; 4],
}

impl TruncatedGroupElement {
    /// Entries `[[a, b], [c, d]]`, each a polynomial in `u` (coefficient lists, low first).
    pub fn new(ctx: &FieldCtx, e: usize, entries: [Vec<Scalar>; 4]) -> Result<Self> {
        let m = entries.map(|mut p| {
            p.resize(e, ctx.zero());
            p.truncate(e);
            p
        });
        let g = TruncatedGroupElement { ctx: ctx.clone(), e, m };
        let det0 = ctx.sub(&ctx.mul(&g.m[0][0], &g.m[3][0]), &ctx.mul(&g.m[1][0], &g.m[2][0]));
        if !ctx.is_unit(&det0) {
            return Err(Error::NotInvertible);
        }
        Ok(g)
    }

    fn poly(ctx: &FieldCtx, e: usize, c: &Scalar, k: usize) -> Vec<Scalar> {
        let mut p = vec![ctx.zero(); e];
        if k < e {
            p[k] = c.clone();
        }
        p
    }

    pub fn identity(ctx: &FieldCtx, e: usize) -> Self {
        let one = ctx.one();
        let z = vec![ctx.zero(); e];
        let o = Self::poly(ctx, e, &one, 0);
        TruncatedGroupElement { ctx: ctx.clone(), e, m: [o.clone(), z.clone(), z, o] }
    }

    /// `1 + c u^k` in position (row, col) off the diagonal, or a diagonal entry `x`.
    pub fn elementary(ctx: &FieldCtx, e: usize, upper: bool, c: &Scalar, k: usize) -> Self {
        let mut g = Self::identity(ctx, e);
        g.m[if upper { 1 } else { 2 }] = Self::poly(ctx, e, c, k);
        g
    }

    pub fn diagonal(ctx: &FieldCtx, e: usize, a: Vec<Scalar>, d: Vec<Scalar>) -> Result<Self> {
        let z = vec![ctx.zero(); e];
        Self::new(ctx, e, [a, z.clone(), z, d])
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

    fn padd(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| self.ctx.add(x, y)).collect()
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [a2, b2, c2, d2] = &other.m;
        let m = [
            self.padd(&self.pmul(a, a2), &self.pmul(b, c2)),
            self.padd(&self.pmul(a, b2), &self.pmul(b, d2)),
            self.padd(&self.pmul(c, a2), &self.pmul(d, c2)),
            self.padd(&self.pmul(c, b2), &self.pmul(d, d2)),
        ];
        TruncatedGroupElement { ctx: self.ctx.clone(), e: self.e, m }
    }

    /// `g (x, y)^T` for a vector in `E_e` given as a row.
    pub fn apply(&self, v: &[Scalar]) -> Row {
        let e = self.e;
        let (x, y) = v.split_at(e);
        let [a, b, c, d] = &self.m;
        let first = self.padd(&self.pmul(a, x), &self.pmul(b, y));
        let second = self.padd(&self.pmul(c, x), &self.pmul(d, y));
        umodule::from_coords(&self.ctx, e, &first, &second)
    }

    pub fn act_subspace(&self, w: &Subspace) -> Result<Subspace> {
        w.map(|r| self.apply(r))
    }

    /// A generating set: elementary matrices `x u^k` for `x` in an F_p-basis,
    /// diagonal `(g, 1)`, `(1, g)` for a primitive `g`, and `(1 + x u^k, 1)`,
    /// `(1, 1 + x u^k)` for `k >= 1`.
    pub fn generators(ctx: &FieldCtx, e: usize) -> Vec<Self> {
        let k = ctx.field();
        let basis: Vec<Scalar> = k.prime_basis().into_iter().map(Scalar::Fin).collect();
        let mut out = Vec::new();
        for x in &basis {
            for d in 0..e {
                out.push(Self::elementary(ctx, e, true, x, d));
                out.push(Self::elementary(ctx, e, false, x, d));
            }
        }
        let one = Self::poly(ctx, e, &ctx.one(), 0);
        if ctx.q() > 2 {
            let g = Self::poly(ctx, e, &Scalar::Fin(k.primitive_element()), 0);
            out.push(Self::diagonal(ctx, e, g.clone(), one.clone()).unwrap());
            out.push(Self::diagonal(ctx, e, one.clone(), g).unwrap());
        }
        for x in &basis {
            for d in 1..e {
                let mut p = one.clone();
                p[d] = x.clone();
                out.push(Self::diagonal(ctx, e, p.clone(), one.clone()).unwrap());
                out.push(Self::diagonal(ctx, e, one.clone(), p).unwrap());
            }
        }
        out
    }
}

pub fn act(g: &TruncatedGroupElement, c: &PRChain) -> Result<PRChain> {
    if g.ctx != c.ctx || g.e != c.e {
        return Err(Error::ContextMismatch);
    }
    let levels = c.levels.iter().map(|w| g.act_subspace(w)).collect::<Result<Vec<_>>>()?;
    PRChain::new(&c.ctx, c.e, levels)
}

/// `|GL_2(F_q)| q^{4(e-1)}`.
pub fn group_order(e: usize, q: u64) -> u128 {
    let q = q as u128;
    (q * q - 1) * (q * q - q) * q.pow(4 * (e as u32 - 1))
}

/// One orbit: its smallest member and its size.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    pub representative: PRChain,
    pub size: usize,
}

/// Orbits of `GL_2(K[u]/u^e)` on all chains, by breadth-first closure under generators.
pub fn orbits(e: usize, ctx: &FieldCtx, bound: u64) -> Result<Vec<OrbitClass>> {
    let chains = enumerate_chains_bounded(e, ctx, bound)?;
    let index: HashMap<Vec<u32>, usize> = chains.iter().enumerate().map(|(i, c)| (c.key(), i)).collect();
    let gens = TruncatedGroupElement::generators(ctx, e);
    let mut seen = vec![false; chains.len()];
    let mut out = Vec::new();
    for start in 0..chains.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut size = 0;
        while let Some(i) = queue.pop() {
            size += 1;
            for g in &gens {
                let img = act(g, &chains[i])?;
                let j = index[&img.key()];
                if !seen[j] {
                    seen[j] = true;
                    queue.push(j);
                }
            }
        }
        out.push(OrbitClass { representative: chains[start].clone(), size });
    }
    Ok(out)
}

/// All chains with top level `W`, by downward choice of hyperplanes
/// `u ω^(i) ⊆ ω^(i-1) ⊂ ω^(i)`.
pub fn fiber_chains(w: &Subspace, e: usize) -> Result<Vec<PRChain>> {
    let ctx = w.ctx();
    if !ctx.is_finite() {
        return Err(Error::Precondition("fibres are enumerated over finite fields".into()));
    }
    if w.n() != e || w.dim() != e {
        return Err(Error::DimensionMismatch(format!("top level must be an {e}-dimensional subspace of E_{e}")));
    }
    if !w.is_u_stable() {
        return Err(Error::NotUStable);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Subspace>> = vec![vec![w.clone()]];
    while let Some(partial) = stack.pop() {
        let cur = partial.last().unwrap().clone();
        if cur.dim() == 1 {
            let mut levels = partial.clone();
            levels.reverse();
            out.push(PRChain::new(ctx, e, levels)?);
            continue;
        }
        let uw = cur.u_image()?;
        let comp = cur.complement_basis(&uw)?;
        let choices: Vec<Subspace> = match comp.len() {
            1 => vec![uw.clone()],
            2 => lines(ctx, &comp[0], &comp[1]).iter().map(|l| uw.extend(std::slice::from_ref(l))).collect::<Result<_>>()?,
            _ => unreachable!("a u-stable subspace of E_e has at most two generators"),
        };
        for h in choices {
            if h.dim() + 1 != cur.dim() {
                continue;
            }
            let mut next = partial.clone();
            next.push(h);
            stack.push(next);
        }
    }
    out.sort();
    Ok(out)
}
