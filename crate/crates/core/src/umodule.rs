//! The ambient module `E_N = (K[u]/u^N)^2` and its subspaces.
//!
//! A vector is a row of `2N` scalars: the coefficients of `u^0 .. u^{N-1}` in
//! the first coordinate `e1`, then those of the second coordinate `e2`.
//! Subspaces are stored in canonical reduced row echelon form. Over
//! `K[t]/t^M` the pivots must be units; such a subspace is a free direct
//! summand and is called a family.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{FieldCtx, FiniteField, Kind, Scalar};

pub type Row = Vec<Scalar>;

/// Coordinate index of `u^deg e_{comp+1}` in a row.
#[inline]
pub fn index(n: usize, comp: usize, deg: usize) -> usize {
    comp * n + deg
}

pub fn zero_row(ctx: &FieldCtx, n: usize) -> Row {
    vec![ctx.zero(); 2 * n]
}

/// The vector `u^deg e_{comp+1}`.
pub fn monomial(ctx: &FieldCtx, n: usize, comp: usize, deg: usize) -> Row {
    let mut r = zero_row(ctx, n);
    r[index(n, comp, deg)] = ctx.one();
    r
}

/// Builds a row from the coefficient lists of its two coordinates.
pub fn from_coords(ctx: &FieldCtx, n: usize, a: &[Scalar], b: &[Scalar]) -> Row {
    let mut r = zero_row(ctx, n);
    for (i, x) in a.iter().take(n).enumerate() {
        r[i] = x.clone();
    }
    for (i, x) in b.iter().take(n).enumerate() {
        r[n + i] = x.clone();
    }
    r
}

/// Multiplication by `u`.
pub fn u_mul(ctx: &FieldCtx, n: usize, v: &[Scalar]) -> Row {
    let mut r = zero_row(ctx, n);
    for c in 0..2 {
        for d in 0..n - 1 {
            r[index(n, c, d + 1)] = v[index(n, c, d)].clone();
        }
    }
    r
}

pub fn u_pow_mul(ctx: &FieldCtx, n: usize, v: &[Scalar], k: usize) -> Row {
    let mut r = v.to_vec();
    for _ in 0..k {
        r = u_mul(ctx, n, &r);
    }
    r
}

pub fn row_add(ctx: &FieldCtx, a: &[Scalar], b: &[Scalar]) -> Row {
    a.iter().zip(b).map(|(x, y)| ctx.add(x, y)).collect()
}

pub fn row_sub(ctx: &FieldCtx, a: &[Scalar], b: &[Scalar]) -> Row {
    a.iter().zip(b).map(|(x, y)| ctx.sub(x, y)).collect()
}

pub fn row_scale(ctx: &FieldCtx, a: &[Scalar], c: &Scalar) -> Row {
    a.iter().map(|x| ctx.mul(x, c)).collect()
}

pub fn row_is_zero(ctx: &FieldCtx, a: &[Scalar]) -> bool {
    a.iter().all(|x| ctx.is_zero(x))
}

/// Lifts a row over a finite field into a `t`-extension of it.
pub fn row_lift(target: &FieldCtx, a: &[Scalar]) -> Row {
    a.iter().map(|x| target.lift(x)).collect()
}

/// Entrywise evaluation at `t = 0`.
pub fn row_specialize(ctx: &FieldCtx, a: &[Scalar]) -> Result<Row> {
    a.iter().map(|x| ctx.specialize_at_zero(x)).collect()
}

pub fn row_frobenius(ctx: &FieldCtx, a: &[Scalar]) -> Row {
    a.iter().map(|x| ctx.frobenius(x)).collect()
}

pub fn row_to_json(ctx: &FieldCtx, n: usize, a: &[Scalar]) -> Value {
    json!({
        "a": a[..n].iter().map(|x| ctx.to_json(x)).collect::<Vec<_>>(),
        "b": a[n..].iter().map(|x| ctx.to_json(x)).collect::<Vec<_>>(),
    })
}

pub fn row_from_json(ctx: &FieldCtx, n: usize, v: &Value) -> Result<Row> {
    let part = |key: &str| -> Result<Vec<Scalar>> {
        let arr = v[key].as_array().ok_or_else(|| Error::Parse(format!("vector is missing \"{key}\"")))?;
        if arr.len() != n {
            return Err(Error::Parse(format!("coordinate \"{key}\" must have {n} coefficients")));
        }
        arr.iter().map(|x| ctx.from_json(x)).collect()
    };
    let a = part("a")?;
    let b = part("b")?;
    Ok(from_coords(ctx, n, &a, &b))
}

/// Renders a row as a sum of monomials `c u^k e_i`.
pub fn row_render(ctx: &FieldCtx, n: usize, a: &[Scalar]) -> String {
    let mut terms = Vec::new();
    for c in 0..2 {
        for d in 0..n {
            let x = &a[index(n, c, d)];
            if ctx.is_zero(x) {
                continue;
            }
            let coef = if ctx.is_one(x) { String::new() } else { format!("({})", ctx.render(x)) };
            let mon = match d {
                0 => format!("e{}", c + 1),
                1 => format!("u e{}", c + 1),
                _ => format!("u^{d} e{}", c + 1),
            };
            terms.push(format!("{coef}{mon}"));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Reduced row echelon form, pivots taken left to right. Pivot entries must
/// be units; rows that cannot be reduced to zero without a non-unit pivot
/// raise `NonUnitPivot`.
fn rref(ctx: &FieldCtx, mut rows: Vec<Row>, ncols: usize) -> Result<(Vec<Row>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(r) = (rank..rows.len()).find(|&r| ctx.is_unit(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = ctx.inv(&rows[rank][c])?;
        if !ctx.is_one(&inv) {
            rows[rank] = row_scale(ctx, &rows[rank], &inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || ctx.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !ctx.is_zero(y) {
                    *x = ctx.sub(x, &ctx.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !row_is_zero(ctx, r)) {
        return Err(Error::NonUnitPivot);
    }
    rows.truncate(rank);
    Ok((rows, pivots))
}

/// Coefficients `c` with `sum c_i basis_i = target`, for linearly independent
/// rows over a field; `None` if `target` is outside their span.
pub fn solve_combination(ctx: &FieldCtx, basis: &[Row], target: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let m = basis.len();
    let width = target.len();
    let rows: Vec<Row> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut r = b.clone();
            r.extend((0..m).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(ctx, rows, width + m)?;
    if pivots.iter().any(|&c| c >= width) {
        return Err(Error::DimensionMismatch("basis rows are linearly dependent".into()));
    }
    let mut r = target.to_vec();
    r.extend((0..m).map(|_| ctx.zero()));
    for (row, &c) in red.iter().zip(&pivots) {
        if ctx.is_zero(&r[c]) {
            continue;
        }
        let f = r[c].clone();
        for (x, y) in r.iter_mut().zip(row) {
            if !ctx.is_zero(y) {
                *x = ctx.sub(x, &ctx.mul(&f, y));
            }
        }
    }
    if !row_is_zero(ctx, &r[..width]) {
        return Ok(None);
    }
    Ok(Some(r[width..].iter().map(|x| ctx.neg(x)).collect()))
}

/// A basis of the relations `{c : sum c_i rows_i = 0}` over a field.
pub fn left_kernel(ctx: &FieldCtx, rows: &[Row]) -> Result<Vec<Vec<Scalar>>> {
    let m = rows.len();
    let Some(width) = rows.first().map(|r| r.len()) else { return Ok(vec![]) };
    let aug: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut r = b.clone();
            r.extend((0..m).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
            r
        })
        .collect();
    let (red, _) = rref(ctx, aug, width + m)?;
    Ok(red.into_iter().filter(|r| row_is_zero(ctx, &r[..width])).map(|r| r[width..].to_vec()).collect())
}

/// A subspace (or, over `K[t]/t^M`, a free direct summand) of `E_N`.
#[derive(Clone)]
pub struct Subspace {
    ctx: FieldCtx,
    n: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows && self.ctx == other.ctx
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rows.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| row_render(&self.ctx, self.n, r)).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

impl Subspace {
    pub fn span(ctx: &FieldCtx, n: usize, vecs: &[Row]) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("N must be positive".into()));
        }
        for v in vecs {
            if v.len() != 2 * n {
                return Err(Error::DimensionMismatch(format!("vector of length {} in E_{n}", v.len())));
            }
        }
        let (rows, pivots) = match ctx.kind() {
            Kind::TruncatedT(_) => match rref(ctx, vecs.to_vec(), 2 * n) {
                Ok(x) => x,
                Err(Error::NonUnitPivot) => return local::span(ctx, n, vecs),
                Err(e) => return Err(e),
            },
            _ => rref(ctx, vecs.to_vec(), 2 * n)?,
        };
        Ok(Subspace { ctx: ctx.clone(), n, rows, pivots })
    }

    /// The `K[u]`-submodule generated by the vectors.
    pub fn u_span(ctx: &FieldCtx, n: usize, vecs: &[Row]) -> Result<Self> {
        let mut all = Vec::new();
        for v in vecs {
            let mut x = v.clone();
            while !row_is_zero(ctx, &x) {
                all.push(x.clone());
                x = u_mul(ctx, n, &x);
            }
        }
        Self::span(ctx, n, &all)
    }

    pub fn zero(ctx: &FieldCtx, n: usize) -> Self {
        Subspace { ctx: ctx.clone(), n, rows: vec![], pivots: vec![] }
    }

    pub fn full(ctx: &FieldCtx, n: usize) -> Self {
        let rows = (0..2 * n)
            .map(|i| {
                let mut r = zero_row(ctx, n);
                r[i] = ctx.one();
                r
            })
            .collect();
        Subspace { ctx: ctx.clone(), n, rows, pivots: (0..2 * n).collect() }
    }

    /// `E[u^k]`, the kernel of `u^k`.
    pub fn kernel_u_pow(ctx: &FieldCtx, n: usize, k: usize) -> Self {
        let k = k.min(n);
        let mut rows = Vec::new();
        for c in 0..2 {
            for d in n - k..n {
                rows.push(monomial(ctx, n, c, d));
            }
        }
        Self::span(ctx, n, &rows).expect("monomials span a summand")
    }

    /// `u^k E`.
    pub fn u_pow_ambient(ctx: &FieldCtx, n: usize, k: usize) -> Self {
        Self::kernel_u_pow(ctx, n, n.saturating_sub(k))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    /// Canonical basis (rows of the reduced echelon form).
    pub fn basis(&self) -> &[Row] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn same(&self, other: &Subspace) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("E_{} vs E_{}", self.n, other.n)));
        }
        Ok(())
    }

    /// Residual of `v` after reduction by the pivot rows; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Row {
        let ctx = &self.ctx;
        let mut r = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if ctx.is_zero(&r[c]) {
                continue;
            }
            let f = r[c].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !ctx.is_zero(y) {
                    *x = ctx.sub(x, &ctx.mul(&f, y));
                }
            }
        }
        r
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        row_is_zero(&self.ctx, &self.reduce(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.same(other)?;
        Ok(other.rows.iter().all(|r| self.contains_vec(r)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same(other)?;
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Self::span(&self.ctx, self.n, &v)
    }

    /// The subspace plus the span of extra vectors.
    pub fn extend(&self, vecs: &[Row]) -> Result<Subspace> {
        let mut v = self.rows.clone();
        v.extend(vecs.iter().cloned());
        Self::span(&self.ctx, self.n, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same(other)?;
        if !self.ctx.is_field() {
            return local::intersect(self, other);
        }
        let ctx = &self.ctx;
        let m = 2 * self.n;
        let mut rows = Vec::new();
        for r in &self.rows {
            let mut x = r.clone();
            x.extend(r.iter().cloned());
            rows.push(x);
        }
        for r in &other.rows {
            let mut x = r.clone();
            x.extend(std::iter::repeat(ctx.zero()).take(m));
            rows.push(x);
        }
        let (red, _) = rref(ctx, rows, 2 * m)?;
        let out: Vec<Row> =
            red.into_iter().filter(|r| row_is_zero(ctx, &r[..m])).map(|r| r[m..].to_vec()).collect();
        Self::span(ctx, self.n, &out)
    }

    pub fn u_image(&self) -> Result<Subspace> {
        let v: Vec<Row> = self.rows.iter().map(|r| u_mul(&self.ctx, self.n, r)).collect();
        Self::span(&self.ctx, self.n, &v)
    }

    pub fn u_pow_image(&self, k: usize) -> Result<Subspace> {
        let v: Vec<Row> = self.rows.iter().map(|r| u_pow_mul(&self.ctx, self.n, r, k)).collect();
        Self::span(&self.ctx, self.n, &v)
    }

    /// `u^{-1}(W) = { v : u v in W }`.
    pub fn u_preimage(&self) -> Result<Subspace> {
        if !self.ctx.is_field() {
            return local::u_preimage(self);
        }
        let ctx = &self.ctx;
        let n = self.n;
        let m = 2 * n;
        let mut rows = Vec::new();
        for i in 0..m {
            let mut e = zero_row(ctx, n);
            e[i] = ctx.one();
            let mut x = u_mul(ctx, n, &e);
            x.extend(e);
            rows.push(x);
        }
        for r in &self.rows {
            let mut x = r.clone();
            x.extend(std::iter::repeat(ctx.zero()).take(m));
            rows.push(x);
        }
        let (red, _) = rref(ctx, rows, 2 * m)?;
        let out: Vec<Row> =
            red.into_iter().filter(|r| row_is_zero(ctx, &r[..m])).map(|r| r[m..].to_vec()).collect();
        Self::span(ctx, n, &out)
    }

    pub fn is_u_stable(&self) -> bool {
        self.rows.iter().all(|r| self.contains_vec(&u_mul(&self.ctx, self.n, r)))
    }

    /// Image under entrywise Frobenius (the twist `W^{(p)}`).
    pub fn frobenius_twist(&self) -> Result<Subspace> {
        let v: Vec<Row> = self.rows.iter().map(|r| row_frobenius(&self.ctx, r)).collect();
        Self::span(&self.ctx, self.n, &v)
    }

    /// Image under a linear map given on vectors.
    pub fn map(&self, f: impl Fn(&[Scalar]) -> Row) -> Result<Subspace> {
        let v: Vec<Row> = self.rows.iter().map(|r| f(r)).collect();
        Self::span(&self.ctx, self.n, &v)
    }

    /// Base change from a finite field into one of its `t`-extensions.
    pub fn lift_to(&self, target: &FieldCtx) -> Result<Subspace> {
        if !self.ctx.is_finite() || target.base() != self.ctx {
            return Err(Error::ContextMismatch);
        }
        let v: Vec<Row> = self.rows.iter().map(|r| row_lift(target, r)).collect();
        Self::span(target, self.n, &v)
    }

    /// Span of the rows evaluated at `t = 0` (for a family: its special fibre).
    pub fn specialize(&self) -> Result<Subspace> {
        let base = self.ctx.base();
        let v: Vec<Row> = self.rows.iter().map(|r| row_specialize(&self.ctx, r)).collect::<Result<_>>()?;
        Self::span(&base, self.n, &v)
    }

    /// First canonical basis vector of `self` not contained in `other`.
    pub fn complement_vector(&self, other: &Subspace) -> Option<Row> {
        self.rows.iter().find(|r| !other.contains_vec(r)).cloned()
    }

    /// Canonical basis vectors of `self` outside `other`, greedily extending `other`.
    pub fn complement_basis(&self, other: &Subspace) -> Result<Vec<Row>> {
        let mut acc = other.clone();
        let mut out = Vec::new();
        for r in &self.rows {
            if !acc.contains_vec(r) {
                acc = acc.extend(std::slice::from_ref(r))?;
                out.push(r.clone());
            }
        }
        Ok(out)
    }

    /// Finite-field sort key: the codes of the canonical basis.
    pub fn key(&self) -> Vec<u32> {
        let mut k = Vec::with_capacity(1 + self.rows.len() * 2 * self.n);
        k.push(self.rows.len() as u32);
        for r in &self.rows {
            for x in r {
                k.push(match x {
                    Scalar::Fin(c) => *c,
                    _ => u32::MAX,
                });
            }
        }
        k
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "basis": self.rows.iter().map(|r| row_to_json(&self.ctx, self.n, r)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ctx: &FieldCtx, v: &Value) -> Result<Subspace> {
        let n = v["N"].as_u64().ok_or_else(|| Error::Parse("subspace is missing \"N\"".into()))? as usize;
        let rows: Vec<Row> = v["basis"]
            .as_array()
            .ok_or_else(|| Error::Parse("subspace is missing \"basis\"".into()))?
            .iter()
            .map(|r| row_from_json(ctx, n, r))
            .collect::<Result<_>>()?;
        Self::span(ctx, n, &rows)
    }
}

/// Linear algebra over `K[t]/t^M` carried out on the underlying `K`-space
/// `K^{2N M}`, index `(column, t-degree)`.
mod local {
    use super::*;

    fn prec(ctx: &FieldCtx) -> usize {
        ctx.precision().expect("truncated context")
    }

    fn kref(k: &FiniteField, mut rows: Vec<Vec<u32>>, ncols: usize) -> Vec<Vec<u32>> {
        let mut rank = 0;
        for c in 0..ncols {
            let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
            rows.swap(rank, r);
            let inv = k.inv(rows[rank][c]).unwrap();
            for x in rows[rank].iter_mut() {
                *x = k.mul(*x, inv);
            }
            let pr = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pr) {
                        if *y != 0 {
                            *x = k.sub(*x, k.mul(f, *y));
                        }
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        rows
    }

    fn flat(ctx: &FieldCtx, r: &[Scalar]) -> Vec<u32> {
        let m = prec(ctx);
        let mut out = vec![0; r.len() * m];
        for (c, x) in r.iter().enumerate() {
            if let Scalar::Ser(s) = x {
                out[c * m..(c + 1) * m].copy_from_slice(s);
            }
        }
        out
    }

    fn unflat(v: &[u32], m: usize) -> Row {
        v.chunks(m).map(|c| Scalar::Ser(c.to_vec())).collect()
    }

    fn t_shift(v: &[u32], m: usize) -> Vec<u32> {
        let mut out = vec![0; v.len()];
        for (c, chunk) in v.chunks(m).enumerate() {
            for d in 0..m - 1 {
                out[c * m + d + 1] = chunk[d];
            }
        }
        out
    }

    /// K-basis of the K[t]-module generated by the rows.
    fn expand(ctx: &FieldCtx, rows: &[Row]) -> Vec<Vec<u32>> {
        let m = prec(ctx);
        let mut out = Vec::new();
        for r in rows {
            let mut v = flat(ctx, r);
            for _ in 0..m {
                out.push(v.clone());
                v = t_shift(&v, m);
            }
        }
        let ncols = out.first().map_or(0, |v| v.len());
        kref(ctx.field(), out, ncols)
    }

    /// Turns a `t`-stable K-subspace into canonical generators, checking that
    /// it is a free direct summand.
    fn contract(ctx: &FieldCtx, n: usize, basis: Vec<Vec<u32>>) -> Result<Subspace> {
        let m = prec(ctx);
        let k = ctx.field();
        let ncols = 2 * n * m;
        let tb: Vec<Vec<u32>> = basis.iter().map(|v| t_shift(v, m)).collect();
        let mut acc = kref(k, tb, ncols);
        let mut gens = Vec::new();
        for v in &basis {
            let mut trial = acc.clone();
            trial.push(v.clone());
            let red = kref(k, trial, ncols);
            if red.len() > acc.len() {
                acc = red;
                gens.push(v.clone());
            }
        }
        if gens.len() * m != basis.len() {
            return Err(Error::NonUnitPivot);
        }
        let residues: Vec<Vec<u32>> = gens.iter().map(|g| g.iter().step_by(m).copied().collect()).collect();
        if kref(k, residues, 2 * n).len() != gens.len() {
            return Err(Error::NonUnitPivot);
        }
        let rows: Vec<Row> = gens.iter().map(|g| unflat(g, m)).collect();
        let (rows, pivots) = rref(ctx, rows, 2 * n)?;
        Ok(Subspace { ctx: ctx.clone(), n, rows, pivots })
    }

    pub fn span(ctx: &FieldCtx, n: usize, vecs: &[Row]) -> Result<Subspace> {
        contract(ctx, n, expand(ctx, vecs))
    }

    pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let ctx = &a.ctx;
        let k = ctx.field();
        let ea = expand(ctx, &a.rows);
        let eb = expand(ctx, &b.rows);
        let d = 2 * a.n * prec(ctx);
        let mut rows = Vec::new();
        for v in &ea {
            let mut x = v.clone();
            x.extend(v.iter().copied());
            rows.push(x);
        }
        for v in &eb {
            let mut x = v.clone();
            x.extend(std::iter::repeat(0).take(d));
            rows.push(x);
        }
        let red = kref(k, rows, 2 * d);
        let out: Vec<Vec<u32>> =
            red.into_iter().filter(|r| r[..d].iter().all(|&c| c == 0)).map(|r| r[d..].to_vec()).collect();
        contract(ctx, a.n, kref(k, out, d))
    }

    pub fn u_preimage(w: &Subspace) -> Result<Subspace> {
        let ctx = &w.ctx;
        let k = ctx.field();
        let n = w.n;
        let m = prec(ctx);
        let d = 2 * n * m;
        let ew = expand(ctx, &w.rows);
        let mut rows = Vec::new();
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            let (col, deg) = (i / m, i % m);
            let mut ue = vec![0; d];
            let (comp, ud) = (col / n, col % n);
            if ud + 1 < n {
                ue[(comp * n + ud + 1) * m + deg] = 1;
            }
            ue.extend(e);
            rows.push(ue);
        }
        for v in &ew {
            let mut x = v.clone();
            x.extend(std::iter::repeat(0).take(d));
            rows.push(x);
        }
        let red = kref(k, rows, 2 * d);
        let out: Vec<Vec<u32>> =
            red.into_iter().filter(|r| r[..d].iter().all(|&c| c == 0)).map(|r| r[d..].to_vec()).collect();
        contract(ctx, n, kref(k, out, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::prime(2).unwrap()
    }

    #[test]
    fn kernels_and_images() {
        let k = f2();
        let n = 4;
        let e = Subspace::full(&k, n);
        assert_eq!(e.u_image().unwrap(), Subspace::u_pow_ambient(&k, n, 1));
        let eu = Subspace::kernel_u_pow(&k, n, 1);
        assert_eq!(eu.dim(), 2);
        assert_eq!(Subspace::zero(&k, n).u_preimage().unwrap(), eu);
        assert_eq!(eu.u_preimage().unwrap(), Subspace::kernel_u_pow(&k, n, 2));
    }

    #[test]
    fn intersection() {
        let k = f2();
        let n = 3;
        let a = Subspace::span(&k, n, &[monomial(&k, n, 0, 2), monomial(&k, n, 1, 1)]).unwrap();
        let b = Subspace::span(&k, n, &[monomial(&k, n, 0, 2), monomial(&k, n, 1, 2)]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Subspace::span(&k, n, &[monomial(&k, n, 0, 2)]).unwrap());
    }

    #[test]
    fn truncated_summands() {
        let k = f2();
        let r = k.truncated_t(4).unwrap();
        let n = 2;
        let t = r.t().unwrap();
        let v = row_add(&r, &monomial(&r, n, 0, 1), &row_scale(&r, &monomial(&r, n, 1, 1), &t));
        let s = Subspace::span(&r, n, &[v.clone()]).unwrap();
        assert_eq!(s.dim(), 1);
        let tv = row_scale(&r, &monomial(&r, n, 0, 0), &t);
        assert_eq!(Subspace::span(&r, n, &[tv]), Err(Error::NonUnitPivot));
        let pre = s.u_preimage().unwrap();
        assert_eq!(pre.dim(), 3);
        let lift = row_add(&r, &monomial(&r, n, 0, 0), &row_scale(&r, &monomial(&r, n, 1, 0), &t));
        assert!(pre.contains_vec(&lift));
        assert!(!pre.contains_vec(&monomial(&r, n, 0, 0)));
        let sp = pre.specialize().unwrap();
        assert_eq!(sp, Subspace::kernel_u_pow(&k, n, 1).extend(&[monomial(&k, n, 0, 0)]).unwrap());
        let bad = Subspace::span(&r, n, &[row_add(&r, &monomial(&r, n, 0, 1), &row_scale(&r, &monomial(&r, n, 1, 0), &t))]).unwrap();
        assert_eq!(bad.u_preimage(), Err(Error::NonUnitPivot));
    }

    #[test]
    fn redundant_truncated_span() {
        let k = f2();
        let r = k.truncated_t(3).unwrap();
        let n = 2;
        let t = r.t().unwrap();
        let a = monomial(&r, n, 0, 0);
        let ta = row_scale(&r, &a, &t);
        let s = Subspace::span(&r, n, &[ta, a.clone()]).unwrap();
        assert_eq!(s, Subspace::span(&r, n, &[a]).unwrap());
    }
}
