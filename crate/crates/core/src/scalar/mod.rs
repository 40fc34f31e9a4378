//! Scalar tower: prime fields, their finite extensions, the rational function
//! field `K(t)` and the truncated power series ring `K[t]/t^N`.
//!
//! Scalars are plain values ([`Scalar`]); all arithmetic goes through the
//! [`FieldCtx`] that created them.

pub mod finite;
pub mod poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
pub use finite::FiniteField;

/// A rational function `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: Vec<u32>,
    den: Vec<u32>,
}

impl RatFn {
    pub fn numerator(&self) -> &[u32] {
        &self.num
    }
    pub fn denominator(&self) -> &[u32] {
        &self.den
    }
}

/// An element of some [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Finite field element, integer-encoded.
    Fin(u32),
    /// Element of `K(t)`.
    Rat(RatFn),
    /// Element of `K[t]/t^N`: exactly `N` coefficients.
    Ser(Vec<u32>),
}

/// The kind of ring a context describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Finite,
    RationalT,
    TruncatedT(usize),
}

#[derive(Debug)]
struct Inner {
    base: Arc<FiniteField>,
    kind: Kind,
}

/// Arithmetic context for one member of the scalar tower.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.kind == other.inner.kind && *self.inner.base == *other.inner.base)
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.base.p().hash(state);
        self.inner.base.modulus().hash(state);
        self.inner.kind.hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl FieldCtx {
    fn from_base(base: Arc<FiniteField>, kind: Kind) -> Self {
        FieldCtx { inner: Arc::new(Inner { base, kind }) }
    }

    pub fn prime(p: u32) -> Result<Self> {
        Ok(Self::from_base(Arc::new(FiniteField::prime(p)?), Kind::Finite))
    }

    /// `F_p[x]/(modulus)`, modulus monic and listed from the constant term up.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Self> {
        Ok(Self::from_base(Arc::new(FiniteField::new(p, modulus)?), Kind::Finite))
    }

    /// The field of order `q` with the default modulus.
    pub fn with_order(q: u32) -> Result<Self> {
        Ok(Self::from_base(Arc::new(FiniteField::with_order(q)?), Kind::Finite))
    }

    /// `K(t)` over this context's base field.
    pub fn rational_t(&self) -> Self {
        Self::from_base(self.inner.base.clone(), Kind::RationalT)
    }

    /// `K[t]/t^n` over this context's base field.
    pub fn truncated_t(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("truncation precision must be positive".into()));
        }
        Ok(Self::from_base(self.inner.base.clone(), Kind::TruncatedT(n)))
    }

    /// The base finite field as a context.
    pub fn base(&self) -> Self {
        match self.inner.kind {
            Kind::Finite => self.clone(),
            _ => Self::from_base(self.inner.base.clone(), Kind::Finite),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.inner.base
    }
    pub fn kind(&self) -> Kind {
        self.inner.kind
    }
    pub fn is_finite(&self) -> bool {
        self.inner.kind == Kind::Finite
    }
    /// True for contexts in which every nonzero element is invertible.
    pub fn is_field(&self) -> bool {
        !matches!(self.inner.kind, Kind::TruncatedT(_))
    }
    pub fn p(&self) -> u32 {
        self.inner.base.p()
    }
    pub fn q(&self) -> u32 {
        self.inner.base.order()
    }
    pub fn precision(&self) -> Option<usize> {
        match self.inner.kind {
            Kind::TruncatedT(n) => Some(n),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let k = &self.inner.base;
        let base = if k.degree() == 1 { format!("F_{}", k.p()) } else { format!("F_{}[x]/{:?}", k.p(), k.modulus()) };
        match self.inner.kind {
            Kind::Finite => base,
            Kind::RationalT => format!("{base}(t)"),
            Kind::TruncatedT(n) => format!("{base}[t]/t^{n}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.inner.kind {
            Kind::Finite => Scalar::Fin(0),
            Kind::RationalT => Scalar::Rat(RatFn { num: vec![], den: vec![1] }),
            Kind::TruncatedT(n) => Scalar::Ser(vec![0; n]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.embed(1)
    }

    /// Embeds a base-field element (given by its code).
    pub fn embed(&self, c: u32) -> Scalar {
        match self.inner.kind {
            Kind::Finite => Scalar::Fin(c),
            Kind::RationalT => Scalar::Rat(RatFn { num: poly::trim(vec![c]), den: vec![1] }),
            Kind::TruncatedT(n) => {
                let mut v = vec![0; n];
                v[0] = c;
                Scalar::Ser(v)
            }
        }
    }

    /// Embeds a base-field scalar `Scalar::Fin`; other scalars of this context pass through.
    pub fn lift(&self, x: &Scalar) -> Scalar {
        match x {
            Scalar::Fin(c) => self.embed(*c),
            other => other.clone(),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.embed(self.inner.base.from_int(n))
    }

    /// The variable `t`. Fails for finite fields.
    pub fn t(&self) -> Result<Scalar> {
        self.t_pow(1)
    }

    pub fn t_pow(&self, k: usize) -> Result<Scalar> {
        match self.inner.kind {
            Kind::Finite => Err(Error::Precondition("finite fields have no variable t".into())),
            Kind::RationalT => {
                let mut num = vec![0; k + 1];
                num[k] = 1;
                Ok(Scalar::Rat(RatFn { num, den: vec![1] }))
            }
            Kind::TruncatedT(n) => {
                let mut v = vec![0; n];
                if k < n {
                    v[k] = 1;
                }
                Ok(Scalar::Ser(v))
            }
        }
    }

    /// Builds `sum c_i t^i` from base-field codes.
    pub fn from_poly(&self, coeffs: &[u32]) -> Result<Scalar> {
        match self.inner.kind {
            Kind::Finite => {
                let c = poly::trim(coeffs.to_vec());
                if c.len() > 1 {
                    return Err(Error::Precondition("nonconstant polynomial in a finite field".into()));
                }
                Ok(Scalar::Fin(c.first().copied().unwrap_or(0)))
            }
            Kind::RationalT => Ok(Scalar::Rat(RatFn { num: poly::trim(coeffs.to_vec()), den: vec![1] })),
            Kind::TruncatedT(n) => {
                let mut v: Vec<u32> = coeffs.iter().take(n).copied().collect();
                v.resize(n, 0);
                Ok(Scalar::Ser(v))
            }
        }
    }

    fn k(&self) -> &FiniteField {
        &self.inner.base
    }

    fn rat(&self, num: Vec<u32>, den: Vec<u32>) -> Scalar {
        let k = self.k();
        let num = poly::trim(num);
        if num.is_empty() {
            return Scalar::Rat(RatFn { num, den: vec![1] });
        }
        let g = poly::gcd(k, &num, &den);
        let (mut n, _) = poly::divrem(k, &num, &g);
        let (mut d, _) = poly::divrem(k, &den, &g);
        let li = k.inv(*d.last().unwrap()).unwrap();
        n = poly::scale(k, &n, li);
        d = poly::scale(k, &d, li);
        Scalar::Rat(RatFn { num: n, den: d })
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let k = self.k();
        match (a, b) {
            (Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(k.add(*x, *y)),
            (Scalar::Rat(x), Scalar::Rat(y)) => {
                if x.den == y.den {
                    return self.rat(poly::add(k, &x.num, &y.num), x.den.clone());
                }
                let n = poly::add(k, &poly::mul(k, &x.num, &y.den), &poly::mul(k, &y.num, &x.den));
                self.rat(n, poly::mul(k, &x.den, &y.den))
            }
            (Scalar::Ser(x), Scalar::Ser(y)) => Scalar::Ser(x.iter().zip(y).map(|(a, b)| k.add(*a, *b)).collect()),
            _ => panic!("scalar kinds do not match the context"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        let k = self.k();
        match a {
            Scalar::Fin(x) => Scalar::Fin(k.neg(*x)),
            Scalar::Rat(x) => Scalar::Rat(RatFn { num: poly::neg(k, &x.num), den: x.den.clone() }),
            Scalar::Ser(x) => Scalar::Ser(x.iter().map(|&c| k.neg(c)).collect()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let k = self.k();
        match (a, b) {
            (Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(k.mul(*x, *y)),
            (Scalar::Rat(x), Scalar::Rat(y)) => {
                if x.num.is_empty() || y.num.is_empty() {
                    return self.zero();
                }
                if x.den == [1] && y.den == [1] {
                    return Scalar::Rat(RatFn { num: poly::mul(k, &x.num, &y.num), den: vec![1] });
                }
                self.rat(poly::mul(k, &x.num, &y.num), poly::mul(k, &x.den, &y.den))
            }
            (Scalar::Ser(x), Scalar::Ser(y)) => {
                let n = x.len();
                let mut r = vec![0; n];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().take(n - i).enumerate() {
                        r[i + j] = k.add(r[i + j], k.mul(xi, yj));
                    }
                }
                Scalar::Ser(r)
            }
            _ => panic!("scalar kinds do not match the context"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(x) => *x == 0,
            Scalar::Rat(x) => x.num.is_empty(),
            Scalar::Ser(x) => x.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Ser(x) => x[0] != 0,
            other => !self.is_zero(other),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        let k = self.k();
        match a {
            Scalar::Fin(x) => k.inv(*x).map(Scalar::Fin).ok_or(Error::NonUnit),
            Scalar::Rat(x) => {
                if x.num.is_empty() {
                    return Err(Error::NonUnit);
                }
                Ok(self.rat(x.den.clone(), x.num.clone()))
            }
            Scalar::Ser(x) => {
                let c0 = k.inv(x[0]).ok_or(Error::NonUnit)?;
                let n = x.len();
                let mut b = vec![0; n];
                b[0] = c0;
                for m in 1..n {
                    let mut s = 0;
                    for j in 1..=m {
                        s = k.add(s, k.mul(x[j], b[m - j]));
                    }
                    b[m] = k.neg(k.mul(c0, s));
                }
                Ok(Scalar::Ser(b))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The absolute Frobenius: `x -> x^p` on the base field, `t -> t^p`.
    pub fn frobenius(&self, a: &Scalar) -> Scalar {
        let k = self.k();
        match a {
            Scalar::Fin(x) => Scalar::Fin(k.frobenius(*x)),
            Scalar::Rat(x) => Scalar::Rat(RatFn { num: poly::frobenius(k, &x.num), den: poly::frobenius(k, &x.den) }),
            Scalar::Ser(x) => {
                let n = x.len();
                let p = k.p() as usize;
                let mut r = vec![0; n];
                for (i, &c) in x.iter().enumerate() {
                    if i * p < n {
                        r[i * p] = k.frobenius(c);
                    }
                }
                Scalar::Ser(r)
            }
        }
    }

    /// Evaluation at `t = 0`, returned as a base-field scalar.
    pub fn specialize_at_zero(&self, a: &Scalar) -> Result<Scalar> {
        let k = self.k();
        match a {
            Scalar::Fin(x) => Ok(Scalar::Fin(*x)),
            Scalar::Rat(x) => {
                if x.num.is_empty() {
                    return Ok(Scalar::Fin(0));
                }
                if x.den[0] == 0 {
                    return Err(Error::PoleAtZero);
                }
                Ok(Scalar::Fin(k.mul(x.num.first().copied().unwrap_or(0), k.inv(x.den[0]).unwrap())))
            }
            Scalar::Ser(x) => Ok(Scalar::Fin(x[0])),
        }
    }

    /// The `t`-adic valuation; `None` for zero (in `K[t]/t^N`: zero modulo `t^N`).
    pub fn valuation(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Fin(x) => (*x != 0).then_some(0),
            Scalar::Rat(x) => poly::ord_t(&x.num).map(|v| v as i64 - poly::ord_t(&x.den).unwrap() as i64),
            Scalar::Ser(x) => poly::ord_t(x).map(|v| v as i64),
        }
    }

    /// Multiplies by `t^k` (k may be negative in `K(t)`).
    pub fn shift_t(&self, a: &Scalar, k: i64) -> Result<Scalar> {
        match a {
            Scalar::Fin(_) => Err(Error::Precondition("finite fields have no variable t".into())),
            Scalar::Rat(_) => {
                let tk = self.t_pow(k.unsigned_abs() as usize)?;
                if k >= 0 {
                    Ok(self.mul(a, &tk))
                } else {
                    self.div(a, &tk)
                }
            }
            Scalar::Ser(x) => {
                let n = x.len();
                let mut r = vec![0; n];
                for (i, &c) in x.iter().enumerate() {
                    let j = i as i64 + k;
                    if c != 0 {
                        if j < 0 {
                            return Err(Error::NonUnit);
                        }
                        if (j as usize) < n {
                            r[j as usize] = c;
                        }
                    }
                }
                Ok(Scalar::Ser(r))
            }
        }
    }

    /// Coefficient list of a truncated series or of a polynomial in `K(t)`.
    pub fn coefficients(&self, a: &Scalar) -> Result<Vec<u32>> {
        match a {
            Scalar::Fin(x) => Ok(vec![*x]),
            Scalar::Ser(x) => Ok(x.clone()),
            Scalar::Rat(x) => {
                if x.den != [1] {
                    return Err(Error::Precondition("rational function is not a polynomial".into()));
                }
                Ok(x.num.clone())
            }
        }
    }

    /// Reduces a `K(t)` element with no pole at 0 into `K[t]/t^n`.
    pub fn to_series(&self, a: &Scalar, target: &FieldCtx) -> Result<Scalar> {
        let n = target.precision().ok_or(Error::ContextMismatch)?;
        match a {
            Scalar::Fin(c) => Ok(target.embed(*c)),
            Scalar::Ser(x) => target.from_poly(x),
            Scalar::Rat(x) => {
                if x.den[0] == 0 {
                    return Err(Error::PoleAtZero);
                }
                let num = target.from_poly(&x.num)?;
                let den = target.from_poly(&x.den)?;
                let _ = n;
                target.div(&num, &den)
            }
        }
    }

    /// Checks that `a` is a well-formed element of this context.
    pub fn check(&self, a: &Scalar) -> Result<()> {
        let q = self.q();
        let ok = match (self.inner.kind, a) {
            (Kind::Finite, Scalar::Fin(x)) => *x < q,
            (Kind::RationalT, Scalar::Rat(r)) => {
                r.num.iter().chain(&r.den).all(|&c| c < q) && r.den.last() == Some(&1)
            }
            (Kind::TruncatedT(n), Scalar::Ser(x)) => x.len() == n && x.iter().all(|&c| c < q),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// All elements of a finite field, ordered by integer encoding with 0 first.
    pub fn field_elements(&self, bound: u32) -> Result<Vec<Scalar>> {
        if !self.is_finite() {
            return Err(Error::Precondition("only finite fields can be enumerated".into()));
        }
        let q = self.q();
        if q > bound {
            return Err(Error::BoundExceeded { what: "field order", value: q as u128, bound: bound as u128 });
        }
        Ok((0..q).map(Scalar::Fin).collect())
    }

    fn base_json(&self, c: u32) -> Value {
        let k = self.k();
        if k.degree() == 1 {
            json!(c)
        } else {
            json!(k.digits(c))
        }
    }

    fn base_from_json(&self, v: &Value) -> Result<u32> {
        let k = self.k();
        if k.degree() == 1 {
            let n = v.as_i64().ok_or_else(|| Error::Parse(format!("expected an integer, got {v}")))?;
            Ok(k.from_int(n))
        } else {
            let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected a digit list, got {v}")))?;
            let digits: Vec<u32> = arr
                .iter()
                .map(|d| d.as_u64().map(|x| x as u32).ok_or_else(|| Error::Parse("bad digit".into())))
                .collect::<Result<_>>()?;
            k.from_digits(&digits)
        }
    }

    fn poly_from_json(&self, v: &Value) -> Result<Vec<u32>> {
        v.as_array()
            .ok_or_else(|| Error::Parse("expected a coefficient list".into()))?
            .iter()
            .map(|c| self.base_from_json(c))
            .collect()
    }

    pub fn to_json(&self, a: &Scalar) -> Value {
        match a {
            Scalar::Fin(c) => self.base_json(*c),
            Scalar::Rat(r) => json!({
                "num": r.num.iter().map(|&c| self.base_json(c)).collect::<Vec<_>>(),
                "den": r.den.iter().map(|&c| self.base_json(c)).collect::<Vec<_>>(),
            }),
            Scalar::Ser(x) => json!({
                "coeffs": x.iter().map(|&c| self.base_json(c)).collect::<Vec<_>>(),
                "prec": x.len(),
            }),
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<Scalar> {
        match self.inner.kind {
            Kind::Finite => Ok(Scalar::Fin(self.base_from_json(v)?)),
            Kind::RationalT => {
                let num = self.poly_from_json(&v["num"])?;
                let den = poly::trim(self.poly_from_json(&v["den"])?);
                if den.is_empty() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(self.rat(num, den))
            }
            Kind::TruncatedT(n) => {
                let c = self.poly_from_json(&v["coeffs"])?;
                if v.get("prec").and_then(Value::as_u64) != Some(n as u64) || c.len() != n {
                    return Err(Error::Parse(format!("expected a series with precision {n}")));
                }
                Ok(Scalar::Ser(c))
            }
        }
    }

    /// Context descriptor: `{"p", "f", "modulus"}` plus the ring kind.
    pub fn descriptor_json(&self) -> Value {
        let k = self.k();
        let mut v = json!({"p": k.p(), "f": k.degree(), "modulus": k.modulus()});
        match self.inner.kind {
            Kind::Finite => {}
            Kind::RationalT => v["kind"] = json!("rational_t"),
            Kind::TruncatedT(n) => {
                v["kind"] = json!("truncated_t");
                v["prec"] = json!(n);
            }
        }
        v
    }

    pub fn from_descriptor_json(v: &Value) -> Result<Self> {
        let p = v["p"].as_u64().ok_or_else(|| Error::Parse("missing field p".into()))? as u32;
        let modulus: Vec<u32> = match v.get("modulus") {
            Some(m) => m
                .as_array()
                .ok_or_else(|| Error::Parse("modulus must be a list".into()))?
                .iter()
                .map(|c| c.as_u64().map(|x| x as u32).ok_or_else(|| Error::Parse("bad modulus".into())))
                .collect::<Result<_>>()?,
            None => {
                let f = v.get("f").and_then(Value::as_u64).unwrap_or(1) as u32;
                finite::default_modulus(p, f)
            }
        };
        if let Some(f) = v.get("f").and_then(Value::as_u64) {
            if modulus.len() as u64 != f + 1 {
                return Err(Error::Parse("modulus degree does not match f".into()));
            }
        }
        let base = FieldCtx::extension(p, modulus)?;
        match v.get("kind").and_then(Value::as_str) {
            None | Some("finite") => Ok(base),
            Some("rational_t") => Ok(base.rational_t()),
            Some("truncated_t") => {
                let n = v["prec"].as_u64().ok_or_else(|| Error::Parse("missing prec".into()))?;
                base.truncated_t(n as usize)
            }
            Some(other) => Err(Error::Parse(format!("unknown context kind {other}"))),
        }
    }

    /// Human-readable rendering of a scalar.
    pub fn render(&self, a: &Scalar) -> String {
        let k = self.k();
        let base = |c: u32| -> String {
            if k.degree() == 1 {
                c.to_string()
            } else {
                format!("{:?}", k.digits(c))
            }
        };
        let poly_str = |v: &[u32]| -> String {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match i {
                    0 => base(c),
                    1 => format!("{}t", if c == 1 { String::new() } else { base(c) }),
                    _ => format!("{}t^{i}", if c == 1 { String::new() } else { base(c) }),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        };
        match a {
            Scalar::Fin(c) => base(*c),
            Scalar::Rat(r) if r.den == [1] => poly_str(&r.num),
            Scalar::Rat(r) => format!("({})/({})", poly_str(&r.num), poly_str(&r.den)),
            Scalar::Ser(x) => format!("{} + O(t^{})", poly_str(x), x.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let k = FieldCtx::prime(3).unwrap().rational_t();
        let t = k.t().unwrap();
        let one = k.one();
        let a = k.add(&one, &t);
        let b = k.div(&one, &a).unwrap();
        assert_eq!(k.mul(&a, &b), one);
        assert_eq!(k.specialize_at_zero(&b).unwrap(), Scalar::Fin(1));
        let pole = k.div(&one, &t).unwrap();
        assert_eq!(k.specialize_at_zero(&pole), Err(Error::PoleAtZero));
        assert_eq!(k.valuation(&pole), Some(-1));
        let ft = k.frobenius(&a);
        assert_eq!(ft, k.add(&one, &k.t_pow(3).unwrap()));
    }

    #[test]
    fn truncated_arithmetic() {
        let k = FieldCtx::prime(2).unwrap().truncated_t(5).unwrap();
        let t = k.t().unwrap();
        let a = k.add(&k.one(), &t);
        let b = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &b), k.one());
        assert_eq!(k.inv(&t), Err(Error::NonUnit));
        assert_eq!(k.frobenius(&a), k.add(&k.one(), &k.t_pow(2).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let k = FieldCtx::with_order(9).unwrap();
        for c in 0..9 {
            let x = Scalar::Fin(c);
            assert_eq!(k.from_json(&k.to_json(&x)).unwrap(), x);
        }
        let kt = k.rational_t();
        let x = kt.div(&kt.t().unwrap(), &kt.add(&kt.one(), &kt.t().unwrap())).unwrap();
        assert_eq!(kt.from_json(&kt.to_json(&x)).unwrap(), x);
        let d = kt.descriptor_json();
        assert_eq!(FieldCtx::from_descriptor_json(&d).unwrap(), kt);
    }
}
