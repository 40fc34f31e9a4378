//! Dense polynomials in `t` over a finite field, coefficients listed from `t^0` upward.
//! All results are trimmed (no trailing zeros); the zero polynomial is empty.

use super::finite::FiniteField;

pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn add(k: &FiniteField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let r = (0..n)
        .map(|i| k.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(r)
}

pub fn neg(k: &FiniteField, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&c| k.neg(c)).collect()
}

pub fn sub(k: &FiniteField, a: &[u32], b: &[u32]) -> Vec<u32> {
    add(k, a, &neg(k, b))
}

pub fn scale(k: &FiniteField, a: &[u32], c: u32) -> Vec<u32> {
    trim(a.iter().map(|&x| k.mul(x, c)).collect())
}

pub fn mul(k: &FiniteField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = k.add(r[i + j], k.mul(x, y));
        }
    }
    trim(r)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(k: &FiniteField, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = k.inv(b[db]).expect("nonzero leading coefficient");
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quo = vec![0; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = k.mul(*r.last().unwrap(), lead_inv);
        quo[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            r[i + shift] = k.sub(r[i + shift], k.mul(c, y));
        }
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn monic(k: &FiniteField, a: &[u32]) -> Vec<u32> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(k, a, k.inv(l).expect("trimmed polynomial")),
    }
}

/// Monic greatest common divisor.
pub fn gcd(k: &FiniteField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

/// Multiplicity of `t` as a factor; `None` for the zero polynomial.
pub fn ord_t(a: &[u32]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// Applies Frobenius to the coefficients and substitutes `t -> t^p`.
pub fn frobenius(k: &FiniteField, a: &[u32]) -> Vec<u32> {
    if a.is_empty() {
        return Vec::new();
    }
    let p = k.p() as usize;
    let mut r = vec![0; (a.len() - 1) * p + 1];
    for (i, &c) in a.iter().enumerate() {
        r[i * p] = k.frobenius(c);
    }
    r
}
