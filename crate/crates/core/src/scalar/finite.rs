use crate::error::{Error, Result};

/// Largest field order for which arithmetic tables are built.
pub const MAX_ORDER: u32 = 1024;

/// The finite field F_p[x]/(modulus) with elements encoded as integers
/// `sum c_i p^i` for the coefficient vector `(c_0, .., c_{f-1})`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frob: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p, coefficients low first.
fn rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - (lead * c) % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(deg);
    (0..count).map(move |code| {
        let mut v = Vec::with_capacity(deg as usize + 1);
        let mut c = code;
        for _ in 0..deg {
            v.push(c % p);
            c /= p;
        }
        v.push(1);
        v
    })
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = (m.len() - 1) as u32;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(p, d) {
            if rem_mod_p(m, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `f` over F_p, ordered by the
/// integer encoding of its lower coefficients.
pub fn default_modulus(p: u32, f: u32) -> Vec<u32> {
    if f == 1 {
        return vec![0, 1];
    }
    monic_polys(p, f)
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// Field of order `q = p^f` with the default modulus.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, f) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, default_modulus(p, f))
    }

    /// `modulus` is monic, coefficients listed from the constant term upward.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with coefficients in [0, p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let f = (modulus.len() - 1) as u32;
        let q = (p as u64).pow(f);
        if q > MAX_ORDER as u64 {
            return Err(Error::BoundExceeded { what: "field order", value: q as u128, bound: MAX_ORDER as u128 });
        }
        let q = q as u32;
        let decode = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(f as usize);
            let mut c = x;
            for _ in 0..f {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let digits: Vec<Vec<u32>> = (0..q).map(decode).collect();
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = digits[a].iter().zip(&digits[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = encode(&s);
                let mut prod = vec![0u32; 2 * f as usize];
                for (i, &x) in digits[a].iter().enumerate() {
                    for (j, &y) in digits[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = rem_mod_p(&prod, &modulus, p);
                r.resize(f as usize, 0);
                mul[a * qs + b] = encode(&r);
            }
        }
        let neg = (0..q)
            .map(|a| encode(&digits[a as usize].iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let mut inv = vec![0; qs];
        for a in 1..qs {
            inv[a] = (1..q).find(|&b| mul[a * qs + b as usize] == 1).expect("fields have inverses");
        }
        let frob = (0..q)
            .map(|a| {
                let mut r = 1u32;
                for _ in 0..p {
                    r = mul[r as usize * qs + a as usize];
                }
                r
            })
            .collect();
        Ok(FiniteField { p, f, q, modulus, add, mul, neg, inv, frob })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.f
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }
    #[inline]
    pub fn frobenius(&self, a: u32) -> u32 {
        self.frob[a as usize]
    }

    /// Image of the integer `n` under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.f as usize);
        let mut c = a;
        for _ in 0..self.f {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    pub fn from_digits(&self, v: &[u32]) -> Result<u32> {
        if v.len() != self.f as usize || v.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("expected {} digits in [0, {})", self.f, self.p)));
        }
        Ok(v.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let n = self.q - 1;
        (1..self.q)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, g);
                    ord += 1;
                }
                ord == n
            })
            .expect("multiplicative group is cyclic")
    }

    /// The elements `x` (as codes) forming the basis `1, x, .., x^{f-1}` over F_p.
    pub fn prime_basis(&self) -> Vec<u32> {
        (0..self.f).map(|i| self.p.pow(i)).collect()
    }
}

/// Decomposes `q = p^f`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut f = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        f += 1;
    }
    (r == 1).then_some((p, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(matches!(FiniteField::new(2, vec![1, 0, 1]), Err(Error::InvalidField(_))));
        assert!(matches!(FiniteField::prime(6), Err(Error::InvalidField(_))));
    }

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25] {
            let k = FiniteField::with_order(q).unwrap();
            for a in 0..q {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    let fa = k.frobenius(a);
                    let fb = k.frobenius(b);
                    assert_eq!(k.frobenius(k.add(a, b)), k.add(fa, fb));
                    assert_eq!(k.frobenius(k.mul(a, b)), k.mul(fa, fb));
                }
            }
            let g = k.primitive_element();
            assert_ne!(g, 0);
        }
    }
}
