//! Linear invariants of chains: u-block partitions, Hodge pairs, nilpotency
//! indices, vanishing of the graded maps `m_i`, stratum labels and the
//! admissible poset.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::chains::PRChain;
use crate::dieudonne::{m1_vanishes, DieudonneModel};
use crate::error::{Error, Result};
use crate::umodule::Subspace;

/// An elementary-divisor pair `(i, j)` with `i >= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgePair {
    pub i: usize,
    pub j: usize,
}

impl HodgePair {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i < j {
            return Err(Error::Precondition(format!("Hodge pair ({i},{j}) must have i >= j")));
        }
        Ok(HodgePair { i, j })
    }

    pub fn sum(&self) -> usize {
        self.i + self.j
    }

    /// Dominance `self <= other`; pairs of different sums are incomparable.
    pub fn dominated_by(&self, other: &HodgePair) -> Result<bool> {
        if self.sum() != other.sum() {
            return Err(Error::Incomparable);
        }
        Ok(self.i <= other.i)
    }

    /// `(i + 1, j - 1)`, the next pair up in dominance.
    pub fn raised(&self) -> Option<HodgePair> {
        (self.j > 0).then(|| HodgePair { i: self.i + 1, j: self.j - 1 })
    }
}

impl fmt::Display for HodgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Vanishing state of the sigma-linear invariant `m_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum M1 {
    Zero,
    NonZero,
    Unknown,
}

impl M1 {
    pub fn code(&self) -> &'static str {
        match self {
            M1::Zero => "0",
            M1::NonZero => "1",
            M1::Unknown => "?",
        }
    }
}

/// `(lambda, T, m1)`: Hodge pair of the top level, the set of `i >= 2` with
/// `m_i = 0`, and the state of `m_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumLabel {
    pub lambda: HodgePair,
    pub t: BTreeSet<usize>,
    pub m1: M1,
}

pub fn format_set(t: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = t.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl StratumLabel {
    pub fn new(lambda: HodgePair, t: impl IntoIterator<Item = usize>) -> Self {
        StratumLabel { lambda, t: t.into_iter().collect(), m1: M1::Unknown }
    }

    pub fn with_m1(mut self, m1: M1) -> Self {
        self.m1 = m1;
        self
    }

    pub fn linear(&self) -> StratumLabel {
        StratumLabel { lambda: self.lambda, t: self.t.clone(), m1: M1::Unknown }
    }

    /// The naive order: `lambda <= lambda'`, `T ⊇ T'`, and `m1' = 0` forces `m1 = 0`
    /// (ignored when either side is unknown).
    pub fn le(&self, other: &StratumLabel) -> Result<bool> {
        let m1_ok = match (self.m1, other.m1) {
            (M1::NonZero, M1::Zero) => false,
            _ => true,
        };
        Ok(self.lambda.dominated_by(&other.lambda)? && self.t.is_superset(&other.t) && m1_ok)
    }

    pub fn lt(&self, other: &StratumLabel) -> Result<bool> {
        Ok(self != other && self.le(other)?)
    }

    /// Serialized form `lambda=(i,j);T={...};m1=0|1|?`.
    pub fn code(&self) -> String {
        format!("lambda={};T={};m1={}", self.lambda, format_set(&self.t), self.m1.code())
    }

    /// Label for diagrams: `λ=(i,j) T={…} m1=…`.
    pub fn display(&self) -> String {
        format!("λ={} T={} m1={}", self.lambda, format_set(&self.t), self.m1.code())
    }

    pub fn parse(s: &str) -> Result<StratumLabel> {
        let bad = || Error::Parse(format!("bad stratum label {s:?}; expected lambda=(i,j);T={{..}}[;m1=0|1|?]"));
        let mut lambda = None;
        let mut t = None;
        let mut m1 = M1::Unknown;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "lambda" => {
                    let inner = v.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
                    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                    let a: usize = a.trim().parse().map_err(|_| bad())?;
                    let b: usize = b.trim().parse().map_err(|_| bad())?;
                    lambda = Some(HodgePair::new(a, b)?);
                }
                "T" => {
                    let inner = v.trim().strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
                    let set: BTreeSet<usize> = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|x| !x.is_empty())
                        .map(|x| x.parse().map_err(|_| bad()))
                        .collect::<Result<_>>()?;
                    t = Some(set);
                }
                "m1" => {
                    m1 = match v.trim() {
                        "0" => M1::Zero,
                        "1" => M1::NonZero,
                        "?" => M1::Unknown,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(bad()),
            }
        }
        Ok(StratumLabel { lambda: lambda.ok_or_else(bad)?, t: t.ok_or_else(bad)?, m1 })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": [self.lambda.i, self.lambda.j],
            "T": self.t.iter().collect::<Vec<_>>(),
            "m1": self.m1.code(),
            "code": self.code(),
        })
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Sizes of the cyclic u-blocks of `big / small`, descending.
pub fn block_partition(small: &Subspace, big: &Subspace) -> Result<Vec<usize>> {
    if !big.contains(small)? {
        return Err(Error::NotNested);
    }
    if !small.is_u_stable() || !big.is_u_stable() {
        return Err(Error::NotUStable);
    }
    let d0 = small.dim();
    let mut ranks = Vec::new();
    let mut cur = big.clone();
    loop {
        let r = cur.sum(small)?.dim() - d0;
        if r == 0 {
            break;
        }
        ranks.push(r);
        cur = cur.u_image()?;
    }
    let drops: Vec<usize> = (0..ranks.len()).map(|k| ranks[k] - ranks.get(k + 1).copied().unwrap_or(0)).collect();
    let parts = drops.first().copied().unwrap_or(0);
    Ok((1..=parts).map(|b| drops.iter().filter(|&&d| d >= b).count()).collect())
}

/// The Hodge pair `(N - c2, N - c1)` of a u-stable subspace with blocks `c1 >= c2`.
pub fn hodge(w: &Subspace) -> Result<HodgePair> {
    let n = w.n();
    let blocks = block_partition(&Subspace::zero(w.ctx(), n), w)?;
    if blocks.len() > 2 {
        return Err(Error::Precondition("more than two u-blocks".into()));
    }
    let c1 = blocks.first().copied().unwrap_or(0);
    let c2 = blocks.get(1).copied().unwrap_or(0);
    let h = HodgePair { i: n - c2, j: n - c1 };
    debug_assert!({
        let mut ok = true;
        let mut cur = w.clone();
        for k in 0..=n {
            let expect = n.saturating_sub(h.i + k) + n.saturating_sub(h.j + k);
            ok &= cur.dim() == expect;
            cur = cur.u_image().unwrap();
        }
        ok
    });
    Ok(h)
}

/// Smallest `k` with `u^k W = 0`.
pub fn nilpotency_index(w: &Subspace) -> Result<usize> {
    if !w.is_u_stable() {
        return Err(Error::NotUStable);
    }
    let mut cur = w.clone();
    let mut k = 0;
    while cur.dim() > 0 {
        cur = cur.u_image()?;
        k += 1;
    }
    Ok(k)
}

/// Level `i` of a chain given as `levels[0] = ω^(1)`, with `ω^(0) = 0`.
pub fn level(levels: &[Subspace], i: usize) -> Subspace {
    if i == 0 {
        Subspace::zero(levels[0].ctx(), levels[0].n())
    } else {
        levels[i - 1].clone()
    }
}

/// Whether `u ω^(i) ⊆ ω^(i-2)`, i.e. the graded map `m_i` vanishes.
pub fn mi_vanishes_levels(levels: &[Subspace], i: usize) -> Result<bool> {
    let e = levels.len();
    if i < 2 || i > e {
        return Err(Error::Precondition(format!("m_{i} is defined only for 2 <= i <= {e}")));
    }
    let top = &levels[i - 1];
    let low = level(levels, i - 2);
    Ok(top.basis().iter().all(|r| low.contains_vec(&crate::umodule::u_mul(top.ctx(), top.n(), r))))
}

pub fn mi_vanishes(c: &PRChain, i: usize) -> Result<bool> {
    mi_vanishes_levels(c.levels(), i)
}

/// `(hodge(ω^(e)), {i >= 2 : m_i = 0})` of a chain given by its levels.
pub fn linear_label(levels: &[Subspace]) -> Result<StratumLabel> {
    let e = levels.len();
    let lambda = hodge(&levels[e - 1])?;
    let mut t = BTreeSet::new();
    for i in 2..=e {
        if mi_vanishes_levels(levels, i)? {
            t.insert(i);
        }
    }
    Ok(StratumLabel { lambda, t, m1: M1::Unknown })
}

/// The stratum label of a chain; `m1` is computed when a model is supplied
/// and `F^(1)` is a line, otherwise it is unknown.
pub fn stratum_label(c: &PRChain, model: Option<&DieudonneModel>) -> Result<StratumLabel> {
    let mut label = linear_label(c.levels())?;
    let free = label.lambda == HodgePair { i: c.e(), j: 0 };
    if free != label.t.is_empty() {
        return Err(Error::InvalidChain(format!("label {label} has free top level iff T is empty violated")));
    }
    if let Some(m) = model {
        label.m1 = match m1_vanishes(m, c) {
            Ok(true) => M1::Zero,
            Ok(false) => M1::NonZero,
            Err(Error::DegenerateF(_)) => M1::Unknown,
            Err(e) => return Err(e),
        };
    }
    Ok(label)
}

/// Orbit invariants of a chain: `hodge(ω^(e))`, `hodge(ω^(2))` and the
/// block partition of `ω^(e) / ω^(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitSignature {
    pub top: HodgePair,
    pub second: HodgePair,
    pub blocks: Vec<usize>,
}

impl OrbitSignature {
    pub fn to_json(&self) -> Value {
        json!({
            "top": [self.top.i, self.top.j],
            "second": [self.second.i, self.second.j],
            "blocks": self.blocks,
        })
    }
}

/// For `e = 1` the second level is taken to be the top.
pub fn orbit_signature(c: &PRChain) -> Result<OrbitSignature> {
    let levels = c.levels();
    Ok(OrbitSignature {
        top: hodge(c.top())?,
        second: hodge(&levels[levels.len().min(2) - 1])?,
        blocks: block_partition(&levels[0], c.top())?,
    })
}

/// The admissible Hodge pairs `{(i, e-i) : ceil(e/2) <= i <= e}` in ascending order,
/// with their dimension functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmPoset {
    pub e: usize,
    pub elements: Vec<HodgePair>,
}

impl AdmPoset {
    pub fn new(e: usize) -> Self {
        let elements = ((e + 1) / 2..=e).map(|i| HodgePair { i, j: e - i }).collect();
        AdmPoset { e, elements }
    }

    pub fn le(&self, a: &HodgePair, b: &HodgePair) -> Result<bool> {
        a.dominated_by(b)
    }

    /// Dimension of the stratum of lattices with this Hodge pair: `e - 2j`.
    pub fn dim_gr(&self, l: &HodgePair) -> usize {
        l.i - l.j
    }

    /// Dimension of the stratum of chains with this Hodge pair: `e - j`.
    pub fn dim_x(&self, l: &HodgePair) -> usize {
        self.e - l.j
    }

    /// Dimension of the fibres of the chain-to-top-lattice map: `j`.
    pub fn dim_fiber(&self, l: &HodgePair) -> usize {
        (self.e + l.j - l.i) / 2
    }
}

/// Componentwise product of admissible posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoset {
    pub factors: Vec<AdmPoset>,
    pub elements: Vec<Vec<HodgePair>>,
}

pub fn adm_poset(e: usize) -> AdmPoset {
    AdmPoset::new(e)
}

pub fn product_poset(factors: &[AdmPoset]) -> ProductPoset {
    let mut elements: Vec<Vec<HodgePair>> = vec![vec![]];
    for f in factors {
        elements = elements
            .into_iter()
            .flat_map(|pre| {
                f.elements.iter().map(move |x| {
                    let mut v = pre.clone();
                    v.push(*x);
                    v
                })
            })
            .collect();
    }
    ProductPoset { factors: factors.to_vec(), elements }
}

impl ProductPoset {
    pub fn le(&self, a: &[HodgePair], b: &[HodgePair]) -> Result<bool> {
        if a.len() != b.len() || a.len() != self.factors.len() {
            return Err(Error::DimensionMismatch("tuple length differs from the number of factors".into()));
        }
        for (x, y) in a.iter().zip(b) {
            if !x.dominated_by(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn dim_x(&self, a: &[HodgePair]) -> usize {
        self.factors.iter().zip(a).map(|(f, l)| f.dim_x(l)).sum()
    }
}
