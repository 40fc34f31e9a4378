//! Deformation of a chain with Hodge pair `λ < (e,0)` into a family whose
//! generic fibre has Hodge pair `λ + (1,-1)`.

use serde_json::{json, Value};

use super::laurent::LaurentVec;
use super::{all_vectors, FamilyChain};
use crate::chains::PRChain;
use crate::error::{Error, Result};
use crate::invariants::{hodge, nilpotency_index, HodgePair};
use crate::scalar::{FieldCtx, Scalar};
use crate::umodule::{index, row_lift, row_to_json, solve_combination, u_mul, u_pow_mul, Row, Subspace};

/// Audit data of one run of [`hodge_raise`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationTrace {
    /// `s[k]` = nilpotency index of `ω^(k)`, `0 <= k <= e`.
    pub s: Vec<usize>,
    pub k0: usize,
    /// Hodge pair `(a, b)` of `ω^(k0)`.
    pub hodge_k0: HodgePair,
    /// Adapted pair `e1' = x1 / u^a`, `e2' = x2 / u^b`.
    pub e1: LaurentVec,
    pub e2: LaurentVec,
    /// Generators `v_k` for `k0 <= k <= e`, indexed from `k0`.
    pub v: Vec<Row>,
    /// `w_n` for `1 <= n <= e - k0`.
    pub w: Vec<LaurentVec>,
    /// `x[n-1][l]` = coefficient of `v_{k0+l}` in `u v_{k0+n}`.
    pub x: Vec<Vec<Scalar>>,
    /// `J = {n : x_{n,n-1} = 0}`.
    pub j: Vec<usize>,
    /// Deformed generators `ṽ_k` for `k0 <= k <= e`.
    pub deformed: Vec<LaurentVec>,
}

impl DeformationTrace {
    pub fn to_json(&self, tctx: &FieldCtx) -> Value {
        let base = tctx.base();
        let e = self.s.len() - 1;
        json!({
            "s": self.s,
            "k0": self.k0,
            "hodge_k0": [self.hodge_k0.i, self.hodge_k0.j],
            "e1_prime": self.e1.to_json(tctx),
            "e2_prime": self.e2.to_json(tctx),
            "v": self.v.iter().map(|r| row_to_json(&base, e, r)).collect::<Vec<_>>(),
            "w": self.w.iter().map(|r| r.to_json(tctx)).collect::<Vec<_>>(),
            "x": self.x.iter().map(|r| r.iter().map(|c| base.to_json(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "J": self.j,
            "deformed": self.deformed.iter().map(|r| r.render(tctx)).collect::<Vec<_>>(),
        })
    }

    /// Checks the recorded data for internal consistency and, given the
    /// family it produced, that the top nilpotency index rose by one.
    pub fn check(&self, fam: &FamilyChain) -> Result<()> {
        let e = self.s.len() - 1;
        if self.s[0] != 0 || self.s.windows(2).any(|w| w[1] < w[0] || w[1] - w[0] > 1) {
            return Err(Error::Inconclusive("s_k is not nondecreasing with unit steps".into()));
        }
        if self.k0 == 0 || self.s[self.k0] != self.s[self.k0 - 1] || (self.k0 + 1..=e).any(|k| self.s[k] == self.s[k - 1]) {
            return Err(Error::Inconclusive("k0 is not the last index with s_k = s_(k-1)".into()));
        }
        let base = fam.base();
        for (n, xs) in self.x.iter().enumerate() {
            let in_j = self.j.contains(&(n + 1));
            if in_j != base.is_zero(&xs[n]) {
                return Err(Error::Inconclusive(format!("J disagrees with x_({},{})", n + 1, n)));
            }
        }
        let s_top = nilpotency_index(&fam.levels()[e - 1])?;
        if s_top != self.s[e] + 1 {
            return Err(Error::Inconclusive(format!("generic nilpotency {s_top}, expected {}", self.s[e] + 1)));
        }
        Ok(())
    }
}

/// Builds the family `ω̃` with `ω̃(0) = c` and generic Hodge pair
/// `λ + (1, -1)`, following the `k0`/`J` construction.
pub fn hodge_raise(c: &PRChain) -> Result<(FamilyChain, DeformationTrace)> {
    let k = c.ctx();
    if !k.is_finite() {
        return Err(Error::Precondition("hodge_raise works over a finite field".into()));
    }
    let e = c.e();
    let kt = k.rational_t();
    let t = kt.t()?;
    let lambda = hodge(c.top())?;
    if lambda == (HodgePair { i: e, j: 0 }) {
        return Err(Error::NotDeformable(format!("λ = {lambda} is already maximal")));
    }
    let full: Vec<Subspace> = (0..=e).map(|i| c.level(i)).collect();
    let s: Vec<usize> = full.iter().map(nilpotency_index).collect::<Result<_>>()?;
    let k0 = (1..=e)
        .filter(|&i| s[i] == s[i - 1])
        .max()
        .ok_or_else(|| Error::NotDeformable("no index with s_k = s_(k-1)".into()))?;
    let w = &full[k0];
    let wp = &full[k0 - 1];
    let hk = hodge(w)?;
    let (a, b) = (hk.i, hk.j);
    if hodge(wp)? != (HodgePair { i: a + 1, j: b }) {
        return Err(Error::NotDeformable(format!("unexpected Hodge pair jump at k0 = {k0}")));
    }
    if b == 0 {
        return Err(Error::ContainmentViolated("b = 0 at k0".into()));
    }

    let x2 = wp
        .basis()
        .iter()
        .find(|v| e > b && !crate::umodule::row_is_zero(k, &u_pow_mul(k, e, v, e - b - 1)))
        .cloned()
        .ok_or_else(|| Error::NotDeformable("no generator of the second block".into()))?;
    let lead = |v: &Row, d: usize| (v[index(e, 0, d)].clone(), v[index(e, 1, d)].clone());
    let (l2a, l2b) = lead(&x2, b);
    let mut x1 = None;
    for v in all_vectors(w)? {
        if (0..a).any(|d| !k.is_zero(&v[index(e, 0, d)]) || !k.is_zero(&v[index(e, 1, d)])) {
            continue;
        }
        if wp.contains_vec(&v) {
            continue;
        }
        let (l1a, l1b) = lead(&v, a);
        if k.is_zero(&k.sub(&k.mul(&l1a, &l2b), &k.mul(&l1b, &l2a))) {
            continue;
        }
        x1 = Some(v);
        break;
    }
    let x1 = x1.ok_or_else(|| Error::NotDeformable("no generator of the first block".into()))?;

    let mut vs: Vec<Row> = vec![x1.clone()];
    for i in k0 + 1..=e {
        vs.push(full[i].complement_vector(&full[i - 1]).expect("levels grow by one"));
    }
    let lv = |r: &Row| LaurentVec::from_row(&kt, e, r);
    let e1p = lv(&x1).shift(-(a as i64));
    let e2p = lv(&x2).shift(-(b as i64));
    let mut vt: Vec<LaurentVec> = vec![lv(&x1).add_scaled(&kt, &e2p.shift(b as i64 - 1), &t)];
    let mut ws = Vec::new();
    let mut xs = Vec::new();
    let mut jset = Vec::new();
    for n in 1..=e - k0 {
        let vk = &vs[n];
        let mut basis: Vec<Row> = wp.basis().to_vec();
        basis.extend(vs[..n].iter().cloned());
        let cs = solve_combination(k, &basis, &u_mul(k, e, vk))?
            .ok_or_else(|| Error::ContainmentViolated(format!("u v_{} is outside ω^({})", k0 + n, k0 + n - 1)))?;
        let x: Vec<Scalar> = cs[wp.dim()..].to_vec();
        let mut wn = lv(vk).shift(1);
        for (l, xl) in x.iter().enumerate() {
            if !k.is_zero(xl) {
                wn = wn.add_scaled(&kt, &lv(&vs[l]), &kt.neg(&kt.lift(xl)));
            }
        }
        let next = if k.is_zero(&x[n - 1]) {
            jset.push(n);
            lv(vk).add_scaled(&kt, &vt[n - 1].shift(-1), &t)
        } else {
            let mut acc = wn.shift(-1);
            for (l, xl) in x.iter().enumerate() {
                if !k.is_zero(xl) {
                    acc = acc.add_scaled(&kt, &vt[l].shift(-1), &kt.lift(xl));
                }
            }
            acc
        };
        vt.push(next);
        ws.push(wn);
        xs.push(x);
    }

    let base_rows: Vec<Row> = wp.basis().iter().map(|r| row_lift(&kt, r)).collect();
    let deformed: Vec<Row> = vt.iter().map(|v| v.to_row(&kt, e)).collect::<Result<_>>()?;
    let mut gens = Vec::with_capacity(e);
    for i in 1..=e {
        if i < k0 {
            gens.push(full[i].basis().iter().map(|r| row_lift(&kt, r)).collect());
        } else {
            let mut g = base_rows.clone();
            g.extend(deformed[..=i - k0].iter().cloned());
            gens.push(g);
        }
    }
    let trace = DeformationTrace {
        s,
        k0,
        hodge_k0: hk,
        e1: e1p,
        e2: e2p,
        v: vs,
        w: ws,
        x: xs,
        j: jset,
        deformed: vt,
    };
    let fam = FamilyChain::exact(k, e, gens)
        .map_err(|err| match err {
            Error::InvalidChain(m) => Error::ContainmentViolated(m),
            other => other,
        })?
        .with_recipe("hodge-raise");
    if fam.specialize() != *c {
        return Err(Error::Inconclusive("deformed family does not specialize to the input".into()));
    }
    trace.check(&fam)?;
    let generic = fam.generic_label()?.label.lambda;
    if Some(generic) != lambda.raised() {
        return Err(Error::Inconclusive(format!("generic Hodge pair {generic}, expected λ + (1,-1)")));
    }
    Ok((fam.with_trace(trace.clone()), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{enumerate_chains, standard_free_chain};
    use crate::umodule::monomial;

    #[test]
    fn free_chain_is_not_deformable() {
        let k = FieldCtx::prime(2).unwrap();
        assert!(matches!(hodge_raise(&standard_free_chain(&k, 3)), Err(Error::NotDeformable(_))));
    }

    #[test]
    fn raises_every_small_chain() {
        let k = FieldCtx::prime(2).unwrap();
        for e in 2..=3 {
            for c in enumerate_chains(e, &k).unwrap() {
                let lam = hodge(c.top()).unwrap();
                if lam.j == 0 {
                    continue;
                }
                let (fam, _) = hodge_raise(&c).unwrap();
                assert_eq!(fam.generic_label().unwrap().label.lambda, lam.raised().unwrap());
            }
        }
    }

    #[test]
    fn worked_example_pattern() {
        let k = FieldCtx::prime(2).unwrap();
        let kt = k.rational_t();
        let m = |c, d| monomial(&k, 3, c, d);
        let c = PRChain::from_generators(
            &k,
            3,
            &[vec![m(1, 2)], vec![m(1, 2), m(0, 2)], vec![m(1, 2), m(0, 2), m(1, 1)]],
        )
        .unwrap();
        let (_, tr) = hodge_raise(&c).unwrap();
        assert_eq!(tr.k0, 2);
        let t = kt.t().unwrap();
        let lv = |r: &Row| LaurentVec::from_row(&kt, 3, r);
        let v2 = lv(&m(0, 2)).add_scaled(&kt, &lv(&m(1, 1)), &t);
        assert_eq!(tr.deformed[0], v2);
        let v3 = lv(&m(1, 1)).add_scaled(&kt, &lv(&m(0, 1)), &t).add_scaled(&kt, &lv(&m(1, 0)), &kt.mul(&t, &t));
        assert_eq!(tr.deformed[1], v3);
        assert_eq!(tr.j, vec![1]);
    }
}
