//! The two `K(t)`-linear recipes at `e = 4`: moving `ω^(2)` off `E[u]`
//! and moving `ω^(4)` off `E[u^2]` inside `u^{-1} ω^(3)`.

use super::{all_vectors, lifted_bases, t_times, FamilyChain};
use crate::chains::PRChain;
use crate::error::{Error, Result};
use crate::invariants::{linear_label, HodgePair, StratumLabel};
use crate::umodule::{row_add, row_lift, Row, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearVariant {
    /// `((2,2),{2,3,4})` to generic `((2,2),{3})`:
    /// `ω̃^(2) = ω^(1) ⊕ <v_2 + t v>` with `v ∈ u^{-1} ω^(1) \ E[u]`.
    CollapseToM3Only,
    /// `((2,2),{3})` to generic `((3,1),{3})`:
    /// `ω̃^(4) = ω^(3) ⊕ <v_4 + t v>` with `v ∈ u^{-1} ω^(3) \ E[u^2]`.
    RaiseWithinM3,
}

impl LinearVariant {
    pub fn source(&self) -> StratumLabel {
        match self {
            LinearVariant::CollapseToM3Only => StratumLabel::new(HodgePair { i: 2, j: 2 }, [2, 3, 4]),
            LinearVariant::RaiseWithinM3 => StratumLabel::new(HodgePair { i: 2, j: 2 }, [3]),
        }
    }

    pub fn target(&self) -> StratumLabel {
        match self {
            LinearVariant::CollapseToM3Only => StratumLabel::new(HodgePair { i: 2, j: 2 }, [3]),
            LinearVariant::RaiseWithinM3 => StratumLabel::new(HodgePair { i: 3, j: 1 }, [3]),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LinearVariant::CollapseToM3Only => "linear-collapse",
            LinearVariant::RaiseWithinM3 => "linear-raise",
        }
    }
}

/// Auxiliary directions: basis vectors of `space` outside `avoid`, then all
/// remaining vectors of `space` outside `avoid`.
pub(super) fn aux_candidates(space: &Subspace, avoid: &Subspace) -> Result<Vec<Row>> {
    let mut out: Vec<Row> = space.basis().iter().filter(|r| !avoid.contains_vec(r)).cloned().collect();
    for v in all_vectors(space)? {
        if !avoid.contains_vec(&v) && !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// The recipe as an exact family over `K(t)`; the generic label is checked.
pub fn linear_recipe(c: &PRChain, variant: LinearVariant) -> Result<FamilyChain> {
    let e = c.e();
    if e != 4 {
        return Err(Error::Precondition(format!("the linear recipes need e = 4, got {e}")));
    }
    let k = c.ctx();
    let label = linear_label(c.levels())?;
    if label != variant.source() {
        return Err(Error::Precondition(format!("{} needs label {}, got {label}", variant.name(), variant.source())));
    }
    let kt = k.rational_t();
    let (moved, low, space, avoid) = match variant {
        LinearVariant::CollapseToM3Only => (2, c.level(1), c.level(1).u_preimage()?, Subspace::kernel_u_pow(k, e, 1)),
        LinearVariant::RaiseWithinM3 => (4, c.level(3), c.level(3).u_preimage()?, Subspace::kernel_u_pow(k, e, 2)),
    };
    let v = c.level(moved).complement_vector(&low).expect("levels grow by one");
    for alpha in aux_candidates(&space, &avoid)? {
        let mut gens = lifted_bases(c, &kt);
        let mut g: Vec<Row> = low.basis().iter().map(|r| row_lift(&kt, r)).collect();
        g.push(row_add(&kt, &row_lift(&kt, &v), &t_times(&kt, &row_lift(&kt, &alpha))?));
        gens[moved - 1] = g;
        let Ok(fam) = FamilyChain::exact(k, e, gens) else { continue };
        if fam.specialize() != *c {
            continue;
        }
        if fam.generic_label()?.label.linear() == variant.target() {
            return Ok(fam.with_recipe(variant.name()));
        }
    }
    Err(Error::NoValidAuxVector(format!("no direction outside the avoided kernel works for {}", variant.name())))
}
