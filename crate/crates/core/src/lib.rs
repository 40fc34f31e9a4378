//! Chains of u-stable subspaces of `(K[u]/u^e)^2` over finite fields: exact
//! enumeration, linear and sigma-linear invariants, one-parameter
//! deformations and the stratification they define.

pub mod chains;
pub mod deformation;
pub mod dieudonne;
pub mod error;
pub mod invariants;
pub mod scalar;
pub mod strata;
pub mod umodule;

pub use chains::{
    act, conv_denormalize, conv_normalize, enumerate_chains, fiber_chains, orbits, standard_free_chain, validate,
    ConvChain, OrbitClass, PRChain, TruncatedGroupElement, ValidationReport,
};
pub use dieudonne::{ag_fixed_point_witness, ag_witness, f_one, m1_vanishes, DieudonneModel, ModelWitness};
pub use error::{Error, Result};
pub use invariants::{
    adm_poset, block_partition, hodge, mi_vanishes, nilpotency_index, orbit_signature, product_poset, stratum_label, AdmPoset,
    HodgePair, OrbitSignature, ProductPoset, StratumLabel, M1,
};
pub use scalar::{FieldCtx, Scalar};
pub use umodule::{Row, Subspace};
