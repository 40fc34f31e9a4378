//! Exhaustive classification of chains by stratum label, emptiness tables
//! and the universal checks that hold chain by chain.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chains::{enumerate_chains, PRChain};
use crate::dieudonne::DieudonneModel;
use crate::error::{Error, Result};
use crate::invariants::{block_partition, format_set, hodge, mi_vanishes, stratum_label, HodgePair, StratumLabel};
use crate::scalar::FieldCtx;

/// Nonempty `T`-sets per Hodge pair.
pub type EmptinessTable = BTreeMap<HodgePair, BTreeSet<BTreeSet<usize>>>;

/// Point counts of every stratum label over one finite field.
#[derive(Clone, Debug)]
pub struct Census {
    pub e: usize,
    pub ctx: FieldCtx,
    pub counts: BTreeMap<StratumLabel, u64>,
    pub total: u64,
}

/// Chains grouped by their label, each group sorted.
pub type Classification = BTreeMap<StratumLabel, Vec<PRChain>>;

/// Labels every enumerated chain (with `m1` when a model is given).
pub fn classify(e: usize, ctx: &FieldCtx, model: Option<&DieudonneModel>) -> Result<Classification> {
    let chains = enumerate_chains(e, ctx)?;
    classify_chains(chains, model)
}

pub fn classify_chains(chains: Vec<PRChain>, model: Option<&DieudonneModel>) -> Result<Classification> {
    let labels: Vec<StratumLabel> = chains.par_iter().map(|c| stratum_label(c, model)).collect::<Result<_>>()?;
    let mut out = Classification::new();
    for (c, l) in chains.into_iter().zip(labels) {
        out.entry(l).or_default().push(c);
    }
    Ok(out)
}

/// The census with `m1` unknown.
pub fn census(e: usize, ctx: &FieldCtx) -> Result<Census> {
    census_with_model(e, ctx, None)
}

pub fn census_with_model(e: usize, ctx: &FieldCtx, model: Option<&DieudonneModel>) -> Result<Census> {
    Ok(Census::from_classification(e, ctx, &classify(e, ctx, model)?))
}

impl Census {
    pub fn from_classification(e: usize, ctx: &FieldCtx, cls: &Classification) -> Census {
        let counts: BTreeMap<StratumLabel, u64> = cls.iter().map(|(l, v)| (l.clone(), v.len() as u64)).collect();
        let total = counts.values().sum();
        Census { e, ctx: ctx.clone(), counts, total }
    }

    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    /// `(q+1)^e`, the number of chains.
    pub fn expected_total(&self) -> u64 {
        (self.q() as u64 + 1).pow(self.e as u32)
    }

    pub fn emptiness_table(&self) -> EmptinessTable {
        let mut out = EmptinessTable::new();
        for l in self.counts.keys() {
            out.entry(l.lambda).or_default().insert(l.t.clone());
        }
        out
    }

    pub fn count_lambda(&self, lambda: &HodgePair) -> u64 {
        self.counts.iter().filter(|(l, _)| l.lambda == *lambda).map(|(_, c)| c).sum()
    }

    pub fn count_t(&self, t: &BTreeSet<usize>) -> u64 {
        self.counts.iter().filter(|(l, _)| l.t == *t).map(|(_, c)| c).sum()
    }

    /// Violations of the census invariants: the total and the absence of
    /// `((e,0), T)` with `T` nonempty.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.total != self.expected_total() {
            out.push(format!("total {} differs from (q+1)^e = {}", self.total, self.expected_total()));
        }
        for l in self.counts.keys() {
            if l.lambda == (HodgePair { i: self.e, j: 0 }) && !l.t.is_empty() {
                out.push(format!("label {l} is populated"));
            }
        }
        out
    }

    /// Rows `e, q, lambda, T, m1, count` in label order.
    pub fn csv_rows(&self) -> Vec<[String; 6]> {
        self.counts
            .iter()
            .map(|(l, c)| {
                [
                    self.e.to_string(),
                    self.q().to_string(),
                    l.lambda.to_string(),
                    format_set(&l.t),
                    l.m1.code().to_string(),
                    c.to_string(),
                ]
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e,
            "q": self.q(),
            "field": self.ctx.descriptor_json(),
            "total": self.total,
            "counts": self.counts.iter().map(|(l, c)| json!({"label": l.to_json(), "count": c})).collect::<Vec<_>>(),
        })
    }
}

/// The nonempty table claimed for `e = 4`: `(4,0)` only with `T = ∅`;
/// `(3,1)` with `{2},{3},{4},{2,3},{3,4}`; `(2,2)` with `{3},{2,4},{4},{2,3,4}`.
pub fn claimed_table_e4() -> EmptinessTable {
    let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<usize>>();
    let mut t = EmptinessTable::new();
    t.insert(HodgePair { i: 4, j: 0 }, [set(&[])].into_iter().collect());
    t.insert(
        HodgePair { i: 3, j: 1 },
        [set(&[2]), set(&[3]), set(&[4]), set(&[2, 3]), set(&[3, 4])].into_iter().collect(),
    );
    t.insert(HodgePair { i: 2, j: 2 }, [set(&[3]), set(&[2, 4]), set(&[4]), set(&[2, 3, 4])].into_iter().collect());
    t
}

/// Differences between an expected and a computed table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableDiff {
    /// Expected nonempty, found empty.
    pub missing: Vec<(HodgePair, BTreeSet<usize>)>,
    /// Found nonempty, expected empty.
    pub unexpected: Vec<(HodgePair, BTreeSet<usize>)>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }

    pub fn describe(&self) -> String {
        let f = |v: &[(HodgePair, BTreeSet<usize>)]| {
            v.iter().map(|(l, t)| format!("{l}{}", format_set(t))).collect::<Vec<_>>().join(" ")
        };
        format!("missing: [{}]; unexpected: [{}]", f(&self.missing), f(&self.unexpected))
    }
}

pub fn compare_tables(expected: &EmptinessTable, computed: &EmptinessTable) -> TableDiff {
    let flat = |t: &EmptinessTable| -> BTreeSet<(HodgePair, BTreeSet<usize>)> {
        t.iter().flat_map(|(l, ts)| ts.iter().map(move |s| (*l, s.clone()))).collect()
    };
    let (a, b) = (flat(expected), flat(computed));
    TableDiff { missing: a.difference(&b).cloned().collect(), unexpected: b.difference(&a).cloned().collect() }
}

pub fn render_table(t: &EmptinessTable) -> String {
    t.iter()
        .rev()
        .map(|(l, ts)| format!("{l}: {}", ts.iter().map(format_set).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Outcome of the chain-by-chain checks on a full census.
#[derive(Clone, Debug, Default)]
pub struct UniversalChecks {
    pub chains: usize,
    /// `(chain, i)` checked with `m_i = 0`.
    pub vanishing_cases: usize,
    /// `m_i = 0` but the Hodge pair did not drop by `(1,1)`.
    pub drop_failures: Vec<String>,
    /// The Hodge pair drops by `(1,1)` while `m_i != 0`.
    pub converse_counterexamples: Vec<String>,
    /// Chains where `λ = (e,0)`, `T = ∅` and "top is cyclic" disagree.
    pub equivalence_failures: Vec<String>,
}

impl UniversalChecks {
    pub fn ok(&self) -> bool {
        self.drop_failures.is_empty() && self.equivalence_failures.is_empty() && !self.converse_counterexamples.is_empty()
    }
}

fn sub_pair(a: HodgePair, b: HodgePair) -> Option<(usize, usize)> {
    Some((a.i.checked_sub(b.i)?, a.j.checked_sub(b.j)?))
}

/// Checks, on every chain of the enumeration, that `m_i = 0` forces
/// `hodge(ω^(i)) = hodge(ω^(i-2)) - (1,1)`, collects chains where the drop
/// happens with `m_i != 0`, and checks `λ = (e,0) ⟺ T = ∅ ⟺ ω^(e)` cyclic.
pub fn universal_checks(e: usize, ctx: &FieldCtx) -> Result<UniversalChecks> {
    let chains = enumerate_chains(e, ctx)?;
    let per: Vec<UniversalChecks> = chains.par_iter().map(|c| check_chain(c)).collect::<Result<_>>()?;
    let mut out = UniversalChecks { chains: chains.len(), ..Default::default() };
    for p in per {
        out.vanishing_cases += p.vanishing_cases;
        out.drop_failures.extend(p.drop_failures);
        out.converse_counterexamples.extend(p.converse_counterexamples);
        out.equivalence_failures.extend(p.equivalence_failures);
    }
    Ok(out)
}

fn check_chain(c: &PRChain) -> Result<UniversalChecks> {
    let e = c.e();
    let mut out = UniversalChecks::default();
    let mut t = BTreeSet::new();
    for i in 2..=e {
        let drop = sub_pair(hodge(&c.level(i - 2))?, hodge(&c.level(i))?) == Some((1, 1));
        if mi_vanishes(c, i)? {
            t.insert(i);
            out.vanishing_cases += 1;
            if !drop {
                out.drop_failures.push(format!("{c:?} at i = {i}"));
            }
        } else if drop {
            out.converse_counterexamples.push(format!("{c:?} at i = {i}"));
        }
    }
    let free = hodge(c.top())? == (HodgePair { i: e, j: 0 });
    let cyclic = block_partition(&c.level(0), c.top())? == vec![e];
    if free != t.is_empty() || free != cyclic {
        out.equivalence_failures.push(format!("{c:?}: λ=(e,0) {free}, T empty {}, cyclic {cyclic}", t.is_empty()));
    }
    Ok(out)
}

/// Distinct top levels of all chains, grouped by Hodge pair.
pub fn lattices_by_hodge(e: usize, ctx: &FieldCtx) -> Result<BTreeMap<HodgePair, Vec<crate::umodule::Subspace>>> {
    let chains = enumerate_chains(e, ctx)?;
    let mut tops: BTreeMap<Vec<u32>, crate::umodule::Subspace> = BTreeMap::new();
    for c in chains {
        tops.entry(c.top().key()).or_insert_with(|| c.top().clone());
    }
    let mut out: BTreeMap<HodgePair, Vec<crate::umodule::Subspace>> = BTreeMap::new();
    for w in tops.into_values() {
        out.entry(hodge(&w)?).or_default().push(w);
    }
    Ok(out)
}

pub(crate) fn same_field(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}
