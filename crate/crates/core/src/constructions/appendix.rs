//! The six-point tile of `Z_6^4` that has a universal spectrum `U` but no
//! Lagarias–Szabó set.

use serde::Serialize;

use super::data;
use crate::cover::{six_cycle_conclusion, verify_facts, ProofTree, DEFAULT_DEPTH};
use crate::cyclotomic::zero_set;
use crate::error::{Error, Result};
use crate::group::{difference_set, Group, PointSet};
use crate::spectral::{is_spectrum, no_lagarias_szabo_via_duality, DualityCertificate};
use crate::tiling::{enumerate_complements_with, Branching};

pub const APPENDIX_MATRICES: [&str; 4] = ["APPENDIX_T", "APPENDIX_L", "APPENDIX_P", "APPENDIX_U0"];

/// Number of complements found by search and checked against `U`.
pub const CORROBORATING_COMPLEMENTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeSummary {
    pub x: Vec<u32>,
    pub closed: bool,
    pub nodes: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSummary {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub immediate_contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixCertificate {
    pub u_size: usize,
    pub u_difference_closed: bool,
    pub u0: Vec<Vec<u32>>,
    pub u1_size: usize,
    pub fact1_point: Vec<u32>,
    pub fact1_candidates: Vec<Vec<u32>>,
    pub fact2: Vec<TreeSummary>,
    pub fact3: Vec<PairSummary>,
    pub cycle_length: u64,
    pub inner_sums: usize,
    pub inner_sums_vanish: bool,
    pub cycles_per_complement: usize,
    pub duality: DualityCertificate,
    pub corroborating_complements: Vec<usize>,
    pub transcript: Vec<String>,
}

pub struct Appendix {
    pub certificate: AppendixCertificate,
    /// Fact 2 proof trees, one per element of `P`.
    pub trees: Vec<ProofTree>,
}

fn refuse(step: &str, detail: impl std::fmt::Display) -> Error {
    Error::Verification(format!("{step}: {detail}"))
}

pub struct AppendixInputs {
    pub tile: PointSet,
    pub spectrum: PointSet,
    pub p_set: PointSet,
    pub u0: PointSet,
}

impl AppendixInputs {
    pub fn builtin() -> Result<Self> {
        let d = data::builtin()?;
        Ok(AppendixInputs {
            tile: d.get("APPENDIX_T")?.point_set()?,
            spectrum: d.get("APPENDIX_L")?.point_set()?,
            p_set: d.get("APPENDIX_P")?.point_set()?,
            u0: d.get("APPENDIX_U0")?.point_set()?,
        })
    }
}

pub fn verify_appendix() -> Result<Appendix> {
    verify_appendix_with(&AppendixInputs::builtin()?)
}

pub fn verify_appendix_with(inputs: &AppendixInputs) -> Result<Appendix> {
    let t = &inputs.tile;
    let g: &Group = t.group();
    if g.moduli().iter().any(|&n| n != 6) || g.rank() != 4 {
        return Err(Error::Precondition(format!("expected Z_6^4, got {g}")));
    }
    let u = PointSet::new(g, (0..g.order()).filter(|&x| g.coords(x).iter().sum::<u32>() % 6 == 0));
    if u.len() != 216 {
        return Err(refuse("U", format!("|U| = {}", u.len())));
    }
    let u_difference_closed = difference_set(&u)? == u;
    if !u_difference_closed {
        return Err(refuse("U", "U - U != U"));
    }
    let zt = zero_set(t)?;
    let u0 = PointSet::new(g, u.iter().filter(|&v| zt.contains(v)));
    if u0 != inputs.u0 {
        return Err(refuse("U0", format!("U ∩ Z_T = {u0:?}")));
    }
    let u1_size = u.len() - u0.len();

    let fact1_point = g.reduce(&[4, 4, 4, 4])?;
    let facts = verify_facts(t, &inputs.p_set, DEFAULT_DEPTH, Some(fact1_point))?;
    if !facts.all_hold() {
        return Err(refuse("facts", format!(
            "fact 1: {}, fact 2 closed: {:?}, fact 3: {:?}",
            facts.fact1_holds,
            facts.fact2.iter().map(|(_, r)| r.is_closed()).collect::<Vec<_>>(),
            facts.fact3
        )));
    }
    let orders: Vec<u64> = inputs.p_set.iter().map(|x| g.element_order(x)).collect();
    if orders.iter().any(|&o| o != 6) {
        return Err(refuse("cycles", format!("element orders {orders:?}")));
    }
    let cycles = six_cycle_conclusion(t, &inputs.p_set, &u0)?;
    if !cycles.all_vanish {
        return Err(refuse("six cycles", "an inner sum does not vanish"));
    }
    let cycles_per_complement = cycles.cycles_per_complement.ok_or_else(|| refuse("six cycles", "uneven split"))?;

    let duality = no_lagarias_szabo_via_duality(t, &inputs.spectrum)?;

    let found = enumerate_complements_with(t, CORROBORATING_COMPLEMENTS, Branching::FewestCandidates)?;
    if found.complements.len() < CORROBORATING_COMPLEMENTS {
        return Err(refuse("corroboration", format!("only {} complements found", found.complements.len())));
    }
    let mut corroborating = Vec::new();
    for c in &found.complements {
        if !is_spectrum(c, &u)?.accepted {
            return Err(refuse("corroboration", "a found complement does not accept U"));
        }
        corroborating.push(c.len());
    }

    let fmt = |p: usize| g.coords(p);
    let fact2: Vec<TreeSummary> = facts
        .fact2
        .iter()
        .map(|(x, r)| TreeSummary {
            x: fmt(*x),
            closed: r.is_closed(),
            nodes: r.tree().root.size(),
            depth: r.tree().root.depth(),
        })
        .collect();
    let fact3 = facts
        .fact3
        .iter()
        .map(|&(x, y, c)| PairSummary { x: fmt(x), y: fmt(y), immediate_contradiction: c })
        .collect();
    let max_nodes = fact2.iter().map(|s| s.nodes).max().unwrap_or(0);
    let transcript = vec![
        "U = {u : u1 + u2 + u3 + u4 = 0 mod 6}, |U| = 216, U - U = U".into(),
        format!("U0 = U ∩ Z_T is the {} permutations of (2,2,4,4); U1 has {} elements", u0.len(), u1_size),
        "U1 \\ {0} lies outside Z_T, so inside Z_T' for every complement T' (Fourier tiling condition)".into(),
        "fact 1: under T' ∋ 0 the point (4,4,4,4) has exactly the candidates P".into(),
        format!("fact 2: four closed proof trees (largest {max_nodes} nodes)"),
        "fact 3: two successors contradict immediately".into(),
        format!(
            "every x in P has order 6, so every complement splits into {cycles_per_complement} disjoint 6-cycles"
        ),
        format!("all {} inner sums vanish, so U0 ⊂ Z_T' for every complement T'", cycles.sums.len()),
        "U is a universal spectrum of T".into(),
        format!(
            "L is a spectrum of T inside a subgroup of order {}; no S with |S| = 216 and S - S ⊂ Z_T^c exists",
            duality.subgroup_order
        ),
        format!("{} complements found by search each accept U", corroborating.len()),
    ];
    let trees = facts.fact2.iter().map(|(_, r)| r.tree().clone()).collect();
    Ok(Appendix {
        certificate: AppendixCertificate {
            u_size: u.len(),
            u_difference_closed,
            u0: u0.coords_rows(),
            u1_size,
            fact1_point: fmt(fact1_point),
            fact1_candidates: inputs.p_set.coords_rows(),
            fact2,
            fact3,
            cycle_length: 6,
            inner_sums: cycles.sums.len(),
            inner_sums_vanish: cycles.all_vanish,
            cycles_per_complement,
            duality,
            corroborating_complements: corroborating,
            transcript,
        },
        trees,
    })
}
