//! Deciding whether a skeleton is a crossed product.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::tower::{lift_residue_subfield, maximal_subfield_of_C, ResiduePart, SubfieldSkeleton};
use super::{Center, DivAlgSkeleton, ResidueAlgebra, ResidueKind, SkeletonError};
use crate::abelian_ext::{splitting_cover_search, AbelianExtQ, QPlace};
use crate::config::Bounds;
use crate::location::{classify, Fiber, FiberStatus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Crossed,
    Unknown { bound: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rationale {
    FiniteResidueField,
    RealClosedResidueField,
    CdAtMostOne,
    LocalResidueField,
    ResidueAlgebraIsField,
    AbelianSplittingCover,
    FiberAllCrossed,
    NoCoverWithinBound,
}

impl Rationale {
    pub fn tag(&self) -> &'static str {
        match self {
            Rationale::FiniteResidueField => "finite-residue-field",
            Rationale::RealClosedResidueField => "real-closed-residue-field",
            Rationale::CdAtMostOne => "residue-cd-at-most-one",
            Rationale::LocalResidueField => "local-residue-field-unramified-composite",
            Rationale::ResidueAlgebraIsField => "residue-algebra-is-a-field",
            Rationale::AbelianSplittingCover => "abelian-splitting-cover",
            Rationale::FiberAllCrossed => "fiber-cyclic-of-infinite-height",
            Rationale::NoCoverWithinBound => "no-splitting-cover-within-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedWitness {
    pub cover: Option<AbelianExtQ>,
    pub subfield: SubfieldSkeleton,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedVerdict {
    pub verdict: Verdict,
    pub rationale: Rationale,
    pub witness: Option<CrossedWitness>,
    pub notes: Vec<String>,
}

/// A residue maximal subfield Galois over `F̄` is lifted along `T` to a
/// Galois maximal graded subfield.
pub fn crossed_product_test(d: &DivAlgSkeleton, bounds: &Bounds) -> Result<CrossedVerdict, SkeletonError> {
    let a = d.analyze()?;
    let dbar = a.report.deg_residue;
    let center = a.report.center_degree;
    let mut notes = Vec::new();
    let lift = |m0: ResiduePart, notes: &mut Vec<String>| -> Option<SubfieldSkeleton> {
        let t = match maximal_subfield_of_C(d) {
            Ok(t) => t,
            Err(e) => {
                notes.push(format!("no witness subfield: {e}"));
                return None;
            }
        };
        match lift_residue_subfield(d, &m0, &t) {
            Ok(m) => Some(m),
            Err(e) => {
                notes.push(format!("no witness subfield: {e}"));
                None
            }
        }
    };
    let abstract_part = ResiduePart::Abstract { degree: center * dbar, meet_center: center, galois: true, normal: true };
    let fast = match d.residue {
        ResidueKind::GlobalQ => None,
        ResidueKind::Finite { .. } => Some(Rationale::FiniteResidueField),
        ResidueKind::RealClosed => Some(Rationale::RealClosedResidueField),
        ResidueKind::CdLeOne => Some(Rationale::CdAtMostOne),
        ResidueKind::LocalField { .. } => Some(Rationale::LocalResidueField),
    };
    if let Some(rationale) = fast {
        let witness = lift(abstract_part, &mut notes).map(|m| CrossedWitness { cover: None, subfield: m });
        return Ok(CrossedVerdict { verdict: Verdict::Crossed, rationale, witness, notes });
    }
    let (z0, beta) = match (&d.center, &d.residue_algebra) {
        (Center::Abelian(z), ResidueAlgebra::Class(b)) => (z, b),
        _ => unreachable!("checked by validation"),
    };
    if dbar == 1 {
        let witness = lift(ResiduePart::Field(z0.clone()), &mut notes)
            .map(|m| CrossedWitness { cover: Some(z0.clone()), subfield: m });
        return Ok(CrossedVerdict {
            verdict: Verdict::Crossed,
            rationale: Rationale::ResidueAlgebraIsField,
            witness,
            notes,
        });
    }
    let mut reqs: BTreeMap<QPlace, u64> = BTreeMap::new();
    for (w, _) in beta.invariants() {
        let e = reqs.entry(w.base).or_insert(1);
        *e = e.lcm(&beta.local_index(w));
    }
    let reqs: Vec<(QPlace, u64)> = reqs.into_iter().collect();
    match splitting_cover_search(z0, dbar, &reqs, false, bounds.conductor) {
        Ok(l) => {
            let witness = lift(ResiduePart::Field(l.clone()), &mut notes)
                .map(|m| CrossedWitness { cover: Some(l.clone()), subfield: m });
            Ok(CrossedVerdict { verdict: Verdict::Crossed, rationale: Rationale::AbelianSplittingCover, witness, notes })
        }
        Err(_) => {
            notes.push(format!("no abelian splitting cover of degree {dbar} with conductor ≤ {}", bounds.conductor));
            let fiber = Fiber { z: z0.clone(), beta0: beta.clone(), ratio: a.report.deg_d / dbar };
            let status = classify(&fiber, bounds).map(|v| v.status);
            match status {
                Ok(FiberStatus::AllCrossed) => Ok(CrossedVerdict {
                    verdict: Verdict::Crossed,
                    rationale: Rationale::FiberAllCrossed,
                    witness: None,
                    notes,
                }),
                other => {
                    if let Ok(s) = other {
                        notes.push(format!("fiber classification: {}", s.name()));
                    }
                    Ok(CrossedVerdict {
                        verdict: Verdict::Unknown { bound: bounds.conductor },
                        rationale: Rationale::NoCoverWithinBound,
                        witness: None,
                        notes,
                    })
                }
            }
        }
    }
}
