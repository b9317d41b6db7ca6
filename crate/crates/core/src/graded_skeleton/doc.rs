//! JSON documents for skeletons.

use serde::{Deserialize, Serialize};

use super::{Center, DivAlgSkeleton, GaloisElement, ResidueAlgebra, ResidueKind, SkeletonError};
use crate::abelian_ext::{AbelianExtDoc, AbelianExtQ};
use crate::brauer_q::{BrauerClass, BrauerClassDoc};
use crate::qlattice::{GradeGroup, GradeGroupDoc, QuotientShape};
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CenterDoc {
    Abelian(AbelianExtDoc),
    Abstract { degree: u64, galois: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaloisElementDoc {
    Unit(u64),
    Coords(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResidueAlgebraDoc {
    Class(BrauerClassDoc),
    Abstract { degree: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonDoc {
    pub residue: ResidueKind,
    #[serde(rename = "gammaF")]
    pub gamma_f: GradeGroupDoc,
    #[serde(rename = "gammaD")]
    pub gamma_d: GradeGroupDoc,
    #[serde(rename = "Z0")]
    pub z0: CenterDoc,
    pub theta: Vec<(Vec<String>, GaloisElementDoc)>,
    pub residue_class: ResidueAlgebraDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<String>>>,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn parse_vec(v: &[String]) -> Result<Vec<Q>, SkeletonError> {
    v.iter()
        .map(|s| parse_q(s).map_err(|e| SkeletonError::Other(e.to_string())))
        .collect()
}

impl DivAlgSkeleton {
    pub fn to_doc(&self) -> SkeletonDoc {
        SkeletonDoc {
            residue: self.residue,
            gamma_f: self.gamma_f.to_doc(),
            gamma_d: self.gamma_d.to_doc(),
            z0: match &self.center {
                Center::Abelian(z) => CenterDoc::Abelian(z.to_doc()),
                Center::Abstract { galois } => CenterDoc::Abstract {
                    degree: galois.order(),
                    galois: galois.invariant_factors.clone(),
                },
            },
            theta: self
                .theta
                .iter()
                .map(|(v, g)| {
                    let g = match g {
                        GaloisElement::Unit(u) => GaloisElementDoc::Unit(*u),
                        GaloisElement::Coords(c) => GaloisElementDoc::Coords(c.clone()),
                    };
                    (strings(v), g)
                })
                .collect(),
            residue_class: match &self.residue_algebra {
                ResidueAlgebra::Class(b) => ResidueAlgebraDoc::Class(b.to_doc()),
                ResidueAlgebra::Abstract { degree } => ResidueAlgebraDoc::Abstract { degree: *degree },
            },
            pairing: self.pairing.as_ref().map(|a| a.iter().map(|r| strings(r)).collect()),
        }
    }

    /// Parses without validating; call `analyze` or `validate` afterwards.
    pub fn from_doc(doc: &SkeletonDoc) -> Result<Self, SkeletonError> {
        let gamma_f = GradeGroup::from_doc(&doc.gamma_f)?;
        let gamma_d = GradeGroup::from_doc(&doc.gamma_d)?;
        let center = match &doc.z0 {
            CenterDoc::Abelian(a) => {
                Center::Abelian(AbelianExtQ::from_doc(a).map_err(|e| SkeletonError::Other(e.to_string()))?)
            }
            CenterDoc::Abstract { degree, galois } => {
                if galois.iter().any(|&f| f < 2) || galois.windows(2).any(|w| w[1] % w[0] != 0) {
                    return Err(SkeletonError::Other("galois factors must form a divisibility chain > 1".into()));
                }
                let shape = QuotientShape { invariant_factors: galois.clone() };
                if shape.order() != *degree {
                    return Err(SkeletonError::Other("Z0 degree differs from its Galois group order".into()));
                }
                Center::Abstract { galois: shape }
            }
        };
        let mut theta = Vec::new();
        for (v, g) in &doc.theta {
            let g = match g {
                GaloisElementDoc::Unit(u) => GaloisElement::Unit(*u),
                GaloisElementDoc::Coords(c) => GaloisElement::Coords(c.clone()),
            };
            theta.push((parse_vec(v)?, g));
        }
        let residue_algebra = match &doc.residue_class {
            ResidueAlgebraDoc::Class(c) => {
                ResidueAlgebra::Class(BrauerClass::from_doc(c).map_err(|e| SkeletonError::Other(e.to_string()))?)
            }
            ResidueAlgebraDoc::Abstract { degree } => ResidueAlgebra::Abstract { degree: *degree },
        };
        let pairing = match &doc.pairing {
            None => None,
            Some(rows) => Some(rows.iter().map(|r| parse_vec(r)).collect::<Result<Vec<_>, _>>()?),
        };
        Ok(DivAlgSkeleton {
            residue: doc.residue,
            gamma_f,
            gamma_d,
            center,
            theta,
            residue_algebra,
            pairing,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn round_trip() {
        for d in [
            totally_ramified(),
            semiramified(),
            mixed(ResidueAlgebra::Class(quaternion_over_qi())),
        ] {
            let s = serde_json::to_string(&d.to_doc()).unwrap();
            let back: SkeletonDoc = serde_json::from_str(&s).unwrap();
            let d2 = DivAlgSkeleton::from_doc(&back).unwrap();
            assert_eq!(d2, d);
            assert_eq!(serde_json::to_string(&d2.to_doc()).unwrap(), s);
        }
        let s = r#"{"residue":{"kind":"Finite","q":7},"gammaF":{"rank":1,"generators":[["1/1"]]},"gammaD":{"rank":1,"generators":[["1/2"]]},"Z0":{"degree":2,"galois":[2]},"theta":[[["1/2"],[1]]],"residue_class":{"degree":1}}"#;
        let doc: SkeletonDoc = serde_json::from_str(s).unwrap();
        let d = DivAlgSkeleton::from_doc(&doc).unwrap();
        assert_eq!(super::super::validate(&d).unwrap().deg_d, 2);
        assert_eq!(serde_json::to_string(&d.to_doc()).unwrap(), s);
    }
}
