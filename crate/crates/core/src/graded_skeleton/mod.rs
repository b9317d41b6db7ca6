//! Skeletons of tame division algebras over Henselian fields: value groups,
//! the residue algebra with its center, and the action `θ` of the value
//! group on that center.

mod crossed;
mod doc;
mod tower;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

pub use crossed::{crossed_product_test, CrossedVerdict, CrossedWitness, Rationale, Verdict};
pub use doc::{CenterDoc, GaloisElementDoc, ResidueAlgebraDoc, SkeletonDoc};
pub use tower::{
    canonical_tower, entwine, lift_residue_subfield, maximal_subfield_of_C, residue_maximality_test,
    validate_subfield, CanonicalTower, EntwineResult, ResiduePart, SubfieldFlags, SubfieldSkeleton,
    TowerPiece,
};

use crate::abelian_ext::{units, AbelianExtQ, GaloisGroup};
use crate::brauer_q::BrauerClass;
use crate::intmat::{self, Matrix};
use crate::qlattice::{lattice_index, GradeGroup, LatticeError, LatticeQuotient, QuotientShape};
use crate::rational::{frac, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind")]
pub enum ResidueKind {
    GlobalQ,
    Finite { q: u64 },
    RealClosed,
    CdLeOne,
    LocalField { p: u64, f: u64 },
}

impl ResidueKind {
    pub fn check(&self) -> Result<(), String> {
        match *self {
            ResidueKind::Finite { q } => {
                let f = crate::qlattice::factorize(q);
                if f.len() != 1 {
                    return Err(format!("{q} is not a prime power"));
                }
            }
            ResidueKind::LocalField { p, f } => {
                if !units::is_prime(p) {
                    return Err(format!("{p} is not a prime"));
                }
                if f == 0 {
                    return Err("residue degree must be at least 1".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResidueKind::GlobalQ => "GlobalQ",
            ResidueKind::Finite { .. } => "Finite",
            ResidueKind::RealClosed => "RealClosed",
            ResidueKind::CdLeOne => "CdLeOne",
            ResidueKind::LocalField { .. } => "LocalField",
        }
    }
}

/// Center `Z(D̄)` of the residue algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    Abelian(AbelianExtQ),
    /// Only the Galois group over the residue field, by invariant factors.
    Abstract { galois: QuotientShape },
}

impl Center {
    pub fn degree(&self) -> u64 {
        match self {
            Center::Abelian(z) => z.degree(),
            Center::Abstract { galois } => galois.order(),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        match self {
            Center::Abelian(z) => z.is_cyclic(),
            Center::Abstract { galois } => galois.is_cyclic(),
        }
    }
}

/// An element of `Gal(Z₀/F̄)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisElement {
    Unit(u64),
    Coords(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueAlgebra {
    Class(BrauerClass),
    Abstract { degree: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivAlgSkeleton {
    pub residue: ResidueKind,
    pub gamma_f: GradeGroup,
    pub gamma_d: GradeGroup,
    pub center: Center,
    /// `θ` on generators of `Γ_D / Γ_F`.
    pub theta: Vec<(Vec<Q>, GaloisElement)>,
    pub residue_algebra: ResidueAlgebra,
    /// Antisymmetric matrix `A`; `<x, y> = x A yᵀ mod 1` on `ker θ / Γ_F`.
    pub pairing: Option<Vec<Vec<Q>>>,
}

/// One failed identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Structure(String),
    ResidueKind(String),
    GammaFNotInGammaD,
    ThetaOutsideGammaD(usize),
    ThetaBadElement(usize, String),
    ThetaGeneratorsIncomplete,
    ThetaNontrivialOnGammaF(usize),
    ThetaNotWellDefined,
    ThetaNotSurjective { image: u64, center: u64 },
    KernelIndexNotSquare(u64),
    ResidueClassBase,
    FundamentalEquality { lhs: u64, rhs: u64 },
    Tameness(u64),
    Pairing(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(s) => write!(f, "malformed skeleton: {s}"),
            Violation::ResidueKind(s) => write!(f, "residue kind: {s}"),
            Violation::GammaFNotInGammaD => write!(f, "Γ_F ⊆ Γ_D fails"),
            Violation::ThetaOutsideGammaD(i) => write!(f, "θ generator {i} is not in Γ_D"),
            Violation::ThetaBadElement(i, s) => write!(f, "θ value {i}: {s}"),
            Violation::ThetaGeneratorsIncomplete => {
                write!(f, "θ generators together with Γ_F must generate Γ_D")
            }
            Violation::ThetaNontrivialOnGammaF(i) => {
                write!(f, "θ must vanish on Γ_F, but generator {i} lies in Γ_F with nontrivial value")
            }
            Violation::ThetaNotWellDefined => {
                write!(f, "θ is not a homomorphism on Γ_D/Γ_F: a relation among generators maps nontrivially")
            }
            Violation::ThetaNotSurjective { image, center } => write!(
                f,
                "θ must be onto Gal(Z₀/F̄): |Γ_D : ker θ| = {image} but [Z₀:F̄] = {center}"
            ),
            Violation::KernelIndexNotSquare(k) => write!(
                f,
                "|ker θ : Γ_F| = {k} is not a perfect square, so deg D = deg D̄·|im θ|·√|ker θ : Γ_F| is not an integer"
            ),
            Violation::ResidueClassBase => write!(f, "the residue class must live over Z₀"),
            Violation::FundamentalEquality { lhs, rhs } => write!(
                f,
                "[D:F] = [D̄:F̄]·|Γ_D:Γ_F| fails: deg(D)^2 = {lhs} but [D̄:F̄]·|Γ_D:Γ_F| = {rhs}"
            ),
            Violation::Tameness(p) => {
                write!(f, "not tame: residue characteristic {p} divides |ker θ : Γ_F|")
            }
            Violation::Pairing(s) => write!(f, "pairing: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SkeletonError {
    #[error("invalid skeleton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("invalid subfield: {0}")]
    InvalidSubfield(String),
    #[error("subfield is not maximal: [M:F] = {dim}, deg D = {deg}")]
    NotMaximal { dim: u64, deg: u64 },
    #[error("no maximal isotropic subgroup of order {0} in ker θ / Γ_F")]
    NoLagrangian(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Other(String),
}

/// Degrees and groups derived from a valid skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub deg_d: u64,
    pub deg_residue: u64,
    pub image_order: u64,
    pub sqrt_kernel_index: u64,
    pub center_degree: u64,
    pub value_index: u64,
    /// `deg D` by the fundamental equality, the canonical tower, and the θ formula.
    pub deg_routes: [u64; 3],
}

/// θ in coordinates, with its kernel.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: ValidationReport,
    pub kernel: GradeGroup,
    /// `θ` of each canonical basis vector of `Γ_D`, in invariant-factor coordinates.
    pub theta_basis: Vec<Vec<i64>>,
    pub factors: Vec<u64>,
    pub galois: Option<GaloisGroup>,
}

impl Analysis {
    pub fn theta_of(&self, d: &DivAlgSkeleton, v: &[Q]) -> Option<Vec<i64>> {
        let c = d.gamma_d.coordinates(v)?;
        let k = self.factors.len();
        let mut out = vec![0i64; k];
        for (ci, row) in c.iter().zip(&self.theta_basis) {
            for j in 0..k {
                out[j] = (out[j] + ci * row[j]).rem_euclid(self.factors[j] as i64);
            }
        }
        Some(out)
    }

    pub fn deg_c(&self) -> u64 {
        self.report.sqrt_kernel_index
    }
}

pub fn isqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

pub(crate) fn pair(a: &[Vec<Q>], x: &[Q], y: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            s += xi * a[i][j] * yj;
        }
    }
    frac(s)
}

impl DivAlgSkeleton {
    pub fn rank(&self) -> usize {
        self.gamma_f.rank()
    }

    pub fn residue_degree(&self) -> u64 {
        match &self.residue_algebra {
            ResidueAlgebra::Class(b) => b.index(),
            ResidueAlgebra::Abstract { degree } => *degree,
        }
    }

    pub fn analyze(&self) -> Result<Analysis, SkeletonError> {
        let mut v = Vec::new();
        if let Err(s) = self.residue.check() {
            v.push(Violation::ResidueKind(s));
        }
        let r = self.rank();
        if self.gamma_d.rank() != r {
            return Err(SkeletonError::Invalid(vec![Violation::Structure(
                "Γ_F and Γ_D have different ranks".into(),
            )]));
        }
        if !self.gamma_d.contains(&self.gamma_f) {
            v.push(Violation::GammaFNotInGammaD);
            return Err(SkeletonError::Invalid(v));
        }
        let galois = match &self.center {
            Center::Abelian(z) => Some(z.galois_group()),
            Center::Abstract { .. } => None,
        };
        let factors: Vec<u64> = match (&self.center, &galois) {
            (_, Some(g)) => g.shape.invariant_factors.clone(),
            (Center::Abstract { galois }, None) => galois.invariant_factors.clone(),
            _ => unreachable!(),
        };
        let k = factors.len();
        let center_degree = self.center.degree();

        // generator coordinates and θ values
        let mut rows: Matrix = Vec::new();
        let mut values: Vec<Vec<i64>> = Vec::new();
        for (i, (vec, g)) in self.theta.iter().enumerate() {
            if vec.len() != r {
                v.push(Violation::Structure(format!("θ generator {i} has wrong length")));
                continue;
            }
            let Some(c) = self.gamma_d.coordinates(vec) else {
                v.push(Violation::ThetaOutsideGammaD(i));
                continue;
            };
            let val = match (g, &galois) {
                (GaloisElement::Unit(u), Some(gg)) => {
                    let n = match &self.center {
                        Center::Abelian(z) => z.conductor(),
                        _ => unreachable!(),
                    };
                    if u.gcd(&n) != 1 {
                        v.push(Violation::ThetaBadElement(i, format!("{u} is not a unit mod {n}")));
                        continue;
                    }
                    gg.coordinates(*u)
                }
                (GaloisElement::Unit(_), None) => {
                    v.push(Violation::ThetaBadElement(i, "abstract centers take coordinate vectors".into()));
                    continue;
                }
                (GaloisElement::Coords(c), _) => {
                    if c.len() != k {
                        v.push(Violation::ThetaBadElement(i, format!("expected {k} coordinates")));
                        continue;
                    }
                    c.iter().zip(&factors).map(|(x, &d)| x.rem_euclid(d as i64)).collect()
                }
            };
            if self.gamma_f.contains_vector(vec) && val.iter().any(|x| *x != 0) {
                v.push(Violation::ThetaNontrivialOnGammaF(i));
            }
            rows.push(c);
            values.push(val);
        }
        if !v.is_empty() {
            return Err(SkeletonError::Invalid(v));
        }
        for b in self.gamma_f.basis() {
            rows.push(self.gamma_d.coordinates(b).expect("Γ_F ⊆ Γ_D"));
            values.push(vec![0; k]);
        }
        // an empty list means θ is trivial
        if self.theta.is_empty() {
            for i in 0..r {
                rows.push((0..r).map(|j| (i == j) as i64).collect());
                values.push(vec![0; k]);
            }
        }
        let (h, u) = intmat::hnf(&rows);
        let ident = intmat::identity(r);
        if h[..r] != ident[..] {
            v.push(Violation::ThetaGeneratorsIncomplete);
            return Err(SkeletonError::Invalid(v));
        }
        let combine = |row: &[i64]| -> Vec<i64> {
            (0..k)
                .map(|j| {
                    let d = factors[j] as i64;
                    row.iter()
                        .zip(&values)
                        .fold(0i64, |acc, (c, val)| (acc + (c.rem_euclid(d)) * val[j]).rem_euclid(d))
                })
                .collect()
        };
        let theta_basis: Vec<Vec<i64>> = (0..r).map(|i| combine(&u[i])).collect();
        if (r..rows.len()).any(|i| combine(&u[i]).iter().any(|x| *x != 0)) {
            v.push(Violation::ThetaNotWellDefined);
            return Err(SkeletonError::Invalid(v));
        }

        // ker θ from [[Θ | I], [diag(e) | 0]]
        let mut big: Matrix = Vec::new();
        for (i, t) in theta_basis.iter().enumerate() {
            let mut row = t.clone();
            row.extend((0..r).map(|j| (i == j) as i64));
            big.push(row);
        }
        for (j, &d) in factors.iter().enumerate() {
            let mut row = vec![0i64; k + r];
            row[j] = d as i64;
            big.push(row);
        }
        let (hk, _) = intmat::hnf(&big);
        let kernel_gens: Vec<Vec<Q>> = hk
            .iter()
            .filter(|row| row[..k].iter().all(|x| *x == 0) && row[k..].iter().any(|x| *x != 0))
            .map(|row| self.gamma_d.combination(&row[k..]))
            .collect();
        let kernel = GradeGroup::new(r, kernel_gens)?;

        let image_order = lattice_index(&kernel, &self.gamma_d)?;
        let kernel_index = lattice_index(&self.gamma_f, &kernel)?;
        let value_index = lattice_index(&self.gamma_f, &self.gamma_d)?;
        if image_order != center_degree {
            v.push(Violation::ThetaNotSurjective { image: image_order, center: center_degree });
        }
        let sq = isqrt(kernel_index);
        if sq.is_none() {
            v.push(Violation::KernelIndexNotSquare(kernel_index));
        }
        let deg_residue = self.residue_degree();
        if deg_residue == 0 {
            v.push(Violation::Structure("residue degree must be positive".into()));
        }
        if let (ResidueAlgebra::Class(b), Center::Abelian(z)) = (&self.residue_algebra, &self.center) {
            if b.base() != z {
                v.push(Violation::ResidueClassBase);
            }
        }
        self.kind_constraints(kernel_index, deg_residue, &mut v);
        let sq = sq.unwrap_or(0);
        let rhs = deg_residue * deg_residue * center_degree * value_index;
        let route_fe = isqrt(rhs);
        let route_tower = center_degree * deg_residue * sq;
        let route_theta = deg_residue * image_order * sq;
        if v.is_empty() && route_fe != Some(route_theta) {
            v.push(Violation::FundamentalEquality { lhs: route_theta * route_theta, rhs });
        }
        let report = ValidationReport {
            deg_d: route_theta,
            deg_residue,
            image_order,
            sqrt_kernel_index: sq,
            center_degree,
            value_index,
            deg_routes: [route_fe.unwrap_or(0), route_tower, route_theta],
        };
        if v.is_empty() {
            if let Some(a) = &self.pairing {
                if let Err(s) = self.check_pairing(a, &kernel) {
                    v.push(Violation::Pairing(s));
                }
            }
        }
        if !v.is_empty() {
            return Err(SkeletonError::Invalid(v));
        }
        Ok(Analysis { report, kernel, theta_basis, factors, galois })
    }

    fn kind_constraints(&self, kernel_index: u64, deg_residue: u64, v: &mut Vec<Violation>) {
        let global = matches!(self.residue, ResidueKind::GlobalQ);
        match (&self.center, global) {
            (Center::Abelian(_), false) => v.push(Violation::ResidueKind(
                "only GlobalQ skeletons carry an explicit abelian center".into(),
            )),
            (Center::Abstract { .. }, true) => {
                v.push(Violation::ResidueKind("GlobalQ skeletons need an abelian center over Q".into()))
            }
            _ => {}
        }
        match (&self.residue_algebra, global) {
            (ResidueAlgebra::Class(_), false) => v.push(Violation::ResidueKind(
                "only GlobalQ skeletons carry an explicit residue class".into(),
            )),
            (ResidueAlgebra::Abstract { .. }, true) => {
                v.push(Violation::ResidueKind("GlobalQ skeletons need a residue Brauer class".into()))
            }
            _ => {}
        }
        match self.residue {
            ResidueKind::Finite { q } => {
                if deg_residue != 1 {
                    v.push(Violation::ResidueKind("division algebras over finite fields are commutative".into()));
                }
                if !self.center.is_cyclic() {
                    v.push(Violation::ResidueKind("extensions of finite fields are cyclic".into()));
                }
                let p = crate::qlattice::factorize(q).first().map_or(q, |f| f.0);
                if p > 1 && kernel_index % p == 0 {
                    v.push(Violation::Tameness(p));
                }
            }
            ResidueKind::CdLeOne => {
                if deg_residue != 1 {
                    v.push(Violation::ResidueKind("residue fields of cd ≤ 1 have trivial Brauer group".into()));
                }
            }
            ResidueKind::RealClosed => {
                let c = self.center.degree();
                if c > 2 || (c == 2 && deg_residue != 1) || deg_residue > 2 {
                    v.push(Violation::ResidueKind(
                        "over a real closed field the residue algebra is R, C or H".into(),
                    ));
                }
            }
            _ => {}
        }
    }

    fn check_pairing(&self, a: &[Vec<Q>], kernel: &GradeGroup) -> Result<(), String> {
        let r = self.rank();
        if a.len() != r || a.iter().any(|row| row.len() != r) {
            return Err(format!("matrix must be {r}x{r}"));
        }
        for i in 0..r {
            for j in 0..r {
                if a[i][j] != -a[j][i] {
                    return Err("matrix is not antisymmetric".into());
                }
            }
        }
        for f in self.gamma_f.basis() {
            for c in kernel.basis() {
                if !pair(a, f, c).is_zero() {
                    return Err("pairing is not trivial on Γ_F".into());
                }
            }
        }
        let quotient = LatticeQuotient::new(&self.gamma_f, kernel).map_err(|e| e.to_string())?;
        for x in quotient.elements.iter().skip(1) {
            if kernel.basis().iter().all(|c| pair(a, x, c).is_zero()) {
                return Err("pairing is degenerate on ker θ / Γ_F".into());
            }
        }
        Ok(())
    }
}

pub fn validate(d: &DivAlgSkeleton) -> Result<ValidationReport, SkeletonError> {
    d.analyze().map(|a| a.report)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::abelian_ext::QPlace;
    use crate::rational::Q;

    pub fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    pub fn trivial_class(z: &AbelianExtQ) -> ResidueAlgebra {
        ResidueAlgebra::Class(BrauerClass::zero(z))
    }

    /// Γ_F = Z², Γ_D = (1/2)Z², trivial θ, D̄ = F̄.
    pub fn totally_ramified() -> DivAlgSkeleton {
        let r = AbelianExtQ::rationals();
        DivAlgSkeleton {
            residue: ResidueKind::GlobalQ,
            gamma_f: GradeGroup::integral(2),
            gamma_d: GradeGroup::diagonal(&[2, 2]),
            center: Center::Abelian(r.clone()),
            theta: vec![],
            residue_algebra: trivial_class(&r),
            pairing: Some(vec![vec![q(0, 1), q(2, 1)], vec![q(-2, 1), q(0, 1)]]),
        }
    }

    /// Γ_F = Z, Γ_D = (1/2)Z, Z₀ = Q(i) with θ(1/2) = conjugation.
    pub fn semiramified() -> DivAlgSkeleton {
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        DivAlgSkeleton {
            residue: ResidueKind::GlobalQ,
            gamma_f: GradeGroup::integral(1),
            gamma_d: GradeGroup::diagonal(&[2]),
            center: Center::Abelian(qi.clone()),
            theta: vec![(vec![q(1, 2)], GaloisElement::Unit(3))],
            residue_algebra: trivial_class(&qi),
            pairing: None,
        }
    }

    /// Γ_F = Z², Γ_D = (1/2)Z ⊕ (1/4)Z, Z₀ = Q(i), θ(0,1/4) = conjugation.
    pub fn mixed(residue: ResidueAlgebra) -> DivAlgSkeleton {
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        DivAlgSkeleton {
            residue: ResidueKind::GlobalQ,
            gamma_f: GradeGroup::integral(2),
            gamma_d: GradeGroup::diagonal(&[2, 4]),
            center: Center::Abelian(qi),
            theta: vec![
                (vec![q(1, 2), q(0, 1)], GaloisElement::Unit(1)),
                (vec![q(0, 1), q(1, 4)], GaloisElement::Unit(3)),
            ],
            residue_algebra: residue,
            pairing: Some(vec![vec![q(0, 1), q(2, 1)], vec![q(-2, 1), q(0, 1)]]),
        }
    }

    /// A quaternion class over Q(i) ramified at the two primes above 5.
    pub fn quaternion_over_qi() -> BrauerClass {
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        BrauerClass::over_q(&[(QPlace::Finite(5), q(1, 2)), (QPlace::Infinite, q(1, 2))])
            .unwrap()
            .restrict_to(&qi)
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn rejects_non_square_kernel() {
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        let d = DivAlgSkeleton {
            residue: ResidueKind::GlobalQ,
            gamma_f: GradeGroup::integral(1),
            gamma_d: GradeGroup::diagonal(&[4]),
            center: Center::Abelian(qi.clone()),
            theta: vec![(vec![q(1, 4)], GaloisElement::Unit(3))],
            residue_algebra: trivial_class(&qi),
            pairing: None,
        };
        match validate(&d) {
            Err(SkeletonError::Invalid(v)) => assert!(v.contains(&Violation::KernelIndexNotSquare(2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn accepts_examples() {
        let r = validate(&totally_ramified()).unwrap();
        assert_eq!(r.deg_d, 2);
        assert_eq!(r.deg_routes, [2, 2, 2]);
        let r = validate(&semiramified()).unwrap();
        assert_eq!((r.deg_d, r.image_order, r.sqrt_kernel_index), (2, 2, 1));
        let r = validate(&mixed(trivial_class(&AbelianExtQ::quadratic(-1).unwrap()))).unwrap();
        assert_eq!((r.deg_d, r.image_order, r.sqrt_kernel_index), (4, 2, 2));
        let r = validate(&mixed(ResidueAlgebra::Class(quaternion_over_qi()))).unwrap();
        assert_eq!(r.deg_d, 8);
        assert_eq!(r.deg_routes, [8, 8, 8]);
    }

    #[test]
    fn reports_theta_failures() {
        let mut d = semiramified();
        d.theta = vec![(vec![q(1, 2)], GaloisElement::Unit(1))];
        assert!(matches!(validate(&d), Err(SkeletonError::Invalid(v))
            if v.contains(&Violation::ThetaNotSurjective { image: 1, center: 2 })));
        let mut d = semiramified();
        d.theta.push((vec![q(1, 1)], GaloisElement::Unit(3)));
        assert!(matches!(validate(&d), Err(SkeletonError::Invalid(v))
            if v.contains(&Violation::ThetaNontrivialOnGammaF(1))));
        let mut d = semiramified();
        d.theta = vec![];
        assert!(matches!(validate(&d), Err(SkeletonError::Invalid(v))
            if v.contains(&Violation::ThetaNotSurjective { image: 1, center: 2 })));
        let mut d = mixed(trivial_class(&AbelianExtQ::quadratic(-1).unwrap()));
        d.theta.truncate(1);
        assert!(matches!(validate(&d), Err(SkeletonError::Invalid(v))
            if v.contains(&Violation::ThetaGeneratorsIncomplete)));
        let mut d = totally_ramified();
        d.pairing = Some(vec![vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(0, 1)]]);
        assert!(matches!(validate(&d), Err(SkeletonError::Invalid(v))
            if matches!(v[0], Violation::Pairing(_))));
    }
}
