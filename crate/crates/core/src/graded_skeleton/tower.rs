//! The canonical subalgebra tower and graded maximal subfields.

use num_traits::Zero;

use super::{pair, Analysis, Center, DivAlgSkeleton, ResidueAlgebra, SkeletonError};
use crate::abelian_ext::AbelianExtQ;
use crate::qlattice::{lattice_index, lattice_intersect, lattice_sum, GradeGroup, LatticeQuotient};

/// Residue field of a graded subfield.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResiduePart {
    Field(AbelianExtQ),
    /// `degree = [M₀:F̄]`, `meet_center = [M₀ ∩ Z₀ : F̄]`.
    Abstract { degree: u64, meet_center: u64, galois: bool, normal: bool },
}

impl ResiduePart {
    pub fn degree(&self) -> u64 {
        match self {
            ResiduePart::Field(m) => m.degree(),
            ResiduePart::Abstract { degree, .. } => *degree,
        }
    }

    fn meet_center(&self, center: &Center) -> u64 {
        match (self, center) {
            (ResiduePart::Field(m), Center::Abelian(z)) => m.intersection(z).degree(),
            (ResiduePart::Abstract { meet_center, .. }, _) => *meet_center,
            (ResiduePart::Field(m), Center::Abstract { .. }) => m.degree().min(1),
        }
    }

    pub fn is_galois(&self) -> bool {
        match self {
            ResiduePart::Field(_) => true,
            ResiduePart::Abstract { galois, .. } => *galois,
        }
    }

    pub fn is_normal(&self) -> bool {
        match self {
            ResiduePart::Field(_) => true,
            ResiduePart::Abstract { normal, .. } => *normal,
        }
    }

    /// `M₀ · Z₀`.
    fn with_center(&self, center: &Center) -> ResiduePart {
        match (self, center) {
            (ResiduePart::Field(m), Center::Abelian(z)) => ResiduePart::Field(m.compositum(z)),
            _ => {
                let c = center.degree();
                let meet = self.meet_center(center);
                ResiduePart::Abstract {
                    degree: self.degree() / meet * c,
                    meet_center: c,
                    galois: self.is_galois(),
                    normal: self.is_normal(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubfieldFlags {
    pub tame: bool,
    pub normal: bool,
    pub galois: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldSkeleton {
    pub residue_part: ResiduePart,
    pub gamma: GradeGroup,
    pub flags: SubfieldFlags,
    /// The value group was chosen without a pairing that certifies it.
    pub assumed_realizable: bool,
}

impl SubfieldSkeleton {
    /// `[M:F] = [M₀:F̄] · |Γ_M : Γ_F|`.
    pub fn dimension(&self, d: &DivAlgSkeleton) -> Result<u64, SkeletonError> {
        Ok(self.residue_part.degree() * lattice_index(&d.gamma_f, &self.gamma)?)
    }
}

/// A subalgebra of the tower: its residue dimension over `F̄` and value group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerPiece {
    pub gamma: GradeGroup,
    pub residue_dim: u64,
    pub dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTower {
    pub u: TowerPiece,
    pub z: TowerPiece,
    pub c: TowerPiece,
    pub e: TowerPiece,
    pub deg_c: u64,
    /// `|Γ_D : Γ_E| = [Z₀ : F̄]`.
    pub d_over_e: u64,
}

pub fn canonical_tower(d: &DivAlgSkeleton) -> Result<CanonicalTower, SkeletonError> {
    let a = d.analyze()?;
    let z0 = a.report.center_degree;
    let dbar = a.report.deg_residue;
    let deg_c = a.deg_c();
    let residue_u = dbar * dbar * z0;
    let piece = |gamma: &GradeGroup, residue_dim: u64| -> Result<TowerPiece, SkeletonError> {
        Ok(TowerPiece {
            gamma: gamma.clone(),
            residue_dim,
            dim: residue_dim * lattice_index(&d.gamma_f, gamma)?,
        })
    };
    let tower = CanonicalTower {
        u: piece(&d.gamma_f, residue_u)?,
        z: piece(&d.gamma_f, z0)?,
        c: piece(&a.kernel, z0)?,
        e: piece(&a.kernel, residue_u)?,
        deg_c,
        d_over_e: lattice_index(&a.kernel, &d.gamma_d)?,
    };
    debug_assert_eq!(tower.d_over_e, z0);
    debug_assert_eq!(tower.c.dim, z0 * deg_c * deg_c);
    Ok(tower)
}

fn isotropic(d: &DivAlgSkeleton, g: &GradeGroup) -> bool {
    match &d.pairing {
        None => true,
        Some(a) => g
            .basis()
            .iter()
            .all(|x| g.basis().iter().all(|y| pair(a, x, y).is_zero())),
    }
}

fn center_part(d: &DivAlgSkeleton) -> ResiduePart {
    match &d.center {
        Center::Abelian(z) => ResiduePart::Field(z.clone()),
        Center::Abstract { galois } => ResiduePart::Abstract {
            degree: galois.order(),
            meet_center: galois.order(),
            galois: true,
            normal: true,
        },
    }
}

/// `T` with `T₀ = Z₀` and `Γ_T` the first (canonical order) lattice between
/// `Γ_F` and `ker θ` of index `deg C`, isotropic when a pairing is given.
#[allow(non_snake_case)]
pub fn maximal_subfield_of_C(d: &DivAlgSkeleton) -> Result<SubfieldSkeleton, SkeletonError> {
    let a = d.analyze()?;
    let deg_c = a.deg_c();
    let quotient = LatticeQuotient::new(&d.gamma_f, &a.kernel)?;
    let gamma = quotient
        .intermediate(deg_c as usize)
        .into_iter()
        .find(|g| isotropic(d, g))
        .ok_or(SkeletonError::NoLagrangian(deg_c))?;
    Ok(SubfieldSkeleton {
        residue_part: center_part(d),
        gamma,
        flags: SubfieldFlags { tame: true, normal: true, galois: true },
        assumed_realizable: d.pairing.is_none(),
    })
}

/// Necessary conditions for `m` to be a graded subfield of `d`; returns `[M:F]`.
pub fn validate_subfield(d: &DivAlgSkeleton, m: &SubfieldSkeleton) -> Result<u64, SkeletonError> {
    let a = d.analyze()?;
    check_subfield(d, &a, m)
}

fn check_subfield(d: &DivAlgSkeleton, a: &Analysis, m: &SubfieldSkeleton) -> Result<u64, SkeletonError> {
    let bad = |s: &str| Err(SkeletonError::InvalidSubfield(s.to_string()));
    if m.gamma.rank() != d.rank() || !m.gamma.contains(&d.gamma_f) || !d.gamma_d.contains(&m.gamma) {
        return bad("need Γ_F ⊆ Γ_M ⊆ Γ_D");
    }
    if m.flags.galois && !m.flags.normal {
        return bad("Galois without normal");
    }
    let deg_c = a.deg_c();
    let ramified = lattice_intersect(&m.gamma, &a.kernel)?;
    if lattice_index(&d.gamma_f, &ramified)? > deg_c {
        return bad("|Γ_M ∩ ker θ : Γ_F| exceeds deg C");
    }
    if !isotropic(d, &ramified) {
        return bad("Γ_M ∩ ker θ is not isotropic");
    }
    // θ(Γ_M) must fix M₀ ∩ Z₀ pointwise.
    let images: Vec<Vec<i64>> = m
        .gamma
        .basis()
        .iter()
        .map(|v| a.theta_of(d, v).expect("Γ_M ⊆ Γ_D"))
        .collect();
    let center = a.report.center_degree;
    match (&m.residue_part, &d.center, &a.galois) {
        (ResiduePart::Field(m0), Center::Abelian(z), Some(g)) => {
            let w = m0.intersection(z);
            let hw = w.subgroup_set();
            for c in &images {
                let u = g.unit(c);
                if !hw.contains(u % w.conductor()) {
                    return bad("θ(Γ_M) moves M₀ ∩ Z₀");
                }
            }
        }
        (ResiduePart::Abstract { degree, meet_center, .. }, _, _) => {
            if *meet_center == 0 || center % meet_center != 0 || degree % meet_center != 0 {
                return bad("inconsistent residue degrees");
            }
            let image = lattice_index(&a.kernel, &lattice_sum(&m.gamma, &a.kernel)?)?;
            if image > center / meet_center {
                return bad("θ(Γ_M) is too large to fix M₀ ∩ Z₀");
            }
        }
        _ => return bad("explicit residue fields need an explicit center"),
    }
    // M₀ Z₀ must embed in D̄ over Z₀.
    let meet = m.residue_part.meet_center(&d.center);
    let over_center = m.residue_part.degree() / meet;
    let dbar = a.report.deg_residue;
    match (&m.residue_part, &d.residue_algebra, &d.center) {
        (ResiduePart::Field(m0), ResidueAlgebra::Class(beta), Center::Abelian(z)) => {
            let mz = m0.compositum(z);
            let rel = mz.degree() / z.degree();
            let ind = beta.restricted_index(&mz).map_err(|e| SkeletonError::Other(e.to_string()))?;
            if rel * ind != dbar {
                return bad("M₀·Z₀ does not embed in D̄");
            }
        }
        _ => {
            if dbar % over_center != 0 {
                return bad("[M₀Z₀ : Z₀] does not divide deg D̄");
            }
        }
    }
    let dim = m.dimension(d)?;
    if a.report.deg_d % dim != 0 {
        return bad("[M:F] does not divide deg D");
    }
    Ok(dim)
}

/// For a valid `m`: whether `M₀` is maximal in `D̄`, via `M ⊇ Z` and
/// `|Γ_M : Γ_Z| = deg C`.
pub fn residue_maximality_test(d: &DivAlgSkeleton, m: &SubfieldSkeleton) -> Result<bool, SkeletonError> {
    let a = d.analyze()?;
    check_subfield(d, &a, m)?;
    let contains_z = m.residue_part.meet_center(&d.center) == a.report.center_degree;
    Ok(contains_z && lattice_index(&d.gamma_f, &m.gamma)? == a.deg_c())
}

fn check_t(d: &DivAlgSkeleton, a: &Analysis, t: &SubfieldSkeleton) -> Result<(), SkeletonError> {
    let bad = |s: &str| Err(SkeletonError::InvalidSubfield(format!("T: {s}")));
    if !a.kernel.contains(&t.gamma) || !t.gamma.contains(&d.gamma_f) {
        return bad("need Γ_F ⊆ Γ_T ⊆ ker θ");
    }
    if lattice_index(&d.gamma_f, &t.gamma)? != a.deg_c() {
        return bad("|Γ_T : Γ_F| must equal deg C");
    }
    if !isotropic(d, &t.gamma) {
        return bad("Γ_T is not isotropic");
    }
    if t.residue_part != center_part(d) {
        return bad("T₀ must be Z₀");
    }
    Ok(())
}

/// `M := (M₀ ⊗ F) · T` for a maximal subfield `M₀ ⊇ Z₀` of `D̄`.
pub fn lift_residue_subfield(
    d: &DivAlgSkeleton,
    m0: &ResiduePart,
    t: &SubfieldSkeleton,
) -> Result<SubfieldSkeleton, SkeletonError> {
    let a = d.analyze()?;
    check_t(d, &a, t)?;
    let center = a.report.center_degree;
    if m0.meet_center(&d.center) != center {
        return Err(SkeletonError::InvalidSubfield("M₀ must contain Z₀".into()));
    }
    if m0.degree() != center * a.report.deg_residue {
        return Err(SkeletonError::InvalidSubfield("[M₀ : Z₀] must equal deg D̄".into()));
    }
    let m = SubfieldSkeleton {
        residue_part: m0.clone(),
        gamma: t.gamma.clone(),
        flags: SubfieldFlags { tame: true, normal: m0.is_normal(), galois: m0.is_galois() },
        assumed_realizable: t.assumed_realizable,
    };
    let dim = check_subfield(d, &a, &m)?;
    if dim != a.report.deg_d {
        return Err(SkeletonError::NotMaximal { dim, deg: a.report.deg_d });
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntwineResult {
    pub m_prime: SubfieldSkeleton,
    /// Value group of `M ∩ C_D(T)`.
    pub meet_gamma: GradeGroup,
    /// Value group of `C_D(T)`, equal to `Γ_T`.
    pub centralizer_gamma: GradeGroup,
}

/// `M′ := (M ∩ C_D(T)) · T` for a maximal graded subfield `M`.
pub fn entwine(
    d: &DivAlgSkeleton,
    m: &SubfieldSkeleton,
    t: &SubfieldSkeleton,
) -> Result<EntwineResult, SkeletonError> {
    let a = d.analyze()?;
    let dim = check_subfield(d, &a, m)?;
    if dim != a.report.deg_d {
        return Err(SkeletonError::NotMaximal { dim, deg: a.report.deg_d });
    }
    check_t(d, &a, t)?;
    let centralizer_gamma = t.gamma.clone();
    let meet_gamma = lattice_intersect(&m.gamma, &centralizer_gamma)?;
    let gamma = lattice_sum(&meet_gamma, &t.gamma)?;
    let m_prime = SubfieldSkeleton {
        residue_part: m.residue_part.with_center(&d.center),
        gamma,
        flags: m.flags,
        assumed_realizable: m.assumed_realizable || t.assumed_realizable,
    };
    let dim2 = check_subfield(d, &a, &m_prime)?;
    if dim2 != a.report.deg_d {
        return Err(SkeletonError::NotMaximal { dim: dim2, deg: a.report.deg_d });
    }
    let contains_z = m_prime.residue_part.meet_center(&d.center) == a.report.center_degree;
    if !(contains_z && lattice_index(&d.gamma_f, &m_prime.gamma)? == a.deg_c()) {
        return Err(SkeletonError::Other("entwined subfield fails the residue maximality test".into()));
    }
    Ok(EntwineResult { m_prime, meet_gamma, centralizer_gamma })
}
