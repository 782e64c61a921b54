//! Torsion in CH² and CH³ of projective quadrics.
//!
//! Each report is produced by a short rule pipeline. A rule fires only when
//! its hypotheses were decided by the engines; otherwise the report falls
//! back to the bound |torsion| <= 2 and records what stayed open.

mod split;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{splitting_index, CliffordError, SplittingIndexResult};
use crate::fieldtower::ExtensionResult;
use crate::forms::{FormError, FormRepr, QuadraticForm};
use crate::pfister::{neighbor_dim5, neighbor_high, pfister_neighbor, NeighborRepr, NeighborVerdict};
use crate::witt::{
    decide_isotropy, extend_scalars, witt_decompose, witt_index, Certificate, IsotropyVerdict,
    WittError,
};

pub use split::{anisotropic_image, split_chow_structure, split_chow_table, AnisotropicImage, SplitChowRow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("codimension {p} is out of range for a quadric of dimension {d}")]
    Range { d: u32, p: u32 },
    #[error("form of dimension {0} defines no quadric of dimension >= 1")]
    Dimension(usize),
    #[error("form is degenerate")]
    Degenerate,
    #[error("isotropic reduction leaves the range 1 <= p <= d - 1")]
    RangeViolation,
    #[error(transparent)]
    Witt(#[from] WittError),
}

impl From<crate::fieldtower::FieldError> for ChowError {
    fn from(e: crate::fieldtower::FieldError) -> Self {
        ChowError::Witt(e.into())
    }
}

impl From<FormError> for ChowError {
    fn from(e: FormError) -> Self {
        ChowError::Witt(e.into())
    }
}

impl From<CliffordError> for ChowError {
    fn from(e: CliffordError) -> Self {
        match e {
            CliffordError::Witt(w) => ChowError::Witt(w),
            other => ChowError::Witt(WittError::Unsupported(other.to_string())),
        }
    }
}

pub type ChowResult<T> = Result<T, ChowError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torsion {
    /// "Exactly" or "AtMost".
    pub kind: String,
    /// Group order, or the bound on it.
    pub order: u32,
    /// "0" or "Z/2" for exact verdicts.
    pub group: Option<String>,
}

impl Torsion {
    pub fn zero() -> Self {
        Torsion {
            kind: "Exactly".into(),
            order: 1,
            group: Some("0".into()),
        }
    }

    pub fn z2() -> Self {
        Torsion {
            kind: "Exactly".into(),
            order: 2,
            group: Some("Z/2".into()),
        }
    }

    pub fn at_most_two() -> Self {
        Torsion {
            kind: "AtMost".into(),
            order: 2,
            group: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == "Exactly"
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCertificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anisotropy: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<NeighborRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting_index: Option<SplittingIndexResult>,
    /// Form reached by stripping hyperbolic planes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_form: Option<FormRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<AnisotropicImage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowReport {
    pub schema_version: u32,
    pub dim: usize,
    pub codim: u32,
    pub torsion: Torsion,
    /// Whether CH^p is generated by h^p; absent when not determined.
    pub elementary: Option<bool>,
    pub rules: Vec<String>,
    pub assumptions: Vec<String>,
    pub certificates: ReportCertificates,
}

impl ChowReport {
    fn new(phi: &QuadraticForm, codim: u32) -> Self {
        ChowReport {
            schema_version: SCHEMA_VERSION,
            dim: phi.dim(),
            codim,
            torsion: Torsion::at_most_two(),
            elementary: None,
            rules: Vec::new(),
            assumptions: Vec::new(),
            certificates: ReportCertificates::default(),
        }
    }

    fn exact(mut self, torsion: Torsion, rule: &str) -> Self {
        self.torsion = torsion;
        self.rules.push(rule.into());
        self
    }

    fn bound(mut self) -> Self {
        self.torsion = Torsion::at_most_two();
        self.rules.push(format!("CH{}-OrderBound", self.codim));
        self
    }

    fn assume(&mut self, what: impl Into<String>) {
        self.assumptions.push(what.into());
    }

    /// Elementary iff torsion free, except in the middle row with trivial
    /// Arf invariant; only for anisotropic forms.
    fn set_elementary_anisotropic(&mut self, phi: &QuadraticForm) -> ChowResult<()> {
        self.elementary = match self.torsion.group.as_deref() {
            Some("Z/2") => Some(false),
            Some("0") if phi.dim() == 2 * self.codim as usize + 2 => {
                Some(!phi.has_trivial_arf()?)
            }
            Some("0") => Some(true),
            _ => None,
        };
        Ok(())
    }

    fn check(self) -> Self {
        assert!(self.torsion.order <= 2, "torsion bound violated");
        assert!(
            !self.torsion.is_exact() || !self.rules.is_empty(),
            "exact verdict without a rule"
        );
        self
    }
}

fn quadric_dim(phi: &QuadraticForm) -> ChowResult<u32> {
    if phi.dim() < 3 {
        return Err(ChowError::Dimension(phi.dim()));
    }
    if !phi.is_nondegenerate() {
        return Err(ChowError::Degenerate);
    }
    Ok(phi.dim() as u32 - 2)
}

/// Trivial rows: p > d gives 0, p = d is torsion free.
fn trivial_rows(phi: &QuadraticForm, p: u32) -> ChowResult<Option<ChowReport>> {
    let d = quadric_dim(phi)?;
    let r = ChowReport::new(phi, p);
    Ok(if p > d {
        Some(r.exact(Torsion::zero(), &format!("CH{p}-AboveDimension")))
    } else if p == d {
        Some(r.exact(Torsion::zero(), &format!("CH{p}-TopDegree")))
    } else {
        None
    })
}

enum Iso {
    Isotropic,
    Anisotropic(Box<Certificate>),
    Unknown(String),
}

fn isotropy(phi: &QuadraticForm) -> ChowResult<Iso> {
    Ok(match decide_isotropy(phi)? {
        IsotropyVerdict::Isotropic { .. } => Iso::Isotropic,
        IsotropyVerdict::Anisotropic { certificate } => Iso::Anisotropic(Box::new(certificate)),
        IsotropyVerdict::Unknown { reason } => Iso::Unknown(reason),
    })
}

fn splitting(phi: &QuadraticForm) -> ChowResult<SplittingIndexResult> {
    Ok(splitting_index(phi)?)
}

/// Strips hyperbolic planes while the codimension stays in 1 <= p <= d - 1.
pub fn isotropic_reduce(phi: &QuadraticForm, p: u32) -> ChowResult<(QuadraticForm, u32)> {
    let dec = witt_decompose(phi)?;
    if dec.witt_index == 0 {
        return Ok((phi.clone(), p));
    }
    let mut d = quadric_dim(phi)?;
    if p < 1 || p + 1 > d {
        return Err(ChowError::RangeViolation);
    }
    let mut planes = dec.witt_index;
    let mut p = p;
    while planes > 0 && p >= 2 && p < d {
        planes -= 1;
        p -= 1;
        d -= 2;
    }
    let rest = QuadraticForm::hyperbolic(phi.field().clone(), planes).orthogonal_sum(&dec.kernel)?;
    Ok((rest, p))
}

pub fn chow2_torsion(phi: &QuadraticForm) -> ChowResult<ChowReport> {
    if let Some(r) = trivial_rows(phi, 2)? {
        return Ok(r.check());
    }
    let mut r = ChowReport::new(phi, 2);
    let iso = isotropy(phi)?;
    if let Iso::Isotropic = iso {
        return Ok(r.exact(Torsion::zero(), "CH2-Isotropic-TorsionFree").check());
    }
    if phi.dim() >= 9 {
        // Z/2 needs an anisotropic 3-fold Pfister neighbor, of dimension <= 8.
        let mut r = r.exact(Torsion::zero(), "CH2-Dim9Plus");
        match iso {
            Iso::Anisotropic(c) => {
                r.certificates.anisotropy = Some(*c);
                r.set_elementary_anisotropic(phi)?;
            }
            Iso::Unknown(reason) => r.assume(format!("isotropy undecided: {reason}")),
            Iso::Isotropic => unreachable!(),
        }
        return Ok(r.check());
    }
    let cert = match iso {
        Iso::Anisotropic(c) => c,
        Iso::Unknown(reason) => {
            r.assume(format!("isotropy undecided: {reason}"));
            return Ok(r.bound().check());
        }
        Iso::Isotropic => unreachable!(),
    };
    r.certificates.anisotropy = Some(*cert);
    if phi.dim() == 6 && phi.has_trivial_arf()? {
        let mut r = r.exact(Torsion::zero(), "CH-Dim6-Albert-TorsionFree");
        r.certificates.image = Some(anisotropic_image(4, 2, true)?);
        r.set_elementary_anisotropic(phi)?;
        return Ok(r.check());
    }
    if phi.dim() == 5 {
        let si = splitting(phi)?;
        r.certificates.splitting_index = Some(si.clone());
        let verdict = neighbor_dim5(phi)?;
        r.certificates.neighbor = Some(verdict.to_repr());
        let mut r = match si.s {
            Some(1) => r.exact(Torsion::z2(), "CH2-Dim5-SplittingIndex"),
            Some(0) => r.exact(Torsion::zero(), "CH2-Dim5-SplittingIndex"),
            _ => {
                r.assume("splitting index undecided");
                r.bound()
            }
        };
        r.set_elementary_anisotropic(phi)?;
        return Ok(r.check());
    }
    let verdict = pfister_neighbor(phi)?;
    r.certificates.neighbor = Some(verdict.to_repr());
    let mut r = match verdict {
        NeighborVerdict::Yes { .. } => r.exact(Torsion::z2(), "Thm-CH2-PN"),
        NeighborVerdict::No { .. } => r.exact(Torsion::zero(), "Thm-CH2-PN"),
        NeighborVerdict::Unknown { reason } => {
            r.assume(format!("Pfister-neighbor status undecided: {reason}"));
            r.bound()
        }
    };
    r.set_elementary_anisotropic(phi)?;
    Ok(r.check())
}

pub fn chow3_torsion(phi: &QuadraticForm) -> ChowResult<ChowReport> {
    if let Some(r) = trivial_rows(phi, 3)? {
        return Ok(r.check());
    }
    let mut r = ChowReport::new(phi, 3);
    if phi.dim() >= 13 {
        let mut r = r.exact(Torsion::zero(), "CH3-Dim13-Elementary");
        r.elementary = Some(true);
        return Ok(r.check());
    }
    let iso = isotropy(phi)?;
    let anisotropic = match iso {
        Iso::Isotropic => return isotropic_chow3(phi),
        Iso::Anisotropic(c) => {
            r.certificates.anisotropy = Some(*c);
            true
        }
        Iso::Unknown(reason) => {
            r.assume(format!("isotropy undecided: {reason}"));
            false
        }
    };
    let dim = phi.dim();
    if dim == 6 {
        if !anisotropic {
            return Ok(r.bound().check());
        }
        if phi.has_trivial_arf()? {
            let mut r = r.exact(Torsion::zero(), "CH-Dim6-Albert-TorsionFree");
            r.set_elementary_anisotropic(phi)?;
            return Ok(r.check());
        }
        let si = splitting(phi)?;
        r.certificates.splitting_index = Some(si.clone());
        let mut r = match si.s {
            Some(1) | Some(2) => r.exact(Torsion::z2(), "CH3-Dim6-SplittingIndex"),
            Some(0) => r.exact(Torsion::zero(), "CH3-Dim6-SplittingIndex"),
            _ => {
                r.assume("splitting index undecided");
                r.bound()
            }
        };
        r.set_elementary_anisotropic(phi)?;
        return Ok(r.check());
    }
    if (9..=12).contains(&dim) {
        if let Some(rule) = high_dim_rule(phi, &mut r)? {
            let mut r = r.exact(Torsion::zero(), &rule);
            if anisotropic {
                r.set_elementary_anisotropic(phi)?;
            }
            return Ok(r.check());
        }
    }
    Ok(r.bound().check())
}

/// ℍ ⊥ ψ: CH³(X) ≅ CH²(Y).
fn isotropic_chow3(phi: &QuadraticForm) -> ChowResult<ChowReport> {
    let (psi, p) = match isotropic_reduce(phi, 3) {
        Ok(x) => x,
        Err(ChowError::Witt(WittError::Undecided(reason))) => {
            let mut r = ChowReport::new(phi, 3);
            r.assume(format!("Witt decomposition undecided: {reason}"));
            return Ok(r.bound().check());
        }
        Err(e) => return Err(e),
    };
    // Undo extra strips: only one plane is needed to reach codimension 2.
    let psi = if p < 2 {
        let planes = (2 - p) as usize;
        QuadraticForm::hyperbolic(phi.field().clone(), planes).orthogonal_sum(&psi)?
    } else {
        psi
    };
    let inner = chow2_torsion(&psi)?;
    let mut r = ChowReport::new(phi, 3);
    r.torsion = inner.torsion.clone();
    r.rules.push("CH3-IsotropicReduction".into());
    r.rules.extend(inner.rules);
    r.assumptions = inner.assumptions;
    r.certificates = inner.certificates;
    r.certificates.reduced_form = Some(psi.to_repr());
    Ok(r.check())
}

/// Index-based vanishing criteria in dimensions 9 to 12 and the criteria
/// that use the discriminant extension.
fn high_dim_rule(phi: &QuadraticForm, r: &mut ChowReport) -> ChowResult<Option<String>> {
    let dim = phi.dim();
    let si = splitting(phi)?;
    r.certificates.splitting_index = Some(si.clone());
    let arf_nontrivial = if dim.is_multiple_of(2) {
        Some(!phi.has_trivial_arf()?)
    } else {
        None
    };
    if let Some(ind) = si.ind {
        let fired = match dim {
            12 => arf_nontrivial == Some(true) && ind <= 2,
            11 => ind >= 2,
            10 => arf_nontrivial == Some(true) && ind == 2,
            9 => ind >= 4,
            _ => false,
        };
        if fired {
            let rule = match dim {
                12 => "CH3-Dim12-ArfIndexAtMost2",
                11 => "CH3-Dim11-IndexAtLeast2",
                10 => "CH3-Dim10-ArfIndex2",
                _ => "CH3-Dim9-IndexAtLeast4",
            };
            return Ok(Some(rule.into()));
        }
    } else {
        r.assume("index undecided");
    }
    if arf_nontrivial == Some(true) {
        let disc = phi.discriminant_algebra()?;
        if let ext @ ExtensionResult::Unramified(_) = &disc.extension {
            let up = extend_scalars(phi, ext)?;
            match witt_index(&up) {
                Ok(i) if 2 * i == dim => return Ok(Some("CH3-DiscriminantHyperbolic".into())),
                Ok(_) => {
                    if dim == 10 {
                        if let Some(rule) = norm_split_rule(phi, &up, &si, ext, r)? {
                            return Ok(Some(rule));
                        }
                    }
                }
                Err(WittError::Undecided(_)) => r.assume("Witt index over the discriminant extension undecided"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    if dim == 9 && si.ind.is_some_and(|i| i > 1) {
        if phi.nonsingular_part().has_trivial_arf()? {
            return Ok(Some("CH3-Dim9-TrivialArfPlusLine".into()));
        }
        for i in 0..phi.blocks().len() {
            let others: Vec<usize> = (0..phi.blocks().len()).filter(|&j| j != i).collect();
            let gamma = phi.select(&others, &[0]);
            if let NeighborVerdict::Yes { .. } = neighbor_high(&gamma, None)? {
                return Ok(Some("CH3-Dim9-NeighborPlusBinary".into()));
            }
        }
    }
    Ok(None)
}

/// Dimension 10 with φ = τ ⊥ c·N_{L/k}: zero unless ind φ = ind τ_L = 1,
/// ind τ = 2 and φ_L is not hyperbolic (the caller already knows φ_L is
/// not hyperbolic).
fn norm_split_rule(
    phi: &QuadraticForm,
    _phi_l: &QuadraticForm,
    si: &SplittingIndexResult,
    ext: &ExtensionResult,
    r: &mut ChowReport,
) -> ChowResult<Option<String>> {
    let k = phi.field();
    let delta = phi.arf_representative()?;
    for (i, (a, b)) in phi.blocks().iter().enumerate() {
        if k.is_zero(a) {
            continue;
        }
        // [a,b] ≅ a[1,ab] ≅ a[1,δ] iff ab ≡ δ mod p(K).
        if !k.wp_member(&k.add(&k.mul(a, b)?, &delta)?)? {
            continue;
        }
        let others: Vec<usize> = (0..phi.blocks().len()).filter(|&j| j != i).collect();
        let tau = phi.select(&others, &[]);
        let ind_tau = splitting(&tau)?.ind;
        let ind_tau_l = splitting(&extend_scalars(&tau, ext)?)?.ind;
        match (si.ind, ind_tau, ind_tau_l) {
            (Some(1), Some(2), Some(1)) => {
                r.assume("norm-form decomposition in the exceptional case; vanishing not established");
                return Ok(None);
            }
            (Some(_), Some(_), Some(_)) => return Ok(Some("CH3-Dim10-NormSplit".into())),
            _ => {}
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_form;
    use crate::fieldtower::Tower;

    #[test]
    fn reduction_window() {
        let k = Tower::laurent(1, &["s", "t"]).unwrap();
        let psi = parse_form(&k, "[1,1] + s*[1,1] + <t>").unwrap();
        let h = QuadraticForm::hyperbolic(k.clone(), 1);
        let (red, p) = isotropic_reduce(&h.orthogonal_sum(&psi).unwrap(), 3).unwrap();
        assert_eq!((red.dim(), p), (5, 2));
        let hh = QuadraticForm::hyperbolic(k.clone(), 2);
        let (red, p) = isotropic_reduce(&hh.orthogonal_sum(&psi).unwrap(), 3).unwrap();
        assert_eq!((red.dim(), p), (5, 1));
        let (red, p) = isotropic_reduce(&psi, 3).unwrap();
        assert_eq!((red.dim(), p), (5, 3));
    }

    #[test]
    fn codim2_examples() {
        let k = Tower::laurent(1, &["s", "t"]).unwrap();
        let f = |x: &str| parse_form(&k, x).unwrap();
        let r = chow2_torsion(&f("pf(s,t;1)")).unwrap();
        assert_eq!(r.torsion, Torsion::z2());
        assert_eq!(r.rules, vec!["Thm-CH2-PN"]);
        assert!(r.certificates.anisotropy.is_some());
        let r = chow2_torsion(&f("[1,1] + s*[1,1] + <t>")).unwrap();
        assert_eq!(r.torsion, Torsion::z2());
        assert_eq!(r.certificates.splitting_index.unwrap().s, Some(1));
        let r = chow2_torsion(&f("H + [1,1] + s*[1,1]")).unwrap();
        assert_eq!(r.torsion, Torsion::zero());
    }

    #[test]
    fn codim3_examples() {
        let k = Tower::laurent(1, &["s", "t"]).unwrap();
        let f = |x: &str| parse_form(&k, x).unwrap();
        // ℍ ⊥ <<s,t;1]] reduces to CH² of the Pfister form.
        let r = chow3_torsion(&f("H + pf(s,t;1)")).unwrap();
        assert_eq!(r.torsion, Torsion::z2());
        assert_eq!(r.rules[0], "CH3-IsotropicReduction");
        let big = f("pf(s,t;1) + pf(s,t;1) + H");
        assert_eq!(chow3_torsion(&big).unwrap().rules, vec!["CH3-Dim13-Elementary"]);
    }
}
