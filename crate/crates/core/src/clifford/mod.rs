//! Clifford algebras, their centers, and the index and splitting index of
//! the even Clifford algebra.
//!
//! Indices are never computed by algebra arithmetic. In characteristic 2
//! C(φ ⊥ ψ) ≅ C(φ) ⊗ C(ψ) for even-dimensional φ, and C([a,b]) is the
//! quaternion algebra (ab, a], so the Brauer class of a trivial-Arf form
//! only depends on its Witt class. The index of an anisotropic class is read
//! off from small dimensions (4 → 2, 6 → 4) or, for larger tame kernels,
//! from the residue forms: with θ ≅ θ0 ⊥ tθ1 the class is
//! [C(θ̄0 ⊥ θ̄1)] + (χ, t] where χ = Arf(θ̄1), whose index is ind(θ̄0 ⊥ θ̄1)
//! when χ = 0 and 2·ind((θ̄0 ⊥ θ̄1)_L) over L = k̄(℘⁻¹χ) otherwise.

mod algebra;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fieldtower::{Elem, ExtensionResult, FieldError, Tower};
use crate::forms::{DiscriminantKind, FormError, FormRepr, QuadraticForm};
use crate::pfister::{make_pfister, PfisterSpec};
use crate::witt::{
    decide_isotropy, extend_scalars, springer_residues, witt_decompose, IsotropyVerdict,
    WittError,
};

pub use algebra::{
    build_clifford, build_clifford_seeded, CliffordAlgebra, DEFAULT_SEED, DIMENSION_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("Clifford algebra of a {dim}-dimensional form exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("structure constants are not associative")]
    NotAssociative,
    #[error("even part is not closed under multiplication")]
    NotClosed,
    #[error("algebra has the wrong dimension")]
    BadDimension,
    #[error("not an Albert form (needs a nonsingular 6-dimensional form with trivial Arf invariant)")]
    NotAlbert,
    #[error("dimension {0} is out of range")]
    DimensionRange(usize),
    #[error(transparent)]
    Witt(#[from] WittError),
}

impl From<FormError> for CliffordError {
    fn from(e: FormError) -> Self {
        CliffordError::Witt(WittError::Form(e))
    }
}

impl From<FieldError> for CliffordError {
    fn from(e: FieldError) -> Self {
        CliffordError::Witt(e.into())
    }
}

pub type CliffordResult<T> = Result<T, CliffordError>;

// ---- centers ----

#[derive(Clone, Debug)]
pub struct CenterReport {
    pub basis: Vec<Vec<Elem>>,
    /// Set for the even Clifford algebra of a nonsingular form.
    pub discriminant: Option<DiscriminantKind>,
    /// Nontrivial central idempotent, when the center splits over the
    /// rational subfield.
    pub idempotent: Option<Vec<Elem>>,
}

impl CenterReport {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Arf element Σ e_{2i} e_{2i+1} of C0(φ); it satisfies z² + z = Σ a_i b_i.
pub fn arf_element(alg: &CliffordAlgebra) -> Vec<Elem> {
    let k = alg.field();
    let mut z = vec![k.zero(); alg.dim()];
    for i in 0..alg.form().blocks().len() {
        let m = alg.monomial((1 << (2 * i)) | (1 << (2 * i + 1)));
        for (zi, mi) in z.iter_mut().zip(m) {
            if !k.is_zero(&mi) {
                *zi = mi;
            }
        }
    }
    z
}

pub fn center_and_idempotents(alg: &CliffordAlgebra) -> CliffordResult<CenterReport> {
    let k = alg.field();
    let basis = alg.center()?;
    let phi = alg.form();
    if !(alg.is_even() && phi.is_nonsingular() && phi.dim() > 0) {
        return Ok(CenterReport {
            basis,
            discriminant: None,
            idempotent: None,
        });
    }
    let disc = phi.discriminant_algebra()?;
    let mut idempotent = None;
    if let ExtensionResult::Split { root: Some(y) } = &disc.extension {
        let mut e = arf_element(alg);
        e[0] = k.add(&e[0], y)?;
        let sq = alg.mul(&e, &e)?;
        assert_eq!(sq, e, "central idempotent check failed");
        idempotent = Some(e);
    }
    Ok(CenterReport {
        basis,
        discriminant: Some(disc.kind()),
        idempotent,
    })
}

// ---- quaternions and Albert forms ----

/// Whether the quaternion algebra (α, β] splits: its norm form
/// <<β; α]] is isotropic. `None` when the isotropy test is undecided.
pub fn quaternion_splits(
    k: &Arc<Tower>,
    alpha: &Elem,
    beta: &Elem,
) -> CliffordResult<Option<bool>> {
    if k.is_zero(beta) {
        return Err(FormError::ZeroScalar.into());
    }
    let spec = PfisterSpec::new(k.clone(), vec![beta.clone()], alpha.clone());
    let norm = make_pfister(&spec)?;
    Ok(decide_isotropy(&norm)?.is_isotropic())
}

/// Index of C(ψ) for an Albert form ψ: i_W = 0, 1, 3 gives 4, 2, 1.
pub fn albert_index(psi: &QuadraticForm) -> CliffordResult<u64> {
    if psi.dim() != 6 || !psi.is_nonsingular() || !psi.has_trivial_arf()? {
        return Err(CliffordError::NotAlbert);
    }
    let iw = witt_decompose(psi)?.witt_index;
    Ok(match iw {
        0 => 4,
        1 => 2,
        3 => 1,
        // i_W = 2 leaves a binary kernel with trivial Arf, which is hyperbolic.
        _ => unreachable!("Albert form with Witt index {iw}"),
    })
}

// ---- index and splitting index ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingIndexResult {
    pub dim: usize,
    /// [(dim - 1)/2].
    pub bound: usize,
    pub s: Option<usize>,
    pub ind: Option<u64>,
    pub s_interval: (usize, usize),
    pub ind_interval: (u64, u64),
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl SplittingIndexResult {
    fn known(dim: usize, ind: u64, rule: &str) -> Self {
        let bound = (dim - 1) / 2;
        let log = ind.trailing_zeros() as usize;
        assert!(ind.is_power_of_two() && log <= bound, "index {ind} out of range");
        SplittingIndexResult {
            dim,
            bound,
            s: Some(bound - log),
            ind: Some(ind),
            s_interval: (bound - log, bound - log),
            ind_interval: (ind, ind),
            rule: rule.into(),
            reason: None,
        }
    }

    fn unknown(dim: usize, reason: String) -> Self {
        let bound = (dim - 1) / 2;
        SplittingIndexResult {
            dim,
            bound,
            s: None,
            ind: None,
            s_interval: (0, bound),
            ind_interval: (1, 1 << bound),
            rule: "Index-Undecided".into(),
            reason: Some(reason),
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.s.is_some()
    }
}

enum Idx {
    Known(u64),
    Unknown(String),
}

fn undecided(e: WittError) -> Result<Idx, WittError> {
    match e {
        WittError::Undecided(r) => Ok(Idx::Unknown(r)),
        WittError::NotNormalizable { block } => {
            Ok(Idx::Unknown(format!("block {block} is wild")))
        }
        WittError::Unsupported(r) => Ok(Idx::Unknown(r)),
        other => Err(other),
    }
}

/// Index of the Brauer class of a nonsingular trivial-Arf form.
fn trivial_arf_index(theta: &QuadraticForm) -> Result<Idx, WittError> {
    let dec = match witt_decompose(theta) {
        Ok(d) => d,
        Err(e) => return undecided(e),
    };
    let kernel = dec.kernel;
    match kernel.dim() {
        0 => return Ok(Idx::Known(1)),
        4 => return Ok(Idx::Known(2)),
        6 => return Ok(Idx::Known(4)),
        _ => {}
    }
    if kernel.field().level() == 0 {
        unreachable!("anisotropic trivial-Arf form of dimension > 2 over a finite field");
    }
    let res = match springer_residues(&kernel) {
        Ok(r) => r,
        Err(e) => return undecided(e),
    };
    let rho = res.residue0.orthogonal_sum(&res.residue1)?;
    let chi = res.residue1.arf_representative()?;
    let l = rho.field().clone();
    match l.quad_extend(&chi)? {
        ExtensionResult::Split { .. } => trivial_arf_index(&rho),
        ext @ ExtensionResult::Unramified(_) => {
            let up = extend_scalars(&rho, &ext)?;
            Ok(match trivial_arf_index(&up)? {
                Idx::Known(i) => Idx::Known(2 * i),
                u => u,
            })
        }
        ExtensionResult::Ramified => Ok(Idx::Unknown(
            "residue Arf invariant has a wild part".into(),
        )),
    }
}

/// The trivial-Arf form carrying the Brauer class of C'0(φ): φ itself, φ
/// over its discriminant extension, or c[1,δ] ⊥ ψ for φ = ψ ⊥ <c>.
fn class_carrier(phi: &QuadraticForm) -> CliffordResult<Result<(QuadraticForm, &'static str), String>> {
    let k = phi.field();
    if phi.quasilinear().len() > 1 {
        return Err(FormError::Degenerate(phi.quasilinear().len()).into());
    }
    if let Some(c) = phi.quasilinear().first() {
        let psi = phi.nonsingular_part();
        let delta = psi.arf_representative()?;
        let pair = QuadraticForm::binary(k.clone(), c.clone(), k.div(&delta, c)?);
        return Ok(Ok((pair.orthogonal_sum(&psi)?, "Index-OddCompanion")));
    }
    let disc = phi.discriminant_algebra()?;
    Ok(match &disc.extension {
        ExtensionResult::Split { .. } => Ok((phi.clone(), "Index-TrivialArf")),
        ext @ ExtensionResult::Unramified(_) => {
            Ok((extend_scalars(phi, ext)?, "Index-DiscriminantExtension"))
        }
        ExtensionResult::Ramified => Err("discriminant extension is ramified".into()),
    })
}

/// s(φ) and ind(φ) with s + log2 ind = [(dim φ - 1)/2].
pub fn splitting_index(phi: &QuadraticForm) -> CliffordResult<SplittingIndexResult> {
    let dim = phi.dim();
    if dim == 0 {
        return Err(CliffordError::DimensionRange(0));
    }
    if !phi.is_nondegenerate() {
        return Err(FormError::Degenerate(phi.quasilinear().len()).into());
    }
    if dim == 3 {
        match decide_isotropy(phi)? {
            IsotropyVerdict::Isotropic { .. } => {
                return Ok(SplittingIndexResult::known(3, 1, "Index-Conic"))
            }
            IsotropyVerdict::Anisotropic { .. } => {
                return Ok(SplittingIndexResult::known(3, 2, "Index-Conic"))
            }
            IsotropyVerdict::Unknown { .. } => {}
        }
    }
    let (carrier, rule) = match class_carrier(phi)? {
        Ok(c) => c,
        Err(reason) => return Ok(SplittingIndexResult::unknown(dim, reason)),
    };
    if carrier.dim() == 6 {
        return Ok(match albert_index(&carrier) {
            Ok(ind) => SplittingIndexResult::known(dim, ind, "Index-Albert"),
            Err(CliffordError::Witt(e)) => match undecided(e)? {
                Idx::Unknown(r) => SplittingIndexResult::unknown(dim, r),
                Idx::Known(_) => unreachable!(),
            },
            Err(e) => return Err(e),
        });
    }
    Ok(match trivial_arf_index(&carrier)? {
        Idx::Known(ind) => SplittingIndexResult::known(dim, ind, rule),
        Idx::Unknown(r) => SplittingIndexResult::unknown(dim, r),
    })
}

// ---- class descriptors ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionSymbol {
    /// u² + u = alpha
    pub alpha: String,
    /// v² = beta
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraClassDescriptor {
    /// Center of C0(φ) for even φ; absent for odd φ, where C0 is central.
    pub center: Option<DiscriminantKind>,
    /// Symbols whose sum is the class of the carrier form.
    pub symbols: Vec<QuaternionSymbol>,
    pub companion_form: Option<FormRepr>,
    pub index_interval: (u64, u64),
    pub rule: String,
}

pub fn clifford_class(phi: &QuadraticForm) -> CliffordResult<AlgebraClassDescriptor> {
    let si = splitting_index(phi)?;
    let center = if phi.quasilinear().is_empty() {
        Some(phi.discriminant_algebra()?.kind())
    } else {
        None
    };
    let carrier = class_carrier(phi)?.ok();
    let mut symbols = Vec::new();
    let mut companion_form = None;
    if let Some((c, rule)) = &carrier {
        let k = c.field();
        for (a, b) in c.blocks() {
            if k.is_zero(a) {
                continue;
            }
            symbols.push(QuaternionSymbol {
                alpha: k.render(&k.mul(a, b)?),
                beta: k.render(a),
            });
        }
        if *rule == "Index-OddCompanion" {
            companion_form = Some(c.to_repr());
        }
    }
    Ok(AlgebraClassDescriptor {
        center,
        symbols,
        companion_form,
        index_interval: si.ind_interval,
        rule: si.rule,
    })
}
