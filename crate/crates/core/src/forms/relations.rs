//! Isometry, subforms and represented values, decided through the Witt
//! engine. In characteristic 2 every nonsingular σ satisfies σ ⊥ σ ≅ dim σ · ℍ,
//! so by Witt cancellation σ ⊆ φ iff i_W(φ ⊥ σ) >= dim σ.

use crate::fieldtower::Elem;
use crate::witt::{decide_isotropy, witt_decompose, IsotropyVerdict, WittError, WittResult};

use super::{FormError, QuadraticForm};

/// Whether φ represents c (c nonzero). Isotropic nondegenerate forms
/// contain a hyperbolic plane and represent everything.
pub fn represents(phi: &QuadraticForm, c: &Elem) -> WittResult<bool> {
    let k = phi.field();
    if k.is_zero(c) {
        return Err(FormError::ZeroScalar.into());
    }
    if phi.dim() == 0 {
        return Ok(false);
    }
    match decide_isotropy(phi)? {
        IsotropyVerdict::Isotropic { .. } => return Ok(true),
        IsotropyVerdict::Unknown { reason } => return Err(WittError::Undecided(reason)),
        IsotropyVerdict::Anisotropic { .. } => {}
    }
    let ext = phi.orthogonal_sum(&QuadraticForm::new(k.clone(), vec![], vec![c.clone()])?)?;
    match decide_isotropy(&ext)? {
        IsotropyVerdict::Isotropic { .. } => Ok(true),
        IsotropyVerdict::Anisotropic { .. } => Ok(false),
        IsotropyVerdict::Unknown { reason } => Err(WittError::Undecided(reason)),
    }
}

/// Whether σ is isometric to a subform of φ. σ may have one quasilinear
/// entry: σ = ψ ⊥ <c> ⊆ φ iff ψ ⊆ φ and the complement of ψ in φ
/// represents c.
pub fn subform_test(sigma: &QuadraticForm, phi: &QuadraticForm) -> WittResult<bool> {
    if sigma.field().descriptor() != phi.field().descriptor() {
        return Err(FormError::FieldMismatch.into());
    }
    if sigma.dim() > phi.dim() || sigma.quasilinear().len() > 1 {
        return Ok(false);
    }
    if sigma.quasilinear().len() > phi.quasilinear().len() && phi.dim() == sigma.dim() {
        return Ok(false);
    }
    let psi = sigma.nonsingular_part();
    let sum = phi.orthogonal_sum(&psi)?;
    let dec = witt_decompose(&sum)?;
    if dec.witt_index < psi.dim() {
        return Ok(false);
    }
    let Some(c) = sigma.quasilinear().first() else {
        return Ok(true);
    };
    // Complement τ of ψ in φ: (i_W - dim ψ) hyperbolic planes plus the kernel.
    let extra = dec.witt_index - psi.dim();
    if extra > 0 {
        return Ok(true);
    }
    if dec.kernel.dim() == 0 {
        return Ok(false);
    }
    represents(&dec.kernel, c)
}

/// Isometry test. Nonsingular forms: equal dimension and φ ⊥ ψ hyperbolic.
/// Odd forms go through the subform criterion.
pub fn isometric(phi: &QuadraticForm, psi: &QuadraticForm) -> WittResult<bool> {
    if phi.dim() != psi.dim() || phi.quasilinear().len() != psi.quasilinear().len() {
        return Ok(false);
    }
    if phi.is_nonsingular() {
        let sum = phi.orthogonal_sum(psi)?;
        return Ok(witt_decompose(&sum)?.witt_index == phi.dim());
    }
    subform_test(psi, phi)
}
