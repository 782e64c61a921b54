//! Pfister forms and Pfister-neighbor tests.

mod neighbor;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fieldtower::{Elem, Tower};
use crate::forms::{FormResult, QuadraticForm};
use crate::witt::{decide_isotropy, IsotropyVerdict, WittResult};

pub use neighbor::{
    neighbor_dim5, neighbor_dim6, neighbor_high, pfister_neighbor, NeighborRepr, NeighborVerdict,
    NeighborWitness, NeighborWitnessRepr, GENERATOR_SEARCH_LIMIT,
};

/// <<a_1, ..., a_{n-1}; a_n]] = <1,a_1>_bil ⊗ ... ⊗ <1,a_{n-1}>_bil ⊗ [1,a_n].
#[derive(Clone, Debug)]
pub struct PfisterSpec {
    pub field: Arc<Tower>,
    pub slots: Vec<Elem>,
    pub quadratic: Elem,
}

impl PfisterSpec {
    pub fn new(field: Arc<Tower>, slots: Vec<Elem>, quadratic: Elem) -> Self {
        PfisterSpec {
            field,
            slots,
            quadratic,
        }
    }

    pub fn fold(&self) -> usize {
        self.slots.len() + 1
    }

    pub fn to_repr(&self) -> PfisterRepr {
        let k = &self.field;
        PfisterRepr {
            slots: self.slots.iter().map(|a| k.render(a)).collect(),
            quadratic: k.render(&self.quadratic),
            dsl: self.render(),
        }
    }

    /// DSL spelling, `pf(a1,...;b)`.
    pub fn render(&self) -> String {
        let k = &self.field;
        let slots: Vec<String> = self.slots.iter().map(|a| k.render(a)).collect();
        format!("pf({};{})", slots.join(","), k.render(&self.quadratic))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfisterRepr {
    pub slots: Vec<String>,
    pub quadratic: String,
    pub dsl: String,
}

/// Expands the spec: ρ = [1, a_n], then ρ ← ρ ⊥ a_i ρ for each slot.
pub fn make_pfister(spec: &PfisterSpec) -> FormResult<QuadraticForm> {
    let k = &spec.field;
    let mut rho = QuadraticForm::binary(k.clone(), k.one(), spec.quadratic.clone());
    for a in &spec.slots {
        rho = rho.orthogonal_sum(&rho.scale(a)?)?;
    }
    Ok(rho)
}

/// Pfister forms are hyperbolic as soon as they are isotropic.
pub fn pfister_hyperbolicity(spec: &PfisterSpec) -> WittResult<Option<bool>> {
    let pi = make_pfister(spec)?;
    Ok(decide_isotropy(&pi)?.is_isotropic())
}

/// Truthy when the verdict is settled.
pub(crate) fn isotropic(phi: &QuadraticForm) -> WittResult<Option<bool>> {
    Ok(match decide_isotropy(phi)? {
        IsotropyVerdict::Isotropic { .. } => Some(true),
        IsotropyVerdict::Anisotropic { .. } => Some(false),
        IsotropyVerdict::Unknown { .. } => None,
    })
}
