//! Serializable decision traces.

use serde::{Deserialize, Serialize};

use crate::forms::FormRepr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The zero form.
    Empty,
    /// Nondegenerate form over F_{2^e}: Witt index read off from the
    /// dimension, the quasilinear part and the trace of the Arf element.
    FiniteField {
        form: FormRepr,
        arf_trace: Option<bool>,
        witt_index: usize,
    },
    /// Binary block decided by membership of ab in p(K).
    Binary {
        form: FormRepr,
        wp_member: bool,
    },
    /// Quasilinear form decided by K^2-linear dependence of its entries.
    Quasilinear {
        form: FormRepr,
        dependent: bool,
    },
    /// Exact isotropic vector, plane split off, complement analysed.
    SplitOff {
        form: FormRepr,
        witness: Vec<String>,
        complement: Box<Certificate>,
        witt_index: usize,
    },
    /// Residue recursion at the top variable.
    Residue {
        variable: String,
        form: FormRepr,
        /// Blocks whose Arf element lies in p(K).
        hyperbolic: usize,
        residue0: FormRepr,
        residue1: FormRepr,
        child0: Box<Certificate>,
        child1: Box<Certificate>,
        witt_index: usize,
    },
}

impl Certificate {
    pub fn witt_index(&self) -> usize {
        match self {
            Certificate::Empty => 0,
            Certificate::FiniteField { witt_index, .. }
            | Certificate::SplitOff { witt_index, .. }
            | Certificate::Residue { witt_index, .. } => *witt_index,
            Certificate::Binary { wp_member, .. } => *wp_member as usize,
            Certificate::Quasilinear { dependent, .. } => *dependent as usize,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Certificate::Empty => 0,
            Certificate::FiniteField { form, .. }
            | Certificate::Binary { form, .. }
            | Certificate::Quasilinear { form, .. }
            | Certificate::SplitOff { form, .. }
            | Certificate::Residue { form, .. } => form.dim,
        }
    }

    /// Structural replay: dimension bookkeeping, the residue dimension law
    /// at every residue node, and the finite-field index rule at leaves.
    pub fn verify(&self) -> bool {
        match self {
            Certificate::Empty => true,
            Certificate::FiniteField {
                form,
                arf_trace,
                witt_index,
            } => {
                let m = form.blocks.len();
                match (form.quasilinear.len(), arf_trace) {
                    (0, Some(tr)) => *witt_index == m - *tr as usize,
                    (1, None) => *witt_index == m,
                    _ => false,
                }
            }
            Certificate::Binary { form, .. } => form.dim == 2,
            Certificate::Quasilinear { form, .. } => form.blocks.is_empty(),
            Certificate::SplitOff {
                form,
                complement,
                witt_index,
                witness,
            } => {
                witness.len() == form.dim
                    && complement.dim() + 2 == form.dim
                    && complement.witt_index() + 1 == *witt_index
                    && complement.verify()
            }
            Certificate::Residue {
                form,
                hyperbolic,
                residue0,
                residue1,
                child0,
                child1,
                witt_index,
                ..
            } => {
                form.dim == 2 * hyperbolic + residue0.dim + residue1.dim
                    && child0.dim() == residue0.dim
                    && child1.dim() == residue1.dim
                    && *witt_index == hyperbolic + child0.witt_index() + child1.witt_index()
                    && child0.verify()
                    && child1.verify()
            }
        }
    }
}
