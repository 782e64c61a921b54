//! Isotropy and Witt decomposition over F_{2^e}((t1))...((tn)).
//!
//! Over a complete discretely valued field every tame block is isometric to
//! t^eps * u[1, r] with u a unit and r a constant; this splits a
//! nondegenerate form as φ0 ⊥ t φ1 with unimodular pieces, and then
//! i_W(φ) = i_W(φ̄0) + i_W(φ̄1) with the residue forms living one level
//! down. The recursion bottoms out over the finite base field, where the
//! Witt index only depends on the dimension and the trace of the Arf
//! element. Blocks whose Arf element has a wild principal part cannot be
//! normalized this way; forms containing them are decided only in
//! dimension <= 2 or when an exact isotropic vector turns up.

mod brute;
mod certificate;

use thiserror::Error;

use crate::fieldtower::{Elem, ExtensionResult, FieldError, Tower};
use crate::forms::{normal_form, FormError, GramInput, QuadraticForm};
use crate::linalg;

pub use brute::{brute_force_search, SearchConfig, DEFAULT_BUDGET};
pub use certificate::Certificate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("block {block} has a wild Arf element and cannot be normalized")]
    NotNormalizable { block: usize },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<FieldError> for WittError {
    fn from(e: FieldError) -> Self {
        WittError::Form(FormError::Field(e))
    }
}

pub type WittResult<T> = Result<T, WittError>;

#[derive(Clone, Debug)]
pub enum IsotropyVerdict {
    Isotropic {
        witness: Option<Vec<Elem>>,
        certificate: Option<Certificate>,
    },
    Anisotropic {
        certificate: Certificate,
    },
    Unknown {
        reason: String,
    },
}

impl IsotropyVerdict {
    pub fn is_isotropic(&self) -> Option<bool> {
        match self {
            IsotropyVerdict::Isotropic { .. } => Some(true),
            IsotropyVerdict::Anisotropic { .. } => Some(false),
            IsotropyVerdict::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[Elem]> {
        match self {
            IsotropyVerdict::Isotropic {
                witness: Some(w), ..
            } => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WittDecomposition {
    pub witt_index: usize,
    pub kernel: QuadraticForm,
    /// Exact isotropic vectors of the input form found along the way; the
    /// first one, if any, spans a hyperbolic plane of the decomposition.
    pub witnesses: Vec<Vec<Elem>>,
    pub certificate: Certificate,
}

impl WittDecomposition {
    pub fn is_hyperbolic(&self) -> bool {
        self.kernel.dim() == 0
    }
}

#[derive(Clone, Debug)]
pub struct ResiduePair {
    pub residue0: QuadraticForm,
    pub residue1: QuadraticForm,
    /// Blocks whose Arf element lies in p(K), reported as [0,0].
    pub hyperbolic: usize,
}

// ---- internal analysis ----

enum Outcome {
    Decided(Analysis),
    Unknown(String),
}

struct Analysis {
    witt_index: usize,
    kernel: QuadraticForm,
    witness: Option<Vec<Elem>>,
    certificate: Certificate,
}

/// How a tame block maps to its residue block [ū, r0/ū] in φ̄_eps.
struct TameBlock {
    index: usize,
    eps: usize,
    /// a = t^(2m+eps) u.
    m: i64,
    ubar: Elem,
    r0: Elem,
    /// z / (t^eps u) where ab = r0 + (positive) + p(z).
    lambda: Elem,
}

struct TameQuasilinear {
    eps: usize,
    m: i64,
}

enum BlockKind {
    Hyperbolic(Option<Vec<Elem>>),
    Tame(TameBlock),
    Wild,
}

fn check_witness(phi: &QuadraticForm, w: &[Elem]) -> WittResult<()> {
    assert!(
        !phi.is_zero_vector(w),
        "internal error: zero vector returned as witness"
    );
    let val = phi.eval(w)?;
    assert!(
        phi.field().is_zero(&val),
        "internal error: witness does not annihilate the form"
    );
    Ok(())
}

fn unit_vector(k: &Tower, n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![k.zero(); n];
    v[i] = k.one();
    v
}

fn analyze(phi: &QuadraticForm) -> WittResult<Outcome> {
    let out = analyze_inner(phi)?;
    if let Outcome::Decided(a) = &out {
        if let Some(w) = &a.witness {
            check_witness(phi, w)?;
        }
        debug_assert_eq!(a.witt_index * 2 + a.kernel.dim(), phi.dim());
    }
    Ok(out)
}

fn analyze_inner(phi: &QuadraticForm) -> WittResult<Outcome> {
    if phi.quasilinear().len() >= 2 {
        return Err(FormError::Degenerate(phi.quasilinear().len()).into());
    }
    let k = phi.field().clone();
    if phi.dim() == 0 {
        return Ok(Outcome::Decided(Analysis {
            witt_index: 0,
            kernel: phi.clone(),
            witness: None,
            certificate: Certificate::Empty,
        }));
    }
    if k.level() == 0 {
        return finite_field(phi).map(Outcome::Decided);
    }
    let n = phi.dim();
    let mut kinds = Vec::with_capacity(phi.blocks().len());
    for (i, (a, b)) in phi.blocks().iter().enumerate() {
        kinds.push(classify_block(&k, n, i, a, b)?);
    }
    if kinds.iter().any(|c| matches!(c, BlockKind::Wild)) {
        return analyze_wild(phi, &kinds);
    }

    // All blocks tame: build the residue forms.
    let l = k.lower().expect("level >= 1").clone();
    let mut hyper = 0;
    let mut hyper_witness = None;
    let mut residue_blocks: [Vec<(Elem, Elem)>; 2] = [Vec::new(), Vec::new()];
    let mut origin: [Vec<TameBlock>; 2] = [Vec::new(), Vec::new()];
    for kind in kinds {
        match kind {
            BlockKind::Hyperbolic(w) => {
                hyper += 1;
                if hyper_witness.is_none() {
                    hyper_witness = w;
                }
            }
            BlockKind::Tame(tb) => {
                let b = l.div(&tb.r0, &tb.ubar)?;
                residue_blocks[tb.eps].push((tb.ubar.clone(), b));
                origin[tb.eps].push(tb);
            }
            BlockKind::Wild => unreachable!(),
        }
    }
    let mut residue_ql: [Vec<Elem>; 2] = [Vec::new(), Vec::new()];
    let mut ql_origin = None;
    if let Some(c) = phi.quasilinear().first() {
        let (v, u) = k.valuation_split(c)?;
        let eps = v.rem_euclid(2) as usize;
        let ubar = k.residue_of_unit_part(&u)?;
        residue_ql[eps].push(ubar);
        ql_origin = Some(TameQuasilinear {
            eps,
            m: (v - eps as i64) / 2,
        });
    }
    let [rb0, rb1] = residue_blocks;
    let [rq0, rq1] = residue_ql;
    let r0 = QuadraticForm::new(l.clone(), rb0, rq0)?;
    let r1 = QuadraticForm::new(l.clone(), rb1, rq1)?;
    let a0 = match analyze(&r0)? {
        Outcome::Decided(a) => a,
        Outcome::Unknown(r) => return Ok(Outcome::Unknown(r)),
    };
    let a1 = match analyze(&r1)? {
        Outcome::Decided(a) => a,
        Outcome::Unknown(r) => return Ok(Outcome::Unknown(r)),
    };
    let witt_index = hyper + a0.witt_index + a1.witt_index;

    // Kernel: lifted residue kernels, the odd one scaled by t, and the
    // original quasilinear entry (its square class is intrinsic).
    let t = k.t();
    let mut kblocks = Vec::new();
    for (a, b) in a0.kernel.blocks() {
        kblocks.push((k.constant(a.clone()), k.constant(b.clone())));
    }
    for (a, b) in a1.kernel.blocks() {
        let a = k.mul(&t, &k.constant(a.clone()))?;
        let b = k.div(&k.constant(b.clone()), &t)?;
        kblocks.push((a, b));
    }
    let kernel = QuadraticForm::new(k.clone(), kblocks, phi.quasilinear().to_vec())?;

    let witness = match hyper_witness {
        Some(w) => Some(w),
        None => {
            let mut found = None;
            for (eps, child) in [(0usize, &a0), (1, &a1)] {
                if let Some(wbar) = &child.witness {
                    let v = lift_residue_vector(
                        phi,
                        &origin[eps],
                        ql_origin.as_ref().filter(|q| q.eps == eps),
                        wbar,
                    )?;
                    if let Some(w) = correct_exactly(phi, v)? {
                        found = Some(w);
                        break;
                    }
                }
            }
            found
        }
    };
    let certificate = Certificate::Residue {
        variable: k.top_variable().unwrap_or_default().to_string(),
        form: phi.to_repr(),
        hyperbolic: hyper,
        residue0: r0.to_repr(),
        residue1: r1.to_repr(),
        child0: Box::new(a0.certificate),
        child1: Box::new(a1.certificate),
        witt_index,
    };
    Ok(Outcome::Decided(Analysis {
        witt_index,
        kernel,
        witness,
        certificate,
    }))
}

fn classify_block(k: &Tower, n: usize, i: usize, a: &Elem, b: &Elem) -> WittResult<BlockKind> {
    if k.is_zero(a) {
        return Ok(BlockKind::Hyperbolic(Some(unit_vector(k, n, 2 * i))));
    }
    let ab = k.mul(a, b)?;
    let nf = k.wp_normal(&ab)?;
    if !nf.wild.is_empty() {
        return Ok(BlockKind::Wild);
    }
    let l = k.lower().expect("level >= 1");
    if l.is_zero(&nf.constant) {
        return Ok(BlockKind::Hyperbolic(block_root_witness(k, n, i, a, &ab)?));
    }
    let (v, u) = k.valuation_split(a)?;
    let eps = v.rem_euclid(2) as usize;
    let m = (v - eps as i64) / 2;
    let ubar = k.residue_of_unit_part(&u)?;
    // A = t^eps u; the shift x -> x + (z/A) y turns [A, B] into [A, B']
    // with A B' = ab + p(z).
    let big_a = k.mul(&k.t_pow(eps as i64), &u)?;
    let lambda = k.div(&nf.z, &big_a)?;
    Ok(BlockKind::Tame(TameBlock {
        index: i,
        eps,
        m,
        ubar,
        r0: nf.constant,
        lambda,
    }))
}

/// (g/a, 1) in block i when g^2 + g = ab has a rational root.
fn block_root_witness(
    k: &Tower,
    n: usize,
    i: usize,
    a: &Elem,
    ab: &Elem,
) -> WittResult<Option<Vec<Elem>>> {
    k.exact_wp_root(ab)?
        .map(|g| -> WittResult<Vec<Elem>> {
            let mut v = vec![k.zero(); n];
            v[2 * i] = k.div(&g, a)?;
            v[2 * i + 1] = k.one();
            Ok(v)
        })
        .transpose()
}

fn lift_residue_vector(
    phi: &QuadraticForm,
    blocks: &[TameBlock],
    ql: Option<&TameQuasilinear>,
    wbar: &[Elem],
) -> WittResult<Vec<Elem>> {
    let k = phi.field();
    let mut v = vec![k.zero(); phi.dim()];
    for (j, tb) in blocks.iter().enumerate() {
        let x = k.constant(wbar[2 * j].clone());
        let y = k.constant(wbar[2 * j + 1].clone());
        let shift = k.mul(&tb.lambda, &k.mul(&k.t_pow(tb.eps as i64), &y)?)?;
        v[2 * tb.index] = k.mul(&k.t_pow(-tb.m), &k.add(&x, &shift)?)?;
        v[2 * tb.index + 1] = k.mul(&k.t_pow(tb.m + tb.eps as i64), &y)?;
    }
    if let Some(q) = ql {
        let z = k.constant(wbar[2 * blocks.len()].clone());
        let idx = 2 * phi.blocks().len();
        v[idx] = k.mul(&k.t_pow(-q.m), &z)?;
    }
    Ok(v)
}

/// Makes v isotropic by changing one coordinate, when that can be done
/// inside the rational subfield.
fn correct_exactly(phi: &QuadraticForm, v: Vec<Elem>) -> WittResult<Option<Vec<Elem>>> {
    let k = phi.field();
    let val = phi.eval(&v)?;
    if k.is_zero(&val) {
        return Ok((!phi.is_zero_vector(&v)).then_some(v));
    }
    let n = phi.dim();
    for i in 0..n {
        let e = unit_vector(k, n, i);
        let qi = phi.eval(&e)?;
        let bi = phi.polar(&v, &e)?;
        // q_i mu^2 + b_i mu + val = 0.
        let mu = if k.is_zero(&bi) {
            if k.is_zero(&qi) {
                continue;
            }
            match k.sqrt(&k.div(&val, &qi)?)? {
                Some(r) => r,
                None => continue,
            }
        } else if k.is_zero(&qi) {
            k.div(&val, &bi)?
        } else {
            let ratio = k.div(&bi, &qi)?;
            let rhs = k.div(&k.mul(&val, &qi)?, &k.sqr(&bi)?)?;
            match k.exact_wp_root(&rhs)? {
                Some(nu) => k.mul(&ratio, &nu)?,
                None => continue,
            }
        };
        let mut w = v.clone();
        w[i] = k.add(&w[i], &mu)?;
        if !phi.is_zero_vector(&w) && k.is_zero(&phi.eval(&w)?) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn finite_field(phi: &QuadraticForm) -> WittResult<Analysis> {
    let k = phi.field();
    let gf = k.base();
    let m = phi.blocks().len();
    let mut trace = false;
    for (a, b) in phi.blocks() {
        trace ^= gf.trace(gf.mul(k.base_value(a), k.base_value(b)));
    }
    let (witt_index, kernel, arf_trace) = match phi.quasilinear().first() {
        None if trace => {
            let tau = Elem::Base(gf.trace_one());
            (
                m - 1,
                QuadraticForm::binary(k.clone(), k.one(), tau),
                Some(true),
            )
        }
        None => (m, QuadraticForm::zero(k.clone()), Some(false)),
        Some(c) => (
            m,
            QuadraticForm::new(k.clone(), vec![], vec![c.clone()])?,
            None,
        ),
    };
    let witness = if witt_index > 0 {
        Some(finite_field_witness(phi)?)
    } else {
        None
    };
    Ok(Analysis {
        witt_index,
        kernel,
        witness,
        certificate: Certificate::FiniteField {
            form: phi.to_repr(),
            arf_trace,
            witt_index,
        },
    })
}

fn finite_field_witness(phi: &QuadraticForm) -> WittResult<Vec<Elem>> {
    let k = phi.field();
    let gf = k.base();
    let n = phi.dim();
    let blocks = phi.blocks();
    for (i, (a, b)) in blocks.iter().enumerate() {
        if k.is_zero(a) {
            return Ok(unit_vector(k, n, 2 * i));
        }
        let ab = gf.mul(k.base_value(a), k.base_value(b));
        if let Some(g) = gf.solve_wp(ab) {
            let mut v = vec![k.zero(); n];
            v[2 * i] = k.div(&Elem::Base(g), a)?;
            v[2 * i + 1] = k.one();
            return Ok(v);
        }
    }
    // Two anisotropic pieces: every element is a square, so x_i^2 a_i = c
    // is solvable for the value c of the next piece.
    let mut values: Vec<(usize, Elem)> = blocks
        .iter()
        .enumerate()
        .map(|(i, (a, _))| (2 * i, a.clone()))
        .collect();
    if let Some(c) = phi.quasilinear().first() {
        values.push((2 * blocks.len(), c.clone()));
    }
    let (i, a) = &values[0];
    let (j, c) = &values[1];
    let x = Elem::Base(gf.sqrt(k.base_value(&k.div(c, a)?)));
    let mut v = vec![k.zero(); n];
    v[*i] = x;
    v[*j] = k.one();
    Ok(v)
}

/// Forms with a wild block: binary forms are decided exactly; otherwise
/// look for a cheap exact isotropic vector and split off a plane.
fn analyze_wild(phi: &QuadraticForm, kinds: &[BlockKind]) -> WittResult<Outcome> {
    let k = phi.field();
    if phi.dim() == 2 {
        return Ok(Outcome::Decided(Analysis {
            witt_index: 0,
            kernel: phi.clone(),
            witness: None,
            certificate: Certificate::Binary {
                form: phi.to_repr(),
                wp_member: false,
            },
        }));
    }
    let mut witness = None;
    for kind in kinds {
        if let BlockKind::Hyperbolic(Some(w)) = kind {
            witness = Some(w.clone());
            break;
        }
    }
    if witness.is_none() {
        witness = diagonal_value_witness(phi)?;
    }
    let Some(w) = witness else {
        let i = kinds
            .iter()
            .position(|c| matches!(c, BlockKind::Wild))
            .expect("wild block present");
        let (a, b) = &phi.blocks()[i];
        return Ok(Outcome::Unknown(format!(
            "wild block [{},{}] in a form of dimension {}",
            k.render(a),
            k.render(b),
            phi.dim()
        )));
    };
    let complement = split_off(phi, &w)?;
    let sub = match analyze(&complement)? {
        Outcome::Decided(a) => a,
        Outcome::Unknown(r) => return Ok(Outcome::Unknown(r)),
    };
    let witt_index = sub.witt_index + 1;
    Ok(Outcome::Decided(Analysis {
        witt_index,
        kernel: sub.kernel,
        certificate: Certificate::SplitOff {
            form: phi.to_repr(),
            witness: w.iter().map(|x| k.render(x)).collect(),
            complement: Box::new(sub.certificate),
            witt_index,
        },
        witness: Some(w),
    }))
}

/// e_p + sqrt(q_p/q_q) e_q for coordinates p, q in different blocks whose
/// values differ by a square factor.
fn diagonal_value_witness(phi: &QuadraticForm) -> WittResult<Option<Vec<Elem>>> {
    let k = phi.field();
    let n = phi.dim();
    let mut coords: Vec<(usize, usize, Elem)> = Vec::new();
    for (i, (a, b)) in phi.blocks().iter().enumerate() {
        if !k.is_zero(a) {
            coords.push((2 * i, i, a.clone()));
            coords.push((2 * i + 1, i, b.clone()));
        }
    }
    let nb = phi.blocks().len();
    for (j, c) in phi.quasilinear().iter().enumerate() {
        coords.push((2 * nb + j, nb + j, c.clone()));
    }
    for x in 0..coords.len() {
        for y in x + 1..coords.len() {
            let (p, bp, vp) = &coords[x];
            let (q, bq, vq) = &coords[y];
            if bp == bq {
                continue;
            }
            if let Some(r) = k.sqrt(&k.div(vp, vq)?)? {
                let mut v = vec![k.zero(); n];
                v[*p] = k.one();
                v[*q] = r;
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// Orthogonal complement of a hyperbolic plane through the isotropic v.
pub(crate) fn split_off(phi: &QuadraticForm, v: &[Elem]) -> WittResult<QuadraticForm> {
    let k = phi.field().clone();
    let n = phi.dim();
    let j = (0..n)
        .find(|&j| {
            phi.polar(v, &unit_vector(&k, n, j))
                .map(|b| !k.is_zero(&b))
                .unwrap_or(false)
        })
        .expect("nonzero isotropic vector of a nondegenerate form is not radical");
    let bj = phi.polar(v, &unit_vector(&k, n, j))?;
    let inv = k.inv(&bj)?;
    let mut w: Vec<Elem> = unit_vector(&k, n, j);
    w[j] = inv;
    let qw = phi.eval(&w)?;
    linalg::axpy(&k, &mut w, &qw, v)?;
    let mut projected = Vec::new();
    for i in 0..n {
        let mut x = unit_vector(&k, n, i);
        let bxw = phi.polar(&x, &w)?;
        let bxv = phi.polar(&x, v)?;
        linalg::axpy(&k, &mut x, &bxw, v)?;
        linalg::axpy(&k, &mut x, &bxv, &w)?;
        projected.push(x);
    }
    // Keep a maximal independent subset.
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    for x in projected {
        let mut trial = basis.clone();
        trial.push(x.clone());
        if linalg::rank(&k, &trial)? == trial.len() {
            basis = trial;
        }
    }
    debug_assert_eq!(basis.len(), n - 2);
    let d = basis.len();
    let mut g = vec![vec![k.zero(); d]; d];
    for i in 0..d {
        g[i][i] = phi.eval(&basis[i])?;
        for jj in i + 1..d {
            g[i][jj] = phi.polar(&basis[i], &basis[jj])?;
        }
    }
    if d == 0 {
        return Ok(QuadraticForm::zero(k));
    }
    let nf = normal_form(&GramInput::new(k.clone(), g)?)?;
    let mut form = nf.form;
    // Restore the original quasilinear entry when it differs by a square.
    if let (Some(c_old), Some(c_new)) = (phi.quasilinear().first(), form.quasilinear().first()) {
        if k.is_square(&k.div(c_new, c_old)?)? {
            form = QuadraticForm::new(k.clone(), form.blocks().to_vec(), vec![c_old.clone()])?;
        }
    }
    Ok(form)
}

// ---- quasilinear ----

/// K^2-linear relation among the entries: λ with Σ λ_i^2 c_i = 0.
fn quasilinear_relation(k: &Tower, cs: &[Elem]) -> WittResult<Option<Vec<Elem>>> {
    let rows: Vec<Vec<Elem>> = cs
        .iter()
        .map(|c| k.frobenius_components(c))
        .collect::<Result<_, _>>()?;
    Ok(linalg::left_kernel(k, &rows)?.into_iter().next())
}

// ---- public operations ----

/// Isotropy decision with an optional exact witness.
pub fn decide_isotropy(phi: &QuadraticForm) -> WittResult<IsotropyVerdict> {
    let k = phi.field();
    if phi.quasilinear().len() >= 2 {
        let ql = phi.quasilinear();
        if let Some(lambda) = quasilinear_relation(k, ql)? {
            let mut w = vec![k.zero(); 2 * phi.blocks().len()];
            w.extend(lambda);
            check_witness(phi, &w)?;
            return Ok(IsotropyVerdict::Isotropic {
                witness: Some(w),
                certificate: Some(Certificate::Quasilinear {
                    form: phi.to_repr(),
                    dependent: true,
                }),
            });
        }
        if phi.blocks().is_empty() {
            return Ok(IsotropyVerdict::Anisotropic {
                certificate: Certificate::Quasilinear {
                    form: phi.to_repr(),
                    dependent: false,
                },
            });
        }
        return Ok(IsotropyVerdict::Unknown {
            reason: "nonsingular part together with independent quasilinear entries".into(),
        });
    }
    match analyze(phi)? {
        Outcome::Decided(a) if a.witt_index > 0 => Ok(IsotropyVerdict::Isotropic {
            witness: a.witness,
            certificate: Some(a.certificate),
        }),
        Outcome::Decided(a) => Ok(IsotropyVerdict::Anisotropic {
            certificate: a.certificate,
        }),
        Outcome::Unknown(reason) => {
            // A tame subform that is isotropic still settles the question.
            if let Some(w) = tame_subform_witness(phi)? {
                return Ok(IsotropyVerdict::Isotropic {
                    witness: Some(w),
                    certificate: None,
                });
            }
            if tame_subform_isotropic(phi)? {
                return Ok(IsotropyVerdict::Isotropic {
                    witness: None,
                    certificate: None,
                });
            }
            Ok(IsotropyVerdict::Unknown { reason })
        }
    }
}

fn tame_indices(phi: &QuadraticForm) -> WittResult<Vec<usize>> {
    let k = phi.field();
    let mut out = Vec::new();
    for (i, (a, b)) in phi.blocks().iter().enumerate() {
        if k.is_zero(a) || k.wp_normal(&k.mul(a, b)?)?.wild.is_empty() {
            out.push(i);
        }
    }
    Ok(out)
}

fn tame_subform(phi: &QuadraticForm) -> WittResult<(QuadraticForm, Vec<usize>)> {
    let idx = tame_indices(phi)?;
    let ql: Vec<usize> = (0..phi.quasilinear().len()).collect();
    Ok((phi.select(&idx, &ql), idx))
}

fn tame_subform_isotropic(phi: &QuadraticForm) -> WittResult<bool> {
    let (sub, _) = tame_subform(phi)?;
    Ok(match analyze(&sub)? {
        Outcome::Decided(a) => a.witt_index > 0,
        Outcome::Unknown(_) => false,
    })
}

fn tame_subform_witness(phi: &QuadraticForm) -> WittResult<Option<Vec<Elem>>> {
    let (sub, idx) = tame_subform(phi)?;
    let k = phi.field();
    if let Outcome::Decided(a) = analyze(&sub)? {
        if let Some(ws) = a.witness {
            let mut v = vec![k.zero(); phi.dim()];
            for (j, &i) in idx.iter().enumerate() {
                v[2 * i] = ws[2 * j].clone();
                v[2 * i + 1] = ws[2 * j + 1].clone();
            }
            let nb = phi.blocks().len();
            for q in 0..phi.quasilinear().len() {
                v[2 * nb + q] = ws[2 * idx.len() + q].clone();
            }
            check_witness(phi, &v)?;
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn witt_decompose(phi: &QuadraticForm) -> WittResult<WittDecomposition> {
    match analyze(phi)? {
        Outcome::Decided(a) => {
            let mut witnesses = Vec::new();
            if let Some(w) = a.witness {
                witnesses.push(w);
            }
            Ok(WittDecomposition {
                witt_index: a.witt_index,
                kernel: a.kernel,
                witnesses,
                certificate: a.certificate,
            })
        }
        Outcome::Unknown(r) => Err(WittError::Undecided(r)),
    }
}

pub fn witt_index(phi: &QuadraticForm) -> WittResult<usize> {
    Ok(witt_decompose(phi)?.witt_index)
}

pub fn is_hyperbolic(phi: &QuadraticForm) -> WittResult<bool> {
    if !phi.is_nonsingular() {
        return Ok(false);
    }
    Ok(witt_index(phi)? * 2 == phi.dim())
}

/// The first and second residue forms at the top variable.
pub fn springer_residues(phi: &QuadraticForm) -> WittResult<ResiduePair> {
    let k = phi.field();
    let l = k
        .lower()
        .ok_or_else(|| WittError::Unsupported("residue forms need a Laurent level".into()))?
        .clone();
    let n = phi.dim();
    let mut blocks: [Vec<(Elem, Elem)>; 2] = [Vec::new(), Vec::new()];
    let mut hyperbolic = 0;
    for (i, (a, b)) in phi.blocks().iter().enumerate() {
        match classify_block(k, n, i, a, b)? {
            BlockKind::Wild => return Err(WittError::NotNormalizable { block: i }),
            BlockKind::Hyperbolic(_) => {
                hyperbolic += 1;
                blocks[0].push((l.zero(), l.zero()));
            }
            BlockKind::Tame(tb) => {
                let rb = l.div(&tb.r0, &tb.ubar)?;
                blocks[tb.eps].push((tb.ubar, rb));
            }
        }
    }
    let mut ql: [Vec<Elem>; 2] = [Vec::new(), Vec::new()];
    for c in phi.quasilinear() {
        let (v, u) = k.valuation_split(c)?;
        ql[v.rem_euclid(2) as usize].push(k.residue_of_unit_part(&u)?);
    }
    let [b0, b1] = blocks;
    let [q0, q1] = ql;
    Ok(ResiduePair {
        residue0: QuadraticForm::new(l.clone(), b0, q0)?,
        residue1: QuadraticForm::new(l, b1, q1)?,
        hyperbolic,
    })
}

/// Witt index after extending scalars.
pub fn witt_index_over_ext(phi: &QuadraticForm, ext: &ExtensionResult) -> WittResult<usize> {
    match ext {
        ExtensionResult::Split { .. } => witt_index(phi),
        ExtensionResult::Unramified(emb) => {
            let psi = phi.map_field(emb.target.clone(), |x| emb.map(x));
            witt_index(&psi)
        }
        ExtensionResult::Ramified => Err(WittError::Unsupported(
            "ramified quadratic extension".into(),
        )),
    }
}

/// Extends scalars along an unramified extension.
pub fn extend_scalars(phi: &QuadraticForm, ext: &ExtensionResult) -> WittResult<QuadraticForm> {
    match ext {
        ExtensionResult::Split { .. } => Ok(phi.clone()),
        ExtensionResult::Unramified(emb) => {
            Ok(phi.map_field(emb.target.clone(), |x| emb.map(x)))
        }
        ExtensionResult::Ramified => Err(WittError::Unsupported(
            "ramified quadratic extension".into(),
        )),
    }
}
