//! Quadratic forms [a1,b1] ⊥ ... ⊥ [am,bm] ⊥ <c1,...,cr> over a tower.
//!
//! [a,b] is a x^2 + xy + b y^2 and <c> is c z^2. Coordinates of a vector
//! are laid out block by block, (x1, y1, x2, y2, ...), followed by the
//! quasilinear coordinates.

mod relations;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fieldtower::{Elem, ExtensionResult, FieldDescriptor, FieldError, Tower, WpClass};

pub use relations::{isometric, represents, subform_test};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("radical of the polar form has dimension {0}")]
    Degenerate(usize),
    #[error("the quadratic form vanishes on the polar radical")]
    Defective,
    #[error("the form has a quasilinear part; the Arf invariant needs even dimension")]
    OddDimension,
    #[error("forms live over different fields")]
    FieldMismatch,
    #[error("scaling by zero")]
    ZeroScalar,
    #[error("quasilinear coefficients must be nonzero")]
    ZeroQuasilinear,
    #[error("Gram input must be a nonempty square matrix")]
    BadGram,
    #[error("vector has {got} coordinates, form has dimension {want}")]
    VectorLength { got: usize, want: usize },
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type FormResult<T> = Result<T, FormError>;

#[derive(Clone, Debug)]
pub struct QuadraticForm {
    field: Arc<Tower>,
    blocks: Vec<(Elem, Elem)>,
    quasilinear: Vec<Elem>,
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.field.descriptor() == other.field.descriptor()
            && self.blocks == other.blocks
            && self.quasilinear == other.quasilinear
    }
}

impl Eq for QuadraticForm {}

fn normalize_block(k: &Tower, a: Elem, b: Elem) -> (Elem, Elem) {
    if k.is_zero(&a) || k.is_zero(&b) {
        (k.zero(), k.zero())
    } else {
        (a, b)
    }
}

impl QuadraticForm {
    pub fn new(
        field: Arc<Tower>,
        blocks: Vec<(Elem, Elem)>,
        quasilinear: Vec<Elem>,
    ) -> FormResult<Self> {
        if quasilinear.iter().any(|c| field.is_zero(c)) {
            return Err(FormError::ZeroQuasilinear);
        }
        let blocks = blocks
            .into_iter()
            .map(|(a, b)| normalize_block(&field, a, b))
            .collect();
        Ok(QuadraticForm {
            field,
            blocks,
            quasilinear,
        })
    }

    pub fn zero(field: Arc<Tower>) -> Self {
        QuadraticForm {
            field,
            blocks: Vec::new(),
            quasilinear: Vec::new(),
        }
    }

    pub fn hyperbolic(field: Arc<Tower>, planes: usize) -> Self {
        let z = field.zero();
        QuadraticForm {
            blocks: vec![(z.clone(), z); planes],
            field,
            quasilinear: Vec::new(),
        }
    }

    pub fn binary(field: Arc<Tower>, a: Elem, b: Elem) -> Self {
        let blk = normalize_block(&field, a, b);
        QuadraticForm {
            field,
            blocks: vec![blk],
            quasilinear: Vec::new(),
        }
    }

    pub fn quasilinear_form(field: Arc<Tower>, cs: Vec<Elem>) -> FormResult<Self> {
        QuadraticForm::new(field, Vec::new(), cs)
    }

    pub fn field(&self) -> &Arc<Tower> {
        &self.field
    }

    pub fn blocks(&self) -> &[(Elem, Elem)] {
        &self.blocks
    }

    pub fn quasilinear(&self) -> &[Elem] {
        &self.quasilinear
    }

    pub fn dim(&self) -> usize {
        2 * self.blocks.len() + self.quasilinear.len()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.quasilinear.is_empty()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.quasilinear.len() <= 1
    }

    pub fn is_hyperbolic_block(&self, i: usize) -> bool {
        self.field.is_zero(&self.blocks[i].0)
    }

    /// The nonsingular part, dropping the quasilinear coordinates.
    pub fn nonsingular_part(&self) -> QuadraticForm {
        QuadraticForm {
            field: self.field.clone(),
            blocks: self.blocks.clone(),
            quasilinear: Vec::new(),
        }
    }

    pub fn eval(&self, v: &[Elem]) -> FormResult<Elem> {
        self.check_len(v)?;
        let k = &self.field;
        let mut acc = k.zero();
        for (i, (a, b)) in self.blocks.iter().enumerate() {
            let x = &v[2 * i];
            let y = &v[2 * i + 1];
            let term = k.sum(&[
                k.mul(a, &k.sqr(x)?)?,
                k.mul(x, y)?,
                k.mul(b, &k.sqr(y)?)?,
            ])?;
            acc = k.add(&acc, &term)?;
        }
        let m = 2 * self.blocks.len();
        for (j, c) in self.quasilinear.iter().enumerate() {
            acc = k.add(&acc, &k.mul(c, &k.sqr(&v[m + j])?)?)?;
        }
        Ok(acc)
    }

    pub fn polar(&self, v: &[Elem], w: &[Elem]) -> FormResult<Elem> {
        self.check_len(v)?;
        self.check_len(w)?;
        let k = &self.field;
        let mut acc = k.zero();
        for i in 0..self.blocks.len() {
            let t = k.add(
                &k.mul(&v[2 * i], &w[2 * i + 1])?,
                &k.mul(&v[2 * i + 1], &w[2 * i])?,
            )?;
            acc = k.add(&acc, &t)?;
        }
        Ok(acc)
    }

    fn check_len(&self, v: &[Elem]) -> FormResult<()> {
        if v.len() != self.dim() {
            return Err(FormError::VectorLength {
                got: v.len(),
                want: self.dim(),
            });
        }
        Ok(())
    }

    pub fn is_zero_vector(&self, v: &[Elem]) -> bool {
        v.iter().all(|x| self.field.is_zero(x))
    }

    /// Upper-triangular coefficient matrix.
    pub fn gram(&self) -> GramInput {
        let k = &self.field;
        let n = self.dim();
        let mut m = vec![vec![k.zero(); n]; n];
        for (i, (a, b)) in self.blocks.iter().enumerate() {
            m[2 * i][2 * i] = a.clone();
            m[2 * i + 1][2 * i + 1] = b.clone();
            m[2 * i][2 * i + 1] = k.one();
        }
        let off = 2 * self.blocks.len();
        for (j, c) in self.quasilinear.iter().enumerate() {
            m[off + j][off + j] = c.clone();
        }
        GramInput {
            field: k.clone(),
            matrix: m,
        }
    }

    // ---- combination ----

    fn same_field(&self, other: &QuadraticForm) -> FormResult<()> {
        if self.field.descriptor() != other.field.descriptor() {
            return Err(FormError::FieldMismatch);
        }
        Ok(())
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> FormResult<QuadraticForm> {
        self.same_field(other)?;
        let mut out = self.clone();
        out.blocks.extend(other.blocks.iter().cloned());
        out.quasilinear.extend(other.quasilinear.iter().cloned());
        Ok(out)
    }

    /// λφ, with λ[a,b] = [λa, b/λ] and λ<c> = <λc>.
    pub fn scale(&self, lambda: &Elem) -> FormResult<QuadraticForm> {
        let k = &self.field;
        if k.is_zero(lambda) {
            return Err(FormError::ZeroScalar);
        }
        let inv = k.inv(lambda)?;
        let blocks = self
            .blocks
            .iter()
            .map(|(a, b)| Ok(normalize_block(k, k.mul(lambda, a)?, k.mul(&inv, b)?)))
            .collect::<FormResult<_>>()?;
        let quasilinear = self
            .quasilinear
            .iter()
            .map(|c| k.mul(lambda, c))
            .collect::<Result<_, _>>()?;
        Ok(QuadraticForm {
            field: k.clone(),
            blocks,
            quasilinear,
        })
    }

    /// Replaces block i by the isometric [a c^2, b c^-2].
    pub fn square_scale_block(&self, i: usize, c: &Elem) -> FormResult<QuadraticForm> {
        let k = &self.field;
        if k.is_zero(c) {
            return Err(FormError::ZeroScalar);
        }
        let c2 = k.sqr(c)?;
        let (a, b) = &self.blocks[i];
        let mut out = self.clone();
        out.blocks[i] = normalize_block(k, k.mul(a, &c2)?, k.div(b, &c2)?);
        Ok(out)
    }

    /// The sub-form made of the listed blocks and quasilinear entries.
    pub fn select(&self, blocks: &[usize], quasilinear: &[usize]) -> QuadraticForm {
        QuadraticForm {
            field: self.field.clone(),
            blocks: blocks.iter().map(|&i| self.blocks[i].clone()).collect(),
            quasilinear: quasilinear
                .iter()
                .map(|&j| self.quasilinear[j].clone())
                .collect(),
        }
    }

    /// Transports the form along a field embedding.
    pub fn map_field(
        &self,
        target: Arc<Tower>,
        f: impl Fn(&Elem) -> Elem,
    ) -> QuadraticForm {
        QuadraticForm {
            blocks: self.blocks.iter().map(|(a, b)| (f(a), f(b))).collect(),
            quasilinear: self.quasilinear.iter().map(&f).collect(),
            field: target,
        }
    }

    // ---- invariants ----

    /// Σ a_i b_i.
    pub fn arf_representative(&self) -> FormResult<Elem> {
        let k = &self.field;
        let mut acc = k.zero();
        for (a, b) in &self.blocks {
            acc = k.add(&acc, &k.mul(a, b)?)?;
        }
        Ok(acc)
    }

    pub fn arf(&self) -> FormResult<WpClass> {
        if !self.quasilinear.is_empty() {
            return Err(FormError::OddDimension);
        }
        Ok(self.field.wp_class(&self.arf_representative()?)?)
    }

    pub fn has_trivial_arf(&self) -> FormResult<bool> {
        Ok(self.arf()?.is_zero())
    }

    pub fn discriminant_algebra(&self) -> FormResult<DiscriminantAlgebra> {
        if !self.quasilinear.is_empty() {
            return Err(FormError::OddDimension);
        }
        let representative = self.arf_representative()?;
        let extension = self.field.quad_extend(&representative)?;
        Ok(DiscriminantAlgebra {
            representative,
            extension,
        })
    }

    pub fn render(&self) -> String {
        let k = &self.field;
        let mut parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(a, b)| {
                if k.is_zero(a) {
                    "H".to_string()
                } else {
                    format!("[{},{}]", k.render(a), k.render(b))
                }
            })
            .collect();
        parts.extend(
            self.quasilinear
                .iter()
                .map(|c| format!("<{}>", k.render(c))),
        );
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_repr(&self) -> FormRepr {
        let k = &self.field;
        FormRepr {
            field: k.descriptor().to_string(),
            dim: self.dim(),
            blocks: self
                .blocks
                .iter()
                .map(|(a, b)| [k.render(a), k.render(b)])
                .collect(),
            quasilinear: self.quasilinear.iter().map(|c| k.render(c)).collect(),
        }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Serializable rendering of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRepr {
    pub field: String,
    pub dim: usize,
    pub blocks: Vec<[String; 2]>,
    pub quasilinear: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DiscriminantAlgebra {
    pub representative: Elem,
    pub extension: ExtensionResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DiscriminantKind {
    Split,
    Field { extension: FieldDescriptor },
    Unsupported,
}

impl DiscriminantAlgebra {
    pub fn kind(&self) -> DiscriminantKind {
        match &self.extension {
            ExtensionResult::Split { .. } => DiscriminantKind::Split,
            ExtensionResult::Unramified(e) => DiscriminantKind::Field {
                extension: e.target.descriptor().clone(),
            },
            ExtensionResult::Ramified => DiscriminantKind::Unsupported,
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self.extension, ExtensionResult::Split { .. })
    }
}

/// Upper-triangular presentation: entry (i,i) is the coefficient of x_i^2,
/// entry (i,j) with i < j that of x_i x_j. Entries below the diagonal are
/// ignored.
#[derive(Clone, Debug)]
pub struct GramInput {
    pub field: Arc<Tower>,
    pub matrix: Vec<Vec<Elem>>,
}

/// A normal form together with the new basis written in old coordinates:
/// the i-th new coordinate vector is `basis[i]`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub form: QuadraticForm,
    pub basis: Vec<Vec<Elem>>,
}

impl GramInput {
    pub fn new(field: Arc<Tower>, matrix: Vec<Vec<Elem>>) -> FormResult<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(FormError::BadGram);
        }
        Ok(GramInput { field, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn eval(&self, x: &[Elem]) -> FormResult<Elem> {
        let k = &self.field;
        let mut acc = k.zero();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let g = &self.matrix[i][j];
                if k.is_zero(g) || k.is_zero(&x[i]) || k.is_zero(&x[j]) {
                    continue;
                }
                acc = k.add(&acc, &k.mul(g, &k.mul(&x[i], &x[j])?)?)?;
            }
        }
        Ok(acc)
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> FormResult<Elem> {
        let k = &self.field;
        let mut acc = k.zero();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let g = &self.matrix[i][j];
                if k.is_zero(g) {
                    continue;
                }
                let t = k.add(&k.mul(&x[i], &y[j])?, &k.mul(&x[j], &y[i])?)?;
                acc = k.add(&acc, &k.mul(g, &t)?)?;
            }
        }
        Ok(acc)
    }
}

/// Symplectic reduction of the polar form: split off planes spanned by a
/// pair u, w with b(u, w) = 1 and keep the radical as the quasilinear part.
pub fn normal_form(g: &GramInput) -> FormResult<NormalForm> {
    let k = g.field.clone();
    let n = g.dim();
    let mut rest: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut v = vec![k.zero(); n];
            v[i] = k.one();
            v
        })
        .collect();
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    loop {
        let mut pair = None;
        'search: for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let bij = g.polar(&rest[i], &rest[j])?;
                if !k.is_zero(&bij) {
                    pair = Some((i, j, bij));
                    break 'search;
                }
            }
        }
        let Some((i, j, bij)) = pair else { break };
        let u = rest[i].clone();
        let inv = k.inv(&bij)?;
        let w: Vec<Elem> = rest[j]
            .iter()
            .map(|x| k.mul(x, &inv))
            .collect::<Result<_, _>>()?;
        rest.remove(j);
        rest.remove(i);
        for x in rest.iter_mut() {
            let bxw = g.polar(x, &w)?;
            let bxu = g.polar(x, &u)?;
            crate::linalg::axpy(&k, x, &bxw, &u)?;
            crate::linalg::axpy(&k, x, &bxu, &w)?;
        }
        blocks.push((g.eval(&u)?, g.eval(&w)?));
        basis.push(u);
        basis.push(w);
    }
    match rest.len() {
        0 => {}
        1 => {
            let c = g.eval(&rest[0])?;
            if k.is_zero(&c) {
                return Err(FormError::Defective);
            }
            basis.push(rest.pop().expect("one vector"));
            return Ok(NormalForm {
                form: QuadraticForm::new(k, blocks, vec![c])?,
                basis,
            });
        }
        d => return Err(FormError::Degenerate(d)),
    }
    Ok(NormalForm {
        form: QuadraticForm::new(k, blocks, Vec::new())?,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2t() -> Arc<Tower> {
        Tower::laurent(1, &["t"]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let k = f2t();
        let (o, z) = (k.one(), k.zero());
        // x^2 + xy + y^2 + z^2
        let g = GramInput::new(
            k.clone(),
            vec![
                vec![o.clone(), o.clone(), z.clone()],
                vec![z.clone(), o.clone(), z.clone()],
                vec![z.clone(), z.clone(), o.clone()],
            ],
        )
        .unwrap();
        let nf = normal_form(&g).unwrap();
        assert_eq!(nf.form.blocks(), &[(o.clone(), o.clone())]);
        assert_eq!(nf.form.quasilinear(), std::slice::from_ref(&o));
        // xy
        let g = GramInput::new(
            k.clone(),
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        )
        .unwrap();
        assert!(normal_form(&g).unwrap().form.is_hyperbolic_block(0));
        // x^2 + y^2 + z^2
        let mut m = vec![vec![z.clone(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = o.clone();
        }
        let g = GramInput::new(k, m).unwrap();
        assert_eq!(normal_form(&g).unwrap_err(), FormError::Degenerate(3));
    }

    #[test]
    fn arf_examples() {
        let k = f2t();
        let t = k.t();
        let one = k.one();
        let q = QuadraticForm::new(
            k.clone(),
            vec![
                (one.clone(), t.clone()),
                (one.clone(), k.add(&t, &one).unwrap()),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(q.arf().unwrap(), k.wp_class(&one).unwrap());
        assert!(QuadraticForm::hyperbolic(k.clone(), 2).arf().unwrap().is_zero());
        let odd = QuadraticForm::new(k, vec![], vec![one]);
        assert_eq!(odd.unwrap().arf().unwrap_err(), FormError::OddDimension);
    }

    #[test]
    fn scaling_convention() {
        let k = f2t();
        let t = k.t();
        let one = k.one();
        let q = QuadraticForm::binary(k.clone(), one.clone(), one.clone());
        let s = q.scale(&t).unwrap();
        assert_eq!(s.blocks()[0], (t.clone(), k.inv(&t).unwrap()));
        let q2 = QuadraticForm::binary(k.clone(), k.sqr(&t).unwrap(), one);
        let r = q2.square_scale_block(0, &k.inv(&t).unwrap()).unwrap();
        assert_eq!(r.blocks()[0], (k.one(), k.sqr(&t).unwrap()));
    }
}
