//! Artin-Schreier classes K / p(K), where p(y) = y^2 + y.
//!
//! For K = k((t)) every class has a unique representative
//!   sum over j < 0 of w_j t^j  +  c  with c in k taken modulo p(k),
//! where w_j is arbitrary for odd j and has no square component for even j.
//! Terms of positive valuation are always in p(K) by Hensel's lemma.

use std::sync::Arc;

use super::{gf::Gf, ExtensionStep, FResult, FieldError, Tower};
use super::{Elem, FieldDescriptor};

/// a = (sum of wild terms) + constant + positive + p(z).
#[derive(Clone, Debug)]
pub struct WpNormal {
    /// (exponent, coefficient one level down), most negative exponent first.
    pub wild: Vec<(i64, Elem)>,
    /// One level down.
    pub constant: Elem,
    /// Valuation > 0 (or zero).
    pub positive: Elem,
    pub z: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WpClass {
    Base { trace: bool },
    Laurent {
        wild: Vec<(i64, Elem)>,
        constant: Box<WpClass>,
    },
}

impl WpClass {
    pub fn is_zero(&self) -> bool {
        match self {
            WpClass::Base { trace } => !trace,
            WpClass::Laurent { wild, constant } => wild.is_empty() && constant.is_zero(),
        }
    }

    /// No wild terms at any level: the class comes from the finite base.
    pub fn is_tame(&self) -> bool {
        match self {
            WpClass::Base { .. } => true,
            WpClass::Laurent { wild, constant } => wild.is_empty() && constant.is_tame(),
        }
    }

    pub fn base_trace(&self) -> bool {
        match self {
            WpClass::Base { trace } => *trace,
            WpClass::Laurent { constant, .. } => constant.base_trace(),
        }
    }

    /// Wild terms at the top level only.
    pub fn top_wild(&self) -> &[(i64, Elem)] {
        match self {
            WpClass::Base { .. } => &[],
            WpClass::Laurent { wild, .. } => wild,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExtensionResult {
    /// The polynomial x^2 + x + delta has a root in K.
    Split { root: Option<Elem> },
    /// K(p^-1 delta) = K with the base field doubled.
    Unramified(Embedding),
    /// Wild or ramified; not supported.
    Ramified,
}

/// The embedding K = F_{2^e}((...)) -> F_{2^2e}((...)) that is the identity
/// on the variables.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Arc<Tower>,
    pub target: Arc<Tower>,
    image_of_generator: u64,
}

impl Embedding {
    pub fn new(source: Arc<Tower>, target: Arc<Tower>) -> FResult<Embedding> {
        if !source.descriptor().embeds_in(target.descriptor())
            || source.level() != target.level()
        {
            return Err(FieldError::NotASubfield {
                small: source.base().exponent(),
                big: target.base().exponent(),
            });
        }
        let image_of_generator = target.base().embedding_image(source.base())?;
        Ok(Embedding {
            source,
            target,
            image_of_generator,
        })
    }

    pub fn map(&self, x: &Elem) -> Elem {
        let big = self.target.base();
        let g = self.image_of_generator;
        self.source
            .map_base(x, &|c: u64| big.eval_binary_poly(c, g))
    }
}

impl Tower {
    pub fn wp_normal(&self, a: &Elem) -> FResult<WpNormal> {
        let l = self.lower().expect("Artin-Schreier normal form needs level >= 1");
        let v = match self.valuation_opt(a) {
            None => 0,
            Some(v) => v.min(0),
        };
        let mut c = self.laurent_coeffs(a, v, 0)?;
        let idx = |j: i64| (j - v) as usize;
        let mut wild = Vec::new();
        let mut z = self.zero();
        for j in v..0 {
            let cj = c[idx(j)].clone();
            if l.is_zero(&cj) {
                continue;
            }
            if j % 2 != 0 {
                wild.push((j, cj));
                continue;
            }
            // f0^2 t^j = p(f0 t^(j/2)) + f0 t^(j/2).
            let f0 = l.frobenius_components(&cj)?.swap_remove(0);
            let rest = l.add(&cj, &l.sqr(&f0)?)?;
            if !l.is_zero(&rest) {
                wild.push((j, rest));
            }
            if !l.is_zero(&f0) {
                let h = idx(j / 2);
                c[h] = l.add(&c[h], &f0)?;
                z = self.add(&z, &self.monomial(f0, j / 2)?)?;
            }
        }
        let constant = c[idx(0)].clone();
        let mut positive = self.add(a, &self.constant(constant.clone()))?;
        for (j, w) in &wild {
            positive = self.add(&positive, &self.monomial(w.clone(), *j)?)?;
        }
        positive = self.add(&positive, &self.wp(&z)?)?;
        debug_assert!(self.valuation_opt(&positive).is_none_or(|v| v > 0));
        Ok(WpNormal {
            wild,
            constant,
            positive,
            z,
        })
    }

    /// y^2 + y.
    pub fn wp(&self, y: &Elem) -> FResult<Elem> {
        self.add(&self.sqr(y)?, y)
    }

    pub fn wp_class(&self, a: &Elem) -> FResult<WpClass> {
        match self.lower() {
            None => Ok(WpClass::Base {
                trace: self.base().trace(self.base_value(a)),
            }),
            Some(l) => {
                let n = self.wp_normal(a)?;
                Ok(WpClass::Laurent {
                    wild: n.wild,
                    constant: Box::new(l.wp_class(&n.constant)?),
                })
            }
        }
    }

    /// Whether a lies in p(K).
    pub fn wp_member(&self, a: &Elem) -> FResult<bool> {
        Ok(self.wp_class(a)?.is_zero())
    }

    /// A root y in the rational subfield with y^2 + y = a, when one is found.
    /// `None` either means a is not in p(K) or that the root is a genuine
    /// power series; callers treat it as "no exact witness".
    pub fn exact_wp_root(&self, a: &Elem) -> FResult<Option<Elem>> {
        let l = match self.lower() {
            None => {
                return Ok(self
                    .base()
                    .solve_wp(self.base_value(a))
                    .map(Elem::Base))
            }
            Some(l) => l.clone(),
        };
        let n = self.wp_normal(a)?;
        if !n.wild.is_empty() {
            return Ok(None);
        }
        let r0 = match l.exact_wp_root(&n.constant)? {
            None => return Ok(None),
            Some(r) => r,
        };
        let yp = match self.polynomial_wp_root(&n.positive)? {
            None => return Ok(None),
            Some(y) => y,
        };
        let y = self.add(&self.add(&n.z, &self.constant(r0))?, &yp)?;
        if self.wp(&y)? == *a {
            Ok(Some(y))
        } else {
            Ok(None)
        }
    }

    /// Root of y^2 + y = p for a polynomial p in t with p(0) = 0, reducing
    /// from the top degree down.
    fn polynomial_wp_root(&self, p: &Elem) -> FResult<Option<Elem>> {
        let l = self.lower().expect("level >= 1").clone();
        let f = self.frac(p);
        if f.den().len() != 1 {
            return Ok(None);
        }
        let mut rem: Vec<Elem> = f.num().to_vec();
        let mut y = vec![l.zero(); rem.len() / 2 + 1];
        while let Some(top) = rem.len().checked_sub(1) {
            if top == 0 || top % 2 == 1 {
                return Ok(None);
            }
            let root = match l.sqrt(&rem[top])? {
                None => return Ok(None),
                Some(r) => r,
            };
            let h = top / 2;
            rem[top] = l.zero();
            rem[h] = l.add(&rem[h], &root)?;
            y[h] = root;
            rem = super::poly::trim(&l, rem);
        }
        let y = super::poly::trim(&l, y);
        self.make(y, vec![l.one()]).map(Some)
    }

    /// Studies the quadratic extension K(p^-1 delta).
    pub fn quad_extend(self: &Arc<Self>, delta: &Elem) -> FResult<ExtensionResult> {
        let class = self.wp_class(delta)?;
        if class.is_zero() {
            return Ok(ExtensionResult::Split {
                root: self.exact_wp_root(delta)?,
            });
        }
        if !class.is_tame() {
            return Ok(ExtensionResult::Ramified);
        }
        Ok(ExtensionResult::Unramified(self.unramified_extension()?))
    }

    /// The unique unramified quadratic extension: double the base field.
    pub fn unramified_extension(self: &Arc<Self>) -> FResult<Embedding> {
        let e = self.base().exponent();
        if 2 * e > super::gf::MAX_EXPONENT {
            return Err(FieldError::ExtensionTooLarge(e));
        }
        let small = Gf::new(e)?;
        let c0 = small.trace_one();
        let desc = self.descriptor();
        let mut chain = desc.extension_chain.clone();
        chain.push(ExtensionStep {
            from_exponent: e,
            constant: small.render(c0, super::GENERATOR),
        });
        let target = Tower::new(
            FieldDescriptor {
                base_exponent: 2 * e,
                variables: desc.variables.clone(),
                extension_chain: chain,
            },
            self.limits(),
        )?;
        Embedding::new(self.clone(), target)
    }
}
