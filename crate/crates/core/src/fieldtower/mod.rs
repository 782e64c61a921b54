//! Exact arithmetic in towers F_{2^e}((t1))...((tn)).
//!
//! An element of level n is a reduced fraction p/q of polynomials in tn whose
//! coefficients are elements of level n-1; the denominator is monic, so two
//! elements are equal iff they are structurally equal. Level 0 is F_{2^e}.
//! Rational functions are dense in the Laurent tower, and every decision made
//! here (valuations, squares, Artin-Schreier classes) is computed exactly on
//! the fraction without truncating any series.

mod artin_schreier;
pub mod gf;
mod poly;
mod squares;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use artin_schreier::{Embedding, ExtensionResult, WpClass, WpNormal};
use gf::Gf;

/// Name of the generator of F_{2^e} over F_2 in the element syntax.
pub const GENERATOR: &str = "g";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("base exponent {0} outside 1..=32")]
    BadExponent(u32),
    #[error("F_2^{small} does not embed in F_2^{big}")]
    NotASubfield { small: u32, big: u32 },
    #[error("tower depth {depth} exceeds the configured cap {cap}")]
    DepthExceeded { depth: usize, cap: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` cannot be used as a variable name")]
    BadVariable(String),
    #[error("degree {degree} in `{var}` exceeds the configured cap {cap}")]
    DegreeOverflow { var: String, degree: usize, cap: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has infinite valuation")]
    ZeroElement,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("base field F_2^{0} has no generator `g`")]
    NoGenerator(u32),
    #[error("quadratic extension of F_2^{0} exceeds the supported base size")]
    ExtensionTooLarge(u32),
}

pub type FResult<T> = Result<T, FieldError>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtensionStep {
    pub from_exponent: u32,
    /// The Artin-Schreier constant c, rendered over the smaller base:
    /// the new base is F_{2^e}[theta]/(theta^2 + theta + c).
    pub constant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub base_exponent: u32,
    pub variables: Vec<String>,
    #[serde(default)]
    pub extension_chain: Vec<ExtensionStep>,
}

impl FieldDescriptor {
    pub fn new(base_exponent: u32, variables: &[&str]) -> Self {
        FieldDescriptor {
            base_exponent,
            variables: variables.iter().map(|v| v.to_string()).collect(),
            extension_chain: Vec::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.variables.len()
    }

    /// One field embeds in the other iff the base exponent divides and the
    /// variables form a prefix.
    pub fn embeds_in(&self, other: &FieldDescriptor) -> bool {
        other.base_exponent.is_multiple_of(self.base_exponent)
            && other.variables.len() >= self.variables.len()
            && other.variables[..self.variables.len()] == self.variables[..]
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base_exponent == 1 {
            write!(f, "F2")?;
        } else {
            write!(f, "F2^{}", self.base_exponent)?;
        }
        for v in &self.variables {
            write!(f, "(({v}))")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Limits {
    pub max_depth: usize,
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 4,
            max_degree: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Base(u64),
    Frac(Arc<Frac>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    /// Coefficients in increasing degree; empty for zero.
    num: Vec<Elem>,
    /// Monic, nonempty.
    den: Vec<Elem>,
}

impl Frac {
    pub fn num(&self) -> &[Elem] {
        &self.num
    }

    pub fn den(&self) -> &[Elem] {
        &self.den
    }
}

/// Arithmetic context for one tower level; holds the context of the level
/// below so that coefficient arithmetic recurses without extra bookkeeping.
#[derive(Debug)]
pub struct Tower {
    desc: FieldDescriptor,
    gf: Gf,
    limits: Limits,
    lower: Option<Arc<Tower>>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for Tower {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, GENERATOR | "pf" | "H" | "F2")
}

impl Tower {
    pub fn new(desc: FieldDescriptor, limits: Limits) -> FResult<Arc<Tower>> {
        if desc.level() > limits.max_depth {
            return Err(FieldError::DepthExceeded {
                depth: desc.level(),
                cap: limits.max_depth,
            });
        }
        for (i, v) in desc.variables.iter().enumerate() {
            if !valid_name(v) {
                return Err(FieldError::BadVariable(v.clone()));
            }
            if desc.variables[..i].contains(v) {
                return Err(FieldError::DuplicateVariable(v.clone()));
            }
        }
        let gf = Gf::new(desc.base_exponent)?;
        let mut tower = Arc::new(Tower {
            desc: FieldDescriptor {
                variables: Vec::new(),
                ..desc.clone()
            },
            gf: gf.clone(),
            limits,
            lower: None,
        });
        for n in 1..=desc.level() {
            tower = Arc::new(Tower {
                desc: FieldDescriptor {
                    variables: desc.variables[..n].to_vec(),
                    ..desc.clone()
                },
                gf: gf.clone(),
                limits,
                lower: Some(tower),
            });
        }
        Ok(tower)
    }

    /// F_2((v1))...((vn)) with default limits.
    pub fn laurent(base_exponent: u32, variables: &[&str]) -> FResult<Arc<Tower>> {
        Tower::new(
            FieldDescriptor::new(base_exponent, variables),
            Limits::default(),
        )
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn level(&self) -> usize {
        self.desc.level()
    }

    pub fn base(&self) -> &Gf {
        &self.gf
    }

    pub fn lower(&self) -> Option<&Arc<Tower>> {
        self.lower.as_ref()
    }

    fn low(&self) -> &Tower {
        self.lower.as_deref().expect("level >= 1")
    }

    /// The tower consisting of the first `level` variables.
    pub fn truncate(self: &Arc<Self>, level: usize) -> Arc<Tower> {
        let mut t = self.clone();
        while t.level() > level {
            t = t.lower.clone().expect("level >= 1");
        }
        t
    }

    pub fn top_variable(&self) -> Option<&str> {
        self.desc.variables.last().map(String::as_str)
    }

    // ---- constructors ----

    pub fn zero(&self) -> Elem {
        match &self.lower {
            None => Elem::Base(0),
            Some(l) => Elem::Frac(Arc::new(Frac {
                num: Vec::new(),
                den: vec![l.one()],
            })),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_base(1)
    }

    pub fn from_base(&self, c: u64) -> Elem {
        debug_assert!(self.gf.contains(c));
        match &self.lower {
            None => Elem::Base(c),
            Some(l) => self.constant(l.from_base(c)),
        }
    }

    pub fn from_bit(&self, b: bool) -> Elem {
        self.from_base(b as u64)
    }

    pub fn generator(&self) -> FResult<Elem> {
        if self.gf.exponent() == 1 {
            return Err(FieldError::NoGenerator(1));
        }
        Ok(self.from_base(2))
    }

    /// Embeds an element of the level below as a constant.
    pub fn constant(&self, c: Elem) -> Elem {
        let l = self.low();
        let num = if l.is_zero(&c) { Vec::new() } else { vec![c] };
        Elem::Frac(Arc::new(Frac {
            num,
            den: vec![l.one()],
        }))
    }

    /// Embeds an element of a lower level `from` into this level.
    pub fn lift_from(&self, from: usize, x: Elem) -> Elem {
        if from == self.level() {
            return x;
        }
        let c = self.low().lift_from(from, x);
        self.constant(c)
    }

    /// The top variable t_n.
    pub fn t(&self) -> Elem {
        let l = self.low();
        Elem::Frac(Arc::new(Frac {
            num: vec![l.zero(), l.one()],
            den: vec![l.one()],
        }))
    }

    pub fn var(&self, name: &str) -> FResult<Elem> {
        let idx = self
            .desc
            .variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| FieldError::UnknownVariable(name.to_string()))?;
        let sub = self.at_level(idx + 1);
        Ok(self.lift_from(idx + 1, sub.t()))
    }

    fn at_level(&self, level: usize) -> &Tower {
        let mut t = self;
        while t.level() > level {
            t = t.low();
        }
        t
    }

    /// t_n^k for any integer k.
    pub fn t_pow(&self, k: i64) -> Elem {
        let l = self.low();
        let mono = |d: usize| {
            let mut v = vec![l.zero(); d];
            v.push(l.one());
            v
        };
        let (num, den) = if k >= 0 {
            (mono(k as usize), vec![l.one()])
        } else {
            (vec![l.one()], mono((-k) as usize))
        };
        Elem::Frac(Arc::new(Frac { num, den }))
    }

    /// c * t^k for a lower-level coefficient c.
    pub fn monomial(&self, c: Elem, k: i64) -> FResult<Elem> {
        self.mul(&self.constant(c), &self.t_pow(k))
    }

    // ---- inspection ----

    pub fn is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Base(c) => *c == 0,
            Elem::Frac(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    pub fn frac<'a>(&self, x: &'a Elem) -> &'a Frac {
        match x {
            Elem::Frac(f) => f,
            Elem::Base(_) => panic!("expected an element of level {}", self.level()),
        }
    }

    pub fn base_value(&self, x: &Elem) -> u64 {
        match x {
            Elem::Base(c) => *c,
            Elem::Frac(_) => panic!("expected a base-field element"),
        }
    }

    /// The lower-level constant c if x = c is constant in t_n.
    pub fn as_constant(&self, x: &Elem) -> Option<Elem> {
        let f = self.frac(x);
        if f.den.len() != 1 || f.num.len() > 1 {
            return None;
        }
        Some(f.num.first().cloned().unwrap_or_else(|| self.low().zero()))
    }

    /// The base-field value if x lies in F_{2^e}.
    pub fn as_base(&self, x: &Elem) -> Option<u64> {
        match &self.lower {
            None => Some(self.base_value(x)),
            Some(l) => l.as_base(&self.as_constant(x)?),
        }
    }

    // ---- arithmetic ----

    fn check_degree(&self, p: &[Elem]) -> FResult<()> {
        if p.len() > self.limits.max_degree + 1 {
            return Err(FieldError::DegreeOverflow {
                var: self.top_variable().unwrap_or("").to_string(),
                degree: p.len() - 1,
                cap: self.limits.max_degree,
            });
        }
        Ok(())
    }

    /// Builds the canonical fraction num/den.
    fn make(&self, num: Vec<Elem>, den: Vec<Elem>) -> FResult<Elem> {
        let l = self.low();
        if den.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(self.zero());
        }
        let (num, den) = if den.len() > 1 {
            let g = poly::gcd(l, &num, &den)?;
            if g.len() > 1 {
                (poly::div_exact(l, &num, &g)?, poly::div_exact(l, &den, &g)?)
            } else {
                (num, den)
            }
        } else {
            (num, den)
        };
        let lc = den.last().expect("nonempty").clone();
        let (num, den) = if l.is_one(&lc) {
            (num, den)
        } else {
            let inv = l.inv(&lc)?;
            (poly::scale(l, &num, &inv)?, poly::scale(l, &den, &inv)?)
        };
        self.check_degree(&num)?;
        self.check_degree(&den)?;
        Ok(Elem::Frac(Arc::new(Frac { num, den })))
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> FResult<Elem> {
        match (x, y) {
            (Elem::Base(a), Elem::Base(b)) => Ok(Elem::Base(a ^ b)),
            (Elem::Frac(a), Elem::Frac(b)) => {
                let l = self.low();
                if a.num.is_empty() {
                    return Ok(y.clone());
                }
                if b.num.is_empty() {
                    return Ok(x.clone());
                }
                if a.den == b.den {
                    let num = poly::add(l, &a.num, &b.num)?;
                    if a.den.len() == 1 {
                        self.check_degree(&num)?;
                        return Ok(Elem::Frac(Arc::new(Frac {
                            num,
                            den: a.den.clone(),
                        })));
                    }
                    return self.make(num, a.den.clone());
                }
                let num = poly::add(
                    l,
                    &poly::mul(l, &a.num, &b.den)?,
                    &poly::mul(l, &b.num, &a.den)?,
                )?;
                let den = poly::mul(l, &a.den, &b.den)?;
                self.make(num, den)
            }
            _ => panic!("level mismatch in add"),
        }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> FResult<Elem> {
        self.add(x, y)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Elem>>(&self, items: I) -> FResult<Elem> {
        let mut acc = self.zero();
        for x in items {
            acc = self.add(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> FResult<Elem> {
        match (x, y) {
            (Elem::Base(a), Elem::Base(b)) => Ok(Elem::Base(self.gf.mul(*a, *b))),
            (Elem::Frac(a), Elem::Frac(b)) => {
                let l = self.low();
                if a.num.is_empty() || b.num.is_empty() {
                    return Ok(self.zero());
                }
                if a.den.len() == 1 && b.den.len() == 1 {
                    let num = poly::mul(l, &a.num, &b.num)?;
                    self.check_degree(&num)?;
                    return Ok(Elem::Frac(Arc::new(Frac {
                        num,
                        den: a.den.clone(),
                    })));
                }
                // Cross-cancel so that the product of reduced fractions
                // stays reduced.
                let g1 = poly::gcd(l, &a.num, &b.den)?;
                let g2 = poly::gcd(l, &b.num, &a.den)?;
                let num = poly::mul(
                    l,
                    &poly::div_exact(l, &a.num, &g1)?,
                    &poly::div_exact(l, &b.num, &g2)?,
                )?;
                let den = poly::mul(
                    l,
                    &poly::div_exact(l, &a.den, &g2)?,
                    &poly::div_exact(l, &b.den, &g1)?,
                )?;
                self.make(num, den)
            }
            _ => panic!("level mismatch in mul"),
        }
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Elem>>(&self, items: I) -> FResult<Elem> {
        let mut acc = self.one();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn sqr(&self, x: &Elem) -> FResult<Elem> {
        match x {
            Elem::Base(a) => Ok(Elem::Base(self.gf.sqr(*a))),
            Elem::Frac(a) => {
                let l = self.low();
                // Frobenius: (sum c_i t^i)^2 = sum c_i^2 t^(2i).
                let sq = |p: &[Elem]| -> FResult<Vec<Elem>> {
                    let mut out = Vec::with_capacity(2 * p.len());
                    for (i, c) in p.iter().enumerate() {
                        if i > 0 {
                            out.push(l.zero());
                        }
                        out.push(l.sqr(c)?);
                    }
                    Ok(out)
                };
                let num = sq(&a.num)?;
                let den = sq(&a.den)?;
                self.check_degree(&num)?;
                self.check_degree(&den)?;
                Ok(Elem::Frac(Arc::new(Frac { num, den })))
            }
        }
    }

    pub fn inv(&self, x: &Elem) -> FResult<Elem> {
        match x {
            Elem::Base(a) => self
                .gf
                .inv(*a)
                .map(Elem::Base)
                .ok_or(FieldError::DivisionByZero),
            Elem::Frac(a) => {
                if a.num.is_empty() {
                    return Err(FieldError::DivisionByZero);
                }
                let l = self.low();
                let lc = a.num.last().expect("nonzero").clone();
                let inv = l.inv(&lc)?;
                Ok(Elem::Frac(Arc::new(Frac {
                    num: poly::scale(l, &a.den, &inv)?,
                    den: poly::scale(l, &a.num, &inv)?,
                })))
            }
        }
    }

    pub fn div(&self, x: &Elem, y: &Elem) -> FResult<Elem> {
        let yi = self.inv(y)?;
        self.mul(x, &yi)
    }

    pub fn pow(&self, x: &Elem, k: i64) -> FResult<Elem> {
        let base = if k < 0 { self.inv(x)? } else { x.clone() };
        let mut n = k.unsigned_abs();
        let mut b = base;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b)?;
            }
            n >>= 1;
            if n > 0 {
                b = self.sqr(&b)?;
            }
        }
        Ok(acc)
    }

    /// Applies a map on base-field values coefficientwise (used for field
    /// embeddings; the map must be an injective ring homomorphism).
    pub(crate) fn map_base(&self, x: &Elem, f: &dyn Fn(u64) -> u64) -> Elem {
        match x {
            Elem::Base(c) => Elem::Base(f(*c)),
            Elem::Frac(a) => {
                let l = self.low();
                Elem::Frac(Arc::new(Frac {
                    num: a.num.iter().map(|c| l.map_base(c, f)).collect(),
                    den: a.den.iter().map(|c| l.map_base(c, f)).collect(),
                }))
            }
        }
    }

    // ---- valuation and expansion at t_n = 0 ----

    /// (v, u) with x = t_n^v * u and u a unit.
    pub fn valuation_split(&self, x: &Elem) -> FResult<(i64, Elem)> {
        let v = self.valuation(x)?;
        let u = self.mul(x, &self.t_pow(-v))?;
        Ok((v, u))
    }

    pub fn valuation(&self, x: &Elem) -> FResult<i64> {
        let f = self.frac(x);
        if f.num.is_empty() {
            return Err(FieldError::ZeroElement);
        }
        Ok(poly::ord(self.low(), &f.num) as i64 - poly::ord(self.low(), &f.den) as i64)
    }

    /// Valuation, with zero mapped to `None` (infinity).
    pub fn valuation_opt(&self, x: &Elem) -> Option<i64> {
        self.valuation(x).ok()
    }

    /// Leading coefficient of the t_n-adic expansion.
    pub fn residue_of_unit_part(&self, x: &Elem) -> FResult<Elem> {
        let f = self.frac(x);
        if f.num.is_empty() {
            return Err(FieldError::ZeroElement);
        }
        let l = self.low();
        let a = &f.num[poly::ord(l, &f.num)];
        let b = &f.den[poly::ord(l, &f.den)];
        l.div(a, b)
    }

    /// Coefficients of t^k for k in from..=to in the t_n-adic expansion.
    pub fn laurent_coeffs(&self, x: &Elem, from: i64, to: i64) -> FResult<Vec<Elem>> {
        let l = self.low();
        let f = self.frac(x);
        let width = (to - from + 1).max(0) as usize;
        if f.num.is_empty() {
            return Ok(vec![l.zero(); width]);
        }
        let a = poly::ord(l, &f.num);
        let b = poly::ord(l, &f.den);
        let v = a as i64 - b as i64;
        let p = &f.num[a..];
        let q = &f.den[b..];
        // x = t^v * p/q with q(0) != 0.
        let q0inv = l.inv(&q[0])?;
        let mut series: Vec<Elem> = Vec::new();
        let mut out = Vec::with_capacity(width);
        for k in from..=to {
            let i = k - v;
            if i < 0 {
                out.push(l.zero());
                continue;
            }
            let i = i as usize;
            while series.len() <= i {
                let n = series.len();
                let mut acc = p.get(n).cloned().unwrap_or_else(|| l.zero());
                for j in 1..=n.min(q.len() - 1) {
                    let prod = l.mul(&q[j], &series[n - j])?;
                    acc = l.add(&acc, &prod)?;
                }
                series.push(l.mul(&acc, &q0inv)?);
            }
            out.push(series[i].clone());
        }
        Ok(out)
    }

    /// Value at t_n = 0 of an element of nonnegative valuation.
    pub fn constant_term(&self, x: &Elem) -> FResult<Elem> {
        Ok(self.laurent_coeffs(x, 0, 0)?.remove(0))
    }

    // ---- rendering ----

    pub fn render(&self, x: &Elem) -> String {
        match &self.lower {
            None => self.gf.render(self.base_value(x), GENERATOR),
            Some(l) => {
                let f = self.frac(x);
                let t = self.top_variable().expect("level >= 1");
                if f.num.is_empty() {
                    return "0".into();
                }
                let dlen = f.den.len();
                let mono_den = f.den[..dlen - 1].iter().all(|c| l.is_zero(c));
                if mono_den {
                    let shift = dlen as i64 - 1;
                    render_poly(l, &f.num, -shift, t)
                } else {
                    format!(
                        "({})/({})",
                        render_poly(l, &f.num, 0, t),
                        render_poly(l, &f.den, 0, t)
                    )
                }
            }
        }
    }
}

fn render_poly(l: &Tower, p: &[Elem], shift: i64, t: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if l.is_zero(c) {
            continue;
        }
        let e = i as i64 + shift;
        let cs = l.render(c);
        let tpart = match e {
            0 => None,
            1 => Some(t.to_string()),
            _ => Some(format!("{t}^{e}")),
        };
        terms.push(match tpart {
            None => {
                if cs.contains('+') && p.len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            }
            Some(tp) if cs == "1" => tp,
            Some(tp) if cs.contains('+') || cs.contains('/') => format!("({cs})*{tp}"),
            Some(tp) => format!("{cs}*{tp}"),
        });
    }
    terms.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st() -> Arc<Tower> {
        Tower::laurent(1, &["s", "t"]).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let k = st();
        let s = k.var("s").unwrap();
        let t = k.var("t").unwrap();
        let x = k.add(&s, &t).unwrap();
        assert_eq!(k.add(&x, &x).unwrap(), k.zero());
        let y = k.div(&x, &k.sqr(&t).unwrap()).unwrap();
        let back = k.mul(&y, &k.sqr(&t).unwrap()).unwrap();
        assert_eq!(back, x);
        let inv = k.inv(&y).unwrap();
        assert_eq!(k.mul(&inv, &y).unwrap(), k.one());
    }

    #[test]
    fn fractions_are_canonical() {
        let k = Tower::laurent(1, &["t"]).unwrap();
        let t = k.t();
        let one = k.one();
        let a = k.add(&one, &t).unwrap();
        let a2 = k.sqr(&a).unwrap();
        // (1+t)^2 / (1+t) reduces to 1+t.
        assert_eq!(k.div(&a2, &a).unwrap(), a);
        let x = k.div(&one, &a).unwrap();
        let y = k.div(&a, &a2).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn valuation_split_examples() {
        let k = st();
        let s = k.var("s").unwrap();
        let t = k.var("t").unwrap();
        assert_eq!(k.valuation_split(&t).unwrap(), (1, k.one()));
        let x = k.div(&k.add(&s, &t).unwrap(), &k.sqr(&t).unwrap()).unwrap();
        let (v, u) = k.valuation_split(&x).unwrap();
        assert_eq!(v, -2);
        assert_eq!(u, k.add(&s, &t).unwrap());
        assert_eq!(
            k.residue_of_unit_part(&x).unwrap(),
            k.lower().unwrap().t()
        );
        let y = k.inv(&k.add(&k.one(), &t).unwrap()).unwrap();
        let (v, u) = k.valuation_split(&y).unwrap();
        assert_eq!(v, 0);
        assert_eq!(u, y);
        assert_eq!(k.constant_term(&y).unwrap(), k.lower().unwrap().one());
        assert_eq!(k.valuation(&k.zero()), Err(FieldError::ZeroElement));
    }

    #[test]
    fn laurent_expansion_of_geometric_series() {
        let k = Tower::laurent(1, &["t"]).unwrap();
        let y = k.inv(&k.add(&k.one(), &k.t()).unwrap()).unwrap();
        let c = k.laurent_coeffs(&y, -2, 4).unwrap();
        let l = k.lower().unwrap();
        assert_eq!(c[0], l.zero());
        assert_eq!(c[1], l.zero());
        assert!(c[2..].iter().all(|x| *x == l.one()));
    }

    #[test]
    fn degree_cap_is_a_hard_error() {
        let k = Tower::new(
            FieldDescriptor::new(1, &["t"]),
            Limits {
                max_depth: 4,
                max_degree: 8,
            },
        )
        .unwrap();
        let t8 = k.t_pow(8);
        assert!(matches!(
            k.mul(&t8, &k.t()),
            Err(FieldError::DegreeOverflow { degree: 9, .. })
        ));
    }

    #[test]
    fn depth_cap_and_names() {
        assert!(matches!(
            Tower::laurent(1, &["a", "b", "c", "d", "e"]),
            Err(FieldError::DepthExceeded { .. })
        ));
        assert!(matches!(
            Tower::laurent(1, &["s", "s"]),
            Err(FieldError::DuplicateVariable(_))
        ));
        assert!(matches!(
            Tower::laurent(1, &["g"]),
            Err(FieldError::BadVariable(_))
        ));
    }

    #[test]
    fn embeds_in() {
        let a = FieldDescriptor::new(1, &["s"]);
        let b = FieldDescriptor::new(2, &["s", "t"]);
        assert!(a.embeds_in(&b));
        assert!(!b.embeds_in(&a));
        assert_eq!(b.to_string(), "F2^2((s))((t))");
    }
}
