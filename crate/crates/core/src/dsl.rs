//! Text syntax for fields, elements and forms.
//!
//! ```text
//! field   := "F2" ("^" int)? ("((" name "))")*
//! form    := term ("+" term)*
//! term    := (product "*")? atom
//! atom    := "[" elem "," elem "]" | "<" elem ("," elem)* ">" | "H"
//!          | "pf" "(" (elem ("," elem)*)? ";" elem ")" | "(" form ")"
//! elem    := product (("+" | "-") product)*
//! product := unary (("*" | "/") unary)*
//! unary   := "-" unary | primary ("^" "-"? int)?
//! primary := int | name | "g" | "(" elem ")"
//! ```
//! Integers are read modulo 2 and `g` is the generator of F_{2^e}.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fieldtower::{Elem, FieldDescriptor, FieldError, Tower, GENERATOR};
use crate::forms::{FormError, QuadraticForm};
use crate::pfister::{make_pfister, PfisterSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    /// Set when the text parsed but the value was rejected.
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        if let Some(m) = &self.message {
            return f.write_str(m);
        }
        write!(f, "expected {}", self.expected.join(" or "))?;
        if self.found.is_empty() {
            write!(f, ", found end of input")
        } else {
            write!(f, ", found `{}`", self.found)
        }
    }
}

/// Position of byte `offset` in `text`, 1-based.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Debug)]
enum Fail {
    Syntax,
    Value(String),
}

impl From<FieldError> for Fail {
    fn from(e: FieldError) -> Self {
        Fail::Value(e.to_string())
    }
}

impl From<FormError> for Fail {
    fn from(e: FormError) -> Self {
        Fail::Value(e.to_string())
    }
}

type PResult<T> = Result<T, Fail>;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    furthest: usize,
    expected: BTreeSet<String>,
    value_error_at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            pos: 0,
            furthest: 0,
            expected: BTreeSet::new(),
            value_error_at: 0,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn expect_here(&mut self, what: &str) {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(what.to_string());
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            self.expect_here(&format!("`{tok}`"));
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Fail::Syntax)
        }
    }

    fn peek_is(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(tok)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let mut end = 0;
        for (i, c) in r.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic()
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            self.expect_here("identifier");
            return None;
        }
        self.pos += end;
        Some(&r[..end])
    }

    fn int(&mut self) -> Option<u64> {
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            self.expect_here("integer");
            return None;
        }
        self.pos += end;
        r[..end].parse().ok().or(Some(u64::MAX))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        if self.pos == self.text.len() {
            true
        } else {
            self.expect_here("end of input");
            false
        }
    }

    fn error(&self, fail: Fail, base_text: &str, base: usize) -> ParseError {
        let (at, message) = match fail {
            Fail::Syntax => (self.furthest, None),
            Fail::Value(m) => (self.value_error_at, Some(m)),
        };
        let (line, column) = line_column(base_text, base + at);
        let found: String = self.text[at.min(self.text.len())..]
            .chars()
            .take_while(|c| !c.is_whitespace())
            .take(12)
            .collect();
        ParseError {
            line,
            column,
            expected: self.expected.iter().cloned().collect(),
            found,
            message,
        }
    }

    // ---- field ----

    fn field(&mut self) -> PResult<FieldDescriptor> {
        self.expect("F2")?;
        let mut e = 1;
        if self.eat("^") {
            let start = self.pos;
            e = self.int().ok_or(Fail::Syntax)? as u32;
            if e == 0 {
                self.value_error_at = start;
                return Err(Fail::Value(FieldError::BadExponent(0).to_string()));
            }
        }
        let mut vars = Vec::new();
        while self.eat("((") {
            let v = self.ident().ok_or(Fail::Syntax)?;
            vars.push(v.to_string());
            self.expect("))")?;
        }
        Ok(FieldDescriptor {
            base_exponent: e,
            variables: vars,
            extension_chain: Vec::new(),
        })
    }

    // ---- elements ----

    fn elem(&mut self, k: &Tower) -> PResult<Elem> {
        let mut acc = self.product(k)?;
        loop {
            if self.eat("+") || self.eat("-") {
                let rhs = self.product(k)?;
                acc = k.add(&acc, &rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self, k: &Tower) -> PResult<Elem> {
        let mut acc = self.unary(k)?;
        loop {
            let save = self.pos;
            if self.eat("*") {
                match self.unary(k) {
                    Ok(rhs) => acc = k.mul(&acc, &rhs)?,
                    Err(Fail::Syntax) => {
                        self.pos = save;
                        return Ok(acc);
                    }
                    Err(e) => return Err(e),
                }
            } else if self.eat("/") {
                let start = self.pos;
                let rhs = self.unary(k)?;
                if k.is_zero(&rhs) {
                    self.value_error_at = start;
                    return Err(Fail::Value(FieldError::DivisionByZero.to_string()));
                }
                acc = k.div(&acc, &rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self, k: &Tower) -> PResult<Elem> {
        if self.eat("-") {
            return self.unary(k);
        }
        let start = self.pos;
        let base = self.primary(k)?;
        if self.eat("^") {
            let neg = self.eat("-");
            let n = self.int().ok_or(Fail::Syntax)?;
            let n = i64::try_from(n).map_err(|_| Fail::Value("exponent too large".into()))?;
            let n = if neg { -n } else { n };
            if n < 0 && k.is_zero(&base) {
                self.value_error_at = start;
                return Err(Fail::Value(FieldError::DivisionByZero.to_string()));
            }
            self.value_error_at = start;
            return Ok(k.pow(&base, n)?);
        }
        Ok(base)
    }

    fn primary(&mut self, k: &Tower) -> PResult<Elem> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("(") {
            let e = self.elem(k)?;
            self.expect(")")?;
            return Ok(e);
        }
        if let Some(n) = self.int() {
            return Ok(k.from_bit(n % 2 == 1));
        }
        self.pos = start;
        let Some(name) = self.ident() else {
            return Err(Fail::Syntax);
        };
        if name == GENERATOR {
            self.value_error_at = start;
            return Ok(k.generator()?);
        }
        match k.var(name) {
            Ok(v) => Ok(v),
            Err(_) => {
                // Not a variable; let the caller backtrack.
                self.pos = start;
                self.expect_here("variable");
                Err(Fail::Syntax)
            }
        }
    }

    // ---- forms ----

    fn form(&mut self, k: &Arc<Tower>) -> PResult<QuadraticForm> {
        let mut acc = self.term(k)?;
        while self.eat("+") {
            let rhs = self.term(k)?;
            acc = acc.orthogonal_sum(&rhs)?;
        }
        Ok(acc)
    }

    fn term(&mut self, k: &Arc<Tower>) -> PResult<QuadraticForm> {
        let save = self.pos;
        if !self.starts_atom() {
            let start = self.pos;
            if let Ok(scalar) = self.product(k) {
                if self.eat("*") {
                    let f = self.atom(k)?;
                    if k.is_zero(&scalar) {
                        self.value_error_at = start;
                        return Err(FormError::ZeroScalar.into());
                    }
                    return Ok(f.scale(&scalar)?);
                }
            }
            self.pos = save;
        }
        self.atom(k)
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        r.starts_with('[')
            || r.starts_with('<')
            || (r.starts_with('H') && !r[1..].starts_with(|c: char| c.is_ascii_alphanumeric()))
            || r.starts_with("pf(")
            || r.starts_with("pf (")
    }

    fn atom(&mut self, k: &Arc<Tower>) -> PResult<QuadraticForm> {
        if self.eat("[") {
            let a = self.elem(k)?;
            self.expect(",")?;
            let b = self.elem(k)?;
            self.expect("]")?;
            return Ok(QuadraticForm::binary(k.clone(), a, b));
        }
        if self.eat("<") {
            let mut cs = Vec::new();
            loop {
                let start = self.pos;
                let c = self.elem(k)?;
                if k.is_zero(&c) {
                    self.value_error_at = start;
                    return Err(FormError::ZeroQuasilinear.into());
                }
                cs.push(c);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(">")?;
            return Ok(QuadraticForm::new(k.clone(), vec![], cs)?);
        }
        if self.starts_atom() && self.peek_is("H") {
            self.pos += 1;
            return Ok(QuadraticForm::hyperbolic(k.clone(), 1));
        }
        if self.peek_is("pf") {
            let start = self.pos;
            self.pos += 2;
            self.expect("(")?;
            let mut slots = Vec::new();
            if !self.peek_is(";") {
                loop {
                    let ss = self.pos;
                    let a = self.elem(k)?;
                    if k.is_zero(&a) {
                        self.value_error_at = ss;
                        return Err(Fail::Value("Pfister slots must be nonzero".into()));
                    }
                    slots.push(a);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect(";")?;
            let b = self.elem(k)?;
            self.expect(")")?;
            self.value_error_at = start;
            let spec = PfisterSpec::new(k.clone(), slots, b);
            return Ok(make_pfister(&spec)?);
        }
        if self.eat("(") {
            let f = self.form(k)?;
            self.expect(")")?;
            return Ok(f);
        }
        self.expect_here("`[`");
        self.expect_here("`<`");
        self.expect_here("`H`");
        self.expect_here("`pf(`");
        Err(Fail::Syntax)
    }
}

fn run<T>(
    text: &str,
    base_text: &str,
    base: usize,
    f: impl FnOnce(&mut Parser) -> PResult<T>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(text);
    let out = f(&mut p).and_then(|v| {
        if p.at_end() {
            Ok(v)
        } else {
            Err(Fail::Syntax)
        }
    });
    out.map_err(|e| p.error(e, base_text, base))
}

pub fn parse_field(text: &str) -> Result<FieldDescriptor, ParseError> {
    run(text, text, 0, |p| p.field())
}

pub fn parse_elem(k: &Tower, text: &str) -> Result<Elem, ParseError> {
    run(text, text, 0, |p| p.elem(k))
}

pub fn parse_form(k: &Arc<Tower>, text: &str) -> Result<QuadraticForm, ParseError> {
    run(text, text, 0, |p| p.form(k))
}

/// As `parse_field`, reporting positions inside a larger text that contains
/// `text` at byte offset `base`.
pub fn parse_field_at(text: &str, whole: &str, base: usize) -> Result<FieldDescriptor, ParseError> {
    run(text, whole, base, |p| p.field())
}

pub fn parse_form_at(
    k: &Arc<Tower>,
    text: &str,
    whole: &str,
    base: usize,
) -> Result<QuadraticForm, ParseError> {
    run(text, whole, base, |p| p.form(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st() -> Arc<Tower> {
        Tower::laurent(1, &["s", "t"]).unwrap()
    }

    #[test]
    fn fields() {
        let d = parse_field("F2^2((s))((t))").unwrap();
        assert_eq!(d, FieldDescriptor::new(2, &["s", "t"]));
        assert_eq!(parse_field("F2").unwrap(), FieldDescriptor::new(1, &[]));
        assert!(parse_field("F3").is_err());
    }

    #[test]
    fn elements_round_trip() {
        let k = st();
        for text in ["(s + t^-2*s)/(1+t)", "s^-1*t^3 + 1", "(s+1)/(s^2+t)", "0", "1+1"] {
            let x = parse_elem(&k, text).unwrap();
            let again = parse_elem(&k, &k.render(&x)).unwrap();
            assert_eq!(x, again, "{text} -> {}", k.render(&x));
        }
        assert_eq!(parse_elem(&k, "3").unwrap(), k.one());
    }

    #[test]
    fn forms() {
        let k = st();
        let f = parse_form(&k, "[1,1]+s*[1,1]+<t>").unwrap();
        assert_eq!(f.dim(), 5);
        assert_eq!(f.quasilinear().len(), 1);
        let p = parse_form(&k, "pf(s,t;1)").unwrap();
        assert_eq!(p.dim(), 8);
        let h = parse_form(&k, "H + H + H").unwrap();
        assert_eq!(h.blocks().len(), 3);
        let sc = parse_form(&k, "(s+1)*([1,t] + <s>)").unwrap();
        assert_eq!(sc.dim(), 3);
        let again = parse_form(&k, &sc.render()).unwrap();
        assert_eq!(again, sc);
    }

    #[test]
    fn error_positions() {
        let k = st();
        let e = parse_form(&k, "[1,1,1]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert!(e.expected.contains(&"`]`".to_string()));
        let e = parse_form(&k, "[1,u]").unwrap_err();
        assert_eq!(e.column, 4);
        let e = parse_form(&k, "<0>").unwrap_err();
        assert!(e.message.is_some());
    }
}
