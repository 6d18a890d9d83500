//! Braid expressions.
//!
//! ```text
//! expr  := term ('*' term)*
//! term  := atom ('^' uint)?
//! atom  := '[' int* ']'
//!        | torus(p, q) | w(i, j) | winv(i, j) | pow(expr, k)
//!        | csum(expr, expr) | osum(p, q, c) | conj4(m)
//!        | inv(expr) | mirror(expr) | '(' expr ')' | family-name
//! ```
//!
//! `*` concatenates, embedding the narrower side into the wider strand count.
//! A raw word `[1 -2 3]` lives on `max |k| + 1` strands, `w(i, j)` on
//! `max(i, j) + 1`.

use crate::braid::{connected_sum, overlapping_sum, torus_word, w_word, BraidWord};
use crate::error::{Error, Result};
use crate::families;

/// Parses an expression; with `strands` given, the result is embedded into
/// that many strands (an error if it needs more).
pub fn parse_expr(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut p = Parser { src: text, pos: 0 };
    let word = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    match strands {
        None => Ok(word),
        Some(n) if n >= word.strands() => word.embed(n),
        Some(n) => Err(Error::Domain(format!(
            "expression needs {} strands, only {n} given",
            word.strands()
        ))),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let value = rest[..sign + digits].parse::<i64>().map_err(|_| self.error("integer out of range"))?;
        self.pos += sign + digits;
        Ok(value)
    }

    fn uint(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.int()?;
        usize::try_from(v).map_err(|_| Error::Parse { offset: at, message: "expected a nonnegative integer".into() })
    }

    fn expr(&mut self) -> Result<BraidWord> {
        let mut word = self.term()?;
        while self.eat('*') {
            let rhs = self.term()?;
            let n = word.strands().max(rhs.strands());
            word = word.embed(n)?.concat(&rhs.embed(n)?)?;
        }
        Ok(word)
    }

    fn term(&mut self) -> Result<BraidWord> {
        let word = self.atom()?;
        if self.eat('^') {
            let k = self.uint()?;
            return Ok(word.power(k));
        }
        Ok(word)
    }

    fn args<const N: usize>(&mut self) -> Result<[usize; N]> {
        self.expect('(')?;
        let mut out = [0; N];
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                self.expect(',')?;
            }
            *slot = self.uint()?;
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<BraidWord> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { offset: start, message: other.to_string() },
        };
        if self.eat('(') {
            let w = self.expr()?;
            self.expect(')')?;
            return Ok(w);
        }
        if self.eat('[') {
            let mut letters = Vec::new();
            while !self.eat(']') {
                if self.peek().is_none() {
                    return Err(self.error("unterminated word"));
                }
                self.eat(',');
                if self.eat(']') {
                    break;
                }
                let k = self.int()?;
                letters.push(i32::try_from(k).map_err(|_| self.error("generator out of range"))?);
            }
            let strands = letters.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0) + 1;
            return BraidWord::new(strands, letters).map_err(at);
        }
        let name = self.ident().to_string();
        if name.is_empty() {
            return Err(self.error("expected a braid expression"));
        }
        match name.as_str() {
            "torus" => {
                let [p, q] = self.args()?;
                torus_word(p, q).map_err(at)
            }
            "w" | "winv" => {
                let [i, j] = self.args()?;
                w_word(i, j, i.max(j) + 1, name == "winv").map_err(at)
            }
            "osum" => {
                let [p, q, c] = self.args()?;
                overlapping_sum(p, q, c).map_err(at)
            }
            "conj4" => {
                let [m] = self.args()?;
                Ok(families::conj4_word(m))
            }
            "pow" => {
                self.expect('(')?;
                let w = self.expr()?;
                self.expect(',')?;
                let k = self.uint()?;
                self.expect(')')?;
                Ok(w.power(k))
            }
            "csum" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(connected_sum(&a, &b).word)
            }
            "inv" | "mirror" => {
                self.expect('(')?;
                let w = self.expr()?;
                self.expect(')')?;
                Ok(if name == "inv" { w.inverse() } else { w.mirror() })
            }
            other => families::lookup(other)
                .map(|f| f.word)
                .map_err(|_| Error::Parse { offset: start, message: format!("unknown name {other:?}") }),
        }
    }
}
