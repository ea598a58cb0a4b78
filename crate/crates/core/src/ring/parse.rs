// Recursive-descent parser for ring element expressions:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' '-'? INT)?
//   atom   := INT | IDENT | '(' expr ')'

use num_bigint::BigInt;

use super::{Ring, RingElement, RingError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, RingError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(RingError::Syntax { pos: i, msg: format!("unexpected character `{c}`") })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<RingElement, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement, RingError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElement, RingError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RingElement, RingError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let negative = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.peek() {
                Some(Tok::Int(n)) => {
                    let e: i64 = n.try_into().map_err(|_| RingError::Syntax {
                        pos: self.offset(),
                        msg: "exponent too large".into(),
                    })?;
                    self.pos += 1;
                    e
                }
                _ => return self.err("expected integer exponent"),
            };
            if negative {
                if !self.ring.is_laurent() {
                    return Err(RingError::NegativeExponent);
                }
                return base.pow(-e);
            }
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RingElement, RingError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RingElement::from_bigint(self.ring, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                RingElement::var(self.ring, &name)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into a canonical element of `ring`.
pub fn parse_element(ring: &Ring, text: &str) -> Result<RingElement, RingError> {
    let toks = lex(text)?;
    let mut p = Parser { ring, toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffRing, RingDescriptor};
    use std::sync::Arc;

    fn zxy() -> Ring {
        Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).unwrap())
    }

    #[test]
    fn parses_polynomials() {
        let r = zxy();
        let e = parse_element(&r, "3*x^2*y - 1").unwrap();
        assert_eq!(e.terms().unwrap().len(), 2);
        assert_eq!(e.to_string(), "3*x^2*y - 1");
        assert_eq!(parse_element(&r, "(x+y)^2").unwrap().to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(parse_element(&r, "-(x - x)").unwrap().to_string(), "0");
    }

    #[test]
    fn parses_laurent() {
        let r = Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap());
        let e = parse_element(&r, "u^-2 + 5").unwrap();
        assert_eq!(e.to_string(), "5 + u^-2");
        assert!(matches!(parse_element(&r, "(u+1)^-1"), Err(RingError::NotInvertible(_))));
    }

    #[test]
    fn errors() {
        let r = zxy();
        assert_eq!(parse_element(&r, "x^-1"), Err(RingError::NegativeExponent));
        assert_eq!(parse_element(&r, "z"), Err(RingError::UnknownVariable("z".into())));
        assert!(matches!(parse_element(&r, "x + "), Err(RingError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_element(&r, "x $ y"), Err(RingError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_element(&r, "(x"), Err(RingError::Syntax { .. })));
    }

    #[test]
    fn residue_rendering_roundtrip() {
        let r = Arc::new(RingDescriptor::residue(7).unwrap());
        let e = parse_element(&r, "-3").unwrap();
        assert_eq!(e.to_string(), "4");
        let r = Arc::new(RingDescriptor::polynomial(&["t"], CoeffRing::Residue(7.into())).unwrap());
        let e = parse_element(&r, "-t^3 + 2").unwrap();
        assert_eq!(e.to_string(), "6*t^3 + 2");
        assert_eq!(parse_element(&r, &e.to_string()).unwrap(), e);
    }
}
