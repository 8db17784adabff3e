//! Parser for the element grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := int | 'pi' | 'Z' | '(' expr ')'
//! ```
//!
//! plus a leading unary minus, and for the model literals `G(m,n)` and
//! `E(m,n,a,j)` and type literals `j,g1,g2,k`.

use crate::base::{BaseRing, PolyElt};
use crate::degen::DegenType;
use crate::dvr::{PAdicContext, RingElt};
use crate::error::{Error, Result};
use crate::groups::ModelGroup;

fn syntax(pos: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("syntax error at position {pos}: {msg}"))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a BaseRing,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| syntax(start, "number too large"))
    }

    fn expr(&mut self) -> Result<PolyElt> {
        let mut acc = if self.eat(b'-') { -&self.term()? } else { self.term()? };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PolyElt> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyElt> {
        let a = self.atom()?;
        if self.eat(b'^') {
            let n = self.nat()?;
            return Ok(a.pow(n));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<PolyElt> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(self.ring.constant(&int_elt(&self.ring.ctx, n)))
            }
            Some(b'p') if self.src[self.pos..].starts_with(b"pi") => {
                self.pos += 2;
                Ok(self.ring.constant(&self.ring.ctx.pi_pow(1)))
            }
            Some(b'Z') => {
                self.pos += 1;
                self.ring.z().map_err(|_| syntax(start, "Z is not available on this base"))
            }
            Some(c) => Err(syntax(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(syntax(self.pos, "unexpected end of input")),
        }
    }
}

/// `n` as an element of `R`, exactly.
fn int_elt(ctx: &PAdicContext, n: u64) -> RingElt {
    // Horner in base 2^31 keeps every step inside i64.
    let base = ctx.from_i64(1 << 31);
    let mut acc = ctx.zero();
    for k in (0..3).rev() {
        let digit = ((n >> (31 * k)) & ((1 << 31) - 1)) as i64;
        acc = &(&acc * &base) + &ctx.from_i64(digit);
    }
    acc
}

/// Parses an element of `A`. Fails on syntax errors and when some term has
/// degree at least `D`.
pub fn parse_element(src: &str, ring: &BaseRing) -> Result<PolyElt> {
    let mut ps = Parser { src: src.as_bytes(), pos: 0, ring };
    let e = ps.expr()?;
    ps.skip_ws();
    if ps.pos != src.len() {
        return Err(syntax(ps.pos, "trailing input"));
    }
    if e.truncated() {
        return Err(Error::InvalidInput(format!(
            "degree overflow: the element needs Z-degree at least {}",
            ring.zdeg
        )));
    }
    Ok(e)
}

/// Parses a constant of `R`.
pub fn parse_scalar(src: &str, ctx: &PAdicContext) -> Result<RingElt> {
    let point = BaseRing::point(ctx);
    Ok(parse_element(src, &point)?.coeff(0).clone())
}

fn split_args<'a>(src: &'a str, head: &str) -> Option<Vec<&'a str>> {
    let s = src.trim();
    let inner = s.strip_prefix(head)?.trim_start().strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').map(|a| a.trim()).collect())
}

fn parse_nat(s: &str, what: &str) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{what}: expected a natural number, got '{s}'")))
}

/// Parses `G(m,n)` or `E(m,n,a,j)`.
pub fn parse_model(src: &str, ctx: &PAdicContext) -> Result<ModelGroup> {
    if let Some(args) = split_args(src, "G") {
        if args.len() == 2 {
            return ModelGroup::glam_n(ctx, parse_nat(args[0], "m")?, parse_nat(args[1], "n")?);
        }
    }
    if let Some(args) = split_args(src, "E") {
        if args.len() == 4 {
            let a = parse_scalar(args[2], ctx)?;
            return ModelGroup::extension(
                ctx,
                parse_nat(args[0], "m")?,
                parse_nat(args[1], "n")?,
                &a,
                parse_nat(args[3], "j")? as u64,
            );
        }
    }
    Err(Error::InvalidInput(format!("not a model literal: '{src}'")))
}

/// Parses `j,g1,g2,k`, with optional surrounding parentheses.
pub fn parse_type(src: &str) -> Result<DegenType> {
    let s = src.trim();
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    let v: Vec<u32> = s.split(',').map(|x| parse_nat(x, "type")).collect::<Result<_>>()?;
    if v.len() != 4 {
        return Err(Error::InvalidInput(format!("a type has four entries, got '{src}'")));
    }
    Ok(DegenType::new(v[0], v[1], v[2], v[3]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> BaseRing {
        BaseRing::local_curve(&PAdicContext::new(3, 3, 0).unwrap(), 16).unwrap()
    }

    #[test]
    fn binomial_expansion() {
        let a = ring();
        let e = parse_element("(1+Z)^3", &a).unwrap();
        assert_eq!(e.to_string(), "1 + 3*Z + 3*Z^2 + Z^3");
        assert!(parse_element("0", &a).unwrap().is_zero());
    }

    #[test]
    fn print_parse_round_trip() {
        let a = ring();
        for s in ["1 + pi^12*(1+Z^2)", "(1+Z^2+pi^3*Z)^3", "-2*Z + pi^5", "-1"] {
            let e = parse_element(s, &a).unwrap();
            let back = parse_element(&e.to_string(), &a).unwrap();
            assert_eq!(e, back, "{s}");
            assert_eq!(back.to_string(), e.to_string());
        }
    }

    #[test]
    fn errors_carry_positions() {
        let a = ring();
        let err = parse_element("1 + * Z", &a).unwrap_err().to_string();
        assert!(err.contains("position 4"), "{err}");
        assert!(parse_element("Z^16", &a).is_err());
        assert!(parse_element("Z", &BaseRing::point(&a.ctx)).is_err());
    }

    #[test]
    fn model_literals() {
        let ctx = PAdicContext::new(3, 3, 0).unwrap();
        let g = parse_model("E(5,1,0,1)", &ctx).unwrap();
        assert_eq!(g.to_string(), "E(5,1,0,1)");
        assert_eq!(parse_model(&g.to_string(), &ctx).unwrap(), g);
        assert_eq!(parse_model("G(3,1)", &ctx).unwrap().to_string(), "G(3,1)");
        assert!(parse_model("E(1,2,0,1)", &ctx).is_err());
        assert_eq!(parse_type("0,4,1,5").unwrap(), DegenType::new(0, 4, 1, 5));
    }
}
