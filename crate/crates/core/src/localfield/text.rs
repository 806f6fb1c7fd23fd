use super::valued::ValuedElem;
use super::{FieldKind, LocalFieldDesc};
use crate::error::{Error, Result};

/// Prints the nonzero digits as `c*t^k` terms followed by `(mod t^A)`.
pub(super) fn format_element(x: &ValuedElem) -> String {
    let field = x.field();
    let sym = field.uniformizer_symbol();
    let k = field.residue();
    let Some(abs) = x.abs_precision() else {
        return "0".into();
    };
    let mut terms = Vec::new();
    if let Some(v) = x.ord().finite() {
        for (i, d) in x.digits().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let e = v + i as i64;
            let mut c = k.format(*d);
            if c.contains('+') && e != 0 {
                c = format!("({c})");
            }
            let mono = match e {
                0 => String::new(),
                1 => sym.clone(),
                _ => format!("{sym}^{e}"),
            };
            terms.push(match (c.as_str(), e) {
                (_, 0) => c,
                ("1", _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
    }
    if terms.is_empty() {
        terms.push("0".into());
    }
    format!("{} (mod {sym}^{abs})", terms.join(" + "))
}

struct Parser<'a> {
    field: &'a LocalFieldDesc,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

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

    fn at_mod_clause(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let rest = rest.strip_prefix(b"(").unwrap_or(rest);
        let trimmed: &[u8] = {
            let mut i = 0;
            while i < rest.len() && rest[i].is_ascii_whitespace() {
                i += 1;
            }
            &rest[i..]
        };
        trimmed.starts_with(b"mod") && trimmed.get(3).is_none_or(|c| !c.is_ascii_alphanumeric())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn expr(&mut self) -> Result<ValuedElem> {
        let mut acc = self.term()?;
        loop {
            if self.at_mod_clause() {
                return Ok(acc);
            }
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ValuedElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ValuedElem> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            let r = base.pow(e)?;
            return if neg { ValuedElem::one(self.field).div(&r) } else { Ok(r) };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ValuedElem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(ValuedElem::uniformizer(self.field))
            }
            Some(b'a') => {
                self.pos += 1;
                let g = self.field.residue().generator();
                Ok(ValuedElem::from_residue(self.field, g))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(ValuedElem::from_int(self.field, n))
            }
            _ => Err(self.err("expected a number, `a`, `t` or `(`")),
        }
    }

    fn mod_clause(&mut self) -> Result<Option<i64>> {
        if !self.at_mod_clause() {
            return Ok(None);
        }
        let paren = self.eat(b'(');
        self.skip_ws();
        self.pos += 3;
        match self.peek() {
            Some(b't') => self.pos += 1,
            Some(c) if c.is_ascii_digit() && self.field.kind() == FieldKind::MixedChar => {
                let p = self.integer()?;
                if p != self.field.p() as i64 {
                    return Err(self.err(format!("modulus base must be {}", self.field.p())));
                }
            }
            _ => return Err(self.err(format!("expected `{}`", self.field.uniformizer_symbol()))),
        }
        let e = if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            if neg {
                -e
            } else {
                e
            }
        } else {
            1
        };
        if paren && !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        Ok(Some(e))
    }
}

/// Parses an element such as `3*t^-1 + (a+1) + t^2 (mod t^5)` or `2 + 4*5 (mod 5^3)`.
///
/// `t` always denotes the uniformizer; in `Q_q` the prime itself works too.
/// A trailing `mod` clause truncates to that absolute precision.
pub fn parse_element(field: &LocalFieldDesc, s: &str) -> Result<ValuedElem> {
    let mut p = Parser {
        field,
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    let abs = p.mod_clause()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(match abs {
        Some(a) => v.truncate_abs(a),
        None => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{ResidueElem, Valuation};

    #[test]
    fn print_examples() {
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 4).unwrap();
        let x = parse_element(&f, "3*t^-1 + 2 + t^2").unwrap();
        assert_eq!(x.to_string(), "3*t^-1 + 2 + t^2 (mod t^3)");
        assert_eq!(ValuedElem::zero(&f).to_string(), "0");
        let m = LocalFieldDesc::new(FieldKind::MixedChar, 5, 1, 3).unwrap();
        assert_eq!(ValuedElem::from_int(&m, 7).to_string(), "2 + 5 (mod 5^3)");
    }

    #[test]
    fn parse_round_trip() {
        for kind in [FieldKind::EqualChar, FieldKind::MixedChar] {
            let f = LocalFieldDesc::new(kind, 3, 2, 5).unwrap();
            for s in ["(a+1)*t^-2 + a", "2*a + t^3 (mod t^4)", "1 - t", "t^-1/(1 + a*t)"] {
                let x = parse_element(&f, s).unwrap();
                let y = parse_element(&f, &x.to_string()).unwrap();
                assert_eq!(x, y, "{kind:?} {s}");
            }
        }
    }

    #[test]
    fn parse_reads_valuation_and_ac() {
        let f = LocalFieldDesc::new(FieldKind::MixedChar, 7, 1, 6).unwrap();
        let x = parse_element(&f, "3*7^2 + 7^4").unwrap();
        assert_eq!(x.ord(), Valuation::Finite(2));
        assert_eq!(x.ac(), ResidueElem(3));
        let y = parse_element(&f, "49*3 + t^4").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn parse_errors() {
        let f = LocalFieldDesc::new(FieldKind::EqualChar, 5, 1, 4).unwrap();
        assert!(parse_element(&f, "3 +").is_err());
        assert!(parse_element(&f, "x").is_err());
        assert!(parse_element(&f, "1 (mod 5^2)").is_err());
        assert!(parse_element(&f, "1/0").is_err());
    }
}
