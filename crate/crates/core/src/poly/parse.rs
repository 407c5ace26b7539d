//! Text grammar for polynomials and rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' ['-'] INT)?
//! atom   := INT | 'x' INT | NAME | '(' expr ')'
//! ```
//!
//! Variables are `x0 .. x{n-1}`. Any other identifier must be bound in the
//! parameter map. Floating-point literals are rejected.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MultiPoly;
use crate::error::ParseError;

/// A quotient of two polynomials with no sign constraint on the denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalExpr {
    fn poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        RationalExpr {
            num: p,
            den: MultiPoly::one(n),
        }
    }

    fn normalize(mut self) -> Self {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            self.num = self.num.scale(&c.recip());
            self.den = MultiPoly::one(self.num.nvars());
        } else if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = MultiPoly::one(self.num.nvars());
        }
        self
    }

    fn add(self, rhs: Self, negate: bool) -> Self {
        let rn = if negate { -&rhs.num } else { rhs.num };
        if self.den == rhs.den {
            return RationalExpr {
                num: &self.num + &rn,
                den: self.den,
            }
            .normalize();
        }
        RationalExpr {
            num: &(&self.num * &rhs.den) + &(&rn * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalize()
    }

    fn mul(self, rhs: Self) -> Self {
        RationalExpr {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalize()
    }

    fn recip(self) -> Result<Self, ParseError> {
        if self.num.is_zero() {
            return Err(ParseError::DivisionByZero);
        }
        Ok(RationalExpr {
            num: self.den,
            den: self.num,
        }
        .normalize())
    }

    fn pow(self, e: i64) -> Result<Self, ParseError> {
        let base = if e < 0 { self.recip()? } else { self };
        let e = e.unsigned_abs() as u32;
        Ok(RationalExpr {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Name(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], '.' | 'e' | 'E') {
                return Err(ParseError::FloatLiteral(start));
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), start));
        } else if c == '.' {
            return Err(ParseError::FloatLiteral(i));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let tok = match s.strip_prefix('x') {
                Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => {
                    Tok::Var(d.parse().map_err(|_| ParseError::UnknownIdentifier(s.clone()))?)
                }
                _ => Tok::Name(s),
            };
            out.push((tok, start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar { ch: c, pos: i });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nvars: usize,
    params: &'a HashMap<String, BigRational>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, c == '-');
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' { acc.mul(rhs) } else { acc.mul(rhs.recip()?) };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalExpr, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(RationalExpr {
                    num: -&v.num,
                    den: v.den,
                })
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalExpr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let (tok, _) = self.next()?;
            let e: i64 = match tok {
                Tok::Int(v) => i64::try_from(v).map_err(|_| ParseError::BadExponent)?,
                _ => return Err(ParseError::BadExponent),
            };
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalExpr, ParseError> {
        let (tok, pos) = self.next()?;
        let n = self.nvars;
        match tok {
            Tok::Int(v) => Ok(RationalExpr::poly(MultiPoly::constant(
                n,
                BigRational::from_integer(v),
            ))),
            Tok::Var(i) => {
                if i >= n {
                    return Err(ParseError::TooManyVars { index: i, nvars: n });
                }
                Ok(RationalExpr::poly(MultiPoly::var(n, i)))
            }
            Tok::Name(name) => match self.params.get(&name) {
                Some(v) => Ok(RationalExpr::poly(MultiPoly::constant(n, v.clone()))),
                None => Err(ParseError::UnknownIdentifier(name)),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.next()? {
                    (Tok::Op(')'), _) => Ok(inner),
                    (t, p) => Err(ParseError::UnexpectedToken {
                        tok: format!("{t:?}"),
                        pos: p,
                    }),
                }
            }
            t => Err(ParseError::UnexpectedToken {
                tok: format!("{t:?}"),
                pos,
            }),
        }
    }
}

/// Parses a rational expression. When `nvars` is `None` the variable count is
/// one more than the highest index used (at least 1).
pub fn parse_expr(
    text: &str,
    nvars: Option<usize>,
    params: &HashMap<String, BigRational>,
) -> Result<RationalExpr, ParseError> {
    let toks = tokenize(text)?;
    let max_idx = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Var(i) => Some(*i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let nvars = match nvars {
        Some(n) if max_idx > n && toks.iter().any(|(t, _)| matches!(t, Tok::Var(_))) => {
            return Err(ParseError::TooManyVars {
                index: max_idx - 1,
                nvars: n,
            })
        }
        Some(n) => n,
        None => max_idx,
    };
    let mut p = Parser {
        toks,
        pos: 0,
        nvars,
        params,
    };
    if p.toks.is_empty() {
        return Err(ParseError::UnexpectedEnd);
    }
    let e = p.expr()?;
    if let Some((t, pos)) = p.toks.get(p.pos) {
        return Err(ParseError::UnexpectedToken {
            tok: format!("{t:?}"),
            pos: *pos,
        });
    }
    Ok(e)
}

/// Parses an expression that must reduce to a polynomial.
pub fn parse_poly(text: &str, nvars: Option<usize>) -> Result<MultiPoly, ParseError> {
    let e = parse_expr(text, nvars, &HashMap::new())?;
    if !e.den.is_constant() {
        return Err(ParseError::NotPolynomial);
    }
    let c = e.den.constant_term();
    debug_assert!(c.is_one() || !c.is_zero());
    Ok(e.num.scale(&c.recip()))
}
