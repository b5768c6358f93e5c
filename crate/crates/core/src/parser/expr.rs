//! Recursive-descent parser for rational-function expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' exponent)?
//! exponent := INT | '(' INT ')'
//! atom  := INT | IDENT '\''* | IDENT '^(' INT ')' | '(' expr ')'
//! ```
//!
//! Primes and `^(k)` on an identifier are derivative notation; they are only
//! accepted for the dependent variable of an ODE.

use num_traits::ToPrimitive;

use super::lexer::{tokenize, Tok, Token};
use crate::algebra::{Polynomial, RationalFunction, Registry, Var};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 1000;

/// Derivative notation `y, y', y'', y^(k)` mapped onto state variables.
#[derive(Clone, Copy, Debug)]
pub struct Derivatives<'a> {
    pub dependent: &'a str,
    pub states: &'a [Var],
}

#[derive(Clone, Copy, Debug)]
pub struct Scope<'a> {
    pub reg: &'a Registry,
    pub derivatives: Option<Derivatives<'a>>,
}

impl<'a> Scope<'a> {
    pub fn plain(reg: &'a Registry) -> Self {
        Scope { reg, derivatives: None }
    }

    fn is_dependent(&self, name: &str) -> bool {
        self.derivatives.is_some_and(|d| d.dependent == name)
    }

    fn resolve(&self, name: &str, order: u32, offset: usize) -> Result<RationalFunction> {
        if let Some(d) = self.derivatives.filter(|d| d.dependent == name) {
            return match d.states.get(order as usize) {
                Some(&v) => Ok(RationalFunction::var(self.reg, v)),
                None => Err(Error::MalformedRhs(format!(
                    "derivative of order {order} of `{name}` is not a state of this equation"
                ))),
            };
        }
        if order > 0 {
            return Err(Error::Syntax {
                offset,
                message: format!("derivative notation on `{name}`, which is not the dependent variable"),
            });
        }
        let v = self.reg.lookup(name)?;
        Ok(RationalFunction::var(self.reg, v))
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
    scope: Scope<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<RationalFunction> {
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

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc
                        .checked_div(&rhs)
                        .map_err(|_| Error::Syntax { offset: at, message: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Int(n)) => match n.to_u32().filter(|&e| e <= MAX_EXPONENT) {
                Some(e) => {
                    self.pos += 1;
                    Ok(e)
                }
                None => self.error(format!("exponent larger than {MAX_EXPONENT}")),
            },
            _ => self.error("expected a nonnegative integer"),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let e = self.small_int()?;
            self.expect_rparen()?;
            e
        } else {
            self.small_int()?
        };
        Ok(base.pow(e))
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            self.error("expected `)`")
        }
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let offset = self.offset();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(self.scope.reg, n.clone().into()))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut order = 0;
                while self.peek() == Some(&Tok::Prime) {
                    order += 1;
                    self.pos += 1;
                }
                let bracketed = order == 0
                    && self.scope.is_dependent(name)
                    && self.peek() == Some(&Tok::Caret)
                    && self.peek_at(1) == Some(&Tok::LParen);
                if bracketed {
                    self.pos += 2;
                    order = self.small_int()?;
                    self.expect_rparen()?;
                }
                self.scope.resolve(name, order, offset)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(_) => self.error("expected a number, variable, or `(`"),
            None => self.error("unexpected end of expression"),
        }
    }
}

/// Parses a full token slice; `end` is the offset reported for a premature end.
pub(crate) fn parse_tokens(toks: &[Token], end: usize, scope: Scope) -> Result<RationalFunction> {
    let mut p = Parser { toks, pos: 0, end, scope };
    let value = p.expr()?;
    if p.pos < toks.len() {
        return p.error("unexpected token after expression");
    }
    Ok(value)
}

/// Parses `text` in the given scope, shifting error offsets by `base`.
pub(crate) fn parse_in_scope(text: &str, base: usize, scope: Scope) -> Result<RationalFunction> {
    let shift = |e: Error| match e {
        Error::Syntax { offset, message } => Error::Syntax { offset: offset + base, message },
        other => other,
    };
    let toks = tokenize(text).map_err(shift)?;
    parse_tokens(&toks, text.len(), scope).map_err(shift)
}

/// Parses a rational-function expression over the registered variables.
pub fn parse_expression(text: &str, reg: &Registry) -> Result<RationalFunction> {
    parse_in_scope(text, 0, Scope::plain(reg))
}

/// Parses an expression that must be a polynomial.
pub fn parse_polynomial(text: &str, reg: &Registry) -> Result<Polynomial> {
    let f = parse_expression(text, reg)?;
    f.as_polynomial().ok_or_else(|| Error::NotPolynomial(text.trim().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{VarKind, VariableRegistry};

    fn reg() -> Registry {
        VariableRegistry::new([
            ("t", VarKind::Time),
            ("y0", VarKind::Fiber),
            ("y1", VarKind::Fiber),
            ("a", VarKind::Aux),
        ])
        .unwrap()
        .into_shared()
    }

    #[test]
    fn painleve_rhs() {
        let r = reg();
        let f = parse_expression("6*y0^2 + t", &r).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.to_string(), "6*y0^2 + t");
    }

    #[test]
    fn quotient_stays_reduced() {
        let r = reg();
        let f = parse_expression("(y1 - 2*y0)/a", &r).unwrap();
        assert_eq!(f.to_string(), "(-2*y0 + y1)/a");
        let g = parse_expression("(y1*a - 2*y0*a)/a^2", &r).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let r = reg();
        assert_eq!(
            parse_expression("y0 +", &r),
            Err(Error::Syntax { offset: 4, message: "unexpected end of expression".into() })
        );
        assert!(matches!(parse_expression("(y0", &r), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expression("y0 y1", &r), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expression("1/(y0 - y0)", &r), Err(Error::Syntax { offset: 1, .. })));
        assert_eq!(parse_expression("z + 1", &r), Err(Error::UnknownVariable("z".into())));
    }

    #[test]
    fn precedence_and_signs() {
        let r = reg();
        let f = parse_expression("-y0^2 + 2*-y1", &r).unwrap();
        let g = parse_expression("0 - (y0*y0) - 2*y1", &r).unwrap();
        assert_eq!(f, g);
        assert_eq!(parse_expression("1/2/2", &r).unwrap().to_string(), "1/4");
        assert_eq!(parse_expression("y0^(3)", &r).unwrap(), parse_expression("y0*y0*y0", &r).unwrap());
    }

    #[test]
    fn derivative_notation() {
        let r = reg();
        let states = [1, 2];
        let scope = Scope { reg: &r, derivatives: Some(Derivatives { dependent: "y", states: &states }) };
        let f = parse_in_scope("y' - 2*y", 0, scope).unwrap();
        assert_eq!(f, parse_expression("y1 - 2*y0", &r).unwrap());
        let g = parse_in_scope("y^(1)^2", 0, scope).unwrap();
        assert_eq!(g, parse_expression("y1^2", &r).unwrap());
        assert!(matches!(parse_in_scope("y''", 0, scope), Err(Error::MalformedRhs(_))));
        assert!(matches!(parse_in_scope("a'", 0, scope), Err(Error::Syntax { offset: 0, .. })));
    }
}
