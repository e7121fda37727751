//! Recursive-descent parser for expressions in `t`.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-int)?
//! base   := integer | 't' | '(' expr ')' | '-' factor
//! ```
//!
//! Rational literals are written as quotients, so `3/4` parses as a division.
//! Positions in errors are 0-based character offsets.

use num_bigint::BigInt;

use super::{RatFuncError, RationalFunction};
use crate::Q;

const MAX_EXPONENT: u32 = 4096;

pub fn parse_ratfunc(expr: &str) -> Result<RationalFunction, RatFuncError> {
    let mut p = Parser { chars: expr.chars().collect(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> RatFuncError {
        RatFuncError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, RatFuncError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, RatFuncError> {
        let mut acc = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if c == '*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs)
                    .map_err(|_| RatFuncError::DivisionByZero { pos: op_pos })?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction, RatFuncError> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u32 = match digits.parse() {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => {
                    self.pos = start;
                    return Err(self.error(format!("exponent exceeds {MAX_EXPONENT}")));
                }
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn base(&mut self) -> Result<RationalFunction, RatFuncError> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(RationalFunction::t())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(RationalFunction::constant(Q::from_integer(n)))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::Polynomial;

    #[test]
    fn quotient_reading() {
        let f = parse_ratfunc("t^2/(t-1)").unwrap();
        assert_eq!(f.numerator(), &Polynomial::from_ints(&[0, 0, 1]));
        assert_eq!(f.denominator(), &Polynomial::from_ints(&[-1, 1]));
    }

    #[test]
    fn cancellation_to_zero() {
        assert!(parse_ratfunc("(t+1) - t - 1").unwrap().is_zero());
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(parse_ratfunc("1/0"), Err(RatFuncError::DivisionByZero { pos: 1 }));
        assert_eq!(parse_ratfunc("t/(t-t)"), Err(RatFuncError::DivisionByZero { pos: 1 }));
    }

    #[test]
    fn syntax_errors_report_positions() {
        assert!(matches!(parse_ratfunc("t +"), Err(RatFuncError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_ratfunc("(t"), Err(RatFuncError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ratfunc("t x"), Err(RatFuncError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ratfunc("t^-1"), Err(RatFuncError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ratfunc(""), Err(RatFuncError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_ratfunc("-t^2").unwrap(), parse_ratfunc("-(t^2)").unwrap());
        assert_eq!(parse_ratfunc("--t").unwrap(), parse_ratfunc("t").unwrap());
    }

    #[test]
    fn printing_reparses() {
        for s in ["t^2/(t-1)", "-(t^6)", "3/4*t - 1/2", "(t^2+1)/(2*t^3-t)", "0", "-7/3"] {
            let f = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f, "{s} printed as {f}");
        }
    }
}
