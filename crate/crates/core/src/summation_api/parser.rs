//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := postfix ('^' unary)?
//! postfix := atom '!'*
//! atom    := integer | name | name '(' args ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::ast::Expr;
use crate::exact_arith::BigRat;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("scope error: symbol `{0}` is neither a declared parameter nor a bound variable")]
    Scope(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push((Tok::Int(txt.parse().unwrap()), st));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(cs[st..i].iter().collect()), st));
        } else if "+-*/^(),!".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = match (&lhs, &rhs) {
                    (Expr::Num(a), Expr::Num(b)) if a.is_integer() && b.is_integer() && *b != BigRat::from_integer(0.into()) => {
                        Expr::Num(a / b)
                    }
                    _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Num(x) => Expr::Num(-x),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.postfix()?;
        if self.eat('^') {
            let e = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut a = self.atom()?;
        while self.eat('!') {
            a = Expr::Factorial(Box::new(a));
        }
        Ok(a)
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(x)) => {
                self.pos += 1;
                Ok(Expr::Num(BigRat::from_integer(x)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Op('(')) {
                    return Ok(Expr::Sym(name));
                }
                let args = self.args()?;
                let arity = |n: usize| -> Result<(), ParseError> {
                    if args.len() == n {
                        Ok(())
                    } else {
                        Err(ParseError::Syntax { pos: start, msg: format!("`{name}` takes {n} arguments") })
                    }
                };
                match name.as_str() {
                    "Binomial" | "binomial" => {
                        arity(2)?;
                        Ok(Expr::Binomial(Box::new(args[0].clone()), Box::new(args[1].clone())))
                    }
                    "Factorial" | "factorial" => {
                        arity(1)?;
                        Ok(Expr::Factorial(Box::new(args[0].clone())))
                    }
                    "Sum" | "sum" | "Product" | "product" => {
                        arity(4)?;
                        let Expr::Sym(var) = &args[0] else {
                            return Err(ParseError::Syntax { pos: start, msg: "bound variable must be a name".into() });
                        };
                        let [_, lo, hi, body] = [&args[0], &args[1], &args[2], &args[3]].map(|e| Box::new(e.clone()));
                        Ok(if name.eq_ignore_ascii_case("sum") {
                            Expr::Sum { var: var.clone(), lo, hi, body }
                        } else {
                            Expr::Product { var: var.clone(), lo, hi, body }
                        })
                    }
                    _ => Err(ParseError::Syntax { pos: start, msg: format!("unknown function `{name}`") }),
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses without scope checking.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses and checks that every free symbol is one of `allowed`.
pub fn parse_expression(text: &str, allowed: &[String]) -> Result<Expr, ParseError> {
    let e = parse(text)?;
    for s in e.free_symbols() {
        if !allowed.contains(&s) {
            return Err(ParseError::Scope(s));
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_nested_sum() {
        let e = parse_expression("Sum(i,0,k-1,Binomial(n,i))", &names(&["n", "k"])).unwrap();
        assert!(matches!(e, Expr::Sum { .. }));
    }

    #[test]
    fn parses_signed_power() {
        let e = parse_expression("(-1)^k * Binomial(n,k)^(-1) * Sum(i,0,k-1,Binomial(n,i))", &names(&["n", "k"])).unwrap();
        let Expr::Mul(lhs, _) = e else { panic!() };
        assert!(matches!(*lhs, Expr::Mul(..)));
    }

    #[test]
    fn literals_and_rationals() {
        assert_eq!(parse("1").unwrap(), Expr::int(1));
        assert_eq!(parse("3/2").unwrap(), Expr::Num(BigRat::new(3.into(), 2.into())));
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(parse("1 + * 2"), Err(ParseError::Syntax { pos: 4, msg: "unexpected `*`".into() }));
        assert_eq!(parse_expression("k + m", &names(&["k"])), Err(ParseError::Scope("m".into())));
    }

    #[test]
    fn display_round_trips() {
        for s in ["(-1)^k*Binomial(n, k)^(-1)", "2^k*Factorial(k)", "a - (b - c)", "-x^2", "1/(k*(k + 1))", "Sum(i, 1, k, (-1)^i/i)"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s}");
        }
    }
}
