//! Precedence-climbing parser for objective expressions.
//!
//! Binding strength, loosest first: `+ -`, `* /`, unary `-`, `^` (right-associative).

use super::{BinOp, Expr, Func};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                line: tl,
                column: tc,
                message: format!("malformed number `{text}`"),
            })?;
            Tok::Num(v)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => {
                    return Err(ParseError::Syntax {
                        line: tl,
                        column: tc,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        column += i - start;
        out.push(Token {
            tok,
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    n: usize,
    /// Names of enclosing summation variables, outermost first.
    scope: Vec<String>,
    /// Bounds of those sums, same order.
    bounds: Vec<(i64, i64)>,
}

/// Parses `src` as an objective over `n` variables `x1..xn`.
pub fn parse(src: &str, n: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        tokens: lex(src)?,
        pos: 0,
        n,
        scope: Vec::new(),
        bounds: Vec::new(),
    };
    let expr = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(p.syntax(t, "unexpected trailing input"));
    }
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> Token {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.peek();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, at: Token, message: &str) -> ParseError {
        let found = match &at.tok {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        };
        ParseError::Syntax {
            line: at.line,
            column: at.column,
            message: format!("{message}, found {found}"),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, ParseError> {
        let t = self.peek();
        if t.tok == want {
            Ok(self.bump())
        } else {
            Err(self.syntax(t, &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Op('^') {
            self.bump();
            // the exponent may carry its own sign: 2^-1
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, t),
            _ => Err(self.syntax(t, "expected an operand")),
        }
    }

    fn identifier(&mut self, name: String, at: Token) -> Result<Expr, ParseError> {
        if let Some(depth) = self.scope.iter().rposition(|s| *s == name) {
            return Ok(Expr::Bound { name, depth });
        }
        if let Some(func) = Func::from_name(&name) {
            self.expect(Tok::LParen, "`(` after function name")?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        if name == "sum" && self.peek().tok == Tok::LParen {
            return self.sum();
        }
        if name == "x" && self.peek().tok == Tok::LParen {
            self.bump();
            let idx_at = self.peek();
            let idx = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            self.check_index(&idx, idx_at)?;
            return Ok(Expr::IndexedVar(Box::new(idx)));
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                let index: i64 = digits.parse().unwrap_or(i64::MAX);
                if index < 1 || index as usize > self.n {
                    return Err(ParseError::IndexOutOfRange {
                        index,
                        n: self.n,
                        line: at.line,
                        column: at.column,
                    });
                }
                return Ok(Expr::Var(index as usize - 1));
            }
        }
        Err(ParseError::UnknownIdentifier {
            name,
            line: at.line,
            column: at.column,
        })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let var_tok = self.bump();
        let var = match var_tok.tok.clone() {
            Tok::Ident(v)
                if Func::from_name(&v).is_none()
                    && v != "sum"
                    && v != "x"
                    && !is_fixed_variable(&v) =>
            {
                v
            }
            _ => return Err(self.syntax(var_tok, "expected a summation variable name")),
        };
        self.expect(Tok::Comma, "`,`")?;
        let lo = self.integer_literal()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi_tok = self.peek();
        let hi = self.integer_literal()?;
        if lo > hi {
            return Err(ParseError::Syntax {
                line: hi_tok.line,
                column: hi_tok.column,
                message: format!("summation bounds out of order: {lo} > {hi}"),
            });
        }
        self.expect(Tok::Comma, "`,`")?;
        self.scope.push(var.clone());
        self.bounds.push((lo, hi));
        let body = self.expr();
        self.scope.pop();
        self.bounds.pop();
        let body = body?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(Expr::Sum {
            var,
            lo,
            hi,
            body: Box::new(body),
        })
    }

    fn integer_literal(&mut self) -> Result<i64, ParseError> {
        let t = self.bump();
        let (neg, t) = if t.tok == Tok::Op('-') {
            (true, self.bump())
        } else {
            (false, t)
        };
        match t.tok {
            Tok::Num(v) if v.fract() == 0.0 && v.abs() < 1e15 => {
                Ok(if neg { -(v as i64) } else { v as i64 })
            }
            _ => Err(self.syntax(t, "expected an integer literal")),
        }
    }

    /// Checks an `x(...)` index for every binding of the enclosing summation variables.
    fn check_index(&self, idx: &Expr, at: Token) -> Result<(), ParseError> {
        if mentions_x(idx) {
            return Err(ParseError::Syntax {
                line: at.line,
                column: at.column,
                message: "variable index may not depend on x".into(),
            });
        }
        let mut env = Vec::with_capacity(self.bounds.len());
        self.check_index_rec(idx, &at, &self.bounds, &mut env)
    }

    fn check_index_rec(
        &self,
        idx: &Expr,
        at: &Token,
        ranges: &[(i64, i64)],
        env: &mut Vec<i64>,
    ) -> Result<(), ParseError> {
        if env.len() == ranges.len() {
            let v = idx.eval_in(&[], env).map_err(|e| ParseError::Syntax {
                line: at.line,
                column: at.column,
                message: format!("cannot evaluate index: {e}"),
            })?;
            if v.fract() != 0.0 || !v.is_finite() {
                return Err(ParseError::Syntax {
                    line: at.line,
                    column: at.column,
                    message: format!("variable index evaluates to non-integer {v}"),
                });
            }
            let k = v as i64;
            if k < 1 || k as usize > self.n {
                return Err(ParseError::IndexOutOfRange {
                    index: k,
                    n: self.n,
                    line: at.line,
                    column: at.column,
                });
            }
            return Ok(());
        }
        let (lo, hi) = ranges[env.len()];
        for k in lo..=hi {
            env.push(k);
            let r = self.check_index_rec(idx, at, ranges, env);
            env.pop();
            r?;
        }
        Ok(())
    }
}

fn is_fixed_variable(name: &str) -> bool {
    name.strip_prefix('x')
        .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}

fn mentions_x(e: &Expr) -> bool {
    match e {
        Expr::Var(_) | Expr::IndexedVar(_) => true,
        Expr::Const(_) | Expr::Bound { .. } => false,
        Expr::Neg(a) | Expr::Call(_, a) => mentions_x(a),
        Expr::Binary(_, l, r) => mentions_x(l) || mentions_x(r),
        Expr::Sum { body, .. } => mentions_x(body),
    }
}
