//! Scalar objective functions over `x ∈ [0,1]ⁿ`.
//!
//! Objectives are written in a small expression language; see `GRAMMAR.md`
//! at the crate root for the full EBNF. A quick taste:
//!
//! ```
//! use fre_aco::objective::Objective;
//!
//! let f = Objective::parse("x1*x4 - x2*x3*x5 + x6^2", 6).unwrap();
//! let v = f.eval(&[0.8, 0.3, 0.2, 0.0, 0.7, 1.0]).unwrap();
//! assert!((v - 0.958).abs() < 1e-12);
//! ```

mod parser;
pub mod problems;

use std::fmt;

use crate::error::{EvalError, ParseError};

pub use parser::parse;
pub use problems::{builtin_problem, builtin_problems, Problem, ProblemFile, BUILTIN_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Fixed variable, zero-based.
    Var(usize),
    /// `x(index)`: the index expression is one-based and may only mention summation variables.
    IndexedVar(Box<Expr>),
    /// Summation variable; `depth` counts enclosing sums from the outermost (0).
    Bound {
        name: String,
        depth: usize,
    },
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Sum {
        var: String,
        lo: i64,
        hi: i64,
        body: Box<Expr>,
    },
}

impl Expr {
    /// Evaluates at `x`. The caller guarantees `x` has the dimension the expression was parsed for.
    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut env = Vec::new();
        self.eval_in(x, &mut env)
    }

    fn eval_in(&self, x: &[f64], env: &mut Vec<i64>) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(j) => x[*j],
            Expr::IndexedVar(idx) => {
                let k = idx.eval_in(x, env)?.round() as i64;
                x[(k - 1) as usize]
            }
            Expr::Bound { depth, .. } => env[*depth] as f64,
            Expr::Neg(e) => -e.eval_in(x, env)?,
            Expr::Binary(op, l, r) => {
                let l = l.eval_in(x, env)?;
                let r = r.eval_in(x, env)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::DivisionByZero { point: x.to_vec() });
                        }
                        l / r
                    }
                    BinOp::Pow => power(l, r, x)?,
                }
            }
            Expr::Call(f, arg) => {
                let v = arg.eval_in(x, env)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Ln => {
                        if v <= 0.0 {
                            return Err(EvalError::LogDomain {
                                arg: v,
                                point: x.to_vec(),
                            });
                        }
                        v.ln()
                    }
                    Func::Abs => v.abs(),
                }
            }
            Expr::Sum { lo, hi, body, .. } => {
                let mut acc = 0.0;
                for k in *lo..=*hi {
                    env.push(k);
                    let term = body.eval_in(x, env);
                    env.pop();
                    acc += term?;
                }
                acc
            }
        })
    }

    /// Largest fixed or indexed variable (one-based) reachable in the expression, 0 if none.
    pub fn max_variable(&self) -> usize {
        let mut best = 0;
        let mut env = Vec::new();
        self.visit_indices(&mut env, &mut |k| best = best.max(k as usize));
        best
    }

    fn visit_indices(&self, env: &mut Vec<i64>, f: &mut impl FnMut(i64)) {
        match self {
            Expr::Const(_) | Expr::Bound { .. } => {}
            Expr::Var(j) => f(*j as i64 + 1),
            Expr::IndexedVar(idx) => {
                if let Ok(v) = idx.eval_in(&[], env) {
                    f(v.round() as i64)
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.visit_indices(env, f),
            Expr::Binary(_, l, r) => {
                l.visit_indices(env, f);
                r.visit_indices(env, f);
            }
            Expr::Sum { lo, hi, body, .. } => {
                for k in *lo..=*hi {
                    env.push(k);
                    body.visit_indices(env, f);
                    env.pop();
                }
            }
        }
    }
}

fn power(base: f64, exponent: f64, x: &[f64]) -> Result<f64, EvalError> {
    let integral = exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64;
    if base < 0.0 && !integral {
        return Err(EvalError::PowDomain {
            base,
            exponent,
            point: x.to_vec(),
        });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(EvalError::DivisionByZero { point: x.to_vec() });
    }
    Ok(if integral {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    })
}

/// Renders fully parenthesised source that parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(j) => write!(f, "x{}", j + 1),
            Expr::IndexedVar(idx) => write!(f, "x({idx})"),
            Expr::Bound { name, .. } => f.write_str(name),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Sum { var, lo, hi, body } => write!(f, "sum({var}, {lo}, {hi}, {body})"),
        }
    }
}

/// A parsed expression bound to its dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    expr: Expr,
    n: usize,
    source: String,
}

impl Objective {
    pub fn parse(src: &str, n: usize) -> Result<Objective, ParseError> {
        let expr = parse(src, n)?;
        Ok(Objective {
            expr,
            n,
            source: src.to_string(),
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        if x.len() != self.n {
            return Err(EvalError::Dimension {
                expected: self.n,
                actual: x.len(),
            });
        }
        self.expr.eval(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// The text this objective was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}
