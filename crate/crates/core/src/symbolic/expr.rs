//! Expression tree, smart constructors and the canonical printer.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sqrt,
    Cbrt,
    Tanh,
    Sin,
    Cos,
    Exp,
    Log,
}

impl UnaryOp {
    /// Built-in functions callable with `name(arg)` syntax.
    pub const FUNCTIONS: [UnaryOp; 7] = [
        UnaryOp::Sqrt,
        UnaryOp::Cbrt,
        UnaryOp::Tanh,
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Exp,
        UnaryOp::Log,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Cbrt => "cbrt",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<UnaryOp> {
        Self::FUNCTIONS.into_iter().find(|op| op.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

/// Symbolic expression over named real variables.
///
/// `Marker` is a partial-derivative placeholder `D(U, x, ...)` of an unknown
/// function; it appears only in PDE residual templates and must be resolved
/// before evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Marker { func: String, wrt: Vec<String> },
}

#[allow(clippy::should_implement_trait, clippy::redundant_guards)]
impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn marker(func: impl Into<String>, wrt: Vec<String>) -> Expr {
        Expr::Marker {
            func: func.into(),
            wrt,
        }
    }

    /// Raw node without simplification.
    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary(op, Box::new(arg))
    }

    /// Raw node without simplification.
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    // Simplifying constructors: constant folding and 0/1 identities only.
    // The float guards also catch -0.0, which a literal pattern would not make obvious.

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::binary(BinaryOp::Add, a, b),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (Some(x), _) if x == 0.0 => Expr::neg(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::binary(BinaryOp::Sub, a, b),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Const(0.0),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::binary(BinaryOp::Mul, a, b),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != 0.0 => Expr::Const(x / y),
            (Some(x), _) if x == 0.0 => Expr::Const(0.0),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::binary(BinaryOp::Div, a, b),
        }
    }

    /// Power with a constant exponent.
    pub fn powf(base: Expr, exponent: f64) -> Expr {
        if exponent == 0.0 {
            return Expr::Const(1.0);
        }
        if exponent == 1.0 {
            return base;
        }
        match base.as_const() {
            Some(b) if b.powf(exponent).is_finite() => Expr::Const(b.powf(exponent)),
            _ => Expr::binary(BinaryOp::Pow, base, Expr::Const(exponent)),
        }
    }

    /// Power node; the exponent must reduce to a constant.
    pub fn pow(base: Expr, exponent: Expr) -> Result<Expr> {
        match exponent.fold_constants().as_const() {
            Some(e) => Ok(Expr::powf(base, e)),
            None => Err(Error::InvalidExpr(format!(
                "exponent `{exponent}` is not a constant"
            ))),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Unary(UnaryOp::Neg, inner) => *inner,
            other => Expr::unary(UnaryOp::Neg, other),
        }
    }

    pub fn apply(op: UnaryOp, a: Expr) -> Expr {
        if op == UnaryOp::Neg {
            return Expr::neg(a);
        }
        if let Some(c) = a.as_const() {
            if let Ok(v) = super::eval::apply_unary(op, c) {
                if v.is_finite() {
                    return Expr::Const(v);
                }
            }
        }
        Expr::unary(op, a)
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Sqrt, a)
    }

    pub fn cbrt(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Cbrt, a)
    }

    pub fn tanh(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Tanh, a)
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Sin, a)
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Cos, a)
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Exp, a)
    }

    pub fn log(a: Expr) -> Expr {
        Expr::apply(UnaryOp::Log, a)
    }

    /// Rebuilds the tree through the simplifying constructors.
    pub fn fold_constants(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Marker { .. } => self.clone(),
            Expr::Unary(op, a) => Expr::apply(*op, a.fold_constants()),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.fold_constants(), b.fold_constants());
                match op {
                    BinaryOp::Add => Expr::add(a, b),
                    BinaryOp::Sub => Expr::sub(a, b),
                    BinaryOp::Mul => Expr::mul(a, b),
                    BinaryOp::Div => Expr::div(a, b),
                    BinaryOp::Pow => match b.as_const() {
                        Some(e) => Expr::powf(a, e),
                        None => Expr::binary(BinaryOp::Pow, a, b),
                    },
                }
            }
        }
    }

    /// Names of all free variables (markers excluded).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Var(name) = e {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn contains_var(&self, name: &str) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                found |= v == name;
            }
        });
        found
    }

    /// Derivative markers occurring in the tree.
    pub fn markers(&self) -> Vec<(String, Vec<String>)> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Marker { func, wrt } = e {
                out.push((func.clone(), wrt.clone()));
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Unary(_, a) => a.visit(f),
            Expr::Binary(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Checks the structural invariants: nonempty names, constant exponents.
    pub fn validate(&self) -> Result<()> {
        let mut err = None;
        self.visit(&mut |e| match e {
            Expr::Var(name) if name.is_empty() => {
                err.get_or_insert(Error::InvalidExpr("empty variable name".into()));
            }
            Expr::Binary(BinaryOp::Pow, _, b) if b.as_const().is_none() => {
                err.get_or_insert(Error::InvalidExpr(format!(
                    "exponent `{b}` is not a constant"
                )));
            }
            _ => {}
        });
        err.map_or(Ok(()), Err)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Binary(BinaryOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

/// Canonical key of a derivative marker; mixed partials commute so the
/// variables are sorted.
pub fn marker_key(func: &str, wrt: &[String]) -> String {
    let mut vars: Vec<&str> = wrt.iter().map(String::as_str).collect();
    vars.sort_unstable();
    format!("D({func},{})", vars.join(","))
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Marker { func, wrt } => write!(f, "D({func},{})", wrt.join(",")),
            Expr::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                // A bare literal after `-` would be folded into a negative constant.
                let parens = a.precedence() < 3 || matches!(**a, Expr::Const(c) if !c.is_sign_negative());
                write_child(f, a, parens)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(BinaryOp::Pow, a, b) => {
                write_child(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_child(f, b, b.precedence() < 4)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                write_child(f, a, a.precedence() < p)?;
                f.write_str(op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}
