//! Numeric evaluation of expression trees over any [`Scalar`].

use std::collections::{BTreeMap, HashMap};

use super::expr::{marker_key, BinaryOp, Expr, UnaryOp};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Variable bindings consulted during evaluation.
pub trait Env<T> {
    fn lookup(&self, name: &str) -> Option<T>;
}

impl<T: Copy> Env<T> for HashMap<String, T> {
    fn lookup(&self, name: &str) -> Option<T> {
        self.get(name).copied()
    }
}

impl<T: Copy> Env<T> for BTreeMap<String, T> {
    fn lookup(&self, name: &str) -> Option<T> {
        self.get(name).copied()
    }
}

impl<T: Copy> Env<T> for [(&str, T)] {
    fn lookup(&self, name: &str) -> Option<T> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<T: Copy, const N: usize> Env<T> for [(&str, T); N] {
    fn lookup(&self, name: &str) -> Option<T> {
        self.as_slice().lookup(name)
    }
}

/// Binds `names[i]` to `values[i]`.
#[derive(Debug, Clone, Copy)]
pub struct Positional<'a, T> {
    pub names: &'a [String],
    pub values: &'a [T],
}

impl<T: Copy> Env<T> for Positional<'_, T> {
    fn lookup(&self, name: &str) -> Option<T> {
        self.names
            .iter()
            .position(|n| n == name)
            .and_then(|i| self.values.get(i).copied())
    }
}

/// Applies a built-in unary function with the crate's domain rules.
pub fn apply_unary<T: Scalar>(op: UnaryOp, x: T) -> Result<T> {
    Ok(match op {
        UnaryOp::Neg => -x,
        UnaryOp::Sqrt => {
            if x < T::zero() {
                return Err(Error::domain("sqrt", x.as_f64()));
            }
            x.sqrt()
        }
        UnaryOp::Cbrt => x.cbrt(),
        UnaryOp::Tanh => {
            if x.abs() > T::of(350.0) {
                x.signum()
            } else {
                x.tanh()
            }
        }
        UnaryOp::Sin => x.sin(),
        UnaryOp::Cos => x.cos(),
        UnaryOp::Exp => x.exp(),
        UnaryOp::Log => {
            if x <= T::zero() {
                return Err(Error::domain("log", x.as_f64()));
            }
            x.ln()
        }
    })
}

/// Applies a binary operator with the crate's domain rules.
pub fn apply_binary<T: Scalar>(op: BinaryOp, a: T, b: T) -> Result<T> {
    Ok(match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => {
            if b == T::zero() {
                return Err(Error::domain("division", a.as_f64()));
            }
            a / b
        }
        BinaryOp::Pow => {
            if a == T::zero() && b < T::zero() {
                return Err(Error::domain("pow", a.as_f64()));
            }
            if b.fract() == T::zero() && b.abs() <= T::of(i32::MAX as f64) {
                a.powi(b.to_i32().unwrap_or(0))
            } else if a < T::zero() {
                return Err(Error::domain("pow", a.as_f64()));
            } else {
                a.powf(b)
            }
        }
    })
}

impl Expr {
    /// Evaluates the expression; every free variable must be bound.
    pub fn eval<T: Scalar, E: Env<T> + ?Sized>(&self, env: &E) -> Result<T> {
        match self {
            Expr::Const(c) => Ok(T::of(*c)),
            Expr::Var(name) => env
                .lookup(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone())),
            Expr::Marker { func, wrt } => {
                let key = marker_key(func, wrt);
                env.lookup(&key).ok_or(Error::UnresolvedMarker(key))
            }
            Expr::Unary(op, a) => apply_unary(*op, a.eval(env)?),
            Expr::Binary(op, a, b) => apply_binary(*op, a.eval(env)?, b.eval(env)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_expr;

    #[test]
    fn evaluates_sqrt_action() {
        let e = parse_expr("y + sqrt(t)*y^2").unwrap();
        assert_eq!(e.eval(&[("t", 4.0), ("y", 3.0)]).unwrap(), 21.0);
        assert_eq!(e.eval(&[("t", 4.0f32), ("y", 3.0)]).unwrap(), 21.0f32);
    }

    #[test]
    fn identity() {
        assert_eq!(parse_expr("y").unwrap().eval(&[("y", 7.0)]).unwrap(), 7.0);
    }

    #[test]
    fn domain_errors() {
        let sqrt = parse_expr("sqrt(t)").unwrap();
        assert!(sqrt.eval(&[("t", -1.0)]).unwrap_err().is_domain());
        assert!(parse_expr("log(x)").unwrap().eval(&[("x", 0.0)]).unwrap_err().is_domain());
        assert!(parse_expr("1/x").unwrap().eval(&[("x", 0.0)]).unwrap_err().is_domain());
        assert!(parse_expr("x^0.5").unwrap().eval(&[("x", -2.0)]).unwrap_err().is_domain());
        assert_eq!(parse_expr("x^3").unwrap().eval(&[("x", -2.0)]).unwrap(), -8.0);
    }

    #[test]
    fn unbound_and_markers() {
        let e = parse_expr("x + z").unwrap();
        assert_eq!(e.eval(&[("x", 1.0)]).unwrap_err(), Error::UnboundVariable("z".into()));
        let m = parse_expr("D(U,x)").unwrap();
        assert!(matches!(m.eval(&[("x", 1.0)]), Err(Error::UnresolvedMarker(_))));
        assert_eq!(m.eval(&[("D(U,x)", 2.5)]).unwrap(), 2.5);
    }

    #[test]
    fn cbrt_is_odd_and_tanh_saturates() {
        let c = parse_expr("cbrt(x)").unwrap();
        assert!((c.eval(&[("x", -8.0)]).unwrap() + 2.0f64).abs() < 1e-15);
        let t = parse_expr("tanh(x)").unwrap();
        assert_eq!(t.eval(&[("x", 400.0)]).unwrap(), 1.0);
        assert_eq!(t.eval(&[("x", -400.0)]).unwrap(), -1.0);
    }

    #[test]
    fn positional_env() {
        let names = vec!["t".to_string(), "y".to_string()];
        let env = Positional {
            names: &names,
            values: &[1.0, 2.0],
        };
        assert_eq!(parse_expr("y + t*y^2").unwrap().eval(&env).unwrap(), 6.0);
    }
}
