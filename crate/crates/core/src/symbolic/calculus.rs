//! Exact symbolic differentiation and substitution.

use super::expr::{BinaryOp, Expr, UnaryOp};
use crate::error::{Error, Result};

impl Expr {
    /// Exact partial derivative with respect to `var`.
    ///
    /// The result is built with the simplifying constructors, so only
    /// constant folding and 0/1 identities are applied. Derivative markers
    /// gain `var` as an extra differentiation variable.
    pub fn diff(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(v) => Expr::Const(if v == var { 1.0 } else { 0.0 }),
            Expr::Marker { func, wrt } => {
                let mut wrt = wrt.clone();
                wrt.push(var.to_string());
                Expr::marker(func.clone(), wrt)
            }
            _ if !self.depends_on(var) => Expr::Const(0.0),
            Expr::Unary(op, a) => {
                let da = a.diff(var);
                let a = (**a).clone();
                match op {
                    UnaryOp::Neg => Expr::neg(da),
                    UnaryOp::Sqrt => Expr::div(da, Expr::mul(Expr::Const(2.0), Expr::sqrt(a))),
                    UnaryOp::Cbrt => Expr::div(
                        da,
                        Expr::mul(Expr::Const(3.0), Expr::powf(Expr::cbrt(a), 2.0)),
                    ),
                    UnaryOp::Tanh => Expr::mul(
                        da,
                        Expr::sub(Expr::Const(1.0), Expr::powf(Expr::tanh(a), 2.0)),
                    ),
                    UnaryOp::Sin => Expr::mul(da, Expr::cos(a)),
                    UnaryOp::Cos => Expr::neg(Expr::mul(da, Expr::sin(a))),
                    UnaryOp::Exp => Expr::mul(da, Expr::exp(a)),
                    UnaryOp::Log => Expr::div(da, a),
                }
            }
            Expr::Binary(op, a, b) => {
                let (da, db) = (a.diff(var), b.diff(var));
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinaryOp::Add => Expr::add(da, db),
                    BinaryOp::Sub => Expr::sub(da, db),
                    BinaryOp::Mul => Expr::add(Expr::mul(da, b), Expr::mul(a, db)),
                    BinaryOp::Div => Expr::div(
                        Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a, db)),
                        Expr::powf(b, 2.0),
                    ),
                    BinaryOp::Pow => match b.as_const() {
                        Some(n) => Expr::mul(
                            Expr::mul(Expr::Const(n), Expr::powf(a, n - 1.0)),
                            da,
                        ),
                        // Only reachable for hand-built trees violating the
                        // constant-exponent invariant: d(a^b) = a^b (b' log a + b a'/a).
                        None => Expr::mul(
                            Expr::binary(BinaryOp::Pow, a.clone(), b.clone()),
                            Expr::add(
                                Expr::mul(db, Expr::log(a.clone())),
                                Expr::div(Expr::mul(b, da), a),
                            ),
                        ),
                    },
                }
            }
        }
    }

    /// Repeated partial derivative, applied left to right.
    pub fn diff_many<S: AsRef<str>>(&self, vars: &[S]) -> Expr {
        vars.iter().fold(self.clone(), |e, v| e.diff(v.as_ref()))
    }

    fn depends_on(&self, var: &str) -> bool {
        let mut found = false;
        self.visit(&mut |e| match e {
            Expr::Var(v) => found |= v == var,
            Expr::Marker { .. } => found = true,
            _ => {}
        });
        found
    }

    /// Replaces every occurrence of `var` by `replacement` (no simplification).
    pub fn substitute(&self, var: &str, replacement: &Expr) -> Expr {
        self.substitute_all(&[(var, replacement.clone())])
    }

    /// Simultaneous substitution; replacements are not rescanned.
    pub fn substitute_all(&self, subs: &[(&str, Expr)]) -> Expr {
        match self {
            Expr::Var(v) => subs
                .iter()
                .find(|(name, _)| name == v)
                .map_or_else(|| self.clone(), |(_, rep)| rep.clone()),
            Expr::Const(_) | Expr::Marker { .. } => self.clone(),
            Expr::Unary(op, a) => Expr::unary(*op, a.substitute_all(subs)),
            Expr::Binary(op, a, b) => {
                Expr::binary(*op, a.substitute_all(subs), b.substitute_all(subs))
            }
        }
    }

    /// Replaces the unknown `func` and its derivative markers by `solution`
    /// and its exact partial derivatives.
    pub fn resolve_markers(&self, func: &str, solution: &Expr) -> Result<Expr> {
        Ok(match self {
            Expr::Var(v) if v == func => solution.clone(),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Marker { func: f, wrt } => {
                if f != func {
                    return Err(Error::InvalidExpr(format!(
                        "marker refers to `{f}`, expected `{func}`"
                    )));
                }
                solution.diff_many(wrt)
            }
            Expr::Unary(op, a) => Expr::unary(*op, a.resolve_markers(func, solution)?),
            Expr::Binary(op, a, b) => Expr::binary(
                *op,
                a.resolve_markers(func, solution)?,
                b.resolve_markers(func, solution)?,
            ),
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::symbolic::parse_expr;

    fn p(s: &str) -> crate::symbolic::Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn product_and_power_rules() {
        let d = p("y + t*y^2").diff("y");
        for (t, y) in [(1.0, 2.0), (-0.5, 3.0), (2.0, -1.5)] {
            let got: f64 = d.eval(&[("t", t), ("y", y)]).unwrap();
            assert!((got - (1.0 + 2.0 * t * y)).abs() < 1e-14);
        }
    }

    #[test]
    fn trivial_derivatives() {
        assert_eq!(p("y").diff("y"), p("1"));
        assert_eq!(p("x").diff("y"), p("0"));
        assert_eq!(p("3").diff("y"), p("0"));
    }

    #[test]
    fn tanh_chain_rule_shape() {
        assert_eq!(p("tanh(a*x)").diff("x"), p("a*(1 - tanh(a*x)^2)"));
    }

    #[test]
    fn sqrt_derivative_is_singular_at_zero() {
        let d = p("sqrt(t)").diff("t");
        assert!(d.eval::<f64, _>(&[("t", 0.0)]).unwrap_err().is_domain());
        assert!((d.eval::<f64, _>(&[("t", 4.0)]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn substitution() {
        assert_eq!(p("y").substitute("y", &p("y")), p("y"));
        assert_eq!(p("y^2").substitute("y", &p("sqrt(t)")), p("sqrt(t)^2"));
        let composed = p("u^3 - u").substitute("u", &p("sin(t + x)"));
        assert_eq!(composed, p("sin(t + x)^3 - sin(t + x)"));
    }

    #[test]
    fn simultaneous_substitution_does_not_rescan() {
        let swapped = p("x - u").substitute_all(&[("x", p("u")), ("u", p("x"))]);
        assert_eq!(swapped, p("u - x"));
    }

    #[test]
    fn markers_resolve_to_partials() {
        let r = p("D(U,t) - D(U,x,x) + U").resolve_markers("U", &p("t*x^2")).unwrap();
        let v: f64 = r.eval(&[("t", 2.0), ("x", 3.0)]).unwrap();
        // x^2 - 2t + t x^2
        assert!((v - (9.0 - 4.0 + 18.0)).abs() < 1e-14);
        assert!(p("D(V,t)").resolve_markers("U", &p("t")).is_err());
        assert_eq!(p("D(U,t)").diff("x"), p("D(U,t,x)"));
    }
}
