//! Smooth maps `R^m -> R^n` given coordinate-wise by expressions.

use super::eval::Positional;
use super::expr::Expr;
use super::parse::parse_expr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A map with ordered input variables and one expression per output.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    inputs: Vec<String>,
    outputs: Vec<Expr>,
}

impl SmoothMap {
    /// Checks that outputs are nonempty, valid and mention only inputs.
    pub fn new(inputs: Vec<String>, outputs: Vec<Expr>) -> Result<SmoothMap> {
        if outputs.is_empty() {
            return Err(Error::InvalidExpr("a map needs at least one output".into()));
        }
        for (i, name) in inputs.iter().enumerate() {
            if name.is_empty() || inputs[..i].contains(name) {
                return Err(Error::InvalidExpr(format!("bad input name `{name}`")));
            }
        }
        for out in &outputs {
            out.validate()?;
            if let Some((func, _)) = out.markers().first() {
                return Err(Error::InvalidExpr(format!(
                    "unresolved derivative marker of `{func}` in map output"
                )));
            }
            if let Some(v) = out.free_vars().into_iter().find(|v| !inputs.contains(v)) {
                return Err(Error::UnboundVariable(v));
            }
        }
        Ok(SmoothMap { inputs, outputs })
    }

    /// Parses each output from text.
    pub fn parse(inputs: &[&str], outputs: &[&str]) -> Result<SmoothMap> {
        let outputs = outputs.iter().map(|s| parse_expr(s)).collect::<Result<_>>()?;
        SmoothMap::new(inputs.iter().map(|s| s.to_string()).collect(), outputs)
    }

    /// Identity map on the given variables.
    pub fn identity(vars: &[&str]) -> SmoothMap {
        SmoothMap {
            inputs: vars.iter().map(|s| s.to_string()).collect(),
            outputs: vars.iter().map(|v| Expr::var(*v)).collect(),
        }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Expr] {
        &self.outputs
    }

    pub fn input_arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_arity(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|n| n == name)
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        if point.len() != self.inputs.len() {
            return Err(Error::Arity {
                expected: self.inputs.len(),
                actual: point.len(),
            });
        }
        let env = Positional {
            names: &self.inputs,
            values: point,
        };
        self.outputs.iter().map(|e| e.eval(&env)).collect()
    }

    /// Evaluates a single-output map.
    pub fn eval_scalar<T: Scalar>(&self, point: &[T]) -> Result<T> {
        Ok(self.eval(point)?[0])
    }

    /// Coordinate-wise exact partial derivative.
    pub fn partial(&self, var: &str) -> SmoothMap {
        SmoothMap {
            inputs: self.inputs.clone(),
            outputs: self.outputs.iter().map(|e| e.diff(var)).collect(),
        }
    }

    /// Composition `self ∘ inner`; `inner`'s outputs feed `self`'s inputs.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap> {
        if inner.output_arity() != self.input_arity() {
            return Err(Error::Arity {
                expected: self.input_arity(),
                actual: inner.output_arity(),
            });
        }
        let subs: Vec<(&str, Expr)> = self
            .inputs
            .iter()
            .map(String::as_str)
            .zip(inner.outputs.iter().cloned())
            .collect();
        Ok(SmoothMap {
            inputs: inner.inputs.clone(),
            outputs: self.outputs.iter().map(|e| e.substitute_all(&subs)).collect(),
        })
    }

    /// Renames an input variable throughout the map.
    pub fn rename_input(&self, from: &str, to: &str) -> Result<SmoothMap> {
        if from != to && self.inputs.iter().any(|n| n == to) {
            return Err(Error::InvalidExpr(format!("input `{to}` already exists")));
        }
        let rep = Expr::var(to);
        Ok(SmoothMap {
            inputs: self
                .inputs
                .iter()
                .map(|n| if n == from { to.to_string() } else { n.clone() })
                .collect(),
            outputs: self.outputs.iter().map(|e| e.substitute(from, &rep)).collect(),
        })
    }
}

/// Central difference `(m(p + h e_var) - m(p - h e_var)) / 2h` of the first output.
pub fn finite_diff<T: Scalar>(map: &SmoothMap, point: &[T], var: &str, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::InvalidParameter("finite difference step must be positive".into()));
    }
    let k = map
        .input_index(var)
        .ok_or_else(|| Error::UnboundVariable(var.to_string()))?;
    let mut plus = point.to_vec();
    let mut minus = point.to_vec();
    plus[k] = plus[k] + h;
    minus[k] = minus[k] - h;
    let (fp, fm) = (map.eval_scalar(&plus)?, map.eval_scalar(&minus)?);
    Ok((fp - fm) / (h + h))
}
