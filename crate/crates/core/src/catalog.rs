//! Registry of the named expressions used by the built-in actions, systems
//! and demos.

use crate::error::{Error, Result};
use crate::semisym::PdeResidual;
use crate::symbolic::{Expr, SmoothMap};

/// A named map, or a PDE residual in `unknown`, given by expression strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub inputs: &'static [&'static str],
    pub outputs: &'static [&'static str],
    pub unknown: Option<&'static str>,
}

impl Entry {
    pub fn expressions(&self) -> Result<Vec<Expr>> {
        self.outputs.iter().map(|s| s.parse()).collect()
    }

    pub fn map(&self) -> Result<SmoothMap> {
        if self.unknown.is_some() {
            return Err(Error::InvalidExpr(format!("`{}` is a PDE, not a map", self.name)));
        }
        SmoothMap::parse(self.inputs, self.outputs)
    }

    /// The residual with extra inputs beyond the PDE's variables bound to `params`.
    pub fn pde(&self, vars: &[&str], params: &[(&str, f64)]) -> Result<PdeResidual> {
        let unknown = self
            .unknown
            .ok_or_else(|| Error::InvalidExpr(format!("`{}` is a map, not a PDE", self.name)))?;
        let r = params
            .iter()
            .fold(self.outputs[0].parse::<Expr>()?, |e, (k, v)| e.substitute(k, &Expr::constant(*v)));
        PdeResidual::new(r, unknown, vars)
    }
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "sqrt-action",
        summary: "square-root semigroup H(t,y) = y + sqrt(t) y^2",
        inputs: &["t", "y"],
        outputs: &["y + sqrt(t)*y^2"],
        unknown: None,
    },
    Entry {
        name: "sqrt-ode-plus",
        summary: "explicit ODE of the square-root semigroup, + branch",
        inputs: &["t", "H"],
        outputs: &["(1 + 2*sqrt(t)*H + sqrt(1 + 4*sqrt(t)*H))/(4*t*sqrt(t))"],
        unknown: None,
    },
    Entry {
        name: "sqrt-ode-minus",
        summary: "explicit ODE of the square-root semigroup, - branch",
        inputs: &["t", "H"],
        outputs: &["(1 + 2*sqrt(t)*H - sqrt(1 + 4*sqrt(t)*H))/(4*t*sqrt(t))"],
        unknown: None,
    },
    Entry {
        name: "milder-action",
        summary: "milder singularity H(t,y) = y + t y^2",
        inputs: &["t", "y"],
        outputs: &["y + t*y^2"],
        unknown: None,
    },
    Entry {
        name: "cuberoot-action",
        summary: "flow of Y' = 1/Y^2, a group action",
        inputs: &["t", "y"],
        outputs: &["cbrt(3*t + y^3)"],
        unknown: None,
    },
    Entry {
        name: "cuberoot-ode",
        summary: "autonomous generator 1/y^2",
        inputs: &["y"],
        outputs: &["1/y^2"],
        unknown: None,
    },
    Entry {
        name: "mediator-sqrt",
        summary: "default mediator g(t) = sqrt(t) of the homotopy construction",
        inputs: &["t"],
        outputs: &["sqrt(t)"],
        unknown: None,
    },
    Entry {
        name: "sqrt-ystar",
        summary: "bounded root y* of y* + sqrt(t) y*^2 = y",
        inputs: &["t", "y"],
        outputs: &["2*y/(1 + sqrt(1 + 4*sqrt(t)*y))"],
        unknown: None,
    },
    Entry {
        name: "sqrt-evolution",
        summary: "two-time evolution E(t,s)(y) of the square-root semigroup",
        inputs: &["t", "s", "y"],
        outputs: &["2*y/(1 + sqrt(1 + 4*sqrt(t)*y)) + sqrt(s)*(2*y/(1 + sqrt(1 + 4*sqrt(t)*y)))^2"],
        unknown: None,
    },
    Entry {
        name: "quadratic-evolution",
        summary: "E(t0,t)(y) = t^2 - t0^2 + y, evolution of Y' = 2t",
        inputs: &["t0", "t", "y"],
        outputs: &["t^2 - t0^2 + y"],
        unknown: None,
    },
    Entry {
        name: "quadratic-autonomous",
        summary: "autonomous lift of the quadratic evolution",
        inputs: &["s", "tau", "y"],
        outputs: &["tau + s", "s^2 + 2*s*tau + y"],
        unknown: None,
    },
    Entry {
        name: "transport-pde",
        summary: "U_t - U_x = 0",
        inputs: &["t", "x"],
        outputs: &["D(U,t) - D(U,x)"],
        unknown: Some("U"),
    },
    Entry {
        name: "burgers-soliton",
        summary: "traveling wave of U_t + U U_x = mu U_xx",
        inputs: &["t", "x", "x0", "c", "d", "mu"],
        outputs: &["c - sqrt(c^2 + d)*tanh(sqrt(c^2 + d)/(2*mu)*(x - x0 - c*t))"],
        unknown: None,
    },
    Entry {
        name: "burgers-pde",
        summary: "U_t + U U_x - mu U_xx = 0",
        inputs: &["t", "x", "mu"],
        outputs: &["D(U,t) + U*D(U,x) - mu*D(U,x,x)"],
        unknown: Some("U"),
    },
    Entry {
        name: "burgers-parameter-flow",
        summary: "soliton center under time advance, alpha = x0 + c t",
        inputs: &["t", "x0", "c", "d"],
        outputs: &["x0 + c*t"],
        unknown: None,
    },
    Entry {
        name: "heat-kernel",
        summary: "K(t,x) = exp(-x^2/(4t))/sqrt(t)",
        inputs: &["t", "x"],
        outputs: &["exp(-x^2/(4*t))/sqrt(t)"],
        unknown: None,
    },
    Entry {
        name: "heat-pde",
        summary: "U_t - U_xx = 0",
        inputs: &["t", "x"],
        outputs: &["D(U,t) - D(U,x,x)"],
        unknown: Some("U"),
    },
    Entry {
        name: "rotation",
        summary: "rotation of the (x,u) plane by theta",
        inputs: &["theta", "x", "u"],
        outputs: &["x*cos(theta) - u*sin(theta)", "x*sin(theta) + u*cos(theta)"],
        unknown: None,
    },
    Entry {
        name: "parabola",
        summary: "U(x) = x^2",
        inputs: &["x"],
        outputs: &["x^2"],
        unknown: None,
    },
    Entry {
        name: "strip-scaling",
        summary: "(g,(x,y)) -> (g x, y) acting on the strip (-1,1) x R",
        inputs: &["g", "x", "y"],
        outputs: &["g*x", "y"],
        unknown: None,
    },
    Entry {
        name: "value-translation",
        summary: "(x,u) -> (x,u + c), symmetries of U' = 0 with U > 0 when c >= 0",
        inputs: &["c", "x", "u"],
        outputs: &["x", "u + c"],
        unknown: None,
    },
];

pub fn entries() -> &'static [Entry] {
    ENTRIES
}

pub fn lookup(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Expr;

    #[test]
    fn every_entry_parses_and_round_trips() {
        for e in entries() {
            let exprs = e.expressions().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(e.map().is_ok(), e.unknown.is_none(), "{}", e.name);
            for out in &exprs {
                let again: Expr = out.to_string().parse().unwrap();
                assert_eq!(&again, out, "{}", e.name);
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = entries().iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), entries().len());
        assert!(lookup("sqrt-action").is_some());
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn registry_agrees_with_builders() {
        let e = lookup("sqrt-evolution").unwrap().map().unwrap();
        for (t, s, y) in [(0.5, 1.0, 0.3), (2.0, 3.0, -0.1), (0.0, 1.0, 1.0)] {
            let want = crate::reduction::gls_two_time(t, s, y).unwrap();
            let got: f64 = e.eval_scalar(&[t, s, y]).unwrap();
            assert!((got - want).abs() < 1e-14);
        }
        let pde = lookup("burgers-pde").unwrap().pde(&["t", "x"], &[("mu", 0.7)]).unwrap();
        let g = crate::SamplingGrid::from_ranges(&[(0.0, 1.0, 5), (-3.0, 3.0, 7)]).unwrap();
        assert!(crate::semisym::residual_max(&pde, &crate::evolution_pde::burgers_soliton(0.3, 1.0, 0.5, 0.7).unwrap(), &g).unwrap() < 1e-12);
        let b = lookup("burgers-soliton").unwrap().map().unwrap();
        let u = crate::evolution_pde::burgers_soliton(0.3, 1.0, 0.5, 0.7).unwrap();
        for (t, x) in [(0.0, 0.0), (1.0, -2.0), (0.4, 3.0)] {
            let got: f64 = b.eval_scalar(&[t, x, 0.3, 1.0, 0.5, 0.7]).unwrap();
            assert!((got - u.eval_scalar::<f64>(&[t, x]).unwrap()).abs() < 1e-14);
        }
    }
}
