//! Parametric representations of functions and semi-symmetries of PDEs.
//!
//! A function `U: Ω → ℝ` is carried by its graph, parametrized as
//! `V(λ) = (x(λ), u(λ))`. Any smooth self-map `f` of `M = Ω × ℝ` acts on
//! such parametrizations by composition, invertible or not; the result is a
//! function again only when its image is still a graph. A map that sends
//! solutions of a PDE to solutions is a semi-symmetry of that PDE.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gls::{line_collision, StateMap};
use crate::numeric::bisect;
use crate::symbolic::{marker_key, Expr, SmoothMap};
use crate::verify::{SamplingGrid, Tracker, VerificationReport};

/// Highest derivative order accepted in a PDE residual.
pub const MAX_DERIVATIVE_ORDER: usize = 2;

/// A map `V: Λ → Ω × ℝ` whose last output is the value coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricFunction {
    map: SmoothMap,
}

impl ParametricFunction {
    pub fn new(map: SmoothMap) -> Result<Self> {
        if map.output_arity() < 2 {
            return Err(Error::Arity {
                expected: 2,
                actual: map.output_arity(),
            });
        }
        Ok(ParametricFunction { map })
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn param_dim(&self) -> usize {
        self.map.input_arity()
    }

    /// `dim Ω`
    pub fn base_dim(&self) -> usize {
        self.map.output_arity() - 1
    }

    pub fn eval(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        self.map.eval(lambda)
    }
}

/// `V_U(x) = (x, U(x))`.
pub fn canonical_parametric(u: &SmoothMap) -> Result<ParametricFunction> {
    if u.output_arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            actual: u.output_arity(),
        });
    }
    let mut outputs: Vec<Expr> = u.inputs().iter().map(Expr::var).collect();
    outputs.push(u.outputs()[0].clone());
    ParametricFunction::new(SmoothMap::new(u.inputs().to_vec(), outputs)?)
}

/// `f·V = f ∘ V`, defined for every smooth `f: M → M`.
pub fn act(f: &SmoothMap, v: &ParametricFunction) -> Result<ParametricFunction> {
    if f.input_arity() != v.map.output_arity() || f.output_arity() != f.input_arity() {
        return Err(Error::Arity {
            expected: v.map.output_arity(),
            actual: f.input_arity(),
        });
    }
    ParametricFunction::new(f.compose(&v.map)?)
}

/// Rotation of the plane by `theta` about the origin, in variables `(x, u)`.
pub fn rotation(theta: f64) -> SmoothMap {
    let (s, c) = theta.sin_cos();
    let (x, u) = (Expr::var("x"), Expr::var("u"));
    let lin = |a: f64, b: f64| {
        Expr::add(
            Expr::mul(Expr::constant(a), x.clone()),
            Expr::mul(Expr::constant(b), u.clone()),
        )
    };
    SmoothMap::new(vec!["x".into(), "u".into()], vec![lin(c, -s), lin(s, c)]).expect("valid map")
}

/// A map `(x, u) ↦ (x, g(u))` acting on values only.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalMap {
    g: Expr,
}

impl VerticalMap {
    /// `g` is an expression in `u`.
    pub fn new(g: Expr) -> Result<Self> {
        if let Some(v) = g.free_vars().into_iter().find(|v| v != "u") {
            return Err(Error::UnboundVariable(v));
        }
        g.validate()?;
        Ok(VerticalMap { g })
    }

    pub fn parse(text: &str) -> Result<Self> {
        VerticalMap::new(text.parse()?)
    }

    pub fn expr(&self) -> &Expr {
        &self.g
    }

    /// The map on `Ω × ℝ` with base coordinates `base` and value coordinate `u`.
    pub fn to_map(&self, base: &[&str]) -> Result<SmoothMap> {
        let value = if base.contains(&"u") {
            return Err(Error::InvalidExpr("base coordinates may not be called `u`".into()));
        } else {
            self.g.clone()
        };
        let mut inputs: Vec<String> = base.iter().map(|s| s.to_string()).collect();
        inputs.push("u".into());
        let mut outputs: Vec<Expr> = base.iter().map(|b| Expr::var(*b)).collect();
        outputs.push(value);
        SmoothMap::new(inputs, outputs)
    }

    /// `g ∘ U`, exactly.
    pub fn apply_to(&self, u: &SmoothMap) -> Result<SmoothMap> {
        if u.output_arity() != 1 {
            return Err(Error::Arity {
                expected: 1,
                actual: u.output_arity(),
            });
        }
        SmoothMap::new(u.inputs().to_vec(), vec![self.g.substitute("u", &u.outputs()[0])])
    }
}

/// Splits a map of `Ω × ℝ` into its value expression when it only acts on values.
fn vertical_part(f: &SmoothMap) -> Option<&Expr> {
    let n = f.input_arity();
    let inputs = f.inputs();
    let base_fixed = (0..n - 1).all(|i| f.outputs()[i] == Expr::var(&inputs[i]));
    let value = &f.outputs()[n - 1];
    let value_only = value.free_vars().iter().all(|v| v == &inputs[n - 1]);
    (base_fixed && value_only).then_some(value)
}

/// `T(x, D)U = 0`: a residual in the independent variables, the unknown and
/// its derivative markers `D(U, x, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeResidual {
    vars: Vec<String>,
    unknown: String,
    residual: Expr,
}

impl PdeResidual {
    pub fn new(residual: Expr, unknown: &str, vars: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        if vars.iter().any(|v| v == unknown) {
            return Err(Error::InvalidExpr(format!("`{unknown}` is both unknown and variable")));
        }
        for v in residual.free_vars() {
            if v != unknown && !vars.contains(&v) {
                return Err(Error::UnboundVariable(v));
            }
        }
        for (func, wrt) in residual.markers() {
            if func != unknown {
                return Err(Error::InvalidExpr(format!("marker of `{func}`, expected `{unknown}`")));
            }
            if wrt.len() > MAX_DERIVATIVE_ORDER {
                return Err(Error::Unsupported(format!(
                    "derivative of order {} (at most {MAX_DERIVATIVE_ORDER})",
                    wrt.len()
                )));
            }
            if let Some(w) = wrt.iter().find(|w| !vars.contains(w)) {
                return Err(Error::UnboundVariable(w.clone()));
            }
        }
        Ok(PdeResidual {
            vars,
            unknown: unknown.to_string(),
            residual,
        })
    }

    pub fn parse(residual: &str, unknown: &str, vars: &[&str]) -> Result<Self> {
        PdeResidual::new(residual.parse()?, unknown, vars)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn unknown(&self) -> &str {
        &self.unknown
    }

    pub fn residual(&self) -> &Expr {
        &self.residual
    }

    /// The residual of a candidate solution as a map over the variables.
    pub fn instantiate(&self, u: &SmoothMap) -> Result<SmoothMap> {
        let sol = self.aligned(u)?;
        let expr = self.residual.resolve_markers(&self.unknown, &sol.outputs()[0])?;
        SmoothMap::new(self.vars.clone(), vec![expr])
    }

    /// `u` with inputs reordered to the PDE's variables.
    fn aligned(&self, u: &SmoothMap) -> Result<SmoothMap> {
        if u.output_arity() != 1 {
            return Err(Error::Arity {
                expected: 1,
                actual: u.output_arity(),
            });
        }
        let mut inputs: Vec<&String> = u.inputs().iter().collect();
        let mut want: Vec<&String> = self.vars.iter().collect();
        inputs.sort();
        want.sort();
        if inputs != want {
            return Err(Error::InvalidExpr(format!(
                "solution variables {:?} do not match {:?}",
                u.inputs(),
                self.vars
            )));
        }
        SmoothMap::new(self.vars.clone(), u.outputs().to_vec())
    }
}

/// Largest `|T(x, D)U|` over the grid (axes in the PDE's variable order).
pub fn residual_max(pde: &PdeResidual, u: &SmoothMap, grid: &SamplingGrid) -> Result<f64> {
    let r = pde.instantiate(u)?;
    if grid.dim() != pde.vars.len() {
        return Err(Error::InvalidGrid(format!("expected {} axes", pde.vars.len())));
    }
    let mut max = 0.0f64;
    for p in grid.points() {
        let v: f64 = r.eval_scalar(&p).map_err(|e| e.at(&p))?;
        max = max.max(if v.is_nan() { f64::INFINITY } else { v.abs() });
    }
    Ok(max)
}

/// Tolerances of the graph test: base points closer than `base` coincide,
/// and values further apart than `value` then make the image multivalued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphTolerance {
    pub base: f64,
    pub value: f64,
}

impl Default for GraphTolerance {
    fn default() -> Self {
        GraphTolerance { base: 1e-9, value: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphCheck {
    pub is_graph: bool,
    /// two image points over the same base point
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

struct BaseProjection<'a> {
    v: &'a ParametricFunction,
    partials: Vec<SmoothMap>,
}

impl<'a> BaseProjection<'a> {
    fn new(v: &'a ParametricFunction) -> Self {
        let partials = v.map.inputs().iter().map(|x| v.map.partial(x)).collect();
        BaseProjection { v, partials }
    }
}

impl StateMap<f64> for BaseProjection<'_> {
    fn dim_in(&self) -> usize {
        self.v.param_dim()
    }

    fn dim_out(&self) -> usize {
        self.v.base_dim()
    }

    fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.v.eval(y)?;
        out.pop();
        Ok(out)
    }

    fn partial(&self, y: &[f64], k: usize) -> Option<Result<Vec<f64>>> {
        Some(self.partials[k].eval(y).map(|mut out| {
            out.pop();
            out
        }))
    }
}

/// Whether the image of `v` over the parameter grid is the graph of a function.
///
/// Folds of the base coordinates along axis-parallel parameter lines are
/// located exactly (this covers every 1-D base); otherwise all sampled
/// images are compared pairwise by base point.
pub fn is_graph(v: &ParametricFunction, grid: &SamplingGrid, tol: GraphTolerance) -> Result<GraphCheck> {
    if grid.dim() != v.param_dim() {
        return Err(Error::InvalidGrid(format!("expected {} axes", v.param_dim())));
    }
    let proj = BaseProjection::new(v);
    let multivalued = |a: &[f64], b: &[f64]| {
        let n = a.len() - 1;
        let base_gap = (0..n).fold(0.0f64, |m, i| m.max((a[i] - b[i]).abs()));
        base_gap <= tol.base && (a[n] - b[n]).abs() > tol.value
    };
    if let Some((p, q)) = line_collision(&proj, grid, tol.base) {
        let (a, b) = (v.eval(&p)?, v.eval(&q)?);
        if multivalued(&a, &b) {
            return Ok(GraphCheck {
                is_graph: false,
                witness: Some((a, b)),
            });
        }
    }
    let mut images: Vec<Vec<f64>> = grid.points().iter().filter_map(|p| v.eval(p).ok()).collect();
    images.sort_by(|a, b| a[0].total_cmp(&b[0]));
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[j][0] - images[i][0] > tol.base {
                break;
            }
            if multivalued(&images[i], &images[j]) {
                return Ok(GraphCheck {
                    is_graph: false,
                    witness: Some((images[i].clone(), images[j].clone())),
                });
            }
        }
    }
    Ok(GraphCheck {
        is_graph: true,
        witness: None,
    })
}

/// Step of the central differences used on re-graphed functions.
const REGRAPH_STEP: f64 = 1e-4;

/// Residual of the re-graphed image of a 1-D parametric curve.
///
/// The base coordinate is inverted by bisection over the parameter range
/// and derivative markers are replaced by central differences; grid points
/// outside the image of the base coordinate are skipped.
fn regraphed_residual(pde: &PdeResidual, w: &ParametricFunction, grid: &SamplingGrid) -> Result<(f64, usize)> {
    let axis = &grid.axes()[0];
    let (lo, hi) = (axis.lo, axis.hi);
    let base = |l: f64| w.eval(&[l]).map(|p| p[0]);
    let (b_lo, b_hi) = (base(lo)?, base(hi)?);
    let (b_min, b_max) = (b_lo.min(b_hi), b_lo.max(b_hi));
    let value_at = |x: f64| -> Result<f64> {
        let l = bisect(|l| base(l).map(|b| b - x), lo, hi, 1e-15)?;
        w.eval(&[l]).map(|p| p[1])
    };
    let var = &pde.vars[0];
    let h = REGRAPH_STEP;
    let mut max = 0.0f64;
    let mut used = 0;
    for x in axis.values() {
        if x - 2.0 * h < b_min || x + 2.0 * h > b_max {
            continue;
        }
        let (um, u0, up) = (value_at(x - h)?, value_at(x)?, value_at(x + h)?);
        let mut env: HashMap<String, f64> = HashMap::new();
        env.insert(var.clone(), x);
        env.insert(pde.unknown.clone(), u0);
        let wrt1 = vec![var.clone()];
        let wrt2 = vec![var.clone(), var.clone()];
        env.insert(marker_key(&pde.unknown, &wrt1), (up - um) / (2.0 * h));
        env.insert(marker_key(&pde.unknown, &wrt2), (up - 2.0 * u0 + um) / (h * h));
        let r: f64 = pde.residual.eval(&env).map_err(|e| e.at(&[x]))?;
        max = max.max(r.abs());
        used += 1;
    }
    Ok((max, used))
}

/// Checks that `f` maps each member of a family of solutions to a solution.
///
/// Each member `U` must itself solve the PDE to `tol`. Its graph is acted
/// on by `f`; a transformed graph that is no longer a graph is reported as
/// [`Error::NotAGraph`]. For vertical `f` the transformed solution is built
/// symbolically; for a 1-D base it is re-graphed numerically; other
/// non-vertical maps are unsupported.
pub fn semi_symmetry_check(
    pde: &PdeResidual,
    f: &SmoothMap,
    family: &[SmoothMap],
    grid: &SamplingGrid,
    tol: f64,
) -> Result<VerificationReport> {
    let mut transformed = Vec::with_capacity(family.len());
    for u in family {
        let u = pde.aligned(u)?;
        let r0 = residual_max(pde, &u, grid)?;
        if r0 > tol {
            return Err(Error::Precondition(format!(
                "{} is not a solution (residual {r0:e})",
                u.outputs()[0]
            )));
        }
        let w = act(f, &canonical_parametric(&u)?)?;
        let g = is_graph(&w, grid, GraphTolerance::default())?;
        if let Some((first, second)) = g.witness {
            return Err(Error::NotAGraph { first, second });
        }
        transformed.push((u, w));
    }
    let mut tracker = Tracker::new();
    let mut notes = Vec::new();
    for (u, w) in &transformed {
        let dev = if let Some(value) = vertical_part(f) {
            let n = f.input_arity();
            let image = value.substitute(&f.inputs()[n - 1], &u.outputs()[0]);
            let ut = SmoothMap::new(pde.vars.clone(), vec![image])?;
            notes.push(format!("{} -> {}", u.outputs()[0], ut.outputs()[0]));
            residual_max(pde, &ut, grid)?
        } else if pde.vars.len() == 1 {
            let (r, used) = regraphed_residual(pde, w, grid)?;
            notes.push(format!(
                "{} re-graphed numerically at {used} points",
                u.outputs()[0]
            ));
            r
        } else {
            return Err(Error::Unsupported(
                "re-graphing a non-vertical image over a base of dimension > 1".into(),
            ));
        };
        tracker.record(dev, &[], &[dev]);
    }
    let mut report = tracker.finish(
        "semi-symmetry",
        tol,
        format!("{} solutions over {grid}", family.len()),
    );
    report.notes.extend(notes);
    Ok(report)
}

/// Parameters of a family of maps that keep a subset invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedScan {
    pub invariant: Vec<f64>,
    /// rejected parameters with a sampled point of the subset mapped outside it
    pub rejected: Vec<(f64, Vec<f64>)>,
    pub sampled_points: usize,
}

/// Finds the sampled parameters `g` with `g·S ⊆ S`.
///
/// `action` has the parameter as its first input followed by the
/// coordinates of `M`; grid points outside `S` are ignored.
pub fn constrained_symmetry_scan(
    action: &SmoothMap,
    subset: impl Fn(&[f64]) -> bool,
    params: &[f64],
    state_grid: &SamplingGrid,
) -> Result<ConstrainedScan> {
    if action.input_arity() != action.output_arity() + 1 || state_grid.dim() != action.output_arity() {
        return Err(Error::Arity {
            expected: action.output_arity() + 1,
            actual: action.input_arity(),
        });
    }
    let points: Vec<Vec<f64>> = state_grid.points().into_iter().filter(|p| subset(p)).collect();
    let mut scan = ConstrainedScan {
        invariant: Vec::new(),
        rejected: Vec::new(),
        sampled_points: points.len(),
    };
    'params: for &g in params {
        for p in &points {
            let mut arg = vec![g];
            arg.extend_from_slice(p);
            let image: Vec<f64> = action.eval(&arg).map_err(|e| e.at(&arg))?;
            if !subset(&image) {
                scan.rejected.push((g, p.clone()));
                continue 'params;
            }
        }
        scan.invariant.push(g);
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn transport() -> PdeResidual {
        PdeResidual::parse("D(U,t) - D(U,x)", "U", &["t", "x"]).unwrap()
    }

    fn sol(text: &str) -> SmoothMap {
        SmoothMap::parse(&["t", "x"], &[text]).unwrap()
    }

    fn unit_square(n: usize) -> SamplingGrid {
        SamplingGrid::from_ranges(&[(0.0, 1.0, n), (0.0, 1.0, n)]).unwrap()
    }

    #[test]
    fn canonical_representations() {
        let v = canonical_parametric(&SmoothMap::parse(&["x"], &["x^2"]).unwrap()).unwrap();
        assert_eq!(v.eval(&[3.0]).unwrap(), vec![3.0, 9.0]);
        let z = canonical_parametric(&SmoothMap::parse(&["x"], &["0"]).unwrap()).unwrap();
        assert_eq!(z.eval(&[-2.0]).unwrap(), vec![-2.0, 0.0]);
        let w = canonical_parametric(&sol("sin(t + x)")).unwrap();
        assert_eq!(w.eval(&[0.5, 1.0]).unwrap(), vec![0.5, 1.0, 1.5f64.sin()]);
        let g = SamplingGrid::linspace(-2.0, 2.0, 401).unwrap();
        assert!(is_graph(&v, &g, GraphTolerance::default()).unwrap().is_graph);
    }

    #[test]
    fn rotated_parabola() {
        let v = canonical_parametric(&SmoothMap::parse(&["x"], &["x^2"]).unwrap()).unwrap();
        let g = SamplingGrid::linspace(-2.0, 2.0, 401).unwrap();
        let quarter = is_graph(&act(&rotation(PI / 4.0), &v).unwrap(), &g, GraphTolerance::default()).unwrap();
        assert!(!quarter.is_graph);
        let (a, b) = quarter.witness.unwrap();
        assert!((a[0] - b[0]).abs() <= 1e-9 && (a[1] - b[1]).abs() > 1e-6);
        let half = is_graph(&act(&rotation(PI), &v).unwrap(), &g, GraphTolerance::default()).unwrap();
        assert!(half.is_graph && half.witness.is_none());
    }

    #[test]
    fn act_identity_and_vertical_maps() {
        let v = canonical_parametric(&sol("sin(t + x)")).unwrap();
        let id = SmoothMap::identity(&["t", "x", "u"]);
        let same = act(&id, &v).unwrap();
        assert_eq!(same, v);
        let g = VerticalMap::parse("u^3 - u").unwrap().to_map(&["t", "x"]).unwrap();
        let w = act(&g, &v).unwrap();
        let p = w.eval(&[0.2, 0.3]).unwrap();
        let h = 0.5f64.sin();
        assert!((p[2] - (h * h * h - h)).abs() < 1e-15);
        assert!(act(&rotation(1.0), &v).is_err());
    }

    #[test]
    fn residuals() {
        let g = unit_square(11);
        assert!(residual_max(&transport(), &sol("sin(t + x)"), &g).unwrap() <= 1e-14);
        assert_eq!(residual_max(&transport(), &sol("t"), &g).unwrap(), 1.0);
        // input order of the solution does not matter
        let swapped = SmoothMap::parse(&["x", "t"], &["exp(x + t)"]).unwrap();
        assert!(residual_max(&transport(), &swapped, &g).unwrap() <= 1e-14);
        let bad = SmoothMap::parse(&["t", "y"], &["t"]).unwrap();
        assert!(residual_max(&transport(), &bad, &g).is_err());
        let log = sol("log(x - 0.5)");
        assert!(residual_max(&transport(), &log, &g).unwrap_err().is_domain());
    }

    #[test]
    fn pde_declarations_are_validated() {
        assert!(PdeResidual::parse("D(U,t) - D(U,x,x)", "U", &["t", "x"]).is_ok());
        assert!(PdeResidual::parse("D(U,t) + U*D(U,x) - 0.1*D(U,x,x)", "U", &["t", "x"]).is_ok());
        assert!(PdeResidual::parse("D(U,x,x,x)", "U", &["x"]).is_err());
        assert!(PdeResidual::parse("D(V,x)", "U", &["x"]).is_err());
        assert!(PdeResidual::parse("D(U,y)", "U", &["x"]).is_err());
        assert!(PdeResidual::parse("D(U,x) - z", "U", &["x"]).is_err());
    }

    #[test]
    fn vertical_semi_symmetry() {
        let family = [sol("sin(t + x)"), sol("t + x"), sol("exp(t + x)")];
        let f = VerticalMap::parse("u^3 - u").unwrap().to_map(&["t", "x"]).unwrap();
        let r = semi_symmetry_check(&transport(), &f, &family, &unit_square(21), 1e-12).unwrap();
        assert!(r.succeeded(), "{r:?}");
        let id = SmoothMap::identity(&["t", "x", "u"]);
        assert!(semi_symmetry_check(&transport(), &id, &family, &unit_square(5), 1e-12)
            .unwrap()
            .succeeded());
    }

    #[test]
    fn rotation_breaks_graphs() {
        let family = [sol("sin(t + x)"), sol("t + x"), sol("exp(t + x)")];
        let rot = SmoothMap::parse(
            &["t", "x", "u"],
            &["t", "0.7071067811865476*x - 0.7071067811865476*u", "0.7071067811865476*x + 0.7071067811865476*u"],
        )
        .unwrap();
        let err = semi_symmetry_check(&transport(), &rot, &family, &unit_square(21), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotAGraph { .. }), "{err:?}");
    }

    #[test]
    fn regraphing_in_one_dimension() {
        // rotating a straight line keeps it straight
        let pde = PdeResidual::parse("D(U,x,x)", "U", &["x"]).unwrap();
        let line = SmoothMap::parse(&["x"], &["2*x + 1"]).unwrap();
        let g = SamplingGrid::linspace(-2.0, 2.0, 41).unwrap();
        let r = semi_symmetry_check(&pde, &rotation(0.3), &[line], &g, 1e-6).unwrap();
        assert!(r.succeeded(), "{r:?}");
        let non_solution = SmoothMap::parse(&["x"], &["x^2"]).unwrap();
        assert!(matches!(
            semi_symmetry_check(&pde, &rotation(0.3), &[non_solution], &g, 1e-6),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn strip_invariance() {
        let scaling = SmoothMap::parse(&["g", "x", "y"], &["g*x", "y"]).unwrap();
        let grid = SamplingGrid::from_ranges(&[(-0.99, 0.99, 41), (-3.0, 3.0, 7)]).unwrap();
        let strip = |p: &[f64]| p[0] > -1.0 && p[0] < 1.0;
        let scan = constrained_symmetry_scan(&scaling, strip, &[0.25, 0.5, 1.0, 1.5], &grid).unwrap();
        assert_eq!(scan.invariant, vec![0.25, 0.5, 1.0]);
        assert_eq!(scan.rejected.len(), 1);
        assert_eq!(scan.rejected[0].0, 1.5);
    }

    #[test]
    fn positive_translations_only() {
        let shift = SmoothMap::parse(&["c", "x", "u"], &["x", "u + c"]).unwrap();
        // the constant solution U = 1 sampled along its graph
        let graph = SamplingGrid::from_ranges(&[(-5.0, 5.0, 11), (0.5, 1.5, 3)]).unwrap();
        let positive = |p: &[f64]| p[1] > 0.0;
        let scan = constrained_symmetry_scan(&shift, positive, &[-2.0, 0.0, 0.5, 3.0], &graph).unwrap();
        assert_eq!(scan.invariant, vec![0.0, 0.5, 3.0]);
        assert_eq!(scan.rejected[0].0, -2.0);
    }
}
