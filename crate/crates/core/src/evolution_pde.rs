//! Semigroups induced by evolution PDEs on finite-dimensional solution families.
//!
//! When an evolution operator `E(t)` maps a family `V_{a,b}` into itself,
//! `E(t) V_{a,b} = V_{α(t,a,b), β(t,a,b)}`, the semigroup law of `E`
//! becomes a cocycle law for `(α, β)`, and for constant `β` the map
//! `(t, a) ↦ α(t, a, b)` is a semigroup action on the parameters `a`.
//! `E(t)` itself is only ever represented through this action.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gls::{TimeAction, TimeDomain};
use crate::scalar::scaled_deviation;
use crate::semisym::{residual_max, PdeResidual};
use crate::symbolic::{Expr, SmoothMap};
use crate::verify::{SamplingGrid, Tracker, VerificationReport};

/// The traveling-wave solution of the viscous Burgers equation
/// `U_t + U U_x = μ U_xx`, with `a = x0` and `b = (c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonFamily {
    pub x0: f64,
    pub c: f64,
    pub d: f64,
    pub mu: f64,
}

impl SolitonFamily {
    pub fn new(x0: f64, c: f64, d: f64, mu: f64) -> Result<Self> {
        if !(c * c + d > 0.0) {
            return Err(Error::InvalidParameter(format!("c^2 + d = {} must be positive", c * c + d)));
        }
        if !(mu > 0.0) || !x0.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("viscosity {mu} must be positive")));
        }
        Ok(SolitonFamily { x0, c, d, mu })
    }

    /// `√(c² + d)`, half the jump across the wave.
    pub fn amplitude(&self) -> f64 {
        (self.c * self.c + self.d).sqrt()
    }

    /// `U(t, x)`.
    pub fn map(&self) -> SmoothMap {
        let k = self.amplitude();
        let phase = Expr::sub(
            Expr::sub(Expr::var("x"), Expr::constant(self.x0)),
            Expr::mul(Expr::constant(self.c), Expr::var("t")),
        );
        let wave = Expr::tanh(Expr::mul(Expr::constant(k / (2.0 * self.mu)), phase));
        let u = Expr::sub(Expr::constant(self.c), Expr::mul(Expr::constant(k), wave));
        SmoothMap::new(vec!["t".into(), "x".into()], vec![u]).expect("valid map")
    }
}

/// `U(t,x) = c − √(c²+d)·tanh(√(c²+d)/(2μ)·(x − x0 − c t))`.
pub fn burgers_soliton(x0: f64, c: f64, d: f64, mu: f64) -> Result<SmoothMap> {
    Ok(SolitonFamily::new(x0, c, d, mu)?.map())
}

/// The Burgers operator `U_t + U U_x − μ U_xx` in `(t, x)`.
pub fn burgers_pde(mu: f64) -> Result<PdeResidual> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity {mu} must be positive")));
    }
    let r: Expr = "D(U,t) + U*D(U,x) - mu*D(U,x,x)".parse()?;
    PdeResidual::new(r.substitute("mu", &Expr::constant(mu)), "U", &["t", "x"])
}

/// Largest `|U_t + U U_x − μ U_xx|` over a grid in `(t, x)`.
pub fn burgers_residual(u: &SmoothMap, mu: f64, grid: &SamplingGrid) -> Result<f64> {
    residual_max(&burgers_pde(mu)?, u, grid)
}

type ParamDomain = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Parameter maps `α: [0,∞) × M × B → M` and `β: [0,∞) × M × B → B`,
/// both expressions in `t`, the `a` coordinates and the `b` coordinates.
#[derive(Clone)]
pub struct ParamFlow {
    a_vars: Vec<String>,
    b_vars: Vec<String>,
    alpha: SmoothMap,
    beta: SmoothMap,
    domain: Option<ParamDomain>,
}

impl fmt::Debug for ParamFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamFlow")
            .field("a_vars", &self.a_vars)
            .field("b_vars", &self.b_vars)
            .field("alpha", &self.alpha.outputs())
            .field("beta", &self.beta.outputs())
            .field("restricted", &self.domain.is_some())
            .finish()
    }
}

impl ParamFlow {
    pub fn new(a_vars: &[&str], b_vars: &[&str], alpha: Vec<Expr>, beta: Vec<Expr>) -> Result<Self> {
        if alpha.len() != a_vars.len() {
            return Err(Error::Arity {
                expected: a_vars.len(),
                actual: alpha.len(),
            });
        }
        if beta.len() != b_vars.len() {
            return Err(Error::Arity {
                expected: b_vars.len(),
                actual: beta.len(),
            });
        }
        if a_vars.is_empty() {
            return Err(Error::InvalidParameter("empty parameter space M".into()));
        }
        let mut inputs = vec!["t".to_string()];
        inputs.extend(a_vars.iter().chain(b_vars).map(|v| v.to_string()));
        Ok(ParamFlow {
            a_vars: a_vars.iter().map(|v| v.to_string()).collect(),
            b_vars: b_vars.iter().map(|v| v.to_string()).collect(),
            alpha: SmoothMap::new(inputs.clone(), alpha)?,
            beta: SmoothMap::new(inputs, beta)?,
            domain: None,
        })
    }

    /// A flow with `β(t, a, b) = b`.
    pub fn constant_beta(a_vars: &[&str], b_vars: &[&str], alpha: Vec<Expr>) -> Result<Self> {
        let beta = b_vars.iter().map(|b| Expr::var(*b)).collect();
        ParamFlow::new(a_vars, b_vars, alpha, beta)
    }

    /// Restricts `b` to an open set `B`.
    pub fn with_domain(mut self, pred: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Some(Arc::new(pred));
        self
    }

    pub fn a_dim(&self) -> usize {
        self.a_vars.len()
    }

    pub fn b_dim(&self) -> usize {
        self.b_vars.len()
    }

    pub fn alpha_map(&self) -> &SmoothMap {
        &self.alpha
    }

    pub fn beta_map(&self) -> &SmoothMap {
        &self.beta
    }

    pub fn in_domain(&self, b: &[f64]) -> bool {
        self.domain.as_ref().is_none_or(|p| p(b))
    }

    pub fn is_constant_beta(&self) -> bool {
        self.beta
            .outputs()
            .iter()
            .zip(&self.b_vars)
            .all(|(e, b)| *e == Expr::var(b))
    }

    fn args(&self, t: f64, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.a_dim() || b.len() != self.b_dim() {
            return Err(Error::Arity {
                expected: self.a_dim() + self.b_dim(),
                actual: a.len() + b.len(),
            });
        }
        let mut p = vec![t];
        p.extend_from_slice(a);
        p.extend_from_slice(b);
        Ok(p)
    }

    pub fn alpha(&self, t: f64, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        self.alpha.eval(&self.args(t, a, b)?)
    }

    pub fn beta(&self, t: f64, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        self.beta.eval(&self.args(t, a, b)?)
    }

    /// `(t, a) ↦ α(t, a, b)` for a fixed `b`; requires constant `β`.
    pub fn alpha_action(&self, b: &[f64]) -> Result<TimeAction<f64>> {
        if !self.is_constant_beta() {
            return Err(Error::Precondition("β depends on time or on a".into()));
        }
        if b.len() != self.b_dim() {
            return Err(Error::Arity {
                expected: self.b_dim(),
                actual: b.len(),
            });
        }
        if !self.in_domain(b) {
            return Err(Error::InvalidParameter(format!("b = {b:?} lies outside B")));
        }
        let outputs = self
            .alpha
            .outputs()
            .iter()
            .map(|e| {
                self.b_vars
                    .iter()
                    .zip(b)
                    .fold(e.clone(), |acc, (v, &x)| acc.substitute(v, &Expr::constant(x)))
            })
            .collect();
        let mut inputs = vec!["t".to_string()];
        inputs.extend(self.a_vars.iter().cloned());
        TimeAction::symbolic("alpha", TimeDomain::NonNegative, SmoothMap::new(inputs, outputs)?)
    }
}

/// `α(t, x0, (c, d)) = x0 + c t`, `β = b`, on `B = {c² + d > 0}`.
pub fn burgers_flow() -> ParamFlow {
    let alpha = Expr::add(Expr::var("x0"), Expr::mul(Expr::var("c"), Expr::var("t")));
    ParamFlow::constant_beta(&["x0"], &["c", "d"], vec![alpha])
        .expect("valid flow")
        .with_domain(|b| b[0] * b[0] + b[1] > 0.0)
}

fn split_point<'p>(flow: &ParamFlow, p: &'p [f64], lead: usize) -> (&'p [f64], &'p [f64]) {
    let (a, b) = p[lead..].split_at(flow.a_dim());
    (a, b)
}

fn check_axes(flow: &ParamFlow, grid: &SamplingGrid, lead: &[&str]) -> Result<()> {
    let want = lead.len() + flow.a_dim() + flow.b_dim();
    if grid.dim() != want {
        return Err(Error::InvalidGrid(format!(
            "expected {want} axes ({}, a, b), got {}",
            lead.join(", "),
            grid.dim()
        )));
    }
    Ok(())
}

/// Samples the cocycle law
/// `α(t+s, a, b) = α(s, α(t,a,b), β(t,a,b))`,
/// `β(t+s, a, b) = β(s, α(t,a,b), β(t,a,b))`
/// over a grid in `(t, s, a, b)`. Points with `b ∉ B` are skipped.
pub fn param_flow_check(flow: &ParamFlow, grid: &SamplingGrid, tol: f64) -> Result<VerificationReport> {
    check_axes(flow, grid, &["t", "s"])?;
    if grid.axes()[0].lo < 0.0 || grid.axes()[1].lo < 0.0 {
        return Err(Error::Precondition("times must be non-negative".into()));
    }
    let mut tracker = Tracker::new();
    for p in grid.points() {
        let (t, s) = (p[0], p[1]);
        let (a, b) = split_point(flow, &p, 2);
        if !flow.in_domain(b) {
            tracker.skip();
            continue;
        }
        let (at, bt) = (flow.alpha(t, a, b)?, flow.beta(t, a, b)?);
        if !flow.in_domain(&bt) {
            tracker.skip();
            continue;
        }
        let mut lhs = flow.alpha(t + s, a, b)?;
        lhs.extend(flow.beta(t + s, a, b)?);
        let mut rhs = flow.alpha(s, &at, &bt)?;
        rhs.extend(flow.beta(s, &at, &bt)?);
        let mut values = lhs.clone();
        values.extend_from_slice(&rhs);
        tracker.record(scaled_deviation(&lhs, &rhs), &p, &values);
    }
    let mut report = tracker.finish("parameter-cocycle", tol, grid.to_string());
    if flow.is_constant_beta() {
        report.notes.push("β is constant: α(·, ·, b) is a semigroup action for each b".into());
    }
    Ok(report)
}

/// Samples `α(0, a, b) = a` and `β(0, a, b) = b` over a grid in `(a, b)`.
pub fn param_flow_initial_check(flow: &ParamFlow, grid: &SamplingGrid, tol: f64) -> Result<VerificationReport> {
    check_axes(flow, grid, &[])?;
    let mut tracker = Tracker::new();
    for p in grid.points() {
        let (a, b) = split_point(flow, &p, 0);
        if !flow.in_domain(b) {
            tracker.skip();
            continue;
        }
        let mut img = flow.alpha(0.0, a, b)?;
        img.extend(flow.beta(0.0, a, b)?);
        tracker.record(scaled_deviation(&img, &p), &p, &img);
    }
    Ok(tracker.finish("parameter-initial", tol, grid.to_string()))
}

/// Samples `U_{a,b}(t, x) = U_{α(t,a,b), β(t,a,b)}(0, x)` over a grid in
/// `(t, x, a, b)`: advancing a member in time only moves its parameters.
///
/// `family(a, b)` returns the member as a map in `(t, x)`.
pub fn soliton_translation_check(
    flow: &ParamFlow,
    family: impl Fn(&[f64], &[f64]) -> Result<SmoothMap>,
    grid: &SamplingGrid,
    tol: f64,
) -> Result<VerificationReport> {
    check_axes(flow, grid, &["t", "x"])?;
    let mut tracker = Tracker::new();
    let mut cached: Option<(Vec<f64>, SmoothMap)> = None;
    for p in grid.points() {
        let (t, x) = (p[0], p[1]);
        let (a, b) = split_point(flow, &p, 2);
        if !flow.in_domain(b) {
            tracker.skip();
            continue;
        }
        // grid points vary fastest in the last axes, so members are rebuilt often;
        // the cache only saves work when (a, b) repeats
        let key = p[2..].to_vec();
        let member = match &cached {
            Some((k, m)) if *k == key => m.clone(),
            _ => {
                let m = family(a, b)?;
                cached = Some((key, m.clone()));
                m
            }
        };
        let moved = family(&flow.alpha(t, a, b)?, &flow.beta(t, a, b)?)?;
        let lhs = member.eval(&[t, x])?;
        let rhs = moved.eval(&[0.0, x])?;
        tracker.record(scaled_deviation(&lhs, &rhs), &p, &[lhs[0], rhs[0]]);
    }
    Ok(tracker.finish("soliton-translation", tol, grid.to_string()))
}

/// `K(t, x) = exp(−x²/(4t)) / √t`.
pub fn heat_kernel() -> SmoothMap {
    SmoothMap::parse(&["t", "x"], &["exp(-x^2/(4*t))/sqrt(t)"]).expect("valid map")
}

/// Heat-kernel family `V_τ = K(τ, ·)`, τ > 0, under the heat flow `U_t = U_xx`.
///
/// Checks that `K` solves the heat equation on the grid in `(t, x)`
/// (whose time axis must be positive), and that advancing `V_τ` by `s`
/// gives `V_{τ+s}` consistently: `s = 0` is the identity and two advances
/// compose additively. The parameter action `τ ↦ τ + s` only exists for
/// `s ≥ 0` on the family, so the flow is a semigroup, not a group.
pub fn heat_flow_demo(grid: &SamplingGrid, tol: f64) -> Result<VerificationReport> {
    if grid.dim() != 2 {
        return Err(Error::InvalidGrid(format!("expected axes (t, x), got {}", grid.dim())));
    }
    if !(grid.axes()[0].lo > 0.0) {
        return Err(Error::Precondition("the heat kernel needs t > 0".into()));
    }
    let k = heat_kernel();
    let pde = PdeResidual::parse("D(U,t) - D(U,x,x)", "U", &["t", "x"])?;
    let residual = residual_max(&pde, &k, grid)?;
    let advance = |s: f64, tau: f64| -> Result<f64> {
        if s < 0.0 || tau + s <= 0.0 {
            return Err(Error::Precondition(format!("cannot advance V_{tau} by {s}")));
        }
        Ok(tau + s)
    };
    let steps = [0.0, 0.25, 0.5, 1.0];
    let mut tracker = Tracker::new();
    tracker.record(residual, &[], &[residual]);
    for p in grid.points() {
        let (tau, x) = (p[0], p[1]);
        let v = k.eval_scalar(&[tau, x])?;
        let id = k.eval_scalar(&[advance(0.0, tau)?, x])?;
        tracker.record((id - v).abs(), &p, &[id, v]);
        for &s1 in &steps {
            for &s2 in &steps {
                let twice = k.eval_scalar(&[advance(s2, advance(s1, tau)?)?, x])?;
                let once = k.eval_scalar(&[advance(s1 + s2, tau)?, x])?;
                tracker.record((twice - once).abs() / (1.0 + once.abs()), &p, &[twice, once]);
            }
        }
    }
    let mut report = tracker.finish("heat-flow", tol, grid.to_string());
    report.notes.push(format!("heat residual of K: {residual:e}"));
    report
        .notes
        .push("τ ↦ τ + s is defined for s ≥ 0 only: V_τ has no preimage under advance by s ≥ τ".into());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gls::{composition_check, dichotomy_classify, identity_check, Classification};

    fn tx_grid() -> SamplingGrid {
        SamplingGrid::from_ranges(&[(0.0, 1.0, 5), (-5.0, 5.0, 5)]).unwrap()
    }

    #[test]
    fn soliton_center_values() {
        let u = burgers_soliton(0.0, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(u.eval_scalar(&[0.0, 0.0]).unwrap(), 1.0);
        let still = burgers_soliton(0.7, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(still.eval_scalar(&[0.0, 0.7]).unwrap(), 0.0);
        assert_eq!(still.eval_scalar(&[3.0, 0.7]).unwrap(), 0.0);
        assert!(burgers_soliton(0.0, 1.0, -1.0, 1.0).is_err());
        assert!(burgers_soliton(0.0, 1.0, 1.0, 0.0).is_err());
    }

    /// Hand-differentiated residual: with `k = √(c²+d)`, `ξ = x − x0 − ct`,
    /// `T = tanh(kξ/2μ)`, `S = 1 − T²`: `U_x = −k²S/2μ`, `U_t = −c U_x`,
    /// `U_xx = k³ T S / (2μ²)`.
    fn oracle_residual(x0: f64, c: f64, d: f64, mu: f64, t: f64, x: f64) -> f64 {
        let k = (c * c + d).sqrt();
        let th = (k / (2.0 * mu) * (x - x0 - c * t)).tanh();
        let s = 1.0 - th * th;
        let u = c - k * th;
        let ux = -k * k * s / (2.0 * mu);
        let uxx = k * k * k * th * s / (2.0 * mu * mu);
        -c * ux + u * ux - mu * uxx
    }

    #[test]
    fn soliton_solves_burgers() {
        let u = burgers_soliton(0.0, 1.0, 1.0, 0.5).unwrap();
        let r = burgers_residual(&u, 0.5, &tx_grid()).unwrap();
        assert!(r <= 1e-8, "{r}");
        for p in tx_grid().points() {
            assert!(oracle_residual(0.0, 1.0, 1.0, 0.5, p[0], p[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn residual_of_simple_functions() {
        let g = tx_grid();
        let constant = SmoothMap::parse(&["t", "x"], &["3"]).unwrap();
        assert_eq!(burgers_residual(&constant, 0.3, &g).unwrap(), 0.0);
        let linear = SmoothMap::parse(&["t", "x"], &["x"]).unwrap();
        assert_eq!(burgers_residual(&linear, 0.3, &g).unwrap(), 5.0);
        // wrong viscosity leaves a residual
        let u = burgers_soliton(0.0, 1.0, 1.0, 0.5).unwrap();
        assert!(burgers_residual(&u, 0.25, &g).unwrap() > 1e-2);
    }

    fn cocycle_grid() -> SamplingGrid {
        SamplingGrid::from_ranges(&[(0.0, 3.0, 4), (0.0, 2.0, 3), (-2.0, 2.0, 3), (-2.0, 2.0, 5), (-2.0, 2.0, 5)])
            .unwrap()
    }

    #[test]
    fn linear_flow_is_a_cocycle() {
        let r = param_flow_check(&burgers_flow(), &cocycle_grid(), 1e-12).unwrap();
        assert!(r.succeeded(), "{r:?}");
        assert!(r.grid.skipped > 0);
        let init = SamplingGrid::from_ranges(&[(-2.0, 2.0, 5), (-2.0, 2.0, 5), (-2.0, 2.0, 5)]).unwrap();
        let r0 = param_flow_initial_check(&burgers_flow(), &init, 1e-12).unwrap();
        assert_eq!(r0.max_deviation, 0.0);
    }

    #[test]
    fn general_beta_flows() {
        // a scalar ODE a' = b, b' = -b: α = a + b(1 − e^{−t}), β = b e^{−t}
        let alpha = "a + b*(1 - exp(-t))".parse().unwrap();
        let beta = "b*exp(-t)".parse().unwrap();
        let flow = ParamFlow::new(&["a"], &["b"], vec![alpha], vec![beta]).unwrap();
        assert!(!flow.is_constant_beta());
        assert!(flow.alpha_action(&[1.0]).is_err());
        let g = SamplingGrid::from_ranges(&[(0.0, 2.0, 5), (0.0, 1.5, 4), (-1.0, 1.0, 3), (-1.0, 1.0, 3)]).unwrap();
        assert!(param_flow_check(&flow, &g, 1e-12).unwrap().succeeded());
        // same α with constant β breaks the law
        let broken = ParamFlow::constant_beta(&["a"], &["b"], vec!["a + b*(1 - exp(-t))".parse().unwrap()]).unwrap();
        let r = param_flow_check(&broken, &g, 1e-6).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn alpha_is_a_group_like_semigroup_action() {
        let a = burgers_flow().alpha_action(&[1.0, 1.0]).unwrap();
        let g = SamplingGrid::linspace(-3.0, 3.0, 13).unwrap();
        assert!(identity_check(&a, &g, 1e-12).unwrap().succeeded());
        let pairs = [(0.0, 0.0), (0.5, 1.5), (2.0, 3.0)];
        assert!(composition_check(&a, &pairs, &g, 1e-12).unwrap().succeeded());
        let d = dichotomy_classify(&a, &[0.5, 1.0, 2.0], &g, 1e-12).unwrap();
        assert_eq!(d.classification, Classification::GroupLike);
        assert!(burgers_flow().alpha_action(&[0.0, -1.0]).is_err());
    }

    fn family(a: &[f64], b: &[f64]) -> Result<SmoothMap> {
        burgers_soliton(a[0], b[0], b[1], 0.5)
    }

    #[test]
    fn time_advance_moves_the_center() {
        let u = family(&[0.0], &[1.0, 1.0]).unwrap();
        let v = family(&[2.0], &[1.0, 1.0]).unwrap();
        for x in [-4.0, -1.0, 0.0, 1.5, 3.0] {
            let dev: f64 = u.eval_scalar(&[2.0, x]).unwrap() - v.eval_scalar::<f64>(&[0.0, x]).unwrap();
            assert!(dev.abs() <= 1e-12);
        }
        let g = SamplingGrid::from_ranges(&[(0.0, 2.0, 5), (-5.0, 5.0, 11), (-1.0, 1.0, 3), (-1.0, 1.0, 3), (-0.5, 1.0, 4)])
            .unwrap();
        let r = soliton_translation_check(&burgers_flow(), family, &g, 1e-12).unwrap();
        assert!(r.succeeded(), "{r:?}");
    }

    #[test]
    fn wrong_speed_fails_translation() {
        let alpha = "x0 + 2*c*t".parse().unwrap();
        let flow = ParamFlow::constant_beta(&["x0"], &["c", "d"], vec![alpha])
            .unwrap()
            .with_domain(|b| b[0] * b[0] + b[1] > 0.0);
        let g = SamplingGrid::from_ranges(&[(0.5, 1.0, 2), (-2.0, 2.0, 5), (0.0, 0.0, 1), (1.0, 1.0, 1), (1.0, 1.0, 1)])
            .unwrap();
        assert!(!soliton_translation_check(&flow, family, &g, 1e-6).unwrap().passed);
    }

    #[test]
    fn heat_kernel_semigroup() {
        let k = heat_kernel();
        let pde = PdeResidual::parse("D(U,t) - D(U,x,x)", "U", &["t", "x"]).unwrap();
        let at = SamplingGrid::from_ranges(&[(1.0, 1.0, 1), (0.0, 0.0, 1)]).unwrap();
        assert!(residual_max(&pde, &k, &at).unwrap() <= 1e-12);
        let g = SamplingGrid::from_ranges(&[(0.5, 2.0, 7), (-3.0, 3.0, 13)]).unwrap();
        let r = heat_flow_demo(&g, 1e-10).unwrap();
        assert!(r.succeeded(), "{r:?}");
        let bad = SamplingGrid::from_ranges(&[(0.0, 2.0, 3), (-1.0, 1.0, 3)]).unwrap();
        assert!(heat_flow_demo(&bad, 1e-10).is_err());
    }

    /// Independent check that time advance is the heat semigroup: the
    /// Gaussian convolution `G_s * V_τ` (trapezoid rule) equals `V_{τ+s}`.
    #[test]
    fn convolution_reproduces_advance() {
        let k = heat_kernel();
        let (tau, s) = (0.5, 0.75);
        let (lo, hi, n) = (-30.0, 30.0, 24_001);
        let h = (hi - lo) / (n - 1) as f64;
        for x in [-1.5, 0.0, 0.4, 2.0] {
            let mut acc = 0.0;
            for i in 0..n {
                let y = lo + h * i as f64;
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let g = (-(x - y) * (x - y) / (4.0 * s)).exp() / (4.0 * std::f64::consts::PI * s).sqrt();
                acc += w * g * k.eval_scalar(&[tau, y]).unwrap();
            }
            let want = k.eval_scalar(&[tau + s, x]).unwrap();
            assert!((acc * h - want).abs() < 1e-10, "{x}: {} vs {want}", acc * h);
        }
    }
}
