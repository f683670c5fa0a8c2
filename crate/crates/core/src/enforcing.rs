//! Concrete singular actions and the ODEs they satisfy.
//!
//! The actions here are continuous in time but not differentiable at
//! `t = 0`; each is smooth for `t > 0`, and for fixed initial value `y` the
//! curve `t ↦ H(t, y)` solves a singular non-autonomous ODE. The residual
//! checks compute `∂H/∂t` symbolically, so a correct branch yields a
//! residual at rounding level.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gls::{StateMap, TimeAction, TimeDomain};
use crate::numeric::{bisect, golden_min};
use crate::reduction::OdeSystem;
use crate::scalar::{max_norm_diff, scaled_deviation, Scalar};
use crate::symbolic::{Expr, SmoothMap};
use crate::verify::{GridSummary, SamplingGrid, Tracker, VerificationReport, Witness};

/// Horizon over which a mediator's derivative is checked at construction.
pub const DEFAULT_HORIZON: f64 = 10.0;

/// Smallest time used by the residual checks: the mediators are singular at 0.
pub const RESIDUAL_T_MIN: f64 = 1e-3;

/// A time reparametrization `g` with `g(0) = 0`, `g(1) = 1` and `g′ ≠ 0` on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MediatorFunction {
    g: Expr,
    dg: Expr,
}

impl MediatorFunction {
    /// Validates `g`, an expression in `t`, on `(0, DEFAULT_HORIZON]`.
    pub fn new(g: Expr) -> Result<Self> {
        if let Some(v) = g.free_vars().into_iter().find(|v| v != "t") {
            return Err(Error::UnboundVariable(v));
        }
        let m = MediatorFunction { dg: g.diff("t"), g };
        let (g0, g1) = (m.value(0.0f64)?, m.value(1.0f64)?);
        if g0.abs() > 1e-12 || (g1 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mediator must satisfy g(0) = 0 and g(1) = 1, got {g0} and {g1}"
            )));
        }
        m.check_horizon(DEFAULT_HORIZON, 1000)?;
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<Self> {
        MediatorFunction::new(text.parse()?)
    }

    /// `g(t) = √t`.
    pub fn sqrt() -> Self {
        MediatorFunction::parse("sqrt(t)").expect("sqrt mediator is valid")
    }

    /// Samples `g′` at `n` equispaced times in `(0, horizon]`.
    ///
    /// A sign change between neighbouring samples counts as a zero.
    pub fn check_horizon(&self, horizon: f64, n: usize) -> Result<()> {
        let mut prev: Option<(f64, f64)> = None;
        for k in 1..=n.max(1) {
            let t = horizon * k as f64 / n.max(1) as f64;
            let d = self.derivative(t)?;
            if d == 0.0 || !d.is_finite() {
                return Err(Error::InvalidParameter(format!("g'({t}) = {d}")));
            }
            if let Some((s, dp)) = prev {
                if dp.signum() != d.signum() {
                    return Err(Error::InvalidParameter(format!("g' changes sign in [{s}, {t}]")));
                }
            }
            prev = Some((t, d));
        }
        Ok(())
    }

    pub fn expr(&self) -> &Expr {
        &self.g
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.dg
    }

    pub fn value<T: Scalar>(&self, t: T) -> Result<T> {
        self.g.eval(&[("t", t)])
    }

    pub fn derivative<T: Scalar>(&self, t: T) -> Result<T> {
        self.dg.eval(&[("t", t)])
    }
}

impl Default for MediatorFunction {
    fn default() -> Self {
        MediatorFunction::sqrt()
    }
}

/// Sign in front of the radical in the explicit ODEs of the square-root action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// active where `1 + 2√t·y ≤ 0`
    Plus,
    /// active where `1 + 2√t·y ≥ 0`
    Minus,
}

impl Branch {
    pub fn active<T: Scalar>(self, t: T, y: T) -> bool {
        let c = T::one() + T::of(2.0) * t.sqrt() * y;
        match self {
            Branch::Plus => c <= T::zero(),
            Branch::Minus => c >= T::zero(),
        }
    }

    /// The branch whose predicate holds at `(t, y)` (minus on the overlap).
    pub fn select<T: Scalar>(t: T, y: T) -> Branch {
        if Branch::Minus.active(t, y) {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }

    fn sign<T: Scalar>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Branches of the explicit ODEs of the milder action `y + t·y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MilderBranch {
    /// `Y′ = 2Y² / (1 + 2tY + √(1 + 4tY))`, active where `1 + 2ty ≥ 0`
    Regular,
    /// `Y′ = (1 + 2tY + √(1 + 4tY)) / (2t²)`, active where `1 + 2ty ≤ 0`
    Singular,
}

impl MilderBranch {
    pub fn active<T: Scalar>(self, t: T, y: T) -> bool {
        let c = T::one() + T::of(2.0) * t * y;
        match self {
            MilderBranch::Regular => c >= T::zero(),
            MilderBranch::Singular => c <= T::zero(),
        }
    }

    pub fn select<T: Scalar>(t: T, y: T) -> MilderBranch {
        if MilderBranch::Regular.active(t, y) {
            MilderBranch::Regular
        } else {
            MilderBranch::Singular
        }
    }
}

fn sqrt_map() -> &'static (SmoothMap, SmoothMap) {
    static MAP: OnceLock<(SmoothMap, SmoothMap)> = OnceLock::new();
    MAP.get_or_init(|| {
        let m = SmoothMap::parse(&["t", "y"], &["y + sqrt(t)*y^2"]).expect("valid map");
        let dt = m.partial("t");
        (m, dt)
    })
}

fn milder_map() -> &'static (SmoothMap, SmoothMap) {
    static MAP: OnceLock<(SmoothMap, SmoothMap)> = OnceLock::new();
    MAP.get_or_init(|| {
        let m = SmoothMap::parse(&["t", "y"], &["y + t*y^2"]).expect("valid map");
        let dt = m.partial("t");
        (m, dt)
    })
}

/// `H(t, y) = y + √t·y²` on `[0, ∞) × ℝ`; not injective for any `t > 0`.
pub fn sqrt_action<T: Scalar>() -> TimeAction<T> {
    TimeAction::symbolic("sqrt-action", TimeDomain::NonNegative, sqrt_map().0.clone())
        .expect("valid action")
}

/// `H(t, y) = y + t·y²` on `ℝ × ℝ`.
pub fn milder_action<T: Scalar>() -> TimeAction<T> {
    TimeAction::symbolic("milder-action", TimeDomain::Full, milder_map().0.clone()).expect("valid action")
}

/// `Y(t) = (3t + y³)^(1/3)`, the flow of `Y′ = 1/Y²`: a group action of ℝ.
pub fn cuberoot_group_action<T: Scalar>() -> TimeAction<T> {
    TimeAction::parse_1d("cuberoot-action", TimeDomain::Full, "cbrt(3*t + y^3)").expect("valid action")
}

/// The explicit ODE `H′ = (1 + 2√t·H ± √(1 + 4√t·H)) / (4t√t)` in `(t, H)`.
///
/// The square-root action solves it with the sign of `branch` where that
/// branch is active. The system is singular at `t = 0`.
pub fn sqrt_branch_system<T: Scalar>(branch: Branch) -> OdeSystem<T> {
    let sign = match branch {
        Branch::Plus => "+",
        Branch::Minus => "-",
    };
    let rhs = format!("(1 + 2*sqrt(t)*H {sign} sqrt(1 + 4*sqrt(t)*H))/(4*t*sqrt(t))");
    let map = SmoothMap::parse(&["t", "H"], &[&rhs]).expect("valid map");
    OdeSystem::nonautonomous(format!("sqrt-action ODE ({branch:?} branch)"), map)
        .expect("arity")
        .with_validity(|t: T, y: &[T]| t > T::zero() && T::one() + T::of(4.0) * t.sqrt() * y[0] >= T::zero())
}

/// `Y′ = 1/Y²`, whose flow is the cube-root action.
pub fn cuberoot_system<T: Scalar>() -> OdeSystem<T> {
    OdeSystem::autonomous("cube-root ODE", SmoothMap::parse(&["y"], &["1/y^2"]).expect("valid map"))
        .expect("arity")
        .with_validity(|_, y: &[T]| y[0] != T::zero())
}

/// The deformation `H(t, y) = (1 − g(t))·y + g(t)·f(y)` of the identity into `f`.
///
/// The time variable is named `t` unless `f` already uses that name, in
/// which case underscores are appended.
pub fn homotopy_action<T: Scalar>(f: &SmoothMap, g: &MediatorFunction) -> Result<TimeAction<T>> {
    homotopy_map(f, g).and_then(|m| TimeAction::symbolic("homotopy-action", TimeDomain::NonNegative, m))
}

fn homotopy_map(f: &SmoothMap, g: &MediatorFunction) -> Result<SmoothMap> {
    if f.input_arity() != f.output_arity() {
        return Err(Error::Arity {
            expected: f.input_arity(),
            actual: f.output_arity(),
        });
    }
    let mut tv = String::from("t");
    while f.input_index(&tv).is_some() {
        tv.push('_');
    }
    let gt = g.expr().substitute("t", &Expr::var(&tv));
    let outputs = f
        .inputs()
        .iter()
        .zip(f.outputs())
        .map(|(y, fy)| {
            Expr::add(
                Expr::mul(Expr::sub(Expr::constant(1.0), gt.clone()), Expr::var(y)),
                Expr::mul(gt.clone(), fy.clone()),
            )
        })
        .collect();
    let mut inputs = vec![tv];
    inputs.extend(f.inputs().iter().cloned());
    SmoothMap::new(inputs, outputs)
}

fn time_state_grid(grid: &SamplingGrid) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::InvalidGrid("expected a (t, y) grid".into()));
    }
    if grid.axes()[0].lo < 0.0 {
        return Err(Error::InvalidGrid("times must be nonnegative".into()));
    }
    Ok(())
}

/// Compares the square-root action with `K(s, y) = y + s·y²` at `s = √t`.
///
/// `K` is smooth in `(s, y)`, so the singularity of `H` at `t = 0` is
/// entirely carried by the reparametrization `s = √t`.
pub fn k_action_relation_check(grid: &SamplingGrid, tol: f64) -> Result<VerificationReport> {
    time_state_grid(grid)?;
    let h = sqrt_action::<f64>();
    let k = SmoothMap::parse(&["s", "y"], &["y + s*y^2"])?;
    let mut tracker = Tracker::new();
    for p in grid.points() {
        let (t, y) = (p[0], p[1]);
        let hv = h.apply(t, &[y])?;
        let kv = k.eval(&[t.sqrt(), y])?;
        tracker.record(scaled_deviation(&hv, &kv), &p, &[hv[0], kv[0]]);
    }
    Ok(tracker.finish("k-action-relation", tol, grid.to_string()))
}

/// `|∂H/∂t − RHS|` for the explicit ODE
/// `∂H/∂t = (1 + 2√t·H ± √(1 + 4√t·H)) / (4t√t)` of the square-root action.
pub fn ode_residual_explicit<T: Scalar>(t: T, y: T, branch: Branch) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let (h, ht) = sqrt_map();
    let hv = h.eval_scalar(&[t, y])?;
    let st = t.sqrt();
    let four = T::of(4.0);
    let rad = T::one() + four * st * hv;
    if rad < T::zero() {
        return Err(Error::domain("sqrt", rad.as_f64()));
    }
    if !branch.active(t, y) {
        return Err(Error::BranchMismatch(format!(
            "{branch:?} branch requires 1 + 2*sqrt(t)*y {} 0, violated at t = {t}, y = {y}",
            if branch == Branch::Plus { "<=" } else { ">=" }
        )));
    }
    let lhs = ht.eval_scalar(&[t, y])?;
    let rhs = (T::one() + T::of(2.0) * st * hv + branch.sign::<T>() * rad.sqrt()) / (four * t * st);
    Ok((lhs - rhs).abs())
}

/// `|∂H/∂t − RHS|` for the explicit ODEs of the milder action `y + t·y²`.
pub fn ode_residual_milder<T: Scalar>(t: T, y: T, branch: MilderBranch) -> Result<T> {
    let (h, ht) = milder_map();
    let hv = h.eval_scalar(&[t, y])?;
    let two = T::of(2.0);
    let rad = T::one() + T::of(4.0) * t * hv;
    if rad < T::zero() {
        return Err(Error::domain("sqrt", rad.as_f64()));
    }
    if !branch.active(t, y) {
        return Err(Error::BranchMismatch(format!(
            "{branch:?} branch inactive at t = {t}, y = {y}"
        )));
    }
    let base = T::one() + two * t * hv + rad.sqrt();
    let rhs = match branch {
        MilderBranch::Regular => two * hv * hv / base,
        MilderBranch::Singular => {
            if t == T::zero() {
                return Err(Error::InvalidParameter("the singular branch is not posed at t = 0".into()));
            }
            base / (two * t * t)
        }
    };
    let lhs = ht.eval_scalar(&[t, y])?;
    Ok((lhs - rhs).abs())
}

/// Residuals of the implicit ODE satisfied by a homotopy action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomotopyResidual {
    /// `‖(1 − g)Y′ + g′Y − g′·f((g′Y − gY′)/g′)‖`
    pub ode: f64,
    /// `‖(g′H − gH_t)/g′ − y‖`
    pub recovered_state: f64,
    /// `‖((1 − g)H_t + g′H)/g′ − f(y)‖`
    pub recovered_image: f64,
}

impl HomotopyResidual {
    pub fn max(&self) -> f64 {
        self.ode.max(self.recovered_state).max(self.recovered_image)
    }
}

/// Evaluates the implicit ODE `(1 − g)Y′ + g′Y = g′·f((g′Y − gY′)/g′)`
/// along `Y(t) = H(t, y)` for the homotopy action of `f` mediated by `g`,
/// together with the formulas recovering `y` and `f(y)` from `(H, H_t)`.
pub fn ode_residual_homotopy<T: Scalar>(
    f: &SmoothMap,
    g: &MediatorFunction,
    t: T,
    y: &[T],
) -> Result<HomotopyResidual> {
    if !(t > T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let map = homotopy_map(f, g)?;
    if y.len() != f.input_arity() {
        return Err(Error::Arity {
            expected: f.input_arity(),
            actual: y.len(),
        });
    }
    let dg = g.derivative(t)?;
    if dg == T::zero() || !dg.is_finite() {
        return Err(Error::Precondition(format!("g'({t}) = {dg}")));
    }
    let gv = g.value(t)?;
    let mut p = vec![t];
    p.extend_from_slice(y);
    let hv = map.eval(&p)?;
    let ht = map.partial(&map.inputs()[0]).eval(&p)?;
    let one = T::one();
    let lhs: Vec<T> = hv.iter().zip(&ht).map(|(&h, &d)| (one - gv) * d + dg * h).collect();
    let arg: Vec<T> = hv.iter().zip(&ht).map(|(&h, &d)| (dg * h - gv * d) / dg).collect();
    let rhs: Vec<T> = f.eval(&arg)?.into_iter().map(|v| dg * v).collect();
    let image: Vec<T> = hv.iter().zip(&ht).map(|(&h, &d)| ((one - gv) * d + dg * h) / dg).collect();
    Ok(HomotopyResidual {
        ode: max_norm_diff(&lhs, &rhs).as_f64(),
        recovered_state: max_norm_diff(&arg, y).as_f64(),
        recovered_image: max_norm_diff(&image, &f.eval(y)?).as_f64(),
    })
}

/// Checks `a(ε, y) → y` along a decreasing sequence `ε_k ↘ 0`.
///
/// The deviation `‖a(ε, y) − y‖` must not increase (beyond rounding) and
/// its final value, scaled by `1 + ‖y‖`, must be within `tol`. A non-monotone sequence marks the
/// report inconclusive.
pub fn limit_ic_check<T: Scalar>(a: &TimeAction<T>, y: &[T], eps: &[T], tol: T) -> Result<VerificationReport> {
    if eps.is_empty() || eps.windows(2).any(|w| !(w[1] < w[0])) || eps.iter().any(|e| !(*e > T::zero())) {
        return Err(Error::Precondition("epsilon sequence must be positive and strictly decreasing".into()));
    }
    if eps[eps.len() - 1].as_f64() >= 1e-8 {
        return Err(Error::Precondition("epsilon sequence must reach below 1e-8".into()));
    }
    let mut devs = Vec::with_capacity(eps.len());
    for &e in eps {
        devs.push(max_norm_diff(&a.apply(e, y)?, y).as_f64());
    }
    let slack = 8.0 * T::epsilon().as_f64() * (1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs())));
    let monotone = devs.windows(2).all(|w| w[1] <= w[0] + slack);
    let scale = 1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let last = devs[devs.len() - 1] / scale;
    let mut report = VerificationReport::new(
        "limit-initial-condition",
        last,
        tol.as_f64(),
        GridSummary {
            description: format!("{} times from {:e} down to {:e}", eps.len(), eps[0].as_f64(), eps[eps.len() - 1].as_f64()),
            evaluated: eps.len(),
            skipped: 0,
        },
    );
    if !monotone {
        report.inconclusive = true;
        report.notes.push("deviation is not monotone in epsilon".into());
    }
    if !report.succeeded() {
        let y64: Vec<f64> = y.iter().map(|v| v.as_f64()).collect();
        for (e, d) in eps.iter().zip(&devs) {
            let mut point = vec![e.as_f64()];
            point.extend_from_slice(&y64);
            report.witnesses.push(Witness::new(point, vec![*d], "deviation from the initial value"));
        }
    }
    Ok(report)
}

/// One-sided difference quotients `(H(ε, y) − H(0, y))/ε` of an action.
///
/// For the square-root action these grow like `y²/√ε`, so `H` is not `C¹`
/// at `t = 0`.
pub fn difference_quotients<T: Scalar>(a: &TimeAction<T>, y: &[T], eps: &[T]) -> Result<Vec<(T, T)>> {
    let h0 = a.apply(T::zero(), y)?;
    eps.iter()
        .map(|&e| {
            let he = a.apply(e, y)?;
            Ok((e, max_norm_diff(&he, &h0) / e))
        })
        .collect()
}

/// Whether `a(t, ·)` is judged a diffeomorphism of the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiffeoClass {
    Diffeo,
    NotDiffeo,
    /// the action could not be evaluated at this time
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffeoSample {
    pub t: f64,
    pub class: DiffeoClass,
    /// refined extrema of `∂a/∂y` over the y-range
    pub derivative_min: f64,
    pub derivative_max: f64,
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffeoTimeSet {
    pub samples: Vec<DiffeoSample>,
    /// times where the classification changes, located by bisection
    pub thresholds: Vec<f64>,
    pub notes: Vec<String>,
}

/// Bisection tolerance for threshold times.
pub const THRESHOLD_TOL: f64 = 1e-7;

/// Classifies `a(t, ·)` for each `t` of a 1-D time grid.
///
/// `a(t, ·)` counts as a diffeomorphism when `∂a/∂y` keeps a strict sign on
/// the y-range, with the extrema of `∂a/∂y` refined by golden-section search
/// around the best grid nodes, and `|a|` grows without bound past both ends
/// of the range. Between neighbouring grid times with different classes the
/// switching time is located by bisection to [`THRESHOLD_TOL`].
pub fn diffeo_time_set<T: Scalar>(
    a: &TimeAction<T>,
    t_grid: &SamplingGrid,
    y_grid: &SamplingGrid,
) -> Result<DiffeoTimeSet> {
    if a.dim() != 1 || t_grid.dim() != 1 || y_grid.dim() != 1 {
        return Err(Error::Precondition("diffeomorphism classification needs a 1-D action and 1-D grids".into()));
    }
    let ys: Vec<T> = y_grid.axes()[0].values().into_iter().map(T::of).collect();
    let mut samples = Vec::new();
    for t in t_grid.axes()[0].values() {
        samples.push(classify_time(a, T::of(t), &ys));
    }
    let mut thresholds = Vec::new();
    for w in samples.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        if l.class == DiffeoClass::Undetermined || r.class == DiffeoClass::Undetermined || l.class == r.class {
            continue;
        }
        let status = |t: T| {
            let s = classify_time(a, t, &ys);
            Ok(if s.class == l.class { -T::one() } else { T::one() })
        };
        thresholds.push(bisect(status, T::of(l.t), T::of(r.t), T::of(THRESHOLD_TOL))?.as_f64());
    }
    Ok(DiffeoTimeSet {
        samples,
        thresholds,
        notes: vec![format!("y-range {y_grid}; thresholds bisected to {THRESHOLD_TOL:e} in t")],
    })
}

fn classify_time<T: Scalar>(a: &TimeAction<T>, t: T, ys: &[T]) -> DiffeoSample {
    let slice = a.at(t);
    let d = |y: T| slice.column(&[y], 0).map(|c| c[0]);
    let undetermined = DiffeoSample {
        t: t.as_f64(),
        class: DiffeoClass::Undetermined,
        derivative_min: f64::NAN,
        derivative_max: f64::NAN,
        unbounded: false,
    };
    let Ok(ds) = ys.iter().map(|&y| d(y)).collect::<Result<Vec<T>>>() else {
        return undetermined;
    };
    let refine = |sign: T| -> Result<T> {
        let k = (0..ds.len())
            .min_by(|&i, &j| (sign * ds[i]).partial_cmp(&(sign * ds[j])).unwrap())
            .unwrap_or(0);
        let lo = ys[k.saturating_sub(1)];
        let hi = ys[(k + 1).min(ys.len() - 1)];
        let (_, v) = golden_min(|y| d(y).map(|v| sign * v), lo, hi, T::of(1e-10) * (T::one() + hi.abs()))?;
        Ok(sign * v.min(sign * ds[k]))
    };
    let (Ok(dmin), Ok(dmax)) = (refine(T::one()), refine(-T::one())) else {
        return undetermined;
    };
    let strict = dmin > T::zero() || dmax < T::zero();
    let unbounded = unbounded_at_ends(&slice, ys);
    DiffeoSample {
        t: t.as_f64(),
        class: if strict && unbounded {
            DiffeoClass::Diffeo
        } else {
            DiffeoClass::NotDiffeo
        },
        derivative_min: dmin.as_f64(),
        derivative_max: dmax.as_f64(),
        unbounded,
    }
}

/// `|m|` keeps growing when the ends of the range are pushed out by powers of ten.
fn unbounded_at_ends<T: Scalar, M: StateMap<T>>(m: &M, ys: &[T]) -> bool {
    let (lo, hi) = (ys[0], ys[ys.len() - 1]);
    let mid = (lo + hi) / T::of(2.0);
    [lo, hi].iter().all(|&e| {
        let far = |k: i32| mid + (e - mid) * T::of(10f64.powi(k));
        match (m.apply(&[far(2)]), m.apply(&[far(4)])) {
            (Ok(near), Ok(farther)) => farther[0].abs() > T::of(3.0) * near[0].abs(),
            _ => false,
        }
    })
}
