use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::flow::{integrate_flow, FlowSettings, OdeKind, OdeSystem};
use crate::error::{Error, Result};
use crate::gls::{TimeAction, TimeDomain};
use crate::scalar::{scaled_deviation, Scalar};
use crate::symbolic::SmoothMap;
use crate::verify::{SamplingGrid, Tracker, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvolutionKind {
    /// `s ↦ E(s)`, for autonomous systems
    OneTime,
    /// `(t0, t) ↦ E(t0, t)`, for non-autonomous systems
    TwoTime,
}

impl EvolutionKind {
    pub fn time_args(self) -> usize {
        match self {
            EvolutionKind::OneTime => 1,
            EvolutionKind::TwoTime => 2,
        }
    }
}

type OpFn<T> = Arc<dyn Fn(&[T], &[T]) -> Result<Vec<T>> + Send + Sync>;
type OpPredicate<T> = Arc<dyn Fn(&[T], &[T]) -> bool + Send + Sync>;

#[derive(Clone)]
enum Backing<T: Scalar> {
    ClosedForm(SmoothMap),
    Builtin(OpFn<T>),
    NumericFlow { sys: OdeSystem<T>, steps: usize },
}

/// The solution operator of an ODE system, `E(s)` or `E(t0, t)`.
///
/// Time arguments are passed as a slice: `[s]` for one-time operators and
/// `[t0, t]` for two-time operators.
#[derive(Clone)]
pub struct EvolutionOp<T: Scalar = f64> {
    name: String,
    kind: EvolutionKind,
    dim: usize,
    time_domain: TimeDomain,
    backing: Backing<T>,
    validity: Option<OpPredicate<T>>,
}

impl<T: Scalar> fmt::Debug for EvolutionOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let backing = match &self.backing {
            Backing::ClosedForm(m) => format!("closed form {m:?}"),
            Backing::Builtin(_) => "built-in".to_string(),
            Backing::NumericFlow { sys, steps } => format!("RK4 flow of `{}` ({steps} steps)", sys.name()),
        };
        f.debug_struct("EvolutionOp")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("dim", &self.dim)
            .field("time_domain", &self.time_domain)
            .field("backing", &backing)
            .finish()
    }
}

impl<T: Scalar> EvolutionOp<T> {
    /// Closed form whose leading inputs are the time arguments.
    pub fn closed_form(
        name: impl Into<String>,
        kind: EvolutionKind,
        time_domain: TimeDomain,
        map: SmoothMap,
    ) -> Result<Self> {
        let k = kind.time_args();
        if map.input_arity() != map.output_arity() + k {
            return Err(Error::Arity {
                expected: map.output_arity() + k,
                actual: map.input_arity(),
            });
        }
        Ok(EvolutionOp {
            name: name.into(),
            kind,
            dim: map.output_arity(),
            time_domain,
            backing: Backing::ClosedForm(map),
            validity: None,
        })
    }

    pub fn builtin(
        name: impl Into<String>,
        kind: EvolutionKind,
        dim: usize,
        time_domain: TimeDomain,
        f: impl Fn(&[T], &[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Self {
        EvolutionOp {
            name: name.into(),
            kind,
            dim,
            time_domain,
            backing: Backing::Builtin(Arc::new(f)),
            validity: None,
        }
    }

    /// The RK4 flow of `sys` with `steps` uniform steps per evaluation:
    /// one-time for autonomous systems, two-time otherwise.
    pub fn numeric_flow(sys: OdeSystem<T>, steps: usize) -> Self {
        let kind = match sys.kind() {
            OdeKind::Autonomous => EvolutionKind::OneTime,
            OdeKind::Nonautonomous => EvolutionKind::TwoTime,
        };
        EvolutionOp {
            name: format!("flow of {}", sys.name()),
            kind,
            dim: sys.dim(),
            time_domain: TimeDomain::Full,
            backing: Backing::NumericFlow { sys, steps },
            validity: None,
        }
    }

    pub fn with_validity(mut self, pred: impl Fn(&[T], &[T]) -> bool + Send + Sync + 'static) -> Self {
        self.validity = Some(Arc::new(pred));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> EvolutionKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time_domain(&self) -> TimeDomain {
        self.time_domain
    }

    pub fn apply(&self, times: &[T], y: &[T]) -> Result<Vec<T>> {
        if times.len() != self.kind.time_args() {
            return Err(Error::Arity {
                expected: self.kind.time_args(),
                actual: times.len(),
            });
        }
        if y.len() != self.dim {
            return Err(Error::Arity {
                expected: self.dim,
                actual: y.len(),
            });
        }
        if let Some(t) = times.iter().find(|t| !self.time_domain.contains(**t)) {
            return Err(Error::domain("time", t.as_f64()));
        }
        match &self.backing {
            Backing::ClosedForm(m) => {
                let mut p = times.to_vec();
                p.extend_from_slice(y);
                m.eval(&p)
            }
            Backing::Builtin(f) => f(times, y),
            Backing::NumericFlow { sys, steps } => {
                let (t0, t1) = match self.kind {
                    EvolutionKind::OneTime => (T::zero(), times[0]),
                    EvolutionKind::TwoTime => (times[0], times[1]),
                };
                if t0 == t1 {
                    return Ok(y.to_vec());
                }
                let tr = integrate_flow(sys, t0, y, t1, &FlowSettings::new(*steps, 0.0))?;
                Ok(tr.last().1.to_vec())
            }
        }
    }

    pub fn one(&self, s: T, y: &[T]) -> Result<Vec<T>> {
        self.apply(&[s], y)
    }

    pub fn two(&self, t0: T, t: T, y: &[T]) -> Result<Vec<T>> {
        self.apply(&[t0, t], y)
    }

    pub fn is_valid(&self, times: &[T], y: &[T]) -> bool {
        times.len() == self.kind.time_args()
            && times.iter().all(|t| self.time_domain.contains(*t))
            && self.validity.as_ref().is_none_or(|p| p(times, y))
    }

    /// A one-time operator as the time action `(s, y) ↦ E(s)(y)`.
    pub fn as_action(&self) -> Result<TimeAction<T>> {
        if self.kind != EvolutionKind::OneTime {
            return Err(Error::Precondition("only one-time operators are time actions".into()));
        }
        let (op, check) = (self.clone(), self.clone());
        Ok(
            TimeAction::from_fn(self.name.clone(), self.dim, self.time_domain, move |s, y| op.one(s, y))
                .with_validity(move |s, y| check.is_valid(&[s], y)),
        )
    }
}

/// `E_A(s)(τ, y) = (τ + s, E(τ, τ + s)(y))`, one dimension up.
pub fn autonomous_from_two_time<T: Scalar>(two: &EvolutionOp<T>) -> Result<EvolutionOp<T>> {
    if two.kind != EvolutionKind::TwoTime {
        return Err(Error::Precondition("expected a two-time operator".into()));
    }
    let (op, check) = (two.clone(), two.clone());
    Ok(EvolutionOp::builtin(
        format!("{} (autonomous)", two.name),
        EvolutionKind::OneTime,
        two.dim + 1,
        two.time_domain,
        move |s: &[T], x: &[T]| {
            let (tau, s) = (x[0], s[0]);
            let mut out = vec![tau + s];
            out.extend(op.two(tau, tau + s, &x[1..])?);
            Ok(out)
        },
    )
    .with_validity(move |s, x| check.is_valid(&[x[0], x[0] + s[0]], &x[1..])))
}

/// The bounded root `y*` of `y* + √t·y*² = y`, i.e. `2y / (1 + √(1 + 4√t·y))`.
///
/// This is the root that tends to `y` as `t ↘ 0`; the other root escapes to −∞.
pub fn ystar_branch<T: Scalar>(t: T, y: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::domain("time", t.as_f64()));
    }
    let rad = T::one() + T::of(4.0) * t.sqrt() * y;
    if rad < T::zero() {
        return Err(Error::domain("sqrt", rad.as_f64()));
    }
    Ok(T::of(2.0) * y / (T::one() + rad.sqrt()))
}

/// `E(t, s)(y) = E(0, s)(y*)` for the square-root action, with `y*` from [`ystar_branch`].
pub fn gls_two_time<T: Scalar>(t: T, s: T, y: T) -> Result<T> {
    if !(s >= T::zero()) {
        return Err(Error::domain("time", s.as_f64()));
    }
    let ys = ystar_branch(t, y)?;
    Ok(ys + s.sqrt() * ys * ys)
}

/// The two-time operator of the square-root action.
///
/// Valid where `1 + 4√t0·y ≥ 0` and the image stays on the bounded branch
/// at the final time, `1 + 2√t·y* ≥ 0`; off that set the composition law
/// picks up the other root.
pub fn gls_evolution<T: Scalar>() -> EvolutionOp<T> {
    EvolutionOp::builtin(
        "sqrt-action evolution",
        EvolutionKind::TwoTime,
        1,
        TimeDomain::NonNegative,
        |t: &[T], y: &[T]| Ok(vec![gls_two_time(t[0], t[1], y[0])?]),
    )
    .with_validity(|t: &[T], y: &[T]| match ystar_branch(t[0], y[0]) {
        Ok(ys) => T::one() + T::of(2.0) * t[1].sqrt() * ys >= T::zero(),
        Err(_) => false,
    })
}

/// `E_A(s)(τ, y) = (τ + s, E(τ, τ + s)(y))` for the square-root action.
pub fn gls_autonomous<T: Scalar>() -> EvolutionOp<T> {
    autonomous_from_two_time(&gls_evolution()).expect("two-time operator")
}

/// `E(t0, t)(y) = t² − t0² + y`, the evolution of `Y′ = 2t`.
pub fn quadratic_two_time<T: Scalar>() -> EvolutionOp<T> {
    let m = SmoothMap::parse(&["t0", "t", "y"], &["t^2 - t0^2 + y"]).expect("valid map");
    EvolutionOp::closed_form("quadratic evolution", EvolutionKind::TwoTime, TimeDomain::Full, m).expect("arity")
}

/// `E_A(s)(τ, y) = (τ + s, s² + 2sτ + y)`.
pub fn quadratic_autonomous<T: Scalar>() -> EvolutionOp<T> {
    let m = SmoothMap::parse(&["s", "tau", "y"], &["tau + s", "s^2 + 2*s*tau + y"]).expect("valid map");
    EvolutionOp::closed_form(
        "quadratic evolution (autonomous)",
        EvolutionKind::OneTime,
        TimeDomain::Full,
        m,
    )
    .expect("arity")
}

/// All ordered pairs drawn from `vals`.
pub fn time_pairs<T: Copy>(vals: &[T]) -> Vec<(T, T)> {
    vals.iter().flat_map(|&a| vals.iter().map(move |&b| (a, b))).collect()
}

/// All ordered triples drawn from `vals`.
pub fn time_triples<T: Copy>(vals: &[T]) -> Vec<(T, T, T)> {
    time_pairs(vals)
        .into_iter()
        .flat_map(|(a, b)| vals.iter().map(move |&c| (a, b, c)))
        .collect()
}

fn f64s<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

fn require(op: &EvolutionOp<impl Scalar>, kind: EvolutionKind) -> Result<()> {
    if op.kind != kind {
        return Err(Error::Precondition(format!("`{}` is not a {kind:?} operator", op.name)));
    }
    Ok(())
}

fn require_grid(grid: &SamplingGrid, dim: usize) -> Result<()> {
    if grid.dim() != dim {
        return Err(Error::InvalidGrid(format!("expected {dim} axes, got {}", grid.dim())));
    }
    Ok(())
}

/// `E_A1(s)(t, y) = t + s` over a grid in `(s, t, y1..yl)`.
pub fn first_component_check<T: Scalar>(
    ea: &EvolutionOp<T>,
    grid: &SamplingGrid,
    tol: T,
) -> Result<VerificationReport> {
    require(ea, EvolutionKind::OneTime)?;
    require_grid(grid, ea.dim + 1)?;
    let mut tracker = Tracker::new();
    for p in grid.points() {
        let pt: Vec<T> = p.iter().map(|&v| T::of(v)).collect();
        let (s, x) = (pt[0], &pt[1..]);
        if !ea.is_valid(&[s], x) {
            tracker.skip();
            continue;
        }
        let out = ea.one(s, x)?;
        let expected = x[0] + s;
        tracker.record(scaled_deviation(&out[..1], &[expected]).as_f64(), &p, &f64s(&out));
    }
    Ok(tracker.finish("first-component", tol.as_f64(), grid.to_string()))
}

/// `E(s, r)∘E(t, s) = E(t, r)` on each triple, plus the inverse identities
/// `E(s, t)∘E(t, s) = id` wherever both directions are valid.
pub fn two_time_law_check<T: Scalar>(
    e: &EvolutionOp<T>,
    triples: &[(T, T, T)],
    grid: &SamplingGrid,
    tol: T,
) -> Result<VerificationReport> {
    require(e, EvolutionKind::TwoTime)?;
    require_grid(grid, e.dim)?;
    let mut tracker = Tracker::new();
    let mut inverse_checks = 0usize;
    for &(t, s, r) in triples {
        for p in grid.points() {
            let y: Vec<T> = p.iter().map(|&v| T::of(v)).collect();
            let mut point = vec![t.as_f64(), s.as_f64(), r.as_f64()];
            point.extend_from_slice(&p);
            if !e.is_valid(&[t, s], &y) {
                tracker.skip();
                continue;
            }
            let z = e.two(t, s, &y)?;
            if e.is_valid(&[s, r], &z) && e.is_valid(&[t, r], &y) {
                let lhs = e.two(s, r, &z)?;
                let rhs = e.two(t, r, &y)?;
                let mut values = f64s(&lhs);
                values.extend(f64s(&rhs));
                tracker.record(scaled_deviation(&lhs, &rhs).as_f64(), &point, &values);
            } else {
                tracker.skip();
            }
            if e.is_valid(&[s, t], &z) {
                let back = e.two(s, t, &z)?;
                inverse_checks += 1;
                tracker.record(scaled_deviation(&back, &y).as_f64(), &point, &f64s(&back));
            }
        }
    }
    Ok(tracker
        .finish(
            "two-time-law",
            tol.as_f64(),
            format!("{} time triples over {grid}", triples.len()),
        )
        .with_note(format!("{inverse_checks} inverse identities sampled")))
}

/// `E_A(r)∘E_A(s) = E_A(s + r)` over a grid in the operator's state space.
pub fn one_time_law_check<T: Scalar>(
    ea: &EvolutionOp<T>,
    pairs: &[(T, T)],
    grid: &SamplingGrid,
    tol: T,
) -> Result<VerificationReport> {
    require(ea, EvolutionKind::OneTime)?;
    require_grid(grid, ea.dim)?;
    let mut tracker = Tracker::new();
    for &(s, r) in pairs {
        for p in grid.points() {
            let x: Vec<T> = p.iter().map(|&v| T::of(v)).collect();
            if !ea.is_valid(&[s], &x) || !ea.is_valid(&[s + r], &x) {
                tracker.skip();
                continue;
            }
            let z = ea.one(s, &x)?;
            if !ea.is_valid(&[r], &z) {
                tracker.skip();
                continue;
            }
            let lhs = ea.one(r, &z)?;
            let rhs = ea.one(s + r, &x)?;
            let mut point = vec![s.as_f64(), r.as_f64()];
            point.extend_from_slice(&p);
            let mut values = f64s(&lhs);
            values.extend(f64s(&rhs));
            tracker.record(scaled_deviation(&lhs, &rhs).as_f64(), &point, &values);
        }
    }
    Ok(tracker.finish(
        "one-time-law",
        tol.as_f64(),
        format!("{} time pairs over {grid}", pairs.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gls::{identity_check, injectivity_probe};

    #[test]
    fn closed_form_values() {
        assert_eq!(gls_two_time(0.0, 1.0, 2.0).unwrap(), 6.0);
        assert_eq!(gls_two_time(1.0, 1.0, 6.0).unwrap(), 6.0);
        assert_eq!(gls_two_time(1.0, 4.0, 6.0).unwrap(), 10.0);
        assert_eq!(ystar_branch(1.0, 6.0).unwrap(), 2.0);
        assert_eq!(ystar_branch(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(ystar_branch(0.0, 7.5).unwrap(), 7.5);
        assert!((ystar_branch(1e-14, 3.0f64).unwrap() - 3.0).abs() < 1e-6);
        assert!(gls_two_time(1.0, 1.0, -1.0).unwrap_err().is_domain());
        assert!(gls_two_time(-1.0, 1.0, 1.0).unwrap_err().is_domain());
    }

    #[test]
    fn quadratic_laws() {
        let e = quadratic_two_time::<f64>();
        let g = SamplingGrid::linspace(-5.0, 5.0, 11).unwrap();
        let vals = [0.0, 1.0, 2.0];
        let triples = time_triples(&vals);
        let r = two_time_law_check(&e, &triples, &g, 0.0).unwrap();
        assert!(r.succeeded(), "{r:?}");
        let ea = quadratic_autonomous::<f64>();
        let g2 = SamplingGrid::from_ranges(&[(0.0, 3.0, 4), (-5.0, 5.0, 5)]).unwrap();
        let pairs = [(0.0, 0.0), (1.0, 2.0), (0.5, 1.5)];
        assert!(one_time_law_check(&ea, &pairs, &g2, 1e-15).unwrap().succeeded());
        let g3 = SamplingGrid::from_ranges(&[(0.0, 3.0, 4), (0.0, 3.0, 4), (-5.0, 5.0, 5)]).unwrap();
        assert_eq!(first_component_check(&ea, &g3, 0.0).unwrap().max_deviation, 0.0);
    }

    #[test]
    fn derived_autonomous_matches_registered_one() {
        let derived = autonomous_from_two_time(&quadratic_two_time::<f64>()).unwrap();
        let direct = quadratic_autonomous::<f64>();
        for (s, t, y) in [(0.5, 1.0, 2.0), (2.0, 0.0, -1.0)] {
            assert_eq!(derived.one(s, &[t, y]).unwrap(), direct.one(s, &[t, y]).unwrap());
        }
    }

    #[test]
    fn gls_operator_laws() {
        let e = gls_evolution::<f64>();
        let g = SamplingGrid::linspace(-0.2, 4.0, 41).unwrap();
        let vals = [0.25, 1.0, 2.25];
        let triples = time_triples(&vals);
        let r = two_time_law_check(&e, &triples, &g, 1e-9).unwrap();
        assert!(r.succeeded(), "{r:?}");
        let ea = gls_autonomous::<f64>();
        let g2 = SamplingGrid::from_ranges(&[(0.0, 1.0, 5), (-0.2, 4.0, 41)]).unwrap();
        let pairs = time_pairs(&[0.0, 0.25, 0.5]);
        assert!(one_time_law_check(&ea, &pairs, &g2, 1e-9).unwrap().succeeded());
        let action = ea.as_action().unwrap();
        assert!(identity_check(&action, &g2, 1e-12).unwrap().succeeded());
    }

    #[test]
    fn gls_slice_is_not_injective() {
        let e = gls_evolution::<f64>();
        let slice = TimeAction::from_fn("E(0,1)", 1, TimeDomain::NonNegative, move |_, y: &[f64]| {
            e.two(0.0, 1.0, y)
        });
        let g = SamplingGrid::linspace(-3.0, 3.0, 61).unwrap();
        assert!(injectivity_probe(&slice.at(1.0), &g, 1e-12).unwrap().passed);
    }

    #[test]
    fn numeric_flow_matches_closed_form() {
        let sys = OdeSystem::nonautonomous("2t", SmoothMap::parse(&["t", "y"], &["2*t"]).unwrap()).unwrap();
        let e = EvolutionOp::numeric_flow(sys, 50);
        assert_eq!(e.kind(), EvolutionKind::TwoTime);
        let v: f64 = e.two(1.0, 3.0, &[0.5]).unwrap()[0];
        assert!((v - (9.0 - 1.0 + 0.5)).abs() < 1e-12);
        assert_eq!(e.two(2.0, 2.0, &[0.5]).unwrap(), vec![0.5]);
        assert!(e.two(3.0, 1.0, &[0.5]).is_ok());
    }
}
