//! One-parameter time actions and the semigroup axioms they must satisfy.
//!
//! A [`TimeAction`] is a family `y ↦ a(t, y)` of self-maps of a state space,
//! indexed by time. The checks here sample the identity axiom `a(0, ·) = id`,
//! the composition law `a(t, a(s, y)) = a(t + s, y)` and non-injectivity of
//! individual maps, and classify a verified semigroup as group-like (all
//! sampled maps invertible) or genuine (no sampled map invertible for t > 0).

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::fold_pair;
use crate::scalar::{max_norm_diff, scaled_deviation, Scalar};
use crate::symbolic::SmoothMap;
use crate::verify::{GridSummary, SamplingGrid, Tracker, VerificationReport, Witness};

/// Admissible times of an action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeDomain {
    /// `[0, ∞)`
    NonNegative,
    /// the whole real line
    Full,
}

impl TimeDomain {
    pub fn contains<T: Scalar>(self, t: T) -> bool {
        match self {
            TimeDomain::NonNegative => t >= T::zero(),
            TimeDomain::Full => t.is_finite(),
        }
    }
}

pub type ActionFn<T> = Arc<dyn Fn(T, &[T]) -> Result<Vec<T>> + Send + Sync>;
pub type Predicate<T> = Arc<dyn Fn(T, &[T]) -> bool + Send + Sync>;

#[derive(Clone)]
enum Backing<T> {
    Symbolic {
        map: SmoothMap,
        state_partials: Vec<SmoothMap>,
    },
    Closure(ActionFn<T>),
}

/// A time-indexed family of maps on an `dim`-dimensional state space.
#[derive(Clone)]
pub struct TimeAction<T: Scalar = f64> {
    name: String,
    dim: usize,
    time_domain: TimeDomain,
    backing: Backing<T>,
    validity: Option<Predicate<T>>,
}

impl<T: Scalar> fmt::Debug for TimeAction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("TimeAction");
        d.field("name", &self.name)
            .field("dim", &self.dim)
            .field("time_domain", &self.time_domain);
        match &self.backing {
            Backing::Symbolic { map, .. } => d.field("map", map),
            Backing::Closure(_) => d.field("map", &"<closure>"),
        };
        d.field("restricted", &self.validity.is_some()).finish()
    }
}

impl<T: Scalar> TimeAction<T> {
    /// Action given by a map whose first input is time and whose remaining
    /// inputs are the state coordinates.
    pub fn symbolic(name: impl Into<String>, time_domain: TimeDomain, map: SmoothMap) -> Result<Self> {
        let dim = map.input_arity().saturating_sub(1);
        if dim == 0 || map.output_arity() != dim {
            return Err(Error::Arity {
                expected: map.input_arity().saturating_sub(1).max(1),
                actual: map.output_arity(),
            });
        }
        let state_partials = map.inputs()[1..].iter().map(|v| map.partial(v)).collect();
        Ok(TimeAction {
            name: name.into(),
            dim,
            time_domain,
            backing: Backing::Symbolic { map, state_partials },
            validity: None,
        })
    }

    /// Parses a one-output action in variables `(t, y)`.
    pub fn parse_1d(name: impl Into<String>, time_domain: TimeDomain, text: &str) -> Result<Self> {
        TimeAction::symbolic(name, time_domain, SmoothMap::parse(&["t", "y"], &[text])?)
    }

    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        time_domain: TimeDomain,
        f: impl Fn(T, &[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Self {
        TimeAction {
            name: name.into(),
            dim,
            time_domain,
            backing: Backing::Closure(Arc::new(f)),
            validity: None,
        }
    }

    /// Restricts the action to the points where `pred(t, y)` holds.
    ///
    /// At `t = 0` the predicate describes the state space itself.
    pub fn with_validity(mut self, pred: impl Fn(T, &[T]) -> bool + Send + Sync + 'static) -> Self {
        self.validity = Some(Arc::new(pred));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time_domain(&self) -> TimeDomain {
        self.time_domain
    }

    /// The defining map when the action is symbolic.
    pub fn symbolic_map(&self) -> Option<&SmoothMap> {
        match &self.backing {
            Backing::Symbolic { map, .. } => Some(map),
            Backing::Closure(_) => None,
        }
    }

    pub fn apply(&self, t: T, y: &[T]) -> Result<Vec<T>> {
        if !self.time_domain.contains(t) {
            return Err(Error::domain("time", t.as_f64()));
        }
        if y.len() != self.dim {
            return Err(Error::Arity {
                expected: self.dim,
                actual: y.len(),
            });
        }
        match &self.backing {
            Backing::Symbolic { map, .. } => {
                let mut p = Vec::with_capacity(self.dim + 1);
                p.push(t);
                p.extend_from_slice(y);
                map.eval(&p)
            }
            Backing::Closure(f) => f(t, y),
        }
    }

    pub fn is_valid(&self, t: T, y: &[T]) -> bool {
        self.time_domain.contains(t) && self.validity.as_ref().is_none_or(|p| p(t, y))
    }

    /// Exact `∂a/∂y_k` at `(t, y)` for symbolic actions.
    pub fn state_partial(&self, t: T, y: &[T], k: usize) -> Option<Result<Vec<T>>> {
        match &self.backing {
            Backing::Symbolic { state_partials, .. } => {
                let mut p = Vec::with_capacity(self.dim + 1);
                p.push(t);
                p.extend_from_slice(y);
                state_partials.get(k).map(|m| m.eval(&p))
            }
            Backing::Closure(_) => None,
        }
    }

    /// The single map `a(t, ·)`.
    pub fn at(&self, t: T) -> ActionSlice<'_, T> {
        ActionSlice { action: self, t }
    }
}

/// A map of a state space to itself, possibly with exact partials.
pub trait StateMap<T: Scalar>: Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn apply(&self, y: &[T]) -> Result<Vec<T>>;

    fn partial(&self, _y: &[T], _k: usize) -> Option<Result<Vec<T>>> {
        None
    }

    /// `∂m/∂y_k`, exact when available and a central difference otherwise.
    fn column(&self, y: &[T], k: usize) -> Result<Vec<T>> {
        if let Some(Ok(col)) = self.partial(y, k) {
            if col.iter().all(|v| v.is_finite()) {
                return Ok(col);
            }
        }
        let h = T::epsilon().cbrt() * (T::one() + y[k].abs());
        let mut plus = y.to_vec();
        let mut minus = y.to_vec();
        plus[k] = plus[k] + h;
        minus[k] = minus[k] - h;
        let (fp, fm) = (self.apply(&plus)?, self.apply(&minus)?);
        Ok(fp.iter().zip(&fm).map(|(a, b)| (*a - *b) / (h + h)).collect())
    }
}

impl<T: Scalar> StateMap<T> for SmoothMap {
    fn dim_in(&self) -> usize {
        self.input_arity()
    }

    fn dim_out(&self) -> usize {
        self.output_arity()
    }

    fn apply(&self, y: &[T]) -> Result<Vec<T>> {
        self.eval(y)
    }

    fn partial(&self, y: &[T], k: usize) -> Option<Result<Vec<T>>> {
        let var = self.inputs().get(k)?;
        Some(SmoothMap::partial(self, var).eval(y))
    }
}

/// `a(t, ·)` for a fixed time.
#[derive(Clone, Copy)]
pub struct ActionSlice<'a, T: Scalar> {
    action: &'a TimeAction<T>,
    t: T,
}

impl<T: Scalar> StateMap<T> for ActionSlice<'_, T> {
    fn dim_in(&self) -> usize {
        self.action.dim
    }

    fn dim_out(&self) -> usize {
        self.action.dim
    }

    fn apply(&self, y: &[T]) -> Result<Vec<T>> {
        self.action.apply(self.t, y)
    }

    fn partial(&self, y: &[T], k: usize) -> Option<Result<Vec<T>>> {
        self.action.state_partial(self.t, y, k)
    }
}

fn to_t<T: Scalar>(p: &[f64]) -> Vec<T> {
    p.iter().map(|&x| T::of(x)).collect()
}

fn to_f64<T: Scalar>(p: &[T]) -> Vec<f64> {
    p.iter().map(|x| x.as_f64()).collect()
}

/// Samples `a(0, y) = y` over the grid (points outside the state space are skipped).
pub fn identity_check<T: Scalar>(a: &TimeAction<T>, grid: &SamplingGrid, tol: T) -> Result<VerificationReport> {
    check_dim(a.dim, grid)?;
    let mut tracker = Tracker::new();
    for p in grid.points() {
        let y: Vec<T> = to_t(&p);
        if !a.is_valid(T::zero(), &y) {
            tracker.skip();
            continue;
        }
        let img = a.apply(T::zero(), &y)?;
        tracker.record(scaled_deviation(&img, &y).as_f64(), &p, &to_f64(&img));
    }
    Ok(tracker.finish("identity", tol.as_f64(), grid.to_string()))
}

fn check_dim(dim: usize, grid: &SamplingGrid) -> Result<()> {
    if grid.dim() != dim {
        return Err(Error::InvalidGrid(format!(
            "grid has {} axes, state space has dimension {dim}",
            grid.dim()
        )));
    }
    Ok(())
}

/// Samples `a(t, a(s, y)) = a(t + s, y)`.
///
/// Points where the action's validity predicate fails for `(s, y)`,
/// `(t + s, y)` or `(t, a(s, y))` are skipped and counted; more than half
/// skipped marks the report inconclusive. Deviations are scaled by
/// `1 + |a(t + s, y)|`.
pub fn composition_check<T: Scalar>(
    a: &TimeAction<T>,
    times: &[(T, T)],
    grid: &SamplingGrid,
    tol: T,
) -> Result<VerificationReport> {
    check_dim(a.dim, grid)?;
    for &(t, s) in times {
        for x in [t, s, t + s] {
            if !a.time_domain.contains(x) {
                return Err(Error::Precondition(format!(
                    "time {x} lies outside the action's time domain"
                )));
            }
        }
    }
    let points = grid.points();
    let jobs: Vec<(T, T, &Vec<f64>)> = times
        .iter()
        .flat_map(|&(t, s)| points.iter().map(move |p| (t, s, p)))
        .collect();
    // (deviation, point, values) per admissible job
    #[allow(clippy::type_complexity)]
    let outcomes: Vec<Option<(f64, Vec<f64>, Vec<f64>)>> = jobs
        .par_iter()
        .map(|&(t, s, p)| {
            let y: Vec<T> = to_t(p);
            if !a.is_valid(s, &y) || !a.is_valid(t + s, &y) {
                return None;
            }
            let z = a.apply(s, &y).ok()?;
            if !a.is_valid(t, &z) {
                return None;
            }
            let lhs = a.apply(t, &z).ok()?;
            let rhs = a.apply(t + s, &y).ok()?;
            let mut point = vec![t.as_f64(), s.as_f64()];
            point.extend_from_slice(p);
            let mut values = to_f64(&lhs);
            values.extend(to_f64(&rhs));
            Some((scaled_deviation(&lhs, &rhs).as_f64(), point, values))
        })
        .collect();
    let mut tracker = Tracker::new();
    for o in outcomes {
        match o {
            Some((dev, point, values)) => tracker.record(dev, &point, &values),
            None => tracker.skip(),
        }
    }
    Ok(tracker.finish(
        "composition",
        tol.as_f64(),
        format!("{} time pairs over {grid}", times.len()),
    ))
}

/// Searches for two distinct grid-derived points with (numerically) equal images.
///
/// The report passes when a non-injectivity witness is found: its deviation
/// is the image gap of the witness pair. Otherwise the deviation is the
/// smallest image gap between distinct grid points and the report fails;
/// injectivity is only ever certified on the sampled grid.
///
/// Two methods are combined. Along every axis-parallel grid line on which
/// all but one output coordinate stay constant, a sign change of the
/// derivative of the varying coordinate brackets a fold, and a collision
/// pair is solved for on both sides of it (for 1-D maps this is the whole
/// grid). Failing that, all pairs of grid images are compared.
pub fn injectivity_probe<T: Scalar, M: StateMap<T> + ?Sized>(
    m: &M,
    grid: &SamplingGrid,
    tol: T,
) -> Result<VerificationReport> {
    check_dim(m.dim_in(), grid)?;
    if m.dim_in() != m.dim_out() {
        return Err(Error::Arity {
            expected: m.dim_in(),
            actual: m.dim_out(),
        });
    }
    let description = grid.to_string();
    if let Some((p, q)) = line_collision(m, grid, tol) {
        return Ok(pair_report(m, p, q, tol, description, "fold of an axis-parallel restriction"));
    }
    let mut images: Vec<(Vec<T>, Vec<T>)> = grid
        .points()
        .iter()
        .filter_map(|p| {
            let y: Vec<T> = to_t(p);
            m.apply(&y).ok().filter(|v| v.iter().all(|x| x.is_finite())).map(|v| (y, v))
        })
        .collect();
    if images.len() < 2 {
        let mut r = VerificationReport::new(
            "noninjectivity-probe",
            f64::MAX,
            tol.as_f64(),
            GridSummary {
                description,
                evaluated: images.len(),
                skipped: grid.len() - images.len(),
            },
        );
        r.inconclusive = true;
        return Ok(r.with_note("fewer than two admissible points"));
    }
    images.sort_by(|a, b| a.1[0].partial_cmp(&b.1[0]).unwrap());
    let mut best: Option<(T, usize, usize)> = None;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let lead = images[j].1[0] - images[i].1[0];
            if best.is_some_and(|(g, _, _)| lead > g) {
                break;
            }
            let gap = max_norm_diff(&images[i].1, &images[j].1);
            if best.is_none_or(|(g, _, _)| gap < g) {
                best = Some((gap, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("at least two images");
    let (p, q) = (images[i].0.clone(), images[j].0.clone());
    Ok(pair_report(m, p, q, tol, description, "closest pair of grid images"))
}

fn pair_report<T: Scalar, M: StateMap<T> + ?Sized>(
    m: &M,
    p: Vec<T>,
    q: Vec<T>,
    tol: T,
    description: String,
    method: &str,
) -> VerificationReport {
    let (mp, mq) = (m.apply(&p).unwrap_or_default(), m.apply(&q).unwrap_or_default());
    let gap = max_norm_diff(&mp, &mq).as_f64();
    let mut r = VerificationReport::new(
        "noninjectivity-probe",
        gap,
        tol.as_f64(),
        GridSummary {
            description,
            evaluated: 2,
            skipped: 0,
        },
    );
    r.witnesses.push(Witness::new(to_f64(&p), to_f64(&mp), method));
    r.witnesses.push(Witness::new(to_f64(&q), to_f64(&mq), method));
    let verdict = if r.passed {
        "non-injective on grid"
    } else {
        "injective on grid"
    };
    r.with_note(verdict)
}

/// Collision pair from a fold along some axis-parallel grid line.
pub(crate) fn line_collision<T: Scalar, M: StateMap<T> + ?Sized>(
    m: &M,
    grid: &SamplingGrid,
    tol: T,
) -> Option<(Vec<T>, Vec<T>)> {
    for axis in 0..grid.dim() {
        for line in grid.lines(axis) {
            let mut run: Vec<(Vec<T>, Vec<T>)> = Vec::new();
            let mut runs = Vec::new();
            for p in &line {
                let y: Vec<T> = to_t(p);
                match m.apply(&y) {
                    Ok(v) if v.iter().all(|x| x.is_finite()) => run.push((y, v)),
                    _ => runs.push(std::mem::take(&mut run)),
                }
            }
            runs.push(run);
            for run in runs.into_iter().filter(|r| r.len() >= 2) {
                if let Some(pair) = collision_in_run(m, &run, axis, tol) {
                    return Some(pair);
                }
            }
        }
    }
    None
}

fn collision_in_run<T: Scalar, M: StateMap<T> + ?Sized>(
    m: &M,
    run: &[(Vec<T>, Vec<T>)],
    axis: usize,
    tol: T,
) -> Option<(Vec<T>, Vec<T>)> {
    let n_out = run[0].1.len();
    let varying: Vec<usize> = (0..n_out)
        .filter(|&j| {
            let (lo, hi, mag) = run.iter().fold(
                (T::infinity(), T::neg_infinity(), T::zero()),
                |(lo, hi, mag), (_, v)| (lo.min(v[j]), hi.max(v[j]), mag.max(v[j].abs())),
            );
            hi - lo > tol * (T::one() + mag)
        })
        .collect();
    match varying.as_slice() {
        [] => Some((run[0].0.clone(), run[1].0.clone())),
        [j] => {
            let j = *j;
            let base = run[0].0.clone();
            let at = |x: T| {
                let mut y = base.clone();
                y[axis] = x;
                y
            };
            let f = |x: T| m.apply(&at(x)).map(|v| v[j]);
            let df = |x: T| m.column(&at(x), axis).map(|c| c[j]);
            let xs: Vec<T> = run.iter().map(|(y, _)| y[axis]).collect();
            fold_pair(&f, &df, &xs).map(|fp| (at(fp.first), at(fp.second)))
        }
        _ => None,
    }
}

/// True when the derivative of a 1-D map never changes sign over the grid
/// (isolated zeros allowed).
pub fn derivative_sign_constant<T: Scalar, M: StateMap<T> + ?Sized>(m: &M, grid: &SamplingGrid) -> bool {
    let mut seen = 0i8;
    for p in grid.points() {
        let y: Vec<T> = to_t(&p);
        let Ok(col) = m.column(&y, 0) else { continue };
        let d = col[0];
        let s = if d > T::zero() {
            1
        } else if d < T::zero() {
            -1
        } else {
            0
        };
        if s != 0 {
            if seen != 0 && seen != s {
                return false;
            }
            seen = s;
        }
    }
    true
}

/// The analytic collision pair `(0, -1/√t)` of `y ↦ y + √t y²`.
pub fn noninvertibility_witness_sqrt<T: Scalar>(t: T) -> Result<(T, T)> {
    if !(t > T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    Ok((T::zero(), -T::one() / t.sqrt()))
}

/// Outcome of the invertibility dichotomy on a verified semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// every sampled map is invertible: the semigroup extends to a group
    GroupLike,
    /// no sampled map with t > 0 is injective
    GenuineSemigroup,
    /// invertible and non-invertible maps coexist, which a semigroup cannot have
    Inconsistent,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleVerdict {
    pub t: f64,
    pub noninjective: bool,
    pub derivative_sign_constant: Option<bool>,
    pub probe: VerificationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub classification: Classification,
    pub samples: Vec<SampleVerdict>,
}

/// Classifies a semigroup action by probing `a(t, ·)` at the sampled times.
///
/// The action must pass the identity and composition checks on `grid` over
/// all pairs of `t_samples`; a raw family that is not a semigroup is a
/// precondition error.
pub fn dichotomy_classify<T: Scalar>(
    a: &TimeAction<T>,
    t_samples: &[T],
    grid: &SamplingGrid,
    tol: T,
) -> Result<DichotomyReport> {
    if t_samples.is_empty() || t_samples.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::Precondition("time samples must be positive".into()));
    }
    let id = identity_check(a, grid, tol)?;
    if !id.succeeded() {
        return Err(Error::Precondition(format!(
            "`{}` fails the identity axiom (deviation {:e})",
            a.name, id.max_deviation
        )));
    }
    let pairs: Vec<(T, T)> = t_samples
        .iter()
        .flat_map(|&t| t_samples.iter().map(move |&s| (t, s)))
        .collect();
    let comp = composition_check(a, &pairs, grid, tol)?;
    if !comp.succeeded() {
        return Err(Error::Precondition(format!(
            "`{}` is not a semigroup on the grid (deviation {:e}{})",
            a.name,
            comp.max_deviation,
            if comp.inconclusive { ", inconclusive" } else { "" }
        )));
    }
    let mut samples = Vec::new();
    for &t in t_samples {
        let slice = a.at(t);
        let probe = injectivity_probe(&slice, grid, tol)?;
        let sign = (a.dim == 1).then(|| derivative_sign_constant(&slice, grid));
        samples.push(SampleVerdict {
            t: t.as_f64(),
            noninjective: probe.passed,
            derivative_sign_constant: sign,
            probe,
        });
    }
    let clean = |s: &SampleVerdict| {
        !s.noninjective && !s.probe.inconclusive && s.derivative_sign_constant.unwrap_or(true)
    };
    let n_clean = samples.iter().filter(|s| clean(s)).count();
    let n_broken = samples.iter().filter(|s| s.noninjective).count();
    let classification = if n_clean == samples.len() {
        Classification::GroupLike
    } else if n_broken == samples.len() {
        Classification::GenuineSemigroup
    } else if n_clean > 0 && n_broken > 0 {
        Classification::Inconsistent
    } else {
        Classification::Inconclusive
    };
    Ok(DichotomyReport {
        classification,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_action() -> TimeAction<f64> {
        TimeAction::parse_1d("sqrt", TimeDomain::NonNegative, "y + sqrt(t)*y^2").unwrap()
    }

    fn identity_action() -> TimeAction<f64> {
        TimeAction::parse_1d("id", TimeDomain::Full, "y").unwrap()
    }

    #[test]
    fn identity_axiom_on_sqrt_action() {
        let g = SamplingGrid::linspace(-3.0, 3.0, 101).unwrap();
        let r = identity_check(&sqrt_action(), &g, 1e-12).unwrap();
        assert!(r.succeeded());
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(sqrt_action().apply(-1.0, &[1.0]).unwrap_err().is_domain());
        let g = SamplingGrid::linspace(0.0, 1.0, 3).unwrap();
        assert!(matches!(
            composition_check(&sqrt_action(), &[(-1.0, 0.5)], &g, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trivial_time_pair_composes() {
        let g = SamplingGrid::linspace(-3.0, 3.0, 11).unwrap();
        let r = composition_check(&sqrt_action(), &[(0.0, 0.0)], &g, 1e-12).unwrap();
        assert!(r.succeeded());
    }

    #[test]
    fn raw_sqrt_action_is_not_a_semigroup() {
        let g = SamplingGrid::linspace(0.0, 2.0, 3).unwrap();
        let r = composition_check(&sqrt_action(), &[(1.0, 1.0)], &g, 1e-9).unwrap();
        assert!(!r.passed);
        assert!(r.max_deviation > 0.1);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn probe_finds_fold_of_quadratic() {
        let m = SmoothMap::parse(&["y"], &["y + y^2"]).unwrap();
        let g = SamplingGrid::linspace(-3.0, 3.0, 101).unwrap();
        let r = injectivity_probe(&m, &g, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        let (a, b) = (r.witnesses[0].point[0], r.witnesses[1].point[0]);
        assert!(a != b);
        assert!((a + a * a - b - b * b).abs() <= 1e-12);
    }

    #[test]
    fn probe_clears_identity() {
        let m = SmoothMap::identity(&["y"]);
        let g = SamplingGrid::linspace(-3.0, 3.0, 101).unwrap();
        let r = injectivity_probe(&m, &g, 1e-12).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witnesses.len(), 2);
        assert!((r.max_deviation - 0.06).abs() < 1e-12);
    }

    #[test]
    fn probe_in_two_dimensions() {
        // (x, y) -> (x, y^2) folds along y-lines
        let m = SmoothMap::parse(&["x", "y"], &["x", "y^2"]).unwrap();
        let g = SamplingGrid::from_ranges(&[(0.0, 1.0, 3), (-1.0, 2.0, 7)]).unwrap();
        assert!(injectivity_probe(&m, &g, 1e-12).unwrap().passed);
        // a linear shear is injective
        let s = SmoothMap::parse(&["x", "y"], &["x + y", "y"]).unwrap();
        assert!(!injectivity_probe(&s, &g, 1e-12).unwrap().passed);
        // collapsing map: both outputs constant along y-lines
        let c = SmoothMap::parse(&["x", "y"], &["x", "x"]).unwrap();
        assert!(injectivity_probe(&c, &g, 1e-12).unwrap().passed);
    }

    #[test]
    fn analytic_witnesses() {
        for (t, second) in [(1.0f64, -1.0), (4.0, -0.5), (0.25, -2.0)] {
            let (a, b) = noninvertibility_witness_sqrt(t).unwrap();
            assert_eq!((a, b), (0.0, second));
            let h = |y: f64| y + t.sqrt() * y * y;
            assert!((h(a) - h(b)).abs() <= 1e-12);
        }
        assert!(noninvertibility_witness_sqrt(0.0).is_err());
        assert!(noninvertibility_witness_sqrt(-1.0).is_err());
    }

    #[test]
    fn identity_action_is_group_like() {
        let g = SamplingGrid::linspace(-3.0, 3.0, 31).unwrap();
        let d = dichotomy_classify(&identity_action(), &[0.5, 1.0, 2.0], &g, 1e-12).unwrap();
        assert_eq!(d.classification, Classification::GroupLike);
    }

    #[test]
    fn dichotomy_rejects_non_semigroups() {
        let g = SamplingGrid::linspace(0.0, 3.0, 31).unwrap();
        assert!(matches!(
            dichotomy_classify(&sqrt_action(), &[0.5, 1.0], &g, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let a: TimeAction<f32> =
            TimeAction::parse_1d("sqrt", TimeDomain::NonNegative, "y + sqrt(t)*y^2").unwrap();
        let g = SamplingGrid::linspace(-3.0, 3.0, 21).unwrap();
        assert!(identity_check(&a, &g, 1e-6f32).unwrap().succeeded());
        assert!(injectivity_probe(&a.at(1.0f32), &g, 1e-5f32).unwrap().passed);
    }
}
