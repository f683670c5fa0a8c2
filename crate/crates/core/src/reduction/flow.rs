use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gls::{Predicate, TimeAction};
use crate::scalar::{scaled_deviation, Scalar};
use crate::symbolic::{Expr, SmoothMap};
use crate::verify::{Tracker, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OdeKind {
    /// `Y′ = F(Y)`
    Autonomous,
    /// `Y′ = F(t, Y)`
    Nonautonomous,
}

pub type RhsFn<T> = Arc<dyn Fn(T, &[T]) -> Result<Vec<T>> + Send + Sync>;

#[derive(Clone)]
enum Rhs<T> {
    Symbolic(SmoothMap),
    Closure(RhsFn<T>),
}

/// An explicit first-order system on `ℝ^l`.
#[derive(Clone)]
pub struct OdeSystem<T: Scalar = f64> {
    name: String,
    kind: OdeKind,
    dim: usize,
    rhs: Rhs<T>,
    validity: Option<Predicate<T>>,
}

impl<T: Scalar> fmt::Debug for OdeSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("OdeSystem");
        d.field("name", &self.name).field("kind", &self.kind).field("dim", &self.dim);
        match &self.rhs {
            Rhs::Symbolic(m) => d.field("rhs", m),
            Rhs::Closure(_) => d.field("rhs", &"<closure>"),
        };
        d.finish()
    }
}

impl<T: Scalar> OdeSystem<T> {
    /// `Y′ = F(Y)` with `F` given over the state variables.
    pub fn autonomous(name: impl Into<String>, rhs: SmoothMap) -> Result<Self> {
        if rhs.input_arity() != rhs.output_arity() {
            return Err(Error::Arity {
                expected: rhs.input_arity(),
                actual: rhs.output_arity(),
            });
        }
        Ok(OdeSystem {
            name: name.into(),
            kind: OdeKind::Autonomous,
            dim: rhs.output_arity(),
            rhs: Rhs::Symbolic(rhs),
            validity: None,
        })
    }

    /// `Y′ = F(t, Y)` with the first input of `rhs` playing the role of time.
    pub fn nonautonomous(name: impl Into<String>, rhs: SmoothMap) -> Result<Self> {
        if rhs.input_arity() != rhs.output_arity() + 1 {
            return Err(Error::Arity {
                expected: rhs.output_arity() + 1,
                actual: rhs.input_arity(),
            });
        }
        Ok(OdeSystem {
            name: name.into(),
            kind: OdeKind::Nonautonomous,
            dim: rhs.output_arity(),
            rhs: Rhs::Symbolic(rhs),
            validity: None,
        })
    }

    /// A right-hand side `(t, y) ↦ F` given as a closure (`t` is ignored by
    /// autonomous systems).
    pub fn from_fn(
        name: impl Into<String>,
        kind: OdeKind,
        dim: usize,
        f: impl Fn(T, &[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Self {
        OdeSystem {
            name: name.into(),
            kind,
            dim,
            rhs: Rhs::Closure(Arc::new(f)),
            validity: None,
        }
    }

    /// Marks where the right-hand side is regular; integration may not start elsewhere.
    pub fn with_validity(mut self, pred: impl Fn(T, &[T]) -> bool + Send + Sync + 'static) -> Self {
        self.validity = Some(Arc::new(pred));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> OdeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbolic_rhs(&self) -> Option<&SmoothMap> {
        match &self.rhs {
            Rhs::Symbolic(m) => Some(m),
            Rhs::Closure(_) => None,
        }
    }

    pub fn rhs(&self, t: T, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.dim {
            return Err(Error::Arity {
                expected: self.dim,
                actual: y.len(),
            });
        }
        match (&self.rhs, self.kind) {
            (Rhs::Symbolic(m), OdeKind::Autonomous) => m.eval(y),
            (Rhs::Symbolic(m), OdeKind::Nonautonomous) => {
                let mut p = Vec::with_capacity(y.len() + 1);
                p.push(t);
                p.extend_from_slice(y);
                m.eval(&p)
            }
            (Rhs::Closure(f), _) => f(t, y),
        }
    }

    pub fn is_valid(&self, t: T, y: &[T]) -> bool {
        self.validity.as_ref().is_none_or(|p| p(t, y))
    }
}

/// Carries time as an extra leading state coordinate: `F_A(τ, y) = (1, F(τ, y))`.
///
/// The time variable of a symbolic right-hand side is renamed to `tau`
/// (with underscores appended on a clash).
pub fn augment_system<T: Scalar>(sys: &OdeSystem<T>) -> Result<OdeSystem<T>> {
    if sys.kind != OdeKind::Nonautonomous {
        return Err(Error::Precondition("only non-autonomous systems are augmented".into()));
    }
    let name = format!("{} (augmented)", sys.name);
    let mut out = match &sys.rhs {
        Rhs::Symbolic(m) => {
            let mut tau = String::from("tau");
            while m.input_index(&tau).is_some() {
                tau.push('_');
            }
            let renamed = m.rename_input(&m.inputs()[0], &tau)?;
            let mut outputs = vec![Expr::constant(1.0)];
            outputs.extend(renamed.outputs().iter().cloned());
            OdeSystem::autonomous(name, SmoothMap::new(renamed.inputs().to_vec(), outputs)?)?
        }
        Rhs::Closure(f) => {
            let f = Arc::clone(f);
            OdeSystem::from_fn(name, OdeKind::Autonomous, sys.dim + 1, move |_, ya: &[T]| {
                let mut v = vec![T::one()];
                v.extend(f(ya[0], &ya[1..])?);
                Ok(v)
            })
        }
    };
    if let Some(p) = &sys.validity {
        let p = Arc::clone(p);
        out.validity = Some(Arc::new(move |_, ya: &[T]| p(ya[0], &ya[1..])));
    }
    Ok(out)
}

/// Placement of the RK4 nodes on `[a, b]`. All meshes are fixed in advance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Mesh {
    Uniform,
    /// `t_k = a + (b − a)(k/n)^p`, clustering nodes at the start
    Graded(f64),
    /// nodes equally spaced in `log(t − t_start)`; requires `eps_start > 0`
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSettings {
    pub steps: usize,
    /// offset from the nominal start time at which integration begins
    pub eps_start: f64,
    pub mesh: Mesh,
}

impl FlowSettings {
    /// Uniform mesh when `eps_start = 0`, geometric mesh otherwise: a singular
    /// start needs steps that scale with the distance to the singularity.
    pub fn new(steps: usize, eps_start: f64) -> Self {
        FlowSettings {
            steps,
            eps_start,
            mesh: if eps_start > 0.0 { Mesh::Geometric } else { Mesh::Uniform },
        }
    }

    pub fn with_mesh(mut self, mesh: Mesh) -> Self {
        self.mesh = mesh;
        self
    }

    fn nodes<T: Scalar>(&self, t_start: T, t_end: T) -> Result<Vec<T>> {
        let n = self.steps;
        let eps = T::of(self.eps_start);
        let a = t_start + eps;
        let len = t_end - a;
        if n == 0 {
            return Err(Error::InvalidParameter("at least one step is required".into()));
        }
        if !(self.eps_start >= 0.0) || !len.is_finite() || len == T::zero() {
            return Err(Error::InvalidParameter(format!(
                "empty or invalid time span from {a} to {t_end}"
            )));
        }
        if len < T::zero() && self.mesh != Mesh::Uniform {
            return Err(Error::InvalidParameter("backward integration needs a uniform mesh".into()));
        }
        let frac = |k: usize| T::of(k as f64 / n as f64);
        let mut nodes: Vec<T> = match self.mesh {
            Mesh::Uniform => (0..=n).map(|k| a + len * frac(k)).collect(),
            Mesh::Graded(p) => {
                if !(p >= 1.0) {
                    return Err(Error::InvalidParameter(format!("grading exponent {p} < 1")));
                }
                (0..=n).map(|k| a + len * frac(k).powf(T::of(p))).collect()
            }
            Mesh::Geometric => {
                if !(self.eps_start > 0.0) {
                    return Err(Error::InvalidParameter("geometric mesh needs eps_start > 0".into()));
                }
                let ratio = (t_end - t_start) / eps;
                (0..=n).map(|k| t_start + eps * ratio.powf(frac(k))).collect()
            }
        };
        nodes[0] = a;
        nodes[n] = t_end;
        Ok(nodes)
    }
}

impl Default for FlowSettings {
    fn default() -> Self {
        FlowSettings::new(1000, 0.0)
    }
}

/// Sampled solution of an ODE system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T: Scalar = f64> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub settings: FlowSettings,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> (T, &[T]) {
        let n = self.times.len() - 1;
        (self.times[n], &self.states[n])
    }

    /// Writes `t,y1,...,yl` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let dim = self.states.first().map_or(0, Vec::len);
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=dim).map(|i| format!("y{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (t, y) in self.times.iter().zip(&self.states) {
            write!(w, "{:.16e}", t.as_f64())?;
            for v in y {
                write!(w, ",{:.16e}", v.as_f64())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Classical RK4 from `t_start + eps_start` (state `y0` there) to `t_end`.
///
/// The start must be a regular point of the system. Right-hand-side
/// failures and non-finite states abort with the time at which they occur.
pub fn integrate_flow<T: Scalar>(
    sys: &OdeSystem<T>,
    t_start: T,
    y0: &[T],
    t_end: T,
    settings: &FlowSettings,
) -> Result<Trajectory<T>> {
    let nodes = settings.nodes(t_start, t_end)?;
    if y0.len() != sys.dim {
        return Err(Error::Arity {
            expected: sys.dim,
            actual: y0.len(),
        });
    }
    if !sys.is_valid(nodes[0], y0) {
        return Err(Error::Precondition(format!(
            "`{}` is singular at the start time {}; start later with eps_start > 0",
            sys.name, nodes[0]
        )));
    }
    let fail = |t: T, e: Error| Error::Integration {
        time: t.as_f64(),
        message: e.to_string(),
    };
    let (two, six) = (T::of(2.0), T::of(6.0));
    let mut states = Vec::with_capacity(nodes.len());
    let mut y = y0.to_vec();
    states.push(y.clone());
    for w in nodes.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let half = h / two;
        let k1 = sys.rhs(t, &y).map_err(|e| fail(t, e))?;
        let y2: Vec<T> = y.iter().zip(&k1).map(|(a, k)| *a + half * *k).collect();
        let k2 = sys.rhs(t + half, &y2).map_err(|e| fail(t + half, e))?;
        let y3: Vec<T> = y.iter().zip(&k2).map(|(a, k)| *a + half * *k).collect();
        let k3 = sys.rhs(t + half, &y3).map_err(|e| fail(t + half, e))?;
        let y4: Vec<T> = y.iter().zip(&k3).map(|(a, k)| *a + h * *k).collect();
        let k4 = sys.rhs(w[1], &y4).map_err(|e| fail(w[1], e))?;
        for i in 0..y.len() {
            y[i] = y[i] + h * ((k1[i] + two * k2[i] + two * k3[i] + k4[i]) / six);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration {
                time: w[1].as_f64(),
                message: "state is no longer finite".into(),
            });
        }
        states.push(y.clone());
    }
    Ok(Trajectory {
        times: nodes,
        states,
        settings: *settings,
    })
}

/// Integrates `sys` from `(eps_start, a(eps_start, y0))` to `t_end` and
/// compares every sample with the closed form `a(t, y0)`.
///
/// Starting from the closed-form value at `eps_start` realizes the limit
/// initial condition `Y(t) → y0` as `t ↘ 0` of systems singular at 0.
pub fn flow_vs_closed_form<T: Scalar>(
    action: &TimeAction<T>,
    sys: &OdeSystem<T>,
    y0: &[T],
    t_end: T,
    settings: &FlowSettings,
    tol: T,
) -> Result<VerificationReport> {
    let t_a = T::of(settings.eps_start);
    let start = action.apply(t_a, y0)?;
    let traj = integrate_flow(sys, T::zero(), &start, t_end, settings)?;
    let mut tracker = Tracker::new();
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let exact = action.apply(*t, y0)?;
        let mut values: Vec<f64> = y.iter().map(|v| v.as_f64()).collect();
        values.extend(exact.iter().map(|v| v.as_f64()));
        tracker.record(scaled_deviation(y, &exact).as_f64(), &[t.as_f64()], &values);
    }
    Ok(tracker
        .finish(
            "flow-vs-closed-form",
            tol.as_f64(),
            format!(
                "{} RK4 steps ({:?} mesh) on [{:e}, {}]",
                settings.steps,
                settings.mesh,
                settings.eps_start,
                t_end.as_f64()
            ),
        )
        .with_note(format!("`{}` against `{}`", sys.name, action.name())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> OdeSystem<f64> {
        OdeSystem::nonautonomous("quadratic", SmoothMap::parse(&["t", "y"], &["2*t"]).unwrap()).unwrap()
    }

    #[test]
    fn augmentation_renames_time() {
        let a = augment_system(&quadratic()).unwrap();
        let m = a.symbolic_rhs().unwrap();
        assert_eq!(m.inputs(), ["tau", "y"]);
        assert_eq!(m.outputs()[0].to_string(), "1");
        assert_eq!(m.outputs()[1].to_string(), "2*tau");
        assert_eq!(a.rhs(99.0, &[1.5, 0.0]).unwrap(), vec![1.0, 3.0]);
        assert!(augment_system(&a).is_err());
    }

    #[test]
    fn rk4_is_exact_on_quadratics() {
        let tr = integrate_flow(&quadratic(), 0.0, &[5.0], 2.0, &FlowSettings::new(100, 0.0)).unwrap();
        assert_eq!(tr.len(), 101);
        assert!((tr.last().1[0] - 9.0).abs() <= 1e-9);
    }

    #[test]
    fn augmented_time_coordinate_is_exact() {
        let a = augment_system(&quadratic()).unwrap();
        let tr = integrate_flow(&a, 0.0, &[0.0, 5.0], 2.0, &FlowSettings::new(1000, 0.0)).unwrap();
        for (t, y) in tr.times.iter().zip(&tr.states) {
            assert!((y[0] - t).abs() <= 1e-12);
        }
    }

    #[test]
    fn meshes_cover_the_span() {
        for mesh in [Mesh::Uniform, Mesh::Graded(3.0), Mesh::Geometric] {
            let s = FlowSettings::new(50, 1e-6).with_mesh(mesh);
            let nodes: Vec<f64> = s.nodes(0.0, 1.0).unwrap();
            assert_eq!(nodes[0], 1e-6);
            assert_eq!(nodes[50], 1.0);
            assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        }
        assert!(FlowSettings::new(10, 0.0).with_mesh(Mesh::Geometric).nodes(0.0, 1.0f64).is_err());
        assert!(FlowSettings::new(0, 0.0).nodes(0.0, 1.0f64).is_err());
    }

    #[test]
    fn singular_start_is_rejected() {
        let sys = OdeSystem::nonautonomous("s", SmoothMap::parse(&["t", "y"], &["y^2/(2*sqrt(t))"]).unwrap())
            .unwrap()
            .with_validity(|t, _| t > 0.0);
        let err = integrate_flow(&sys, 0.0, &[1.0], 1.0, &FlowSettings::new(10, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(integrate_flow(&sys, 0.0, &[1.0], 1.0, &FlowSettings::new(10, 1e-6)).is_ok());
    }

    #[test]
    fn blow_up_is_reported() {
        let sys = OdeSystem::autonomous("riccati", SmoothMap::parse(&["y"], &["y^2"]).unwrap()).unwrap();
        let err = integrate_flow(&sys, 0.0, &[1.0], 2.0, &FlowSettings::new(100, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }), "{err:?}");
    }

    #[test]
    fn csv_layout() {
        let sys = OdeSystem::autonomous("zero", SmoothMap::parse(&["a", "b"], &["0", "0"]).unwrap()).unwrap();
        let tr = integrate_flow(&sys, 0.0, &[1.0, -2.0], 1.0, &FlowSettings::new(2, 0.0)).unwrap();
        let csv = tr.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,y1,y2");
        assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0,-2.0000000000000000e0");
        assert_eq!(lines.len(), 4);
    }
}
