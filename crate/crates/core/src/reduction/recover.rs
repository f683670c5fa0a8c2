use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, newton_polish};
use crate::scalar::Scalar;
use crate::symbolic::SmoothMap;

/// A single slice `(t, y) ↦ E(t0, t)(y)` of a scalar two-time evolution operator.
pub trait SliceMap<T: Scalar>: Sync {
    fn value(&self, t: T, y: T) -> Result<T>;

    /// Exact `∂/∂y` when available.
    fn dy(&self, _t: T, _y: T) -> Option<Result<T>> {
        None
    }
}

impl<T: Scalar, F: Fn(T, T) -> Result<T> + Sync> SliceMap<T> for F {
    fn value(&self, t: T, y: T) -> Result<T> {
        self(t, y)
    }
}

/// A slice given as a map in `(t, y)`, with its symbolic `y`-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicSlice {
    map: SmoothMap,
    dy: SmoothMap,
}

impl SymbolicSlice {
    pub fn new(map: SmoothMap) -> Result<Self> {
        if map.input_arity() != 2 || map.output_arity() != 1 {
            return Err(Error::Arity {
                expected: 2,
                actual: map.input_arity(),
            });
        }
        let dy = map.partial(&map.inputs()[1]);
        Ok(SymbolicSlice { map, dy })
    }

    pub fn parse(text: &str) -> Result<Self> {
        SymbolicSlice::new(SmoothMap::parse(&["t", "y"], &[text])?)
    }
}

impl<T: Scalar> SliceMap<T> for SymbolicSlice {
    fn value(&self, t: T, y: T) -> Result<T> {
        self.map.eval_scalar(&[t, y])
    }

    fn dy(&self, t: T, y: T) -> Option<Result<T>> {
        Some(self.dy.eval_scalar(&[t, y]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoverySettings {
    /// the time of the known slice, where `E(t0, t0) = id`
    pub t0: f64,
    /// continuation steps from `t0` to the requested time
    pub continuation_steps: usize,
    /// bisection width
    pub xtol: f64,
    pub newton_steps: usize,
    /// half-width of the final scan for other roots, relative to `1 + |y*|`
    pub scan_radius: f64,
    pub scan_points: usize,
}

impl Default for RecoverySettings {
    fn default() -> Self {
        RecoverySettings {
            t0: 0.0,
            continuation_steps: 64,
            xtol: 1e-12,
            newton_steps: 4,
            scan_radius: 10.0,
            scan_points: 2001,
        }
    }
}

/// `E(t, s)(y)` recovered from the slice `E(t0, ·)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recovery {
    pub value: f64,
    /// the selected solution of `E(t0, t)(y*) = y`
    pub y_star: f64,
    /// `1 / |∂_y E(t0, t)(y*)|`; blows up at a fold
    pub condition: f64,
    /// sign-change brackets of `E(t0, t)(·) − y` found by the final scan
    pub brackets: Vec<(f64, f64)>,
}

/// Computes `E(t, s)(y) = E(t0, s)(y*)` where `E(t0, t)(y*) = y`, using only
/// the `t0` slice.
///
/// Among several solutions `y*`, the one continuous in `t` with `y* = y` at
/// `t = t0` is selected: the root is tracked from `t0` to `t`, each step
/// bracketing the nearest sign change around the previous root, bisecting
/// it and polishing with Newton's method. All brackets seen by a final scan
/// around `y*` are reported.
pub fn recover_evolution<T: Scalar, S: SliceMap<T> + ?Sized>(
    slice: &S,
    t: T,
    s: T,
    y: T,
    settings: &RecoverySettings,
) -> Result<Recovery> {
    let t0 = T::of(settings.t0);
    let xtol = T::of(settings.xtol);
    let mut x = y;
    let n = settings.continuation_steps.max(1);
    if t != t0 {
        for k in 1..=n {
            let frac = T::of(k as f64 / n as f64);
            let tk = t0 + (t - t0) * frac * frac;
            x = track_root(slice, tk, y, x, xtol, settings.newton_steps)?;
        }
    }
    let derivative = slice_dy(slice, t, x)?;
    let radius = T::of(settings.scan_radius) * (T::one() + x.abs());
    let brackets = scan_brackets(slice, t, y, x - radius, x + radius, settings.scan_points.max(2));
    let value = slice.value(s, x)?;
    Ok(Recovery {
        value: value.as_f64(),
        y_star: x.as_f64(),
        condition: (T::one() / derivative.abs()).as_f64(),
        brackets,
    })
}

fn slice_dy<T: Scalar, S: SliceMap<T> + ?Sized>(slice: &S, t: T, y: T) -> Result<T> {
    if let Some(Ok(d)) = slice.dy(t, y) {
        if d.is_finite() {
            return Ok(d);
        }
    }
    let h = T::epsilon().cbrt() * (T::one() + y.abs());
    Ok((slice.value(t, y + h)? - slice.value(t, y - h)?) / (h + h))
}

/// Solves `slice(t, x) = y` for the root nearest to `guess`.
fn track_root<T: Scalar, S: SliceMap<T> + ?Sized>(
    slice: &S,
    t: T,
    y: T,
    guess: T,
    xtol: T,
    newton_steps: usize,
) -> Result<T> {
    let f = |x: T| slice.value(t, x).map(|v| v - y);
    let f0 = f(guess)?;
    let root = if f0 == T::zero() {
        guess
    } else {
        let mut w = T::of(1e-3) * (T::one() + guess.abs());
        let mut found = None;
        for _ in 0..64 {
            for side in [guess + w, guess - w] {
                if let Ok(fs) = f(side) {
                    if fs.signum() != f0.signum() || fs == T::zero() {
                        found = Some(side);
                        break;
                    }
                }
            }
            if found.is_some() {
                break;
            }
            w = w + w;
        }
        let Some(other) = found else {
            return Err(Error::NoSignChange {
                lo: (guess - w).as_f64(),
                hi: (guess + w).as_f64(),
            });
        };
        bisect(f, guess, other, xtol)?
    };
    let (lo, hi) = (root - T::one(), root + T::one());
    Ok(newton_polish(f, |x| slice_dy(slice, t, x), root, lo, hi, newton_steps))
}

fn scan_brackets<T: Scalar, S: SliceMap<T> + ?Sized>(slice: &S, t: T, y: T, lo: T, hi: T, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for k in 0..n {
        let x = lo + (hi - lo) * T::of(k as f64 / (n - 1) as f64);
        match slice.value(t, x).map(|v| v - y) {
            Ok(v) if v.is_finite() => {
                if let Some((px, pv)) = prev {
                    if v == T::zero() || (pv != T::zero() && v.signum() != pv.signum()) {
                        out.push((px.as_f64(), x.as_f64()));
                    }
                }
                prev = Some((x, v));
            }
            _ => prev = None,
        }
    }
    out
}
