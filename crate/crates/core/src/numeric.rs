//! Scalar root finding and extremum search used across the checks.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bisection on a sign change of `f` over `[lo, hi]` down to width `xtol`.
pub fn bisect<T: Scalar>(
    mut f: impl FnMut(T) -> Result<T>,
    lo: T,
    hi: T,
    xtol: T,
) -> Result<T> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    let two = T::one() + T::one();
    for _ in 0..200 {
        let m = a + (b - a) / two;
        if b - a <= xtol || m <= a || m >= b {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == T::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(a + (b - a) / two)
}

/// A few Newton steps from `x`, rejecting iterates that leave `[lo, hi]`.
pub fn newton_polish<T: Scalar>(
    mut f: impl FnMut(T) -> Result<T>,
    mut df: impl FnMut(T) -> Result<T>,
    mut x: T,
    lo: T,
    hi: T,
    steps: usize,
) -> T {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    for _ in 0..steps {
        let (Ok(fx), Ok(dfx)) = (f(x), df(x)) else {
            break;
        };
        if dfx == T::zero() || !dfx.is_finite() {
            break;
        }
        let next = x - fx / dfx;
        if !(next >= lo && next <= hi) || next == x {
            break;
        }
        let improved = f(next).map(|fn_| fn_.abs() <= fx.abs()).unwrap_or(false);
        if !improved {
            break;
        }
        x = next;
    }
    x
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
pub fn golden_min<T: Scalar>(mut f: impl FnMut(T) -> Result<T>, lo: T, hi: T, xtol: T) -> Result<(T, T)> {
    let invphi = T::of((5f64.sqrt() - 1.0) / 2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d)?;
        }
    }
    let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
    let (fa, fb) = (f(lo)?, f(hi)?);
    Ok([(lo, fa), (hi, fb)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best }))
}

/// Two distinct arguments with (numerically) equal images, found at a fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldPair<T> {
    pub first: T,
    pub second: T,
    pub critical: T,
}

/// Sign of `x` with zeros mapped to `0`.
fn sign<T: Scalar>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

/// Locates a fold of the 1-D map `m` along the increasing samples `xs`.
///
/// A fold is a strict sign change of `dm` between two samples (zeros in
/// between are skipped). The critical point is bracketed by bisection and a
/// collision pair is built on both sides of it: the sample whose value lies
/// closer to the extremum, and the point on the opposite side where `m`
/// attains the same value. Returns `None` when `dm` keeps its sign.
pub fn fold_pair<T: Scalar>(
    m: &dyn Fn(T) -> Result<T>,
    dm: &dyn Fn(T) -> Result<T>,
    xs: &[T],
) -> Option<FoldPair<T>> {
    let mut last: Option<(T, i8)> = None;
    for &x in xs {
        let Ok(d) = dm(x) else { continue };
        if !d.is_finite() {
            continue;
        }
        let s = sign(d);
        if s == 0 {
            continue;
        }
        if let Some((xl, sl)) = last {
            if sl != s {
                if let Some(pair) = pair_at_fold(m, dm, xl, x) {
                    return Some(pair);
                }
            }
        }
        last = Some((x, s));
    }
    None
}

fn pair_at_fold<T: Scalar>(
    m: &dyn Fn(T) -> Result<T>,
    dm: &dyn Fn(T) -> Result<T>,
    left: T,
    right: T,
) -> Option<FoldPair<T>> {
    let tiny = T::epsilon() * (T::one() + left.abs().max(right.abs()));
    let critical = bisect(&dm, left, right, tiny).ok()?;
    let (ml, mr, mc) = (m(left).ok()?, m(right).ok()?, m(critical).ok()?);
    // The sample closer in value to the extremum fixes the level.
    let (anchor, level, lo, hi) = if (ml - mc).abs() <= (mr - mc).abs() {
        (left, ml, critical, right)
    } else {
        (right, mr, left, critical)
    };
    let other = bisect(|x| m(x).map(|v| v - level), lo, hi, tiny).ok()?;
    if other == anchor {
        return None;
    }
    let (first, second) = if anchor < other { (anchor, other) } else { (other, anchor) };
    Some(FoldPair {
        first,
        second,
        critical,
    })
}
