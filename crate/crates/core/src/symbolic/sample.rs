//! Seeded random expressions for self-checks of the differentiator and printer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::Expr;
use super::map::SmoothMap;
use crate::error::Result;
use crate::verify::{Tracker, VerificationReport};

fn one_plus_sq(e: Expr) -> Expr {
    Expr::add(Expr::constant(1.0), Expr::powf(e, 2.0))
}

/// A random expression in `vars` that is smooth on all of ℝⁿ: divisions,
/// roots and logarithms only ever see arguments of the form `1 + e²`.
pub fn random_smooth_expr<R: Rng>(rng: &mut R, vars: &[&str], depth: usize) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return if vars.is_empty() || rng.random_bool(0.3) {
            Expr::constant(rng.random_range(-12..=12) as f64 / 4.0)
        } else {
            Expr::var(vars[rng.random_range(0..vars.len())])
        };
    }
    let a = random_smooth_expr(rng, vars, depth - 1);
    match rng.random_range(0..12) {
        0 => Expr::add(a, random_smooth_expr(rng, vars, depth - 1)),
        1 => Expr::sub(a, random_smooth_expr(rng, vars, depth - 1)),
        2 => Expr::mul(a, random_smooth_expr(rng, vars, depth - 1)),
        3 => Expr::div(a, one_plus_sq(random_smooth_expr(rng, vars, depth - 1))),
        4 => Expr::powf(a, rng.random_range(2..=3) as f64),
        5 => Expr::sin(a),
        6 => Expr::cos(a),
        7 => Expr::tanh(a),
        8 => Expr::exp(Expr::tanh(a)),
        9 => Expr::sqrt(one_plus_sq(a)),
        10 => Expr::log(one_plus_sq(a)),
        _ => Expr::neg(a),
    }
}

/// Compares exact partial derivatives of `cases` random expressions in
/// `(x, y)` with Richardson-extrapolated central differences, scaled by
/// `max(1, |exact|)`. Printer round-trip failures count as deviation 1.
pub fn derivative_check(seed: u64, cases: usize, tol: f64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = Tracker::new();
    let mut round_trip_failures = 0;
    for k in 0..cases {
        let e = random_smooth_expr(&mut rng, &["x", "y"], 4);
        let var = if k % 2 == 0 { "x" } else { "y" };
        let p = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
        let map = SmoothMap::new(vec!["x".into(), "y".into()], vec![e.clone()])?;
        let idx = usize::from(var == "y");
        let at = |h: f64| -> Result<f64> {
            let mut q = p;
            q[idx] += h;
            map.eval_scalar(&q)
        };
        let central = |h: f64| -> Result<f64> { Ok((at(h)? - at(-h)?) / (2.0 * h)) };
        let exact: f64 = map.partial(var).eval_scalar(&p)?;
        let approx = (4.0 * central(5e-4)? - central(1e-3)?) / 3.0;
        let reparsed: Expr = e.to_string().parse()?;
        let dev = if reparsed != e {
            round_trip_failures += 1;
            1.0
        } else {
            (exact - approx).abs() / exact.abs().max(1.0)
        };
        tracker.record(dev, &p, &[exact, approx]);
    }
    let mut report = tracker.finish("derivative-vs-difference", tol, format!("{cases} random expressions, seed {seed}"));
    report.notes.push(format!("{round_trip_failures} printer round-trip failures"));
    Ok(report)
}
