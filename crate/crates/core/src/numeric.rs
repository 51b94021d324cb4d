//! Scalar numerical primitives: bracketed root finding, golden-section
//! minimization and adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Bracket width at which bisection hands over to secant polishing.
const POLISH_WIDTH: f64 = 1e-3;
const MAX_ITER: usize = 200;

/// A root located by [`bracketed_root`].
#[derive(Debug, Clone)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Width of the sign-change bracket after every iteration.
    pub bracket_widths: Vec<f64>,
}

/// Find a root of `f` on `[lo, hi]` with `|f(x)| < tol`.
///
/// Bisects until the bracket is narrower than `1e-3`, then polishes with secant
/// steps kept inside the bracket (a step that would leave it falls back to
/// bisection).
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, tol: f64, context: &'static str) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo.is_finite() && f_hi.is_finite()) {
        return Err(Error::NoConvergence {
            context,
            iterations: 0,
            residual: f64::NAN,
        });
    }
    if f_lo.abs() < tol {
        return Ok(Root { x: lo, residual: f_lo, iterations: 0, bracket_widths: vec![hi - lo] });
    }
    if f_hi.abs() < tol {
        return Ok(Root { x: hi, residual: f_hi, iterations: 0, bracket_widths: vec![hi - lo] });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { context, lo, hi, f_lo, f_hi });
    }

    let mut widths = vec![hi - lo];
    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    // The two most recent iterates drive the secant step.
    let mut prev = (lo, f_lo);
    let mut cur = (hi, f_hi);

    for iteration in 1..=MAX_ITER {
        let width = hi - lo;
        let mid = lo + 0.5 * width;
        let x = if width > POLISH_WIDTH || cur.1 == prev.1 {
            mid
        } else {
            let s = cur.0 - cur.1 * (cur.0 - prev.0) / (cur.1 - prev.1);
            if s > lo && s < hi && s.is_finite() {
                s
            } else {
                mid
            }
        };
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence { context, iterations: iteration, residual: fx });
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        widths.push(hi - lo);
        prev = cur;
        cur = (x, fx);

        if best.1.abs() < tol {
            return Ok(Root { x: best.0, residual: best.1, iterations: iteration, bracket_widths: widths });
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Err(Error::NoConvergence { context, iterations: widths.len() - 1, residual: best.1 })
}

/// Minimize a unimodal `f` on `[a, b]` by golden-section search down to width `tol`.
/// Returns `(x, f(x))`.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // Endpoints are candidates too: the minimum may sit on the boundary.
    let x = 0.5 * (a + b);
    [(x, f(x)), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|l, r| l.1.total_cmp(&r.1))
        .expect("non-empty")
}

const MAX_DEPTH: u32 = 50;

/// Integrate `f` over `[a, b]` by adaptive Simpson with absolute error below `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut achieved = 0.0;
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut achieved);
    if achieved > tol || !value.is_finite() {
        return Err(Error::Quadrature { requested: tol, achieved });
    }
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    achieved: &mut f64,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        *achieved += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, achieved)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, achieved)
}
