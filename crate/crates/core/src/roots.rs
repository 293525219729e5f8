//! Safeguarded Newton iteration on a bracketing interval.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
///
/// `f_df` returns the function value and its derivative. Newton steps that
/// leave the current bracket, or that come from a non-positive-slope region
/// of a function expected to be increasing, fall back to bisection.
pub fn newton_bisect<F>(
    mut f_df: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let (flo, _) = f_df(lo);
    let (fhi, _) = f_df(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Root(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo:e}, f(hi) = {fhi:e}"
        )));
    }
    let increasing = fhi > flo;

    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f_df(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let tol = xtol * (1.0 + next.abs());
        if (next - x).abs() <= tol || (hi - lo) <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Root(format!(
        "no convergence after {max_iter} iterations, bracket [{lo}, {hi}]"
    )))
}
