//! Bracketed bisection for monotone scalar equations.
//!
//! Every defining equation in this crate is strictly monotone, so plain
//! bisection is unconditionally convergent. The solvers run until the bracket
//! cannot be split any further in `f64`, which is below any tolerance the
//! callers ask for.

const MAX_ITER: usize = 2_200;
const MAX_DOUBLINGS: usize = 1_100;

/// Root of a strictly increasing `f` on `[lo, hi]` with `f(lo) ≤ 0 ≤ f(hi)`.
///
/// Returns whichever end of the final bracket has the smaller `|f|`.
pub fn bisect_increasing<F>(mut lo: f64, mut hi: f64, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    for _ in 0..MAX_ITER {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.is_nan() || f_mid > 0.0 {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// Bracket for a strictly increasing `f` on `[floor, ∞)` with `f(floor) < 0`.
///
/// Starts at `start` and doubles until `f` turns nonnegative. Returns `None`
/// when `f` stays negative over the whole finite range of `f64`.
pub fn expand_upper<F>(floor: f64, start: f64, mut f: F) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut lo = floor;
    let mut hi = start.max(floor);
    for _ in 0..MAX_DOUBLINGS {
        if !hi.is_finite() {
            return None;
        }
        let v = f(hi);
        if v >= 0.0 {
            return Some((lo, hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    None
}

/// Bracket for a strictly increasing `f` on `(0, ∞)`, expanding geometrically
/// in both directions from `start`.
pub fn expand_both<F>(start: f64, mut f: F) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut lo = start;
    let mut hi = start;
    for _ in 0..MAX_DOUBLINGS {
        let f_lo = f(lo);
        let f_hi = f(hi);
        if f_lo <= 0.0 && f_hi >= 0.0 {
            return Some((lo, hi));
        }
        if f_lo > 0.0 {
            hi = lo;
            lo *= 0.5;
            if lo == 0.0 {
                return None;
            }
        } else {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return None;
            }
        }
    }
    None
}
