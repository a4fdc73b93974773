//! Safeguarded Newton–bisection for increasing scalar functions.

/// Finds a root of an increasing `f` inside `[lo, hi]`, given `f(lo) <= 0 <= f(hi)`.
///
/// `f` returns the value and the derivative. Newton steps that leave the
/// current bracket are replaced by bisection. Returns `None` if `max_iter`
/// iterations pass without `|f| <= tol`; a bracket that collapses to adjacent
/// floats returns the better endpoint.
pub(crate) fn newton_bisect<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    debug_assert!(lo <= hi);
    let mut x = start.clamp(lo, hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return None;
        }
        if fx.abs() <= tol {
            return Some(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi <= lo.next_up() {
            let (flo, fhi) = (f(lo).0.abs(), f(hi).0.abs());
            return Some(if flo <= fhi { lo } else { hi });
        }
        let newton = x - fx / dfx;
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = newton_bisect(
            |u| (u * u * u - 2.0, 3.0 * u * u),
            0.0,
            2.0,
            0.0,
            1e-14,
            200,
        )
        .unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn bad_newton_start_falls_back_to_bisection() {
        // derivative vanishes at the start point
        let r = newton_bisect(
            |u| (u * u * u - 1.0, 3.0 * u * u),
            -3.0,
            3.0,
            0.0,
            1e-14,
            200,
        )
        .unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn collapsed_bracket_returns_endpoint() {
        let r = newton_bisect(|u| (u - 0.1, 1.0), 0.1, 0.1, 0.1, 0.0, 10).unwrap();
        assert_eq!(r, 0.1);
    }
}
