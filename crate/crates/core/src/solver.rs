//! Bracketed Newton iteration for strictly increasing scalar functions.
//!
//! Each iteration proposes a Newton step from the current iterate. The step is
//! accepted only when it lands strictly inside the current bracket; otherwise
//! the bracket midpoint is taken. The bracket shrinks on every iteration from
//! the sign of `f` at the new iterate, so the method can never leave the
//! interval that holds the root.

/// Outcome of a successful solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: u32,
}

/// Configuration for [`solve_increasing`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Terminate once the last update is below `relative * |x|`.
    pub relative: f64,
    pub max_iterations: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-12,
            max_iterations: 200,
        }
    }
}

/// Finds the root of a strictly increasing `f` on `[lo, hi]`, given
/// `f(lo) <= 0 <= f(hi)`. `f` returns the pair `(f(x), f'(x))`.
///
/// Returns `None` when the iteration limit is hit.
pub fn solve_increasing<F>(f: F, mut lo: f64, mut hi: f64, tol: Tolerance) -> Option<Root>
where
    F: Fn(f64) -> (f64, f64),
{
    debug_assert!(lo < hi);
    let mut x = 0.5 * (lo + hi);
    for iteration in 1..=tol.max_iterations {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Some(Root {
                x,
                iterations: iteration,
            });
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };

        let step = (next - x).abs();
        x = next;
        if step <= tol.relative * x.abs() || hi - lo <= tol.relative * x.abs() {
            return Some(Root {
                x,
                iterations: iteration,
            });
        }
    }
    None
}
