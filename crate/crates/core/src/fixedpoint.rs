//! Scalar fixed point `lhs(r) = C' - r` for a nondecreasing `lhs` with `lhs(0) = 0`.
//!
//! `g(r) = lhs(r) - (C' - r)` is strictly increasing with slope at least one,
//! `g(0) = -C' <= 0` and `g(C') = lhs(C') >= 0`, so `[0, C']` always brackets
//! the unique root and plain bisection suffices. Bisection runs until the
//! bracket collapses to adjacent floats, so nearby budgets get consistently
//! accurate roots; the residual there must be within `RESIDUAL_TOL`.

use crate::error::{Error, Result};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    pub r_star: f64,
    /// `lhs(r*) - (C' - r*)`.
    pub residual: f64,
    /// `lhs(r*)`, which is the achieved rate.
    pub value: f64,
    pub iterations: usize,
}

/// Bisection for the root of `lhs(r) - (cprime - r)` on `[0, cprime]`.
pub fn solve_fixed_point<F>(mut lhs: F, cprime: f64) -> Result<FixedPointResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(cprime >= 0.0 && cprime.is_finite()) {
        return Err(Error::domain("C'", cprime, "finite and >= 0"));
    }
    let mut g = |r: f64| -> Result<(f64, f64)> {
        let value = lhs(r)?;
        Ok((value - (cprime - r), value))
    };

    let (g_lo, v_lo) = g(0.0)?;
    if g_lo.abs() <= RESIDUAL_TOL {
        return Ok(FixedPointResult {
            r_star: 0.0,
            residual: g_lo,
            value: v_lo,
            iterations: 0,
        });
    }
    let (g_hi, v_hi) = g(cprime)?;
    if g_lo > 0.0 || g_hi < 0.0 {
        return Err(Error::Bracket { g_lo, g_hi });
    }
    if g_hi <= RESIDUAL_TOL {
        return Ok(FixedPointResult {
            r_star: cprime,
            residual: g_hi,
            value: v_hi,
            iterations: 0,
        });
    }

    let (mut lo, mut hi) = (0.0, cprime);
    let mut residual = g_hi;
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let (gm, value) = g(mid)?;
        residual = gm;
        // Interval collapsed to adjacent floats: the residual is as small as
        // the representation of r allows.
        if gm == 0.0 || mid <= lo || mid >= hi {
            // `C' - r` itself carries rounding of order ulp(C').
            if gm.abs() > RESIDUAL_TOL.max(8.0 * f64::EPSILON * cprime) {
                return Err(Error::NonConvergence {
                    solver: "fixed-point bisection",
                    iterations: it,
                    residual: gm,
                });
            }
            return Ok(FixedPointResult {
                r_star: mid,
                residual: gm,
                value,
                iterations: it,
            });
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        solver: "fixed-point bisection",
        iterations: MAX_BISECTIONS,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_capacity_gives_zero() {
        let res = solve_fixed_point(|_| Ok(0.0), 0.0).unwrap();
        assert_eq!(res.r_star, 0.0);
        assert_eq!(res.residual, 0.0);
    }

    #[test]
    fn zero_lhs_puts_root_at_capacity() {
        let res = solve_fixed_point(|_| Ok(0.0), 4.0).unwrap();
        assert_eq!(res.r_star, 4.0);
        assert_eq!(res.residual, 0.0);
    }

    #[test]
    fn linear_lhs_has_known_root() {
        // lhs = r/2 -> r/2 = 3 - r -> r = 2
        let res = solve_fixed_point(|r| Ok(0.5 * r), 3.0).unwrap();
        assert_abs_diff_eq!(res.r_star, 2.0, epsilon = 1e-9);
        assert!(res.residual.abs() <= RESIDUAL_TOL);
    }

    #[test]
    fn saturating_lhs_matches_scalar_closed_form() {
        // lhs(r) = log2(1 + P(1 - 2^-r)) has the closed-form fixed point
        // 2^{C'-r} = (1+P)/(1+P 2^-C').
        let (p, c) = (20.0_f64, 3.0_f64);
        let res = solve_fixed_point(|r| Ok((1.0 + p * (1.0 - (-r).exp2())).log2()), c).unwrap();
        let expected = ((1.0 + p) / (1.0 + p * (-c).exp2())).log2();
        assert_abs_diff_eq!(c - res.r_star, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(res.value, expected, epsilon = 1e-9);
    }

    #[test]
    fn huge_capacity_still_converges() {
        let res = solve_fixed_point(|r| Ok(5.0 * (1.0 - (-r).exp2())), 1e6).unwrap();
        assert!(res.residual.abs() < 1e-9);
        assert_abs_diff_eq!(1e6 - res.r_star, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn bracket_violation_reported() {
        // lhs(0) > 0 breaks the precondition
        assert!(matches!(
            solve_fixed_point(|_| Ok(10.0), 4.0),
            Err(Error::Bracket { .. })
        ));
        // decreasing lhs that ends below zero
        assert!(matches!(
            solve_fixed_point(|r| Ok(-r), 4.0),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn rejects_infinite_capacity() {
        assert!(solve_fixed_point(|_| Ok(0.0), f64::INFINITY).is_err());
    }

    #[test]
    fn propagates_lhs_errors() {
        let err = solve_fixed_point(|_| Err(Error::InfiniteNoise), 2.0).unwrap_err();
        assert_eq!(err, Error::InfiniteNoise);
    }
}
