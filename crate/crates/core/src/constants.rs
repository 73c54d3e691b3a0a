//! Constants of the zero-free regions used throughout the crate.

use std::sync::OnceLock;

/// Operator-norm radius around the identity inside which the mixed
/// discriminant of `I + z_k Q_k` has no zeros for `|z_k| <= 1`.
pub const GAMMA0: f64 = 0.045;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityConstants {
    pub gamma0: f64,
    pub delta: f64,
    pub tau: f64,
    /// `1 - delta - tau - delta * tau`
    pub mu: f64,
    /// Positive root of `α e^{1+α} = 1`.
    pub alpha0: f64,
}

impl StabilityConstants {
    fn compute() -> Self {
        let delta = 0.045;
        let tau = 0.4;
        Self {
            gamma0: GAMMA0,
            delta,
            tau,
            mu: 1.0 - delta - tau - delta * tau,
            alpha0: solve_alpha0(),
        }
    }

    /// `α0 / 4`: radius factor for the doubly stochastic regime (`|z| < α0 n / 4`).
    pub fn ds_radius_factor(&self) -> f64 {
        self.alpha0 / 4.0
    }
}

/// Bisection on `α e^{1+α} − 1` over `[0, 1]` down to an interval width of 1e-14.
fn solve_alpha0() -> f64 {
    let f = |a: f64| a * (1.0 + a).exp() - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Process-wide constants, computed on first use.
pub fn constants() -> &'static StabilityConstants {
    static CELL: OnceLock<StabilityConstants> = OnceLock::new();
    CELL.get_or_init(StabilityConstants::compute)
}
