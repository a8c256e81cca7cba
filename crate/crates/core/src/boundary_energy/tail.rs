//! `Σ_{j≥0} (q + j)^{−α}` with a certified error bound.
//!
//! The first `M` terms are summed directly; the remainder from `K = q + M`
//! on is the Euler-Maclaurin expansion
//!
//! ```text
//! Σ_{k≥K} k^{−α} = K^{1−α}/(α−1) + K^{−α}/2
//!                 + Σ_{m=1}^{p} B_{2m}/(2m)! · α(α+1)…(α+2m−2) · K^{−α−2m+1} + R_p
//! ```
//!
//! with `|R_p| ≤ |B_{2p}|/(2p)! · α(α+1)…(α+2p−2) · K^{−α−2p+1}`, which holds
//! because every derivative of `x^{−α}` is monotone on `[K, ∞)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::compensated_sum;

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-8;

/// `B_{2m} / (2m)!` for `m = 1..=6`.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSum {
    pub alpha: f64,
    pub offset: u64,
    pub value: f64,
    pub error_bound: f64,
    /// Number of directly summed terms.
    pub window: u64,
}

/// Euler-Maclaurin tail from `k` on, with its remainder bound.
fn euler_maclaurin_tail(alpha: f64, k: f64) -> (f64, f64) {
    let lead = k.powf(1.0 - alpha) / (alpha - 1.0) + 0.5 * k.powf(-alpha);
    let mut rising = alpha; // α(α+1)…(α+2m−2)
    let mut power = k.powf(-alpha - 1.0);
    let inv_k2 = 1.0 / (k * k);
    let mut corrections = 0.0;
    let mut last = 0.0;
    for (m, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if m > 0 {
            let a = alpha + (2 * m) as f64;
            rising *= (a - 1.0) * a;
            power *= inv_k2;
        }
        last = coeff * rising * power;
        corrections += last;
    }
    (lead + corrections, last.abs())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::DivergentSum { alpha })
    }
}

/// Tail sum with exactly `window` direct terms.
pub fn tail_sum_with_window(alpha: f64, q: u64, window: u64) -> Result<TailSum> {
    check_alpha(alpha)?;
    if q == 0 {
        return Err(Error::invalid("q", q, "a positive offset"));
    }
    let direct = compensated_sum((0..window).map(|j| ((q + j) as f64).powf(-alpha)));
    let (tail, remainder) = euler_maclaurin_tail(alpha, (q + window) as f64);
    let value = direct + tail;
    let rounding = 8.0 * f64::EPSILON * value.abs();
    Ok(TailSum {
        alpha,
        offset: q,
        value,
        error_bound: remainder + rounding,
        window,
    })
}

/// Tail sum accurate to `eps`, using the smallest window that achieves it.
///
/// When `eps` is below what double precision can deliver the returned
/// `error_bound` exceeds `eps`; it is always sound.
pub fn tail_sum(alpha: f64, q: u64, eps: f64) -> Result<TailSum> {
    check_alpha(alpha)?;
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", eps, "a positive tolerance"));
    }
    // No point asking for more than double precision of the value.
    let qf = q as f64;
    let scale = qf.powf(1.0 - alpha) / (alpha - 1.0) + qf.powf(-alpha);
    let eps = eps.max(f64::EPSILON * scale);
    // The remainder bound at K is C·K^{−α−11}; solve for K.
    let (_, at_one) = euler_maclaurin_tail(alpha, 1.0);
    let k_needed = (at_one / eps).powf(1.0 / (alpha + 11.0)).ceil().max(1.0) as u64;
    let window = k_needed.saturating_sub(q);
    tail_sum_with_window(alpha, q, window)
}

/// Hurwitz zeta `ζ(α, q)` at integer `q ≥ 1`, to double precision.
pub fn hurwitz_zeta(alpha: f64, q: u64) -> Result<f64> {
    Ok(tail_sum(alpha, q, 1e-300)?.value)
}
