//! Log-space numerics.

/// Finite stand-in for log(0) so that scores stay totally ordered under
/// plain float comparison.
pub const LOG_ZERO: f64 = -1e12;

/// log(sum(exp(v))) with the usual max shift.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        // all -inf (empty sum) or a +inf dominates
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
