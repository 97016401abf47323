//! Binomial intervals and normal-approximation z-scores.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // rounding can push an endpoint past p when k is 0 or n
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// `(k - n p0) / sqrt(n p0 (1 - p0))`; `None` when the null is degenerate.
pub fn proportion_z(k: u64, n: u64, p0: f64) -> Option<f64> {
    let var = n as f64 * p0 * (1.0 - p0);
    (var > 0.0).then(|| (k as f64 - n as f64 * p0) / var.sqrt())
}

/// z-score of an observed ratio `k_trivial / k_class` against `expected`.
///
/// Conditional on a trial landing in either class, it is trivial with
/// probability `E / (1 + E)` under the null, so `k_trivial` is binomial
/// given `k_trivial + k_class`.
pub fn ratio_z(k_trivial: u64, k_class: u64, expected: f64) -> Option<f64> {
    if !(expected > 0.0) {
        return None;
    }
    let pi = expected / (1.0 + expected);
    proportion_z(k_trivial, k_trivial + k_class, pi)
}

/// Pooled two-sample z for equal proportions.
pub fn two_sample_z(k1: u64, n1: u64, k2: u64, n2: u64) -> Option<f64> {
    if n1 == 0 || n2 == 0 {
        return None;
    }
    let (a, b) = (n1 as f64, n2 as f64);
    let pooled = (k1 + k2) as f64 / (a + b);
    let var = pooled * (1.0 - pooled) * (1.0 / a + 1.0 / b);
    (var > 0.0).then(|| (k1 as f64 / a - k2 as f64 / b) / var.sqrt())
}

/// `(mean - expected) / sqrt(variance / k)`.
pub fn mean_z(mean: f64, variance: f64, k: u64, expected: f64) -> Option<f64> {
    let se = (variance / k as f64).sqrt();
    (se > 0.0).then(|| (mean - expected) / se)
}
