//! Digamma function, the bias-correction term of the kNN entropy estimator.

/// Euler-Mascheroni constant, psi(1) = -EULER_GAMMA.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Digamma function psi(x) for x > 0.
///
/// Shifts the argument up with psi(x) = psi(x+1) - 1/x until x >= 6, then
/// evaluates the asymptotic series truncated after the x^-12 term. The first
/// neglected term at x = 6 is about 1e-12, so the result is accurate to
/// better than 1e-10 absolute over the whole domain.
///
/// Panics if x <= 0 (callers pass neighbor counts and sample sizes, which are
/// always positive).
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires x > 0, got {x}");
    let mut shift = 0.0;
    let mut z = x;
    while z < 6.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // psi(z) ~ ln z - 1/(2z) - sum_{m>=1} B_{2m} / (2m z^{2m})
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    shift + z.ln() - 0.5 * inv - tail
}
