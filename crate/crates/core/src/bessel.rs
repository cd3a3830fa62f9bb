//! Bessel functions of the first kind, evaluated for all integer orders at
//! once by Miller's backward recurrence.
//!
//! The kick transform needs the whole family `J_0(P) .. J_K(P)` down to
//! machine-negligible magnitude, so a single downward sweep normalized with
//! `J_0^2 + 2 * sum_k J_k^2 = 1` is both faster and more uniformly accurate
//! than per-order evaluations.

/// Magnitude below which a Bessel coefficient is treated as exactly zero
/// when banding the kick operator.
pub const BAND_CUTOFF: f64 = 1e-16;

/// `J_k(x)` for `k = 0..=k_max`.
///
/// Uses the downward three-term recurrence started well above `k_max` with a
/// seed value, then rescales with the sum rule `J_0^2 + 2 sum J_k^2 = 1`.
/// Negative arguments are mapped through `J_k(-x) = (-1)^k J_k(x)`.
pub fn jn_array(x: f64, k_max: usize) -> Vec<f64> {
    assert!(x.is_finite(), "Bessel argument must be finite");
    if x == 0.0 {
        let mut out = vec![0.0; k_max + 1];
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // Start high enough that the seed error has decayed away by k_max.
    let start = k_max + 32 + (2.0 * ax.cbrt()).ceil() as usize + (ax as usize) / 8;
    let mut vals = vec![0.0_f64; start + 2];
    vals[start + 1] = 0.0;
    // J_start(ax) > 0 in the monotone tail above the turning point, so the
    // downward sweep keeps the true overall sign.
    vals[start] = 1e-30;
    for k in (1..=start).rev() {
        let next = (2.0 * k as f64 / ax) * vals[k] - vals[k + 1];
        vals[k - 1] = next;
        if next.abs() > 1e150 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-150;
            }
        }
    }
    let mut sum = vals[0] * vals[0];
    for v in &vals[1..] {
        sum += 2.0 * v * v;
    }
    let scale = 1.0 / sum.sqrt();
    let mut out: Vec<f64> = vals[..=k_max.min(start)].iter().map(|v| v * scale).collect();
    out.resize(k_max + 1, 0.0);
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_1(x)`, convenience wrapper for the single-kick orientation estimate.
pub fn j1(x: f64) -> f64 {
    jn_array(x, 1)[1]
}

/// Number of orders with `|J_k(p)| >= BAND_CUTOFF`; the half-bandwidth of the
/// kick operator for strength `p`.
pub fn band_limit(p: f64) -> usize {
    let ap = p.abs();
    if ap == 0.0 {
        return 0;
    }
    let guess = (ap + 14.0 * ap.cbrt() + 24.0).ceil() as usize;
    let j = jn_array(ap, guess);
    let mut k = guess;
    while k > 0 && j[k].abs() < BAND_CUTOFF {
        k -= 1;
    }
    k
}
