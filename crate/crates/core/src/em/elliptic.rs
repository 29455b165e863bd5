//! Complete elliptic integrals by the arithmetic-geometric mean.
//!
//! Arguments are the modulus `k` (not the parameter `m = k^2`). Internally the
//! complementary parameter `1 - k^2` is carried separately so callers that can
//! form it without cancellation keep full precision near `k -> 1`.

use super::EmError;
use std::f64::consts::FRAC_PI_2;

/// `K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)` for `0 ≤ k < 1`.
pub fn elliptic_k(k: f64) -> Result<f64, EmError> {
    if !(0.0..1.0).contains(&k) {
        return Err(EmError::Domain {
            function: "elliptic_K",
            argument: k,
        });
    }
    let (kk, _) = ke_complementary(k * k, (1.0 - k) * (1.0 + k));
    Ok(kk)
}

/// `E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ` for `0 ≤ k ≤ 1`.
pub fn elliptic_e(k: f64) -> Result<f64, EmError> {
    if !(0.0..=1.0).contains(&k) {
        return Err(EmError::Domain {
            function: "elliptic_E",
            argument: k,
        });
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let (_, e) = ke_complementary(k * k, (1.0 - k) * (1.0 + k));
    Ok(e)
}

/// `(K, E)` from the parameter `m = k²` and its complement `mc = 1 − m`.
///
/// `mc` must be positive.
pub(crate) fn ke_complementary(m: f64, mc: f64) -> (f64, f64) {
    debug_assert!(mc > 0.0);
    let mut a = 1.0;
    let mut b = mc.sqrt();
    // c_0^2 = m, weighted by 2^-1.
    let mut weight = 0.5;
    let mut sum = 0.5 * m;
    for _ in 0..64 {
        let a_next = 0.5 * (a + b);
        let c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = a_next;
        weight *= 2.0;
        let term = weight * c * c;
        sum += term;
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

/// `Ψ(k) = (1 − k²/2) K(k) − E(k)` from `m = k²` and `mc = 1 − m`.
///
/// The direct form loses `~1/m²` digits as `m -> 0`, so small `m` uses the
/// Maclaurin series, truncated where the next term is below 1e-14 relative.
pub(crate) fn psi(m: f64, mc: f64) -> f64 {
    if m < 1e-2 {
        const COEF: [f64; 7] = [
            1.0 / 16.0,
            3.0 / 64.0,
            75.0 / 2048.0,
            245.0 / 8192.0,
            6615.0 / 262_144.0,
            22869.0 / 1_048_576.0,
            1_288_287.0 / 67_108_864.0,
        ];
        let poly = COEF.iter().rev().fold(0.0, |acc, c| acc * m + c);
        FRAC_PI_2 * m * m * poly
    } else {
        let (k, e) = ke_complementary(m, mc);
        (1.0 - 0.5 * m) * k - e
    }
}
