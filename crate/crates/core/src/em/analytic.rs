//! Closed-form mutual inductance of two misaligned coils.
//!
//! Each turn pair is treated as two circular filaments and integrated with
//!
//! ```text
//! M = (2 μ₀ / π) √(R₁ R₂) ∫₀^π [cos θ − (d/R₂) cos φ] Ψ(k) / (k V^{3/2}) dφ
//! α = R₂/R₁,  β = c/R₁,  ξ = β − α cos φ sin θ
//! V = √(1 − cos²φ sin²θ − 2 (d/R₂) cos φ cos θ + d²/R₂²)
//! k² = 4αV / ((1 + αV)² + ξ²),  Ψ(k) = (1 − k²/2) K(k) − E(k)
//! ```
//!
//! `V R₂` is the distance of the secondary filament point from the primary
//! axis and `ξ R₁` its height above the primary plane, which fixes the pose
//! convention documented on [`Placement`]. The radius entering `V` alongside
//! `d` is the secondary's. A rectangular turn `a × b` enters as the circle of
//! equal area, `R = √(ab/π)`, which keeps the dipole moment exact; the
//! half-side radius underestimates square-loop coupling by 20-60%.

use super::elliptic::psi;
use super::quadrature::integrate;
use super::{EmError, MU_0};
use crate::geometry::{CoilSpec, Placement};
use std::f64::consts::PI;

/// Quadrature tolerance on the φ integral.
pub const REL_TOL: f64 = 1e-12;

/// Radius of the circle with the same area as a rectangular turn.
pub fn equivalent_radius(side_a: f64, side_b: f64) -> f64 {
    (side_a * side_b / PI).sqrt()
}

/// Closest approach between the secondary circle and the primary circle,
/// minimized over the secondary's parameter φ (coarse scan, then golden section).
pub fn closest_approach(r1: f64, r2: f64, pose: &Placement) -> f64 {
    let (d, c, theta) = (pose.lateral_d, pose.axial_c, pose.angle_theta);
    let (sin_t, cos_t) = theta.sin_cos();
    // Secondary point in the primary frame, for φ over the full circle.
    let dist = |phi: f64| {
        let (sp, cp) = phi.sin_cos();
        let x = d - r2 * cp * cos_t;
        let y = r2 * sp;
        let z = c + r2 * cp * sin_t;
        let rho = (x * x + y * y).sqrt();
        ((rho - r1).powi(2) + z * z).sqrt()
    };
    const SCAN: usize = 720;
    let step = 2.0 * PI / SCAN as f64;
    let best = (0..SCAN)
        .map(|i| i as f64 * step)
        .min_by(|a, b| dist(*a).total_cmp(&dist(*b)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(0.5 * (lo + hi)).min(dist(best))
}

/// Mutual inductance between single circular filaments of radius `r1`
/// (primary) and `r2` (secondary) whose wires must stay `clearance` apart.
pub fn filament_pair(r1: f64, r2: f64, pose: &Placement, clearance: f64) -> Result<f64, EmError> {
    let gap = closest_approach(r1, r2, pose);
    if gap < clearance {
        return Err(EmError::Singular(format!(
            "filaments {gap:.3e} m apart, clearance {clearance:.3e} m"
        )));
    }
    let (d, c, theta) = (pose.lateral_d, pose.axial_c, pose.angle_theta);
    let alpha = r2 / r1;
    let beta = c / r1;
    let (sin_t, cos_t) = theta.sin_cos();
    let d_over = d / r2;

    let integrand = |phi: f64| -> Result<f64, EmError> {
        let cos_p = phi.cos();
        let v2 = 1.0 - cos_p * cos_p * sin_t * sin_t - 2.0 * d_over * cos_p * cos_t + d_over * d_over;
        if !(v2 > 0.0) {
            return Err(EmError::Singular(format!(
                "V <= 0 at phi = {phi:.6} (secondary filament crosses the primary axis)"
            )));
        }
        let v = v2.sqrt();
        let xi = beta - alpha * cos_p * sin_t;
        let av = alpha * v;
        let denom = (1.0 + av) * (1.0 + av) + xi * xi;
        let m = 4.0 * av / denom;
        let mc = ((1.0 - av) * (1.0 - av) + xi * xi) / denom;
        if !(mc > 0.0) {
            return Err(EmError::Singular(format!(
                "k >= 1 at phi = {phi:.6} (filaments intersect)"
            )));
        }
        let k = m.sqrt();
        Ok((cos_t - d_over * cos_p) * psi(m, mc) / (k * v * v.sqrt()))
    };
    let q = integrate(integrand, 0.0, PI, REL_TOL, 0.0)?;
    Ok(2.0 * MU_0 / PI * (r1 * r2).sqrt() * q.value)
}

/// Mutual inductance of two multi-turn coils, summed over turn pairs.
///
/// Returns the magnitude (sign depends only on winding sense).
pub fn mutual_inductance_analytic(
    coil1: &CoilSpec,
    coil2: &CoilSpec,
    pose: &Placement,
) -> Result<f64, EmError> {
    check_inputs(coil1, coil2, pose)?;
    let clearance = coil1.wire_radius + coil2.wire_radius;
    let mut total = 0.0;
    for (a1, b1) in coil1.turn_sides_iter() {
        let r1 = equivalent_radius(a1, b1);
        for (a2, b2) in coil2.turn_sides_iter() {
            total += filament_pair(r1, equivalent_radius(a2, b2), pose, clearance)?;
        }
    }
    Ok(total.abs())
}

fn check_inputs(coil1: &CoilSpec, coil2: &CoilSpec, pose: &Placement) -> Result<(), EmError> {
    let mut v = Vec::new();
    coil1.check("coil1", &mut v);
    coil2.check("coil2", &mut v);
    pose.check("pose", &mut v);
    match v.first() {
        None => Ok(()),
        Some(first) => Err(EmError::Invalid(first.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::filament::mutual_inductance_filament;
    use crate::geometry::AWG18_RADIUS;

    fn loop10() -> CoilSpec {
        CoilSpec::square(0.10, 1, 0.002, AWG18_RADIUS)
    }

    #[test]
    fn coaxial_loops_match_maxwell_formula() {
        // Maxwell: M = μ₀ √(ab) [(2/k − k) K − (2/k) E], k² = 4ab/((a+b)² + c²)
        let (a, b, c) = (0.05, 0.04, 0.03);
        let m2: f64 = 4.0 * a * b / ((a + b) * (a + b) + c * c);
        let k = m2.sqrt();
        let kk = crate::em::elliptic_k(k).unwrap();
        let ee = crate::em::elliptic_e(k).unwrap();
        let maxwell = MU_0 * (a * b).sqrt() * ((2.0 / k - k) * kk - 2.0 / k * ee);
        let ours = filament_pair(a, b, &Placement::coaxial(c), 0.0).unwrap();
        assert!(((ours - maxwell) / maxwell).abs() < 1e-11, "{ours} {maxwell}");
    }

    #[test]
    fn vanishes_at_distance() {
        let coil = loop10();
        let near = mutual_inductance_analytic(&coil, &coil, &Placement::coaxial(0.05)).unwrap();
        let far = mutual_inductance_analytic(&coil, &coil, &Placement::coaxial(10.0)).unwrap();
        assert!(far < 1e-3 * near, "{far} {near}");
    }

    #[test]
    fn reciprocity_for_parallel_poses() {
        let c1 = CoilSpec::bench_relay();
        let c2 = CoilSpec::rectangle(0.075, 0.045, 4, 0.001, 1e-4);
        for pose in [Placement::coaxial(0.03), Placement::new(0.04, 0.05, 0.0)] {
            let inv = pose.inverse().unwrap();
            let m12 = mutual_inductance_analytic(&c1, &c2, &pose).unwrap();
            let m21 = mutual_inductance_analytic(&c2, &c1, &inv).unwrap();
            assert!(((m12 - m21) / m12).abs() < 1e-12, "{m12} {m21}");
        }
    }

    #[test]
    fn single_turn_coaxial_golden_against_filament() {
        let coil = loop10();
        let pose = Placement::coaxial(0.05);
        let analytic = mutual_inductance_analytic(&coil, &coil, &pose).unwrap();
        let oracle = mutual_inductance_filament(&coil, &coil, &pose, 64).unwrap();
        // frozen filament value for two 10 cm single-turn squares 5 cm apart
        assert!((oracle - 3.2228e-8).abs() < 0.0005e-8, "{oracle}");
        assert!(((analytic - oracle) / oracle).abs() < 0.05);
    }

    #[test]
    fn axial_decay_is_strict() {
        let coil = CoilSpec::bench_relay();
        let mut prev = f64::INFINITY;
        for i in 1..=30 {
            let m = mutual_inductance_analytic(&coil, &coil, &Placement::coaxial(0.01 * i as f64))
                .unwrap();
            assert!(m < prev);
            prev = m;
        }
    }

    #[test]
    fn intersecting_circles_are_singular() {
        // secondary circle lies in the primary plane, crossing the primary filament
        let r = filament_pair(0.05, 0.05, &Placement::new(0.05, 0.0, 0.0), 1e-4);
        assert!(matches!(r, Err(EmError::Singular(_))), "{r:?}");
        // tilted circle threading the primary at one point
        let pose = Placement::new(0.0, 0.03, 60f64.to_radians());
        let gap = closest_approach(0.05, 0.05, &pose);
        assert!(gap < 0.05);
        let tilted = Placement::new(0.025, 0.05 * 60f64.to_radians().sin(), 60f64.to_radians());
        assert!(closest_approach(0.05, 0.05, &tilted) < 1e-9);
    }

    #[test]
    fn invalid_pose_rejected() {
        let coil = loop10();
        let r = mutual_inductance_analytic(&coil, &coil, &Placement::new(0.0, 0.05, 2.0));
        assert!(matches!(r, Err(EmError::Invalid(_))));
    }
}
